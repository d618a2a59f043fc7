//! Truncated formal power series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] of order `N` is known modulo `q^(N+1)` and stores all
//! `N + 1` coefficients densely. Binary operations truncate to the smaller
//! order of their operands, so a result never claims more precision than
//! its inputs carry.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Truncated power series `c_0 + c_1 q + ... + c_N q^N + O(q^(N+1))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * q^k`, truncated at `order` (zero if `k > order`).
    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from its coefficient list; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition(
                "a series needs at least its constant coefficient".into(),
            ));
        }
        Ok(QSeries { coeffs })
    }

    pub fn from_integers<I, T>(coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::from_coeffs(
            coeffs
                .into_iter()
                .map(|c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    /// Builds a series of the given order from a coefficient function.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize) -> Rational) -> Self {
        QSeries {
            coeffs: (0..=order).map(&mut f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`.
    ///
    /// # Panics
    ///
    /// If `n` exceeds the truncation order: that coefficient is unknown.
    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True if every coefficient has denominator 1.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Index of the first non-integral coefficient, if any.
    pub fn first_non_integral(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_integer())
    }

    /// Drops all coefficients above `order`. Raising the order is not possible.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        QSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Multiplication by `q^k`; the order grows by `k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QSeries { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        QSeries {
            coeffs: (0..=order)
                .map(|n| &self.coeffs[n] + &other.coeffs[n])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        QSeries {
            coeffs: (0..=order)
                .map(|n| &self.coeffs[n] - &other.coeffs[n])
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Cauchy product truncated to the smaller order.
    ///
    /// Schoolbook convolution that skips zero coefficients, so sparse factors
    /// like `theta` or `1/(1-q^k)` cost proportionally less. Integral inputs
    /// are convolved in `BigInt` to avoid a gcd per term.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let lhs: Vec<(usize, &Rational)> = nonzero_terms(&self.coeffs[..=order]);
        let rhs: Vec<(usize, &Rational)> = nonzero_terms(&other.coeffs[..=order]);

        if lhs.iter().chain(&rhs).all(|(_, c)| c.is_integer()) {
            let mut acc = vec![BigInt::zero(); order + 1];
            for &(i, a) in &lhs {
                let a = a.numer();
                for &(j, b) in &rhs {
                    if i + j > order {
                        break;
                    }
                    acc[i + j] += a * b.numer();
                }
            }
            return QSeries {
                coeffs: acc.into_iter().map(Rational::from_integer).collect(),
            };
        }

        let mut acc = vec![Rational::zero(); order + 1];
        for &(i, a) in &lhs {
            for &(j, b) in &rhs {
                if i + j > order {
                    break;
                }
                acc[i + j] += a * b;
            }
        }
        QSeries { coeffs: acc }
    }

    /// `self^k` by binary exponentiation; `pow(0)` is the unit series.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// The operator `q d/dq`: coefficient `n` is multiplied by `n`.
    pub fn qderiv(&self) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * Rational::from_integer(BigInt::from(n)))
                .collect(),
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Precondition(
                "inverse needs a nonzero constant term".into(),
            ));
        }
        let inv0 = c0.recip();
        let order = self.order();
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &out[n - k];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(QSeries { coeffs: out })
    }

    /// Formal logarithm of a series with constant term exactly 1.
    ///
    /// Uses `n g_n = n f_n - sum_{k=1}^{n-1} k g_k f_{n-k}` where `g = log f`.
    pub fn log1(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Precondition(format!(
                "log1 needs constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        let order = self.order();
        let mut g = vec![Rational::zero(); order + 1];
        for n in 1..=order {
            let nr = Rational::from_integer(BigInt::from(n));
            let mut acc = &nr * &self.coeffs[n];
            for k in 1..n {
                if !g[k].is_zero() && !self.coeffs[n - k].is_zero() {
                    acc -= Rational::from_integer(BigInt::from(k)) * &g[k] * &self.coeffs[n - k];
                }
            }
            g[n] = acc / nr;
        }
        Ok(QSeries { coeffs: g })
    }

    /// Formal exponential of a series with constant term exactly 0.
    ///
    /// Uses `n f_n = sum_{k=1}^{n} k g_k f_{n-k}` where `f = exp g`.
    pub fn exp0(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition(format!(
                "exp0 needs constant term 0, got {}",
                self.coeffs[0]
            )));
        }
        let order = self.order();
        let weighted: Vec<Rational> = self.qderiv().into_coeffs();
        let mut f = Vec::with_capacity(order + 1);
        f.push(Rational::one());
        for n in 1..=order {
            let mut acc = Rational::zero();
            for k in 1..=n {
                if !weighted[k].is_zero() {
                    acc += &weighted[k] * &f[n - k];
                }
            }
            f.push(acc / Rational::from_integer(BigInt::from(n)));
        }
        Ok(QSeries { coeffs: f })
    }

    /// `f(q) -> f(-q)`: odd coefficients change sign.
    pub fn substitute_neg(&self) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| if n % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Coefficients converted to `f64` (nearest representable value).
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    /// Golden-file text: one `n: p/q` line per coefficient.
    pub fn to_golden(&self) -> String {
        let mut out = String::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{n}: {}/{}\n", c.numer(), c.denom()));
        }
        out
    }

    /// Parses the golden-file format. Indices must run 0, 1, 2, ... without gaps.
    pub fn from_golden(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (idx, value) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("line {}: missing ':'", lineno + 1)))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad index {idx:?}", lineno + 1)))?;
            if idx != coeffs.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected index {}, found {idx}",
                    lineno + 1,
                    coeffs.len()
                )));
            }
            coeffs.push(parse_rational(value.trim())?);
        }
        Self::from_coeffs(coeffs)
    }
}

fn nonzero_terms(coeffs: &[Rational]) -> Vec<(usize, &Rational)> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerator and denominator: scale both down before dividing.
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for QSeries {
    /// `c0 + c1*q + c2*q^2 + ... + O(q^(N+1))`, zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            match n {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*q")?,
                _ => write!(f, "{mag}*q^{n}")?,
            }
            first = false;
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O(q^{})", self.order() + 1)
    }
}

impl FromStr for QSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty series".into()));
        }

        // Split into signed terms at top-level '+' / '-'.
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut negative = false;
        let mut depth = 0usize;
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth = depth.saturating_sub(1),
                b'+' | b'-' if depth == 0 && bytes.get(i.wrapping_sub(1)) != Some(&b'^') => {
                    if i > start {
                        terms.push((negative, &compact[start..i]));
                    } else if i != 0 {
                        return Err(Error::Parse(format!("empty term in {s:?}")));
                    }
                    negative = b == b'-';
                    start = i + 1;
                }
                _ => {}
            }
        }
        if start >= compact.len() {
            return Err(Error::Parse(format!("trailing sign in {s:?}")));
        }
        terms.push((negative, &compact[start..]));

        let mut explicit_order: Option<usize> = None;
        let mut entries: Vec<(usize, Rational)> = Vec::new();
        for (negative, body) in terms {
            if let Some(rest) = body.strip_prefix("O(") {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed O-term {body:?}")))?;
                let k = parse_power(inner)?;
                if k == 0 || negative {
                    return Err(Error::Parse(format!("bad O-term {body:?}")));
                }
                explicit_order = Some(k - 1);
                continue;
            }
            let (coef, exp) = match body.find('q') {
                None => (parse_rational(body)?, 0),
                Some(pos) => {
                    let c = if pos == 0 {
                        Rational::one()
                    } else {
                        let head = body[..pos]
                            .strip_suffix('*')
                            .ok_or_else(|| Error::Parse(format!("expected '*' in {body:?}")))?;
                        parse_rational(head)?
                    };
                    (c, parse_power(&body[pos..])?)
                }
            };
            entries.push((exp, if negative { -coef } else { coef }));
        }

        let max_exp = entries.iter().map(|(e, _)| *e).max().unwrap_or(0);
        let order = match explicit_order {
            Some(o) if max_exp > o => {
                return Err(Error::Parse(format!(
                    "term q^{max_exp} lies beyond O(q^{})",
                    o + 1
                )))
            }
            Some(o) => o,
            None => max_exp,
        };
        let mut out = QSeries::zero(order);
        for (e, c) in entries {
            out.coeffs[e] += c;
        }
        Ok(out)
    }
}

/// Parses `q` or `q^k`.
fn parse_power(s: &str) -> Result<usize> {
    let rest = s
        .strip_prefix('q')
        .ok_or_else(|| Error::Parse(format!("expected q-power, got {s:?}")))?;
    if rest.is_empty() {
        return Ok(1);
    }
    rest.strip_prefix('^')
        .and_then(|k| k.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad exponent in {s:?}")))
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::neg(self)
    }
}
