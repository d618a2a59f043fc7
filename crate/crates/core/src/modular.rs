//! SL(2,Z) algebra: congruence subgroups of level 4, the `T`/`U` word problem
//! for Gamma1(4), reduction into a fundamental domain, and the stereographic
//! map used for the thrice-punctured sphere picture.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Iteration cap for [`decompose`]. The descent is strictly decreasing, so
/// hitting it means a bug rather than a hard input.
pub const DECOMPOSE_STEP_BOUND: usize = 100_000;

/// Iteration cap for [`reduce_to_fundamental`].
pub const REDUCE_STEP_BOUND: usize = 1_000_000;

/// Tolerance on the boundary of the fundamental domain; ties go to "inside".
pub const DOMAIN_EPS: f64 = 1e-12;

/// A 2x2 integer matrix of determinant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2Z {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Mat2Z {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::Determinant(det.to_string()));
        }
        Ok(Mat2Z { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    fn raw(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2Z { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(1.into(), 0.into(), 0.into(), 1.into())
    }

    pub fn minus_identity() -> Self {
        Self::raw((-1).into(), 0.into(), 0.into(), (-1).into())
    }

    /// `T = [[1,1],[0,1]]`, `tau -> tau + 1`.
    pub fn t() -> Self {
        Self::t_pow(1)
    }

    /// `S = [[0,-1],[1,0]]`, `tau -> -1/tau`.
    pub fn s() -> Self {
        Self::raw(0.into(), (-1).into(), 1.into(), 0.into())
    }

    /// `U = [[1,0],[4,1]]`, `tau -> tau / (4 tau + 1)`.
    pub fn u() -> Self {
        Self::u_pow(1)
    }

    pub fn t_pow(k: impl Into<BigInt>) -> Self {
        Self::raw(1.into(), k.into(), 0.into(), 1.into())
    }

    pub fn u_pow(k: impl Into<BigInt>) -> Self {
        Self::raw(1.into(), 0.into(), k.into() * 4, 1.into())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn mul(&self, rhs: &Mat2Z) -> Mat2Z {
        Self::raw(
            &self.a * &rhs.a + &self.b * &rhs.c,
            &self.a * &rhs.b + &self.b * &rhs.d,
            &self.c * &rhs.a + &self.d * &rhs.c,
            &self.c * &rhs.b + &self.d * &rhs.d,
        )
    }

    pub fn inv(&self) -> Mat2Z {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn neg(&self) -> Mat2Z {
        Self::raw(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn pow(&self, k: u32) -> Mat2Z {
        (0..k).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// Entries as `f64` in the order `a, b, c, d`.
    pub fn to_f64(&self) -> [f64; 4] {
        [&self.a, &self.b, &self.c, &self.d].map(|x| x.to_f64().unwrap_or(f64::NAN))
    }

    /// `cτ + d` for this matrix.
    pub fn automorphy_factor(&self, tau: Complex64) -> Complex64 {
        let [_, _, c, d] = self.to_f64();
        c * tau + d
    }

    fn residues_mod4(&self) -> [i64; 4] {
        let four = BigInt::from(4);
        [&self.a, &self.b, &self.c, &self.d].map(|x| x.mod_floor(&four).to_i64().expect("residue"))
    }

    /// `A ≡ Id (mod 4)`.
    pub fn in_gamma4(&self) -> bool {
        let [a, b, c, d] = self.residues_mod4();
        a == 1 && b == 0 && c == 0 && d == 1
    }

    /// `A ≡ [[1,*],[0,1]] (mod 4)`.
    pub fn in_gamma1_4(&self) -> bool {
        let [a, _, c, d] = self.residues_mod4();
        a == 1 && c == 0 && d == 1
    }

    /// `A ≡ [[*,*],[0,*]] (mod 4)`.
    pub fn in_gamma0_4(&self) -> bool {
        self.residues_mod4()[2] == 0
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Mat2Z {
    type Err = Error;

    /// Parses `[[a,b],[c,d]]`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("expected [[a,b],[c,d]], got {s:?}"));
        let inner = compact
            .strip_prefix("[[")
            .and_then(|r| r.strip_suffix("]]"))
            .ok_or_else(bad)?;
        let (row1, row2) = inner.split_once("],[").ok_or_else(bad)?;
        let entries: Vec<BigInt> = row1
            .split(',')
            .chain(row2.split(','))
            .map(|x| x.parse::<BigInt>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [a, b, c, d]: [BigInt; 4] = entries.try_into().map_err(|_| bad())?;
        Mat2Z::new(a, b, c, d)
    }
}

/// A point of the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UHPoint {
    re: f64,
    im: f64,
}

impl UHPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::Precondition(format!(
                "point {re}+{im}i is not in the upper half plane"
            )));
        }
        Ok(UHPoint { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl fmt::Display for UHPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.re, self.im)
    }
}

impl FromStr for UHPoint {
    type Err = Error;

    /// Parses `re,im`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected re,im, got {s:?}"));
        let (re, im) = s.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        UHPoint::new(re, im)
    }
}

/// `(aτ + b) / (cτ + d)` on a complex number.
pub fn mobius_complex(m: &Mat2Z, tau: Complex64) -> Complex64 {
    let [a, b, c, d] = m.to_f64();
    (a * tau + b) / (c * tau + d)
}

/// Möbius action of `m` on the upper half plane.
pub fn mobius(m: &Mat2Z, tau: UHPoint) -> UHPoint {
    let z = tau.to_complex();
    let w = mobius_complex(m, z);
    // The imaginary part is computed from its closed form to keep it positive.
    let im = tau.im / (m.automorphy_factor(z)).norm_sqr();
    UHPoint { re: w.re, im }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    T,
    U,
}

impl Generator {
    pub fn matrix_pow(self, k: i64) -> Mat2Z {
        match self {
            Generator::T => Mat2Z::t_pow(k),
            Generator::U => Mat2Z::u_pow(k),
        }
    }
}

/// A word in `T` and `U`; adjacent letters always use different generators
/// and no exponent is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenWord {
    letters: Vec<(Generator, i64)>,
}

impl GenWord {
    pub fn identity() -> Self {
        GenWord::default()
    }

    /// Builds a normalized word: merges runs of the same generator and drops zero powers.
    pub fn new(letters: impl IntoIterator<Item = (Generator, i64)>) -> Self {
        let mut w = GenWord::identity();
        for (g, k) in letters {
            w.push(g, k);
        }
        w
    }

    pub fn letters(&self) -> &[(Generator, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Appends `g^k` on the right.
    pub fn push(&mut self, g: Generator, k: i64) {
        if k == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == g {
                last.1 += k;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((g, k));
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut out = self.clone();
        for &(g, k) in &other.letters {
            out.push(g, k);
        }
        out
    }

    pub fn inverse(&self) -> GenWord {
        GenWord::new(self.letters.iter().rev().map(|&(g, k)| (g, -k)))
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("Id");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(g, k)| format!("{}^{k}", if *g == Generator::T { "T" } else { "U" }))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for GenWord {
    type Err = Error;

    /// Parses `T^2 U^-1 T^3`; `Id` or the empty string is the identity, and a
    /// bare `T` means `T^1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut w = GenWord::identity();
        for tok in s.split_whitespace() {
            if tok == "Id" {
                continue;
            }
            let (g, rest) = match tok.split_at(1) {
                ("T", r) => (Generator::T, r),
                ("U", r) => (Generator::U, r),
                _ => return Err(Error::Parse(format!("bad letter {tok:?}"))),
            };
            let k = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|e| e.parse::<i64>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad exponent in {tok:?}")))?
            };
            w.push(g, k);
        }
        Ok(w)
    }
}

/// Ordered product of the letters' matrices.
pub fn word_eval(w: &GenWord) -> Mat2Z {
    w.letters
        .iter()
        .fold(Mat2Z::identity(), |acc, &(g, k)| acc.mul(&g.matrix_pow(k)))
}

/// Nearest integer to `num / den` (ties toward +inf); `den` must be nonzero.
fn nearest_quotient(num: &BigInt, den: &BigInt) -> BigInt {
    let (num, den): (BigInt, BigInt) = if den.is_negative() {
        (-num, -den)
    } else {
        (num.clone(), den.clone())
    };
    let twice: BigInt = &den * 2;
    Integer::div_floor(&(num * 2 + den), &twice)
}

fn exponent(k: &BigInt) -> Result<i64> {
    k.to_i64()
        .ok_or_else(|| Error::Precondition(format!("generator exponent {k} does not fit in i64")))
}

/// Writes a Gamma1(4) matrix as a word in `T` and `U`.
///
/// Euclidean descent on the first column `(a, c)`: left-multiplying by `U^k`
/// brings `|c| < 2|a|`, then `T^k` brings `|a| < |c|/2`. Because `c ≡ 0` and
/// `a` is odd, both inequalities are strict, so `|c|` drops every round. At
/// `c = 0` the congruences force `a = d = 1`, leaving a power of `T`.
pub fn decompose(m: &Mat2Z) -> Result<GenWord> {
    if !m.in_gamma1_4() {
        return Err(Error::NotInGamma1Four(m.to_string()));
    }
    let mut cur = m.clone();
    // Left factors applied so far, in application order.
    let mut applied: Vec<(Generator, i64)> = Vec::new();
    for _ in 0..DECOMPOSE_STEP_BOUND {
        if cur.c.is_zero() {
            debug_assert!(cur.a.is_one() && cur.d.is_one());
            // applied_r ... applied_1 * m = T^b, so m = applied_1^-1 ... applied_r^-1 T^b.
            let mut w = GenWord::new(applied.iter().map(|&(g, k)| (g, -k)));
            w.push(Generator::T, exponent(&cur.b)?);
            return Ok(w);
        }
        let k = nearest_quotient(&-&cur.c, &(&cur.a * 4));
        if !k.is_zero() {
            cur = Mat2Z::u_pow(k.clone()).mul(&cur);
            applied.push((Generator::U, exponent(&k)?));
        }
        if cur.c.is_zero() {
            continue;
        }
        let k = nearest_quotient(&-&cur.a, &cur.c);
        if !k.is_zero() {
            cur = Mat2Z::t_pow(k.clone()).mul(&cur);
            applied.push((Generator::T, exponent(&k)?));
        }
    }
    Err(Error::StepBound {
        what: "decompose",
        bound: DECOMPOSE_STEP_BOUND,
    })
}

/// Membership in the closed fundamental domain
/// `{0 <= re <= 1, |τ - 1/4| >= 1/4, |τ - 3/4| >= 1/4}`, with tolerance `eps`.
pub fn in_fundamental_domain(tau: UHPoint, eps: f64) -> bool {
    let z = tau.to_complex();
    tau.re >= -eps
        && tau.re <= 1.0 + eps
        && (z - 0.25).norm() >= 0.25 - eps
        && (z - 0.75).norm() >= 0.25 - eps
}

/// Moves `tau` into the fundamental domain of Gamma1(4) and returns the point
/// together with a word `w` such that `word_eval(w) · tau` is that point.
///
/// Each round translates the real part into `[0, 1)`, then leaves the disc
/// around `1/4` by `U^-1` or the disc around `3/4` by `U T^-1`. Inside those
/// discs `|cτ + d| < 1`, so every disc step raises the imaginary part.
pub fn reduce_to_fundamental(tau: UHPoint) -> Result<(UHPoint, GenWord)> {
    let mut z = tau;
    // Steps in application order; the word is their product in reverse.
    let mut steps: Vec<GenWord> = Vec::new();
    let u_inv = Mat2Z::u_pow(-1);
    let u_t_inv = Mat2Z::u().mul(&Mat2Z::t_pow(-1));
    for _ in 0..REDUCE_STEP_BOUND {
        let shift = z.re.floor();
        if shift != 0.0 {
            if shift.abs() > i64::MAX as f64 / 2.0 {
                return Err(Error::Precondition(format!("real part {} too large", z.re)));
            }
            z.re -= shift;
            steps.push(GenWord::new([(Generator::T, -(shift as i64))]));
        }
        let w = z.to_complex();
        if (w - 0.25).norm() < 0.25 - DOMAIN_EPS {
            z = mobius(&u_inv, z);
            steps.push(GenWord::new([(Generator::U, -1)]));
        } else if (w - 0.75).norm() < 0.25 - DOMAIN_EPS {
            z = mobius(&u_t_inv, z);
            steps.push(GenWord::new([(Generator::U, 1), (Generator::T, -1)]));
        } else {
            let word = steps
                .iter()
                .rev()
                .fold(GenWord::identity(), |acc, s| acc.concat(s));
            return Ok((z, word));
        }
    }
    Err(Error::StepBound {
        what: "reduce_to_fundamental",
        bound: REDUCE_STEP_BOUND,
    })
}

/// Counts of the level-4 reduction and the indices derived from them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelFourIndices {
    /// `|SL(2, Z/4)|`
    pub sl2_z4: usize,
    /// Residue matrices `≡ [[1,*],[0,1]]`: the image of Gamma1(4).
    pub gamma1_image: usize,
    /// Image of `{±Id} x Gamma1(4)`.
    pub pm_gamma1_image: usize,
    /// `[SL(2,Z) : Gamma(4)]`
    pub index_gamma4: usize,
    /// `[SL(2,Z) : Gamma1(4)]`
    pub index_gamma1_4: usize,
    /// Index of the image of Gamma1(4) in `PSL(2,Z)`.
    pub index_gamma1_4_psl: usize,
}

/// Enumerates all `4^4` residue matrices with `ad - bc ≡ 1 (mod 4)`.
pub fn count_sl2_z4() -> LevelFourIndices {
    let mut total = 0;
    let mut gamma1 = 0;
    let mut pm_gamma1 = 0;
    for a in 0..4i64 {
        for b in 0..4i64 {
            for c in 0..4i64 {
                for d in 0..4i64 {
                    if (a * d - b * c).rem_euclid(4) != 1 {
                        continue;
                    }
                    total += 1;
                    if c == 0 && a == 1 && d == 1 {
                        gamma1 += 1;
                    }
                    if c == 0 && a == d && (a == 1 || a == 3) {
                        pm_gamma1 += 1;
                    }
                }
            }
        }
    }
    LevelFourIndices {
        sl2_z4: total,
        gamma1_image: gamma1,
        pm_gamma1_image: pm_gamma1,
        index_gamma4: total,
        index_gamma1_4: total / gamma1,
        index_gamma1_4_psl: total / pm_gamma1,
    }
}

/// Inverse stereographic projection of `q = u + iv` from the North Pole onto
/// the unit sphere, scaled so that `|q| = 2` lands on the equator.
pub fn stereographic(q: Complex64) -> [f64; 3] {
    let (u, v) = (q.re, q.im);
    let r2 = u * u + v * v;
    let s = r2 + 4.0;
    [4.0 * u / s, 4.0 * v / s, (r2 - 4.0) / s]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2Z {
        Mat2Z::from_i64(a, b, c, d).unwrap()
    }

    #[test]
    fn determinant_checked() {
        assert!(Mat2Z::from_i64(1, 1, 1, 1).is_err());
        assert!("[[2,0],[0,1]]".parse::<Mat2Z>().is_err());
    }

    #[test]
    fn modular_group_relations() {
        let s = Mat2Z::s();
        let st = s.mul(&Mat2Z::t());
        assert_eq!(s.pow(2), Mat2Z::minus_identity());
        assert_eq!(st.pow(3), Mat2Z::minus_identity());
        let a = m(5, 2, 7, 3);
        assert_eq!(a.mul(&a.inv()), Mat2Z::identity());
        assert_eq!(Mat2Z::u().mul(&Mat2Z::t().inv()), m(1, -1, 4, -3));
    }

    #[test]
    fn congruence_membership() {
        let t = Mat2Z::t();
        assert!(t.in_gamma1_4() && !t.in_gamma4());
        assert!(Mat2Z::u().in_gamma1_4());
        assert_eq!(Mat2Z::u(), m(1, 0, 4, 1));
        let minus = Mat2Z::minus_identity();
        assert!(minus.in_gamma0_4() && !minus.in_gamma1_4());
        assert!(!Mat2Z::s().in_gamma0_4());
        assert!(m(1, 4, 4, 17).in_gamma4());
    }

    #[test]
    fn indices() {
        let idx = count_sl2_z4();
        assert_eq!(idx.sl2_z4, 48);
        assert_eq!(idx.index_gamma4, 48);
        assert_eq!(idx.index_gamma1_4, 12);
        assert_eq!(idx.index_gamma1_4_psl, 6);
    }

    #[test]
    fn mobius_examples() {
        let i = UHPoint::new(0.0, 1.0).unwrap();
        let si = mobius(&Mat2Z::s(), i);
        assert!((si.re() - 0.0).abs() < 1e-15 && (si.im() - 1.0).abs() < 1e-15);
        let tau = UHPoint::new(0.3, 0.7).unwrap();
        let t_tau = mobius(&Mat2Z::t(), tau);
        assert!((t_tau.re() - 1.3).abs() < 1e-15 && t_tau.im() == 0.7);
    }

    #[test]
    fn word_eval_examples() {
        assert_eq!(word_eval(&GenWord::identity()), Mat2Z::identity());
        assert_eq!(word_eval(&"U^1".parse().unwrap()), m(1, 0, 4, 1));
        let w: GenWord = "T^2 U^-1".parse().unwrap();
        // [[1,2],[0,1]] [[1,0],[-4,1]] = [[1-8, 2],[-4, 1]]
        assert_eq!(word_eval(&w), m(-7, 2, -4, 1));
    }

    #[test]
    fn word_normalization_and_text() {
        let w = GenWord::new([
            (Generator::T, 2),
            (Generator::T, -2),
            (Generator::U, 0),
            (Generator::U, 3),
            (Generator::U, 1),
        ]);
        assert_eq!(w.letters(), &[(Generator::U, 4)]);
        assert_eq!(w.to_string(), "U^4");
        let w: GenWord = "T^2 U^-1 T^3".parse().unwrap();
        assert_eq!(w.to_string(), "T^2 U^-1 T^3");
        assert_eq!(GenWord::identity().to_string(), "Id");
        assert_eq!("Id".parse::<GenWord>().unwrap(), GenWord::identity());
        assert!("S^1".parse::<GenWord>().is_err());
        assert!("T^x".parse::<GenWord>().is_err());
        assert_eq!(word_eval(&w.concat(&w.inverse())), Mat2Z::identity());
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(&Mat2Z::t()).unwrap().to_string(), "T^1");
        assert_eq!(decompose(&Mat2Z::u()).unwrap().to_string(), "U^1");
        assert_eq!(decompose(&Mat2Z::identity()).unwrap(), GenWord::identity());
        let a = m(-7, 2, -4, 1);
        assert_eq!(word_eval(&decompose(&a).unwrap()), a);
    }

    #[test]
    fn decompose_rejects_non_members() {
        for bad in [Mat2Z::s(), Mat2Z::minus_identity(), m(3, 1, 8, 3)] {
            assert!(matches!(decompose(&bad), Err(Error::NotInGamma1Four(_))));
        }
    }

    #[test]
    fn decompose_large_entries() {
        let w: GenWord = "T^1000 U^-777 T^5 U^123456 T^-3".parse().unwrap();
        let a = word_eval(&w);
        assert_eq!(word_eval(&decompose(&a).unwrap()), a);
    }

    #[test]
    fn nearest_quotient_rounds() {
        let q = |n: i64, d: i64| nearest_quotient(&n.into(), &d.into());
        assert_eq!(q(7, 2), 4.into());
        assert_eq!(q(-7, 2), (-3).into());
        assert_eq!(q(5, -4), (-1).into());
        assert_eq!(q(-6, 4), (-1).into());
    }

    #[test]
    fn reduce_examples() {
        let tau = UHPoint::new(0.5, 2.0).unwrap();
        let (r, w) = reduce_to_fundamental(tau).unwrap();
        assert_eq!(r, tau);
        assert!(w.is_empty());

        let (r, w) = reduce_to_fundamental(UHPoint::new(5.3, 2.0).unwrap()).unwrap();
        assert_eq!(w.to_string(), "T^-5");
        assert!((r.re() - 0.3).abs() < 1e-12 && r.im() == 2.0);
    }

    #[test]
    fn reduce_near_cusp() {
        let tau = UHPoint::new(0.2501, 1e-4).unwrap();
        let (r, w) = reduce_to_fundamental(tau).unwrap();
        assert!(in_fundamental_domain(r, DOMAIN_EPS));
        assert!(r.im() >= tau.im());
        let m = word_eval(&w);
        assert!(m.in_gamma1_4());
        let replay = mobius(&m, tau);
        assert!((replay.to_complex() - r.to_complex()).norm() < 1e-9);
    }

    #[test]
    fn stereographic_examples() {
        assert_eq!(stereographic(Complex64::new(0.0, 0.0)), [0.0, 0.0, -1.0]);
        assert_eq!(stereographic(Complex64::new(2.0, 0.0)), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn text_formats() {
        let a: Mat2Z = " [[ -7, 2 ], [ -4, 1 ]] ".parse().unwrap();
        assert_eq!(a.to_string(), "[[-7,2],[-4,1]]");
        assert!("[[1,0,0],[0,1]]".parse::<Mat2Z>().is_err());
        assert!("1,0,0,1".parse::<Mat2Z>().is_err());
        let p: UHPoint = "0.3,1.1".parse().unwrap();
        assert_eq!((p.re(), p.im()), (0.3, 1.1));
        assert!("0.3,-1".parse::<UHPoint>().is_err());
        assert!("0.3".parse::<UHPoint>().is_err());
    }

    fn word_strategy() -> impl Strategy<Value = GenWord> {
        prop::collection::vec((prop::bool::ANY, -5i64..=5), 0..=20).prop_map(|v| {
            GenWord::new(
                v.into_iter()
                    .map(|(t, k)| (if t { Generator::T } else { Generator::U }, k)),
            )
        })
    }

    fn sl2_strategy() -> impl Strategy<Value = Mat2Z> {
        prop::collection::vec(
            (prop::bool::ANY, -3i64..=3),
            0..=8,
        )
        .prop_map(|v| {
            v.into_iter().fold(Mat2Z::identity(), |acc, (s, k)| {
                let g = if s { Mat2Z::s() } else { Mat2Z::t_pow(k) };
                acc.mul(&g)
            })
        })
    }

    proptest! {
        #[test]
        fn decompose_roundtrip(w in word_strategy()) {
            let a = word_eval(&w);
            prop_assert!(a.in_gamma1_4());
            let d = decompose(&a).unwrap();
            prop_assert_eq!(word_eval(&d), a);
        }

        #[test]
        fn mobius_is_a_left_action(a in sl2_strategy(), b in sl2_strategy(),
                                   re in -2.0f64..2.0, im in 0.2f64..3.0) {
            let tau = UHPoint::new(re, im).unwrap();
            let lhs = mobius(&a, mobius(&b, tau));
            let rhs = mobius(&a.mul(&b), tau);
            prop_assert!(lhs.im() > 0.0);
            let scale = 1.0 + rhs.to_complex().norm();
            prop_assert!((lhs.to_complex() - rhs.to_complex()).norm() < 1e-12 * scale);
        }

        #[test]
        fn reduction_postconditions(re in -20.0f64..20.0, im in 1e-3f64..10.0) {
            let tau = UHPoint::new(re, im).unwrap();
            let (r, w) = reduce_to_fundamental(tau).unwrap();
            prop_assert!(in_fundamental_domain(r, DOMAIN_EPS));
            let m = word_eval(&w);
            prop_assert!(m.in_gamma1_4());
            let replay = mobius(&m, tau);
            prop_assert!((replay.to_complex() - r.to_complex()).norm() < 1e-9);
            if w.letters().iter().any(|(g, _)| *g == Generator::U) {
                prop_assert!(r.im() >= tau.im());
            }
        }

        #[test]
        fn stereographic_unit_length(u in -50.0f64..50.0, v in -50.0f64..50.0) {
            let [x, y, z] = stereographic(Complex64::new(u, v));
            prop_assert!(((x * x + y * y + z * z).sqrt() - 1.0).abs() < 1e-14);
        }
    }
}
