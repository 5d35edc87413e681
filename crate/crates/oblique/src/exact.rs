//! Exact rational arithmetic and lattice geometry on the circles
//! `S_a : x² − ax + y² + ay = 0`.
//!
//! Everything in this module is integer/rational arithmetic; no floating
//! point enters a lattice membership test. Slopes are accepted only as exact
//! rationals — for irrational slopes the set `A_a` is empty by a standard
//! divisibility argument and needs no computation.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// An exact rational number, stored reduced with a positive denominator.
///
/// Thin wrapper around [`BigRational`] adding parsing of `"p/q"` text,
/// distance-to-integer helpers and string-based serde. Arbitrary precision is
/// deliberate: observation slopes feed exact lattice tests.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator(format!("{num}/{den}")));
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    /// Numerator of the reduced form (carries the sign).
    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Denominator of the reduced form (always positive).
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Distance from the value to the nearest integer, as an exact rational.
    ///
    /// Zero exactly when the value is an integer. This is the quantity
    /// `d(a, Z)` that lower-bounds `|k + m − a|` over integers `k + m`.
    pub fn dist_to_int(&self) -> Rational {
        let fl = self.0.floor();
        let frac = &self.0 - &fl;
        let comp = BigRational::from_integer(BigInt::from(1)) - &frac;
        Rational(if frac <= comp { frac } else { comp })
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational within f64 range")
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        rat_parse(s)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        rat_parse(&s).map_err(de::Error::custom)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(std::ops::$trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);

impl std::ops::Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Parse rational text: `"p/q"` or plain integer text.
///
/// A unicode minus sign is accepted alongside the ASCII one. The result is
/// always reduced with a positive denominator; `q = 0` is rejected.
pub fn rat_parse(s: &str) -> Result<Rational> {
    let cleaned: String = s.trim().replace('\u{2212}', "-");
    let malformed = || Error::MalformedRational(s.to_string());
    let (num_text, den_text) = match cleaned.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (cleaned.as_str(), None),
    };
    let num: BigInt = num_text.parse().map_err(|_| malformed())?;
    let den: BigInt = match den_text {
        Some(d) => d.parse().map_err(|_| malformed())?,
        None => BigInt::from(1),
    };
    if den.is_zero() {
        return Err(Error::ZeroDenominator(s.to_string()));
    }
    Ok(Rational(BigRational::new(num, den)))
}

/// A point of the integer lattice `Z²`. Ordering is lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// The reflection `(x, y) ↦ (−y, −x)` which leaves every `S_a` invariant.
    pub fn reflect(&self) -> Self {
        LatticePoint { x: -self.y, y: -self.x }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Exact membership of a lattice point in the circle `S_a`.
///
/// With `a = p/q` reduced, `x² − ax + y² + ay = 0` holds iff
/// `q·(x² + y²) = p·(x − y)` in exact integer arithmetic.
pub fn circle_member(a: &Rational, p: LatticePoint) -> bool {
    let x = BigInt::from(p.x);
    let y = BigInt::from(p.y);
    a.denom() * (&x * &x + &y * &y) == a.numer() * (&x - &y)
}

/// The lattice point set `A_a = S_a ∩ Z² \ {(0,0)}` of a circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ASet {
    pub a: Rational,
    /// Members in lexicographic order.
    pub points: Vec<LatticePoint>,
}

impl ASet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    /// `√2·π·|a|`, the perimeter bound on `|A_a|`.
    pub fn cardinality_bound(&self) -> f64 {
        std::f64::consts::SQRT_2 * std::f64::consts::PI * self.a.to_f64().abs()
    }
}

/// Enumerate `A_a` by an exhaustive scan of the bounding box of `S_a`.
///
/// The box `x ∈ [a/2 − |a|/√2, a/2 + |a|/√2]` is evaluated without floating
/// point: an integer `x` lies in it iff `(2qx − p)² ≤ 2p²`, and similarly
/// `y` iff `(2qy + p)² ≤ 2p²`. For `a = 0` the circle degenerates to the
/// origin and the set is empty.
pub fn enumerate_aset(a: &Rational) -> ASet {
    if a.is_zero() {
        return ASet { a: a.clone(), points: Vec::new() };
    }
    let p = a.numer().clone();
    let q = a.denom().clone();
    let two_q = &q * 2;
    // Largest integer with s² ≤ 2p².
    let s = (BigInt::from(2) * &p * &p).sqrt();

    let x_lo = (&p - &s).div_ceil(&two_q);
    let x_hi = (&p + &s).div_floor(&two_q);
    let y_lo = (-&p - &s).div_ceil(&two_q);
    let y_hi = (-&p + &s).div_floor(&two_q);

    let (x_lo, x_hi, y_lo, y_hi) =
        match (x_lo.to_i64(), x_hi.to_i64(), y_lo.to_i64(), y_hi.to_i64()) {
            (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
            _ => panic!("slope {a} too large for lattice scan"),
        };

    let mut points = Vec::new();
    for x in x_lo..=x_hi {
        for y in y_lo..=y_hi {
            let pt = LatticePoint::new(x, y);
            if !pt.is_origin() && circle_member(a, pt) {
                points.push(pt);
            }
        }
    }
    points.sort();
    ASet { a: a.clone(), points }
}

/// Projections `(A⁺, A⁻)` of an A-set on the two coordinate axes.
pub fn projections(aset: &ASet) -> (BTreeSet<i64>, BTreeSet<i64>) {
    let xs = aset.points.iter().map(|p| p.x).collect();
    let ys = aset.points.iter().map(|p| p.y).collect();
    (xs, ys)
}

/// Compare two rationals by absolute value (used by slope classifiers).
pub fn cmp_abs(a: &Rational, b: &Rational) -> Ordering {
    a.abs().cmp(&b.abs())
}

/// All reduced nonzero rationals `p/q` with `|p| ≤ pmax`, `1 ≤ q ≤ qmax`.
pub fn slope_grid(pmax: i64, qmax: i64) -> Vec<Rational> {
    let mut out = Vec::new();
    for q in 1..=qmax {
        for p in -pmax..=pmax {
            if p != 0 && p.unsigned_abs().gcd(&q.unsigned_abs()) == 1 {
                out.push(Rational::new(p, q).unwrap());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(s: &str) -> Rational {
        rat_parse(s).unwrap()
    }

    #[test]
    fn parse_paper_slope() {
        // Unicode minus, as it appears in typeset sources.
        let r = rat("\u{2212}13/5");
        assert_eq!(r, Rational::new(-13, 5).unwrap());
        assert_eq!(r.to_string(), "-13/5");
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(rat("4/2"), Rational::from_integer(2));
        assert_eq!(rat("-6/-4"), rat("3/2"));
    }

    #[test]
    fn parse_integer_text() {
        let r = rat("0");
        assert!(r.is_zero());
        assert_eq!(r.denom(), &BigInt::from(1));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(rat_parse("1/0").is_err());
        assert!(rat_parse("a/b").is_err());
        assert!(rat_parse("1/2/3").is_err());
        assert!(rat_parse("").is_err());
    }

    #[test]
    fn dist_to_int_values() {
        assert_eq!(rat("1/2").dist_to_int(), rat("1/2"));
        assert_eq!(rat("1/3").dist_to_int(), rat("1/3"));
        assert_eq!(rat("-13/5").dist_to_int(), rat("2/5"));
        assert!(rat("7").dist_to_int().is_zero());
    }

    #[test]
    fn membership_figure_point() {
        // Point K of the two-slope example: 5·13 = −13·(−5).
        assert!(circle_member(&rat("-13/5"), LatticePoint::new(-3, 2)));
        assert!(!circle_member(&rat("-13/5"), LatticePoint::new(-4, 2)));
        // Every circle passes through the origin.
        assert!(circle_member(&rat("5"), LatticePoint::new(0, 0)));
    }

    #[test]
    fn aset_five_exact() {
        let expected = vec![
            (-1, -3),
            (-1, -2),
            (0, -5),
            (2, -6),
            (2, 1),
            (3, -6),
            (3, 1),
            (5, -5),
            (5, 0),
            (6, -3),
            (6, -2),
        ];
        let mut expected: Vec<LatticePoint> =
            expected.into_iter().map(|(x, y)| LatticePoint::new(x, y)).collect();
        expected.sort();
        let got = enumerate_aset(&rat("5"));
        assert_eq!(got.points, expected);
    }

    #[test]
    fn aset_figure_slopes() {
        let a1 = enumerate_aset(&rat("-13/5"));
        assert!(a1.contains(LatticePoint::new(-3, 2)));
        assert!(a1.contains(LatticePoint::new(-2, 3)));
        assert_eq!(a1.len(), 2);

        let a2 = enumerate_aset(&rat("-10/3"));
        assert!(a2.contains(LatticePoint::new(-4, 2)));
        assert!(a2.contains(LatticePoint::new(-2, 4)));
        assert_eq!(a2.len(), 2);
    }

    #[test]
    fn aset_empty_cases() {
        assert!(enumerate_aset(&rat("1/2")).is_empty());
        assert!(enumerate_aset(&rat("1/3")).is_empty());
        assert!(enumerate_aset(&rat("0")).is_empty());
    }

    #[test]
    fn projections_of_a5() {
        let aset = enumerate_aset(&rat("5"));
        let (xs, ys) = projections(&aset);
        assert_eq!(xs, [-1, 0, 2, 3, 5, 6].into_iter().collect());
        assert_eq!(ys, [-6, -5, -3, -2, 0, 1].into_iter().collect());
    }

    #[test]
    fn projections_empty_and_figure() {
        let (xs, ys) = projections(&enumerate_aset(&rat("1/2")));
        assert!(xs.is_empty() && ys.is_empty());
        let (xs, _) = projections(&enumerate_aset(&rat("-13/5")));
        assert!(xs.contains(&-3) && xs.contains(&-2));
    }

    #[test]
    fn integer_slope_triple() {
        for a in [-7i64, -3, 1, 2, 5, 9] {
            let aset = enumerate_aset(&Rational::from_integer(a));
            assert!(aset.contains(LatticePoint::new(a, 0)), "({a},0) missing");
            assert!(aset.contains(LatticePoint::new(0, -a)), "(0,{}) missing", -a);
            assert!(aset.contains(LatticePoint::new(a, -a)), "({a},{}) missing", -a);
        }
    }

    #[test]
    fn aset_invariants_over_small_slopes() {
        for a in slope_grid(10, 4) {
            let aset = enumerate_aset(&a);
            // Reflection closure.
            for p in &aset.points {
                assert!(aset.contains(p.reflect()), "a={a}: reflection of {p} missing");
            }
            // Perimeter bound.
            assert!(
                (aset.len() as f64) <= aset.cardinality_bound(),
                "a={a}: |A| = {} exceeds bound",
                aset.len()
            );
            // Non-integer slopes never touch the axes.
            if !a.is_integer() {
                for p in &aset.points {
                    assert!(p.x != 0 && p.y != 0, "a={a}: {p} has a zero coordinate");
                }
            }
        }
    }

    #[test]
    fn distinct_slopes_have_disjoint_asets() {
        let slopes = slope_grid(6, 3);
        let asets: Vec<ASet> = slopes.iter().map(enumerate_aset).collect();
        for i in 0..asets.len() {
            for j in (i + 1)..asets.len() {
                for p in &asets[i].points {
                    assert!(
                        !asets[j].contains(*p),
                        "A_{} and A_{} share {p}",
                        slopes[i],
                        slopes[j]
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn scan_agrees_with_membership(p in -60i64..=60, q in 1i64..=8, x in -90i64..=90, y in -90i64..=90) {
            prop_assume!(p != 0);
            let a = Rational::new(p, q).unwrap();
            let aset = enumerate_aset(&a);
            let pt = LatticePoint::new(x, y);
            let member = !pt.is_origin() && circle_member(&a, pt);
            prop_assert_eq!(member, aset.contains(pt));
        }

        #[test]
        fn parse_display_roundtrip(p in -1000i64..=1000, q in 1i64..=1000) {
            let a = Rational::new(p, q).unwrap();
            prop_assert_eq!(rat_parse(&a.to_string()).unwrap(), a);
        }
    }
}
