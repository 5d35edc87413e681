//! Truncated exponent families of the three equations and their uniform
//! gaps.
//!
//! Restricting a solution to a moving segment turns it into an exponential
//! sum; the frequencies are `k² − ak` (Schrödinger), `±k² − ak` (beam) and
//! the pairs `(ak + bℓ, ±(k² + ℓ²))` (plate). Frequencies for rational
//! parameters are kept as exact rationals so that collisions — two labels
//! mapping to one frequency — are decided exactly. Floats appear only when
//! a set is handed to the Gram machinery.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact::{circle_member, LatticePoint, Rational};
use crate::{Error, Result};

/// Branch sign of a beam or plate mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Generating index of an exponent set entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    /// Plain index `k` (Schrödinger and custom scalar families).
    Index(i64),
    /// Beam branch `(k, ±)`, `k ≠ 0`.
    Branch(i64, Sign),
    /// Plate mode `(k, ℓ, ±)`, `(k, ℓ) ≠ (0, 0)`.
    Mode(i64, i64, Sign),
    /// The constant/linear block spanning `{1, t}` at frequency zero.
    ZeroBlock,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Index(k) => write!(f, "{k}"),
            Label::Branch(k, s) => write!(f, "({k},{s})"),
            Label::Mode(k, l, s) => write!(f, "({k},{l},{s})"),
            Label::ZeroBlock => f.write_str("0-block"),
        }
    }
}

/// An exact frequency: a scalar for 1-D problems, a pair for the plate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Freq {
    Scalar(Rational),
    Pair(Rational, Rational),
}

impl Freq {
    pub fn scalar(&self) -> Option<&Rational> {
        match self {
            Freq::Scalar(r) => Some(r),
            Freq::Pair(..) => None,
        }
    }
}

impl fmt::Display for Freq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Freq::Scalar(r) => write!(f, "{r}"),
            Freq::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

/// One labelled frequency. `poly` marks the `{1, t}` block: a single
/// frequency that expands to two basis functions in a Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub label: Label,
    pub freq: Freq,
    pub poly: bool,
}

/// Which equation (or custom set) generated the exponents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Schrodinger { a: Rational },
    Beam { a: Rational },
    Plate { a: i64, b: i64 },
    Custom { name: String },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Schrodinger { a } => write!(f, "schrodinger(a={a})"),
            Family::Beam { a } => write!(f, "beam(a={a})"),
            Family::Plate { a, b } => write!(f, "plate(a={a},b={b})"),
            Family::Custom { name } => write!(f, "custom({name})"),
        }
    }
}

/// A finite truncated family of exponents with collision metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExponentSet {
    pub family: Family,
    pub truncation: i64,
    pub entries: Vec<Entry>,
    /// Label pairs sharing one exact frequency.
    pub collisions: Vec<(Label, Label)>,
}

fn collisions_of(entries: &[Entry]) -> Vec<(Label, Label)> {
    let mut idx: Vec<usize> = (0..entries.len()).collect();
    idx.sort_by(|&i, &j| entries[i].freq.cmp(&entries[j].freq));
    let mut out = Vec::new();
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && entries[idx[end]].freq == entries[idx[start]].freq {
            end += 1;
        }
        for u in start..end {
            for v in (u + 1)..end {
                let (a, b) = (entries[idx[u]].label, entries[idx[v]].label);
                out.push(if a <= b { (a, b) } else { (b, a) });
            }
        }
        start = end;
    }
    out.sort();
    out
}

impl ExponentSet {
    fn new(family: Family, truncation: i64, entries: Vec<Entry>) -> Self {
        let collisions = collisions_of(&entries);
        ExponentSet { family, truncation, entries, collisions }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.entries.iter().map(|e| e.label).collect()
    }

    /// Deduplicated frequency list (the set view of the family).
    pub fn distinct_frequencies(&self) -> Vec<Freq> {
        let mut freqs: Vec<Freq> = self.entries.iter().map(|e| e.freq.clone()).collect();
        freqs.sort();
        freqs.dedup();
        freqs
    }

    /// Uniform gap of the entry list; `+∞` for fewer than two entries and
    /// `0` exactly when a collision exists.
    pub fn gap(&self) -> f64 {
        gap_of_entries(&self.entries)
    }

    /// Haraux tail gap: the gap after removing the entries labelled by
    /// `drop`. Errors if `drop` is not a subset of the label set.
    pub fn tail_gap(&self, drop: &BTreeSet<Label>) -> Result<f64> {
        let labels = self.labels();
        if let Some(bad) = drop.iter().find(|l| !labels.contains(l)) {
            return Err(Error::NotASubset(bad.to_string()));
        }
        let rest: Vec<Entry> =
            self.entries.iter().filter(|e| !drop.contains(&e.label)).cloned().collect();
        Ok(gap_of_entries(&rest))
    }

    /// Exact minimum gap of the scalar entries, when the set is scalar and
    /// has at least two entries.
    pub fn min_scalar_gap(&self) -> Option<Rational> {
        min_scalar_gap(&self.entries)
    }
}

fn min_scalar_gap(entries: &[Entry]) -> Option<Rational> {
    if entries.len() < 2 {
        return None;
    }
    let mut freqs: Vec<&Rational> = entries
        .iter()
        .map(|e| match &e.freq {
            Freq::Scalar(r) => Some(r),
            Freq::Pair(..) => None,
        })
        .collect::<Option<Vec<_>>>()?;
    freqs.sort();
    freqs.windows(2).map(|w| w[1] - w[0]).min()
}

/// Squared Euclidean distances for pair sets, exact. Uses i128 arithmetic
/// when every component is an integer (true for all constructed families),
/// falling back to rationals otherwise.
fn min_pair_gap_squared(entries: &[Entry]) -> Option<Rational> {
    if entries.len() < 2 {
        return None;
    }
    let ints: Option<Vec<(i128, i128)>> = entries
        .iter()
        .map(|e| match &e.freq {
            Freq::Pair(a, b) if a.is_integer() && b.is_integer() => {
                Some((a.numer().to_i128()?, b.numer().to_i128()?))
            }
            _ => None,
        })
        .collect();
    if let Some(pts) = ints {
        let mut best: Option<i128> = None;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let dx = pts[i].0 - pts[j].0;
                let dy = pts[i].1 - pts[j].1;
                let d = dx * dx + dy * dy;
                if best.map_or(true, |b| d < b) {
                    best = Some(d);
                }
            }
        }
        return best.map(|b| Rational::from(num_rational::BigRational::from_integer(BigInt::from(b))));
    }
    // Rational fallback.
    let mut best: Option<Rational> = None;
    for i in 0..entries.len() {
        for j in (i + 1)..entries.len() {
            if let (Freq::Pair(a1, b1), Freq::Pair(a2, b2)) = (&entries[i].freq, &entries[j].freq) {
                let dx = a1 - a2;
                let dy = b1 - b2;
                let d = &(&dx * &dx) + &(&dy * &dy);
                if best.as_ref().map_or(true, |b| &d < b) {
                    best = Some(d);
                }
            }
        }
    }
    best
}

fn gap_of_entries(entries: &[Entry]) -> f64 {
    if entries.len() < 2 {
        return f64::INFINITY;
    }
    match entries[0].freq {
        Freq::Scalar(_) => match min_scalar_gap(entries) {
            Some(g) => g.to_f64(),
            None => f64::INFINITY,
        },
        Freq::Pair(..) => match min_pair_gap_squared(entries) {
            Some(g) => g.to_f64().sqrt(),
            None => f64::INFINITY,
        },
    }
}

fn scalar_entry(label: Label, freq: Rational) -> Entry {
    Entry { label, freq: Freq::Scalar(freq), poly: false }
}

/// Frequency `k² − ak` of a Schrödinger mode restricted to a segment of
/// slope `a`.
pub fn schrodinger_freq(a: &Rational, k: i64) -> Rational {
    let k_rat = Rational::from_integer(k);
    &(&k_rat * &k_rat) - &(a * &k_rat)
}

/// Frequency `±k² − ak` of a beam branch.
pub fn beam_freq(a: &Rational, k: i64, sign: Sign) -> Rational {
    let k_rat = Rational::from_integer(k);
    let k2 = &k_rat * &k_rat;
    let signed = match sign {
        Sign::Plus => k2,
        Sign::Minus => -&k2,
    };
    &signed - &(a * &k_rat)
}

/// Exponents `{k² − ak : |k| ≤ n}` of the Schrödinger equation along a
/// segment of slope `a`. Collisions happen exactly for integer `a` (labels
/// `k` and `a − k` coincide).
pub fn schrodinger_exponents(a: &Rational, n: i64) -> ExponentSet {
    assert!(n >= 1, "truncation must be positive");
    let entries =
        (-n..=n).map(|k| scalar_entry(Label::Index(k), schrodinger_freq(a, k))).collect();
    ExponentSet::new(Family::Schrodinger { a: a.clone() }, n, entries)
}

/// Beam exponents `{±k² − ak : 0 < |k| ≤ n}` plus the `{1, t}` block at
/// frequency zero. A cross-branch collision between `(k, +)` and `(m, −)`
/// occurs exactly when `(k, m)` lies on the circle `S_a`.
pub fn beam_exponents(a: &Rational, n: i64) -> ExponentSet {
    assert!(n >= 1, "truncation must be positive");
    let mut entries = vec![Entry {
        label: Label::ZeroBlock,
        freq: Freq::Scalar(Rational::zero()),
        poly: true,
    }];
    for k in -n..=n {
        if k == 0 {
            continue;
        }
        entries.push(scalar_entry(Label::Branch(k, Sign::Plus), beam_freq(a, k, Sign::Plus)));
        entries.push(scalar_entry(Label::Branch(k, Sign::Minus), beam_freq(a, k, Sign::Minus)));
    }
    ExponentSet::new(Family::Beam { a: a.clone() }, n, entries)
}

/// Plate exponents `{(ak + bℓ, ±(k² + ℓ²)) : |k|, |ℓ| ≤ n}` plus the
/// `{1, t}` block at `(0, 0)`.
pub fn plate_exponents(a: i64, b: i64, n: i64) -> ExponentSet {
    assert!((a, b) != (0, 0), "direction must be nonzero");
    assert!(n >= 1, "truncation must be positive");
    let mut entries = vec![Entry {
        label: Label::ZeroBlock,
        freq: Freq::Pair(Rational::zero(), Rational::zero()),
        poly: true,
    }];
    for k in -n..=n {
        for l in -n..=n {
            if (k, l) == (0, 0) {
                continue;
            }
            let s_freq = Rational::from_integer(a * k + b * l);
            let t_freq = Rational::from_integer(k * k + l * l);
            entries.push(Entry {
                label: Label::Mode(k, l, Sign::Plus),
                freq: Freq::Pair(s_freq.clone(), t_freq.clone()),
                poly: false,
            });
            entries.push(Entry {
                label: Label::Mode(k, l, Sign::Minus),
                freq: Freq::Pair(s_freq, -&t_freq),
                poly: false,
            });
        }
    }
    ExponentSet::new(Family::Plate { a, b }, n, entries)
}

/// The integers `Z ∩ [−n, n]`, gap 1.
pub fn integer_exponents(n: i64) -> ExponentSet {
    assert!(n >= 1);
    let entries = (-n..=n)
        .map(|k| scalar_entry(Label::Index(k), Rational::from_integer(k)))
        .collect();
    ExponentSet::new(Family::Custom { name: "integers".into() }, n, entries)
}

/// The squares `{k² : 0 ≤ k ≤ n}`, gap 1 with tail gap `2m + 1` after
/// dropping the first `m`.
pub fn square_exponents(n: i64) -> ExponentSet {
    assert!(n >= 1);
    let entries = (0..=n)
        .map(|k| scalar_entry(Label::Index(k), Rational::from_integer(k * k)))
        .collect();
    ExponentSet::new(Family::Custom { name: "squares".into() }, n, entries)
}

/// The deduplicated 2-D set `{(m, m² + n²) : |m|, |n| ≤ n}` underlying the
/// plate separation argument. Its gap is exactly 1 for every `n ≥ 1`.
pub fn plate_separation_set(n: i64) -> ExponentSet {
    assert!(n >= 1);
    let mut points = BTreeSet::new();
    for m in -n..=n {
        for j in -n..=n {
            points.insert((m, m * m + j * j));
        }
    }
    let entries = points
        .into_iter()
        .enumerate()
        .map(|(i, (m, v))| Entry {
            label: Label::Index(i as i64),
            freq: Freq::Pair(Rational::from_integer(m), Rational::from_integer(v)),
            poly: false,
        })
        .collect();
    ExponentSet::new(Family::Custom { name: "plate-separation".into() }, n, entries)
}

/// A custom scalar set from explicit (label, frequency) pairs.
pub fn custom_scalar_set(name: &str, freqs: Vec<(i64, Rational)>) -> ExponentSet {
    let entries =
        freqs.into_iter().map(|(k, f)| scalar_entry(Label::Index(k), f)).collect();
    ExponentSet::new(Family::Custom { name: name.into() }, 0, entries)
}

/// Pairwise separation report for the Schrödinger family of slope `a`.
///
/// Uses the factorisation `(k² − ak) − (m² − am) = (k − m)(k + m − a)`:
/// for non-integer `a` every pairwise distance is at least `d(a, Z)`, and on
/// the branch `k ≥ a/2` consecutive gaps equal `2k + 1 − a ≥ 1`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub a: Rational,
    pub n: i64,
    /// `d(a, Z)`, distance from `a` to the nearest integer.
    pub dist_to_int: f64,
    /// Minimum pairwise distance over `|k|, |m| ≤ n` (`None` for n < 1).
    pub min_pair_gap: Option<f64>,
    /// A pair attaining the minimum.
    pub min_pair: Option<(i64, i64)>,
    /// Colliding index pairs `(k, m)`, `k < m` (nonempty iff `a` integer
    /// within range).
    pub collisions: Vec<(i64, i64)>,
    /// Whether every pairwise distance is `≥ d(a, Z)` (trivially true for
    /// integer `a` only when there are no collisions).
    pub lower_bound_ok: bool,
    /// Minimum of `2k + 1 − a` over `a/2 ≤ k < n`.
    pub monotone_min: Option<f64>,
    /// Whether that minimum is `≥ 1`.
    pub monotone_ok: bool,
}

pub fn separation_certificate(a: &Rational, n: i64) -> SeparationCertificate {
    let set = schrodinger_exponents(a, n);
    let d = a.dist_to_int();

    let mut min_gap: Option<Rational> = None;
    let mut min_pair = None;
    let mut collisions = Vec::new();
    for k in -n..=n {
        let fk = schrodinger_freq(a, k);
        for m in (k + 1)..=n {
            let fm = schrodinger_freq(a, m);
            let diff = (&fk - &fm).abs();
            if diff.is_zero() {
                collisions.push((k, m));
                continue;
            }
            if min_gap.as_ref().map_or(true, |g| &diff < g) {
                min_gap = Some(diff);
                min_pair = Some((k, m));
            }
        }
    }

    let lower_bound_ok = if a.is_integer() {
        collisions.is_empty()
    } else {
        collisions.is_empty() && min_gap.as_ref().map_or(true, |g| g >= &d)
    };

    // Consecutive gaps on the branch k ≥ a/2: 2k + 1 − a.
    let two = Rational::from_integer(2);
    let half_a = {
        let h = a.inner() / num_rational::BigRational::from_integer(BigInt::from(2));
        Rational::from(h)
    };
    let k_start_big = {
        // smallest integer ≥ a/2
        let fl = half_a.floor_int();
        if half_a.is_integer() {
            fl
        } else {
            fl + 1
        }
    };
    let mut monotone_min: Option<Rational> = None;
    if let Some(k_start) = k_start_big.to_i64() {
        for k in k_start..n {
            let g = &(&(&two * &Rational::from_integer(k)) + &Rational::from_integer(1)) - a;
            if monotone_min.as_ref().map_or(true, |m| &g < m) {
                monotone_min = Some(g);
            }
        }
    }
    let monotone_ok = monotone_min.as_ref().map_or(true, |m| m >= &Rational::from_integer(1));

    debug_assert_eq!(set.collisions.is_empty(), collisions.is_empty());
    SeparationCertificate {
        a: a.clone(),
        n,
        dist_to_int: d.to_f64(),
        min_pair_gap: min_gap.map(|g| g.to_f64()),
        min_pair,
        collisions,
        lower_bound_ok,
        monotone_min: monotone_min.map(|m| m.to_f64()),
        monotone_ok,
    }
}
