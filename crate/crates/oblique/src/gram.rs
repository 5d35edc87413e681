//! Gram matrices of exponential (plus polynomial) systems over observation
//! windows, assembled in closed form.
//!
//! For a basis `f_i(t) = t^{d_i} e^{iλ_i t}` on `(0, T)` the entries
//! `G_ij = ∫ f_j \bar f_i` make `c* G c = ∫ |Σ c_i f_i|²`, so the extremal
//! eigenvalues of `G` are the best constants in the two-sided comparison of
//! observation energy with coefficient norm at this truncation. Plate bases
//! on `(0, S) × (0, T)` factor into a product of an `s`-integral and a
//! `t`-integral.
//!
//! Exact frequency collisions are kept as duplicated rows, so a collision
//! shows up as an exactly singular matrix rather than being silently merged.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::spectra::{self, ExponentSet, Family, Freq};
use crate::{Error, Result};

/// Near-collision threshold for the degenerate closed-form branch.
pub const FREQ_EPS: f64 = 1e-13;

/// Relative eigenvalue tolerance promised by [`extremal_eigs`].
pub const EIG_TOL: f64 = 1e-9;

/// `∫₀ᵀ t^d e^{iδt} dt` for `d ∈ {0, 1, 2}` in closed form.
fn poly_exp_integral(d: u8, delta: f64, t_len: f64) -> Complex64 {
    if delta.abs() < FREQ_EPS {
        let p = d as i32 + 1;
        return Complex64::new(t_len.powi(p) / p as f64, 0.0);
    }
    let i_delta = Complex64::new(0.0, delta);
    let e = (i_delta * t_len).exp();
    let one = Complex64::new(1.0, 0.0);
    match d {
        0 => (e - one) / i_delta,
        1 => e * t_len / i_delta - (e - one) / (i_delta * i_delta),
        2 => {
            let i2 = i_delta * i_delta;
            e * t_len * t_len / i_delta - (e * t_len / i2 - (e - one) / (i2 * i_delta)) * 2.0
        }
        _ => unreachable!("polynomial degrees are at most 1 per factor"),
    }
}

/// `∫₀ᵀ e^{i(λ−μ)t} dt`; equals `T` on the diagonal.
pub fn gram_entry(lambda: f64, mu: f64, t_len: f64) -> Complex64 {
    poly_exp_integral(0, lambda - mu, t_len)
}

/// `∫₀ᵀ t^{d₁+d₂} e^{i(λ−μ)t} dt` for polynomial-times-exponential pairs.
pub fn gram_poly_entry(d1: u8, lambda: f64, d2: u8, mu: f64, t_len: f64) -> Complex64 {
    assert!(d1 <= 1 && d2 <= 1);
    poly_exp_integral(d1 + d2, lambda - mu, t_len)
}

/// One basis function of a Gram system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BasisElement {
    /// `t^degree · e^{i·freq·t}` on an interval.
    Line { freq: f64, degree: u8 },
    /// `e^{i·s_freq·s} · t^degree · e^{i·t_freq·t}` on a rectangle.
    Rect { s_freq: f64, t_freq: f64, degree: u8 },
}

/// Observation window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Window {
    Interval { t_len: f64 },
    Rect { s_len: f64, t_len: f64 },
}

impl Window {
    pub fn measure(&self) -> f64 {
        match self {
            Window::Interval { t_len } => *t_len,
            Window::Rect { s_len, t_len } => s_len * t_len,
        }
    }
}

/// Dense Hermitian Gram matrix of a basis over a window.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub basis: Vec<BasisElement>,
    pub window: Window,
    pub matrix: DMatrix<Complex64>,
}

fn entry(bi: &BasisElement, bj: &BasisElement, window: &Window) -> Complex64 {
    match (bi, bj, window) {
        (
            BasisElement::Line { freq: fi, degree: di },
            BasisElement::Line { freq: fj, degree: dj },
            Window::Interval { t_len },
        ) => poly_exp_integral(di + dj, fj - fi, *t_len),
        (
            BasisElement::Rect { s_freq: si, t_freq: ti, degree: di },
            BasisElement::Rect { s_freq: sj, t_freq: tj, degree: dj },
            Window::Rect { s_len, t_len },
        ) => poly_exp_integral(0, sj - si, *s_len) * poly_exp_integral(di + dj, tj - ti, *t_len),
        _ => panic!("basis kind does not match window kind"),
    }
}

/// Assemble the Gram matrix of a basis.
pub fn build_gram(basis: &[BasisElement], window: Window) -> GramMatrix {
    assert!(!basis.is_empty(), "basis must be nonempty");
    let n = basis.len();
    let matrix = DMatrix::from_fn(n, n, |i, j| entry(&basis[i], &basis[j], &window));
    GramMatrix { basis: basis.to_vec(), window, matrix }
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// `Re(c* G c)`, the observation energy of the coefficient vector.
    pub fn quadratic_form(&self, c: &[Complex64]) -> f64 {
        assert_eq!(c.len(), self.size());
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..c.len() {
            for j in 0..c.len() {
                acc += c[i].conj() * self.matrix[(i, j)] * c[j];
            }
        }
        acc.re
    }

    /// Largest absolute deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.size();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

/// Smallest and largest eigenvalue of a Hermitian Gram matrix.
pub fn extremal_eigs(gram: &GramMatrix) -> Result<(f64, f64)> {
    let size = gram.size();
    let eig = gram
        .matrix
        .clone()
        .try_symmetric_eigen(1e-13, 100_000)
        .ok_or(Error::EigenFailed { size, iterations: 100_000 })?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in eig.eigenvalues.iter() {
        lo = lo.min(*v);
        hi = hi.max(*v);
    }
    Ok((lo, hi))
}

/// Gram basis with one row per label: exact collisions stay duplicated.
pub fn gram_basis_per_label(set: &ExponentSet) -> Vec<BasisElement> {
    let mut basis = Vec::new();
    for e in &set.entries {
        match &e.freq {
            Freq::Scalar(f) => {
                let f = f.to_f64();
                basis.push(BasisElement::Line { freq: f, degree: 0 });
                if e.poly {
                    basis.push(BasisElement::Line { freq: f, degree: 1 });
                }
            }
            Freq::Pair(s, t) => {
                let (s, t) = (s.to_f64(), t.to_f64());
                basis.push(BasisElement::Rect { s_freq: s, t_freq: t, degree: 0 });
                if e.poly {
                    basis.push(BasisElement::Rect { s_freq: s, t_freq: t, degree: 1 });
                }
            }
        }
    }
    basis
}

/// Gram basis on the deduplicated frequency set (the set view).
pub fn gram_basis_distinct(set: &ExponentSet) -> Vec<BasisElement> {
    let poly_freqs: Vec<Freq> =
        set.entries.iter().filter(|e| e.poly).map(|e| e.freq.clone()).collect();
    let mut basis = Vec::new();
    for f in set.distinct_frequencies() {
        let poly = poly_freqs.contains(&f);
        match &f {
            Freq::Scalar(r) => {
                let r = r.to_f64();
                basis.push(BasisElement::Line { freq: r, degree: 0 });
                if poly {
                    basis.push(BasisElement::Line { freq: r, degree: 1 });
                }
            }
            Freq::Pair(s, t) => {
                let (s, t) = (s.to_f64(), t.to_f64());
                basis.push(BasisElement::Rect { s_freq: s, t_freq: t, degree: 0 });
                if poly {
                    basis.push(BasisElement::Rect { s_freq: s, t_freq: t, degree: 1 });
                }
            }
        }
    }
    basis
}

/// Truncated two-sided observability constants of one family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObservabilityEstimate {
    pub family: Family,
    pub truncation: i64,
    pub size: usize,
    /// Observation window length `T` (plates use `(0,1) × (0,T)`).
    pub t_len: f64,
    /// Smallest Gram eigenvalue: the truncated inverse-inequality constant.
    pub c_minus: f64,
    /// Largest Gram eigenvalue: the truncated direct-inequality constant.
    pub c_plus: f64,
    /// Gap of the exponent family at this truncation.
    pub gap: f64,
}

fn family_exponents(family: &Family, n: i64) -> Result<ExponentSet> {
    match family {
        Family::Schrodinger { a } => Ok(spectra::schrodinger_exponents(a, n)),
        Family::Beam { a } => Ok(spectra::beam_exponents(a, n)),
        Family::Plate { a, b } => {
            if (*a, *b) == (0, 0) {
                return Err(Error::Invalid("plate direction must be nonzero".into()));
            }
            Ok(spectra::plate_exponents(*a, *b, n))
        }
        Family::Custom { name } => {
            Err(Error::Invalid(format!("no Gram family for custom set `{name}`")))
        }
    }
}

/// Windowed Gram basis of a family.
///
/// Schrödinger and beam systems keep one row per generating label, so an
/// exact collision forces a zero eigenvalue. Plate systems are built on the
/// deduplicated frequency set: the separated object behind the plate
/// estimate is the set, whose mirror-mode coincidences are merged rather
/// than duplicated.
pub fn family_basis(family: &Family, n: i64) -> Result<(ExponentSet, Vec<BasisElement>)> {
    let set = family_exponents(family, n)?;
    let basis = match family {
        Family::Plate { .. } => gram_basis_distinct(&set),
        _ => gram_basis_per_label(&set),
    };
    Ok((set, basis))
}

/// Truncated observability constants `(μ_min, μ_max)` for one family,
/// window length `T` and truncation `n`.
pub fn observability_constants(
    family: &Family,
    t_len: f64,
    n: i64,
) -> Result<ObservabilityEstimate> {
    if t_len <= 0.0 {
        return Err(Error::Invalid(format!("window length must be positive, got {t_len}")));
    }
    let (set, basis) = family_basis(family, n)?;
    let window = match family {
        Family::Plate { .. } => Window::Rect { s_len: 1.0, t_len },
        _ => Window::Interval { t_len },
    };
    let gram = build_gram(&basis, window);
    let (c_minus, c_plus) = extremal_eigs(&gram)?;
    Ok(ObservabilityEstimate {
        family: family.clone(),
        truncation: n,
        size: gram.size(),
        t_len,
        c_minus,
        c_plus,
        gap: set.gap(),
    })
}

/// Constants over a truncation sweep, in ascending order of `n`.
pub fn observability_sweep(
    family: &Family,
    t_len: f64,
    ns: &[i64],
) -> Result<Vec<ObservabilityEstimate>> {
    ns.iter().map(|&n| observability_constants(family, t_len, n)).collect()
}

/// Convenience constructor for Schrödinger families.
pub fn schrodinger_family(a: &Rational) -> Family {
    Family::Schrodinger { a: a.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_parse;
    use crate::quadrature;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn rat(s: &str) -> Rational {
        rat_parse(s).unwrap()
    }

    #[test]
    fn entry_identity_and_full_period() {
        let two_pi = 2.0 * std::f64::consts::PI;
        assert_relative_eq!(gram_entry(3.0, 3.0, two_pi).re, two_pi);
        assert!(gram_entry(4.0, 3.0, two_pi).norm() < 1e-14);
        // λ−μ = 1, T = π: (e^{iπ}−1)/i = 2i.
        let v = gram_entry(1.0, 0.0, std::f64::consts::PI);
        assert_relative_eq!(v.re, 0.0, epsilon = 1e-14);
        assert_relative_eq!(v.im, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn poly_entries_degenerate() {
        assert_relative_eq!(gram_poly_entry(1, 0.0, 1, 0.0, 1.0).re, 1.0 / 3.0);
        assert_relative_eq!(gram_poly_entry(1, 2.5, 0, 2.5, 2.0).re, 2.0);
    }

    #[test]
    fn poly_entry_matches_spec_closed_form() {
        // d₁=1, d₂=0, λ−μ=π, T=1: −iT e^{iπT}/π + (e^{iπT}−1)/π².
        let pi = std::f64::consts::PI;
        let got = gram_poly_entry(1, pi, 0, 0.0, 1.0);
        let e = Complex64::new(0.0, pi).exp();
        let want = -Complex64::i() * e / pi + (e - Complex64::new(1.0, 0.0)) / (pi * pi);
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn poly_entries_match_quadrature() {
        for (d1, d2, delta, t_len) in [
            (0u8, 1u8, std::f64::consts::PI, 1.0),
            (1, 1, 2.3, 1.7),
            (0, 0, -5.0, 2.2),
            (1, 0, 0.0, 3.0),
        ] {
            let closed = gram_poly_entry(d1, delta, d2, 0.0, t_len);
            let quad = quadrature::integrate_oscillatory_complex(0.0, t_len, delta, |t| {
                Complex64::new(t.powi((d1 + d2) as i32), 0.0) * Complex64::new(0.0, delta * t).exp()
            });
            assert!((closed - quad).norm() < 1e-10, "d=({d1},{d2}), δ={delta}");
        }
    }

    #[test]
    fn integer_basis_full_period_is_parseval() {
        let set = spectra::integer_exponents(6);
        let basis = gram_basis_per_label(&set);
        let two_pi = 2.0 * std::f64::consts::PI;
        let gram = build_gram(&basis, Window::Interval { t_len: two_pi });
        for i in 0..gram.size() {
            for j in 0..gram.size() {
                let want = if i == j { Complex64::new(two_pi, 0.0) } else { Complex64::default() };
                assert!((gram.matrix[(i, j)] - want).norm() < 1e-13);
            }
        }
        let (lo, hi) = extremal_eigs(&gram).unwrap();
        assert_relative_eq!(lo, two_pi, max_relative = 1e-12);
        assert_relative_eq!(hi, two_pi, max_relative = 1e-12);
    }

    #[test]
    fn single_frequency_gram() {
        let gram = build_gram(
            &[BasisElement::Line { freq: 4.5, degree: 0 }],
            Window::Interval { t_len: 1.25 },
        );
        assert_eq!(gram.size(), 1);
        assert_relative_eq!(gram.matrix[(0, 0)].re, 1.25);
    }

    #[test]
    fn collision_makes_singular_gram() {
        let set = spectra::schrodinger_exponents(&rat("2"), 2);
        let gram = build_gram(&gram_basis_per_label(&set), Window::Interval { t_len: 1.0 });
        let (lo, hi) = extremal_eigs(&gram).unwrap();
        assert!(lo.abs() <= EIG_TOL * hi, "lo={lo}, hi={hi}");
    }

    #[test]
    fn two_by_two_closed_form() {
        let basis = [
            BasisElement::Line { freq: 0.0, degree: 0 },
            BasisElement::Line { freq: 1.3, degree: 0 },
        ];
        let t_len = 0.9;
        let gram = build_gram(&basis, Window::Interval { t_len });
        let g = gram.matrix[(0, 1)].norm();
        let (lo, hi) = extremal_eigs(&gram).unwrap();
        assert_relative_eq!(lo, t_len - g, max_relative = 1e-12);
        assert_relative_eq!(hi, t_len + g, max_relative = 1e-12);
    }

    #[test]
    fn hermitian_and_psd_random_bases() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(2..8);
            let basis: Vec<BasisElement> = (0..n)
                .map(|_| BasisElement::Line {
                    freq: rng.gen_range(-30.0..30.0),
                    degree: u8::from(rng.gen_bool(0.2)),
                })
                .collect();
            let gram = build_gram(&basis, Window::Interval { t_len: rng.gen_range(0.5..3.0) });
            assert!(gram.hermitian_defect() < 1e-14);
            let (lo, _) = extremal_eigs(&gram).unwrap();
            let trace: f64 = (0..gram.size()).map(|i| gram.matrix[(i, i)].re).sum();
            assert!(lo >= -1e-9 * trace, "lo={lo}, trace={trace}");
        }
    }

    #[test]
    fn quadratic_form_matches_quadrature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let set = spectra::schrodinger_exponents(&rat("1/2"), 4);
        let basis = gram_basis_per_label(&set);
        let t_len = 1.4;
        let gram = build_gram(&basis, Window::Interval { t_len });
        for _ in 0..5 {
            let c: Vec<Complex64> = (0..basis.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let via_gram = gram.quadratic_form(&c);
            let freqs: Vec<f64> = basis
                .iter()
                .map(|b| match b {
                    BasisElement::Line { freq, .. } => *freq,
                    _ => unreachable!(),
                })
                .collect();
            let max_freq = 2.0 * freqs.iter().fold(0.0f64, |m, f| m.max(f.abs()));
            let via_quad = quadrature::integrate_oscillatory(0.0, t_len, max_freq, |t| {
                freqs
                    .iter()
                    .zip(&c)
                    .map(|(f, ck)| ck * Complex64::new(0.0, f * t).exp())
                    .sum::<Complex64>()
                    .norm_sqr()
            });
            assert_relative_eq!(via_gram, via_quad, max_relative = 1e-6);
        }
    }

    #[test]
    fn schrodinger_integer_slope_not_observable() {
        let est = observability_constants(&Family::Schrodinger { a: rat("2") }, 1.0, 5).unwrap();
        assert!(est.c_minus <= EIG_TOL * est.c_plus);
    }

    #[test]
    fn schrodinger_half_sweep_stabilizes() {
        let family = Family::Schrodinger { a: rat("1/2") };
        let sweep = observability_sweep(&family, 1.0, &[10, 20, 30, 40]).unwrap();
        for w in sweep.windows(2) {
            assert!(w[1].c_minus <= w[0].c_minus + 1e-12, "μ_min must not increase");
            assert!(w[1].c_plus >= w[0].c_plus - 1e-12, "μ_max must not decrease");
        }
        let last = sweep.last().unwrap();
        assert!(last.c_minus > 0.0);
        // Window measure sits between the extremal eigenvalues.
        assert!(last.c_minus <= 1.0 + 1e-12 && 1.0 <= last.c_plus + 1e-12);
    }

    #[test]
    fn plate_diagonal_direction_observable() {
        let est =
            observability_constants(&Family::Plate { a: 1, b: 1 }, 2.0 * std::f64::consts::PI, 3)
                .unwrap();
        assert!(est.c_minus > EIG_TOL * est.c_plus, "c_minus={}", est.c_minus);
    }

    #[test]
    fn beam_aset_controls_singularity() {
        let est = observability_constants(&Family::Beam { a: rat("1/2") }, 1.0, 4).unwrap();
        assert!(est.c_minus > 0.0);
        // A_{−13/5} = {(−3,2),(−2,3)} enters the truncation at n = 3.
        let est = observability_constants(&Family::Beam { a: rat("-13/5") }, 1.0, 4).unwrap();
        assert!(est.c_minus <= EIG_TOL * est.c_plus);
    }
}
