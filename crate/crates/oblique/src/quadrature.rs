//! Composite Gauss–Legendre quadrature for trigonometric-polynomial
//! integrands.
//!
//! Panel counts are chosen from the fastest oscillation of the integrand so
//! that each panel sees at least eight nodes per period, which keeps the
//! rule in its spectral-accuracy regime.

use num_complex::Complex64;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build the rule by Newton iteration on the Legendre polynomial.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-based initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence: p1 = P_n(x), dp = P_n'(x).
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(mid + half * x) * w)
            .sum::<Complex64>()
            * half
    }
}

const PANEL_ORDER: usize = 12;

/// Number of equal panels needed on an interval of length `len` when the
/// integrand oscillates with angular frequency up to `max_freq`.
pub fn panel_count(len: f64, max_freq: f64) -> usize {
    let periods = len * max_freq.abs() / (2.0 * std::f64::consts::PI);
    let nodes_needed = (8.0 * periods).ceil() as usize;
    (nodes_needed / PANEL_ORDER + 2).max(2)
}

/// Composite integration of a real integrand with oscillation bound
/// `max_freq` (angular) over `[a, b]`.
pub fn integrate_oscillatory<F: FnMut(f64) -> f64>(a: f64, b: f64, max_freq: f64, mut f: F) -> f64 {
    let rule = GaussLegendre::new(PANEL_ORDER);
    let panels = panel_count(b - a, max_freq);
    let step = (b - a) / panels as f64;
    (0..panels)
        .map(|i| rule.integrate(a + i as f64 * step, a + (i + 1) as f64 * step, &mut f))
        .sum()
}

/// Composite integration of a complex integrand.
pub fn integrate_oscillatory_complex<F: FnMut(f64) -> Complex64>(
    a: f64,
    b: f64,
    max_freq: f64,
    mut f: F,
) -> Complex64 {
    let rule = GaussLegendre::new(PANEL_ORDER);
    let panels = panel_count(b - a, max_freq);
    let step = (b - a) / panels as f64;
    (0..panels)
        .map(|i| rule.integrate_complex(a + i as f64 * step, a + (i + 1) as f64 * step, &mut f))
        .sum()
}

/// Tensor-product composite rule on `[0, s_len] × [0, t_len]`.
pub fn integrate_rect<F: FnMut(f64, f64) -> f64>(
    s_len: f64,
    t_len: f64,
    max_s_freq: f64,
    max_t_freq: f64,
    mut f: F,
) -> f64 {
    let rule = GaussLegendre::new(PANEL_ORDER);
    let s_panels = panel_count(s_len, max_s_freq);
    let t_panels = panel_count(t_len, max_t_freq);
    let s_step = s_len / s_panels as f64;
    let t_step = t_len / t_panels as f64;
    let mut total = 0.0;
    for i in 0..s_panels {
        for j in 0..t_panels {
            let (s0, t0) = (i as f64 * s_step, j as f64 * t_step);
            total += rule.integrate(s0, s0 + s_step, |s| {
                rule.integrate(t0, t0 + t_step, |t| f(s, t))
            });
        }
    }
    total
}
