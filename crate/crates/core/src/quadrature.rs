//! Gauss-Legendre panels, Neville extrapolation and the regulated
//! half-line Fourier-type integral.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Affine map of the rule onto `[a, b]`, yielding `(x, w)` pairs.
    pub fn panel(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.panel(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Polynomial extrapolation to `h = 0` through `(h_i, v_i)` by Neville's
/// scheme. Returns the value and the magnitude of the last correction.
pub fn neville_to_zero(h: &[f64], v: &[Complex64]) -> (Complex64, f64) {
    assert_eq!(h.len(), v.len());
    assert!(!h.is_empty());
    let n = h.len();
    let mut p = v.to_vec();
    let mut last_correction = f64::INFINITY;
    for m in 1..n {
        for i in 0..n - m {
            let (hi, hj) = (h[i], h[i + m]);
            let next = (p[i + 1] * hi - p[i] * hj) / (hi - hj);
            if i == 0 {
                last_correction = (next - p[0]).norm();
            }
            p[i] = next;
        }
    }
    if n == 1 {
        last_correction = f64::INFINITY;
    }
    (p[0], last_correction)
}

/// Settings of the regulated half-line integral.
#[derive(Debug, Clone, PartialEq)]
pub struct RegulatedSettings {
    /// Strictly decreasing regulator values.
    pub eps_ladder: Vec<f64>,
    /// Target absolute accuracy of each regulated integral.
    pub abs_tol: f64,
    /// Explicit truncation; derived from the tail bound when `None`.
    pub x_max: Option<f64>,
    /// Boundary between the logarithmic and linear panel layouts.
    pub x_split: f64,
    /// Width of linear panels above `x_split`.
    pub panel_width: f64,
    pub order: usize,
}

/// Regulated integral extrapolated to vanishing regulator.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolated {
    pub value: Complex64,
    pub error: f64,
    pub ladder: Vec<(f64, Complex64)>,
    pub x_max: f64,
}

/// Truncation point with `exp(-eps x_max) / eps < abs_tol / 10`.
pub fn tail_truncation(eps: f64, abs_tol: f64) -> f64 {
    (10.0 / (abs_tol * eps)).ln().max(0.0) / eps
}

/// `lim_{eps -> 0} int_0^inf e^(-eps x) f(x) dx` for a unimodular
/// oscillatory `f`.
///
/// Below `x_split` the substitution `x = e^u` turns a logarithmically
/// oscillating endpoint into a smooth, exponentially decaying integrand; the
/// `u` range starts where the neglected piece `[0, x_lo]` is below
/// `abs_tol / 100` (this relies on `|f| <= 1`). Above `x_split` the line is
/// covered with equal Gauss-Legendre panels up to `x_max`. All regulated
/// values share the same node set, so `f` is evaluated once per node.
pub fn regulated_half_line<F>(f: F, settings: &RegulatedSettings) -> Result<Extrapolated>
where
    F: Fn(f64) -> Complex64,
{
    let ladder = &settings.eps_ladder;
    if ladder.is_empty()
        || ladder.iter().any(|&e| !(e > 0.0))
        || ladder.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::domain(
            "regulated_half_line",
            "regulator ladder must be non-empty, positive and strictly decreasing",
        ));
    }
    if !(settings.abs_tol > 0.0 && settings.x_split > 0.0 && settings.panel_width > 0.0) {
        return Err(Error::domain(
            "regulated_half_line",
            "tolerance, split point and panel width must be positive",
        ));
    }
    let eps_min = *ladder.last().unwrap();
    let x_max = settings
        .x_max
        .unwrap_or_else(|| tail_truncation(eps_min, settings.abs_tol))
        .max(settings.x_split);
    let rule = GaussLegendre::new(settings.order);
    let mut sums = vec![Complex64::new(0.0, 0.0); ladder.len()];

    let mut accumulate = |x: f64, w: f64| {
        let fw = f(x) * w;
        for (s, &eps) in sums.iter_mut().zip(ladder) {
            *s += fw * (-eps * x).exp();
        }
    };

    let u_lo = (settings.abs_tol * 1e-2).ln();
    let u_hi = settings.x_split.ln();
    let n_log = ((u_hi - u_lo).ceil() as usize).max(1);
    let du = (u_hi - u_lo) / n_log as f64;
    for k in 0..n_log {
        let a = u_lo + k as f64 * du;
        for (u, w) in rule.panel(a, a + du) {
            let x = u.exp();
            accumulate(x, w * x);
        }
    }

    let n_lin = ((x_max - settings.x_split) / settings.panel_width).ceil() as usize;
    for k in 0..n_lin {
        let a = settings.x_split + k as f64 * settings.panel_width;
        for (x, w) in rule.panel(a, a + settings.panel_width) {
            accumulate(x, w);
        }
    }

    let (value, error) = neville_to_zero(ladder, &sums);
    Ok(Extrapolated {
        value,
        error,
        ladder: ladder.iter().copied().zip(sums).collect(),
        x_max: settings.x_split + n_lin as f64 * settings.panel_width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let rule = GaussLegendre::new(10);
        let w: f64 = rule.weights.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-14);
        let v = rule.integrate(0.0, 2.0, |x| x.powi(19));
        assert_relative_eq!(v, 2f64.powi(20) / 20.0, max_relative = 1e-13);
        let v = rule.integrate(0.0, std::f64::consts::PI, f64::sin);
        assert_relative_eq!(v, 2.0, max_relative = 1e-13);
    }

    #[test]
    fn neville_recovers_polynomial_limit() {
        let h = [0.4, 0.2, 0.1, 0.05];
        let v: Vec<Complex64> = h
            .iter()
            .map(|&x| Complex64::new(3.0 - 2.0 * x + x * x * x, 1.0 + x))
            .collect();
        let (p0, _) = neville_to_zero(&h, &v);
        assert!((p0 - Complex64::new(3.0, 1.0)).norm() < 1e-13);
    }

    #[test]
    fn regulated_plain_exponential() {
        // int_0^inf e^(-i x) dx = -i in the Abel sense.
        let settings = RegulatedSettings {
            eps_ladder: vec![1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4],
            abs_tol: 1e-12,
            x_max: None,
            x_split: 1.0,
            panel_width: 1.0,
            order: 24,
        };
        let res = regulated_half_line(|x| Complex64::new(0.0, -x).exp(), &settings).unwrap();
        assert!((res.value - Complex64::new(0.0, -1.0)).norm() < 1e-9, "{:?}", res.value);
        assert!(res.error < 1e-8);
    }

    #[test]
    fn ladder_must_decrease() {
        let settings = RegulatedSettings {
            eps_ladder: vec![1e-3, 1e-2],
            abs_tol: 1e-10,
            x_max: None,
            x_split: 1.0,
            panel_width: 1.0,
            order: 8,
        };
        assert!(regulated_half_line(|_| Complex64::new(1.0, 0.0), &settings).is_err());
    }
}
