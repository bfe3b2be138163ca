//! Embedded Dormand-Prince 5(4) integrator with adaptive step control.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Difference between the 5th-order and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Step-size controlled Dormand-Prince 5(4) settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on |h|; `f64::INFINITY` for none.
    pub h_max: f64,
    /// Below this |h| the integration stops and reports truncation.
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Dopri5 {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: f64::INFINITY,
            h_min: 1e-14,
            max_steps: 5_000_000,
        }
    }
}

/// Final state of an integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub t: f64,
    pub y: Vec<f64>,
    pub accepted: usize,
    pub rejected: usize,
    /// Set when the step size collapsed below `h_min` before reaching the end.
    pub truncated: bool,
}

impl Dopri5 {
    pub fn with_tolerance(rtol: f64, atol: f64) -> Self {
        Dopri5 {
            rtol,
            atol,
            ..Default::default()
        }
    }

    /// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
    ///
    /// `admissible` may veto a trial step (the step is then retried with half
    /// the size). `observe` sees every accepted step.
    pub fn integrate<F, A, O>(
        &self,
        mut f: F,
        t0: f64,
        t1: f64,
        y0: &[f64],
        mut admissible: A,
        mut observe: O,
    ) -> Result<Integration>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
        A: FnMut(&[f64]) -> bool,
        O: FnMut(f64, &[f64]),
    {
        let n = y0.len();
        let mut y = y0.to_vec();
        let mut t = t0;
        let span = t1 - t0;
        let mut out = Integration {
            t,
            y: y.clone(),
            accepted: 0,
            rejected: 0,
            truncated: false,
        };
        if span == 0.0 {
            return Ok(out);
        }
        let dir = span.signum();

        let mut k1 = vec![0.0; n];
        let mut k2 = vec![0.0; n];
        let mut k3 = vec![0.0; n];
        let mut k4 = vec![0.0; n];
        let mut k5 = vec![0.0; n];
        let mut k6 = vec![0.0; n];
        let mut k7 = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        let mut y_new = vec![0.0; n];

        f(t, &y, &mut k1);
        let mut h = self.initial_step(&y, &k1, span.abs()) * dir;

        while (t1 - t) * dir > 0.0 {
            if out.accepted + out.rejected >= self.max_steps {
                return Err(Error::NonConvergence {
                    op: "Dopri5::integrate",
                    msg: format!("exceeded {} steps at t = {t}", self.max_steps),
                });
            }
            let last = (t + h - t1) * dir >= 0.0;
            if last {
                h = t1 - t;
            }

            for i in 0..n {
                tmp[i] = y[i] + h * A21 * k1[i];
            }
            f(t + C2 * h, &tmp, &mut k2);
            for i in 0..n {
                tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            f(t + C3 * h, &tmp, &mut k3);
            for i in 0..n {
                tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            f(t + C4 * h, &tmp, &mut k4);
            for i in 0..n {
                tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            f(t + C5 * h, &tmp, &mut k5);
            for i in 0..n {
                tmp[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            f(t + h, &tmp, &mut k6);
            for i in 0..n {
                y_new[i] = y[i]
                    + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
            }
            f(t + h, &y_new, &mut k7);

            let mut err_sq = 0.0;
            for i in 0..n {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err_sq += (e / scale).powi(2);
            }
            let err = if n == 0 { 0.0 } else { (err_sq / n as f64).sqrt() };

            if err <= 1.0 && admissible(&y_new) {
                t = if last { t1 } else { t + h };
                std::mem::swap(&mut y, &mut y_new);
                std::mem::swap(&mut k1, &mut k7);
                out.accepted += 1;
                observe(t, &y);
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h *= factor;
            } else {
                out.rejected += 1;
                let factor = if err > 1.0 {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 0.5)
                } else {
                    0.5
                };
                h *= factor;
            }
            if h.abs() > self.h_max {
                h = self.h_max * dir;
            }
            if h.abs() < self.h_min && (t1 - t) * dir > self.h_min {
                out.truncated = true;
                break;
            }
        }
        out.t = t;
        out.y = y;
        Ok(out)
    }

    fn initial_step(&self, y: &[f64], dy: &[f64], span: f64) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for (yi, fi) in y.iter().zip(dy) {
            let sc = self.atol + self.rtol * yi.abs();
            d0 += (yi / sc).powi(2);
            d1 += (fi / sc).powi(2);
        }
        let h = if d0 < 1e-10 || d1 < 1e-10 {
            1e-6
        } else {
            0.01 * (d0 / d1).sqrt()
        };
        h.min(span).min(self.h_max).max(self.h_min)
    }
}
