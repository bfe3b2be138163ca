//! Complex gamma function and the imaginary-axis modulus identity.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function of a complex argument (Lanczos, g = 7, n = 9), with the
/// reflection formula for `Re z < 1/2`.
pub fn complex_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (Complex64::new(PI, 0.0) * z).sin();
        return Complex64::new(PI, 0.0) / (s * complex_gamma(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// `|Gamma(-i x)|^2 = pi / (x sinh(pi x))`.
pub fn gamma_magnitude_sq(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "gamma_magnitude_sq",
            format!("argument must be positive (pole at 0), got {x}"),
        ));
    }
    Ok(PI / (x * (PI * x).sinh()))
}

/// Planck factor `1 / (e^y - 1)` evaluated without loss for small `y`.
pub fn planck_factor(y: f64) -> f64 {
    1.0 / y.exp_m1()
}
