//! Quasi-static comparison in dimensional variables.

use num_complex::Complex64;

use crate::dispersion::LoveMode;
use crate::error::{Error, Result};
use crate::transfer::ElasticPair;

use super::friction::RateStateFriction;

/// Roots of `a·x² + b·x + c`, larger real part first. Real roots avoid
/// cancellation; a negative discriminant gives a conjugate pair.
pub(crate) fn solve_quadratic(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let re = |x: f64| Complex64::new(x, 0.0);
    if a == 0.0 {
        let x = if b == 0.0 { f64::NAN } else { -c / b };
        return [re(x), re(f64::NAN)];
    }
    let disc = b * b - 4.0 * a * c;
    let mut roots = if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            [re(0.0), re(0.0)]
        } else {
            [re(q / a), re(c / q)]
        }
    } else {
        let x = -b / (2.0 * a);
        let y = (-disc).sqrt() / (2.0 * a).abs();
        [Complex64::new(x, y), Complex64::new(x, -y)]
    };
    if roots[1].re > roots[0].re {
        roots.swap(0, 1);
    }
    roots
}

/// Growth rates `p` (1/s) of the quasi-static layer problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasistaticRoots {
    /// From the small-`|k|h` quadratic.
    pub small_k: [Complex64; 2],
    /// From the full quasi-static relation (also a quadratic in `p`).
    pub exact: [Complex64; 2],
}

/// Quasi-static growth rates at wavenumber `k`.
pub fn quasistatic_roots(
    ep: &ElasticPair,
    fr: &RateStateFriction,
    k: f64,
) -> Result<QuasistaticRoots> {
    if !(k.is_finite() && k != 0.0) {
        return Err(Error::InvalidArgument(format!(
            "wavenumber must be finite and nonzero, got {k}"
        )));
    }
    let k = k.abs();
    let (mu, v, l, sigma) = (ep.mu_layer, fr.v_o, fr.l, fr.sigma_o);
    let bma = fr.b - fr.a;
    let small_k = solve_quadratic(
        fr.a,
        mu * v * k * k * ep.h / sigma - bma * v / l,
        mu * v * v * k * k * ep.h / (l * sigma),
    );

    let m = ep.mu_sub / mu;
    let kh = k * ep.h;
    let f_qs = if kh.is_finite() {
        2.0 * m * kh.tanh() / (kh.tanh() + m)
    } else {
        2.0 * m / (1.0 + m)
    };
    let stiff = 0.5 * mu * k * f_qs;
    let exact = solve_quadratic(sigma * fr.a / v, stiff - sigma * bma / l, stiff * v / l);

    let tol = 10.0 * kh.min(1.0) * (1.0 / m).max(1.0);
    for (x, y) in small_k.iter().zip(&exact) {
        let scale = x.norm().max(y.norm());
        if (x - y).norm() > tol * scale + 1e-300 {
            log::warn!("small-k quasi-static root {x} departs from the full relation's {y} beyond the expected remainder");
        }
    }
    Ok(QuasistaticRoots { small_k, exact })
}

/// Growth rates of the Love pair destabilized by elastodynamic stress
/// transfer, `p = A₀μc_sV_o|k| / (2(b − a)σ_o c₀) ± i·c₀|k|`.
pub fn predict_dynamic_extra_root(
    ep: &ElasticPair,
    fr: &RateStateFriction,
    k: f64,
    fundamental: &LoveMode,
) -> Result<[Complex64; 2]> {
    let bma = fr.b - fr.a;
    if bma <= 0.0 {
        return Err(Error::Regime(format!(
            "extra unstable root needs b > a (b - a = {bma})"
        )));
    }
    let k = k.abs();
    let cs = ep.cs_layer();
    let c0 = fundamental.c * cs;
    let re = fundamental.a * ep.mu_layer * cs * fr.v_o * k / (2.0 * bma * fr.sigma_o * c0);
    Ok([Complex64::new(re, c0 * k), Complex64::new(re, -c0 * k)])
}
