//! Branch-cut-aware elementary functions.
//!
//! The radical `√(1 + S²)` is taken as `√(1 − iS)·√(1 + iS)` with principal
//! roots of each factor. That places the cuts on the imaginary axis from `±i`
//! to `±i∞` and keeps the real part non-negative everywhere on the cut plane.
//! A point exactly on a cut is evaluated as the limit from `Re S > 0` unless a
//! [`CutSide`] says otherwise.

use num_complex::Complex64;

use crate::error::{ensure_finite, Error, Result};

/// Dimensionless complex frequency `S = p / (|k| c_s)`.
pub type ComplexS = Complex64;

/// Which side of an imaginary-axis cut a point with `Re S = 0` belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutSide {
    #[default]
    Right,
    Left,
}

/// Principal square root, accurate for arguments close to the negative real
/// axis. The sign of a zero imaginary part selects the side of the cut.
pub(crate) fn principal_sqrt(w: Complex64) -> Complex64 {
    let (x, y) = (w.re, w.im);
    if x == 0.0 && y == 0.0 {
        return Complex64::new(0.0, y);
    }
    let t = ((x.abs() + x.hypot(y)) * 0.5).sqrt();
    if x >= 0.0 {
        Complex64::new(t, y / (2.0 * t))
    } else {
        Complex64::new(y.abs() / (2.0 * t), t.copysign(y))
    }
}

/// `√(1 + S²)` on the branch with `Re ≥ 0`, cuts from `±i` to `±i∞`.
/// Points on a cut take the limit from `Re S > 0`.
pub fn branch_sqrt(s: ComplexS) -> Result<ComplexS> {
    branch_sqrt_on(s, CutSide::Right)
}

/// [`branch_sqrt`] with an explicit choice of cut side for points on the
/// imaginary axis.
pub fn branch_sqrt_on(s: ComplexS, side: CutSide) -> Result<ComplexS> {
    ensure_finite(s, "S")?;
    Ok(radical(s, side))
}

/// Unchecked core of [`branch_sqrt_on`]; callers guarantee finiteness.
pub(crate) fn radical(s: Complex64, side: CutSide) -> Complex64 {
    radical_scaled(s, 1.0, side)
}

/// `√(1 + (S/r)²)`: the substrate radical, cuts from `±ir` to `±i∞`.
pub(crate) fn radical_scaled(s: Complex64, r: f64, side: CutSide) -> Complex64 {
    // Normalise Re S = ±0 to +0 so the zero signs below are deterministic.
    let re = if s.re == 0.0 { 0.0 } else { s.re / r };
    // r ∓ Im S is exact next to the branch points.
    let w_plus = Complex64::new((r - s.im) / r, re);
    let w_minus = Complex64::new((r + s.im) / r, -re);
    let v = principal_sqrt(w_plus) * principal_sqrt(w_minus);
    if re == 0.0 && side == CutSide::Left && s.im.abs() > r {
        -v
    } else {
        v
    }
}

/// `√(1 + S²)` at `S = i·center + δ` with `center = ±1`. The factor that
/// vanishes at `i·center` is formed from `δ` exactly.
pub(crate) fn radical_about_unit(center: f64, delta: Complex64, side: CutSide) -> Complex64 {
    let re = if delta.re == 0.0 { 0.0 } else { delta.re };
    let (w_plus, w_minus) = if center > 0.0 {
        (
            Complex64::new(-delta.im, re),
            Complex64::new(2.0 + delta.im, -re),
        )
    } else {
        (
            Complex64::new(2.0 - delta.im, re),
            Complex64::new(delta.im, -re),
        )
    };
    let v = principal_sqrt(w_plus) * principal_sqrt(w_minus);
    if re == 0.0 && side == CutSide::Left && center * delta.im > 0.0 {
        -v
    } else {
        v
    }
}

const COTH_SATURATION: f64 = 350.0;
const COTH_LAURENT: f64 = 1e-4;

/// Hyperbolic cotangent, safe against overflow for large `|Re z|` and against
/// cancellation next to the pole at the origin.
pub fn safe_coth(z: Complex64) -> Result<Complex64> {
    ensure_finite(z, "z")?;
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Pole { at: z });
    }
    Ok(coth_unchecked(z))
}

pub(crate) fn coth_unchecked(z: Complex64) -> Complex64 {
    if z.re > COTH_SATURATION {
        return Complex64::new(1.0, 0.0);
    }
    if z.re < -COTH_SATURATION {
        return Complex64::new(-1.0, 0.0);
    }
    if z.norm() < COTH_LAURENT {
        return z.inv() + z / 3.0;
    }
    // coth z = (1 + e^{-2z}) / (1 - e^{-2z}) for Re z >= 0, mirrored otherwise.
    let (w, sign) = if z.re >= 0.0 { (z, 1.0) } else { (-z, -1.0) };
    let e = (-2.0 * w).exp();
    sign * (1.0 + e) / (1.0 - e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn branch_sqrt_identity_and_real_axis() {
        assert_eq!(branch_sqrt(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let v = branch_sqrt(c(1.0, 0.0)).unwrap();
        assert!((v.re - 2f64.sqrt()).abs() < 1e-15 && v.im == 0.0);
    }

    /// Walk from S = 0 to S = 2i ± 0 along a path that stays off the cut,
    /// continuing the root by proximity, and compare with the one-sided values.
    #[test]
    fn branch_sqrt_jump_across_cut_matches_continuation() {
        for (side, x_path) in [(CutSide::Right, 0.5), (CutSide::Left, -0.5)] {
            let mut prev = c(1.0, 0.0);
            let n = 20_000;
            // 0 -> x_path -> x_path + 2i -> 2i
            let legs = [
                (c(0.0, 0.0), c(x_path, 0.0)),
                (c(x_path, 0.0), c(x_path, 2.0)),
                (c(x_path, 2.0), c(x_path * 1e-9, 2.0)),
            ];
            for (a, b) in legs {
                for j in 1..=n {
                    let s = a + (b - a) * (j as f64 / n as f64);
                    let w = (1.0 + s * s).sqrt();
                    prev = if (w - prev).norm() <= (-w - prev).norm() {
                        w
                    } else {
                        -w
                    };
                }
            }
            let on_cut = branch_sqrt_on(c(0.0, 2.0), side).unwrap();
            assert!(
                (on_cut - prev).norm() < 1e-6,
                "{side:?}: {on_cut} vs {prev}"
            );
        }
        let right = branch_sqrt(c(0.0, 2.0)).unwrap();
        assert!((right - c(0.0, 3f64.sqrt())).norm() < 1e-15);
        let left = branch_sqrt_on(c(0.0, 2.0), CutSide::Left).unwrap();
        assert!((left - c(0.0, -(3f64.sqrt()))).norm() < 1e-15);
    }

    #[test]
    fn branch_sqrt_rejects_non_finite() {
        assert!(matches!(
            branch_sqrt(c(f64::NAN, 0.0)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(branch_sqrt(c(0.0, f64::INFINITY)).is_err());
    }

    #[test]
    fn radical_about_unit_matches_direct_form() {
        for center in [1.0, -1.0] {
            for delta in [
                c(-3e-3, 2e-2),
                c(1e-4, -5e-3),
                c(0.0, 0.3),
                c(0.0, -0.3),
                c(-0.2, 0.1),
            ] {
                let s = c(0.0, center) + delta;
                for side in [CutSide::Right, CutSide::Left] {
                    let a = radical_about_unit(center, delta, side);
                    let b = radical(s, side);
                    assert!(
                        (a - b).norm() < 1e-14,
                        "{center} {delta} {side:?}: {a} vs {b}"
                    );
                }
            }
        }
        // Near the branch point the offset form keeps full relative accuracy.
        let delta = c(-1.6e-8, 1.7e-5);
        let a = radical_about_unit(1.0, delta, CutSide::Right);
        let exact = (delta * (2.0 * Complex64::i() + delta)).sqrt();
        assert!(((a - exact) / exact).norm() < 1e-14 || ((a + exact) / exact).norm() < 1e-14);
    }

    #[test]
    fn coth_values() {
        let one = safe_coth(c(1.0, 0.0)).unwrap();
        let expected = 1.0_f64.cosh() / 1.0_f64.sinh();
        assert!((one.re - expected).abs() < 1e-15 && one.im == 0.0);
        assert!((one.re - 1.31303529).abs() < 1e-8);
        assert_eq!(safe_coth(c(800.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(safe_coth(c(-800.0, 3.0)).unwrap(), c(-1.0, 0.0));
        assert!(
            safe_coth(c(0.0, std::f64::consts::FRAC_PI_2))
                .unwrap()
                .norm()
                < 1e-15
        );
        assert!(matches!(safe_coth(c(0.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn coth_near_pole_is_laurent() {
        let z = c(3e-5, -2e-5);
        let v = safe_coth(z).unwrap();
        let direct = z.cosh() / z.sinh();
        assert!(((v - direct) / direct).norm() < 1e-12);
    }

    fn finite_s() -> impl Strategy<Value = Complex64> {
        (0.0f64..1e3, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100_000))]
        #[test]
        fn branch_sqrt_has_nonnegative_real_part_and_squares_back(s in finite_s()) {
            let v = branch_sqrt(s).unwrap();
            prop_assert!(v.re >= 0.0);
            let target = 1.0 + s * s;
            let scale = 1.0 + s.norm_sqr();
            prop_assert!((v * v - target).norm() <= 1e-12 * scale);
        }
    }

    proptest! {
        #[test]
        fn branch_sqrt_schwarz_reflection(s in finite_s()) {
            prop_assume!(s.re.abs() > 1e-12);
            let a = branch_sqrt(s.conj()).unwrap();
            let b = branch_sqrt(s).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-14 * (1.0 + b.norm()));
        }

        #[test]
        fn coth_times_tanh_is_one(re in 1e-3f64..30.0, im in -10.0f64..10.0, neg in any::<bool>()) {
            let z = Complex64::new(if neg { -re } else { re }, im);
            let prod = safe_coth(z).unwrap() * z.tanh();
            prop_assert!((prod - 1.0).norm() < 1e-12);
        }
    }
}
