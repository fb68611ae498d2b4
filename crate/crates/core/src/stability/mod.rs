//! Characteristic equation of steady sliding with rate-and-state friction:
//! residual, root counting and search, classification and closed-form
//! estimates.

mod asymptotics;
mod contour;
mod friction;
mod quasistatic;
pub(crate) mod residual;
mod search;

pub use asymptotics::{
    predict_identical_halfspaces, predict_inplane_long, predict_inplane_short,
    predict_long_wavelength, predict_short_wavelength, AxisAnchor, Formula, InplaneFriction,
    Prediction,
};
pub use contour::{count_roots, Window, EDGE_MARGIN};
pub use friction::{nondimensionalize, RateStateFriction, Scales};
pub use quasistatic::{predict_dynamic_extra_root, quasistatic_roots, QuasistaticRoots};
pub use residual::characteristic_residual;
pub use search::{
    find_all_roots, find_roots, find_roots_with, refine_root, RootResult, RootSearch, SearchOptions,
};

/// Default bound on `|c|/c_s` below which a root counts as quasi-static.
pub const DEFAULT_QS_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MotionClass {
    QuasiStatic,
    WaveLike,
}

impl StabilityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityClass::Stable => "stable",
            StabilityClass::Unstable => "unstable",
        }
    }
}

impl MotionClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            MotionClass::QuasiStatic => "quasi-static",
            MotionClass::WaveLike => "wave-like",
        }
    }
}

/// Set the stability class from the sign of `Re S` (zero counts as
/// stable) and the motion class from `|Im S|` against `threshold`.
pub fn classify(mut root: RootResult, threshold: f64) -> RootResult {
    root.stability = if root.s.re > 0.0 {
        StabilityClass::Unstable
    } else {
        StabilityClass::Stable
    };
    root.motion = if root.s.im.abs() < threshold {
        MotionClass::QuasiStatic
    } else {
        MotionClass::WaveLike
    };
    root
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn classification_boundaries() {
        let r = |re, im| {
            classify(
                RootResult::new(Complex64::new(re, im), None, 0.0),
                DEFAULT_QS_THRESHOLD,
            )
        };
        assert_eq!(r(0.0, 0.5).stability, StabilityClass::Stable);
        assert_eq!(r(1e-300, 0.5).stability, StabilityClass::Unstable);
        assert_eq!(r(100.0, 0.0).motion, MotionClass::QuasiStatic);
        assert_eq!(r(1e-3, 1.49).motion, MotionClass::WaveLike);
        let scaled = r(2.0, -0.5).with_scales(&Scales {
            k_abs: 3.0,
            c_s: 10.0,
        });
        assert_eq!(scaled.growth_rate, Some(60.0));
        assert_eq!(scaled.phase_velocity, Some(5.0));
    }
}
