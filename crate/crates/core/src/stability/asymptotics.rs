//! Closed-form root estimates in the short- and long-wavelength limits.

use num_complex::Complex64;

use crate::dispersion::LoveMode;
use crate::error::{Error, Result};
use crate::inplane::StoneleyPoleData;
use crate::transfer::{eval_f, NondimSet, TransferModel};

use super::residual::Problem;

/// Position of a root relative to the imaginary-axis point `i·im`: a pole,
/// or `±i` where `â` vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAnchor {
    pub im: f64,
    pub offset: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// `−2εm/(1 + m)`.
    ShortSlow,
    /// `±iCₙ − Aₙε/Cₙ`.
    ShortLove,
    /// `±iC₀ + A₀ε/(βC₀)`.
    LongLove,
    /// `βε/K`.
    LongQuasiStatic,
    /// `ε/β` for identical half-spaces.
    HalfspaceSlow,
    /// `βε/K` for identical half-spaces.
    HalfspaceQuasiStatic,
    InplaneShortSlow,
    InplaneShortStoneley,
    InplaneLongSlow,
    InplaneLongStoneley,
    InplaneLongQuasiStatic,
}

impl Formula {
    pub fn label(&self) -> &'static str {
        match self {
            Formula::ShortSlow => "short.slow",
            Formula::ShortLove => "short.love",
            Formula::LongLove => "long.love",
            Formula::LongQuasiStatic => "long.quasistatic",
            Formula::HalfspaceSlow => "halfspace.slow",
            Formula::HalfspaceQuasiStatic => "halfspace.quasistatic",
            Formula::InplaneShortSlow => "inplane.short.slow",
            Formula::InplaneShortStoneley => "inplane.short.stoneley",
            Formula::InplaneLongSlow => "inplane.long.slow",
            Formula::InplaneLongStoneley => "inplane.long.stoneley",
            Formula::InplaneLongQuasiStatic => "inplane.long.quasistatic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub formula: Formula,
    pub s: Complex64,
    /// For roots next to an axis pole: the pole and the predicted shift.
    pub anchor: Option<AxisAnchor>,
    /// Love mode index, where one applies.
    pub mode: Option<usize>,
}

impl Prediction {
    fn plain(formula: Formula, s: Complex64) -> Self {
        Self {
            formula,
            s,
            anchor: None,
            mode: None,
        }
    }

    fn at_pole(formula: Formula, im: f64, offset: Complex64, mode: Option<usize>) -> Self {
        let s = Complex64::new(offset.re, im + offset.im);
        Self {
            formula,
            s,
            anchor: Some(AxisAnchor { im, offset }),
            mode,
        }
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_short(nd: &NondimSet) {
    if !(nd.eps < 0.1 && nd.k > 10.0) {
        log::warn!(
            "short-wavelength estimates assume eps << 1 << K (eps = {}, K = {})",
            nd.eps,
            nd.k
        );
    }
}

fn check_long(nd: &NondimSet) -> Result<()> {
    if nd.beta <= 0.0 {
        return Err(Error::Regime(format!(
            "long-wavelength estimates need velocity weakening, beta = {}",
            nd.beta
        )));
    }
    if !(nd.k < nd.eps && nd.eps < 0.1) {
        log::warn!(
            "long-wavelength estimates assume K << eps << 1 (eps = {}, K = {})",
            nd.eps,
            nd.k
        );
    }
    Ok(())
}

fn short_raw(nd: &NondimSet, modes: &[LoveMode]) -> Vec<Prediction> {
    let mut out = vec![Prediction::plain(
        Formula::ShortSlow,
        real(-2.0 * nd.eps * nd.m / (1.0 + nd.m)),
    )];
    for mode in modes {
        let offset = real(-mode.a * nd.eps / mode.c);
        for sign in [1.0, -1.0] {
            out.push(Prediction::at_pole(
                Formula::ShortLove,
                sign * mode.c,
                offset,
                Some(mode.n),
            ));
        }
    }
    out
}

fn long_raw(nd: &NondimSet, fundamental: Option<&LoveMode>) -> Vec<Prediction> {
    let mut out = Vec::new();
    if let Some(mode) = fundamental {
        let offset = real(mode.a * nd.eps / (nd.beta * mode.c));
        for sign in [1.0, -1.0] {
            out.push(Prediction::at_pole(
                Formula::LongLove,
                sign * mode.c,
                offset,
                Some(mode.n),
            ));
        }
    }
    out.push(Prediction::plain(
        Formula::LongQuasiStatic,
        real(nd.beta * nd.eps / nd.k),
    ));
    out
}

/// Slow root and the roots next to each Love pole for `ε ≪ 1 ≪ K`.
pub fn predict_short_wavelength(nd: &NondimSet, modes: &[LoveMode]) -> Vec<Prediction> {
    check_short(nd);
    short_raw(nd, modes)
}

/// Destabilized Love pair and the quasi-static root for `K ≪ ε ≪ 1`.
pub fn predict_long_wavelength(nd: &NondimSet, fundamental: &LoveMode) -> Result<Vec<Prediction>> {
    check_long(nd)?;
    Ok(long_raw(nd, Some(fundamental)))
}

/// `ε/β` and `βε/K` for sliding between identical half-spaces.
pub fn predict_identical_halfspaces(nd: &NondimSet) -> Result<Vec<Prediction>> {
    if nd.m != 1.0 || nd.r != 1.0 || !nd.is_halfspace() {
        return Err(Error::Regime(format!(
            "identical half-spaces need m = 1, r = 1, H = inf (m = {}, r = {}, H = {})",
            nd.m, nd.r, nd.h
        )));
    }
    check_long(nd)?;
    Ok(vec![
        Prediction::plain(Formula::HalfspaceSlow, real(nd.eps / nd.beta)),
        Prediction::plain(Formula::HalfspaceQuasiStatic, real(nd.beta * nd.eps / nd.k)),
    ])
}

/// Friction constants entering the in-plane estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InplaneFriction {
    pub f: f64,
    pub alpha: f64,
}

fn inplane_short_raw(
    y110: Complex64,
    y210: Complex64,
    pole: Option<&StoneleyPoleData>,
    fr: InplaneFriction,
    nd: &NondimSet,
) -> Vec<Prediction> {
    let fa = fr.f - fr.alpha;
    let mut out = vec![Prediction::plain(
        Formula::InplaneShortSlow,
        -nd.eps * (y110 + fa * y210),
    )];
    if let Some(p) = pole {
        let upper = -nd.eps * Complex64::new(p.a / p.c_st, -fa * p.b / p.c_st);
        out.push(Prediction::at_pole(
            Formula::InplaneShortStoneley,
            p.c_st,
            upper,
            None,
        ));
        out.push(Prediction::at_pole(
            Formula::InplaneShortStoneley,
            -p.c_st,
            upper.conj(),
            None,
        ));
    }
    out
}

fn inplane_long_raw(
    y110: Complex64,
    y210: Complex64,
    pole: Option<&StoneleyPoleData>,
    fr: InplaneFriction,
    nd: &NondimSet,
) -> Vec<Prediction> {
    let ratio = nd.eps / nd.beta;
    let mut out = vec![Prediction::plain(
        Formula::InplaneLongSlow,
        ratio * (y110 + fr.f * y210),
    )];
    if let Some(p) = pole {
        let upper = ratio * Complex64::new(p.a / p.c_st, -fr.f * p.b / p.c_st);
        out.push(Prediction::at_pole(
            Formula::InplaneLongStoneley,
            p.c_st,
            upper,
            None,
        ));
        out.push(Prediction::at_pole(
            Formula::InplaneLongStoneley,
            -p.c_st,
            upper.conj(),
            None,
        ));
    }
    out.push(Prediction::plain(
        Formula::InplaneLongQuasiStatic,
        real(nd.beta * nd.eps / nd.k),
    ));
    out
}

/// In-plane slow root and Stoneley-adjacent roots for `ε ≪ 1 ≪ K`. Roots
/// next to `−iC_St` are the conjugates of those next to `+iC_St`.
pub fn predict_inplane_short(
    y110: Complex64,
    y210: Complex64,
    pole: Option<&StoneleyPoleData>,
    fr: InplaneFriction,
    nd: &NondimSet,
) -> Vec<Prediction> {
    check_short(nd);
    inplane_short_raw(y110, y210, pole, fr, nd)
}

/// In-plane slow, Stoneley-adjacent and quasi-static roots for `K ≪ ε ≪ 1`.
pub fn predict_inplane_long(
    y110: Complex64,
    y210: Complex64,
    pole: Option<&StoneleyPoleData>,
    fr: InplaneFriction,
    nd: &NondimSet,
) -> Result<Vec<Prediction>> {
    check_long(nd)?;
    Ok(inplane_long_raw(y110, y210, pole, fr, nd))
}

/// Roots of `(K/ε²)S² + (KF/ε − β/ε)S + F = 0`.
pub(crate) fn frozen_transfer_roots(nd: &NondimSet, f: f64) -> [Complex64; 2] {
    super::quasistatic::solve_quadratic(
        nd.k / (nd.eps * nd.eps),
        nd.k * f / nd.eps - nd.beta / nd.eps,
        f,
    )
}

/// Every estimate that can be formed for the model, regardless of regime.
pub(crate) fn all_seeds(problem: &Problem) -> Vec<Prediction> {
    let nd = &problem.nd;
    let mut out = Vec::new();
    let zero = Complex64::new(0.0, 0.0);
    match &problem.model {
        TransferModel::LayerOnHalfspaceAntiplane | TransferModel::HalfspacesAntiplane => {
            out.extend(short_raw(nd, &problem.modes));
            if nd.beta != 0.0 {
                out.extend(long_raw(nd, problem.modes.first()));
                out.push(Prediction::plain(
                    Formula::HalfspaceSlow,
                    real(nd.eps / nd.beta),
                ));
            }
            let f0 = match problem.model {
                TransferModel::HalfspacesAntiplane => 2.0 * nd.m / (1.0 + nd.m),
                _ => eval_f(zero, nd).map(|v| v.re).unwrap_or(0.0),
            };
            for s in frozen_transfer_roots(nd, f0) {
                out.push(Prediction::plain(Formula::ShortSlow, s));
            }
        }
        TransferModel::QuasistaticLayer => {
            let f = crate::transfer::eval_f_quasistatic(nd).unwrap_or(0.0);
            for s in frozen_transfer_roots(nd, f) {
                out.push(Prediction::plain(Formula::LongQuasiStatic, s));
            }
        }
        TransferModel::UserSupplied(m) => {
            let fr = InplaneFriction {
                f: m.f,
                alpha: m.alpha,
            };
            let pole = m.spec.pole.as_ref();
            out.extend(inplane_short_raw(m.spec.y11_0, m.spec.y21_0, pole, fr, nd));
            if nd.beta != 0.0 {
                out.extend(inplane_long_raw(m.spec.y11_0, m.spec.y21_0, pole, fr, nd));
            }
        }
    }
    out.retain(|p| p.s.re.is_finite() && p.s.im.is_finite());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nd(k: f64, eps: f64, beta: f64) -> NondimSet {
        NondimSet::new(k, 1.0, eps, beta, 1.0, 1.5).unwrap()
    }

    #[test]
    fn short_slow_root_for_equal_moduli() {
        let p = predict_short_wavelength(&nd(1e3, 1e-3, 1.0), &[]);
        assert_eq!(p.len(), 1);
        assert!((p[0].s.re + 1e-3).abs() < 1e-18);
    }

    #[test]
    fn love_shift_is_stabilizing_for_positive_residue() {
        let mode = LoveMode {
            n: 0,
            c: 1.2,
            a: 0.3,
            boundary: false,
        };
        let p = predict_short_wavelength(&nd(1e3, 1e-3, 1.0), &[mode]);
        assert_eq!(p.len(), 3);
        for q in &p[1..] {
            assert!((q.s.re + 0.3 * 1e-3 / 1.2).abs() < 1e-18);
            assert_eq!(q.s.im.abs(), 1.2);
        }
    }

    #[test]
    fn long_wavelength_values() {
        let mode = LoveMode {
            n: 0,
            c: 1.49,
            a: 0.2,
            boundary: false,
        };
        let p = predict_long_wavelength(&nd(1e-4, 1e-2, 1.0), &mode).unwrap();
        assert!((p[0].s.re - 0.2 * 1e-2 / 1.49).abs() < 1e-18);
        assert_eq!(p[2].formula, Formula::LongQuasiStatic);
        assert!((p[2].s.re - 100.0).abs() < 1e-12);
        assert!(matches!(
            predict_long_wavelength(&nd(1e-4, 1e-2, 0.0), &mode),
            Err(Error::Regime(_))
        ));
        assert!(matches!(
            predict_long_wavelength(&nd(1e-4, 1e-2, -0.5), &mode),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn identical_halfspace_values() {
        let h = |beta| NondimSet::new(1e-4, f64::INFINITY, 1e-2, beta, 1.0, 1.0).unwrap();
        let p = predict_identical_halfspaces(&h(1.0)).unwrap();
        assert!((p[0].s.re - 1e-2).abs() < 1e-18 && (p[1].s.re - 100.0).abs() < 1e-12);
        let p = predict_identical_halfspaces(&h(2.0)).unwrap();
        assert!((p[0].s.re - 5e-3).abs() < 1e-18 && (p[1].s.re - 200.0).abs() < 1e-12);
        assert!(predict_identical_halfspaces(&nd(1e-4, 1e-2, 1.0)).is_err());
    }

    #[test]
    fn inplane_short_values() {
        let fr = InplaneFriction { f: 0.6, alpha: 0.6 };
        let p = predict_inplane_short(
            Complex64::new(1.0, 0.2),
            Complex64::new(0.5, 0.0),
            None,
            fr,
            &nd(1e3, 1e-3, 1.0),
        );
        assert!((p[0].s - Complex64::new(-1e-3, -2e-4)).norm() < 1e-18);

        let pole = StoneleyPoleData::new(0.9, 1.0, 0.3).unwrap();
        let p = predict_inplane_short(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Some(&pole),
            fr,
            &nd(1e3, 1e-3, 1.0),
        );
        for q in &p[1..] {
            assert!(q.s.re < 0.0);
            assert_eq!(q.s.im.abs(), 0.9);
        }
    }

    #[test]
    fn inplane_long_stoneley_destabilizes() {
        let pole = StoneleyPoleData::new(0.9, 1.0, 0.3).unwrap();
        for alpha in [0.0, 0.6] {
            let fr = InplaneFriction { f: 0.6, alpha };
            let y0 = Complex64::new(-2.0 / 0.9, 0.0);
            let z = Complex64::new(0.0, 0.0);
            let short = predict_inplane_short(y0, z, Some(&pole), fr, &nd(1e-4, 1e-2, 1.0));
            let long = predict_inplane_long(y0, z, Some(&pole), fr, &nd(1e-4, 1e-2, 1.0)).unwrap();
            assert!(short[1].s.re < 0.0 && long[1].s.re > 0.0);
            assert_eq!(long[3].s, Complex64::new(100.0, 0.0));
        }
    }
}
