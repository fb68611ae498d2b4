mod common;

use std::sync::Arc;

use common::{anchored_at, fitted_order, layer, nearest, strictly_decreasing};
use num_complex::Complex64;
use slipstab::{
    find_all_roots, find_love_modes, predict_inplane_long, predict_inplane_short,
    predict_long_wavelength, predict_short_wavelength, rational_fixture, Formula, InplaneFriction,
    InplaneModel, SearchOptions, TransferModel,
};

const LAYER: TransferModel = TransferModel::LayerOnHalfspaceAntiplane;

fn roots(nd: &slipstab::NondimSet, model: &TransferModel) -> Vec<slipstab::RootResult> {
    find_all_roots(nd, model, &SearchOptions::default())
        .unwrap()
        .into_result()
        .unwrap()
}

/// K is large enough that the O(1/K) remainder sits below the O(ε²) one.
#[test]
fn slow_root_error_is_second_order_in_eps() {
    let eps = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let mut err = Vec::new();
    for &e in &eps {
        let nd = slipstab::NondimSet::new(1e9, 1e-6, e, 1.0, 1.5, 1.5).unwrap();
        let p = predict_short_wavelength(&nd, &[])[0];
        let found = nearest(&roots(&nd, &LAYER), p.s).s;
        err.push((found - p.s).norm() / p.s.norm());
    }
    assert!(strictly_decreasing(&err), "{err:?}");
    let order = fitted_order(&eps, &err);
    assert!((order - 2.0).abs() < 0.2, "order {order}");
}

#[test]
fn love_shift_error_falls_with_eps() {
    let mut worst = Vec::new();
    for eps in [1e-3, 1e-4] {
        let nd = layer(1e3, eps, 1.5, 1.5);
        let modes = find_love_modes(&nd).unwrap();
        let found = roots(&nd, &LAYER);
        let mut w: f64 = 0.0;
        for p in predict_short_wavelength(&nd, &modes)
            .iter()
            .filter(|p| p.formula == Formula::ShortLove)
        {
            let a = p.anchor.unwrap();
            let off = anchored_at(&found, a.im).offset().unwrap();
            w = w.max((off - a.offset).norm() / a.offset.norm());
        }
        worst.push(w);
    }
    assert!(worst[0] < 5e-2 && worst[1] < 1e-2, "{worst:?}");
    assert!(worst[1] < 0.2 * worst[0]);
}

/// Errors of the same estimate in 80-digit arithmetic, from
/// `tests/oracles/long_love_ladder.py`.
const LONG_LOVE_ORACLE: [f64; 4] = [
    0.296703352093701,
    0.0299991229345245,
    0.00300024662236996,
    0.000300024996622364,
];

#[test]
fn long_wavelength_love_pair_converges_at_first_order() {
    let eps = 1e-2;
    let ratios = [1e-1, 1e-2, 1e-3, 1e-4];
    let mut err = Vec::new();
    for &q in &ratios {
        let nd = layer(q * eps, eps, 1.5, 1.5);
        let mode = find_love_modes(&nd).unwrap()[0];
        let p = predict_long_wavelength(&nd, &mode).unwrap()[0];
        let a = p.anchor.unwrap();
        let off = anchored_at(&roots(&nd, &LAYER), a.im).offset().unwrap();
        assert!(off.re > 0.0);
        err.push((off - a.offset).norm() / a.offset.norm());
    }
    for (e, o) in err.iter().zip(LONG_LOVE_ORACLE) {
        assert!((e - o).abs() < 1e-6 * o, "{err:?}");
    }
    assert!(strictly_decreasing(&err), "{err:?}");
    // The first step is pre-asymptotic, which holds the fit just under 1.
    let local = (err[2] / err[3]).log10();
    assert!(local > 0.9999, "{err:?}");
    assert!(
        (fitted_order(&ratios, &err) - 0.998545).abs() < 1e-5,
        "{err:?}"
    );
}

/// The quasi-static estimate carries an O(ε) remainder, so it converges only
/// when ε shrinks together with K/ε.
#[test]
fn quasistatic_root_converges_along_joint_ladder() {
    let mut x = Vec::new();
    let mut err = Vec::new();
    for j in 1..=3 {
        let eps = 10f64.powi(-(j + 1));
        let nd = layer(eps * 10f64.powi(-j), eps, 1.5, 1.5);
        let mode = find_love_modes(&nd).unwrap()[0];
        let p = predict_long_wavelength(&nd, &mode).unwrap()[2];
        let found = nearest(&roots(&nd, &LAYER), p.s).s;
        x.push(nd.k / nd.eps);
        err.push((found - p.s).norm() / p.s.norm());
    }
    assert!(strictly_decreasing(&err), "{err:?}");
    assert!(fitted_order(&x, &err) >= 1.0, "{err:?}");
}

#[test]
fn low_modes_approach_thick_layer_speeds() {
    for n in 0..3 {
        let mut err = Vec::new();
        for kh in [1e2, 1e3, 1e4] {
            let nd = layer(kh, 1e-3, 1.5, 2.0);
            let c = find_love_modes(&nd).unwrap()[n].c;
            let q = (2 * n + 1) as f64 * std::f64::consts::PI / (2.0 * kh);
            err.push((c - q.hypot(1.0)).abs());
        }
        assert!(strictly_decreasing(&err), "mode {n}: {err:?}");
        assert!(err[2] < 1e-9, "mode {n}: {err:?}");
    }
}

fn fixture_model(alpha: f64) -> (slipstab::InplaneTransferSpec, TransferModel) {
    let spec = rational_fixture(0.9, 1.0, 0.3).unwrap();
    let model = InplaneModel::new(spec.clone(), 0.6, alpha).unwrap();
    (spec, TransferModel::UserSupplied(Arc::new(model)))
}

#[test]
fn inplane_fixture_stoneley_roots_converge_to_long_wavelength_estimate() {
    for alpha in [0.0, 0.6] {
        let (spec, model) = fixture_model(alpha);
        let fr = InplaneFriction { f: 0.6, alpha };
        let mut x = Vec::new();
        let mut err = Vec::new();
        for j in 1..=3 {
            let eps = 10f64.powi(-(j + 1));
            let nd = layer(eps * 10f64.powi(-j), eps, 1.5, 1.5);
            let found = roots(&nd, &model);
            let preds =
                predict_inplane_long(spec.y11_0, spec.y21_0, spec.pole.as_ref(), fr, &nd).unwrap();
            let mut w: f64 = 0.0;
            for p in preds
                .iter()
                .filter(|p| p.formula == Formula::InplaneLongStoneley)
            {
                let a = p.anchor.unwrap();
                let r = nearest(&found, p.s);
                assert!(r.s.re > 0.0);
                let off = r.s - Complex64::new(0.0, a.im);
                w = w.max((off - a.offset).norm() / a.offset.norm());
            }
            x.push(nd.k / nd.eps);
            err.push(w);
        }
        assert!(strictly_decreasing(&err), "alpha {alpha}: {err:?}");
        assert!(
            fitted_order(&x, &err) >= 1.0 - 1e-2,
            "alpha {alpha}: {err:?}"
        );
    }
}

/// The fixture has `Y₁₁(0) < 0`, so only the Stoneley-adjacent roots decay.
#[test]
fn inplane_fixture_short_wavelength_roots_match_estimates() {
    for alpha in [0.0, 0.6] {
        let (spec, model) = fixture_model(alpha);
        let fr = InplaneFriction { f: 0.6, alpha };
        let nd = layer(1e3, 1e-3, 1.5, 1.5);
        let found = roots(&nd, &model);
        for p in predict_inplane_short(spec.y11_0, spec.y21_0, spec.pole.as_ref(), fr, &nd) {
            let r = nearest(&found, p.s);
            if p.formula == Formula::InplaneShortStoneley {
                assert!(p.s.re < 0.0 && r.s.re < 0.0);
                let off = r.s - Complex64::new(0.0, p.anchor.unwrap().im);
                assert!(
                    (off - p.anchor.unwrap().offset).norm()
                        < 1e-2 * p.anchor.unwrap().offset.norm(),
                    "alpha {alpha}"
                );
            } else {
                assert!(
                    (r.s - p.s).norm() < 1e-2 * p.s.norm(),
                    "alpha {alpha}: {} vs {}",
                    r.s,
                    p.s
                );
            }
        }
    }
}
