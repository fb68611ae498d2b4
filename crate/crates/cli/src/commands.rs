//! The four subcommands. Each returns a table plus the exit status it earned.

use num_complex::Complex64;
use rayon::prelude::*;
use slipstab::{
    find_all_roots, find_love_modes, find_roots_with, predict_dynamic_extra_root,
    predict_identical_halfspaces, predict_inplane_long, predict_inplane_short,
    predict_long_wavelength, predict_short_wavelength, quasistatic_roots, refine_root, Formula,
    InplaneFriction, NondimSet, Prediction, RootResult, RootSearch, Scales, TransferModel,
};

use crate::config::{Config, ModelName, Regime, Setup};
use crate::table::{Cell, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    Unresolved,
    VerificationFailed,
}

pub struct Outcome {
    pub table: Table,
    pub status: Status,
}

fn need_k(setup: &Setup) -> Result<(), CliError> {
    if setup.k_grid.is_empty() {
        return Err(CliError::Config(
            "no K values: set [sweep].K, [sweep].wavenumber or [nondim].K".into(),
        ));
    }
    Ok(())
}

fn need_eps(setup: &Setup) -> Result<(), CliError> {
    if setup.eps_grid.is_empty() {
        return Err(CliError::Config(
            "no eps values: set [sweep].eps, [nondim].eps or [elastic] and [friction]".into(),
        ));
    }
    Ok(())
}

/// Love modes `(K, KH, n, C_n, A_n, boundary)` along the K grid.
pub fn dispersion(setup: &Setup) -> Result<Outcome, CliError> {
    need_k(setup)?;
    let mut table = Table::new("dispersion", vec!["K", "KH", "n", "C", "A", "boundary"]);
    if setup.model_name != ModelName::Layer || setup.base.is_halfspace() {
        log::warn!("dispersion needs a finite layer; the table is empty");
        return Ok(Outcome {
            table,
            status: Status::Ok,
        });
    }
    if setup.base.r <= 1.0 {
        log::warn!(
            "r = {} <= 1: no Love waves, the table is empty",
            setup.base.r
        );
        return Ok(Outcome {
            table,
            status: Status::Ok,
        });
    }
    let eps = setup.eps_grid.first().copied().unwrap_or(1.0);
    let results: Vec<_> = setup
        .k_grid
        .par_iter()
        .map(|&k| (k, find_love_modes(&setup.point(k, eps))))
        .collect();
    let mut status = Status::Ok;
    for (k, res) in results {
        match res {
            Ok(modes) => {
                for m in modes {
                    table.push(vec![
                        k.into(),
                        (k * setup.base.h).into(),
                        m.n.into(),
                        m.c.into(),
                        m.a.into(),
                        m.boundary.into(),
                    ]);
                }
            }
            Err(e) => {
                log::error!("K = {k:e}: {e}");
                status = Status::Unresolved;
            }
        }
    }
    Ok(Outcome { table, status })
}

fn search(setup: &Setup, nd: &NondimSet) -> slipstab::Result<RootSearch> {
    match &setup.window {
        Some(w) => find_roots_with(nd, &setup.model, &[*w], &setup.options),
        None => find_all_roots(nd, &setup.model, &setup.options),
    }
}

/// Every root at every `(K, ε)` grid point, K-major.
pub fn roots(setup: &Setup) -> Result<Outcome, CliError> {
    need_k(setup)?;
    need_eps(setup)?;
    let columns = vec![
        "K",
        "eps",
        "wavenumber",
        "re_s",
        "im_s",
        "residual",
        "growth_rate",
        "phase_velocity",
        "stability",
        "motion",
        "winding_count",
        "status",
    ];
    let mut table = Table::new("roots", columns);
    let points: Vec<(f64, f64)> = setup
        .k_grid
        .iter()
        .flat_map(|&k| setup.eps_grid.iter().map(move |&e| (k, e)))
        .collect();
    let results: Vec<_> = points
        .par_iter()
        .map(|&(k, e)| search(setup, &setup.point(k, e)))
        .collect();
    let mut status = Status::Ok;
    for (&(k, e), res) in points.iter().zip(results) {
        let wn = setup.wavenumber(k);
        let scales = setup
            .dimensional
            .map(|(ep, _)| Scales::new(&ep, wn.unwrap()));
        match res {
            Ok(found) => {
                let tag = if found.resolved { "ok" } else { "unresolved" };
                if !found.resolved {
                    log::error!(
                        "K = {k:e}, eps = {e:e}: {} roots found but the winding count is {}",
                        found.roots.len(),
                        found.winding_count
                    );
                    status = Status::Unresolved;
                }
                for r in &found.roots {
                    let r = match &scales {
                        Some(s) => r.with_scales(s),
                        None => *r,
                    };
                    table.push(vec![
                        k.into(),
                        e.into(),
                        wn.into(),
                        r.s.re.into(),
                        r.s.im.into(),
                        r.residual.into(),
                        r.growth_rate.into(),
                        r.phase_velocity.into(),
                        r.stability.as_str().into(),
                        r.motion.as_str().into(),
                        found.winding_count.into(),
                        tag.into(),
                    ]);
                }
            }
            Err(err) => {
                log::error!("K = {k:e}, eps = {e:e}: {err}");
                status = Status::Unresolved;
                let none = Cell::Float(None);
                table.push(vec![
                    k.into(),
                    e.into(),
                    wn.into(),
                    none.clone(),
                    none.clone(),
                    none.clone(),
                    none.clone(),
                    none,
                    "".into(),
                    "".into(),
                    0i64.into(),
                    "error".into(),
                ]);
            }
        }
    }
    Ok(Outcome { table, status })
}

/// One formula checked at one ladder step.
#[derive(Debug, Clone)]
struct Measure {
    formula: Formula,
    mode: Option<usize>,
    pred: Complex64,
    found: Option<Complex64>,
    error: Result<f64, String>,
}

fn relative(found: Complex64, pred: Complex64) -> f64 {
    (found - pred).norm() / pred.norm()
}

fn nearest(roots: &[RootResult], s: Complex64) -> Option<&RootResult> {
    roots
        .iter()
        .min_by(|a, b| (a.s - s).norm().total_cmp(&(b.s - s).norm()))
}

fn skip(formulas: &[Formula], reason: String) -> Vec<Measure> {
    formulas
        .iter()
        .map(|&formula| Measure {
            formula,
            mode: None,
            pred: Complex64::new(f64::NAN, f64::NAN),
            found: None,
            error: Err(reason.clone()),
        })
        .collect()
}

/// Compare a plain prediction against the closest root.
fn plain(p: &Prediction, roots: &[RootResult]) -> Measure {
    match nearest(roots, p.s) {
        Some(r) => Measure {
            formula: p.formula,
            mode: p.mode,
            pred: p.s,
            found: Some(r.s),
            error: Ok(relative(r.s, p.s)),
        },
        None => Measure {
            formula: p.formula,
            mode: p.mode,
            pred: p.s,
            found: None,
            error: Ok(f64::INFINITY),
        },
    }
}

/// Compare the shift from the anchoring pole. Love roots carry their own
/// anchor; other roots are referred to the pole by subtraction.
fn shifted(p: &Prediction, roots: &[RootResult]) -> Measure {
    let a = p.anchor.expect("prediction without an anchor");
    let by_anchor = roots.iter().find(|r| r.anchor.map(|x| x.im) == Some(a.im));
    let (found, offset) = match by_anchor {
        Some(r) => (Some(r.s), r.offset()),
        None => match nearest(roots, p.s) {
            Some(r) => (Some(r.s), Some(r.s - Complex64::new(0.0, a.im))),
            None => (None, None),
        },
    };
    let error = offset.map_or(f64::INFINITY, |o| relative(o, a.offset));
    Measure {
        formula: p.formula,
        mode: p.mode,
        pred: p.s,
        found,
        error: Ok(error),
    }
}

/// Largest error among the predictions of one formula.
fn worst(ms: Vec<Measure>) -> Option<Measure> {
    ms.into_iter().max_by(|a, b| {
        let ea = a.error.clone().unwrap_or(f64::INFINITY);
        let eb = b.error.clone().unwrap_or(f64::INFINITY);
        ea.total_cmp(&eb)
    })
}

fn measure_step(regime: Regime, setup: &Setup, nd: &NondimSet) -> Vec<Measure> {
    let anti = matches!(
        setup.model,
        TransferModel::LayerOnHalfspaceAntiplane | TransferModel::HalfspacesAntiplane
    );
    let inplane = setup.model.is_inplane();
    let formulas: &[Formula] = match regime {
        Regime::Short => &[Formula::ShortSlow, Formula::ShortLove],
        Regime::Long => &[Formula::LongLove, Formula::LongQuasiStatic],
        Regime::Halfspaces => &[Formula::HalfspaceSlow, Formula::HalfspaceQuasiStatic],
        Regime::InplaneShort => &[Formula::InplaneShortSlow, Formula::InplaneShortStoneley],
        Regime::InplaneLong => &[
            Formula::InplaneLongSlow,
            Formula::InplaneLongStoneley,
            Formula::InplaneLongQuasiStatic,
        ],
    };
    let wrong_model = match regime {
        Regime::Short | Regime::Long => !anti,
        Regime::Halfspaces => !matches!(setup.model, TransferModel::HalfspacesAntiplane),
        Regime::InplaneShort | Regime::InplaneLong => !inplane,
    };
    if wrong_model {
        return skip(
            formulas,
            format!("model {} does not fit this regime", setup.model.name()),
        );
    }
    if regime == Regime::Halfspaces {
        let preds = match predict_identical_halfspaces(nd) {
            Ok(p) => p,
            Err(e) => return skip(formulas, e.to_string()),
        };
        return preds
            .iter()
            .map(|p| match refine_root(nd, &setup.model, p.s, None) {
                Ok(r) => Measure {
                    formula: p.formula,
                    mode: None,
                    pred: p.s,
                    found: Some(r.s),
                    error: Ok(relative(r.s, p.s)),
                },
                Err(e) => Measure {
                    formula: p.formula,
                    mode: None,
                    pred: p.s,
                    found: None,
                    error: Err(e.to_string()),
                },
            })
            .collect();
    }
    let found = match search(setup, nd) {
        Ok(f) if f.resolved => f.roots,
        Ok(f) => {
            return skip(
                formulas,
                format!(
                    "unresolved search: {} roots for winding count {}",
                    f.roots.len(),
                    f.winding_count
                ),
            )
        }
        Err(e) => return skip(formulas, e.to_string()),
    };
    let preds: Vec<Prediction> = match regime {
        Regime::Short => {
            let modes =
                if nd.is_halfspace() || matches!(setup.model, TransferModel::HalfspacesAntiplane) {
                    Vec::new()
                } else {
                    match find_love_modes(nd) {
                        Ok(m) => m,
                        Err(e) => return skip(formulas, e.to_string()),
                    }
                };
            predict_short_wavelength(nd, &modes)
        }
        Regime::Long => {
            let modes = match find_love_modes(nd) {
                Ok(m) => m,
                Err(e) => return skip(formulas, e.to_string()),
            };
            let Some(fundamental) = modes.first() else {
                return skip(formulas, "no Love mode (r <= 1 or no layer)".into());
            };
            match predict_long_wavelength(nd, fundamental) {
                Ok(p) => p,
                Err(e) => return skip(formulas, e.to_string()),
            }
        }
        Regime::InplaneShort | Regime::InplaneLong => {
            let TransferModel::UserSupplied(m) = &setup.model else {
                unreachable!()
            };
            let fr = InplaneFriction {
                f: m.f,
                alpha: m.alpha,
            };
            let spec = &m.spec;
            if regime == Regime::InplaneShort {
                predict_inplane_short(spec.y11_0, spec.y21_0, spec.pole.as_ref(), fr, nd)
            } else {
                match predict_inplane_long(spec.y11_0, spec.y21_0, spec.pole.as_ref(), fr, nd) {
                    Ok(p) => p,
                    Err(e) => return skip(formulas, e.to_string()),
                }
            }
        }
        Regime::Halfspaces => unreachable!(),
    };
    let mut out = Vec::new();
    for &formula in formulas {
        let of: Vec<&Prediction> = preds.iter().filter(|p| p.formula == formula).collect();
        if of.is_empty() {
            out.extend(skip(
                &[formula],
                "not applicable to this configuration".into(),
            ));
            continue;
        }
        let ms: Vec<Measure> = of
            .iter()
            .map(|p| {
                if p.anchor.is_some() {
                    shifted(p, &found)
                } else {
                    plain(p, &found)
                }
            })
            .collect();
        out.extend(worst(ms));
    }
    out
}

fn default_tolerance(formula: Formula, nd: &NondimSet) -> f64 {
    match formula {
        Formula::ShortSlow => 1e-2,
        Formula::HalfspaceSlow | Formula::HalfspaceQuasiStatic => 10.0 * nd.k / nd.eps,
        _ => 5e-2,
    }
}

/// Least-squares slope of `ln err` against `ln x`.
pub fn fitted_order(x: &[f64], err: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Errors at or below this are rounding noise; no order is fitted to them.
const NOISE_FLOOR: f64 = 1e-13;

fn ladder(cfg: &Config, setup: &Setup) -> Result<Vec<(f64, f64)>, CliError> {
    let v = cfg.verify.as_ref().expect("checked by caller");
    let ks = match &v.k {
        Some(g) => g.values("[verify].K")?,
        None => setup.k_grid.clone(),
    };
    let es = match &v.eps {
        Some(g) => g.values("[verify].eps")?,
        None => setup.eps_grid.clone(),
    };
    if ks.is_empty() || es.is_empty() {
        return Err(CliError::Config(
            "[verify]: the ladder needs K and eps values".into(),
        ));
    }
    let n = ks.len().max(es.len());
    if (ks.len() != 1 && ks.len() != n) || (es.len() != 1 && es.len() != n) {
        return Err(CliError::Config(
            "[verify]: K and eps ladders must have equal lengths or length 1".into(),
        ));
    }
    Ok((0..n)
        .map(|i| (ks[i.min(ks.len() - 1)], es[i.min(es.len() - 1)]))
        .collect())
}

/// Asymptotic formulas of a regime against found roots along a refinement
/// ladder.
pub fn verify(cfg: &Config, setup: &Setup) -> Result<Outcome, CliError> {
    let v = cfg
        .verify
        .as_ref()
        .ok_or_else(|| CliError::Config("verify needs a [verify] section".into()))?;
    let steps = ladder(cfg, setup)?;
    let regime = v.regime;
    let min_order = v.min_order.unwrap_or(match regime {
        Regime::Long | Regime::InplaneLong => 1.0,
        _ => 0.0,
    });
    let per_step: Vec<Vec<Measure>> = steps
        .par_iter()
        .map(|&(k, e)| measure_step(regime, setup, &setup.point(k, e)))
        .collect();
    let refinement = |k: f64, e: f64| match regime {
        Regime::Short | Regime::InplaneShort => e,
        _ => k / e,
    };

    let columns = vec![
        "formula",
        "step",
        "K",
        "eps",
        "refinement",
        "mode",
        "pred_re",
        "pred_im",
        "found_re",
        "found_im",
        "rel_error",
        "order",
        "tolerance",
        "status",
        "note",
    ];
    let mut table = Table::new("verify", columns);
    let mut failed = false;
    let n_formulas = per_step.first().map_or(0, Vec::len);
    for f in 0..n_formulas {
        let ms: Vec<&Measure> = per_step.iter().map(|s| &s[f]).collect();
        let formula = ms[0].formula;
        let (last_k, last_e) = *steps.last().unwrap();
        let tol = v
            .tolerance
            .unwrap_or_else(|| default_tolerance(formula, &setup.point(last_k, last_e)));
        let skipped = ms.iter().find_map(|m| m.error.clone().err());
        let errs: Vec<f64> = ms
            .iter()
            .map(|m| m.error.clone().unwrap_or(f64::NAN))
            .collect();
        let xs: Vec<f64> = steps.iter().map(|&(k, e)| refinement(k, e)).collect();
        let noisy = errs.iter().all(|&e| e <= NOISE_FLOOR);
        let order =
            (skipped.is_none() && errs.len() >= 2 && !noisy).then(|| fitted_order(&xs, &errs));
        let (status, note) = match &skipped {
            Some(reason) => ("skip", reason.clone()),
            None => {
                let last_ok = errs.last().is_some_and(|&e| e <= tol);
                let monotone = noisy || errs.windows(2).all(|w| w[1] <= w[0]);
                let order_ok = order.is_none_or(|o| o >= min_order);
                let mut why = Vec::new();
                if !last_ok {
                    why.push(format!("final error above {tol:e}"));
                }
                if !monotone {
                    why.push("errors do not decrease".to_string());
                }
                if !order_ok {
                    why.push(format!("order below {min_order}"));
                }
                if why.is_empty() {
                    ("pass", String::new())
                } else {
                    failed = true;
                    ("fail", why.join("; "))
                }
            }
        };
        for (i, (m, &(k, e))) in ms.iter().zip(&steps).enumerate() {
            table.push(vec![
                formula.label().into(),
                i.into(),
                k.into(),
                e.into(),
                refinement(k, e).into(),
                m.mode.map_or(Cell::Float(None), |n| Cell::Int(n as i64)),
                m.pred.re.into(),
                m.pred.im.into(),
                m.found.map(|s| s.re).into(),
                m.found.map(|s| s.im).into(),
                m.error.clone().ok().into(),
                order.into(),
                tol.into(),
                status.into(),
                note.clone().into(),
            ]);
        }
    }
    let status = if failed {
        Status::VerificationFailed
    } else {
        Status::Ok
    };
    Ok(Outcome { table, status })
}

/// Quasi-static growth rates, and the elastodynamic extra pair, in 1/s.
pub fn quasistatic(setup: &Setup) -> Result<Outcome, CliError> {
    need_k(setup)?;
    let Some((ep, fr)) = setup.dimensional else {
        return Err(CliError::Config(
            "quasistatic needs [elastic] and [friction]".into(),
        ));
    };
    let mut table = Table::new(
        "quasistatic",
        vec!["wavenumber", "kh", "source", "index", "re_p", "im_p"],
    );
    let rows: Vec<Result<Vec<Vec<Cell>>, String>> = setup
        .k_grid
        .par_iter()
        .map(|&big_k| {
            let k = setup.wavenumber(big_k).unwrap();
            let kh = k * ep.h;
            let mut out = Vec::new();
            let mut push = |source: &str, ps: &[Complex64]| {
                for (i, p) in ps.iter().enumerate() {
                    out.push(vec![
                        k.into(),
                        kh.into(),
                        source.into(),
                        i.into(),
                        p.re.into(),
                        p.im.into(),
                    ]);
                }
            };
            let qs = quasistatic_roots(&ep, &fr, k).map_err(|e| e.to_string())?;
            push("small_k", &qs.small_k);
            push("exact", &qs.exact);
            let nd = slipstab::nondimensionalize(&ep, &fr, k).map_err(|e| e.to_string())?;
            if nd.r > 1.0 && !nd.is_halfspace() && fr.b > fr.a {
                let modes = find_love_modes(&nd).map_err(|e| e.to_string())?;
                if let Some(fundamental) = modes.first() {
                    let extra = predict_dynamic_extra_root(&ep, &fr, k, fundamental)
                        .map_err(|e| e.to_string())?;
                    push("dynamic_extra", &extra);
                    let preds =
                        predict_long_wavelength(&nd, fundamental).map_err(|e| e.to_string())?;
                    let scale = k * ep.cs_layer();
                    let love: Vec<Complex64> = preds
                        .iter()
                        .filter(|p| p.formula == Formula::LongLove)
                        .map(|p| p.s * scale)
                        .collect();
                    push("long_love", &love);
                }
            }
            Ok(out)
        })
        .collect();
    let mut status = Status::Ok;
    for (big_k, r) in setup.k_grid.iter().zip(rows) {
        match r {
            Ok(rows) => rows.into_iter().for_each(|row| table.push(row)),
            Err(e) => {
                log::error!("K = {big_k:e}: {e}");
                status = Status::Unresolved;
            }
        }
    }
    Ok(Outcome { table, status })
}
