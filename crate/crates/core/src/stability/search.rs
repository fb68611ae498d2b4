use std::f64::consts::PI;

use num_complex::Complex64;

use crate::complexcore::CutSide;
use crate::error::{Error, Result};
use crate::transfer::{NondimSet, TransferModel};

use super::asymptotics::{all_seeds, AxisAnchor};
use super::contour::{count_in, detours, region_contains, subdivide, Window};
use super::residual::{AxisPole, Problem};
use super::{MotionClass, StabilityClass, DEFAULT_QS_THRESHOLD};

/// One converged root of the characteristic equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub s: Complex64,
    /// Set for roots solved relative to a point on the imaginary axis; `offset`
    /// then carries the shift from that point at full relative precision.
    pub anchor: Option<AxisAnchor>,
    /// Residual divided by the sum of magnitudes of its terms.
    pub residual: f64,
    /// `Re(p)`, 1/s; only with dimensional scales.
    pub growth_rate: Option<f64>,
    /// `−Im(p)/k`, m/s; only with dimensional scales.
    pub phase_velocity: Option<f64>,
    pub stability: StabilityClass,
    pub motion: MotionClass,
}

impl RootResult {
    pub(crate) fn new(s: Complex64, anchor: Option<AxisAnchor>, residual: f64) -> Self {
        let r = Self {
            s,
            anchor,
            residual,
            growth_rate: None,
            phase_velocity: None,
            stability: StabilityClass::Stable,
            motion: MotionClass::WaveLike,
        };
        super::classify(r, DEFAULT_QS_THRESHOLD)
    }

    /// Phase velocity over the layer shear speed, `−Im S`.
    pub fn phase_velocity_ratio(&self) -> f64 {
        -self.s.im
    }

    /// Attach dimensional growth rate and phase velocity.
    pub fn with_scales(mut self, scales: &super::Scales) -> Self {
        self.growth_rate = Some(self.s.re * scales.k_abs * scales.c_s);
        self.phase_velocity = Some(-self.s.im * scales.c_s);
        self
    }

    /// Shift from the anchoring pole, when there is one.
    pub fn offset(&self) -> Option<Complex64> {
        self.anchor.map(|a| a.offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Subdivision depth before giving up on a window.
    pub max_depth: usize,
    /// Grid seeds per side in each searched window.
    pub grid: usize,
    /// Accepted relative residual.
    pub tolerance: f64,
    /// Roots closer than this are merged; below `|S| = 1` the distance is
    /// taken relative to `|S|`.
    pub dedup: f64,
    pub quasi_static_threshold: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_depth: 6,
            grid: 6,
            tolerance: 1e-10,
            dedup: 1e-8,
            quasi_static_threshold: DEFAULT_QS_THRESHOLD,
        }
    }
}

/// Outcome of a search over one or more windows.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSearch {
    pub roots: Vec<RootResult>,
    /// Argument-principle count summed over the searched windows.
    pub winding_count: i64,
    /// False when some subwindow still disagreed at the depth limit.
    pub resolved: bool,
}

impl RootSearch {
    pub fn into_result(self) -> Result<Vec<RootResult>> {
        if self.resolved {
            Ok(self.roots)
        } else {
            Err(Error::IncompleteSearch {
                expected: self.winding_count,
                found: self.roots.len(),
            })
        }
    }

    pub fn max_growth(&self) -> Option<f64> {
        self.roots.iter().map(|r| r.s.re).reduce(f64::max)
    }
}

/// All roots inside `window`. Errors when the Newton roots cannot be
/// reconciled with the winding count.
pub fn find_roots(
    nd: &NondimSet,
    model: &TransferModel,
    window: &Window,
) -> Result<Vec<RootResult>> {
    find_roots_with(nd, model, &[*window], &SearchOptions::default())?.into_result()
}

/// Roots in the default window plus, when needed, the far real-axis strip.
pub fn find_all_roots(
    nd: &NondimSet,
    model: &TransferModel,
    opts: &SearchOptions,
) -> Result<RootSearch> {
    let mut windows = vec![Window::default_for(nd)];
    windows.extend(Window::far_real_for(nd));
    find_roots_with(nd, model, &windows, opts)
}

/// Search several non-overlapping windows and merge the results.
pub fn find_roots_with(
    nd: &NondimSet,
    model: &TransferModel,
    windows: &[Window],
    opts: &SearchOptions,
) -> Result<RootSearch> {
    let problem = Problem::new(*nd, model.clone())?;
    let mut pool = Pool::default();
    for seed in all_seeds(&problem) {
        pool.try_seed(&problem, seed.s, seed.anchor.map(|a| a.im), opts);
    }
    for pole in &problem.poles {
        if let Some(d) = problem.anchored_seed(pole) {
            pool.try_anchored(&problem, pole, d, opts);
        }
    }
    let top = windows
        .iter()
        .map(|w| w.im_min.abs().max(w.im_max.abs()))
        .fold(0.0, f64::max);
    for seed in cut_seeds(&problem, top) {
        let found = match seed.center {
            Some(c) => newton_unit(&problem, c, seed.point, seed.side, opts),
            None => newton_on(&problem, seed.point, seed.side, opts),
        };
        if let Ok(root) = found {
            pool.insert(root, opts.dedup);
        }
    }
    let mut roots = Vec::new();
    let mut total = 0;
    let mut resolved = true;
    for w in windows {
        let mut found = Vec::new();
        let (count, ok) = solve_window(&problem, w, &mut pool, opts, 0, &mut found)?;
        total += count;
        resolved &= ok;
        roots.extend(found);
    }
    let mut roots: Vec<RootResult> = dedup(roots, opts.dedup)
        .into_iter()
        .map(|r| super::classify(r, opts.quasi_static_threshold))
        .collect();
    roots.sort_by(|a, b| a.s.re.total_cmp(&b.s.re).then(a.s.im.total_cmp(&b.s.im)));
    if !resolved {
        log::warn!(
            "root search unresolved: winding count {total}, {} roots found",
            roots.len()
        );
    }
    Ok(RootSearch {
        roots,
        winding_count: total,
        resolved,
    })
}

fn solve_window(
    problem: &Problem,
    w: &Window,
    pool: &mut Pool,
    opts: &SearchOptions,
    depth: usize,
    out: &mut Vec<RootResult>,
) -> Result<(i64, bool)> {
    let count = count_in(problem, w)?;
    let holes = detours(problem, w);
    let inside = |pool: &Pool| -> Vec<RootResult> {
        pool.roots
            .iter()
            .filter(|r| region_contains(w, &holes, r.s))
            .copied()
            .collect()
    };
    let mut mine = inside(pool);
    if mine.len() as i64 != count && count > 0 {
        seed_grid(problem, w, pool, opts);
        mine = inside(pool);
    }
    if mine.len() as i64 == count {
        out.extend(mine);
        return Ok((count, true));
    }
    if depth >= opts.max_depth {
        log::debug!(
            "window {w:?}: winding {count}, {} roots at depth limit",
            mine.len()
        );
        out.extend(mine);
        return Ok((count, false));
    }
    let mut ok = true;
    for child in subdivide(problem, w) {
        let (_, child_ok) = solve_window(problem, &child, pool, opts, depth + 1, out)?;
        ok &= child_ok;
    }
    Ok((count, ok))
}

/// Roots can hug a branch cut where `coth(KH·â)` oscillates along it, too
/// close to the axis for grid seeds. Seed from the local minima of the
/// relative residual on each side of each cut, up to `|Im S| = top`. The
/// scan is uniform in `|â| = √(y² − 1)`, the variable the oscillation
/// is uniform in.
fn cut_seeds(problem: &Problem, top: f64) -> Vec<CutSeed> {
    let Some(b) = problem.cut_from else {
        return Vec::new();
    };
    let lo = b.max(1.0);
    if !(top > lo) {
        return Vec::new();
    }
    let phase = problem.coth_phase(
        Complex64::new(0.0, lo),
        Complex64::new(0.0, top),
        CutSide::Right,
    );
    if phase < PI {
        return Vec::new();
    }
    // With the cut reaching below ±i, â vanishes on it at ±i and the roots
    // closest to there are only resolved as offsets from ±i.
    let about_unit = b < 1.0;
    let n = (16.0 * phase / PI).ceil() as usize + 2;
    let (u0, u1) = (
        ((lo - 1.0) * (lo + 1.0)).sqrt(),
        ((top - 1.0) * (top + 1.0)).sqrt(),
    );
    let mut out = Vec::new();
    for sign in [-1.0, 1.0] {
        let point = |i: usize| {
            let u = u0 + (u1 - u0) * i as f64 / n as f64;
            let y = u.hypot(1.0);
            if about_unit {
                Complex64::new(0.0, sign * u * u / (y + 1.0))
            } else {
                Complex64::new(0.0, sign * y)
            }
        };
        for side in [CutSide::Left, CutSide::Right] {
            let vals: Vec<f64> = (0..=n)
                .map(|i| {
                    let e = if about_unit {
                        problem.about_unit(sign, point(i), side).map(|(e, _)| e)
                    } else {
                        problem.value(point(i), side)
                    };
                    e.map_or(f64::INFINITY, |e| e.relative())
                })
                .collect();
            for i in 1..n {
                if vals[i] < vals[i - 1] && vals[i] <= vals[i + 1] {
                    out.push(CutSeed {
                        center: about_unit.then_some(sign),
                        point: point(i),
                        side,
                    });
                }
            }
        }
    }
    out
}

/// A seed on a cut; with `center`, `point` is the offset from `i·center`.
struct CutSeed {
    center: Option<f64>,
    point: Complex64,
    side: CutSide,
}

fn seed_grid(problem: &Problem, w: &Window, pool: &mut Pool, opts: &SearchOptions) {
    let n = opts.grid.max(1);
    for i in 0..n {
        for j in 0..n {
            let x = w.re_min + (i as f64 + 0.5) / n as f64 * (w.re_max - w.re_min);
            let y = w.im_min + (j as f64 + 0.5) / n as f64 * (w.im_max - w.im_min);
            pool.try_seed(problem, Complex64::new(x, y), None, opts);
        }
    }
}

#[derive(Default)]
struct Pool {
    roots: Vec<RootResult>,
}

impl Pool {
    fn insert(&mut self, root: RootResult, dedup_tol: f64) {
        if let Some(existing) = self
            .roots
            .iter_mut()
            .find(|r| same_root(r, &root, dedup_tol))
        {
            if better(&root, existing) {
                *existing = root;
            }
            return;
        }
        self.roots.push(root);
    }

    fn try_seed(
        &mut self,
        problem: &Problem,
        seed: Complex64,
        pole_im: Option<f64>,
        opts: &SearchOptions,
    ) {
        if let Some(im) = pole_im {
            if let Some(pole) = problem.poles.iter().find(|p| p.im == im && p.anchorable()) {
                let offset = Complex64::new(seed.re, seed.im - im);
                self.try_anchored(problem, pole, offset, opts);
                return;
            }
        }
        if let Ok(root) = newton(problem, seed, opts) {
            self.insert(root, opts.dedup);
        }
    }

    fn try_anchored(
        &mut self,
        problem: &Problem,
        pole: &AxisPole,
        seed: Complex64,
        opts: &SearchOptions,
    ) {
        if let Ok(root) = newton_anchored(problem, pole, seed, opts) {
            self.insert(root, opts.dedup);
        }
    }
}

fn better(a: &RootResult, b: &RootResult) -> bool {
    match (a.anchor.is_some(), b.anchor.is_some()) {
        (true, false) => true,
        (false, true) => false,
        _ => a.residual < b.residual,
    }
}

/// Distance `tol` applies for `|S| ≥ 1`; closer to the origin it scales with
/// `|S|`, since roots there can be closer together than `tol` when ε is small.
fn same_root(a: &RootResult, b: &RootResult, tol: f64) -> bool {
    let size = a.s.norm().max(b.s.norm()).min(1.0);
    (a.s - b.s).norm() < tol * size
}

fn dedup(roots: Vec<RootResult>, tol: f64) -> Vec<RootResult> {
    let mut out: Vec<RootResult> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.iter_mut().find(|o| same_root(o, &r, tol)) {
            Some(o) if better(&r, o) => *o = r,
            Some(_) => {}
            None => out.push(r),
        }
    }
    out
}

const MAX_ITER: usize = 100;

fn newton(problem: &Problem, seed: Complex64, opts: &SearchOptions) -> Result<RootResult> {
    newton_on(problem, seed, CutSide::Right, opts)
}

/// Newton iteration on the pole-free numerator of the residual; `side`
/// applies while an iterate lies on a cut.
fn newton_on(
    problem: &Problem,
    seed: Complex64,
    side: CutSide,
    opts: &SearchOptions,
) -> Result<RootResult> {
    let mut s = seed;
    let mut last = f64::INFINITY;
    for _ in 0..MAX_ITER {
        last = problem.value(s, side)?.relative();
        let f = problem.factored_on(s, side)?;
        if f.dnum.norm() == 0.0 {
            break;
        }
        let mut step = f.num / f.dnum;
        let cap = 0.5 * (1.0 + s.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        s -= step;
        if !(s.re.is_finite() && s.im.is_finite()) {
            break;
        }
        if step.norm() <= 1e-15 * s.norm().max(1e-300) || last == 0.0 {
            break;
        }
    }
    let e = problem.value(s, side)?;
    let rel = e.relative();
    if rel <= opts.tolerance && s.re.is_finite() && s.im.is_finite() {
        Ok(RootResult::new(s, None, rel))
    } else {
        Err(Error::NoConvergence {
            seed,
            residual: rel.min(last),
        })
    }
}

/// [`newton_on`] in the offset `δ` from `i·center`, `center = ±1`.
fn newton_unit(
    problem: &Problem,
    center: f64,
    seed: Complex64,
    side: CutSide,
    opts: &SearchOptions,
) -> Result<RootResult> {
    let mut d = seed;
    let mut last = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let (e, f) = problem.about_unit(center, d, side)?;
        last = e.relative();
        if f.dnum.norm() == 0.0 {
            break;
        }
        let mut step = f.num / f.dnum;
        let cap = 0.5 * (1.0 + d.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        d -= step;
        if !(d.re.is_finite() && d.im.is_finite()) {
            break;
        }
        if step.norm() <= 1e-15 * d.norm().max(1e-300) || last == 0.0 {
            break;
        }
    }
    let (e, _) = problem.about_unit(center, d, side)?;
    let rel = e.relative();
    if rel <= opts.tolerance && d.re.is_finite() && d.im.is_finite() {
        let s = Complex64::new(d.re, center + d.im);
        Ok(RootResult::new(
            s,
            Some(AxisAnchor {
                im: center,
                offset: d,
            }),
            rel,
        ))
    } else {
        Err(Error::NoConvergence {
            seed: Complex64::new(seed.re, center + seed.im),
            residual: rel.min(last),
        })
    }
}

fn newton_anchored(
    problem: &Problem,
    pole: &AxisPole,
    seed: Complex64,
    opts: &SearchOptions,
) -> Result<RootResult> {
    let limit = problem
        .axis_singularities()
        .iter()
        .filter(|&&z| z != pole.im)
        .map(|z| (z - pole.im).abs())
        .fold(0.5f64, f64::min)
        * 0.5;
    let mut d = seed;
    for _ in 0..MAX_ITER {
        let (e, dv) = problem.anchored(pole, d)?;
        if dv.norm() == 0.0 || e.value.norm() == 0.0 {
            break;
        }
        let step = e.value / dv;
        log::trace!(
            "pole {}: offset {d:e}, residual {:e}",
            pole.im,
            e.relative()
        );
        d -= step;
        if !(d.norm() < limit) {
            return Err(Error::NoConvergence {
                seed,
                residual: f64::INFINITY,
            });
        }
        if step.norm() <= 1e-15 * d.norm() {
            break;
        }
    }
    let (e, _) = problem.anchored(pole, d)?;
    let rel = e.relative();
    if rel > opts.tolerance {
        return Err(Error::NoConvergence {
            seed,
            residual: rel,
        });
    }
    let s = Complex64::new(d.re, pole.im + d.im);
    Ok(RootResult::new(
        s,
        Some(AxisAnchor {
            im: pole.im,
            offset: d,
        }),
        rel,
    ))
}

/// Newton polish of a single seed, with a pole anchor if one is given.
pub fn refine_root(
    nd: &NondimSet,
    model: &TransferModel,
    seed: Complex64,
    anchor: Option<f64>,
) -> Result<RootResult> {
    let problem = Problem::new(*nd, model.clone())?;
    let opts = SearchOptions::default();
    if let Some(im) = anchor {
        if let Some(pole) = problem.poles.iter().find(|p| p.im == im && p.anchorable()) {
            return newton_anchored(&problem, pole, Complex64::new(seed.re, seed.im - im), &opts);
        }
    }
    newton(&problem, seed, &opts)
}
