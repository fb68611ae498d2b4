//! Argument-principle root counting over rectangles in the `S` plane.
//!
//! Windows that touch the imaginary axis are split there. The axis edge is
//! evaluated with one-sided cut limits, and poles on it are bypassed by
//! semicircles bulging into `Re S > 0`, so the left half owns those poles.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::complexcore::CutSide;
use crate::error::{Error, Result};
use crate::transfer::{NondimSet, TransferModel};

use super::residual::Problem;

/// Minimum distance between a window edge and an axis singularity.
pub const EDGE_MARGIN: f64 = 1e-6;

const MAX_DEPTH: u32 = 60;
const MAX_STEP: f64 = PI / 4.0;
const MAX_LOG_STEP: f64 = 0.5;
const FLOOR_STEP: f64 = 0.75 * PI;

/// Closed rectangle `[re_min, re_max] × [im_min, im_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max]
            .iter()
            .all(|v| v.is_finite())
            && re_min < re_max
            && im_min < im_max;
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "degenerate window [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    /// `|Re S| ≤ 1`, `|Im S| ≤ r + 1`.
    pub fn default_for(nd: &NondimSet) -> Self {
        let y = nd.r + 1.0;
        Self {
            re_min: -1.0,
            re_max: 1.0,
            im_min: -y,
            im_max: y,
        }
    }

    /// Real-axis strip for the large real root `βε/K`, when it lies beyond
    /// the default window.
    pub fn far_real_for(nd: &NondimSet) -> Option<Self> {
        let x = nd.beta * nd.eps / nd.k;
        (x > 1.0).then(|| Self {
            re_min: 1.0,
            re_max: 4.0 * x,
            im_min: -0.5,
            im_max: 0.5,
        })
    }

    pub fn contains_rect(&self, s: Complex64) -> bool {
        s.re >= self.re_min && s.re <= self.re_max && s.im >= self.im_min && s.im <= self.im_max
    }

    pub fn touches_axis(&self) -> bool {
        self.re_min <= 0.0 && self.re_max >= 0.0
    }

    fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    fn height(&self) -> f64 {
        self.im_max - self.im_min
    }
}

/// Number of roots of the characteristic residual inside `window`.
pub fn count_roots(nd: &NondimSet, model: &TransferModel, window: &Window) -> Result<i64> {
    let problem = Problem::new(*nd, model.clone())?;
    count_in(&problem, window)
}

/// Semicircle radii of the axis poles strictly inside the window's `Im` range.
pub(crate) fn detours(problem: &Problem, w: &Window) -> Vec<(f64, f64)> {
    if !w.touches_axis() {
        return Vec::new();
    }
    let sing = problem.axis_singularities();
    let mut out = Vec::new();
    for pole in &problem.poles {
        let y = pole.im;
        if y <= w.im_min || y >= w.im_max {
            continue;
        }
        let mut d = (y - w.im_min).min(w.im_max - y).min(0.2);
        for &z in &sing {
            if z != y {
                d = d.min((z - y).abs());
            }
        }
        if w.re_max > 0.0 {
            d = d.min(2.0 * w.re_max);
        }
        if w.re_min < 0.0 {
            d = d.min(2.0 * w.re_min.abs());
        }
        out.push((y, 0.25 * d));
    }
    out
}

/// Membership consistent with the contour used by [`count_in`].
pub(crate) fn region_contains(w: &Window, holes: &[(f64, f64)], s: Complex64) -> bool {
    let in_disk = |s: Complex64| {
        holes
            .iter()
            .any(|&(y, rho)| s.re >= 0.0 && (s - Complex64::new(0.0, y)).norm() < rho)
    };
    if !w.contains_rect(s) {
        // Half-disks bulge out of windows whose right edge is the axis.
        return w.re_max == 0.0 && in_disk(s);
    }
    if w.re_min == 0.0 && in_disk(s) {
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Line {
        a: Complex64,
        b: Complex64,
        side: CutSide,
    },
    Arc {
        centre: f64,
        rho: f64,
        t0: f64,
        t1: f64,
    },
}

impl Piece {
    fn at(&self, t: f64) -> (Complex64, CutSide) {
        match *self {
            Piece::Line { a, b, side } => {
                let s = if t == 0.0 {
                    a
                } else if t == 1.0 {
                    b
                } else {
                    a + (b - a) * t
                };
                (s, side)
            }
            Piece::Arc {
                centre,
                rho,
                t0,
                t1,
            } => {
                let th = t0 + (t1 - t0) * t;
                let re = if th.abs() == FRAC_PI_2 {
                    0.0
                } else {
                    rho * th.cos()
                };
                (Complex64::new(re, centre + rho * th.sin()), CutSide::Right)
            }
        }
    }

    /// At least five samples per radian of `coth(KH·â)` phase along lines.
    fn samples(&self, problem: &Problem) -> usize {
        match *self {
            Piece::Line { a, b, side } => {
                let base = (16.0 + 32.0 * (b - a).norm()).min(256.0);
                base.max(5.0 * problem.coth_phase(a, b, side)).ceil() as usize
            }
            Piece::Arc { .. } => 12,
        }
    }
}

#[derive(Clone, Copy)]
struct Sample {
    t: f64,
    s: Complex64,
    num: Complex64,
    den: Complex64,
    /// Larger of `|num′/num|` and `|den′/den|`.
    dlog: f64,
}

fn eval(problem: &Problem, piece: &Piece, t: f64) -> Result<Sample> {
    let (s, side) = piece.at(t);
    eval_at(problem, s, side, t)
}

/// Midpoint of two samples. Lines are bisected in `S` itself, which keeps
/// full absolute resolution next to the origin.
fn midpoint(problem: &Problem, piece: &Piece, a: &Sample, b: &Sample) -> Result<Sample> {
    let t = 0.5 * (a.t + b.t);
    match *piece {
        Piece::Line { side, .. } => eval_at(problem, 0.5 * (a.s + b.s), side, t),
        Piece::Arc { .. } => eval(problem, piece, t),
    }
}

fn eval_at(problem: &Problem, s: Complex64, side: CutSide, t: f64) -> Result<Sample> {
    let f = match problem.factored_on(s, side) {
        Ok(f) => f,
        Err(Error::Pole { at }) => {
            return Err(Error::IllConditionedContour {
                near: at,
                reason: "contour passes through a pole".into(),
            })
        }
        Err(e) => return Err(e),
    };
    for v in [f.num, f.den] {
        if v.norm() == 0.0 || !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::IllConditionedContour {
                near: s,
                reason: format!("residual factor {v} on the contour"),
            });
        }
    }
    // A non-finite derivative (at â = 0) leaves the step to the other tests.
    let dlog = (f.dnum / f.num).norm().max((f.dden / f.den).norm());
    Ok(Sample {
        t,
        s,
        num: f.num,
        den: f.den,
        dlog: if dlog.is_finite() { dlog } else { 0.0 },
    })
}

/// Argument steps of the numerator and denominator between two samples.
fn steps(a: &Sample, b: &Sample) -> (f64, f64) {
    ((b.num / a.num).arg(), (b.den / a.den).arg())
}

/// Change of argument of `num/den` along a piece. A step is accepted when
/// each factor's argument moves by less than `MAX_STEP`, halving agrees with
/// the coarse step, and `|f′/f|·|Δs|` stays below `MAX_LOG_STEP` for both
/// factors at both ends, so no zero of either can slip between samples.
fn arg_change(problem: &Problem, piece: &Piece) -> Result<f64> {
    let n = piece.samples(problem);
    let mut total = 0.0;
    let mut prev = eval(problem, piece, 0.0)?;
    for i in 1..=n {
        let next = eval(problem, piece, i as f64 / n as f64)?;
        let mut stack = vec![(prev, next, 0u32)];
        while let Some((a, b, depth)) = stack.pop() {
            let (dn, dd) = steps(&a, &b);
            let m = midpoint(problem, piece, &a, &b)?;
            let (n1, d1) = steps(&a, &m);
            let (n2, d2) = steps(&m, &b);
            let h = (b.s - a.s).norm();
            let small = dn.abs() < MAX_STEP && dd.abs() < MAX_STEP;
            let consistent = (n1 + n2 - dn).abs() < 1e-9 && (d1 + d2 - dd).abs() < 1e-9;
            // Within a few ulps, typically next to a branch point, nothing
            // finer can be sampled and a consistent step under π is kept.
            let floor = h <= 8.0 * f64::EPSILON * a.s.norm().max(b.s.norm());
            let last_resort = floor && consistent && dn.abs().max(dd.abs()) < FLOOR_STEP;
            if (small && consistent && a.dlog.max(b.dlog) * h < MAX_LOG_STEP) || last_resort {
                total += (n1 + n2) - (d1 + d2);
                continue;
            }
            if depth >= MAX_DEPTH || m.s == a.s || m.s == b.s {
                return Err(Error::IllConditionedContour {
                    near: m.s,
                    reason: "argument change not resolved".into(),
                });
            }
            // Right half pushed first so the left half is summed first.
            stack.push((m, b, depth + 1));
            stack.push((a, m, depth + 1));
        }
        prev = next;
    }
    Ok(total)
}

fn winding(problem: &Problem, pieces: &[Piece]) -> Result<i64> {
    let mut total = 0.0;
    for p in pieces {
        total += arg_change(problem, p)?;
    }
    let w = total / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > 1e-3 {
        return Err(Error::IllConditionedContour {
            near: pieces[0].at(0.0).0,
            reason: format!("winding {w} is not an integer"),
        });
    }
    Ok(n as i64)
}

fn check_edges(problem: &Problem, w: &Window) -> Result<()> {
    if !w.touches_axis() && w.re_min.abs().min(w.re_max.abs()) >= EDGE_MARGIN {
        return Ok(());
    }
    for z in problem.axis_singularities() {
        for y in [w.im_min, w.im_max] {
            if (z - y).abs() < EDGE_MARGIN {
                return Err(Error::IllConditionedContour {
                    near: Complex64::new(0.0, y),
                    reason: format!(
                        "window edge within {EDGE_MARGIN:e} of an axis singularity at {z}"
                    ),
                });
            }
        }
    }
    let x_close = [w.re_min, w.re_max]
        .iter()
        .any(|x| *x != 0.0 && x.abs() < EDGE_MARGIN);
    if x_close {
        return Err(Error::IllConditionedContour {
            near: Complex64::new(0.0, 0.5 * (w.im_min + w.im_max)),
            reason: "vertical window edge hugs the imaginary axis".into(),
        });
    }
    Ok(())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Axis from `y0` to `y1` (either direction) with semicircular detours. Lines
/// are split at the origin so that slow roots next to it are sampled at full
/// absolute resolution.
fn axis_pieces(y0: f64, y1: f64, holes: &[(f64, f64)], side: CutSide) -> Vec<Piece> {
    let line = |a: f64, b: f64, out: &mut Vec<Piece>| {
        if a * b < 0.0 {
            out.push(Piece::Line {
                a: c(0.0, a),
                b: c(0.0, 0.0),
                side,
            });
            out.push(Piece::Line {
                a: c(0.0, 0.0),
                b: c(0.0, b),
                side,
            });
        } else {
            out.push(Piece::Line {
                a: c(0.0, a),
                b: c(0.0, b),
                side,
            });
        }
    };
    let up = y1 > y0;
    let mut hs: Vec<(f64, f64)> = holes.to_vec();
    if !up {
        hs.reverse();
    }
    let mut out = Vec::new();
    let mut y = y0;
    for (centre, rho) in hs {
        let (enter, leave, t0, t1) = if up {
            (centre - rho, centre + rho, -FRAC_PI_2, FRAC_PI_2)
        } else {
            (centre + rho, centre - rho, FRAC_PI_2, -FRAC_PI_2)
        };
        line(y, enter, &mut out);
        out.push(Piece::Arc {
            centre,
            rho,
            t0,
            t1,
        });
        y = leave;
    }
    line(y, y1, &mut out);
    out
}

fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Vec<Piece> {
    let side = CutSide::Right;
    vec![
        Piece::Line {
            a: c(x0, y0),
            b: c(x1, y0),
            side,
        },
        Piece::Line {
            a: c(x1, y0),
            b: c(x1, y1),
            side,
        },
        Piece::Line {
            a: c(x1, y1),
            b: c(x0, y1),
            side,
        },
        Piece::Line {
            a: c(x0, y1),
            b: c(x0, y0),
            side,
        },
    ]
}

pub(crate) fn count_in(problem: &Problem, w: &Window) -> Result<i64> {
    check_edges(problem, w)?;
    let (x0, x1, y0, y1) = (w.re_min, w.re_max, w.im_min, w.im_max);
    if !w.touches_axis() {
        return winding(problem, &rectangle(x0, x1, y0, y1));
    }
    let holes = detours(problem, w);
    let mut total = 0;
    if x0 < 0.0 {
        let side = CutSide::Left;
        let mut pieces = vec![Piece::Line {
            a: c(x0, y0),
            b: c(0.0, y0),
            side,
        }];
        pieces.extend(axis_pieces(y0, y1, &holes, side));
        pieces.push(Piece::Line {
            a: c(0.0, y1),
            b: c(x0, y1),
            side,
        });
        pieces.push(Piece::Line {
            a: c(x0, y1),
            b: c(x0, y0),
            side,
        });
        total += winding(problem, &pieces)? + holes.len() as i64;
    }
    if x1 > 0.0 {
        let side = CutSide::Right;
        let mut pieces = vec![
            Piece::Line {
                a: c(0.0, y0),
                b: c(x1, y0),
                side,
            },
            Piece::Line {
                a: c(x1, y0),
                b: c(x1, y1),
                side,
            },
            Piece::Line {
                a: c(x1, y1),
                b: c(0.0, y1),
                side,
            },
        ];
        pieces.extend(axis_pieces(y1, y0, &holes, side));
        total += winding(problem, &pieces)?;
    }
    Ok(total)
}

/// Children of a window for subdivision; split lines avoid the axis
/// singularities, and an axis-straddling window is split at `Re S = 0`.
pub(crate) fn subdivide(problem: &Problem, w: &Window) -> Vec<Window> {
    let sing = problem.axis_singularities();
    let xs = if w.re_min < 0.0 && w.re_max > 0.0 {
        0.0
    } else {
        w.re_min + 0.5137 * w.width()
    };
    let mut ys = w.im_min + 0.4871 * w.height();
    let clearance = (1e-3 * w.height()).max(10.0 * EDGE_MARGIN);
    for _ in 0..64 {
        match sing.iter().find(|&&z| (z - ys).abs() < clearance) {
            Some(&z) => ys = z + if ys >= z { clearance } else { -clearance },
            None => break,
        }
    }
    let mut out = Vec::with_capacity(4);
    for (a, b) in [(w.re_min, xs), (xs, w.re_max)] {
        for (p, q) in [(w.im_min, ys), (ys, w.im_max)] {
            if b > a && q > p {
                out.push(Window {
                    re_min: a,
                    re_max: b,
                    im_min: p,
                    im_max: q,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layer(k: f64, eps: f64, r: f64) -> NondimSet {
        NondimSet::new(k, 1.0, eps, 1.0, 1.5, r).unwrap()
    }

    #[test]
    fn empty_window_counts_zero() {
        let nd = layer(1e3, 1e-3, 1.5);
        let w = Window::new(0.1, 0.9, -0.4, 0.4).unwrap();
        assert_eq!(
            count_roots(&nd, &TransferModel::LayerOnHalfspaceAntiplane, &w).unwrap(),
            0
        );
    }

    #[test]
    fn isolated_slow_root_counts_one() {
        // Only the slow root -2 eps m/(1+m) = -1.2e-3 lies in this box.
        let nd = layer(1e3, 1e-3, 1.5);
        let w = Window::new(-5e-3, -1e-4, -1e-3, 1e-3).unwrap();
        assert_eq!(
            count_roots(&nd, &TransferModel::LayerOnHalfspaceAntiplane, &w).unwrap(),
            1
        );
    }

    #[test]
    fn quadratic_model_has_two_roots() {
        let nd = layer(1e-4, 1e-2, 1.5);
        let w = Window::new(-1.0, 1e3, -3.0, 3.0).unwrap();
        assert_eq!(
            count_roots(&nd, &TransferModel::QuasistaticLayer, &w).unwrap(),
            2
        );
    }

    #[test]
    fn children_add_up_to_parent() {
        let nd = layer(1.0, 1e-2, 2.0);
        let model = TransferModel::LayerOnHalfspaceAntiplane;
        let problem = Problem::new(nd, model).unwrap();
        let w = Window::default_for(&nd);
        let parent = count_in(&problem, &w).unwrap();
        let sum: i64 = subdivide(&problem, &w)
            .iter()
            .map(|c| count_in(&problem, c).unwrap())
            .sum();
        assert_eq!(parent, sum);
    }

    #[test]
    fn edge_on_pole_is_rejected() {
        let nd = layer(1.0, 1e-2, 2.0);
        let problem = Problem::new(nd, TransferModel::LayerOnHalfspaceAntiplane).unwrap();
        let y = problem.poles.last().unwrap().im;
        let w = Window::new(-0.5, 0.5, -1.0, y + 1e-8).unwrap();
        assert!(matches!(
            count_in(&problem, &w),
            Err(Error::IllConditionedContour { .. })
        ));
    }
}
