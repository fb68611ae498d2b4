//! Love modes of a layer on a half-space, zeros of the transfer function,
//! and pole residues.
//!
//! On `S = iC` with `1 < C < r` the Love function reduces to `M = i·g(C)`,
//! `g(C) = q − m·p·cot(KH·q)`, `q = √(C² − 1)`, `p = √(1 − C²/r²)`.

use num_complex::Complex64;

use crate::complexcore::CutSide;
use crate::error::{Error, Result};
use crate::transfer::{AntiplaneTerms, NondimSet};

/// Distance from `C = 1` or `C = r` below which a mode is flagged.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// One Love mode: a simple pole of `F` at `S = ±iC`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoveMode {
    /// Mode index, 0 for the fundamental.
    pub n: usize,
    /// Phase speed over the layer shear speed, in `(1, r)`.
    pub c: f64,
    /// Residue coefficient: `F ≈ i·A / (S − iC)` near the pole.
    pub a: f64,
    /// Set when `C` lies within [`BOUNDARY_TOL`] of 1 or `r`.
    pub boundary: bool,
}

/// Love function along the upper imaginary axis in terms of `q`.
fn love_g(q: f64, q_max: f64, kh: f64, m: f64, r: f64) -> f64 {
    let p = ((q_max - q) * (q_max + q)).max(0.0).sqrt() / r;
    let x = kh * q;
    q - m * p * x.cos() / x.sin()
}

/// All Love modes sorted by ascending speed. Empty when `r ≤ 1` or the
/// layer is infinitely thick.
pub fn find_love_modes(nd: &NondimSet) -> Result<Vec<LoveMode>> {
    nd.validate()?;
    let kh = nd.kh();
    if nd.r <= 1.0 || !kh.is_finite() {
        return Ok(Vec::new());
    }
    let q_max = ((nd.r - 1.0) * (nd.r + 1.0)).sqrt();
    let step = std::f64::consts::PI / kh;
    let mut modes = Vec::new();
    let mut n = 0usize;
    loop {
        let lo0 = n as f64 * step;
        if lo0 >= q_max {
            break;
        }
        let hi0 = ((n as f64 + 0.5) * step).min(q_max);
        // g -> -inf at lo0+, g(hi0) >= 0; exactly one crossing.
        let (mut lo, mut hi) = (lo0, hi0);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if love_g(mid, q_max, kh, nd.m, nd.r) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = if lo > lo0
            && love_g(lo, q_max, kh, nd.m, nd.r).abs() < love_g(hi, q_max, kh, nd.m, nd.r).abs()
        {
            lo
        } else {
            hi
        };
        let c = q.hypot(1.0);
        // A pole within a few ulps of the branch point cannot be detoured around.
        if nd.r - c < 4.0 * f64::EPSILON * nd.r {
            return Err(Error::Regime(format!(
                "Love mode {n} is not separable from the substrate speed at KH = {kh:e} in double precision"
            )));
        }
        let a = residue_at_speed(c, nd)?;
        let boundary = c - 1.0 < BOUNDARY_TOL || nd.r - c < BOUNDARY_TOL;
        modes.push(LoveMode { n, c, a, boundary });
        n += 1;
    }
    Ok(modes)
}

/// Speeds `C ∈ (1, r)` with `KH·√(C² − 1) = nπ`, `n ≥ 1`: zeros of `F`
/// and poles of `M`.
pub fn find_f_zeros(nd: &NondimSet) -> Result<Vec<f64>> {
    nd.validate()?;
    let kh = nd.kh();
    if nd.r <= 1.0 || !kh.is_finite() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for n in 1.. {
        let c = (n as f64 * std::f64::consts::PI / kh).hypot(1.0);
        if c >= nd.r {
            break;
        }
        out.push(c);
    }
    Ok(out)
}

/// Residue coefficient of `F` at the pole `S = i·mode.c`.
pub fn residue_at_mode(mode: &LoveMode, nd: &NondimSet) -> Result<f64> {
    nd.validate()?;
    residue_at_speed(mode.c, nd)
}

pub(crate) fn residue_at_speed(c: f64, nd: &NondimSet) -> Result<f64> {
    let s = Complex64::new(0.0, c);
    let t = AntiplaneTerms::at(s, nd, false, CutSide::Right);
    let raw = t.n / (Complex64::i() * t.dm);
    if !raw.re.is_finite() || !raw.im.is_finite() {
        return Err(Error::Pole { at: s });
    }
    if raw.im.abs() > 1e-6 * raw.re.abs() {
        return Err(Error::InconsistentResidue {
            c,
            re: raw.re,
            im: raw.im,
        });
    }
    Ok(raw.re)
}
