#![allow(dead_code)]

use num_complex::Complex64;
use slipstab::{NondimSet, RootResult};

pub fn layer(k: f64, eps: f64, m: f64, r: f64) -> NondimSet {
    NondimSet::new(k, 1.0, eps, 1.0, m, r).unwrap()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fitted_order(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub fn strictly_decreasing(y: &[f64]) -> bool {
    y.windows(2).all(|w| w[1] < w[0])
}

pub fn nearest(roots: &[RootResult], s: Complex64) -> &RootResult {
    roots
        .iter()
        .min_by(|a, b| (a.s - s).norm().total_cmp(&(b.s - s).norm()))
        .unwrap()
}

/// Root anchored on the axis pole at `i·im`.
pub fn anchored_at(roots: &[RootResult], im: f64) -> &RootResult {
    roots
        .iter()
        .find(|r| r.anchor.map(|a| a.im) == Some(im))
        .expect("no root anchored at that pole")
}

/// Every root's mirror image is also in the table.
pub fn conjugate_closed(roots: &[RootResult], tol: f64) -> bool {
    roots.iter().all(|r| {
        roots
            .iter()
            .any(|q| (q.s - r.s.conj()).norm() <= tol * (1.0 + r.s.norm()))
    })
}
