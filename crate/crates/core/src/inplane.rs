//! Caller-supplied in-plane transfer functions `Y₁₁(S)`, `Y₂₁(S)` and their
//! Stoneley pole data.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{ensure_positive, Error, Result};

pub type TransferFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Simple poles at `S = ±iC_St`: `Y₁₁ ≈ iA/(S − iC_St)`,
/// `Y₂₁ ≈ B/(S − iC_St)` near the upper one, conjugate-symmetric below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoneleyPoleData {
    pub c_st: f64,
    pub a: f64,
    pub b: f64,
}

impl StoneleyPoleData {
    pub fn new(c_st: f64, a: f64, b: f64) -> Result<Self> {
        ensure_positive(c_st, "C_St")?;
        if !c_st.is_finite() || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(
                "Stoneley pole data must be finite".into(),
            ));
        }
        Ok(Self { c_st, a, b })
    }
}

#[derive(Clone)]
pub struct InplaneTransferSpec {
    pub name: String,
    pub y11: TransferFn,
    pub y21: TransferFn,
    pub pole: Option<StoneleyPoleData>,
    pub y11_0: Complex64,
    pub y21_0: Complex64,
    /// Branch cuts along the imaginary axis for `|Im S| ≥ cut_from`, if any.
    pub cut_from: Option<f64>,
}

impl fmt::Debug for InplaneTransferSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InplaneTransferSpec")
            .field("name", &self.name)
            .field("pole", &self.pole)
            .field("y11_0", &self.y11_0)
            .field("y21_0", &self.y21_0)
            .field("cut_from", &self.cut_from)
            .finish()
    }
}

impl InplaneTransferSpec {
    pub fn new(name: impl Into<String>, y11: TransferFn, y21: TransferFn) -> Result<Self> {
        let mut spec = Self {
            name: name.into(),
            y11,
            y21,
            pole: None,
            y11_0: Complex64::new(0.0, 0.0),
            y21_0: Complex64::new(0.0, 0.0),
            cut_from: None,
        };
        let zero = Complex64::new(0.0, 0.0);
        spec.y11_0 = spec.eval_y11(zero)?;
        spec.y21_0 = spec.eval_y21(zero)?;
        Ok(spec)
    }

    pub fn with_pole(mut self, pole: StoneleyPoleData) -> Self {
        self.pole = Some(pole);
        self
    }

    pub fn with_cut_from(mut self, b: f64) -> Result<Self> {
        ensure_positive(b, "cut_from")?;
        self.cut_from = Some(b);
        Ok(self)
    }

    pub fn eval_y11(&self, s: Complex64) -> Result<Complex64> {
        probe(&self.y11, s, "Y11")
    }

    pub fn eval_y21(&self, s: Complex64) -> Result<Complex64> {
        probe(&self.y21, s, "Y21")
    }
}

fn probe(f: &TransferFn, s: Complex64, what: &str) -> Result<Complex64> {
    let v = f(s);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} evaluation failed at S = {s}: got {v}"
        )))
    }
}

/// Rational transfer pair with a single Stoneley pole pair and nothing else:
/// `Y₁₁ = iA/(S − iC) − iA/(S + iC)`, `Y₂₁ = B/(S − iC) + B/(S + iC)`.
pub fn rational_fixture(c_st: f64, a: f64, b: f64) -> Result<InplaneTransferSpec> {
    let pole = StoneleyPoleData::new(c_st, a, b)?;
    let up = Complex64::new(0.0, c_st);
    let i = Complex64::i();
    let y11: TransferFn = Arc::new(move |s| i * a / (s - up) - i * a / (s + up));
    let y21: TransferFn = Arc::new(move |s| b / (s - up) + b / (s + up));
    Ok(
        InplaneTransferSpec::new(format!("rational(C_St={c_st}, A={a}, B={b})"), y11, y21)?
            .with_pole(pole),
    )
}

/// Samples of `Y₁₁`, `Y₂₁` on a rectangular grid of `S`, interpolated
/// bilinearly. Values outside the grid evaluate to NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedTransfer {
    re: Vec<f64>,
    im: Vec<f64>,
    /// Row-major over `im`, then `re`.
    y11: Vec<Complex64>,
    y21: Vec<Complex64>,
}

impl TabulatedTransfer {
    pub fn new(
        re: Vec<f64>,
        im: Vec<f64>,
        y11: Vec<Complex64>,
        y21: Vec<Complex64>,
    ) -> Result<Self> {
        for (axis, name) in [(&re, "Re S"), (&im, "Im S")] {
            if axis.len() < 2 {
                return Err(Error::InvalidArgument(format!(
                    "table needs at least two {name} nodes"
                )));
            }
            if axis.windows(2).any(|w| !(w[1] > w[0])) || axis.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} nodes must be finite and strictly increasing"
                )));
            }
        }
        let n = re.len() * im.len();
        if y11.len() != n || y21.len() != n {
            return Err(Error::InvalidArgument(format!(
                "table has {} and {} values, expected {n}",
                y11.len(),
                y21.len()
            )));
        }
        Ok(Self { re, im, y11, y21 })
    }

    /// Build from unordered `(S, Y₁₁, Y₂₁)` samples that cover a full grid.
    pub fn from_samples(samples: &[(Complex64, Complex64, Complex64)]) -> Result<Self> {
        let mut re: Vec<f64> = samples.iter().map(|s| s.0.re).collect();
        let mut im: Vec<f64> = samples.iter().map(|s| s.0.im).collect();
        for v in [&mut re, &mut im] {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        let n = re.len() * im.len();
        if samples.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} samples do not form a {}x{} grid",
                samples.len(),
                re.len(),
                im.len()
            )));
        }
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let mut y11 = vec![nan; n];
        let mut y21 = vec![nan; n];
        for &(s, a, b) in samples {
            let i = re.binary_search_by(|x| x.total_cmp(&s.re)).unwrap();
            let j = im.binary_search_by(|x| x.total_cmp(&s.im)).unwrap();
            y11[j * re.len() + i] = a;
            y21[j * re.len() + i] = b;
        }
        if y11.iter().any(|v| v.re.is_nan()) {
            return Err(Error::InvalidArgument(
                "samples do not cover the grid".into(),
            ));
        }
        Self::new(re, im, y11, y21)
    }

    fn locate(nodes: &[f64], x: f64) -> Option<(usize, f64)> {
        if !(x >= nodes[0] && x <= nodes[nodes.len() - 1]) {
            return None;
        }
        let i = nodes.partition_point(|&v| v <= x).clamp(1, nodes.len() - 1) - 1;
        Some((i, (x - nodes[i]) / (nodes[i + 1] - nodes[i])))
    }

    fn interpolate(&self, values: &[Complex64], s: Complex64) -> Complex64 {
        let (Some((i, u)), Some((j, v))) =
            (Self::locate(&self.re, s.re), Self::locate(&self.im, s.im))
        else {
            return Complex64::new(f64::NAN, f64::NAN);
        };
        let w = self.re.len();
        let at = |jj: usize, ii: usize| values[jj * w + ii];
        at(j, i) * ((1.0 - u) * (1.0 - v))
            + at(j, i + 1) * (u * (1.0 - v))
            + at(j + 1, i) * ((1.0 - u) * v)
            + at(j + 1, i + 1) * (u * v)
    }

    pub fn into_spec(self, name: impl Into<String>) -> Result<InplaneTransferSpec> {
        let table = Arc::new(self);
        let t11 = Arc::clone(&table);
        let y11: TransferFn = Arc::new(move |s| t11.interpolate(&t11.y11, s));
        let y21: TransferFn = Arc::new(move |s| table.interpolate(&table.y21, s));
        InplaneTransferSpec::new(name, y11, y21)
    }
}

/// In-plane transfer data together with the friction constants that enter
/// the in-plane residual.
#[derive(Debug, Clone)]
pub struct InplaneModel {
    pub spec: Arc<InplaneTransferSpec>,
    /// Steady-state friction coefficient `f`.
    pub f: f64,
    /// Normal-stress memory coefficient `α`.
    pub alpha: f64,
}

impl InplaneModel {
    pub fn new(spec: InplaneTransferSpec, f: f64, alpha: f64) -> Result<Self> {
        if !f.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidArgument("f and alpha must be finite".into()));
        }
        Ok(Self {
            spec: Arc::new(spec),
            f,
            alpha,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
    /// Residues extracted at `+iC_St` as `(A, B)`.
    pub extracted: Option<(f64, f64)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.status)
    }

    fn push(&mut self, name: &'static str, ok: bool, detail: String) {
        let status = if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self.checks.push(CheckOutcome {
            name,
            status,
            detail,
        });
    }
}

const RESIDUE_TOL: f64 = 1e-4;
const SYMMETRY_TOL: f64 = 1e-10;

/// `lim δ→0 δ·g(S₀ + δ)` by two-level Richardson extrapolation on a
/// decade ladder of real steps.
fn limiting_quotient(
    g: impl Fn(Complex64) -> Result<Complex64>,
    s0: Complex64,
) -> Result<Complex64> {
    let q = |d: f64| g(s0 + d).map(|v| v * d);
    let (q4, q5, q6) = (q(1e-4)?, q(1e-5)?, q(1e-6)?);
    let r1 = (q5 * 10.0 - q4) / 9.0;
    let r2 = (q6 * 10.0 - q5) / 9.0;
    Ok((r2 * 100.0 - r1) / 99.0)
}

fn close(found: Complex64, expected: f64) -> bool {
    (found - expected).norm() <= RESIDUE_TOL * expected.abs() + 1e-10
}

/// Check finiteness at `S = 0`, conjugate symmetry on a probe grid and, when
/// pole data is declared, residues at `±iC_St`.
pub fn validate_inplane_spec(spec: &InplaneTransferSpec) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let zero = Complex64::new(0.0, 0.0);
    let (y11_0, y21_0) = (spec.eval_y11(zero)?, spec.eval_y21(zero)?);
    report.push(
        "finite_at_zero",
        true,
        format!("Y11(0) = {y11_0}, Y21(0) = {y21_0}"),
    );

    let mut worst = 0.0f64;
    let mut worst_at = zero;
    for &x in &[0.013, 0.21, 0.77, 1.9] {
        for &y in &[-2.3, -0.61, -0.07, 0.0, 0.07, 0.61, 2.3] {
            let s = Complex64::new(x, y);
            for f in [&spec.y11, &spec.y21] {
                let a = probe(f, s, "Y")?;
                let b = probe(f, s.conj(), "Y")?;
                let err = (b - a.conj()).norm() / a.norm().max(1.0);
                if err > worst {
                    worst = err;
                    worst_at = s;
                }
            }
        }
    }
    report.push(
        "conjugate_symmetry",
        worst <= SYMMETRY_TOL,
        format!("worst relative mismatch {worst:.3e} at S = {worst_at}"),
    );

    let Some(pole) = spec.pole else {
        for name in ["residue_upper", "residue_lower"] {
            report.checks.push(CheckOutcome {
                name,
                status: CheckStatus::Skipped,
                detail: "no Stoneley wave".into(),
            });
        }
        return Ok(report);
    };
    let i = Complex64::i();
    for (name, sign) in [("residue_upper", 1.0), ("residue_lower", -1.0)] {
        let s0 = Complex64::new(0.0, sign * pole.c_st);
        let a = limiting_quotient(|s| spec.eval_y11(s), s0)? / i;
        let b = limiting_quotient(|s| spec.eval_y21(s), s0)?;
        let ok = close(a, sign * pole.a) && close(b, pole.b);
        if sign > 0.0 {
            report.extracted = Some((a.re, b.re));
        }
        report.push(
            name,
            ok,
            format!(
                "extracted A = {a}, B = {b}; declared A = {}, B = {}",
                sign * pole.a,
                pole.b
            ),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_residues_are_recovered() {
        let spec = rational_fixture(0.9, 1.0, 0.3).unwrap();
        let report = validate_inplane_spec(&spec).unwrap();
        assert!(report.passed(), "{report:?}");
        let (a, b) = report.extracted.unwrap();
        assert!((a - 1.0).abs() < 1e-6);
        assert!((b - 0.3).abs() < 1e-6);
        assert!((spec.y11_0 - Complex64::new(-2.0 / 0.9, 0.0)).norm() < 1e-15);
        assert_eq!(spec.y21_0, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn mismatched_residue_fails() {
        let mut spec = rational_fixture(0.9, 1.0, 0.3).unwrap();
        spec.pole = Some(StoneleyPoleData::new(0.9, 1.1, 0.3).unwrap());
        let report = validate_inplane_spec(&spec).unwrap();
        assert_eq!(report.status("residue_upper"), Some(CheckStatus::Fail));
        assert!(!report.passed());
    }

    #[test]
    fn missing_pole_skips_residue_checks() {
        let y: TransferFn = Arc::new(|s: Complex64| 1.0 + s * s);
        let spec = InplaneTransferSpec::new("smooth", y.clone(), y).unwrap();
        let report = validate_inplane_spec(&spec).unwrap();
        assert!(report.passed());
        let skipped = report
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Skipped)
            .count();
        assert_eq!(skipped, 2);
        assert!(report.checks.iter().any(|c| c.detail == "no Stoneley wave"));
    }

    #[test]
    fn asymmetric_function_is_flagged() {
        let y11: TransferFn = Arc::new(|s: Complex64| 1.0 + Complex64::i() * s);
        let y21: TransferFn = Arc::new(|_| Complex64::new(0.0, 0.0));
        let spec = InplaneTransferSpec::new("skewed", y11, y21).unwrap();
        let report = validate_inplane_spec(&spec).unwrap();
        assert_eq!(report.status("conjugate_symmetry"), Some(CheckStatus::Fail));
    }

    #[test]
    fn evaluation_failure_names_probe_point() {
        let y11: TransferFn = Arc::new(|s: Complex64| {
            if s.re > 1.0 {
                Complex64::new(f64::NAN, 0.0)
            } else {
                s
            }
        });
        let y21: TransferFn = Arc::new(|s| s);
        let spec = InplaneTransferSpec::new("broken", y11, y21).unwrap();
        let err = validate_inplane_spec(&spec).unwrap_err();
        assert!(err.to_string().contains("S = 1.9"), "{err}");
    }

    #[test]
    fn table_interpolates_bilinear_data_exactly() {
        let f =
            |s: Complex64| Complex64::new(1.0 + 2.0 * s.re - 0.5 * s.im + 0.25 * s.re * s.im, s.im);
        let re: Vec<f64> = (0..5).map(|i| -1.0 + 0.5 * i as f64).collect();
        let im: Vec<f64> = (0..7).map(|j| -1.5 + 0.5 * j as f64).collect();
        let mut samples = Vec::new();
        for &y in &im {
            for &x in &re {
                let s = Complex64::new(x, y);
                samples.push((s, f(s), f(s) * 2.0));
            }
        }
        samples.reverse();
        let spec = TabulatedTransfer::from_samples(&samples)
            .unwrap()
            .into_spec("table")
            .unwrap();
        let s = Complex64::new(0.13, -0.71);
        assert!((spec.eval_y11(s).unwrap() - f(s)).norm() < 1e-14);
        assert!((spec.eval_y21(s).unwrap() - f(s) * 2.0).norm() < 1e-14);
        assert!(spec.eval_y11(Complex64::new(3.0, 0.0)).is_err());
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let z = Complex64::new(0.0, 0.0);
        let samples = [
            (Complex64::new(0.0, 0.0), z, z),
            (Complex64::new(1.0, 0.0), z, z),
            (Complex64::new(0.0, 1.0), z, z),
        ];
        assert!(TabulatedTransfer::from_samples(&samples).is_err());
    }
}
