//! Interfacial transfer functions in nondimensional variables.
//!
//! For a layer of nondimensional thickness `H` on a half-space, with
//! `â = √(1 + S²)` and `â′ = √(1 + S²/r²)`,
//!
//! ```text
//! M(S) = â + m·â′·coth(KH·â)          (Love function, scaled by μ)
//! F(S) = 2m·â·â′ / M(S)
//! ```
//!
//! `F` is even in `â`, so for a finite layer the only genuine cuts are the
//! substrate ones beyond `±ir`. `M` on its own changes sign across the layer
//! cut, which matters when it is continued around a Love pole.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::complexcore::{coth_unchecked, radical, radical_scaled, ComplexS, CutSide};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::inplane::InplaneModel;

/// Dimensional description of the layer (primed: substrate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticPair {
    /// Shear modulus of the layer, Pa.
    pub mu_layer: f64,
    /// Density of the layer, kg/m³.
    pub rho_layer: f64,
    /// Shear modulus of the substrate, Pa.
    pub mu_sub: f64,
    /// Density of the substrate, kg/m³.
    pub rho_sub: f64,
    /// Layer thickness, m. `f64::INFINITY` describes two half-spaces.
    pub h: f64,
}

impl ElasticPair {
    pub fn new(mu_layer: f64, rho_layer: f64, mu_sub: f64, rho_sub: f64, h: f64) -> Result<Self> {
        ensure_positive(mu_layer, "mu_layer")?;
        ensure_positive(rho_layer, "rho_layer")?;
        ensure_positive(mu_sub, "mu_sub")?;
        ensure_positive(rho_sub, "rho_sub")?;
        ensure_positive(h, "h")?;
        Ok(Self {
            mu_layer,
            rho_layer,
            mu_sub,
            rho_sub,
            h,
        })
    }

    /// Shear wave speed of the layer, `c_s`.
    pub fn cs_layer(&self) -> f64 {
        (self.mu_layer / self.rho_layer).sqrt()
    }

    /// Shear wave speed of the substrate, `c_s′`.
    pub fn cs_sub(&self) -> f64 {
        (self.mu_sub / self.rho_sub).sqrt()
    }
}

/// Nondimensional groups of the anti-plane stability problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondimSet {
    /// Wavenumber `K = μ|k|L / (2aσ_o)`.
    pub k: f64,
    /// Layer thickness `H = 2aσ_o h / (μL)`; infinite for two half-spaces.
    pub h: f64,
    /// Slip velocity `ε = μV_o / (2aσ_o c_s)`.
    pub eps: f64,
    /// `(b − a)/a`; positive for velocity weakening.
    pub beta: f64,
    /// Modulus ratio `μ′/μ`.
    pub m: f64,
    /// Wave speed ratio `c_s′/c_s`.
    pub r: f64,
}

impl NondimSet {
    pub fn new(k: f64, h: f64, eps: f64, beta: f64, m: f64, r: f64) -> Result<Self> {
        let nd = Self {
            k,
            h,
            eps,
            beta,
            m,
            r,
        };
        nd.validate()?;
        Ok(nd)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive(self.k, "K")?;
        ensure_positive(self.h, "H")?;
        ensure_positive(self.eps, "eps")?;
        ensure_positive(self.m, "m")?;
        ensure_positive(self.r, "r")?;
        if !self.beta.is_finite() || !self.k.is_finite() || !self.eps.is_finite() {
            return Err(Error::InvalidArgument(
                "K, eps and beta must be finite".into(),
            ));
        }
        if !self.m.is_finite() || !self.r.is_finite() {
            return Err(Error::InvalidArgument("m and r must be finite".into()));
        }
        Ok(())
    }

    /// `K·H`, equal to `|k|h` of the dimensional problem.
    pub fn kh(&self) -> f64 {
        self.k * self.h
    }

    pub fn is_halfspace(&self) -> bool {
        self.h.is_infinite()
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }
}

/// Which elastic relation closes the characteristic equation.
#[derive(Clone)]
pub enum TransferModel {
    /// Elastic layer on a dissimilar half-space, elastodynamic, anti-plane.
    LayerOnHalfspaceAntiplane,
    /// Two dissimilar half-spaces, elastodynamic, anti-plane (`H` ignored).
    HalfspacesAntiplane,
    /// Layer on half-space in the quasi-static approximation.
    QuasistaticLayer,
    /// In-plane sliding with caller-provided `Y₁₁`, `Y₂₁`.
    UserSupplied(Arc<InplaneModel>),
}

impl TransferModel {
    pub fn name(&self) -> &'static str {
        match self {
            TransferModel::LayerOnHalfspaceAntiplane => "layer",
            TransferModel::HalfspacesAntiplane => "halfspaces",
            TransferModel::QuasistaticLayer => "quasistatic",
            TransferModel::UserSupplied(_) => "inplane",
        }
    }

    pub fn is_inplane(&self) -> bool {
        matches!(self, TransferModel::UserSupplied(_))
    }
}

impl fmt::Debug for TransferModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransferModel::UserSupplied(m) => write!(f, "UserSupplied({})", m.spec.name),
            other => f.write_str(other.name()),
        }
    }
}

/// Values and S-derivatives of the anti-plane building blocks at one point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AntiplaneTerms {
    pub a: Complex64,
    /// `N = 2m·â·â′`.
    pub n: Complex64,
    pub dn: Complex64,
    /// `M`; infinite when `KH·â = 0`.
    pub m: Complex64,
    pub dm: Complex64,
    pub d2m: Complex64,
    /// `|â| + m·|â′·coth(KH·â)|`, the size of the terms summed into `M`.
    pub m_terms: f64,
    /// True when `KH·â` sits on the `coth` pole, i.e. `M = ∞` and `F = 0`.
    pub m_infinite: bool,
}

impl AntiplaneTerms {
    /// Evaluate with the default radicals for the requested cut side.
    pub fn at(s: Complex64, nd: &NondimSet, halfspace: bool, side: CutSide) -> Self {
        let a = radical(s, side);
        let ap = radical_scaled(s, nd.r, side);
        Self::with_radicals(s, a, ap, nd, halfspace)
    }

    /// Evaluate with caller-chosen radicals (used to continue `â` across its
    /// cut next to a Love pole).
    pub fn with_radicals(
        s: Complex64,
        a: Complex64,
        ap: Complex64,
        nd: &NondimSet,
        halfspace: bool,
    ) -> Self {
        let m_ratio = nd.m;
        let r2 = nd.r * nd.r;
        let n = 2.0 * m_ratio * a * ap;
        let a_s = s / a;
        let a_ss = (a * a * a).inv();
        let ap_s = s / (r2 * ap);
        let ap_ss = (r2 * ap * ap * ap).inv();
        let dn = 2.0 * m_ratio * (a_s * ap + a * ap_s);

        if halfspace || !nd.kh().is_finite() {
            let m = a + m_ratio * ap;
            let dm = a_s + m_ratio * ap_s;
            let d2m = a_ss + m_ratio * ap_ss;
            let m_terms = a.norm() + m_ratio * ap.norm();
            return Self {
                a,
                n,
                dn,
                m,
                dm,
                d2m,
                m_terms,
                m_infinite: false,
            };
        }

        let kh = nd.kh();
        let z = kh * a;
        if z.re == 0.0 && z.im == 0.0 {
            let inf = Complex64::new(f64::INFINITY, 0.0);
            return Self {
                a,
                n,
                dn,
                m: inf,
                dm: inf,
                d2m: inf,
                m_terms: f64::INFINITY,
                m_infinite: true,
            };
        }
        let c = coth_unchecked(z);
        let c_z = 1.0 - c * c;
        let c_zz = -2.0 * c * c_z;
        let z_s = kh * a_s;
        let z_ss = kh * a_ss;
        let m = a + m_ratio * ap * c;
        let dm = a_s + m_ratio * (ap_s * c + ap * c_z * z_s);
        let d2m = a_ss
            + m_ratio * (ap_ss * c + 2.0 * ap_s * c_z * z_s + ap * (c_zz * z_s * z_s + c_z * z_ss));
        let m_terms = a.norm() + m_ratio * (ap * c).norm();
        Self {
            a,
            n,
            dn,
            m,
            dm,
            d2m,
            m_terms,
            m_infinite: false,
        }
    }

    /// True at a branch point shared by `N` and `M`, where `F` tends to 0.
    pub fn vanishing(&self) -> bool {
        let zero = Complex64::new(0.0, 0.0);
        self.m == zero && self.n == zero
    }

    /// `F` and `dF/dS`.
    pub fn transfer(&self) -> (Complex64, Complex64) {
        if self.m_infinite || self.vanishing() {
            return (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        }
        let f = self.n / self.m;
        let df = (self.dn * self.m - self.n * self.dm) / (self.m * self.m);
        (f, df)
    }
}

fn check_nd(s: ComplexS, nd: &NondimSet) -> Result<()> {
    ensure_finite(s, "S")?;
    nd.validate()
}

fn finite_or_pole(v: Complex64, s: ComplexS) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Pole { at: s })
    }
}

/// Elastodynamic transfer function `F(K, S)` of the layer on a half-space.
/// With `H = ∞` this is the two-half-space form `2m·â·â′ / (â + m·â′)`.
pub fn eval_f(s: ComplexS, nd: &NondimSet) -> Result<Complex64> {
    eval_f_on(s, nd, CutSide::Right)
}

/// [`eval_f`] with an explicit cut side for points on the imaginary axis.
pub fn eval_f_on(s: ComplexS, nd: &NondimSet, side: CutSide) -> Result<Complex64> {
    check_nd(s, nd)?;
    let terms = AntiplaneTerms::at(s, nd, nd.is_halfspace(), side);
    if terms.m_infinite || terms.vanishing() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if terms.m == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { at: s });
    }
    finite_or_pole(terms.n / terms.m, s)
}

/// Two-half-space transfer function; ignores `H`.
pub fn eval_f_halfspaces(s: ComplexS, nd: &NondimSet) -> Result<Complex64> {
    check_nd(s, nd)?;
    let terms = AntiplaneTerms::at(s, nd, true, CutSide::Right);
    if terms.vanishing() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if terms.m == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole { at: s });
    }
    finite_or_pole(terms.n / terms.m, s)
}

/// Love function `M(K, S)`, divided by `μ`. Errors where `coth(KH·â)` is
/// singular, which is where `M` has a pole and `F` a zero.
pub fn eval_m(s: ComplexS, nd: &NondimSet) -> Result<Complex64> {
    check_nd(s, nd)?;
    let terms = AntiplaneTerms::at(s, nd, nd.is_halfspace(), CutSide::Right);
    if terms.m_infinite {
        return Err(Error::Pole { at: s });
    }
    finite_or_pole(terms.m, s)
}

/// `dM/dS` in closed form.
pub fn eval_m_derivative(s: ComplexS, nd: &NondimSet) -> Result<Complex64> {
    check_nd(s, nd)?;
    let terms = AntiplaneTerms::at(s, nd, nd.is_halfspace(), CutSide::Right);
    if terms.m_infinite {
        return Err(Error::Pole { at: s });
    }
    finite_or_pole(terms.dm, s)
}

/// Quasi-static transfer factor `2m / (1 + m·coth(KH))`, independent of `S`.
pub fn eval_f_quasistatic(nd: &NondimSet) -> Result<f64> {
    nd.validate()?;
    let m = nd.m;
    let kh = nd.kh();
    if !kh.is_finite() {
        return Ok(2.0 * m / (1.0 + m));
    }
    // 2m / (1 + m coth x) = 2m tanh x / (tanh x + m), finite as x -> 0.
    let t = kh.tanh();
    Ok(2.0 * m * t / (t + m))
}
