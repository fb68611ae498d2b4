use crate::error::{ensure_positive, Error, Result};
use crate::transfer::{ElasticPair, NondimSet};

/// Linearized Dieterich–Ruina friction about steady sliding at `v_o`.
///
/// The state variable is eliminated by the linearization and is not stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateStateFriction {
    pub a: f64,
    pub b: f64,
    /// State evolution length, m.
    pub l: f64,
    /// Normal stress, Pa.
    pub sigma_o: f64,
    /// Steady slip rate, m/s.
    pub v_o: f64,
    /// Friction coefficient at `v_o`.
    pub f: f64,
    /// Normal-stress memory coefficient (in-plane only).
    pub alpha_ns: f64,
}

impl RateStateFriction {
    pub fn new(a: f64, b: f64, l: f64, sigma_o: f64, v_o: f64) -> Result<Self> {
        ensure_positive(a, "a")?;
        ensure_positive(l, "L")?;
        ensure_positive(sigma_o, "sigma_o")?;
        ensure_positive(v_o, "V_o")?;
        if !b.is_finite() || b < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "b must be finite and non-negative, got {b}"
            )));
        }
        Ok(Self {
            a,
            b,
            l,
            sigma_o,
            v_o,
            f: 0.6,
            alpha_ns: 0.0,
        })
    }

    pub fn with_normal_stress_coupling(mut self, f: f64, alpha_ns: f64) -> Self {
        self.f = f;
        self.alpha_ns = alpha_ns;
        self
    }

    /// `(b − a)/a`.
    pub fn beta(&self) -> f64 {
        (self.b - self.a) / self.a
    }

    /// Steady shear stress `f·σ_o`.
    pub fn tau_o(&self) -> f64 {
        self.f * self.sigma_o
    }
}

/// Map a dimensional problem at wavenumber `k` onto its nondimensional groups.
pub fn nondimensionalize(ep: &ElasticPair, fr: &RateStateFriction, k: f64) -> Result<NondimSet> {
    ElasticPair::new(ep.mu_layer, ep.rho_layer, ep.mu_sub, ep.rho_sub, ep.h)?;
    RateStateFriction::new(fr.a, fr.b, fr.l, fr.sigma_o, fr.v_o)?;
    if !(k.is_finite() && k != 0.0) {
        return Err(Error::InvalidArgument(format!(
            "wavenumber must be finite and nonzero, got {k}"
        )));
    }
    let mu = ep.mu_layer;
    let a_sigma = fr.a * fr.sigma_o;
    let nd = NondimSet {
        k: mu * k.abs() * fr.l / (2.0 * a_sigma),
        h: 2.0 * a_sigma * ep.h / (mu * fr.l),
        eps: mu * fr.v_o / (2.0 * a_sigma * ep.cs_layer()),
        beta: fr.beta(),
        m: ep.mu_sub / mu,
        r: ep.cs_sub() / ep.cs_layer(),
    };
    nd.validate()?;
    Ok(nd)
}

/// Converts nondimensional `S` to dimensional `p = S·|k|·c_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    pub k_abs: f64,
    pub c_s: f64,
}

impl Scales {
    pub fn new(ep: &ElasticPair, k: f64) -> Self {
        Self {
            k_abs: k.abs(),
            c_s: ep.cs_layer(),
        }
    }
}
