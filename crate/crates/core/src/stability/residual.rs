//! Characteristic residual and the evaluation machinery shared by the
//! counting contour and the Newton search.

use num_complex::Complex64;

use crate::complexcore::{coth_unchecked, radical, radical_about_unit, radical_scaled, CutSide};
use crate::dispersion::{find_love_modes, LoveMode};
use crate::error::{ensure_finite, Error, Result};
use crate::inplane::InplaneModel;
use crate::transfer::{eval_f_quasistatic, AntiplaneTerms, NondimSet, TransferModel};

/// Characteristic residual `(1 + SK/ε)·F + (S/ε)(SK/ε − β)` (anti-plane and
/// quasi-static), or its in-plane counterpart with `Y₁₁`, `Y₂₁`.
pub fn characteristic_residual(
    s: Complex64,
    nd: &NondimSet,
    model: &TransferModel,
) -> Result<Complex64> {
    ensure_finite(s, "S")?;
    let problem = Problem::build(*nd, model.clone(), false)?;
    problem.value(s, CutSide::Right).map(|e| e.value)
}

/// Love-pole data frozen at the pole, for the pole-cleared residual.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LoveAnchor {
    pub a: Complex64,
    pub ap: Complex64,
    /// `coth(KH·â)` at the pole.
    pub coth: Complex64,
    pub dm: Complex64,
    pub d2m: Complex64,
}

/// Residues of `Y₁₁` and `Y₂₁` at a Stoneley pole.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StoneleyAnchor {
    pub r11: Complex64,
    pub r21: Complex64,
}

/// A simple pole of the residual on the imaginary axis.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AxisPole {
    pub im: f64,
    pub love: Option<LoveAnchor>,
    pub stoneley: Option<StoneleyAnchor>,
}

impl AxisPole {
    pub fn anchorable(&self) -> bool {
        self.love.is_some() || self.stoneley.is_some()
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Factored {
    pub num: Complex64,
    pub dnum: Complex64,
    pub den: Complex64,
    pub dden: Complex64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Eval {
    pub value: Complex64,
    /// Sum of magnitudes of the individual terms.
    pub scale: f64,
}

impl Eval {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.norm() / self.scale
        } else {
            self.value.norm()
        }
    }
}

/// A characteristic equation ready for evaluation.
#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub nd: NondimSet,
    pub model: TransferModel,
    /// Poles on the imaginary axis, ascending in `Im S`.
    pub poles: Vec<AxisPole>,
    /// Cuts occupy `|Im S| ≥ cut_from` on the imaginary axis.
    pub cut_from: Option<f64>,
    pub modes: Vec<LoveMode>,
    f_qs: f64,
}

impl Problem {
    pub fn new(nd: NondimSet, model: TransferModel) -> Result<Self> {
        Self::build(nd, model, true)
    }

    /// `love_poles = false` skips the mode search; such a problem can only be
    /// evaluated, not searched.
    fn build(nd: NondimSet, model: TransferModel, love_poles: bool) -> Result<Self> {
        nd.validate()?;
        let mut modes = Vec::new();
        let mut poles = Vec::new();
        let mut f_qs = 0.0;
        let cut_from = match &model {
            TransferModel::LayerOnHalfspaceAntiplane if !nd.is_halfspace() => {
                if love_poles {
                    modes = find_love_modes(&nd)?;
                }
                for mode in &modes {
                    for sign in [-1.0, 1.0] {
                        let s = Complex64::new(0.0, sign * mode.c);
                        let t = AntiplaneTerms::at(s, &nd, false, CutSide::Right);
                        let ap = radical_scaled(s, nd.r, CutSide::Right);
                        let coth = coth_unchecked(nd.kh() * t.a);
                        let love = LoveAnchor {
                            a: t.a,
                            ap,
                            coth,
                            dm: t.dm,
                            d2m: t.d2m,
                        };
                        poles.push(AxisPole {
                            im: sign * mode.c,
                            love: Some(love),
                            stoneley: None,
                        });
                    }
                }
                Some(nd.r)
            }
            TransferModel::LayerOnHalfspaceAntiplane | TransferModel::HalfspacesAntiplane => {
                Some(nd.r.min(1.0))
            }
            TransferModel::QuasistaticLayer => {
                f_qs = eval_f_quasistatic(&nd)?;
                None
            }
            TransferModel::UserSupplied(m) => {
                if let Some(p) = m.spec.pole {
                    if m.spec.cut_from.is_some_and(|b| p.c_st >= b) {
                        return Err(Error::InvalidArgument(
                            "Stoneley pole must lie below the branch cuts".into(),
                        ));
                    }
                    for sign in [-1.0, 1.0] {
                        let stoneley = StoneleyAnchor {
                            r11: Complex64::new(0.0, sign * p.a),
                            r21: Complex64::new(p.b, 0.0),
                        };
                        poles.push(AxisPole {
                            im: sign * p.c_st,
                            love: None,
                            stoneley: Some(stoneley),
                        });
                    }
                }
                m.spec.cut_from
            }
        };
        poles.sort_by(|a, b| a.im.total_cmp(&b.im));
        Ok(Self {
            nd,
            model,
            poles,
            cut_from,
            modes,
            f_qs,
        })
    }

    fn halfspace(&self) -> bool {
        matches!(self.model, TransferModel::HalfspacesAntiplane) || self.nd.is_halfspace()
    }

    /// Magnitudes of the pieces of `1 + SK/ε` and of `(S/ε)(SK/ε − β)`.
    fn friction_sizes(&self, s: Complex64) -> (f64, f64) {
        let nd = &self.nd;
        let x = s.norm() / nd.eps;
        (1.0 + x * nd.k, x * (x * nd.k + nd.beta.abs()))
    }

    fn friction_terms(&self, s: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
        let nd = &self.nd;
        let g = 1.0 + s * nd.k / nd.eps;
        let p = (s / nd.eps) * (s * nd.k / nd.eps - nd.beta);
        let dp = (2.0 * s * nd.k / nd.eps - nd.beta) / nd.eps;
        (g, Complex64::new(nd.k / nd.eps, 0.0), p, dp)
    }

    pub fn value(&self, s: Complex64, side: CutSide) -> Result<Eval> {
        self.value_and_derivative_on(s, side).map(|(e, _)| e)
    }

    pub fn value_and_derivative_on(
        &self,
        s: Complex64,
        side: CutSide,
    ) -> Result<(Eval, Complex64)> {
        let (g, dg, p, dp) = self.friction_terms(s);
        let (gs, ps) = self.friction_sizes(s);
        let (value, scale, deriv) = match &self.model {
            TransferModel::QuasistaticLayer => {
                let f = self.f_qs;
                (g * f + p, gs * f.abs() + ps, dg * f + dp)
            }
            TransferModel::UserSupplied(m) => return self.inplane(m, s, g, dg, p, dp),
            _ => {
                let t = AntiplaneTerms::at(s, &self.nd, self.halfspace(), side);
                if !t.m_infinite && !t.vanishing() && t.m == Complex64::new(0.0, 0.0) {
                    return Err(Error::Pole { at: s });
                }
                let (f, df) = t.transfer();
                (g * f + p, gs * f.norm() + ps, dg * f + g * df + dp)
            }
        };
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Pole { at: s });
        }
        Ok((Eval { value, scale }, deriv))
    }

    fn inplane(
        &self,
        m: &InplaneModel,
        s: Complex64,
        g: Complex64,
        dg: Complex64,
        p: Complex64,
        dp: Complex64,
    ) -> Result<(Eval, Complex64)> {
        let nd = &self.nd;
        let spec = &m.spec;
        let q = m.f + (m.f - m.alpha) * s * nd.k / nd.eps;
        let dq = (m.f - m.alpha) * nd.k / nd.eps;
        let y11 = spec.eval_y11(s)?;
        let y21 = spec.eval_y21(s)?;
        let mut h = 1e-6 * s.norm().max(1.0);
        if let Some(d) = self
            .poles
            .iter()
            .map(|pl| (s - Complex64::new(0.0, pl.im)).norm())
            .reduce(f64::min)
        {
            h = h.min(1e-3 * d);
        }
        let d11 = (spec.eval_y11(s + h)? - spec.eval_y11(s - h)?) / (2.0 * h);
        let d21 = (spec.eval_y21(s + h)? - spec.eval_y21(s - h)?) / (2.0 * h);
        let value = g * y11 + q * y21 + p;
        let (gs, ps) = self.friction_sizes(s);
        let qs = m.f.abs() + (m.f - m.alpha).abs() * s.norm() * nd.k / nd.eps;
        let scale = gs * y11.norm() + qs * y21.norm() + ps;
        let deriv = dg * y11 + g * d11 + dq * y21 + q * d21 + dp;
        Ok((Eval { value, scale }, deriv))
    }

    /// `R = num/den` with both factors free of poles off the imaginary axis,
    /// so the argument of each can be tracked on its own. For the layer,
    /// `den = M·σ` with `σ`, `κ` the scaled `sinh`, `cosh` of `KH·â`.
    pub fn factored_on(&self, s: Complex64, side: CutSide) -> Result<Factored> {
        self.factored_with(s, side, None)
    }

    /// `a` overrides the layer radical at `s`.
    fn factored_with(&self, s: Complex64, side: CutSide, a: Option<Complex64>) -> Result<Factored> {
        let nd = &self.nd;
        let (g, dg, p, dp) = self.friction_terms(s);
        let (den, dden, gn_den, dgn_den) = match &self.model {
            TransferModel::LayerOnHalfspaceAntiplane | TransferModel::HalfspacesAntiplane => {
                let a = a.unwrap_or_else(|| radical(s, side));
                let ap = radical_scaled(s, nd.r, side);
                let a_s = s / a;
                let ap_s = s / (nd.r * nd.r * ap);
                // With r = 1 both radicals coincide and the common factor â,
                // which vanishes at ±i, is removed from num and den.
                let zero = Complex64::new(0.0, 0.0);
                let (u, u_s, v, v_s) = if nd.r == 1.0 {
                    (
                        Complex64::new(1.0, 0.0),
                        zero,
                        Complex64::new(1.0, 0.0),
                        zero,
                    )
                } else {
                    (a, a_s, ap, ap_s)
                };
                let n = 2.0 * nd.m * a * v;
                let dn = 2.0 * nd.m * (a_s * v + a * v_s);
                if self.halfspace() {
                    (u + nd.m * v, u_s + nd.m * v_s, g * n, dg * n + g * dn)
                } else {
                    let z = nd.kh() * a;
                    let sign = if z.re >= 0.0 { 1.0 } else { -1.0 };
                    let e = (-2.0 * sign * z).exp();
                    let w_s = sign * nd.kh() * a_s;
                    let (sig, kap) = ((1.0 - e) * 0.5, (1.0 + e) * 0.5);
                    let (sig_s, kap_s) = (e * w_s, -e * w_s);
                    let den = u * sig + sign * nd.m * v * kap;
                    let dden = u_s * sig + u * sig_s + sign * nd.m * (v_s * kap + v * kap_s);
                    (
                        den,
                        dden,
                        g * n * sig,
                        dg * n * sig + g * dn * sig + g * n * sig_s,
                    )
                }
            }
            _ => {
                let (e, d) = self.value_and_derivative_on(s, side)?;
                let one = Complex64::new(1.0, 0.0);
                return Ok(Factored {
                    num: e.value,
                    dnum: d,
                    den: one,
                    dden: Complex64::new(0.0, 0.0),
                });
            }
        };
        let num = gn_den + p * den;
        let dnum = dgn_den + dp * den + p * dden;
        Ok(Factored {
            num,
            dnum,
            den,
            dden,
        })
    }

    /// Residual and factored form at `S = i·center + δ`, `center = ±1`, with
    /// the layer radical formed from the exact `δ`. The other terms are smooth
    /// there and use the rounded `S`. Only for the finite anti-plane layer.
    pub fn about_unit(
        &self,
        center: f64,
        delta: Complex64,
        side: CutSide,
    ) -> Result<(Eval, Factored)> {
        debug_assert!(
            matches!(self.model, TransferModel::LayerOnHalfspaceAntiplane) && !self.halfspace()
        );
        let nd = &self.nd;
        let s = Complex64::new(delta.re, center + delta.im);
        let a = radical_about_unit(center, delta, side);
        let ap = radical_scaled(s, nd.r, side);
        let t = AntiplaneTerms::with_radicals(s, a, ap, nd, false);
        if !t.m_infinite && !t.vanishing() && t.m == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole { at: s });
        }
        let (g, _, p, _) = self.friction_terms(s);
        let (gs, ps) = self.friction_sizes(s);
        let (f, _) = t.transfer();
        let value = g * f + p;
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Pole { at: s });
        }
        let fac = self.factored_with(s, side, Some(a))?;
        Ok((
            Eval {
                value,
                scale: gs * f.norm() + ps,
            },
            fac,
        ))
    }

    /// Residual with the pole cleared, as a function of the offset `δ` from an
    /// axis pole. Returns the value, its `δ`-derivative and the term scale.
    pub fn anchored(&self, pole: &AxisPole, delta: Complex64) -> Result<(Eval, Complex64)> {
        if let (Some(st), TransferModel::UserSupplied(m)) = (&pole.stoneley, &self.model) {
            return self.anchored_stoneley(m, pole.im, st, delta);
        }
        let love = pole
            .love
            .as_ref()
            .expect("anchored evaluation needs an anchored pole");
        let nd = &self.nd;
        // pole.im + delta.im == im + lost, exactly
        let im = pole.im + delta.im;
        let back = im - pole.im;
        let lost = (pole.im - (im - back)) + (delta.im - back);
        let s = Complex64::new(delta.re, im);
        let mut a = radical(s, CutSide::Right);
        if (a * love.a.conj()).re < 0.0 {
            a = -a;
        }
        let ap = radical_scaled(s, nd.r, CutSide::Right);
        let t = AntiplaneTerms::with_radicals(s, a, ap, nd, false);
        let taylor = (love.d2m * delta).norm() < 1e-6 * love.dm.norm();
        let (mloc, dmloc, msize) = if taylor {
            let m1 = love.dm * delta;
            let m2 = 0.5 * love.d2m * delta * delta;
            (m1 + m2, love.dm + love.d2m * delta, m1.norm() + m2.norm())
        } else {
            if t.m_infinite {
                return Err(Error::Pole { at: s });
            }
            (
                self.love_m_offset(love, pole.im, delta, a, ap),
                t.dm,
                t.m_terms,
            )
        };
        let (g, dg, p, dp) = self.friction_terms(s);
        let (gs, ps) = self.friction_sizes(s);
        let rounded_part = dg * t.n + g * t.dn + dp * mloc;
        let deriv = rounded_part + p * dmloc;
        // Terms evaluated at the rounded S get a first-order correction.
        let shift = Complex64::new(0.0, lost);
        let correction = rounded_part * shift;
        let value = g * t.n + p * mloc + correction;
        if !(value.re.is_finite()
            && value.im.is_finite()
            && deriv.re.is_finite()
            && deriv.im.is_finite())
        {
            return Err(Error::Pole { at: s });
        }
        Ok((
            Eval {
                value,
                scale: gs * t.n.norm() + ps * msize,
            },
            deriv,
        ))
    }

    /// `M(S₀ + δ) − M(S₀)` with every increment proportional to the exact `δ`.
    /// Direct evaluation at the rounded `S` loses about `KH·|coth′|` ulps
    /// next to high-order poles. `a` and `ap` are the radicals at the rounded
    /// `S`, only used in denominators.
    fn love_m_offset(
        &self,
        love: &LoveAnchor,
        pole_im: f64,
        delta: Complex64,
        a: Complex64,
        ap: Complex64,
    ) -> Complex64 {
        let nd = &self.nd;
        let s0 = Complex64::new(0.0, pole_im);
        let w = delta * (2.0 * s0 + delta);
        let da = w / (a + love.a);
        let dap = w / (nd.r * nd.r * (ap + love.ap));
        let t = (nd.kh() * da).tanh();
        let c0 = love.coth;
        let den = 1.0 + c0 * t;
        let c = (c0 + t) / den;
        da + nd.m * (love.ap * t * (1.0 - c0 * c0) / den + dap * c)
    }

    /// `δ` times the in-plane residual, with `δ·Y` written as the residue plus
    /// `δ` times the regular part.
    fn anchored_stoneley(
        &self,
        m: &InplaneModel,
        pole_im: f64,
        st: &StoneleyAnchor,
        delta: Complex64,
    ) -> Result<(Eval, Complex64)> {
        let nd = &self.nd;
        let s = Complex64::new(delta.re, pole_im + delta.im);
        // Offset of the rounded S; exact for the small offsets that matter.
        let dr = Complex64::new(delta.re, s.im - pole_im);
        if dr == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole { at: s });
        }
        let reg11 = m.spec.eval_y11(s)? - st.r11 / dr;
        let reg21 = m.spec.eval_y21(s)? - st.r21 / dr;
        let (g, dg, p, dp) = self.friction_terms(s);
        let q = m.f + (m.f - m.alpha) * s * nd.k / nd.eps;
        let dq = (m.f - m.alpha) * nd.k / nd.eps;
        let u = st.r11 + delta * reg11;
        let v = st.r21 + delta * reg21;
        let value = g * u + q * v + delta * p;
        // δ times the derivative of the regular parts is dropped.
        let deriv = dg * u + g * reg11 + dq * v + q * reg21 + p + delta * dp;
        let (gs, ps) = self.friction_sizes(s);
        let qs = m.f.abs() + (m.f - m.alpha).abs() * s.norm() * nd.k / nd.eps;
        let dn = delta.norm();
        let scale = gs * (st.r11.norm() + dn * reg11.norm())
            + qs * (st.r21.norm() + dn * reg21.norm())
            + dn * ps;
        if !(value.re.is_finite()
            && value.im.is_finite()
            && deriv.re.is_finite()
            && deriv.im.is_finite())
        {
            return Err(Error::Pole { at: s });
        }
        Ok((Eval { value, scale }, deriv))
    }

    /// Linearized offset of the residual zero next to an axis pole.
    pub fn anchored_seed(&self, pole: &AxisPole) -> Option<Complex64> {
        let s = Complex64::new(0.0, pole.im);
        let (g, _, p, _) = self.friction_terms(s);
        if let (Some(st), TransferModel::UserSupplied(m)) = (&pole.stoneley, &self.model) {
            let q = m.f + (m.f - m.alpha) * s * self.nd.k / self.nd.eps;
            let d = -(g * st.r11 + q * st.r21) / p;
            return (d.re.is_finite() && d.im.is_finite()).then_some(d);
        }
        let love = pole.love.as_ref()?;
        let n = 2.0 * self.nd.m * love.a * radical_scaled(s, self.nd.r, CutSide::Right);
        let d = -(g * n) / (p * love.dm);
        (d.re.is_finite() && d.im.is_finite()).then_some(d)
    }

    /// Total change of `Im(KH·â)` along the segment from `a` to `b`, counted
    /// where `coth(KH·â)` has not saturated. Zero without a finite layer.
    pub fn coth_phase(&self, a: Complex64, b: Complex64, side: CutSide) -> f64 {
        if !matches!(self.model, TransferModel::LayerOnHalfspaceAntiplane) || self.nd.is_halfspace()
        {
            return 0.0;
        }
        const N: usize = 64;
        let kh = self.nd.k * self.nd.h;
        let at = |t: f64| kh * radical(a + (b - a) * t, side);
        let mut prev = at(0.0);
        let mut total = 0.0;
        for i in 1..=N {
            let z = at(i as f64 / N as f64);
            if prev.re.abs().min(z.re.abs()) < 40.0 {
                // coth(KH·â) is even in the sign of â
                total += (z.im - prev.im).abs().min((z.im + prev.im).abs());
            }
            prev = z;
        }
        total
    }

    /// Singular ordinates on the imaginary axis: poles and cut endpoints.
    pub fn axis_singularities(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.poles.iter().map(|p| p.im).collect();
        if let Some(b) = self.cut_from {
            v.push(-b);
            v.push(b);
        }
        v.sort_by(f64::total_cmp);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn layer(k: f64, eps: f64) -> NondimSet {
        NondimSet::new(k, 1.0, eps, 1.0, 1.5, 2.0).unwrap()
    }

    #[test]
    fn identical_halfspaces_small_residual_at_slow_root() {
        let nd = NondimSet::new(1e-4, f64::INFINITY, 1e-2, 1.0, 1.0, 1.0).unwrap();
        let r = characteristic_residual(
            Complex64::new(1e-2, 0.0),
            &nd,
            &TransferModel::HalfspacesAntiplane,
        )
        .unwrap();
        // (1 + 1e-4) * sqrt(1 + 1e-4) + 1 * (1e-4 - 1) is about 1.5e-4.
        assert!(r.norm() < 10.0 * nd.k, "{r}");
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let models = [
            (layer(3.0, 1e-2), TransferModel::LayerOnHalfspaceAntiplane),
            (layer(3.0, 1e-2), TransferModel::HalfspacesAntiplane),
            (layer(3.0, 1e-2), TransferModel::QuasistaticLayer),
        ];
        for (nd, model) in models {
            let pr = Problem::new(nd, model).unwrap();
            let s = Complex64::new(0.17, 0.61);
            let (_, d) = pr.value_and_derivative_on(s, CutSide::Right).unwrap();
            let h = 1e-6;
            let fd = (pr.value(s + h, CutSide::Right).unwrap().value
                - pr.value(s - h, CutSide::Right).unwrap().value)
                / (2.0 * h);
            assert!((fd - d).norm() < 1e-6 * d.norm(), "{fd} vs {d}");
        }
    }

    #[test]
    fn pole_cleared_residual_matches_direct_product() {
        let nd = layer(5.0, 1e-2);
        let pr = Problem::new(nd, TransferModel::LayerOnHalfspaceAntiplane).unwrap();
        for pole in &pr.poles {
            for delta in [Complex64::new(-1e-3, 2e-4), Complex64::new(2e-2, -1e-2)] {
                let s = Complex64::new(delta.re, pole.im + delta.im);
                let direct = AntiplaneTerms::at(s, &nd, false, CutSide::Right);
                let r = pr.value(s, CutSide::Right).unwrap().value;
                let (h, _) = pr.anchored(pole, delta).unwrap();
                // H = R * M with M continued from the anchor; compare up to the sign of M.
                let expected = r * direct.m;
                let ok = (h.value - expected).norm() < 1e-6 * expected.norm()
                    || (h.value + expected).norm() < 1e-6 * expected.norm();
                assert!(ok, "{} vs {}", h.value, expected);
            }
        }
    }

    #[test]
    fn stoneley_cleared_residual_matches_offset_times_residual() {
        use crate::inplane::{rational_fixture, InplaneModel};
        use std::sync::Arc;
        let spec = rational_fixture(0.9, 1.0, 0.3).unwrap();
        let model =
            TransferModel::UserSupplied(Arc::new(InplaneModel::new(spec, 0.6, 0.4).unwrap()));
        let pr = Problem::new(layer(2.0, 1e-2), model).unwrap();
        assert_eq!(pr.poles.len(), 2);
        for pole in &pr.poles {
            for delta in [Complex64::new(-1e-3, 2e-4), Complex64::new(2e-2, -1e-2)] {
                let s = Complex64::new(delta.re, pole.im + delta.im);
                let r = pr.value(s, CutSide::Right).unwrap().value;
                let (h, d) = pr.anchored(pole, delta).unwrap();
                let expected = r * delta;
                assert!(
                    (h.value - expected).norm() < 1e-9 * h.scale,
                    "{} vs {}",
                    h.value,
                    expected
                );
                let e = 1e-7 * delta.norm();
                let fd = (pr.anchored(pole, delta + e).unwrap().0.value
                    - pr.anchored(pole, delta - e).unwrap().0.value)
                    / (2.0 * e);
                // The derivative omits a term of order |δ|.
                assert!(
                    (fd - d).norm() < 1e-2 * delta.norm() * d.norm(),
                    "{fd} vs {d}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(re in 0.001f64..2.0, im in -3.0f64..3.0, sgn in prop::bool::ANY) {
            let re = if sgn { re } else { -re };
            let s = Complex64::new(re, im);
            for model in [TransferModel::LayerOnHalfspaceAntiplane, TransferModel::HalfspacesAntiplane, TransferModel::QuasistaticLayer] {
                let nd = layer(0.7, 3e-2);
                let a = characteristic_residual(s, &nd, &model).unwrap();
                let b = characteristic_residual(s.conj(), &nd, &model).unwrap();
                prop_assert!((b - a.conj()).norm() <= 1e-12 * a.norm().max(1.0));
            }
        }
    }
}
