//! Analytic ring-cavity model.
//!
//! Rotation shifts the counter-propagating resonances by equal and opposite
//! amounts. An intra-cavity dispersive medium rescales each per-direction
//! shift through the self-consistent resonance condition
//!
//! ```text
//! (n_g/n0)·Δω_dis + (n3·ω0/n0)·Δω_dis³ = Δω_ec
//! ```
//!
//! which is linear (`Δω_dis = Δω_ec/n_g`) away from the critically anomalous
//! point and purely cubic at it. The same algebra gives the dispersive
//! linewidth of the white-light cavity.
//!
//! Sign convention: `Ω > 0` is clockwise; the `+` (CW) resonance moves down
//! and the `−` (CCW) resonance moves up, so `splitting = Δω⁻ − Δω⁺ > 0`.

use crate::constants::C0;
use crate::cubic::real_roots;
use crate::dispersion::{DispersionProfile, TaylorCubic};
use crate::error::{ensure, Error, Result};
use crate::sagnac::LoopGeometry;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingCavity {
    pub geometry: LoopGeometry,
    pub finesse: f64,
    /// Background phase index.
    pub n0: f64,
    /// Unperturbed resonance, rad/s.
    pub omega0: f64,
    /// Dispersive medium length over cavity length, `ℓ/L`.
    pub fill_fraction: f64,
}

impl RingCavity {
    pub fn new(
        geometry: LoopGeometry,
        finesse: f64,
        n0: f64,
        omega0: f64,
        fill_fraction: f64,
    ) -> Result<Self> {
        ensure(finesse > 1.0, "finesse", finesse, "must exceed 1")?;
        ensure(n0 > 0.0, "n0", n0, "must be positive")?;
        ensure(omega0 > 0.0, "omega0", omega0, "must be positive")?;
        ensure(
            fill_fraction > 0.0 && fill_fraction <= 1.0,
            "fill_fraction",
            fill_fraction,
            "must lie in (0, 1]",
        )?;
        Ok(Self {
            geometry,
            finesse,
            n0,
            omega0,
            fill_fraction,
        })
    }

    /// Round-trip length `L`, equal to the loop perimeter.
    pub fn length(&self) -> f64 {
        self.geometry.perimeter()
    }

    /// Length of the dispersive medium, `ℓ`.
    pub fn medium_length(&self) -> f64 {
        self.fill_fraction * self.length()
    }

    /// `2π·c0/(n0·L)`, rad/s.
    pub fn free_spectral_range(&self) -> f64 {
        2.0 * PI * C0 / (self.n0 * self.length())
    }

    /// Empty-cavity FWHM `γ_ec = FSR/𝔽`, rad/s.
    pub fn empty_linewidth(&self) -> f64 {
        self.free_spectral_range() / self.finesse
    }

    /// `τ_c = 1/γ_ec`.
    pub fn photon_lifetime(&self) -> f64 {
        1.0 / self.empty_linewidth()
    }

    /// Cavity-averaged cubic model of `profile` about `omega0`.
    ///
    /// The medium occupies `ℓ` of the loop and vacuum the rest, so the
    /// dispersion coefficients are weighted by the fill fraction. A medium
    /// tuned to `n_g = 1 − L/ℓ` then gives an effective group index of zero.
    pub fn effective_model(&self, profile: &DispersionProfile) -> Result<TaylorCubic> {
        let t = profile.cubic_model_at(self.omega0)?;
        let f = self.fill_fraction;
        Ok(TaylorCubic {
            n0: f * t.n0 + (1.0 - f),
            n1: f * t.n1,
            n3: f * t.n3,
            omega_ref: self.omega0,
        })
    }

    /// `(ω0/(c0·n0))·(2A/P)`: per-direction resonance shift per unit rotation rate.
    pub fn shift_per_rotation(&self) -> f64 {
        let g = &self.geometry;
        self.omega0 / (C0 * self.n0) * 2.0 * g.area() / g.perimeter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftResult {
    /// CW resonance shift Δω⁺, rad/s.
    pub dw_plus: f64,
    /// CCW resonance shift Δω⁻, rad/s.
    pub dw_minus: f64,
    /// `Δω⁻ − Δω⁺`, rad/s.
    pub splitting: f64,
    /// Splitting over the dispersionless splitting. At zero rotation this is
    /// the small-signal limit `n0/n_g` (infinite at the critical point).
    pub enhancement: f64,
    /// Group index of the cavity medium at the shifted (CCW) resonance.
    pub local_ng: f64,
    /// Linewidth at the shifted resonance, rad/s.
    pub gamma_dis: f64,
    /// `n0/n(ω0 + Δω⁺)` applied to the CW shift.
    pub index_correction_plus: f64,
    /// `n0/n(ω0 + Δω⁻)` applied to the CCW shift.
    pub index_correction_minus: f64,
    /// The cubic had three real roots; the branch continuous from zero was used.
    pub multivalued: bool,
}

/// Splitting without dispersion.
pub fn splitting_no_dispersion(cavity: &RingCavity, omega_rot: f64) -> ShiftResult {
    let half = cavity.shift_per_rotation() * omega_rot;
    ShiftResult {
        dw_plus: -half,
        dw_minus: half,
        splitting: half - (-half),
        enhancement: 1.0,
        local_ng: cavity.n0,
        gamma_dis: cavity.empty_linewidth(),
        index_correction_plus: 1.0,
        index_correction_minus: 1.0,
        multivalued: false,
    }
}

/// Effective length change equivalent to rotation, one direction:
/// `δL = −P·Ω·R/(n0·c0)` with `R = 2A/P`.
pub fn rotation_to_length(cavity: &RingCavity, omega_rot: f64) -> f64 {
    let g = &cavity.geometry;
    -g.perimeter() * omega_rot * g.effective_radius() / (cavity.n0 * C0)
}

pub fn length_to_rotation(cavity: &RingCavity, delta_l: f64) -> f64 {
    let g = &cavity.geometry;
    -delta_l * cavity.n0 * C0 / (g.perimeter() * g.effective_radius())
}

/// Empty-cavity resonance shift for a length change: `−ΔL·ω0/L`.
pub fn empty_shift_from_length(cavity: &RingCavity, delta_l: f64) -> f64 {
    -delta_l * cavity.omega0 / cavity.length()
}

pub fn length_from_empty_shift(cavity: &RingCavity, dw_ec: f64) -> f64 {
    -dw_ec * cavity.length() / cavity.omega0
}

/// Linear-dispersion shift `Δω_ec/n_g`.
pub fn shift_linear(dw_ec: f64, ng: f64) -> Result<f64> {
    if ng == 0.0 {
        return Err(Error::CadDivergence);
    }
    Ok(dw_ec / ng)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicShift {
    pub shift: f64,
    /// Three real roots existed; `shift` is the branch continuous from zero.
    pub multivalued: bool,
}

/// Solves `(n_g/n0)·x + (n3·ω0/n0)·x³ = Δω_ec` for the dispersive shift `x`.
pub fn shift_cubic(dw_ec: f64, taylor: &TaylorCubic) -> Result<CubicShift> {
    taylor.validate()?;
    let a = taylor.cubic_strength() / taylor.n0;
    let b = taylor.group_index() / taylor.n0;
    if dw_ec == 0.0 {
        return Ok(CubicShift {
            shift: 0.0,
            multivalued: false,
        });
    }
    if a == 0.0 {
        return Ok(CubicShift {
            shift: shift_linear(dw_ec, b)?,
            multivalued: false,
        });
    }
    let roots = real_roots(a, b, dw_ec);
    match roots.as_slice() {
        [x] => Ok(CubicShift {
            shift: *x,
            multivalued: false,
        }),
        [_, mid, _] => Ok(CubicShift {
            shift: *mid,
            multivalued: true,
        }),
        _ => Err(Error::CadDivergence),
    }
}

/// Normalisation of the critical-point enhancement factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EtaConvention {
    /// `(Γ/Δω_ec)^{2/3}`, what the cubic resonance condition yields.
    #[default]
    Derived,
    /// `(2Γ/Δω_ec)^{2/3}`, normalised by the full linewidth `2Γ`; reproduces
    /// the published numerical estimates.
    FullWidth,
}

impl EtaConvention {
    pub fn label(&self) -> &'static str {
        match self {
            EtaConvention::Derived => "derived",
            EtaConvention::FullWidth => "paper",
        }
    }
}

/// Enhancement factor at the critical point for an empty-cavity shift `dw_ec`.
pub fn enhancement_eta(gamma: f64, dw_ec: f64, convention: EtaConvention) -> Result<f64> {
    ensure(gamma > 0.0, "gamma", gamma, "must be positive")?;
    ensure(dw_ec > 0.0, "dw_ec", dw_ec, "must be positive")?;
    let width = match convention {
        EtaConvention::Derived => gamma,
        EtaConvention::FullWidth => 2.0 * gamma,
    };
    Ok((width / dw_ec).powf(2.0 / 3.0))
}

/// `γ_ec/n_g`.
pub fn linewidth_linear(gamma_ec: f64, ng: f64) -> Result<f64> {
    if ng == 0.0 {
        return Err(Error::WhiteLightCondition);
    }
    Ok(gamma_ec / ng)
}

fn smallest_positive_root(a: f64, b: f64, c: f64) -> Result<f64> {
    real_roots(a, b, c)
        .as_slice()
        .iter()
        .copied()
        .filter(|&x| x > 0.0)
        .min_by(f64::total_cmp)
        .ok_or(Error::NoPositiveRoot)
}

/// Self-consistent dispersive linewidth `γ = γ_ec/[n_g + n3·ω0·γ²]`
/// (normalised by `n0`); at `n_g = 0` this is `(Γ²·γ_ec)^{1/3}`.
pub fn linewidth_cubic(gamma_ec: f64, taylor: &TaylorCubic) -> Result<f64> {
    ensure(gamma_ec > 0.0, "gamma_ec", gamma_ec, "must be positive")?;
    taylor.validate()?;
    let a = taylor.cubic_strength() / taylor.n0;
    let b = taylor.group_index() / taylor.n0;
    smallest_positive_root(a, b, gamma_ec)
}

/// Dispersive FWHM implied by the half-maximum condition `Ψ(ω0 ± γ/2) = ±π/𝔽`
/// applied to the cubic phase: `n_g·γ + n3·ω0·γ³/4 = γ_ec`. At `n_g = 0`
/// this is `2^{2/3}` times [`linewidth_cubic`], and it is what a numeric
/// transmission sweep measures.
pub fn linewidth_cubic_half_max(gamma_ec: f64, taylor: &TaylorCubic) -> Result<f64> {
    ensure(gamma_ec > 0.0, "gamma_ec", gamma_ec, "must be positive")?;
    taylor.validate()?;
    let a = taylor.cubic_strength() / taylor.n0 / 4.0;
    let b = taylor.group_index() / taylor.n0;
    smallest_positive_root(a, b, gamma_ec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedLinewidth {
    /// `γ_ec·n0/n_g(ω0 + Δω_dis)`.
    pub exact: f64,
    /// `(η/3)·γ_ec` with `η = Δω_dis/Δω_ec` from the cubic condition.
    pub eta_over_three: f64,
    pub local_ng: f64,
    pub eta: f64,
}

/// Linewidth at a resonance shifted by `dw_dis` away from the expansion point.
pub fn shifted_linewidth(
    gamma_ec: f64,
    taylor: &TaylorCubic,
    dw_dis: f64,
) -> Result<ShiftedLinewidth> {
    taylor.validate()?;
    let k3 = taylor.cubic_strength();
    let ng0 = taylor.group_index();
    let local_ng = ng0 + 3.0 * k3 * dw_dis * dw_dis;
    if local_ng == 0.0 {
        return Err(Error::StillAtWhiteLight);
    }
    let eta = taylor.n0 / (ng0 + k3 * dw_dis * dw_dis);
    Ok(ShiftedLinewidth {
        exact: gamma_ec * taylor.n0 / local_ng.abs(),
        eta_over_three: eta * gamma_ec / 3.0,
        local_ng,
        eta,
    })
}

/// Rotation response of a cavity loaded with `profile`.
pub fn rotation_response(
    cavity: &RingCavity,
    profile: &DispersionProfile,
    omega_rot: f64,
) -> Result<ShiftResult> {
    profile.validate()?;
    let bare = splitting_no_dispersion(cavity, omega_rot);
    let model = cavity.effective_model(profile)?;
    let minus = shift_cubic(bare.dw_minus, &model)?;
    let plus = shift_cubic(bare.dw_plus, &model)?;

    let f = cavity.fill_fraction;
    let correction = |dw: f64| -> Result<f64> {
        let off = profile.index_offset(cavity.omega0, dw)?;
        Ok(model.n0 / (model.n0 + f * off))
    };
    let index_correction_minus = correction(minus.shift)?;
    let index_correction_plus = correction(plus.shift)?;
    let dw_minus = minus.shift * index_correction_minus;
    let dw_plus = plus.shift * index_correction_plus;
    let splitting = dw_minus - dw_plus;

    let gamma_ec = cavity.empty_linewidth();
    let ng0 = model.group_index();
    let enhancement = if bare.splitting != 0.0 {
        splitting / bare.splitting
    } else if ng0 != 0.0 {
        model.n0 / ng0
    } else {
        f64::INFINITY
    };
    let local_ng = ng0 + 3.0 * model.cubic_strength() * minus.shift * minus.shift;
    let gamma_dis = if local_ng == 0.0 {
        linewidth_cubic(gamma_ec, &model)?
    } else {
        shifted_linewidth(gamma_ec, &model, minus.shift)?.exact
    };

    Ok(ShiftResult {
        dw_plus,
        dw_minus,
        splitting,
        enhancement,
        local_ng,
        gamma_dis,
        index_correction_plus,
        index_correction_minus,
        multivalued: minus.multivalued || plus.multivalued,
    })
}

/// Positive-feedback gain `G = −(ω0/n0)·∂n/∂ω = 1 − n_g/n0`.
pub fn feedback_gain(taylor: &TaylorCubic) -> f64 {
    1.0 - taylor.group_index() / taylor.n0
}

/// Steady state of `Δω = half_splitting + G·Δω`.
pub fn feedback_steady_state(half_splitting: f64, gain: f64) -> Result<f64> {
    if gain == 1.0 {
        return Err(Error::CadDivergence);
    }
    Ok(half_splitting / (1.0 - gain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::EARTH_ROTATION;
    use proptest::prelude::*;

    const W0: f64 = PI * 1e15;
    const GAMMA: f64 = 2.0 * PI * 1e6;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn table_top(finesse: f64) -> RingCavity {
        RingCavity::new(LoopGeometry::circle(1.0).unwrap(), finesse, 1.0, W0, 1.0).unwrap()
    }

    fn cad_taylor(gamma: f64) -> TaylorCubic {
        DispersionProfile::cad(gamma, W0, 0.0)
            .unwrap()
            .taylor_coefficients()
            .unwrap()
    }

    // independent bracketing oracle for the cubic
    fn bisection(a: f64, b: f64, c: f64) -> f64 {
        let f = |x: f64| a * x * x * x + b * x - c;
        let (mut lo, mut hi) = (0.0, 2.0 * c.abs().max((c.abs() / a).cbrt()) * c.signum());
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        for _ in 0..300 {
            let m = 0.5 * (lo + hi);
            if (f(m) > 0.0) == (f(hi) > 0.0) {
                hi = m;
            } else {
                lo = m;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn cavity_derived_quantities() {
        let c = table_top(1e3);
        assert!(rel(c.free_spectral_range(), C0) < 1e-14);
        assert!(rel(c.empty_linewidth(), 2.0 * PI * C0 / (2.0 * PI * 1e3)) < 1e-14);
        assert!(rel(c.photon_lifetime() * c.empty_linewidth(), 1.0) < 1e-15);
        assert!(RingCavity::new(c.geometry, 1.0, 1.0, W0, 1.0).is_err());
        assert!(RingCavity::new(c.geometry, 10.0, 1.0, W0, 0.0).is_err());
    }

    #[test]
    fn no_rotation_no_splitting() {
        let s = splitting_no_dispersion(&table_top(1e3), 0.0);
        assert_eq!((s.dw_plus, s.dw_minus, s.splitting), (0.0, 0.0, 0.0));
    }

    #[test]
    fn splitting_scale_for_table_top_gyro() {
        // 4A/P = 2 m, f0 = 5e14 Hz
        let s = splitting_no_dispersion(&table_top(1e3), 1.0);
        assert!(rel(s.splitting, 2.0 * PI * 5e14 / C0 * 2.0) < 1e-14);
        assert!(rel(s.splitting, 2.096e7) < 1e-3);
        assert_eq!(s.dw_minus, -s.dw_plus);
        assert_eq!(s.enhancement, 1.0);
    }

    #[test]
    fn earth_rate_length_equivalent() {
        let c = table_top(1e3);
        let dl = rotation_to_length(&c, EARTH_ROTATION);
        assert!(rel(dl.abs(), 2.0 * PI * EARTH_ROTATION / C0) < 1e-12);
        assert!(rel(dl.abs(), 1.528e-12) < 1e-3);
        assert_eq!(rotation_to_length(&c, 0.0), 0.0);
        assert!(rel(length_to_rotation(&c, dl), EARTH_ROTATION) < 1e-12);
        // the length picture reproduces the per-direction rotation shift
        let s = splitting_no_dispersion(&c, EARTH_ROTATION);
        assert!(rel(empty_shift_from_length(&c, dl), s.dw_minus) < 1e-12);
    }

    #[test]
    fn linear_shift_cases() {
        assert_eq!(shift_linear(3.0, 1.0).unwrap(), 3.0);
        let big = shift_linear(2.0 * PI * 1e3, 0.001).unwrap();
        assert!(rel(big, 2.0 * PI * 1e6) < 1e-12);
        assert!(rel(shift_linear(5.0, 100.0).unwrap(), 0.05) < 1e-15);
        assert_eq!(shift_linear(1.0, 0.0), Err(Error::CadDivergence));
    }

    #[test]
    fn cubic_shift_at_critical_point() {
        let t = cad_taylor(GAMMA);
        let dw_ec = 2.0 * PI;
        let s = shift_cubic(dw_ec, &t).unwrap();
        assert!(!s.multivalued);
        assert!(rel(s.shift, 2.0 * PI * 1e4) < 1e-9);
        let b = t.group_index();
        assert!(rel(s.shift, bisection(t.cubic_strength(), b, dw_ec)) < 1e-10);
        assert!(rel(s.shift / dw_ec, 1e4) < 1e-9);
    }

    #[test]
    fn cubic_shift_linear_limit_and_zero() {
        let t = TaylorCubic::new(1.0, -0.5 / W0, 0.0, W0).unwrap();
        let s = shift_cubic(7.0, &t).unwrap();
        assert_eq!(s.shift, shift_linear(7.0, t.group_index()).unwrap());
        assert_eq!(shift_cubic(0.0, &cad_taylor(GAMMA)).unwrap().shift, 0.0);
    }

    #[test]
    fn cubic_shift_flags_multivalued_branch() {
        // overdriven anomalous medium: n_g < 0 with n3 > 0
        let t = TaylorCubic::new(1.0, -1.5 / W0, 1e-12 / W0, W0).unwrap();
        let s = shift_cubic(1e-3, &t).unwrap();
        assert!(s.multivalued);
        // continuous-from-zero branch is the small root near Δω_ec/n_g
        assert!(rel(s.shift, 1e-3 / t.group_index()) < 1e-6);
        // past the fold only one root remains
        let far = shift_cubic(1e9, &t).unwrap();
        assert!(!far.multivalued);
    }

    #[test]
    fn eta_conventions() {
        let d = enhancement_eta(GAMMA, 2.0 * PI, EtaConvention::Derived).unwrap();
        assert!(rel(d, 1e4) < 1e-12);
        let p = enhancement_eta(GAMMA, 5.46e-3, EtaConvention::FullWidth).unwrap();
        assert!(rel(p, 1.75e6) < 0.01);
        for dw in [1e-3, 1.0, 1e5] {
            let r = enhancement_eta(GAMMA, dw, EtaConvention::FullWidth).unwrap()
                / enhancement_eta(GAMMA, dw, EtaConvention::Derived).unwrap();
            assert!(rel(r, 2f64.powf(2.0 / 3.0)) < 1e-14);
        }
        assert!(enhancement_eta(GAMMA, 0.0, EtaConvention::Derived).is_err());
    }

    #[test]
    fn linear_linewidths() {
        assert_eq!(linewidth_linear(5.0, 1.0).unwrap(), 5.0);
        assert!(rel(linewidth_linear(5.0, 0.001).unwrap(), 5000.0) < 1e-12);
        assert_eq!(linewidth_linear(5.0, 2.0).unwrap(), 2.5);
        assert_eq!(linewidth_linear(5.0, 0.0), Err(Error::WhiteLightCondition));
    }

    #[test]
    fn white_light_linewidth() {
        let t = cad_taylor(GAMMA);
        let g_ec = 2.0 * PI * 1e3;
        let g = linewidth_cubic(g_ec, &t).unwrap();
        assert!(rel(g, 2.0 * PI * 1e5) < 1e-9);
        assert!(rel(g, bisection(t.cubic_strength(), 0.0, g_ec)) < 1e-10);
        let h = linewidth_cubic_half_max(g_ec, &t).unwrap();
        assert!(rel(h / g, 2f64.powf(2.0 / 3.0)) < 1e-9);
        let vac = TaylorCubic::vacuum(W0);
        assert_eq!(linewidth_cubic(g_ec, &vac).unwrap(), g_ec);
    }

    #[test]
    fn white_light_linewidth_grows_as_group_index_falls() {
        let g_ec = 2.0 * PI * 1e3;
        let mut last = 0.0;
        for ng in [1.0, 0.5, 0.1, 0.01, 1e-3, 1e-4, 0.0] {
            let t = DispersionProfile::cad(GAMMA, W0, ng)
                .unwrap()
                .taylor_coefficients()
                .unwrap();
            let g = linewidth_cubic(g_ec, &t).unwrap();
            assert!(g > last, "ng={ng}");
            last = g;
        }
    }

    #[test]
    fn linewidth_without_positive_root() {
        let t = TaylorCubic::new(1.0, -2.0 / W0, -1e-20, W0).unwrap();
        assert_eq!(linewidth_cubic(1.0, &t), Err(Error::NoPositiveRoot));
    }

    #[test]
    fn shifted_linewidth_cases() {
        let vac = TaylorCubic::vacuum(W0);
        assert_eq!(shifted_linewidth(3.0, &vac, 0.0).unwrap().exact, 3.0);
        let t = cad_taylor(GAMMA);
        assert_eq!(
            shifted_linewidth(3.0, &t, 0.0),
            Err(Error::StillAtWhiteLight)
        );
        let g_ec = 2.0 * PI * 10.0;
        let mut last = f64::INFINITY;
        for dw_ec in [1e-2, 1.0, 1e2, 1e4] {
            let x = shift_cubic(dw_ec, &t).unwrap().shift;
            let s = shifted_linewidth(g_ec, &t, x).unwrap();
            let eta = enhancement_eta(GAMMA, dw_ec, EtaConvention::Derived).unwrap();
            assert!(rel(s.exact, eta / 3.0 * g_ec) < 1e-9);
            assert!(rel(s.exact, s.eta_over_three) < 1e-9);
            assert!(s.exact < last);
            last = s.exact;
        }
    }

    #[test]
    fn rotation_response_reduces_without_dispersion() {
        let c = table_top(1e3);
        let r = rotation_response(&c, &DispersionProfile::vacuum(), 1e-3).unwrap();
        assert_eq!(r, splitting_no_dispersion(&c, 1e-3));
        let z =
            rotation_response(&c, &DispersionProfile::cad(GAMMA, W0, 0.0).unwrap(), 0.0).unwrap();
        assert_eq!((z.dw_plus, z.dw_minus, z.splitting), (0.0, 0.0, 0.0));
        assert!(z.enhancement.is_infinite());
    }

    #[test]
    fn rotation_response_at_critical_point() {
        let c = table_top(1e3);
        let omega = 2.0 * PI / c.shift_per_rotation();
        let p = DispersionProfile::cad(GAMMA, W0, 0.0).unwrap();
        let r = rotation_response(&c, &p, omega).unwrap();
        assert!(rel(r.enhancement, 1e4) < 1e-6);
        assert!(rel(r.dw_minus, -r.dw_plus) < 1e-9);
        assert!((r.index_correction_minus - 1.0).abs() < 1e-9);
        assert_eq!(r.splitting, r.dw_minus - r.dw_plus);
    }

    #[test]
    fn partial_fill_keeps_critical_enhancement() {
        let mut c = table_top(1e3);
        c.fill_fraction = 1.0 / 1.1;
        let target = crate::dispersion::partial_fill_cad_target(c.fill_fraction).unwrap();
        let p = DispersionProfile::cad(GAMMA, W0, target).unwrap();
        let model = c.effective_model(&p).unwrap();
        assert!(model.group_index().abs() < 1e-12);
        let omega = 2.0 * PI / c.shift_per_rotation();
        let r = rotation_response(&c, &p, omega).unwrap();
        assert!(rel(r.enhancement, 1e4) < 1e-6);
    }

    #[test]
    fn feedback_gain_cases() {
        assert_eq!(feedback_gain(&TaylorCubic::vacuum(W0)), 0.0);
        assert!((feedback_gain(&cad_taylor(GAMMA)) - 1.0).abs() < 1e-15);
        assert_eq!(feedback_steady_state(1.0, 1.0), Err(Error::CadDivergence));
    }

    proptest! {
        #[test]
        fn feedback_matches_linear_shift(ng in 1e-3f64..10.0, half in 1e-3f64..1e3) {
            let t = TaylorCubic::new(1.0, (ng - 1.0) / W0, 0.0, W0).unwrap();
            let g = feedback_gain(&t);
            let steady = feedback_steady_state(half, g).unwrap();
            let lin = shift_linear(half, ng).unwrap();
            prop_assert!(rel(steady, lin) < 1e-9);
        }

        #[test]
        fn critical_scaling_law(log_ratio in -8.0f64..-2.0) {
            let t = cad_taylor(GAMMA);
            let dw = GAMMA * 10f64.powf(log_ratio);
            let s = shift_cubic(dw, &t).unwrap().shift;
            let eta = enhancement_eta(GAMMA, dw, EtaConvention::Derived).unwrap();
            prop_assert!(rel(s / dw, eta) < 1e-9);
        }

        #[test]
        fn cubic_tends_to_linear(ng in 0.05f64..5.0, dw in 1e-2f64..1e4) {
            let n1 = (ng - 1.0) / W0;
            let t = TaylorCubic::new(1.0, n1, 1e-60, W0).unwrap();
            let s = shift_cubic(dw, &t).unwrap().shift;
            prop_assert!(rel(s, shift_linear(dw, t.group_index()).unwrap()) < 1e-10);
        }

        #[test]
        fn direction_antisymmetry(frac in -0.1f64..0.1) {
            let c = table_top(1e3);
            let p = DispersionProfile::cad(GAMMA, W0, 0.0).unwrap();
            // rotation whose dispersive shift spans up to a tenth of Γ
            let dw_dis = frac * GAMMA;
            let dw_ec = dw_dis * dw_dis * dw_dis / (GAMMA * GAMMA);
            let omega = dw_ec / c.shift_per_rotation();
            let r = rotation_response(&c, &p, omega).unwrap();
            if r.dw_minus != 0.0 {
                prop_assert!(rel(-r.dw_plus, r.dw_minus) < 1e-9);
            }
        }

        #[test]
        fn eta_decreases_with_empty_shift(a in -8.0f64..-2.0, step in 0.01f64..1.0) {
            let t = cad_taylor(GAMMA);
            let lo = GAMMA * 10f64.powf(a);
            let hi = lo * 10f64.powf(step);
            let e_lo = shift_cubic(lo, &t).unwrap().shift / lo;
            let e_hi = shift_cubic(hi, &t).unwrap().shift / hi;
            prop_assert!(e_hi < e_lo);
        }
    }
}
