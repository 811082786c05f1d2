//! Refractive-index models `n(ω)` and the quantities derived from them.
//!
//! All frequencies are angular (rad/s). Derivatives are analytic for every
//! variant; the group index sits at a zero near the critically anomalous
//! point, where finite differences are at their worst.

use crate::error::{ensure, Error, Result};

/// Cubic Taylor model `n(ω) = n0 + n1·δ + n3·δ³`, `δ = ω − omega_ref`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCubic {
    pub n0: f64,
    /// s/rad
    pub n1: f64,
    /// s³/rad³
    pub n3: f64,
    /// rad/s
    pub omega_ref: f64,
}

impl TaylorCubic {
    pub fn new(n0: f64, n1: f64, n3: f64, omega_ref: f64) -> Result<Self> {
        let t = Self {
            n0,
            n1,
            n3,
            omega_ref,
        };
        t.validate()?;
        Ok(t)
    }

    /// Vacuum expansion about `omega_ref`.
    pub fn vacuum(omega_ref: f64) -> Self {
        Self {
            n0: 1.0,
            n1: 0.0,
            n3: 0.0,
            omega_ref,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.n0 > 0.0, "n0", self.n0, "must be positive")?;
        ensure(
            self.omega_ref > 0.0,
            "omega_ref",
            self.omega_ref,
            "must be positive",
        )?;
        ensure(self.n1.is_finite(), "n1", self.n1, "must be finite")?;
        ensure(self.n3.is_finite(), "n3", self.n3, "must be finite")
    }

    /// Group index at the reference frequency, `n0 + n1·ω_ref`.
    pub fn group_index(&self) -> f64 {
        self.n0 + self.n1 * self.omega_ref
    }

    /// Group index at `omega_ref + detuning`.
    pub fn local_group_index(&self, detuning: f64) -> f64 {
        let d = detuning;
        let omega = self.omega_ref + d;
        let n = self.n0 + self.n1 * d + self.n3 * d * d * d;
        n + omega * (self.n1 + 3.0 * self.n3 * d * d)
    }

    /// `n3·ω_ref`, the coefficient of the cubic term in the resonance condition.
    pub fn cubic_strength(&self) -> f64 {
        self.n3 * self.omega_ref
    }
}

/// Analytic derivatives of `n` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexDerivatives {
    pub n: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DispersionProfile {
    Constant {
        n0: f64,
    },
    Linear {
        n0: f64,
        /// s/rad
        n1: f64,
        omega_ref: f64,
    },
    /// `n(ω) = 1 − A·Γ·(ω−ω0)/[Γ² + (ω−ω0)²]`; `2Γ` is the absorption FWHM.
    LorentzianAbsorptive {
        strength: f64,
        gamma: f64,
        omega0: f64,
    },
    Taylor(TaylorCubic),
}

impl DispersionProfile {
    pub fn vacuum() -> Self {
        DispersionProfile::Constant { n0: 1.0 }
    }

    pub fn constant(n0: f64) -> Result<Self> {
        let p = DispersionProfile::Constant { n0 };
        p.validate()?;
        Ok(p)
    }

    pub fn linear(n0: f64, n1: f64, omega_ref: f64) -> Result<Self> {
        let p = DispersionProfile::Linear { n0, n1, omega_ref };
        p.validate()?;
        Ok(p)
    }

    /// Linear profile with the given group index at `omega_ref`.
    pub fn linear_with_group_index(n0: f64, ng: f64, omega_ref: f64) -> Result<Self> {
        ensure(omega_ref > 0.0, "omega_ref", omega_ref, "must be positive")?;
        Self::linear(n0, (ng - n0) / omega_ref, omega_ref)
    }

    pub fn lorentzian(strength: f64, gamma: f64, omega0: f64) -> Result<Self> {
        let p = DispersionProfile::LorentzianAbsorptive {
            strength,
            gamma,
            omega0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Lorentzian tuned so that its group index at `omega0` equals `ng_target`.
    pub fn cad(gamma: f64, omega0: f64, ng_target: f64) -> Result<Self> {
        let a = cad_tune(gamma, omega0, ng_target)?;
        Self::lorentzian(a, gamma, omega0)
    }

    pub fn taylor(t: TaylorCubic) -> Result<Self> {
        t.validate()?;
        Ok(DispersionProfile::Taylor(t))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DispersionProfile::Constant { n0 } => ensure(n0 > 0.0, "n0", n0, "must be positive"),
            DispersionProfile::Linear { n0, n1, omega_ref } => {
                ensure(n0 > 0.0, "n0", n0, "must be positive")?;
                ensure(n1.is_finite(), "n1", n1, "must be finite")?;
                ensure(omega_ref > 0.0, "omega_ref", omega_ref, "must be positive")
            }
            DispersionProfile::LorentzianAbsorptive {
                strength,
                gamma,
                omega0,
            } => {
                ensure(strength.is_finite(), "A", strength, "must be finite")?;
                ensure(gamma > 0.0, "gamma", gamma, "must be positive")?;
                ensure(omega0 > 0.0, "omega0", omega0, "must be positive")
            }
            DispersionProfile::Taylor(t) => t.validate(),
        }
    }

    /// Phase index `n(ω)`.
    pub fn refractive_index(&self, omega: f64) -> Result<f64> {
        Ok(self.derivatives(omega)?.n)
    }

    /// Group index `n + ω·dn/dω`.
    pub fn group_index(&self, omega: f64) -> Result<f64> {
        let d = self.derivatives(omega)?;
        Ok(d.n + omega * d.d1)
    }

    /// `n`, `n'`, `n''`, `n'''` at `omega`.
    pub fn derivatives(&self, omega: f64) -> Result<IndexDerivatives> {
        ensure(omega > 0.0, "omega", omega, "must be positive")?;
        Ok(match *self {
            DispersionProfile::Constant { n0 } => IndexDerivatives {
                n: n0,
                d1: 0.0,
                d2: 0.0,
                d3: 0.0,
            },
            DispersionProfile::Linear { n0, n1, omega_ref } => IndexDerivatives {
                n: n0 + n1 * (omega - omega_ref),
                d1: n1,
                d2: 0.0,
                d3: 0.0,
            },
            DispersionProfile::LorentzianAbsorptive {
                strength,
                gamma,
                omega0,
            } => lorentzian_derivatives(strength, gamma, omega - omega0),
            DispersionProfile::Taylor(t) => {
                let d = omega - t.omega_ref;
                IndexDerivatives {
                    n: t.n0 + t.n1 * d + t.n3 * d * d * d,
                    d1: t.n1 + 3.0 * t.n3 * d * d,
                    d2: 6.0 * t.n3 * d,
                    d3: 6.0 * t.n3,
                }
            }
        })
    }

    /// `n(ω_ref + δ) − n(ω_ref)`, evaluated without forming `ω_ref + δ`
    /// so that sub-Hz detunings of optical carriers keep full precision.
    pub fn index_offset(&self, omega_ref: f64, detuning: f64) -> Result<f64> {
        ensure(omega_ref > 0.0, "omega", omega_ref, "must be positive")?;
        ensure(
            omega_ref + detuning > 0.0,
            "omega",
            omega_ref + detuning,
            "must be positive",
        )?;
        let d = detuning;
        Ok(match *self {
            DispersionProfile::Constant { .. } => 0.0,
            DispersionProfile::Linear { n1, .. } => n1 * d,
            DispersionProfile::LorentzianAbsorptive {
                strength,
                gamma,
                omega0,
            } => {
                let u = omega_ref - omega0;
                let g2 = gamma * gamma;
                let v = u + d;
                // difference of u/(g²+u²) terms, combined over a common denominator
                let num = d * (g2 - u * v);
                -strength * gamma * num / ((g2 + v * v) * (g2 + u * u))
            }
            DispersionProfile::Taylor(t) => {
                let u = omega_ref - t.omega_ref;
                t.n1 * d + t.n3 * d * (3.0 * u * u + 3.0 * u * d + d * d)
            }
        })
    }

    /// Cubic Taylor model for the Lorentzian about its line center.
    pub fn taylor_coefficients(&self) -> Result<TaylorCubic> {
        match *self {
            DispersionProfile::LorentzianAbsorptive {
                strength,
                gamma,
                omega0,
            } => {
                let n1 = -strength / gamma;
                Ok(TaylorCubic {
                    n0: 1.0,
                    n1,
                    n3: -n1 / (gamma * gamma),
                    omega_ref: omega0,
                })
            }
            _ => Err(Error::NotLorentzian("taylor_coefficients")),
        }
    }

    /// Cubic model of this profile about `omega`. Exact for the constant,
    /// linear and cubic variants; for the Lorentzian only the line center is
    /// supported because the even terms vanish only there.
    pub fn cubic_model_at(&self, omega: f64) -> Result<TaylorCubic> {
        ensure(omega > 0.0, "omega", omega, "must be positive")?;
        match *self {
            DispersionProfile::Constant { n0 } => Ok(TaylorCubic {
                n0,
                n1: 0.0,
                n3: 0.0,
                omega_ref: omega,
            }),
            DispersionProfile::Linear { n0, n1, omega_ref } => Ok(TaylorCubic {
                n0: n0 + n1 * (omega - omega_ref),
                n1,
                n3: 0.0,
                omega_ref: omega,
            }),
            DispersionProfile::LorentzianAbsorptive { omega0, .. } => {
                if omega == omega0 {
                    self.taylor_coefficients()
                } else {
                    Err(Error::OffReferenceExpansion)
                }
            }
            DispersionProfile::Taylor(t) => {
                if omega == t.omega_ref || t.n3 == 0.0 {
                    let d = omega - t.omega_ref;
                    Ok(TaylorCubic {
                        n0: t.n0 + t.n1 * d,
                        omega_ref: omega,
                        ..t
                    })
                } else {
                    Err(Error::OffReferenceExpansion)
                }
            }
        }
    }

    /// Half-width `Γ` for Lorentzian profiles.
    pub fn half_width(&self) -> Option<f64> {
        match *self {
            DispersionProfile::LorentzianAbsorptive { gamma, .. } => Some(gamma),
            _ => None,
        }
    }
}

fn lorentzian_derivatives(a: f64, g: f64, d: f64) -> IndexDerivatives {
    let g2 = g * g;
    let u = g2 + d * d;
    let ag = a * g;
    let f = d / u;
    let f1 = (g2 - d * d) / (u * u);
    let f2 = 2.0 * d * (d * d - 3.0 * g2) / (u * u * u);
    let d2 = d * d;
    let f3 = -6.0 * (d2 * d2 - 6.0 * g2 * d2 + g2 * g2) / (u * u * u * u);
    IndexDerivatives {
        n: 1.0 - ag * f,
        d1: -ag * f1,
        d2: -ag * f2,
        d3: -ag * f3,
    }
}

/// Lorentzian strength `A` giving group index `ng_target` at line center:
/// `A = Γ·(1 − ng_target)/ω0`.
pub fn cad_tune(gamma: f64, omega0: f64, ng_target: f64) -> Result<f64> {
    ensure(gamma > 0.0, "gamma", gamma, "must be positive")?;
    ensure(omega0 > 0.0, "omega0", omega0, "must be positive")?;
    if !(ng_target <= 1.0) {
        return Err(Error::InfeasibleTarget { ng_target });
    }
    Ok(gamma * (1.0 - ng_target) / omega0)
}

/// Group index that makes a partially filled cavity critically anomalous:
/// `1 − L/ℓ` with `fill = ℓ/L`.
pub fn partial_fill_cad_target(fill_fraction: f64) -> Result<f64> {
    ensure(
        fill_fraction > 0.0 && fill_fraction <= 1.0,
        "fill_fraction",
        fill_fraction,
        "must lie in (0, 1]",
    )?;
    Ok(1.0 - 1.0 / fill_fraction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const W0: f64 = PI * 1e15;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // central difference of n(ω)·ω, test-only
    fn fd_group_index(p: &DispersionProfile, w: f64) -> f64 {
        let h = w * 1e-9;
        let f = |x: f64| p.refractive_index(x).unwrap() * x;
        (f(w + h) - f(w - h)) / (2.0 * h)
    }

    #[test]
    fn lorentzian_is_unity_at_line_center() {
        let p = DispersionProfile::lorentzian(1e-9, 2.0 * PI * 1e6, W0).unwrap();
        assert_eq!(p.refractive_index(W0).unwrap(), 1.0);
    }

    #[test]
    fn lorentzian_at_one_half_width() {
        let g = 2.0 * PI * 1e6;
        let p = DispersionProfile::lorentzian(1e-9, g, W0).unwrap();
        let off = p.index_offset(W0, g).unwrap();
        assert!(rel(off, -5e-10) < 1e-12);
    }

    #[test]
    fn constant_profile_everywhere() {
        let p = DispersionProfile::constant(1.5).unwrap();
        for w in [1.0, 1e10, W0] {
            assert_eq!(p.refractive_index(w).unwrap(), 1.5);
            assert_eq!(p.group_index(w).unwrap(), 1.5);
        }
    }

    #[test]
    fn non_positive_omega_is_rejected() {
        let p = DispersionProfile::vacuum();
        assert!(matches!(p.refractive_index(0.0), Err(Error::Domain { .. })));
        assert!(matches!(p.group_index(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn invalid_profiles_are_rejected() {
        assert!(DispersionProfile::lorentzian(1e-9, 0.0, W0).is_err());
        assert!(DispersionProfile::lorentzian(1e-9, 1.0, -W0).is_err());
        assert!(DispersionProfile::constant(0.0).is_err());
        assert!(DispersionProfile::linear(-1.0, 0.0, W0).is_err());
    }

    #[test]
    fn linear_cad_group_index_is_zero() {
        let p = DispersionProfile::linear(1.0, -1.0 / W0, W0).unwrap();
        assert_eq!(p.group_index(W0).unwrap(), 0.0);
    }

    #[test]
    fn lorentzian_cad_group_index_is_zero() {
        let g = 2.0 * PI * 1e6;
        let p = DispersionProfile::lorentzian(g / W0, g, W0).unwrap();
        assert!(p.group_index(W0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn taylor_coefficients_closed_form() {
        let g = 2.0 * PI * 1e6;
        let t = DispersionProfile::lorentzian(2e-9, g, W0)
            .unwrap()
            .taylor_coefficients()
            .unwrap();
        assert!(rel(t.n1, -3.183_098_861_837_907e-16) < 1e-12);
        assert_eq!(t.n3, -t.n1 / (g * g));
        assert_eq!(t.n0, 1.0);
        assert_eq!(t.omega_ref, W0);
    }

    #[test]
    fn taylor_coefficients_of_zero_strength_is_vacuum() {
        let t = DispersionProfile::lorentzian(0.0, 1e6, W0)
            .unwrap()
            .taylor_coefficients()
            .unwrap();
        assert_eq!(t.n1, 0.0);
        assert_eq!(t.n3, 0.0);
    }

    #[test]
    fn taylor_coefficients_require_lorentzian() {
        assert_eq!(
            DispersionProfile::vacuum().taylor_coefficients(),
            Err(Error::NotLorentzian("taylor_coefficients"))
        );
    }

    #[test]
    fn cad_tune_targets() {
        let g = 2.0 * PI * 1e6;
        assert!(rel(cad_tune(g, W0, 0.0).unwrap(), g / W0) < 1e-15);
        assert_eq!(cad_tune(g, W0, 1.0).unwrap(), 0.0);
        let target = partial_fill_cad_target(1.0 / 1.1).unwrap();
        assert!((target + 0.1).abs() < 1e-12);
        assert!(rel(cad_tune(g, W0, target).unwrap(), 1.1 * g / W0) < 1e-12);
        assert!(matches!(
            cad_tune(g, W0, 1.5),
            Err(Error::InfeasibleTarget { .. })
        ));
    }

    #[test]
    fn cubic_model_of_lorentzian_only_at_center() {
        let p = DispersionProfile::lorentzian(1e-9, 1e6, W0).unwrap();
        assert!(p.cubic_model_at(W0).is_ok());
        assert_eq!(
            p.cubic_model_at(W0 + 1.0),
            Err(Error::OffReferenceExpansion)
        );
        let lin = DispersionProfile::linear(1.2, 1e-16, W0).unwrap();
        let t = lin.cubic_model_at(W0 + 1e6).unwrap();
        assert!(rel(t.n0, 1.2 + 1e-10) < 1e-15);
    }

    #[test]
    fn third_derivative_matches_taylor_n3() {
        let g = 2.0 * PI * 1e6;
        let p = DispersionProfile::lorentzian(2e-9, g, W0).unwrap();
        let t = p.taylor_coefficients().unwrap();
        let d = p.derivatives(W0).unwrap();
        assert!(rel(d.d3 / 6.0, t.n3) < 1e-12);
        assert_eq!(d.d2, 0.0);
        assert!(rel(d.d1, t.n1) < 1e-15);
    }

    proptest! {
        #[test]
        fn lorentzian_antisymmetry(a in 1e-12f64..1e-6, g in 1e3f64..1e9, frac in -50.0f64..50.0) {
            let p = DispersionProfile::lorentzian(a, g, W0).unwrap();
            let d = frac * g;
            let plus = p.index_offset(W0, d).unwrap();
            let minus = p.index_offset(W0, -d).unwrap();
            prop_assert_eq!(plus + minus, 0.0);
        }

        #[test]
        fn group_index_matches_finite_difference(s in 0.0f64..3.0, g in 1e7f64..1e9, frac in -3.0f64..3.0) {
            // step is w·1e-9, so the carrier is kept low enough for the step to resolve Γ
            let w0 = 1e12;
            let p = DispersionProfile::lorentzian(s * g / w0, g, w0).unwrap();
            let w = w0 + frac * g;
            let ng = p.group_index(w).unwrap();
            let fd = fd_group_index(&p, w);
            // relative tolerance on ng, floored at unit scale near a zero of ng
            prop_assert!((ng - fd).abs() <= 1e-5 * ng.abs().max(1.0));
        }

        #[test]
        fn taylor_fidelity_within_tenth_half_width(a in 1e-12f64..1e-6, g in 1e3f64..1e9, frac in -0.1f64..0.1) {
            let p = DispersionProfile::lorentzian(a, g, W0).unwrap();
            let t = p.taylor_coefficients().unwrap();
            let d = frac * g;
            let exact = p.index_offset(W0, d).unwrap();
            let cubic = t.n1 * d + t.n3 * d * d * d;
            prop_assert!((exact - cubic).abs() <= t.n1.abs() * g * 1e-2);
            if d != 0.0 {
                // relative deviation error of the truncated series
                prop_assert!(((cubic - exact) / exact).abs() < 0.01);
            }
        }

        #[test]
        fn cad_tune_inverts_group_index(g in 1e3f64..1e9, ng in -2.0f64..1.0) {
            let p = DispersionProfile::cad(g, W0, ng).unwrap();
            let back = p.group_index(W0).unwrap();
            prop_assert!((back - ng).abs() < 1e-12);
        }

        #[test]
        fn index_offset_agrees_with_direct_difference(frac in -3.0f64..3.0, u in -2.0f64..2.0) {
            let g = 1e9;
            let p = DispersionProfile::lorentzian(1e-3, g, 1e12).unwrap();
            let w_ref = 1e12 + u * g;
            let d = frac * g;
            let direct = p.refractive_index(w_ref + d).unwrap() - p.refractive_index(w_ref).unwrap();
            let off = p.index_offset(w_ref, d).unwrap();
            prop_assert!((direct - off).abs() < 1e-12);
        }
    }
}
