//! Open-path Sagnac interferometry: velocity composition, the vacuum phase
//! shift, medium drag and the slow-light relative-rotation phase.
//!
//! `Ω > 0` means the `+` (CW) beam co-propagates with the rotation, and phase
//! differences are reported as `φ⁺ − φ⁻`.

use crate::constants::{C0, HBAR, PLANCK};
use crate::dispersion::DispersionProfile;
use crate::error::{ensure, Result};
use std::f64::consts::PI;

const GEOMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopGeometry {
    area: f64,
    perimeter: f64,
    radius: Option<f64>,
}

impl LoopGeometry {
    pub fn new(area: f64, perimeter: f64) -> Result<Self> {
        ensure(
            area > 0.0 && area.is_finite(),
            "area",
            area,
            "must be positive",
        )?;
        ensure(
            perimeter > 0.0 && perimeter.is_finite(),
            "perimeter",
            perimeter,
            "must be positive",
        )?;
        Ok(Self {
            area,
            perimeter,
            radius: None,
        })
    }

    /// Circular loop of radius `r`.
    pub fn circle(r: f64) -> Result<Self> {
        ensure(r > 0.0 && r.is_finite(), "radius", r, "must be positive")?;
        Ok(Self {
            area: PI * r * r,
            perimeter: 2.0 * PI * r,
            radius: Some(r),
        })
    }

    /// Area and perimeter together with a radius they must agree with.
    pub fn with_radius(area: f64, perimeter: f64, r: f64) -> Result<Self> {
        let g = Self::new(area, perimeter)?;
        ensure(r > 0.0, "radius", r, "must be positive")?;
        ensure(
            ((area - PI * r * r) / area).abs() < GEOMETRY_TOL,
            "area",
            area,
            "inconsistent with radius (A = πR²)",
        )?;
        ensure(
            ((perimeter - 2.0 * PI * r) / perimeter).abs() < GEOMETRY_TOL,
            "perimeter",
            perimeter,
            "inconsistent with radius (P = 2πR)",
        )?;
        Ok(Self {
            radius: Some(r),
            ..g
        })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    /// The given radius, or `2A/P` for a non-circular loop.
    pub fn effective_radius(&self) -> f64 {
        self.radius.unwrap_or(2.0 * self.area / self.perimeter)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationState {
    /// rad/s, positive = CW.
    pub omega_rot: f64,
    /// `Ω·R`, m/s.
    pub tangential_speed: f64,
}

impl RotationState {
    pub fn new(omega_rot: f64, geom: &LoopGeometry) -> Result<Self> {
        ensure(
            omega_rot.is_finite(),
            "omega_rot",
            omega_rot,
            "must be finite",
        )?;
        let v = omega_rot * geom.effective_radius();
        ensure(v.abs() < C0, "tangential_speed", v, "must be below c0")?;
        Ok(Self {
            omega_rot,
            tangential_speed: v,
        })
    }

    pub fn beta(&self) -> f64 {
        self.tangential_speed / C0
    }
}

/// Relativistic sum `(u + v)/(1 + u·v/c0²)`.
pub fn relativistic_compose(v_phase: f64, v_boost: f64) -> Result<f64> {
    ensure(
        v_phase.abs() <= C0,
        "v_phase",
        v_phase,
        "must not exceed c0",
    )?;
    ensure(v_boost.abs() < C0, "v_boost", v_boost, "must be below c0")?;
    Ok((v_phase + v_boost) / (1.0 + v_phase * v_boost / (C0 * C0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SagnacShift {
    /// `2AΩ/[c0²(1−β²)]`, s.
    pub delta_t: f64,
    /// `ω·Δt`, rad.
    pub delta_phi: f64,
    /// `2AΩ/c0²`.
    pub delta_t_first_order: f64,
    pub delta_phi_first_order: f64,
}

pub fn vacuum_sagnac(geom: &LoopGeometry, rot: &RotationState, omega: f64) -> SagnacShift {
    let b = rot.beta();
    let first = 2.0 * geom.area() * rot.omega_rot / (C0 * C0);
    let exact = first / (1.0 - b * b);
    SagnacShift {
        delta_t: exact,
        delta_phi: omega * exact,
        delta_t_first_order: first,
        delta_phi_first_order: omega * first,
    }
}

/// Compton angular frequency `m·c0²/ħ`.
pub fn compton_angular_frequency(mass: f64) -> f64 {
    mass * C0 * C0 / HBAR
}

/// Matter-wave Sagnac phase `4π·m·A·Ω/h`.
pub fn matter_wave_phase(mass: f64, geom: &LoopGeometry, rot: &RotationState) -> Result<f64> {
    ensure(mass > 0.0, "mass", mass, "must be positive")?;
    Ok(4.0 * PI * mass * geom.area() * rot.omega_rot / PLANCK)
}

/// Fresnel drag `1 − 1/n²`.
pub fn fresnel_drag(n: f64) -> Result<f64> {
    ensure(n >= 1.0, "n", n, "drag formulas need n >= 1")?;
    Ok(1.0 - 1.0 / (n * n))
}

/// Laub drag `1 − 1/n0² + (n_g − n0)/n0²`.
pub fn laub_drag(n0: f64, ng: f64) -> Result<f64> {
    ensure(n0 >= 1.0, "n0", n0, "drag formulas need n0 >= 1")?;
    Ok(1.0 - 1.0 / (n0 * n0) + (ng - n0) / (n0 * n0))
}

/// Phase for a medium co-rotating with source and interferometer,
/// `n²(1 − α_F)·Δφ0`. Equal to the vacuum phase for every `n`.
pub fn comoving_phase(n: f64, geom: &LoopGeometry, rot: &RotationState, omega: f64) -> Result<f64> {
    let alpha = fresnel_drag(n)?;
    Ok(n * n * (1.0 - alpha) * vacuum_sagnac(geom, rot, omega).delta_phi)
}

/// Phase for a medium that does not co-rotate with the interferometer,
/// `n0²(1 − α_L)·Δφ0`, with `n0` and `n_g` taken from `profile` at `omega`.
///
/// For `n_g ≫ n0` the magnitude approaches `n_g·Δφ0`. The sign relative to
/// the co-moving case is that of the drag form (negative for `n_g > 2n0²`).
pub fn relative_rotation_phase(
    profile: &DispersionProfile,
    geom: &LoopGeometry,
    rot: &RotationState,
    omega: f64,
) -> Result<f64> {
    let d = profile.derivatives(omega)?;
    let n0 = d.n;
    let ng = d.n + omega * d.d1;
    let alpha = laub_drag(n0, ng)?;
    Ok(n0 * n0 * (1.0 - alpha) * vacuum_sagnac(geom, rot, omega).delta_phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{wavelength_to_omega, EARTH_ROTATION, RB87_MASS};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn unit_loop() -> LoopGeometry {
        // A = 1 m²
        LoopGeometry::circle((1.0 / PI).sqrt()).unwrap()
    }

    #[test]
    fn geometry_validation() {
        assert!(LoopGeometry::new(0.0, 1.0).is_err());
        assert!(LoopGeometry::new(1.0, -1.0).is_err());
        let c = LoopGeometry::circle(1.0).unwrap();
        assert!(LoopGeometry::with_radius(c.area(), c.perimeter(), 1.0).is_ok());
        assert!(LoopGeometry::with_radius(c.area() * 1.001, c.perimeter(), 1.0).is_err());
        let sq = LoopGeometry::new(1.0, 4.0).unwrap();
        assert_eq!(sq.effective_radius(), 0.5);
    }

    #[test]
    fn rotation_speed_limit() {
        let g = LoopGeometry::circle(1.0).unwrap();
        assert!(RotationState::new(C0, &g).is_err());
        let r = RotationState::new(2.0, &g).unwrap();
        assert_eq!(r.tangential_speed, 2.0);
    }

    #[test]
    fn compose_fixed_points() {
        assert_eq!(relativistic_compose(C0, 1e3).unwrap(), C0);
        assert_eq!(relativistic_compose(C0, -1e7).unwrap(), C0);
        assert_eq!(relativistic_compose(C0 / 1.5, 0.0).unwrap(), C0 / 1.5);
        assert_eq!(relativistic_compose(0.0, 7.0).unwrap(), 7.0);
        assert!(relativistic_compose(1.0, C0).is_err());
    }

    #[test]
    fn compose_first_order_is_fresnel_drag() {
        let vp = C0 / 1.5;
        let got = relativistic_compose(vp, 10.0).unwrap() - vp;
        let drag = 10.0 * fresnel_drag(1.5).unwrap();
        assert!(rel(got, drag) < 1e-6);
        assert!((got - 5.5556).abs() < 1e-4);
    }

    #[test]
    fn vacuum_sagnac_cases() {
        let g = unit_loop();
        let w = wavelength_to_omega(1e-6);
        let zero = vacuum_sagnac(&g, &RotationState::new(0.0, &g).unwrap(), w);
        assert_eq!((zero.delta_t, zero.delta_phi), (0.0, 0.0));

        let s = vacuum_sagnac(&g, &RotationState::new(1.0, &g).unwrap(), w);
        let oracle = 4.0 * PI / (1e-6 * C0);
        assert!(rel(s.delta_phi, oracle) < 1e-15);
        assert!(rel(s.delta_phi, 4.192e-2) < 1e-3);

        let r1 = LoopGeometry::circle(1.0).unwrap();
        let s1 = vacuum_sagnac(&r1, &RotationState::new(1.0, &r1).unwrap(), w);
        let d = rel(s1.delta_t, s1.delta_t_first_order);
        assert!(d < 1e-16, "{d}");
    }

    #[test]
    fn matter_wave_cases() {
        let g = unit_loop();
        let still = RotationState::new(0.0, &g).unwrap();
        assert_eq!(matter_wave_phase(RB87_MASS, &g, &still).unwrap(), 0.0);

        let rot = RotationState::new(EARTH_ROTATION, &g).unwrap();
        let phi = matter_wave_phase(RB87_MASS, &g, &rot).unwrap();
        let compton = vacuum_sagnac(&g, &rot, compton_angular_frequency(RB87_MASS));
        assert!(rel(phi, compton.delta_phi_first_order) < 1e-14);
        let oracle = 4.0 * PI * 1.443e-25 * 1.0 * 7.292e-5 / 6.626e-34;
        assert!(rel(phi, oracle) < 1e-3);
        // 4π·1.443e-25·7.292e-5/6.626e-34 is about 2.0e5 rad
        assert!(rel(phi, 1.995e5) < 2e-3);
        assert!(matter_wave_phase(0.0, &g, &rot).is_err());
    }

    #[test]
    fn drag_coefficients() {
        assert_eq!(fresnel_drag(1.0).unwrap(), 0.0);
        assert!((fresnel_drag(1.5).unwrap() - 5.0 / 9.0).abs() < 1e-15);
        assert!(fresnel_drag(0.9).is_err());
        let mut last = 0.0;
        for n in [1.1, 2.0, 10.0, 1e3, 1e6] {
            let a = fresnel_drag(n).unwrap();
            assert!(a > last && a < 1.0);
            last = a;
        }
        for n in [1.0, 1.5, 3.0] {
            assert_eq!(laub_drag(n, n).unwrap(), fresnel_drag(n).unwrap());
        }
        assert_eq!(laub_drag(1.0, 1e8).unwrap(), 1e8 - 1.0);
        assert!((laub_drag(1.5, 1.5).unwrap() - 0.5556).abs() < 1e-4);
    }

    #[test]
    fn comoving_equals_vacuum() {
        let g = unit_loop();
        let rot = RotationState::new(1.0, &g).unwrap();
        let w = wavelength_to_omega(1e-6);
        let phi0 = vacuum_sagnac(&g, &rot, w).delta_phi;
        assert_eq!(comoving_phase(1.0, &g, &rot, w).unwrap(), phi0);
        assert!(rel(comoving_phase(2.0, &g, &rot, w).unwrap(), phi0) < 1e-15);
    }

    #[test]
    fn relative_rotation_phase_cases() {
        let g = unit_loop();
        let rot = RotationState::new(1.0, &g).unwrap();
        let w = wavelength_to_omega(1e-6);
        let phi0 = vacuum_sagnac(&g, &rot, w).delta_phi;
        let vac = DispersionProfile::vacuum();
        assert_eq!(relative_rotation_phase(&vac, &g, &rot, w).unwrap(), phi0);
        let glass = DispersionProfile::constant(1.5).unwrap();
        assert!(rel(relative_rotation_phase(&glass, &g, &rot, w).unwrap(), phi0) < 1e-15);

        let slow = DispersionProfile::linear_with_group_index(1.0, 1e8, w).unwrap();
        let phi = relative_rotation_phase(&slow, &g, &rot, w).unwrap();
        assert!(rel(phi, -(1e8 - 2.0) * phi0) < 1e-12);
        assert!(rel(phi.abs(), 4.192e6) < 1e-3);
    }

    proptest! {
        #[test]
        fn comoving_index_independence(n in 1.0f64..10.0, omega in -10.0f64..10.0) {
            let g = unit_loop();
            let rot = RotationState::new(omega, &g).unwrap();
            let w = wavelength_to_omega(1e-6);
            let phi0 = vacuum_sagnac(&g, &rot, w).delta_phi;
            let phi = comoving_phase(n, &g, &rot, w).unwrap();
            prop_assert!((phi - phi0).abs() <= 1e-12 * phi0.abs());
        }

        #[test]
        fn compute_identities(v in -1e8f64..1e8) {
            prop_assert_eq!(relativistic_compose(v, 0.0).unwrap(), v);
            prop_assert_eq!(relativistic_compose(0.0, v).unwrap(), v);
        }
    }
}
