//! Quantum-noise-limited performance of passive and active (ring laser)
//! cavities, with and without an intra-cavity fast-light medium.

use crate::constants::{EARTH_ROTATION, HBAR, LENS_THIRRING_FRACTION};
use crate::error::{ensure, Error, Result};
use crate::resonator::{enhancement_eta, EtaConvention, RingCavity};

const SNR_CONSISTENCY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBudget {
    /// W
    pub p_out: f64,
    /// s
    pub tau_m: f64,
    pub quantum_efficiency: f64,
    /// Overrides the photon-limited `√N` when set.
    pub snr: Option<f64>,
    /// Overrides the detected photon count `η_q·P·τ/(ħω)` when set.
    pub photons: Option<f64>,
}

impl NoiseBudget {
    pub fn new(p_out: f64, tau_m: f64, quantum_efficiency: f64) -> Result<Self> {
        let b = Self {
            p_out,
            tau_m,
            quantum_efficiency,
            snr: None,
            photons: None,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn with_snr(self, snr: f64) -> Result<Self> {
        let b = Self {
            snr: Some(snr),
            ..self
        };
        b.validate()?;
        Ok(b)
    }

    pub fn with_photons(self, photons: f64) -> Result<Self> {
        let b = Self {
            photons: Some(photons),
            ..self
        };
        b.validate()?;
        Ok(b)
    }

    /// Checks positivity, and that an explicit SNR agrees with an explicit
    /// photon count when both are given.
    pub fn validate(&self) -> Result<()> {
        ensure(self.p_out > 0.0, "p_out", self.p_out, "must be positive")?;
        ensure(self.tau_m > 0.0, "tau_m", self.tau_m, "must be positive")?;
        ensure(
            self.quantum_efficiency > 0.0 && self.quantum_efficiency <= 1.0,
            "quantum_efficiency",
            self.quantum_efficiency,
            "must lie in (0, 1]",
        )?;
        if let Some(s) = self.snr {
            ensure(s > 0.0, "snr", s, "must be positive")?;
        }
        if let Some(n) = self.photons {
            ensure(n > 0.0, "photons", n, "must be positive")?;
        }
        if let (Some(s), Some(n)) = (self.snr, self.photons) {
            let derived = n.sqrt();
            if ((s - derived) / derived).abs() > SNR_CONSISTENCY {
                return Err(Error::InconsistentSnr {
                    explicit: s,
                    derived,
                });
            }
        }
        Ok(())
    }

    /// Detected photons in one measurement at optical frequency `omega`.
    pub fn detected_photons(&self, omega: f64) -> f64 {
        self.photons
            .unwrap_or(self.quantum_efficiency * self.p_out * self.tau_m / (HBAR * omega))
    }

    pub fn snr(&self, omega: f64) -> f64 {
        self.snr
            .unwrap_or_else(|| self.detected_photons(omega).sqrt())
    }
}

/// Quantum-limited linewidth `(1/τ_c)/√N`.
pub fn laser_linewidth(cavity: &RingCavity, budget: &NoiseBudget, omega: f64) -> Result<f64> {
    ensure(omega > 0.0, "omega", omega, "must be positive")?;
    budget.validate()?;
    Ok(cavity.empty_linewidth() / budget.detected_photons(omega).sqrt())
}

/// `γ_ec/SNR`, with the SNR taken at the cavity resonance.
pub fn min_shift_passive(cavity: &RingCavity, budget: &NoiseBudget) -> Result<f64> {
    budget.validate()?;
    Ok(cavity.empty_linewidth() / budget.snr(cavity.omega0))
}

/// `[Δω]_min·L/ω0`.
pub fn min_length(dw_min: f64, cavity: &RingCavity) -> f64 {
    dw_min * cavity.length() / cavity.omega0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveLength {
    /// m
    pub value: f64,
    /// `(η/3)·γ_ec/SNR`, rad/s.
    pub dw_dis_min: f64,
    /// False at `η = 1`, where the broadened-linewidth estimate no longer applies.
    pub within_validity: bool,
}

/// Minimum length change for a passive dispersive cavity:
/// `([Δω_dis]_min/η)·L/ω0` with `[Δω_dis]_min = (η/3)·γ_ec/SNR`.
pub fn min_length_passive_dispersive(
    cavity: &RingCavity,
    budget: &NoiseBudget,
    eta: f64,
) -> Result<DispersiveLength> {
    ensure(eta >= 1.0, "eta", eta, "must be at least 1")?;
    let dw_dis_min = eta / 3.0 * min_shift_passive(cavity, budget)?;
    Ok(DispersiveLength {
        value: min_length(dw_dis_min / eta, cavity),
        dw_dis_min,
        within_validity: eta > 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationMode {
    PassiveEmpty,
    RlgEmpty,
    RlgDispersive,
}

impl RotationMode {
    pub fn label(&self) -> &'static str {
        match self {
            RotationMode::PassiveEmpty => "passive_empty",
            RotationMode::RlgEmpty => "rlg_empty",
            RotationMode::RlgDispersive => "rlg_dispersive",
        }
    }
}

/// How a frequency resolution maps back to a rotation rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Readout {
    /// One direction's shift, `(ω0/(c0·n0))·(2A/P)·Ω`.
    #[default]
    PerDirection,
    /// The beat of both directions, `(ω0/(c0·n0))·(4A/P)·Ω`.
    Splitting,
}

impl Readout {
    pub fn label(&self) -> &'static str {
        match self {
            Readout::PerDirection => "per_direction",
            Readout::Splitting => "splitting",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationEstimate {
    pub mode: RotationMode,
    /// Frequency resolution before enhancement, rad/s.
    pub dw_min: f64,
    /// Enhancement applied (1 for the empty cavities).
    pub eta: f64,
    /// rad/s of shift per rad/s of rotation.
    pub scale: f64,
    /// rad/s
    pub omega_min: f64,
    /// Named intermediate values, in evaluation order.
    pub trail: Vec<(&'static str, f64)>,
}

impl RotationEstimate {
    pub fn in_earth_rates(&self) -> f64 {
        self.omega_min / EARTH_ROTATION
    }
}

/// Minimum detectable rotation rate.
///
/// For the dispersive ring laser the enhancement is evaluated at an empty
/// shift equal to the laser linewidth; the linewidth itself is not broadened
/// since the photon lifetime is unchanged.
pub fn min_rotation(
    cavity: &RingCavity,
    budget: &NoiseBudget,
    mode: RotationMode,
    gamma: Option<f64>,
    convention: EtaConvention,
    readout: Readout,
) -> Result<RotationEstimate> {
    let w0 = cavity.omega0;
    let mut trail = vec![
        ("gamma_ec_rad_s", cavity.empty_linewidth()),
        ("photons", budget.detected_photons(w0)),
    ];
    let dw_min = match mode {
        RotationMode::PassiveEmpty => {
            trail.push(("snr", budget.snr(w0)));
            min_shift_passive(cavity, budget)?
        }
        RotationMode::RlgEmpty | RotationMode::RlgDispersive => {
            laser_linewidth(cavity, budget, w0)?
        }
    };
    trail.push(("dw_min_rad_s", dw_min));
    let eta = match mode {
        RotationMode::RlgDispersive => {
            let g = gamma.ok_or(Error::Domain {
                name: "gamma",
                value: f64::NAN,
                reason: "required for rlg_dispersive",
            })?;
            trail.push(("gamma_rad_s", g));
            enhancement_eta(g, dw_min, convention)?
        }
        _ => 1.0,
    };
    trail.push(("eta", eta));
    let scale = match readout {
        Readout::PerDirection => cavity.shift_per_rotation(),
        Readout::Splitting => 2.0 * cavity.shift_per_rotation(),
    };
    trail.push(("shift_per_rotation", scale));
    let omega_min = dw_min / scale / eta;
    trail.push(("omega_min_rad_s", omega_min));
    trail.push(("omega_min_earth_rate", omega_min / EARTH_ROTATION));
    Ok(RotationEstimate {
        mode,
        dw_min,
        eta,
        scale,
        omega_min,
        trail,
    })
}

/// Expected Lens-Thirring rate over the minimum detectable rotation.
pub fn lens_thirring_margin(min_rotation: f64) -> Result<f64> {
    ensure(
        min_rotation > 0.0,
        "min_rotation",
        min_rotation,
        "must be positive",
    )?;
    Ok(LENS_THIRRING_FRACTION * EARTH_ROTATION / min_rotation)
}
