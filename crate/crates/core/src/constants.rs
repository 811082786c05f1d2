//! Physical constants (SI, CODATA 2018) and unit conversions used at the
//! I/O boundary. Everything inside the crate works in rad/s.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s (exact).
pub const C0: f64 = 299_792_458.0;

/// Planck constant, J·s (exact).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);

/// Sidereal rotation rate of the Earth, rad/s.
pub const EARTH_ROTATION: f64 = 7.292_115_9e-5;

/// Expected Lens-Thirring rate for an earth-bound experiment, as a
/// fraction of [`EARTH_ROTATION`].
pub const LENS_THIRRING_FRACTION: f64 = 5.6e-10;

/// Mass of a ⁸⁷Rb atom, kg.
pub const RB87_MASS: f64 = 1.443_160_648e-25;

pub fn hz_to_rad_s(f: f64) -> f64 {
    2.0 * PI * f
}

pub fn rad_s_to_hz(w: f64) -> f64 {
    w / (2.0 * PI)
}

/// Angular frequency of light with vacuum wavelength `lambda` (m).
pub fn wavelength_to_omega(lambda: f64) -> f64 {
    2.0 * PI * C0 / lambda
}

/// Converts a full width at half maximum in Hz to the half-width `Γ` in rad/s
/// used by the Lorentzian index model.
pub fn fwhm_hz_to_half_width(fwhm_hz: f64) -> f64 {
    hz_to_rad_s(fwhm_hz) / 2.0
}
