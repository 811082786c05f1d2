//! Numeric ring-cavity simulator: round-trip dephasing, Airy transmission,
//! resonance location and FWHM extraction on a frequency sweep.
//!
//! Everything is computed in detuning coordinates `δ = ω − ω0` so that the
//! dephasing of sub-Hz shifts on an optical carrier keeps full precision.
//! The medium fills a length `ℓ` of the loop; a length change `ΔL` is a
//! change of the vacuum path.

use crate::constants::C0;
use crate::cubic::bisect;
use crate::dispersion::DispersionProfile;
use crate::error::{ensure, Error, Result};
use crate::resonator::{
    enhancement_eta, length_from_empty_shift, shift_cubic, EtaConvention, RingCavity,
};
use std::f64::consts::PI;

pub const MIN_GRID_POINTS: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    /// Sweep center as a detuning from the cavity's ω0, rad/s.
    pub center_detuning: f64,
    pub half_span: f64,
    pub points: usize,
}

impl SweepGrid {
    pub fn new(center_detuning: f64, half_span: f64, points: usize) -> Result<Self> {
        ensure(
            half_span > 0.0 && half_span.is_finite(),
            "half_span",
            half_span,
            "must be positive",
        )?;
        ensure(
            center_detuning.is_finite(),
            "center_detuning",
            center_detuning,
            "must be finite",
        )?;
        ensure(
            points >= MIN_GRID_POINTS && points % 2 == 1,
            "points",
            points as f64,
            "must be odd and at least 1001",
        )?;
        Ok(Self {
            center_detuning,
            half_span,
            points,
        })
    }

    pub fn resolution(&self) -> f64 {
        2.0 * self.half_span / (self.points - 1) as f64
    }

    pub fn detuning(&self, i: usize) -> f64 {
        let m = ((self.points - 1) / 2) as f64;
        self.center_detuning + self.half_span * ((i as f64 - m) / m)
    }

    pub fn detunings(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.detuning(i)).collect()
    }

    /// Same span with the spacing halved.
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * self.points - 1,
            ..*self
        }
    }
}

/// `Ψ` at detuning `δ` from the cavity resonance `ω0`:
///
/// ```text
/// Ψ·c0 = ℓ·[n(ω)·ω − n(ω0)·ω0] + (L − ℓ)·δ + ω·ΔL
/// ```
pub fn round_trip_dephasing_at(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    delta_l: f64,
    detuning: f64,
) -> Result<f64> {
    let w0 = cavity.omega0;
    let ell = cavity.medium_length();
    let rest = cavity.length() - ell;
    let n_ref = profile.refractive_index(w0)?;
    let off = profile.index_offset(w0, detuning)?;
    let omega = w0 + detuning;
    let medium = off * omega + n_ref * detuning;
    Ok((ell * medium + rest * detuning + omega * delta_l) / C0)
}

/// `Ψ(ω)`; see [`round_trip_dephasing_at`].
pub fn round_trip_dephasing(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    delta_l: f64,
    omega: f64,
) -> Result<f64> {
    round_trip_dephasing_at(profile, cavity, delta_l, omega - cavity.omega0)
}

/// First three derivatives of `Ψ` with respect to ω at detuning `δ`.
pub fn dephasing_derivatives(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    delta_l: f64,
    detuning: f64,
) -> Result<[f64; 3]> {
    let omega = cavity.omega0 + detuning;
    let d = profile.derivatives(omega)?;
    let ell = cavity.medium_length();
    let rest = cavity.length() - ell;
    let ng = d.n + omega * d.d1;
    let k1 = (ell * ng + rest + delta_l) / C0;
    let k2 = ell * (2.0 * d.d1 + omega * d.d2) / C0;
    let k3 = ell * (3.0 * d.d2 + omega * d.d3) / C0;
    Ok([k1, k2, k3])
}

/// `1/[1 + (2𝔽/π)²·sin²(Ψ/2)]`.
pub fn airy_transmission(psi: f64, finesse: f64) -> f64 {
    let s = (psi / 2.0).sin();
    let k = 2.0 * finesse / PI;
    1.0 / (1.0 + k * k * s * s)
}

pub fn transmission(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    delta_l: f64,
    omega: f64,
) -> Result<f64> {
    let psi = round_trip_dephasing(profile, cavity, delta_l, omega)?;
    Ok(airy_transmission(psi, cavity.finesse))
}

/// `sin²(Ψ/2)`: minimised where T is maximised, and free of the `1 − T`
/// cancellation near the peak.
fn detune_metric(p: &DispersionProfile, c: &RingCavity, dl: f64, d: f64) -> Result<f64> {
    let s = (round_trip_dephasing_at(p, c, dl, d)? / 2.0).sin();
    Ok(s * s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub omega0: f64,
    /// `ω_r − ω0`, the numeric shift.
    pub detuning: f64,
}

impl Resonance {
    pub fn omega(&self) -> f64 {
        self.omega0 + self.detuning
    }
}

/// Locates the single transmission maximum inside `grid`.
pub fn find_resonance(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    delta_l: f64,
    grid: &SweepGrid,
) -> Result<Resonance> {
    let xs = grid.detunings();
    let g = xs
        .iter()
        .map(|&x| detune_metric(profile, cavity, delta_l, x))
        .collect::<Result<Vec<_>>>()?;
    let minima: Vec<usize> = (1..xs.len() - 1)
        .filter(|&i| g[i] < g[i - 1] && g[i] <= g[i + 1])
        .collect();
    if minima.len() != 1 {
        return Err(Error::ResonanceCount {
            found: minima.len(),
        });
    }
    let i = minima[0];
    let (lo, hi) = (xs[i - 1], xs[i + 1]);

    // a true peak is a crossing of Ψ = 2πk; bisect it to full precision
    let psi = |x: f64| round_trip_dephasing_at(profile, cavity, delta_l, x);
    let k = (psi(xs[i])? / (2.0 * PI)).round();
    let target = 2.0 * PI * k;
    let f_lo = psi(lo)? - target;
    let f_hi = psi(hi)? - target;
    let detuning = if f_lo == 0.0 {
        lo
    } else if f_hi == 0.0 {
        hi
    } else if (f_lo < 0.0) != (f_hi < 0.0) {
        bisect(|x| psi(x).map(|p| p - target).unwrap_or(f64::NAN), lo, hi)
    } else {
        // stationary point of Ψ: maximum of T below unity
        golden_min(
            |x| detune_metric(profile, cavity, delta_l, x).unwrap_or(f64::INFINITY),
            lo,
            hi,
        )
    };
    Ok(Resonance {
        omega0: cavity.omega0,
        detuning,
    })
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Phase excursion `|Ψ|` at which `T = 1/2`.
fn half_max_phase(finesse: f64) -> f64 {
    2.0 * (PI / (2.0 * finesse)).asin()
}

/// FWHM estimate from the local cubic expansion of `Ψ` about the resonance.
pub fn linewidth_estimate(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    delta_l: f64,
    resonance: &Resonance,
) -> Result<f64> {
    let [k1, k2, k3] = dephasing_derivatives(profile, cavity, delta_l, resonance.detuning)?;
    let (k1, k2, k3) = (k1.abs(), k2.abs(), k3.abs());
    let target = half_max_phase(cavity.finesse);
    let phase = |h: f64| ((k3 * h + k2) * h + k1) * h - target;
    let mut hi = cavity.free_spectral_range();
    while phase(hi) < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::HalfMaxNotBracketed { limit: hi });
        }
    }
    Ok(2.0 * bisect(phase, 0.0, hi))
}

/// Numeric FWHM of the transmission peak at `resonance`.
pub fn measure_fwhm(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    delta_l: f64,
    resonance: &Resonance,
) -> Result<f64> {
    let estimate = linewidth_estimate(profile, cavity, delta_l, resonance)?;
    let limit = 10.0 * estimate;
    let level = (PI / (2.0 * cavity.finesse)).powi(2);
    let x0 = resonance.detuning;
    let over = |h: f64| detune_metric(profile, cavity, delta_l, x0 + h).map(|g| g - level);

    let crossing = |side: f64| -> Result<f64> {
        let mut lo = 0.0;
        let mut h = 0.5 * estimate;
        loop {
            if over(side * h)? >= 0.0 {
                break;
            }
            lo = h;
            h *= 1.5;
            if h > limit {
                return Err(Error::HalfMaxNotBracketed { limit });
            }
        }
        Ok(bisect(|t| over(side * t).unwrap_or(f64::NAN), lo, h))
    };
    Ok(crossing(1.0)? + crossing(-1.0)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrace {
    pub omega0: f64,
    pub detunings: Vec<f64>,
    pub transmission: Vec<f64>,
    pub resonance: Resonance,
    pub fwhm: f64,
}

impl SpectrumTrace {
    /// Absolute sweep frequencies, rad/s.
    pub fn frequencies(&self) -> Vec<f64> {
        self.detunings.iter().map(|d| self.omega0 + d).collect()
    }
}

const MAX_TRACE_POINTS: usize = 1 << 21;

/// Transmission trace over `grid`, refined until the spacing resolves the
/// linewidth to better than a twentieth.
pub fn trace(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    delta_l: f64,
    grid: &SweepGrid,
) -> Result<SpectrumTrace> {
    let resonance = find_resonance(profile, cavity, delta_l, grid)?;
    let fwhm = measure_fwhm(profile, cavity, delta_l, &resonance)?;
    let mut g = *grid;
    while g.resolution() >= fwhm / 20.0 && g.points < MAX_TRACE_POINTS {
        g = g.refined();
    }
    let detunings = g.detunings();
    let transmission = detunings
        .iter()
        .map(|&d| {
            round_trip_dephasing_at(profile, cavity, delta_l, d)
                .map(|psi| airy_transmission(psi, cavity.finesse))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTrace {
        omega0: cavity.omega0,
        detunings,
        transmission,
        resonance,
        fwhm,
    })
}

/// Grid around an expected shift, wide enough to hold the peak and narrow
/// enough to exclude the neighbouring longitudinal modes.
pub fn grid_around(expected: f64, width: f64, points: usize) -> Result<SweepGrid> {
    let half = expected.abs().max(10.0 * width);
    SweepGrid::new(expected, half, points)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhancementPoint {
    pub dw_ec: f64,
    pub dw_dis_numeric: f64,
    /// Root of the cubic resonance condition.
    pub dw_dis_cubic: f64,
    pub eta_numeric: f64,
    pub eta_derived: f64,
    pub eta_paper: f64,
}

/// Numeric enhancement of the empty-cavity shifts `dw_ec_list` for a
/// Lorentzian medium tuned to the critical point of `cavity`.
pub fn sweep_enhancement(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    dw_ec_list: &[f64],
    points: usize,
) -> Result<Vec<EnhancementPoint>> {
    let gamma = profile
        .half_width()
        .ok_or(Error::NotLorentzian("sweep_enhancement"))?;
    let model = cavity.effective_model(profile)?;
    dw_ec_list
        .iter()
        .map(|&dw_ec| {
            let delta_l = length_from_empty_shift(cavity, dw_ec);
            let cubic = shift_cubic(dw_ec, &model)?.shift;
            let res = locate_adaptive(profile, cavity, delta_l, cubic, points)?;
            Ok(EnhancementPoint {
                dw_ec,
                dw_dis_numeric: res.detuning,
                dw_dis_cubic: cubic,
                eta_numeric: res.detuning / dw_ec,
                eta_derived: enhancement_eta(gamma, dw_ec, EtaConvention::Derived)?,
                eta_paper: enhancement_eta(gamma, dw_ec, EtaConvention::FullWidth)?,
            })
        })
        .collect()
}

/// Finds the resonance near `expected`, widening the grid when the peak
/// falls outside it.
pub fn locate_adaptive(
    profile: &DispersionProfile,
    cavity: &RingCavity,
    delta_l: f64,
    expected: f64,
    points: usize,
) -> Result<Resonance> {
    let guess = Resonance {
        omega0: cavity.omega0,
        detuning: expected,
    };
    let width = linewidth_estimate(profile, cavity, delta_l, &guess)?;
    let mut grid = grid_around(expected, width, points)?;
    let mut last = Error::ResonanceCount { found: 0 };
    for _ in 0..8 {
        match find_resonance(profile, cavity, delta_l, &grid) {
            Ok(r) => return Ok(r),
            Err(e @ Error::ResonanceCount { found: 0 }) => {
                last = e;
                grid.half_span *= 2.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}
