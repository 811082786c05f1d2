//! Subcommand bodies. Each turns a validated scenario into a [`Report`].

use crate::output::Report;
use crate::scenario::{DriveKind, Scenario, ScenarioError};
use fastlight_core::constants::{hz_to_rad_s, rad_s_to_hz, EARTH_ROTATION, LENS_THIRRING_FRACTION};
use fastlight_core::dispersion::{partial_fill_cad_target, DispersionProfile};
use fastlight_core::resonator::{
    empty_shift_from_length, enhancement_eta, feedback_gain, length_from_empty_shift,
    length_to_rotation, linewidth_cubic, linewidth_cubic_half_max, linewidth_linear,
    rotation_response, rotation_to_length, shift_cubic, shifted_linewidth, splitting_no_dispersion,
    EtaConvention, RingCavity,
};
use fastlight_core::sagnac::{
    comoving_phase, fresnel_drag, laub_drag, matter_wave_phase, relative_rotation_phase,
    vacuum_sagnac, RotationState,
};
use fastlight_core::sensitivity::{
    laser_linewidth, lens_thirring_margin, min_length, min_length_passive_dispersive, min_rotation,
    min_shift_passive, RotationEstimate, RotationMode,
};
use fastlight_core::spectrum::{
    locate_adaptive, measure_fwhm, sweep_enhancement, trace, SweepGrid,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("computation failed: {0}")]
    Compute(#[from] fastlight_core::Error),
    #[error("writing output: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Open-path Sagnac phases with medium drag
    Sagnac,
    /// Dispersionless ring-cavity splitting
    Split,
    /// Dispersive resonance shifts for each direction
    Shift,
    /// Dispersive and white-light linewidths
    Linewidth,
    /// Numeric transmission spectrum
    Spectrum,
    /// Numeric vs analytic enhancement sweep
    Fig4,
    /// Empty and dispersion-shifted spectra from a quoted shift pair
    Fig5,
    /// Quantum-noise-limited sensitivity
    Sensitivity,
    /// Lens-Thirring detection margin
    LensThirring,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sagnac => "sagnac",
            Command::Split => "split",
            Command::Shift => "shift",
            Command::Linewidth => "linewidth",
            Command::Spectrum => "spectrum",
            Command::Fig4 => "fig4",
            Command::Fig5 => "fig5",
            Command::Sensitivity => "sensitivity",
            Command::LensThirring => "lens-thirring",
        }
    }
}

pub fn run(cmd: Command, s: &Scenario) -> Result<Report> {
    let mut report = Report::new(cmd.name(), s.convention.label(), s.raw.echo());
    match cmd {
        Command::Sagnac => sagnac(s, &mut report)?,
        Command::Split => split(s, &mut report)?,
        Command::Shift => shift(s, &mut report)?,
        Command::Linewidth => linewidth(s, &mut report)?,
        Command::Spectrum => spectrum(s, &mut report)?,
        Command::Fig4 => fig4(s, &mut report)?,
        Command::Fig5 => fig5(s, &mut report)?,
        Command::Sensitivity => sensitivity(s, &mut report)?,
        Command::LensThirring => lens_thirring(s, &mut report)?,
    }
    Ok(report)
}

struct Column {
    name: &'static str,
    unit: &'static str,
    formula: &'static str,
}

const fn col(name: &'static str, unit: &'static str, formula: &'static str) -> Column {
    Column {
        name,
        unit,
        formula,
    }
}

/// A single drive value becomes named results; a sweep becomes a table.
fn emit(report: &mut Report, table: &str, cols: &[Column], rows: Vec<Vec<f64>>) {
    if rows.len() == 1 {
        for (c, v) in cols.iter().zip(&rows[0]) {
            report.push(c.name, *v, c.unit, c.formula);
        }
    } else {
        let mut formulas: Vec<&str> = Vec::new();
        for c in cols {
            if !formulas.contains(&c.formula) {
                formulas.push(c.formula);
            }
        }
        let names: Vec<&str> = cols.iter().map(|c| c.name).collect();
        report.table(table, formulas.join("; "), &names, rows);
    }
}

fn missing(msg: &str) -> CliError {
    CliError::Scenario(ScenarioError::Missing(msg.to_string()))
}

/// Per-direction empty-cavity shifts (CCW, rad/s) implied by the drive.
fn empty_shifts(s: &Scenario, cavity: &RingCavity) -> Result<Vec<f64>> {
    let d = s.require_drive()?;
    Ok(d.values
        .iter()
        .map(|&v| match d.kind {
            DriveKind::Rotation => cavity.shift_per_rotation() * v,
            DriveKind::DeltaLength => empty_shift_from_length(cavity, v),
            DriveKind::EmptyShift => hz_to_rad_s(v),
        })
        .collect())
}

fn rotations(s: &Scenario, cavity: &RingCavity) -> Result<Vec<f64>> {
    let d = s.require_drive()?;
    Ok(d.values
        .iter()
        .map(|&v| match d.kind {
            DriveKind::Rotation => v,
            DriveKind::DeltaLength => length_to_rotation(cavity, v),
            DriveKind::EmptyShift => hz_to_rad_s(v) / cavity.shift_per_rotation(),
        })
        .collect())
}

fn single_empty_shift(s: &Scenario, cavity: &RingCavity) -> Result<f64> {
    match &s.drive {
        None => Ok(0.0),
        Some(d) if d.is_sweep => Err(missing(
            "this subcommand takes a single drive value, not a sweep",
        )),
        Some(_) => Ok(empty_shifts(s, cavity)?[0]),
    }
}

/// Analytic dispersive shift used to center the numeric search.
fn expected_shift(cavity: &RingCavity, profile: &DispersionProfile, dw_ec: f64) -> f64 {
    cavity
        .effective_model(profile)
        .and_then(|m| shift_cubic(dw_ec, &m))
        .map(|c| c.shift)
        .unwrap_or(dw_ec)
}

fn sagnac(s: &Scenario, r: &mut Report) -> Result<()> {
    let g = s.require_geometry()?;
    let w = s.require_omega0()?;
    let d = s.require_drive()?;
    if d.kind != DriveKind::Rotation {
        return Err(missing("sagnac needs rotation_rad_s"));
    }
    let profile = s.profile_at(w)?;
    let idx = profile.derivatives(w)?;
    let n = idx.n;
    let ng = n + w * idx.d1;
    r.push("phase_index", n, "", "refractive_index");
    r.push("group_index", ng, "", "group_index");
    r.push("fresnel_drag", fresnel_drag(n)?, "", "fresnel_drag");
    r.push("laub_drag", laub_drag(n, ng)?, "", "laub_drag");

    let mut cols = vec![
        col("omega_rot_rad_s", "rad/s", "input"),
        col("delta_t_s", "s", "vacuum_sagnac exact"),
        col("delta_t_first_order_s", "s", "vacuum_sagnac first_order"),
        col("delta_phi_rad", "rad", "vacuum_sagnac exact"),
        col(
            "delta_phi_first_order_rad",
            "rad",
            "vacuum_sagnac first_order",
        ),
        col("comoving_phase_rad", "rad", "comoving_phase fresnel_drag"),
        col(
            "relative_phase_rad",
            "rad",
            "relative_rotation_phase laub_drag",
        ),
        col(
            "relative_over_vacuum",
            "",
            "relative_rotation_phase laub_drag",
        ),
    ];
    if s.particle_mass.is_some() {
        cols.push(col("matter_wave_phase_rad", "rad", "matter_wave_phase"));
    }
    let mut rows = Vec::new();
    for &omega in &d.values {
        let rot = RotationState::new(omega, &g)?;
        let v = vacuum_sagnac(&g, &rot, w);
        let rel = relative_rotation_phase(&profile, &g, &rot, w)?;
        let mut row = vec![
            omega,
            v.delta_t,
            v.delta_t_first_order,
            v.delta_phi,
            v.delta_phi_first_order,
            comoving_phase(n, &g, &rot, w)?,
            rel,
            rel / v.delta_phi,
        ];
        if let Some(m) = s.particle_mass {
            row.push(matter_wave_phase(m, &g, &rot)?);
        }
        rows.push(row);
    }
    emit(r, "sagnac", &cols, rows);
    Ok(())
}

fn split(s: &Scenario, r: &mut Report) -> Result<()> {
    let c = s.cavity()?;
    r.push(
        "shift_per_rotation",
        c.shift_per_rotation(),
        "rad/s per rad/s",
        "splitting_no_dispersion",
    );
    let cols = [
        col("omega_rot_rad_s", "rad/s", "input"),
        col("dw_plus_rad_s", "rad/s", "splitting_no_dispersion"),
        col("dw_minus_rad_s", "rad/s", "splitting_no_dispersion"),
        col("splitting_rad_s", "rad/s", "splitting_no_dispersion"),
        col("delta_length_equivalent_m", "m", "rotation_to_length"),
    ];
    let rows = rotations(s, &c)?
        .into_iter()
        .map(|omega| {
            let x = splitting_no_dispersion(&c, omega);
            vec![
                omega,
                x.dw_plus,
                x.dw_minus,
                x.splitting,
                rotation_to_length(&c, omega),
            ]
        })
        .collect();
    emit(r, "split", &cols, rows);
    Ok(())
}

fn eta_or_inf(gamma: f64, dw_ec: f64, conv: EtaConvention) -> Result<f64> {
    if dw_ec == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(enhancement_eta(gamma, dw_ec.abs(), conv)?)
}

fn shift(s: &Scenario, r: &mut Report) -> Result<()> {
    let c = s.cavity()?;
    let p = s.profile_at(c.omega0)?;
    let model = c.effective_model(&p)?;
    r.push(
        "group_index_effective",
        model.group_index(),
        "",
        "effective_model",
    );
    r.push(
        "cubic_strength",
        model.cubic_strength(),
        "s^2/rad^2",
        "effective_model",
    );
    r.push("feedback_gain", feedback_gain(&model), "", "feedback_gain");
    let gamma = s.half_width();
    let mut cols = vec![
        col("omega_rot_rad_s", "rad/s", "input"),
        col("dw_ec_rad_s", "rad/s", "splitting_no_dispersion"),
        col("dw_plus_rad_s", "rad/s", "rotation_response shift_cubic"),
        col("dw_minus_rad_s", "rad/s", "rotation_response shift_cubic"),
        col("splitting_rad_s", "rad/s", "rotation_response shift_cubic"),
        col("enhancement", "", "rotation_response shift_cubic"),
        col("local_group_index", "", "rotation_response shift_cubic"),
        col("gamma_dis_rad_s", "rad/s", "shifted_linewidth"),
        col(
            "index_correction_plus",
            "",
            "rotation_response index_correction",
        ),
        col(
            "index_correction_minus",
            "",
            "rotation_response index_correction",
        ),
        col("multivalued", "", "shift_cubic branch_flag"),
    ];
    if gamma.is_some() {
        cols.push(col("eta_analytic", "", "enhancement_eta"));
    }
    let mut rows = Vec::new();
    for omega in rotations(s, &c)? {
        let x = rotation_response(&c, &p, omega)?;
        let dw_ec = c.shift_per_rotation() * omega;
        let mut row = vec![
            omega,
            dw_ec,
            x.dw_plus,
            x.dw_minus,
            x.splitting,
            x.enhancement,
            x.local_ng,
            x.gamma_dis,
            x.index_correction_plus,
            x.index_correction_minus,
            if x.multivalued { 1.0 } else { 0.0 },
        ];
        if let Some(g) = gamma {
            row.push(eta_or_inf(g, dw_ec, s.convention)?);
        }
        rows.push(row);
    }
    emit(r, "shift", &cols, rows);
    Ok(())
}

fn linewidth(s: &Scenario, r: &mut Report) -> Result<()> {
    let c = s.cavity()?;
    let p = s.profile_at(c.omega0)?;
    let model = c.effective_model(&p)?;
    let g_ec = c.empty_linewidth();
    let ng = model.group_index();
    r.push("gamma_ec_rad_s", g_ec, "rad/s", "empty_linewidth");
    r.push("group_index_effective", ng, "", "effective_model");
    if ng != 0.0 {
        r.push(
            "gamma_linear_rad_s",
            linewidth_linear(g_ec, ng)?,
            "rad/s",
            "linewidth_linear",
        );
    }
    r.push(
        "gamma_cubic_rad_s",
        linewidth_cubic(g_ec, &model)?,
        "rad/s",
        "linewidth_cubic",
    );
    r.push(
        "gamma_cubic_half_max_rad_s",
        linewidth_cubic_half_max(g_ec, &model)?,
        "rad/s",
        "linewidth_cubic_half_max",
    );
    let res = locate_adaptive(&p, &c, 0.0, 0.0, s.spectrum_points)?;
    r.push(
        "gamma_numeric_rad_s",
        measure_fwhm(&p, &c, 0.0, &res)?,
        "rad/s",
        "measure_fwhm airy_transmission",
    );

    if s.drive.is_some() {
        let cols = [
            col("dw_ec_rad_s", "rad/s", "input"),
            col("dw_dis_rad_s", "rad/s", "shift_cubic"),
            col("local_group_index", "", "shifted_linewidth"),
            col("gamma_shifted_rad_s", "rad/s", "shifted_linewidth"),
            col(
                "gamma_eta_over_three_rad_s",
                "rad/s",
                "shifted_linewidth eta_over_three",
            ),
            col(
                "gamma_shifted_numeric_rad_s",
                "rad/s",
                "measure_fwhm airy_transmission",
            ),
        ];
        let mut rows = Vec::new();
        for dw_ec in empty_shifts(s, &c)? {
            let x = shift_cubic(dw_ec, &model)?.shift;
            let sl = shifted_linewidth(g_ec, &model, x)?;
            let dl = length_from_empty_shift(&c, dw_ec);
            let res = locate_adaptive(&p, &c, dl, x, s.spectrum_points)?;
            let numeric = measure_fwhm(&p, &c, dl, &res)?;
            rows.push(vec![
                dw_ec,
                x,
                sl.local_ng,
                sl.exact,
                sl.eta_over_three,
                numeric,
            ]);
        }
        emit(r, "shifted_linewidth", &cols, rows);
    }
    Ok(())
}

fn trace_table(
    r: &mut Report,
    name: &str,
    profile: &DispersionProfile,
    c: &RingCavity,
    dl: f64,
    grid: &SweepGrid,
) -> Result<(f64, f64)> {
    let t = trace(profile, c, dl, grid)?;
    let rows = t
        .detunings
        .iter()
        .zip(&t.transmission)
        .map(|(&d, &tr)| vec![t.omega0 + d, d, tr])
        .collect();
    r.table(
        name,
        "round_trip_dephasing airy_transmission",
        &["omega_rad_s", "detuning_rad_s", "transmission"],
        rows,
    );
    Ok((t.resonance.detuning, t.fwhm))
}

fn spectrum(s: &Scenario, r: &mut Report) -> Result<()> {
    let c = s.cavity()?;
    let p = s.profile_at(c.omega0)?;
    let dw_ec = single_empty_shift(s, &c)?;
    let dl = length_from_empty_shift(&c, dw_ec);
    let expected = expected_shift(&c, &p, dw_ec);
    let res = locate_adaptive(&p, &c, dl, expected, s.spectrum_points)?;
    let fwhm = measure_fwhm(&p, &c, dl, &res)?;
    let half = s.spectrum_half_span.unwrap_or(5.0 * fwhm);
    let grid = SweepGrid::new(res.detuning, half, s.spectrum_points)?;
    r.push("dw_ec_rad_s", dw_ec, "rad/s", "empty_shift_from_length");
    r.push("delta_length_m", dl, "m", "length_from_empty_shift");
    r.push("dw_dis_analytic_rad_s", expected, "rad/s", "shift_cubic");
    r.push(
        "resonance_detuning_rad_s",
        res.detuning,
        "rad/s",
        "find_resonance",
    );
    r.push(
        "resonance_omega_rad_s",
        res.omega(),
        "rad/s",
        "find_resonance",
    );
    r.push("fwhm_rad_s", fwhm, "rad/s", "measure_fwhm");
    trace_table(r, "trace", &p, &c, dl, &grid)?;
    Ok(())
}

fn fig4(s: &Scenario, r: &mut Report) -> Result<()> {
    let c = s.cavity()?;
    let p = s.profile_at(c.omega0)?;
    let gamma = s
        .half_width()
        .ok_or_else(|| missing("fig4 needs medium = cad or lorentzian"))?;
    let list: Vec<f64> = s.fig4_ratios.iter().map(|x| x * gamma).collect();
    let pts = sweep_enhancement(&p, &c, &list, s.spectrum_points)?;
    let (lo, hi) = list
        .iter()
        .fold((f64::INFINITY, 0f64), |(a, b), &x| (a.min(x), b.max(x)));
    r.push("gamma_rad_s", gamma, "rad/s", "medium half_width");
    r.push("decades_spanned", (hi / lo).log10(), "", "input");
    let rows = pts
        .iter()
        .map(|q| {
            vec![
                q.dw_ec,
                q.dw_dis_numeric,
                q.dw_dis_cubic,
                q.eta_numeric,
                q.eta_derived,
                q.eta_paper,
            ]
        })
        .collect();
    r.table(
        "fig4",
        "sweep_enhancement find_resonance; shift_cubic; enhancement_eta",
        &[
            "dw_ec",
            "dw_dis_numeric",
            "dw_dis_cubic",
            "eta_numeric",
            "eta_analytic_derived",
            "eta_analytic_paper",
        ],
        rows,
    );
    Ok(())
}

fn fig5(s: &Scenario, r: &mut Report) -> Result<()> {
    let c = s.cavity()?;
    let dw_ec = hz_to_rad_s(s.fig5_empty_shift_hz);
    let eta = s.fig5_enhanced_shift_hz / s.fig5_empty_shift_hz;
    let gamma_derived = dw_ec * eta.powf(1.5);
    let gamma_paper = gamma_derived / 2.0;
    let target = partial_fill_cad_target(c.fill_fraction)?;
    let dl = length_from_empty_shift(&c, dw_ec);
    r.push("eta_quoted", eta, "", "input ratio");
    r.push(
        "gamma_derived_rad_s",
        gamma_derived,
        "rad/s",
        "enhancement_eta inverse derived",
    );
    r.push(
        "gamma_paper_rad_s",
        gamma_paper,
        "rad/s",
        "enhancement_eta inverse paper",
    );

    let numeric = |gamma: f64| -> Result<(DispersionProfile, f64)> {
        let p = DispersionProfile::cad(gamma, c.omega0, target)?;
        let res = locate_adaptive(&p, &c, dl, expected_shift(&c, &p, dw_ec), s.spectrum_points)?;
        Ok((p, res.detuning))
    };
    let (p_derived, shift_derived) = numeric(gamma_derived)?;
    let (p_paper, shift_paper) = numeric(gamma_paper)?;
    r.push(
        "enhanced_shift_gamma_derived_hz",
        rad_s_to_hz(shift_derived),
        "Hz",
        "find_resonance derived",
    );
    r.push(
        "enhanced_shift_gamma_paper_hz",
        rad_s_to_hz(shift_paper),
        "Hz",
        "find_resonance paper",
    );

    let profile = match s.convention {
        EtaConvention::Derived => p_derived,
        EtaConvention::FullWidth => p_paper,
    };
    let vac = DispersionProfile::vacuum();
    let empty = locate_adaptive(&vac, &c, dl, dw_ec, s.spectrum_points)?;
    let disp = match s.convention {
        EtaConvention::Derived => shift_derived,
        EtaConvention::FullWidth => shift_paper,
    };
    let w_empty = measure_fwhm(&vac, &c, dl, &empty)?;
    let res_disp = locate_adaptive(&profile, &c, dl, disp, s.spectrum_points)?;
    let w_disp = measure_fwhm(&profile, &c, dl, &res_disp)?;
    let half = s
        .spectrum_half_span
        .unwrap_or(0.5 * (disp - empty.detuning).abs() + 5.0 * w_empty.max(w_disp));
    let grid = SweepGrid::new(0.5 * (disp + empty.detuning), half, s.spectrum_points)?;
    let (e, _) = trace_table(r, "trace_empty", &vac, &c, dl, &grid)?;
    let (d, _) = trace_table(r, "trace_dispersive", &profile, &c, dl, &grid)?;
    r.push(
        "empty_shift_numeric_hz",
        rad_s_to_hz(e),
        "Hz",
        "find_resonance vacuum",
    );
    r.push(
        "enhanced_shift_numeric_hz",
        rad_s_to_hz(d),
        "Hz",
        "find_resonance cad",
    );
    r.push("enhancement_numeric", d / e, "", "find_resonance ratio");
    Ok(())
}

fn push_estimate(r: &mut Report, e: &RotationEstimate) {
    let m = e.mode.label();
    r.push(
        format!("min_rotation_{m}_rad_s"),
        e.omega_min,
        "rad/s",
        "min_rotation",
    );
    r.push(
        format!("min_rotation_{m}_earth_rate"),
        e.in_earth_rates(),
        "earth rates",
        "min_rotation",
    );
    for (k, v) in &e.trail {
        r.push(format!("trail_{m}_{k}"), *v, "", "min_rotation trail");
    }
}

fn rotation_estimates(s: &Scenario, r: &mut Report) -> Result<Vec<RotationEstimate>> {
    let c = s.cavity()?;
    let b = s.require_noise()?;
    let gamma = s.half_width();
    let mut modes = vec![RotationMode::PassiveEmpty, RotationMode::RlgEmpty];
    if gamma.is_some() {
        modes.push(RotationMode::RlgDispersive);
    }
    r.push(
        "readout_splitting",
        f64::from(u8::from(
            s.readout == fastlight_core::sensitivity::Readout::Splitting,
        )),
        "",
        s.readout.label(),
    );
    modes
        .into_iter()
        .map(|m| Ok(min_rotation(&c, &b, m, gamma, s.convention, s.readout)?))
        .collect()
}

fn sensitivity(s: &Scenario, r: &mut Report) -> Result<()> {
    let c = s.cavity()?;
    let b = s.require_noise()?;
    let w0 = c.omega0;
    let dw_laser = laser_linewidth(&c, &b, w0)?;
    let passive = min_shift_passive(&c, &b)?;
    r.push("photons", b.detected_photons(w0), "", "detected_photons");
    r.push("snr", b.snr(w0), "", "snr");
    r.push(
        "gamma_ec_rad_s",
        c.empty_linewidth(),
        "rad/s",
        "empty_linewidth",
    );
    r.push(
        "photon_lifetime_s",
        c.photon_lifetime(),
        "s",
        "photon_lifetime",
    );
    r.push(
        "laser_linewidth_rad_s",
        dw_laser,
        "rad/s",
        "laser_linewidth",
    );
    r.push(
        "min_shift_passive_rad_s",
        passive,
        "rad/s",
        "min_shift_passive",
    );
    r.push(
        "min_length_empty_m",
        min_length(passive, &c),
        "m",
        "min_length",
    );
    if let Some(g) = s.half_width() {
        let eta = enhancement_eta(g, dw_laser, s.convention)?;
        let d = min_length_passive_dispersive(&c, &b, eta)?;
        r.push("eta_at_laser_linewidth", eta, "", "enhancement_eta");
        r.push(
            "min_shift_passive_dispersive_rad_s",
            d.dw_dis_min,
            "rad/s",
            "min_length_passive_dispersive",
        );
        r.push(
            "min_length_passive_dispersive_m",
            d.value,
            "m",
            "min_length_passive_dispersive",
        );
    }
    for e in rotation_estimates(s, r)? {
        push_estimate(r, &e);
    }
    Ok(())
}

fn lens_thirring(s: &Scenario, r: &mut Report) -> Result<()> {
    r.push(
        "lens_thirring_rate_rad_s",
        LENS_THIRRING_FRACTION * EARTH_ROTATION,
        "rad/s",
        "lens_thirring_rate",
    );
    for e in rotation_estimates(s, r)? {
        push_estimate(r, &e);
        r.push(
            format!("lens_thirring_margin_{}", e.mode.label()),
            lens_thirring_margin(e.omega_min)?,
            "",
            "lens_thirring_margin",
        );
    }
    Ok(())
}
