use duality_core::report::duality_report_with_grid;
use duality_core::stokes::stokes_sweep;
use duality_core::{
    detection_rate, detection_rate_polarized, duality_report, estimate_distinguishability,
    estimate_visibility, purity, purity_sweep, relative_phase, simulate_counts, triangle,
    uniform_angles, DualityReport, DEFAULT_STOKES_GRID,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{full, kv_line, sig15, Csv};

/// Default grid for fringe tables and simulated scans.
pub const DEFAULT_FRINGE_ANGLES: usize = 64;

/// What a command produced: an optional CSV table and human-readable text.
#[derive(Debug, Default, PartialEq)]
pub struct CommandOutput {
    pub csv: Option<String>,
    pub summary: String,
    /// CSV goes to stdout when no `--out` is given.
    pub csv_to_stdout: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub angles: Option<usize>,
    pub seed: Option<u64>,
}

fn compute<T>(r: duality_core::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::from_compute)
}

fn report_row(csv: &mut Csv, r: &DualityReport) {
    csv.row([
        r.mode.as_str().to_string(),
        full(r.visibility),
        full(r.distinguishability),
        full(r.purity),
        full(r.residual),
    ]);
}

fn report_line(r: &DualityReport) -> String {
    let v_key = match r.mode {
        duality_core::ReportMode::Scalar => "V",
        duality_core::ReportMode::Polarized => "V_P",
    };
    kv_line(
        &format!("{}:", r.mode.as_str()),
        &[
            (v_key, full(r.visibility)),
            ("D", full(r.distinguishability)),
            ("mu", full(r.purity)),
            ("residual", full(r.residual)),
        ],
    )
}

pub fn report(cfg: &RunConfig, _: Overrides) -> Result<CommandOutput, CliError> {
    let s = &cfg.source;
    let mut summary = kv_line(
        "source:",
        &[
            ("p_a", full(s.p_a())),
            ("p_b", full(s.p_b())),
            ("|gamma|", full(s.gamma().norm())),
            ("phi", full(s.phase())),
        ],
    );
    let mut csv = Csv::new(&["mode", "V", "D", "mu", "residual"]);

    let scalar = compute(duality_report(s, None))?;
    summary.push_str(&report_line(&scalar));
    report_row(&mut csv, &scalar);

    if let Some(modes) = &cfg.modes {
        let eta = modes.overlap();
        summary.push_str(&kv_line(
            "modes:",
            &[("|eta|", full(eta.norm())), ("Delta", full(eta.arg()))],
        ));
        let polarized = compute(duality_report_with_grid(
            s,
            Some(modes),
            DEFAULT_STOKES_GRID,
        ))?;
        summary.push_str(&report_line(&polarized));
        report_row(&mut csv, &polarized);
    }

    let t = compute(triangle(&scalar))?;
    summary.push_str(&kv_line(
        "triangle:",
        &[
            ("hypotenuse", full(t.hypotenuse)),
            ("leg_V", full(t.leg_v)),
            ("leg_D", full(t.leg_d)),
            ("apex_x", full(t.apex[0])),
            ("apex_y", full(t.apex[1])),
        ],
    ));

    if let Some(g) = &cfg.geometry {
        let theta = relative_phase(g);
        let rate = match &cfg.modes {
            Some(m) => detection_rate_polarized(s, m, theta),
            None => detection_rate(s, theta),
        };
        summary.push_str(&kv_line(
            "detector:",
            &[("theta", full(theta)), ("rate", full(rate))],
        ));
    }

    Ok(CommandOutput {
        csv: Some(csv.finish()),
        summary,
        csv_to_stdout: false,
    })
}

fn angle_grid(cfg: &RunConfig, requested: Option<usize>, default: usize) -> Vec<f64> {
    match (&cfg.scan, requested) {
        (Some(theta), None) => theta.clone(),
        (_, n) => uniform_angles(n.unwrap_or(default)),
    }
}

pub fn fringes(cfg: &RunConfig, o: Overrides) -> Result<CommandOutput, CliError> {
    let angles = angle_grid(cfg, o.angles, DEFAULT_FRINGE_ANGLES);
    let mut csv = Csv::new(&["theta", "rate"]);
    for t in angles {
        let rate = match &cfg.modes {
            Some(m) => detection_rate_polarized(&cfg.source, m, t),
            None => detection_rate(&cfg.source, t),
        };
        csv.row([sig15(t), sig15(rate)]);
    }
    Ok(CommandOutput {
        csv: Some(csv.finish()),
        summary: String::new(),
        csv_to_stdout: true,
    })
}

pub fn montecarlo(cfg: &RunConfig, o: Overrides) -> Result<CommandOutput, CliError> {
    let sim = cfg
        .simulation
        .as_ref()
        .ok_or_else(|| CliError::Usage("montecarlo needs a [simulation] section".into()))?;
    let seed = o.seed.or(sim.seed).ok_or_else(|| {
        CliError::Usage("montecarlo needs a seed ([simulation] seed or --seed)".into())
    })?;
    let angles = angle_grid(cfg, o.angles.or(sim.angles), DEFAULT_FRINGE_ANGLES);

    let data = compute(simulate_counts(
        &cfg.source,
        cfg.modes.as_ref(),
        &angles,
        sim.mean_total,
        seed,
    ))?;
    let v = compute(estimate_visibility(&data))?;
    let d = compute(estimate_distinguishability(&data))?;
    let mu = purity(&cfg.source);
    let residual = v.estimate * v.estimate + d.estimate * d.estimate - mu * mu;
    let residual_err = (2.0 * v.estimate * v.stderr).hypot(2.0 * d.estimate * d.stderr);

    let mut csv = Csv::new(&["theta", "counts"]);
    for (t, n) in data.angles.iter().zip(&data.counts) {
        csv.row([full(*t), n.to_string()]);
    }
    let mut summary = String::new();
    summary.push_str(&format!("V_hat,{},{}\n", full(v.estimate), full(v.stderr)));
    summary.push_str(&format!("D_hat,{},{}\n", full(d.estimate), full(d.stderr)));
    summary.push_str(&format!(
        "residual_hat,{},{}\n",
        full(residual),
        full(residual_err)
    ));
    Ok(CommandOutput {
        csv: Some(csv.finish()),
        summary,
        csv_to_stdout: true,
    })
}

pub fn stokes(cfg: &RunConfig, o: Overrides) -> Result<CommandOutput, CliError> {
    let modes = cfg
        .modes
        .as_ref()
        .ok_or_else(|| CliError::Usage("stokes needs a [modes] section".into()))?;
    let n = o.angles.unwrap_or(DEFAULT_STOKES_GRID);
    let v = compute(duality_core::polarization_visibilities(
        &cfg.source,
        modes,
        n,
    ))?;

    let mut csv = Csv::new(&["theta", "S0", "S1", "S2", "S3"]);
    for (t, s) in stokes_sweep(&cfg.source, modes, n) {
        csv.row([full(t), full(s.s0), full(s.s1), full(s.s2), full(s.s3)]);
    }
    let mut summary = Csv::new(&["V0", "V1", "V2", "V3", "VP"]);
    summary.row([
        full(v.v0),
        full(v.v1),
        full(v.v2),
        full(v.v3),
        full(v.v_total),
    ]);
    Ok(CommandOutput {
        csv: Some(csv.finish()),
        summary: summary.finish(),
        csv_to_stdout: true,
    })
}

pub fn sweep(cfg: &RunConfig, _: Overrides) -> Result<CommandOutput, CliError> {
    let sw = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Usage("sweep needs a [sweep] section".into()))?;
    let reports = compute(purity_sweep(sw.p_a, &sw.mixing, cfg.modes.as_ref()))?;
    let mut csv = Csv::new(&["mixing", "V", "D", "mu", "residual"]);
    for (m, r) in sw.mixing.iter().zip(&reports) {
        csv.row([
            full(*m),
            full(r.visibility),
            full(r.distinguishability),
            full(r.purity),
            full(r.residual),
        ]);
    }
    Ok(CommandOutput {
        csv: Some(csv.finish()),
        summary: String::new(),
        csv_to_stdout: true,
    })
}
