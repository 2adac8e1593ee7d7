//! Execute a [`RunManifest`] and render the result as a table or CSV.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::config::{Command, ConfigError, OutputFormat, RunManifest};
use crate::eprb::{self, bell_q, run_eprb, EprbConfig, EprbExperiment, BELL_ANGLES_DEG};
use crate::error::SimError;
use crate::ghzm::{self, GammaPreset, GhzmConfig, GhzmExperiment};
use crate::labels::{support, SupportSet};
use crate::lhv;
use crate::measurement::{BetaPreset, Direction};
use crate::picture::cross_check;
use crate::tensor::{Operator, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

/// Values smaller than this are printed as `0`.
pub const PRINT_ZERO: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Twelve significant digits, shortest form, tiny values snapped to 0.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < PRINT_ZERO {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("float formatting round-trips");
    rounded.to_string()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Command,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<String>,
    /// Largest Heisenberg/Schrödinger discrepancy, when verification ran.
    pub max_residual: Option<f64>,
}

impl Report {
    fn new(command: Command, columns: &[&str]) -> Self {
        Self {
            command,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            max_residual: None,
        }
    }

    fn note_residual(&mut self, r: Option<f64>) {
        if let Some(r) = r {
            self.max_residual = Some(self.max_residual.map_or(r, |m| m.max(r)));
        }
    }

    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::render).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                cells
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([c.chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |out: &mut String, items: &[String]| {
            let parts: Vec<String> = items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&mut out, &self.columns);
        line(
            &mut out,
            &widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>(),
        );
        for r in &cells {
            line(&mut out, r);
        }
        if !self.summary.is_empty() {
            out.push('\n');
            for s in &self.summary {
                out.push_str(s);
                out.push('\n');
            }
        }
        out
    }

    pub fn to_csv(&self, manifest: &RunManifest) -> String {
        let mut out = String::new();
        writeln!(out, "# everett-sim {}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(out, "# command: {}", self.command).unwrap();
        let params: Vec<String> = manifest
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(
            out,
            "# parameters: {}",
            if params.is_empty() {
                "(defaults)".to_string()
            } else {
                params.join("; ")
            }
        )
        .unwrap();
        if manifest.verify {
            writeln!(out, "# verify: tol={:e}", tolerance(manifest)).unwrap();
        }
        for s in &self.summary {
            writeln!(out, "# {s}").unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|c| csv_field(&c.render())).collect();
            writeln!(out, "{}", line.join(",")).unwrap();
        }
        out
    }

    pub fn render(&self, manifest: &RunManifest) -> String {
        match manifest.output_format {
            OutputFormat::Table => self.to_table(),
            OutputFormat::Csv => self.to_csv(manifest),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn tolerance(m: &RunManifest) -> f64 {
    m.tol.unwrap_or(DEFAULT_TOL)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run a manifest end to end. Exit code 1 means bad input or a failed
/// computation, 2 means verification found a discrepancy above `tol`.
pub fn run(manifest: &RunManifest) -> RunOutput {
    match execute(manifest) {
        Err(e) => RunOutput {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
        Ok(report) => finish(&report, manifest),
    }
}

/// Render `report` and decide the exit code.
pub fn finish(report: &Report, manifest: &RunManifest) -> RunOutput {
    let stdout = report.render(manifest);
    let tol = tolerance(manifest);
    match report.max_residual {
        Some(r) if manifest.verify && (r > tol || r.is_nan()) => RunOutput {
            code: EXIT_VERIFY,
            stdout,
            stderr: format!(
                "verification failed: Heisenberg and Schrödinger expectations differ by {r:e} (tol {tol:e})\n"
            ),
        },
        _ => RunOutput {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
    }
}

pub fn execute(m: &RunManifest) -> Result<Report, RunError> {
    match m.command {
        Command::Eprb => run_eprb_command(m),
        Command::BellQ => run_bell_q(m),
        Command::Ghzm => run_ghzm_command(m),
        Command::GhzTable => run_ghz_table(m),
        Command::Lhv => run_lhv(m),
        Command::Analyze => run_analyze(m),
        Command::Sweep => run_sweep(m),
    }
}

fn beta_text(beta: [f64; 3]) -> String {
    if beta == BetaPreset::Spin.values() {
        return "spin".into();
    }
    if beta == BetaPreset::Probability.values() {
        return "probability".into();
    }
    triple_text(beta)
}

fn gamma_text(gamma: [f64; 3]) -> String {
    if gamma == GammaPreset::Even.values() {
        return "even".into();
    }
    if gamma == GammaPreset::Odd.values() {
        return "odd".into();
    }
    triple_text(gamma)
}

fn triple_text(v: [f64; 3]) -> String {
    v.map(format_number).join(" ")
}

const EPRB_COLUMNS: [&str; 12] = [
    "theta1_deg",
    "phi1_deg",
    "theta2_deg",
    "phi2_deg",
    "entangled",
    "beta",
    "mean_B1",
    "mean_B2",
    "mean_B1B2",
    "closed_form_B1B2",
    "p_uu",
    "residual",
];

fn max_cross_check(ops: &[Operator], exp_seq: &crate::InteractionSequence, init: &crate::StateVector) -> Result<f64, SimError> {
    ops.iter()
        .map(|op| cross_check(op, exp_seq, init))
        .try_fold(0.0_f64, |acc, r| Ok(acc.max(r?)))
}

/// One EPRB row: angles in degrees, then results.
fn eprb_row(angles: [f64; 4], entangled: bool, beta: [f64; 3], verify: bool) -> Result<(Vec<Cell>, Option<f64>), SimError> {
    let cfg = EprbConfig::new(
        Direction::from_degrees(angles[0], angles[1]),
        Direction::from_degrees(angles[2], angles[3]),
        entangled,
    )
    .with_beta(beta);
    let report = run_eprb(&cfg)?;
    let closed = if entangled {
        eprb::closed_form::entangled_correlation(&cfg)
    } else {
        let (a, b) = eprb::closed_form::unentangled_means(&cfg);
        a * b
    };
    let residual = if verify {
        let exp = EprbExperiment::new(&cfg)?;
        let o = &exp.observables;
        Some(max_cross_check(
            &[o.b1.clone(), o.b2.clone(), o.b1.matmul(&o.b2)?],
            &exp.sequence,
            &exp.initial,
        )?)
    } else {
        None
    };
    let mut row: Vec<Cell> = angles.iter().map(|&a| a.into()).collect();
    row.extend([
        entangled.into(),
        beta_text(beta).into(),
        report.mean_b1.into(),
        report.mean_b2.into(),
        report.mean_b1b2.into(),
        closed.into(),
        report.p_uu.into(),
        residual.map_or(Cell::from("-"), Cell::from),
    ]);
    Ok((row, residual))
}

fn eprb_angles(m: &RunManifest) -> [f64; 4] {
    [
        m.angle_deg("theta1", 90.0),
        m.angle_deg("phi1", 0.0),
        m.angle_deg("theta2", 90.0),
        m.angle_deg("phi2", 0.0),
    ]
}

fn run_eprb_command(m: &RunManifest) -> Result<Report, RunError> {
    let mut report = Report::new(Command::Eprb, &EPRB_COLUMNS);
    let (row, residual) = eprb_row(eprb_angles(m), m.flag("entangled", true), m.beta(), m.verify)?;
    report.note_residual(residual);
    let Cell::Num(c) = row[8] else { unreachable!() };
    report.summary.push(format!("<B1 B2> = {}", format_number(c)));
    report.rows.push(row);
    Ok(report)
}

fn run_bell_q(m: &RunManifest) -> Result<Report, RunError> {
    let angles = m
        .numbers("angles")
        .map(|v| [v[0], v[1], v[2]])
        .unwrap_or(BELL_ANGLES_DEG);
    let theta = m.angle_deg("theta", 90.0);
    let dirs = angles.map(|phi| Direction::from_degrees(theta, phi));
    let q = bell_q(dirs)?;
    let mut report = Report::new(
        Command::BellQ,
        &["quantity", "phi_a_deg", "phi_b_deg", "theta_deg", "value", "residual"],
    );
    for k in 0..3 {
        let (a, b) = (k, (k + 1) % 3);
        let residual = if m.verify {
            let cfg = EprbConfig::new(dirs[a], dirs[b], true).with_preset(BetaPreset::Probability);
            let exp = EprbExperiment::new(&cfg)?;
            let o = &exp.observables;
            Some(cross_check(&o.b1.matmul(&o.b2)?, &exp.sequence, &exp.initial)?)
        } else {
            None
        };
        report.note_residual(residual);
        report.rows.push(vec![
            format!("P_uu({},{})", format_number(angles[a]), format_number(angles[b])).into(),
            angles[a].into(),
            angles[b].into(),
            theta.into(),
            q.addends[k].into(),
            residual.map_or(Cell::from("-"), Cell::from),
        ]);
    }
    report
        .rows
        .push(vec!["Q".into(), "-".into(), "-".into(), theta.into(), q.q.into(), "-".into()]);
    report.summary.push(format!("Q = {}", format_number(q.q)));
    report
        .summary
        .push("instruction-set bound: Q <= 1".to_string());
    Ok(report)
}

const GHZM_COLUMNS: [&str; 12] = [
    "theta1_deg",
    "phi1_deg",
    "theta2_deg",
    "phi2_deg",
    "theta3_deg",
    "phi3_deg",
    "entangled",
    "gamma",
    "expectation_G",
    "closed_form_G",
    "p_even",
    "residual",
];

/// `angles` is `[θ1, φ1, θ2, φ2, θ3, φ3]` in degrees.
fn ghzm_row(angles: [f64; 6], entangled: bool, gamma: [f64; 3], verify: bool) -> Result<(Vec<Cell>, Option<f64>), SimError> {
    let n = [0, 1, 2].map(|p| Direction::from_degrees(angles[2 * p], angles[2 * p + 1]));
    let cfg = GhzmConfig::new(n, entangled).with_gamma(gamma);
    let exp = GhzmExperiment::new(&cfg)?;
    let g_t3 = exp.g_t3()?;
    let value = crate::tensor::expectation_real(&exp.initial, &g_t3)?;
    let p_even = if entangled {
        ghzm::closed_form::entangled_p_even(&n)
    } else {
        ghzm::closed_form::unentangled_p_even(&n)
    };
    let closed = gamma[1] * (1.0 - p_even) + gamma[2] * p_even;
    let residual = if verify {
        Some(cross_check(&exp.g, &exp.sequence, &exp.initial)?)
    } else {
        None
    };
    let mut row: Vec<Cell> = angles.iter().map(|&a| a.into()).collect();
    row.extend([
        entangled.into(),
        gamma_text(gamma).into(),
        value.into(),
        closed.into(),
        p_even.into(),
        residual.map_or(Cell::from("-"), Cell::from),
    ]);
    Ok((row, residual))
}

fn ghzm_angles(m: &RunManifest) -> [f64; 6] {
    [
        m.angle_deg("theta1", 90.0),
        m.angle_deg("phi1", 0.0),
        m.angle_deg("theta2", 90.0),
        m.angle_deg("phi2", 0.0),
        m.angle_deg("theta3", 90.0),
        m.angle_deg("phi3", 0.0),
    ]
}

fn run_ghzm_command(m: &RunManifest) -> Result<Report, RunError> {
    let mut report = Report::new(Command::Ghzm, &GHZM_COLUMNS);
    let gamma = m.gamma();
    let (row, residual) = ghzm_row(ghzm_angles(m), m.flag("entangled", true), gamma, m.verify)?;
    report.note_residual(residual);
    let Cell::Num(v) = row[8] else { unreachable!() };
    let name = if gamma == GammaPreset::Even.values() {
        "P_eu"
    } else if gamma == GammaPreset::Odd.values() {
        "P_ou"
    } else {
        "<G>"
    };
    report.summary.push(format!("{name} = {}", format_number(v)));
    report.rows.push(row);
    Ok(report)
}

/// The four Mermin setting triples, as indices into the 0°/90° settings.
const GHZ_TABLE_SETTINGS: [[usize; 3]; 4] = [[0, 1, 1], [1, 0, 1], [1, 1, 0], [0, 0, 0]];

fn run_ghz_table(m: &RunManifest) -> Result<Report, RunError> {
    let verdict = lhv::ghz_constrained_sets();
    let rows: Vec<_> = GHZ_TABLE_SETTINGS
        .par_iter()
        .map(|&settings| -> Result<_, SimError> {
            let phis = settings.map(|s| lhv::GHZ_SETTINGS_DEG[s]);
            let ent = GhzmExperiment::new(&GhzmConfig::transverse_degrees(phis, true))?;
            let p_ent = ent.expectation()?;
            let p_unent = ghzm::run_ghzm(&GhzmConfig::transverse_degrees(phis, false))?;
            let residual = if m.verify {
                Some(cross_check(&ent.g, &ent.sequence, &ent.initial)?)
            } else {
                None
            };
            let even = verdict
                .survivors
                .iter()
                .filter(|s| s.ups(settings) % 2 == 0)
                .count();
            let classical = even as f64 / verdict.survivors.len() as f64;
            Ok((phis, p_ent, p_unent, classical, residual))
        })
        .collect::<Result<_, _>>()?;
    let mut report = Report::new(
        Command::GhzTable,
        &[
            "phi1_deg",
            "phi2_deg",
            "phi3_deg",
            "p_even_entangled",
            "p_even_unentangled",
            "p_even_instruction_sets",
            "residual",
        ],
    );
    for (phis, p_ent, p_unent, classical, residual) in rows {
        report.note_residual(residual);
        report.rows.push(vec![
            phis[0].into(),
            phis[1].into(),
            phis[2].into(),
            p_ent.into(),
            p_unent.into(),
            classical.into(),
            residual.map_or(Cell::from("-"), Cell::from),
        ]);
    }
    report.summary.push(format!(
        "{} of {} instruction sets satisfy the three odd-parity constraints",
        verdict.survivors.len(),
        verdict.examined
    ));
    Ok(report)
}

fn run_lhv(m: &RunManifest) -> Result<Report, RunError> {
    let which = m.get("which").unwrap_or("all");
    let mut report = Report::new(
        Command::Lhv,
        &["experiment", "quantity", "instruction_sets", "quantum"],
    );
    if which != "ghz" {
        let (q_max, witness) = lhv::eprb_q_max();
        let quantum = bell_q(eprb::transverse_directions(BELL_ANGLES_DEG))?.q;
        report.rows.push(vec![
            "eprb".into(),
            "Q".into(),
            q_max.into(),
            quantum.into(),
        ]);
        let answers: String = (0..3)
            .map(|k| match witness.particle1(k) {
                crate::SpinOutcome::Up => 'u',
                crate::SpinOutcome::Down => 'd',
            })
            .collect();
        report.summary.push(format!(
            "eprb: 8 instruction sets, max Q = {} (particle 1 answers {answers} at 0/120/240)",
            format_number(q_max)
        ));
    }
    if which != "eprb" {
        let verdict = lhv::ghz_constrained_sets();
        let quantum = ghzm::run_ghzm(&GhzmConfig::transverse_degrees([0.0; 3], true))?;
        report.rows.push(vec![
            "ghz".into(),
            "P_eu(0,0,0)".into(),
            verdict.classical_p_even_000().into(),
            quantum.into(),
        ]);
        report.summary.push(format!(
            "ghz: {} instruction sets examined, {} satisfy the constraints, {} at (0,0,0)",
            verdict.examined,
            verdict.survivors.len(),
            if verdict.all_odd_at_000() {
                "all odd"
            } else {
                "not all odd"
            }
        ));
    }
    Ok(report)
}

fn residual_text(s: &SupportSet) -> String {
    s.entries
        .iter()
        .map(|e| format!("{}={}", e.label, format_number(e.residual)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_analyze(m: &RunManifest) -> Result<Report, RunError> {
    let angles = eprb_angles(m);
    let n1 = Direction::from_degrees(angles[0], angles[1]);
    let n2 = Direction::from_degrees(angles[2], angles[3]);
    let mut jobs: Vec<(String, bool, String, String, Operator)> = Vec::new();
    for entangled in [false, true] {
        let exp = EprbExperiment::new(&EprbConfig::new(n1, n2, entangled))?;
        let o = &exp.observables;
        for (name, op) in [("A1", &o.a1), ("A2", &o.a2), ("B1", &o.b1), ("B2", &o.b2)] {
            if !entangled {
                jobs.push(("eprb".into(), entangled, name.into(), "t0".into(), op.clone()));
            }
            jobs.push(("eprb".into(), entangled, name.into(), "t2".into(), exp.evolve(op)?));
        }
    }
    if m.flag("ghzm", true) {
        for entangled in [true, false] {
            let exp = GhzmExperiment::new(&GhzmConfig::transverse_degrees([0.0; 3], entangled))?;
            if entangled {
                jobs.push(("ghzm".into(), entangled, "G".into(), "t0".into(), exp.g.clone()));
            }
            jobs.push(("ghzm".into(), entangled, "G".into(), "t3".into(), exp.g_t3()?));
        }
    }
    let supports: Vec<SupportSet> = jobs.par_iter().map(|j| support(&j.4)).collect();
    let mut report = Report::new(
        Command::Analyze,
        &[
            "experiment",
            "entangled",
            "observable",
            "time",
            "support",
            "max_excluded_residual",
            "residuals",
        ],
    );
    for ((exp, entangled, name, time, _), s) in jobs.into_iter().zip(supports) {
        report.rows.push(vec![
            exp.into(),
            entangled.into(),
            name.into(),
            time.into(),
            s.to_string().into(),
            s.max_excluded_residual().into(),
            residual_text(&s).into(),
        ]);
    }
    Ok(report)
}

fn reject_keys(m: &RunManifest, keys: &[&str], experiment: &str) -> Result<(), ConfigError> {
    for k in keys {
        if m.get(k).is_some() {
            return Err(ConfigError {
                line: None,
                message: format!("key '{k}' does not apply to a {experiment} sweep"),
            });
        }
    }
    Ok(())
}

/// Cartesian product, last axis varying fastest.
fn grid(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect()
    })
}

fn run_sweep(m: &RunManifest) -> Result<Report, RunError> {
    let experiment = m.get("experiment").unwrap_or("eprb");
    let entangled = m.flag("entangled", true);
    let axis = |key: &str, default: f64| m.numbers(key).unwrap_or_else(|| vec![default]);
    let (columns, rows): (&[&str], Vec<_>) = if experiment == "eprb" {
        reject_keys(m, &["theta3", "phi3", "gamma"], "eprb")?;
        let beta = m.beta();
        let points = grid(&[
            axis("theta1", 90.0),
            axis("phi1", 0.0),
            axis("theta2", 90.0),
            axis("phi2", 0.0),
        ]);
        let rows = points
            .par_iter()
            .map(|p| eprb_row([p[0], p[1], p[2], p[3]], entangled, beta, m.verify))
            .collect::<Result<Vec<_>, _>>()?;
        (&EPRB_COLUMNS, rows)
    } else {
        reject_keys(m, &["beta"], "ghzm")?;
        let gamma = m.gamma();
        let points = grid(&[
            axis("theta1", 90.0),
            axis("phi1", 0.0),
            axis("theta2", 90.0),
            axis("phi2", 0.0),
            axis("theta3", 90.0),
            axis("phi3", 0.0),
        ]);
        let rows = points
            .par_iter()
            .map(|p| ghzm_row([p[0], p[1], p[2], p[3], p[4], p[5]], entangled, gamma, m.verify))
            .collect::<Result<Vec<_>, _>>()?;
        (&GHZM_COLUMNS, rows)
    };
    let mut report = Report::new(Command::Sweep, columns);
    for (row, residual) in rows {
        report.note_residual(residual);
        report.rows.push(row);
    }
    report
        .summary
        .push(format!("{experiment} sweep: {} points", report.rows.len()));
    Ok(report)
}
