use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use everett_sim::config::{parse_config, Command, ConfigError, RunManifest};
use everett_sim::run::{run, EXIT_INPUT};

/// Measurement-model experiments: EPRB correlations, the Bell quantity,
/// GHZ parity, instruction-set bounds and support analysis.
#[derive(Debug, Parser)]
#[command(name = "sim", version)]
struct Cli {
    /// eprb, bell-q, ghzm, ghz-table, lhv, analyze or sweep
    command: String,

    /// For `lhv`: eprb, ghz or all
    which: Option<String>,

    /// Config file; command-line flags override its values
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, num_args = 1.., allow_negative_numbers = true, value_name = "DEG")]
    theta1: Option<Vec<String>>,
    #[arg(long, num_args = 1.., allow_negative_numbers = true, value_name = "DEG")]
    phi1: Option<Vec<String>>,
    #[arg(long, num_args = 1.., allow_negative_numbers = true, value_name = "DEG")]
    theta2: Option<Vec<String>>,
    #[arg(long, num_args = 1.., allow_negative_numbers = true, value_name = "DEG")]
    phi2: Option<Vec<String>>,
    #[arg(long, num_args = 1.., allow_negative_numbers = true, value_name = "DEG")]
    theta3: Option<Vec<String>>,
    #[arg(long, num_args = 1.., allow_negative_numbers = true, value_name = "DEG")]
    phi3: Option<Vec<String>>,

    /// Azimuths of all analyzers at once (ghzm: three values; bell-q: the
    /// three settings)
    #[arg(long, num_args = 1..=3, allow_negative_numbers = true, value_name = "DEG")]
    phi: Option<Vec<String>>,

    /// Polar angles of all analyzers (ghzm: three values; bell-q: one)
    #[arg(long, num_args = 1..=3, allow_negative_numbers = true, value_name = "DEG")]
    theta: Option<Vec<String>>,

    #[arg(long, value_name = "BOOL")]
    entangled: Option<String>,

    /// spin or probability
    #[arg(long)]
    beta_preset: Option<String>,

    /// Three distinct observer eigenvalues
    #[arg(long, num_args = 3, allow_negative_numbers = true)]
    beta: Option<Vec<String>>,

    /// even or odd
    #[arg(long)]
    gamma_preset: Option<String>,

    /// Three distinct meta-observer eigenvalues
    #[arg(long, num_args = 3, allow_negative_numbers = true)]
    gamma: Option<Vec<String>>,

    /// For `sweep`: eprb or ghzm
    #[arg(long)]
    experiment: Option<String>,

    /// For `analyze`: include the GHZM observable
    #[arg(long, value_name = "BOOL")]
    ghzm: Option<String>,

    /// Cross-check every expectation in the Schrödinger picture
    #[arg(long)]
    verify: bool,

    /// table or csv
    #[arg(long)]
    format: Option<String>,

    #[arg(long, value_name = "REAL")]
    tol: Option<String>,
}

fn usage_error(msg: impl std::fmt::Display) -> ConfigError {
    ConfigError {
        line: None,
        message: msg.to_string(),
    }
}

fn manifest_from(cli: &Cli) -> Result<RunManifest, ConfigError> {
    let command = Command::from_name(&cli.command)
        .ok_or_else(|| usage_error(format!("unknown command '{}'", cli.command)))?;
    let mut m = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage_error(format!("{}: {e}", path.display())))?;
            let m = parse_config(&text).map_err(|e| ConfigError {
                line: e.line,
                message: format!("{}: {}", path.display(), e.message),
            })?;
            if m.command != command {
                return Err(usage_error(format!(
                    "{} configures '{}', not '{command}'",
                    path.display(),
                    m.command
                )));
            }
            m
        }
        None => RunManifest::new(command),
    };

    let mut set = |key: &str, value: String| m.set(key, &value);
    if let Some(which) = &cli.which {
        set("which", which.clone())?;
    }
    for (key, vals) in [
        ("theta1", &cli.theta1),
        ("phi1", &cli.phi1),
        ("theta2", &cli.theta2),
        ("phi2", &cli.phi2),
        ("theta3", &cli.theta3),
        ("phi3", &cli.phi3),
    ] {
        if let Some(v) = vals {
            set(key, v.join(" "))?;
        }
    }
    for (prefix, vals) in [("phi", &cli.phi), ("theta", &cli.theta)] {
        let Some(v) = vals else { continue };
        match (command, prefix) {
            (Command::BellQ, "phi") => set("angles", v.join(" "))?,
            (Command::BellQ, "theta") => set("theta", v.join(" "))?,
            _ => {
                if v.len() != 3 {
                    return Err(usage_error(format!("--{prefix} expects three angles")));
                }
                for (k, x) in v.iter().enumerate() {
                    set(&format!("{prefix}{}", k + 1), x.clone())?;
                }
            }
        }
    }
    if let Some(v) = &cli.entangled {
        set("entangled", v.clone())?;
    }
    if let Some(v) = &cli.beta_preset {
        set("beta", v.clone())?;
    }
    if let Some(v) = &cli.beta {
        set("beta", v.join(" "))?;
    }
    if let Some(v) = &cli.gamma_preset {
        set("gamma", v.clone())?;
    }
    if let Some(v) = &cli.gamma {
        set("gamma", v.join(" "))?;
    }
    if let Some(v) = &cli.experiment {
        set("experiment", v.clone())?;
    }
    if let Some(v) = &cli.ghzm {
        set("ghzm", v.clone())?;
    }
    if cli.verify {
        m.set_output("verify", "true")?;
    }
    if let Some(v) = &cli.format {
        m.set_output("format", v)?;
    }
    if let Some(v) = &cli.tol {
        m.set_output("tol", v)?;
    }
    Ok(m)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let manifest = match manifest_from(&cli) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let out = run(&manifest);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
