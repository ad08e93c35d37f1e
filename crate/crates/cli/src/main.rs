//! `wiretap`: solve, sweep, verify and generate worst-case secrecy scenarios.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use wiretap_core::sampling::{random_scenario, ScenarioSpec};
use wiretap_core::sweep::{power_grid, power_sweep, SweepRow};
use wiretap_core::verification::{DEFAULT_GRID_POINTS, DEFAULT_LEMMA1_POINTS, DEFAULT_MC_SAMPLES};
use wiretap_core::{verify_scenario, worst_case_secrecy_rate, Execution, ScenarioFile, VerifyOptions, WiretapScenario};

#[derive(Parser)]
#[command(
    name = "wiretap",
    version,
    about = "Worst-case secrecy rate of a MISO wiretap channel under spherical channel uncertainty"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and print the result as JSON.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        power: PowerOverride,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve a scenario over a range of powers and print CSV.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        /// Inclusive range in dB as start:stop:step.
        #[arg(long, value_name = "START:STOP:STEP", allow_hyphen_values = true)]
        power_db: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check the solver against the independent oracles.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid_points: usize,
        #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
        mc_samples: usize,
        #[arg(long, default_value_t = DEFAULT_LEMMA1_POINTS)]
        lemma1_points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate a scenario with standard complex Gaussian channels.
    Gen {
        #[arg(long)]
        antennas: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.01)]
        eps_r: f64,
        #[arg(long, default_value_t = 0.01)]
        eps_e: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        power_db: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Scenario JSON file.
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
}

#[derive(Args)]
#[group(multiple = false)]
struct PowerOverride {
    /// Replace the file's power with this value in dB.
    #[arg(long, allow_hyphen_values = true)]
    power_db: Option<f64>,
    /// Replace the file's power with this linear value.
    #[arg(long)]
    power_linear: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.output {
            Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
            None => {
                io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

fn load(path: &Path) -> Result<ScenarioFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("malformed scenario {}", path.display()))
}

fn load_scenario(path: &Path) -> Result<WiretapScenario> {
    Ok(load(path)?.into_scenario()?)
}

/// Formats with nine significant digits.
fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["power_db", "power_linear", "secrecy_rate_bits", "positive", "z_star"])?;
    for row in rows {
        w.write_record([
            sig9(row.power_db),
            sig9(row.power_linear),
            sig9(row.secrecy_rate_bits),
            row.positive.to_string(),
            row.z_star.map(sig9).unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        bail!("power range must be start:stop:step, got {spec:?}");
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .with_context(|| format!("bad number {s:?} in power range"))
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    match power_grid(start, stop, step) {
        Some(grid) => Ok(grid),
        None => bail!("empty or inverted power range {spec:?} (need start <= stop and step > 0)"),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Solve { input, power, output } => {
            let mut file = load(&input.input)?;
            if let Some(db) = power.power_db {
                (file.power_db, file.power_linear) = (Some(db), None);
            }
            if let Some(p) = power.power_linear {
                (file.power_db, file.power_linear) = (None, Some(p));
            }
            let s = file.into_scenario()?;
            if s.validation().legit_ball_contains_origin {
                eprintln!("note: the legitimate uncertainty ball contains the origin; the rate is zero");
            }
            let out = worst_case_secrecy_rate(&s)?;
            output.emit(&(out.to_json() + "\n"))?;
        }
        Command::Sweep {
            input,
            power_db,
            output,
        } => {
            let s = load_scenario(&input.input)?;
            let powers = parse_range(&power_db)?;
            let rows = power_sweep(&s, &powers, Execution::default())?;
            output.emit(&sweep_csv(&rows)?)?;
        }
        Command::Verify {
            input,
            grid_points,
            mc_samples,
            lemma1_points,
            seed,
            output,
        } => {
            if grid_points < 2 || mc_samples == 0 || lemma1_points == 0 {
                bail!("need --grid-points >= 2, --mc-samples >= 1 and --lemma1-points >= 1");
            }
            let s = load_scenario(&input.input)?;
            let opts = VerifyOptions {
                grid_points,
                mc_samples,
                lemma1_points,
                seed,
            };
            let report = verify_scenario(&s, &opts)?;
            output.emit(&(serde_json::to_string_pretty(&report)? + "\n"))?;
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Gen {
            antennas,
            seed,
            eps_r,
            eps_e,
            power_db,
            output,
        } => {
            if antennas < 1 {
                bail!("--antennas must be at least 1");
            }
            let spec = ScenarioSpec {
                antennas,
                eps_r,
                eps_e,
                power_db,
            };
            let s = random_scenario(&spec, seed)?;
            let mut file = ScenarioFile::from_scenario(&s);
            (file.power_db, file.power_linear) = (Some(power_db), None);
            output.emit(&(serde_json::to_string_pretty(&file)? + "\n"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
