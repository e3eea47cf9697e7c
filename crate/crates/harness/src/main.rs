use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use strato_harness::config::ExperimentConfig;
use strato_harness::dispersive::run_dispersive;
use strato_harness::fit::fit_decay;
use strato_harness::report::read_series;
use strato_harness::validate::{validate, Suite, ValidateOptions};
use strato_harness::{run_experiment, run_mode, sweep, HarnessError, Result};

#[derive(Parser)]
#[command(name = "strato", about = "Decay experiments for linearized stratified shear flows")]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single Fourier mode from the [mode] section
    Mode(RunArgs),
    /// Full field experiment
    Field(RunArgs),
    /// One field experiment per B^2 of the [sweep] section
    Sweep(RunArgs),
    /// Unsheared experiment plus the oscillatory-integral studies
    Dispersive(RunArgs),
    /// Run validation suites (hyp, ode, boussinesq, euler, dispersive, field, all)
    Validate {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative error injected into the connection prefactors
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        /// Also write the records as JSON here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit log|f| against log<t> for a (t, value) CSV
    Fit {
        csv: PathBuf,
        #[arg(long, num_args = 2, value_names = ["T0", "T1"])]
        window: Option<Vec<f64>>,
        /// Add the ln ln <t> regressor
        #[arg(long)]
        log: bool,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(&self.config)?;
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

fn print_fits(report: &strato_harness::Report) {
    for f in &report.fits {
        let expected = f.expected_alpha.map(|a| format!("{a:+.4}")).unwrap_or_else(|| "-".into());
        let gamma = f.gamma.map(|g| format!(" gamma {g:+.3}")).unwrap_or_default();
        println!("{:<28} alpha {:+.4} (expected {expected}){gamma}  r2 {:.6}", f.norm, f.alpha, f.r2);
    }
    for e in &report.fit_errors {
        println!("{:<28} fit failed: {}", e.norm, e.error);
    }
    for c in &report.conservation {
        println!("{:<28} max relative drift {:.3e}", c.name, c.max_rel_drift);
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Mode(a) => {
            let r = run_mode(&a.load()?, a.out.as_deref())?;
            print_fits(&r);
            if let Some(e) = r.mode.and_then(|m| m.oracle_max_rel_err) {
                println!("oracle max relative error {e:.3e}");
            }
        }
        Command::Field(a) => print_fits(&run_experiment(&a.load()?, a.out.as_deref())?),
        Command::Sweep(a) => {
            for r in sweep(&a.load()?, a.out.as_deref())? {
                if let Some(g) = &r.regime {
                    println!("# {} (B^2 = {:?})", g.name, g.b2);
                }
                print_fits(&r);
            }
        }
        Command::Dispersive(a) => {
            let r = run_dispersive(&a.load()?, a.out.as_deref())?;
            print_fits(&r);
            if let Some(d) = &r.dispersive {
                println!("envelope constant {:.4} (spread {:.3})", d.envelope_constant, d.envelope_spread);
                for f in &d.ray_fits {
                    println!("{:<28} alpha {:+.4} (expected -0.3333)", f.norm, f.alpha);
                }
                println!("sharpness ratio {:.4}", d.sharpness_ratio);
            }
        }
        Command::Validate { suite, seed, perturb, out } => {
            let suites =
                Suite::parse(&suite).ok_or_else(|| HarnessError::Config(format!("unknown suite '{suite}'")))?;
            let records = validate(&suites, &ValidateOptions { seed, prefactor_perturbation: perturb })?;
            let mut ok = true;
            for r in &records {
                for c in &r.checks {
                    let mark = if c.pass { "ok  " } else { "FAIL" };
                    println!("{mark} {:<11} {:<44} {:>11.3e} <= {:.1e}", r.suite, c.name, c.value, c.limit);
                }
                ok &= r.pass;
            }
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&records).expect("records serialize") + "\n";
                std::fs::write(&path, text).map_err(|e| HarnessError::Io {
                    stage: strato_harness::Stage::Output,
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
            }
            return Ok(ok);
        }
        Command::Fit { csv, window, log } => {
            let (t, v) = read_series(&csv)?;
            let w = match window {
                Some(w) => [w[0], w[1]],
                None => [t.first().copied().unwrap_or(0.0), t.last().copied().unwrap_or(0.0)],
            };
            let fit = fit_decay(&t, &v, w, log)
                .map_err(|source| HarnessError::Fit { norm: csv.display().to_string(), source })?;
            println!("{}", serde_json::to_string_pretty(&fit).expect("fit serializes"));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.stage());
            ExitCode::from(2)
        }
    }
}
