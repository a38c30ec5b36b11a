//! JSON/CSV command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 verify failure,
//! 3 IO/parse failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qent::capacity::{capacity, info_d, info_o, info_q, InfoKind, InfoReport, OptimizerConfig};
use qent::channels::{apply_state, channel_zoo, make_channel, KrausChannel, ZooParams};
use qent::entangle::{d_compound, marginals, o_compound, standard_compound, CompoundState};
use qent::entropy::{conditional_and_disentanglement, mutual_entropy, q_entropy, von_neumann};
use qent::states::{schatten_decompose, DensityOperator, Ensemble};

#[derive(Parser)]
#[command(name = "qent", about = "Compound states, entangled mutual entropy and channel capacities", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the von Neumann entropy S and the q-entropy S_q = 2S of a state.
    Entropy {
        #[arg(long)]
        state: PathBuf,
    },
    /// Build a compound state (standard, d or o) and write it to a file.
    Compound {
        /// One of: standard, d, o.
        kind: String,
        #[arg(long)]
        state: PathBuf,
        /// Ensemble file for d/o kinds; defaults to the Schatten
        /// decomposition of --state.
        #[arg(long)]
        ensemble: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print mutual entropy, marginal entropies and the disentanglement
    /// degree of a compound state.
    Mutual {
        #[arg(long)]
        compound: PathBuf,
    },
    /// Apply a Kraus channel to a state and write the output state.
    ChannelApply {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compute an information functional I_q, I_d or I_o at a fixed input.
    Info {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        restarts: Option<usize>,
        /// Optional JSON dump of the maximizing decomposition / compound.
        #[arg(long)]
        argmax_out: Option<PathBuf>,
    },
    /// Estimate a channel capacity C_q, C or C_o.
    Capacity {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sweep a one-parameter channel family and write param,I_q,I_d,I_o rows.
    Sweep {
        #[arg(long)]
        family: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the seeded invariant suite.
    Verify {
        /// Comma-separated dimensions, each in 2..=4.
        #[arg(long, default_value = "2,3")]
        dims: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Validate this channel file as part of the suite; a malformed
        /// channel is reported as a suite failure (exit 2).
        #[arg(long)]
        channel: Option<PathBuf>,
    },
}

/// CLI failure carrying its documented exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(e: impl std::fmt::Display) -> Self {
        Self { code: 1, message: e.to_string() }
    }
    fn verify(e: impl std::fmt::Display) -> Self {
        Self { code: 2, message: e.to_string() }
    }
    fn io(e: impl std::fmt::Display) -> Self {
        Self { code: 3, message: e.to_string() }
    }
}

impl From<qent::Error> for Failure {
    fn from(e: qent::Error) -> Self {
        Failure::validation(e)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    match serde_json::from_str::<T>(&text) {
        Ok(v) => Ok(v),
        Err(e) if e.is_data() => {
            // Structurally valid JSON describing an invalid object
            // (bad trace, incomplete Kraus family, ...) is a validation
            // failure, not a parse failure.
            Err(Failure::validation(format!("{}: {e}", path.display())))
        }
        Err(e) => Err(Failure::io(format!("{}: {e}", path.display()))),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Failure::io)?;
    std::fs::write(path, text + "\n").map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

/// Wire format for ensembles: {"kind":"ensemble","items":[{"weight":w,"state":{...}},...]}.
#[derive(Serialize, Deserialize)]
struct EnsembleJson {
    kind: String,
    items: Vec<EnsembleItemJson>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleItemJson {
    weight: f64,
    state: DensityOperator,
}

fn load_ensemble(path: &Path) -> Result<Ensemble, Failure> {
    let raw: EnsembleJson = read_json(path)?;
    if raw.kind != "ensemble" {
        return Err(Failure::validation(format!("{}: expected kind \"ensemble\"", path.display())));
    }
    let items = raw.items.into_iter().map(|it| (it.weight, it.state)).collect();
    Ensemble::new(items).map_err(Into::into)
}

fn parse_kind(kind: &str) -> Result<InfoKind, Failure> {
    kind.parse::<InfoKind>().map_err(Failure::validation)
}

fn optimizer(seed: u64, restarts: Option<usize>, tol: Option<f64>) -> OptimizerConfig {
    let mut cfg = OptimizerConfig { seed, ..Default::default() };
    if let Some(r) = restarts {
        cfg.restarts = r.max(1);
    }
    if let Some(t) = tol {
        cfg.tol = t;
    }
    cfg
}

fn info_at(
    rho: &DensityOperator,
    ch: &KrausChannel,
    kind: InfoKind,
    cfg: &OptimizerConfig,
) -> Result<InfoReport, Failure> {
    Ok(match kind {
        InfoKind::Q => info_q(rho, ch)?,
        InfoKind::D => info_d(rho, ch, cfg)?,
        InfoKind::O => info_o(rho, ch, cfg)?,
    })
}

fn kind_suffix(kind: InfoKind) -> &'static str {
    match kind {
        InfoKind::Q => "q",
        InfoKind::D => "d",
        InfoKind::O => "o",
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("QENT_THREADS") else { return Ok(()) };
    let n: usize = raw
        .parse()
        .map_err(|_| Failure::validation(format!("QENT_THREADS must be an integer, got `{raw}`")))?;
    if n == 0 {
        return Ok(()); // 0 = auto
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(Failure::validation)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Entropy { state } => {
            let rho: DensityOperator = read_json(&state)?;
            let s = von_neumann(&rho);
            let sq = q_entropy(&rho);
            println!("S={s} S_q={sq}");
        }
        Command::Compound { kind, state, ensemble, output } => {
            let rho: DensityOperator = read_json(&state)?;
            let w: CompoundState = match kind.as_str() {
                "standard" => standard_compound(&rho)?,
                "d" | "o" => {
                    let e = match &ensemble {
                        Some(p) => load_ensemble(p)?,
                        None => schatten_decompose(&rho)?,
                    };
                    if kind == "d" { d_compound(&e)? } else { o_compound(&e)? }
                }
                other => {
                    return Err(Failure::validation(format!(
                        "unknown compound kind `{other}` (expected standard, d or o)"
                    )))
                }
            };
            write_json(&output, &w)?;
            println!("wrote {} compound ({}x{}) to {}", kind, w.dim_g(), w.dim_h(), output.display());
        }
        Command::Mutual { compound } => {
            let w: CompoundState = read_json(&compound)?;
            let (sigma, rho) = marginals(&w)?;
            let i = mutual_entropy(&w);
            let (cond, degree) = conditional_and_disentanglement(&w);
            println!("I={i}");
            println!("S_probe={} S_out={}", von_neumann(&sigma), von_neumann(&rho));
            println!("conditional={cond} disentanglement={degree}");
        }
        Command::ChannelApply { channel, state, output } => {
            let ch: KrausChannel = read_json(&channel)?;
            let rho: DensityOperator = read_json(&state)?;
            let out = apply_state(&ch, &rho)?;
            write_json(&output, &out)?;
            println!("wrote output state (dim {}) to {}", out.dim(), output.display());
        }
        Command::Info { state, channel, kind, seed, restarts, argmax_out } => {
            let rho: DensityOperator = read_json(&state)?;
            let ch: KrausChannel = read_json(&channel)?;
            let kind = parse_kind(&kind)?;
            let cfg = optimizer(seed, restarts, None);
            let report = info_at(&rho, &ch, kind, &cfg)?;
            println!(
                "I_{}={:.12} iterations={} converged={}",
                kind_suffix(kind),
                report.value,
                report.iterations,
                report.converged
            );
            if let Some(path) = argmax_out {
                match &report.argmax {
                    qent::capacity::Argmax::Standard(w) => write_json(&path, w)?,
                    qent::capacity::Argmax::Decomposition(e) => {
                        let dump = EnsembleJson {
                            kind: "ensemble".into(),
                            items: e
                                .items()
                                .iter()
                                .map(|(w, s)| EnsembleItemJson { weight: *w, state: s.clone() })
                                .collect(),
                        };
                        write_json(&path, &dump)?;
                    }
                }
            }
        }
        Command::Capacity { channel, kind, seed, restarts, tol } => {
            let ch: KrausChannel = read_json(&channel)?;
            let kind = parse_kind(&kind)?;
            let cfg = optimizer(seed, restarts, tol);
            let rep = capacity(&ch, kind, &cfg)?;
            println!(
                "C_{}={:.12} iterations={} converged={}",
                kind_suffix(kind),
                rep.report.value,
                rep.report.iterations,
                rep.report.converged
            );
            let spectrum = qent::linalg::hermitian_eig(rep.input.matrix())?;
            let evs: Vec<String> =
                spectrum.eigenvalues.iter().map(|l| format!("{l:.12}")).collect();
            println!("input_spectrum={}", evs.join(","));
        }
        Command::Sweep { family, from, to, step, state, out, seed } => {
            if step.is_nan() || step <= 0.0 {
                return Err(Failure::validation(format!("step must be > 0, got {step}")));
            }
            if from > to {
                return Err(Failure::validation(format!("empty range: from {from} > to {to}")));
            }
            let rho: DensityOperator = read_json(&state)?;
            // Inclusive endpoints on both sides.
            let n = ((to - from) / step).round() as usize;
            let mut grid: Vec<f64> = (0..=n).map(|k| from + step * k as f64).collect();
            if (grid.last().copied().unwrap_or(from) - to).abs() > 1e-12 && from + step * (n as f64) < to {
                grid.push(to);
            }
            let rows: Result<Vec<String>, Failure> = grid
                .par_iter()
                .map(|&p| {
                    let ch = channel_zoo(&family, &ZooParams::Noise(p))?;
                    let cfg = OptimizerConfig { seed, ..Default::default() };
                    let i_q = info_q(&rho, &ch)?.value;
                    let i_d = info_d(&rho, &ch, &cfg)?.value;
                    let i_o = info_o(&rho, &ch, &cfg)?.value;
                    Ok(format!("{p},{i_q:.12},{i_d:.12},{i_o:.12}"))
                })
                .collect();
            let mut csv = String::from("param,I_q,I_d,I_o\n");
            for row in rows? {
                csv.push_str(&row);
                csv.push('\n');
            }
            std::fs::write(&out, csv).map_err(|e| Failure::io(format!("{}: {e}", out.display())))?;
            println!("wrote {} rows to {}", grid.len(), out.display());
        }
        Command::Verify { dims, trials, seed, channel } => {
            let dims: Vec<usize> = dims
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Failure::validation(format!("bad dimension `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            if trials == 0 {
                println!("warning: trials=0, every check passes vacuously");
            }
            if let Some(path) = channel {
                // A channel file that fails validation counts as a suite
                // failure, not a mere input error.
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
                let parsed: Result<KrausChannel, _> = serde_json::from_str(&text);
                match parsed {
                    Ok(ch) => {
                        // Re-validate through the constructor for a named error.
                        make_channel(ch.kraus().to_vec()).map_err(Failure::verify)?;
                        println!("channel {}: ok", path.display());
                    }
                    Err(e) if e.is_data() => {
                        return Err(Failure::verify(format!("{}: {e}", path.display())))
                    }
                    Err(e) => return Err(Failure::io(format!("{}: {e}", path.display()))),
                }
            }
            let summary = qent::verify::run_suite(&dims, trials, seed)?;
            for check in &summary.checks {
                println!(
                    "{:<32} {}/{} {}",
                    check.name,
                    check.trials - check.failures,
                    check.trials,
                    if check.passed() { "pass" } else { "FAIL" }
                );
            }
            if !summary.all_passed() {
                let failed: Vec<&str> = summary
                    .checks
                    .iter()
                    .filter(|c| !c.passed())
                    .map(|c| c.name)
                    .collect();
                return Err(Failure::verify(format!("failed checks: {}", failed.join(", "))));
            }
            println!("all checks passed");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = init_threads().and_then(|()| run(cli)) {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    ExitCode::SUCCESS
}
