use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperbcast::analysis::{analyze, execute, AnalysisReport, Strategy};
use hyperbcast::format::{
    experiment_csv, parse_instance, to_pretty_json, InstanceFile, Metadata, TranscriptExport,
};
use hyperbcast::general::{run_experiment, ExperimentConfig};
use hyperbcast::generators::{generate, GenConfig, RNG_ALGORITHM};

const GENERATOR: &str = "hyperbcast-gen/1";

#[derive(Parser)]
#[command(
    name = "hyperbcast",
    version,
    about = "Coded broadcast planning on storage hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random instance
    Gen {
        #[arg(long)]
        users: u32,
        #[arg(long)]
        segments: u32,
        #[arg(long)]
        seed: u64,
        /// redundant edges added on top of the quasi-tree
        #[arg(long, default_value_t = 0)]
        extra_edges: u32,
        /// defaults to min(4, users - 1)
        #[arg(long)]
        max_edge_size: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify an instance and report its bounds
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Plan, simulate and verify a broadcast schedule
    Run {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "dbqt", value_parser = ["dbqt", "dbqt-general", "naive"])]
        strategy: String,
        /// also replay the schedule on random payloads
        #[arg(long)]
        payload_check: bool,
        /// write the per-slot transcript as JSON
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the randomized experiment grid and print CSV rows
    Experiment {
        #[arg(long, value_delimiter = ',', required = true)]
        users_list: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        segments_list: Vec<u32>,
        #[arg(long)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        extra_edges: u32,
        #[arg(long)]
        max_edge_size: Option<u32>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a well-formed command; exits with 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<hyperbcast::format::LoadedInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn cmd_gen(
    users: u32,
    segments: u32,
    seed: u64,
    extra_edges: u32,
    max_edge_size: Option<u32>,
    out: Option<&Path>,
) -> CmdResult {
    let mut cfg = GenConfig::new(users, segments, seed);
    cfg.extra_edges = extra_edges;
    if let Some(r) = max_edge_size {
        cfg.max_edge_size = r;
    }
    let inst = generate(&cfg)?;
    let meta = Metadata {
        seed: Some(seed),
        generator: Some(GENERATOR.to_string()),
        rng: Some(RNG_ALGORITHM.to_string()),
        max_edge_size: Some(cfg.max_edge_size),
        extra_edges: Some(extra_edges),
    };
    emit(
        out,
        &to_pretty_json(&InstanceFile::from_topology(&inst.topology, Some(meta))),
    )
}

fn render_analysis(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let line = |s: &mut String, k: &str, v: String| s.push_str(&format!("{k:<18}{v}\n"));
    line(&mut s, "digest", r.instance_digest.clone());
    line(&mut s, "users", r.num_users.to_string());
    line(&mut s, "segments", r.num_segments.to_string());
    line(&mut s, "edges", r.num_edges.to_string());
    line(&mut s, "connected", r.classification.connected.to_string());
    line(
        &mut s,
        "quasi_tree",
        r.classification.quasi_tree.to_string(),
    );
    line(&mut s, "delta", format!("{} ({})", r.delta, r.delta_method));
    if let Some(a) = r.fast_path_agrees {
        line(&mut s, "fast_path_agrees", a.to_string());
    }
    line(&mut s, "lower_bound", r.lower_bound.to_string());
    line(&mut s, "cde_bound", r.cde_bound.to_string());
    if let Some(reps) = &r.representatives {
        let names: Vec<String> = reps.iter().map(|v| format!("v{v}")).collect();
        line(&mut s, "representatives", names.join(","));
    }
    for w in &r.warnings {
        line(&mut s, "warning", w.clone());
    }
    s
}

fn cmd_analyze(input: &Path, json: bool) -> CmdResult {
    let inst = load(input)?;
    let report = analyze(&inst.topology)?;
    let text = if json {
        to_pretty_json(&report)
    } else {
        render_analysis(&report)
    };
    emit(None, &text)
}

fn cmd_run(
    input: &Path,
    strategy: &str,
    payload_check: bool,
    transcript: Option<&Path>,
    json: bool,
) -> CmdResult {
    let inst = load(input)?;
    let strategy: Strategy = strategy.parse()?;
    let seed = inst.metadata.as_ref().and_then(|m| m.seed).unwrap_or(0);
    let outcome = match execute(&inst.topology, strategy, payload_check.then_some(seed)) {
        Err(hyperbcast::Error::NotQuasiTree) => {
            return Err(Failure(
                "the instance is not a quasi-tree; dbqt only handles quasi-trees, use --strategy dbqt-general".into(),
            ))
        }
        other => other?,
    };
    if let Some(p) = transcript {
        fs::write(
            p,
            to_pretty_json(&TranscriptExport::new(&outcome.transcript)),
        )
        .map_err(|e| Failure(format!("{}: {e}", p.display())))?;
    }
    let r = &outcome.record;
    let text = if json {
        to_pretty_json(r)
    } else {
        let mut s = format!(
            "strategy={} T={} lower_bound={} delta={} cde_bound={} complete={}",
            r.strategy, r.t, r.lower_bound, r.delta, r.cde_bound, r.complete
        );
        if let (Some(a), Some(b)) = (r.t_dbqt, r.t_completion) {
            s.push_str(&format!(" t_dbqt={a} t_completion={b}"));
        }
        if let Some(p) = r.payload_check {
            s.push_str(&format!(
                " payload_check={}",
                if p { "pass" } else { "fail" }
            ));
        }
        s.push('\n');
        s
    };
    emit(None, &text)?;
    if !r.complete || r.payload_check == Some(false) {
        return Err(Failure("verification failed".into()));
    }
    Ok(())
}

fn cmd_experiment(config: ExperimentConfig, out: Option<&Path>) -> CmdResult {
    let rows = run_experiment(&config)?;
    emit(out, &experiment_csv(&rows))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Gen {
            users,
            segments,
            seed,
            extra_edges,
            max_edge_size,
            out,
        } => cmd_gen(
            users,
            segments,
            seed,
            extra_edges,
            max_edge_size,
            out.as_deref(),
        ),
        Command::Analyze { input, json } => cmd_analyze(&input, json),
        Command::Run {
            input,
            strategy,
            payload_check,
            transcript,
            json,
        } => cmd_run(
            &input,
            &strategy,
            payload_check,
            transcript.as_deref(),
            json,
        ),
        Command::Experiment {
            users_list,
            segments_list,
            trials,
            extra_edges,
            max_edge_size,
            seed,
            out,
        } => cmd_experiment(
            ExperimentConfig {
                users: users_list,
                segments: segments_list,
                trials,
                extra_edges,
                max_edge_size,
                seed,
            },
            out.as_deref(),
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
