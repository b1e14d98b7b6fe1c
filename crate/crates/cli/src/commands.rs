//! Command-line argument parsing and dispatch.
//!
//! Exit codes: 0 success, 1 validation failure (unreadable or invalid
//! input, infeasible enumeration), 2 usage error, 3 bound-check failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use dilation_core::{
    apsp, average_dilation, benefit_decomposition, check_theorem_bounds, dilation_report,
    greedy_augment, optimal_augment, GreedyOptions, ShortcutSet, DEFAULT_ENUMERATION_CAP,
};

use crate::generate::{generate_instance, GenModel};
use crate::instance::{emit_instance, parse_instance, ParsedInstance};
use crate::report::MachineReport;

const EXIT_OK: i32 = 0;
const EXIT_VALIDATION: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_BOUNDS: i32 = 3;

#[derive(Parser)]
#[command(
    name = "dilation",
    version,
    about = "Dilation statistics and greedy shortcut augmentation for metric graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    UniformSquare,
    Path,
    RandomTree,
}

impl From<ModelArg> for GenModel {
    fn from(value: ModelArg) -> Self {
        match value {
            ModelArg::UniformSquare => GenModel::UniformSquare,
            ModelArg::Path => GenModel::Path,
            ModelArg::RandomTree => GenModel::RandomTree,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum AlgorithmArg {
    Greedy,
    Optimal,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Number of points (at least 2).
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report per-pair and average dilation of an instance.
    Eval {
        file: PathBuf,
        /// Write the machine-readable report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Add shortcut edges, greedily or by exhaustive enumeration.
    Augment {
        file: PathBuf,
        /// Shortcut budget.
        #[arg(long)]
        k: usize,
        /// Greedy step count; defaults to the budget.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum, default_value = "greedy")]
        algorithm: AlgorithmArg,
        /// Stop greedy after the first step with no measurable benefit.
        #[arg(long)]
        stop_when_flat: bool,
        /// Worker thread count; results are identical for any value.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decompose the benefit of a given shortcut set by signature class.
    Signatures {
        file: PathBuf,
        /// Shortcut edges as "u-v[,u-v...]".
        #[arg(long)]
        shortcuts: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare greedy against the exhaustive optimum for one budget.
    CheckBounds {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Enumeration cap on the number of subsets.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

enum CliError {
    Validation(String),
    Usage(String),
}

/// Parses argv and runs one command, returning the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(CliError::Validation(message)) => {
            eprintln!("error: {message}");
            EXIT_VALIDATION
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Gen {
            model,
            n,
            seed,
            out,
        } => cmd_gen(model.into(), n, seed, out),
        Command::Eval { file, report } => cmd_eval(&file, report),
        Command::Augment {
            file,
            k,
            steps,
            algorithm,
            stop_when_flat,
            threads,
            report,
        } => cmd_augment(&file, k, steps, algorithm, stop_when_flat, threads, report),
        Command::Signatures {
            file,
            shortcuts,
            report,
        } => cmd_signatures(&file, &shortcuts, report),
        Command::CheckBounds {
            file,
            k,
            cap,
            report,
        } => cmd_check_bounds(&file, k, cap, report),
    }
}

fn load(path: &Path) -> Result<ParsedInstance, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Validation(format!("cannot read {}: {err}", path.display())))?;
    parse_instance(&text).map_err(|err| CliError::Validation(format!("{}: {err}", path.display())))
}

fn write_report(path: &Option<PathBuf>, report: &MachineReport) -> Result<(), CliError> {
    if let Some(path) = path {
        fs::write(path, report.render()).map_err(|err| {
            CliError::Validation(format!("cannot write {}: {err}", path.display()))
        })?;
    }
    Ok(())
}

fn instance_header(report: &mut MachineReport, parsed: &ParsedInstance) {
    report.kv("n", parsed.file.n());
    report.kv("m", parsed.file.m());
    report.kv("metric", parsed.file.descriptor.backend_name());
}

fn with_pool<T: Send>(
    threads: Option<usize>,
    job: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match threads {
        None => Ok(job()),
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(count) => rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build()
            .map_err(|err| CliError::Validation(format!("cannot build thread pool: {err}")))
            .map(|pool| pool.install(job)),
    }
}

fn cmd_gen(model: GenModel, n: usize, seed: u64, out: Option<PathBuf>) -> Result<i32, CliError> {
    if n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let file = generate_instance(model, n, seed);
    let text = emit_instance(&file);
    match out {
        Some(path) => {
            fs::write(&path, &text).map_err(|err| {
                CliError::Validation(format!("cannot write {}: {err}", path.display()))
            })?;
            println!(
                "wrote {} instance: n={} m={} seed={} to {}",
                model.name(),
                file.n(),
                file.m(),
                seed,
                path.display()
            );
        }
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn cmd_eval(file: &Path, report_path: Option<PathBuf>) -> Result<i32, CliError> {
    let parsed = load(file)?;
    let report = dilation_report(parsed.space.as_ref(), &apsp(&parsed.graph));

    println!(
        "instance: n={} m={} metric={}",
        parsed.file.n(),
        parsed.file.m(),
        parsed.file.descriptor.backend_name()
    );
    println!("average dilation: {}", report.average);
    println!("maximum dilation: {}", report.maximum);

    let mut machine = MachineReport::new("eval");
    instance_header(&mut machine, &parsed);
    machine.kv("pairs", report.pair_count);
    machine.kv("average", report.average);
    machine.kv("maximum", report.maximum);
    write_report(&report_path, &machine)?;
    Ok(EXIT_OK)
}

fn cmd_augment(
    file: &Path,
    k: usize,
    steps: Option<usize>,
    algorithm: AlgorithmArg,
    stop_when_flat: bool,
    threads: Option<usize>,
    report_path: Option<PathBuf>,
) -> Result<i32, CliError> {
    if k < 1 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let steps = steps.unwrap_or(k);
    if steps < 1 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let parsed = load(file)?;
    let base = average_dilation(&parsed.graph);

    println!(
        "instance: n={} m={} metric={}",
        parsed.file.n(),
        parsed.file.m(),
        parsed.file.descriptor.backend_name()
    );
    println!(
        "base average dilation: {} (maximum {})",
        base.average, base.maximum
    );

    let mut machine = MachineReport::new("augment");
    match algorithm {
        AlgorithmArg::Greedy => {
            let graph = &parsed.graph;
            let trace = with_pool(threads, move || {
                greedy_augment(graph, steps, GreedyOptions { stop_when_flat })
            })?;

            for step in &trace.steps {
                println!(
                    "step {}: edge ({},{})  benefit {}  average {}  [{} candidates, {:?}]",
                    step.index,
                    step.edge.0,
                    step.edge.1,
                    step.benefit,
                    step.average_dilation,
                    step.candidates_evaluated,
                    step.elapsed
                );
            }
            if trace.truncated {
                println!("stopped early: no candidate edges remain");
            }
            let total = trace.steps.last().map_or(0.0, |s| s.benefit);
            let final_average = trace
                .steps
                .last()
                .map_or(base.average, |s| s.average_dilation);
            println!("total benefit: {total}");
            println!("final average dilation: {final_average}");

            let final_report = dilation_report(
                parsed.space.as_ref(),
                &apsp(&graph.augmented(&trace.shortcuts.pairs())),
            );
            machine.kv("algorithm", "greedy");
            instance_header(&mut machine, &parsed);
            machine.kv("k", k);
            machine.kv("steps_requested", steps);
            machine.kv("stop_when_flat", stop_when_flat);
            machine.kv("base_average", base.average);
            machine.kv("base_maximum", base.maximum);
            for step in &trace.steps {
                machine.step(
                    step.index,
                    step.edge.0,
                    step.edge.1,
                    step.benefit,
                    step.average_dilation,
                );
            }
            machine.kv("steps_taken", trace.steps.len());
            machine.kv("truncated", trace.truncated);
            machine.kv("benefit_total", total);
            machine.kv("final_average", final_report.average);
            machine.kv("final_maximum", final_report.maximum);
        }
        AlgorithmArg::Optimal => {
            let graph = &parsed.graph;
            let result = with_pool(threads, move || {
                optimal_augment(graph, k, DEFAULT_ENUMERATION_CAP)
            })?
            .map_err(|err| CliError::Validation(err.to_string()))?;

            for &(u, v, _) in result.shortcuts.edges() {
                println!("edge ({u},{v})");
            }
            if result.truncated {
                println!("budget exceeds candidate count: all candidates taken");
            }
            println!("total benefit: {}", result.benefit);

            let final_report = dilation_report(
                parsed.space.as_ref(),
                &apsp(&graph.augmented(&result.shortcuts.pairs())),
            );
            println!("final average dilation: {}", final_report.average);

            machine.kv("algorithm", "optimal");
            instance_header(&mut machine, &parsed);
            machine.kv("k", k);
            machine.kv("base_average", base.average);
            machine.kv("base_maximum", base.maximum);
            for &(u, v, _) in result.shortcuts.edges() {
                machine.row("edge", &[&u, &v]);
            }
            machine.kv("subsets_evaluated", result.subsets_evaluated);
            machine.kv("truncated", result.truncated);
            machine.kv("benefit_total", result.benefit);
            machine.kv("final_average", final_report.average);
            machine.kv("final_maximum", final_report.maximum);
        }
    }
    write_report(&report_path, &machine)?;
    Ok(EXIT_OK)
}

fn parse_shortcut_list(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let usage = |token: &str| {
        CliError::Usage(format!(
            "invalid shortcut '{token}': expected \"u-v[,u-v...]\""
        ))
    };
    let mut pairs = Vec::new();
    for token in text.split(',') {
        let token = token.trim();
        let (u, v) = token.split_once('-').ok_or_else(|| usage(token))?;
        let u = u.trim().parse().map_err(|_| usage(token))?;
        let v = v.trim().parse().map_err(|_| usage(token))?;
        pairs.push((u, v));
    }
    if pairs.is_empty() {
        return Err(CliError::Usage("shortcut list is empty".into()));
    }
    Ok(pairs)
}

fn cmd_signatures(
    file: &Path,
    shortcuts_arg: &str,
    report_path: Option<PathBuf>,
) -> Result<i32, CliError> {
    let pairs = parse_shortcut_list(shortcuts_arg)?;
    let parsed = load(file)?;
    let shortcuts = ShortcutSet::from_pairs(parsed.space.as_ref(), &pairs)
        .map_err(|err| CliError::Validation(err.to_string()))?;
    let decomposition = benefit_decomposition(&parsed.graph, &shortcuts)
        .map_err(|err| CliError::Validation(err.to_string()))?;

    println!(
        "instance: n={} m={} metric={}",
        parsed.file.n(),
        parsed.file.m(),
        parsed.file.descriptor.backend_name()
    );
    println!("benefit total: {}", decomposition.benefit_total);
    for ((a, b), value) in &decomposition.by_signature {
        println!("signature ({a},{b}): {value}");
    }
    println!(
        "none class: {} pairs, total {}",
        decomposition.none_class_pairs, decomposition.none_class_total
    );
    println!("residual: {}", decomposition.residual);

    let normalized: Vec<String> = shortcuts
        .edges()
        .iter()
        .map(|&(u, v, _)| format!("{u}-{v}"))
        .collect();
    let mut machine = MachineReport::new("signatures");
    instance_header(&mut machine, &parsed);
    machine.kv("shortcuts", normalized.join(","));
    machine.kv("benefit_total", decomposition.benefit_total);
    machine.kv("signature_classes", decomposition.signature_class_count);
    for (&(a, b), value) in &decomposition.by_signature {
        machine.row("class", &[&a, &b, value]);
    }
    machine.kv("none_class_pairs", decomposition.none_class_pairs);
    machine.kv("none_class_total", decomposition.none_class_total);
    machine.kv("residual", decomposition.residual);
    write_report(&report_path, &machine)?;
    Ok(EXIT_OK)
}

fn cmd_check_bounds(
    file: &Path,
    k: usize,
    cap: Option<u64>,
    report_path: Option<PathBuf>,
) -> Result<i32, CliError> {
    if k < 1 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let cap = cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let parsed = load(file)?;
    let bounds = check_theorem_bounds(&parsed.graph, k, cap)
        .map_err(|err| CliError::Validation(err.to_string()))?;

    println!(
        "instance: n={} m={} metric={}",
        parsed.file.n(),
        parsed.file.m(),
        parsed.file.descriptor.backend_name()
    );
    if bounds.trivial_instance {
        println!("optimal benefit is zero: bounds hold vacuously");
    } else {
        println!(
            "greedy at k={}: {} of optimal {} (ratio {})",
            k,
            bounds.greedy_benefit_at_k,
            bounds.optimal_benefit,
            bounds.ratio_k.unwrap()
        );
        println!(
            "greedy at 4k\u{b2}={}: benefit {} (ratio {})",
            4 * k * k,
            bounds.greedy_benefit_at_4k2,
            bounds.ratio_4k2.unwrap()
        );
    }
    println!(
        "theorem at k: {}",
        if bounds.theorem_k_satisfied {
            "satisfied"
        } else {
            "VIOLATED"
        }
    );
    println!(
        "theorem at 4k\u{b2}: {}",
        if bounds.theorem_4k2_satisfied {
            "satisfied"
        } else {
            "VIOLATED"
        }
    );

    let mut machine = MachineReport::new("check-bounds");
    instance_header(&mut machine, &parsed);
    machine.kv("k", k);
    machine.kv("cap", cap);
    machine.kv("trivial_instance", bounds.trivial_instance);
    machine.kv("greedy_benefit_at_k", bounds.greedy_benefit_at_k);
    machine.kv("greedy_benefit_at_4k2", bounds.greedy_benefit_at_4k2);
    machine.kv("optimal_benefit", bounds.optimal_benefit);
    match bounds.ratio_k {
        Some(ratio) => machine.kv("ratio_k", ratio),
        None => machine.kv("ratio_k", "n/a"),
    };
    match bounds.ratio_4k2 {
        Some(ratio) => machine.kv("ratio_4k2", ratio),
        None => machine.kv("ratio_4k2", "n/a"),
    };
    machine.kv("theorem_k_satisfied", bounds.theorem_k_satisfied);
    machine.kv("theorem_4k2_satisfied", bounds.theorem_4k2_satisfied);
    write_report(&report_path, &machine)?;

    if bounds.theorem_k_satisfied && bounds.theorem_4k2_satisfied {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_BOUNDS)
    }
}
