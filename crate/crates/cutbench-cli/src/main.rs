//! Command-line front end: instance generation, per-instance analysis,
//! published-table reproduction, and file summaries.
//!
//! Exit codes are part of the scripting surface: 0 success, 2 malformed
//! input or arguments, 3 a size or iteration budget refused the work,
//! 4 certification was requested but the best cut stayed heuristic.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use cutbench::error::Error;
use cutbench::families::{karloff_edge_count, karloff_generate, perturb_weights, KarloffParams};
use cutbench::io::{parse_edge_list, read_graph6_lines, write_edge_list};
use cutbench::qaoa::GridSpec;
use cutbench::report::{
    analyze_graph, analyze_karloff, analyze_q3t, appendix_a, meta_lookup, parse_meta, render_csv,
    render_jsonl, render_meta, spectrum_rows, stats_rows, table1, table2, table3, AnalysisOptions,
    AnalysisSet, ApproxReport, Provenance, TableRow,
};
use cutbench::Graph;

#[derive(Parser)]
#[command(
    name = "cutbench",
    version,
    about = "Max-Cut benchmark instances and their GW / depth-1 QAOA approximation ratios"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Seed for every stochastic step (search restarts, perturbations).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Angle-grid resolution as GAMMAxBETA points.
    #[arg(long, global = true, default_value = "1000x1000", value_parser = parse_grid)]
    grid: GridSpec,

    /// Threads for fanning out across instances in `analyze`.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Write output here instead of stdout (`gen` derives a file name if absent).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Row encoding for emitted reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write an instance file plus a `.meta` provenance sidecar.
    Gen {
        #[command(subcommand)]
        family: GenCmd,
    },
    /// Analyze instance files or a parametric family into report rows.
    Analyze(AnalyzeArgs),
    /// Recompute a published table.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// Largest m for the appendix-a sweep (other targets ignore it).
        #[arg(long, default_value_t = 60)]
        max_m: u64,
    },
    /// Size, weight, and degree summary of an instance file.
    Stats {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
    },
    /// Adjacency eigenvalues of instance files, clustered into multiplicities.
    Spectra {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Subset-intersection graph J(m, m/2, b).
    Karloff {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        b: u64,
        /// Generate even outside the closed-form domain b < m/4.
        #[arg(long)]
        force: bool,
    },
    /// Copy a graph's topology with every weight redrawn as 1 + sigma*Z.
    Perturb {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        sigma: f64,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Instance file (`.g6` collection or edge list); repeat for several.
    #[arg(long = "in", value_name = "PATH")]
    inputs: Vec<PathBuf>,

    /// Parametric family instead of files: karloff takes --m/--b, q3t takes --t.
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    #[arg(long, requires = "family")]
    m: Option<u64>,
    #[arg(long, requires = "family")]
    b: Option<u64>,
    #[arg(long, requires = "family")]
    t: Option<u64>,

    // Analysis selection. Leaving every flag unset runs the standard bundle:
    // gw-analytic, qaoa-grid, maxcut-tabu, certify.
    /// Closed-form embedding value and hyperplane-rounding expectation.
    #[arg(long)]
    gw_analytic: bool,
    /// Low-rank SDP ascent with a dual certificate.
    #[arg(long)]
    gw_bm: bool,
    /// Per-edge formula grid search for the depth-1 optimum.
    #[arg(long)]
    qaoa_grid: bool,
    /// Statevector cross-check, or a coarse sweep when no grid angles exist.
    #[arg(long)]
    qaoa_statevector: bool,
    /// Exact cut by subset enumeration (n <= 26).
    #[arg(long)]
    maxcut_brute: bool,
    /// Multi-restart tabu search.
    #[arg(long)]
    maxcut_tabu: bool,
    /// Require the cut to meet an integral SDP bound; a run whose best cut
    /// stays heuristic exits with code 4.
    #[arg(long)]
    certify: bool,

    /// Restart count for the tabu search.
    #[arg(long, default_value_t = 100)]
    restarts: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Table1,
    Table2,
    Table3,
    AppendixA,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Karloff,
    Q3t,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let (g, b) = s
        .split_once(['x', 'X'])
        .ok_or("expected GAMMAxBETA, e.g. 1000x1000")?;
    let g: usize = g.trim().parse().map_err(|_| "gamma count is not a number")?;
    let b: usize = b.trim().parse().map_err(|_| "beta count is not a number")?;
    GridSpec::new(g, b).map_err(|e| e.to_string())
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidArgument(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::InvalidArgument(_)) => 2,
        Some(Error::Budget(_)) => 3,
        _ => 1,
    }
}

/// The global flags, detached from the subcommand so both can move freely.
struct RunOpts {
    seed: u64,
    grid: GridSpec,
    jobs: usize,
    out: Option<PathBuf>,
    format: Format,
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if cli.jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    let opts = RunOpts {
        seed: cli.seed,
        grid: cli.grid,
        jobs: cli.jobs,
        out: cli.out,
        format: cli.format,
    };
    match cli.command {
        Cmd::Gen { family } => cmd_gen(family, opts.seed, opts.out),
        Cmd::Analyze(args) => cmd_analyze(args, &opts),
        Cmd::Reproduce { target, max_m } => cmd_reproduce(target, max_m, &opts),
        Cmd::Stats { input } => cmd_stats(&input, &opts),
        Cmd::Spectra { input } => cmd_spectra(&input, &opts),
    }
}

// ---------------------------------------------------------------------------
// Output plumbing

fn emit<R: TableRow>(
    rows: &[R],
    prov: &Provenance,
    format: Format,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let text = match format {
        Format::Csv => render_csv(rows, prov),
        Format::Jsonl => render_jsonl(rows, prov)?,
    };
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Loads every graph in a file: a graph6 line collection (by `.g6`
/// extension) or a single edge list. Names come from the file stem, with a
/// `[i]` suffix when the file holds several graphs.
fn read_instances(path: &Path) -> anyhow::Result<Vec<(String, Graph)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into());
    let is_g6 = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("g6"));
    if is_g6 {
        let graphs = read_graph6_lines(&text)?;
        if graphs.len() == 1 {
            let mut graphs = graphs;
            return Ok(vec![(stem, graphs.pop().expect("length checked"))]);
        }
        Ok(graphs
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("{stem}[{i}]"), g))
            .collect())
    } else {
        Ok(vec![(stem, parse_edge_list(&text)?)])
    }
}

/// What a sidecar contributes to an analysis: Karloff parameters when the
/// file records them consistently, plus any mismatch warnings.
#[derive(Default)]
struct SidecarInfo {
    family: Option<String>,
    karloff: Option<KarloffParams>,
    warnings: Vec<String>,
}

fn read_sidecar(path: &Path, g: &Graph) -> SidecarInfo {
    let mut info = SidecarInfo::default();
    let Ok(text) = fs::read_to_string(path.with_extension("meta")) else {
        return info;
    };
    let entries = parse_meta(&text);
    for (key, expected) in [("n", g.n()), ("edges", g.edge_count())] {
        if let Some(v) = meta_lookup(&entries, key) {
            if v != expected.to_string() {
                info.warnings
                    .push(format!("sidecar says {key} = {v}, file has {expected}"));
            }
        }
    }
    match meta_lookup(&entries, "weights") {
        Some("unit") if !g.is_unit_weight() => {
            info.warnings
                .push("sidecar says unit weights, file is weighted".into());
        }
        Some("perturbed") if g.is_unit_weight() => {
            info.warnings
                .push("sidecar says perturbed weights, file weights are all 1".into());
        }
        _ => {}
    }
    info.family = meta_lookup(&entries, "family").map(str::to_string);
    if info.family.as_deref() == Some("karloff") {
        let m = meta_lookup(&entries, "m").and_then(|v| v.parse().ok());
        let b = meta_lookup(&entries, "b").and_then(|v| v.parse().ok());
        if let (Some(m), Some(b)) = (m, b) {
            match KarloffParams::new(m, b) {
                // Only trust the recorded parameters if the file's counts
                // and weights agree with them, so a stale sidecar cannot
                // smuggle wrong closed forms into the report.
                Ok(p) if g.n() == expected_karloff_n(p)
                    && Some(g.edge_count() as u128) == karloff_edge_count(p).ok()
                    && g.is_unit_weight() =>
                {
                    info.karloff = Some(p)
                }
                _ => info
                    .warnings
                    .push("sidecar family ignored: recorded parameters do not fit the file".into()),
            }
        }
    }
    info
}

fn expected_karloff_n(p: KarloffParams) -> usize {
    cutbench::families::binom(p.m(), p.m() / 2)
        .map(|n| n as usize)
        .unwrap_or(usize::MAX)
}

// ---------------------------------------------------------------------------
// gen

fn cmd_gen(family: GenCmd, seed: u64, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    match family {
        GenCmd::Karloff { m, b, force } => {
            let p = KarloffParams::new(m, b)?;
            if !p.in_formula_domain() {
                if !force {
                    return Err(usage(format!(
                        "b = {b} is not below m/4: the cut and ratio formulas do not \
                         cover this graph (pass --force to generate it anyway)"
                    )));
                }
                eprintln!("warning: b = {b} is not below m/4; closed-form analyses will not apply");
            }
            let g = karloff_generate(p)?;
            let path =
                out.unwrap_or_else(|| PathBuf::from(format!("k{}_{}_{}.el", m, m / 2, b)));
            let meta = [
                ("family", "karloff".to_string()),
                ("m", m.to_string()),
                ("b", b.to_string()),
                ("n", g.n().to_string()),
                ("edges", g.edge_count().to_string()),
                ("weights", "unit".to_string()),
            ];
            write_instance(&path, &g, &meta)
        }
        GenCmd::Perturb { input, sigma } => {
            let mut instances = read_instances(&input)?;
            if instances.len() != 1 {
                return Err(usage("perturb expects a single-instance file"));
            }
            let (_, g) = instances.pop().expect("length checked");
            if !g.is_unit_weight() {
                eprintln!("warning: existing weights are replaced by the 1 + sigma*Z draw, not rescaled");
            }
            let perturbed = perturb_weights(&g, sigma, seed)?;
            let path = out.unwrap_or_else(|| {
                let stem = input
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "instance".into());
                PathBuf::from(format!("{stem}_s{sigma}.el"))
            });
            let meta = [
                ("family", "perturb".to_string()),
                ("source", input.display().to_string()),
                ("sigma", format!("{sigma:?}")),
                ("seed", seed.to_string()),
                ("n", perturbed.n().to_string()),
                ("edges", perturbed.edge_count().to_string()),
                ("weights", "perturbed".to_string()),
            ];
            write_instance(&path, &perturbed, &meta)
        }
    }
}

fn write_instance(path: &Path, g: &Graph, meta: &[(&str, String)]) -> anyhow::Result<ExitCode> {
    fs::write(path, write_edge_list(g)).with_context(|| format!("writing {}", path.display()))?;
    let meta_path = path.with_extension("meta");
    fs::write(&meta_path, render_meta(meta))
        .with_context(|| format!("writing {}", meta_path.display()))?;
    eprintln!(
        "wrote {} ({} vertices, {} edges) and {}",
        path.display(),
        g.n(),
        g.edge_count(),
        meta_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// analyze

enum Job {
    File {
        name: String,
        graph: Graph,
        family: Option<String>,
        karloff: Option<KarloffParams>,
        warnings: Vec<String>,
    },
    Karloff(KarloffParams),
    Q3t(u64),
}

fn cmd_analyze(args: AnalyzeArgs, cli: &RunOpts) -> anyhow::Result<ExitCode> {
    let explicit = args.gw_analytic
        || args.gw_bm
        || args.qaoa_grid
        || args.qaoa_statevector
        || args.maxcut_brute
        || args.maxcut_tabu
        || args.certify;
    let analyses = if explicit {
        AnalysisSet {
            gw_analytic: args.gw_analytic,
            gw_bm: args.gw_bm,
            qaoa_grid: args.qaoa_grid,
            qaoa_statevector: args.qaoa_statevector,
            maxcut_brute: args.maxcut_brute,
            maxcut_tabu: args.maxcut_tabu,
            certify: args.certify,
        }
    } else {
        AnalysisSet::standard()
    };
    let opts = AnalysisOptions {
        analyses,
        seed: cli.seed,
        grid: cli.grid,
        restarts: args.restarts,
    };

    let mut jobs: Vec<Job> = Vec::new();
    match args.family {
        Some(FamilyKind::Karloff) => {
            let (Some(m), Some(b)) = (args.m, args.b) else {
                return Err(usage("--family karloff needs --m and --b"));
            };
            jobs.push(Job::Karloff(KarloffParams::new(m, b)?));
        }
        Some(FamilyKind::Q3t) => {
            let Some(t) = args.t else {
                return Err(usage("--family q3t needs --t"));
            };
            jobs.push(Job::Q3t(t));
        }
        None => {}
    }
    for path in &args.inputs {
        let instances = read_instances(path)?;
        let single = instances.len() == 1;
        for (name, graph) in instances {
            // Sidecars describe whole files; they only apply unambiguously
            // to single-instance ones.
            let info = if single {
                read_sidecar(path, &graph)
            } else {
                SidecarInfo::default()
            };
            jobs.push(Job::File {
                name,
                graph,
                family: info.family,
                karloff: info.karloff,
                warnings: info.warnings,
            });
        }
    }
    if jobs.is_empty() {
        return Err(usage("nothing to analyze: pass --in or --family"));
    }

    let run_one = |job: &Job| -> cutbench::Result<ApproxReport> {
        match job {
            Job::File {
                name,
                graph,
                family,
                karloff,
                warnings,
            } => {
                let family = family.as_deref().unwrap_or("file");
                let params = karloff
                    .map(|p| format!("m={} b={}", p.m(), p.b()))
                    .unwrap_or_default();
                let mut rep = analyze_graph(graph, name, family, &params, *karloff, &opts)?;
                for w in warnings {
                    rep.warn(w.clone());
                }
                Ok(rep)
            }
            Job::Karloff(p) => analyze_karloff(*p, &opts),
            Job::Q3t(t) => analyze_q3t(*t, &opts),
        }
    };

    let reports: cutbench::Result<Vec<ApproxReport>> = if cli.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build()
            .context("building the worker pool")?;
        pool.install(|| jobs.par_iter().map(run_one).collect())
    } else {
        jobs.iter().map(run_one).collect()
    };
    let reports = reports?;

    let prov = Provenance {
        seed: Some(cli.seed),
        grid: Some((cli.grid.gamma_points(), cli.grid.beta_points())),
    };
    emit(&reports, &prov, cli.format, cli.out.as_deref())?;

    if args.certify {
        let all_certified = reports.iter().all(|r| {
            matches!(r.maxcut_status.as_deref(), Some("exact") | Some("certified"))
        });
        if !all_certified {
            eprintln!("certification requested but at least one cut stayed heuristic");
            return Ok(ExitCode::from(4));
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// reproduce / stats / spectra

fn cmd_reproduce(target: Target, max_m: u64, cli: &RunOpts) -> anyhow::Result<ExitCode> {
    let prov = Provenance {
        seed: Some(cli.seed),
        grid: Some((cli.grid.gamma_points(), cli.grid.beta_points())),
    };
    let out = cli.out.as_deref();
    match target {
        Target::Table1 => emit(&table1(&cli.grid)?, &prov, cli.format, out)?,
        Target::Table2 => emit(&table2(&cli.grid)?, &prov, cli.format, out)?,
        Target::Table3 => emit(&table3(&cli.grid)?, &prov, cli.format, out)?,
        Target::AppendixA => emit(&appendix_a(max_m, &cli.grid)?, &prov, cli.format, out)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(input: &Path, cli: &RunOpts) -> anyhow::Result<ExitCode> {
    let mut instances = read_instances(input)?;
    if instances.len() != 1 {
        return Err(usage("stats expects a single-instance file"));
    }
    let (_, g) = instances.pop().expect("length checked");
    let rows = stats_rows(&g);
    let prov = Provenance {
        seed: Some(cli.seed),
        grid: Some((cli.grid.gamma_points(), cli.grid.beta_points())),
    };
    emit(&rows, &prov, cli.format, cli.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_spectra(input: &Path, cli: &RunOpts) -> anyhow::Result<ExitCode> {
    let mut rows = Vec::new();
    for (name, g) in read_instances(input)? {
        rows.extend(spectrum_rows(&name, &g)?);
    }
    let prov = Provenance {
        seed: Some(cli.seed),
        grid: Some((cli.grid.gamma_points(), cli.grid.beta_points())),
    };
    emit(&rows, &prov, cli.format, cli.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
