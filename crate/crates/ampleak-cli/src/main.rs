//! Command-line front end for the amplification–leakage toolkit.
//!
//! Five subcommands: `region` sweeps one bound of an arbitrary channel spec,
//! `binary`/`memdef`/`gaussian` emit frontier data for the worked channel
//! families, and `check` reports degradedness. File-writing commands drop
//! `points.csv` (or `points.json` with `--format json`) plus `manifest.json`
//! into `--out`; `--cd` and `check` print JSON to standard output instead.
//!
//! With a fixed `--seed` and identical flags, repeated runs produce
//! byte-identical points files; only the manifest's `duration_ms` field may
//! differ.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ampleak::binary::{binary_cd, build_binary_channel, sc_region_detailed, BinaryParams};
use ampleak::channel::{check_degraded, Degradation, StateDMC};
use ampleak::frontier::FrontierKind;
use ampleak::gaussian::{
    cd_gaussian, outer_region_detailed, uncoded_region_detailed, GaussianParams,
};
use ampleak::memdef::{memdef_regions, AlphaLaw, MemdefParams};
use ampleak::regions::{sweep_region_detailed, BoundName, CdMethod, SearchConfig};
use ampleak::Error;

/// Achievable and converse amplification–leakage rate regions for
/// state-dependent channels with an amplified receiver and a masked
/// eavesdropper.
#[derive(Parser)]
#[command(name = "ampleak", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one achievable or converse bound of a channel spec (JSON file).
    Region(RegionArgs),
    /// Frontiers of the binary additive-noise family (superposition-coding
    /// inner curve plus a swept outer bound).
    Binary(BinaryArgs),
    /// Frontiers of the defective-memory family (uncoded, coded read-back,
    /// and outer curves over the write bias).
    Memdef(MemdefArgs),
    /// Frontiers of the Gaussian family (uncoded schemes plus the
    /// corner-point outer bound over correlation and input power).
    Gaussian(GaussianArgs),
    /// Report whether a channel spec is degraded or reversely degraded.
    Check(CheckArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Directory receiving the points file and manifest.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for the random portion of policy sweeps.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Grid resolution: simplex steps per coordinate for `region`, the
    /// scheme-parameter grid for the model commands.
    #[arg(long)]
    grid: Option<usize>,
    /// Auxiliary-alphabet sizes to sweep, e.g. `--u-card 1,2,3`.
    #[arg(long = "u-card", value_delimiter = ',')]
    u_card: Option<Vec<usize>>,
    /// Random policies sampled per auxiliary cardinality.
    #[arg(long)]
    samples: Option<usize>,
    /// Convexify swept inner frontiers by time-sharing (the default).
    #[arg(long, overrides_with = "no_hull")]
    hull: bool,
    /// Keep swept inner frontiers as raw Pareto sets.
    #[arg(long)]
    no_hull: bool,
    /// Points file format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Also write plot.gp, a gnuplot script referencing points.csv.
    #[arg(long)]
    gnuplot: bool,
}

impl CommonArgs {
    fn apply_hull(&self) -> bool {
        !self.no_hull
    }
}

#[derive(Args)]
struct RegionArgs {
    /// Channel spec JSON file.
    spec: PathBuf,
    /// Bound to sweep: r1, r2, r3, r4, r5, rout1, or rout2.
    #[arg(long)]
    bound: BoundName,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BinaryArgs {
    /// State bias p_s in [0, 0.5].
    #[arg(long)]
    ps: f64,
    /// Crossover p_n of the receiver's noise, in [0, 0.5].
    #[arg(long)]
    pn: f64,
    /// Crossover p_nz of the eavesdropper's noise, in [0, 0.5].
    #[arg(long)]
    pnz: f64,
    /// Print the differential amplification capacity as JSON and exit.
    #[arg(long)]
    cd: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct MemdefArgs {
    /// Probability a cell is stuck at 0.
    #[arg(long)]
    p: f64,
    /// Probability a cell is stuck at 1.
    #[arg(long)]
    q: f64,
    /// Probability a cell functions.
    #[arg(long)]
    r: f64,
    /// Crossover of the eavesdropper's tap, in [0, 0.5].
    #[arg(long)]
    n: f64,
    /// Write bias applied to functioning cells.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GaussianArgs {
    /// State variance σ_s².
    #[arg(long)]
    ss2: f64,
    /// Receiver noise variance σ_n².
    #[arg(long)]
    sn2: f64,
    /// Eavesdropper noise variance σ_nz².
    #[arg(long)]
    snz2: f64,
    /// Input power budget P.
    #[arg(long)]
    power: f64,
    /// Print the differential amplification capacity as JSON and exit.
    #[arg(long)]
    cd: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CheckArgs {
    /// Channel spec JSON file.
    spec: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Library errors keep their category (it decides the exit code); everything
/// else — I/O, serialization — is flattened to a message.
enum CliError {
    Lib(Error),
    Other(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Other(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    /// 2 for validation failures, 3 for violated structural preconditions
    /// (e.g. rout2 on a channel that is not degraded), 1 otherwise.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) => match e {
                Error::InvalidDistribution(_)
                | Error::InvalidParameter(_)
                | Error::BadAxisGroup(_)
                | Error::ShapeMismatch(_)
                | Error::EmptyInput(_)
                | Error::RefinementRateOutOfRange { .. } => 2,
                Error::NotDegraded { .. } | Error::Precondition(_) => 3,
                Error::Internal(_) => 1,
            },
            CliError::Other(_) => 1,
        }
    }
}

fn io_context(what: &str, e: impl fmt::Display) -> CliError {
    CliError::Other(format!("{what}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Region(a) => cmd_region(a, &argv, started),
        Command::Binary(a) => cmd_binary(a, &argv, started),
        Command::Memdef(a) => cmd_memdef(a, &argv, started),
        Command::Gaussian(a) => cmd_gaussian(a, &argv, started),
        Command::Check(a) => cmd_check(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

// ---------------------------------------------------------------------------
// Output plumbing

/// Run provenance written next to every points file. `duration_ms` is the
/// only field allowed to vary between identical invocations.
#[derive(Serialize)]
struct RunManifest {
    command_line: Vec<String>,
    tool_version: &'static str,
    seed: u64,
    config: serde_json::Value,
    frontiers: Vec<FrontierCount>,
    duration_ms: u64,
}

#[derive(Serialize)]
struct FrontierCount {
    label: String,
    points: usize,
}

/// A row type that knows its CSV header and rendering; JSON output reuses the
/// same rows through `Serialize`.
trait CsvRow: Serialize {
    const HEADER: &'static str;
    fn line(&self) -> String;
}

#[derive(Serialize)]
struct RegionRow {
    bound: String,
    kind: String,
    u_card: usize,
    r_a_bits: f64,
    r_l_bits: f64,
    r_u_bits: f64,
    feasible: bool,
}

impl CsvRow for RegionRow {
    const HEADER: &'static str = "bound,kind,u_card,r_a_bits,r_l_bits,r_u_bits,feasible";
    fn line(&self) -> String {
        format!(
            "{},{},{},{:.9},{:.9},{:.9},{}",
            self.bound, self.kind, self.u_card, self.r_a_bits, self.r_l_bits, self.r_u_bits,
            self.feasible
        )
    }
}

#[derive(Serialize)]
struct BinaryRow {
    label: String,
    kind: String,
    r_a_bits: f64,
    r_l_bits: f64,
    /// Auxiliary bias of the superposition-coding scheme; absent on swept
    /// outer rows, which carry no scalar parameterization.
    p_u: Option<f64>,
}

impl CsvRow for BinaryRow {
    const HEADER: &'static str = "label,kind,r_a_bits,r_l_bits,p_u";
    fn line(&self) -> String {
        format!(
            "{},{},{:.9},{:.9},{}",
            self.label,
            self.kind,
            self.r_a_bits,
            self.r_l_bits,
            opt_param(self.p_u)
        )
    }
}

#[derive(Serialize)]
struct MemdefRow {
    label: String,
    kind: String,
    r_a_bits: f64,
    r_l_bits: f64,
    alpha: f64,
}

impl CsvRow for MemdefRow {
    const HEADER: &'static str = "label,kind,r_a_bits,r_l_bits,alpha";
    fn line(&self) -> String {
        format!(
            "{},{},{:.9},{:.9},{:.15}",
            self.label, self.kind, self.r_a_bits, self.r_l_bits, self.alpha
        )
    }
}

#[derive(Serialize)]
struct GaussianRow {
    label: String,
    kind: String,
    r_a_bits: f64,
    r_l_bits: f64,
    rho: f64,
    sigma_x: f64,
}

impl CsvRow for GaussianRow {
    const HEADER: &'static str = "label,kind,r_a_bits,r_l_bits,rho,sigma_x";
    fn line(&self) -> String {
        format!(
            "{},{},{:.9},{:.9},{:.15},{:.15}",
            self.label, self.kind, self.r_a_bits, self.r_l_bits, self.rho, self.sigma_x
        )
    }
}

/// Rates are printed with 9 fixed decimals; scheme parameters get 15 so that
/// re-evaluating a recorded row reproduces its rates well within 1e-9 (and a
/// recorded σ_x stays inside the power budget after rounding).
fn opt_param(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.15}"),
        None => String::new(),
    }
}

fn kind_str(kind: FrontierKind) -> &'static str {
    match kind {
        FrontierKind::Inner => "inner",
        FrontierKind::Outer => "outer",
    }
}

fn render_csv<R: CsvRow>(rows: &[R]) -> String {
    let mut out = String::from(R::HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.line());
        out.push('\n');
    }
    out
}

/// gnuplot script plotting each labeled series of points.csv; the label
/// filter keys on the first column, so the header row is skipped naturally.
fn gnuplot_script(series: &[FrontierCount], ra_col: usize, rl_col: usize) -> String {
    let mut script = String::new();
    script.push_str("set datafile separator \",\"\n");
    script.push_str("set xlabel \"amplification rate r_a (bits)\"\n");
    script.push_str("set ylabel \"leakage rate r_l (bits)\"\n");
    script.push_str("set key top left\n");
    let parts: Vec<String> = series
        .iter()
        .map(|f| {
            format!(
                "\"points.csv\" skip 1 using (strcol(1) eq \"{label}\" ? ${ra_col} : NaN):{rl_col} \
                 with linespoints title \"{label}\"",
                label = f.label
            )
        })
        .collect();
    script.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    script
}

/// Writes the points file, optional plot script, and manifest for one run.
fn emit<R: CsvRow>(
    common: &CommonArgs,
    rows: &[R],
    frontiers: Vec<FrontierCount>,
    config: serde_json::Value,
    argv: &[String],
    started: Instant,
    plot_cols: (usize, usize),
) -> Result<(), CliError> {
    fs::create_dir_all(&common.out)
        .map_err(|e| io_context(&format!("creating {}", common.out.display()), e))?;
    let (file_name, content) = match common.format {
        OutputFormat::Csv => ("points.csv", render_csv(rows)),
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(rows)
                .map_err(|e| io_context("serializing points", e))?;
            text.push('\n');
            ("points.json", text)
        }
    };
    let path = common.out.join(file_name);
    fs::write(&path, content).map_err(|e| io_context(&format!("writing {}", path.display()), e))?;

    if common.gnuplot {
        if common.format == OutputFormat::Csv {
            let script = gnuplot_script(&frontiers, plot_cols.0, plot_cols.1);
            let gp = common.out.join("plot.gp");
            fs::write(&gp, script)
                .map_err(|e| io_context(&format!("writing {}", gp.display()), e))?;
        } else {
            eprintln!("warning: --gnuplot references points.csv; skipped under --format json");
        }
    }

    let manifest = RunManifest {
        command_line: argv.to_vec(),
        tool_version: env!("CARGO_PKG_VERSION"),
        seed: common.seed,
        config,
        frontiers,
        duration_ms: started.elapsed().as_millis() as u64,
    };
    let manifest_path = common.out.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| io_context("serializing manifest", e))?;
    text.push('\n');
    fs::write(&manifest_path, text)
        .map_err(|e| io_context(&format!("writing {}", manifest_path.display()), e))?;

    println!(
        "wrote {file_name} ({} points) and manifest.json to {}",
        rows.len(),
        common.out.display()
    );
    Ok(())
}

fn print_cd(c_d: f64, method: CdMethod) -> Result<(), CliError> {
    let report = json!({ "c_d_bits": c_d, "method": method.to_string() });
    let text =
        serde_json::to_string_pretty(&report).map_err(|e| io_context("serializing report", e))?;
    println!("{text}");
    Ok(())
}

fn load_channel(path: &PathBuf) -> Result<StateDMC, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| io_context(&format!("reading {}", path.display()), e))?;
    Ok(StateDMC::from_json_str(&text)?)
}

// ---------------------------------------------------------------------------
// Subcommands

fn cmd_region(a: &RegionArgs, argv: &[String], started: Instant) -> Result<(), CliError> {
    let ch = load_channel(&a.spec)?;
    let mut cfg = SearchConfig {
        seed: a.common.seed,
        apply_hull: a.common.apply_hull(),
        ..SearchConfig::default()
    };
    if let Some(g) = a.common.grid {
        cfg.grid_resolution = g;
    }
    if let Some(u) = &a.common.u_card {
        cfg.u_cardinalities = u.clone();
    }
    if let Some(n) = a.common.samples {
        cfg.random_samples = n;
    }

    let outcome = sweep_region_detailed(&ch, a.bound, &cfg)?;
    if outcome.frontier.points.is_empty() {
        eprintln!("warning: no feasible policy found for {}; frontier is empty", a.bound);
    }
    let kind = kind_str(outcome.frontier.kind).to_string();
    let rows: Vec<RegionRow> = outcome
        .frontier
        .points
        .iter()
        .zip(&outcome.meta)
        .map(|(pt, meta)| RegionRow {
            bound: a.bound.to_string(),
            kind: kind.clone(),
            u_card: meta.u_card,
            r_a_bits: pt.r_a,
            r_l_bits: pt.r_l,
            r_u_bits: meta.r_u,
            feasible: true,
        })
        .collect();

    let config = json!({
        "spec": a.spec.display().to_string(),
        "bound": a.bound.to_string(),
        "u_cardinalities": cfg.u_cardinalities,
        "grid_resolution": cfg.grid_resolution,
        "random_samples": cfg.random_samples,
        "refine_iters": cfg.refine_iters,
        "apply_hull": cfg.apply_hull,
        "format": a.common.format.name(),
    });
    let frontiers = vec![FrontierCount {
        label: a.bound.to_string(),
        points: rows.len(),
    }];
    emit(&a.common, &rows, frontiers, config, argv, started, (4, 5))
}

fn cmd_binary(a: &BinaryArgs, argv: &[String], started: Instant) -> Result<(), CliError> {
    let bp = BinaryParams::new(a.ps, a.pn, a.pnz)?;
    if a.cd {
        let cd = binary_cd(&bp)?;
        return print_cd(cd.c_d, cd.method);
    }

    let grid = a.common.grid.unwrap_or(101);
    let sc = sc_region_detailed(&bp, grid)?;

    // The outer curve has no scalar closed form, so it comes from the generic
    // converse sweep on the assembled channel.
    let ch = build_binary_channel(&bp)?;
    let outer_cfg = SearchConfig {
        seed: a.common.seed,
        u_cardinalities: a.common.u_card.clone().unwrap_or_else(|| vec![1, 2]),
        random_samples: a.common.samples.unwrap_or(200),
        ..SearchConfig::default()
    };
    let outer = sweep_region_detailed(&ch, BoundName::Rout1, &outer_cfg)?;

    let mut rows = Vec::new();
    for (pt, p_u) in sc.frontier.points.iter().zip(&sc.p_u) {
        rows.push(BinaryRow {
            label: "sc".to_string(),
            kind: kind_str(sc.frontier.kind).to_string(),
            r_a_bits: pt.r_a,
            r_l_bits: pt.r_l,
            p_u: Some(*p_u),
        });
    }
    let sc_count = rows.len();
    for pt in &outer.frontier.points {
        rows.push(BinaryRow {
            label: "outer".to_string(),
            kind: kind_str(outer.frontier.kind).to_string(),
            r_a_bits: pt.r_a,
            r_l_bits: pt.r_l,
            p_u: None,
        });
    }

    let config = json!({
        "p_s": bp.p_s(),
        "p_n": bp.p_n(),
        "p_nz": bp.p_nz(),
        "bias_grid": grid,
        "outer_sweep": {
            "u_cardinalities": outer_cfg.u_cardinalities,
            "grid_resolution": outer_cfg.grid_resolution,
            "random_samples": outer_cfg.random_samples,
        },
        "format": a.common.format.name(),
    });
    let frontiers = vec![
        FrontierCount {
            label: "sc".to_string(),
            points: sc_count,
        },
        FrontierCount {
            label: "outer".to_string(),
            points: rows.len() - sc_count,
        },
    ];
    emit(&a.common, &rows, frontiers, config, argv, started, (3, 4))
}

fn cmd_memdef(a: &MemdefArgs, argv: &[String], started: Instant) -> Result<(), CliError> {
    let mp = MemdefParams::new(a.p, a.q, a.r, a.n)?.with_alpha(AlphaLaw::Single(a.alpha))?;
    let grid = a.common.grid.unwrap_or(41);
    let regions = memdef_regions(&mp, grid)?;

    let mut rows = Vec::new();
    let mut frontiers = Vec::new();
    for (label, af) in [
        ("uncoded", &regions.uncoded),
        ("coded", &regions.coded),
        ("outer", &regions.outer),
    ] {
        for (pt, alpha) in af.frontier.points.iter().zip(&af.alpha) {
            rows.push(MemdefRow {
                label: label.to_string(),
                kind: kind_str(af.frontier.kind).to_string(),
                r_a_bits: pt.r_a,
                r_l_bits: pt.r_l,
                alpha: *alpha,
            });
        }
        frontiers.push(FrontierCount {
            label: label.to_string(),
            points: af.frontier.points.len(),
        });
    }

    let config = json!({
        "p": mp.p(),
        "q": mp.q(),
        "r": mp.r(),
        "n": mp.n(),
        "alpha": a.alpha,
        "alpha_grid": grid,
        "format": a.common.format.name(),
    });
    emit(&a.common, &rows, frontiers, config, argv, started, (3, 4))
}

fn cmd_gaussian(a: &GaussianArgs, argv: &[String], started: Instant) -> Result<(), CliError> {
    let gp = GaussianParams::new(a.ss2, a.sn2, a.snz2, a.power)?;
    if a.cd {
        let cd = cd_gaussian(&gp)?;
        return print_cd(cd.c_d, cd.method);
    }

    let grid = a.common.grid.unwrap_or(81);
    let uncoded = uncoded_region_detailed(&gp, grid)?;
    let outer = outer_region_detailed(&gp, grid)?;

    let mut rows = Vec::new();
    let mut frontiers = Vec::new();
    for (label, sf) in [("uncoded", &uncoded), ("outer", &outer)] {
        for (pt, sch) in sf.frontier.points.iter().zip(&sf.schemes) {
            rows.push(GaussianRow {
                label: label.to_string(),
                kind: kind_str(sf.frontier.kind).to_string(),
                r_a_bits: pt.r_a,
                r_l_bits: pt.r_l,
                rho: sch.rho(),
                sigma_x: sch.sigma_x(),
            });
        }
        frontiers.push(FrontierCount {
            label: label.to_string(),
            points: sf.frontier.points.len(),
        });
    }

    let config = json!({
        "sigma_s2": gp.sigma_s2(),
        "sigma_n2": gp.sigma_n2(),
        "sigma_nz2": gp.sigma_nz2(),
        "power": gp.power(),
        "scheme_grid": grid,
        "format": a.common.format.name(),
    });
    emit(&a.common, &rows, frontiers, config, argv, started, (3, 4))
}

fn cmd_check(a: &CheckArgs) -> Result<(), CliError> {
    let ch = load_channel(&a.spec)?;
    let forward = check_degraded(&ch, Degradation::Forward)?;
    let reverse = check_degraded(&ch, Degradation::Reverse)?;
    let report = json!({
        "degraded": forward.degraded,
        "reversely_degraded": forward.reversely_degraded,
        "residual_forward": forward.residual,
        "residual_reverse": reverse.residual,
    });
    let text =
        serde_json::to_string_pretty(&report).map_err(|e| io_context("serializing report", e))?;
    println!("{text}");
    Ok(())
}
