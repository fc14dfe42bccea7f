//! `secrecy-region` command-line tool.

mod parse;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use secrecy_region::channel::{linear_independence_margin, rate_scale, spectrum, FEASIBILITY_TOL};
use secrecy_region::export::{boundary_csv, region_svg, round_sig12, write_atomic};
use secrecy_region::geometry::hausdorff_distance;
use secrecy_region::linalg::{ComplexVector, HermitianMatrix};
use secrecy_region::regions::{self, RegionBoundary};
use secrecy_region::sato::{self, AuditConfig, CovSearchConfig};
use secrecy_region::sdpc;
use secrecy_region::{ChannelPair, ExampleVariant, FieldMode, SweepConfig};

const THREADS_ENV: &str = "SECRECY_REGION_THREADS";

#[derive(Parser, Debug)]
#[command(name = "secrecy-region", version, about = "Secrecy capacity region of the two-user MISO broadcast channel with confidential messages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Largest generalized eigenpairs, single-user secrecy rates and feasibility.
    Spectrum {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
    /// Sweep the capacity region; write CSV, JSON and SVG boundaries.
    Region {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Also sweep the mirrored parametrization and report the Hausdorff
        /// distance between the two boundaries.
        #[arg(long)]
        beta_check: bool,
    },
    /// Dirty-paper covariances and rates for one power split.
    Sdpc {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Fraction of the power given to user 1's layer.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long)]
        out_json: Option<PathBuf>,
    },
    /// Outer-bound frontier for one noise correlation.
    Outer {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Noise correlation (re+imj); defaults to the tightness value.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        /// Use the reduced covariance search.
        #[arg(long)]
        coarse: bool,
    },
    /// Check the capacity region against the outer bound.
    Audit {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        out_json: Option<PathBuf>,
        #[arg(long)]
        coarse: bool,
        /// Scales the inner region before the containment check.
        #[arg(long, hide = true, default_value_t = 1.0)]
        fault_scale_inner: f64,
    },
    /// Regenerate the two-antenna example figure (fig2.csv, fig2.svg).
    #[command(name = "reproduce-fig2")]
    ReproduceFig2 {
        #[arg(long, value_enum, default_value_t = Variant::TextG)]
        variant: Variant,
        #[arg(long)]
        power: Option<f64>,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ChannelArgs {
    /// Channel to user 1, comma-separated (re or re+imj entries).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "config")]
    h: Option<String>,
    /// Channel to user 2.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "config")]
    g: Option<String>,
    #[arg(long)]
    power: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Channel JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Which second entry of g to use for the built-in example.
    #[arg(long, value_enum, default_value_t = Variant::TextG)]
    variant: Variant,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = SweepConfig::default().grid)]
    grid: usize,
    /// Plain uniform grid, no refinement.
    #[arg(long)]
    no_refine: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Mode {
    Real,
    Complex,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Variant {
    TextG,
    MatrixG,
}

impl From<Mode> for FieldMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Real => FieldMode::Real,
            Mode::Complex => FieldMode::Complex,
        }
    }
}

impl From<Variant> for ExampleVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::TextG => ExampleVariant::TextG,
            Variant::MatrixG => ExampleVariant::MatrixG,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Numerics(String),
    Io(String),
    Audit(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerics(_) => 3,
            CliError::Io(_) => 4,
            CliError::Audit(_) => 5,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerics(_) => "numerics",
            CliError::Io(_) => "io",
            CliError::Audit(_) => "audit",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerics(m) | CliError::Io(m) | CliError::Audit(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.message())
    }
}

impl From<secrecy_region::Error> for CliError {
    fn from(e: secrecy_region::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerics(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Config(e.to_string().trim_end().to_string())),
    };
    match init_threads().and_then(|_| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    let body = json!({ "error": { "kind": e.kind(), "code": e.code(), "message": e.message() } });
    eprintln!("{body}");
    ExitCode::from(e.code())
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Spectrum { channel, out_json } => cmd_spectrum(&load_channel(&channel)?, out_json.as_deref()),
        Command::Region { channel, sweep, out, beta_check } => {
            cmd_region(&load_channel(&channel)?, &sweep_config(&sweep)?, &out, beta_check)
        }
        Command::Sdpc { channel, alpha, out_json } => cmd_sdpc(&load_channel(&channel)?, alpha, out_json.as_deref()),
        Command::Outer { channel, sweep, out, rho, coarse } => {
            cmd_outer(&load_channel(&channel)?, &sweep_config(&sweep)?, &out, rho.as_deref(), coarse)
        }
        Command::Audit { channel, sweep, out_json, coarse, fault_scale_inner } => {
            let cfg = AuditConfig {
                sweep: sweep_config(&sweep)?,
                search: if coarse { CovSearchConfig::coarse() } else { CovSearchConfig::default() },
                inner_inflation: fault_scale_inner,
                ..AuditConfig::default()
            };
            cmd_audit(&load_channel(&channel)?, &cfg, out_json.as_deref())
        }
        Command::ReproduceFig2 { variant, power, sweep, out_dir } => {
            let mut ch = ChannelPair::example(variant.into());
            if let Some(p) = power {
                ch = ch.with_power(p)?;
            }
            cmd_reproduce(&ch, &sweep_config(&sweep)?, &out_dir)
        }
    }
}

fn load_channel(args: &ChannelArgs) -> CliResult<ChannelPair> {
    let ch = if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        ChannelPair::from_json(&text)?
    } else {
        match (&args.h, &args.g) {
            (None, None) => ChannelPair::example(args.variant.into()),
            (Some(h), Some(g)) => {
                let h = parse::parse_vector(h).map_err(|e| CliError::Config(format!("--h: {e}")))?;
                let g = parse::parse_vector(g).map_err(|e| CliError::Config(format!("--g: {e}")))?;
                let mode = args.mode.map_or(FieldMode::Complex, FieldMode::from);
                let power = args.power.ok_or_else(|| CliError::Config("--power is required with --h/--g".into()))?;
                return Ok(ChannelPair::new(ComplexVector::new(h), ComplexVector::new(g), power, mode)?);
            }
            _ => return Err(CliError::Config("--h and --g must be given together".into())),
        }
    };
    let ch = match args.mode {
        Some(m) => ch.with_mode(m.into())?,
        None => ch,
    };
    Ok(match args.power {
        Some(p) => ch.with_power(p)?,
        None => ch,
    })
}

fn sweep_config(args: &SweepArgs) -> CliResult<SweepConfig> {
    let cfg = if args.no_refine {
        SweepConfig::uniform(args.grid)
    } else {
        SweepConfig { grid: args.grid, ..SweepConfig::default() }
    };
    cfg.validate()?;
    Ok(cfg)
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round_sig12(x))
    } else {
        Value::Null
    }
}

fn complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn vector(v: &ComplexVector) -> Value {
    Value::Array(v.entries().iter().copied().map(complex).collect())
}

fn matrix(m: &HermitianMatrix) -> Value {
    Value::Array(m.rows().into_iter().map(|r| Value::Array(r.into_iter().map(complex).collect())).collect())
}

fn mode_name(ch: &ChannelPair) -> &'static str {
    match ch.mode() {
        FieldMode::Real => "real",
        FieldMode::Complex => "complex",
    }
}

fn channel_json(ch: &ChannelPair) -> Value {
    json!({ "h": vector(ch.h()), "g": vector(ch.g()), "power": num(ch.power()), "mode": mode_name(ch) })
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    write_atomic(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Prints `v` and optionally mirrors it to a file; the file is written
/// first so a failed write leaves stdout empty.
fn emit(v: &Value, out: Option<&Path>) -> CliResult<()> {
    let text = json_text(v);
    if let Some(path) = out {
        write_file(path, text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

fn cmd_spectrum(ch: &ChannelPair, out: Option<&Path>) -> CliResult<()> {
    let s = spectrum(ch)?;
    let (f1, f2) = s.feasibility(FEASIBILITY_TOL);
    let scale = rate_scale(ch);
    let margin = linear_independence_margin(ch).ok();
    let v = json!({
        "channel": channel_json(ch),
        "lambda1": num(s.lambda1),
        "lambda2": num(s.lambda2),
        "e1": vector(&s.e1),
        "e2": vector(&s.e2),
        "residual1": num(s.residual1),
        "residual2": num(s.residual2),
        "rate_scale": num(scale),
        "r1_max_bits": num(scale * s.lambda1.log2()),
        "r2_max_bits": num(scale * s.lambda2.log2()),
        "feasible": { "user1": f1, "user2": f2 },
        "linear_independence_margin": margin.map_or(Value::Null, num),
    });
    emit(&v, out)
}

fn boundary_json(ch: &ChannelPair, region: &RegionBoundary) -> Value {
    json!({
        "channel": channel_json(ch),
        "kind": serde_json::to_value(region.kind).expect("param kind serializes"),
        "points": region.points.iter().map(|p| json!([num(p.param), num(p.corner.r1), num(p.corner.r2)])).collect::<Vec<_>>(),
        "hull": region.hull.iter().map(|q| json!([num(q.r1), num(q.r2)])).collect::<Vec<_>>(),
        "r1_intercept_bits": num(region.r1_intercept()),
        "r2_intercept_bits": num(region.r2_intercept()),
        "union_gap_bits": region.union_gap.map_or(Value::Null, num),
    })
}

fn cmd_region(ch: &ChannelPair, cfg: &SweepConfig, out: &OutputArgs, beta_check: bool) -> CliResult<()> {
    let region = regions::capacity_region(ch, cfg)?;
    let ts = regions::time_sharing_region(ch)?;
    let beta = if beta_check {
        let b = regions::capacity_region_beta(ch, cfg)?;
        Some(hausdorff_distance(&region.hull, &b.hull))
    } else {
        None
    };
    let csv = boundary_csv(&region, beta);
    if out.out_csv.is_none() && out.out_json.is_none() && out.out_svg.is_none() {
        print!("{csv}");
        return Ok(());
    }
    let mut summary = boundary_json(ch, &region);
    summary["equal_rate_gap_bits"] = num(regions::equal_rate_gap(&region, &ts));
    summary["beta_hausdorff_bits"] = beta.map_or(Value::Null, num);
    if let Some(p) = &out.out_csv {
        write_file(p, csv.as_bytes())?;
    }
    if let Some(p) = &out.out_json {
        write_file(p, json_text(&summary).as_bytes())?;
    }
    if let Some(p) = &out.out_svg {
        write_file(p, region_svg(&region.hull, Some(&ts.hull)).as_bytes())?;
    }
    let brief = json!({
        "r1_intercept_bits": summary["r1_intercept_bits"],
        "r2_intercept_bits": summary["r2_intercept_bits"],
        "equal_rate_gap_bits": summary["equal_rate_gap_bits"],
        "beta_hausdorff_bits": summary["beta_hausdorff_bits"],
        "points": region.points.len(),
        "hull_vertices": region.hull.len(),
    });
    print!("{}", json_text(&brief));
    Ok(())
}

fn cmd_sdpc(ch: &ChannelPair, alpha: f64, out: Option<&Path>) -> CliResult<()> {
    let s = spectrum(ch)?;
    let cov = sdpc::optimal_covariances_with(ch, &s, alpha)?;
    let rates = sdpc::sdpc_rates(ch, &cov)?;
    let scale = rate_scale(ch);
    let g1 = regions::gamma1(ch, &s, alpha)?;
    let (g2, _) = regions::gamma2(ch, &s, alpha)?;
    let mut worst: f64 = 0.0;
    for k in 0..=100 {
        worst = worst.max(sdpc::sdpc_identity_gap_with(ch, &s, k as f64 / 100.0)?);
    }
    let v = json!({
        "channel": channel_json(ch),
        "alpha": num(alpha),
        "k_u1": matrix(&cov.k_u1),
        "k_u2": matrix(&cov.k_u2),
        "r1_bits": num(rates.r1),
        "r2_bits": num(rates.r2),
        "gamma1": num(g1),
        "gamma2": num(g2),
        "gamma_r1_bits": num((scale * g1.log2()).max(0.0)),
        "gamma_r2_bits": num((scale * g2.log2()).max(0.0)),
        "identity_gap": num(sdpc::sdpc_identity_gap_with(ch, &s, alpha)?),
        "max_identity_gap_101": num(worst),
    });
    emit(&v, out)
}

fn cmd_outer(ch: &ChannelPair, cfg: &SweepConfig, out: &OutputArgs, rho: Option<&str>, coarse: bool) -> CliResult<()> {
    let s = spectrum(ch)?;
    let rho = match rho {
        Some(text) => parse::parse_complex(text).map_err(|e| CliError::Config(format!("--rho: {e}")))?,
        None => sato::tightness_rho(&s, ch.h(), ch.g())?,
    };
    let inner = regions::capacity_region_with(ch, &s, cfg)?;
    let base = if coarse { CovSearchConfig::coarse() } else { CovSearchConfig::default() };
    let search = CovSearchConfig { sdpc_alphas: inner.params(), ..base };
    let outer = sato::outer_region(ch, rho, &search)?;
    let hausdorff = hausdorff_distance(&outer.hull, &inner.hull);
    let mut v = boundary_json(ch, &outer);
    v["rho"] = complex(rho);
    v["inner_hausdorff_bits"] = num(hausdorff);
    if let Some(p) = &out.out_csv {
        write_file(p, boundary_csv(&outer, None).as_bytes())?;
    }
    if let Some(p) = &out.out_svg {
        write_file(p, region_svg(&outer.hull, None).as_bytes())?;
    }
    if let Some(p) = &out.out_json {
        write_file(p, json_text(&v).as_bytes())?;
    }
    let brief = json!({
        "rho": v["rho"],
        "r1_intercept_bits": v["r1_intercept_bits"],
        "r2_intercept_bits": v["r2_intercept_bits"],
        "inner_hausdorff_bits": v["inner_hausdorff_bits"],
        "hull_vertices": outer.hull.len(),
    });
    print!("{}", json_text(&brief));
    Ok(())
}

fn cmd_audit(ch: &ChannelPair, cfg: &AuditConfig, out: Option<&Path>) -> CliResult<()> {
    let report = sato::audit_inner_outer(ch, cfg)?;
    let mut v = serde_json::to_value(&report).expect("report serializes");
    round_all(&mut v);
    v["passed"] = json!(report.passed());
    emit(&v, out)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Audit(format!(
            "audit failed: containment_ok = {}, worst excess {:e} bits",
            report.containment_ok, report.worst_excess
        )))
    }
}

fn round_all(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = num(x);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_all),
        Value::Object(map) => map.values_mut().for_each(round_all),
        _ => {}
    }
}

fn cmd_reproduce(ch: &ChannelPair, cfg: &SweepConfig, dir: &Path) -> CliResult<()> {
    let region = regions::capacity_region(ch, cfg)?;
    let ts = regions::time_sharing_region(ch)?;
    let gap = regions::equal_rate_gap(&region, &ts);
    let csv_path = dir.join("fig2.csv");
    let svg_path = dir.join("fig2.svg");
    write_file(&csv_path, boundary_csv(&region, None).as_bytes())?;
    write_file(&svg_path, region_svg(&region.hull, Some(&ts.hull)).as_bytes())?;
    let v = json!({
        "channel": channel_json(ch),
        "r1_max_bits": num(region.r1_intercept()),
        "r2_max_bits": num(region.r2_intercept()),
        "equal_rate_gap_bits": num(gap),
        "csv": csv_path.display().to_string(),
        "svg": svg_path.display().to_string(),
    });
    print!("{}", json_text(&v));
    Ok(())
}
