//! The `hurwitz` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::BoundTable;
use crate::construct::body::{body_by_name, convex_body_search};
use crate::construct::report::SearchReport;
use crate::construct::rescale::rescale;
use crate::construct::search::{
    ball_radius_for_volume, hlawka_search, minima_product_search, prepare_family, SearchConfig,
};
use crate::construct::testfn::TestFunction;
use crate::construct::LiftedLattice;
use crate::error::{Error, Result};
use crate::hlattice::HurwitzLattice;
use crate::minima::{minimal_vector_count, quaternionic_minima, DEFAULT_CAPACITY};
use crate::quat::{parse_rational, HurwitzInteger};
use crate::real::{format_sig, Precision, DEFAULT_PRECISION_BITS};
use crate::verify::run_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

/// `∫f` of the default ball in `search hlawka`.
pub const DEFAULT_BALL_VOLUME: f64 = 20.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "hurwitz", version, about = "Hurwitz quaternion lattices: minima, constructions and packing bounds")]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_BITS)]
    pub prec: usize,
    /// Master seed of every random stream.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Maximum number of enumerated vectors per query.
    #[arg(long, global = true, default_value_t = DEFAULT_CAPACITY)]
    pub capacity: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density bound table.
    Bounds {
        #[arg(long, default_value_t = BoundTable::DEFAULT_M_MIN)]
        m_min: u32,
        #[arg(long, default_value_t = BoundTable::DEFAULT_M_MAX)]
        m_max: u32,
    },
    /// Determinant, minima, minimal vectors and density of a lattice file.
    Analyze { file: PathBuf },
    /// Quaternionic successive minima with witnesses.
    Minima { file: PathBuf },
    /// Rescale a determinant-one lattice so that its minimal vectors have equal length.
    Rescale {
        file: PathBuf,
        /// Write the rescaled lattice here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Scale the input to determinant one first.
        #[arg(long)]
        normalize: bool,
    },
    /// Randomized lattice searches.
    Search {
        #[command(subcommand)]
        kind: SearchKind,
    },
    /// The 24 Hurwitz units.
    Units,
    /// Run the built-in self checks.
    Verify {
        #[arg(long, default_value = "all", value_parser = ["quat", "lattice", "minima", "construct", "bounds", "all"])]
        suite: String,
    },
}

#[derive(Debug, Args)]
pub struct SearchCommon {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Lift height as a rational, e.g. `1/4`; chosen by halving if absent.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Write the best lattice here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SearchKind {
    /// Minimize a ball count over translations.
    Hlawka {
        #[command(flatten)]
        common: SearchCommon,
        /// Ball radius; defaults to volume 20.
        #[arg(long)]
        ball_radius: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Count primitive vectors only.
        #[arg(long)]
        primitive: bool,
    },
    /// Find a lattice with a large product of minima.
    MinimaProduct {
        #[command(flatten)]
        common: SearchCommon,
        /// `r` as a fraction of the threshold radius.
        #[arg(long, default_value_t = 0.95)]
        margin: f64,
    },
    /// Find a lattice meeting a dilated invariant body only at 0.
    ConvexBody {
        #[command(flatten)]
        common: SearchCommon,
        #[arg(long, default_value = "ball", value_parser = ["ball", "polydisc", "cell24", "box"])]
        body: String,
        /// The dilate has volume `(24 - e) ζ(4m)`.
        #[arg(long, default_value_t = 1.0)]
        volume_epsilon: f64,
    },
}

struct Ctx {
    prec: Precision,
    seed: u64,
    format: Format,
    capacity: usize,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let prec = match Precision::new(cli.prec) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let ctx = Ctx { prec, seed: cli.seed, format: cli.format, capacity: cli.capacity };
    match dispatch(&ctx, cli.command, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Run(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

enum CliError {
    Usage(String),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(Error::Io(e))
    }
}

fn dispatch(ctx: &Ctx, cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Bounds { m_min, m_max } => {
            if m_min < 2 {
                return Err(CliError::Usage(format!("--m-min must be at least 2, got {m_min}")));
            }
            if m_max < m_min {
                return Err(CliError::Usage(format!("--m-max {m_max} is below --m-min {m_min}")));
            }
            let table = BoundTable::compute(m_min, m_max, ctx.prec)?;
            let text = match ctx.format {
                Format::Table => table.to_text(),
                Format::Csv => table.to_csv(),
            };
            write!(out, "{text}")?;
            Ok(EXIT_OK)
        }
        Command::Analyze { file } => {
            let l = HurwitzLattice::load(&file, ctx.prec)?;
            write_pairs(out, ctx.format, &analyze(&l, ctx.capacity)?)?;
            Ok(EXIT_OK)
        }
        Command::Minima { file } => {
            let l = HurwitzLattice::load(&file, ctx.prec)?;
            write_pairs(out, ctx.format, &minima_pairs(&l, ctx.capacity)?)?;
            Ok(EXIT_OK)
        }
        Command::Rescale { file, output, normalize } => {
            let mut l = HurwitzLattice::load(&file, ctx.prec)?;
            if normalize {
                l = l.normalized();
            }
            let r = rescale(&l, ctx.capacity)?;
            match output {
                Some(path) => {
                    r.lattice.save(&path)?;
                    let product = r.input_minima.product();
                    let pairs = vec![
                        ("input_minima".into(), join_reals(&r.input_minima.minima)),
                        ("product".into(), format_sig(product.to_f64(), 12)),
                        ("rescaled_minimum".into(), format_sig(r.expected_min.to_f64(), 12)),
                        ("determinant".into(), r.lattice.determinant().to_decimal(20)),
                        ("output".into(), path.display().to_string()),
                    ];
                    write_pairs(out, ctx.format, &pairs)?;
                }
                None => write!(out, "{}", r.lattice.to_json())?,
            }
            Ok(EXIT_OK)
        }
        Command::Search { kind } => search(ctx, kind, out),
        Command::Units => {
            let units = HurwitzInteger::units();
            let closed = units.iter().all(|a| units.iter().all(|b| units.contains(&(*a * *b))));
            match ctx.format {
                Format::Table => {
                    for (k, u) in units.iter().enumerate() {
                        writeln!(out, "{:>2}  {:?}  norm {}", k + 1, u, u.norm())?;
                    }
                    writeln!(out, "count {}, closed under multiplication: {closed}", units.len())?;
                }
                Format::Csv => {
                    writeln!(out, "index,a,b,c,d,norm")?;
                    for (k, u) in units.iter().enumerate() {
                        let [a, b, c, d] = u.to_quaternion().to_f64();
                        writeln!(out, "{},{a},{b},{c},{d},{}", k + 1, u.norm())?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => {
            let checks = run_suite(&suite, ctx.prec, ctx.capacity)
                .ok_or_else(|| CliError::Usage(format!("unknown suite {suite:?}")))?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let detail = if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) };
                writeln!(out, "{status} {}: {}{detail}", c.suite, c.name)?;
            }
            writeln!(out, "{} checks, {failed} failed", checks.len())?;
            Ok(if failed == 0 { EXIT_OK } else { EXIT_ERROR })
        }
    }
}

fn join_reals(xs: &[crate::real::Real]) -> String {
    xs.iter().map(|x| format_sig(x.to_f64(), 12)).collect::<Vec<_>>().join(" ")
}

/// The `analyze` fields.
pub fn analyze(l: &HurwitzLattice, capacity: usize) -> Result<Vec<(String, String)>> {
    let rep = quaternionic_minima(l, capacity)?;
    let count = minimal_vector_count(l, &rep.exact_norms_sq[0], capacity)?;
    Ok(vec![
        ("m".into(), l.m().to_string()),
        ("dimension".into(), l.dimension().to_string()),
        ("determinant".into(), l.determinant().to_decimal(20)),
        ("minima".into(), join_reals(&rep.minima)),
        ("product_of_minima".into(), format_sig(rep.product().to_f64(), 12)),
        ("minimal_vectors".into(), count.to_string()),
        ("divisible_by_24".into(), (count % 24 == 0).to_string()),
        ("density".into(), format_sig(l.density(&rep.minima[0])?.to_f64(), 12)),
    ])
}

fn minima_pairs(l: &HurwitzLattice, capacity: usize) -> Result<Vec<(String, String)>> {
    let rep = quaternionic_minima(l, capacity)?;
    let count = minimal_vector_count(l, &rep.exact_norms_sq[0], capacity)?;
    let mut pairs = Vec::new();
    for (k, (min, w)) in rep.minima.iter().zip(&rep.witnesses).enumerate() {
        pairs.push((format!("min_{}", k + 1), format_sig(min.to_f64(), 12)));
        let z: Vec<String> = w.z.iter().map(i64::to_string).collect();
        pairs.push((format!("witness_{}", k + 1), z.join(" ")));
        let coords: Vec<String> = w.ambient.iter().map(|q| q.to_string()).collect();
        pairs.push((format!("vector_{}", k + 1), coords.join(" ")));
    }
    pairs.push(("minimal_vectors".into(), count.to_string()));
    pairs.push(("divisible_by_24".into(), (count % 24 == 0).to_string()));
    Ok(pairs)
}

fn write_pairs(out: &mut dyn Write, format: Format, pairs: &[(String, String)]) -> std::io::Result<()> {
    match format {
        Format::Table => {
            let w = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in pairs {
                writeln!(out, "{k:<w$}  {v}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "key,value")?;
            for (k, v) in pairs {
                let v = if v.contains(',') { format!("\"{v}\"") } else { v.clone() };
                writeln!(out, "{k},{v}")?;
            }
        }
    }
    Ok(())
}

fn parse_alpha(s: &Option<String>) -> Result<Option<num_rational::BigRational>, CliError> {
    s.as_deref().map(|a| parse_rational(a).map_err(|e| CliError::Usage(e.to_string()))).transpose()
}

fn finish(
    ctx: &Ctx,
    common: &SearchCommon,
    report: SearchReport,
    best: &LiftedLattice,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut report = report;
    if report.success {
        if let Some(path) = &common.output {
            let comment = format!("{} search, seed {}, sample {}", report.kind, ctx.seed, report.details["best_index"]);
            best.result.clone().with_comment(comment).save(path)?;
            report = report.with_lattice_file(Some(path.display().to_string()));
        }
    }
    if let Some(path) = &common.report {
        write_file(path, &report.to_json())?;
    }
    let text = match ctx.format {
        Format::Table => report.to_text(),
        Format::Csv => report.to_csv(),
    };
    write!(out, "{text}")?;
    Ok(if report.success { EXIT_OK } else { EXIT_EXHAUSTED })
}

fn write_file(path: &Path, text: &str) -> std::io::Result<()> {
    std::fs::write(path, text)
}

fn search(ctx: &Ctx, kind: SearchKind, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = |common: &SearchCommon, primitive_only: bool| SearchConfig {
        samples: common.samples,
        seed: ctx.seed,
        primitive_only,
        capacity: ctx.capacity,
    };
    match kind {
        SearchKind::Hlawka { common, ball_radius, epsilon, primitive } => {
            if common.samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let radius = ball_radius.unwrap_or_else(|| ball_radius_for_volume(common.m, DEFAULT_BALL_VOLUME));
            let f = TestFunction::ball(radius)?;
            let (family, eps) = prepare_family(common.m, &f, parse_alpha(&common.alpha)?, epsilon, None, ctx.prec)?;
            let c = cfg(&common, primitive);
            let h = hlawka_search(&family, &f, eps, &c)?;
            let mut report = SearchReport::hlawka(&c, &h);
            report.details.insert("ball_radius".into(), serde_json::Value::from(format_sig(radius, 12)));
            finish(ctx, &common, report, &h.best, out)
        }
        SearchKind::MinimaProduct { common, margin } => {
            if common.samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let c = cfg(&common, true);
            let o = minima_product_search(common.m, margin, parse_alpha(&common.alpha)?, &c, ctx.prec)?;
            let report = SearchReport::minima_product(&c, &o);
            finish(ctx, &common, report, &o.search.best, out)
        }
        SearchKind::ConvexBody { common, body, volume_epsilon } => {
            if common.samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let b = body_by_name(&body, common.m)?;
            let c = cfg(&common, true);
            let o = convex_body_search(b.as_ref(), volume_epsilon, parse_alpha(&common.alpha)?, &c, ctx.prec)?;
            let report = SearchReport::convex_body(&c, &o);
            finish(ctx, &common, report, &o.best, out)
        }
    }
}
