//! Command-line front end. [`run`] takes an argv and two sinks and returns
//! the process exit code, so it can be driven from tests and fuzzers.
//!
//! Exit codes: 0 success, 1 domain error, 2 budget exceeded, 3 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use wps_core::census::{self, CensusRecord, IdpCensusRecord};
use wps_core::cone_oracle::{hilbert_basis, DEFAULT_POINT_CAP};
use wps_core::ehrhart::{g_poly, geometric_series, h_star};
use wps_core::families::{self, FamilyKind, FamilySpec};
use wps_core::reflexive_idp::{is_idp, necessary_report, IdpReport};
use wps_core::stabilization::{check_large_m_shape, stabilize};
use wps_core::weights::reflexive_context;
use wps_core::{Error, WeightVector};

pub const SCHEMA_PREFIX: &str = "wps.cli";

const EXIT_DOMAIN: i32 = 1;
const EXIT_BUDGET: i32 = 2;
const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "wps", version, about = "Reflexive and IDP simplices Δ(1,q)")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    json: bool,
    /// Point / pair budget for brute-force enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_POINT_CAP)]
    max_points: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reflexivity, necessary condition and IDP test.
    Check {
        q: String,
        #[arg(long)]
        necessary_only: bool,
    },
    /// h*-polynomial coefficients, ascending.
    Hstar {
        q: String,
        /// Also print ell, g and the verified factorization.
        #[arg(long)]
        factor: bool,
    },
    /// Hilbert basis of the cone over Δ(1,q).
    Hilbert { q: String },
    /// Generate a classified family member.
    Family(FamilyArgs),
    /// Reflexive stabilization rs(q, m).
    Stabilize {
        q: String,
        #[arg(short, long, default_value_t = 1)]
        m: u128,
        /// Also print the large-m shape report.
        #[arg(long)]
        report: bool,
    },
    /// Enumeration experiments.
    #[command(subcommand)]
    Census(CensusCommand),
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// one, two-1, two-2, i..viii, free-sum, boundary-1, boundary-2
    kind: String,
    /// Multiplicities, e.g. 1,2,3 (x1,x2 for viii).
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    k: Option<u128>,
    #[arg(long)]
    s: Option<u128>,
    #[arg(long)]
    n: Option<u128>,
    /// Free-sum operands.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    w: Option<String>,
}

#[derive(Subcommand, Debug)]
enum CensusCommand {
    /// un(M) per M, exact or sampled.
    Un {
        #[arg(long, default_value_t = 2)]
        m_min: u128,
        #[arg(long)]
        m_max: u128,
        #[arg(long, conflicts_with = "sample")]
        exact: bool,
        #[arg(long)]
        sample: Option<u128>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; .csv or .json selects the format.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall time in milliseconds (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// IDP census over distinct-part r-vectors.
    Idp {
        #[arg(long)]
        m_max: u128,
        /// Directory holding a resumable checkpoint.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(e) if e.is_budget() => EXIT_BUDGET,
            Failure::Core(e) if e.is_usage() || matches!(e, Error::InvalidParams(_)) => EXIT_USAGE,
            Failure::Core(_) | Failure::Io(_) => EXIT_DOMAIN,
            Failure::Usage(_) => EXIT_USAGE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
        }
    }
}

type Out<'a> = &'a mut dyn Write;
type Res<T = ()> = Result<T, Failure>;

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.workers {
        Some(0) => Err(Failure::Usage("--workers must be positive".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                // The sink need not be Send; buffer inside the pool.
                let mut buf = Vec::new();
                let r = pool.install(|| dispatch(&cli, &mut buf));
                out.write_all(&buf).map_err(Failure::from).and(r)
            }
            Err(e) => Err(Failure::Io(e.to_string())),
        },
        None => dispatch(&cli, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn format_of(cli: &Cli) -> Format {
    if cli.json {
        Format::Json
    } else {
        cli.format
    }
}

fn parse_q(text: &str) -> Res<WeightVector> {
    text.parse::<WeightVector>().map_err(Failure::Core)
}

fn emit_json(out: Out, value: &Value) -> Res {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn schema(name: &str) -> String {
    format!("{SCHEMA_PREFIX}.{name}/1")
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
}

fn csv_writer(out: Out<'_>) -> csv::Writer<&'_ mut dyn Write> {
    csv::Writer::from_writer(out)
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Io(e.to_string())
}

fn dispatch(cli: &Cli, out: Out) -> Res {
    let fmt = format_of(cli);
    match &cli.command {
        Command::Check { q, necessary_only } => cmd_check(fmt, out, q, *necessary_only),
        Command::Hstar { q, factor } => cmd_hstar(fmt, out, q, *factor),
        Command::Hilbert { q } => cmd_hilbert(fmt, out, q, cli.max_points),
        Command::Family(args) => cmd_family(fmt, out, args),
        Command::Stabilize { q, m, report } => cmd_stabilize(fmt, out, q, *m, *report),
        Command::Census(CensusCommand::Un {
            m_min,
            m_max,
            exact,
            sample,
            seed,
            out: path,
            timing,
        }) => {
            let mode = match (exact, sample) {
                (_, Some(n)) => UnMode::Sampled(*n, *seed),
                _ => UnMode::Exact,
            };
            cmd_census_un(fmt, out, *m_min, *m_max, mode, path.as_deref(), *timing)
        }
        Command::Census(CensusCommand::Idp {
            m_max,
            checkpoint,
            out: path,
        }) => cmd_census_idp(fmt, out, *m_max, checkpoint.as_deref(), path.as_deref()),
    }
}

fn witness_json(r: &IdpReport) -> Value {
    if let Some(w) = r.idp_witness {
        json!({"kind": "idp", "j": w.j, "value": w.value, "b": w.b, "height": w.height})
    } else if let Some(w) = r.necessary_witness {
        json!({"kind": "necessary", "j": w.j, "value": w.value})
    } else {
        Value::Null
    }
}

fn report_line(r: &IdpReport) -> String {
    let idp = match r.is_idp {
        Some(b) => b.to_string(),
        None => "undetermined".to_string(),
    };
    let mut line = format!(
        "reflexive={} necessary={} idp={}",
        r.is_reflexive, r.satisfies_necessary, idp
    );
    if let Some(w) = r.idp_witness {
        line.push_str(&format!(" witness: j={} q_j={} b={} height={}", w.j, w.value, w.b, w.height));
    } else if let Some(w) = r.necessary_witness {
        line.push_str(&format!(" necessary fails at j={} q_j={}", w.j, w.value));
    }
    line
}

fn check_json(q: &WeightVector, r: &IdpReport) -> Value {
    json!({
        "schema": schema("check"),
        "q": q,
        "n": q.len(),
        "N": q.normalized_volume(),
        "reflexive": r.is_reflexive,
        "necessary": r.satisfies_necessary,
        "idp": r.is_idp,
        "witness": witness_json(r),
    })
}

fn cmd_check(fmt: Format, out: Out, q: &str, necessary_only: bool) -> Res {
    let q = parse_q(q)?;
    let report = if necessary_only {
        necessary_report(&q)
    } else {
        is_idp(&q)?
    };
    match fmt {
        Format::Json => emit_json(out, &check_json(&q, &report)),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["q", "n", "N", "reflexive", "necessary", "idp"]).map_err(csv_err)?;
            let idp = report.is_idp.map_or(String::new(), |b| b.to_string());
            w.write_record([
                q.to_string(),
                q.len().to_string(),
                q.normalized_volume().to_string(),
                report.is_reflexive.to_string(),
                report.satisfies_necessary.to_string(),
                idp,
            ])
            .map_err(csv_err)?;
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "q = {q}")?;
            writeln!(out, "{}", report_line(&report))?;
            Ok(())
        }
    }
}

fn cmd_hstar(fmt: Format, out: Out, q: &str, factor: bool) -> Res {
    let q = parse_q(q)?;
    let h = h_star(&q)?;
    let ell = reflexive_context(&q).ok().map(|ctx| ctx.ell);
    let factorization = if factor {
        let ctx = reflexive_context(&q)?;
        let g = g_poly(q.support_form(), &ctx)?;
        let verified = geometric_series(ctx.ell).mul(&g)? == h;
        Some((ctx.ell, g, verified))
    } else {
        None
    };
    let unimodal = h.is_unimodal();
    let palindromic = h.is_palindromic(q.len() as usize);
    match fmt {
        Format::Json => {
            let mut v = json!({
                "schema": schema("hstar"),
                "q": q,
                "n": q.len(),
                "N": q.normalized_volume(),
                "hstar": h,
                "ell": ell,
                "g": factorization.as_ref().map(|f| &f.1),
                "unimodal": unimodal,
                "palindromic": palindromic,
            });
            if let Some((_, _, verified)) = &factorization {
                v["factorization_verified"] = json!(verified);
            }
            emit_json(out, &v)
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["degree", "coefficient"]).map_err(csv_err)?;
            for (k, c) in h.coeffs().iter().enumerate() {
                w.write_record([k.to_string(), c.to_string()]).map_err(csv_err)?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{}", join(h.coeffs(), " "))?;
            if let Some((ell, g, verified)) = &factorization {
                writeln!(out, "ell = {ell}")?;
                writeln!(out, "g = {}", join(g.coeffs(), " "))?;
                writeln!(
                    out,
                    "h* = (1 + ... + z^{}) * g: {}",
                    ell - 1,
                    if *verified { "verified" } else { "FAILED" }
                )?;
            }
            Ok(())
        }
    }
}

fn cmd_hilbert(fmt: Format, out: Out, q: &str, cap: u128) -> Res {
    let q = parse_q(q)?;
    let basis = hilbert_basis(&q, cap)?;
    let rows: Vec<Vec<i128>> = basis.iter().map(|p| p.to_row()).collect();
    match fmt {
        Format::Json => emit_json(
            out,
            &json!({
                "schema": schema("hilbert"),
                "q": q,
                "count": rows.len(),
                "max_height": basis.iter().map(|p| p.height).max(),
                "basis": rows,
            }),
        ),
        Format::Csv => {
            let mut w = csv_writer(out);
            let mut header = vec!["height".to_string()];
            header.extend((1..=q.len()).map(|i| format!("y{i}")));
            w.write_record(&header).map_err(csv_err)?;
            for r in &rows {
                w.write_record(r.iter().map(|v| v.to_string())).map_err(csv_err)?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for r in &rows {
                writeln!(out, "{}", join(r, " "))?;
            }
            Ok(())
        }
    }
}

fn family_spec(args: &FamilyArgs) -> Res<FamilySpec> {
    let kind: FamilyKind = args.kind.parse()?;
    let x = match &args.x {
        Some(t) => Some(families::parse_params(t)?),
        None => None,
    };
    let need_x = |len: usize| -> Res<Vec<u128>> {
        match &x {
            Some(v) if v.len() == len => Ok(v.clone()),
            Some(v) => Err(Failure::Usage(format!(
                "{kind} takes {len} values in --x, got {}",
                v.len()
            ))),
            None => Err(Failure::Usage(format!("{kind} needs --x with {len} values"))),
        }
    };
    let need = |v: Option<u128>, name: &str| -> Res<u128> {
        v.ok_or_else(|| Failure::Usage(format!("{kind} needs --{name}")))
    };
    let spec = match kind {
        FamilyKind::OneSupp => FamilySpec::OneSupp { x: need_x(1)?[0] },
        FamilyKind::TwoSupp1 => {
            let x = need_x(2)?;
            FamilySpec::TwoSupp1 { x: [x[0], x[1]] }
        }
        FamilyKind::TwoSupp2 => {
            let x = need_x(2)?;
            FamilySpec::TwoSupp2 { x: [x[0], x[1]] }
        }
        FamilyKind::ThreeSupp(families::ThreeType::Viii) => {
            let x = need_x(2)?;
            FamilySpec::ThreeSuppViii {
                x1: x[0],
                x2: x[1],
                k: need(args.k, "k")?,
                s: need(args.s, "s")?,
            }
        }
        FamilyKind::ThreeSupp(t) => {
            let x = need_x(3)?;
            FamilySpec::ThreeSupp {
                kind: t,
                x: [x[0], x[1], x[2]],
            }
        }
        FamilyKind::FreeSum => {
            let p = args.p.as_deref().ok_or_else(|| Failure::Usage("free-sum needs --p".into()))?;
            let w = args.w.as_deref().ok_or_else(|| Failure::Usage("free-sum needs --w".into()))?;
            FamilySpec::FreeSum {
                p: parse_q(p)?,
                w: parse_q(w)?,
            }
        }
        FamilyKind::Boundary1 => FamilySpec::Boundary1 { n: need(args.n, "n")? },
        FamilyKind::Boundary2 => FamilySpec::Boundary2 { n: need(args.n, "n")? },
    };
    Ok(spec)
}

fn cmd_family(fmt: Format, out: Out, args: &FamilyArgs) -> Res {
    let spec = family_spec(args)?;
    let q = families::generate(&spec)?;
    let report = is_idp(&q)?;
    match fmt {
        Format::Json => {
            let mut v = check_json(&q, &report);
            v["schema"] = json!(schema("family"));
            v["kind"] = json!(spec.kind().name());
            emit_json(out, &v)
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["kind", "q", "reflexive", "necessary", "idp"]).map_err(csv_err)?;
            w.write_record([
                spec.kind().name().to_string(),
                q.to_string(),
                report.is_reflexive.to_string(),
                report.satisfies_necessary.to_string(),
                report.is_idp.map_or(String::new(), |b| b.to_string()),
            ])
            .map_err(csv_err)?;
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "{q}")?;
            writeln!(out, "{}", report_line(&report))?;
            Ok(())
        }
    }
}

fn cmd_stabilize(fmt: Format, out: Out, q: &str, m: u128, report: bool) -> Res {
    let q = parse_q(q)?;
    let st = stabilize(&q, m)?;
    let shape = if report {
        Some(check_large_m_shape(&q, m)?)
    } else {
        None
    };
    match fmt {
        Format::Json => emit_json(
            out,
            &json!({
                "schema": schema("stabilize"),
                "q": q,
                "rsn": st.rsn,
                "m": m,
                "effective_m": st.m,
                "lcm": st.lcm,
                "stabilized": st.stabilized,
                "report": shape,
            }),
        ),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["q", "m", "rsn", "stabilized"]).map_err(csv_err)?;
            w.write_record([q.to_string(), m.to_string(), st.rsn.to_string(), st.stabilized.to_string()])
                .map_err(csv_err)?;
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(out, "rsn = {}", st.rsn)?;
            writeln!(out, "rs = {}", st.stabilized.to_compact_string())?;
            if let Some(s) = shape {
                writeln!(
                    out,
                    "ell = {} bound = {} threshold_met = {} coeffs_only_1_2 = {} unimodal = {}",
                    s.ell, s.bound, s.threshold_met, s.coeffs_only_1_2, s.unimodal
                )?;
            }
            Ok(())
        }
    }
}

enum UnMode {
    Exact,
    Sampled(u128, u64),
}

/// Format from the file extension, falling back to `--format`.
fn file_format(path: Option<&Path>, fmt: Format) -> Format {
    match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        _ => fmt,
    }
}

fn write_to(path: Option<&Path>, out: Out, body: &[u8]) -> Res {
    match path {
        Some(p) => fs::write(p, body)?,
        None => out.write_all(body)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct UnCsvRow<'a> {
    #[serde(rename = "M")]
    m: String,
    count: String,
    unimodal_count: String,
    un_fraction: f64,
    mode: &'a str,
    seed: Option<u64>,
    ms: Option<u64>,
}

fn cmd_census_un(
    fmt: Format,
    out: Out,
    m_min: u128,
    m_max: u128,
    mode: UnMode,
    path: Option<&Path>,
    timing: bool,
) -> Res {
    if m_min < 2 || m_max < m_min {
        return Err(Failure::Usage("need 2 <= --m-min <= --m-max".into()));
    }
    let mut records: Vec<CensusRecord> = Vec::new();
    for m in m_min..=m_max {
        let start = Instant::now();
        let mut rec = match mode {
            UnMode::Exact => census::un_exact(m)?,
            UnMode::Sampled(n, seed) => census::un_sampled(m, n, seed)?,
        };
        if timing {
            rec.ms = Some(start.elapsed().as_millis() as u64);
        }
        records.push(rec);
    }
    let body = match file_format(path, fmt) {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "schema": census::UN_SCHEMA,
                "version": census::VERSION,
                "records": records,
            }))
            .map_err(|e| Failure::Io(e.to_string()))?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &records {
                w.serialize(UnCsvRow {
                    m: r.m.to_string(),
                    count: r.evaluated.to_string(),
                    unimodal_count: r.count_unimodal.to_string(),
                    un_fraction: r.un_fraction,
                    mode: r.mode.as_str(),
                    seed: r.seed,
                    ms: r.ms,
                })
                .map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Failure::Io(e.to_string()))?
        }
        Format::Text => {
            let mut s = String::new();
            for r in &records {
                s.push_str(&format!(
                    "M={} count={} unimodal={} un={} ({:.6})",
                    r.m, r.evaluated, r.count_unimodal, r.un_exact, r.un_fraction
                ));
                if let Some(h) = r.ci_half_width {
                    s.push_str(&format!(" ±{h:.6}"));
                }
                s.push('\n');
            }
            s.into_bytes()
        }
    };
    write_to(path, out, &body)
}

const CHECKPOINT_FILE: &str = "idp-census.json";

fn cmd_census_idp(
    fmt: Format,
    out: Out,
    m_max: u128,
    checkpoint: Option<&Path>,
    path: Option<&Path>,
) -> Res {
    let resume = match checkpoint {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let file = dir.join(CHECKPOINT_FILE);
            if file.exists() {
                Some(IdpCensusRecord::from_json(&fs::read_to_string(&file)?)?)
            } else {
                None
            }
        }
        None => None,
    };
    let resume = resume.map(|r| r.truncated(m_max));
    let rec = census::idp_census_resume(m_max, resume, |partial| {
        if let Some(dir) = checkpoint {
            let tmp = dir.join(format!("{CHECKPOINT_FILE}.tmp"));
            let write = fs::write(&tmp, partial.to_json())
                .and_then(|_| fs::rename(&tmp, dir.join(CHECKPOINT_FILE)));
            write.map_err(|e| Error::Domain(format!("checkpoint: {e}")))?;
        }
        Ok(())
    })?;
    let body = match file_format(path, fmt) {
        Format::Json => {
            let mut s = rec.to_json();
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["M", "r_vectors", "box_points", "reflexive", "necessary", "idp"])
                .map_err(csv_err)?;
            for r in &rec.rows {
                w.write_record([r.m, r.r_vectors, r.box_points, r.reflexive, r.necessary, r.idp].map(|v| v.to_string()))
                    .map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Failure::Io(e.to_string()))?
        }
        Format::Text => format!(
            "M_max={} r_vectors={} idp_reflexives={}\n",
            rec.m_max, rec.count_r_vectors, rec.count_idp_reflexives
        )
        .into_bytes(),
    };
    write_to(path, out, &body)
}
