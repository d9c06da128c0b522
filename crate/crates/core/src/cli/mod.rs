//! Command-line interface. Every command prints one JSON document; all
//! numbers in it are decimal strings.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 a checked identity
//! failed, 4 a resource cap was hit.

pub mod format;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::attenuated::SpaceParams;
use crate::census;
use crate::clsets::{self, ClContext, Level};
use crate::counting;
use crate::error::Error;
use crate::search::{self, Method, SearchOptions};
use crate::serde_util::rational_to_string;
use crate::spectral;
use crate::vertexset::VertexSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IDENTITY: i32 = 3;
pub const EXIT_CAP: i32 = 4;

const DEFAULT_BUDGET: u128 = 1 << 22;

#[derive(Parser, Debug)]
#[command(name = "clforms", version, about = "Cameron-Liebler sets in bilinear forms graphs")]
struct Cli {
    /// Worker threads for parallel steps; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a closed-form count, optionally against a brute-force census.
    Count(CountArgs),
    /// Decide whether a vertex-set file is a Cameron-Liebler set.
    Verify(VerifyArgs),
    /// Write example Cameron-Liebler sets and spreads as vertex-set files.
    Construct(ConstructArgs),
    /// Enumerate Cameron-Liebler sets.
    Search(SearchArgs),
    /// Check the spectral identities exactly.
    Spectra(ParamArgs),
    /// Evaluate the classification inequalities over a parameter grid.
    Inequalities(IneqArgs),
    /// Try to decompose a Cameron-Liebler set into intersecting families.
    Classify(ClassifyArgs),
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
}

impl ParamArgs {
    fn params(&self) -> Result<SpaceParams, Error> {
        SpaceParams::new(self.q, self.n, self.l)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Formula {
    #[value(name = "gaussian_binomial")]
    GaussianBinomial,
    #[value(name = "rank_count")]
    RankCount,
    #[value(name = "rank_m")]
    RankM,
    #[value(name = "count_through")]
    CountThrough,
    #[value(name = "count_disjoint_pair")]
    CountDisjointPair,
    #[value(name = "delta")]
    Delta,
    #[value(name = "c")]
    C,
    #[value(name = "hyperplane_disjoint")]
    HyperplaneDisjoint,
    #[value(name = "d_km")]
    DKm,
    #[value(name = "x_km")]
    XKm,
    #[value(name = "z_km")]
    ZKm,
    #[value(name = "z_0m")]
    Z0m,
    #[value(name = "w_i")]
    WI,
    #[value(name = "w")]
    W,
    #[value(name = "w_sigma")]
    WSigma,
    #[value(name = "w_sigma_bar")]
    WSigmaBar,
    #[value(name = "lemma46")]
    Lemma46,
    #[value(name = "s1")]
    S1,
    #[value(name = "kneser_eigenvalue")]
    KneserEigenvalue,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    /// Defaults to `n`.
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, value_enum)]
    formula: Formula,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    x: Option<u64>,
    /// For `hyperplane_disjoint`: whether the fixed vertex lies in the hyperplane.
    #[arg(long)]
    pi_in_v: bool,
    /// Also run the brute-force census and compare.
    #[arg(long)]
    oracle: bool,
    /// Enumeration budget for the census.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum LevelArg {
    Fast,
    Full,
    /// Full when the spectral matrices fit, fast otherwise.
    Auto,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = LevelArg::Auto)]
    level: LevelArg,
    /// Seed for the sampled spreads.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    #[value(name = "empty")]
    Empty,
    #[value(name = "full")]
    Full,
    /// Pencil of the `--index`-th point in canonical order.
    #[value(name = "pencil")]
    Pencil,
    /// Union of the first `--k` footnote pencils.
    #[value(name = "footnote_pencils")]
    FootnotePencils,
    /// Vertex set of the `--index`-th footnote hyperplane.
    #[value(name = "hyperplane")]
    Hyperplane,
    #[value(name = "pencil_plus_hyperplane")]
    PencilPlusHyperplane,
    #[value(name = "hyperplane_union")]
    HyperplaneUnion,
    #[value(name = "nontrivial_family")]
    NontrivialFamily,
    /// Field spread with multiplier seed `--seed`, transformed by `--transform`.
    #[value(name = "spread")]
    Spread,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(flatten)]
    p: ParamArgs,
    #[arg(long, value_enum, required_unless_present = "all")]
    kind: Option<Kind>,
    #[arg(long, default_value_t = 0)]
    index: u64,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long, default_value_t = 1)]
    y: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    transform: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write every standard construction into `--out-dir`.
    #[arg(long, requires = "out_dir")]
    all: bool,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum MethodArg {
    #[value(name = "full_power_set")]
    FullPowerSet,
    #[value(name = "fixed_x_subsets")]
    FixedXSubsets,
    #[value(name = "kernel_constrained")]
    KernelConstrained,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    p: ParamArgs,
    #[arg(long)]
    x: Option<u64>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[arg(long, default_value_t = search::DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock time (makes the report non-reproducible).
    #[arg(long)]
    elapsed: bool,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write one vertex-set file per found set into this directory.
    #[arg(long)]
    sets_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum WSigmaSource {
    /// Closed form (the average over points of `Σ`).
    Formula,
    /// Largest per-point value found by census.
    #[value(name = "census_max")]
    CensusMax,
}

#[derive(Args, Debug)]
struct IneqArgs {
    /// For example `q=2,3;n=2;l=4..6`, optionally with `x=...`.
    #[arg(long)]
    grid: String,
    #[arg(long, value_enum, default_value_t = WSigmaSource::Formula)]
    w_sigma: WSigmaSource,
    #[arg(long, default_value_t = 1 << 26)]
    budget: u128,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    file: PathBuf,
    #[arg(long, default_value_t = clsets::CLASSIFY_BUDGET)]
    budget: u64,
}

/// A failed command: exit code and message.
#[derive(Debug)]
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Fail(code, e.to_string())
    }
}

fn io_fail(path: &Path, e: std::io::Error) -> Fail {
    Fail(EXIT_USAGE, format!("{}: {e}", path.display()))
}

type Outcome = Result<(Value, i32), Fail>;

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let to_out = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if to_out { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if to_out { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(cli.cmd)),
            Err(e) => Err(Fail(EXIT_USAGE, e.to_string())),
        },
        None => dispatch(cli.cmd),
    };
    match result {
        Ok((v, code)) => {
            // A bare string is a vertex-set file, written verbatim.
            let _ = match &v {
                Value::String(text) => write!(out, "{text}"),
                _ => writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json")),
            };
            code
        }
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "{}", json!({ "error": msg }));
            code
        }
    }
}

fn dispatch(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Count(a) => cmd_count(&a),
        Cmd::Verify(a) => cmd_verify(&a),
        Cmd::Construct(a) => cmd_construct(&a),
        Cmd::Search(a) => cmd_search(&a),
        Cmd::Spectra(a) => cmd_spectra(&a),
        Cmd::Inequalities(a) => cmd_inequalities(&a),
        Cmd::Classify(a) => cmd_classify(&a),
    }
}

fn s<T: ToString>(v: T) -> Value {
    Value::String(v.to_string())
}

fn params_json(sp: &SpaceParams) -> Value {
    json!({ "q": s(sp.q()), "n": s(sp.n()), "l": s(sp.l()) })
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, Fail> {
    v.ok_or_else(|| Fail(EXIT_USAGE, format!("this formula needs --{name}")))
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(s).collect())
}

fn rat(v: &Option<BigRational>) -> Value {
    v.as_ref().map(|r| s(rational_to_string(r))).unwrap_or(Value::Null)
}

fn cmd_count(a: &CountArgs) -> Outcome {
    let l = a.l.unwrap_or(a.n);
    let sp = SpaceParams::new(a.q, a.n, l)?;
    let f = sp.field();
    let (q, n, b) = (a.q, a.n, a.budget);
    let mut params = Map::new();
    for (k, v) in [("q", Some(q as u64)), ("n", Some(n as u64)), ("l", Some(l as u64))]
        .into_iter()
        .chain([("k", a.k), ("m", a.m), ("i", a.i), ("j", a.j)].map(|(k, v)| (k, v.map(|x| x as u64))))
        .chain([("x", a.x)])
    {
        if let Some(v) = v {
            params.insert(k.into(), s(v));
        }
    }
    let mut extra = Map::new();
    let u = |v: usize| v as u32;
    let (value, oracle): (Value, Option<Value>) = match a.formula {
        Formula::GaussianBinomial => {
            let k = need(a.k, "k")?;
            let v = counting::gbinom(n as i64, k as i64, q);
            (s(v), a.oracle.then(|| census::gaussian_binomial(f, n, k, b).map(s)).transpose()?)
        }
        Formula::RankCount => {
            let m = need(a.m, "m")?;
            let v = counting::rank_count(u(n), u(l), u(m), q)?.value;
            (s(v), a.oracle.then(|| census::rank_count(f, n, l, m, b).map(s)).transpose()?)
        }
        Formula::RankM => {
            let v = counting::spectra(&sp).rank_m;
            let o = a.oracle.then(|| spectral::build_incidence(&sp).map(|i| s(i.matrix.rank()))).transpose()?;
            (s(v), o)
        }
        Formula::CountThrough => {
            let (i, j) = (need(a.i, "i")?, need(a.j, "j")?);
            let v = counting::count_through(i, j, &sp)?.value;
            (s(v), a.oracle.then(|| census::count_through(&sp, i, j, b).map(s)).transpose()?)
        }
        Formula::CountDisjointPair => {
            let v = counting::count_disjoint_pair(&sp).value;
            (s(v), a.oracle.then(|| census::count_disjoint_pair(&sp, b).map(s)).transpose()?)
        }
        Formula::Delta | Formula::C => {
            let v = if a.formula == Formula::Delta { counting::delta(&sp) } else { counting::c_count(&sp) }.value;
            let o = a
                .oracle
                .then(|| census::delta_and_c(&sp, b).map(|(d, c)| s(if a.formula == Formula::Delta { d } else { c })))
                .transpose()?;
            (s(v), o)
        }
        Formula::HyperplaneDisjoint => {
            let v = counting::count_hyperplane_disjoint(&sp, a.pi_in_v).value;
            (s(v), a.oracle.then(|| census::count_hyperplane_disjoint(&sp, a.pi_in_v, b).map(s)).transpose()?)
        }
        Formula::DKm | Formula::XKm | Formula::ZKm => {
            let (k, m) = (need(a.k, "k")?, need(a.m, "m")?);
            let (v, o) = match a.formula {
                Formula::DKm => (counting::d_km(q, u(n), u(k), u(m))?, a.oracle.then(|| census::d_km(f, n, k, m, b))),
                Formula::XKm => (counting::x_km(q, u(n), u(k), u(m))?, a.oracle.then(|| census::x_km(f, n, k, m, b))),
                _ => (counting::z_km(q, u(n), u(k), u(m))?, a.oracle.then(|| census::z_km(f, n, k, m, b))),
            };
            (s(v.value), o.transpose()?.map(s))
        }
        Formula::Z0m => {
            let m = need(a.m, "m")?;
            let v = counting::z_0m(q, u(n), u(m))?.value;
            (s(v), a.oracle.then(|| census::z_0m(f, n, m, b).map(s)).transpose()?)
        }
        Formula::WI | Formula::W => {
            let w = counting::w_counts(&sp);
            let o = a.oracle.then(|| census::w_i(&sp, b)).transpose()?;
            if a.formula == Formula::WI {
                (ints(&w.w_i), o.map(|v| ints(&v)))
            } else {
                (s(w.w), o.map(|v| s(v.iter().sum::<BigInt>())))
            }
        }
        Formula::WSigma | Formula::WSigmaBar => {
            let w = counting::w_counts(&sp);
            let (v, c) = if a.formula == Formula::WSigma {
                (rat(&w.w_sigma), a.oracle.then(|| census::w_sigma(&sp, b)))
            } else {
                (rat(&w.w_sigma_bar), a.oracle.then(|| census::w_sigma_bar(&sp, b)))
            };
            let c = c.transpose()?;
            if let Some(c) = &c {
                extra.insert("census".into(), serde_json::to_value(c).expect("json"));
            }
            (v, c.map(|c| s(rational_to_string(&c.mean))))
        }
        Formula::Lemma46 => {
            let v = counting::lemma46_count(&sp).value;
            (s(v), a.oracle.then(|| census::lemma46(&sp, b).map(s)).transpose()?)
        }
        Formula::S1 | Formula::KneserEigenvalue => {
            if a.oracle {
                return Err(Fail(EXIT_USAGE, "no census oracle for this formula".into()));
            }
            let v = if a.formula == Formula::S1 {
                counting::s_bounds(&sp, &BigInt::from(need(a.x, "x")?)).s1
            } else {
                counting::kneser_eigenvalue(q, n as i64, l as i64, need(a.j, "j")? as i64)
            };
            (s(v), None)
        }
    };
    let name = a.formula.to_possible_value().expect("named").get_name().to_string();
    let mut obj = Map::new();
    obj.insert("formula".into(), s(name));
    obj.insert("params".into(), Value::Object(params));
    obj.insert("value".into(), value.clone());
    let mut code = EXIT_OK;
    if let Some(o) = oracle {
        let ok = o == value;
        obj.insert("oracle".into(), o);
        obj.insert("match".into(), Value::Bool(ok));
        if !ok {
            code = EXIT_IDENTITY;
        }
    }
    obj.extend(extra);
    Ok((Value::Object(obj), code))
}

fn read_set(path: &Path) -> Result<VertexSet, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| io_fail(path, e))?;
    format::parse_vertex_set(&text).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn resolve_level(sp: &SpaceParams, level: LevelArg) -> Level {
    match level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
        LevelArg::Auto => {
            let fits = sp.num_vertices_u128() <= spectral::MAX_MATRIX_DIM as u128
                && sp.num_points_u128() <= spectral::MAX_MATRIX_DIM as u128;
            if fits {
                Level::Full
            } else {
                Level::Fast
            }
        }
    }
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let set = read_set(&a.file)?;
    let sp = set.params().clone();
    let ctx = ClContext::new(&sp, resolve_level(&sp, a.level), a.seed)?;
    let v = ctx.verdict(&set);
    let mut obj = serde_json::to_value(&v).expect("json");
    obj["witness"] = v.witness().map(|w| serde_json::to_value(w).expect("json")).unwrap_or(Value::Null);
    obj["params"] = params_json(&sp);
    Ok((obj, EXIT_OK))
}

fn build_kind(sp: &SpaceParams, a: &ConstructArgs, kind: Kind) -> Result<(VertexSet, Value), Fail> {
    let set = match kind {
        Kind::Empty => VertexSet::empty(sp),
        Kind::Full => VertexSet::full(sp),
        Kind::Pencil => {
            let pts = sp.enumerate_points()?;
            let p = pts
                .get(a.index as usize)
                .ok_or_else(|| Fail(EXIT_USAGE, format!("point index {} out of range {}", a.index, pts.len())))?;
            clsets::point_pencil(sp, p)
        }
        Kind::FootnotePencils => clsets::footnote_pencil_union(sp, a.k)?,
        Kind::Hyperplane => clsets::hyperplane_set(sp, &clsets::footnote_hyperplane(sp, a.index)?)?,
        Kind::PencilPlusHyperplane => {
            let c = clsets::standard_constructions(sp)?;
            c.into_iter().find(|c| c.name == "pencil_plus_hyperplane").expect("always built").set
        }
        Kind::HyperplaneUnion => clsets::hyperplane_union(sp, a.y)?,
        Kind::NontrivialFamily => clsets::nontrivial_family(sp, a.y)?,
        Kind::Spread => {
            let base = clsets::spread(sp, a.seed)?;
            let sp2 = clsets::transformed_spread(&base, a.transform)?;
            let origin = serde_json::to_value(sp2.origin()).expect("json");
            return Ok((sp2.to_set(), origin));
        }
    };
    Ok((set, Value::Null))
}

fn write_file(path: &Path, text: &str) -> Result<(), Fail> {
    std::fs::write(path, text).map_err(|e| io_fail(path, e))
}

fn set_summary(ctx: &ClContext, name: &str, set: &VertexSet, file: Option<&Path>) -> Value {
    let v = ctx.verdict(set);
    json!({
        "kind": name,
        "size": s(set.len()),
        "x": s(rational_to_string(&v.x)),
        "is_cl": v.is_cl,
        "file": file.map(|p| s(p.display())),
    })
}

fn cmd_construct(a: &ConstructArgs) -> Outcome {
    let sp = a.p.params()?;
    let ctx = ClContext::new(&sp, Level::Fast, a.seed)?;
    if a.all {
        let dir = a.out_dir.as_ref().expect("clap enforces --out-dir");
        std::fs::create_dir_all(dir).map_err(|e| io_fail(dir, e))?;
        let mut items = Vec::new();
        for c in clsets::standard_constructions(&sp)? {
            let path = dir.join(format!("{}.txt", c.name));
            write_file(&path, &format::write_vertex_set(&c.set))?;
            items.push(set_summary(&ctx, &c.name, &c.set, Some(&path)));
        }
        return Ok((json!({ "params": params_json(&sp), "sets": items }), EXIT_OK));
    }
    let kind = a.kind.expect("clap enforces --kind");
    let (set, origin) = build_kind(&sp, a, kind)?;
    let text = format::write_vertex_set(&set);
    let name = kind.to_possible_value().expect("named").get_name().to_string();
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            let mut v = set_summary(&ctx, &name, &set, Some(path));
            if !origin.is_null() {
                v["origin"] = origin;
            }
            Ok((v, EXIT_OK))
        }
        None => Ok((Value::String(text), EXIT_OK)),
    }
}

fn cmd_search(a: &SearchArgs) -> Outcome {
    let sp = a.p.params()?;
    let method = a.method.map(|m| match m {
        MethodArg::FullPowerSet => Method::FullPowerSet,
        MethodArg::FixedXSubsets => Method::FixedXSubsets,
        MethodArg::KernelConstrained => Method::KernelConstrained,
    });
    let opts = SearchOptions { x: a.x, method, node_budget: a.budget, record_elapsed: a.elapsed, seed: a.seed };
    let report = search::exhaustive_with(&sp, &opts)?;
    if let Some(dir) = &a.sets_dir {
        std::fs::create_dir_all(dir).map_err(|e| io_fail(dir, e))?;
        for (i, set) in report.sets.iter().enumerate() {
            write_file(&dir.join(format!("set_{i:06}.txt")), &format::write_vertex_set(set))?;
        }
    }
    let v = serde_json::to_value(&report).expect("json");
    let code = match &report.agreement {
        Some(ag) if ag.disagreements > 0 => EXIT_IDENTITY,
        _ if !report.complement_symmetric() && a.x.is_none() => EXIT_IDENTITY,
        _ => EXIT_OK,
    };
    match &a.out {
        Some(path) => {
            write_file(path, &format!("{}\n", serde_json::to_string_pretty(&v).expect("json")))?;
            Ok((json!({ "report": s(path.display()), "sets": s(report.sets.len()) }), code))
        }
        None => Ok((v, code)),
    }
}

fn cmd_spectra(a: &ParamArgs) -> Outcome {
    let sp = a.params()?;
    let formulas = counting::spectra(&sp);
    let report = spectral::spectral_report(&sp)?;
    let ok = report.all_ok();
    let v = json!({
        "params": params_json(&sp),
        "formulas": formulas,
        "checks": report,
        "all_ok": ok,
    });
    Ok((v, if ok { EXIT_OK } else { EXIT_IDENTITY }))
}

/// Parses `1,2` / `4..6` lists.
fn parse_list(key: &str, spec: &str) -> Result<Vec<u64>, Fail> {
    let bad = || Fail(EXIT_USAGE, format!("bad grid values for {key}: `{spec}`"));
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi): (u64, u64) =
                    (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

struct Grid {
    q: Vec<u64>,
    n: Vec<u64>,
    l: Vec<u64>,
    x: Option<Vec<u64>>,
}

fn parse_grid(spec: &str) -> Result<Grid, Fail> {
    let (mut q, mut n, mut l, mut x) = (None, None, None, None);
    for part in spec.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Fail(EXIT_USAGE, format!("bad grid part `{part}`")))?;
        let vals = parse_list(k.trim(), v)?;
        match k.trim() {
            "q" => q = Some(vals),
            "n" => n = Some(vals),
            "l" => l = Some(vals),
            "x" => x = Some(vals),
            other => return Err(Fail(EXIT_USAGE, format!("unknown grid key `{other}`"))),
        }
    }
    let missing = |k: &str| Fail(EXIT_USAGE, format!("grid needs {k}"));
    Ok(Grid {
        q: q.ok_or_else(|| missing("q"))?,
        n: n.ok_or_else(|| missing("n"))?,
        l: l.ok_or_else(|| missing("l"))?,
        x,
    })
}

fn cmd_inequalities(a: &IneqArgs) -> Outcome {
    let grid = parse_grid(&a.grid)?;
    let mut rows = Vec::new();
    let mut failures = 0u64;
    for &q in &grid.q {
        for &n in &grid.n {
            for &l in &grid.l {
                let sp = SpaceParams::new(q as u32, n as usize, l as usize)?;
                if l < 2 * n || n < 2 {
                    rows.push(json!({ "q": s(q), "n": s(n), "l": s(l), "skipped": "needs l >= 2n >= 4" }));
                    continue;
                }
                let w_sigma = match a.w_sigma {
                    WSigmaSource::Formula => counting::w_counts(&sp).w_sigma,
                    WSigmaSource::CensusMax => {
                        Some(BigRational::from_integer(BigInt::from(census::w_sigma(&sp, a.budget)?.max)))
                    }
                };
                let xs: Vec<u64> = match &grid.x {
                    Some(xs) => xs.clone(),
                    None => {
                        let xmax = counting::classification_x_max(q as u32, n as i64, l as i64);
                        let xmax: u64 = xmax.try_into().unwrap_or(0);
                        (2..=xmax).collect()
                    }
                };
                for x in xs {
                    let cb = counting::classification_bounds_with(&sp, &BigInt::from(x), w_sigma.clone())?;
                    let ok = cb.lemma44_ok && cb.lemma441_ok && cb.lemma442_ok && cb.lemma45_ok && cb.lemma47_ok;
                    if cb.in_range && !ok {
                        failures += 1;
                    }
                    let mut row = serde_json::to_value(&cb).expect("json");
                    for (k, v) in [("q", q), ("n", n), ("l", l), ("x", x)] {
                        row[k] = s(v);
                    }
                    row["all_ok"] = Value::Bool(ok);
                    rows.push(row);
                }
            }
        }
    }
    let v = json!({
        "grid": a.grid,
        "w_sigma_source": a.w_sigma.to_possible_value().expect("named").get_name(),
        "rows": rows,
        "failing_in_range_rows": s(failures),
    });
    Ok((v, if failures == 0 { EXIT_OK } else { EXIT_IDENTITY }))
}

fn cmd_classify(a: &ClassifyArgs) -> Outcome {
    let set = read_set(&a.file)?;
    let sp = set.params().clone();
    let ctx = ClContext::new(&sp, Level::Fast, 0)?;
    let t = clsets::classify_trivial(&ctx, &set, a.budget)?;
    let mut v = serde_json::to_value(&t).expect("json");
    v["params"] = params_json(&sp);
    Ok((v, EXIT_OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["clforms"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("q=2,3;n=2;l=4..6").unwrap();
        assert_eq!((g.q, g.n, g.l), (vec![2, 3], vec![2], vec![4, 5, 6]));
        assert!(g.x.is_none());
        assert!(parse_grid("q=2;n=2").is_err());
        assert!(parse_grid("q=2;n=2;l=6..4").is_err());
        assert!(parse_grid("q=2;n=2;l=4;z=1").is_err());
    }

    #[test]
    fn count_examples() {
        let (code, out, _) = run_str(&["count", "--q", "2", "--n", "2", "--l", "2", "--formula", "delta", "--oracle"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            (v["value"].as_str(), v["oracle"].as_str(), v["match"].as_bool()),
            (Some("2"), Some("2"), Some(true))
        );
        let (code, out, _) = run_str(&["count", "--q", "2", "--n", "2", "--l", "2", "--formula", "rank_m"]);
        assert_eq!(code, 0);
        assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["value"], "10");
        let (code, _, err) = run_str(&["count", "--q", "6", "--n", "2", "--l", "2", "--formula", "delta"]);
        assert_eq!(code, 2);
        assert!(err.contains("not a prime power"));
        let (code, _, _) = run_str(&["count", "--q", "2", "--n", "2", "--formula", "d_km"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn bad_usage_exits_2() {
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }
}
