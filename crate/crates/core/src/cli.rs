//! Command-line front end: every subcommand produces one table of typed cells
//! rendered as CSV or JSON, plus a list of failed invariants.
//!
//! Exit codes: 0 success, 2 usage, 3 data or I/O, 4 invariant failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::besov;
use crate::error::{invalid, ExitClass, Result, VniError};
use crate::hankel::{self, FoguelJson};
use crate::kernels;
use crate::kmn::{self, KmnBounds};
use crate::operators::{self, eval_poly_tuple, TupleScheme};
use crate::polydisc;
use crate::polynomial::{default_points_per_axis, sup_norm, MultiPoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "vnlab", version, about = "Bounds and certificates for von Neumann's inequality")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// Seed for every random suite.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; the literal values `csv` and `json` select a format on stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Omit the `# vnlab <command> <unix time>` line.
    #[arg(long, global = true)]
    pub no_header: bool,
    /// JSON run configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Torus grid points per axis for sup norms.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Quadrature nodes for radial integrals.
    #[arg(long, global = true)]
    pub quad: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// L¹ norms of Fejér, dyadic, trapezoid and splitting kernels.
    KernelNorms {
        #[arg(long, default_value_t = 256)]
        fejer_max: u64,
        #[arg(long, default_value_t = 12)]
        dyadic_max: u32,
        #[arg(long, default_value_t = 200)]
        trapezoids: usize,
        #[arg(long, default_value_t = 512)]
        split_n_max: u64,
        #[arg(long, value_delimiter = ',', default_value = "3,4")]
        split_d: Vec<usize>,
    },
    /// Upper and lower brackets for K(m, n).
    Kmn {
        #[arg(long, default_value_t = 64)]
        m_max: usize,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
    },
    /// Band splitting of a polynomial file.
    Split {
        #[arg(long)]
        poly: PathBuf,
        /// Lower band edge; defaults to the lowest total degree present.
        #[arg(long)]
        m: Option<u32>,
        /// Upper band edge; defaults to the total degree.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Dyadic and integral Besov norms.
    Besov {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        a: Vec<f64>,
    },
    /// von Neumann inequality on a truncated Foguel–Hankel tuple.
    FoguelVerify {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
    /// Trivial, Dixon and pipeline bounds on C(d, n).
    Cdn {
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 512)]
        n_max: u32,
    },
    /// Known failures of von Neumann's inequality in three variables.
    Gallery {
        #[arg(long)]
        verify: bool,
    },
    /// Random commuting tuples against von Neumann / Andô.
    VnRandom {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        size: usize,
        #[arg(long, default_value_t = 8)]
        degree: u32,
        /// `single-generator`, `direct-sum`, `diagonal` or `all` (cycled).
        #[arg(long, default_value = "all")]
        scheme: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::KernelNorms { .. } => "kernel-norms",
            Command::Kmn { .. } => "kmn",
            Command::Split { .. } => "split",
            Command::Besov { .. } => "besov",
            Command::FoguelVerify { .. } => "foguel-verify",
            Command::Cdn { .. } => "cdn",
            Command::Gallery { .. } => "gallery",
            Command::VnRandom { .. } => "vn-random",
        }
    }
}

/// Tolerances applied to the invariants each command checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub kernel: f64,
    pub sandwich: f64,
    pub split: f64,
    pub foguel: f64,
    pub vn: f64,
    pub gallery: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { kernel: 1e-9, sandwich: 1e-9, split: 1e-12, foguel: 1e-4, vn: 1e-6, gallery: 1e-9 }
    }
}

/// Contents of a `--config` file. Unknown keys are rejected.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<String>,
    pub no_header: Option<bool>,
    pub grid: Option<usize>,
    pub quad: Option<usize>,
    pub tolerances: Option<Tolerances>,
}

/// Fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub header: bool,
    pub grid: Option<usize>,
    pub quad: Option<usize>,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<RunConfig> {
        let file = match &cli.global.config {
            Some(path) => {
                let src = fs::read_to_string(path)?;
                serde_json::from_str::<ConfigFile>(&src)
                    .map_err(|e| VniError::InvalidInput(format!("config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        if let Some(c) = &file.command {
            if c != cli.command.name() {
                return invalid(format!("config is for command {c:?}, invoked {:?}", cli.command.name()));
            }
        }
        let g = cli.global;
        let mut format = g.format.or(file.format);
        let mut out = None;
        match g.out.or(file.out).as_deref() {
            Some("csv") => format = format.or(Some(Format::Csv)),
            Some("json") => format = format.or(Some(Format::Json)),
            Some(path) => {
                let path = PathBuf::from(path);
                if format.is_none() && path.extension().is_some_and(|e| e == "json") {
                    format = Some(Format::Json);
                }
                out = Some(path);
            }
            None => {}
        }
        Ok(RunConfig {
            command: cli.command,
            seed: g.seed.or(file.seed).unwrap_or(0),
            format: format.unwrap_or(Format::Csv),
            out,
            header: !(g.no_header || file.no_header.unwrap_or(false)),
            grid: g.grid.or(file.grid),
            quad: g.quad.or(file.quad),
            tolerances: file.tolerances.unwrap_or_default(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Num(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}
impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Result of one command.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Invariants that failed; non-empty means exit code 4.
    pub failures: Vec<String>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), ..Default::default() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn render(&self, command: &str, format: Format, header: Option<u64>) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        if let Some(ts) = header {
            writeln!(buf, "# vnlab {command} {ts}")?;
        }
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
                let io = |e: csv::Error| VniError::Io(e.to_string());
                w.write_record(&self.columns).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
                }
                w.flush()?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = serde_json::json!({
                    "command": command,
                    "rows": rows,
                    "failures": self.failures,
                });
                serde_json::to_writer_pretty(&mut buf, &doc)?;
                buf.push(b'\n');
            }
        }
        Ok(buf)
    }
}

/// Sizes the global rayon pool from `VNI_THREADS` if set.
pub fn init_threads() {
    if let Some(n) = std::env::var("VNI_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn exit_code(e: &VniError) -> i32 {
    match e.exit_class() {
        ExitClass::Usage => EXIT_USAGE,
        ExitClass::Data => EXIT_DATA,
        ExitClass::Invariant => EXIT_INVARIANT,
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `--out` or `out`. Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let cfg = match RunConfig::resolve(cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "vnlab: {e}");
            return exit_code(&e);
        }
    };
    match run_config(&cfg, out) {
        Ok(table) => {
            for f in &table.failures {
                let _ = writeln!(err, "vnlab: invariant failed: {f}");
            }
            if table.failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_INVARIANT
            }
        }
        Err(e) => {
            let _ = writeln!(err, "vnlab: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a resolved configuration and writes the rendered table.
pub fn run_config(cfg: &RunConfig, out: &mut dyn Write) -> Result<Table> {
    let table = execute(cfg)?;
    let ts = cfg.header.then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
    let bytes = table.render(cfg.command.name(), cfg.format, ts)?;
    match &cfg.out {
        Some(path) => fs::write(path, bytes)?,
        None => out.write_all(&bytes)?,
    }
    Ok(table)
}

/// Computes the table for a configuration without writing it.
pub fn execute(cfg: &RunConfig) -> Result<Table> {
    let tol = &cfg.tolerances;
    match &cfg.command {
        Command::KernelNorms { fejer_max, dyadic_max, trapezoids, split_n_max, split_d } => {
            kernel_norms(*fejer_max, *dyadic_max, *trapezoids, *split_n_max, split_d, cfg.seed, tol)
        }
        Command::Kmn { m_max, n_max } => kmn_table(*m_max, *n_max, tol),
        Command::Split { poly, m, n } => split_table(&read_poly(poly)?, *m, *n, tol),
        Command::Besov { poly, a } => besov_table(&read_poly(poly)?, a, cfg.quad.unwrap_or(besov::DEFAULT_QUAD)),
        Command::FoguelVerify { tuple, poly } => foguel_table(tuple, &read_poly(poly)?, tol),
        Command::Cdn { d, n_max } => cdn_table(*d, *n_max),
        Command::Gallery { verify } => gallery_table(*verify, cfg.grid, tol),
        Command::VnRandom { d, count, size, degree, scheme } => {
            vn_random_table(*d, *count, *size, *degree, scheme, cfg.seed, cfg.grid, tol)
        }
    }
}

fn read_poly(path: &Path) -> Result<MultiPoly> {
    let src = fs::read_to_string(path).map_err(|e| VniError::Io(format!("{}: {e}", path.display())))?;
    MultiPoly::parse_any(&src)
}

const PROV_FEJER: &str = "Fejér kernel is a positive summability kernel";
const PROV_DYADIC: &str = "dyadic triangle kernels W_n";
const PROV_TRAPEZOID: &str = "trapezoid kernel L1 lemma";
const PROV_SPLIT: &str = "band splitting kernel V";
const PROV_KMN: &str = "operator-coefficient band inequality K(m,n)";
const PROV_BESOV: &str = "dyadic vs integral Besov norm equivalence";
const PROV_FOGUEL: &str = "Foguel-Hankel tuples satisfy von Neumann's inequality";
const PROV_GALLERY: &str = "Kaijser-Varopoulos counterexample";
const PROV_VN: &str = "von Neumann (d=1) and Ando (d=2) inequalities";

const KERNEL_COLUMNS: &[&str] =
    &["kernel", "d", "params", "l1_quadrature", "l1_certified", "bound", "holds", "certified", "provenance"];

fn kernel_norms(
    fejer_max: u64,
    dyadic_max: u32,
    trapezoids: usize,
    split_n_max: u64,
    split_d: &[usize],
    seed: u64,
    tol: &Tolerances,
) -> Result<Table> {
    let mut t = Table::new(KERNEL_COLUMNS);
    let fejer_rows: Vec<(u64, f64, f64)> = (1..=fejer_max)
        .into_par_iter()
        .map(|n| {
            let k = kernels::fejer(n)?;
            Ok((n, kernels::l1_norm_default(&k)?, kernels::l1_norm_upper_auto(&k)?))
        })
        .collect::<Result<_>>()?;
    for (n, q, c) in fejer_rows {
        let holds = (q - 1.0).abs() <= tol.kernel;
        t.check(holds, || format!("‖F_{n}‖₁ = {q} is not 1"));
        t.push(vec![
            "fejer".into(),
            Cell::Empty,
            format!("n={n}").into(),
            q.into(),
            c.into(),
            1.0.into(),
            holds.into(),
            true.into(),
            PROV_FEJER.into(),
        ]);
    }
    for n in 0..=dyadic_max {
        let k = kernels::dyadic_w(n);
        let q = kernels::l1_norm_default(&k)?;
        let c = kernels::l1_norm_upper_auto(&k)?;
        let holds = c <= 1.5 + tol.kernel;
        t.check(holds, || format!("‖W_{n}‖₁ ≤ {c} exceeds 3/2"));
        t.push(vec![
            "dyadic".into(),
            Cell::Empty,
            format!("n={n}").into(),
            q.into(),
            c.into(),
            1.5.into(),
            holds.into(),
            true.into(),
            PROV_DYADIC.into(),
        ]);
    }
    let params = kernels::random_trapezoid_params(trapezoids, seed);
    let trap_rows: Vec<(f64, f64)> = params
        .par_iter()
        .map(|&(k, l, m, n)| {
            let v = kernels::trapezoid(k, l, m, n)?;
            Ok((kernels::l1_norm_default(&v)?, kernels::l1_norm_upper_auto(&v)?))
        })
        .collect::<Result<_>>()?;
    for (&(k, l, m, n), (q, c)) in params.iter().zip(trap_rows) {
        let bound = kernels::trapezoid_l1_bound(k, l, m, n);
        let holds = c <= bound + tol.kernel;
        t.check(holds, || format!("‖V_{{{k},{l},{m},{n}}}‖₁ ≤ {c} exceeds {bound}"));
        t.push(vec![
            "trapezoid".into(),
            Cell::Empty,
            format!("k={k};l={l};m={m};n={n}").into(),
            q.into(),
            c.into(),
            bound.into(),
            holds.into(),
            true.into(),
            PROV_TRAPEZOID.into(),
        ]);
    }
    for r in kernels::splitting_sweep(split_d, split_n_max)? {
        let holds = r.l1_upper <= 6.0 + tol.kernel && r.l1_upper <= r.lemma_bound + tol.kernel;
        t.check(holds, || format!("splitting kernel d={} k={} n={}: {} exceeds 6", r.d, r.k, r.n, r.l1_upper));
        t.push(vec![
            "splitting".into(),
            r.d.into(),
            format!("k={};n={}", r.k, r.n).into(),
            Cell::Empty,
            r.l1_upper.into(),
            6.0f64.min(r.lemma_bound).into(),
            holds.into(),
            true.into(),
            PROV_SPLIT.into(),
        ]);
    }
    Ok(t)
}

const KMN_COLUMNS: &[&str] = &[
    "m",
    "n",
    "lower_formula",
    "lower_hankel",
    "upper_formula",
    "upper_basic1",
    "upper_basic2",
    "upper_basic3",
    "upper_constructive",
    "best_lower",
    "best_upper",
    "sandwich_holds",
    "certified",
    "provenance",
];

fn kmn_row(b: &KmnBounds, tol: &Tolerances) -> (Vec<Cell>, bool) {
    let holds = b.best_lower() <= b.best_upper() + tol.sandwich;
    let row = vec![
        b.m.into(),
        b.n.into(),
        b.lower_formula.into(),
        b.lower_hankel.into(),
        b.upper_formula.into(),
        b.upper_basic1.into(),
        b.upper_basic2.into(),
        b.upper_basic3.into(),
        b.upper_constructive.into(),
        b.best_lower().into(),
        b.best_upper().into(),
        holds.into(),
        true.into(),
        PROV_KMN.into(),
    ];
    (row, holds)
}

fn kmn_table(m_max: usize, n_max: usize, tol: &Tolerances) -> Result<Table> {
    let mut t = Table::new(KMN_COLUMNS);
    for b in kmn::kmn_grid(n_max)?.into_iter().filter(|b| b.m <= m_max) {
        let (row, holds) = kmn_row(&b, tol);
        t.check(holds, || format!("K({}, {}) sandwich fails", b.m, b.n));
        t.push(row);
    }
    Ok(t)
}

const SPLIT_COLUMNS: &[&str] = &[
    "part",
    "terms",
    "axis_low",
    "axis_high",
    "sup_grid",
    "sup_certified",
    "factor",
    "chain_bound",
    "kernel_l1",
    "sum_error",
    "residual_error",
    "certified",
    "provenance",
];

fn split_table(p: &MultiPoly, m: Option<u32>, n: Option<u32>, tol: &Tolerances) -> Result<Table> {
    let (lo, hi) = if p.is_zero() { (0, 0) } else { p.band_limits()? };
    let (m, n) = (m.unwrap_or(lo), n.unwrap_or(hi));
    let r = polydisc::split(p, m, n)?;
    let mut t = Table::new(SPLIT_COLUMNS);
    let scale = p.coeff_l1().max(1.0);
    t.check(r.sum_error <= tol.split * scale, || format!("parts sum to p only within {}", r.sum_error));
    t.check(r.residual_error <= tol.split * scale, || format!("residual identity off by {}", r.residual_error));
    for (j, q) in r.parts.iter().enumerate() {
        let (alo, ahi) = if q.is_zero() {
            (Cell::Empty, Cell::Empty)
        } else {
            let (a, b) = q.band_limits_wrt(j)?;
            (a.into(), b.into())
        };
        let factor = r.sup_norm_factors[j];
        let chain = r.chain_bounds[j];
        // the factor uses the certified part sup over the grid sup of p
        t.check(factor <= chain * (1.0 + 1e-4), || format!("part {} factor {factor} exceeds {chain}", j + 1));
        t.push(vec![
            (j + 1).into(),
            q.num_terms().into(),
            alo,
            ahi,
            r.part_sup[j].grid_max.into(),
            r.part_sup[j].certified_upper.into(),
            factor.into(),
            chain.into(),
            r.kernel_l1.into(),
            r.sum_error.into(),
            r.residual_error.into(),
            r.part_sup[j].is_certified().into(),
            PROV_SPLIT.into(),
        ]);
    }
    Ok(t)
}

const BESOV_COLUMNS: &[&str] =
    &["a", "dyadic_terms", "dyadic_sum", "integral_value", "ratio", "resummation_error", "certified", "provenance"];

fn besov_table(f: &MultiPoly, a: &[f64], quad: usize) -> Result<Table> {
    let mut t = Table::new(BESOV_COLUMNS);
    let resum = besov::resummation_error(f)?;
    t.check(resum <= 1e-12 * f.coeff_l1().max(1.0), || format!("dyadic pieces resum with error {resum}"));
    for r in besov::besov_reports(f, a, quad)? {
        t.check(r.ratio.is_finite() && (r.ratio > 0.0 || r.dyadic_sum == 0.0), || {
            format!("a = {}: ratio {}", r.a, r.ratio)
        });
        t.push(vec![
            r.a.into(),
            r.dyadic_terms.len().into(),
            r.dyadic_sum.into(),
            r.integral_value.into(),
            r.ratio.into(),
            resum.into(),
            false.into(),
            PROV_BESOV.into(),
        ]);
    }
    Ok(t)
}

const FOGUEL_COLUMNS: &[&str] = &[
    "d",
    "trunc",
    "exactness_degree",
    "degree",
    "ratio",
    "ratio_full",
    "bound",
    "corner_ratio",
    "corner_bound",
    "window_commutator",
    "sup_grid",
    "sup_certified",
    "holds",
    "certified",
    "provenance",
];

fn foguel_table(path: &Path, p: &MultiPoly, tol: &Tolerances) -> Result<Table> {
    let src = fs::read_to_string(path).map_err(|e| VniError::Io(format!("{}: {e}", path.display())))?;
    let spec: FoguelJson = serde_json::from_str(&src)?;
    let f = spec.build()?;
    let r = hankel::verify_foguel_vn(p, &f)?;
    let d = f.d() as f64;
    let holds = r.ratio <= r.bound * (1.0 + tol.foguel) && r.corner_ratio <= d * (1.0 + tol.foguel);
    let mut t = Table::new(FOGUEL_COLUMNS);
    t.check(holds, || format!("ratio {} (bound {}), corner {} (bound {d})", r.ratio, r.bound, r.corner_ratio));
    t.push(vec![
        f.d().into(),
        f.trunc().into(),
        r.exactness_degree.into(),
        p.degree().into(),
        r.ratio.into(),
        r.ratio_full.into(),
        r.bound.into(),
        r.corner_ratio.into(),
        d.into(),
        r.window_commutator.into(),
        r.sup_norm.grid_max.into(),
        r.sup_norm.certified_upper.into(),
        holds.into(),
        r.sup_norm.is_certified().into(),
        PROV_FOGUEL.into(),
    ]);
    Ok(t)
}

const CDN_COLUMNS: &[&str] = &[
    "d",
    "n",
    "trivial",
    "ln_trivial",
    "dixon",
    "ln_dixon",
    "pipeline",
    "ln_pipeline",
    "pipeline_over_log",
    "best",
    "certified",
    "provenance",
];

/// Published ceiling for the three-variable pipeline.
pub const CDN_D3_CEILING: f64 = 223.0;

fn cdn_table(d: usize, n_max: u32) -> Result<Table> {
    let rows: Vec<polydisc::CdnRow> =
        (1..=n_max).into_par_iter().map(|n| polydisc::cdn_bounds(d, n)).collect::<Result<_>>()?;
    let mut t = Table::new(CDN_COLUMNS);
    for row in rows {
        let get = |name: &str| row.get(name).cloned().ok_or_else(|| VniError::Parse(format!("missing bound {name}")));
        let (tr, dx, pl) = (get("trivial")?, get("dixon")?, get("pipeline")?);
        if d == 3 {
            t.check(pl.value <= CDN_D3_CEILING, || format!("pipeline(3, {}) = {} exceeds 223", row.n, pl.value));
        }
        let over_log =
            if d > 3 { Cell::Num(pl.value / ((row.n as f64 + 1.0).ln()).powi(d as i32 - 3)) } else { Cell::Empty };
        t.push(vec![
            d.into(),
            row.n.into(),
            tr.value.into(),
            tr.ln_value.into(),
            dx.value.into(),
            dx.ln_value.into(),
            pl.value.into(),
            pl.ln_value.into(),
            over_log,
            row.best.clone().into(),
            (tr.certified && dx.certified && pl.certified).into(),
            pl.provenance.into(),
        ]);
    }
    Ok(t)
}

const GALLERY_COLUMNS: &[&str] = &[
    "name",
    "op_norm",
    "exact_op_norm",
    "sup_grid",
    "sup_certified",
    "ratio",
    "max_commutator",
    "max_contraction",
    "certified",
    "provenance",
];

/// Gallery pass marks: certified sup at most this and ratio at least [`GALLERY_MIN_RATIO`].
pub const GALLERY_MAX_SUP: f64 = 5.001;
pub const GALLERY_MIN_RATIO: f64 = 1.039;

fn gallery_table(verify: bool, grid: Option<usize>, tol: &Tolerances) -> Result<Table> {
    let mut t = Table::new(GALLERY_COLUMNS);
    for mut e in polydisc::counterexample_gallery()? {
        if let Some(g) = grid {
            e.sup = sup_norm(&e.poly, g)?;
            e.ratio = e.op_norm / e.sup.certified_upper;
        }
        if verify {
            if let Some(x) = e.exact_op_norm {
                t.check((e.op_norm - x).abs() <= tol.gallery, || format!("{}: ‖p(T)‖ = {} vs {x}", e.name, e.op_norm));
            }
            t.check(e.sup.certified_upper <= GALLERY_MAX_SUP, || {
                format!("{}: certified sup {}", e.name, e.sup.certified_upper)
            });
            t.check(e.ratio >= GALLERY_MIN_RATIO, || format!("{}: ratio {}", e.name, e.ratio));
            t.check(e.max_commutator == 0.0, || format!("{}: commutator {}", e.name, e.max_commutator));
            t.check(e.max_contraction <= 1.0 + 1e-12, || format!("{}: contraction {}", e.name, e.max_contraction));
        }
        t.push(vec![
            e.name.clone().into(),
            e.op_norm.into(),
            e.exact_op_norm.into(),
            e.sup.grid_max.into(),
            e.sup.certified_upper.into(),
            e.ratio.into(),
            e.max_commutator.into(),
            e.max_contraction.into(),
            e.sup.is_certified().into(),
            PROV_GALLERY.into(),
        ]);
    }
    Ok(t)
}

const VN_COLUMNS: &[&str] = &[
    "index",
    "d",
    "scheme",
    "seed",
    "degree",
    "op_norm",
    "sup_grid",
    "sup_certified",
    "ratio",
    "holds",
    "certified",
    "provenance",
];

const ALL_SCHEMES: [TupleScheme; 3] = [TupleScheme::SingleGenerator, TupleScheme::DirectSum, TupleScheme::Diagonal];

fn scheme_name(s: TupleScheme) -> &'static str {
    match s {
        TupleScheme::SingleGenerator => "single-generator",
        TupleScheme::DirectSum => "direct-sum",
        TupleScheme::Diagonal => "diagonal",
    }
}

/// One seeded instance of the von Neumann / Andô suite.
#[derive(Clone, Copy, Debug)]
pub struct VnInstance {
    pub scheme: TupleScheme,
    pub seed: u64,
    pub op_norm: f64,
    pub sup_grid: f64,
    pub sup_certified: f64,
}

/// Instance `i` uses seed `seed + i` for both the tuple and the polynomial.
pub fn vn_random_suite(
    d: usize,
    count: usize,
    size: usize,
    degree: u32,
    schemes: &[TupleScheme],
    seed: u64,
    grid: Option<usize>,
) -> Result<Vec<VnInstance>> {
    if !(1..=2).contains(&d) {
        return invalid(format!("vn-random covers d = 1 and d = 2, got {d}"));
    }
    if schemes.is_empty() {
        return invalid("no tuple scheme given");
    }
    (0..count)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let scheme = schemes[i % schemes.len()];
            let tuple = operators::random_commuting_tuple(d, size, s, scheme)?;
            let p = polydisc::random_dense(d, degree, s ^ 0x5eed_f00d)?;
            let op_norm = crate::linalg::operator_norm(&eval_poly_tuple(&p, &tuple)?.value)?;
            let sup = sup_norm(&p, grid.unwrap_or_else(|| default_points_per_axis(&p)))?;
            Ok(VnInstance { scheme, seed: s, op_norm, sup_grid: sup.grid_max, sup_certified: sup.certified_upper })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn vn_random_table(
    d: usize,
    count: usize,
    size: usize,
    degree: u32,
    scheme: &str,
    seed: u64,
    grid: Option<usize>,
    tol: &Tolerances,
) -> Result<Table> {
    let schemes: Vec<TupleScheme> = if scheme == "all" { ALL_SCHEMES.to_vec() } else { vec![scheme.parse()?] };
    let mut t = Table::new(VN_COLUMNS);
    for (i, r) in vn_random_suite(d, count, size, degree, &schemes, seed, grid)?.into_iter().enumerate() {
        let holds = r.op_norm <= r.sup_certified * (1.0 + tol.vn);
        t.check(holds, || format!("instance {i}: ‖p(T)‖ = {} > {}", r.op_norm, r.sup_certified));
        t.push(vec![
            i.into(),
            d.into(),
            scheme_name(r.scheme).into(),
            r.seed.into(),
            degree.into(),
            r.op_norm.into(),
            r.sup_grid.into(),
            r.sup_certified.into(),
            (r.op_norm / r.sup_certified).into(),
            holds.into(),
            r.sup_certified.is_finite().into(),
            PROV_VN.into(),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("vnlab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_str(&["kmn", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }

    #[test]
    fn kmn_small_grid_csv() {
        let (code, out, _) = run_str(&["kmn", "--m-max", "3", "--n-max", "3", "--no-header"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert!(lines.next().unwrap().starts_with("m,n,lower_formula,lower_hankel"));
        assert_eq!(lines.count(), 10);
    }

    #[test]
    fn header_line_present_by_default() {
        let (_, out, _) = run_str(&["gallery"]);
        assert!(out.starts_with("# vnlab gallery "));
    }

    #[test]
    fn out_accepts_format_name() {
        let (code, out, _) = run_str(&["gallery", "--out", "json", "--no-header"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], "gallery");
    }

    #[test]
    fn vn_random_rejects_d3() {
        let (code, _, _) = run_str(&["vn-random", "--d", "3", "--count", "1"]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn missing_file_is_data_error() {
        let (code, _, _) = run_str(&["split", "--poly", "/nonexistent/p.txt"]);
        assert_eq!(code, EXIT_DATA);
    }

    #[test]
    fn text_cells_with_commas_are_quoted() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), 1.5.into()]);
        let s = String::from_utf8(t.render("t", Format::Csv, None).unwrap()).unwrap();
        assert_eq!(s, "a,b\n\"x,y\",1.5\n");
    }
}
