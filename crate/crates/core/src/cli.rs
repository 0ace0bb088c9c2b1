//! Command-line front end. Every subcommand prints a table: CSV with a header
//! row by default, or a JSON array of objects keyed by the same columns.

use std::ffi::OsString;
use std::io::Write;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::asymptotics::{error_scan, fit_exponent};
use crate::dirichlet::{
    form_class_number, gauss_sum_direct, gauss_sum_im_exact, l_value, reduced_forms, unit_count,
};
use crate::expsum::{farey_locate, hl_sample, hl_sweep, prop31_sample, prop31_sweep, sweep_points};
use crate::formula::{error_term_exact, verify_formula_range};
use crate::lattice::{boundary_count, count_paraboloid, ParaboloidSpec, RatQuadForm, Shift};
use crate::omega::{boundary_family_2d, boundary_growth_3d, omega_minus_scan, omega_plus_family};
use crate::rational::{fmt_rational, to_f64};
use crate::{parse_rational, Rational};

const AFTER_HELP: &str = "\
Forms are upper-triangle entries \"a11,a12,...,a1k,a22,...\"; fractions as p/q.
Every subcommand prints CSV with a header row, or JSON with --json.
Columns ending in _exact hold the exact rational next to its decimal value.
See SCHEMA.md for the columns of each subcommand.
Exit status: 0 success, 1 usage or input error, 2 verification failure.";

#[derive(Debug, Parser)]
#[command(name = "paralattice", version, about = "Lattice points in parabolic regions", after_help = AFTER_HELP)]
pub struct Cli {
    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RegionArgs {
    /// Dimension d of the region; the form has d - 1 variables.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Quadratic form (default: sum of squares).
    #[arg(long)]
    q: Option<String>,
    /// Height c.
    #[arg(long, default_value = "1")]
    c: String,
    /// Shift as comma-separated decimals (floating-point path).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "beta_exact")]
    beta: Option<String>,
    /// Shift as comma-separated rationals (exact path).
    #[arg(long, allow_hyphen_values = true)]
    beta_exact: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lattice points in R P.
    /// Columns: r,count,ambiguous_fibers[,boundary_count].
    Count {
        #[command(flatten)]
        region: RegionArgs,
        /// Dilations, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<u64>,
        /// Also count points on the boundary (rational shift only).
        #[arg(long)]
        boundary: bool,
    },
    /// Closed-form error E(N) for odd N.
    /// Columns: n,error,error_exact,count,sqrt_nstar,class_terms.
    Formula {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Compare the closed form with lattice counts for odd N <= max.
    /// Columns: metric,value.
    Verify {
        #[arg(long)]
        max: u64,
    },
    /// Class numbers of discriminant -d.
    /// Columns: d,fundamental,class_number,units,reduced_forms.
    Classnum {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u64>,
    },
    /// L(1, chi_{-d}) = rational_part pi / sqrt(d) for d = 3 (mod 4).
    /// Columns: d,value,rational_part,rational_part_exact,fundamental,conductor.
    Lfun {
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u64>,
    },
    /// Quadratic Gauss sums G(m; N) for odd N.
    /// Columns: m,n,re,im,im_closed,im_coefficient,im_radicand.
    Gauss {
        #[arg(long)]
        n: u64,
        /// Residues m (default: 1..N).
        #[arg(long, value_delimiter = ',')]
        m: Vec<u64>,
    },
    /// Farey arc containing x.
    /// Columns: x,order,a,q,lo,lo_exact,hi,hi_exact.
    Farey {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        x: Vec<f64>,
        #[arg(long)]
        order: u64,
    },
    /// Elliptic theta sums against the Farey-arc bound.
    /// Columns: n,sample,x,alpha,beta,a,q,sum_abs,ratio.
    Expsum {
        /// Integral binary form.
        #[arg(long, default_value = "1,0,1")]
        q: String,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        /// Evaluate at this x instead of a seeded sweep.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        /// Sweep size.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Quadratic Weyl sums against q^(-1/2) N.
    /// Columns: n,sample,x,a,q,sum_abs,ratio,classical_condition.
    Hl {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Witnesses for large errors and boundary growth.
    Omega {
        #[arg(long, value_enum)]
        kind: OmegaKind,
        /// Bound on N (minus) or M (plus, family).
        #[arg(long)]
        max: Option<u64>,
        /// Keep only the first rows (minus).
        #[arg(long)]
        top: Option<usize>,
        /// Form for the growth scan.
        #[arg(long, default_value = "1,0,1")]
        q: String,
        #[arg(long, default_value = "1")]
        c: String,
        /// Square dilations for the growth scan.
        #[arg(long, value_delimiter = ',')]
        r: Vec<u64>,
    },
    /// Error terms over a range of dilations, optionally fitted.
    /// Columns: r,count,ambiguous_fibers,volume_term,error; with --fit: metric,value.
    Scan {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, value_delimiter = ',')]
        r: Vec<u64>,
        #[arg(long)]
        r_min: Option<u64>,
        #[arg(long)]
        r_max: Option<u64>,
        #[arg(long, default_value_t = 1)]
        step: u64,
        /// Print the power-law fit instead of the records.
        #[arg(long)]
        fit: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OmegaKind {
    /// E(N)/sqrt(N) over odd squarefree N, most negative first.
    /// Columns: n,error,error_exact,normalized.
    Minus,
    /// E(M^2)/M for M with prime factors 1 (mod 4).
    /// Columns: m,n,error,error_exact,normalized,normalized_exact.
    Plus,
    /// Boundary points (kM, +-(M^2-k^2)). Columns: x,y.
    Family,
    /// Boundary counts in dimension 3 at square R. Columns: r,boundary_count,ratio.
    Growth,
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => i64::try_from(*v).map(Value::from).unwrap_or_else(|_| Value::from(v.to_string())),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

fn format_float(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:.6e}")
    } else {
        format!("{v:.6}")
    }
}

fn int(v: impl Into<i128>) -> Cell {
    Cell::Int(v.into())
}

fn rat(r: &Rational) -> Cell {
    Cell::Text(fmt_rational(r))
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, json: bool, out: &mut dyn Write) -> anyhow::Result<()> {
        if json {
            let rows: Vec<Value> = self
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.header.iter().zip(row).map(|(k, v)| (k.to_string(), v.json())).collect();
                    Value::Object(obj)
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out)?;
        } else {
            let mut writer = csv::Writer::from_writer(out);
            writer.write_record(&self.header)?;
            for row in &self.rows {
                writer.write_record(row.iter().map(Cell::csv))?;
            }
            writer.flush()?;
        }
        Ok(())
    }
}

fn parse_list<T>(text: &str, f: impl Fn(&str) -> anyhow::Result<T>) -> anyhow::Result<Vec<T>> {
    text.split(',').map(|s| f(s.trim())).collect()
}

fn parse_form(text: &str) -> anyhow::Result<RatQuadForm> {
    RatQuadForm::parse(text).with_context(|| format!("invalid form {text:?}"))
}

fn region(args: &RegionArgs) -> anyhow::Result<ParaboloidSpec> {
    if args.dim < 2 {
        bail!("--dim must be at least 2");
    }
    let form = match &args.q {
        Some(text) => parse_form(text)?,
        None => RatQuadForm::sum_of_squares(args.dim - 1),
    };
    if form.dim() + 1 != args.dim {
        bail!("form has {} variables but --dim {} needs {}", form.dim(), args.dim, args.dim - 1);
    }
    let shift = match (&args.beta, &args.beta_exact) {
        (Some(text), _) => Shift::Real(parse_list(text, |s| s.parse::<f64>().with_context(|| format!("invalid shift {s:?}")))?),
        (None, Some(text)) => Shift::Rational(parse_list(text, |s| Ok(parse_rational(s)?))?),
        (None, None) => Shift::zero(form.dim()),
    };
    Ok(ParaboloidSpec::new(form, shift, parse_rational(&args.c)?)?)
}

/// Runs the CLI on `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let pool = match cli.jobs {
        Some(0) => {
            let _ = writeln!(err, "error: --jobs must be positive");
            return 1;
        }
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok((table, status)) => match table.write(cli.json, out) {
            Ok(()) => status,
            Err(e) => {
                let _ = writeln!(err, "error: {e:#}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<(Table, i32)> {
    let mut status = 0;
    let table = match &cli.command {
        Command::Count { region: args, r, boundary } => {
            let spec = region(args)?;
            let mut header = vec!["r", "count", "ambiguous_fibers"];
            if *boundary {
                header.push("boundary_count");
            }
            let mut table = Table::new(&header);
            for &dilation in r {
                let outcome = count_paraboloid(&spec, dilation)?;
                let mut row = vec![int(dilation), int(outcome.count as i128), int(outcome.ambiguous_fibers)];
                if *boundary {
                    row.push(int(boundary_count(&spec, dilation)? as i128));
                }
                table.push(row);
            }
            table
        }
        Command::Formula { n } => {
            let mut table = Table::new(&["n", "error", "error_exact", "count", "sqrt_nstar", "class_terms"]);
            for &value in n {
                let e = error_term_exact(value)?;
                let big = Rational::from_integer(value as i128);
                let count = e.value + Rational::new(8, 3) * big * big;
                let terms: Vec<String> = e.class_terms.iter().map(|(d, t)| format!("{d}:{}", fmt_rational(t))).collect();
                table.push(vec![
                    int(value),
                    Cell::Float(e.to_f64()),
                    rat(&e.value),
                    rat(&count),
                    int(e.sqrt_nstar),
                    Cell::Text(terms.join(";")),
                ]);
            }
            table
        }
        Command::Verify { max } => {
            let report = verify_formula_range(*max)?;
            let mut table = Table::new(&["metric", "value"]);
            table.push(vec![Cell::Text("max".into()), int(*max)]);
            table.push(vec![Cell::Text("checked".into()), int(report.checked)]);
            table.push(vec![Cell::Text("mismatches".into()), int(report.mismatches.len() as u64)]);
            for m in &report.mismatches {
                table.push(vec![
                    Cell::Text(format!("mismatch_{}", m.n)),
                    Cell::Text(format!("{} vs {}", fmt_rational(&m.formula), fmt_rational(&m.counted))),
                ]);
            }
            if !report.mismatches.is_empty() {
                status = 2;
            }
            table
        }
        Command::Classnum { d } => {
            let mut table = Table::new(&["d", "fundamental", "class_number", "units", "reduced_forms"]);
            for &value in d {
                let disc = -i64::try_from(value).context("d out of range")?;
                let forms: Vec<String> =
                    reduced_forms(disc)?.iter().filter(|f| f.is_primitive()).map(|f| f.to_string()).collect();
                table.push(vec![
                    int(value),
                    Cell::Bool(crate::dirichlet::is_fundamental(disc)),
                    int(form_class_number(disc)?),
                    int(unit_count(disc)),
                    Cell::Text(forms.join(" ")),
                ]);
            }
            table
        }
        Command::Lfun { d } => {
            let mut table =
                Table::new(&["d", "value", "rational_part", "rational_part_exact", "fundamental", "conductor"]);
            for &value in d {
                let l = l_value(value)?;
                table.push(vec![
                    int(value),
                    Cell::Float(l.value),
                    Cell::Float(to_f64(&l.rational_part)),
                    rat(&l.rational_part),
                    int(l.fundamental),
                    int(l.conductor),
                ]);
            }
            table
        }
        Command::Gauss { n, m } => {
            let ms: Vec<u64> = if m.is_empty() { (1..=*n).collect() } else { m.clone() };
            let mut table = Table::new(&["m", "n", "re", "im", "im_closed", "im_coefficient", "im_radicand"]);
            for &residue in &ms {
                let g = gauss_sum_direct(residue, *n)?;
                let exact = gauss_sum_im_exact(residue, *n)?;
                table.push(vec![
                    int(residue),
                    int(*n),
                    Cell::Float(g.re),
                    Cell::Float(g.im),
                    Cell::Float(exact.value()),
                    int(exact.coefficient),
                    int(exact.radicand),
                ]);
            }
            table
        }
        Command::Farey { x, order } => {
            let mut table = Table::new(&["x", "order", "a", "q", "lo", "lo_exact", "hi", "hi_exact"]);
            for &value in x {
                let arc = farey_locate(value, *order)?;
                let show = |r: num_rational::Ratio<i64>| (*r.numer() as f64 / *r.denom() as f64, r.to_string());
                let (lo, lo_exact) = show(arc.lo);
                let (hi, hi_exact) = show(arc.hi);
                table.push(vec![
                    Cell::Float(value),
                    int(*order),
                    int(arc.a),
                    int(arc.q),
                    Cell::Float(lo),
                    Cell::Text(lo_exact),
                    Cell::Float(hi),
                    Cell::Text(hi_exact),
                ]);
            }
            table
        }
        Command::Expsum { q, n, x, alpha, beta, samples } => {
            let form = parse_form(q)?;
            let mut table = Table::new(&["n", "sample", "x", "alpha", "beta", "a", "q", "sum_abs", "ratio"]);
            let results = match x {
                Some(x) => n.iter().map(|&len| prop31_sample(&form, *alpha, *beta, *x, len)).collect::<Result<Vec<_>, _>>()?,
                None => prop31_sweep(&form, n, &sweep_points(cli.seed, *samples))?,
            };
            let per_n = if x.is_some() { 1 } else { *samples };
            for (i, s) in results.iter().enumerate() {
                table.push(vec![
                    int(s.n),
                    int((i % per_n) as u64),
                    Cell::Float(s.x),
                    Cell::Float(s.alpha),
                    Cell::Float(s.beta),
                    int(s.arc.a),
                    int(s.arc.q),
                    Cell::Float(s.sum_abs),
                    Cell::Float(s.ratio),
                ]);
            }
            table
        }
        Command::Hl { n, x, samples } => {
            let mut table = Table::new(&["n", "sample", "x", "a", "q", "sum_abs", "ratio", "classical_condition"]);
            let results = match x {
                Some(x) => n.iter().map(|&len| hl_sample(*x, len)).collect::<Result<Vec<_>, _>>()?,
                None => hl_sweep(n, &sweep_points(cli.seed, *samples))?,
            };
            let per_n = if x.is_some() { 1 } else { *samples };
            for (i, s) in results.iter().enumerate() {
                table.push(vec![
                    int(s.n),
                    int((i % per_n) as u64),
                    Cell::Float(s.x),
                    int(s.arc.a),
                    int(s.arc.q),
                    Cell::Float(s.sum_abs),
                    Cell::Float(s.ratio),
                    Cell::Bool(s.classical_condition),
                ]);
            }
            table
        }
        Command::Omega { kind, max, top, q, c, r } => omega_table(*kind, *max, *top, q, c, r)?,
        Command::Scan { region: args, r, r_min, r_max, step, fit } => {
            let spec = region(args)?;
            let mut rs = r.clone();
            match (r_min, r_max) {
                (Some(lo), Some(hi)) => {
                    if *step == 0 {
                        bail!("--step must be positive");
                    }
                    rs.extend((*lo..=*hi).step_by(*step as usize));
                }
                (None, None) => {}
                _ => bail!("--r-min and --r-max go together"),
            }
            if rs.is_empty() {
                bail!("no dilations given; use --r or --r-min/--r-max");
            }
            let records = error_scan(&spec, &rs)?;
            if *fit {
                let f = fit_exponent(&records)?;
                let mut table = Table::new(&["metric", "value"]);
                for (name, value) in [
                    ("slope", f.slope),
                    ("intercept", f.intercept),
                    ("max_normalized", f.max_normalized),
                    ("p95_normalized", f.p95_normalized),
                ] {
                    table.push(vec![Cell::Text(name.into()), Cell::Float(value)]);
                }
                table.push(vec![Cell::Text("used".into()), int(f.used as u64)]);
                table.push(vec![Cell::Text("dropped".into()), int(f.dropped as u64)]);
                table
            } else {
                let mut table = Table::new(&["r", "count", "ambiguous_fibers", "volume_term", "error"]);
                for rec in records {
                    table.push(vec![
                        int(rec.r),
                        int(rec.count as i128),
                        int(rec.ambiguous_fibers),
                        Cell::Float(rec.volume_term),
                        Cell::Float(rec.error),
                    ]);
                }
                table
            }
        }
    };
    Ok((table, status))
}

fn omega_table(
    kind: OmegaKind,
    max: Option<u64>,
    top: Option<usize>,
    q: &str,
    c: &str,
    r: &[u64],
) -> anyhow::Result<Table> {
    let need_max = || max.context("--max is required for this kind");
    let table = match kind {
        OmegaKind::Minus => {
            let mut table = Table::new(&["n", "error", "error_exact", "normalized"]);
            let records = omega_minus_scan(need_max()?)?;
            for rec in records.iter().take(top.unwrap_or(usize::MAX)) {
                table.push(vec![int(rec.n), Cell::Float(to_f64(&rec.error)), rat(&rec.error), Cell::Float(rec.normalized)]);
            }
            table
        }
        OmegaKind::Plus => {
            let mut table = Table::new(&["m", "n", "error", "error_exact", "normalized", "normalized_exact"]);
            for rec in omega_plus_family(need_max()?)?.records {
                table.push(vec![
                    int(rec.m),
                    int(rec.n),
                    Cell::Float(to_f64(&rec.error)),
                    rat(&rec.error),
                    Cell::Float(to_f64(&rec.normalized)),
                    rat(&rec.normalized),
                ]);
            }
            table
        }
        OmegaKind::Family => {
            let mut table = Table::new(&["x", "y"]);
            for (x, y) in boundary_family_2d(need_max()?)? {
                table.push(vec![int(x), int(y)]);
            }
            table
        }
        OmegaKind::Growth => {
            if r.is_empty() {
                bail!("--r is required for the growth scan");
            }
            let mut table = Table::new(&["r", "boundary_count", "ratio"]);
            for rec in boundary_growth_3d(&parse_form(q)?, parse_rational(c)?, r)? {
                table.push(vec![int(rec.r), int(rec.boundary_count as i128), Cell::Float(rec.ratio)]);
            }
            table
        }
    };
    Ok(table)
}
