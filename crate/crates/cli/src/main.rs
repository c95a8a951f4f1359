use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use seaweed_core::enumerate::specs;
use seaweed_core::formulas::{
    alpha_family, doubling_images, frobenius_census, index_by_formula, padding_family, CensusReport,
};
use seaweed_core::oracle::oracle_index;
use seaweed_core::render::{render, Format, DEFAULT_MAX_RENDER};
use seaweed_core::{meander, reduction, AlgebraType, Error, SeaweedSpec};

/// Largest vertex count `index --method auto` still cross-checks with a meander.
const AUTO_MEANDER_VERTICES: usize = 1 << 20;

#[derive(Parser)]
#[command(
    name = "seaweed",
    version,
    about = "Index of seaweed subalgebras of gl(n), so(2n+1), sp(2n) and so(2n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the index of a seaweed given as TYPE:n:top|bottom.
    Index {
        spec: String,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Append the reduction steps as JSON lines.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Draw the meander of a seaweed.
    Render {
        spec: String,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
        /// Spacing between vertices in SVG user units.
        #[arg(long, default_value_t = 40)]
        unit: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare every applicable method on all specs up to a rank bound.
    Verify {
        /// Algebra type; all four when omitted.
        #[arg(long = "type")]
        algebra: Option<String>,
        #[arg(long)]
        max_n: usize,
        /// Also run the matrix-rank oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Stop after this many specs.
        #[arg(long)]
        max_specs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Count Frobenius type-A and Ξ type-D seaweeds and check the doubling map.
    Census {
        #[arg(long)]
        max_n: usize,
        /// Include so(4n + 2).
        #[arg(long)]
        odd: bool,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Write the JSON report here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the JSON report instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Generate members of Frobenius families.
    Family {
        #[command(subcommand)]
        kind: Family,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Type-C parabolic built from α_1, …, α_k.
    #[command(name = "lemF")]
    Alphas {
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<u64>,
    },
    /// `(n | a)` padded with t blocks 2s on each side.
    Padding {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        t: u64,
    },
    /// The two type-D images of a type-A seaweed.
    #[command(name = "thB")]
    Doubling {
        #[arg(long)]
        from: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Meander,
    Reduce,
    Formula,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

/// An error that carries its exit status.
#[derive(Debug)]
struct Exit {
    code: u8,
    message: String,
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn exit(code: u8, message: impl Into<String>) -> anyhow::Error {
    Exit {
        code,
        message: message.into(),
    }
    .into()
}

const PARSE: u8 = 2;
const SHAPE: u8 = 3;
const MISMATCH: u8 = 4;

fn parse_spec(s: &str) -> anyhow::Result<SeaweedSpec> {
    s.parse().map_err(|e: Error| exit(PARSE, e.to_string()))
}

fn shape(e: Error) -> anyhow::Error {
    exit(SHAPE, e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Exit>() {
                Some(x) => ExitCode::from(x.code),
                None => ExitCode::FAILURE,
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Index {
            spec,
            method,
            trace,
            json,
        } => cmd_index(&spec, method, trace, json),
        Command::Render {
            spec,
            format,
            unit,
            output,
        } => cmd_render(&spec, format, unit, output),
        Command::Verify {
            algebra,
            max_n,
            oracle,
            seed,
            trials,
            jobs,
            max_specs,
            json,
        } => {
            let algebras = match algebra {
                Some(t) => vec![t
                    .parse::<AlgebraType>()
                    .map_err(|e| exit(PARSE, e.to_string()))?],
                None => AlgebraType::ALL.to_vec(),
            };
            let opts = VerifyOptions {
                max_n,
                oracle,
                seed,
                trials,
                max_specs,
            };
            with_pool(jobs, || cmd_verify(&algebras, &opts, json))
        }
        Command::Census {
            max_n,
            odd,
            jobs,
            output,
            json,
        } => with_pool(jobs, || cmd_census(max_n, odd, output, json)),
        Command::Family { kind } => cmd_family(kind),
    }
}

fn with_pool<T: Send>(
    jobs: usize,
    f: impl FnOnce() -> anyhow::Result<T> + Send,
) -> anyhow::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building the worker pool")?;
    pool.install(f)
}

fn cmd_index(spec: &str, method: Method, trace: bool, json: bool) -> anyhow::Result<()> {
    let spec = parse_spec(spec)?;
    let mut steps = None;
    let mut checked = false;
    let (value, used): (BigUint, &str) = match method {
        Method::Auto | Method::Reduce => {
            let (v, t) = reduction::index(&spec).map_err(shape)?;
            steps = Some(t);
            if method == Method::Auto && meander_size(&spec) <= AUTO_MEANDER_VERTICES {
                let m = meander::index(&spec).map_err(shape)?;
                if BigUint::from(m) != v {
                    return Err(exit(
                        MISMATCH,
                        format!("{spec}: reduction gives {v}, meander gives {m}"),
                    ));
                }
                checked = true;
            }
            (v, "reduce")
        }
        Method::Meander => (meander::index(&spec).map_err(shape)?.into(), "meander"),
        Method::Formula => match index_by_formula(&spec).map_err(shape)? {
            Some((v, _)) => (v.into(), "formula"),
            None => return Err(exit(SHAPE, format!("no closed form applies to {spec}"))),
        },
    };
    if trace && steps.is_none() {
        steps = Some(reduction::index(&spec).map_err(shape)?.1);
    }
    let mut out = std::io::stdout().lock();
    if json {
        let mut report = json!({
            "schema": 1,
            "spec": spec.to_string(),
            "index": number(&value),
            "method": used,
            "meander_checked": checked,
        });
        if let (true, Some(t)) = (trace, &steps) {
            let lines: Vec<serde_json::Value> = t
                .to_json_lines()
                .iter()
                .map(|l| serde_json::from_str(l).expect("trace lines are JSON"))
                .collect();
            report["trace"] = lines.into();
        }
        writeln!(out, "{}", serde_json::to_string(&report)?)?;
    } else {
        writeln!(out, "{value}")?;
        if let (true, Some(t)) = (trace, &steps) {
            for line in t.to_json_lines() {
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}

fn meander_size(spec: &SeaweedSpec) -> usize {
    let per_unit = if spec.algebra() == AlgebraType::A {
        1u32
    } else {
        2
    };
    (spec.n() * per_unit).to_usize().unwrap_or(usize::MAX)
}

fn number(v: &BigUint) -> serde_json::Value {
    match v.to_u64() {
        Some(x) => x.into(),
        None => v.to_string().into(),
    }
}

fn cmd_render(
    spec: &str,
    format: RenderFormat,
    unit: u32,
    output: Option<PathBuf>,
) -> anyhow::Result<()> {
    let spec = parse_spec(spec)?;
    let max = match std::env::var("SEAWEED_MAX_RENDER") {
        Ok(v) => v.trim().parse().map_err(|_| {
            exit(
                PARSE,
                format!("SEAWEED_MAX_RENDER must be a non-negative integer, got {v:?}"),
            )
        })?,
        Err(_) => DEFAULT_MAX_RENDER,
    };
    let format = match format {
        RenderFormat::Ascii => Format::Ascii,
        RenderFormat::Svg => Format::Svg { unit },
    };
    let m = meander::build(&spec).map_err(shape)?;
    let text = render(&m, format, max).map_err(shape)?;
    emit(&text, output)
}

fn emit(text: &str, output: Option<PathBuf>) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

struct VerifyOptions {
    max_n: usize,
    oracle: bool,
    seed: u64,
    trials: usize,
    max_specs: Option<usize>,
}

#[derive(Serialize)]
struct Mismatch {
    spec: String,
    values: Vec<(String, String)>,
}

#[derive(Default, Serialize)]
struct Tally {
    specs: usize,
    xi: usize,
    formula: usize,
    oracle: usize,
    oracle_skipped: usize,
}

/// Method values, whether a closed form applied, whether the oracle ran.
type Checked = (Vec<(String, String)>, bool, bool);

/// All method values for one spec, in a fixed order.
fn check_one(spec: &SeaweedSpec, opts: &VerifyOptions) -> anyhow::Result<Checked> {
    let mut values = vec![
        (
            "reduce".to_string(),
            reduction::index_value(spec)?.to_string(),
        ),
        ("meander".to_string(), meander::index(spec)?.to_string()),
    ];
    if let Some((v, name)) = index_by_formula(spec)? {
        values.push((format!("formula ({name})"), v.to_string()));
    }
    let mut oracle_done = false;
    if opts.oracle {
        match oracle_index(spec, opts.trials, opts.seed) {
            Ok(r) => {
                values.push(("oracle".to_string(), r.index.to_string()));
                oracle_done = true;
            }
            Err(Error::TooLarge { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let has_formula = values.len() > 2 + usize::from(oracle_done);
    Ok((values, has_formula, oracle_done))
}

fn cmd_verify(algebras: &[AlgebraType], opts: &VerifyOptions, json: bool) -> anyhow::Result<()> {
    let mut all = Vec::new();
    for &algebra in algebras {
        for n in 1..=opts.max_n {
            all.extend(specs(algebra, n).map_err(shape)?);
        }
    }
    let available = all.len();
    let truncated = opts.max_specs.is_some_and(|m| m < available);
    if let Some(m) = opts.max_specs {
        all.truncate(m);
    }
    let results: Vec<_> = all
        .par_iter()
        .map(|s| check_one(s, opts).with_context(|| format!("checking {s}")))
        .collect::<anyhow::Result<_>>()?;

    let mut tally = Tally::default();
    let mut first = None;
    for (spec, (values, has_formula, oracle_done)) in all.iter().zip(results) {
        tally.specs += 1;
        tally.xi += usize::from(spec.xi_membership().in_xi);
        tally.formula += usize::from(has_formula);
        tally.oracle += usize::from(oracle_done);
        tally.oracle_skipped += usize::from(opts.oracle && !oracle_done);
        if first.is_none() && values.iter().any(|(_, v)| *v != values[0].1) {
            first = Some(Mismatch {
                spec: spec.to_string(),
                values,
            });
        }
    }

    let mut out = std::io::stdout().lock();
    if json {
        let report = json!({
            "schema": 1,
            "tally": tally,
            "truncated": truncated,
            "available": available,
            "mismatch": first,
        });
        writeln!(out, "{}", serde_json::to_string(&report)?)?;
    } else {
        if truncated {
            writeln!(
                out,
                "truncated: checked {} of {available} specs (--max-specs)",
                tally.specs
            )?;
        }
        writeln!(
            out,
            "checked {} specs ({} in Xi, {} with a closed form, {} by the oracle, {} too large for the oracle)",
            tally.specs, tally.xi, tally.formula, tally.oracle, tally.oracle_skipped
        )?;
        match &first {
            None => writeln!(out, "all methods agree")?,
            Some(m) => {
                let parts: Vec<String> = m.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "mismatch at {}: {}", m.spec, parts.join(" "))?;
            }
        }
    }
    match first {
        None => Ok(()),
        Some(m) => Err(exit(MISMATCH, format!("methods disagree on {}", m.spec))),
    }
}

fn cmd_census(max_n: usize, odd: bool, output: Option<PathBuf>, json: bool) -> anyhow::Result<()> {
    if max_n == 0 {
        return Err(exit(PARSE, "--max-n must be at least 1"));
    }
    let report = frobenius_census(max_n, odd).map_err(shape)?;
    let unconfirmed = unconfirmed_members(&report)?;
    let text = serde_json::to_string_pretty(&report)? + "\n";
    if let Some(path) = output {
        fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut out = std::io::stdout().lock();
    if json {
        out.write_all(text.as_bytes())?;
    } else {
        writeln!(
            out,
            "{:>3} {:>8} {:>10} {:>10} {:>9}",
            "n", "#F^A_n", "#F^D_2n", "#F^D_2n+1", "doubling"
        )?;
        for row in &report.rows {
            let odd = row
                .fd_odd
                .as_ref()
                .map_or("-".to_string(), |v| v.len().to_string());
            let ok = if row.bijection_ok { "ok" } else { "FAILED" };
            writeln!(
                out,
                "{:>3} {:>8} {:>10} {:>10} {:>9}",
                row.n,
                row.fa.len(),
                row.fd_even.len(),
                odd,
                ok
            )?;
        }
    }
    if !report.all_ok() {
        return Err(exit(
            MISMATCH,
            "census counts do not match the doubling correspondence",
        ));
    }
    if let Some(s) = unconfirmed.first() {
        return Err(exit(
            MISMATCH,
            format!("{s} is listed as Frobenius but reduces to a nonzero index"),
        ));
    }
    Ok(())
}

/// Listed type-D members whose reduced index is not 0.
fn unconfirmed_members(report: &CensusReport) -> anyhow::Result<Vec<String>> {
    let members: Vec<&String> = report
        .rows
        .iter()
        .flat_map(|r| r.fd_even.iter().chain(r.fd_odd.iter().flatten()))
        .collect();
    let bad: Vec<Option<String>> = members
        .par_iter()
        .map(|s| -> anyhow::Result<Option<String>> {
            let spec: SeaweedSpec = s.parse()?;
            let v = reduction::index_value(&spec)?;
            Ok((v != BigUint::ZERO).then(|| s.to_string()))
        })
        .collect::<anyhow::Result<_>>()?;
    Ok(bad.into_iter().flatten().collect())
}

fn cmd_family(kind: Family) -> anyhow::Result<()> {
    let members = match kind {
        Family::Alphas { alphas } => {
            if alphas.is_empty() {
                return Err(exit(PARSE, "--alphas needs at least one value"));
            }
            vec![alpha_family(&alphas).map_err(shape)?]
        }
        Family::Padding { spec, t } => {
            let spec = parse_spec(&spec)?;
            vec![padding_family(&spec, t).map_err(shape)?]
        }
        Family::Doubling { from } => {
            let spec = parse_spec(&from)?;
            doubling_images(&spec).map_err(shape)?.to_vec()
        }
    };
    let mut out = std::io::stdout().lock();
    for s in members {
        let v = reduction::index_value(&s).map_err(shape)?;
        writeln!(out, "{s} index={v}")?;
    }
    Ok(())
}
