//! The `mekr` command line: bounds, search, compression and the bijection
//! table, with machine-readable output.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input or budget
//! violation, 3 a search verdict disagrees with the predicted extremal
//! structure, 4 `compress` input is not cross t-intersecting.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bijection::BijectionTable;
use crate::bounds::bound_records;
use crate::compression::kernel_reduce;
use crate::error::Error;
use crate::family::{is_cross_t_intersecting, Family};
use crate::search::{
    max_sum_both, max_sum_bruteforce, max_sum_closure, max_t_intersecting, verify_kernel_pipeline,
    Budget, SearchOptions, SearchReport,
};
use crate::universe::Universe;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DISCREPANCY: i32 = 3;
pub const EXIT_NOT_INTERSECTING: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "mekr", version, about = "Cross t-intersecting multiset families: bounds, search, compression")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for the search engines (default: all available).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit every closed-form bound with its hypothesis flag.
    Bound {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        /// Ground-set size for the set version; implies m = n - k + 1 when
        /// --m is absent.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Exhaustive search for the maximum |F| + |G| (or, with
    /// --intersecting, the largest t-intersecting family).
    Search {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        /// Default: both engines when the brute-force budget allows,
        /// otherwise closure.
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
        /// Search single t-intersecting families instead of pairs.
        #[arg(long)]
        intersecting: bool,
        /// Include every optimal pair, not only class representatives.
        #[arg(long)]
        witnesses: bool,
    },
    /// Reduce a pair given as two family files to kernel M(m,1), or, with no
    /// files, run the seeded random pipeline.
    Compress {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// F.json G.json
        files: Vec<PathBuf>,
    },
    /// Dump the subset-to-multiset bijection table.
    Bijection {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Brute,
    Closure,
    Both,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Postcondition(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

/// Parses `args` (including the program name) and runs the command. Output
/// goes to `stdout` unless `--out` is given; diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let budget = match Budget::from_env() {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(stderr, "MEKR_BUDGET: {e}");
            return EXIT_INVALID;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "thread pool: {e}");
            return EXIT_INTERNAL;
        }
    };
    let outcome = pool.install(|| dispatch(&config, budget));
    match outcome {
        Ok((text, code)) => {
            let written = match &config.out {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "write failed: {e}");
                return EXIT_INTERNAL;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(config: &RunConfig, budget: Budget) -> Outcome {
    match &config.command {
        Command::Bound { m, k, t, n } => cmd_bound(*m, *k, *t, *n, config.format),
        Command::Search {
            m,
            k,
            t,
            engine,
            intersecting,
            witnesses,
        } => cmd_search(*m, *k, *t, *engine, *intersecting, *witnesses, budget, config.format),
        Command::Compress {
            m,
            k,
            t,
            samples,
            seed,
            files,
        } => cmd_compress(*m, *k, *t, *samples, *seed, files, config.format),
        Command::Bijection { m, k } => cmd_bijection(*m, *k, budget, config.format),
    }
}

fn check_mkt(m: usize, k: usize, t: usize) -> Result<(), Failure> {
    if m == 0 {
        return Err(Failure::invalid("--m must be at least 1"));
    }
    if k == 0 {
        return Err(Failure::invalid("--k must be at least 1"));
    }
    if t == 0 || t > k {
        return Err(Failure::invalid(format!("--t must satisfy 1 <= t <= k (k={k})")));
    }
    Ok(())
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
            + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn cmd_bound(m: Option<usize>, k: usize, t: usize, n: Option<usize>, format: Option<Format>) -> Outcome {
    let m = match (m, n) {
        (Some(m), _) => m,
        (None, Some(n)) if n >= k && k >= 1 => n - k + 1,
        (None, Some(_)) => return Err(Failure::invalid("--n must be at least --k")),
        (None, None) => return Err(Failure::invalid("one of --m or --n is required")),
    };
    check_mkt(m, k, t)?;
    let records = bound_records(m, k, t, n)?;
    let header = ["m", "k", "t", "formula", "value", "hypothesis_ok"];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.m.to_string(),
                r.k.to_string(),
                r.t.to_string(),
                r.formula.to_string(),
                r.value.to_string(),
                r.hypothesis_ok.to_string(),
            ]
        })
        .collect();
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => csv_text(&header, &rows)?,
        Format::Table => table(&header, &rows),
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                m: usize,
                k: usize,
                t: usize,
                n: Option<usize>,
                formula: String,
                value: &'a str,
                hypothesis_ok: bool,
            }
            let values: Vec<String> = records.iter().map(|r| r.value.to_string()).collect();
            let out: Vec<Row> = records
                .iter()
                .zip(&values)
                .map(|(r, v)| Row {
                    m: r.m,
                    k: r.k,
                    t: r.t,
                    n: r.n,
                    formula: r.formula.to_string(),
                    value: v,
                    hypothesis_ok: r.hypothesis_ok,
                })
                .collect();
            json_line(&out)
        }
    };
    Ok((text, EXIT_OK))
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    m: usize,
    k: usize,
    t: usize,
    engine: Option<EngineArg>,
    intersecting: bool,
    witnesses: bool,
    budget: Budget,
    format: Option<Format>,
) -> Outcome {
    check_mkt(m, k, t)?;
    let universe = Universe::new(m, k)?;
    let opts = SearchOptions {
        budget,
        keep_witnesses: witnesses,
    };
    let report = if intersecting {
        max_t_intersecting(&universe, t, &opts)?
    } else {
        let engine = engine.unwrap_or(if universe.len() <= budget.brute.min(64) {
            EngineArg::Both
        } else {
            EngineArg::Closure
        });
        match engine {
            EngineArg::Brute => max_sum_bruteforce(&universe, t, &opts)?,
            EngineArg::Closure => max_sum_closure(&universe, t, &opts)?,
            EngineArg::Both => max_sum_both(&universe, t, &opts)?,
        }
    };
    let code = if report.verdict.is_discrepancy() {
        EXIT_DISCREPANCY
    } else {
        EXIT_OK
    };
    Ok((render_report(&report, witnesses, format)?, code))
}

fn render_report(report: &SearchReport, witnesses: bool, format: Option<Format>) -> Result<String, Failure> {
    let bound = report.bound.as_ref().map(|b| b.to_string()).unwrap_or_default();
    let status = serde_json::to_value(report.verdict.status).expect("status serializes");
    let status = status.as_str().unwrap_or_default().to_string();
    Ok(match format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut text = report.to_json();
            if witnesses {
                // splice the witnesses in before the closing brace
                let list: Vec<serde_json::Value> = report
                    .witnesses
                    .iter()
                    .map(|(f, g)| serde_json::json!({"F": f.to_lists(), "G": g.to_lists()}))
                    .collect();
                let mut value: serde_json::Value =
                    serde_json::from_str(&text).expect("report is valid json");
                value["witnesses"] = serde_json::Value::Array(list);
                text = serde_json::to_string_pretty(&value).expect("serializes");
            }
            text.push('\n');
            text
        }
        Format::Csv => csv_text(
            &["m", "k", "t", "engine", "optimum", "bound", "bound_applicable", "classes", "verdict"],
            &[vec![
                report.m().to_string(),
                report.k().to_string(),
                report.t.to_string(),
                report.engine.to_string(),
                report.optimum.to_string(),
                bound,
                report.bound_applicable.to_string(),
                report.classes.len().to_string(),
                status,
            ]],
        )?,
        Format::Table => {
            let mut out = format!(
                "(m,k,t)=({},{},{}) engine={} optimum={} bound={} applicable={} verdict={}\n",
                report.m(),
                report.k(),
                report.t,
                report.engine,
                report.optimum,
                bound,
                report.bound_applicable,
                status
            );
            let rows: Vec<Vec<String>> = report
                .classes
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let tag = if report.verdict.extra.contains(&c.form) {
                        "extra"
                    } else if report.verdict.matched.contains(&c.form) {
                        "predicted"
                    } else {
                        "-"
                    };
                    vec![
                        i.to_string(),
                        c.f.len().to_string(),
                        c.g.len().to_string(),
                        c.f.to_string(),
                        c.g.to_string(),
                        tag.to_string(),
                    ]
                })
                .collect();
            out += &table(&["class", "|F|", "|G|", "F", "G", "status"], &rows);
            for note in &report.verdict.notes {
                out += &format!("note: {note}\n");
            }
            out
        }
    })
}

fn read_family(universe: &Arc<Universe>, path: &PathBuf) -> Result<Family, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    Family::parse_json(universe, &text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn infer_k(path: &PathBuf) -> Result<usize, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let lists: Vec<Vec<usize>> = serde_json::from_str(&text)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    lists
        .first()
        .map(Vec::len)
        .ok_or_else(|| Failure::invalid(format!("{}: empty family; pass --k", path.display())))
}

fn cmd_compress(
    m: usize,
    k: Option<usize>,
    t: usize,
    samples: usize,
    seed: u64,
    files: &[PathBuf],
    format: Option<Format>,
) -> Outcome {
    if !matches!(format, None | Some(Format::Json)) {
        return Err(Failure::invalid("compress only supports --format json"));
    }
    match files {
        [] => {
            let k = k.ok_or_else(|| Failure::invalid("--k is required without family files"))?;
            check_mkt(m, k, t)?;
            let universe = Universe::new(m, k)?;
            let report = verify_kernel_pipeline(&universe, t, samples, seed)?;
            let code = if report.all_passed() { EXIT_OK } else { EXIT_INTERNAL };
            Ok((json_line(&report), code))
        }
        [f_path, g_path] => {
            let k = match k {
                Some(k) => k,
                None => infer_k(f_path)?,
            };
            check_mkt(m, k, t)?;
            let universe = Universe::new(m, k)?;
            let f = read_family(&universe, f_path)?;
            let g = read_family(&universe, g_path)?;
            if f.is_empty() || g.is_empty() {
                return Err(Failure::invalid("families must be non-empty"));
            }
            if !is_cross_t_intersecting(&f, &g, t)? {
                return Err(Failure {
                    code: EXIT_NOT_INTERSECTING,
                    message: format!("input pair is not cross {t}-intersecting"),
                });
            }
            let red = kernel_reduce(&f, &g, t)?;
            #[derive(Serialize)]
            struct Out<'a> {
                m: usize,
                k: usize,
                t: usize,
                #[serde(rename = "F")]
                f: Vec<Vec<usize>>,
                #[serde(rename = "G")]
                g: Vec<Vec<usize>>,
                kernel_cells: usize,
                trace: &'a crate::compression::CompressionTrace,
            }
            let out = Out {
                m,
                k,
                t,
                f: red.f.to_lists(),
                g: red.g.to_lists(),
                kernel_cells: red.kernel.cells(),
                trace: &red.trace,
            };
            Ok((json_line(&out), EXIT_OK))
        }
        _ => Err(Failure::invalid("compress takes exactly two family files (F and G) or none")),
    }
}

fn cmd_bijection(m: usize, k: usize, budget: Budget, format: Option<Format>) -> Outcome {
    if m == 0 || k == 0 {
        return Err(Failure::invalid("--m and --k must be at least 1"));
    }
    let size = crate::binom::multichoose_usize(m, k)
        .ok_or_else(|| Failure::invalid("table size overflows"))?;
    if size > budget.table {
        return Err(Failure::invalid(format!(
            "table of {size} rows exceeds the budget {}",
            budget.table
        )));
    }
    let table_data = BijectionTable::get(m, k)?;
    let rows: Vec<Vec<String>> = table_data
        .rows()
        .map(|(s, f)| {
            vec![
                serde_json::to_string(&s).expect("list serializes"),
                f.to_string(),
            ]
        })
        .collect();
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            table_data.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("utf-8")
        }
        Format::Table => table(&["subset", "multiset"], &rows),
        Format::Json => {
            let out: Vec<serde_json::Value> = table_data
                .rows()
                .map(|(s, f)| serde_json::json!({"subset": s, "multiset": f.elements()}))
                .collect();
            json_line(&out)
        }
    };
    Ok((text, EXIT_OK))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("mekr").chain(args.iter().copied()), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bound_rows() {
        let (code, out, _) = run_args(&["bound", "--m", "3", "--k", "2", "--t", "1"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("m,k,t,formula,value,hypothesis_ok\n"));
        assert!(out.contains("3,2,1,sum,6,true"));
        let (_, out, _) = run_args(&["bound", "--m", "2", "--k", "3", "--t", "1"]);
        assert!(out.contains("2,3,1,sum,") && out.contains(",false"));
        let (code, _, err) = run_args(&["bound", "--m", "3", "--k", "2", "--t", "3"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("--t"));
    }

    #[test]
    fn bad_flags_exit_two() {
        let (code, _, _) = run_args(&["search", "--m", "x", "--k", "2", "--t", "1"]);
        assert_eq!(code, EXIT_INVALID);
        let (code, _, _) = run_args(&["frobnicate"]);
        assert_eq!(code, EXIT_INVALID);
    }

    #[test]
    fn table_layout() {
        let t = table(&["a", "bb"], &[vec!["ccc".into(), "d".into()]]);
        assert_eq!(t, "a    bb\nccc  d\n");
    }
}
