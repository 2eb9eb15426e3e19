//! File-based front end: CSV ingestion, plan files and the text report.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::affinity::{Category, Relationship, RelationshipSpec};
use crate::capacity::{Table, TableSpec};
use crate::error::{Error, Result};
use crate::pipeline::{self, Person, SeatingPlan, SolveConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Guest list with header `id,name`.
    #[arg(long)]
    pub people: PathBuf,
    /// Relationships with header `person_a,person_b,category`.
    #[arg(long)]
    pub relationships: PathBuf,
    /// Tables with header `table_id,capacity`.
    #[arg(long)]
    pub tables: PathBuf,
    /// Where to write the plan (JSON).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Residual tolerance for discretization [default: 1e-6 * sqrt(N)].
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = crate::discretize::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Weight for pairs with no stated relationship; 0 disables the fill.
    #[arg(long, default_value_t = crate::affinity::DEFAULT_NEUTRAL_WEIGHT)]
    pub neutral_weight: f64,
    /// Also run the exhaustive search and record it in the plan.
    #[arg(long)]
    pub oracle: bool,
    /// Do not print the report.
    #[arg(long)]
    pub quiet: bool,
}

impl SolveArgs {
    pub fn config(&self) -> SolveConfig {
        SolveConfig {
            epsilon: self.epsilon,
            max_iter: self.max_iter,
            neutral_weight: self.neutral_weight,
            seed: self.seed,
            ..SolveConfig::default()
        }
    }
}

/// Outcome of one `solve` invocation.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub plan_path: PathBuf,
    /// `None` when no plan was written.
    pub plan: Option<SeatingPlan>,
    pub report: String,
    pub exit_code: i32,
    pub error: Option<Error>,
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_internal() {
        EXIT_INTERNAL
    } else {
        EXIT_INVALID
    }
}

/// Reads the inputs, solves, writes the plan file and renders the report.
/// Never panics on bad input; failures come back as a nonzero exit code.
pub fn run_solve(args: &SolveArgs) -> RunArtifacts {
    match solve_files(args) {
        Ok((plan, oracle_note)) => {
            let mut report = render_report(&plan);
            if let Some(note) = oracle_note {
                let _ = writeln!(report, "oracle: {note}");
            }
            RunArtifacts {
                plan_path: args.out.clone(),
                plan: Some(plan),
                report,
                exit_code: EXIT_OK,
                error: None,
            }
        }
        Err(e) => RunArtifacts {
            plan_path: args.out.clone(),
            plan: None,
            report: format!("error: {e}\n"),
            exit_code: exit_code(&e),
            error: Some(e),
        },
    }
}

fn solve_files(args: &SolveArgs) -> Result<(SeatingPlan, Option<String>)> {
    let people = read_people(&args.people)?;
    let spec = read_relationships(&args.relationships)?;
    let tables = read_tables(&args.tables)?;
    let config = args.config();
    let mut plan = pipeline::solve_constrained(&people, &spec, &tables, &config)?;
    let mut note = None;
    if args.oracle {
        match pipeline::oracle_comparison(&people, &spec, &tables, &config, &plan) {
            Ok(cmp) => plan.oracle = Some(cmp),
            Err(e @ Error::OracleTooLarge { .. }) => note = Some(format!("skipped: {e}")),
            Err(e) => return Err(e),
        }
    }
    write_plan(&args.out, &plan)?;
    Ok((plan, note))
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

// Reads a CSV with an exact header, returning each row with its line number.
fn read_rows<T: DeserializeOwned>(path: &Path, header: &[&str]) -> Result<Vec<(u64, T)>> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_rows(&path.display().to_string(), &text, header)
}

fn parse_rows<T: DeserializeOwned>(file: &str, text: &str, header: &[&str]) -> Result<Vec<(u64, T)>> {
    let parse_error = |line: u64, message: String| Error::Parse {
        file: file.to_owned(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let found = reader.headers().map_err(|e| parse_error(1, e.to_string()))?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(parse_error(
            1,
            format!(
                "expected header `{}`, found `{}`",
                header.join(","),
                found.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    // The reader's own line counter skips blank lines; count from the byte offset.
    let line_at = |pos: Option<&csv::Position>| {
        pos.map_or(0, |p| {
            let bytes = text.as_bytes();
            let mut end = (p.byte() as usize).min(bytes.len());
            while end < bytes.len() && matches!(bytes[end], b'\n' | b'\r') {
                end += 1;
            }
            bytes[..end].iter().filter(|&&b| b == b'\n').count() as u64 + 1
        })
    };
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(line_at(e.position()), e.to_string()))?;
        let line = line_at(record.position());
        let row = record
            .deserialize(Some(&found))
            .map_err(|e| parse_error(line, e.to_string()))?;
        rows.push((line, row));
    }
    Ok(rows)
}

#[derive(Deserialize)]
struct RelationshipRow {
    person_a: String,
    person_b: String,
    category: String,
}

pub fn read_people(path: &Path) -> Result<Vec<Person>> {
    let rows: Vec<(u64, Person)> = read_rows(path, &["id", "name"])?;
    let mut seen = std::collections::HashSet::new();
    let mut people = Vec::with_capacity(rows.len());
    for (line, p) in rows {
        let at = |message: String| Error::Parse {
            file: path.display().to_string(),
            line,
            message,
        };
        if p.id.is_empty() {
            return Err(at("empty person id".into()));
        }
        if !seen.insert(p.id.clone()) {
            return Err(at(Error::DuplicatePerson(p.id).to_string()));
        }
        people.push(p);
    }
    if people.is_empty() {
        return Err(Error::EmptyGuestList);
    }
    Ok(people)
}

pub fn read_relationships(path: &Path) -> Result<RelationshipSpec> {
    let rows: Vec<(u64, RelationshipRow)> = read_rows(path, &["person_a", "person_b", "category"])?;
    let mut pairs = Vec::with_capacity(rows.len());
    let mut lines = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        let category: Category = row.category.parse().map_err(|e: Error| Error::Parse {
            file: path.display().to_string(),
            line,
            message: e.to_string(),
        })?;
        pairs.push(Relationship::new(row.person_a, row.person_b, category));
        lines.push(line);
    }
    // Re-run validation row by row so the error can name its line.
    RelationshipSpec::new(pairs.clone()).map_err(|e| {
        let line = (1..=pairs.len())
            .find(|&n| RelationshipSpec::new(pairs[..n].to_vec()).is_err())
            .map_or(0, |n| lines[n - 1]);
        Error::Parse {
            file: path.display().to_string(),
            line,
            message: e.to_string(),
        }
    })
}

pub fn read_tables(path: &Path) -> Result<TableSpec> {
    let rows: Vec<(u64, Table)> = read_rows(path, &["table_id", "capacity"])?;
    TableSpec::new(rows.into_iter().map(|(_, t)| t).collect()).map_err(|e| match e {
        Error::NoTables => e,
        other => Error::Parse {
            file: path.display().to_string(),
            line: 0,
            message: other.to_string(),
        },
    })
}

/// Pretty JSON with a trailing newline. Field order is fixed and maps are
/// sorted, so equal plans serialize to identical bytes.
pub fn plan_to_json(plan: &SeatingPlan) -> Result<String> {
    let mut s = serde_json::to_string_pretty(plan).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_plan(path: &Path, plan: &SeatingPlan) -> Result<()> {
    fs::write(path, plan_to_json(plan)?).map_err(|e| io_error(path, e))
}

pub fn read_plan(path: &Path) -> Result<SeatingPlan> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        file: path.display().to_string(),
        line: e.line() as u64,
        message: e.to_string(),
    })
}

/// Table summary with one column per table and rows for seated count,
/// signed volume and positive components, followed by warnings and the
/// residual history.
pub fn render_report(plan: &SeatingPlan) -> String {
    let label_width = 14;
    let width = plan
        .per_table
        .iter()
        .map(|t| t.table_id.len())
        .max()
        .unwrap_or(0)
        .max(7);
    let mut out = String::new();
    let mut row = |label: &str, cells: Vec<String>| {
        let _ = write!(out, "{label:<label_width$}");
        for c in cells {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
    };
    let tables = &plan.per_table;
    row("table", tables.iter().map(|t| t.table_id.clone()).collect());
    row("# seated", tables.iter().map(|t| t.seated.to_string()).collect());
    row("volume", tables.iter().map(|t| format!("{:.1}", t.volume)).collect());
    row("# components", tables.iter().map(|t| t.components.to_string()).collect());

    match plan.objective {
        Some(v) => {
            let _ = writeln!(out, "\nobjective: {v:.6}");
        }
        None => out.push_str("\nobjective: undefined\n"),
    }
    if let Some(o) = &plan.oracle {
        let _ = writeln!(
            out,
            "oracle objective: {:.6} (same partition: {})",
            o.objective, o.same_partition
        );
    }
    if !plan.warnings.is_empty() {
        let _ = writeln!(out, "\nwarnings:");
        for w in &plan.warnings {
            let _ = writeln!(out, "  - {}", w.message);
        }
    }
    if !plan.residual_history.is_empty() {
        let history: Vec<String> = plan.residual_history.iter().map(|r| format!("{r:.3e}")).collect();
        let _ = writeln!(out, "\nresidual history: {}", history.join(" "));
    }
    out
}
