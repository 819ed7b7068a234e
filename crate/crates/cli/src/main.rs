//! `agfuzz`: check AG-group tables and fuzzy AG-subgroups from the command line.
//!
//! Exit codes: 0 every check passed, 1 some check failed, 2 unreadable or
//! malformed input, 3 the request exceeds the order cap.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use agfuzz::fuzzy::{grades_to_json, grades_to_text, parse_grades_auto, pullback};
use agfuzz::group::{check_derived_identities, check_homomorphism};
use agfuzz::quotient::{
    build_crisp_quotient, build_quotient_by_mu, check_quotient_ag_group, coset_equality_theorem, fuzzy_coset,
    fuzzy_lagrange, quotient_fuzzy_subgroup, QuotientDump,
};
use agfuzz::search::{enumerate, EnumerationTask, Mode, DEFAULT_ORDER_CAP};
use agfuzz::sweep::{population_sweep, Check, Population};
use agfuzz::{
    AgGroup, AlgebraError, CayleyTable, Execution, Finding, Format, FuzzySubset, Grade, Report, Subgroup, TheoremId,
    Witness,
};

#[derive(Parser)]
#[command(name = "agfuzz", version, about = "Finite AG-groups and their fuzzy AG-subgroups")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,

    /// Largest order the enumerator and sweep will accept.
    #[arg(long, global = true, env = "AGFUZZ_ORDER_CAP", default_value_t = DEFAULT_ORDER_CAP)]
    order_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the AG-group axioms and derived identities on a Cayley table.
    CheckGroup { table: PathBuf },
    /// Check that a grade file defines a fuzzy AG-subgroup.
    CheckFuzzy {
        #[command(flatten)]
        input: FuzzyInput,
        /// Also report whether the fuzzy AG-subgroup is normal.
        #[arg(long)]
        normal: bool,
    },
    /// List the fuzzy cosets and compare them with the crisp cosets of the level set.
    Cosets {
        #[command(flatten)]
        input: FuzzyInput,
    },
    /// Build the quotient G/mu.
    Quotient {
        #[command(flatten)]
        input: FuzzyInput,
        /// Also write the quotient dump to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the quotient G/H by a crisp AG-subgroup.
    CrispQuotient {
        table: PathBuf,
        /// Subgroup members, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        subgroup: Vec<usize>,
        /// Fuzzy AG-subgroup of G to push down onto G/H.
        #[arg(long)]
        grades: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute [G:mu] and check that it divides |G|.
    Lagrange {
        #[command(flatten)]
        input: FuzzyInput,
    },
    /// Pull a fuzzy AG-subgroup back along a homomorphism.
    Pullback {
        /// Domain table.
        source: PathBuf,
        /// Codomain table.
        target: PathBuf,
        /// Images of 0, 1, ..., separated by whitespace.
        map: PathBuf,
        /// Grades over the codomain.
        grades: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run theorem checks over every AG-group in a range of orders.
    Sweep {
        #[arg(long, default_value_t = 1)]
        min_order: usize,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        /// Check to run (repeatable); all checks when omitted.
        #[arg(long = "check", value_parser = parse_check)]
        checks: Vec<Check>,
        /// Restrict the population to constant fuzzy subsets.
        #[arg(long)]
        constant_only: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Enumerate AG-groups (or AG-groupoids with left identity 0) of one order.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "ag-groups")]
        mode: EnumMode,
        /// Emit every table instead of one per isomorphism class.
        #[arg(long)]
        all: bool,
        /// Write the tables to this file (text or, with --format json, JSON).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct FuzzyInput {
    table: PathBuf,
    grades: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumMode {
    AgGroups,
    AgGroupoids,
}

fn parse_check(s: &str) -> Result<Check, String> {
    Check::parse(s).ok_or_else(|| {
        let names: Vec<String> = Check::ALL.iter().map(|c| format!("{c:?}")).collect();
        format!("unknown check {s:?}; expected one of {}", names.join(", "))
    })
}

enum Failure {
    Parse(String),
    Infeasible(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Infeasible(m) | Failure::Check(m) => m,
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        use AlgebraError::*;
        match e {
            NonSquare { .. }
            | EmptyTable
            | EntryOutOfRange { .. }
            | Parse { .. }
            | Grade(_)
            | GradeCount { .. }
            | MapLength { .. }
            | ElementOutOfRange { .. } => Failure::Parse(e.to_string()),
            OrderCapExceeded { .. } => Failure::Infeasible(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> CliResult<CayleyTable> {
    CayleyTable::parse_auto(&read(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_group(path: &Path) -> CliResult<AgGroup> {
    AgGroup::promote(load_table(path)?).map_err(|e| Failure::Check(format!("{}: not an AG-group: {e}", path.display())))
}

fn load_grades(path: &Path, n: usize) -> CliResult<Vec<Grade>> {
    parse_grades_auto(&read(path)?, n).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_fuzzy<'g>(g: &'g AgGroup, path: &Path) -> CliResult<FuzzySubset<'g>> {
    Ok(FuzzySubset::new(g, load_grades(path, g.order())?)?)
}

fn grade_list(grades: &[Grade]) -> String {
    grades.iter().map(Grade::to_string).collect::<Vec<_>>().join(" ")
}

fn witness_pair(w: &Witness) -> String {
    match w.elements.as_slice() {
        [x, y, ..] => format!("x={x} y={y}"),
        els => format!("{els:?}"),
    }
}

fn dump_fact(dump: &QuotientDump, format: Format) -> Value {
    match format {
        Format::Text => Value::String(dump.to_text()),
        Format::Json => serde_json::to_value(dump).expect("dump serializes"),
    }
}

fn dump_file(dump: &QuotientDump, format: Format) -> String {
    match format {
        Format::Text => dump.to_text(),
        Format::Json => dump.to_json() + "\n",
    }
}

fn check_group(path: &Path) -> CliResult<Report> {
    let mut report = Report::new("check-group");
    let table = load_table(path)?;
    let instance = path.display().to_string();
    match AgGroup::promote(table) {
        Ok(g) => {
            let self_inverse = g.elements().filter(|&x| g.inv(x) == x).count();
            let si =
                if self_inverse == g.order() { "all".to_string() } else { format!("{self_inverse} of {}", g.order()) };
            report.fact("AG-group", format!("yes, e={}, self-inverse: {si}", g.identity()));
            report.fact("commutative", if g.is_commutative() { "yes" } else { "no" });
            report.push(&instance, Finding::pass(TheoremId::LeftInvertive));
            report.extend(&instance, check_derived_identities(&g));
        }
        Err(e) => {
            let elements = match &e {
                AlgebraError::NotLeftInvertive(t) => t.to_vec(),
                AlgebraError::MultipleLeftIdentities(ids) => ids.clone(),
                AlgebraError::MissingInverse(x) => vec![*x],
                _ => vec![],
            };
            report.fact("AG-group", "no");
            report.push(&instance, Finding::fail(TheoremId::LeftInvertive, Witness::new(elements, e.to_string())));
        }
    }
    Ok(report)
}

fn check_fuzzy(input: &FuzzyInput, normal: bool) -> CliResult<Report> {
    let mut report = Report::new("check-fuzzy");
    let g = load_group(&input.table)?;
    let mu = load_fuzzy(&g, &input.grades)?;
    let instance = input.grades.display().to_string();
    let verdict = mu.is_fuzzy_ag_subgroup();
    report.fact("fuzzy AG-subgroup", if verdict.is_ok() { "yes" } else { "NO" });
    report.push(&instance, Finding::from_outcome(TheoremId::FuzzySubgroup, verdict.clone()));
    if verdict.is_ok() {
        report.fact("level set", format!("{:?}", mu.level_set().members));
        report.extend(&instance, mu.check_elementary_lemmas()?);
        if normal {
            match mu.is_normal() {
                Ok(()) => report.fact("normal", "yes"),
                Err(w) => report.fact("normal", format!("NO, witness {} ({})", witness_pair(&w), w.detail)),
            }
        }
    }
    Ok(report)
}

fn cosets(input: &FuzzyInput) -> CliResult<Report> {
    let mut report = Report::new("cosets");
    let g = load_group(&input.table)?;
    let mu = load_fuzzy(&g, &input.grades)?;
    for x in g.elements() {
        report.fact(format!("mu_{x}"), grade_list(&fuzzy_coset(&mu, x).grades));
    }
    let instance = input.grades.display().to_string();
    report.extend(&instance, coset_equality_theorem(&mu)?);
    Ok(report)
}

fn quotient(input: &FuzzyInput, out: Option<&Path>, format: Format) -> CliResult<Report> {
    let mut report = Report::new("quotient");
    let g = load_group(&input.table)?;
    let mu = load_fuzzy(&g, &input.grades)?;
    let instance = input.grades.display().to_string();
    let normal = mu.is_normal().is_ok();
    report.fact("normal", if normal { "yes" } else { "no" });
    let q = match build_quotient_by_mu(&mu) {
        Ok(q) => q,
        Err(AlgebraError::NotWellDefined(w)) => {
            report.fact("well-defined", "no");
            report.push(&instance, Finding::fail(TheoremId::QuotientAgGroup, w));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    report.fact("well-defined", "yes");
    report.fact("index", q.len());
    if normal {
        report.push(&instance, check_quotient_ag_group(&mu)?);
    }
    let dump = q.dump(None);
    if let Some(path) = out {
        write(path, &dump_file(&dump, format))?;
    }
    report.fact("quotient", dump_fact(&dump, format));
    Ok(report)
}

fn crisp_quotient(
    table: &Path,
    members: &[usize],
    grades: Option<&Path>,
    out: Option<&Path>,
    format: Format,
) -> CliResult<Report> {
    let mut report = Report::new("crisp-quotient");
    let g = load_group(table)?;
    let h = Subgroup::new(&g, members.iter().copied())?;
    let q = build_crisp_quotient(&h)?;
    report.fact("index", q.len());
    let mut dump = q.dump(None);
    if let Some(path) = grades {
        let nu = load_fuzzy(&g, path)?;
        let instance = path.display().to_string();
        match quotient_fuzzy_subgroup(&nu, &h) {
            Ok(xi) => {
                dump = q.dump(Some(&xi.grades));
                report.push(&instance, Finding::pass(TheoremId::QuotientFuzzySubgroup));
            }
            Err(AlgebraError::TheoremViolation { theorem, witness }) => {
                report.push(&instance, Finding::fail(theorem, witness))
            }
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(path) = out {
        write(path, &dump_file(&dump, format))?;
    }
    report.fact("quotient", dump_fact(&dump, format));
    Ok(report)
}

fn lagrange(input: &FuzzyInput) -> CliResult<Report> {
    let mut report = Report::new("lagrange");
    let g = load_group(&input.table)?;
    let mu = load_fuzzy(&g, &input.grades)?;
    let instance = input.grades.display().to_string();
    let r = match fuzzy_lagrange(&mu) {
        Ok(r) => r,
        Err(AlgebraError::NotWellDefined(w)) => {
            report.fact("well-defined", "no");
            report.push(&instance, Finding::fail(TheoremId::Lagrange, w));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };
    let verb = if r.divides() { "divides" } else { "does NOT divide" };
    report.fact("result", format!("index {} {verb} order {}", r.index, r.order));
    report.fact("crisp cosets", format!("{:?}", r.crisp_cosets));
    report.push(&instance, r.finding);
    Ok(report)
}

fn pullback_cmd(
    source: &Path,
    target: &Path,
    map: &Path,
    grades: &Path,
    out: Option<&Path>,
    format: Format,
) -> CliResult<Report> {
    let mut report = Report::new("pullback");
    let src = load_group(source)?;
    let dst = load_group(target)?;
    let map_text = read(map)?;
    let images = map_text
        .split(|c: char| c.is_whitespace() || c == ',' || c == '[' || c == ']')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| Failure::Parse(format!("{}: bad image {t:?}", map.display()))))
        .collect::<CliResult<Vec<usize>>>()?;
    let f = check_homomorphism(images, &src, &dst)?;
    let mu = load_fuzzy(&dst, grades)?;
    let instance = grades.display().to_string();
    match pullback(&f, &mu) {
        Ok(nu) => {
            report.fact("pullback", grade_list(nu.grades()));
            report.push(&instance, Finding::pass(TheoremId::Pullback));
            if let Some(path) = out {
                let body = match format {
                    Format::Text => grades_to_text(nu.grades()),
                    Format::Json => grades_to_json(nu.grades()) + "\n",
                };
                write(path, &body)?;
            }
        }
        Err(AlgebraError::TheoremViolation { theorem, witness }) => {
            report.push(&instance, Finding::fail(theorem, witness))
        }
        Err(e) => return Err(e.into()),
    }
    Ok(report)
}

fn exec(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    match run(cli.command, format, cli.order_cap) {
        Ok(report) => {
            print!("{}", report.emit(format));
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            match format {
                Format::Text => eprintln!("error: {}", f.message()),
                Format::Json => println!("{}", json!({ "error": f.message(), "exit_code": f.code() })),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command, format: Format, cap: usize) -> CliResult<Report> {
    match command {
        Command::CheckGroup { table } => check_group(&table),
        Command::CheckFuzzy { input, normal } => check_fuzzy(&input, normal),
        Command::Cosets { input } => cosets(&input),
        Command::Quotient { input, out } => quotient(&input, out.as_deref(), format),
        Command::CrispQuotient { table, subgroup, grades, out } => {
            crisp_quotient(&table, &subgroup, grades.as_deref(), out.as_deref(), format)
        }
        Command::Lagrange { input } => lagrange(&input),
        Command::Pullback { source, target, map, grades, out } => {
            pullback_cmd(&source, &target, &map, &grades, out.as_deref(), format)
        }
        Command::Sweep { min_order, max_order, checks, constant_only, sequential } => {
            if min_order == 0 || min_order > max_order {
                return Err(Failure::Parse(format!("bad order range {min_order}..={max_order}")));
            }
            let exec = exec(sequential);
            let mut pop = Population::build_with_cap(min_order..=max_order, cap, exec)?;
            if constant_only {
                pop = pop.constant_only();
            }
            let suite = if checks.is_empty() { Check::ALL.to_vec() } else { checks };
            let mut outcome = population_sweep(&pop, &suite, exec);
            outcome.report.fact("orders", format!("{min_order}..={max_order}"));
            Ok(outcome.report)
        }
        Command::Enumerate { order, mode, all, out, sequential } => {
            let mode = match mode {
                EnumMode::AgGroups => Mode::AgGroups,
                EnumMode::AgGroupoids => Mode::AgGroupoidsWithLeftIdentity,
            };
            let task = EnumerationTask::new(order, mode, !all).with_cap(cap);
            let tables = enumerate(&task, exec(sequential))?;
            let mut report = Report::new("enumerate");
            report.fact("order", order);
            report.fact("count", tables.len());
            let body = match format {
                Format::Text => CayleyTable::many_to_text(&tables),
                Format::Json => {
                    Value::Array(tables.iter().map(CayleyTable::to_json_value).collect()).to_string() + "\n"
                }
            };
            match out {
                Some(path) => write(&path, &body)?,
                None => match format {
                    Format::Text => report.fact("tables", body),
                    Format::Json => {
                        report.fact("tables", Value::Array(tables.iter().map(CayleyTable::to_json_value).collect()))
                    }
                },
            }
            Ok(report)
        }
    }
}
