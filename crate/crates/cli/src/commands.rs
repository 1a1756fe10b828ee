use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cantorsum::constructions::{chain_to_target, sqrt_construction, BaseTable, DirectCheck};
use cantorsum::oracle::{
    level_typing_counts, oracle_em_intervals, oracle_growth_check, Orientation,
};
use cantorsum::search::{
    exhaustive_records, figure_csv, figure_data, search_exhaustive, search_heuristic_with_table,
    Constraints, FigureConfig, HeuristicConfig, SearchOutcome, SearchRecord, CSV_HEADER,
};
use cantorsum::structure::{
    cantor_sum_dimension, classify_structure, CantorDimension, Ratio, StructureCase,
    StructureReport,
};
use cantorsum::{analyze_uniqueness, DigitSet, Error, Matrix2};
use serde::Serialize;

use crate::cli::{ConstructArgs, Digits, FigureArgs, OracleArgs, SearchArgs, SetArgs, TowerArgs};

/// Without `--exhaustive` or `--heuristic`, exhaust up to this `n`.
const AUTO_EXHAUSTIVE_MAX: u64 = 24;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                Error::ExhaustiveInfeasible { .. } => 3,
                Error::MissingBase(_) => 4,
                Error::BudgetExceeded { .. } => 5,
                Error::TowerVerification(_) | Error::NotApplicable(_) => 1,
                _ => 2,
            },
            CliError::Io(..) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn canonical(n: u64, digits: &Digits) -> Result<DigitSet> {
    let d = digits
        .0
        .iter()
        .map(|&d| u64::try_from(d).map_err(|_| Error::Parse(format!("negative digit {d} (use --general on oracle)"))))
        .collect::<std::result::Result<Vec<u64>, _>>()?;
    Ok(DigitSet::new(n, d)?)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn ratio(r: Ratio) -> String {
    if r.den == 1 {
        r.num.to_string()
    } else {
        format!("{}/{}", r.num, r.den)
    }
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: u64,
    digits: Vec<u64>,
    good: bool,
    typing: String,
    matrix: Matrix2,
    lambda: f64,
    dim: f64,
    trivial: bool,
    very_good: bool,
    structure: StructureCase,
}

pub fn analyze(args: &SetArgs, as_json: bool) -> Result<String> {
    let set = canonical(args.n, &args.digits)?;
    let (typing, report) = analyze_uniqueness(&set);
    let structure = classify_structure(&set)?;
    let out = AnalyzeReport {
        n: set.n(),
        digits: set.digits().to_vec(),
        good: report.good,
        typing: typing.render(),
        matrix: report.matrix,
        lambda: report.lambda,
        dim: report.dim,
        trivial: report.trivial,
        very_good: report.very_good,
        structure: structure.case,
    };
    if as_json {
        return Ok(json(&out));
    }
    let mut s = String::new();
    writeln!(s, "set        {set}").unwrap();
    writeln!(s, "good       {}", out.good).unwrap();
    writeln!(s, "typing     {}", out.typing).unwrap();
    writeln!(s, "matrix     {}", out.matrix).unwrap();
    writeln!(s, "lambda     {:.10}", out.lambda).unwrap();
    writeln!(s, "dim        {:.10}", out.dim).unwrap();
    writeln!(s, "trivial    {}", out.trivial).unwrap();
    writeln!(s, "very_good  {}", out.very_good).unwrap();
    writeln!(s, "structure  {:?}", out.structure).unwrap();
    Ok(s)
}

fn constraints(require_good: bool, require_very_good: bool) -> Constraints {
    if require_very_good {
        Constraints::VERY_GOOD
    } else if require_good {
        Constraints::GOOD
    } else {
        Constraints::ANY
    }
}

fn report_exceedances(outcomes: &[SearchOutcome]) {
    for o in outcomes {
        for row in &o.stats.conjecture_exceedances {
            eprintln!("!!! CONJECTURE EXCEEDED (dim > log 2 / log 3): {row}");
        }
    }
}

pub fn search(args: &SearchArgs, as_json: bool) -> Result<String> {
    if args.figure {
        return figure(
            &FigureArgs {
                n: args.n,
                budget: args.budget,
                seed: args.seed,
                exhaustive_max: args.exhaustive_max,
                csv_out: args.csv_out.clone(),
            },
            as_json,
        );
    }
    let cons = constraints(args.require_good, args.require_very_good);
    if args.exhaustive {
        // Refuse up front rather than after part of a range has run.
        for n in [args.n.lo, args.n.hi] {
            if !(3..=cantorsum::search::MAX_EXHAUSTIVE_N).contains(&n) {
                return Err(Error::ExhaustiveInfeasible {
                    n,
                    max: cantorsum::search::MAX_EXHAUSTIVE_N,
                }
                .into());
            }
        }
    }

    if args.all_records {
        let n = args.n.single().ok_or_else(|| {
            CliError::Core(Error::Parse("--all-records needs a single n".to_string()))
        })?;
        let records = exhaustive_records(n, cons)?;
        let csv = records_csv(&records);
        if let Some(path) = &args.csv_out {
            write_file(path, &csv)?;
        }
        return Ok(if as_json { json(&records) } else { csv });
    }

    let table = BaseTable::bundled();
    let mut outcomes = Vec::new();
    for n in args.n.range() {
        let exhaustive = args.exhaustive || (!args.heuristic && n <= AUTO_EXHAUSTIVE_MAX);
        let outcome = if exhaustive {
            search_exhaustive(n, cons)?
        } else {
            let cfg = HeuristicConfig::new(args.budget, args.seed, cons);
            search_heuristic_with_table(n, &cfg, &table)?
        };
        if outcome.best.is_none() {
            eprintln!("no admissible set for n = {n}");
        }
        outcomes.push(outcome);
    }
    report_exceedances(&outcomes);
    let records: Vec<SearchRecord> = outcomes.iter().filter_map(|o| o.best.clone()).collect();
    let csv = records_csv(&records);
    if let Some(path) = &args.csv_out {
        write_file(path, &csv)?;
    }
    Ok(if as_json { json(&outcomes) } else { csv })
}

fn records_csv(records: &[SearchRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

pub fn figure(args: &FigureArgs, as_json: bool) -> Result<String> {
    let cfg = FigureConfig {
        exhaustive_max_n: args.exhaustive_max.min(cantorsum::search::MAX_EXHAUSTIVE_N),
        budget: args.budget,
        seed: args.seed,
    };
    let rows = figure_data(args.n.range(), &cfg)?;
    for r in &rows {
        if r.best_dim > r.reference + cantorsum::DIM_TOL {
            eprintln!("!!! CONJECTURE EXCEEDED (dim > log 2 / log 3): {}", r.record.csv_row());
        }
    }
    let csv = figure_csv(&rows);
    if let Some(path) = &args.csv_out {
        write_file(path, &csv)?;
    }
    Ok(if as_json { json(&rows) } else { csv })
}

#[derive(Serialize)]
struct TowerOutput<'a> {
    base_matrix: Matrix2,
    steps: &'a [cantorsum::constructions::ChainStep],
    verification: Option<Vec<DirectCheck>>,
}

pub fn tower(args: &TowerArgs, as_json: bool) -> Result<String> {
    let mut table = match &args.table {
        Some(path) => {
            let file = fs::File::open(path).map_err(|e| CliError::Io(path.clone(), e))?;
            BaseTable::from_reader(file)?
        }
        None => BaseTable::bundled(),
    };
    if let Some(n0) = args.base {
        let row = table
            .iter()
            .find(|&(n, _, _)| n == n0)
            .map(|(n, set, dim)| format!("{n},{},{dim}\n", set.cell()))
            .ok_or(Error::MissingBase(n0))?;
        table = BaseTable::from_reader(format!("n,digits,dim\n{row}").as_bytes())?;
    }
    let chain = chain_to_target(args.target, &table)?;
    let verification = args.verify_direct.then(|| chain.verify_direct(args.all_steps));
    if let Some(path) = &args.csv_out {
        write_file(path, &chain.to_csv())?;
    }
    let failed = verification
        .as_ref()
        .map(|v| v.iter().any(|c| !c.ok))
        .unwrap_or(false);

    let text = if as_json {
        json(&TowerOutput {
            base_matrix: chain.base_matrix,
            steps: &chain.steps,
            verification: verification.clone(),
        })
    } else {
        let mut s = String::new();
        writeln!(s, "{:>4} {:>2} {:>10} {:>6} {:>10} {:>12}", "step", "k", "n", "|A|", "lambda", "dim").unwrap();
        for (i, step) in chain.steps.iter().enumerate() {
            let k = step.k.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
            writeln!(
                s,
                "{i:>4} {k:>2} {:>10} {:>6} {:>10} {:>12.10}",
                step.n, step.size, step.lambda, step.dim
            )
            .unwrap();
        }
        writeln!(s, "base {}  matrix {}", chain.base().set, chain.base_matrix).unwrap();
        for c in verification.iter().flatten() {
            writeln!(
                s,
                "direct n={}: predicted {} direct {} lambda {} vs {} very_good={} {}",
                c.n,
                c.predicted,
                c.direct,
                c.lambda_recurrence,
                c.lambda_direct,
                c.very_good,
                if c.ok { "PASS" } else { "FAIL" }
            )
            .unwrap();
        }
        s
    };
    if failed {
        print!("{text}");
        return Err(Error::TowerVerification("direct typing disagrees with the recurrence".into()).into());
    }
    Ok(text)
}

#[derive(Serialize)]
struct ConstructOutput {
    n: u64,
    digits: Vec<u64>,
    size: usize,
    good: bool,
    trivial: bool,
    matrix: Matrix2,
}

pub fn construct(args: &ConstructArgs, as_json: bool) -> Result<String> {
    let set = sqrt_construction(args.n)?;
    let (_, report) = analyze_uniqueness(&set);
    let out = ConstructOutput {
        n: set.n(),
        digits: set.digits().to_vec(),
        size: set.len(),
        good: report.good,
        trivial: report.trivial,
        matrix: report.matrix,
    };
    if as_json {
        return Ok(json(&out));
    }
    let mut s = String::new();
    writeln!(s, "set      {set}").unwrap();
    writeln!(s, "size     {}", out.size).unwrap();
    writeln!(s, "good     {}", out.good).unwrap();
    writeln!(s, "trivial  {}", out.trivial).unwrap();
    writeln!(s, "matrix   {}", out.matrix).unwrap();
    Ok(s)
}

#[derive(Serialize)]
struct StructureOutput {
    n: u64,
    digits: Vec<u64>,
    #[serde(flatten)]
    report: StructureReport,
    cantor_dimension: Option<CantorDimension>,
}

pub fn structure(args: &SetArgs, as_json: bool) -> Result<String> {
    let set = canonical(args.n, &args.digits)?;
    let report = classify_structure(&set)?;
    let cantor_dimension = match report.case {
        StructureCase::CantorSet => Some(cantor_sum_dimension(&set)?),
        _ => None,
    };
    if as_json {
        return Ok(json(&StructureOutput {
            n: set.n(),
            digits: set.digits().to_vec(),
            report,
            cantor_dimension,
        }));
    }
    let mut s = String::new();
    writeln!(s, "set       {set}").unwrap();
    writeln!(s, "case      {:?}", report.case).unwrap();
    if let Some(g) = report.gap_witness {
        writeln!(s, "gap       ({}, {})", ratio(g.lo), ratio(g.hi)).unwrap();
    }
    if let Some(w) = report.interval_witness {
        let depth = report.witness_depth.map(|d| format!(" (depth {d})")).unwrap_or_default();
        writeln!(s, "interval  [{}, {}]{depth}", ratio(w.lo), ratio(w.hi)).unwrap();
    }
    if let Some(b) = report.points_dim_lower_bound {
        writeln!(s, "points    dim >= {b:.10}").unwrap();
    }
    if let Some(d) = cantor_dimension {
        writeln!(s, "dim       {:.10} (bracket {:.10})", d.value, d.bracket_width).unwrap();
    }
    Ok(s)
}

#[derive(Serialize)]
struct EmOutput {
    n: u64,
    depth: u32,
    denominator: u64,
    components: Vec<(u64, u64)>,
}

#[derive(Serialize)]
struct TypingOutput {
    n: u64,
    depth: u32,
    l: u64,
    r: u64,
}

pub fn oracle(args: &OracleArgs, as_json: bool) -> Result<String> {
    let set = if args.general {
        DigitSet::general(args.n, &args.digits.0)?
    } else if args.em {
        // E_m makes sense for any integer digits, so fall back quietly.
        canonical(args.n, &args.digits).or_else(|_| DigitSet::general(args.n, &args.digits.0))?
    } else {
        canonical(args.n, &args.digits)?
    };
    if args.em {
        let depth = args.depth.unwrap_or(8);
        let level = oracle_em_intervals(&set, depth, args.budget)?;
        if as_json {
            return Ok(json(&EmOutput {
                n: set.n(),
                depth,
                denominator: level.denominator(),
                components: level.components().to_vec(),
            }));
        }
        return Ok(level.to_csv());
    }
    if !set.is_canonical() {
        return Err(Error::NotCanonical.into());
    }
    let depth = args.depth.unwrap_or(6);
    if args.typing {
        let level = oracle_em_intervals(&set, depth, args.budget)?;
        let (l, r) = level_typing_counts(&level);
        if as_json {
            return Ok(json(&TypingOutput { n: set.n(), depth, l, r }));
        }
        return Ok(format!("depth {depth}: L = {l}, R = {r}\n"));
    }

    let report = oracle_growth_check(&set, depth, args.budget)?;
    if as_json {
        return Ok(json(&report));
    }
    let mut s = String::from("m,L,R,total,ratio,rate\n");
    let mut prev = 0;
    for (i, (&[l, r], rate)) in report.observed.iter().zip(&report.rates).enumerate() {
        let total = l + r;
        let growth = if i == 0 { String::new() } else { format!("{:.10}", total as f64 / prev as f64) };
        writeln!(s, "{},{l},{r},{total},{growth},{rate:.10}", i + 1).unwrap();
        prev = total;
    }
    let orientation = match (report.matches(Orientation::Matrix), report.matches(Orientation::Transpose)) {
        (true, true) => "ambiguous (M and M^T both match)",
        (false, true) => "M^T",
        (true, false) => "M",
        (false, false) => "neither",
    };
    writeln!(s, "# matrix {} dim {:.10} evolution {orientation}", report.matrix, report.dim).unwrap();
    Ok(s)
}
