//! Run configuration, command dispatch and report emission.
//!
//! JSON-lines reports open with a header echoing the tool, version and
//! configuration, carry one record per line, and close with a summary.
//! CSV reports put the header in `#` comment lines. Records are sorted
//! before output, so equal configurations give byte-identical reports.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{
    self, balanced_stirling_bound, block_miss_stats, ind_count_upper, ind_lambda_for_size, ind_lower_dk,
    match_count_upper, match_lower_dk_reference, match_pf_bound, match_single_term_bound, optimal_lambda, BoundParams,
    Direction, IndLowerVariant, IndUpperVariant, LogBound,
};
use crate::count::{count_polynomial, CountKind, Rational};
use crate::error::{Error, Result};
use crate::generator::{for_each_graph, GenSpec};
use crate::graph::{parse_graphs, write_graphs, Graph};
use crate::hp::{sig12, Real};
use crate::kdd::{dk_polynomial, DkParams};
use crate::verify::{
    default_c_grid, default_lambda_grid, hom_targets, sort_verdicts, verify_bounds_suite, verify_dk_suite,
    verify_hom_suite, verify_kahn, verify_real_rooted, verify_bipartite_total, verify_umc, Verdict,
};

pub const TOOL: &str = "regcount";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Where a verification command takes its graphs from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphSource {
    Generated { n: usize, d: usize },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    Count { kind: CountKind, graph: PathBuf },
    Bounds { n: usize, d: usize, size: Option<usize> },
    Gen { n: usize, d: usize, bipartite: bool, labelled: bool, out_dir: Option<PathBuf> },
    VerifyUmc { n: usize, d: usize },
    VerifyKahn { n: usize, d: usize },
    VerifySuite { source: GraphSource },
    VerifyRoots { source: GraphSource },
    VerifyHom { source: GraphSource },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub lambda_grid: Vec<Rational>,
    pub c_grid: Vec<Rational>,
    pub tol: f64,
    pub format: Format,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub orders: usize,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            lambda_grid: default_lambda_grid(),
            c_grid: default_c_grid(),
            tol: crate::roots::DEFAULT_ROOT_TOL,
            format: Format::Json,
            workers: None,
            out: None,
            seed: 0,
            orders: 5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.workers == Some(0) {
            return Err(Error::Domain("worker count must be positive".into()));
        }
        if let Some(l) = self.lambda_grid.iter().find(|l| *l < &Rational::zero()) {
            return Err(Error::Domain(format!("lambda must be nonnegative, got {l}")));
        }
        if let Some(c) = self.c_grid.iter().find(|c| **c <= Rational::from_integer(1.into())) {
            return Err(Error::Domain(format!("c must exceed 1, got {c}")));
        }
        Ok(())
    }

    fn echo(&self) -> serde_json::Value {
        let strs = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "command": self.command,
            "lambda_grid": strs(&self.lambda_grid),
            "c_grid": strs(&self.c_grid),
            "tol": self.tol,
            "format": self.format,
            "seed": self.seed,
            "orders": self.orders,
        })
    }
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches('-'), frac);
        if let Ok(num) = digits.parse::<BigInt>() {
            let den = num_traits::pow(BigInt::from(10), frac.len());
            let r = Rational::new(num, den);
            return Ok(if neg { -r } else { r });
        }
    }
    Err(Error::Domain(format!("cannot parse {s:?} as a rational")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Outcome {
    pub records: usize,
    pub failed: usize,
}

impl Outcome {
    /// 0 when nothing failed, 2 when some verdict failed.
    pub fn exit_code(&self) -> i32 {
        if self.failed == 0 {
            0
        } else {
            2
        }
    }
}

/// Runs the configured command, writing to `config.out` or stdout.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let body = || -> Result<Outcome> {
        match &config.out {
            Some(path) => {
                let mut file = io::BufWriter::new(fs::File::create(path)?);
                let outcome = run_to(config, &mut file)?;
                file.flush()?;
                Ok(outcome)
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                run_to(config, &mut lock)
            }
        }
    };
    match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Domain(e.to_string()))?
            .install(body),
        None => body(),
    }
}

pub fn run_to(config: &RunConfig, w: &mut dyn Write) -> Result<Outcome> {
    config.validate()?;
    match &config.command {
        Command::Count { kind, graph } => count(config, *kind, graph, w),
        Command::Bounds { n, d, size } => {
            let records = bound_records(*n, *d, *size, config)?;
            emit(config, w, &records, |r| r.csv_row(), BoundRecord::CSV_HEADER)?;
            Ok(Outcome { records: records.len(), failed: 0 })
        }
        Command::Gen { n, d, bipartite, labelled, out_dir } => {
            let spec = GenSpec::new(*n, *d).bipartite_only(*bipartite).isomorph_reject(!*labelled);
            gen(&spec, out_dir.as_deref(), w)
        }
        Command::VerifyUmc { n, d } => verdicts(config, w, verify_umc(*n, *d)?),
        Command::VerifyKahn { n, d } => verdicts(config, w, verify_kahn(*n, *d)?),
        Command::VerifySuite { source } => {
            let graphs = load(source)?;
            let mut all = Vec::new();
            for g in &graphs {
                all.extend(verify_bounds_suite(g, &config.lambda_grid)?);
            }
            if let GraphSource::Generated { n, d } = source {
                if DkParams::new(*n, *d).is_ok() {
                    all.extend(verify_bipartite_total(*n, *d)?);
                    all.extend(verify_dk_suite(*n, *d, &config.c_grid)?);
                }
            }
            verdicts(config, w, all)
        }
        Command::VerifyRoots { source } => {
            let all = load(source)?
                .iter()
                .filter(|g| g.edge_count() > 0)
                .map(|g| verify_real_rooted(g, config.tol))
                .collect::<Result<Vec<_>>>()?;
            verdicts(config, w, all)
        }
        Command::VerifyHom { source } => {
            let targets = hom_targets();
            let mut all = Vec::new();
            for g in &load(source)? {
                all.extend(verify_hom_suite(g, &targets, config.orders, config.seed)?);
            }
            verdicts(config, w, all)
        }
    }
}

fn load(source: &GraphSource) -> Result<Vec<Graph>> {
    match source {
        GraphSource::Generated { n, d } => {
            let mut out = Vec::new();
            for_each_graph(&GenSpec::new(*n, *d), |g| out.push(g))?;
            Ok(out)
        }
        GraphSource::File(path) => read_graphs(path),
    }
}

pub fn read_graphs(path: &Path) -> Result<Vec<Graph>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_graphs(&text)
}

fn count(config: &RunConfig, kind: CountKind, path: &Path, w: &mut dyn Write) -> Result<Outcome> {
    let graphs = read_graphs(path)?;
    for g in &graphs {
        let p = count_polynomial(g, kind)?;
        match config.format {
            Format::Json => writeln!(w, "{}", p.to_json())?,
            Format::Csv => writeln!(w, "{}", p.decimal_strings().join(","))?,
        }
    }
    Ok(Outcome { records: graphs.len(), failed: 0 })
}

fn gen(spec: &GenSpec, out_dir: Option<&Path>, w: &mut dyn Write) -> Result<Outcome> {
    let mut graphs = Vec::new();
    for_each_graph(spec, |g| graphs.push(g))?;
    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let width = graphs.len().max(1).to_string().len();
            for (i, g) in graphs.iter().enumerate() {
                fs::write(dir.join(format!("graph_{i:0width$}.txt")), g.to_text())?;
            }
        }
        None => w.write_all(write_graphs(&graphs).as_bytes())?,
    }
    Ok(Outcome { records: graphs.len(), failed: 0 })
}

fn verdicts(config: &RunConfig, w: &mut dyn Write, mut v: Vec<Verdict>) -> Result<Outcome> {
    sort_verdicts(&mut v);
    let failed = v.iter().filter(|x| !x.pass).count();
    emit(config, w, &v, verdict_row, &VERDICT_CSV_HEADER)?;
    Ok(Outcome { records: v.len(), failed })
}

const VERDICT_CSV_HEADER: [&str; 7] = ["check_id", "graph_label", "params", "lhs", "rhs", "pass", "margin"];

fn verdict_row(v: &Verdict) -> Vec<String> {
    vec![
        v.check_id.clone(),
        v.graph_label.clone(),
        v.params.to_string(),
        v.lhs.clone(),
        v.rhs.clone(),
        v.pass.to_string(),
        v.margin.map(|m| m.to_string()).unwrap_or_default(),
    ]
}

fn emit<T: Serialize>(
    config: &RunConfig,
    w: &mut dyn Write,
    records: &[T],
    row: impl Fn(&T) -> Vec<String>,
    header: &[&str],
) -> Result<()> {
    let head = json!({ "tool": TOOL, "version": VERSION, "config": config.echo() });
    let failed = records
        .iter()
        .filter(|r| serde_json::to_value(r).ok().and_then(|v| v.get("pass").and_then(|p| p.as_bool())) == Some(false))
        .count();
    let summary = json!({ "summary": { "records": records.len(), "failed": failed } });
    let json_err = |e: serde_json::Error| Error::Io(e.to_string());
    match config.format {
        Format::Json => {
            writeln!(w, "{}", serde_json::to_string(&head).map_err(json_err)?)?;
            for r in records {
                writeln!(w, "{}", serde_json::to_string(r).map_err(json_err)?)?;
            }
            writeln!(w, "{}", serde_json::to_string(&summary).map_err(json_err)?)?;
        }
        Format::Csv => {
            writeln!(w, "# {}", serde_json::to_string(&head).map_err(json_err)?)?;
            writeln!(w, "# {}", serde_json::to_string(&summary).map_err(json_err)?)?;
            let mut out = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Io(e.to_string());
            out.write_record(header).map_err(csv_err)?;
            for r in records {
                out.write_record(row(r)).map_err(csv_err)?;
            }
            let bytes = out.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            w.write_all(&bytes)?;
        }
    }
    Ok(())
}

/// One evaluated bound, optionally beside the exact `DK` value it refers to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRecord {
    pub bound: String,
    pub params: BoundParams,
    pub direction: Option<Direction>,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_log2: Option<f64>,
}

impl BoundRecord {
    const CSV_HEADER: &'static [&'static str] = &["bound", "params", "direction", "value", "reference", "reference_log2"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.bound.clone(),
            self.params.to_string(),
            match self.direction {
                Some(Direction::Upper) => "upper".into(),
                Some(Direction::Lower) => "lower".into(),
                None => String::new(),
            },
            self.value.clone(),
            self.reference.clone().unwrap_or_default(),
            self.reference_log2.map(|x| x.to_string()).unwrap_or_default(),
        ]
    }

    fn log(bound: &str, params: &BoundParams, b: &LogBound) -> BoundRecord {
        BoundRecord {
            bound: bound.into(),
            params: params.clone(),
            direction: Some(b.direction),
            value: sig12(b.value.to_f64()).to_string(),
            reference: None,
            reference_log2: None,
        }
    }

    fn value(bound: &str, params: &BoundParams, value: String) -> BoundRecord {
        BoundRecord { bound: bound.into(), params: params.clone(), direction: None, value, reference: None, reference_log2: None }
    }

    fn against(mut self, name: &str, exact: &num_bigint::BigUint) -> BoundRecord {
        self.reference = Some(format!("{name}={exact}"));
        self.reference_log2 = (!exact.is_zero()).then(|| sig12(Real::log2_int(exact).to_f64()));
        self
    }
}

/// Every bound formula at `(n, d)` for one size or all sizes.
pub fn bound_records(n: usize, d: usize, size: Option<usize>, config: &RunConfig) -> Result<Vec<BoundRecord>> {
    if d == 0 {
        return Err(Error::OutOfRange { what: "d", value: 0, min: 1, max: usize::MAX });
    }
    let sizes: Vec<usize> = match size {
        Some(s) => vec![s],
        None => (0..=n / 2).collect(),
    };
    let dk = DkParams::new(n, d).ok();
    let mdk = dk.map(|p| dk_polynomial(&p, CountKind::Matching));
    let idk = dk.map(|p| dk_polynomial(&p, CountKind::IndependentSet));
    let mut out = Vec::new();
    for &s in &sizes {
        let p = BoundParams::new(n, d, s)?;
        let with_m = |r: BoundRecord| match &mdk {
            Some(m) => r.against("m(DK)", &m.coefficient(s)),
            None => r,
        };
        let with_i = |r: BoundRecord| match &idk {
            Some(i) => r.against("i(DK)", &i.coefficient(s)),
            None => r,
        };
        out.push(with_m(BoundRecord::log("match-upper", &p, &match_count_upper(&p)?)));
        if let Ok(opt) = optimal_lambda(&p) {
            out.push(BoundRecord::value("optimal-lambda", &p, opt.to_string()));
            let pl = p.clone().with_lambda(opt);
            out.push(with_m(BoundRecord::log("single-term", &pl, &match_single_term_bound(&pl)?)));
        }
        for l in &config.lambda_grid {
            let pl = p.clone().with_lambda(l.clone());
            if s == 0 {
                out.push(BoundRecord::log("match-pf", &pl, &match_pf_bound(&pl)?));
                out.push(BoundRecord::log("ind-pf-general", &pl, &bounds::ind_pf_bound(&pl, false)?));
                out.push(BoundRecord::log("ind-pf-bipartite", &pl, &bounds::ind_pf_bound(&pl, true)?));
            }
        }
        if dk.is_some() && s > 0 && 2 * s < n {
            let gap = match_lower_dk_reference(&p)?;
            let mut r = with_m(BoundRecord::log("match-lower-dk-explicit", &p, &gap.explicit));
            r.bound = "match-lower-dk-explicit".into();
            out.push(r);
            out.push(BoundRecord::value("match-lower-dk-gap", &p, sig12(gap.gap().to_f64()).to_string()));
            if d > 1 {
                out.push(BoundRecord::value("match-lower-dk-normalized-gap", &p, sig12(gap.normalized_gap(d)).to_string()));
            }
            let pc = p.clone().with_c(Rational::from_integer(1.into()));
            out.push(with_m(BoundRecord::log("dk-balanced-stirling", &pc, &balanced_stirling_bound(&pc)?)));
        }
        out.push(with_i(BoundRecord::log("ind-upper-general", &p, &ind_count_upper(&p, IndUpperVariant::General)?)));
        out.push(with_i(BoundRecord::log("ind-upper-bipartite", &p, &ind_count_upper(&p, IndUpperVariant::Bipartite)?)));
        if n.is_multiple_of(2) {
            out.push(with_i(BoundRecord::log("ind-upper-pm", &p, &ind_count_upper(&p, IndUpperVariant::PerfectMatching)?)));
        }
        if let Ok(l) = ind_lambda_for_size(&p) {
            out.push(BoundRecord::value("ind-lambda", &p, l.to_string()));
        }
        if let Some(dkp) = dk {
            for c in &config.c_grid {
                let pc = p.clone().with_c(c.clone());
                out.push(with_i(BoundRecord::log("ind-lower-markov", &pc, &ind_lower_dk(&pc, IndLowerVariant::Markov)?)));
            }
            if s <= dkp.copies() {
                out.push(with_i(BoundRecord::log("ind-lower-small-t", &p, &ind_lower_dk(&p, IndLowerVariant::SmallT)?)));
                out.push(BoundRecord::value("small-t-exact", &p, bounds::small_t_exact(&dkp, s)?.to_string()));
            }
            let stats = block_miss_stats(&p)?;
            out.push(BoundRecord::value("block-mu-exact", &p, stats.mu_exact.to_string()));
            out.push(BoundRecord::value("block-mu-bound", &p, stats.mu_bound.to_string()));
        }
    }
    out.sort_by(|a, b| (&a.bound, &a.params).cmp(&(&b.bound, &b.params)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_string(config: &RunConfig) -> (String, Outcome) {
        let mut buf = Vec::new();
        let outcome = run_to(config, &mut buf).unwrap();
        (String::from_utf8(buf).unwrap(), outcome)
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3.into()));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational::new((-3).into(), 2.into()));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn umc_report_shape() {
        let (text, outcome) = run_string(&RunConfig::new(Command::VerifyUmc { n: 8, d: 2 }));
        assert_eq!(outcome, Outcome { records: 15, failed: 0 });
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        let head: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(head["tool"], "regcount");
        assert_eq!(head["config"]["command"]["command"], "verify-umc");
        let tail: serde_json::Value = serde_json::from_str(lines[16]).unwrap();
        assert_eq!(tail["summary"]["records"], 15);
        assert_eq!(tail["summary"]["failed"], 0);
        let rec: serde_json::Value = serde_json::from_str(lines[1]).unwrap();
        assert_eq!(rec["check_id"], "umc");
        assert!(rec.get("graph_text").is_none());
    }

    #[test]
    fn reports_are_reproducible() {
        let mut config = RunConfig::new(Command::VerifySuite { source: GraphSource::Generated { n: 8, d: 3 } });
        config.workers = Some(3);
        let (a, _) = run_string(&config);
        config.workers = Some(1);
        let (b, _) = run_string(&config);
        assert_eq!(a, b);
        config.format = Format::Csv;
        let (c, outcome) = run_string(&config);
        assert!(c.starts_with("# {"));
        assert_eq!(c.lines().filter(|l| !l.starts_with('#')).count(), outcome.records + 1);
    }

    #[test]
    fn bounds_report_has_spot_values() {
        let config = RunConfig::new(Command::Bounds { n: 8, d: 2, size: Some(2) });
        let records = bound_records(8, 2, Some(2), &config).unwrap();
        let upper = records.iter().find(|r| r.bound == "match-upper").unwrap();
        assert_eq!(upper.value, "6");
        assert_eq!(upper.reference.as_deref(), Some("m(DK)=20"));
        assert_eq!(upper.reference_log2, Some(4.32192809489));
        let (text, _) = run_string(&config);
        assert!(text.contains("\"bound\":\"match-upper\""));
    }

    #[test]
    fn failures_give_exit_two() {
        assert_eq!(Outcome { records: 3, failed: 1 }.exit_code(), 2);
        assert_eq!(Outcome { records: 3, failed: 0 }.exit_code(), 0);
    }

    #[test]
    fn config_validation() {
        let mut c = RunConfig::new(Command::VerifyUmc { n: 8, d: 2 });
        c.tol = 0.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(Command::VerifyUmc { n: 8, d: 2 });
        c.c_grid = vec![Rational::from_integer(1.into())];
        assert!(c.validate().is_err());
        let c = RunConfig::new(Command::VerifyUmc { n: 6, d: 2 });
        assert_eq!(run_to(&c, &mut Vec::new()), Err(Error::Divisibility { n: 6, d: 2 }));
    }
}
