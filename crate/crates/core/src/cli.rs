//! Command-line front end. Every subcommand writes one deterministic
//! document; exit codes are 0 (success), 1 (usage or input error) and 2
//! (an asserted property failed).

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arithmetic::{rat_int, DivisorLattice, IntJson, RatStr};
use crate::bounds::{
    aux_inequalities, bound_params, corollary_check, g_function, g_table, lemma1_check, lemma1_proof_chain_check,
    lemma3_check, lemma4_check, level_admissible, random_exponents, random_lemma3_config, CorollaryKind, GConfig,
    GVariant, InequalityReport, Lemma4Outcome, Quantifier,
};
use crate::enumerate::{classify, count_bound, factorizations_on, Strategy, DEFAULT_CAP};
use crate::error::{EtaError, Result};
use crate::etaquotient::{atkin_lehner, is_holomorphic, order_vector, valence_check, EtaQuotient};
use crate::ordermatrix::{level_matrices, DivisorMatrix};
use crate::qseries::{eta_quotient_expansion, DEFAULT_TERMS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PROPERTY: i32 = 2;

/// Parsed invocation.
#[derive(Debug, Parser)]
#[command(name = "etaq", version, about = "Exact computations with eta quotients on Γ0(N)")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print Â_N (or its inverse).
    Matrix {
        /// Level N (alternative to --level).
        level_pos: Option<u64>,
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        json: bool,
    },
    /// 24·(order at 1/t) for every t | N.
    Orders {
        #[command(flatten)]
        eta: EtaArgs,
        #[arg(long)]
        json: bool,
    },
    /// Apply the Atkin–Lehner involution al_{n,N}.
    Al {
        #[command(flatten)]
        eta: EtaArgs,
        #[arg(long)]
        n: u64,
    },
    /// Check the valence formula.
    Valence {
        #[command(flatten)]
        eta: EtaArgs,
    },
    /// q-expansion at ∞.
    Series {
        #[command(flatten)]
        eta: EtaArgs,
        #[arg(long, default_value_t = DEFAULT_TERMS)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate and classify holomorphic eta quotients (JSONL).
    Enumerate {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight2: i64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Order)]
        strategy: StrategyArg,
        #[arg(long)]
        simple_only: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// List factorizations f = g·h on Γ0(M).
    Factorize {
        #[command(flatten)]
        eta: EtaArgs,
    },
    /// F(N), G_paper(N), G_proof(N).
    Bounds {
        #[arg(long)]
        level: u64,
        /// Also report the weight bound kF(N) and the count bound.
        #[arg(long)]
        weight2: Option<i64>,
    },
    /// Run the bound checks on a seeded random corpus.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long)]
        level: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "g", value_enum, default_value_t = GArg::Proof)]
        g: GArg,
    },
    /// Level admissibility for weight k/2.
    Admissible {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        weight2: u64,
        #[arg(long = "g", value_enum, default_value_t = GArg::Paper)]
        g: GArg,
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = QuantifierArg::Every)]
        quantifier: QuantifierArg,
    },
    /// The g function.
    G {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long = "g", value_enum, default_value_t = GArg::Paper)]
        g: GArg,
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = QuantifierArg::Every)]
        quantifier: QuantifierArg,
    },
}

#[derive(Debug, Args)]
pub struct EtaArgs {
    /// Exponent map "d:e,d:e".
    #[arg(long, allow_hyphen_values = true)]
    pub eta: String,
    /// Ambient level (defaults to the level of the quotient).
    #[arg(long)]
    pub ambient: Option<u64>,
}

impl EtaArgs {
    fn quotient(&self) -> Result<EtaQuotient> {
        let pairs = crate::etaquotient::parse_exponent_map(&self.eta)?;
        let level = pairs.iter().filter(|(_, e)| *e != 0).fold(1, |acc, &(d, _)| crate::arithmetic::lcm(acc, d));
        EtaQuotient::from_pairs(self.ambient.unwrap_or(level), &pairs)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Order,
    Box,
    Both,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Order => Strategy::Order,
            StrategyArg::Box => Strategy::Box,
            StrategyArg::Both => Strategy::Both,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemma1,
    Chain,
    Lemma3,
    Lemma4,
    Aux,
    All,
}

impl Suite {
    fn runs(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GArg {
    Paper,
    Proof,
}

impl From<GArg> for GVariant {
    fn from(g: GArg) -> Self {
        match g {
            GArg::Paper => GVariant::Paper,
            GArg::Proof => GVariant::Proof,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum QuantifierArg {
    Every,
    Some,
}

impl From<QuantifierArg> for Quantifier {
    fn from(q: QuantifierArg) -> Self {
        match q {
            QuantifierArg::Every => Quantifier::Every,
            QuantifierArg::Some => Quantifier::Some,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&config.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                EtaError::Internal(_) => EXIT_PROPERTY,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn io_err(e: std::io::Error) -> EtaError {
    EtaError::InvalidInput(format!("i/o failure: {e}"))
}

fn json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| EtaError::Internal(e.to_string()))
}

fn emit(out: &mut dyn Write, line: &str) -> Result<()> {
    writeln!(out, "{line}").map_err(io_err)
}

#[derive(Serialize)]
struct MatrixJson {
    #[serde(rename = "N")]
    n: u64,
    divisors: Vec<u64>,
    rows: Vec<Vec<String>>,
}

fn matrix_json(m: &DivisorMatrix) -> MatrixJson {
    MatrixJson {
        n: m.lattice().level(),
        divisors: m.lattice().divisors().to_vec(),
        rows: m.rows().map(|r| r.iter().map(|v| v.to_string()).collect()).collect(),
    }
}

/// Ordered `{"t": n}` map.
struct IntMap(Vec<(u64, BigInt)>);

impl Serialize for IntMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(&k.to_string(), &IntJson(v.clone()))?;
        }
        map.end()
    }
}

fn sparse_map(f: &EtaQuotient) -> IntMap {
    IntMap(f.sparse())
}

#[derive(Serialize)]
struct OrdersJson {
    #[serde(rename = "N")]
    n: u64,
    exponents: IntMap,
    orders24: IntMap,
    holomorphic: bool,
}

#[derive(Serialize)]
struct AlJson {
    #[serde(rename = "N")]
    n: u64,
    n_exact: u64,
    exponents: IntMap,
    image: IntMap,
}

#[derive(Serialize)]
struct ValenceJson {
    lhs: RatStr,
    rhs: RatStr,
    ok: bool,
}

#[derive(Serialize)]
struct BoundsJson {
    #[serde(rename = "F")]
    f: RatStr,
    #[serde(rename = "G_paper")]
    g_paper: RatStr,
    #[serde(rename = "G_proof")]
    g_proof: RatStr,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight2: Option<i64>,
    #[serde(rename = "kF", skip_serializing_if = "Option::is_none")]
    k_f: Option<RatStr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    count_bound: Option<RatStr>,
}

#[derive(Serialize)]
struct FactorJson {
    g: IntMap,
    h: IntMap,
}

#[derive(Serialize, Default)]
struct Tally {
    checked: u64,
    failed: u64,
    #[serde(skip_serializing_if = "is_zero")]
    untestable: u64,
}

fn is_zero(v: &u64) -> bool {
    *v == 0
}

#[derive(Serialize)]
struct CheckJson {
    #[serde(rename = "N")]
    n: u64,
    samples: usize,
    seed: u64,
    g: GVariant,
    /// Per check name, in first-seen order.
    checks: Checks,
    /// Failures that do not affect the exit code (published-constant checks).
    violations: Vec<InequalityReport>,
    /// Failures of properties that must hold.
    failures: Vec<InequalityReport>,
}

const MAX_LISTED: usize = 20;

fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Matrix { level_pos, level, inverse, json: as_json } => {
            let n = level.or(*level_pos).ok_or_else(|| EtaError::InvalidInput("a level is required".into()))?;
            let m = level_matrices(n)?;
            let mat = if *inverse { &m.sym_inv } else { &m.sym };
            if *as_json {
                emit(out, &json(&matrix_json(mat))?)?;
            } else {
                write!(out, "{mat}").map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Orders { eta, json: as_json } => {
            let f = eta.quotient()?;
            let orders = order_vector(&f)?.orders24;
            let holomorphic = is_holomorphic(&f)?;
            if *as_json {
                let doc = OrdersJson {
                    n: f.ambient_level(),
                    exponents: sparse_map(&f),
                    orders24: IntMap(orders.iter().map(|(t, v)| (t, v.clone())).collect()),
                    holomorphic,
                };
                emit(out, &json(&doc)?)?;
            } else {
                emit(out, &format!("{f} on Γ0({})", f.ambient_level()))?;
                let width = orders.iter().map(|(t, _)| t.to_string().len()).max().unwrap_or(1);
                for (t, v) in orders.iter() {
                    emit(out, &format!("  1/{t:<width$}  {v}"))?;
                }
                emit(out, &format!("holomorphic: {holomorphic}"))?;
            }
            Ok(EXIT_OK)
        }
        Command::Al { eta, n } => {
            let f = eta.quotient()?;
            let g = atkin_lehner(&f, *n)?;
            let doc = AlJson { n: f.ambient_level(), n_exact: *n, exponents: sparse_map(&f), image: sparse_map(&g) };
            emit(out, &json(&doc)?)?;
            Ok(EXIT_OK)
        }
        Command::Valence { eta } => {
            let v = valence_check(&eta.quotient()?)?;
            emit(out, &json(&ValenceJson { lhs: RatStr(v.lhs), rhs: RatStr(v.rhs), ok: v.ok })?)?;
            Ok(if v.ok { EXIT_OK } else { EXIT_PROPERTY })
        }
        Command::Series { eta, terms, json: as_json } => {
            let f = eta.quotient()?;
            let s = eta_quotient_expansion(&f, *terms)?;
            if *as_json {
                emit(out, &json(&s)?)?;
            } else {
                let body: Vec<String> = s
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| *c != &BigInt::from(0))
                    .map(|(j, c)| format!("{c}·q^{j}"))
                    .collect();
                emit(out, &format!("q^({}/24)·({} + O(q^{}))", s.lead24, body.join(" + "), s.truncation()))?;
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate { level, weight2, strategy, simple_only, cap, out: path } => {
            let catalog = classify(*level, *weight2, (*strategy).into(), *cap)?;
            let text = catalog.to_jsonl(*simple_only).map_err(|e| EtaError::Internal(e.to_string()))?;
            match path {
                Some(p) => std::fs::write(p, text).map_err(io_err)?,
                None => out.write_all(text.as_bytes()).map_err(io_err)?,
            }
            if catalog.truncated {
                let _ = writeln!(err, "warning: output truncated at {cap} solutions");
            }
            Ok(EXIT_OK)
        }
        Command::Factorize { eta } => {
            let f = eta.quotient()?;
            let pairs = factorizations_on(&f, f.ambient_level())?;
            let doc: Vec<FactorJson> = pairs.iter().map(|(g, h)| FactorJson { g: sparse_map(g), h: sparse_map(h) }).collect();
            emit(out, &json(&doc)?)?;
            Ok(EXIT_OK)
        }
        Command::Bounds { level, weight2 } => {
            let b = bound_params(*level)?;
            let (k_f, count) = match weight2 {
                Some(k) if *k < 0 => return Err(EtaError::InvalidInput("weight2 must be nonnegative".into())),
                Some(k) => (Some(RatStr(rat_int(*k) * &b.f)), Some(RatStr(count_bound(*level, *k)?))),
                None => (None, None),
            };
            let doc = BoundsJson {
                f: RatStr(b.f),
                g_paper: RatStr(b.g_paper),
                g_proof: RatStr(b.g_proof),
                weight2: *weight2,
                k_f,
                count_bound: count,
            };
            emit(out, &json(&doc)?)?;
            Ok(EXIT_OK)
        }
        Command::Check { suite, level, samples, seed, g } => {
            run_checks(*suite, *level, *samples, *seed, (*g).into(), out)
        }
        Command::Admissible { level, weight2, g, cap, quantifier } => {
            let config = GConfig { variant: (*g).into(), cap: *cap, quantifier: (*quantifier).into() };
            emit(out, &json(&level_admissible(*weight2, *level, config)?)?)?;
            Ok(EXIT_OK)
        }
        Command::G { n, g, cap, quantifier } => {
            let config = GConfig { variant: (*g).into(), cap: *cap, quantifier: (*quantifier).into() };
            emit(out, &json(&g_function(*n, config))?)?;
            Ok(EXIT_OK)
        }
    }
}

fn run_checks(suite: Suite, n: u64, samples: usize, seed: u64, variant: GVariant, out: &mut dyn Write) -> Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<(String, Tally)> = Vec::new();
    let mut violations = Vec::new();
    let mut failures = Vec::new();
    let mut record = |checks: &mut Vec<(String, Tally)>, r: InequalityReport, asserted: bool| {
        let pos = tally(checks, &r.name);
        let t = &mut checks[pos].1;
        t.checked += 1;
        if !r.holds {
            t.failed += 1;
            let list = if asserted { &mut failures } else { &mut violations };
            if list.len() < MAX_LISTED {
                list.push(r);
            }
        }
    };
    let proof = variant == GVariant::Proof;
    if suite.runs(Suite::Aux) {
        for r in aux_inequalities(n)? {
            // the uncorrected column-sum bound is a published claim that fails for many N
            let asserted = !matches!(r.name.as_str(), "aux_row_sum" | "aux_g_paper");
            record(&mut checks, r, asserted);
        }
    }
    let table = if suite.runs(Suite::Lemma4) {
        let span = 6 * DivisorLattice::shared(n)?.len() as i64;
        Some(g_table(-span, 0, GConfig::new(variant, 2)))
    } else {
        None
    };
    for _ in 0..samples {
        let x = random_exponents(n, 6, &mut rng)?;
        if suite.runs(Suite::Chain) {
            for r in lemma1_proof_chain_check(&x)? {
                record(&mut checks, r, true);
            }
        }
        if suite.runs(Suite::Lemma1) {
            record(&mut checks, lemma1_check(&x, variant)?, proof);
            if is_holomorphic(&EtaQuotient::new(x.clone()))? {
                record(&mut checks, corollary_check(&x, &CorollaryKind::Holomorphic, variant)?, true);
            } else if x.sigma() <= BigInt::from(0) {
                record(&mut checks, corollary_check(&x, &CorollaryKind::Nonpositive, variant)?, proof);
            }
        }
        if let Some(table) = &table {
            if !is_holomorphic(&EtaQuotient::new(x.clone()))? {
                match lemma4_check(&x, table)? {
                    Lemma4Outcome::Checked(r) => record(&mut checks, r, proof),
                    Lemma4Outcome::Untestable(_) => {
                        let pos = tally(&mut checks, &format!("lemma4_{variant}"));
                        checks[pos].1.untestable += 1;
                    }
                }
            }
        }
        if suite.runs(Suite::Lemma3) {
            if let Some((y, p, a, b)) = random_lemma3_config(n, 6, &mut rng)? {
                record(&mut checks, lemma3_check(&y, p, a, b)?, true);
            }
        }
    }
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_PROPERTY };
    let doc = CheckJson { n, samples, seed, g: variant, checks: Checks(checks), violations, failures };
    emit(out, &json(&doc)?)?;
    Ok(code)
}

fn tally(checks: &mut Vec<(String, Tally)>, name: &str) -> usize {
    match checks.iter().position(|(k, _)| k == name) {
        Some(p) => p,
        None => {
            checks.push((name.to_string(), Tally::default()));
            checks.len() - 1
        }
    }
}

/// Ordered `{"name": tally}` map.
struct Checks(Vec<(String, Tally)>);

impl Serialize for Checks {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}
