//! Subcommands. Each returns the process exit code: `0` on success or a
//! passing verification, `1` on errors and failed verifications, `2` when the
//! instance is left unresolved.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use tiefree_core::gs::{price_gs, verify_gs_prices, weighted_rank_valuation, ValuationTable};
use tiefree_core::pipelines::{
    bipartite_edge_weights, is_perfect_matching, price_conjecture2, price_rank_valuations, price_weighted, Method,
};
use tiefree_core::verify::{
    gen_instance, verify_conjecture0, verify_conjecture1_family, verify_conjecture2_family, verify_conjecture3_family,
    enumerate_bases, Conjecture, InstanceKind, VerificationReport,
};
use tiefree_core::{ElementSet, Error, Matroid, RationalVector};

use crate::files::{
    rational_strings, read_json, to_json, CertificateJson, FileError, GraphFile, InstanceFile, Loaded, MatchWeightsFile,
    PricesFile, ReportJson, SetSystem,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNRESOLVED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tiefree", version, about = "Item prices for two matroid buyers that survive arbitrary tie-breaking")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute prices for one or more instance files.
    Price(PriceArgs),
    /// Check a price vector by exhaustive enumeration.
    Verify(VerifyArgs),
    /// Write a reproducible random instance.
    Gen(GenArgs),
    /// Edge weights whose lightest and heaviest choices are perfect matchings.
    MatchWeights(MatchWeightsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Auto,
    Partition,
    Sbo,
    Weighted,
    RankValuation,
    Gs,
}

#[derive(Args, Debug)]
pub struct PriceArgs {
    #[arg(long, required = true, num_args = 1..)]
    pub instance: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: Mode,
    /// Output file, or a directory when several instances are given.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run the matching verifier and embed its report.
    #[arg(long)]
    pub verify: bool,
    /// Worker threads for multiple instance files.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub prices: PathBuf,
    /// One of 0, 1, 2, 3, 7.
    #[arg(long, value_parser = parse_conjecture)]
    pub conjecture: Conjecture,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: InstanceKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MatchWeightsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_conjecture(s: &str) -> Result<Conjecture, String> {
    Conjecture::parse(s).ok_or_else(|| format!("unknown conjecture {s:?}; expected 0, 1, 2, 3 or 7"))
}

fn parse_kind(s: &str) -> Result<InstanceKind, String> {
    InstanceKind::parse(s).ok_or_else(|| {
        let all: Vec<&str> = InstanceKind::ALL.iter().map(|k| k.as_str()).collect();
        format!("unknown kind {s:?}; expected one of {}", all.join(", "))
    })
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure { code: EXIT_ERROR, message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unresolved { .. } | Error::SearchExhausted { .. } => EXIT_UNRESOLVED,
            _ => EXIT_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure { code: EXIT_ERROR, message }
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::from(format!("{}: {e}", display(path)))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn matroids(inst: &Loaded) -> Result<(Matroid, Matroid), Failure> {
    let build = |i: usize| inst.systems[i].matroid().map_err(|e| Failure::from(format!("matroid{}: {e}", i + 1)));
    Ok((build(0)?, build(1)?))
}

fn weights(inst: &Loaded) -> Result<&[RationalVector; 2], Failure> {
    inst.weights.as_ref().ok_or_else(|| Failure::from("this mode needs weights1 and weights2".to_string()))
}

/// Valuation tables from the file, or weighted rank valuations of the
/// matroids when only weights are given.
fn valuations(inst: &Loaded) -> Result<[ValuationTable; 2], Failure> {
    if let Some(v) = &inst.valuations {
        return Ok(v.clone());
    }
    let (m1, m2) = matroids(inst)?;
    let [w1, w2] = weights(inst).map_err(|_| Failure::from("gs needs valuations, or weights on the matroids".to_string()))?;
    Ok([weighted_rank_valuation(&m1, w1)?, weighted_rank_valuation(&m2, w2)?])
}

fn families(inst: &Loaded) -> Result<[Vec<ElementSet>; 2], Failure> {
    let family = |s: &SetSystem| -> Result<Vec<ElementSet>, Failure> {
        match s.bases() {
            Some(b) => Ok(b.to_vec()),
            None => Ok(enumerate_bases(&s.matroid()?)?),
        }
    };
    Ok([family(&inst.systems[0])?, family(&inst.systems[1])?])
}

fn run_verifier(inst: &Loaded, conjecture: Conjecture, p: &RationalVector) -> Result<VerificationReport, Failure> {
    let n = inst.n;
    Ok(match conjecture {
        Conjecture::C0 => {
            let (m1, m2) = matroids(inst)?;
            verify_conjecture0(&m1, &m2, p)?
        }
        Conjecture::C1 => {
            let [f1, f2] = families(inst)?;
            verify_conjecture1_family(n, &f1, &f2, p)?
        }
        Conjecture::C2 => {
            let [f1, f2] = families(inst)?;
            verify_conjecture2_family(n, &f1, &f2, p)?
        }
        Conjecture::C3 => {
            let [f1, f2] = families(inst)?;
            let [w1, w2] = weights(inst)?;
            verify_conjecture3_family(n, &f1, w1, &f2, w2, p)?
        }
        Conjecture::C7 => {
            let [v1, v2] = valuations(inst)?;
            verify_gs_prices(&v1, &v2, p)?
        }
    })
}

fn price_one(inst: &Loaded, mode: Mode, verify: bool) -> Result<(PricesFile, bool), Failure> {
    let (file, conjecture) = match mode {
        Mode::Gs => {
            let [v1, v2] = valuations(inst)?;
            let g = price_gs(&v1, &v2)?;
            let file = PricesFile {
                prices: rational_strings(&g.prices),
                mode: Some("gs".into()),
                bases: None,
                iterations: None,
                certificate: Some(CertificateJson {
                    q1: None,
                    q2: None,
                    q: Some(rational_strings(&g.q)),
                    p_hat: rational_strings(&g.p_hat),
                    epsilon: g.epsilon.to_string(),
                    delta: g.delta.to_string(),
                }),
                report: None,
            };
            (file, Conjecture::C7)
        }
        _ => {
            let (m1, m2) = matroids(inst)?;
            let (result, conjecture) = match mode {
                Mode::Auto => (price_conjecture2(&m1, &m2, Method::Auto)?, Conjecture::C2),
                Mode::Partition => (price_conjecture2(&m1, &m2, Method::Partition)?, Conjecture::C2),
                Mode::Sbo => (price_conjecture2(&m1, &m2, Method::Sbo)?, Conjecture::C2),
                Mode::Weighted => {
                    let [w1, w2] = weights(inst)?;
                    (price_weighted(&m1, w1, &m2, w2, Method::Auto)?, Conjecture::C3)
                }
                Mode::RankValuation => (price_rank_valuations(&m1, &m2, Method::Auto)?, Conjecture::C0),
                Mode::Gs => unreachable!("handled above"),
            };
            (PricesFile::from_result(&result), conjecture)
        }
    };
    if !verify {
        return Ok((file, true));
    }
    let p = file.price_vector()?;
    let report = run_verifier(inst, conjecture, &p)?;
    let pass = report.pass;
    Ok((PricesFile { report: Some(ReportJson::from_report(&report)), ..file }, pass))
}

fn price_path(path: &Path, mode: Mode, verify: bool) -> Result<String, Failure> {
    let inst = InstanceFile::load(&display(path))?;
    let (file, pass) = price_one(&inst, mode, verify)?;
    if pass {
        Ok(to_json(&file))
    } else {
        Err(Failure {
            code: EXIT_ERROR,
            message: format!("{}: verification failed\n{}", display(path), to_json(&file)),
        })
    }
}

pub fn cmd_price(args: &PriceArgs) -> i32 {
    let jobs = args.jobs.max(1);
    let mut results: Vec<Option<Result<String, Failure>>> = (0..args.instance.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = args.instance.len().div_ceil(jobs);
        for (paths, slots) in args.instance.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (path, slot) in paths.iter().zip(slots) {
                    *slot = Some(price_path(path, args.mode, args.verify));
                }
            });
        }
    });
    let single = args.instance.len() == 1;
    let mut code = EXIT_OK;
    for (path, result) in args.instance.iter().zip(results) {
        let outcome = result.expect("every slot filled").and_then(|text| {
            let target = match (&args.out, single) {
                (Some(out), true) => Some(out.clone()),
                (Some(dir), false) => {
                    let stem = path.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned());
                    Some(dir.join(format!("{stem}.prices.json")))
                }
                (None, _) => None,
            };
            emit(target.as_deref(), &text)
        });
        if let Err(f) = outcome {
            eprintln!("error: {}", f.message);
            code = code.max(f.code);
        }
    }
    // errors outrank unresolved instances
    if code == EXIT_ERROR || code == EXIT_UNRESOLVED { code } else { EXIT_OK }
}

fn verify_inner(args: &VerifyArgs) -> Result<bool, Failure> {
    let inst = InstanceFile::load(&display(&args.instance))?;
    let prices: PricesFile = read_json(&display(&args.prices))?;
    let p = prices.price_vector().map_err(|e| Failure::from(format!("{}: {e}", display(&args.prices))))?;
    let report = run_verifier(&inst, args.conjecture, &p)?;
    emit(args.out.as_deref(), &to_json(&ReportJson::from_report(&report)))?;
    Ok(report.pass)
}

pub fn cmd_verify(args: &VerifyArgs) -> i32 {
    match verify_inner(args) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_ERROR,
        Err(f) => {
            eprintln!("error: {}", f.message);
            EXIT_ERROR
        }
    }
}

pub fn cmd_gen(args: &GenArgs) -> i32 {
    let result = gen_instance(args.kind, args.n, args.seed)
        .map_err(Failure::from)
        .and_then(|inst| emit(args.out.as_deref(), &to_json(&InstanceFile::from_instance(&inst))));
    finish(result)
}

fn match_weights_inner(args: &MatchWeightsArgs) -> Result<(), Failure> {
    let graph: GraphFile = read_json(&display(&args.graph))?;
    let edges: Vec<(usize, usize)> = graph.edges.iter().map(|e| (e[0], e[1])).collect();
    let w = bipartite_edge_weights(graph.u, graph.v, &edges)?;
    let file = MatchWeightsFile {
        weights: rational_strings(&w.weights),
        lightest_is_perfect: is_perfect_matching(graph.u, graph.v, &edges, &w.lightest),
        heaviest_is_perfect: is_perfect_matching(graph.u, graph.v, &edges, &w.heaviest),
        lightest: w.lightest,
        heaviest: w.heaviest,
    };
    if !(file.lightest_is_perfect && file.heaviest_is_perfect) {
        return Err(format!("selections are not perfect matchings\n{}", to_json(&file)).into());
    }
    emit(args.out.as_deref(), &to_json(&file))
}

pub fn cmd_match_weights(args: &MatchWeightsArgs) -> i32 {
    finish(match_weights_inner(args))
}

fn finish(result: Result<(), Failure>) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    match &cli.command {
        Command::Price(a) => cmd_price(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::MatchWeights(a) => cmd_match_weights(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_outcomes_exit_with_two() {
        let unresolved = Error::Unresolved {
            b1: ElementSet::new(),
            b2: ElementSet::new(),
            cycle: vec![0, 1],
        };
        assert_eq!(Failure::from(unresolved).code, EXIT_UNRESOLVED);
        assert_eq!(Failure::from(Error::SearchExhausted { trials: 3 }).code, EXIT_UNRESOLVED);
        assert_eq!(Failure::from(Error::NoFeasiblePair).code, EXIT_ERROR);
    }

    #[test]
    fn cli_parses() {
        let cli = Cli::try_parse_from(["tiefree", "verify", "--instance", "i", "--prices", "p", "--conjecture", "C7"]).unwrap();
        assert!(matches!(cli.command, Command::Verify(VerifyArgs { conjecture: Conjecture::C7, .. })));
        assert!(Cli::try_parse_from(["tiefree", "gen", "--kind", "nope", "--n", "3"]).is_err());
    }
}
