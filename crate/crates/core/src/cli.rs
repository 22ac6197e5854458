//! Command-line front end. [`run`] does all the work so tests can drive it
//! without spawning a process.
//!
//! Node indices are 1-based in every report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, ParseError};
use crate::exp::mat_exp;
use crate::graph::{block_periods, spectral_data};
use crate::io::{parse_matrix, parse_vector};
use crate::matrix::{vec_scale, TropMatrix};
use crate::oracle::Oracle;
use crate::periodicity::{
    default_cap, exp_robustness_criterion, is_quasi_robust, is_robust, orbit, ultimate_period, GenEigSolver,
};
use crate::scalar::{scalar_exp, scalar_log, trop_factorial, TropScalar};
use crate::spectral::{check_eigen, eigenvectors};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Parser)]
#[command(name = "maxplus", version, about = "Exact max-plus matrix analysis")]
pub struct Command {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cross-check the result against the brute-force oracle.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Power-search cap for period detection (default 4n² + 64).
    #[arg(long, global = true, value_parser = positive)]
    pub cap: Option<u64>,
    /// Orbit iteration budget.
    #[arg(long, global = true, value_parser = positive, default_value_t = 1000)]
    pub max_steps: u64,
    #[command(subcommand)]
    pub sub: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Matrix exponential e^(A).
    Exp {
        matrix: PathBuf,
        /// Also report O(A) and the number of series terms used.
        #[arg(long)]
        steps: bool,
    },
    /// Eigenvalue and critical-column eigenvectors.
    Eig { matrix: PathBuf },
    /// Maximum cycle mean, critical graph and cyclicities.
    Spectrum { matrix: PathBuf },
    /// Ultimate period p and transient k0.
    Period { matrix: PathBuf },
    /// Robustness of A and the sufficient criterion for e^(A).
    Robust { matrix: PathBuf },
    /// Order of a generalized eigenvector.
    Genorder { matrix: PathBuf, vector: PathBuf },
    /// Iterate x(r+1) = A x(r) until a generalized eigenvector appears.
    Orbit {
        matrix: PathBuf,
        vector: PathBuf,
        /// Include every visited state in the report.
        #[arg(long)]
        states: bool,
    },
    /// Scalar exponential, logarithm or tropical factorial.
    Scalar {
        op: ScalarOp,
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScalarOp {
    Exp,
    Log,
    Factorial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Lib(Error),
    Verify(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

struct Report {
    text: String,
    json: Value,
}

type Step<T> = Result<T, Failure>;

fn read(path: &Path) -> Step<String> {
    let res = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    res.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Step<TropMatrix> {
    parse_matrix(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_vector(path: &Path) -> Step<Vec<TropScalar>> {
    parse_vector(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn tokens(x: &[TropScalar]) -> Value {
    Value::Array(x.iter().map(|v| Value::String(v.to_string())).collect())
}

fn joined(x: &[TropScalar]) -> String {
    x.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|i| i + 1).collect()
}

fn verified(mismatches: Vec<String>) -> Step<()> {
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(mismatches))
    }
}

fn check<T: PartialEq + std::fmt::Debug>(out: &mut Vec<String>, what: &str, fast: T, oracle: T) {
    if fast != oracle {
        out.push(format!("{what}: fast path {fast:?}, oracle {oracle:?}"));
    }
}

fn cmd_exp(cmd: &Command, path: &Path, steps: bool) -> Step<Report> {
    let a = load_matrix(path)?;
    let r = mat_exp(&a)?;
    if cmd.verify {
        let n = a.require_square("exp")? as u64;
        let terms = 2 * r.order_bound.max(n).max(r.terms_used);
        let mut bad = Vec::new();
        check(&mut bad, "exponential", &r.matrix, &Oracle::default().brute_exp(&a, terms)?);
        verified(bad)?;
    }
    let mut text = r.matrix.to_string();
    if steps {
        let _ = write!(text, "O(A) = {}\nterms_used = {}\n", r.order_bound, r.terms_used);
    }
    Ok(Report {
        text,
        json: json!({
            "matrix": r.matrix,
            "order_bound": r.order_bound,
            "terms_used": r.terms_used,
        }),
    })
}

fn cmd_eig(cmd: &Command, path: &Path) -> Step<Report> {
    let a = load_matrix(path)?;
    let basis = eigenvectors(&a)?;
    if cmd.verify {
        let mut bad = Vec::new();
        check(&mut bad, "lambda", &basis.eigenvalue, &Oracle::default().enum_cycle_mean(&a)?.mu);
        for (node, v) in &basis.vectors {
            if !check_eigen(&a, v, &basis.eigenvalue)? {
                bad.push(format!("vector at node {} is not an eigenvector", node + 1));
            }
        }
        verified(bad)?;
    }
    let mut text = format!("lambda = {}\n", basis.eigenvalue);
    for (node, v) in &basis.vectors {
        let _ = writeln!(text, "node {}: {}", node + 1, joined(v));
    }
    let vectors: Vec<Value> = basis
        .vectors
        .iter()
        .map(|(node, v)| json!({"node": node + 1, "v": tokens(v)}))
        .collect();
    Ok(Report {
        text,
        json: json!({"lambda": basis.eigenvalue, "vectors": vectors}),
    })
}

fn cmd_spectrum(cmd: &Command, path: &Path) -> Step<Report> {
    let a = load_matrix(path)?;
    let s = spectral_data(&a)?;
    if cmd.verify {
        let oracle = Oracle::default();
        let mut bad = Vec::new();
        check(&mut bad, "lambda", &s.lambda, &oracle.enum_cycle_mean(&a)?.mu);
        if s.irreducible && !s.acyclic {
            check(&mut bad, "period", s.period, oracle.cyclicity_period(&a)?);
        }
        verified(bad)?;
    }
    let edges: Vec<[usize; 2]> = s.critical_edges.iter().map(|&(i, j)| [i + 1, j + 1]).collect();
    let components: Vec<Vec<usize>> = s.components.iter().map(|c| one_based(c)).collect();
    let mut text = format!("lambda = {}\n", s.lambda);
    let _ = writeln!(text, "critical nodes = {:?}", one_based(&s.critical_nodes));
    let _ = writeln!(text, "critical edges = {edges:?}");
    let _ = writeln!(text, "cyclicities = {:?}", s.cyclicities);
    let mut json = json!({
        "lambda": s.lambda,
        "critical_nodes": one_based(&s.critical_nodes),
        "critical_edges": edges,
        "components": components,
        "cyclicities": s.cyclicities,
        "period": s.period,
        "irreducible": s.irreducible,
        "acyclic": s.acyclic,
    });
    match s.period {
        Some(p) => {
            let _ = writeln!(text, "period = {p}{}", if s.acyclic { " (acyclic)" } else { "" });
        }
        None => {
            let blocks = block_periods(&a)?;
            text.push_str("period = none (reducible)\n");
            for b in &blocks {
                let p = b.period.map_or_else(|| "none".to_string(), |p| p.to_string());
                let _ = writeln!(text, "block {:?} lambda = {} period = {p}", one_based(&b.nodes), b.lambda);
            }
            json["blocks"] = blocks
                .iter()
                .map(|b| json!({"nodes": one_based(&b.nodes), "lambda": b.lambda, "period": b.period}))
                .collect();
        }
    }
    Ok(Report { text, json })
}

fn cmd_period(cmd: &Command, path: &Path) -> Step<Report> {
    let a = load_matrix(path)?;
    let cap = cmd.cap.unwrap_or_else(|| default_cap(a.rows()));
    let c = ultimate_period(&a, cap)?;
    let robust = c.period == 1;
    if cmd.verify {
        let oracle = Oracle::default();
        let mut bad = Vec::new();
        check(&mut bad, "(p, k0)", Some((c.period, c.transient)), oracle.brute_period(&a, cap)?);
        check(&mut bad, "cyclicity period", Some(c.cyclicity_period), oracle.cyclicity_period(&a)?);
        if !c.witness_equal {
            bad.push("A^(k0+p) != lambda^p A^(k0)".into());
        }
        verified(bad)?;
    }
    Ok(Report {
        text: format!("p = {}\nk0 = {}\nlambda = {}\nrobust = {robust}\n", c.period, c.transient, c.lambda),
        json: json!({
            "p": c.period,
            "k0": c.transient,
            "lambda": c.lambda,
            "robust": robust,
            "witness_equal": c.witness_equal,
            "cyclicity_period": c.cyclicity_period,
        }),
    })
}

fn cmd_robust(cmd: &Command, path: &Path) -> Step<Report> {
    let a = load_matrix(path)?;
    let cap = cmd.cap.unwrap_or_else(|| default_cap(a.rows()));
    let robust = is_robust(&a)?;
    let quasi = is_quasi_robust(&a, cap)?;
    let crit = exp_robustness_criterion(&a)?;
    let exp_robust = is_robust(&mat_exp(&a)?.matrix)?;
    if cmd.verify {
        let mut bad = Vec::new();
        check(&mut bad, "robust", Some(robust), Oracle::default().cyclicity_period(&a)?.map(|p| p == 1));
        if crit.sufficient && !exp_robust {
            bad.push("criterion holds but e^(A) is not robust".into());
        }
        verified(bad)?;
    }
    let components: Vec<Value> = crit
        .components
        .iter()
        .map(|c| json!({"nodes": one_based(&c.nodes), "cycle_lengths": c.cycle_lengths, "witness": c.witness}))
        .collect();
    Ok(Report {
        text: format!(
            "robust = {robust}\nquasi_robust = {quasi}\nexp_criterion = {}\nexp_robust = {exp_robust}\n",
            crit.sufficient
        ),
        json: json!({
            "robust": robust,
            "quasi_robust": quasi,
            "exp_criterion": {
                "sufficient": crit.sufficient,
                "lambda": crit.lambda,
                "floor_lambda": crit.floor_lambda,
                "components": components,
            },
            "exp_robust": exp_robust,
        }),
    })
}

fn cmd_genorder(cmd: &Command, mpath: &Path, vpath: &Path) -> Step<Report> {
    let a = load_matrix(mpath)?;
    let x = load_vector(vpath)?;
    let solver = GenEigSolver::new(&a)?;
    let order = solver.order(&x)?;
    if cmd.verify {
        let lambda = Oracle::default().enum_cycle_mean(&a)?.mu;
        let mut brute = None;
        for m in 1..=solver.period() {
            let lhs = a.power(m)?.mul_vec(&x)?;
            if lhs == vec_scale(&lambda.pow(m), &x) {
                brute = Some(m);
                break;
            }
        }
        let mut bad = Vec::new();
        check(&mut bad, "order", order, brute);
        verified(bad)?;
    }
    let shown = order.map_or_else(|| "none".to_string(), |m| m.to_string());
    Ok(Report {
        text: format!("order = {shown}\nlambda = {}\nperiod = {}\n", solver.lambda(), solver.period()),
        json: json!({"order": order, "lambda": solver.lambda(), "period": solver.period()}),
    })
}

fn cmd_orbit(cmd: &Command, mpath: &Path, vpath: &Path, states: bool) -> Step<Report> {
    let a = load_matrix(mpath)?;
    let x = load_vector(vpath)?;
    let r = orbit(&a, &x, cmd.max_steps)?;
    if cmd.verify {
        let mut bad = Vec::new();
        if let Some(i) = r.entry_index {
            let state = &r.states[i as usize];
            check(&mut bad, "entry order", r.entry_order, GenEigSolver::new(&a)?.order(state)?);
        }
        verified(bad)?;
    }
    let mut text = String::new();
    if states {
        for (i, s) in r.states.iter().enumerate() {
            let _ = writeln!(text, "x({i}) = {}", joined(s));
        }
    }
    match (r.entry_index, r.entry_order) {
        (Some(i), Some(m)) => {
            let _ = writeln!(text, "entry = {i}\norder = {m}\nstable = true");
        }
        _ => {
            let _ = writeln!(text, "entry = none\norder = none\nstable = false");
        }
    }
    let mut json = json!({"entry": r.entry_index, "order": r.entry_order, "stable": r.stable});
    if states {
        json["states"] = Value::Array(r.states.iter().map(|s| tokens(s)).collect());
    }
    Ok(Report { text, json })
}

fn cmd_scalar(cmd: &Command, op: ScalarOp, raw: &str) -> Step<Report> {
    let input: TropScalar = raw
        .parse()
        .map_err(|e: ParseError| Failure::Input(e.to_string()))?;
    let value = match op {
        ScalarOp::Exp => {
            let v = scalar_exp(&input);
            if cmd.verify {
                let mut bad = Vec::new();
                check(&mut bad, "exp", &v, &Oracle::default().brute_scalar_exp(&input)?);
                verified(bad)?;
            }
            v
        }
        ScalarOp::Log => scalar_log(&input)?,
        ScalarOp::Factorial => {
            let n = input
                .finite()
                .filter(|v| v.is_integer() && *v >= &BigRational::from_integer(BigInt::from(0)))
                .and_then(|v| u64::try_from(v.to_integer()).ok())
                .ok_or_else(|| Failure::Input(format!("factorial needs a non-negative integer, got {raw}")))?;
            let v = trop_factorial(n);
            if cmd.verify {
                let sum = (1..=n).fold(TropScalar::zero(), |acc, k| acc.otimes(&TropScalar::from(k as i64)));
                let mut bad = Vec::new();
                check(&mut bad, "factorial", &v, &sum);
                verified(bad)?;
            }
            v
        }
    };
    let name = match op {
        ScalarOp::Exp => "exp",
        ScalarOp::Log => "log",
        ScalarOp::Factorial => "factorial",
    };
    Ok(Report {
        text: format!("{value}\n"),
        json: json!({"op": name, "input": input, "value": value}),
    })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotSquare { .. } => "not_square",
        Error::Empty => "empty",
        Error::EntryCount { .. } => "entry_count",
        Error::Reducible { .. } => "reducible",
        Error::Acyclic { .. } => "acyclic",
        Error::Divergent { .. } => "divergent",
        Error::LogDomain(_) => "log_domain",
        Error::AllEpsilonVector => "all_epsilon_vector",
        Error::VectorLength { .. } => "vector_length",
        Error::CapExceeded { .. } => "cap_exceeded",
        Error::OracleBound { .. } => "oracle_bound",
        Error::Parse(_) => "parse",
    }
}

/// Executes `cmd`. Exit codes: 0 success, 1 unreadable or malformed input,
/// 2 domain error, 3 oracle mismatch under `--verify`.
pub fn run(cmd: &Command) -> Outcome {
    let result = match &cmd.sub {
        Sub::Exp { matrix, steps } => cmd_exp(cmd, matrix, *steps),
        Sub::Eig { matrix } => cmd_eig(cmd, matrix),
        Sub::Spectrum { matrix } => cmd_spectrum(cmd, matrix),
        Sub::Period { matrix } => cmd_period(cmd, matrix),
        Sub::Robust { matrix } => cmd_robust(cmd, matrix),
        Sub::Genorder { matrix, vector } => cmd_genorder(cmd, matrix, vector),
        Sub::Orbit { matrix, vector, states } => cmd_orbit(cmd, matrix, vector, *states),
        Sub::Scalar { op, value } => cmd_scalar(cmd, *op, value),
    };
    let (code, kind, message, extra) = match result {
        Ok(report) => {
            let stdout = if cmd.json {
                let mut s = serde_json::to_string_pretty(&report.json).expect("serializable report");
                s.push('\n');
                s
            } else {
                report.text
            };
            return Outcome {
                code: EXIT_OK,
                stdout,
                stderr: String::new(),
            };
        }
        Err(Failure::Input(msg)) => (EXIT_INPUT, "input", msg, Value::Null),
        Err(Failure::Lib(e)) => {
            let code = if matches!(e, Error::Parse(_)) { EXIT_INPUT } else { EXIT_DOMAIN };
            (code, error_kind(&e), e.to_string(), Value::Null)
        }
        Err(Failure::Verify(diffs)) => (EXIT_VERIFY, "verify_mismatch", diffs.join("; "), json!(diffs)),
    };
    if cmd.json {
        let mut body = json!({"error": {"kind": kind, "message": message}});
        if !extra.is_null() {
            body["error"]["mismatches"] = extra;
        }
        Outcome {
            code,
            stdout: format!("{}\n", serde_json::to_string_pretty(&body).expect("serializable error")),
            stderr: String::new(),
        }
    } else {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}
