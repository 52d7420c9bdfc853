//! The `tenfac` command-line tool.
//!
//! Exit codes: 0 on success, 1 on bad input or usage, 2 on numerical failure.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::truncated_dim;
use crate::error::{Error, Result};
use crate::expr::{
    factor_exact_order2, factor_exact_order2_svd, factor_greedy, factor_heuristic_higher_order,
    parse, AlsConfig, AlsField, GroupDirection, TensorExpr,
};
use crate::json::{field_of, signature_to_json, terms_to_json, AnyTensor, AnyTruncated};
use crate::rank2::{
    numerical_rank, rank, rank_decompose_rref, rank_decompose_svd, render_decomposition, svd,
    Matrix,
};
use crate::scalar::{rational_from_f64, FieldKind, Rational, Scalar};
use crate::signature::{oracle_signature, path_signature, PiecewiseLinearPath};

#[derive(Parser, Debug)]
#[command(
    name = "tenfac",
    version,
    about = "Tensor products, rank and factoring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank of a matrix given as tensor JSON
    Rank(RankArgs),
    /// Rank decomposition of a matrix as a sum of outer products
    Decompose(DecomposeArgs),
    /// Rewrite an expression with fewer terms
    Factor(FactorArgs),
    /// Canonical fully expanded form of an expression
    Expand(ExpandArgs),
    /// Truncated signature of a piecewise-linear path read from CSV
    Sig(SigArgs),
    /// Operations in the truncated tensor algebra
    Algebra(AlgebraArgs),
    /// Dimension of the truncated tensor algebra over R^d at depth N
    Dim { d: usize, depth: usize },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RankMethod {
    Rref,
    Svd,
}

#[derive(Args, Debug)]
struct RankArgs {
    /// Path to tensor JSON, or the JSON itself
    input: String,
    #[arg(long, value_enum, default_value = "rref")]
    method: RankMethod,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    /// Path to tensor JSON, or the JSON itself
    input: String,
    #[arg(long, value_enum, default_value = "rref")]
    method: RankMethod,
    /// Print only the term list JSON
    #[arg(long)]
    json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FactorMethod {
    Exact,
    GreedyLeft,
    GreedyRight,
    Als,
}

#[derive(Args, Debug)]
struct FactorArgs {
    /// Expression text, expression JSON, or a path to either
    #[arg(allow_hyphen_values = true)]
    expr: String,
    #[arg(long, value_enum, default_value = "exact")]
    method: FactorMethod,
    /// Coefficient field; `als` defaults to real, everything else to rational
    #[arg(long)]
    field: Option<FieldKind>,
    /// Largest term count `als` tries
    #[arg(long)]
    max_rank: Option<usize>,
    #[arg(long, default_value_t = AlsConfig::default().seed)]
    seed: u64,
    #[arg(long, default_value_t = AlsConfig::default().restarts)]
    restarts: usize,
    #[arg(long, default_value_t = AlsConfig::default().sweeps)]
    sweeps: usize,
    /// Max componentwise residual `als` accepts
    #[arg(long, default_value_t = AlsConfig::default().tol)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    /// Expression text, expression JSON, or a path to either
    #[arg(allow_hyphen_values = true)]
    expr: String,
    #[arg(long, default_value = "rational")]
    field: FieldKind,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SigArgs {
    /// CSV file with one point per line
    path: String,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    #[arg(long, default_value_t = 1.0)]
    to: f64,
    /// Use the direct quadrature with this many steps instead
    #[arg(long)]
    oracle: Option<usize>,
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    #[command(subcommand)]
    op: AlgebraOp,
}

#[derive(Subcommand, Debug)]
enum AlgebraOp {
    /// Truncated product of two elements
    Mul { left: String, right: String },
    /// Multiplicative inverse
    Inv { input: String },
    /// Drop all levels above M
    Project {
        input: String,
        #[arg(long)]
        level: usize,
    },
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(text) => match writeln!(out, "{text}") {
            Ok(()) => 0,
            Err(_) => 1,
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Rank(a) => cmd_rank(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Factor(a) => cmd_factor(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Sig(a) => cmd_sig(a),
        Command::Algebra(a) => cmd_algebra(a.op),
        Command::Dim { d, depth } => {
            if d == 0 {
                return Err(Error::Invalid("d must be at least 1".into()));
            }
            Ok(truncated_dim(d, depth).to_string())
        }
    }
}

fn pretty(v: &Value) -> String {
    v.to_string()
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn load_json(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg)?
    };
    Ok(serde_json::from_str(&text)?)
}

fn rational_matrix(t: AnyTensor) -> Result<Matrix<Rational>> {
    match t {
        AnyTensor::Rational(t) => Matrix::from_tensor(&t),
        AnyTensor::Real(t) => {
            let coeffs = t
                .coeffs()
                .iter()
                .map(|x| rational_from_f64(*x))
                .collect::<Result<Vec<_>>>()?;
            Matrix::from_tensor(&crate::tensor::DenseTensor::new(t.shape().clone(), coeffs)?)
        }
        AnyTensor::Complex(_) => Err(Error::UnsupportedField(FieldKind::Complex)),
    }
}

fn real_matrix(t: AnyTensor) -> Result<Matrix<f64>> {
    match t {
        AnyTensor::Rational(t) => Matrix::from_tensor(&t.map(f64::from_rational)),
        AnyTensor::Real(t) => Matrix::from_tensor(&t),
        AnyTensor::Complex(_) => Err(Error::UnsupportedField(FieldKind::Complex)),
    }
}

fn cmd_rank(a: RankArgs) -> Result<String> {
    let t = AnyTensor::from_json(&load_json(&a.input)?)?;
    let r = match a.method {
        RankMethod::Rref => rank(&rational_matrix(t)?),
        RankMethod::Svd => {
            let m = real_matrix(t)?;
            numerical_rank(&svd(&m)?.sigma, m.rows(), m.cols())
        }
    };
    Ok(r.to_string())
}

fn cmd_decompose(a: DecomposeArgs) -> Result<String> {
    let t = AnyTensor::from_json(&load_json(&a.input)?)?;
    let (shown, v) = match a.method {
        RankMethod::Rref => {
            let m = rational_matrix(t)?;
            let terms = rank_decompose_rref(&m).terms();
            (render_decomposition(&m, &terms), terms_to_json(&terms))
        }
        RankMethod::Svd => {
            let m = real_matrix(t)?;
            let terms = rank_decompose_svd(&m)?.terms();
            (render_decomposition(&m, &terms), terms_to_json(&terms))
        }
    };
    Ok(if a.json {
        pretty(&v)
    } else {
        format!("{shown}\n\n{}", pretty(&v))
    })
}

/// Reads expression text or JSON, inline or from a file, into field `S`.
/// Rational JSON converts into any field; other fields must match.
fn load_expr<S: Scalar>(arg: &str) -> Result<TensorExpr<S>> {
    let text = if !arg.trim_start().starts_with('{') && Path::new(arg).is_file() {
        fs::read_to_string(arg)?
    } else {
        arg.to_string()
    };
    if !text.trim_start().starts_with('{') {
        return Ok(parse(text.trim())?.map_field(S::from_rational));
    }
    let v: Value = serde_json::from_str(&text)?;
    match field_of(&v)? {
        k if k == S::KIND => TensorExpr::from_json(&v),
        FieldKind::Rational => {
            Ok(TensorExpr::<Rational>::from_json(&v)?.map_field(S::from_rational))
        }
        k => Err(Error::FieldMismatch {
            left: S::KIND,
            right: k,
        }),
    }
}

fn show_expr<S: Scalar>(e: &TensorExpr<S>, json: bool, extra: Value) -> String {
    if json {
        let mut v = e.to_json();
        if let (Some(obj), Value::Object(more)) = (v.as_object_mut(), extra) {
            obj.extend(more);
        }
        pretty(&v)
    } else {
        let mut s = format!("{e}\nterms: {}", e.len());
        if let Value::Object(more) = extra {
            for (k, v) in more {
                if k != "term_count" {
                    let v = v.as_str().map(str::to_string).unwrap_or(v.to_string());
                    s.push_str(&format!("\n{k}: {v}"));
                }
            }
        }
        s
    }
}

fn factor_in<S: Scalar>(a: &FactorArgs, greedy: GroupDirection) -> Result<String> {
    let e = load_expr::<S>(&a.expr)?;
    let f = factor_greedy(&e, greedy)?;
    Ok(show_expr(&f, a.json, json!({"term_count": f.len()})))
}

fn als_in<S: AlsField>(a: &FactorArgs) -> Result<String> {
    let e = load_expr::<S>(&a.expr)?;
    let config = AlsConfig {
        max_rank: a.max_rank,
        sweeps: a.sweeps,
        tol: a.tol,
        restarts: a.restarts,
        seed: a.seed,
    };
    let out = factor_heuristic_higher_order(&e, &config)?;
    Ok(show_expr(
        &out.expr,
        a.json,
        json!({
            "term_count": out.expr.len(),
            "status": out.status.as_str(),
            "residual": out.residual,
        }),
    ))
}

fn cmd_factor(a: FactorArgs) -> Result<String> {
    let direction = match a.method {
        FactorMethod::GreedyLeft => GroupDirection::Left,
        FactorMethod::GreedyRight => GroupDirection::Right,
        FactorMethod::Exact => {
            return match a.field.unwrap_or(FieldKind::Rational) {
                FieldKind::Rational => {
                    let f = factor_exact_order2(&load_expr(&a.expr)?)?;
                    Ok(show_expr(&f, a.json, json!({"term_count": f.len()})))
                }
                FieldKind::Real => {
                    let f = factor_exact_order2_svd(&load_expr(&a.expr)?)?;
                    Ok(show_expr(&f, a.json, json!({"term_count": f.len()})))
                }
                FieldKind::Complex => Err(Error::UnsupportedField(FieldKind::Complex)),
            }
        }
        FactorMethod::Als => {
            return match a.field.unwrap_or(FieldKind::Real) {
                FieldKind::Real => als_in::<f64>(&a),
                FieldKind::Complex => als_in::<Complex64>(&a),
                FieldKind::Rational => Err(Error::UnsupportedField(FieldKind::Rational)),
            }
        }
    };
    match a.field.unwrap_or(FieldKind::Rational) {
        FieldKind::Rational => factor_in::<Rational>(&a, direction),
        FieldKind::Real => factor_in::<f64>(&a, direction),
        FieldKind::Complex => factor_in::<Complex64>(&a, direction),
    }
}

fn expand_in<S: Scalar>(a: &ExpandArgs) -> Result<String> {
    let e = load_expr::<S>(&a.expr)?.expand()?;
    Ok(if a.json {
        pretty(&e.to_json())
    } else {
        e.to_string()
    })
}

fn cmd_expand(a: ExpandArgs) -> Result<String> {
    match a.field {
        FieldKind::Rational => expand_in::<Rational>(&a),
        FieldKind::Real => expand_in::<f64>(&a),
        FieldKind::Complex => expand_in::<Complex64>(&a),
    }
}

fn cmd_sig(a: SigArgs) -> Result<String> {
    let file = fs::File::open(&a.path)?;
    let path = PiecewiseLinearPath::from_csv(io::BufReader::new(file))?;
    let sig = match a.oracle {
        Some(steps) => oracle_signature(&path, a.depth, a.from, a.to, steps)?,
        None => path_signature(&path, a.depth, a.from, a.to)?,
    };
    Ok(pretty(&signature_to_json(&sig)))
}

fn load_truncated(arg: &str) -> Result<AnyTruncated> {
    AnyTruncated::from_json(&load_json(arg)?)
}

fn cmd_algebra(op: AlgebraOp) -> Result<String> {
    let result = match op {
        AlgebraOp::Mul { left, right } => match (load_truncated(&left)?, load_truncated(&right)?) {
            (AnyTruncated::Rational(x), AnyTruncated::Rational(y)) => {
                AnyTruncated::Rational(x.concat_product(&y)?)
            }
            (AnyTruncated::Real(x), AnyTruncated::Real(y)) => {
                AnyTruncated::Real(x.concat_product(&y)?)
            }
            (AnyTruncated::Complex(x), AnyTruncated::Complex(y)) => {
                AnyTruncated::Complex(x.concat_product(&y)?)
            }
            (x, y) => {
                return Err(Error::FieldMismatch {
                    left: x.field(),
                    right: y.field(),
                })
            }
        },
        AlgebraOp::Inv { input } => match load_truncated(&input)? {
            AnyTruncated::Rational(x) => AnyTruncated::Rational(x.inverse()?),
            AnyTruncated::Real(x) => AnyTruncated::Real(x.inverse()?),
            AnyTruncated::Complex(x) => AnyTruncated::Complex(x.inverse()?),
        },
        AlgebraOp::Project { input, level } => match load_truncated(&input)? {
            AnyTruncated::Rational(x) => AnyTruncated::Rational(x.project(level)?),
            AnyTruncated::Real(x) => AnyTruncated::Real(x.project(level)?),
            AnyTruncated::Complex(x) => AnyTruncated::Complex(x.project(level)?),
        },
    };
    Ok(pretty(&result.to_json()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TruncatedTensor;
    use crate::json::truncated_to_json;

    fn unit_json(d: usize, depth: usize) -> Result<Value> {
        Ok(truncated_to_json(&TruncatedTensor::<Rational>::unit(
            d, depth,
        )?))
    }

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("tenfac").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn dim() {
        assert_eq!(
            run_str(&["dim", "2", "2"]),
            (0, "7\n".into(), String::new())
        );
        assert_eq!(run_str(&["dim", "1", "3"]).1, "4\n");
        assert_eq!(run_str(&["dim", "0", "3"]).0, 1);
    }

    #[test]
    fn rank_inline() {
        let b = r#"{"shape":[2,2],"field":"rational","coeffs":["1","0","1","1"]}"#;
        assert_eq!(run_str(&["rank", b, "--method", "rref"]).1, "2\n");
        assert_eq!(run_str(&["rank", b, "--method", "svd"]).1, "2\n");
        let c = r#"{"shape":[1,1],"field":"complex","coeffs":[[1,0]]}"#;
        assert_eq!(run_str(&["rank", c]).0, 1);
    }

    #[test]
    fn factor_and_expand() {
        let (code, out, _) = run_str(&["factor", "a1@b1 + a1@b2 + a2@b1 + a2@b2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "(a1 + a2)@(b1 + b2)\nterms: 1\n");
        let (_, out, _) = run_str(&["expand", "(a1 + a2)@b1"]);
        assert_eq!(out, "a1@b1 + a2@b1\n");
        let (_, json_out, _) = run_str(&["factor", "a1@b1 + a2@b2", "--json"]);
        let (code, again, _) = run_str(&["expand", json_out.trim()]);
        assert_eq!((code, again.as_str()), (0, "a1@b1 + a2@b2\n"));
        assert_eq!(
            run_str(&["factor", "a1@b1", "--method", "als", "--field", "rational"]).0,
            1
        );
    }

    #[test]
    fn algebra_inverse_errors() {
        let x = r#"{"d":1,"N":1,"field":"rational","levels":[["0"],["1"]]}"#;
        let (code, _, err) = run_str(&["algebra", "inv", x]);
        assert_eq!(code, 1);
        assert!(err.contains("level-0 scalar is zero"));
        let unit = unit_json(2, 2).unwrap().to_string();
        let (code, out, _) = run_str(&["algebra", "inv", &unit]);
        assert_eq!(code, 0);
        assert_eq!(
            serde_json::from_str::<Value>(&out).unwrap(),
            unit_json(2, 2).unwrap()
        );
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["frobnicate"]).0, 1);
        assert_eq!(run_str(&[]).0, 1);
        let (code, out, _) = run_str(&["--version"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("tenfac "));
        assert_eq!(run_str(&["factor", "--help"]).0, 0);
    }
}
