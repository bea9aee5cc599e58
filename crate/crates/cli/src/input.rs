use std::fs;

use bracketforge::{
    remark4_op, AlgebraLoadError, AlgebraSpec, BiDiffOp, BilinearOp, BilinearWire, DiffOp, PolyAlgebra,
};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::report::InputDigest;

pub const BUILTIN: &str = "builtin:";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse(_) => "parse",
            CliError::Invariant(_) => "invariant",
        }
    }

    fn parse(source: &str, msg: impl std::fmt::Display) -> Self {
        CliError::Parse(format!("{source}: {msg}"))
    }
}

impl From<(&str, AlgebraLoadError)> for CliError {
    fn from((source, e): (&str, AlgebraLoadError)) -> Self {
        match e {
            AlgebraLoadError::Parse(m) => CliError::parse(source, m),
            AlgebraLoadError::Invalid(e) => CliError::Invariant(format!("{source}: {e}")),
        }
    }
}

/// File contents plus the digest recorded in the report.
pub struct Loaded {
    pub text: String,
    pub digest: InputDigest,
}

pub fn read(path: &str) -> Result<Loaded, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let sha = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::parse(path, "file is not valid UTF-8"))?;
    Ok(Loaded { text, digest: InputDigest { source: path.into(), sha256: Some(sha) } })
}

fn builtin_digest(source: &str) -> InputDigest {
    InputDigest { source: source.into(), sha256: None }
}

fn json(source: &str, text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(source, e))
}

pub fn algebra_spec(arg: &str) -> Result<(AlgebraSpec, InputDigest), CliError> {
    if let Some(name) = arg.strip_prefix(BUILTIN) {
        let spec = AlgebraSpec::builtin(name).ok_or_else(|| CliError::parse(arg, "unknown built-in algebra"))?;
        return Ok((spec, builtin_digest(arg)));
    }
    let file = read(arg)?;
    let spec = AlgebraSpec::from_json(&file.text).map_err(|e| CliError::from((arg, e)))?;
    Ok((spec, file.digest))
}

fn same_structure(a: &AlgebraSpec, b: &AlgebraSpec) -> bool {
    a.dim() == b.dim() && a.unit() == b.unit() && a.structure_entries().eq(b.structure_entries())
}

/// `builtin:commutator`, `builtin:anticommutator`, `builtin:zero`, or a
/// bracket JSON file whose optional algebra must match `algebra`.
pub fn bracket<'a>(arg: &str, algebra: &'a AlgebraSpec) -> Result<(BilinearOp<'a>, InputDigest), CliError> {
    if let Some(name) = arg.strip_prefix(BUILTIN) {
        let op = match name {
            "commutator" => BilinearOp::commutator(algebra),
            "anticommutator" => BilinearOp::anticommutator(algebra),
            "zero" => BilinearOp::zero(algebra),
            _ => return Err(CliError::parse(arg, "unknown built-in bracket")),
        };
        return Ok((op, builtin_digest(arg)));
    }
    let file = read(arg)?;
    let wire = BilinearWire::from_json(&file.text).map_err(|e| CliError::from((arg, e)))?;
    if let Some(r) = wire.algebra.clone() {
        let own = r.resolve().map_err(|e| CliError::from((arg, e)))?;
        if !same_structure(&own, algebra) {
            return Err(CliError::parse(arg, "bracket is declared over a different algebra"));
        }
    }
    let op = wire.to_op(algebra).map_err(|e| CliError::from((arg, e)))?;
    Ok((op, file.digest))
}

pub fn poly_algebra(arg: &str) -> Result<(PolyAlgebra, InputDigest), CliError> {
    if let Some(name) = arg.strip_prefix(BUILTIN) {
        let alg = match name {
            "xy" => PolyAlgebra::new(["x", "y"]),
            "xyz" => PolyAlgebra::new(["x", "y", "z"]),
            "t" => PolyAlgebra::new(["t"]),
            "dual-xy" => Ok(remark4_op(1).0),
            _ => return Err(CliError::parse(arg, "unknown built-in polynomial algebra")),
        }
        .expect("static algebra");
        return Ok((alg, builtin_digest(arg)));
    }
    let file = read(arg)?;
    let alg = PolyAlgebra::from_json_value(json(arg, &file.text)?).map_err(|e| CliError::parse(arg, e))?;
    Ok((alg, file.digest))
}

pub enum Operator {
    Linear(DiffOp),
    Bilinear(BiDiffOp),
}

/// `loday:N` or a JSON array of `{"d": ..}` (linear) or `{"d1","d2": ..}`
/// (bilinear) terms.
pub fn operator(arg: &str, alg: &PolyAlgebra) -> Result<(Operator, InputDigest), CliError> {
    if let Some(n) = arg.strip_prefix("loday:") {
        let n: u32 = n.parse().map_err(|_| CliError::parse(arg, "expected loday:N with N a non-negative integer"))?;
        let (own, op) = remark4_op(n);
        if own != *alg {
            return Err(CliError::parse(arg, format!("operator lives on {own}, not on {alg}")));
        }
        return Ok((Operator::Bilinear(op), builtin_digest(arg)));
    }
    let file = read(arg)?;
    let value = json(arg, &file.text)?;
    let bilinear = value
        .as_array()
        .and_then(|a| a.first())
        .and_then(Value::as_object)
        .is_some_and(|t| t.contains_key("d1") || t.contains_key("d2"));
    let op = if bilinear {
        Operator::Bilinear(BiDiffOp::from_json_value(alg, value).map_err(|e| CliError::parse(arg, e))?)
    } else {
        Operator::Linear(DiffOp::from_json_value(alg, value).map_err(|e| CliError::parse(arg, e))?)
    };
    Ok((op, file.digest))
}

/// The `jacobi` input: an algebra plus either `lambda`/`gamma` or a
/// `bracket` given as bidifferential terms.
pub enum JacobiInput {
    Pair(bracketforge::JacobiPair),
    Bracket(BiDiffOp),
}

pub fn jacobi_input(arg: &str) -> Result<(PolyAlgebra, JacobiInput, InputDigest), CliError> {
    let file = read(arg)?;
    let mut value = json(arg, &file.text)?;
    let obj = value.as_object_mut().ok_or_else(|| CliError::parse(arg, "expected a JSON object"))?;
    let alg_value = obj.remove("algebra").ok_or_else(|| CliError::parse(arg, "missing \"algebra\""))?;
    let alg = PolyAlgebra::from_json_value(alg_value).map_err(|e| CliError::parse(arg, e))?;
    if alg.has_nilpotents() {
        return Err(CliError::Invariant(format!(
            "{arg}: derivations are not well defined on {alg}; use an algebra without nilpotent variables"
        )));
    }
    let input = if let Some(b) = obj.remove("bracket") {
        if !obj.is_empty() {
            return Err(CliError::parse(arg, "\"bracket\" cannot be combined with \"lambda\"/\"gamma\""));
        }
        JacobiInput::Bracket(BiDiffOp::from_json_value(&alg, b).map_err(|e| CliError::parse(arg, e))?)
    } else {
        let pair = bracketforge::JacobiPair::from_json_value(&alg, value).map_err(|e| CliError::parse(arg, e))?;
        JacobiInput::Pair(pair)
    };
    Ok((alg, input, file.digest))
}
