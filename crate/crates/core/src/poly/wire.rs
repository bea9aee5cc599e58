//! JSON representations of polynomial algebras and operators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{BiDiffOp, DiffOp, Monomial, PolyAlgebra, PolyError};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyAlgebraWire {
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub nilpotency: BTreeMap<String, u32>,
}

/// A multi-index: exponents in variable order, or a map from variable name
/// to exponent with absent variables at zero.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MultiIndexWire {
    Exponents(Vec<u32>),
    Named(BTreeMap<String, u32>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffTermWire {
    pub d: MultiIndexWire,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiDiffTermWire {
    pub d1: MultiIndexWire,
    pub d2: MultiIndexWire,
    pub coeff: String,
}

fn format_err(e: impl std::fmt::Display) -> PolyError {
    PolyError::Format(e.to_string())
}

impl PolyAlgebraWire {
    pub fn into_algebra(self) -> Result<PolyAlgebra, PolyError> {
        let mut alg = PolyAlgebra::new(self.vars)?;
        for (var, order) in self.nilpotency {
            alg = alg.with_nilpotent(&var, order)?;
        }
        Ok(alg)
    }
}

impl From<&PolyAlgebra> for PolyAlgebraWire {
    fn from(alg: &PolyAlgebra) -> Self {
        Self {
            vars: alg.var_names().to_vec(),
            nilpotency: (0..alg.nvars())
                .filter_map(|i| alg.nilpotency(i).map(|n| (alg.var_names()[i].clone(), n)))
                .collect(),
        }
    }
}

impl PolyAlgebra {
    pub fn from_json_value(value: Value) -> Result<Self, PolyError> {
        serde_json::from_value::<PolyAlgebraWire>(value).map_err(format_err)?.into_algebra()
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(PolyAlgebraWire::from(self)).expect("serializable")
    }
}

fn multi_index(alg: &PolyAlgebra, d: MultiIndexWire) -> Result<Monomial, PolyError> {
    let d = match d {
        MultiIndexWire::Exponents(d) => d,
        MultiIndexWire::Named(m) => {
            let mut d = vec![0; alg.nvars()];
            for (var, e) in m {
                let i = alg.var_index(&var).ok_or(PolyError::UnknownVariable(var))?;
                d[i] = e;
            }
            d
        }
    };
    if d.len() != alg.nvars() {
        return Err(PolyError::Format(format!(
            "multi-index {d:?} has length {}, algebra has {} variables",
            d.len(),
            alg.nvars()
        )));
    }
    Ok(Monomial::new(d))
}

impl DiffOp {
    pub fn from_json_value(alg: &PolyAlgebra, value: Value) -> Result<Self, PolyError> {
        let terms: Vec<DiffTermWire> = serde_json::from_value(value).map_err(format_err)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            out.push((multi_index(alg, t.d)?, alg.parse(&t.coeff)?));
        }
        Ok(DiffOp::from_terms(alg.nvars(), out))
    }

    pub fn to_json_value(&self, alg: &PolyAlgebra) -> Value {
        let terms: Vec<DiffTermWire> = self
            .terms()
            .map(|(a, c)| DiffTermWire { d: MultiIndexWire::Exponents(a.exps().to_vec()), coeff: alg.format(c) })
            .collect();
        serde_json::to_value(terms).expect("serializable")
    }
}

impl BiDiffOp {
    pub fn from_json_value(alg: &PolyAlgebra, value: Value) -> Result<Self, PolyError> {
        let terms: Vec<BiDiffTermWire> = serde_json::from_value(value).map_err(format_err)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            out.push(((multi_index(alg, t.d1)?, multi_index(alg, t.d2)?), alg.parse(&t.coeff)?));
        }
        Ok(BiDiffOp::from_terms(alg.nvars(), out))
    }

    pub fn to_json_value(&self, alg: &PolyAlgebra) -> Value {
        let terms: Vec<BiDiffTermWire> = self
            .terms()
            .map(|(a, b, c)| BiDiffTermWire {
                d1: MultiIndexWire::Exponents(a.exps().to_vec()),
                d2: MultiIndexWire::Exponents(b.exps().to_vec()),
                coeff: alg.format(c),
            })
            .collect();
        serde_json::to_value(terms).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::remark4_op;
    use serde_json::json;

    #[test]
    fn algebra_round_trip() {
        let v = json!({"vars": ["x", "y"], "nilpotency": {"x": 2}});
        let alg = PolyAlgebra::from_json_value(v.clone()).unwrap();
        assert_eq!(alg.nilpotency(0), Some(2));
        assert_eq!(alg.to_json_value(), v);
        assert!(PolyAlgebra::from_json_value(json!({"vars": ["x"], "nilpotency": {"x": 1}})).is_err());
        assert!(PolyAlgebra::from_json_value(json!({"variables": ["x"]})).is_err());
    }

    #[test]
    fn operator_round_trip() {
        let (alg, op) = remark4_op(2);
        let v = op.to_json_value(&alg);
        assert_eq!(v, json!([{"d1": [0, 0], "d2": [0, 2], "coeff": "x"}]));
        assert_eq!(BiDiffOp::from_json_value(&alg, v).unwrap(), op);
        let d = DiffOp::from_json_value(&alg, json!([{"d": [1, 0], "coeff": "3/2 y"}])).unwrap();
        assert_eq!(DiffOp::from_json_value(&alg, d.to_json_value(&alg)).unwrap(), d);
        assert!(DiffOp::from_json_value(&alg, json!([{"d": [1], "coeff": "1"}])).is_err());
        let named = DiffOp::from_json_value(&alg, json!([{"d": {"x": 1}, "coeff": "3/2 y"}])).unwrap();
        assert_eq!(named, d);
        assert!(DiffOp::from_json_value(&alg, json!([{"d": {"w": 1}, "coeff": "1"}])).is_err());
        assert!(matches!(
            DiffOp::from_json_value(&alg, json!([{"d": [1, 0], "coeff": "q"}])),
            Err(PolyError::Parse { .. })
        ));
    }
}
