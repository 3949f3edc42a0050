//! JSON form of generalized numbers and the custom coefficient-rule
//! file format.
//!
//! A number serializes as
//! `{"terms":[{"exp":"1/2","re":3.0,"im":0.0}],"trunc":"32"}` with
//! `"trunc":"inf"` for exact expansions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exp::{Exp, Trunc};
use crate::gennum::{Coef, GenNum};
use crate::series::CoeffRule;

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: String,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct GenNumJson {
    terms: Vec<TermJson>,
    trunc: String,
}

pub fn gennum_to_json(x: &GenNum) -> serde_json::Value {
    let dto = GenNumJson {
        terms: x
            .terms()
            .iter()
            .map(|(e, c)| TermJson {
                exp: e.to_string(),
                re: c.re,
                im: c.im,
            })
            .collect(),
        trunc: x.trunc().to_string(),
    };
    serde_json::to_value(dto).expect("serializable")
}

pub fn gennum_to_json_string(x: &GenNum) -> String {
    gennum_to_json(x).to_string()
}

pub fn gennum_from_json_str(s: &str) -> Result<GenNum> {
    let dto: GenNumJson = serde_json::from_str(s).map_err(|e| Error::Parse {
        offset: e.column().saturating_sub(1),
        message: e.to_string(),
    })?;
    let mut terms = Vec::with_capacity(dto.terms.len());
    for t in dto.terms {
        let e: Exp = t.exp.parse().map_err(|m: String| Error::Parse {
            offset: 0,
            message: m,
        })?;
        terms.push((e, Coef::new(t.re, t.im)));
    }
    let trunc: Trunc = dto.trunc.parse().map_err(|m: String| Error::Parse {
        offset: 0,
        message: m,
    })?;
    GenNum::normalize(terms, trunc)
}

/// Custom coefficient rule file: parallel exponent/coefficient arrays,
/// giving `a_n = c_n * eps^(e_n)`.
#[derive(Serialize, Deserialize)]
pub struct CustomRuleJson {
    pub exponents: Vec<String>,
    pub coefficients: Vec<f64>,
}

pub fn rule_from_json_str(s: &str) -> Result<CoeffRule> {
    let dto: CustomRuleJson = serde_json::from_str(s).map_err(|e| Error::Parse {
        offset: e.column().saturating_sub(1),
        message: e.to_string(),
    })?;
    if dto.exponents.len() != dto.coefficients.len() {
        return Err(Error::DimensionMismatch {
            left: dto.exponents.len(),
            right: dto.coefficients.len(),
        });
    }
    let mut table = Vec::with_capacity(dto.exponents.len());
    for (e, c) in dto.exponents.iter().zip(&dto.coefficients) {
        let exp: Exp = e.parse().map_err(|m: String| Error::Parse {
            offset: 0,
            message: m,
        })?;
        table.push(GenNum::normalize(vec![(exp, Coef::new(*c, 0.0))], Trunc::Infinite)?);
    }
    Ok(CoeffRule::Table(table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_matches_documented_shape() {
        let x = GenNum::normalize(
            vec![(Exp::new(1, 2), Coef::new(3.0, 0.0))],
            Trunc::finite(32),
        )
        .unwrap();
        let v = gennum_to_json(&x);
        assert_eq!(
            v.to_string(),
            r#"{"terms":[{"exp":"1/2","im":0.0,"re":3.0}],"trunc":"32"}"#
        );
        let back = gennum_from_json_str(&v.to_string()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn inf_trunc_round_trips() {
        let x = GenNum::alpha_int(-2);
        let s = gennum_to_json_string(&x);
        assert!(s.contains("\"inf\""));
        assert_eq!(gennum_from_json_str(&s).unwrap(), x);
    }

    #[test]
    fn custom_rule_parses() {
        let rule = rule_from_json_str(
            r#"{"exponents":["0","1/2","1"],"coefficients":[1.0,2.0,3.0]}"#,
        )
        .unwrap();
        match rule {
            CoeffRule::Table(t) => {
                assert_eq!(t.len(), 3);
                assert_eq!(t[1].to_string(), "2*eps^1/2");
            }
            other => panic!("expected table, got {other:?}"),
        }
    }
}
