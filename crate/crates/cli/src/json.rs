//! JSON encodings. Rationals are strings (`"p/q"` or `"n"`), never floats.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use bipolar_core::cumulants::CumulantFamily;
use bipolar_core::group_model::{GroupAlgebraElement, GroupModel, Mat2GA};
use bipolar_core::partitions::{parse_word, word_index_string, Letter};
use bipolar_core::recursions::CircularParams;
use bipolar_core::{DiagElement, LinearMapD, MultilinearMapD, Poly, RatFun, Rational, Var};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    t.parse::<Rational>().map_err(|e| anyhow!("malformed rational {s:?}: {e}"))
}

pub fn rat_str(x: &Rational) -> String {
    x.to_string()
}

pub fn diag_json(b: &DiagElement<Rational>) -> Value {
    Value::Array(b.entries().iter().map(|x| Value::String(rat_str(x))).collect())
}

pub fn map_json(m: &LinearMapD<Rational>) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|row| Value::Array(row.iter().map(|x| Value::String(rat_str(x))).collect()))
            .collect(),
    )
}

/// `"1,0"` or `"1/2, 3"` as a diagonal element.
pub fn parse_diag(s: &str) -> Result<DiagElement<Rational>> {
    let entries = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
    if entries.is_empty() {
        bail!("empty coefficient");
    }
    Ok(DiagElement::new(entries))
}

pub fn parse_word_arg(s: &str) -> Result<Vec<Letter>> {
    parse_word(s).ok_or_else(|| anyhow!("malformed word {s:?}: use letters 1 and * (or 2)"))
}

/// Expanded monomial list `[[coeff, {var: exp, ...}], ...]`, highest term first.
pub fn poly_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .rev()
            .map(|(m, c)| {
                let exps: serde_json::Map<String, Value> =
                    m.exponents().map(|(v, e)| (v.name().to_string(), Value::from(e))).collect();
                json!([rat_str(c), exps])
            })
            .collect(),
    )
}

/// A rational function as its display string plus numerator and denominator term lists.
pub fn ratfun_json(f: &RatFun) -> Value {
    json!({
        "expr": f.to_string(),
        "num": poly_json(f.numerator()),
        "den": poly_json(&f.denominator()),
    })
}

pub fn point_json(point: &[(Var, Rational)]) -> Value {
    Value::Object(point.iter().map(|(v, x)| (v.name().to_string(), Value::String(rat_str(x)))).collect())
}

/// `{"q": "1/2", "r": [["1/2","0"],["1/2","1"]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ParamsJson {
    pub q: String,
    pub r: [[String; 2]; 2],
}

impl ParamsJson {
    pub fn from_params(p: &CircularParams<Rational>) -> Self {
        ParamsJson {
            q: rat_str(p.q()),
            r: p.r().clone().map(|row| row.map(|x| rat_str(&x))),
        }
    }

    pub fn to_params(&self) -> Result<CircularParams<Rational>> {
        let q = parse_rational(&self.q)?;
        let mut r: [[Rational; 2]; 2] = Default::default();
        for (i, row) in self.r.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                r[i][j] = parse_rational(x)?;
            }
        }
        Ok(CircularParams::new(q, r)?)
    }
}

/// `{"d": 2, "maps": {"12": [[...]], "21": [[...]]}}`; keys are cumulant index words.
/// Linear maps are `d×d` matrices; an order-`n` map is a flat tensor of length `d^(n+1)`
/// in output-major order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub d: usize,
    pub maps: BTreeMap<String, Value>,
}

impl FamilyJson {
    pub fn from_family(fam: &CumulantFamily<Rational>) -> Self {
        let maps = fam
            .maps()
            .map(|(w, m)| {
                let v = match m.as_linear() {
                    Some(l) => map_json(&l),
                    None => Value::Array(m.tensor().iter().map(|x| Value::String(rat_str(x))).collect()),
                };
                (word_index_string(w), v)
            })
            .collect();
        FamilyJson { d: fam.dim(), maps }
    }

    pub fn to_family(&self) -> Result<CumulantFamily<Rational>> {
        let mut fam = CumulantFamily::new(self.d);
        for (key, v) in &self.maps {
            let word = parse_word_arg(key)?;
            let order = word.len() - 1;
            let map = match v {
                Value::Array(rows) if rows.first().is_some_and(Value::is_array) => {
                    let rows = rows
                        .iter()
                        .map(|row| strings(row).and_then(|xs| xs.iter().map(|x| parse_rational(x)).collect()))
                        .collect::<Result<Vec<Vec<Rational>>>>()?;
                    MultilinearMapD::from_linear(&LinearMapD::new(rows)?)
                }
                flat => {
                    let xs = strings(flat)?.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>()?;
                    MultilinearMapD::new(self.d, order, xs)?
                }
            };
            fam.insert(word, map).with_context(|| format!("cumulant map {key}"))?;
        }
        Ok(fam)
    }
}

fn strings(v: &Value) -> Result<Vec<String>> {
    let arr = v.as_array().ok_or_else(|| anyhow!("expected an array of rational strings"))?;
    arr.iter()
        .map(|x| x.as_str().map(str::to_owned).ok_or_else(|| anyhow!("rationals must be strings, got {x}")))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub g: Vec<i64>,
    pub c: String,
}

/// A group-algebra element over `ℤ^k`: `{"k": 2, "terms": [{"g": [1, 0], "c": "1/2"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupElementJson {
    pub k: usize,
    pub terms: Vec<TermJson>,
}

impl GroupElementJson {
    pub fn from_element(x: &GroupAlgebraElement<Rational>) -> Self {
        GroupElementJson {
            k: x.rank(),
            terms: x.terms().map(|(g, c)| TermJson { g: g.clone(), c: rat_str(c) }).collect(),
        }
    }

    pub fn to_element(&self) -> Result<GroupAlgebraElement<Rational>> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.g.clone(), parse_rational(&t.c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupAlgebraElement::from_terms(self.k, terms)?)
    }
}

/// A unitary in `M₂(ℂ[ℤ^k])`: `{"u": [[x11, x12], [x21, x22]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct UnitaryJson {
    pub u: [[GroupElementJson; 2]; 2],
}

impl UnitaryJson {
    pub fn from_matrix(u: &Mat2GA<Rational>) -> Self {
        let e = |i, j| GroupElementJson::from_element(u.entry(i, j));
        UnitaryJson {
            u: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn to_model(&self) -> Result<GroupModel<Rational>> {
        let mut entries: Vec<GroupAlgebraElement<Rational>> = Vec::with_capacity(4);
        for row in &self.u {
            for x in row {
                entries.push(x.to_element()?);
            }
        }
        let mut it = entries.into_iter();
        let mut next = || it.next().expect("four entries");
        let m = Mat2GA::new([[next(), next()], [next(), next()]])?;
        if !m.is_unitary() {
            bail!("matrix is not unitary");
        }
        Ok(GroupModel::new(m))
    }
}

/// Whatever a `--params` argument can hold.
pub enum ModelInput {
    Circular(CircularParams<Rational>),
    Family(CumulantFamily<Rational>),
    Unitary(GroupModel<Rational>),
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn read_json_arg(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {arg}"))
}

/// Dispatches on the top-level keys: `q`/`r`, `d`/`maps`, or `u`.
pub fn parse_model(v: &Value) -> Result<ModelInput> {
    let obj = v.as_object().ok_or_else(|| anyhow!("expected a JSON object"))?;
    if obj.contains_key("maps") || obj.contains_key("d") {
        let f: FamilyJson = serde_json::from_value(v.clone())?;
        Ok(ModelInput::Family(f.to_family()?))
    } else if obj.contains_key("u") {
        let u: UnitaryJson = serde_json::from_value(v.clone())?;
        Ok(ModelInput::Unitary(u.to_model()?))
    } else {
        Ok(ModelInput::Circular(parse_params_value(v)?))
    }
}

pub fn parse_params_value(v: &Value) -> Result<CircularParams<Rational>> {
    let p: ParamsJson = serde_json::from_value(v.clone()).context("params must be {\"q\": ..., \"r\": [[..],[..]]}")?;
    p.to_params()
}

pub fn parse_params(arg: &str) -> Result<CircularParams<Rational>> {
    parse_params_value(&read_json_arg(arg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bipolar_core::algebra::rat;
    use bipolar_core::group_model::ExampleUnitary;
    use bipolar_core::Error;

    #[test]
    fn params_round_trip() {
        let v = json!({"q": "1/2", "r": [["1/2", "0"], ["1/2", "1"]]});
        let p = parse_params_value(&v).unwrap();
        assert_eq!(p.q(), &rat(1, 2));
        assert_eq!(p.r()[1][1], rat(1, 1));
        assert_eq!(serde_json::to_value(ParamsJson::from_params(&p)).unwrap(), v);
    }

    #[test]
    fn params_errors() {
        let range = parse_params_value(&json!({"q": "3/2", "r": [["1", "0"], ["0", "1"]]})).unwrap_err();
        assert!(range.to_string().contains("strictly between"), "{range}");
        let neg = parse_params_value(&json!({"q": "1/3", "r": [["1", "-1"], ["0", "1"]]})).unwrap_err();
        assert_eq!(neg.downcast_ref::<Error>(), Some(&Error::NegativeEntry));
        let bad = parse_params_value(&json!({"q": "1/x", "r": [["1", "0"], ["0", "1"]]})).unwrap_err();
        assert!(bad.to_string().contains("malformed rational"));
        assert!(parse_params_value(&json!({"q": "1/2", "r": [["1", "0"], ["0", "1"]], "extra": 1})).is_err());
        assert!(parse_params_value(&json!({"q": 0.5, "r": [["1", "0"], ["0", "1"]]})).is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn family_round_trip() {
        let p = parse_params_value(&json!({"q": "1/2", "r": [["1/2", "0"], ["1/2", "1"]]})).unwrap();
        let fam = p.family().unwrap();
        let fj = FamilyJson::from_family(&fam);
        let text = serde_json::to_string(&fj).unwrap();
        assert_eq!(text, r#"{"d":2,"maps":{"12":[["1/2","0"],["1/2","1"]],"21":[["1/2","1/2"],["0","1"]]}}"#);
        let back: FamilyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_family().unwrap(), fam);
    }

    #[test]
    fn unitary_round_trip() {
        let m = GroupModel::<Rational>::example(ExampleUnitary::Torus);
        let uj = UnitaryJson::from_matrix(m.unitary());
        let v = serde_json::to_value(&uj).unwrap();
        let back = match parse_model(&v).unwrap() {
            ModelInput::Unitary(g) => g,
            _ => panic!("expected a unitary"),
        };
        assert_eq!(back.unitary(), m.unitary());
    }

    #[test]
    fn non_unitary_rejected() {
        let one = json!({"k": 1, "terms": [{"g": [0], "c": "1"}]});
        let zero = json!({"k": 1, "terms": []});
        let v = json!({"u": [[one.clone(), one.clone()], [zero, one]]});
        assert!(parse_model(&v).is_err());
    }

    #[test]
    fn poly_terms() {
        let p = &Poly::var(Var::Q) - &Poly::constant(rat(1, 2));
        assert_eq!(poly_json(&p), json!([["1", {"q": 1}], ["-1/2", {}]]));
    }

    #[test]
    fn diag_parsing() {
        assert_eq!(parse_diag("1/2, 3").unwrap(), DiagElement::new(vec![rat(1, 2), rat(3, 1)]));
        assert!(parse_diag("1,,2").is_err());
    }
}
