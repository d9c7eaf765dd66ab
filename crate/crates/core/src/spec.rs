//! JSON algebra specifications.
//!
//! ```json
//! {"type":"sl","n":3,"nilpotent":{"partition":[2,1]},"s":"default"}
//! {"type":"custom","dim":3,"labels":["e","h","f"],
//!  "brackets":[[0,1,["-2","0","0"]], ...],
//!  "form":[["0","0","1"], ...],
//!  "triple":{"e":[...],"h":[...],"f":[...]},"s":"default"}
//! ```
//!
//! Basis indices are 0-based. Rationals are strings `"p/q"`; plain JSON
//! integers are accepted too. A bracket `[i,j,v]` implies `[j,i,-v]`; listing
//! both with inconsistent values is an error.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::lie::{build_sl, sl2_triple_from_partition, LieAlgebra, Sl2Triple};
use crate::linalg::Matrix;
use crate::rational::{parse_q, zeros, Q, Vector};
use crate::setup::{graded_setup, GradedSetup};

/// Choice of `s ∈ g_d`.
#[derive(Clone, Debug, PartialEq)]
pub enum SChoice {
    Default,
    Given(Vector),
}

/// A parsed custom algebra: structure constants, form and sl2-triple.
#[derive(Clone, Debug, PartialEq)]
pub struct CustomSpec {
    pub labels: Vec<String>,
    /// `brackets[i][j] = [b_i, b_j]`
    pub brackets: Vec<Vec<Vector>>,
    pub form: Vec<Vector>,
    pub e: Vector,
    pub h: Vector,
    pub f: Vector,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraKind {
    Sl { n: usize, partition: Vec<usize> },
    Custom(CustomSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub kind: AlgebraKind,
    pub s: SChoice,
}

fn field<'a>(obj: &'a Value, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::parse(join(path, key), "missing"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::parse(path, "expected a non-negative integer"))
}

fn as_rational(v: &Value, path: &str) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s).map_err(|_| Error::parse(path, format!("`{s}` is not a rational \"p/q\""))),
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap().into())),
        _ => Err(Error::parse(path, "expected a rational string \"p/q\"")),
    }
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

fn as_vector(v: &Value, path: &str, dim: Option<usize>) -> Result<Vector> {
    let arr = as_array(v, path)?;
    if let Some(d) = dim {
        if arr.len() != d {
            return Err(Error::parse(path, format!("expected {d} entries, found {}", arr.len())));
        }
    }
    arr.iter().enumerate().map(|(i, x)| as_rational(x, &format!("{path}[{i}]"))).collect()
}

/// Parses `"1,0,-1/2"` or a JSON array of rationals.
pub fn parse_vector(text: &str) -> Result<Vector> {
    let t = text.trim();
    if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| Error::parse("vector", e.to_string()))?;
        return as_vector(&v, "vector", None);
    }
    t.split(',')
        .enumerate()
        .map(|(i, s)| parse_q(s).map_err(|_| Error::parse(format!("vector[{i}]"), format!("`{}` is not rational", s.trim()))))
        .collect()
}

fn parse_s(root: &Value) -> Result<SChoice> {
    match root.get("s") {
        None | Some(Value::Null) => Ok(SChoice::Default),
        Some(Value::String(s)) if s == "default" => Ok(SChoice::Default),
        Some(v @ Value::Array(_)) => Ok(SChoice::Given(as_vector(v, "s", None)?)),
        Some(_) => Err(Error::parse("s", "expected \"default\" or a vector of rationals")),
    }
}

fn parse_custom(root: &Value) -> Result<CustomSpec> {
    let dim = as_usize(field(root, "", "dim")?, "dim")?;
    if dim == 0 {
        return Err(Error::parse("dim", "must be positive"));
    }
    let labels = match root.get("labels") {
        None => (0..dim).map(|i| format!("b{i}")).collect(),
        Some(v) => {
            let arr = as_array(v, "labels")?;
            if arr.len() != dim {
                return Err(Error::parse("labels", format!("expected {dim} labels")));
            }
            arr.iter()
                .enumerate()
                .map(|(i, l)| l.as_str().map(String::from).ok_or_else(|| Error::parse(format!("labels[{i}]"), "expected a string")))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let mut brackets: Vec<Vec<Option<Vector>>> = vec![vec![None; dim]; dim];
    for (idx, entry) in as_array(field(root, "", "brackets")?, "brackets")?.iter().enumerate() {
        let path = format!("brackets[{idx}]");
        let parts = as_array(entry, &path)?;
        if parts.len() != 3 {
            return Err(Error::parse(path, "expected [i, j, [coefficients]]"));
        }
        let i = as_usize(&parts[0], &format!("{path}[0]"))?;
        let j = as_usize(&parts[1], &format!("{path}[1]"))?;
        if i >= dim || j >= dim {
            return Err(Error::parse(path, format!("index out of range for dim {dim}")));
        }
        let v = as_vector(&parts[2], &format!("{path}[2]"), Some(dim))?;
        let neg: Vector = v.iter().map(|c| -c).collect();
        for (a, b, val) in [(i, j, v.clone()), (j, i, neg)] {
            match &brackets[a][b] {
                Some(old) if *old != val => {
                    return Err(Error::parse(path, format!("conflicts with an earlier entry for [{a},{b}]")));
                }
                _ => brackets[a][b] = Some(val),
            }
        }
    }
    let brackets = brackets.into_iter().map(|r| r.into_iter().map(|v| v.unwrap_or_else(|| zeros(dim))).collect()).collect();
    let form_rows = as_array(field(root, "", "form")?, "form")?;
    if form_rows.len() != dim {
        return Err(Error::parse("form", format!("expected {dim} rows")));
    }
    let form = form_rows
        .iter()
        .enumerate()
        .map(|(i, r)| as_vector(r, &format!("form[{i}]"), Some(dim)))
        .collect::<Result<Vec<_>>>()?;
    let triple = field(root, "", "triple")?;
    let get = |k: &str| as_vector(field(triple, "triple", k)?, &format!("triple.{k}"), Some(dim));
    Ok(CustomSpec { labels, brackets, form, e: get("e")?, h: get("h")?, f: get("f")? })
}

/// Parses a JSON algebra specification.
pub fn parse_spec(text: &str) -> Result<AlgebraSpec> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::parse("<root>", e.to_string()))?;
    if !root.is_object() {
        return Err(Error::parse("<root>", "expected a JSON object"));
    }
    let ty = field(&root, "", "type")?.as_str().ok_or_else(|| Error::parse("type", "expected a string"))?;
    let kind = match ty {
        "sl" => {
            let n = as_usize(field(&root, "", "n")?, "n")?;
            let nil = field(&root, "", "nilpotent")?;
            let parts = as_array(field(nil, "nilpotent", "partition")?, "nilpotent.partition")?;
            let partition = parts
                .iter()
                .enumerate()
                .map(|(i, p)| as_usize(p, &format!("nilpotent.partition[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            if partition.iter().sum::<usize>() != n || partition.contains(&0) {
                return Err(Error::parse("nilpotent.partition", format!("must be a partition of {n}")));
            }
            AlgebraKind::Sl { n, partition }
        }
        "custom" => AlgebraKind::Custom(parse_custom(&root)?),
        other => return Err(Error::parse("type", format!("unknown type `{other}`, expected \"sl\" or \"custom\""))),
    };
    Ok(AlgebraSpec { kind, s: parse_s(&root)? })
}

/// Reads and parses a specification file.
pub fn load_spec(path: &std::path::Path) -> Result<AlgebraSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

/// The Lie algebra of a custom specification, after validation.
pub fn build_from_spec(spec: &CustomSpec) -> Result<LieAlgebra> {
    LieAlgebra::new(spec.labels.clone(), spec.brackets.clone(), Matrix::from_rows(&spec.form))
}

impl AlgebraSpec {
    pub fn algebra_and_triple(&self) -> Result<(LieAlgebra, Sl2Triple)> {
        match &self.kind {
            AlgebraKind::Sl { n, partition } => {
                let alg = build_sl(*n)?;
                let t = sl2_triple_from_partition(&alg, partition)?;
                Ok((alg, t))
            }
            AlgebraKind::Custom(c) => {
                let alg = build_from_spec(c)?;
                let t = Sl2Triple::new(&alg, c.e.clone(), c.h.clone(), c.f.clone())?;
                Ok((alg, t))
            }
        }
    }

    /// Builds the graded setup described by the specification.
    pub fn build(&self) -> Result<GradedSetup> {
        let (alg, t) = self.algebra_and_triple()?;
        if let SChoice::Given(v) = &self.s {
            if v.len() != alg.dim() {
                return Err(Error::parse("s", format!("expected {} entries, found {}", alg.dim(), v.len())));
            }
        }
        let s = match &self.s {
            SChoice::Default => None,
            SChoice::Given(v) => Some(v.clone()),
        };
        graded_setup(alg, t, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SL2: &str = r#"{"type":"custom","dim":3,"labels":["E12","E21","H1"],
        "brackets":[[0,1,["0","0","1"]],[2,0,["2","0","0"]],[2,1,["0","-2","0"]]],
        "form":[["0","1","0"],["1","0","0"],["0","0","2"]],
        "triple":{"e":["1","0","0"],"h":["0","0","1"],"f":["0","1","0"]}}"#;

    #[test]
    fn sl_spec() {
        let s = parse_spec(r#"{"type":"sl","n":3,"nilpotent":{"partition":[2,1]},"s":"default"}"#).unwrap();
        assert_eq!(s.kind, AlgebraKind::Sl { n: 3, partition: vec![2, 1] });
        assert_eq!(s.s, SChoice::Default);
        assert_eq!(s.build().unwrap().jf_len(), 4);
    }

    #[test]
    fn custom_sl2_round_trip() {
        let spec = parse_spec(SL2).unwrap();
        let AlgebraKind::Custom(c) = &spec.kind else { panic!() };
        let alg = build_from_spec(c).unwrap();
        let reference = build_sl(2).unwrap();
        assert_eq!(alg.labels(), reference.labels());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(alg.structure_constants(i, j), reference.structure_constants(i, j));
            }
        }
        assert_eq!(alg.form_matrix(), reference.form_matrix());
        assert_eq!(spec.build().unwrap().jf_len(), 1);
    }

    #[test]
    fn inconsistent_antisymmetry_rejected() {
        let bad = SL2.replace(r#"[2,0,["2","0","0"]]"#, r#"[2,0,["2","0","0"]],[0,2,["2","0","0"]]"#);
        let err = parse_spec(&bad).unwrap_err();
        assert!(matches!(err, Error::Parse { ref field, .. } if field == "brackets[2]"), "{err}");
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"type":"sl","nilpotent":{"partition":[2]}}"#, "n"),
            (r#"{"type":"sl","n":2,"nilpotent":{}}"#, "nilpotent.partition"),
            (r#"{"type":"sl","n":3,"nilpotent":{"partition":[2]}}"#, "nilpotent.partition"),
            (r#"{"type":"so","n":3}"#, "type"),
            (r#"{"type":"sl","n":2,"nilpotent":{"partition":[2]},"s":7}"#, "s"),
        ];
        for (text, want) in cases {
            match parse_spec(text) {
                Err(Error::Parse { field, .. }) => assert_eq!(field, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        let bad_q = SL2.replace(r#""triple":{"e":["1""#, r#""triple":{"e":["x""#);
        match parse_spec(&bad_q) {
            Err(Error::Parse { field, .. }) => assert_eq!(field, "triple.e[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1, -1/2,0").unwrap(), vec![Q::from_integer(1.into()), Q::new((-1).into(), 2.into()), Q::from_integer(0.into())]);
        assert_eq!(parse_vector(r#"["1/3", 2]"#).unwrap().len(), 2);
        assert!(parse_vector("1,a").is_err());
    }
}
