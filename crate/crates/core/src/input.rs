//! JSON input for groups and algebras.
//!
//! ```json
//! { "field": {"p": 2} | "Q",
//!   "kind": "group-table" | "group-named" | "algebra",
//!   "data": ... }
//! ```
//!
//! `group-table` data is a multiplication table (optionally wrapped as
//! `{"name": .., "table": ..}`), `group-named` data is a name such as
//! `"cyclic:4"`, and `algebra` data is
//! `{"name": .., "labels": [..], "dim": d, "constants": [[i, j, k, c], ..], "unit": [..]}`
//! where `e_i e_j` has coefficient `c` on `e_k`. Coefficients are integers
//! or strings `"a"`, `"a/b"`.

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::Value;

use crate::algebra::{AlgebraPresentation, GroupTable};
use crate::error::{Error, Result};
use crate::linalg::{Field, Scalar, Vector};

#[derive(Clone, Debug)]
pub enum InputObject {
    Group(GroupTable),
    Algebra(AlgebraPresentation),
}

#[derive(Clone, Debug)]
pub struct ParsedInput {
    /// The field named in the file or the override, if any.
    pub field: Option<Field>,
    pub object: InputObject,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    #[serde(default)]
    field: Option<RawField>,
    kind: String,
    data: Value,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawField {
    Prime { p: u32 },
    Name(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawGroup {
    Table(Vec<Vec<usize>>),
    Named {
        #[serde(default)]
        name: Option<String>,
        table: Vec<Vec<usize>>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    #[serde(default)]
    dim: Option<usize>,
    constants: Vec<(usize, usize, usize, Value)>,
    unit: Vec<Value>,
}

/// Parses `2`, `F3`, `GF(5)`, `Q` or `rational`.
pub fn parse_field(s: &str) -> Result<Field> {
    let t = s.trim().to_ascii_lowercase();
    if matches!(t.as_str(), "q" | "rational" | "rationals") {
        return Ok(Field::Rational);
    }
    let digits = t
        .strip_prefix("gf(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix('f'))
        .unwrap_or(&t);
    let p: u32 = digits
        .parse()
        .map_err(|_| Error::InvalidField(format!("cannot parse field {s:?}")))?;
    Field::prime(p)
}

/// An integer, or a string holding an integer or fraction.
pub fn parse_scalar(field: Field, value: &Value) -> Result<Scalar> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => return Err(Error::InvalidInput(format!("expected a number, found {other}"))),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.as_str(), "1"),
    };
    let parse = |s: &str| -> Result<BigInt> {
        s.parse()
            .map_err(|_| Error::InvalidInput(format!("{text:?} is not an exact integer or fraction")))
    };
    field.from_fraction(&parse(num)?, &parse(den)?)
}

fn resolve_field(raw: Option<RawField>) -> Result<Option<Field>> {
    match raw {
        None => Ok(None),
        Some(RawField::Prime { p }) => Field::prime(p).map(Some),
        Some(RawField::Name(s)) => parse_field(&s).map(Some),
    }
}

/// Parses and validates an input file; the field in the file is used.
pub fn parse_input(bytes: &[u8]) -> Result<ParsedInput> {
    parse_input_with_field(bytes, None)
}

/// Parses an input file, with `field_override` taking precedence over the
/// field named in the file.
pub fn parse_input_with_field(bytes: &[u8], field_override: Option<Field>) -> Result<ParsedInput> {
    let raw: RawInput =
        serde_json::from_slice(bytes).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))?;
    let field = match field_override {
        Some(f) => Some(f),
        None => resolve_field(raw.field)?,
    };
    let object = match raw.kind.as_str() {
        "group-table" => {
            let group: RawGroup = serde_json::from_value(raw.data)
                .map_err(|e| Error::InvalidInput(format!("bad group table: {e}")))?;
            let (name, table) = match group {
                RawGroup::Table(t) => ("group".to_string(), t),
                RawGroup::Named { name, table } => (name.unwrap_or_else(|| "group".into()), table),
            };
            InputObject::Group(GroupTable::new(name, table)?)
        }
        "group-named" => {
            let name = match &raw.data {
                Value::String(s) => s.clone(),
                Value::Object(m) => match m.get("name") {
                    Some(Value::String(s)) => s.clone(),
                    _ => return Err(Error::InvalidInput("group-named data needs a \"name\"".into())),
                },
                _ => return Err(Error::InvalidInput("group-named data must be a name".into())),
            };
            InputObject::Group(GroupTable::named(&name)?)
        }
        "algebra" => {
            let field = field.ok_or_else(|| Error::InvalidInput("an algebra needs a field".into()))?;
            let alg: RawAlgebra = serde_json::from_value(raw.data)
                .map_err(|e| Error::InvalidInput(format!("bad algebra data: {e}")))?;
            InputObject::Algebra(build_algebra(field, alg)?)
        }
        other => return Err(Error::InvalidInput(format!("unknown kind {other:?}"))),
    };
    Ok(ParsedInput { field, object })
}

fn build_algebra(field: Field, raw: RawAlgebra) -> Result<AlgebraPresentation> {
    let dim = raw
        .dim
        .or(raw.labels.as_ref().map(Vec::len))
        .unwrap_or(raw.unit.len());
    let labels = raw
        .labels
        .unwrap_or_else(|| (0..dim).map(|i| format!("e{i}")).collect());
    if labels.len() != dim || raw.unit.len() != dim {
        return Err(Error::NotAnAlgebra(format!(
            "dimension {dim} does not match {} labels and a unit of length {}",
            labels.len(),
            raw.unit.len()
        )));
    }
    let unit = raw
        .unit
        .iter()
        .map(|v| parse_scalar(field, v))
        .collect::<Result<Vec<_>>>()?;
    let constants = raw
        .constants
        .iter()
        .map(|(i, j, k, c)| Ok((*i, *j, *k, parse_scalar(field, c)?)))
        .collect::<Result<Vec<_>>>()?;
    AlgebraPresentation::from_constants(
        field,
        raw.name.unwrap_or_else(|| "algebra".into()),
        labels,
        &constants,
        Vector::from_scalars(field, &unit),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_group_tables() {
        let input = br#"{"field": {"p": 2}, "kind": "group-table", "data": [[0,1],[1,0]]}"#;
        let parsed = parse_input(input).unwrap();
        assert_eq!(parsed.field, Some(Field::Prime(2)));
        match parsed.object {
            InputObject::Group(g) => assert_eq!(g.order(), 2),
            _ => panic!("expected a group"),
        }
        let named = br#"{"kind": "group-named", "data": "klein4"}"#;
        match parse_input(named).unwrap().object {
            InputObject::Group(g) => assert_eq!(g.order(), 4),
            _ => panic!("expected a group"),
        }
    }

    #[test]
    fn broken_associativity_names_the_triple() {
        // a Latin square with identity 0 that is not associative
        let input = br#"{"field": "Q", "kind": "group-table",
            "data": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]}"#;
        let err = parse_input(input).unwrap_err().to_string();
        assert!(err.contains("not a group") && err.contains("associativity fails at ("), "{err}");
    }

    #[test]
    fn parses_algebras_over_q_and_fp() {
        let input = br#"{"field": "Q", "kind": "algebra", "data": {
            "labels": ["1", "x"], "constants": [[0,0,0,1],[0,1,1,"1"],[1,0,1,"2/2"]], "unit": [1, 0]}}"#;
        match parse_input(input).unwrap().object {
            InputObject::Algebra(a) => {
                let dual = AlgebraPresentation::dual_numbers(Field::Rational);
                for i in 0..2 {
                    for j in 0..2 {
                        assert_eq!(a.basis_product(i, j), dual.basis_product(i, j));
                    }
                }
            }
            _ => panic!("expected an algebra"),
        }
        let err = parse_input_with_field(input, Some(Field::Prime(2))).unwrap_err().to_string();
        assert!(err.contains("vanishes"), "{err}");
    }

    #[test]
    fn rejects_non_unital_unit() {
        let input = br#"{"field": {"p": 3}, "kind": "algebra", "data": {
            "constants": [[0,0,0,1],[0,1,1,1],[1,0,1,1]], "unit": [0, 1]}}"#;
        let err = parse_input(input).unwrap_err().to_string();
        assert!(err.contains("unit"), "{err}");
    }

    #[test]
    fn rejects_malformed_documents() {
        for bad in [
            &b"not json"[..],
            br#"{"kind": "algebra", "data": {"constants": [], "unit": [1]}}"#,
            br#"{"field": {"p": 4}, "kind": "group-named", "data": "s3"}"#,
            br#"{"field": "Q", "kind": "ring", "data": 1}"#,
            br#"{"field": "Q", "kind": "algebra", "data": {"constants": [[0,0,5,1]], "unit": [1]}}"#,
        ] {
            assert!(parse_input(bad).is_err());
        }
    }

    #[test]
    fn field_names() {
        assert_eq!(parse_field("2").unwrap(), Field::Prime(2));
        assert_eq!(parse_field("F5").unwrap(), Field::Prime(5));
        assert_eq!(parse_field("GF(7)").unwrap(), Field::Prime(7));
        assert_eq!(parse_field("Q").unwrap(), Field::Rational);
        assert!(parse_field("6").is_err());
    }
}
