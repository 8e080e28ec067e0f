//! JSON encodings for fields, scalars, planes, matrices, and polynomials.
//!
//! Encoders emit `serde_json::Value` maps, which keep their keys sorted, so
//! serializing a fixed object always produces the same bytes. Parsers are a
//! little more permissive than the encoders: a bare integer is accepted
//! wherever a scalar is expected.
//!
//! Formats:
//! * field: `{"p": 29, "k": 2, "min_poly": [t0, t1, 1]}`; `min_poly` and `k`
//!   are omitted for prime fields, and `p = 0` denotes the rationals.
//! * scalar over a finite field: coefficient array of length `k` in the
//!   generator, least degree first, e.g. `[3]` or `[3, 5]`.
//! * scalar over the rationals: `{"num": "-7", "den": "2"}` with decimal
//!   string values.
//! * plane: `{"field": .., "rows": [[..6 scalars..] x3]}`.
//! * polynomial: `{"n": 3, "d": 6, "terms": [{"exp": [6,0,0], "c": ..}, ..]}`
//!   with terms in descending graded lexicographic order.

use crate::field::{FieldError, FieldSpec, Scalar};
use crate::grassmann::{GrassmannError, Plane};
use crate::intmat::IntMat;
use crate::poly::{MultiPoly, PolyError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("missing key \"{0}\"")]
    Missing(&'static str),
    #[error("unexpected value shape at {0}")]
    Bad(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] serde_json::Error),
}

fn get<'a>(v: &'a Value, key: &'static str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or(JsonError::Missing(key))
}

fn as_u64(v: &Value, ctx: &'static str) -> Result<u64, JsonError> {
    v.as_u64().ok_or(JsonError::Bad(ctx))
}

pub fn field_to_json(f: &FieldSpec) -> Value {
    let mut m = Map::new();
    m.insert("p".into(), json!(f.characteristic()));
    if f.degree() > 1 {
        m.insert("k".into(), json!(f.degree()));
        m.insert("min_poly".into(), json!(f.min_poly()));
    }
    Value::Object(m)
}

pub fn field_from_json(v: &Value) -> Result<FieldSpec, JsonError> {
    let p = as_u64(get(v, "p")?, "field.p")?;
    let k = match v.get("k") {
        Some(kv) => as_u64(kv, "field.k")? as usize,
        None => 1,
    };
    if p == 0 {
        if k != 1 {
            return Err(JsonError::Bad("field: rationals have no extension"));
        }
        return Ok(FieldSpec::rationals());
    }
    if k == 1 {
        return Ok(FieldSpec::prime(p)?);
    }
    let mp = get(v, "min_poly")?
        .as_array()
        .ok_or(JsonError::Bad("field.min_poly"))?
        .iter()
        .map(|x| as_u64(x, "field.min_poly entry"))
        .collect::<Result<Vec<u64>, _>>()?;
    Ok(FieldSpec::with_min_poly(p, k, mp)?)
}

pub fn scalar_to_json(f: &FieldSpec, s: &Scalar) -> Value {
    match s {
        Scalar::Rat(r) => json!({
            "num": r.numer().to_string(),
            "den": r.denom().to_string(),
        }),
        Scalar::Fp(x) => json!([x]),
        Scalar::Ext(e) => json!(e.0[..f.degree()].to_vec()),
    }
}

fn bigint_from_value(v: &Value, ctx: &'static str) -> Result<BigInt, JsonError> {
    match v {
        Value::String(s) => BigInt::from_str(s).map_err(|_| JsonError::Bad(ctx)),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else {
                Err(JsonError::Bad(ctx))
            }
        }
        _ => Err(JsonError::Bad(ctx)),
    }
}

pub fn scalar_from_json(f: &FieldSpec, v: &Value) -> Result<Scalar, JsonError> {
    // bare integer shorthand works over any field
    if let Value::Number(n) = v {
        if let Some(i) = n.as_i64() {
            return Ok(f.from_i64(i));
        }
        return Err(JsonError::Bad("scalar: integer out of range"));
    }
    if f.is_rational() {
        let num = bigint_from_value(get(v, "num")?, "scalar.num")?;
        let den = match v.get("den") {
            Some(d) => bigint_from_value(d, "scalar.den")?,
            None => BigInt::from(1),
        };
        if den.is_zero() {
            return Err(JsonError::Bad("scalar: zero denominator"));
        }
        return Ok(Scalar::Rat(Box::new(BigRational::new(num, den))));
    }
    let arr = v.as_array().ok_or(JsonError::Bad("scalar"))?;
    if arr.is_empty() || arr.len() > f.degree() {
        return Err(JsonError::Bad("scalar: coefficient count"));
    }
    let mut acc = f.zero();
    let t = if f.degree() > 1 { f.gen_t()? } else { f.one() };
    // Horner from the top coefficient down
    for c in arr.iter().rev() {
        let coef = f.from_u64(as_u64(c, "scalar coefficient")?);
        acc = f.add(&f.mul(&acc, &t), &coef);
    }
    Ok(acc)
}

pub fn scalar_row_to_json(f: &FieldSpec, row: &[Scalar]) -> Value {
    Value::Array(row.iter().map(|s| scalar_to_json(f, s)).collect())
}

pub fn scalar_row_from_json(f: &FieldSpec, v: &Value) -> Result<Vec<Scalar>, JsonError> {
    v.as_array()
        .ok_or(JsonError::Bad("scalar row"))?
        .iter()
        .map(|x| scalar_from_json(f, x))
        .collect()
}

/// The 3x6 row matrix of a plane, without the field header.
pub fn plane_rows_to_json(f: &FieldSpec, p: &Plane) -> Value {
    Value::Array(
        (0..3)
            .map(|i| scalar_row_to_json(f, &p.mat().row(i)))
            .collect(),
    )
}

pub fn plane_rows_from_json(f: &FieldSpec, v: &Value) -> Result<Plane, JsonError> {
    let rows = v
        .as_array()
        .ok_or(JsonError::Bad("plane rows"))?
        .iter()
        .map(|r| scalar_row_from_json(f, r))
        .collect::<Result<Vec<_>, _>>()?;
    if rows.len() != 3 || rows.iter().any(|r| r.len() != 6) {
        return Err(JsonError::Bad("plane: expected 3 rows of 6 entries"));
    }
    Ok(Plane::from_rows(f, rows)?)
}

pub fn plane_to_json(f: &FieldSpec, p: &Plane) -> Value {
    json!({
        "field": field_to_json(f),
        "rows": plane_rows_to_json(f, p),
    })
}

pub fn plane_from_json(v: &Value) -> Result<(FieldSpec, Plane), JsonError> {
    let f = field_from_json(get(v, "field")?)?;
    let p = plane_rows_from_json(&f, get(v, "rows")?)?;
    Ok((f, p))
}

pub fn poly_to_json(f: &FieldSpec, poly: &MultiPoly) -> Value {
    let terms: Vec<Value> = poly
        .terms
        .iter()
        .rev()
        .map(|(exp, c)| {
            json!({
                "exp": exp.iter().map(|&e| e as u64).collect::<Vec<u64>>(),
                "c": scalar_to_json(f, c),
            })
        })
        .collect();
    json!({ "n": poly.n, "d": poly.d, "terms": terms })
}

pub fn poly_from_json(f: &FieldSpec, v: &Value) -> Result<MultiPoly, JsonError> {
    let n = as_u64(get(v, "n")?, "poly.n")? as usize;
    let d = as_u64(get(v, "d")?, "poly.d")? as usize;
    let mut terms = vec![];
    for t in get(v, "terms")?.as_array().ok_or(JsonError::Bad("poly.terms"))? {
        let exp = get(t, "exp")?
            .as_array()
            .ok_or(JsonError::Bad("poly term exp"))?
            .iter()
            .map(|x| as_u64(x, "poly exponent").map(|e| e as u8))
            .collect::<Result<Vec<u8>, _>>()?;
        let c = scalar_from_json(f, get(t, "c")?)?;
        terms.push((exp, c));
    }
    Ok(MultiPoly::from_terms(n, d, f, terms)?)
}

/// Integer matrices serialize as nested arrays; entries outside the i64 range
/// become decimal strings.
pub fn intmat_to_json(m: &IntMat) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            Value::Array(
                (0..m.ncols())
                    .map(|j| {
                        let x = m.get(i, j);
                        match i64::try_from(x.clone()) {
                            Ok(v) => json!(v),
                            Err(_) => json!(x.to_string()),
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

pub fn intmat_from_json(v: &Value) -> Result<IntMat, JsonError> {
    let rows = v.as_array().ok_or(JsonError::Bad("integer matrix"))?;
    if rows.is_empty() {
        return Err(JsonError::Bad("integer matrix: no rows"));
    }
    let mut data: Vec<Vec<BigInt>> = vec![];
    for r in rows {
        let row = r
            .as_array()
            .ok_or(JsonError::Bad("integer matrix row"))?
            .iter()
            .map(|x| bigint_from_value(x, "integer matrix entry"))
            .collect::<Result<Vec<_>, _>>()?;
        data.push(row);
    }
    let cols = data[0].len();
    if data.iter().any(|r| r.len() != cols) {
        return Err(JsonError::Bad("integer matrix: ragged rows"));
    }
    let rows_n = data.len();
    Ok(IntMat::from_fn(rows_n, cols, |i, j| data[i][j].clone()))
}

/// Stable pretty printer used for all file output.
pub fn to_string_stable(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_roundtrip() {
        for f in [
            FieldSpec::rationals(),
            FieldSpec::prime(101).unwrap(),
            FieldSpec::ext_field(29, 2, 7).unwrap(),
            FieldSpec::ext_field(5, 3, 0).unwrap(),
        ] {
            let j = field_to_json(&f);
            let g = field_from_json(&j).unwrap();
            assert_eq!(f.characteristic(), g.characteristic());
            assert_eq!(f.degree(), g.degree());
            assert_eq!(f.min_poly(), g.min_poly());
        }
    }

    #[test]
    fn scalar_roundtrip_all_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in [
            FieldSpec::rationals(),
            FieldSpec::prime(11).unwrap(),
            FieldSpec::ext_field(11, 2, 1).unwrap(),
        ] {
            for _ in 0..20 {
                let s = f.rand_scalar(&mut rng);
                let j = scalar_to_json(&f, &s);
                let back = scalar_from_json(&f, &j).unwrap();
                assert!(f.is_zero(&f.sub(&s, &back)), "{:?} vs {:?}", s, back);
            }
        }
    }

    #[test]
    fn scalar_integer_shorthand() {
        let f = FieldSpec::prime(7).unwrap();
        let s = scalar_from_json(&f, &json!(-1)).unwrap();
        assert!(f.is_zero(&f.sub(&s, &f.from_i64(6))));
        let q = FieldSpec::rationals();
        let r = scalar_from_json(&q, &json!(5)).unwrap();
        assert!(q.is_zero(&q.sub(&r, &q.from_i64(5))));
    }

    #[test]
    fn plane_roundtrip() {
        let f = FieldSpec::ext_field(13, 2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = crate::matrix::ExactMatrix::from_fn(3, 6, |_, _| f.rand_scalar(&mut rng));
        if let Ok(p) = Plane::new(&f, m) {
            let j = plane_to_json(&f, &p);
            let (g, q) = plane_from_json(&j).unwrap();
            assert!(p.eq_projective(&g, &q));
        }
    }

    #[test]
    fn poly_roundtrip_and_term_order() {
        let f = FieldSpec::prime(101).unwrap();
        let p = MultiPoly::from_terms(
            3,
            2,
            &f,
            vec![
                (vec![0, 0, 2], f.from_i64(7)),
                (vec![2, 0, 0], f.from_i64(1)),
                (vec![1, 1, 0], f.from_i64(100)),
            ],
        )
        .unwrap();
        let j = poly_to_json(&f, &p);
        // descending graded lex: x0^2 first, then x0 x1, then x2^2
        let terms = j["terms"].as_array().unwrap();
        assert_eq!(terms[0]["exp"], json!([2, 0, 0]));
        assert_eq!(terms[1]["exp"], json!([1, 1, 0]));
        assert_eq!(terms[2]["exp"], json!([0, 0, 2]));
        let back = poly_from_json(&f, &j).unwrap();
        assert!(back.sub(&f, &p).is_zero());
    }

    #[test]
    fn intmat_roundtrip_with_large_entry() {
        let mut m = IntMat::zeros(2, 2);
        m.set(0, 0, BigInt::from(i64::MAX) * 3);
        m.set(1, 0, BigInt::from(-5));
        let j = intmat_to_json(&m);
        assert!(j[0][0].is_string());
        assert!(j[1][0].is_number());
        let back = intmat_from_json(&j).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn stable_output_is_sorted_and_reproducible() {
        let f = FieldSpec::ext_field(29, 2, 7).unwrap();
        let j = field_to_json(&f);
        let a = to_string_stable(&j);
        let b = to_string_stable(&field_to_json(&f));
        assert_eq!(a, b);
        let keys: Vec<&str> = j.as_object().unwrap().keys().map(|s| s.as_str()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
