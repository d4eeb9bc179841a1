//! JSON reading and writing of states.
//!
//! Accepted documents:
//!
//! * `{"a": [4], "b": [4], "z": [[re, im] × 4]}`, an X-shaped matrix;
//! * `{"a": [4], "z": [4]}` without `b`, a GHZ-diagonal matrix `X(a, a, z)`;
//! * `{"matrix": 8 × 8 of [re, im]}`, a dense self-adjoint matrix.
//!
//! Numbers are JSON numbers or strings holding a rational (`"3/4"`,
//! `"-1.25"`, `"2"`). Integers and strings are exact; a JSON number with a
//! fraction or exponent is a float, read exactly but marking the input as
//! floating-point.

use serde_json::{json, Map, Value};

use crate::arith::{CQ, Q};
use crate::error::{Error, Result};
use crate::xcore::{DenseHermitian8, GhzDiagonal, XMatrix, XState, DEFAULT_TOLERANCE};

/// A parsed state document.
#[derive(Clone, Debug, PartialEq)]
pub enum StateInput {
    X(XState),
    Dense(DenseHermitian8),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Parsed {
    pub input: StateInput,
    /// Every number was an integer or a rational string.
    pub rational: bool,
}

impl Parsed {
    /// The X-shaped state the criteria are evaluated on.
    pub fn x_state(&self) -> XState {
        match &self.input {
            StateInput::X(x) => x.clone(),
            StateInput::Dense(d) => d.xpart(),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.input, StateInput::Dense(_))
    }
}

struct Reader {
    rational: bool,
}

impl Reader {
    fn number(&mut self, v: &Value, what: &str) -> Result<Q> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    return Ok(Q::from_i64(i));
                }
                if n.is_u64() {
                    return n.to_string().parse().map_err(|_| Error::Input(format!("{what}: bad number {n}")));
                }
                self.rational = false;
                let x = n.as_f64().ok_or_else(|| Error::Input(format!("{what}: bad number {n}")))?;
                Q::from_f64(x).ok_or_else(|| Error::Input(format!("{what}: non-finite number")))
            }
            Value::String(s) => s.trim().parse().map_err(|_| Error::Input(format!("{what}: {s:?} is not a rational"))),
            other => Err(Error::Input(format!("{what}: expected a number, found {other}"))),
        }
    }

    fn complex(&mut self, v: &Value, what: &str) -> Result<CQ> {
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                Ok(CQ::new(self.number(&parts[0], what)?, self.number(&parts[1], what)?))
            }
            Value::Array(_) => Err(Error::Input(format!("{what}: a complex entry is [re, im]"))),
            scalar => Ok(CQ::real(self.number(scalar, what)?)),
        }
    }

    fn array<'a>(&self, v: &'a Value, len: usize, what: &str) -> Result<&'a [Value]> {
        match v {
            Value::Array(items) if items.len() == len => Ok(items),
            _ => Err(Error::Input(format!("{what}: expected an array of {len} entries"))),
        }
    }

    fn reals(&mut self, obj: &Map<String, Value>, key: &str) -> Result<[Q; 4]> {
        let v = obj.get(key).ok_or_else(|| Error::Input(format!("missing field {key:?}")))?;
        let items = self.array(v, 4, key)?;
        let mut out: [Q; 4] = Default::default();
        for (i, item) in items.iter().enumerate() {
            out[i] = self.number(item, &format!("{key}[{}]", i + 1))?;
        }
        Ok(out)
    }

    fn complexes(&mut self, obj: &Map<String, Value>, key: &str) -> Result<[CQ; 4]> {
        let v = obj.get(key).ok_or_else(|| Error::Input(format!("missing field {key:?}")))?;
        let items = self.array(v, 4, key)?;
        let mut out: [CQ; 4] = Default::default();
        for (i, item) in items.iter().enumerate() {
            out[i] = self.complex(item, &format!("{key}[{}]", i + 1))?;
        }
        Ok(out)
    }
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::Input(format!("unexpected field {k:?}"))),
        None => Ok(()),
    }
}

/// Parse a state document.
pub fn parse_state(text: &str) -> Result<Parsed> {
    let v: Value = serde_json::from_str(text)?;
    parse_state_value(&v)
}

pub fn parse_state_value(v: &Value) -> Result<Parsed> {
    let obj = v.as_object().ok_or_else(|| Error::Input("a state is a JSON object".into()))?;
    let mut r = Reader { rational: true };
    if let Some(matrix) = obj.get("matrix") {
        check_keys(obj, &["matrix"])?;
        let rows = r.array(matrix, 8, "matrix")?;
        let mut entries: [[CQ; 8]; 8] = Default::default();
        for (i, row) in rows.iter().enumerate() {
            let cols = r.array(row, 8, &format!("matrix row {}", i + 1))?;
            for (j, e) in cols.iter().enumerate() {
                entries[i][j] = r.complex(e, &format!("matrix[{}][{}]", i + 1, j + 1))?;
            }
        }
        let dense = if r.rational {
            DenseHermitian8::new(entries)?
        } else {
            let f = entries.map(|row| row.map(|e| (e.re.to_f64(), e.im.to_f64())));
            DenseHermitian8::from_f64(f, DEFAULT_TOLERANCE)?
        };
        return Ok(Parsed { input: StateInput::Dense(dense), rational: r.rational });
    }
    let m = if obj.contains_key("b") {
        check_keys(obj, &["a", "b", "z"])?;
        XMatrix { a: r.reals(obj, "a")?, b: r.reals(obj, "b")?, z: r.complexes(obj, "z")? }
    } else {
        check_keys(obj, &["a", "z"])?;
        let a = r.reals(obj, "a")?;
        let z = r.reals(obj, "z")?;
        GhzDiagonal { a, z }.to_matrix()
    };
    Ok(Parsed { input: StateInput::X(XState::new(m)), rational: r.rational })
}

/// The `{"a", "b", "z"}` document of an X-shaped matrix, with rational
/// strings so that reading it back is lossless.
pub fn x_matrix_json(m: &XMatrix) -> Value {
    let reals = |v: &[Q; 4]| Value::Array(v.iter().map(|q| Value::String(q.to_string())).collect());
    let z: Vec<Value> = m.z.iter().map(|c| json!([c.re.to_string(), c.im.to_string()])).collect();
    json!({ "a": reals(&m.a), "b": reals(&m.b), "z": z })
}
