//! JSON encoding: sorted keys, two-space indentation, floats with 17
//! significant digits, rationals as `"p/q"` strings.

use std::io;

use chiralkit::linalg::{Matrix, Vector};
use chiralkit::scalar::{format_rational, parse_rational};
use chiralkit::{Rational, Scalar};
use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{Map, Value};

use crate::CliError;

/// Pretty layout with fixed scientific float formatting.
#[derive(Default)]
struct StableFormatter {
    depth: usize,
    has_value: bool,
}

impl StableFormatter {
    fn newline<W: ?Sized + io::Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.depth {
            w.write_all(b"  ")?;
        }
        Ok(())
    }

    fn open<W: ?Sized + io::Write>(&mut self, w: &mut W, bracket: &[u8]) -> io::Result<()> {
        self.depth += 1;
        self.has_value = false;
        w.write_all(bracket)
    }

    fn close<W: ?Sized + io::Write>(&mut self, w: &mut W, bracket: &[u8]) -> io::Result<()> {
        self.depth -= 1;
        if self.has_value {
            self.newline(w)?;
        }
        w.write_all(bracket)
    }

    fn item<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if !first {
            w.write_all(b",")?;
        }
        self.newline(w)
    }
}

impl Formatter for StableFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        // −0 prints as 0.
        let value = if value == 0.0 { 0.0 } else { value };
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.open(w, b"[")
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.close(w, b"]")
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.item(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.open(w, b"{")
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.close(w, b"}")
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.item(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, _w: &mut W) -> io::Result<()> {
        self.has_value = true;
        Ok(())
    }
}

/// Non-finite floats have no JSON number form and are written as `null`.
pub fn render(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, StableFormatter::default());
    value.serialize(&mut ser).expect("writing to a Vec cannot fail");
    let mut text = String::from_utf8(out).expect("serde_json emits UTF-8");
    text.push('\n');
    text
}

/// Scalars that cross the JSON boundary.
pub trait JsonScalar: Scalar {
    fn from_json(value: &Value, what: &str) -> Result<Self, CliError>;
    fn to_json(&self) -> Value;
}

impl JsonScalar for f64 {
    fn from_json(value: &Value, what: &str) -> Result<Self, CliError> {
        let x = match value {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => s.trim().parse::<f64>().ok().or_else(|| parse_rational(s).map(|r| r.to_f64_lossy())),
            _ => None,
        };
        match x {
            Some(x) if x.is_finite() => Ok(x),
            _ => Err(CliError::input(format!("{what}: expected a finite number, got {value}"))),
        }
    }

    fn to_json(&self) -> Value {
        Value::from(*self)
    }
}

impl JsonScalar for Rational {
    fn from_json(value: &Value, what: &str) -> Result<Self, CliError> {
        let parsed = match value {
            Value::Number(n) => parse_rational(&n.to_string()),
            Value::String(s) => parse_rational(s),
            _ => None,
        };
        parsed.ok_or_else(|| CliError::input(format!("{what}: expected an integer, decimal or \"p/q\", got {value}")))
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
}

pub fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    obj.get(key).ok_or_else(|| CliError::input(format!("missing field \"{key}\"")))
}

pub fn array<'a>(value: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    value.as_array().ok_or_else(|| CliError::input(format!("{what}: expected an array")))
}

pub fn scalar<S: JsonScalar>(obj: &Value, key: &str) -> Result<S, CliError> {
    S::from_json(field(obj, key)?, key)
}

pub fn vector<S: JsonScalar>(value: &Value, what: &str) -> Result<Vector<S>, CliError> {
    array(value, what)?.iter().map(|x| S::from_json(x, what)).collect()
}

pub fn vec3<S: JsonScalar>(value: &Value, what: &str) -> Result<[S; 3], CliError> {
    let v = vector(value, what)?;
    v.try_into().map_err(|v: Vec<S>| CliError::input(format!("{what}: expected 3 entries, got {}", v.len())))
}

/// Row-major array of arrays.
pub fn matrix<S: JsonScalar>(value: &Value, what: &str) -> Result<Matrix<S>, CliError> {
    let rows: Vec<Vector<S>> = array(value, what)?.iter().map(|r| vector(r, what)).collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Err(CliError::input(format!("{what}: matrix has no rows")));
    }
    Matrix::from_rows(rows).ok_or_else(|| CliError::input(format!("{what}: rows have different lengths")))
}

pub fn vector_json<S: JsonScalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(JsonScalar::to_json).collect())
}

pub fn matrix_json<S: JsonScalar>(m: &Matrix<S>) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector_json(r)).collect())
}

pub fn object(entries: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}
