//! Check records, verification reports, and their byte-stable JSON form.

use std::io;

use serde::{Deserialize, Serialize};

/// One inequality or residual check. `pass ⇔ margin ≥ −tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Relation being certified.
    pub anchor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `lhs ≤ rhs` up to an absolute `tolerance`.
    pub fn le(
        name: impl Into<String>,
        anchor: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> Self {
        let margin = rhs - lhs;
        Self {
            name: name.into(),
            anchor: anchor.into(),
            lhs,
            rhs,
            margin,
            tolerance,
            pass: margin >= -tolerance,
        }
    }

    /// `lhs ≤ rhs (1 + slack)`.
    pub fn le_rel(
        name: impl Into<String>,
        anchor: impl Into<String>,
        lhs: f64,
        rhs: f64,
        slack: f64,
    ) -> Self {
        Self::le(name, anchor, lhs, rhs, slack * rhs.abs())
    }

    /// `lhs < rhs` strictly.
    pub fn lt(name: impl Into<String>, anchor: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let mut c = Self::le(name, anchor, lhs, rhs, 0.0);
        c.pass = lhs < rhs;
        c
    }

    /// `residual ≤ tolerance`, recorded as `lhs = residual`, `rhs = 0`.
    pub fn residual(
        name: impl Into<String>,
        anchor: impl Into<String>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self::le(name, anchor, residual, 0.0, tolerance)
    }

    /// A boolean condition: `1 ≤ 1` when it holds, `1 ≤ 0` otherwise.
    pub fn holds(name: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        let v = if ok { 1.0 } else { 0.0 };
        Self::le(name, anchor, 1.0, v, 0.0)
    }
}

/// A reported, ungated quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub name: String,
    pub value: f64,
}

impl Observation {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub grid: usize,
    pub bandwidth: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub observations: Vec<Observation>,
    pub summary: Summary,
    pub environment: Environment,
}

impl VerificationReport {
    pub fn new(environment: Environment) -> Self {
        Self {
            environment,
            ..Self::default()
        }
    }

    pub fn extend_checks(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
        self.refresh();
    }

    pub fn extend_observations(&mut self, obs: impl IntoIterator<Item = Observation>) {
        self.observations.extend(obs);
    }

    fn refresh(&mut self) {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        self.summary = Summary {
            total: self.checks.len(),
            passed,
            failed: self.checks.len() - passed,
        };
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Vec<u8> {
        to_json_bytes(self)
    }
}

/// Pretty JSON formatter printing every float with 17 significant digits and
/// non-finite floats as `null`.
#[derive(Default)]
pub struct ExactFloatFormatter {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(w $(, $arg)*)
            }
        )*
    };
}

impl serde_json::ser::Formatter for ExactFloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        end_object_key();
        begin_object_value();
        end_object_value();
    }
}

/// Serialize with [`ExactFloatFormatter`]; the output has a trailing newline.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloatFormatter::default());
    value
        .serialize(&mut ser)
        .expect("serializing to memory does not fail");
    out.push(b'\n');
    out
}
