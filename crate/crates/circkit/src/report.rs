//! Canonical JSON run reports for the command-line front end.
//!
//! A report collects what one invocation did: the subcommand name, its
//! parameters, the files it wrote, and a list of checks, each pairing a
//! claimed bound with the exactly measured value. Rendering is canonical:
//! keys appear in sorted order, integers larger than 2^53 are emitted as
//! decimal strings (everything below stays a plain JSON number), and
//! rationals with a non-trivial denominator are emitted as `"p/q"`
//! strings. Wall-clock data lives only under the `timings` key, so two
//! runs with identical inputs produce reports that are byte-identical
//! once that single key is dropped.
//!
//! Exit-code convention, shared with the front end: 1 when any check
//! failed, otherwise 2 when a certification verdict is inconclusive,
//! otherwise 0.

use std::time::Instant;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{Map, Number, Value};

/// Largest magnitude rendered as a JSON number: 2^53.
const MAX_JSON_INT: u64 = 9_007_199_254_740_992;

/// A JSON value for an unsigned integer, as a number when it is at most
/// 2^53 and as a decimal string above that.
pub fn uint_value(v: u64) -> Value {
    if v <= MAX_JSON_INT {
        Value::Number(Number::from(v))
    } else {
        Value::String(v.to_string())
    }
}

/// As [`uint_value`], for arbitrary-precision integers.
pub fn big_uint_value(v: &BigUint) -> Value {
    match u64::try_from(v) {
        Ok(small) => uint_value(small),
        Err(_) => Value::String(v.to_string()),
    }
}

/// As [`uint_value`], for a `u128` count.
pub fn uint128_value(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(small) => uint_value(small),
        Err(_) => Value::String(v.to_string()),
    }
}

/// A JSON value for an exact rational: integers follow the integer rule,
/// anything with a denominator other than one becomes a `"p/q"` string.
pub fn rational_value(v: &BigRational) -> Value {
    if v.denom().is_one() {
        big_int_value(v.numer())
    } else {
        Value::String(format!("{}/{}", v.numer(), v.denom()))
    }
}

fn big_int_value(v: &BigInt) -> Value {
    let (sign, mag) = v.clone().into_parts();
    match (sign, u64::try_from(&mag)) {
        (Sign::Minus, Ok(small)) if small <= MAX_JSON_INT => {
            Value::Number(Number::from(-(small as i64)))
        }
        (_, Ok(small)) if small <= MAX_JSON_INT && sign != Sign::Minus => {
            Value::Number(Number::from(small))
        }
        _ => Value::String(v.to_string()),
    }
}

/// One verified claim: a named bound, the claimed ceiling (or an exactness
/// statement), the measured value, and whether the measurement satisfies
/// the claim.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub claim_bound: Value,
    pub measured: Value,
    pub ok: bool,
}

/// Everything one subcommand invocation reports. Construction order does
/// not matter; rendering sorts keys.
#[derive(Debug)]
pub struct RunReport {
    command: String,
    params: Map<String, Value>,
    artifacts: Map<String, Value>,
    checks: Vec<Check>,
    result: Map<String, Value>,
    /// `Some(false)` marks an inconclusive certification; `Some(true)` a
    /// certified one; `None` a command with no verdict semantics.
    verdict_certified: Option<bool>,
    started: Instant,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> RunReport {
        RunReport {
            command: command.into(),
            params: Map::new(),
            artifacts: Map::new(),
            checks: Vec::new(),
            result: Map::new(),
            verdict_certified: None,
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: Value) {
        self.params.insert(key.into(), value);
    }

    /// Records a file this run wrote, keyed by its role.
    pub fn artifact(&mut self, key: impl Into<String>, path: impl Into<String>) {
        self.artifacts.insert(key.into(), Value::String(path.into()));
    }

    /// Appends a check and returns whether it passed.
    pub fn check(
        &mut self,
        name: impl Into<String>,
        claim_bound: Value,
        measured: Value,
        ok: bool,
    ) -> bool {
        self.checks.push(Check {
            name: name.into(),
            claim_bound,
            measured,
            ok,
        });
        ok
    }

    /// Adds a subcommand-specific entry under the `result` key.
    pub fn result_entry(&mut self, key: impl Into<String>, value: Value) {
        self.result.insert(key.into(), value);
    }

    /// Marks this run as a certification with the given outcome.
    pub fn set_verdict(&mut self, certified: bool) {
        self.verdict_certified = Some(certified);
    }

    pub fn all_checks_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    /// 1 if any check failed; else 2 if the verdict is inconclusive;
    /// else 0.
    pub fn exit_code(&self) -> i32 {
        if !self.all_checks_ok() {
            1
        } else if self.verdict_certified == Some(false) {
            2
        } else {
            0
        }
    }

    /// The report as a JSON value, timings included.
    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("artifacts".into(), Value::Object(self.artifacts.clone()));
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut entry = Map::new();
                entry.insert("claimBound".into(), c.claim_bound.clone());
                entry.insert("measured".into(), c.measured.clone());
                entry.insert("name".into(), Value::String(c.name.clone()));
                entry.insert("ok".into(), Value::Bool(c.ok));
                Value::Object(entry)
            })
            .collect();
        root.insert("checks".into(), Value::Array(checks));
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("params".into(), Value::Object(self.params.clone()));
        let mut result = self.result.clone();
        if let Some(certified) = self.verdict_certified {
            result.insert(
                "verdict".into(),
                Value::String(
                    if certified {
                        "CERTIFIED_WEAKLY_ELUSIVE"
                    } else {
                        "INCONCLUSIVE"
                    }
                    .into(),
                ),
            );
        }
        root.insert("result".into(), Value::Object(result));
        let mut timings = Map::new();
        let ms = self.started.elapsed().as_secs_f64() * 1e3;
        let rounded = (ms * 1e3).round() / 1e3;
        timings.insert(
            "totalMs".into(),
            Number::from_f64(rounded).map_or(Value::Null, Value::Number),
        );
        root.insert("timings".into(), Value::Object(timings));
        Value::Object(root)
    }

    /// Pretty-printed canonical JSON. The `timings` key sorts last, so
    /// golden comparisons can drop it and compare the rest byte-wise.
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes")
    }
}
