//! Hecke eigenvalue tables and their JSON-lines encoding.
//!
//! ```text
//! {"label":"E[1,1]","level_hint":186,"weight":2}
//! {"p":5,"ap":"-3"}
//! {"p":7,"ap":"3"}
//! ```
//!
//! The first record is the header. Each later record holds one prime and
//! its eigenvalue as a decimal string; primes are strictly ascending. A
//! `level_hint` too large for a JSON integer is written as a decimal string.
//! An `ap` given as an array is the reserved encoding for eigenvalues in a
//! cyclotomic field and is rejected for now.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::ModularError;
use crate::arith::is_prime;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueTable {
    label: String,
    level_hint: BigUint,
    weight: u32,
    entries: BTreeMap<u64, BigInt>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    label: String,
    level_hint: Value,
    weight: u32,
}

#[derive(Serialize)]
struct Record<'a> {
    p: u64,
    ap: &'a str,
}

impl EigenvalueTable {
    pub fn new(
        label: impl Into<String>,
        level_hint: BigUint,
        weight: u32,
        entries: BTreeMap<u64, BigInt>,
    ) -> Result<Self, ModularError> {
        for &p in entries.keys() {
            if !is_prime(p) {
                return Err(ModularError::NotPrime(p));
            }
            if !level_hint.gcd(&BigUint::from(p)).is_one() {
                return Err(ModularError::BadPrimeEntry(p));
            }
        }
        Ok(EigenvalueTable {
            label: label.into(),
            level_hint,
            weight,
            entries,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn level_hint(&self) -> &BigUint {
        &self.level_hint
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn entries(&self) -> &BTreeMap<u64, BigInt> {
        &self.entries
    }

    pub fn get(&self, p: u64) -> Option<&BigInt> {
        self.entries.get(&p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Primes present in both tables, ascending.
    pub fn common_primes(&self, other: &EigenvalueTable) -> Vec<u64> {
        self.entries
            .keys()
            .filter(|p| other.entries.contains_key(p))
            .copied()
            .collect()
    }

    pub fn to_jsonl(&self) -> String {
        let level = match self.level_hint.to_u64() {
            Some(v) => Value::from(v),
            None => Value::from(self.level_hint.to_string()),
        };
        let header = Header {
            label: self.label.clone(),
            level_hint: level,
            weight: self.weight,
        };
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for (&p, ap) in &self.entries {
            let ap = ap.to_string();
            out.push_str(&serde_json::to_string(&Record { p, ap: &ap }).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, ModularError> {
        let err = |line: usize, msg: String| ModularError::Parse { line, msg };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, htext) = lines.next().ok_or_else(|| err(1, "missing header record".into()))?;
        let header: Header = serde_json::from_str(htext).map_err(|e| err(hline, e.to_string()))?;
        let level_hint = match &header.level_hint {
            Value::Number(n) => n.as_u64().map(BigUint::from),
            Value::String(s) => s.parse::<BigUint>().ok(),
            _ => None,
        }
        .ok_or_else(|| err(hline, "level_hint must be a nonnegative integer".into()))?;

        let mut entries = BTreeMap::new();
        let mut last = 0u64;
        for (line, raw) in lines {
            let rec: Value = serde_json::from_str(raw).map_err(|e| err(line, e.to_string()))?;
            let obj = rec.as_object().ok_or_else(|| err(line, "record must be an object".into()))?;
            if let Some(key) = obj.keys().find(|k| *k != "p" && *k != "ap") {
                return Err(err(line, format!("unknown field {key:?}")));
            }
            let p = obj
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| err(line, "\"p\" must be a positive integer".into()))?;
            let ap = match obj.get("ap") {
                Some(Value::String(s)) => s
                    .parse::<BigInt>()
                    .map_err(|_| err(line, format!("\"ap\" is not an integer: {s:?}")))?,
                Some(Value::Array(_)) => {
                    return Err(err(line, "cyclotomic a_p coefficient vectors are not supported".into()))
                }
                _ => return Err(err(line, "\"ap\" must be a decimal string".into())),
            };
            if p <= last {
                return Err(err(line, format!("prime {p} does not follow {last}")));
            }
            last = p;
            entries.insert(p, ap);
        }
        EigenvalueTable::new(header.label, level_hint, header.weight, entries)
    }
}
