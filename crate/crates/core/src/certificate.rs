//! Machine-readable verdicts.
//!
//! Every check renders to the same JSON shape:
//! `{"check", "params", "verdict", "witnesses", "subchecks"}`, with object keys
//! sorted and big integers written as decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub subchecks: Vec<Certificate>,
}

impl Certificate {
    pub fn new(check: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            check: check.into(),
            params: BTreeMap::new(),
            verdict,
            witnesses: Vec::new(),
            subchecks: Vec::new(),
        }
    }

    /// Verdict is the conjunction of the subchecks (pass when there are none).
    pub fn all_of(check: impl Into<String>, subchecks: Vec<Certificate>) -> Self {
        let verdict = Verdict::from_bool(subchecks.iter().all(Certificate::passed));
        Self {
            subchecks,
            ..Self::new(check, verdict)
        }
    }

    /// `expected == actual`, both recorded.
    pub fn equality(check: impl Into<String>, expected: &BigInt, actual: &BigInt) -> Self {
        Self::new(check, Verdict::from_bool(expected == actual))
            .param("expected", dec::value(expected))
            .param("actual", dec::value(actual))
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.to_owned(),
            serde_json::to_value(value).expect("certificate params are plain data"),
        );
        self
    }

    pub fn int_param(self, key: &str, value: &BigInt) -> Self {
        self.param(key, dec::value(value))
    }

    pub fn witness(mut self, value: impl Serialize) -> Self {
        self.witnesses
            .push(serde_json::to_value(value).expect("certificate witnesses are plain data"));
        self
    }

    pub fn subcheck(mut self, sub: Certificate) -> Self {
        if !sub.passed() {
            self.verdict = Verdict::Fail;
        }
        self.subchecks.push(sub);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    /// Depth-first search for a subcheck by name.
    pub fn find(&self, check: &str) -> Option<&Certificate> {
        if self.check == check {
            return Some(self);
        }
        self.subchecks.iter().find_map(|c| c.find(check))
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }
}

/// Pretty-printed JSON with object keys in sorted order.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    // serde_json's Value map is ordered, so a round trip through Value sorts keys.
    let value = serde_json::to_value(value).expect("serializable report");
    let mut text = serde_json::to_string_pretty(&value).expect("Value always serializes");
    text.push('\n');
    text
}
