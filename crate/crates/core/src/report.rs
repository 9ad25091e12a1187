//! Pass/fail verdicts with witnesses, shared by the algebra checkers.

use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { witness: String },
}

impl Verdict {
    pub fn fail(witness: impl Into<String>) -> Verdict {
        Verdict::Fail { witness: witness.into() }
    }

    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// An ordered list of named verdicts.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    entries: Vec<(String, Verdict)>,
}

impl CheckReport {
    pub fn new() -> CheckReport {
        CheckReport::default()
    }

    pub fn push(&mut self, name: impl Into<String>, verdict: Verdict) {
        self.entries.push((name.into(), verdict));
    }

    pub fn entries(&self) -> &[(String, Verdict)] {
        &self.entries
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.passed())
    }

    pub fn first_failure(&self) -> Option<(&str, &str)> {
        self.entries.iter().find_map(|(name, v)| match v {
            Verdict::Pass => None,
            Verdict::Fail { witness } => Some((name.as_str(), witness.as_str())),
        })
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// `{ axiom: "pass" | {"witness": ...} }` with entries in check order.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (name, v) in &self.entries {
            let value = match v {
                Verdict::Pass => Value::String("pass".into()),
                Verdict::Fail { witness } => json!({ "witness": witness }),
            };
            map.insert(name.clone(), value);
        }
        Value::Object(map)
    }
}
