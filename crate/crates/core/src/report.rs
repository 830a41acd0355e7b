//! Structured pass/fail records serialized into JSON reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

/// Attached to every bounded check.
pub const TRUNCATION_NOTE: &str = "verified up to the degree bound only: a pass is evidence, \
     not proof; a failure carries an explicit counterexample";

/// One named check. A failing report always carries at least one witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub pass: bool,
    pub degrees_checked: Vec<usize>,
    pub witnesses: Vec<Value>,
    pub notes: Vec<String>,
    pub millis: u64,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            params: BTreeMap::new(),
            pass: true,
            degrees_checked: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            millis: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable parameter"),
        );
        self
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn witness(&mut self, w: Value) {
        self.witnesses.push(w);
    }

    /// Marks the report failed with the given witness.
    pub fn fail(&mut self, w: Value) {
        self.pass = false;
        self.witnesses.push(w);
    }

    /// Records a sub-condition; a false condition fails the report.
    pub fn require(&mut self, ok: bool, w: Value) {
        if !ok {
            self.fail(w);
        }
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.millis = start.elapsed().as_millis() as u64;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn field_names_and_order() {
        let mut r = CheckReport::new("demo").param("p", 2).param("blocks", [2, 2]);
        r.degrees_checked = vec![0, 1];
        r.fail(json!({"degree": 1}));
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"name":"demo","params":{"blocks":[2,2],"p":2},"pass":false,"degrees_checked":[0,1],"witnesses":[{"degree":1}],"notes":[],"millis":0}"#
        );
    }
}
