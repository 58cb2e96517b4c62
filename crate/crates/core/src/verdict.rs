//! Three-valued outcomes of bounded checks.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Unknown,
    Fails,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Holds => "Holds",
            Status::Unknown => "Unknown",
            Status::Fails => "Fails",
        })
    }
}

/// One named component of a witness, kept both as JSON and as readable text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub name: String,
    pub value: Value,
    pub text: String,
}

impl Witness {
    pub fn new(name: impl Into<String>, value: Value, text: impl Into<String>) -> Self {
        Witness { name: name.into(), value, text: text.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(default)]
    pub witness: Vec<Witness>,
    pub checked: u64,
    pub skipped: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Verdict {
    pub fn holds(checked: u64) -> Self {
        Verdict { status: Status::Holds, witness: vec![], checked, skipped: 0, reason: None }
    }

    pub fn fails(checked: u64, witness: Vec<Witness>) -> Self {
        Verdict { status: Status::Fails, witness, checked, skipped: 0, reason: None }
    }

    pub fn unknown(checked: u64, skipped: u64, reason: impl Into<String>) -> Self {
        Verdict { status: Status::Unknown, witness: vec![], checked, skipped, reason: Some(reason.into()) }
    }

    pub fn with_witness(mut self, witness: Vec<Witness>) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn is_fails(&self) -> bool {
        self.status == Status::Fails
    }

    pub fn is_unknown(&self) -> bool {
        self.status == Status::Unknown
    }

    /// Conjunction: Fails dominates Unknown dominates Holds; counts add up.
    pub fn merge(mut self, other: Verdict) -> Verdict {
        let status = self.status.max(other.status);
        if other.status > self.status {
            self.witness = other.witness;
            self.reason = other.reason;
        } else if self.reason.is_none() && other.status == self.status {
            self.reason = other.reason;
        }
        self.status = status;
        self.checked += other.checked;
        self.skipped += other.skipped;
        self
    }

    pub fn merge_all(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        items.into_iter().fold(Verdict::holds(0), Verdict::merge)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("verdict serializes")
    }

    /// `Holds (checked 12)`, `Fails [a=…, b=…]`, `Unknown (checked 3, skipped 4: reason)`.
    pub fn summary(&self) -> String {
        match self.status {
            Status::Holds => format!("Holds (checked {})", self.checked),
            Status::Fails => {
                let w: Vec<String> = self.witness.iter().map(|w| format!("{}={}", w.name, w.text)).collect();
                format!("Fails (checked {}) [{}]", self.checked, w.join(", "))
            }
            Status::Unknown => format!(
                "Unknown (checked {}, skipped {}: {})",
                self.checked,
                self.skipped,
                self.reason.as_deref().unwrap_or("bounded")
            ),
        }
    }
}

/// Running counts for a quantified check; the first failure wins.
#[derive(Debug, Default)]
pub struct Tally {
    pub checked: u64,
    pub skipped: u64,
    pub failure: Option<Vec<Witness>>,
    pub skip_reason: Option<String>,
}

impl Tally {
    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn skip(&mut self, reason: &str) {
        self.skipped += 1;
        if self.skip_reason.is_none() {
            self.skip_reason = Some(reason.to_string());
        }
    }

    /// Records a failure; returns true so callers can stop early.
    pub fn fail(&mut self, w: Vec<Witness>) -> bool {
        self.checked += 1;
        if self.failure.is_none() {
            self.failure = Some(w);
        }
        true
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn finish(self) -> Verdict {
        if let Some(w) = self.failure {
            let mut v = Verdict::fails(self.checked, w);
            v.skipped = self.skipped;
            v
        } else if self.skipped > 0 {
            Verdict::unknown(self.checked, self.skipped, self.skip_reason.unwrap_or_default())
        } else {
            Verdict::holds(self.checked)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_order() {
        let h = Verdict::holds(3);
        let u = Verdict::unknown(1, 2, "window");
        let f = Verdict::fails(1, vec![Witness::new("x", Value::Null, "x")]);
        assert_eq!(h.clone().merge(u.clone()).status, Status::Unknown);
        assert_eq!(u.clone().merge(f.clone()).status, Status::Fails);
        assert_eq!(f.clone().merge(h.clone()).status, Status::Fails);
        let m = Verdict::merge_all([h, u, f]);
        assert_eq!(m.checked, 5);
        assert_eq!(m.skipped, 2);
        assert_eq!(m.witness.len(), 1);
    }

    #[test]
    fn json_shape() {
        let v = Verdict::holds(4).to_json();
        assert_eq!(v["status"], "holds");
        assert_eq!(v["checked"], 4);
        assert_eq!(v["skipped"], 0);
        assert!(v["witness"].as_array().unwrap().is_empty());
    }
}
