use serde::Serialize;
use serde_json::Value;

/// One checked claim instance.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub group: String,
    pub p: Option<u64>,
    pub params: Value,
    pub expected: Value,
    pub observed: Value,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(group: impl Into<String>, p: Option<u64>, params: Value, expected: Value, observed: Value, pass: bool) -> CheckRecord {
        CheckRecord {
            group: group.into(),
            p,
            params,
            expected,
            observed,
            pass,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub records: Vec<CheckRecord>,
    pub skips: usize,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl VerdictReport {
    pub fn new(suite: &str, seed: u64) -> VerdictReport {
        VerdictReport {
            suite: suite.to_string(),
            seed,
            pass: true,
            records: Vec::new(),
            skips: 0,
            warnings: Vec::new(),
            runtime_ms: None,
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn warn(&mut self, warning: String) {
        self.warnings.push(warning);
    }

    /// Sets `pass` from the records; an empty suite passes.
    pub fn finish(mut self, started: std::time::Instant) -> VerdictReport {
        self.pass = self.records.iter().all(|r| r.pass);
        self.runtime_ms = Some(started.elapsed().as_millis() as u64);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn without_timing(mut self) -> VerdictReport {
        self.runtime_ms = None;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
