//! Per-axiom verification reports.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomRecord {
    pub name: String,
    /// Truncation order to which the axiom was verified; `None` for exact
    /// (finite-dimensional) checks.
    pub certified_order: Option<usize>,
    pub passed: bool,
    /// First failing coefficient or basis element.
    pub counterexample: Option<String>,
}

impl AxiomRecord {
    pub fn new(name: &str, outcome: Result<(), String>) -> Self {
        Self {
            name: name.to_string(),
            certified_order: None,
            passed: outcome.is_ok(),
            counterexample: outcome.err(),
        }
    }

    pub fn at_order(mut self, order: usize) -> Self {
        self.certified_order = Some(order);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub subject: String,
    pub records: Vec<AxiomRecord>,
}

impl VerificationReport {
    pub fn new(subject: &str) -> Self {
        Self { subject: subject.to_string(), records: Vec::new() }
    }

    pub fn push(&mut self, record: AxiomRecord) {
        self.records.push(record);
    }

    pub fn check(&mut self, name: &str, outcome: Result<(), String>) {
        self.push(AxiomRecord::new(name, outcome));
    }

    pub fn check_at(&mut self, name: &str, order: usize, outcome: Result<(), String>) {
        self.push(AxiomRecord::new(name, outcome).at_order(order));
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.records.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect()
    }

    pub fn record(&self, name: &str) -> Option<&AxiomRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.subject, if self.passed() { "PASS" } else { "FAIL" })?;
        for r in &self.records {
            let order = r.certified_order.map_or_else(|| "exact".to_string(), |t| format!("order {t}"));
            write!(f, "  [{}] {} ({order})", if r.passed { "pass" } else { "FAIL" }, r.name)?;
            if let Some(c) = &r.counterexample {
                write!(f, ": {c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
