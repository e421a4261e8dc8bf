//! Structured pass/fail reports with a witness for the first failure of each clause.

use serde::Serialize;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Clause {
    pub clause: String,
    pub pass: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Clause {
    pub fn new(name: impl Into<String>) -> Self {
        Clause { clause: name.into(), pass: true, checked: 0, witness: None }
    }

    /// Records one instance; the witness closure runs only on the first failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.pass {
            self.pass = false;
            self.witness = Some(witness());
        }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.record(false, || witness.into());
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub subject: String,
    pub clauses: Vec<Clause>,
}

impl Report {
    pub fn new(check: impl Into<String>, subject: impl Into<String>) -> Self {
        Report { check: check.into(), subject: subject.into(), clauses: Vec::new() }
    }

    pub fn push(&mut self, c: Clause) {
        self.clauses.push(c);
    }

    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Clause> {
        self.clauses.iter().find(|c| !c.pass)
    }

    /// Mutable access to a clause by name, creating it if absent.
    pub fn clause(&mut self, name: &str) -> &mut Clause {
        if let Some(i) = self.clauses.iter().position(|c| c.clause == name) {
            return &mut self.clauses[i];
        }
        self.clauses.push(Clause::new(name));
        self.clauses.last_mut().unwrap()
    }

    pub fn summary(&self) -> String {
        match self.first_failure() {
            None => format!("{} [{}]: pass", self.check, self.subject),
            Some(c) => format!(
                "{} [{}]: FAIL at {} ({})",
                self.check,
                self.subject,
                c.clause,
                c.witness.as_deref().unwrap_or("")
            ),
        }
    }
}
