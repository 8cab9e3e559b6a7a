use std::fmt::{self, Debug};
use std::time::Instant;

use serde::Serialize;
use serde_json::{Map, Value};

/// One identity that did not hold, with its inputs and both sides.
#[derive(Clone, Debug, Serialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    pub identity: String,
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
    pub data: Map<String, Value>,
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "suite {}: {verdict} ({} cases, {} failures, {} ms)", self.suite, self.cases, self.failures.len(), self.wall_ms)?;
        for x in &self.failures {
            writeln!(f, "  FAIL {} [{}]: {} != {}", x.identity, x.inputs, x.lhs, x.rhs)?;
        }
        for (k, v) in &self.data {
            writeln!(f, "  {k}: {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Accumulates cases for one suite.
pub struct Suite {
    name: &'static str,
    start: Instant,
    cases: usize,
    failures: Vec<Failure>,
    notes: Vec<String>,
    data: Map<String, Value>,
}

impl Suite {
    pub fn new(name: &'static str) -> Self {
        Suite { name, start: Instant::now(), cases: 0, failures: Vec::new(), notes: Vec::new(), data: Map::new() }
    }

    pub fn eq<T: PartialEq + Debug>(&mut self, identity: &str, inputs: impl Into<String>, lhs: T, rhs: T) {
        self.cases += 1;
        if lhs != rhs {
            self.failures.push(Failure { identity: identity.into(), inputs: inputs.into(), lhs: format!("{lhs:?}"), rhs: format!("{rhs:?}") });
        }
    }

    pub fn holds(&mut self, identity: &str, inputs: impl Into<String>, ok: bool) {
        self.eq(identity, inputs, ok, true);
    }

    /// Record a library error as a failed case and swallow it.
    pub fn attempt<T, E: fmt::Display>(&mut self, identity: &str, inputs: impl Into<String>, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.failures.push(Failure { identity: identity.into(), inputs: inputs.into(), lhs: format!("error: {e}"), rhs: "a value".into() });
                None
            }
        }
    }

    pub fn absorb(&mut self, cases: usize, failures: Vec<Failure>) {
        self.cases += cases;
        self.failures.extend(failures);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn data(&mut self, key: &str, v: Value) {
        self.data.insert(key.into(), v);
    }

    pub fn finish(mut self) -> SuiteReport {
        self.failures.sort();
        SuiteReport {
            suite: self.name.into(),
            cases: self.cases,
            failures: self.failures,
            notes: self.notes,
            data: self.data,
            wall_ms: self.start.elapsed().as_millis(),
        }
    }
}
