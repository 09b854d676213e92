//! Outcome of one verification.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::Error;
use crate::weyl::DiffOp;

/// Witness lists are capped at this many printed terms.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub residual_terms: usize,
    pub witnesses: Vec<String>,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            status: Status::Pass,
            residual_terms: 0,
            witnesses: Vec::new(),
            elapsed_ms: 0,
            notes: Vec::new(),
        }
    }

    pub fn error(check: &str, e: &Error) -> Self {
        let mut r = CheckReport::new(check);
        r.status = Status::Error;
        r.witnesses.push(e.to_string());
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Records an operator that must vanish.
    pub fn residual(&mut self, label: &str, op: &DiffOp) -> &mut Self {
        if !op.is_zero() {
            self.status = Status::Fail;
            self.residual_terms += op.len();
            for t in op.term_strings() {
                self.witness(format!("{label}: {t}"));
            }
        }
        self
    }

    /// Records a scalar-valued condition; `detail` is shown on failure.
    pub fn require(&mut self, label: &str, ok: bool, detail: impl fmt::Display) -> &mut Self {
        if !ok {
            self.status = Status::Fail;
            self.residual_terms += 1;
            self.witness(format!("{label}: {detail}"));
        }
        self
    }

    pub fn witness(&mut self, w: String) {
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    pub fn note(&mut self, n: impl Into<String>) -> &mut Self {
        self.notes.push(n.into());
        self
    }

    /// Folds another report into this one (sub-checks of a suite).
    pub fn absorb(&mut self, o: &CheckReport) {
        if o.status == Status::Error {
            self.status = Status::Error;
        } else if o.status == Status::Fail && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.residual_terms += o.residual_terms;
        for w in &o.witnesses {
            self.witness(format!("{}: {w}", o.check));
        }
        self.notes.extend(o.notes.iter().map(|n| format!("{}: {n}", o.check)));
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<5} {} ({} residual terms, {} ms)", self.status, self.check, self.residual_terms, self.elapsed_ms)?;
        for w in &self.witnesses {
            write!(f, "\n      {w}")?;
        }
        for n in &self.notes {
            write!(f, "\n      note: {n}")?;
        }
        Ok(())
    }
}

/// Runs `f`, turning errors into an error report and filling in the time.
pub fn timed(check: &str, f: impl FnOnce(&mut CheckReport) -> crate::Result<()>) -> CheckReport {
    let start = Instant::now();
    let mut r = CheckReport::new(check);
    if let Err(e) = f(&mut r) {
        r = CheckReport::error(check, &e);
    }
    r.elapsed_ms = start.elapsed().as_millis() as u64;
    r
}
