//! Structured verification results.
//!
//! Every check returns a [`Report`]: a verdict plus the facts and witnesses that
//! justify it. Rendering is deterministic so that identical inputs give byte-identical
//! report files.

use std::fmt::{self, Write as _};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// An existential hypothesis could not be certified (e.g. no ample class found).
    NotCertified,
    /// Pure computation, nothing checked.
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotCertified => "not-certified",
            Verdict::Info => "info",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub verdict: Verdict,
    pub facts: Vec<(String, String)>,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
    pub children: Vec<Report>,
}

impl Report {
    pub fn new(check: impl Into<String>, verdict: Verdict) -> Self {
        Report {
            check: check.into(),
            verdict,
            facts: Vec::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn from_bool(check: impl Into<String>, ok: bool) -> Self {
        Self::new(check, if ok { Verdict::Pass } else { Verdict::Fail })
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn fact(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.facts.push((key.into(), value.to_string()));
        self
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witnesses.push(w.into());
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn child(mut self, r: Report) -> Self {
        self.children.push(r);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.facts.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = writeln!(out, "{pad}check: {}", self.check);
        let _ = writeln!(out, "{pad}verdict: {}", self.verdict);
        for (k, v) in &self.facts {
            let _ = writeln!(out, "{pad}{k}: {v}");
        }
        for w in &self.witnesses {
            let _ = writeln!(out, "{pad}witness: {w}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "{pad}note: {n}");
        }
        for c in &self.children {
            let _ = writeln!(out, "{pad}-");
            c.render_into(out, depth + 1);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Formats a list of numbers as `(a, b, c)`.
pub fn tuple<T: fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}
