use crate::graph::Weight;
use std::fmt;
use std::time::Duration;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseOutcome {
    Pass,
    Fail,
    /// The solver ran out of time; neither proven nor refuted.
    Unknown,
}

impl fmt::Display for CaseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseOutcome::Pass => "PASS",
            CaseOutcome::Fail => "FAIL",
            CaseOutcome::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseRecord {
    pub case: String,
    pub budget: Option<Weight>,
    pub achieved: Option<Weight>,
    pub decision: Option<bool>,
    pub outcome: CaseOutcome,
    pub runtime: Duration,
    pub nodes: u64,
    pub note: String,
}

impl CaseRecord {
    pub fn new(case: impl Into<String>) -> Self {
        CaseRecord {
            case: case.into(),
            budget: None,
            achieved: None,
            decision: None,
            outcome: CaseOutcome::Pass,
            runtime: Duration::ZERO,
            nodes: 0,
            note: String::new(),
        }
    }

    pub fn budget(mut self, b: Weight) -> Self {
        self.budget = Some(b);
        self
    }

    pub fn achieved(mut self, w: Weight) -> Self {
        self.achieved = Some(w);
        self
    }

    pub fn decision(mut self, yes: bool) -> Self {
        self.decision = Some(yes);
        self
    }

    pub fn nodes(mut self, n: u64) -> Self {
        self.nodes += n;
        self
    }

    pub fn note(mut self, s: impl AsRef<str>) -> Self {
        if !self.note.is_empty() {
            self.note.push_str("; ");
        }
        self.note.push_str(s.as_ref());
        self
    }

    /// Records a predicate. A failed check turns the case to FAIL and
    /// appends `what` to the note; UNKNOWN is never upgraded.
    pub fn check(mut self, ok: bool, what: impl AsRef<str>) -> Self {
        if !ok {
            if self.outcome == CaseOutcome::Pass {
                self.outcome = CaseOutcome::Fail;
            }
            self = self.note(format!("failed: {}", what.as_ref()));
        }
        self
    }

    pub fn fail(self, why: impl AsRef<str>) -> Self {
        self.check(false, why)
    }

    pub fn unknown(mut self, why: impl AsRef<str>) -> Self {
        self.outcome = CaseOutcome::Unknown;
        self.note(why)
    }

    /// One tab-separated row:
    /// `case budget achieved decision outcome runtime_ms nodes note`.
    pub fn row(&self) -> String {
        let opt = |w: Option<Weight>| w.map_or("-".to_string(), |w| w.to_string());
        let decision = match self.decision {
            Some(true) => "YES",
            Some(false) => "NO",
            None => "-",
        };
        let note = if self.note.is_empty() { "-" } else { &self.note };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.case,
            opt(self.budget),
            opt(self.achieved),
            decision,
            self.outcome,
            self.runtime.as_millis(),
            self.nodes,
            note
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentParams {
    pub k: usize,
    pub n: Vec<usize>,
    /// Number of seeded cases; seeds run `seed_base .. seed_base + seeds`.
    pub seeds: u64,
    pub seed_base: u64,
    /// Per solver call; `None` lets every search run to completion.
    pub timeout: Option<Duration>,
}

impl fmt::Display for ExperimentParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n: Vec<String> = self.n.iter().map(|n| n.to_string()).collect();
        write!(f, "k={} n={} seeds={} seed_base={}", self.k, n.join(","), self.seeds, self.seed_base)?;
        match self.timeout {
            Some(t) => write!(f, " timeout={}s", t.as_secs_f64()),
            None => write!(f, " timeout=none"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentReport {
    pub name: String,
    pub params: ExperimentParams,
    /// Budget constants recomputed for this run, e.g. `C*_2`.
    pub constants: Vec<(String, Weight)>,
    pub cases: Vec<CaseRecord>,
}

impl ExperimentReport {
    /// PASS only if every case passed; any FAIL wins over UNKNOWN. A report
    /// with no cases proves nothing and is INCONCLUSIVE.
    pub fn verdict(&self) -> Verdict {
        if self.cases.is_empty() {
            Verdict::Inconclusive
        } else if self.cases.iter().any(|c| c.outcome == CaseOutcome::Fail) {
            Verdict::Fail
        } else if self.cases.iter().any(|c| c.outcome == CaseOutcome::Unknown) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    pub fn count(&self, outcome: CaseOutcome) -> usize {
        self.cases.iter().filter(|c| c.outcome == outcome).count()
    }

    pub fn cases_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CaseRecord> + 'a {
        self.cases.iter().filter(move |c| c.case.starts_with(prefix))
    }

    /// Flat results table, one case per line, prefixed by the experiment name.
    pub fn table(&self) -> String {
        let mut out = String::from("experiment\tcase\tbudget\tachieved\tdecision\toutcome\truntime_ms\tnodes\tnote\n");
        for c in &self.cases {
            out.push_str(&self.name);
            out.push('\t');
            out.push_str(&c.row());
            out.push('\n');
        }
        out
    }

    pub fn total_runtime(&self) -> Duration {
        self.cases.iter().map(|c| c.runtime).sum()
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "experiment {}", self.name)?;
        writeln!(f, "params {}", self.params)?;
        for (name, value) in &self.constants {
            writeln!(f, "constant {name} {value}")?;
        }
        writeln!(
            f,
            "cases {} pass {} fail {} unknown {}",
            self.cases.len(),
            self.count(CaseOutcome::Pass),
            self.count(CaseOutcome::Fail),
            self.count(CaseOutcome::Unknown)
        )?;
        for c in &self.cases {
            writeln!(f, "case {}", c.row())?;
        }
        write!(f, "verdict {}", self.verdict())
    }
}
