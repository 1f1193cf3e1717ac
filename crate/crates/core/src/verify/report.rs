use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Reports keep at most this many serialized violations; the rest are only
/// counted.
pub const VIOLATION_CAP: usize = 16;

/// The statements the checkers know how to verify. The ids are the stable
/// names used on the command line and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statement {
    /// Antipodal edge-isoperimetric inequality, `|∂A| >= |∂(I ∪ Ī)|`.
    Theorem1,
    /// `f(A) <= 2F(|A|)` (and its large-size form).
    Theorem2,
    /// `F(x+y) - F(x) - F(y) >= min(x, y)`.
    Hart,
    /// The shifted Hart bound for `2^{n-1} <= y <= 2^{n-1} + x`.
    HartLarge,
    /// Some coordinate of every pair has nearly balanced sections.
    Balance,
    /// `2|C∩D| + 2|C∩D̄| <= |C∩C̄| + |D∩D̄| + 2 min(|C|, |D|)`.
    Cross,
    /// The exact counting identities.
    Identities,
}

impl Statement {
    pub const ALL: [Statement; 7] = [
        Statement::Theorem1,
        Statement::Theorem2,
        Statement::Hart,
        Statement::HartLarge,
        Statement::Balance,
        Statement::Cross,
        Statement::Identities,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statement::Theorem1 => "thm1",
            Statement::Theorem2 => "thm2",
            Statement::Hart => "lemma3",
            Statement::HartLarge => "lemma4",
            Statement::Balance => "lemma5",
            Statement::Cross => "lemma6",
            Statement::Identities => "identities",
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Statement::ALL
            .into_iter()
            .find(|st| st.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown statement {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl Mode {
    pub fn id(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "sampled" => Ok(Mode::Sampled),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Extremal value seen for one family size, and how many instances hit it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub min: i64,
    pub count: u64,
}

/// The mergeable body of a report. Merging is associative, and the result
/// does not depend on how instances were split into tallies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub instances: u64,
    pub violation_count: u64,
    /// Sorted, at most [`VIOLATION_CAP`] long.
    pub violations: Vec<String>,
    pub witnesses: BTreeMap<u64, Witness>,
    pub notes: BTreeMap<String, u64>,
}

impl Tally {
    pub fn violation(&mut self, description: String) {
        self.violation_count += 1;
        self.violations.push(description);
        if self.violations.len() > 4 * VIOLATION_CAP {
            self.trim();
        }
    }

    pub fn observe(&mut self, size: u64, value: i64) {
        let entry = self.witnesses.entry(size).or_insert(Witness { min: value, count: 0 });
        if value < entry.min {
            *entry = Witness { min: value, count: 0 };
        }
        if value == entry.min {
            entry.count += 1;
        }
    }

    pub fn note(&mut self, key: &str, amount: u64) {
        *self.notes.entry(key.to_string()).or_default() += amount;
    }

    /// Sorts and caps the stored violations.
    pub fn finish(mut self) -> Tally {
        self.trim();
        self
    }

    fn trim(&mut self) {
        self.violations.sort();
        self.violations.truncate(VIOLATION_CAP);
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self.trim();
        for (size, w) in other.witnesses {
            match self.witnesses.get_mut(&size) {
                None => {
                    self.witnesses.insert(size, w);
                }
                Some(mine) if w.min < mine.min => *mine = w,
                Some(mine) if w.min == mine.min => mine.count += w.count,
                Some(_) => {}
            }
        }
        for (key, amount) in other.notes {
            *self.notes.entry(key).or_default() += amount;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub statement: Statement,
    /// Dimension, or the largest dimension swept for statements that range
    /// over several.
    pub n: Option<u32>,
    pub mode: Mode,
    pub seed: Option<u64>,
    /// False when a budget stopped the run early.
    pub complete: bool,
    pub tally: Tally,
}

impl VerificationReport {
    pub fn new(statement: Statement, n: Option<u32>, mode: Mode, seed: Option<u64>) -> Self {
        VerificationReport { statement, n, mode, seed, complete: true, tally: Tally::default() }
    }

    pub fn passed(&self) -> bool {
        self.tally.violation_count == 0
    }

    pub fn instances(&self) -> u64 {
        self.tally.instances
    }

    pub const CSV_HEADER: &'static str = "statement,n,mode,seed,instances,violations,complete,pass";

    /// One CSV row matching [`Self::CSV_HEADER`], without a newline.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.statement,
            opt(self.n),
            self.mode.id(),
            opt(self.seed),
            self.tally.instances,
            self.tally.violation_count,
            self.complete,
            self.passed()
        )
    }

    pub fn to_csv(reports: &[VerificationReport]) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        for r in reports {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }
}

fn opt<T: fmt::Display>(value: Option<T>) -> String {
    value.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// Line-oriented `key=value` form; see the README for the field list.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "report")?;
        writeln!(f, "statement={}", self.statement)?;
        writeln!(f, "n={}", opt(self.n))?;
        writeln!(f, "mode={}", self.mode.id())?;
        writeln!(f, "seed={}", opt(self.seed))?;
        writeln!(f, "instances={}", self.tally.instances)?;
        writeln!(f, "violations={}", self.tally.violation_count)?;
        writeln!(f, "complete={}", self.complete)?;
        writeln!(f, "pass={}", self.passed())?;
        for (size, w) in &self.tally.witnesses {
            writeln!(f, "witness size={size} min={} count={}", w.min, w.count)?;
        }
        for (key, amount) in &self.tally.notes {
            writeln!(f, "note {key}={amount}")?;
        }
        for v in &self.tally.violations {
            writeln!(f, "violation {v}")?;
        }
        writeln!(f, "end")
    }
}
