//! Suite reports and the CLI report schema.
//!
//! Identity suites return an [`IdentityReport`]: one entry per verified
//! identity with the number of tuples checked, the sampling mode, and any
//! counterexamples found. The CLI flattens these into a [`Report`] that
//! renders identically as a table or as JSON.

use serde::Serialize;

const MAX_RECORDED_COUNTEREXAMPLES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, samples: u64 },
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl Counterexample {
    pub fn render(&self) -> String {
        format!(
            "inputs [{}]: lhs = {}, rhs = {}",
            self.inputs.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Debug, Clone)]
pub struct IdentityResult {
    pub name: String,
    pub mode: CheckMode,
    pub checked: u64,
    pub failure_count: u64,
    pub failures: Vec<Counterexample>,
    /// Informational only; never affects the verdict.
    pub note: Option<String>,
}

impl IdentityResult {
    pub fn new(name: impl Into<String>, mode: CheckMode) -> Self {
        IdentityResult {
            name: name.into(),
            mode,
            checked: 0,
            failure_count: 0,
            failures: Vec::new(),
            note: None,
        }
    }

    pub fn exhaustive(name: impl Into<String>) -> Self {
        IdentityResult::new(name, CheckMode::Exhaustive)
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Counterexample) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_RECORDED_COUNTEREXAMPLES {
                self.failures.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub suite: String,
    pub model: String,
    pub p: usize,
    pub identities: Vec<IdentityResult>,
}

impl IdentityReport {
    pub fn new(suite: impl Into<String>, model: impl Into<String>, p: usize) -> Self {
        IdentityReport {
            suite: suite.into(),
            model: model.into(),
            p,
            identities: Vec::new(),
        }
    }

    pub fn push(&mut self, result: IdentityResult) {
        self.identities.push(result);
    }

    pub fn passed(&self) -> bool {
        self.identities.iter().all(|i| i.passed())
    }

    /// Seed recorded iff any identity was checked by sampling.
    pub fn seed(&self) -> Option<u64> {
        self.identities.iter().find_map(|i| match i.mode {
            CheckMode::Sampled { seed, .. } => Some(seed),
            CheckMode::Exhaustive => None,
        })
    }

    pub fn merge(&mut self, other: IdentityReport) {
        self.identities.extend(other.identities);
    }
}

// ---------------------------------------------------------------------------
// CLI-level report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub title: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub p: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tables: Vec<Table>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: impl Into<String>, model: impl Into<String>, p: usize) -> Self {
        Report {
            command: command.into(),
            model: model.into(),
            p,
            seed: None,
            tables: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn absorb_identities(&mut self, report: &IdentityReport) {
        if self.seed.is_none() {
            self.seed = report.seed();
        }
        let mut rows = Vec::new();
        for id in &report.identities {
            let mode = match id.mode {
                CheckMode::Exhaustive => "exhaustive".to_string(),
                CheckMode::Sampled { samples, .. } => format!("sampled({samples})"),
            };
            rows.push(vec![
                id.name.clone(),
                mode,
                id.checked.to_string(),
                id.failure_count.to_string(),
            ]);
            self.verdicts.push(Verdict {
                name: format!("{}: {}", report.suite, id.name),
                pass: id.passed(),
                counterexample: id.failures.first().map(|c| c.render()),
            });
        }
        self.tables.push(Table {
            title: format!("suite {} on {} (p = {})", report.suite, report.model, report.p),
            headers: vec![
                "identity".into(),
                "mode".into(),
                "checked".into(),
                "failures".into(),
            ],
            rows,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "command: {}\nmodel: {}\np: {}\n",
            self.command, self.model, self.p
        ));
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        for table in &self.tables {
            out.push('\n');
            out.push_str(&render_table(table));
        }
        if !self.verdicts.is_empty() {
            out.push_str("\nverdicts:\n");
            for v in &self.verdicts {
                let status = if v.pass { "pass" } else { "FAIL" };
                out.push_str(&format!("  {status}  {}\n", v.name));
                if let Some(ce) = &v.counterexample {
                    out.push_str(&format!("        {ce}\n"));
                }
            }
        }
        out
    }
}

fn render_table(table: &Table) -> String {
    let mut widths: Vec<usize> = table.headers.iter().map(|h| h.len()).collect();
    for row in &table.rows {
        for (i, cell) in row.iter().enumerate() {
            if i >= widths.len() {
                widths.push(cell.len());
            } else if cell.len() > widths[i] {
                widths[i] = cell.len();
            }
        }
    }
    let mut out = format!("{}\n", table.title);
    let fmt_row = |cells: &[String]| -> String {
        let mut line = String::from("  ");
        for (i, cell) in cells.iter().enumerate() {
            let w = widths.get(i).copied().unwrap_or(cell.len());
            line.push_str(&format!("{cell:<w$}"));
            if i + 1 < cells.len() {
                line.push_str("  ");
            }
        }
        line.trim_end().to_string()
    };
    out.push_str(&fmt_row(&table.headers));
    out.push('\n');
    for row in &table.rows {
        out.push_str(&fmt_row(row));
        out.push('\n');
    }
    out
}
