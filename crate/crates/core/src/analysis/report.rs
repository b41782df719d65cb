use std::fmt::Write as _;
use std::io::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::config::{GridSpec, Tolerances};

/// A computed value, optionally paired with its closed-form reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub value: f64,
    /// The closed form the reference value comes from, e.g. "(4π/3)^N".
    pub formula: String,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl Reference {
    pub fn new(computed: f64, value: f64, formula: impl Into<String>) -> Self {
        let abs_err = (computed - value).abs();
        Self {
            value,
            formula: formula.into(),
            abs_err,
            rel_err: relative_error(computed, value),
        }
    }
}

/// |a − b| / |b|, or |a − b| when b = 0.
pub fn relative_error(computed: f64, reference: f64) -> f64 {
    let abs = (computed - reference).abs();
    if reference == 0.0 {
        abs
    } else {
        abs / reference.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub version: String,
}

impl Provenance {
    pub fn new(grid: GridSpec, tolerances: Tolerances, seed: u64) -> Self {
        Self {
            grid,
            tolerances,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub quantities: Vec<Quantity>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub provenance: Provenance,
    #[serde(with = "duration_secs")]
    pub duration: Duration,
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

impl Report {
    pub fn new(scenario: impl Into<String>, provenance: Provenance) -> Self {
        Self {
            scenario: scenario.into(),
            quantities: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            provenance,
            duration: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn quantity(&mut self, name: impl Into<String>, value: f64) {
        self.quantities.push(Quantity {
            name: name.into(),
            value,
            reference: None,
        });
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Records `value` against `reference` and checks relative error ≤ `rel_tol`.
    pub fn compare_rel(
        &mut self,
        name: impl Into<String>,
        value: f64,
        reference: f64,
        formula: &str,
        rel_tol: f64,
    ) -> bool {
        let name = name.into();
        let r = Reference::new(value, reference, formula);
        let passed = r.rel_err <= rel_tol;
        let detail = format!("rel err {:.3e} (tol {rel_tol:.1e})", r.rel_err);
        self.quantities.push(Quantity {
            name: name.clone(),
            value,
            reference: Some(r),
        });
        self.check(name, passed, detail);
        passed
    }

    /// Records `value` against `reference` and checks absolute error ≤ `abs_tol`.
    pub fn compare_abs(
        &mut self,
        name: impl Into<String>,
        value: f64,
        reference: f64,
        formula: &str,
        abs_tol: f64,
    ) -> bool {
        let name = name.into();
        let r = Reference::new(value, reference, formula);
        let passed = r.abs_err <= abs_tol;
        let detail = format!("abs err {:.3e} (tol {abs_tol:.1e})", r.abs_err);
        self.quantities.push(Quantity {
            name: name.clone(),
            value,
            reference: Some(r),
        });
        self.check(name, passed, detail);
        passed
    }

    /// Everything except wall-clock time; identical configs give identical
    /// fingerprints.
    pub fn numeric_fingerprint(&self) -> String {
        let mut r = self.clone();
        r.duration = Duration::ZERO;
        serde_json::to_string(&r).expect("report serializes")
    }

    /// One JSON record per quantity and check, then a summary record.
    pub fn write_jsonl(&self, out: &mut impl Write) -> std::io::Result<()> {
        for q in &self.quantities {
            let rec = serde_json::json!({
                "record": "quantity",
                "scenario": self.scenario,
                "name": q.name,
                "value": q.value,
                "reference": q.reference,
            });
            writeln!(out, "{rec}")?;
        }
        for c in &self.checks {
            let rec = serde_json::json!({
                "record": "check",
                "scenario": self.scenario,
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            });
            writeln!(out, "{rec}")?;
        }
        let rec = serde_json::json!({
            "record": "summary",
            "scenario": self.scenario,
            "passed": self.passed(),
            "n_checks": self.checks.len(),
            "n_failed": self.failures().count(),
            "notes": self.notes,
            "provenance": self.provenance,
            "duration_s": self.duration.as_secs_f64(),
        });
        writeln!(out, "{rec}")
    }

    /// Human-readable table.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "== {} [{}] ({:.3} s)",
            self.scenario,
            if self.passed() { "PASS" } else { "FAIL" },
            self.duration.as_secs_f64()
        );
        if !self.quantities.is_empty() {
            let _ = writeln!(
                s,
                "  {:<40} {:>24} {:>24} {:>10}  closed form",
                "quantity", "value", "reference", "rel err"
            );
            for q in &self.quantities {
                match &q.reference {
                    Some(r) => {
                        let _ = writeln!(
                            s,
                            "  {:<40} {:>24.16e} {:>24.16e} {:>10.2e}  {}",
                            q.name, q.value, r.value, r.rel_err, r.formula
                        );
                    }
                    None => {
                        let _ = writeln!(s, "  {:<40} {:>24.16e}", q.name, q.value);
                    }
                }
            }
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "  [{}] {} -- {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }

    /// CSV rows `scenario,name,value,reference,formula,abs_err,rel_err`.
    pub fn write_csv<W: Write>(&self, w: &mut csv::Writer<W>) -> csv::Result<()> {
        for q in &self.quantities {
            let (reference, formula, abs_err, rel_err) = match &q.reference {
                Some(r) => (
                    format!("{:.16e}", r.value),
                    r.formula.clone(),
                    format!("{:.16e}", r.abs_err),
                    format!("{:.16e}", r.rel_err),
                ),
                None => Default::default(),
            };
            w.write_record([
                self.scenario.clone(),
                q.name.clone(),
                format!("{:.16e}", q.value),
                reference,
                formula,
                abs_err,
                rel_err,
            ])?;
        }
        Ok(())
    }
}

pub const CSV_HEADER: [&str; 7] = [
    "scenario",
    "name",
    "value",
    "reference",
    "formula",
    "abs_err",
    "rel_err",
];

/// Reports from a full verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub reports: Vec<Report>,
    #[serde(with = "duration_secs")]
    pub duration: Duration,
}

impl AggregateReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }

    pub fn get(&self, scenario: &str) -> Option<&Report> {
        self.reports.iter().find(|r| r.scenario == scenario)
    }

    pub fn numeric_fingerprint(&self) -> String {
        self.reports
            .iter()
            .map(Report::numeric_fingerprint)
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn summary_table(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            let failed = r.failures().count();
            let _ = writeln!(
                s,
                "{:<32} {:<4} {:>4}/{:<4} {:>8.3} s",
                r.scenario,
                if r.passed() { "PASS" } else { "FAIL" },
                r.checks.len() - failed,
                r.checks.len(),
                r.duration.as_secs_f64()
            );
        }
        let _ = writeln!(
            s,
            "total: {} [{}] in {:.3} s",
            self.reports.len(),
            if self.passed() { "PASS" } else { "FAIL" },
            self.duration.as_secs_f64()
        );
        s
    }
}
