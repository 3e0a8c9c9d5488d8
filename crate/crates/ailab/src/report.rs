//! Deterministic text reports, pinned-constant files, and run manifests.
//!
//! Reports are stable byte-for-byte across runs and worker counts: insertion
//! order only, no timestamps, no float formatting surprises (every float is
//! rendered with three decimals). Wall-clock and command provenance go into
//! the separate run manifest, which is allowed to differ between runs.
//!
//! Pins follow a compare-not-repin discipline: the first run freezes a value,
//! later runs only compare against it. Re-freezing requires deleting the pin
//! file by hand.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("pin io: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt pin file: {0}")]
    CorruptPins(String),
    #[error("pinned {name} = {pinned}, observed {observed} violates it")]
    PinViolated { name: String, pinned: f64, observed: f64 },
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// One verification run's human-readable, machine-stable output.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub title: String,
    params: Vec<(String, String)>,
    records: Vec<String>,
    checks: Vec<Check>,
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.3}")
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), ..Default::default() }
    }

    pub fn param(&mut self, name: impl Into<String>, value: impl ToString) {
        self.params.push((name.into(), value.to_string()));
    }

    pub fn record(&mut self, line: impl Into<String>) {
        self.records.push(line.into());
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "ailab-report v1").unwrap();
        writeln!(out, "title {}", self.title).unwrap();
        for (name, value) in &self.params {
            writeln!(out, "param {name} = {value}").unwrap();
        }
        for record in &self.records {
            writeln!(out, "record {record}").unwrap();
        }
        for check in &self.checks {
            let verdict = if check.passed { "PASS" } else { "FAIL" };
            writeln!(out, "check {verdict} {}: {}", check.name, check.detail).unwrap();
        }
        writeln!(out, "result {}", if self.passed() { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

/// Frozen constants, keyed by name, persisted as sorted text.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pins(BTreeMap<String, f64>);

impl Pins {
    pub fn new() -> Self {
        Pins::default()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.0.insert(name.into(), value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// The freeze-once rule: returns the already-pinned value if present,
    /// otherwise freezes `observed` and returns it.
    pub fn pin_or_get(&mut self, name: &str, observed: f64) -> f64 {
        *self.0.entry(name.to_string()).or_insert(observed)
    }

    /// Asserts `observed ≤ pinned`; pins `observed` first if unseen.
    pub fn check_upper(&mut self, name: &str, observed: f64) -> Result<f64, ReportError> {
        let pinned = self.pin_or_get(name, observed);
        if observed <= pinned {
            Ok(pinned)
        } else {
            Err(ReportError::PinViolated { name: name.to_string(), pinned, observed })
        }
    }

    pub fn load(path: &Path) -> Result<Self, ReportError> {
        let text = fs::read_to_string(path)?;
        let corrupt = |why: &str| ReportError::CorruptPins(format!("{}: {why}", path.display()));
        let mut lines = text.lines();
        if lines.next() != Some("ailab-pins v1") {
            return Err(corrupt("bad header"));
        }
        let mut pins = BTreeMap::new();
        for line in lines {
            let (name, value) = line.split_once(' ').ok_or_else(|| corrupt("bad line"))?;
            let value: f64 = value.parse().map_err(|_| corrupt("bad value"))?;
            pins.insert(name.to_string(), value);
        }
        Ok(Pins(pins))
    }

    pub fn save(&self, path: &Path) -> Result<(), ReportError> {
        let mut out = String::from("ailab-pins v1\n");
        for (name, value) in &self.0 {
            writeln!(out, "{name} {value}").unwrap();
        }
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, out)?;
        Ok(())
    }

    /// Loads the file if it exists, otherwise starts empty.
    pub fn load_or_default(path: &Path) -> Result<Self, ReportError> {
        if path.exists() {
            Pins::load(path)
        } else {
            Ok(Pins::new())
        }
    }
}

/// Smallest `b` with `y ≤ a·x + b` over all points; `None` for no points.
pub fn affine_envelope_intercept(points: &[(f64, f64)], a: f64) -> Option<f64> {
    points
        .iter()
        .map(|&(x, y)| y - a * x)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |m: f64| m.max(v))))
}

/// Points violating `y ≤ a·x + b`, rendered for a report.
pub fn affine_envelope_violations(points: &[(f64, f64)], a: f64, b: f64) -> Vec<String> {
    points
        .iter()
        .filter(|&&(x, y)| y > a * x + b)
        .map(|&(x, y)| format!("({}, {}) above {}·x + {}", fmt_f64(x), fmt_f64(y), fmt_f64(a), fmt_f64(b)))
        .collect()
}

/// The side-channel provenance file written next to each report. The report
/// itself stays timestamp-free so it can be compared byte-for-byte.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub machine_fingerprint: String,
    pub wall_clock_ms: u128,
    pub passed: bool,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::from("ailab-manifest v1\n");
        writeln!(out, "command {}", self.command).unwrap();
        for (name, value) in &self.params {
            writeln!(out, "param {name} = {value}").unwrap();
        }
        writeln!(out, "fingerprint {}", self.machine_fingerprint).unwrap();
        writeln!(out, "wall_clock_ms {}", self.wall_clock_ms).unwrap();
        writeln!(out, "result {}", if self.passed { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}
