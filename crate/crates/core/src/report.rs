use serde::Serialize;
use std::fmt;

/// How a law was checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    /// Every element of the (possibly bounded) domain.
    Exhaustive,
    /// `samples` pseudo-random elements drawn from a seeded generator.
    Sampled { samples: usize, seed: u64 },
}

impl Mode {
    pub fn sampled(samples: usize, seed: u64) -> Self {
        Mode::Sampled { samples, seed }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => write!(f, "exhaustive"),
            Mode::Sampled { samples, seed } => write!(f, "sampled(n={samples},seed={seed})"),
        }
    }
}

/// Global knobs shared by every checker.
#[derive(Debug, Clone)]
pub struct Opts {
    pub mode: Mode,
    /// Ceiling on the number of values any single enumeration may produce.
    pub max_enum: u64,
    /// Largest denominator used when enumerating or sampling distributions.
    pub max_den: u32,
}

impl Default for Opts {
    fn default() -> Self {
        Opts {
            mode: Mode::Exhaustive,
            max_enum: 1 << 24,
            max_den: 6,
        }
    }
}

impl Opts {
    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_max_den(mut self, max_den: u32) -> Self {
        self.max_den = max_den;
        self
    }

    pub fn with_max_enum(mut self, max_enum: u64) -> Self {
        self.max_enum = max_enum;
        self
    }

    pub fn seed(&self) -> u64 {
        match self.mode {
            Mode::Sampled { seed, .. } => seed,
            Mode::Exhaustive => 0,
        }
    }
}

/// One checked law: its name, how it was checked, how many instances were
/// evaluated, and the first counterexample if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub law: String,
    pub mode: String,
    pub instances: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// A list of certificates. The report is ok iff no certificate has a witness.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub certificates: Vec<Certificate>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ok(&self) -> bool {
        self.certificates.iter().all(Certificate::holds)
    }

    pub fn push(&mut self, law: impl Into<String>, mode: impl Into<String>, instances: u64, witness: Option<String>) {
        self.certificates.push(Certificate {
            law: law.into(),
            mode: mode.into(),
            instances,
            witness,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.certificates.extend(other.certificates);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates.iter().filter(|c| !c.holds())
    }

    pub fn first_failure(&self) -> Option<&Certificate> {
        self.failures().next()
    }

    pub fn get(&self, law: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.law == law)
    }

    pub fn instances(&self, law: &str) -> u64 {
        self.get(law).map_or(0, |c| c.instances)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.certificates {
            match &c.witness {
                None => writeln!(f, "  ok    {} [{}; {} instances]", c.law, c.mode, c.instances)?,
                Some(w) => writeln!(f, "  FAIL  {} [{}; {} instances] witness: {}", c.law, c.mode, c.instances, w)?,
            }
        }
        Ok(())
    }
}

/// Runs `check` over `items` and records the first failure.
pub(crate) fn check_all<T>(
    report: &mut Report,
    law: &str,
    mode: &str,
    items: impl IntoIterator<Item = T>,
    mut check: impl FnMut(&T) -> Option<String>,
) {
    let mut n = 0u64;
    let mut witness = None;
    for it in items {
        n += 1;
        if let Some(w) = check(&it) {
            witness = Some(w);
            break;
        }
    }
    report.push(law, mode, n, witness);
}
