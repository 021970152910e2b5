//! Verification campaigns: configuration, suite dispatch and reports.
//!
//! A report is a stream of JSON lines (header, one line per check, summary).
//! Wall times go to a separate stream so that reports are byte-stable for a
//! fixed configuration.

mod export;
pub mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::complexes::Variant;
use crate::error::{CoreError, Result};
use crate::sho::{KAPPA_EVEN, KAPPA_ODD};
use crate::sl2::Conventions;

pub use export::{export_tables, TableFile};
pub use suites::{monomial_carrier_sample, monomial_top_sample, phi_graded_sample};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_SCHEMA: u32 = 1;

/// Groups of checks selectable with `--check`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Contraction,
    Homotopy,
    Transfer,
    Jacobi,
    Sho,
    Cocycle,
    Sl2,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Algebra,
        Suite::Contraction,
        Suite::Homotopy,
        Suite::Transfer,
        Suite::Jacobi,
        Suite::Sho,
        Suite::Cocycle,
        Suite::Sl2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Contraction => "contraction",
            Suite::Homotopy => "homotopy",
            Suite::Transfer => "transfer",
            Suite::Jacobi => "jacobi",
            Suite::Sho => "sho",
            Suite::Cocycle => "cocycle",
            Suite::Sl2 => "sl2",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CoreError::InvalidConfig(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignConfig {
    pub d: usize,
    pub variant: Variant,
    /// Bound on the total degree of sampled polynomials.
    pub max_degree: u32,
    /// Samples per check.
    pub trials: usize,
    pub seed: u64,
    pub arity_cap: usize,
    pub suites: Vec<Suite>,
    pub format: OutputFormat,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            d: 3,
            variant: Variant::Mbcov,
            max_degree: 4,
            trials: 200,
            seed: 42,
            arity_cap: 4,
            suites: Suite::ALL.to_vec(),
            format: OutputFormat::Text,
        }
    }
}

/// Largest dimension accepted by campaigns.
pub const MAX_CAMPAIGN_DIM: usize = 6;

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.d > MAX_CAMPAIGN_DIM {
            return Err(CoreError::InvalidConfig(format!("d must be in 1..={MAX_CAMPAIGN_DIM}, got {}", self.d)));
        }
        self.variant.validate(self.d)?;
        if self.trials == 0 {
            return Err(CoreError::InvalidConfig("trials must be positive".into()));
        }
        if self.max_degree == 0 {
            return Err(CoreError::InvalidConfig("deg must be positive".into()));
        }
        if self.arity_cap < 2 {
            return Err(CoreError::ArityCap(self.arity_cap));
        }
        Ok(())
    }

    pub fn runs(&self, s: Suite) -> bool {
        self.suites.contains(&s)
    }
}

/// One exact check.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    /// The statement being checked.
    pub anchor: String,
    /// SHA-256 of the serialized inputs, in sampling order.
    pub inputs_hash: String,
    pub samples: usize,
    /// Samples on which the identity had a nonzero term, when measured.
    pub nontrivial: Option<usize>,
    pub failures: usize,
    pub passed: bool,
    /// Informational checks never affect the exit status.
    pub required: bool,
    pub witness: Option<String>,
}

/// Accumulates samples, the input digest and the first witness of a check.
pub(crate) struct Probe {
    suite: Suite,
    name: String,
    anchor: String,
    hasher: Sha256,
    samples: usize,
    nontrivial: usize,
    failures: usize,
    witness: Option<String>,
    required: bool,
    /// Minimum nontrivial samples for the check to pass.
    min_nontrivial: usize,
}

impl Probe {
    pub(crate) fn new(suite: Suite, name: impl Into<String>, anchor: impl Into<String>) -> Self {
        Probe {
            suite,
            name: name.into(),
            anchor: anchor.into(),
            hasher: Sha256::new(),
            samples: 0,
            nontrivial: 0,
            failures: 0,
            witness: None,
            required: true,
            min_nontrivial: 0,
        }
    }

    pub(crate) fn needs_nontrivial(mut self, n: usize) -> Self {
        self.min_nontrivial = n;
        self
    }

    pub(crate) fn input(&mut self, s: &str) {
        self.hasher.update(s.as_bytes());
        self.hasher.update(b"\n");
    }

    /// Records one sample; `witness` serializes its inputs.
    pub(crate) fn check(&mut self, ok: bool, nontrivial: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if nontrivial {
            self.nontrivial += 1;
        }
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub(crate) fn finish(self) -> CheckRecord {
        let passed = self.failures == 0 && self.samples > 0 && self.nontrivial >= self.min_nontrivial;
        let witness = match (&self.witness, passed) {
            (Some(w), _) => Some(w.clone()),
            (None, false) if self.samples == 0 => Some("no samples".into()),
            (None, false) => Some(format!("only {} nontrivial samples, need {}", self.nontrivial, self.min_nontrivial)),
            _ => None,
        };
        CheckRecord {
            suite: self.suite,
            name: self.name,
            anchor: self.anchor,
            inputs_hash: hex::encode(self.hasher.finalize()),
            samples: self.samples,
            nontrivial: Some(self.nontrivial),
            failures: self.failures,
            passed,
            required: self.required,
            witness,
        }
    }
}

impl CheckRecord {
    /// Wraps a tally whose inputs are generated from `params`.
    pub(crate) fn from_tally(suite: Suite, t: &crate::sl2::CheckTally, anchor: &str, params: &str) -> Self {
        let mut h = Sha256::new();
        h.update(t.name.as_bytes());
        h.update(b"\n");
        h.update(params.as_bytes());
        CheckRecord {
            suite,
            name: t.name.clone(),
            anchor: anchor.into(),
            inputs_hash: hex::encode(h.finalize()),
            samples: t.samples,
            nontrivial: None,
            failures: t.failures,
            passed: t.passed(),
            required: true,
            witness: t.witness.clone().or_else(|| (!t.passed()).then(|| "no samples".to_string())),
        }
    }
}

/// All pinned conventions, echoed into every report.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LedgerSnapshot {
    pub kappa_even: i64,
    pub kappa_odd: i64,
    /// `σ(|f|,|g|)` for (even, even), (even, odd), (odd, even), (odd, odd).
    pub sigma: [i64; 4],
    pub transport_sign: String,
    pub k_sign: String,
    pub transfer_edge: String,
    pub centre: String,
    pub c1_sign: String,
    pub sl2: Conventions,
    pub field_action: String,
}

pub fn ledger_snapshot() -> LedgerSnapshot {
    use crate::sho::lie_sign;
    let s = |a, b| if lie_sign(a, b) == crate::superpoly::int(1) { 1 } else { -1 };
    LedgerSnapshot {
        kappa_even: KAPPA_EVEN,
        kappa_odd: KAPPA_ODD,
        sigma: [s(false, false), s(false, true), s(true, false), s(true, true)],
        transport_sign: "(d(mu v Omega)) v Omega^-1 = (-1)^(k-1) Delta mu on xi-degree k".into(),
        k_sign: "K = (-1)^j v^-1 . Euler homotopy . v on xi-degree j, K = 0 on PV^d".into(),
        transfer_edge: "-H".into(),
        centre: "e2 = [1], e1 = -[xi1 xi2 xi3]".into(),
        c1_sign: "c1(f,g) = (-1)^|f| (f g)(0) v Omega".into(),
        sl2: Conventions::default(),
        field_action: "h = diag(beta: 1, alpha: -1); e: alpha -> -alpha in beta; f: beta -> -beta in alpha".into(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub suite: Suite,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed_required: usize,
    pub failed_informational: usize,
    pub all_required_passed: bool,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub config: CampaignConfig,
    pub ledger: LedgerSnapshot,
    pub records: Vec<CheckRecord>,
    pub timings: Vec<Timing>,
}

#[derive(Serialize)]
struct Header<'a> {
    kind: &'static str,
    schema: u32,
    tool_version: &'static str,
    config: &'a CampaignConfig,
    presymplectic: bool,
    ledger: &'a LedgerSnapshot,
}

#[derive(Serialize)]
struct Line<'a, T: Serialize> {
    kind: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed || !r.required)
    }

    pub fn summary(&self) -> Summary {
        let failed_required = self.records.iter().filter(|r| !r.passed && r.required).count();
        let failed_informational = self.records.iter().filter(|r| !r.passed && !r.required).count();
        Summary {
            total: self.records.len(),
            passed: self.records.iter().filter(|r| r.passed).count(),
            failed_required,
            failed_informational,
            all_required_passed: failed_required == 0,
        }
    }

    /// The deterministic record stream.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let header = Header {
            kind: "header",
            schema: REPORT_SCHEMA,
            tool_version: TOOL_VERSION,
            config: &self.config,
            presymplectic: self.config.variant.is_presymplectic(self.config.d),
            ledger: &self.ledger,
        };
        out.push_str(&serde_json::to_string(&header).expect("serializable"));
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(&Line { kind: "check", body: r }).expect("serializable"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&Line { kind: "summary", body: &self.summary() }).expect("serializable"));
        out.push('\n');
        out
    }

    /// The summary document.
    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: u32,
            tool_version: &'static str,
            config: &'a CampaignConfig,
            summary: Summary,
            /// SHA-256 of the record stream.
            report_sha256: String,
            failed: Vec<&'a str>,
        }
        let doc = Doc {
            schema: REPORT_SCHEMA,
            tool_version: TOOL_VERSION,
            config: &self.config,
            summary: self.summary(),
            report_sha256: hex::encode(Sha256::digest(self.to_jsonl().as_bytes())),
            failed: self.records.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn timings_jsonl(&self) -> String {
        self.timings.iter().map(|t| serde_json::to_string(t).expect("serializable") + "\n").collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "minbcov {} | d={} variant={} deg={} trials={} seed={}\n",
            TOOL_VERSION, self.config.d, self.config.variant, self.config.max_degree, self.config.trials, self.config.seed
        );
        if self.config.variant.is_presymplectic(self.config.d) {
            out.push_str("note: presymplectic case (d = 2k + 1)\n");
        }
        for r in &self.records {
            let tag = match (r.passed, r.required) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "INFO",
            };
            let cover = r.nontrivial.map(|n| format!(", {n} nontrivial")).unwrap_or_default();
            out.push_str(&format!("{tag} [{}] {} ({} samples{cover})\n", r.suite, r.name, r.samples));
            if let (false, Some(w)) = (r.passed, &r.witness) {
                out.push_str(&format!("     witness: {w}\n"));
            }
        }
        let s = self.summary();
        out.push_str(&format!(
            "{} checks, {} passed, {} required failures, {} informational failures\n",
            s.total, s.passed, s.failed_required, s.failed_informational
        ));
        out
    }
}

/// Runs every selected suite that applies to the configuration.
pub fn run(config: &CampaignConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut records = Vec::new();
    let mut timings = Vec::new();
    let mut selected = config.suites.clone();
    selected.sort();
    selected.dedup();
    for suite in selected {
        let start = Instant::now();
        records.extend(suites::run_suite(suite, config)?);
        timings.push(Timing { suite, millis: start.elapsed().as_millis() });
    }
    Ok(VerificationReport { config: config.clone(), ledger: ledger_snapshot(), records, timings })
}
