//! Differential verification of the engines against the dense oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::circuit::{random_circuit, Circuit, Instruction};
use crate::error::{Error, Result};
use crate::frame::MeasurementRecord;
use crate::oracle::{
    check_wigner_support, is_point_mass, qubit_stabilizer_check, stabilizer_check, DenseState,
    TOLERANCE,
};
use crate::rng::{MeasurementRng, Randomness};
use crate::run::{EngineKind, Simulator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// Wigner support equals the oracle's nonzero set, values `d^{-n}`.
    Support,
    /// Every stabilizer row fixes the oracle state with its phase.
    Stabilizer,
    /// Deterministic exactly when the Born distribution is a point mass.
    Dispatch,
    /// Deterministic outcomes equal the oracle's certain outcome.
    Outcome,
    /// Random measurements see a uniform Born distribution.
    Uniform,
    /// Symplecticity and invertibility (frame) or commutation and
    /// independence (tableau).
    Invariants,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::Support,
        Category::Stabilizer,
        Category::Dispatch,
        Category::Outcome,
        Category::Uniform,
        Category::Invariants,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Support => "support",
            Category::Stabilizer => "stabilizer",
            Category::Dispatch => "dispatch",
            Category::Outcome => "outcome",
            Category::Uniform => "uniform",
            Category::Invariants => "invariants",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub category: Category,
    pub message: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.category, self.message)
    }
}

/// Why a lockstep step stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepError {
    Engine(Error),
    Mismatch(Mismatch),
}

impl StepError {
    pub fn into_error(self, step: usize) -> Error {
        match self {
            StepError::Engine(e) => e,
            StepError::Mismatch(m) => Error::OracleMismatch(format!("instruction {}: {m}", step + 1)),
        }
    }
}

impl From<Error> for StepError {
    fn from(e: Error) -> Self {
        StepError::Engine(e)
    }
}

/// Passed checks per category, plus the number of instructions run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCounts {
    pub instructions: u64,
    pub passed: BTreeMap<Category, u64>,
}

impl CheckCounts {
    pub fn get(&self, c: Category) -> u64 {
        self.passed.get(&c).copied().unwrap_or(0)
    }

    fn bump(&mut self, c: Category) {
        *self.passed.entry(c).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &CheckCounts) {
        self.instructions += other.instructions;
        for (c, v) in &other.passed {
            *self.passed.entry(*c).or_insert(0) += v;
        }
    }
}

/// An engine and a dense state driven by the same instructions.
#[derive(Debug, Clone)]
pub struct Lockstep {
    engine: Simulator,
    oracle: DenseState,
    counts: CheckCounts,
}

fn fail(category: Category, message: impl Into<String>) -> StepError {
    StepError::Mismatch(Mismatch {
        category,
        message: message.into(),
    })
}

impl Lockstep {
    pub fn new(n: usize, d: u32, kind: EngineKind) -> Result<Self> {
        let oracle = DenseState::new(n, d)?;
        Ok(Self {
            engine: Simulator::new(kind, n, d)?,
            oracle,
            counts: CheckCounts::default(),
        })
    }

    pub fn engine(&self) -> &Simulator {
        &self.engine
    }

    pub fn oracle(&self) -> &DenseState {
        &self.oracle
    }

    pub fn counts(&self) -> &CheckCounts {
        &self.counts
    }

    pub fn step(
        &mut self,
        ins: &Instruction,
        rng: &mut MeasurementRng,
    ) -> std::result::Result<Option<MeasurementRecord>, StepError> {
        self.counts.instructions += 1;
        let record = match *ins {
            Instruction::Measure(i) | Instruction::Force(i, _) => {
                let probs = self.oracle.born_distribution(i)?;
                let rec = self.engine.step(ins, rng)?.expect("measurement record");
                self.check_measurement(&probs, &rec)?;
                self.oracle
                    .born_measure(i, Randomness::Forced(rec.outcome()))
                    .map_err(|e| fail(Category::Outcome, format!("oracle rejects outcome: {e}")))?;
                Some(rec)
            }
            _ => {
                self.engine.step(ins, rng)?;
                let gate = ins.gate(self.oracle.n()).expect("unitary instruction");
                self.oracle.apply_gate(&gate)?;
                None
            }
        };
        self.check_state()?;
        Ok(record)
    }

    fn check_measurement(
        &mut self,
        probs: &[f64],
        rec: &MeasurementRecord,
    ) -> std::result::Result<(), StepError> {
        if matches!(self.engine, Simulator::Oracle(_)) {
            return Ok(());
        }
        let certain = probs.iter().any(|&p| (p - 1.0).abs() < TOLERANCE);
        if certain != rec.is_deterministic() {
            return Err(fail(
                Category::Dispatch,
                format!(
                    "qudit {}: engine says {}, oracle distribution {probs:?}",
                    rec.qudit() + 1,
                    if rec.is_deterministic() { "deterministic" } else { "random" }
                ),
            ));
        }
        self.counts.bump(Category::Dispatch);
        if rec.is_deterministic() {
            if !is_point_mass(probs, rec.outcome()) {
                return Err(fail(
                    Category::Outcome,
                    format!("qudit {}: engine outcome {}, oracle {probs:?}", rec.qudit() + 1, rec.outcome()),
                ));
            }
            self.counts.bump(Category::Outcome);
        } else {
            let level = 1.0 / probs.len() as f64;
            if probs.iter().any(|p| (p - level).abs() > TOLERANCE) {
                return Err(fail(
                    Category::Uniform,
                    format!("qudit {}: random outcome but oracle {probs:?}", rec.qudit() + 1),
                ));
            }
            self.counts.bump(Category::Uniform);
        }
        Ok(())
    }

    fn check_state(&mut self) -> std::result::Result<(), StepError> {
        match &self.engine {
            Simulator::Wigner(f) => {
                f.check_invariants()
                    .map_err(|e| fail(Category::Invariants, e.to_string()))?;
                self.counts.bump(Category::Invariants);
                if !stabilizer_check(f, &self.oracle)? {
                    return Err(fail(Category::Stabilizer, "a stabilizer row does not fix the state"));
                }
                self.counts.bump(Category::Stabilizer);
                check_wigner_support(f, &self.oracle)
                    .map_err(|e| fail(Category::Support, e.to_string()))?;
                self.counts.bump(Category::Support);
            }
            Simulator::Tableau(t) => {
                t.check_invariants()
                    .map_err(|e| fail(Category::Invariants, e.to_string()))?;
                self.counts.bump(Category::Invariants);
                if !qubit_stabilizer_check(t, &self.oracle)? {
                    return Err(fail(Category::Stabilizer, "a stabilizer row does not fix the state"));
                }
                self.counts.bump(Category::Stabilizer);
            }
            Simulator::Oracle(_) => {}
        }
        Ok(())
    }
}

/// Outcome of a lockstep run over a whole circuit.
#[derive(Debug, Clone)]
pub struct CircuitCheck {
    pub counts: CheckCounts,
    /// Random outcomes seen, indexed by outcome value.
    pub random_outcomes: Vec<u64>,
    pub failure: Option<(usize, Mismatch)>,
}

/// Runs `circuit` on its native engine next to the oracle.
pub fn check_circuit(circuit: &Circuit, seed: u64) -> Result<CircuitCheck> {
    let mut lock = Lockstep::new(circuit.n(), circuit.d(), EngineKind::Auto)?;
    let mut rng = MeasurementRng::for_shot(seed, 0);
    let mut random_outcomes = vec![0u64; circuit.d() as usize];
    let mut failure = None;
    for (step, ins) in circuit.instructions().iter().enumerate() {
        match lock.step(ins, &mut rng) {
            Ok(Some(rec)) if !rec.is_deterministic() => random_outcomes[rec.outcome() as usize] += 1,
            Ok(_) => {}
            Err(StepError::Mismatch(m)) => {
                failure = Some((step, m));
                break;
            }
            Err(StepError::Engine(e)) => {
                failure = Some((
                    step,
                    Mismatch {
                        category: Category::Invariants,
                        message: e.to_string(),
                    },
                ));
                break;
            }
        }
    }
    Ok(CircuitCheck {
        counts: lock.counts,
        random_outcomes,
        failure,
    })
}

fn still_fails(circuit: &Circuit, seed: u64) -> bool {
    check_circuit(circuit, seed).map(|c| c.failure.is_some()).unwrap_or(false)
}

/// Shrinks a failing circuit: cut after the first failing instruction,
/// then drop single instructions while the failure persists.
pub fn minimize(circuit: &Circuit, seed: u64) -> Circuit {
    let Ok(check) = check_circuit(circuit, seed) else {
        return circuit.clone();
    };
    let Some((step, _)) = check.failure else {
        return circuit.clone();
    };
    let mut current = circuit.truncated(step + 1);
    let mut k = current.len();
    while k > 0 {
        k -= 1;
        let keep: Vec<usize> = (0..current.len()).filter(|&j| j != k).collect();
        let candidate = current.select(&keep);
        if still_fails(&candidate, seed) {
            current = candidate;
        }
    }
    current
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub dims: Vec<u32>,
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_max: 3,
            dims: vec![3],
            depth: 20,
            trials: 200,
            seed: 0,
        }
    }
}

/// Seed of trial `t` at `(n, d)`; also seeds that circuit's measurements.
pub fn trial_seed(seed: u64, n: usize, d: u32, trial: usize) -> u64 {
    seed ^ ((d as u64) << 48) ^ ((n as u64) << 32) ^ trial as u64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Failure {
    pub n: usize,
    pub d: u32,
    pub seed: u64,
    pub mismatch: Mismatch,
    /// Smallest failing circuit found, in text form.
    pub circuit: String,
}

/// Pass counts, random-outcome histograms and failures of a sweep.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerifyReport {
    pub circuits: u64,
    pub counts: CheckCounts,
    /// Random outcomes per dimension.
    pub histograms: BTreeMap<u32, Vec<u64>>,
    pub failures: Vec<Failure>,
}

/// Largest deviation of any outcome count from `N/d`, in binomial σ.
pub fn max_sigma(histogram: &[u64]) -> f64 {
    let total: u64 = histogram.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let p = 1.0 / histogram.len() as f64;
    let mean = total as f64 * p;
    let sigma = (total as f64 * p * (1.0 - p)).sqrt();
    histogram
        .iter()
        .map(|&c| (c as f64 - mean).abs() / sigma)
        .fold(0.0, f64::max)
}

impl VerifyReport {
    pub fn statistics_ok(&self) -> bool {
        self.histograms.values().all(|h| max_sigma(h) <= 5.0)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.statistics_ok()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuits {}", self.circuits)?;
        writeln!(f, "instructions {}", self.counts.instructions)?;
        for c in Category::ALL {
            writeln!(f, "{c} {}", self.counts.get(c))?;
        }
        for (d, h) in &self.histograms {
            let counts: Vec<String> = h.iter().map(|c| c.to_string()).collect();
            writeln!(f, "random d={d} [{}] max {:.2} sigma", counts.join(" "), max_sigma(h))?;
        }
        for fl in &self.failures {
            writeln!(f, "FAIL n={} d={} seed={} {}", fl.n, fl.d, fl.seed, fl.mismatch)?;
            for line in fl.circuit.lines() {
                writeln!(f, "  {line}")?;
            }
        }
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Failing circuits kept (and minimized) per sweep.
const MAX_REPORTED_FAILURES: usize = 5;

fn run_job(n: usize, d: u32, cfg: &VerifyConfig, trial: usize) -> Result<(Circuit, u64, CircuitCheck)> {
    let seed = trial_seed(cfg.seed, n, d, trial);
    let circuit = random_circuit(n, d, cfg.depth, seed)?;
    let check = check_circuit(&circuit, seed)?;
    Ok((circuit, seed, check))
}

/// Random-circuit sweep over `1..=n_max` qudits and every listed dimension.
///
/// Circuits run on all available cores; the report does not depend on
/// how many.
pub fn verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    // surfaces bad dimensions and oracle limits before any work
    for &d in &cfg.dims {
        DenseState::new(cfg.n_max.max(1), d)?;
    }
    let jobs: Vec<(usize, u32, usize)> = cfg
        .dims
        .iter()
        .flat_map(|&d| (1..=cfg.n_max).flat_map(move |n| (0..cfg.trials).map(move |t| (n, d, t))))
        .collect();
    let workers = std::thread::available_parallelism()
        .map(|w| w.get())
        .unwrap_or(1)
        .clamp(1, jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let mut results: Vec<Option<Result<(Circuit, u64, CircuitCheck)>>> = Vec::new();
    results.resize_with(jobs.len(), || None);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&(n, d, t)) = jobs.get(k) else {
                            break;
                        };
                        done.push((k, run_job(n, d, cfg, t)));
                    }
                    done
                })
            })
            .collect();
        for h in handles {
            for (k, r) in h.join().expect("verify worker panicked") {
                results[k] = Some(r);
            }
        }
    });

    let mut report = VerifyReport::default();
    for (&(n, d, _), result) in jobs.iter().zip(results) {
        let (circuit, seed, check) = result.expect("every job ran")?;
        report.circuits += 1;
        report.counts.merge(&check.counts);
        let hist = report
            .histograms
            .entry(d)
            .or_insert_with(|| vec![0; d as usize]);
        for (slot, v) in hist.iter_mut().zip(&check.random_outcomes) {
            *slot += v;
        }
        if let Some((_, mismatch)) = check.failure {
            if report.failures.len() < MAX_REPORTED_FAILURES {
                report.failures.push(Failure {
                    n,
                    d,
                    seed,
                    mismatch,
                    circuit: minimize(&circuit, seed).to_string(),
                });
            }
        }
    }
    Ok(report)
}
