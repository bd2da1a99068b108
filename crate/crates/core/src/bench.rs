//! Scaling measurements for gates and Z measurements.
//!
//! Gates are timed in batches; measurements one at a time on a fresh
//! clone of a scrambled state. Each row's ratio compares its median with
//! the same operation at the previous size.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::StabilizerFrame;
use crate::rng::{MeasurementRng, Randomness};
use crate::tableau::QubitTableau;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchOp {
    Gate,
    MeasureRandom,
    MeasureDeterministic,
}

impl BenchOp {
    pub fn name(self) -> &'static str {
        match self {
            BenchOp::Gate => "gate",
            BenchOp::MeasureRandom => "measure_random",
            BenchOp::MeasureDeterministic => "measure_deterministic",
        }
    }
}

impl fmt::Display for BenchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchEngine {
    #[default]
    Wigner,
    Tableau,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub op: BenchOp,
    /// Median nanoseconds per operation.
    pub median_ns: f64,
    /// `median_ns` over the previous size's, when there is one.
    pub ratio: Option<f64>,
}

impl BenchRow {
    pub const HEADER: &'static str = "n\top\tmedian_ns\tratio";
}

/// Tab-separated, matching [`BenchRow::HEADER`]; `-` for a missing ratio.
impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{:.1}\t", self.n, self.op, self.median_ns)?;
        match self.ratio {
            Some(r) => write!(f, "{r:.3}"),
            None => f.write_str("-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub engine: BenchEngine,
    pub sizes: Vec<usize>,
    /// Odd prime used by the frame; ignored by the tableau.
    pub d: u32,
    /// Timed samples per operation; the median is reported.
    pub reps: usize,
    /// Gates per timed gate sample.
    pub batch: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            engine: BenchEngine::Wigner,
            sizes: vec![256, 512, 1024],
            d: 3,
            reps: 31,
            batch: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    H(usize),
    P(usize),
    Cx(usize, usize),
}

fn random_op(rng: &mut MeasurementRng, n: usize, allow_h: bool) -> Op {
    let pick = rng.uniform_mod(if allow_h { 3 } else { 2 });
    let i = rng.uniform_mod(n as u32) as usize;
    match pick {
        2 => Op::H(i),
        1 if n > 1 => {
            let mut j = rng.uniform_mod(n as u32 - 1) as usize;
            if j >= i {
                j += 1;
            }
            Op::Cx(i, j)
        }
        _ => Op::P(i),
    }
}

#[derive(Debug, Clone)]
enum Subject {
    Frame(StabilizerFrame),
    Tableau(QubitTableau),
}

impl Subject {
    fn new(engine: BenchEngine, n: usize, d: u32) -> Result<Self> {
        Ok(match engine {
            BenchEngine::Wigner => Subject::Frame(StabilizerFrame::new(n, d)?),
            BenchEngine::Tableau => Subject::Tableau(QubitTableau::new(n)?),
        })
    }

    fn apply(&mut self, op: Op) {
        match (self, op) {
            (Subject::Frame(f), Op::H(i)) => f.apply_hadamard(i),
            (Subject::Frame(f), Op::P(i)) => f.apply_phase(i),
            (Subject::Frame(f), Op::Cx(i, j)) => f.apply_cnot(i, j),
            (Subject::Tableau(t), Op::H(i)) => t.apply_h(i),
            (Subject::Tableau(t), Op::P(i)) => t.apply_s(i),
            (Subject::Tableau(t), Op::Cx(i, j)) => t.apply_cnot(i, j),
        }
        .expect("indices in range");
    }

    /// Measures qudit `i`; true when the outcome was deterministic.
    fn measure(&mut self, i: usize, rng: &mut MeasurementRng) -> Result<bool> {
        let rec = match self {
            Subject::Frame(f) => f.measure_z(i, Randomness::Seeded(rng))?,
            Subject::Tableau(t) => t.measure(i, Randomness::Seeded(rng))?,
        };
        Ok(rec.is_deterministic())
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    }
}

/// State after H on every qudit followed by about `n·log₂ n` random
/// CX/P gates. Every qudit of it measures randomly.
fn scrambled(engine: BenchEngine, n: usize, d: u32, seed: u64) -> Result<Subject> {
    let mut s = Subject::new(engine, n, d)?;
    let mut rng = MeasurementRng::new(seed);
    for i in 0..n {
        s.apply(Op::H(i));
    }
    let count = n * (usize::BITS - n.leading_zeros()) as usize;
    for _ in 0..count {
        s.apply(random_op(&mut rng, n, false));
    }
    Ok(s)
}

/// The scrambled state with every qudit measured once, so every qudit
/// now measures deterministically.
fn collapsed(engine: BenchEngine, n: usize, d: u32, seed: u64) -> Result<Subject> {
    let mut s = scrambled(engine, n, d, seed)?;
    let mut rng = MeasurementRng::new(seed ^ 0xc011);
    for i in 0..n {
        s.measure(i, &mut rng)?;
    }
    Ok(s)
}

fn time_gates(n: usize, cfg: &BenchConfig) -> Result<f64> {
    let mut s = scrambled(cfg.engine, n, cfg.d, cfg.seed)?;
    let mut rng = MeasurementRng::new(cfg.seed ^ 0x9e37);
    let mut samples = Vec::with_capacity(cfg.reps);
    for _ in 0..cfg.reps {
        let ops: Vec<Op> = (0..cfg.batch).map(|_| random_op(&mut rng, n, true)).collect();
        let start = Instant::now();
        for &op in &ops {
            s.apply(op);
        }
        samples.push(start.elapsed().as_nanos() as f64 / cfg.batch.max(1) as f64);
    }
    Ok(median(&mut samples))
}

fn time_measurements(n: usize, cfg: &BenchConfig, random: bool) -> Result<f64> {
    let base = if random {
        scrambled(cfg.engine, n, cfg.d, cfg.seed)?
    } else {
        collapsed(cfg.engine, n, cfg.d, cfg.seed)?
    };
    let mut rng = MeasurementRng::new(cfg.seed ^ 0x51ed);
    let mut samples = Vec::with_capacity(cfg.reps);
    for _ in 0..cfg.reps {
        let i = rng.uniform_mod(n as u32) as usize;
        let mut s = base.clone();
        let start = Instant::now();
        let deterministic = s.measure(i, &mut rng)?;
        samples.push(start.elapsed().as_nanos() as f64);
        if deterministic == random {
            return Err(Error::InconsistentFrame(
                "benchmark state took the wrong measurement branch".into(),
            ));
        }
    }
    Ok(median(&mut samples))
}

/// One row per size and operation, sizes in the order given.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.engine == BenchEngine::Wigner && (cfg.d % 2 == 0 || cfg.d < 3) {
        return Err(Error::BadDimension(cfg.d as u64));
    }
    let ops = [BenchOp::Gate, BenchOp::MeasureRandom, BenchOp::MeasureDeterministic];
    let mut rows: Vec<BenchRow> = Vec::new();
    for &n in &cfg.sizes {
        for op in ops {
            let median_ns = match op {
                BenchOp::Gate => time_gates(n, cfg)?,
                BenchOp::MeasureRandom => time_measurements(n, cfg, true)?,
                BenchOp::MeasureDeterministic => time_measurements(n, cfg, false)?,
            };
            let ratio = rows
                .iter()
                .rev()
                .find(|r| r.op == op)
                .map(|prev| median_ns / prev.median_ns.max(1.0));
            rows.push(BenchRow {
                n,
                op,
                median_ns,
                ratio,
            });
        }
    }
    Ok(rows)
}
