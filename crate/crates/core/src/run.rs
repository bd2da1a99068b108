//! Engine dispatch and measurement transcripts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::frame::{MeasurementRecord, StabilizerFrame};
use crate::oracle::{is_point_mass, DenseState};
use crate::rng::{MeasurementRng, Randomness};
use crate::tableau::QubitTableau;
use crate::verify::Lockstep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    /// Wigner frame for odd `d`, tableau for `d = 2`.
    #[default]
    Auto,
    Wigner,
    Tableau,
    Oracle,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Auto => "auto",
            EngineKind::Wigner => "wigner",
            EngineKind::Tableau => "tableau",
            EngineKind::Oracle => "oracle",
        }
    }

    /// Replaces `Auto` with the engine native to `d`.
    pub fn resolve(self, d: u32) -> EngineKind {
        match self {
            EngineKind::Auto if d == 2 => EngineKind::Tableau,
            EngineKind::Auto => EngineKind::Wigner,
            other => other,
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(EngineKind::Auto),
            "wigner" => Ok(EngineKind::Wigner),
            "tableau" => Ok(EngineKind::Tableau),
            "oracle" => Ok(EngineKind::Oracle),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}

/// A running simulation on one of the three engines.
#[derive(Debug, Clone)]
pub enum Simulator {
    Wigner(StabilizerFrame),
    Tableau(QubitTableau),
    Oracle(DenseState),
}

impl Simulator {
    pub fn new(kind: EngineKind, n: usize, d: u32) -> Result<Self> {
        match kind.resolve(d) {
            EngineKind::Wigner => {
                if d == 2 {
                    return Err(Error::EngineDimensionMismatch { engine: "wigner", d });
                }
                Ok(Simulator::Wigner(StabilizerFrame::new(n, d)?))
            }
            EngineKind::Tableau => {
                if d != 2 {
                    return Err(Error::EngineDimensionMismatch { engine: "tableau", d });
                }
                Ok(Simulator::Tableau(QubitTableau::new(n)?))
            }
            EngineKind::Oracle => Ok(Simulator::Oracle(DenseState::new(n, d)?)),
            EngineKind::Auto => unreachable!("resolved above"),
        }
    }

    pub fn kind(&self) -> EngineKind {
        match self {
            Simulator::Wigner(_) => EngineKind::Wigner,
            Simulator::Tableau(_) => EngineKind::Tableau,
            Simulator::Oracle(_) => EngineKind::Oracle,
        }
    }

    fn randomness<'a>(ins: &Instruction, rng: &'a mut MeasurementRng) -> Randomness<'a> {
        match *ins {
            Instruction::Force(_, v) => Randomness::Forced(v),
            _ => Randomness::Seeded(rng),
        }
    }

    /// Applies one instruction; measurements return their record.
    pub fn step(
        &mut self,
        ins: &Instruction,
        rng: &mut MeasurementRng,
    ) -> Result<Option<MeasurementRecord>> {
        match self {
            Simulator::Wigner(f) => match *ins {
                Instruction::Measure(i) | Instruction::Force(i, _) => {
                    f.measure_z(i, Self::randomness(ins, rng)).map(Some)
                }
                _ => {
                    let gate = ins.gate(f.n()).expect("unitary instruction");
                    f.apply(&gate).map(|_| None)
                }
            },
            Simulator::Tableau(t) => {
                match *ins {
                    Instruction::H(i) => t.apply_h(i)?,
                    Instruction::P(i) => t.apply_s(i)?,
                    Instruction::Cx(i, j) => t.apply_cnot(i, j)?,
                    Instruction::X(i, k) => {
                        if k % 2 == 1 {
                            t.apply_x(i)?
                        }
                    }
                    Instruction::Z(i, k) => {
                        if k % 2 == 1 {
                            t.apply_z(i)?
                        }
                    }
                    Instruction::Measure(i) | Instruction::Force(i, _) => {
                        return t.measure(i, Self::randomness(ins, rng)).map(Some)
                    }
                }
                Ok(None)
            }
            Simulator::Oracle(s) => match *ins {
                Instruction::Measure(i) | Instruction::Force(i, _) => {
                    let probs = s.born_distribution(i)?;
                    let outcome = s.born_measure(i, Self::randomness(ins, rng))?;
                    Ok(Some(if is_point_mass(&probs, outcome) {
                        MeasurementRecord::deterministic(i, outcome)
                    } else {
                        MeasurementRecord::sampled(i, outcome)
                    }))
                }
                _ => {
                    let gate = ins.gate(s.n()).expect("unitary instruction");
                    s.apply_gate(&gate).map(|_| None)
                }
            },
        }
    }

    /// Canonical text form of the engine state.
    pub fn dump(&self) -> String {
        match self {
            Simulator::Wigner(f) => f.to_string(),
            Simulator::Tableau(t) => t.to_string(),
            Simulator::Oracle(s) => {
                let mut out = String::new();
                for (idx, a) in s.amplitudes().iter().enumerate() {
                    if a.norm() > 1e-12 {
                        let digits: Vec<String> =
                            s.digits_of(idx).iter().map(|q| q.to_string()).collect();
                        out.push_str(&format!("|{}> {:.12} {:.12}\n", digits.join(","), a.re, a.im));
                    }
                }
                out
            }
        }
    }
}

/// One measurement in a transcript. `qudit` is 1-based here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementEvent {
    pub shot: u64,
    /// Position of the instruction in the circuit, 0-based.
    pub step: usize,
    pub qudit: usize,
    pub outcome: u32,
    pub deterministic: bool,
}

impl MeasurementEvent {
    fn new(shot: u64, step: usize, rec: &MeasurementRecord) -> Self {
        Self {
            shot,
            step,
            qudit: rec.qudit() + 1,
            outcome: rec.outcome(),
            deterministic: rec.is_deterministic(),
        }
    }
}

/// `m <qudit> <outcome> <det|rnd>`.
impl fmt::Display for MeasurementEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.deterministic { "det" } else { "rnd" };
        write!(f, "m {} {} {tag}", self.qudit, self.outcome)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTranscript {
    pub shot: u64,
    pub engine: EngineKind,
    pub events: Vec<MeasurementEvent>,
    /// Final engine state, when requested.
    pub dump: Option<String>,
}

impl RunTranscript {
    /// The measurement lines, each newline-terminated.
    pub fn lines(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub engine: EngineKind,
    pub seed: u64,
    pub shots: u64,
    pub dump: bool,
    /// Run a dense oracle alongside and compare after every instruction.
    pub oracle_check: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            engine: EngineKind::Auto,
            seed: 0,
            shots: 1,
            dump: false,
            oracle_check: false,
        }
    }
}

/// Runs one shot with its own measurement stream.
pub fn run_shot(circuit: &Circuit, opts: &RunOptions, shot: u64) -> Result<RunTranscript> {
    let mut rng = MeasurementRng::for_shot(opts.seed, shot);
    let mut events = Vec::new();
    let (kind, dump) = if opts.oracle_check {
        let mut lock = Lockstep::new(circuit.n(), circuit.d(), opts.engine)?;
        for (step, ins) in circuit.instructions().iter().enumerate() {
            if let Some(rec) = lock.step(ins, &mut rng).map_err(|m| m.into_error(step))? {
                events.push(MeasurementEvent::new(shot, step, &rec));
            }
        }
        (lock.engine().kind(), lock.engine().dump())
    } else {
        let mut sim = Simulator::new(opts.engine, circuit.n(), circuit.d())?;
        for (step, ins) in circuit.instructions().iter().enumerate() {
            if let Some(rec) = sim.step(ins, &mut rng)? {
                events.push(MeasurementEvent::new(shot, step, &rec));
            }
        }
        (sim.kind(), sim.dump())
    };
    Ok(RunTranscript {
        shot,
        engine: kind,
        events,
        dump: opts.dump.then_some(dump),
    })
}

/// Runs `opts.shots` shots, seeded by `(opts.seed, shot index)`, spread
/// over the available cores. Transcripts come back in shot order.
pub fn execute(circuit: &Circuit, opts: &RunOptions) -> Result<Vec<RunTranscript>> {
    let workers = std::thread::available_parallelism()
        .map(|w| w.get() as u64)
        .unwrap_or(1)
        .min(opts.shots);
    if workers <= 1 {
        return (0..opts.shots).map(|shot| run_shot(circuit, opts, shot)).collect();
    }
    let chunk = opts.shots.div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let range = w * chunk..((w + 1) * chunk).min(opts.shots);
                scope.spawn(move || {
                    range
                        .map(|shot| run_shot(circuit, opts, shot))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(opts.shots as usize);
        for h in handles {
            out.extend(h.join().expect("shot worker panicked")?);
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse;

    const BELL: &str = "qudits 2 dim 3\nh 1\ncx 1 2\nforce 1 1\nmeasure 2\n";

    #[test]
    fn forced_bell_transcript() {
        let c = parse(BELL).unwrap();
        let t = execute(&c, &RunOptions::default()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].lines(), "m 1 1 rnd\nm 2 1 det\n");
        assert_eq!(t[0].engine, EngineKind::Wigner);
    }

    #[test]
    fn empty_circuit() {
        let c = parse("qudits 3 dim 5").unwrap();
        let t = execute(&c, &RunOptions::default()).unwrap();
        assert!(t[0].events.is_empty());
    }

    #[test]
    fn deterministic_in_seed() {
        let c = parse("qudits 2 dim 5\nh 1\ncx 1 2\nmeasure 1\nmeasure 2\nh 2\nmeasure 2").unwrap();
        let opts = RunOptions {
            seed: 17,
            shots: 5,
            dump: true,
            ..RunOptions::default()
        };
        assert_eq!(execute(&c, &opts).unwrap(), execute(&c, &opts).unwrap());
    }

    #[test]
    fn engine_dimension_checks() {
        let odd = parse("qudits 1 dim 3").unwrap();
        let qubit = parse("qudits 1 dim 2").unwrap();
        let opts = |engine| RunOptions {
            engine,
            ..RunOptions::default()
        };
        assert_eq!(
            execute(&odd, &opts(EngineKind::Tableau)),
            Err(Error::EngineDimensionMismatch { engine: "tableau", d: 3 })
        );
        assert_eq!(
            execute(&qubit, &opts(EngineKind::Wigner)),
            Err(Error::EngineDimensionMismatch { engine: "wigner", d: 2 })
        );
        assert_eq!(execute(&qubit, &opts(EngineKind::Auto)).unwrap()[0].engine, EngineKind::Tableau);
        let big = parse("qudits 5 dim 7").unwrap();
        assert!(matches!(
            execute(&big, &opts(EngineKind::Oracle)),
            Err(Error::TooLargeForOracle { .. })
        ));
    }

    #[test]
    fn oracle_engine_agrees_on_forced_bell() {
        let c = parse(BELL).unwrap();
        let opts = RunOptions {
            engine: EngineKind::Oracle,
            ..RunOptions::default()
        };
        assert_eq!(execute(&c, &opts).unwrap()[0].lines(), "m 1 1 rnd\nm 2 1 det\n");
    }

    #[test]
    fn oracle_check_passes_on_bell() {
        let c = parse(BELL).unwrap();
        let opts = RunOptions {
            oracle_check: true,
            dump: true,
            ..RunOptions::default()
        };
        let t = execute(&c, &opts).unwrap();
        assert_eq!(t[0].dump.as_deref(), Some("1 1 0 0\n0 1 0 0\n0 0 1 0\n0 0 2 1\nr: 0 0 1 0\n"));
    }

    #[test]
    fn engine_names_parse() {
        for k in [EngineKind::Auto, EngineKind::Wigner, EngineKind::Tableau, EngineKind::Oracle] {
            assert_eq!(k.name().parse::<EngineKind>().unwrap(), k);
        }
        assert!("chp".parse::<EngineKind>().is_err());
    }
}
