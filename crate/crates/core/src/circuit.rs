//! Circuit representation, text format and random generation.
//!
//! Text format, one instruction per line, `#` starts a comment:
//!
//! ```text
//! qudits 2 dim 3
//! h 1
//! cx 1 2
//! force 1 1
//! measure 2
//! ```
//!
//! Qudit numbers in text are 1-based; [`Instruction`] stores them 0-based.

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::is_prime;
use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::frame::CliffordGate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Instruction {
    H(usize),
    P(usize),
    Cx(usize, usize),
    /// `X^k` on one qudit.
    X(usize, u32),
    Z(usize, u32),
    Measure(usize),
    /// Measurement whose outcome, if random, is taken as given.
    Force(usize, u32),
}

impl Instruction {
    /// The unitary part, or `None` for measurements.
    pub fn gate(&self, n: usize) -> Option<CliffordGate> {
        let translation = |i: usize, x: u32, z: u32| {
            let mut xpow = vec![0; n];
            let mut zpow = vec![0; n];
            xpow[i] = x;
            zpow[i] = z;
            CliffordGate::WeylTranslation { xpow, zpow }
        };
        match *self {
            Instruction::H(i) => Some(CliffordGate::Hadamard(i)),
            Instruction::P(i) => Some(CliffordGate::Phase(i)),
            Instruction::Cx(i, j) => Some(CliffordGate::Cnot {
                control: i,
                target: j,
            }),
            Instruction::X(i, k) => Some(translation(i, k, 0)),
            Instruction::Z(i, k) => Some(translation(i, 0, k)),
            Instruction::Measure(_) | Instruction::Force(..) => None,
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Instruction::Measure(_) | Instruction::Force(..))
    }

    fn qudits(&self) -> Vec<usize> {
        match *self {
            Instruction::Cx(i, j) => vec![i, j],
            Instruction::H(i)
            | Instruction::P(i)
            | Instruction::X(i, _)
            | Instruction::Z(i, _)
            | Instruction::Measure(i)
            | Instruction::Force(i, _) => vec![i],
        }
    }
}

/// Writes the instruction in the 1-based text syntax.
impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instruction::H(i) => write!(f, "h {}", i + 1),
            Instruction::P(i) => write!(f, "p {}", i + 1),
            Instruction::Cx(i, j) => write!(f, "cx {} {}", i + 1, j + 1),
            Instruction::X(i, k) => write!(f, "x {} {k}", i + 1),
            Instruction::Z(i, k) => write!(f, "z {} {k}", i + 1),
            Instruction::Measure(i) => write!(f, "measure {}", i + 1),
            Instruction::Force(i, v) => write!(f, "force {} {v}", i + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    n: usize,
    d: u32,
    instructions: Vec<Instruction>,
}

fn dimension_ok(d: u64) -> bool {
    d == 2 || (d % 2 == 1 && is_prime(d))
}

impl Circuit {
    pub fn new(n: usize, d: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoQudits);
        }
        if !dimension_ok(d as u64) {
            return Err(Error::BadDimension(d as u64));
        }
        Ok(Self {
            n,
            d,
            instructions: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Appends after checking indices; powers and forced outcomes are
    /// reduced mod `d`.
    pub fn push(&mut self, instruction: Instruction) -> Result<()> {
        for i in instruction.qudits() {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, n: self.n });
            }
        }
        let d = self.d;
        let normalized = match instruction {
            Instruction::Cx(i, j) if i == j => return Err(Error::ControlEqualsTarget(i)),
            Instruction::X(i, k) => Instruction::X(i, k % d),
            Instruction::Z(i, k) => Instruction::Z(i, k % d),
            Instruction::Force(_, v) if v >= d => {
                return Err(Error::OutcomeOutOfRange { outcome: v, d })
            }
            other => other,
        };
        self.instructions.push(normalized);
        Ok(())
    }

    /// A copy holding only the listed instruction positions, in order.
    pub fn select(&self, keep: &[usize]) -> Circuit {
        Circuit {
            n: self.n,
            d: self.d,
            instructions: keep.iter().map(|&k| self.instructions[k]).collect(),
        }
    }

    pub fn truncated(&self, len: usize) -> Circuit {
        Circuit {
            n: self.n,
            d: self.d,
            instructions: self.instructions[..len.min(self.len())].to_vec(),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qudits {} dim {}", self.n, self.d)?;
        for ins in &self.instructions {
            writeln!(f, "{ins}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in code.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                out.push(Token {
                    text: &code[s..pos],
                    column: code[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &code[s..],
            column: code[..s].chars().count() + 1,
        });
    }
    out
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    end_column: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, column: usize, kind: ParseErrorKind) -> Error {
        Error::Parse(ParseError {
            line: self.line,
            column,
            kind,
        })
    }

    fn syntax(&self, column: usize, msg: impl Into<String>) -> Error {
        self.err(column, ParseErrorKind::Syntax(msg.into()))
    }

    fn arity(&self, min: usize, max: usize) -> Result<()> {
        let args = self.tokens.len() - 1;
        if args < min {
            let what = if min == max {
                format!("expected {min} argument(s), found {args}")
            } else {
                format!("expected {min} to {max} arguments, found {args}")
            };
            return Err(self.syntax(self.end_column, what));
        }
        if args > max {
            return Err(self.syntax(self.tokens[max + 1].column, "unexpected extra argument"));
        }
        Ok(())
    }

    fn integer(&self, k: usize) -> Result<i64> {
        let tok = &self.tokens[k];
        tok.text
            .parse::<i64>()
            .map_err(|_| self.syntax(tok.column, format!("expected an integer, found `{}`", tok.text)))
    }

    fn qudit(&self, k: usize, n: usize) -> Result<usize> {
        let v = self.integer(k)?;
        if v < 1 || v as u64 > n as u64 {
            return Err(self.err(
                self.tokens[k].column,
                ParseErrorKind::IndexOutOfRange { index: v, n },
            ));
        }
        Ok(v as usize - 1)
    }

    fn natural(&self, k: usize) -> Result<u64> {
        let v = self.integer(k)?;
        u64::try_from(v).map_err(|_| self.syntax(self.tokens[k].column, "expected a non-negative integer"))
    }
}

/// Parses the text format. Diagnostics carry 1-based line and column.
pub fn parse(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let end_column = raw.split('#').next().unwrap_or("").trim_end().chars().count() + 1;
        let lp = LineParser {
            line,
            tokens,
            end_column,
        };
        let keyword = lp.tokens[0].text.to_ascii_lowercase();

        let Some(c) = circuit.as_mut() else {
            if keyword != "qudits" {
                return Err(lp.syntax(1, "expected header `qudits <n> dim <d>`"));
            }
            lp.arity(3, 3)?;
            if !lp.tokens[2].text.eq_ignore_ascii_case("dim") {
                return Err(lp.syntax(lp.tokens[2].column, "expected `dim`"));
            }
            let n = lp.natural(1)?;
            if n == 0 {
                return Err(lp.syntax(lp.tokens[1].column, "need at least one qudit"));
            }
            let d = lp.natural(3)?;
            if d > u32::MAX as u64 || !dimension_ok(d) {
                return Err(lp.err(lp.tokens[3].column, ParseErrorKind::BadDimension(d)));
            }
            circuit = Some(Circuit::new(n as usize, d as u32)?);
            continue;
        };

        let n = c.n;
        let d = c.d as u64;
        let instruction = match keyword.as_str() {
            "h" => {
                lp.arity(1, 1)?;
                Instruction::H(lp.qudit(1, n)?)
            }
            "p" => {
                lp.arity(1, 1)?;
                Instruction::P(lp.qudit(1, n)?)
            }
            "cx" => {
                lp.arity(2, 2)?;
                let i = lp.qudit(1, n)?;
                let j = lp.qudit(2, n)?;
                if i == j {
                    return Err(lp.err(
                        lp.tokens[2].column,
                        ParseErrorKind::ControlEqualsTarget(i + 1),
                    ));
                }
                Instruction::Cx(i, j)
            }
            "x" | "z" => {
                lp.arity(1, 2)?;
                let i = lp.qudit(1, n)?;
                let k = if lp.tokens.len() == 3 {
                    lp.integer(2)?.rem_euclid(d as i64) as u32
                } else {
                    1 % d as u32
                };
                if keyword == "x" {
                    Instruction::X(i, k)
                } else {
                    Instruction::Z(i, k)
                }
            }
            "measure" => {
                lp.arity(1, 1)?;
                Instruction::Measure(lp.qudit(1, n)?)
            }
            "force" => {
                lp.arity(2, 2)?;
                let i = lp.qudit(1, n)?;
                let v = lp.natural(2)?;
                if v >= d {
                    return Err(lp.syntax(
                        lp.tokens[2].column,
                        format!("outcome {v} is not below the dimension {d}"),
                    ));
                }
                Instruction::Force(i, v as u32)
            }
            "qudits" => return Err(lp.syntax(1, "duplicate header")),
            other => return Err(lp.syntax(1, format!("unknown instruction `{other}`"))),
        };
        c.instructions.push(instruction);
    }
    circuit.ok_or_else(|| {
        Error::Parse(ParseError {
            line: last_line.max(1),
            column: 1,
            kind: ParseErrorKind::Syntax("missing header `qudits <n> dim <d>`".to_string()),
        })
    })
}

/// Stream reserved for circuit generation, apart from measurement streams.
const CIRCUIT_STREAM: u64 = u64::MAX;

fn below(rng: &mut ChaCha8Rng, bound: u64) -> u64 {
    let mask = bound.next_power_of_two() - 1;
    loop {
        let v = rng.next_u64() & mask;
        if v < bound {
            return v;
        }
    }
}

/// A random circuit that is a pure function of its arguments.
///
/// Weights out of 100: H 25, P 20, CX 25, X/Z 15, MEASURE 15. With a single
/// qudit the CX share is emitted as H. Translation powers are nonzero.
pub fn random_circuit(n: usize, d: u32, depth: usize, seed: u64) -> Result<Circuit> {
    let mut circuit = Circuit::new(n, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(CIRCUIT_STREAM);
    for _ in 0..depth {
        let roll = below(&mut rng, 100);
        let i = below(&mut rng, n as u64) as usize;
        let ins = match roll {
            0..=24 => Instruction::H(i),
            25..=44 => Instruction::P(i),
            45..=69 if n == 1 => Instruction::H(i),
            45..=69 => {
                let j = (i + 1 + below(&mut rng, n as u64 - 1) as usize) % n;
                Instruction::Cx(i, j)
            }
            70..=84 => {
                let k = 1 + below(&mut rng, d as u64 - 1) as u32;
                if below(&mut rng, 2) == 0 {
                    Instruction::X(i, k)
                } else {
                    Instruction::Z(i, k)
                }
            }
            _ => Instruction::Measure(i),
        };
        circuit.instructions.push(ins);
    }
    Ok(circuit)
}
