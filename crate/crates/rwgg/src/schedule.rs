//! Vertex-arrival schedules: the duration function `f(i)` and the round
//! boundaries `T_n`.
//!
//! Round `i` is the block of `f(i)` consecutive steps during which the graph
//! keeps its order; the boundaries satisfy `T_1 = 0` and
//! `T_{n+1} = T_n + f(n)` in exact integer arithmetic.

use std::path::Path;

use crate::error::{Error, Result};

/// Built-in duration functions. Real-valued rules are rounded up and floored
/// at one step, since a round must last a positive integer number of steps.
#[derive(Debug, Clone, PartialEq)]
pub enum DurationFn {
    /// `f(i) = c`
    Constant(u64),
    /// `f(i) = ⌈C·i⌉`
    Linear { coeff: f64 },
    /// `f(i) = ⌈C·i^e⌉` (e.g. `e = 1−γ` on complete graphs, `e = 2−γ` on paths)
    Power { coeff: f64, exponent: f64 },
    /// Explicit per-round table, `table[i-1] = f(i)`.
    Table(Vec<u64>),
}

impl DurationFn {
    fn validate(&self) -> Result<()> {
        match self {
            DurationFn::Constant(c) if *c == 0 => {
                Err(Error::config("schedule.constant", "c must be >= 1"))
            }
            DurationFn::Linear { coeff } | DurationFn::Power { coeff, .. }
                if !(coeff.is_finite() && *coeff > 0.0) =>
            {
                Err(Error::config("schedule.coeff", "C must be finite and > 0"))
            }
            DurationFn::Power { exponent, .. } if !exponent.is_finite() => {
                Err(Error::config("schedule.exponent", "exponent must be finite"))
            }
            DurationFn::Table(t) if t.is_empty() => {
                Err(Error::config("schedule.table", "table must be nonempty"))
            }
            DurationFn::Table(t) if t.contains(&0) => {
                Err(Error::config("schedule.table", "all entries must be >= 1"))
            }
            _ => Ok(()),
        }
    }

    /// Duration of round `i` (1-based).
    fn eval(&self, i: u32) -> Result<u64> {
        let ceil_pos = |x: f64| -> u64 { (x.ceil() as u64).max(1) };
        match self {
            DurationFn::Constant(c) => Ok(*c),
            DurationFn::Linear { coeff } => Ok(ceil_pos(coeff * i as f64)),
            DurationFn::Power { coeff, exponent } => {
                Ok(ceil_pos(coeff * (i as f64).powf(*exponent)))
            }
            DurationFn::Table(t) => t.get(i as usize - 1).copied().ok_or_else(|| {
                Error::range("table round index", i, format!("1..={}", t.len()))
            }),
        }
    }
}

/// A fully materialized arrival schedule: durations for every round plus the
/// cumulative boundaries, exact in integer arithmetic.
#[derive(Debug, Clone)]
pub struct GrowthSchedule {
    durations: Vec<u64>,
    /// `boundaries[n-1] = T_n` for `n = 1..=rounds()+1`.
    boundaries: Vec<u64>,
    initial_order: u32,
    final_order: u32,
}

impl GrowthSchedule {
    /// Schedule with a single initial vertex (the standard model).
    pub fn new(durations: DurationFn, final_order: u32) -> Result<Self> {
        Self::with_initial_order(durations, 1, final_order)
    }

    /// Schedule starting from a clique of `initial_order` vertices. Round `i`
    /// runs on the graph of order `initial_order + i - 1`.
    pub fn with_initial_order(
        durations: DurationFn,
        initial_order: u32,
        final_order: u32,
    ) -> Result<Self> {
        durations.validate()?;
        if initial_order < 1 {
            return Err(Error::range("initial order", initial_order, ">= 1"));
        }
        if final_order < initial_order {
            return Err(Error::range(
                "final order",
                final_order,
                format!(">= initial order {initial_order}"),
            ));
        }
        let rounds = final_order - initial_order + 1;
        let mut dur = Vec::with_capacity(rounds as usize);
        let mut boundaries = Vec::with_capacity(rounds as usize + 1);
        boundaries.push(0u64);
        for i in 1..=rounds {
            let f = durations.eval(i)?;
            debug_assert!(f >= 1);
            dur.push(f);
            boundaries.push(boundaries[i as usize - 1] + f);
        }
        Ok(GrowthSchedule {
            durations: dur,
            boundaries,
            initial_order,
            final_order,
        })
    }

    /// Load a schedule table from a plain-text file with one `n<TAB>f(n)`
    /// line per round.
    pub fn from_table_file(path: &Path, initial_order: u32, final_order: u32) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut table: Vec<u64> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let round: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    reason: "expected `n <TAB> f(n)`".into(),
                })?;
            let f: u64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    reason: "expected `n <TAB> f(n)`".into(),
                })?;
            if round != table.len() + 1 {
                return Err(Error::Parse {
                    line: lineno + 1,
                    reason: format!("rounds must be consecutive from 1, got {round}"),
                });
            }
            table.push(f);
        }
        Self::with_initial_order(DurationFn::Table(table), initial_order, final_order)
    }

    pub fn initial_order(&self) -> u32 {
        self.initial_order
    }

    /// Final graph order reached by the schedule.
    pub fn final_order(&self) -> u32 {
        self.final_order
    }

    /// Number of rounds.
    pub fn rounds(&self) -> u32 {
        self.durations.len() as u32
    }

    /// Graph order during round `i` (1-based).
    pub fn order_at_round(&self, i: u32) -> u32 {
        self.initial_order + i - 1
    }

    /// `f(i)` for round `i` in `1..=rounds()`.
    pub fn duration(&self, i: u32) -> Result<u64> {
        self.durations
            .get(i as usize - 1)
            .copied()
            .ok_or_else(|| Error::range("round index", i, format!("1..={}", self.rounds())))
    }

    pub fn durations(&self) -> &[u64] {
        &self.durations
    }

    /// `T_n = Σ_{i=1}^{n-1} f(i)` for `n` in `1..=rounds()+1`.
    pub fn round_boundary(&self, n: u32) -> Result<u64> {
        if n == 0 {
            return Err(Error::range("round index", n, format!("1..={}", self.rounds() + 1)));
        }
        self.boundaries
            .get(n as usize - 1)
            .copied()
            .ok_or_else(|| Error::range("round index", n, format!("1..={}", self.rounds() + 1)))
    }

    /// Total walk length `T_{rounds+1}`.
    pub fn total_steps(&self) -> u64 {
        *self.boundaries.last().unwrap()
    }
}
