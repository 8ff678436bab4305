//! The P-filtration B_s = C_L(F - sP) computed from C alone.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::code::LinearCode;
use crate::field::Elem;
use crate::matrix::{Echelon, Matrix};

use super::AttackError;

/// Which driver computes the filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Algorithm {
    /// One step per index: B_{s+1} from (B_s, B_{s-1}).
    #[serde(rename = "1")]
    One,
    /// Index doubling along a dyadic chain ending at (t+g, t+g+1).
    #[serde(rename = "2")]
    Two,
}

impl Algorithm {
    pub fn number(self) -> u8 {
        match self {
            Algorithm::One => 1,
            Algorithm::Two => 2,
        }
    }
}

/// Index chain for [`Algorithm::Two`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chain {
    /// `⌊(t+g)/2^s⌋` for `s = ⌈log2(t+g)⌉ - 1, ..., 0`.
    #[default]
    Target,
    /// `⌊(t+g)/2^s⌋` for `s = ⌊log2 n⌋ + 1, ..., 0`, skipping zero targets.
    Length,
}

/// Length, genus and degree that the step hypotheses are checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regime {
    pub n: usize,
    pub g: usize,
    pub m: usize,
}

impl Regime {
    /// `2m < n`. Below this, evaluation is injective on L(2F - P), which the
    /// first step needs; at `2m >= n` the function vanishing on every point
    /// hides the order of vanishing at P.
    pub fn direct(&self) -> Result<(), AttackError> {
        if 2 * self.m < self.n {
            Ok(())
        } else {
            Err(AttackError::Guard(format!(
                "direct route needs 2m < n, got n = {}, m = {}",
                self.n, self.m
            )))
        }
    }

    /// Hypothesis for computing B_{s+1} from (B_s, B_{s-1}).
    pub fn step(&self, s: usize) -> Result<(), AttackError> {
        if self.m < 2 * self.g + s + 1 {
            return Err(AttackError::Guard(format!(
                "step to B_{} needs m >= 2g + {} = {}, got m = {}",
                s + 1,
                s + 1,
                2 * self.g + s + 1,
                self.m
            )));
        }
        self.direct()
    }

    /// Hypothesis for computing B_s by doubling.
    pub fn doubling(&self, s: usize) -> Result<(), AttackError> {
        let need = 2 * self.g + s / 2 + 1;
        if self.m < need {
            return Err(AttackError::Guard(format!(
                "doubling to B_{s} needs m >= {need}, got m = {}",
                self.m
            )));
        }
        self.direct()
    }
}

/// Computed filtration codes with bookkeeping.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub codes: BTreeMap<usize, LinearCode>,
    pub algorithm: Algorithm,
    /// Linear systems solved.
    pub lambda: usize,
    pub solve_times: Vec<Duration>,
}

impl Filtration {
    pub(crate) fn new(b0: &LinearCode, b1: &LinearCode, algorithm: Algorithm) -> Self {
        let mut codes = BTreeMap::new();
        codes.insert(0, b0.clone());
        codes.insert(1, b1.clone());
        Filtration {
            codes,
            algorithm,
            lambda: 0,
            solve_times: Vec::new(),
        }
    }

    pub fn get(&self, s: usize) -> Option<&LinearCode> {
        self.codes.get(&s)
    }

    fn need(&self, s: usize) -> &LinearCode {
        &self.codes[&s]
    }

    /// Records `code` as B_s after checking its dimension, or checks it
    /// against the copy already known.
    fn record(&mut self, s: usize, code: LinearCode, started: Instant) -> Result<(), AttackError> {
        self.lambda += 1;
        self.solve_times.push(started.elapsed());
        let k0 = self.need(0).dimension();
        let expected = k0.saturating_sub(s);
        if code.dimension() != expected || s > k0 {
            return Err(AttackError::DimensionDrop {
                s,
                got: code.dimension(),
                expected,
            });
        }
        if let Some(prev) = self.codes.get(&s) {
            if *prev != code {
                return Err(AttackError::Disagreement(s));
            }
        } else {
            self.codes.insert(s, code);
        }
        Ok(())
    }
}

/// `{z ∈ domain : z * b ∈ target for every b ∈ multiplier}`.
pub fn solve_problem(
    domain: &LinearCode,
    multiplier: &LinearCode,
    target: &LinearCode,
) -> Result<LinearCode, AttackError> {
    let f = domain.field();
    let n = domain.len();
    let k = domain.dimension();
    if k == 0 {
        return Ok(domain.clone());
    }
    let ht = target.parity_check().transpose();
    let mut constraints = Echelon::new(f, k);
    let mut v = vec![0 as Elem; k * n];
    'outer: for b in multiplier.basis() {
        for (i, u) in domain.basis().enumerate() {
            let row = &mut v[i * n..(i + 1) * n];
            for ((r, &ui), &bi) in row.iter_mut().zip(u).zip(b) {
                *r = f.mul(ui, bi);
            }
        }
        // Entry (i, h) is the h-th parity check of u_i * b.
        let block = Matrix::new(f, k, n, v.clone())?.mul(&ht)?.transpose();
        for row in block.row_iter() {
            constraints.insert(row.to_vec());
            if constraints.is_full() {
                break 'outer;
            }
        }
    }
    let coeffs = constraints.into_rref().kernel();
    Ok(LinearCode::from_generator(&coeffs.mul(domain.generator())?))
}

/// Solution space of `z ∈ B_s, z * B_{s-1} ⊆ B_s^(2)`: B_{s+1}.
pub fn filtration_step(b_s: &LinearCode, b_prev: &LinearCode) -> Result<LinearCode, AttackError> {
    solve_problem(b_s, b_prev, &b_s.schur_square())
}

/// Solution space of `z ∈ B_hi, z * B_0 ⊆ B_lo * B_hi` with
/// `hi = ⌈s/2⌉` and `lo = ⌊s/2⌋`: B_s.
pub fn filtration_step_doubling(
    b_hi: &LinearCode,
    b_lo: &LinearCode,
    b0: &LinearCode,
) -> Result<LinearCode, AttackError> {
    let target = if b_hi == b_lo {
        b_hi.schur_square()
    } else {
        b_lo.schur_product(b_hi)?
    };
    solve_problem(b_hi, b0, &target)
}

fn step(f: &mut Filtration, regime: &Regime, s: usize) -> Result<(), AttackError> {
    regime.step(s)?;
    let started = Instant::now();
    let next = filtration_step(f.need(s), f.need(s - 1))?;
    f.record(s + 1, next, started)
}

fn double(f: &mut Filtration, regime: &Regime, s: usize) -> Result<(), AttackError> {
    regime.doubling(s)?;
    let started = Instant::now();
    let code = filtration_step_doubling(f.need(s.div_ceil(2)), f.need(s / 2), f.need(0))?;
    f.record(s, code, started)
}

/// B_2, ..., B_{target+1}, one system per index.
pub fn run_algorithm_1(
    b0: &LinearCode,
    b1: &LinearCode,
    regime: &Regime,
    target: usize,
) -> Result<Filtration, AttackError> {
    regime.step(target).map_err(|e| match e {
        AttackError::Guard(msg) => AttackError::Guard(format!("Algorithm 1 refused: {msg}")),
        other => other,
    })?;
    let mut f = Filtration::new(b0, b1, Algorithm::One);
    for s in 1..=target {
        step(&mut f, regime, s)?;
    }
    Ok(f)
}

/// B_target and B_{target+1} by index doubling; solves
/// `2⌈log2 target⌉ + 2` systems.
pub fn run_algorithm_2(
    b0: &LinearCode,
    b1: &LinearCode,
    regime: &Regime,
    target: usize,
) -> Result<Filtration, AttackError> {
    run_algorithm_2_with(b0, b1, regime, target, Chain::Target)
}

pub fn run_algorithm_2_with(
    b0: &LinearCode,
    b1: &LinearCode,
    regime: &Regime,
    target: usize,
    chain: Chain,
) -> Result<Filtration, AttackError> {
    regime.doubling(target + 1).map_err(|e| match e {
        AttackError::Guard(msg) => AttackError::Guard(format!("Algorithm 2 refused: {msg}")),
        other => other,
    })?;
    let mut f = Filtration::new(b0, b1, Algorithm::Two);
    step(&mut f, regime, 1)?;
    if regime.step(2).is_ok() {
        step(&mut f, regime, 2)?;
    } else {
        double(&mut f, regime, 3)?;
    }
    let indices = match chain {
        Chain::Target => dyadic_chain(target),
        Chain::Length => length_chain(regime.n, target),
    };
    for a in indices {
        double(&mut f, regime, a)?;
        double(&mut f, regime, a + 1)?;
    }
    Ok(f)
}

/// `⌊N/2^s⌋` for `s = c-1, ..., 0` with `c = ⌈log2 N⌉`.
pub fn dyadic_chain(n: usize) -> Vec<usize> {
    let c = ceil_log2(n);
    (0..c).rev().map(|s| n >> s).collect()
}

/// Nonzero `⌊N/2^s⌋` for `s = ⌊log2 n⌋ + 1, ..., 0`.
pub fn length_chain(n: usize, target: usize) -> Vec<usize> {
    let top = n.max(1).ilog2() as usize + 1;
    (0..=top)
        .rev()
        .map(|s| target >> s)
        .filter(|&a| a > 0)
        .collect()
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}
