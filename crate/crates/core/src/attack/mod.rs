//! Key recovery from the public code alone: recover (m, g), compute the
//! P-filtration, repair the degenerate position, and build an
//! error-correcting pair for the public code.

mod extended;
mod filtration;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, LinearCode};
use crate::ecp::{EcpError, EcpPair};
use crate::field::Elem;
use crate::matrix::MatrixError;
use crate::mceliece::{error_budget, Ciphertext, PublicKey, SchemeError};

pub use extended::{default_subsets, extended_filtration, ExtendedPlan};
pub use filtration::{
    ceil_log2, dyadic_chain, filtration_step, filtration_step_doubling, length_chain,
    run_algorithm_1, run_algorithm_2, run_algorithm_2_with, solve_problem, Algorithm, Chain,
    Filtration, Regime,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("Schur square saturates (k2 = n = {0}); m is too large for this route")]
    Saturated(usize),
    #[error("recovered parameters are inconsistent: {0}")]
    Inconsistent(String),
    #[error("hypothesis violated: {0}")]
    Guard(String),
    #[error("B_{s} has dimension {got}, expected {expected}")]
    DimensionDrop {
        s: usize,
        got: usize,
        expected: usize,
    },
    #[error("two computations of B_{0} disagree")]
    Disagreement(usize),
    #[error("every coordinate of C is degenerate")]
    Degenerate,
    #[error("coordinate {0} is degenerate or out of range")]
    BadPoint(usize),
    #[error("repair precondition failed: {0}")]
    Repair(String),
    #[error("recovered A has dimension {k} <= t = {t}")]
    WeakPair { k: usize, t: usize },
    #[error("invalid subsets: {0}")]
    Subsets(String),
    #[error("decoding failed: {0}")]
    Decode(#[from] EcpError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

impl AttackError {
    /// Whether the failure is a parameter-range refusal rather than a
    /// computation going wrong.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            AttackError::Guard(_) | AttackError::Saturated(_) | AttackError::Subsets(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    RecoverParams,
    ChoosePoint,
    Filtration,
    Repair,
    BuildEcp,
    Decode,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::RecoverParams => "recover-params",
            Stage::ChoosePoint => "choose-point",
            Stage::Filtration => "filtration",
            Stage::Repair => "repair",
            Stage::BuildEcp => "build-ecp",
            Stage::Decode => "decode",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("[{stage}] {source}")]
pub struct StageError {
    pub stage: Stage,
    pub source: AttackError,
}

trait Tag<T> {
    fn tag(self, stage: Stage) -> Result<T, StageError>;
}

impl<T, E: Into<AttackError>> Tag<T> for Result<T, E> {
    fn tag(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|e| StageError {
            stage,
            source: e.into(),
        })
    }
}

/// `(m, g) = (k2 - k1, k2 - 2 k1 + 1)` from `k1 = k(C)`, `k2 = k(C^(2))`
/// where `C` is the dual of the public code.
pub fn recover_params(c_pub: &LinearCode) -> Result<(usize, usize), AttackError> {
    let c = c_pub.dual();
    let n = c.len();
    let k1 = c.dimension() as i64;
    let k2 = c.schur_square().dimension() as i64;
    if k2 as usize == n {
        return Err(AttackError::Saturated(n));
    }
    let m = k2 - k1;
    let g = k2 - 2 * k1 + 1;
    if g < 0 || m < 2 * g + 1 || 2 * m >= n as i64 {
        return Err(AttackError::Inconsistent(format!(
            "k1 = {k1}, k2 = {k2} give m = {m}, g = {g}, outside 2g + 1 <= m < n/2"
        )));
    }
    Ok((m as usize, g as usize))
}

/// `(m, g)` from `k(C) = m - g + 1` and the public error budget
/// `t = ⌊(m - 3g + 1)/2⌋`, which force `g = ⌊k(C)/2⌋ - t`.
pub fn recover_params_from_budget(
    k1: usize,
    t: usize,
    n: usize,
) -> Result<(usize, usize), AttackError> {
    let half = k1 / 2;
    if half < t || k1 == 0 {
        return Err(AttackError::Inconsistent(format!(
            "k(C) = {k1} is too small for t = {t}"
        )));
    }
    let g = half - t;
    let m = k1 + g - 1;
    if m >= n || error_budget(m, g) != t {
        return Err(AttackError::Inconsistent(format!(
            "k(C) = {k1}, t = {t} give m = {m}, g = {g}"
        )));
    }
    Ok((m, g))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamRoute {
    Schur,
    Budget,
}

/// Schur route first; falls back to the budget identity when the square
/// saturates or disagrees with `t`.
pub fn resolve_params(
    c_pub: &LinearCode,
    t: usize,
) -> Result<(usize, usize, ParamRoute), AttackError> {
    let schur = recover_params(c_pub);
    if let Ok((m, g)) = schur {
        if error_budget(m, g) == t {
            return Ok((m, g, ParamRoute::Schur));
        }
    }
    let k1 = c_pub.len() - c_pub.dimension();
    match recover_params_from_budget(k1, t, c_pub.len()) {
        Ok((m, g)) => Ok((m, g, ParamRoute::Budget)),
        Err(e) => Err(schur.err().unwrap_or(e)),
    }
}

/// First coordinate at which `c` is not identically zero.
pub fn choose_point(c: &LinearCode) -> Result<usize, AttackError> {
    let degenerate = c.degenerate_positions();
    (0..c.len())
        .find(|i| degenerate.binary_search(i).is_err())
        .ok_or(AttackError::Degenerate)
}

/// `(B_0, B_1) = (C, C shortened at P)`, both at full length.
pub fn init_filtration(c: &LinearCode, p: usize) -> Result<(LinearCode, LinearCode), AttackError> {
    if p >= c.len() || c.degenerate_positions().contains(&p) {
        return Err(AttackError::BadPoint(p));
    }
    Ok((c.clone(), c.shorten(&[p])?))
}

/// Adds back a 1 at P: span of `c + e_P` and `B_{N+1}` for the first basis
/// vector `c` of `B_N` outside `B_{N+1}`.
pub fn repair_degenerate(
    b_n: &LinearCode,
    b_n1: &LinearCode,
    p: usize,
) -> Result<LinearCode, AttackError> {
    if b_n.dimension() != b_n1.dimension() + 1 {
        return Err(AttackError::Repair(format!(
            "dimensions {} and {} do not differ by one",
            b_n.dimension(),
            b_n1.dimension()
        )));
    }
    if b_n.basis().any(|r| r[p] != 0) {
        return Err(AttackError::Repair(format!("B_N is not degenerate at {p}")));
    }
    let mut c = b_n
        .basis()
        .find(|r| !b_n1.contains(r).unwrap_or(true))
        .ok_or_else(|| AttackError::Repair("B_{N+1} is not a subcode of B_N".into()))?
        .to_vec();
    c[p] = 1;
    let mut rows: Vec<Vec<Elem>> = b_n1.basis().map(<[Elem]>::to_vec).collect();
    rows.push(c);
    Ok(LinearCode::from_rows(b_n.field(), b_n.len(), &rows)?)
}

/// `(A_0, B̂)` with `A_0 = (B̂ * C_pub)^⊥`.
pub fn build_ecp(b_hat: &LinearCode, c_pub: &LinearCode, t: usize) -> Result<EcpPair, AttackError> {
    let a0 = b_hat.schur_product(c_pub)?.dual();
    if a0.dimension() <= t {
        return Err(AttackError::WeakPair {
            k: a0.dimension(),
            t,
        });
    }
    Ok(EcpPair::new(a0, b_hat.clone(), c_pub.clone(), t)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Filtration on C itself.
    Direct,
    /// Filtration on shortened codes, summed.
    Extended,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackOptions {
    pub algorithm: Algorithm,
    /// Index chain for Algorithm 2.
    pub chain: Chain,
    /// Distinguished coordinate; defaults to the first non-degenerate one.
    pub point: Option<usize>,
    /// Force a route; by default the direct route is used whenever its
    /// hypothesis holds.
    pub route: Option<Route>,
    /// Subsets for the extended route; defaults to [`default_subsets`].
    pub subsets: Option<Vec<Vec<usize>>>,
}

impl Default for AttackOptions {
    fn default() -> Self {
        AttackOptions {
            algorithm: Algorithm::Two,
            chain: Chain::Target,
            point: None,
            route: None,
            subsets: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

fn timing(stage: impl Into<String>, d: Duration) -> StageTiming {
    StageTiming {
        stage: stage.into(),
        seconds: d.as_secs_f64(),
    }
}

#[derive(Debug, Clone)]
pub struct AttackTranscript {
    pub m: usize,
    pub g: usize,
    pub t: usize,
    pub param_route: ParamRoute,
    pub route: Route,
    pub p_index: usize,
    pub filtration: BTreeMap<usize, LinearCode>,
    pub b_hat: LinearCode,
    pub pair: EcpPair,
    pub algorithm: Algorithm,
    pub lambda: usize,
    pub timings: Vec<StageTiming>,
}

/// Runs the whole attack on a public key.
pub fn attack_pipeline(
    pk: &PublicKey,
    opts: &AttackOptions,
) -> Result<AttackTranscript, StageError> {
    let mut timings = Vec::new();
    let clock = Instant::now();
    let c_pub = pk.code();
    let t = pk.t;
    let (m, g, param_route) = resolve_params(&c_pub, t).tag(Stage::RecoverParams)?;
    let c = c_pub.dual();
    let n = c.len();
    timings.push(timing("recover-params", clock.elapsed()));

    let p = match opts.point {
        Some(p) => p,
        None => choose_point(&c).tag(Stage::ChoosePoint)?,
    };
    let (b0, b1) = init_filtration(&c, p).tag(Stage::ChoosePoint)?;

    let clock = Instant::now();
    let target = t + g;
    let regime = Regime { n, g, m };
    let route = match opts.route {
        Some(r) => r,
        None if regime.direct().is_ok() => Route::Direct,
        None => Route::Extended,
    };
    let filt = match route {
        Route::Direct => match opts.algorithm {
            Algorithm::One => run_algorithm_1(&b0, &b1, &regime, target),
            Algorithm::Two => run_algorithm_2_with(&b0, &b1, &regime, target, opts.chain),
        },
        Route::Extended => {
            let subsets = match &opts.subsets {
                Some(s) => s.clone(),
                None => default_subsets(n, m, p).tag(Stage::Filtration)?,
            };
            let plan = ExtendedPlan {
                regime,
                point: p,
                subsets,
                target,
                algorithm: opts.algorithm,
                chain: opts.chain,
            };
            extended_filtration(&c, &plan).map_err(|e| match (opts.route, regime.direct()) {
                // Chosen automatically: report why neither route applies.
                (None, Err(AttackError::Guard(why))) if e.is_guard() => {
                    AttackError::Guard(format!("{why}; extended route: {e}"))
                }
                _ => e,
            })
        }
    }
    .tag(Stage::Filtration)?;
    for (i, d) in filt.solve_times.iter().enumerate() {
        timings.push(timing(format!("solve-{}", i + 1), *d));
    }
    timings.push(timing("filtration", clock.elapsed()));

    let clock = Instant::now();
    let missing = |s| AttackError::Repair(format!("B_{s} was not computed"));
    let b_n = filt
        .get(target)
        .ok_or_else(|| missing(target))
        .tag(Stage::Repair)?;
    let b_n1 = filt
        .get(target + 1)
        .ok_or_else(|| missing(target + 1))
        .tag(Stage::Repair)?;
    let b_hat = repair_degenerate(b_n, b_n1, p).tag(Stage::Repair)?;
    timings.push(timing("repair", clock.elapsed()));

    let clock = Instant::now();
    let pair = build_ecp(&b_hat, &c_pub, t).tag(Stage::BuildEcp)?;
    timings.push(timing("build-ecp", clock.elapsed()));

    Ok(AttackTranscript {
        m,
        g,
        t,
        param_route,
        route,
        p_index: p,
        filtration: filt.codes,
        b_hat,
        pair,
        algorithm: filt.algorithm,
        lambda: filt.lambda,
        timings,
    })
}

/// Decodes with the recovered pair, then solves `msg * G_pub = c`.
pub fn attack_decrypt(
    pair: &EcpPair,
    pk: &PublicKey,
    ct: &Ciphertext,
) -> Result<Vec<Elem>, StageError> {
    if ct.y.len() != pk.len() {
        return Err(StageError {
            stage: Stage::Decode,
            source: CodeError::BadLength {
                got: ct.y.len(),
                expected: pk.len(),
            }
            .into(),
        });
    }
    let (c, _) = pair.decode(&ct.y).tag(Stage::Decode)?;
    pk.unencode(&c).tag(Stage::Decode)
}
