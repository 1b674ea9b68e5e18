//! Purity-based bounds on entanglement of formation and quantum discord.
//!
//! ```text
//! co[R_L^(n)](L5)  <=  E_F   <=  ca[F_U^(n)](L6)                      n = min(m, n)
//! R_L^(m)(L1) - R_U^(mn)(L2) + co[R_L^(n)](L3)  <=  D_A
//! D_A  <=  R_U^(m)(L1) - R_L^(mn)(L2) + ca[F_U^(n)](L4)
//! ```
//!
//! Lower bounds are floored at zero; the unfloored value is kept as `raw_lower`.

use alloc::vec::Vec;

use crate::curves::{ca_f_upper_mode, co_r_lower_mode, r_lower, r_upper, EvalMode};
use crate::error::Result;
use crate::math;
use crate::observables::{
    lambdas_from_purities, purities_from_probs, CorrelationMeasurementRecord, Flag, LambdaSet,
};
use crate::state::{purities, BipartiteDensityMatrix, PurityTriple};

const LOG_DIM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Quantity {
    #[cfg_attr(feature = "serde", serde(rename = "EOF"))]
    Eof,
    DiscordA,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundInterval {
    pub quantity: Quantity,
    pub lower: f64,
    pub upper: f64,
    pub mode: EvalMode,
    pub raw_lower: f64,
    pub flags: Vec<Flag>,
}

impl BoundInterval {
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        self.lower - tol <= value && value <= self.upper + tol
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }
}

fn carried_flags(lam: &LambdaSet, with_lambda6: bool) -> Vec<Flag> {
    lam.flags
        .iter()
        .copied()
        .filter(|&f| with_lambda6 || f != Flag::TwoQubitLambda6Used)
        .collect()
}

/// Bounds on `E_F`. The bound assumes `m >= n`, so the smaller dimension is used.
pub fn eof_bounds(lam: &LambdaSet, mode: EvalMode) -> Result<BoundInterval> {
    let n = lam.m.min(lam.n);
    let raw_lower = co_r_lower_mode(n, lam.lambda5, mode)?;
    let upper = ca_f_upper_mode(n, lam.lambda6, mode)?;
    let mut flags = carried_flags(lam, true);
    if upper > math::log2(n as f64) + LOG_DIM_SLACK {
        flags.push(Flag::UpperExceedsLogDim);
    }
    Ok(BoundInterval {
        quantity: Quantity::Eof,
        lower: raw_lower.max(0.0),
        upper,
        mode,
        raw_lower,
        flags,
    })
}

/// The three terms `R_L^(m)(L1)`, `R_U^(mn)(L2)`, `co[R_L^(n)](L3)` of the discord lower bound.
pub fn discord_lower_terms(lam: &LambdaSet, mode: EvalMode) -> Result<[f64; 3]> {
    let (m, n) = (lam.m, lam.n);
    Ok([
        r_lower(m, lam.lambda1, mode)?,
        r_upper(m * n, lam.lambda2, mode)?,
        co_r_lower_mode(n, lam.lambda3, mode)?,
    ])
}

/// Returns `(raw, floored)` for the lower bound on `D_A`, with `A` the measured side.
pub fn discord_lower(lam: &LambdaSet, mode: EvalMode) -> Result<(f64, f64)> {
    let [t1, t2, t3] = discord_lower_terms(lam, mode)?;
    let raw = t1 - t2 + t3;
    Ok((raw, raw.max(0.0)))
}

/// The three terms `R_U^(m)(L1)`, `R_L^(mn)(L2)`, `ca[F_U^(n)](L4)` of the discord upper bound.
pub fn discord_upper_terms(lam: &LambdaSet, mode: EvalMode) -> Result<[f64; 3]> {
    let (m, n) = (lam.m, lam.n);
    Ok([
        r_upper(m, lam.lambda1, mode)?,
        r_lower(m * n, lam.lambda2, mode)?,
        ca_f_upper_mode(n, lam.lambda4, mode)?,
    ])
}

pub fn discord_upper(lam: &LambdaSet, mode: EvalMode) -> Result<f64> {
    let [t1, t2, t3] = discord_upper_terms(lam, mode)?;
    Ok(t1 - t2 + t3)
}

pub fn discord_bounds(lam: &LambdaSet, mode: EvalMode) -> Result<BoundInterval> {
    let (raw_lower, lower) = discord_lower(lam, mode)?;
    let upper = discord_upper(lam, mode)?;
    let mut flags = carried_flags(lam, false);
    if upper > math::log2(lam.m as f64) + LOG_DIM_SLACK {
        flags.push(Flag::UpperExceedsLogDim);
    }
    Ok(BoundInterval {
        quantity: Quantity::DiscordA,
        lower,
        upper,
        mode,
        raw_lower,
        flags,
    })
}

/// What a report is computed from.
#[derive(Debug, Clone, Copy)]
pub enum ReportInput<'a> {
    State(&'a BipartiteDensityMatrix),
    Probabilities {
        record: &'a CorrelationMeasurementRecord,
        m: usize,
        n: usize,
    },
    Purities {
        purities: &'a PurityTriple,
        m: usize,
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundsReport {
    pub m: usize,
    pub n: usize,
    pub mode: EvalMode,
    pub record: Option<CorrelationMeasurementRecord>,
    pub purities: PurityTriple,
    pub lambdas: LambdaSet,
    pub eof: BoundInterval,
    pub discord: BoundInterval,
    pub discord_lower_terms: [f64; 3],
    pub discord_upper_terms: [f64; 3],
    /// Union of every flag raised on the way.
    pub flags: Vec<Flag>,
}

pub fn full_report(input: ReportInput<'_>, mode: EvalMode) -> Result<BoundsReport> {
    let (m, n, record, purities) = match input {
        ReportInput::State(rho) => {
            let (m, n) = rho.dims();
            (m, n, None, purities(rho))
        }
        ReportInput::Probabilities { record, m, n } => {
            (m, n, Some(*record), purities_from_probs(record, m, n)?)
        }
        ReportInput::Purities { purities, m, n } => (m, n, None, *purities),
    };
    let lambdas = lambdas_from_purities(&purities, m, n);
    let eof = eof_bounds(&lambdas, mode)?;
    let discord = discord_bounds(&lambdas, mode)?;
    let lower_terms = discord_lower_terms(&lambdas, mode)?;
    let upper_terms = discord_upper_terms(&lambdas, mode)?;
    let mut flags: Vec<Flag> = lambdas
        .flags
        .iter()
        .chain(&eof.flags)
        .chain(&discord.flags)
        .copied()
        .collect();
    flags.sort();
    flags.dedup();
    Ok(BoundsReport {
        m,
        n,
        mode,
        record,
        purities,
        lambdas,
        eof,
        discord,
        discord_lower_terms: lower_terms,
        discord_upper_terms: upper_terms,
        flags,
    })
}
