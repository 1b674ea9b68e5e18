//! Figure data as CSV tables.
//!
//! | figure | one row per | columns |
//! |--------|-------------|---------|
//! | `fig1` | 2x4 state | `window,window_lo,window_hi,item,mixedness,lower,upper` (EOF bounds) |
//! | `fig2` | 2x4 state | same, for discord bounds |
//! | `fig3` | d = 4 spectrum | `rank,s_l,s_v,f_l,f_u` |
//! | `fig4` | d = 4 spectrum | `rank,sqrt_s_l,s_v,r_l,r_u` |
//! | `delta` | sample of `y` | `y,delta,y0` (d = 3) |
//!
//! Numbers carry 12 significant digits.

use clap::ValueEnum;
use eofqd_core::bounds::{discord_bounds, eof_bounds};
use eofqd_core::curves::{
    delta_curve, f_lower, f_upper, find_inflection, r_lower, r_upper, EvalMode,
};
use eofqd_core::entropy::shannon_entropy;
use eofqd_core::observables::lambdas_from_state;
use eofqd_core::sample::{mixedness, sample_state, sample_window_item, PurityWindow};
use eofqd_core::state::purity;
use rayon::prelude::*;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Delta,
}

pub const DEFAULT_WINDOWS: [(f64, f64); 3] = [(0.10, 0.11), (0.20, 0.21), (0.30, 0.31)];

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: FigureId,
    /// Subsystem dimensions for `fig1`/`fig2`.
    pub dims: (usize, usize),
    /// Spectrum length for `fig3`/`fig4`, curve dimension for `delta`.
    pub d: usize,
    pub windows: Vec<PurityWindow>,
    /// States per window (`fig1`/`fig2`), spectra (`fig3`/`fig4`) or sample points (`delta`).
    pub count: usize,
    pub seed: u64,
}

impl FigureSpec {
    pub fn new(id: FigureId) -> Self {
        let (d, count) = match id {
            FigureId::Fig1 | FigureId::Fig2 => (8, 1000),
            FigureId::Fig3 | FigureId::Fig4 => (4, 50_000),
            FigureId::Delta => (3, 400),
        };
        Self {
            id,
            dims: (2, 4),
            d,
            windows: DEFAULT_WINDOWS
                .iter()
                .map(|&(lo, hi)| PurityWindow::new(lo, hi))
                .collect(),
            count,
            seed: 7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(CliError::Validation("count must be at least 1".into()));
        }
        match self.id {
            FigureId::Fig1 | FigureId::Fig2 => {
                let (m, n) = self.dims;
                let max = (1.0 - 1.0 / (m * n) as f64).sqrt();
                if self.windows.is_empty() {
                    return Err(CliError::Validation(
                        "at least one window is required".into(),
                    ));
                }
                for w in &self.windows {
                    if !(0.0 <= w.lo && w.lo < w.hi && w.hi <= max) {
                        return Err(CliError::Validation(format!(
                            "window [{}, {}] outside the feasible range [0, {max:.6}]",
                            w.lo, w.hi
                        )));
                    }
                }
                if m != 2 && self.id == FigureId::Fig2 {
                    return Err(CliError::Validation(
                        "discord figures need a qubit subsystem A".into(),
                    ));
                }
            }
            FigureId::Fig3 | FigureId::Fig4 => {
                if !(2..=64).contains(&self.d) {
                    return Err(CliError::Validation(
                        "spectrum dimension must be in 2..=64".into(),
                    ));
                }
            }
            FigureId::Delta => {
                if self.d < 3 {
                    return Err(CliError::Validation("delta needs d >= 3".into()));
                }
            }
        }
        Ok(())
    }
}

/// A header plus rows of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// Rounds to 12 significant digits and prints the shortest exact form of the result.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        rounded.to_string()
    }
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| format_sig(x)))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

pub fn generate(spec: &FigureSpec) -> Result<Table> {
    spec.validate()?;
    match spec.id {
        FigureId::Fig1 | FigureId::Fig2 => bound_scatter(spec),
        FigureId::Fig3 | FigureId::Fig4 => entropy_scatter(spec),
        FigureId::Delta => delta_table(spec),
    }
}

fn bound_scatter(spec: &FigureSpec) -> Result<Table> {
    let (m, n) = spec.dims;
    let jobs: Vec<(usize, usize)> = (0..spec.windows.len())
        .flat_map(|w| (0..spec.count).map(move |i| (w, i)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(w, i)| -> Result<Vec<f64>> {
            let window = spec.windows[w];
            let seed = spec.seed.wrapping_add((w * spec.count + i) as u64);
            let rho = sample_window_item(m, n, window, seed)?;
            let lam = lambdas_from_state(&rho);
            let interval = match spec.id {
                FigureId::Fig1 => eof_bounds(&lam, EvalMode::Clamped)?,
                _ => discord_bounds(&lam, EvalMode::Clamped)?,
            };
            Ok(vec![
                w as f64,
                window.lo,
                window.hi,
                i as f64,
                mixedness(purity(rho.matrix())),
                interval.lower,
                interval.upper,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        header: vec![
            "window",
            "window_lo",
            "window_hi",
            "item",
            "mixedness",
            "lower",
            "upper",
        ],
        rows,
    })
}

/// Smallest factorization `d = a b` with `a >= 2`, used to draw `d`-level states.
fn split_dim(d: usize) -> (usize, usize) {
    (2..=d)
        .find(|a| d.is_multiple_of(*a))
        .map(|a| (a, d / a))
        .unwrap_or((d, 1))
}

fn entropy_scatter(spec: &FigureSpec) -> Result<Table> {
    let d = spec.d;
    let (a, b) = split_dim(d);
    if b < 2 {
        return Err(CliError::Validation(format!(
            "spectrum dimension {d} must be composite"
        )));
    }
    let ranks: Vec<usize> = (2..=d).collect();
    let rows = (0..spec.count)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let rank = ranks[i % ranks.len()];
            let rho = sample_state(a, b, rank, spec.seed.wrapping_add(i as u64))?;
            let mu = rho.spectrum()?;
            let s_v = shannon_entropy(&mu);
            let s_l = (2.0 * (1.0 - mu.iter().map(|x| x * x).sum::<f64>())).max(0.0);
            Ok(match spec.id {
                FigureId::Fig3 => vec![
                    rank as f64,
                    s_l,
                    s_v,
                    f_lower(d, s_l, EvalMode::Clamped)?,
                    f_upper(d, s_l, EvalMode::Clamped)?,
                ],
                _ => {
                    let lam = s_l.sqrt();
                    vec![
                        rank as f64,
                        lam,
                        s_v,
                        r_lower(d, lam, EvalMode::Clamped)?,
                        r_upper(d, lam, EvalMode::Clamped)?,
                    ]
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let header = match spec.id {
        FigureId::Fig3 => vec!["rank", "s_l", "s_v", "f_l", "f_u"],
        _ => vec!["rank", "sqrt_s_l", "s_v", "r_l", "r_u"],
    };
    Ok(Table { header, rows })
}

fn delta_table(spec: &FigureSpec) -> Result<Table> {
    let d = spec.d;
    let (y0, _) = find_inflection(d)?;
    let lo = 1.0 / (d as f64 - 1.0);
    let hi = 2.0 * y0 + 1.0;
    let steps = spec.count.max(2) - 1;
    let rows = (0..=steps)
        .map(|i| {
            let y = lo + (hi - lo) * i as f64 / steps as f64;
            Ok(vec![y, delta_curve(d, y)?, y0])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        header: vec!["y", "delta", "y0"],
        rows,
    })
}
