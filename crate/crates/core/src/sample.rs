//! Seeded random states.
//!
//! `sample_state` draws from the induced (Hilbert-Schmidt-type) ensemble:
//! a complex Gaussian `mn x rank` factor `G` gives `rho = G G^dagger / Tr(G G^dagger)`.
//!
//! Purity windows are reached by mixing a random pure state `psi` with an
//! induced-ensemble state `sigma` whose rank cycles through `1..=mn`. The
//! purity of `(1-p) |psi><psi| + p sigma` is a convex quadratic in `p`, so a
//! target purity drawn uniformly from the window fixes `p`; draws whose
//! `sigma` cannot reach the window are rejected and counted.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::math;
use crate::state::{make_density, purity, BipartiteDensityMatrix, PureState, MAX_COMPOSITE_DIM};

/// Rejections allowed per window sample before giving up.
pub const MAX_REJECTIONS: usize = 1_000_000;

/// Seeded generator used by every sampler in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 2 || m * n > MAX_COMPOSITE_DIM {
        return Err(Error::BadDimensions { m, n });
    }
    Ok(())
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn induced_state<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMatrix {
    // G is dim x rank, row-major
    let g: Vec<Complex64> = (0..dim * rank).map(|_| gaussian(rng)).collect();
    let mut rho = CMatrix::from_fn(dim, |i, j| {
        (0..rank)
            .map(|k| g[i * rank + k] * g[j * rank + k].conj())
            .sum()
    });
    let tr = rho.trace().re;
    rho = rho.scale(1.0 / tr);
    rho.hermitian_part()
}

fn pure_amplitudes<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = math::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
    for z in v.iter_mut() {
        *z /= norm;
    }
    v
}

/// Haar-random pure state on `C^m (x) C^n`.
pub fn sample_pure(m: usize, n: usize, seed: u64) -> Result<PureState> {
    check_dims(m, n)?;
    let mut rng = rng_from_seed(seed);
    PureState::new(pure_amplitudes(m * n, &mut rng), m, n)
}

/// Induced-ensemble state of the given rank.
pub fn sample_state(m: usize, n: usize, rank: usize, seed: u64) -> Result<BipartiteDensityMatrix> {
    check_dims(m, n)?;
    if rank == 0 || rank > m * n {
        return Err(Error::BadRank { rank, max: m * n });
    }
    let mut rng = rng_from_seed(seed);
    sample_state_with(m, n, rank, &mut rng)
}

/// As [`sample_state`] but drawing from a caller-owned generator.
pub fn sample_state_with<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    rank: usize,
    rng: &mut R,
) -> Result<BipartiteDensityMatrix> {
    check_dims(m, n)?;
    if rank == 0 || rank > m * n {
        return Err(Error::BadRank { rank, max: m * n });
    }
    let rho = if rank == 1 {
        CMatrix::outer(&pure_amplitudes(m * n, rng))
    } else {
        induced_state(m * n, rank, rng)
    };
    make_density(rho, m, n)
}

/// Closed window on `sqrt(1 - Tr rho^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PurityWindow {
    pub lo: f64,
    pub hi: f64,
}

impl PurityWindow {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    /// `sqrt(1 - purity)` lies in the window.
    pub fn contains_purity(&self, purity: f64) -> bool {
        let x = mixedness(purity);
        self.lo <= x && x <= self.hi
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let max = math::sqrt((dim as f64 - 1.0) / dim as f64);
        if !(self.lo >= 0.0 && self.lo < self.hi && self.hi <= max + 1e-15) {
            return Err(Error::BadWindow {
                lo: self.lo,
                hi: self.hi,
                max,
            });
        }
        Ok(())
    }
}

/// `sqrt(1 - Tr rho^2)`
#[inline]
pub fn mixedness(purity: f64) -> f64 {
    math::sqrt_clamped(1.0 - purity)
}

/// `count` states with mixedness in `window`; item `i` is drawn from seed `seed + i`.
pub fn sample_in_window(
    m: usize,
    n: usize,
    window: PurityWindow,
    count: usize,
    seed: u64,
) -> Result<Vec<BipartiteDensityMatrix>> {
    (0..count)
        .map(|i| sample_window_item(m, n, window, seed.wrapping_add(i as u64)))
        .collect()
}

/// One state with mixedness in `window`, drawn from `seed`.
pub fn sample_window_item(
    m: usize,
    n: usize,
    window: PurityWindow,
    seed: u64,
) -> Result<BipartiteDensityMatrix> {
    check_dims(m, n)?;
    let dim = m * n;
    window.validate(dim)?;
    let mut rng = rng_from_seed(seed);

    // Degenerate near-pure window: a pure state already satisfies it.
    if window.lo == 0.0 && window.hi * window.hi < 1e-10 {
        return make_density(CMatrix::outer(&pure_amplitudes(dim, &mut rng)), m, n);
    }

    let target_lo = 1.0 - window.hi * window.hi;
    let target_hi = 1.0 - window.lo * window.lo;
    let mut rejected = 0usize;
    let mut attempt = 0usize;
    while rejected <= MAX_REJECTIONS {
        let rank = 1 + attempt % dim;
        attempt += 1;
        let psi = pure_amplitudes(dim, &mut rng);
        let sigma = if rank == 1 {
            CMatrix::outer(&pure_amplitudes(dim, &mut rng))
        } else {
            induced_state(dim, rank, &mut rng)
        };
        let target = target_lo + (target_hi - target_lo) * rng.random::<f64>();

        // purity((1-p) psi + p sigma) = a p^2 + b p + 1
        let overlap: f64 = {
            let sv = sigma.mat_vec(&psi);
            psi.iter().zip(&sv).map(|(x, y)| (x.conj() * y).re).sum()
        };
        let s = purity(&sigma);
        let a = 1.0 - 2.0 * overlap + s;
        let b = -2.0 + 2.0 * overlap;
        let Some(p) = smallest_weight(a, b, target) else {
            rejected += 1;
            continue;
        };

        let proj = CMatrix::outer(&psi);
        let rho = (&proj.scale(1.0 - p) + &sigma.scale(p)).hermitian_part();
        if !window.contains_purity(purity(&rho)) {
            rejected += 1;
            continue;
        }
        return make_density(rho, m, n);
    }
    Err(Error::WindowInfeasible {
        attempts: attempt,
        accepted: 0,
        acceptance_rate: 0.0,
    })
}

/// Smallest `p` in `[0, 1]` with `a p^2 + b p + 1 = target`, if any.
fn smallest_weight(a: f64, b: f64, target: f64) -> Option<f64> {
    let c = 1.0 - target;
    let p = if a.abs() < 1e-14 {
        if b >= 0.0 {
            return None;
        }
        -c / b
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return None;
        }
        // numerically stable small root of a p^2 + b p + c with b < 0
        2.0 * c / (-b + math::sqrt(disc))
    };
    (0.0..=1.0).contains(&p).then_some(p)
}

/// Uniformly random probability vector (flat Dirichlet) of length `d`.
pub fn sample_simplex<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..d)
        .map(|_| {
            let u: f64 = rng.random();
            -math::ln(1.0 - u)
        })
        .collect();
    let total: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= total;
    }
    v
}
