//! Reference values the bounds are checked against.
//!
//! * Two-qubit EOF from the Wootters concurrence.
//! * Pure-state EOF as the entropy of a marginal.
//! * Quantum discord `D_A` for a qubit A by direct minimization over
//!   projective measurements `(1 +- n.sigma)/2`.
//! * Rank-2 two-qubit discord through the Koashi-Winter relation
//!   `D_A(rho_AB) = E_F(rho_BC) + S(rho_A) - S(rho_AB)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::entropy::{shannon_entropy, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, eigvalsh, CMatrix};
use crate::math;
use crate::state::{purify, BipartiteDensityMatrix, PureState, Subsystem};

/// Conditional branches with less weight than this contribute zero.
pub const BRANCH_CUTOFF: f64 = 1e-12;
pub const MIN_GRID: usize = 32;
const REFINE_MAX_ITER: usize = 200;
const REFINE_MIN_STEP: f64 = 1e-8;

fn require_two_qubits(rho: &BipartiteDensityMatrix) -> Result<()> {
    if rho.dims() != (2, 2) {
        let (m, n) = rho.dims();
        return Err(Error::BadDimensions { m, n });
    }
    Ok(())
}

/// `sigma_y (x) sigma_y` in the computational basis.
fn sigma_yy() -> CMatrix {
    let mut s = CMatrix::zeros(4);
    let one = Complex64::new(1.0, 0.0);
    s[(0, 3)] = -one;
    s[(1, 2)] = one;
    s[(2, 1)] = one;
    s[(3, 0)] = -one;
    s
}

/// Eigenvalues of `rho` below this are treated as exact zeros in [`concurrence_2q`].
pub const CONCURRENCE_NULL_CUTOFF: f64 = 1e-13;

/// Wootters concurrence `max{0, l1 - l2 - l3 - l4}`, with `l_i` the decreasing
/// square roots of the spectrum of `rho (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`.
///
/// With `rho = W W^dag`, `W = V diag(sqrt(mu))`, the `l_i` are the singular
/// values of the complex symmetric `T = W^T (sigma_y (x) sigma_y) W`. They
/// are read off the Hermitian dilation `[[0, T], [T^dag, 0]]`, which keeps
/// small `l_i` accurate to rounding instead of to its square root.
pub fn concurrence_2q(rho: &BipartiteDensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let eig = eig_hermitian(rho.matrix())?;
    let kept: Vec<usize> = (0..4)
        .filter(|&j| eig.values[j] > CONCURRENCE_NULL_CUTOFF)
        .collect();
    let r = kept.len();
    let w = |row: usize, c: usize| eig.vectors[(row, kept[c])] * math::sqrt(eig.values[kept[c]]);
    let yy = sigma_yy();
    let t = CMatrix::from_fn(r, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..4 {
            for b in 0..4 {
                acc += w(a, i) * yy[(a, b)] * w(b, j);
            }
        }
        acc
    });
    let dilation = CMatrix::from_fn(2 * r, |i, j| match (i < r, j < r) {
        (true, false) => t[(i, j - r)],
        (false, true) => t[(j, i - r)].conj(),
        _ => Complex64::new(0.0, 0.0),
    });
    let mut l: Vec<f64> = eigvalsh(&dilation)?
        .into_iter()
        .rev()
        .take(r)
        .map(|x| x.max(0.0))
        .collect();
    l.resize(4, 0.0);
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// `H2((1 + sqrt(1 - C^2))/2)` for concurrence `C`.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let x = (1.0 + math::sqrt_clamped(1.0 - c * c)) / 2.0;
    shannon_entropy(&[x, 1.0 - x])
}

pub fn eof_2q(rho: &BipartiteDensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence_2q(rho)?))
}

/// `S(Tr_B |psi><psi|)`.
pub fn eof_pure(psi: &PureState) -> f64 {
    von_neumann_entropy(&psi.reduced(Subsystem::A)).unwrap_or(0.0)
}

/// A complete projective measurement on subsystem A.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    pub dim_a: usize,
    /// Rank-one projectors `|e_k><e_k|`.
    pub projectors: Vec<CMatrix>,
    /// Bloch angles `(theta, phi)` of the first projector's axis, for a qubit.
    pub angles: Option<(f64, f64)>,
}

fn bloch_vectors(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (c, s) = (math::cos(theta / 2.0), math::sin(theta / 2.0));
    let ph = Complex64::new(math::cos(phi), math::sin(phi));
    [
        [Complex64::new(c, 0.0), ph * s],
        [-ph.conj() * s, Complex64::new(c, 0.0)],
    ]
}

/// Brings `(theta, phi)` into `theta in [0, pi]`, `phi in [0, 2 pi)` without changing the axis.
fn canonical_angles(theta: f64, phi: f64) -> (f64, f64) {
    let tau = 2.0 * PI;
    let wrap = |x: f64| x - tau * math::floor(x / tau);
    let mut t = wrap(theta);
    let mut p = phi;
    if t > PI {
        t = tau - t;
        p += PI;
    }
    (t, wrap(p))
}

impl MeasurementBasis {
    /// Projectors `(1 +- n.sigma)/2` with `n = (sin t cos p, sin t sin p, cos t)`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        let projectors = bloch_vectors(theta, phi)
            .iter()
            .map(|v| CMatrix::outer(v))
            .collect();
        Self {
            dim_a: 2,
            projectors,
            angles: Some(canonical_angles(theta, phi)),
        }
    }

    /// Largest deviation from completeness and pairwise orthogonality.
    pub fn defect(&self) -> f64 {
        let d = self.dim_a;
        let mut sum = CMatrix::zeros(d);
        for p in &self.projectors {
            sum = &sum + p;
        }
        let mut worst = sum.max_abs_diff(&CMatrix::identity(d));
        for (i, p) in self.projectors.iter().enumerate() {
            worst = worst.max((p * p).max_abs_diff(p));
            for q in &self.projectors[i + 1..] {
                worst = worst.max((p * q).max_abs_diff(&CMatrix::zeros(d)));
            }
        }
        worst
    }

    pub fn is_valid(&self) -> bool {
        self.defect() <= 1e-10
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscordResult {
    /// Discord in bits.
    pub value: f64,
    pub argmin_basis: MeasurementBasis,
    pub grid_resolution: usize,
    pub refined: bool,
}

impl DiscordResult {
    pub fn angles(&self) -> (f64, f64) {
        self.argmin_basis.angles.unwrap_or((0.0, 0.0))
    }
}

/// `sum_k p_k S(rho_B|k)` for the measurement with axis `(theta, phi)`.
fn conditional_entropy(rho: &CMatrix, n: usize, theta: f64, phi: f64) -> f64 {
    let mut total = 0.0;
    for e in bloch_vectors(theta, phi) {
        // unnormalized rho_B|k = <e_k| rho |e_k> over A
        let cond = CMatrix::from_fn(n, |b, b2| {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for a2 in 0..2 {
                    acc += e[a].conj() * rho[(a * n + b, a2 * n + b2)] * e[a2];
                }
            }
            acc
        });
        let p = cond.trace().re;
        if p < BRANCH_CUTOFF {
            continue;
        }
        let spectrum = eigvalsh(&cond.hermitian_part()).unwrap_or_default();
        let s: f64 = spectrum
            .iter()
            .map(|&x| math::neg_xlog2x((x / p).clamp(0.0, 1.0)))
            .sum();
        total += p * s;
    }
    total
}

/// Golden-section minimum of `f` on `[lo, hi]`.
fn golden_section(
    f: &mut impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    let g = (math::sqrt(5.0) - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Quantum discord with a qubit as the measured subsystem A.
///
/// The objective `sum_k p_k S(rho_B|k) + S(rho_A) - S(rho)` is minimized
/// over the lattice `theta_i = i pi/grid` (`0 <= i <= grid`),
/// `phi_j = j pi/grid` (`0 <= j < 2 grid`). Doubling `grid` gives a superset
/// of points, so the unrefined value never increases with `grid`. Ties go to
/// the lexicographically smallest `(theta, phi)`. With `refine`, a
/// coordinate-wise golden-section descent continues from the best lattice point.
pub fn discord_bruteforce(
    rho: &BipartiteDensityMatrix,
    grid: usize,
    refine: bool,
) -> Result<DiscordResult> {
    let (m, n) = rho.dims();
    if m != 2 {
        return Err(Error::BadDimension {
            d: m,
            reason: "brute-force discord measures a qubit subsystem A",
        });
    }
    if grid < MIN_GRID {
        return Err(Error::InvalidArgument {
            reason: "grid must be at least 32",
        });
    }
    let r = rho.matrix();
    let offset = von_neumann_entropy(&rho.partial_trace(Subsystem::A))? - von_neumann_entropy(r)?;
    let g = grid as f64;

    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=grid {
        let theta = (i as f64) * PI / g;
        for j in 0..2 * grid {
            let phi = (j as f64) * PI / g;
            let v = conditional_entropy(r, n, theta, phi);
            if v < best.0 {
                best = (v, theta, phi);
            }
        }
    }

    if refine {
        let (mut v, mut theta, mut phi) = best;
        let mut step = PI / g;
        let mut iter = 0;
        while iter < REFINE_MAX_ITER && step >= REFINE_MIN_STEP {
            iter += 1;
            let before = v;
            let (t, vt) = golden_section(
                &mut |t| conditional_entropy(r, n, t, phi),
                theta - step,
                theta + step,
                step * 1e-3,
            );
            if vt < v {
                v = vt;
                theta = t;
            }
            let (p, vp) = golden_section(
                &mut |p| conditional_entropy(r, n, theta, p),
                phi - step,
                phi + step,
                step * 1e-3,
            );
            if vp < v {
                v = vp;
                phi = p;
            }
            if before - v <= 1e-15 {
                step *= 0.5;
            }
        }
        best = (v, theta, phi);
    }

    Ok(DiscordResult {
        value: best.0 + offset,
        argmin_basis: MeasurementBasis::from_bloch(best.1, best.2),
        grid_resolution: grid,
        refined: refine,
    })
}

/// Discord of a two-qubit state of rank at most 2 via the Koashi-Winter relation.
///
/// The purifying system has dimension equal to the rank, so `rho_BC` is a
/// two-qubit state (or a pure product when `rho` is pure) and its EOF is exact.
pub fn discord_kw_rank2(rho: &BipartiteDensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let rank = rho.rank()?;
    if rank > 2 {
        return Err(Error::RankTooHigh { rank, max: 2 });
    }
    let pur = purify(rho)?;
    let eof_bc = if pur.dim_c == 1 {
        0.0
    } else {
        eof_2q(&pur.rho_bc)?
    };
    Ok(
        eof_bc + von_neumann_entropy(&rho.partial_trace(Subsystem::A))?
            - von_neumann_entropy(rho.matrix())?,
    )
}

/// Grid used by [`check_kw`].
pub const KW_GRID: usize = 64;

/// `D_A - S(rho_A) + S(rho) - eof_bc`, with `D_A` from [`discord_bruteforce`]
/// at [`KW_GRID`] with refinement.
pub fn check_kw(rho: &BipartiteDensityMatrix, eof_bc: f64) -> Result<f64> {
    let d = discord_bruteforce(rho, KW_GRID, true)?.value;
    let s_a = von_neumann_entropy(&rho.partial_trace(Subsystem::A))?;
    let s = von_neumann_entropy(rho.matrix())?;
    Ok(d - s_a + s - eof_bc)
}
