//! Validated bipartite states, reductions, purities and purification.
//!
//! Composite index convention: `|a>_A |b>_B` sits at `i = a * n + b`
//! (subsystem A is the major index). Partial traces, the two-copy
//! permutation and the density-matrix file format all rely on it.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, CMatrix, HERMITIAN_TOL};
use crate::math;

/// Tolerance on the trace, Hermiticity and positivity of a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Eigenvalues above this count toward the numerical rank.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Largest supported composite dimension `m * n`.
pub const MAX_COMPOSITE_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Subsystem {
    A,
    B,
}

/// Density matrix of an `m x n` bipartite system.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteDensityMatrix {
    m: usize,
    n: usize,
    matrix: CMatrix,
    label: Option<String>,
}

/// Validates `matrix` as a state on `C^m (x) C^n`.
pub fn make_density(matrix: CMatrix, m: usize, n: usize) -> Result<BipartiteDensityMatrix> {
    if m < 2 || n < 2 || m * n > MAX_COMPOSITE_DIM {
        return Err(Error::BadDimensions { m, n });
    }
    BipartiteDensityMatrix::validated(matrix, m, n)
}

impl BipartiteDensityMatrix {
    pub fn new(matrix: CMatrix, m: usize, n: usize) -> Result<Self> {
        make_density(matrix, m, n)
    }

    /// Validation without the `2 <= m, n` restriction, used for the `B (x) C`
    /// marginal of a purification where C may be one-dimensional.
    pub(crate) fn validated(matrix: CMatrix, m: usize, n: usize) -> Result<Self> {
        if matrix.dim() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                found: matrix.dim(),
            });
        }
        let deviation = matrix.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::NotUnitTrace { trace: trace.re });
        }
        let spectrum = eig_hermitian(&matrix)?.values;
        let min_eigenvalue = spectrum[0];
        if min_eigenvalue < -STATE_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self {
            m,
            n,
            matrix,
            label: None,
        })
    }

    /// Maximally mixed state `1/(mn)`.
    pub fn maximally_mixed(m: usize, n: usize) -> Result<Self> {
        make_density(CMatrix::identity(m * n).scale(1.0 / (m * n) as f64), m, n)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn partial_trace(&self, keep: Subsystem) -> CMatrix {
        partial_trace(self, keep)
    }

    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.matrix)?.values)
    }

    /// Number of eigenvalues above [`RANK_THRESHOLD`].
    pub fn rank(&self) -> Result<usize> {
        Ok(self
            .spectrum()?
            .iter()
            .filter(|&&x| x > RANK_THRESHOLD)
            .count())
    }

    /// Same state with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        let (m, n) = (self.m, self.n);
        let idx = |i: usize| {
            let (a, b) = (i / n, i % n);
            b * m + a
        };
        let mut out = CMatrix::zeros(m * n);
        for i in 0..m * n {
            for j in 0..m * n {
                out[(idx(i), idx(j))] = self.matrix[(i, j)];
            }
        }
        Self {
            m: n,
            n: m,
            matrix: out,
            label: self.label.clone(),
        }
    }

    /// `(U_A (x) U_B) rho (U_A (x) U_B)^dagger`
    pub fn local_unitary(&self, ua: &CMatrix, ub: &CMatrix) -> Result<Self> {
        if ua.dim() != self.m || ub.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.m * self.n,
                found: ua.dim() * ub.dim(),
            });
        }
        let u = ua.kron(ub);
        let rotated = &(&u * &self.matrix) * &u.adjoint();
        Ok(Self {
            m: self.m,
            n: self.n,
            matrix: rotated.hermitian_part(),
            label: self.label.clone(),
        })
    }
}

/// Reduced state on the kept subsystem.
pub fn partial_trace(rho: &BipartiteDensityMatrix, keep: Subsystem) -> CMatrix {
    let (m, n) = rho.dims();
    let r = rho.matrix();
    match keep {
        Subsystem::A => {
            CMatrix::from_fn(m, |a, a2| (0..n).map(|b| r[(a * n + b, a2 * n + b)]).sum())
        }
        Subsystem::B => {
            CMatrix::from_fn(n, |b, b2| (0..m).map(|a| r[(a * n + b, a * n + b2)]).sum())
        }
    }
}

/// Purity `Tr(rho^2)` of a Hermitian matrix.
pub fn purity(rho: &CMatrix) -> f64 {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum PuritySource {
    FromState,
    FromProbabilities,
}

/// `(Tr rho^2, Tr rho_A^2, Tr rho_B^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PurityTriple {
    pub tr_rho2: f64,
    pub tr_rho_a2: f64,
    pub tr_rho_b2: f64,
    pub source: PuritySource,
}

impl PurityTriple {
    /// Purities supplied directly, e.g. from an external measurement.
    ///
    /// Each value must lie in `(0, 1]`. Values below the physical minimum
    /// `1/dim` are accepted; [`PurityTriple::is_physical`] reports them.
    pub fn new(tr_rho2: f64, tr_rho_a2: f64, tr_rho_b2: f64, source: PuritySource) -> Result<Self> {
        for x in [tr_rho2, tr_rho_a2, tr_rho_b2] {
            if !x.is_finite() {
                return Err(Error::InvalidPurities {
                    reason: "non-finite value",
                });
            }
            if x <= 0.0 {
                return Err(Error::InvalidPurities {
                    reason: "purity must be positive",
                });
            }
            if x > 1.0 + 1e-9 {
                return Err(Error::InvalidPurities {
                    reason: "purity exceeds 1",
                });
            }
        }
        Ok(Self {
            tr_rho2,
            tr_rho_a2,
            tr_rho_b2,
            source,
        })
    }

    /// Whether each purity respects `Tr sigma^2 >= 1/dim` for its space.
    pub fn is_physical(&self, m: usize, n: usize) -> bool {
        let tol = 1e-9;
        self.tr_rho_a2 >= 1.0 / m as f64 - tol
            && self.tr_rho_b2 >= 1.0 / n as f64 - tol
            && self.tr_rho2 >= 1.0 / (m * n) as f64 - tol
    }
}

pub fn purities(rho: &BipartiteDensityMatrix) -> PurityTriple {
    PurityTriple {
        tr_rho2: purity(rho.matrix()),
        tr_rho_a2: purity(&partial_trace(rho, Subsystem::A)),
        tr_rho_b2: purity(&partial_trace(rho, Subsystem::B)),
        source: PuritySource::FromState,
    }
}

/// Normalized pure state on `C^m (x) C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    m: usize,
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, m: usize, n: usize) -> Result<Self> {
        if amplitudes.len() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                found: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { m, n, amplitudes })
    }

    /// Normalizes `amplitudes` first.
    pub fn normalized(mut amplitudes: Vec<Complex64>, m: usize, n: usize) -> Result<Self> {
        let norm = math::sqrt(amplitudes.iter().map(|z| z.norm_sqr()).sum());
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Self::new(amplitudes, m, n)
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn projector(&self) -> CMatrix {
        CMatrix::outer(&self.amplitudes)
    }

    pub fn density(&self) -> Result<BipartiteDensityMatrix> {
        make_density(self.projector(), self.m, self.n)
    }

    /// `Tr_B |psi><psi|`
    pub fn reduced(&self, keep: Subsystem) -> CMatrix {
        let (m, n) = (self.m, self.n);
        let psi = &self.amplitudes;
        match keep {
            Subsystem::A => CMatrix::from_fn(m, |a, a2| {
                (0..n)
                    .map(|b| psi[a * n + b] * psi[a2 * n + b].conj())
                    .sum()
            }),
            Subsystem::B => CMatrix::from_fn(n, |b, b2| {
                (0..m)
                    .map(|a| psi[a * n + b] * psi[a * n + b2].conj())
                    .sum()
            }),
        }
    }
}

/// Non-negative real vector summing to one.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidProbabilities {
                reason: "empty vector",
            });
        }
        if entries.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InvalidProbabilities {
                reason: "negative or NaN entry",
            });
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidProbabilities {
                reason: "entries do not sum to 1",
            });
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Shannon entropy in bits.
    pub fn entropy(&self) -> f64 {
        crate::entropy::shannon_entropy(&self.0)
    }

    /// `2 (1 - sum mu_i^2)`
    pub fn linear_entropy(&self) -> f64 {
        2.0 * (1.0 - self.0.iter().map(|x| x * x).sum::<f64>())
    }
}

/// A purification `|psi>_ABC` of `rho_AB` together with `rho_BC = Tr_A |psi><psi|`.
#[derive(Debug, Clone)]
pub struct PurificationTriple {
    /// Pure state with A as the first factor and the composite `B (x) C` as the second.
    pub psi_abc: PureState,
    pub dim_c: usize,
    /// State on `B (x) C`; C is one-dimensional for pure input.
    pub rho_bc: BipartiteDensityMatrix,
}

impl PurificationTriple {
    /// `Tr_C |psi><psi|`, which reproduces the purified state.
    pub fn trace_out_c(&self) -> CMatrix {
        let (m, nc) = self.psi_abc.dims();
        let r = self.dim_c;
        let n = nc / r;
        let psi = self.psi_abc.amplitudes();
        CMatrix::from_fn(m * n, |i, j| {
            let (a, b) = (i / n, i % n);
            let (a2, b2) = (j / n, j % n);
            (0..r)
                .map(|k| psi[a * nc + b * r + k] * psi[a2 * nc + b2 * r + k].conj())
                .sum()
        })
    }
}

/// Purifies `rho` with a system C of dimension equal to its numerical rank.
///
/// `|psi> = sum_k sqrt(mu_k) |v_k>_AB |k>_C` over eigenpairs with `mu_k > 1e-10`,
/// renormalized to absorb the discarded tail.
pub fn purify(rho: &BipartiteDensityMatrix) -> Result<PurificationTriple> {
    let (m, n) = rho.dims();
    let eig = eig_hermitian(rho.matrix())?;
    let kept: Vec<usize> = (0..m * n)
        .filter(|&i| eig.values[i] > RANK_THRESHOLD)
        .collect();
    let r = kept.len();
    let kept_mass: f64 = kept.iter().map(|&i| eig.values[i]).sum();

    let mut psi = alloc::vec![Complex64::new(0.0, 0.0); m * n * r];
    for (k, &col) in kept.iter().enumerate() {
        let w = math::sqrt(eig.values[col] / kept_mass);
        for ab in 0..m * n {
            psi[ab * r + k] = eig.vectors[(ab, col)] * w;
        }
    }
    let psi_abc = PureState::normalized(psi, m, n * r)?;

    let amps = psi_abc.amplitudes();
    let nr = n * r;
    let bc = CMatrix::from_fn(nr, |i, j| {
        (0..m)
            .map(|a| amps[a * nr + i] * amps[a * nr + j].conj())
            .sum()
    });
    let rho_bc = BipartiteDensityMatrix::validated(bc.hermitian_part(), n, r)?;
    Ok(PurificationTriple {
        psi_abc,
        dim_c: r,
        rho_bc,
    })
}
