//! Two-copy observables and the `Lambda` functionals built from purities.
//!
//! On `rho (x) rho` the copies are ordered `A1 B1 A2 B2`. The local
//! projectors `P_-`/`P_+` act on the pair of copies of one subsystem, i.e. on
//! `A1 A2` or `B1 B2`, so every two-copy operator is assembled in the
//! `A1 A2 B1 B2` order and pulled back through [`copy_reorder_index`].
//!
//! With `a = Tr rho_A^2`, `b = Tr rho_B^2`, `c = Tr rho^2`:
//!
//! ```text
//! p(-,-) = (1 - a - b + c)/4     p(-,+) = (1 - a + b - c)/4
//! p(+,-) = (1 + a - b - c)/4     p(+,+) = (1 + a + b + c)/4
//! ```

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_distr::{Binomial, Distribution};

use crate::curves::lambda_max;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::math;
use crate::sample::rng_from_seed;
use crate::state::{purities, BipartiteDensityMatrix, PuritySource, PurityTriple};

/// Diagnostics attached to Lambda sets and bound intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Flag {
    /// An input lies outside the range any physical state can produce.
    OutOfPhysicalDomain,
    /// The two-qubit form of `Lambda_6` was used.
    TwoQubitLambda6Used,
    /// An upper bound exceeds `log2` of the relevant dimension.
    UpperExceedsLogDim,
}

/// Swap operator on `C^d (x) C^d`: `|i, j> -> |j, i>`.
pub fn swap_operator(d: usize) -> CMatrix {
    let mut s = CMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = Complex64::new(1.0, 0.0);
        }
    }
    s
}

fn check_local_dim(d: usize) -> Result<()> {
    if !(2..=8).contains(&d) {
        return Err(Error::BadDimension {
            d,
            reason: "two-copy projectors support 2 <= d <= 8",
        });
    }
    Ok(())
}

/// Projector `(1 - SWAP)/2` onto the antisymmetric subspace of two copies of `C^d`.
pub fn antisym_projector(d: usize) -> Result<CMatrix> {
    check_local_dim(d)?;
    Ok((&CMatrix::identity(d * d) - &swap_operator(d)).scale(0.5))
}

/// Projector `(1 + SWAP)/2` onto the symmetric subspace.
pub fn sym_projector(d: usize) -> Result<CMatrix> {
    check_local_dim(d)?;
    Ok((&CMatrix::identity(d * d) + &swap_operator(d)).scale(0.5))
}

/// Maps an index in the `A1 B1 A2 B2` ordering to the `A1 A2 B1 B2` ordering.
pub fn copy_reorder_index(m: usize, n: usize, i: usize) -> usize {
    let mn = m * n;
    let (first, second) = (i / mn, i % mn);
    let (a1, b1) = (first / n, first % n);
    let (a2, b2) = (second / n, second % n);
    ((a1 * m + a2) * n + b1) * n + b2
}

/// `Tr[(rho (x) rho)(X (x) Y)]` where `X` acts on `A1 A2` and `Y` on `B1 B2`.
pub fn two_copy_expectation(rho: &BipartiteDensityMatrix, x: &CMatrix, y: &CMatrix) -> Result<f64> {
    let (m, n) = rho.dims();
    if x.dim() != m * m || y.dim() != n * n {
        return Err(Error::DimensionMismatch {
            expected: m * m * n * n,
            found: x.dim() * y.dim(),
        });
    }
    let mn = m * n;
    let total = mn * mn;
    // inverse of copy_reorder_index
    let mut back = alloc::vec![0usize; total];
    for i in 0..total {
        back[copy_reorder_index(m, n, i)] = i;
    }
    let r = rho.matrix();
    let nz = |op: &CMatrix| -> Vec<(usize, usize, Complex64)> {
        let d = op.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let v = op[(i, j)];
                if v.re != 0.0 || v.im != 0.0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    };
    let (xs, ys) = (nz(x), nz(y));

    // Tr[R O] = sum_{u,v} R[v, u] O[u, v] with O = (X (x) Y) pulled back to A1 B1 A2 B2.
    let mut acc = Complex64::new(0.0, 0.0);
    for &(xi, xj, xv) in &xs {
        for &(yi, yj, yv) in &ys {
            let u = back[xi * n * n + yi];
            let v = back[xj * n * n + yj];
            let rvu = r[(v / mn, u / mn)] * r[(v % mn, u % mn)];
            acc += rvu * xv * yv;
        }
    }
    Ok(acc.re)
}

/// Measured (or computed) two-copy outcome probabilities.
///
/// `p_mm = <P_-^(A) (x) P_-^(B)>`, `p_mp = <P_-^(A) (x) P_+^(B)>`,
/// `p_pm = <P_+^(A) (x) P_-^(B)>`, `p_pp = <P_+^(A) (x) P_+^(B)>`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationMeasurementRecord {
    pub p_mm: f64,
    pub p_mp: f64,
    pub p_pm: f64,
    pub p_pp: Option<f64>,
    pub shot_count: Option<u64>,
    /// Raw counts in the order `(mm, mp, pm, pp)` when simulated.
    pub counts: Option<[u64; 4]>,
}

const RECORD_TOL: f64 = 1e-9;

impl CorrelationMeasurementRecord {
    pub fn new(p_mm: f64, p_mp: f64, p_pm: f64, p_pp: Option<f64>) -> Result<Self> {
        let rec = Self {
            p_mm,
            p_mp,
            p_pm,
            p_pp,
            shot_count: None,
            counts: None,
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| x.is_finite() && (-RECORD_TOL..=1.0 + RECORD_TOL).contains(&x);
        if ![self.p_mm, self.p_mp, self.p_pm].into_iter().all(in_unit) {
            return Err(Error::InvalidRecord {
                reason: "probabilities must lie in [0, 1]",
            });
        }
        let partial = self.p_mm + self.p_mp + self.p_pm;
        match self.p_pp {
            Some(pp) => {
                if !in_unit(pp) {
                    return Err(Error::InvalidRecord {
                        reason: "probabilities must lie in [0, 1]",
                    });
                }
                if (partial + pp - 1.0).abs() > RECORD_TOL {
                    return Err(Error::InvalidRecord {
                        reason: "the four probabilities must sum to 1",
                    });
                }
            }
            None => {
                if partial > 1.0 + RECORD_TOL {
                    return Err(Error::InvalidRecord {
                        reason: "probabilities sum to more than 1",
                    });
                }
            }
        }
        Ok(())
    }

    /// `p_pp`, inferred from the other three when absent.
    pub fn p_pp_or_inferred(&self) -> f64 {
        self.p_pp
            .unwrap_or(1.0 - (self.p_mm + self.p_mp + self.p_pm))
            .max(0.0)
    }

    /// Whether the marginal sums respect `Tr rho_A^2 >= 1/m` and `Tr rho_B^2 >= 1/n`.
    pub fn respects_marginal_bounds(&self, m: usize, n: usize) -> bool {
        let cap = |d: usize| 0.5 * (1.0 - 1.0 / d as f64) + RECORD_TOL;
        self.p_mm + self.p_mp <= cap(m) && self.p_mm + self.p_pm <= cap(n)
    }
}

/// Outcome probabilities together with the four two-copy observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoCopyExpectations {
    pub record: CorrelationMeasurementRecord,
    /// `<V1> = <4 (P_- - P_+)^(A) (x) P_-^(B)>`
    pub v1: f64,
    /// `<V2> = <4 P_-^(A) (x) (P_- - P_+)^(B)>`
    pub v2: f64,
    /// `<K1> = <4 P_-^(A) (x) 1^(B)>`
    pub k1: f64,
    /// `<K2> = <4 1^(A) (x) P_-^(B)>`
    pub k2: f64,
}

pub fn twocopy_expectations(rho: &BipartiteDensityMatrix) -> Result<TwoCopyExpectations> {
    let (m, n) = rho.dims();
    let (am, ap) = (antisym_projector(m)?, sym_projector(m)?);
    let (bm, bp) = (antisym_projector(n)?, sym_projector(n)?);
    let p = |x: &CMatrix, y: &CMatrix| two_copy_expectation(rho, x, y);
    let record = CorrelationMeasurementRecord {
        p_mm: p(&am, &bm)?,
        p_mp: p(&am, &bp)?,
        p_pm: p(&ap, &bm)?,
        p_pp: Some(p(&ap, &bp)?),
        shot_count: None,
        counts: None,
    };
    let a_diff = &am - &ap;
    let b_diff = &bm - &bp;
    Ok(TwoCopyExpectations {
        record,
        v1: 4.0 * p(&a_diff, &bm)?,
        v2: 4.0 * p(&am, &b_diff)?,
        k1: 4.0 * p(&am, &CMatrix::identity(n * n))?,
        k2: 4.0 * p(&CMatrix::identity(m * m), &bm)?,
    })
}

/// Inverts the two-copy identities for a two-qubit record.
///
/// `Tr rho_A^2 = 1 - 2(p_mm + p_mp)`, `Tr rho_B^2 = 1 - 2(p_mm + p_pm)`,
/// `Tr rho^2 = Tr rho_A^2 + 2(p_mm - p_pm)`.
pub fn purities_from_probs(
    rec: &CorrelationMeasurementRecord,
    m: usize,
    n: usize,
) -> Result<PurityTriple> {
    if m != 2 || n != 2 {
        return Err(Error::BadDimension {
            d: m * n,
            reason: "probability inversion is defined for two qubits only",
        });
    }
    rec.validate()?;
    let tr_a = 1.0 - 2.0 * (rec.p_mm + rec.p_mp);
    let tr_b = 1.0 - 2.0 * (rec.p_mm + rec.p_pm);
    let tr = tr_a + 2.0 * (rec.p_mm - rec.p_pm);
    let tr_alt = tr_b + 2.0 * (rec.p_mm - rec.p_mp);
    let difference = (tr - tr_alt).abs();
    if !(difference <= 1e-6) {
        return Err(Error::InconsistentRecord { difference });
    }
    PurityTriple::new(tr, tr_a, tr_b, PuritySource::FromProbabilities)
}

/// The six observable functionals.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaSet {
    pub m: usize,
    pub n: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    pub lambda5: f64,
    pub lambda6: f64,
    pub two_qubit_special_lambda6: bool,
    pub flags: Vec<Flag>,
}

impl LambdaSet {
    pub fn as_array(&self) -> [f64; 6] {
        [
            self.lambda1,
            self.lambda2,
            self.lambda3,
            self.lambda4,
            self.lambda5,
            self.lambda6,
        ]
    }

    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }
}

/// ```text
/// L1 = sqrt(2(1 - a))              L2 = sqrt(2(1 - c))
/// L3 = sqrt(max{0, 2(a - b), 2(a - c)})
/// L4 = min{2(1 - b), 2(1 - c)}
/// L5 = sqrt(max{0, 2(c - a), 2(c - b)})
/// L6 = min{2(1 - a), 2(1 - b)}       [also 1 - a - b + c for two qubits]
/// ```
///
/// Unphysical inputs pass through with [`Flag::OutOfPhysicalDomain`].
pub fn lambdas_from_purities(p: &PurityTriple, m: usize, n: usize) -> LambdaSet {
    let (a, b, c) = (p.tr_rho_a2, p.tr_rho_b2, p.tr_rho2);
    let lambda1 = math::sqrt_clamped(2.0 * (1.0 - a));
    let lambda2 = math::sqrt_clamped(2.0 * (1.0 - c));
    let lambda3 = math::sqrt_clamped(0.0f64.max(2.0 * (a - b)).max(2.0 * (a - c)));
    let lambda4 = (2.0 * (1.0 - b)).min(2.0 * (1.0 - c)).max(0.0);
    let lambda5 = math::sqrt_clamped(0.0f64.max(2.0 * (c - a)).max(2.0 * (c - b)));
    let two_qubit = m == 2 && n == 2;
    let mut lambda6 = (2.0 * (1.0 - a)).min(2.0 * (1.0 - b));
    if two_qubit {
        lambda6 = lambda6.min(1.0 - a - b + c);
    }
    let lambda6 = lambda6.max(0.0);

    let mut flags = Vec::new();
    let slack = 1e-9;
    let unphysical = !p.is_physical(m, n)
        || lambda1 > lambda_max(m) + slack
        || lambda2 > lambda_max(m * n) + slack;
    if unphysical {
        flags.push(Flag::OutOfPhysicalDomain);
    }
    if two_qubit {
        flags.push(Flag::TwoQubitLambda6Used);
    }
    LambdaSet {
        m,
        n,
        lambda1,
        lambda2,
        lambda3,
        lambda4,
        lambda5,
        lambda6,
        two_qubit_special_lambda6: two_qubit,
        flags,
    }
}

pub fn lambdas_from_state(rho: &BipartiteDensityMatrix) -> LambdaSet {
    let (m, n) = rho.dims();
    lambdas_from_purities(&purities(rho), m, n)
}

/// Draws `shots` two-copy outcomes from the exact probabilities of `rho`.
///
/// Counts follow a multinomial over `(mm, mp, pm, pp)`, sampled as a chain
/// of conditional binomials.
pub fn simulate_shots(
    rho: &BipartiteDensityMatrix,
    shots: u64,
    seed: u64,
) -> Result<CorrelationMeasurementRecord> {
    if shots == 0 {
        return Err(Error::InvalidArgument {
            reason: "shots must be at least 1",
        });
    }
    let exact = twocopy_expectations(rho)?.record;
    let probs = [
        exact.p_mm.max(0.0),
        exact.p_mp.max(0.0),
        exact.p_pm.max(0.0),
        exact.p_pp_or_inferred(),
    ];
    let mut rng = rng_from_seed(seed);
    let mut counts = [0u64; 4];
    let mut remaining = shots;
    let mut mass_left: f64 = probs.iter().sum();
    for i in 0..3 {
        if remaining == 0 {
            break;
        }
        let q = if mass_left > 0.0 {
            (probs[i] / mass_left).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let draw = Binomial::new(remaining, q)
            .map_err(|_| Error::InvalidArgument {
                reason: "invalid binomial parameters",
            })?
            .sample(&mut rng);
        counts[i] = draw;
        remaining -= draw;
        mass_left -= probs[i];
    }
    counts[3] = remaining;
    let f = |c: u64| c as f64 / shots as f64;
    Ok(CorrelationMeasurementRecord {
        p_mm: f(counts[0]),
        p_mp: f(counts[1]),
        p_pm: f(counts[2]),
        p_pp: Some(f(counts[3])),
        shot_count: Some(shots),
        counts: Some(counts),
    })
}
