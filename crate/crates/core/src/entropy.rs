//! Von Neumann and linear entropies. All logarithms are base 2.

use crate::error::Result;
use crate::linalg::{eigvalsh, CMatrix};
use crate::math;
use crate::state::purity;

/// `-sum p_i log2 p_i` with entries clamped to `[0, 1]` and `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().map(|&x| math::neg_xlog2x(x.clamp(0.0, 1.0))).sum()
}

/// `S_V(rho) = -Tr(rho log2 rho)`, from the eigenvalues of `rho`.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    Ok(shannon_entropy(&eigvalsh(rho)?))
}

/// `S_L(rho) = 2 (1 - Tr rho^2)`.
pub fn linear_entropy(rho: &CMatrix) -> f64 {
    2.0 * (1.0 - purity(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig_hermitian;
    use crate::state::PureState;
    use alloc::vec;
    use num_complex::Complex64;

    #[test]
    fn pure_state_has_zero_entropy() {
        let s = 1.0 / math::sqrt(2.0);
        let psi = PureState::new(
            vec![
                Complex64::new(s, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, s),
            ],
            2,
            2,
        )
        .unwrap();
        let rho = psi.projector();
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-12);
        assert!(linear_entropy(&rho).abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_entropies() {
        for d in [2usize, 3, 4, 8] {
            let rho = CMatrix::identity(d).scale(1.0 / d as f64);
            assert!((von_neumann_entropy(&rho).unwrap() - math::log2(d as f64)).abs() < 1e-12);
            let expect = 2.0 * (d as f64 - 1.0) / d as f64;
            assert!((linear_entropy(&rho) - expect).abs() < 1e-14);
        }
        assert!((linear_entropy(&CMatrix::identity(2).scale(0.5)) - 1.0).abs() < 1e-15);
        assert!((linear_entropy(&CMatrix::identity(4).scale(0.25)) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn two_level_spectrum() {
        let rho = CMatrix::from_real_diagonal(&[0.8033, 0.1967]);
        let s = von_neumann_entropy(&rho).unwrap();
        assert!((s - 0.7153).abs() < 5e-5, "{s}");
    }

    #[test]
    fn agrees_with_explicit_spectrum_sum() {
        let mut rho = CMatrix::from_real_diagonal(&[0.4, 0.3, 0.2, 0.1]);
        rho[(0, 2)] = Complex64::new(0.05, 0.02);
        rho[(2, 0)] = Complex64::new(0.05, -0.02);
        let mu = eig_hermitian(&rho).unwrap().values;
        let direct: f64 = mu
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| -x * math::log2(x))
            .sum();
        assert!((von_neumann_entropy(&rho).unwrap() - direct).abs() < 1e-10);
    }
}
