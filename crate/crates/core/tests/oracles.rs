use eofqd_core::bounds::{discord_bounds, eof_bounds};
use eofqd_core::curves::EvalMode;
use eofqd_core::entropy::{shannon_entropy, von_neumann_entropy};
use eofqd_core::linalg::{eig_hermitian, CMatrix};
use eofqd_core::observables::lambdas_from_state;
use eofqd_core::oracles::{
    check_kw, concurrence_2q, discord_bruteforce, discord_kw_rank2, eof_2q, eof_from_concurrence,
    eof_pure,
};
use eofqd_core::sample::{rng_from_seed, sample_pure, sample_state};
use eofqd_core::state::{make_density, purify, BipartiteDensityMatrix, Subsystem};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn werner(p: f64) -> BipartiteDensityMatrix {
    let s = 0.5f64.sqrt();
    let z = Complex64::new(0.0, 0.0);
    let singlet = CMatrix::outer(&[z, Complex64::new(s, 0.0), Complex64::new(-s, 0.0), z]);
    make_density(
        &singlet.scale(p) + &CMatrix::identity(4).scale((1.0 - p) / 4.0),
        2,
        2,
    )
    .unwrap()
}

fn random_unitary(d: usize, seed: u64) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    let g = CMatrix::from_fn(d, |_, _| gaussian(&mut rng));
    let h = (&g + &g.adjoint()).scale(0.5);
    eig_hermitian(&h).unwrap().vectors
}

/// Average pure-state entanglement of a random decomposition of `rho` into `k` states.
fn decomposition_average(rho: &BipartiteDensityMatrix, k: usize, seed: u64) -> f64 {
    let eig = eig_hermitian(rho.matrix()).unwrap();
    let cols: Vec<usize> = (0..4).filter(|&j| eig.values[j] > 1e-12).collect();
    let r = cols.len();
    let mut rng = rng_from_seed(seed);
    // k x r isometry from Gram-Schmidt on Gaussian columns
    let mut u: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..r {
        let mut v: Vec<Complex64> = (0..k).map(|_| gaussian(&mut rng)).collect();
        for w in &u {
            let dot: Complex64 = w.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(w) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        u.push(v);
    }
    let mut total = 0.0;
    for i in 0..k {
        let mut psi = vec![Complex64::new(0.0, 0.0); 4];
        for (c, &j) in cols.iter().enumerate() {
            let w = u[c][i] * eig.values[j].sqrt();
            for (a, x) in psi.iter_mut().enumerate() {
                *x += w * eig.vectors[(a, j)];
            }
        }
        let p: f64 = psi.iter().map(|x| x.norm_sqr()).sum();
        if p < 1e-15 {
            continue;
        }
        let state = eofqd_core::state::PureState::normalized(psi, 2, 2).unwrap();
        total += p * eof_pure(&state);
    }
    total
}

#[test]
fn werner_state_convex_roof() {
    let rho = werner(0.5);
    let c = concurrence_2q(&rho).unwrap();
    assert!((c - 0.25).abs() < 1e-12);
    let eof = eof_2q(&rho).unwrap();
    let expect = shannon_entropy(&[
        (1.0 + (1.0f64 - 0.0625).sqrt()) / 2.0,
        (1.0 - (1.0f64 - 0.0625).sqrt()) / 2.0,
    ]);
    assert!((eof - expect).abs() < 1e-12);
    let mut best = f64::INFINITY;
    for trial in 0..10_000u64 {
        let k = 4 + (trial % 5) as usize;
        let avg = decomposition_average(&rho, k, trial);
        assert!(
            avg >= eof - 1e-12,
            "decomposition below the convex roof: {avg} < {eof}"
        );
        best = best.min(avg);
    }
    assert!(best < 1.0);
}

#[test]
fn concurrence_formula_for_werner_family() {
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let c = concurrence_2q(&werner(p)).unwrap();
        assert!((c - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs() < 1e-9, "p={p}");
    }
}

#[test]
fn pure_state_eof_is_symmetric() {
    for seed in 0..20 {
        let psi = sample_pure(2, 3, seed).unwrap();
        let rho = psi.density().unwrap();
        let sb = von_neumann_entropy(&rho.partial_trace(Subsystem::B)).unwrap();
        assert!((eof_pure(&psi) - sb).abs() < 1e-9);
    }
    let psi = sample_pure(2, 2, 5).unwrap();
    assert!((eof_pure(&psi) - eof_2q(&psi.density().unwrap()).unwrap()).abs() < 1e-7);
    assert_eq!(eof_from_concurrence(1.0), 1.0);
}

#[test]
fn grid_refinement_never_increases_the_estimate() {
    for seed in 0..6 {
        let rho = sample_state(2, 2 + (seed as usize % 2), 2 + (seed as usize % 3), seed).unwrap();
        let v32 = discord_bruteforce(&rho, 32, false).unwrap().value;
        let v64 = discord_bruteforce(&rho, 64, false).unwrap().value;
        let v128 = discord_bruteforce(&rho, 128, false).unwrap().value;
        assert!(v64 <= v32 && v128 <= v64, "{v32} {v64} {v128}");
        let refined = discord_bruteforce(&rho, 32, true).unwrap();
        assert!(refined.value <= v32);
        assert!(refined.value >= -1e-9);
        assert!(refined.argmin_basis.is_valid());
    }
}

#[test]
fn local_unitary_invariance() {
    for seed in 0..8 {
        let rho = sample_state(2, 2, 3, seed).unwrap();
        let turned = rho
            .local_unitary(
                &random_unitary(2, 100 + seed),
                &random_unitary(2, 200 + seed),
            )
            .unwrap();
        assert!((eof_2q(&rho).unwrap() - eof_2q(&turned).unwrap()).abs() < 1e-9);
        let a = discord_bruteforce(&rho, 64, true).unwrap().value;
        let b = discord_bruteforce(&turned, 64, true).unwrap().value;
        assert!((a - b).abs() < 2e-3, "{a} vs {b}");
    }
}

#[test]
fn koashi_winter_agrees_with_bruteforce() {
    for seed in 0..20 {
        let rho = sample_state(2, 2, 2, seed).unwrap();
        let pur = purify(&rho).unwrap();
        assert_eq!(pur.dim_c, 2);
        let eof_bc = eof_2q(&pur.rho_bc).unwrap();
        assert!(check_kw(&rho, eof_bc).unwrap().abs() <= 2e-3);
        let kw = discord_kw_rank2(&rho).unwrap();
        let bf = discord_bruteforce(&rho, 64, true).unwrap().value;
        assert!((kw - bf).abs() <= 2e-3, "{kw} vs {bf}");
    }
}

#[test]
fn bounds_sandwich_oracles() {
    for seed in 0..300 {
        let rho = sample_state(2, 2, 1 + (seed as usize % 4), seed).unwrap();
        let l = lambdas_from_state(&rho);
        let eof = eof_bounds(&l, EvalMode::Clamped).unwrap();
        assert!(eof.contains(eof_2q(&rho).unwrap(), 1e-7), "seed {seed}");
    }
    for seed in 0..20 {
        let rho = sample_state(2, 2, 1 + (seed as usize % 4), 1000 + seed).unwrap();
        let qd = discord_bounds(&lambdas_from_state(&rho), EvalMode::Clamped).unwrap();
        let d = discord_bruteforce(&rho, 64, true).unwrap().value;
        assert!(
            qd.contains(d, 1e-4),
            "seed {seed}: {d} not in [{}, {}]",
            qd.lower,
            qd.upper
        );
    }
}
