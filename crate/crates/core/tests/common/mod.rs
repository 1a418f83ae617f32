#![allow(dead_code)]

use qcorr_core::linalg::{c, hermitian_eig, ComplexMatrix};
use qcorr_core::BellMixture;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let data = (0..dim * dim)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    ComplexMatrix::from_vec(dim, data).unwrap()
}

/// Random full-rank density matrix `G G† / Tr(G G†)`.
pub fn random_state(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    m.scale(c(1.0 / tr, 0.0)).hermitian_part()
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ginibre(rng, dim).hermitian_part()
}

/// Random unitary from the eigenvectors of a random Hermitian matrix.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    hermitian_eig(&random_hermitian(rng, dim)).unwrap().vectors
}

/// Uniform (Dirichlet(1,1,1,1)) Bell mixture.
pub fn random_mixture(rng: &mut impl Rng) -> BellMixture {
    let e: Vec<f64> = (0..4).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let s: f64 = e.iter().sum();
    let w: Vec<f64> = e.iter().map(|x| x / s).collect();
    BellMixture::new(w[0], w[1], w[2], w[3]).unwrap()
}

/// Binary entropy in bits, written out independently of the library.
pub fn h2(x: f64) -> f64 {
    let t = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    t(x) + t(1.0 - x)
}

/// Oracle for Bell-diagonal dynamics under one-sided dephasing, from the
/// closed forms only: spectrum pairs `(x+y)/2 ± κ|x-y|/2`.
pub struct BellOracle {
    pub total: f64,
    pub classical: f64,
    pub quantum: f64,
    pub lambda_max: f64,
}

pub fn bell_oracle(m: &BellMixture, kappa: f64) -> BellOracle {
    let (a, b, cc, d) = (m.a, m.b, m.c, m.d);
    let spec = [
        0.5 * (a + b) + 0.5 * kappa * (a - b),
        0.5 * (a + b) - 0.5 * kappa * (a - b),
        0.5 * (cc + d) + 0.5 * kappa * (cc - d),
        0.5 * (cc + d) - 0.5 * kappa * (cc - d),
    ];
    let s: f64 = spec
        .iter()
        .map(|&l| if l <= 0.0 { 0.0 } else { -l * l.log2() })
        .sum();
    let total = 2.0 - s;
    let eta = (kappa * (a - b + cc - d))
        .abs()
        .max((kappa * (cc - d - a + b)).abs())
        .max((a + b - cc - d).abs());
    let classical = 1.0 - h2(0.5 * (1.0 + eta));
    BellOracle {
        total,
        classical,
        quantum: total - classical,
        lambda_max: spec.iter().cloned().fold(f64::MIN, f64::max),
    }
}

/// Bisection root of `f` on `[lo, hi]` (sign change required).
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change in bracket");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
