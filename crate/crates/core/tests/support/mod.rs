//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use eventclock::qcore::{ComplexMatrix, DensityOperator, HamiltonianSpec, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn gaussian_entry(rng: &mut impl Rng) -> C64 {
    // Box-Muller pair
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    c(r * th.cos(), r * th.sin())
}

pub fn random_matrix(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| gaussian_entry(rng))
}

pub fn random_hermitian(d: usize, scale: f64, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_matrix(d, rng);
    (&g + &g.adjoint()).scale_real(0.5 * scale)
}

pub fn random_hamiltonian(d: usize, scale: f64, hbar: f64, rng: &mut impl Rng) -> HamiltonianSpec {
    HamiltonianSpec::new(random_hermitian(d, scale, rng), hbar).unwrap()
}

pub fn random_ket(d: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| gaussian_entry(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Ginibre mixed state `G G† / Tr(G G†)`.
pub fn random_density(d: usize, rng: &mut impl Rng) -> DensityOperator {
    let g = random_matrix(d, rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.scale_real(1.0 / tr)).unwrap()
}

pub fn random_pure(d: usize, rng: &mut impl Rng) -> DensityOperator {
    DensityOperator::pure(&random_ket(d, rng)).unwrap()
}

/// Matrix exponential `e^{-iHt/ħ}` by scaling and squaring of a Taylor
/// series; independent of the eigendecomposition path.
pub fn propagator_series(h: &ComplexMatrix, t: f64, hbar: f64) -> ComplexMatrix {
    let d = h.rows();
    let a = h.scale(c(0.0, -t / hbar));
    let norm = a.max_abs() * d as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = a.scale_real(0.5f64.powi(squarings as i32));
    let mut term = ComplexMatrix::identity(d);
    let mut sum = ComplexMatrix::identity(d);
    for k in 1..30 {
        term = (&term * &a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Largest |entry| difference.
pub fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.max_abs_diff(b)
}

pub fn purity(m: &ComplexMatrix) -> f64 {
    (m * m).trace().re
}

/// Smallest eigenvalue through the power method on `λ_max·1 − ρ`,
/// independent of the library eigensolver. Accurate to ~1e-12 for the
/// small matrices used here.
pub fn min_eigenvalue_oracle(m: &ComplexMatrix) -> f64 {
    let d = m.rows();
    let shift = (0..d).map(|i| (0..d).map(|j| m[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max);
    let shifted = &ComplexMatrix::identity(d).scale_real(shift) - m;
    let mut v: Vec<C64> = (0..d).map(|i| c(1.0 + 0.1 * i as f64, 0.3 * (i as f64).sin())).collect();
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let w = shifted.apply(&v);
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return shift;
        }
        lambda = n;
        v = w.into_iter().map(|z| z / n).collect();
    }
    shift - lambda
}

/// Gaussian lobe with `|φ|²` of standard deviation `σ` centred at `x0`.
pub fn lobe(x: f64, x0: f64, sigma: f64) -> f64 {
    let norm = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    norm * (-(x - x0).powi(2) / (4.0 * sigma * sigma)).exp()
}

/// Uniform grid of `points` nodes over `±(L/2 + 8σ)`.
pub fn wavepacket_grid(separation: f64, sigma: f64, points: usize) -> (Vec<f64>, f64) {
    let half = separation / 2.0 + 8.0 * sigma;
    let h = 2.0 * half / (points - 1) as f64;
    ((0..points).map(|i| -half + h * i as f64).collect(), h)
}

/// Eighth-order central difference on a uniform grid (interior points).
pub fn derivative_8th(f: &[f64], h: f64) -> Vec<f64> {
    const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let n = f.len();
    (0..n)
        .map(|i| {
            if i < 4 || i + 4 >= n {
                return 0.0;
            }
            C.iter()
                .enumerate()
                .map(|(k, ck)| ck * (f[i + k + 1] - f[i - k - 1]))
                .sum::<f64>()
                / h
        })
        .collect()
}

/// Composite Simpson on samples with an odd count.
pub fn simpson(samples: &[f64], h: f64) -> f64 {
    let n = samples.len() - 1;
    assert!(n.is_multiple_of(2));
    let mut s = samples[0] + samples[n];
    for (i, v) in samples.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * v;
    }
    s * h / 3.0
}

/// `⟨φ_bra|p|φ_ket⟩ = -iħ ∫ φ_bra(x) φ_ket'(x) dx` on the grid, with lobes
/// centred at `bra_centre` and `ket_centre`.
pub fn momentum_element_grid(bra_centre: f64, ket_centre: f64, sigma: f64, separation: f64, hbar: f64) -> C64 {
    // 4096 intervals keeps the node count odd for Simpson.
    let (xs, h) = wavepacket_grid(separation, sigma, 4097);
    let ket: Vec<f64> = xs.iter().map(|&x| lobe(x, ket_centre, sigma)).collect();
    let dket = derivative_8th(&ket, h);
    let integrand: Vec<f64> = xs.iter().zip(&dket).map(|(&x, d)| lobe(x, bra_centre, sigma) * d).collect();
    c(0.0, -hbar * simpson(&integrand, h))
}
