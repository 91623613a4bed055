//! Persymmetric Jacobi inverse eigenvalue problem.
//!
//! A mirror-symmetric Jacobi matrix is fixed by its spectrum alone. For any
//! Jacobi matrix `v_k(1) v_k(N) prod_{j != k} (lambda_k - lambda_j) = prod_n J_n`,
//! and mirror symmetry gives `v_k(N) = (-1)^(k+1) v_k(1)`, so the first-site
//! weights are `w_k = v_k(1)^2 ∝ 1 / |prod_{j != k} (lambda_k - lambda_j)|`.
//! Lanczos on `diag(lambda)` started from `sqrt(w)` then returns the chain.

use crate::chain::ChainSpec;
use crate::designer::check_descending;
use crate::error::{Error, Result};

/// First-site spectral weights of the persymmetric matrix with this spectrum.
pub(crate) fn persymmetric_weights(spectrum: &[f64]) -> Vec<f64> {
    // log-space keeps long chains clear of overflow in the products
    let logs: Vec<f64> = spectrum
        .iter()
        .enumerate()
        .map(|(k, &lk)| {
            -spectrum
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &lj)| (lk - lj).abs().ln())
                .sum::<f64>()
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Reconstructs the unique mirror-symmetric chain with positive couplings
/// whose single-excitation spectrum is `spectrum` (strictly descending).
pub fn inverse_persymmetric_jacobi(spectrum: &[f64]) -> Result<ChainSpec> {
    let n = spectrum.len();
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    if let Some(bad) = spectrum.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("spectrum entry {bad} is not finite")));
    }
    check_descending(spectrum)?;

    let weights = persymmetric_weights(spectrum);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut q: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let mut diagonal = Vec::with_capacity(n);
    let mut couplings = Vec::with_capacity(n - 1);

    for step in 0..n {
        let mut r: Vec<f64> = q.iter().zip(spectrum).map(|(x, l)| x * l).collect();
        let alpha: f64 = r.iter().zip(&q).map(|(a, b)| a * b).sum();
        diagonal.push(alpha);
        basis.push(q.clone());
        if step + 1 == n {
            break;
        }
        for (ri, qi) in r.iter_mut().zip(&q) {
            *ri -= alpha * qi;
        }
        if let Some(prev) = basis.len().checked_sub(2).map(|i| &basis[i]) {
            let beta = couplings[couplings.len() - 1];
            for (ri, pi) in r.iter_mut().zip(prev) {
                *ri -= beta * pi;
            }
        }
        // full reorthogonalization, twice
        for _ in 0..2 {
            for b in &basis {
                let proj: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= proj * bi;
                }
            }
        }
        let beta = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Unrealizable {
                site: step + 1,
                value: beta,
            });
        }
        couplings.push(beta);
        q = r.into_iter().map(|x| x / beta).collect();
    }

    ChainSpec::new(couplings, diagonal)
}
