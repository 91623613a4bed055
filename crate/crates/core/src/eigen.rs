//! Spectral decomposition of the single-excitation Hamiltonian and exact
//! time evolution built on it.

use num_complex::Complex64;

use crate::chain::{SingleExcitationState, TridiagonalHamiltonian};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues in strictly descending order with their orthonormal eigenvectors.
///
/// Every eigenvector is sign-normalized so that its first component is
/// positive (a Jacobi matrix never has an eigenvector vanishing on site 1).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `lambda_1 > lambda_2 > ... > lambda_N`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvector paired with `eigenvalues()[k]` (0-based `k`).
    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.eigenvectors[k]
    }

    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }

    /// `max |V diag(lambda) V^T - H|`.
    pub fn reconstruction_residual(&self, h: &TridiagonalHamiltonian) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let v: f64 = (0..n)
                    .map(|k| self.eigenvectors[k][r] * self.eigenvalues[k] * self.eigenvectors[k][c])
                    .sum();
                worst = worst.max((v - h.entry(r + 1, c + 1)).abs());
            }
        }
        worst
    }

    /// `max |V^T V - I|`.
    pub fn gram_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = self.eigenvectors[a]
                    .iter()
                    .zip(&self.eigenvectors[b])
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `lambda_1 - lambda_N`.
    pub fn spread(&self) -> f64 {
        self.eigenvalues[0] - self.eigenvalues[self.dim() - 1]
    }

    /// Parity `<v_k|S|v_k>` of each eigenvector under the mirror permutation.
    pub fn mirror_parities(&self) -> Vec<f64> {
        self.eigenvectors
            .iter()
            .map(|v| v.iter().zip(v.iter().rev()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest deviation from the alternation `S v_k = (-1)^(k+1) v_k`.
    pub fn parity_alternation_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (k, v) in self.eigenvectors.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for (a, b) in v.iter().zip(v.iter().rev()) {
                worst = worst.max((b - sign * a).abs());
            }
        }
        worst
    }
}

/// Diagonalizes `h` by implicit-shift QL with default tolerances.
pub fn eigendecompose(h: &TridiagonalHamiltonian) -> Result<EigenSystem> {
    eigendecompose_with(h, &Tolerances::default())
}

pub fn eigendecompose_with(h: &TridiagonalHamiltonian, tol: &Tolerances) -> Result<EigenSystem> {
    let n = h.dim();
    let mut d = h.diagonal().to_vec();
    let mut e = h.off_diagonal().to_vec();
    e.push(0.0);
    // z is row-major; column i accumulates the eigenvector for d[i].
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql_implicit(&mut d, &mut e, &mut z, n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut v: Vec<f64> = (0..n).map(|r| z[r * n + i]).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let lead = v.iter().copied().find(|x| x.abs() > 0.0).unwrap_or(1.0);
            let scale = lead.signum() / norm;
            v.iter_mut().for_each(|x| *x *= scale);
            v
        })
        .collect();

    let threshold = tol.degeneracy * h.max_abs();
    for k in 1..n {
        let gap = eigenvalues[k - 1] - eigenvalues[k];
        if gap < threshold {
            return Err(Error::DegenerateSpectrum {
                first: k,
                second: k + 1,
                gap,
                threshold,
            });
        }
    }

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// `e[i]` couples rows `i` and `i + 1`; `e[n - 1]` must be zero on entry.
/// Rotations are accumulated into the columns of `z`.
fn tql_implicit(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    index: l + 1,
                    iterations: MAX_QL_ITERATIONS,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let zi = z[k * n + i];
                    let zi1 = z[k * n + i + 1];
                    z[k * n + i + 1] = s * zi + c * zi1;
                    z[k * n + i] = c * zi - s * zi1;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn phases(eig: &EigenSystem, t: f64) -> Vec<Complex64> {
    eig.eigenvalues
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, -lambda * t))
        .collect()
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFiniteTime(t))
    }
}

/// `e^{-i H t} |state>` computed as `V diag(e^{-i lambda t}) V^T |state>`.
pub fn evolve(eig: &EigenSystem, state: &SingleExcitationState, t: f64) -> Result<SingleExcitationState> {
    check_time(t)?;
    let n = eig.dim();
    if state.n_sites() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: state.n_sites(),
        });
    }
    let phase = phases(eig, t);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (v, ph) in eig.eigenvectors.iter().zip(&phase) {
        let coeff: Complex64 = v.iter().zip(state.amplitudes()).map(|(x, a)| a * *x).sum();
        let coeff = coeff * ph;
        for (o, x) in out.iter_mut().zip(v) {
            *o += coeff * *x;
        }
    }
    Ok(SingleExcitationState::from_amplitudes(out))
}

/// `<to| e^{-i H t} |from>` for 1-based sites.
pub fn transfer_amplitude(eig: &EigenSystem, from: usize, to: usize, t: f64) -> Result<Complex64> {
    check_time(t)?;
    let n = eig.dim();
    for site in [from, to] {
        if site == 0 || site > n {
            return Err(Error::SiteOutOfRange { site, n });
        }
    }
    Ok(eig
        .eigenvectors
        .iter()
        .zip(phases(eig, t))
        .map(|(v, ph)| ph * (v[to - 1] * v[from - 1]))
        .sum())
}

/// Dense propagator `U(t) = e^{-i H t}` for repeated application at a fixed time.
#[derive(Debug, Clone)]
pub struct Propagator {
    n: usize,
    time: f64,
    // row-major
    entries: Vec<Complex64>,
}

impl Propagator {
    pub fn new(eig: &EigenSystem, t: f64) -> Result<Self> {
        check_time(t)?;
        let n = eig.dim();
        let phase = phases(eig, t);
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for (v, ph) in eig.eigenvectors.iter().zip(&phase) {
            for r in 0..n {
                let left = ph * v[r];
                for c in 0..n {
                    entries[r * n + c] += left * v[c];
                }
            }
        }
        Ok(Self { n, time: t, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// `<row|U|col>` with 1-based indices.
    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row - 1) * self.n + (col - 1)]
    }

    pub fn apply(&self, state: &SingleExcitationState) -> Result<SingleExcitationState> {
        if state.n_sites() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: state.n_sites(),
            });
        }
        let a = state.amplitudes();
        let out = (0..self.n)
            .map(|r| {
                self.entries[r * self.n..(r + 1) * self.n]
                    .iter()
                    .zip(a)
                    .map(|(u, x)| u * x)
                    .sum()
            })
            .collect();
        Ok(SingleExcitationState::from_amplitudes(out))
    }

    /// `max |U U^dagger - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let s: Complex64 = (0..n)
                    .map(|k| self.entries[a * n + k] * self.entries[b * n + k].conj())
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}
