//! XY spin chains restricted to the single-excitation subspace.
//!
//! A chain of `N` qubits with nearest-neighbour XY couplings `J_n` and local
//! fields `B_n` conserves the number of excitations. In the sector spanned by
//! the states `|n>` (qubit `n` excited, all others in `|0>`) the Hamiltonian is
//! the real symmetric tridiagonal matrix with `B_n` on the diagonal and `J_n`
//! between sites `n` and `n + 1`. The constant `-1/2 sum B_m` coming from the
//! vacuum sector is dropped; it only contributes a global phase.
//!
//! Sites are numbered from 1 in every public interface.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Couplings and fields of an engineered chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChain", into = "RawChain")]
pub struct ChainSpec {
    couplings: Vec<f64>,
    fields: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawChain {
    n: usize,
    couplings: Vec<f64>,
    fields: Vec<f64>,
}

impl TryFrom<RawChain> for ChainSpec {
    type Error = Error;

    fn try_from(raw: RawChain) -> Result<Self> {
        if raw.couplings.len() + 1 != raw.n {
            return Err(Error::LengthMismatch {
                what: "couplings",
                expected: raw.n.saturating_sub(1),
                actual: raw.couplings.len(),
            });
        }
        ChainSpec::new(raw.couplings, raw.fields)
    }
}

impl From<ChainSpec> for RawChain {
    fn from(c: ChainSpec) -> Self {
        RawChain {
            n: c.n_sites(),
            couplings: c.couplings,
            fields: c.fields,
        }
    }
}

impl ChainSpec {
    /// Builds a chain from `N - 1` couplings and `N` fields.
    pub fn new(couplings: Vec<f64>, fields: Vec<f64>) -> Result<Self> {
        let n = couplings.len() + 1;
        if n < 2 {
            return Err(Error::TooFewSites(n));
        }
        if fields.len() != n {
            return Err(Error::LengthMismatch {
                what: "fields",
                expected: n,
                actual: fields.len(),
            });
        }
        for (i, &j) in couplings.iter().enumerate() {
            if !(j.is_finite() && j > 0.0) {
                return Err(Error::NonPositiveCoupling { site: i + 1, value: j });
            }
        }
        for (i, &b) in fields.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::NonFiniteField { site: i + 1, value: b });
            }
        }
        Ok(Self { couplings, fields })
    }

    /// A chain with every field set to zero.
    pub fn with_zero_fields(couplings: Vec<f64>) -> Result<Self> {
        let n = couplings.len() + 1;
        Self::new(couplings, vec![0.0; n])
    }

    pub fn n_sites(&self) -> usize {
        self.fields.len()
    }

    /// `J_1 .. J_{N-1}`.
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// `B_1 .. B_N`.
    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    /// Coupling between sites `n` and `n + 1` (1-based).
    pub fn coupling(&self, n: usize) -> Result<f64> {
        if n == 0 || n >= self.n_sites() {
            return Err(Error::SiteOutOfRange {
                site: n,
                n: self.n_sites() - 1,
            });
        }
        Ok(self.couplings[n - 1])
    }

    /// Largest coupling strength. Fields do not enter.
    pub fn j_max(&self) -> f64 {
        self.couplings.iter().copied().fold(0.0, f64::max)
    }

    /// 1-based index of the largest coupling (the first one on ties).
    pub fn j_max_position(&self) -> usize {
        let mut best = 0;
        for (i, &j) in self.couplings.iter().enumerate() {
            if j > self.couplings[best] {
                best = i;
            }
        }
        best + 1
    }

    pub fn hamiltonian(&self) -> TridiagonalHamiltonian {
        build_hamiltonian(self)
    }

    /// `true` when `J_n = J_{N-n}` and `B_n = B_{N+1-n}` within `tol`.
    pub fn is_mirror_symmetric_within(&self, tol: f64) -> bool {
        palindromic(&self.couplings, tol) && palindromic(&self.fields, tol)
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        self.is_mirror_symmetric_within(1e-12)
    }

    /// Returns a copy with the same fields and the given couplings.
    pub fn with_couplings(&self, couplings: Vec<f64>) -> Result<Self> {
        Self::new(couplings, self.fields.clone())
    }
}

fn palindromic(xs: &[f64], tol: f64) -> bool {
    xs.iter()
        .zip(xs.iter().rev())
        .all(|(a, b)| (a - b).abs() <= tol)
}

/// Single-excitation block of the chain Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

pub fn build_hamiltonian(chain: &ChainSpec) -> TridiagonalHamiltonian {
    TridiagonalHamiltonian {
        diagonal: chain.fields.clone(),
        off_diagonal: chain.couplings.clone(),
    }
}

impl TridiagonalHamiltonian {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    /// Matrix element `<row|H|col>` with 1-based indices.
    pub fn entry(&self, row: usize, col: usize) -> f64 {
        let (r, c) = (row - 1, col - 1);
        if r == c {
            self.diagonal[r]
        } else if r + 1 == c {
            self.off_diagonal[r]
        } else if c + 1 == r {
            self.off_diagonal[c]
        } else {
            0.0
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.diagonal
            .iter()
            .chain(&self.off_diagonal)
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Dense row-major copy, for small-matrix checks.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (1..=n)
            .map(|r| (1..=n).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    pub fn apply_real(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diagonal[i] * x[i];
                if i > 0 {
                    y += self.off_diagonal[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.off_diagonal[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = x[i] * self.diagonal[i];
                if i > 0 {
                    y += x[i - 1] * self.off_diagonal[i - 1];
                }
                if i + 1 < n {
                    y += x[i + 1] * self.off_diagonal[i];
                }
                y
            })
            .collect()
    }

    /// `<psi|H|psi>` for a (not necessarily normalized) state.
    pub fn expectation(&self, state: &SingleExcitationState) -> f64 {
        let h_psi = self.apply(state.amplitudes());
        state
            .amplitudes()
            .iter()
            .zip(&h_psi)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    /// Mirror image `S H S`.
    pub fn mirrored(&self) -> Self {
        let mut diagonal = self.diagonal.clone();
        let mut off_diagonal = self.off_diagonal.clone();
        diagonal.reverse();
        off_diagonal.reverse();
        Self {
            diagonal,
            off_diagonal,
        }
    }

    /// `Tr(H S)`: the sum of anti-diagonal entries.
    pub fn mirror_trace(&self) -> f64 {
        let n = self.dim();
        (1..=n).map(|r| self.entry(r, n + 1 - r)).sum()
    }
}

/// Mirror permutation `n -> N + 1 - n` as a 1-based lookup table.
///
/// Entry `k` of the returned vector (0-based) holds the image of site `k + 1`.
pub fn mirror_operator(n: usize) -> Vec<usize> {
    (1..=n).rev().collect()
}

pub fn is_mirror_symmetric(chain: &ChainSpec) -> bool {
    chain.is_mirror_symmetric()
}

/// Complex amplitudes over the sites of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationState {
    amplitudes: Vec<Complex64>,
}

impl SingleExcitationState {
    /// Wraps amplitudes that must already be normalized to within `tol`.
    pub fn new(amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        let s = Self::from_amplitudes(amplitudes);
        let norm = s.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm, tolerance: tol });
        }
        Ok(s)
    }

    /// Wraps amplitudes without any normalization check, e.g. an unnormalized
    /// measurement branch.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// `|site>` for a chain of `n` sites.
    pub fn basis(n: usize, site: usize) -> Result<Self> {
        if site == 0 || site > n {
            return Err(Error::SiteOutOfRange { site, n });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        amplitudes[site - 1] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn n_sites(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude on a 1-based site.
    pub fn amplitude(&self, site: usize) -> Complex64 {
        self.amplitudes[site - 1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Total probability on the 1-based inclusive site range.
    pub fn weight_on(&self, first: usize, last: usize) -> f64 {
        self.amplitudes[first - 1..last]
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Returns the normalized state, or `None` for a zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm();
        (norm > 0.0).then(|| self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    /// Largest entrywise distance after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let overlap = self.inner(other);
        let phase = if overlap.norm() > 0.0 {
            overlap.conj() / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max)
    }
}
