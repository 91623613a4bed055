//! Construction of chains with a fractional revival between their end sites.
//!
//! Three routes are available:
//!
//! * [`genest_chain`]: the closed-form even-length family with zero fields,
//!   which has a `theta`-revival at `tau0 = pi/2`;
//! * [`spectral_design`]: any length, built from an eigenvalue lattice
//!   ([`build_fr_spectrum`]) and a persymmetric inverse eigenvalue solver
//!   ([`inverse_persymmetric_jacobi`]);
//! * [`asymmetrize_odd`]: odd-length chains whose two central couplings are
//!   unbalanced by an angle `eta`.

mod asymmetric;
mod inverse;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::eigen::eigendecompose;
use crate::error::{Error, Result};

pub use asymmetric::{
    asymmetric_time_penalty, asymmetrize_odd, effective_angle_asymmetric, which_max, WhichMax,
};
pub use inverse::inverse_persymmetric_jacobi;

/// Revival time of the closed-form family and of the default spectral lattices.
pub const DEFAULT_TAU0: f64 = FRAC_PI_2;

/// A chain together with the revival it was designed to have.
#[derive(Debug, Clone, PartialEq)]
pub struct FrDesign {
    pub chain: ChainSpec,
    /// Revival angle in `(0, pi)`.
    pub theta: f64,
    pub tau0: f64,
    /// Phase of the end-site amplitude once the start amplitude is made real.
    pub phi: f64,
    /// Symmetric and antisymmetric lattice integers, when known.
    pub lattice: Option<(Vec<u64>, Vec<u64>)>,
    /// Central imbalance and source-chain angle for asymmetric odd designs.
    pub asymmetry: Option<Asymmetry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymmetry {
    pub eta: f64,
    pub theta_prime: f64,
}

/// Provenance stored next to a chain in its JSON file under `"design"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignMetadata {
    pub theta: f64,
    pub tau0: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub k: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub kprime: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_prime: Option<f64>,
}

/// Chain JSON file: the chain keys plus optional design metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDocument {
    #[serde(flatten)]
    pub chain: ChainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignMetadata>,
}

impl FrDesign {
    pub fn metadata(&self) -> DesignMetadata {
        let (k, kprime) = self.lattice.clone().unwrap_or_default();
        DesignMetadata {
            theta: self.theta,
            tau0: self.tau0,
            k,
            kprime,
            eta: self.asymmetry.map(|a| a.eta),
            theta_prime: self.asymmetry.map(|a| a.theta_prime),
        }
    }

    pub fn document(&self) -> ChainDocument {
        ChainDocument {
            chain: self.chain.clone(),
            design: Some(self.metadata()),
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 && theta < PI {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "revival angle must lie in (0, pi), got {theta}"
        )))
    }
}

/// Default lattice `k_n = k'_n = n - 1` for a chain of `n` sites.
pub fn default_lattice(n: usize) -> (Vec<u64>, Vec<u64>) {
    let sym = (0..n.div_ceil(2) as u64).collect();
    let anti = (0..(n / 2) as u64).collect();
    (sym, anti)
}

/// Closed-form even-length chain with a `theta`-revival at `tau0 = pi/2`:
///
/// `J_n = sqrt( n (N - n) ((N - 2n)^2 - 4 theta^2 / pi^2) / ((N - 1 - 2n)(N + 1 - 2n)) )`
///
/// with all fields zero. At `n = N/2` numerator and denominator are both
/// negative and the coupling is `N theta / pi`.
pub fn genest_chain(n: usize, theta: f64) -> Result<FrDesign> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "closed-form chain needs an even number of sites >= 2, got {n}"
        )));
    }
    check_theta(theta)?;
    let nf = n as f64;
    let x = 2.0 * theta / PI;
    let couplings = (1..n)
        .map(|site| {
            let s = site as f64;
            let a = nf - 2.0 * s;
            let radicand = s * (nf - s) * (a * a - x * x) / ((a - 1.0) * (a + 1.0));
            if radicand > 0.0 && radicand.is_finite() {
                Ok(radicand.sqrt())
            } else {
                Err(Error::InvalidParameter(format!(
                    "coupling J_{site} has radicand {radicand} for N = {n}, theta = {theta}"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrDesign {
        chain: ChainSpec::with_zero_fields(couplings)?,
        theta,
        tau0: DEFAULT_TAU0,
        phi: -FRAC_PI_2,
        lattice: Some(default_lattice(n)),
        asymmetry: None,
    })
}

/// Angle at which the three central couplings of the closed-form chain tie:
/// `(pi/2) sqrt(1 - 3 / (N^2 - 1))`.
pub fn critical_angle(n: usize) -> Result<f64> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "critical angle is defined for even N >= 2, got {n}"
        )));
    }
    let nf = n as f64;
    Ok(FRAC_PI_2 * (1.0 - 3.0 / (nf * nf - 1.0)).sqrt())
}

/// Eigenvalue lattice of a mirror-symmetric FR chain.
///
/// Symmetric eigenvalues sit at `lambda_1 - (2 pi / tau0) k_n`, antisymmetric
/// ones at `lambda_1 - (2 pi / tau0) k'_n - 2 theta / tau0`, with `lambda_1 = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrSpectrumSpec {
    pub n_sites: usize,
    pub theta: f64,
    pub tau0: f64,
    pub sym_integers: Vec<u64>,
    pub antisym_integers: Vec<u64>,
}

impl FrSpectrumSpec {
    pub fn with_default_lattice(n_sites: usize, theta: f64, tau0: f64) -> Self {
        let (sym_integers, antisym_integers) = default_lattice(n_sites);
        Self {
            n_sites,
            theta,
            tau0,
            sym_integers,
            antisym_integers,
        }
    }
}

fn check_increasing(name: &str, ks: &[u64]) -> Result<()> {
    if ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be strictly increasing, got {ks:?}"
        )));
    }
    Ok(())
}

/// Interleaves the two lattices into a descending spectrum anchored at `lambda_1 = 0`.
pub fn build_fr_spectrum(spec: &FrSpectrumSpec) -> Result<Vec<f64>> {
    let n = spec.n_sites;
    if n < 2 {
        return Err(Error::TooFewSites(n));
    }
    check_theta(spec.theta)?;
    if !(spec.tau0.is_finite() && spec.tau0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "revival time must be positive, got {}",
            spec.tau0
        )));
    }
    for (what, got, want) in [
        ("symmetric lattice integers", spec.sym_integers.len(), n.div_ceil(2)),
        ("antisymmetric lattice integers", spec.antisym_integers.len(), n / 2),
    ] {
        if got != want {
            return Err(Error::LengthMismatch {
                what,
                expected: want,
                actual: got,
            });
        }
    }
    if spec.sym_integers[0] != 0 {
        return Err(Error::InvalidParameter(format!(
            "k_1 must be 0, got {}",
            spec.sym_integers[0]
        )));
    }
    check_increasing("symmetric lattice integers", &spec.sym_integers)?;
    check_increasing("antisymmetric lattice integers", &spec.antisym_integers)?;

    let step = 2.0 * PI / spec.tau0;
    let offset = 2.0 * spec.theta / spec.tau0;
    let spectrum: Vec<f64> = (0..n)
        .map(|i| {
            if i % 2 == 0 {
                -step * spec.sym_integers[i / 2] as f64
            } else {
                -step * spec.antisym_integers[i / 2] as f64 - offset
            }
        })
        .collect();
    check_descending(&spectrum)?;
    Ok(spectrum)
}

pub(crate) fn check_descending(spectrum: &[f64]) -> Result<()> {
    for (i, w) in spectrum.windows(2).enumerate() {
        if !(w[0] > w[1]) {
            return Err(Error::NotDescending {
                first: i + 1,
                second: i + 2,
                upper: w[0],
                lower: w[1],
            });
        }
    }
    Ok(())
}

/// Mirror-symmetric FR chain of any length built from an eigenvalue lattice.
///
/// The reconstructed chain is checked against its target spectrum before it
/// is returned.
pub fn spectral_design(spec: &FrSpectrumSpec) -> Result<FrDesign> {
    let spectrum = build_fr_spectrum(spec)?;
    let chain = inverse_persymmetric_jacobi(&spectrum)?;
    let eig = eigendecompose(&chain.hamiltonian())?;
    let spread = spectrum[0] - spectrum[spectrum.len() - 1];
    let residual = eig
        .eigenvalues()
        .iter()
        .zip(&spectrum)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if residual > 1e-8 * spread {
        return Err(Error::ReconstructionFailed {
            residual,
            bound: 1e-8 * spread,
        });
    }
    Ok(FrDesign {
        chain,
        theta: spec.theta,
        tau0: spec.tau0,
        phi: -FRAC_PI_2,
        lattice: Some((spec.sym_integers.clone(), spec.antisym_integers.clone())),
        asymmetry: None,
    })
}

/// Spectral design with the default lattice and `tau0 = pi/2`; the route used
/// for odd-length symmetric chains.
pub fn odd_symmetric_design(n: usize, theta: f64) -> Result<FrDesign> {
    spectral_design(&FrSpectrumSpec::with_default_lattice(n, theta, DEFAULT_TAU0))
}

/// Symmetric FR chain for any `n`: the closed form for even `n`, the spectral
/// design otherwise.
pub fn symmetric_design(n: usize, theta: f64) -> Result<FrDesign> {
    if n % 2 == 0 {
        genest_chain(n, theta)
    } else {
        odd_symmetric_design(n, theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn two_site_chain() {
        for theta in [0.1, 1.0, 2.5] {
            let d = genest_chain(2, theta).unwrap();
            assert!((d.chain.couplings()[0] - 2.0 * theta / PI).abs() < 1e-15);
        }
    }

    #[test]
    fn four_site_values() {
        let d = genest_chain(4, FRAC_PI_2).unwrap();
        let want = [3f64.sqrt(), 2.0, 3f64.sqrt()];
        for (g, w) in d.chain.couplings().iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }
        assert!(d.chain.fields().iter().all(|&b| b == 0.0));

        let d = genest_chain(4, FRAC_PI_3).unwrap();
        let j = d.chain.couplings();
        assert!((j[1] - 4.0 / 3.0).abs() < 1e-15);
        assert!((j[0] - (32.0f64 / 9.0).sqrt()).abs() < 1e-15);
        assert!((j[2] - (32.0f64 / 9.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(genest_chain(5, 1.0).is_err());
        assert!(genest_chain(0, 1.0).is_err());
        assert!(genest_chain(4, 0.0).is_err());
        assert!(genest_chain(4, PI).is_err());
        assert!(critical_angle(0).is_err());
        assert!(critical_angle(7).is_err());
    }

    #[test]
    fn critical_angle_values() {
        assert_eq!(critical_angle(2).unwrap(), 0.0);
        // (pi/2) sqrt(4/5) and (pi/2) sqrt(60/63), evaluated independently.
        assert!((critical_angle(4).unwrap() - 1.4049629462081452).abs() < 1e-15);
        assert!((critical_angle(8).unwrap() - 1.5329402499064275).abs() < 1e-15);
    }

    #[test]
    fn critical_angle_ties_central_couplings() {
        for n in (4..=64).step_by(2) {
            let theta = critical_angle(n).unwrap();
            let d = genest_chain(n, theta).unwrap();
            let c = n / 2;
            let target = theta * n as f64 / PI;
            for site in [c - 1, c, c + 1] {
                let j = d.chain.coupling(site).unwrap();
                assert!((j - target).abs() < 1e-12 * target.max(1.0), "N={n} site {site}");
            }
        }
    }

    #[test]
    fn lattice_spectra() {
        let pst = build_fr_spectrum(&FrSpectrumSpec::with_default_lattice(4, FRAC_PI_2, FRAC_PI_2)).unwrap();
        for (g, w) in pst.iter().zip([0.0, -2.0, -4.0, -6.0]) {
            assert!((g - w).abs() < 1e-14);
        }
        let s = build_fr_spectrum(&FrSpectrumSpec::with_default_lattice(4, FRAC_PI_3, FRAC_PI_2)).unwrap();
        for (g, w) in s.iter().zip([0.0, -4.0 / 3.0, -4.0, -4.0 - 4.0 / 3.0]) {
            assert!((g - w).abs() < 1e-14);
        }
    }

    #[test]
    fn lattice_collision_rejected() {
        let spec = FrSpectrumSpec {
            n_sites: 4,
            theta: 1e-9,
            tau0: FRAC_PI_2,
            sym_integers: vec![0, 1],
            antisym_integers: vec![1, 2],
        };
        assert!(matches!(
            build_fr_spectrum(&spec),
            Err(Error::NotDescending { first: 2, second: 3, .. })
        ));
        let bad_k1 = FrSpectrumSpec {
            sym_integers: vec![1, 2],
            ..FrSpectrumSpec::with_default_lattice(4, 1.0, FRAC_PI_2)
        };
        assert!(build_fr_spectrum(&bad_k1).is_err());
        let short = FrSpectrumSpec {
            antisym_integers: vec![0],
            ..FrSpectrumSpec::with_default_lattice(4, 1.0, FRAC_PI_2)
        };
        assert!(matches!(build_fr_spectrum(&short), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn document_json_shape() {
        let d = genest_chain(4, FRAC_PI_2).unwrap();
        let v = serde_json::to_value(d.document()).unwrap();
        assert_eq!(v["n"], 4);
        assert_eq!(v["design"]["k"], serde_json::json!([0, 1]));
        assert_eq!(v["design"]["kprime"], serde_json::json!([0, 1]));
        assert!(v["design"].get("eta").is_none());
        let back: ChainDocument = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(back.chain, d.chain);
        // plain chain readers ignore the design key
        let plain: ChainSpec = serde_json::from_value(v).unwrap();
        assert_eq!(plain, d.chain);
    }
}
