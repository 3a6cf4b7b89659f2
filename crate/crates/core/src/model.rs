//! Physical parameters, the single-excitation Hamiltonian and the
//! polaritonic dispersion relation.
//!
//! The array is a finite periodic chain of `N` two-level atoms coupled to a
//! 1D waveguide. After tracing out the photons the single-excitation physics
//! is captured by the dense non-Hermitian matrix
//!
//! ```text
//! H[m][n] = offset * delta(m, n) - i * gamma0 * exp(i * phi * |m - n|)
//! ```
//!
//! which is complex symmetric (`H = H^T`), not Hermitian. Energies are in
//! units of `hbar * gamma0` and counted from the atomic resonance.

use crate::error::{Error, Result};
use crate::spectra::{self, SpectrumResult};
use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// On-site polariton-polariton interaction mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interaction {
    /// Photon blockade: a site can never host two excitations. Implemented
    /// by basis exclusion, not by a penalty term.
    HardCore,
    /// Finite on-site repulsion `chi`, applied once per coincident pair of
    /// photons in the full tensor basis.
    Finite(f64),
}

/// Physical configuration of the atom array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Number of atoms in the chain.
    pub n_atoms: usize,
    /// Phase `phi = omega0 * d / c` acquired by light between neighbouring
    /// atoms (radians).
    pub phase: f64,
    /// Radiative decay rate of a single atom. Defaults to 1, the energy unit.
    pub gamma0: f64,
    /// Energy of the atomic resonance relative to the reference point.
    /// Defaults to 0 so energies are counted from the resonance.
    pub omega0_offset: f64,
    pub interaction: Interaction,
}

impl ModelParams {
    /// Hard-core parameters in natural units (`gamma0 = 1`, `offset = 0`).
    pub fn new(n_atoms: usize, phase: f64) -> Result<Self> {
        let params = ModelParams {
            n_atoms,
            phase,
            gamma0: 1.0,
            omega0_offset: 0.0,
            interaction: Interaction::HardCore,
        };
        params.validate()?;
        Ok(params)
    }

    /// Same geometry but with a finite on-site repulsion.
    pub fn with_chi(n_atoms: usize, phase: f64, chi: f64) -> Result<Self> {
        let mut params = Self::new(n_atoms, phase)?;
        params.interaction = Interaction::Finite(chi);
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(Error::InvalidParams("n_atoms must be at least 1".into()));
        }
        if !(self.phase > 0.0) || !self.phase.is_finite() {
            return Err(Error::InvalidParams(format!(
                "phase must be positive and finite, got {}",
                self.phase
            )));
        }
        if !(self.gamma0 > 0.0) || !self.gamma0.is_finite() {
            return Err(Error::InvalidParams(format!(
                "gamma0 must be positive and finite, got {}",
                self.gamma0
            )));
        }
        if !self.omega0_offset.is_finite() {
            return Err(Error::InvalidParams("omega0_offset must be finite".into()));
        }
        if let Interaction::Finite(chi) = self.interaction {
            if !(chi >= 0.0) || !chi.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "chi must be nonnegative and finite, got {chi}"
                )));
            }
        }
        Ok(())
    }

    /// Single-photon coupling `H[m][n]` between sites `m` and `n` (0-based).
    #[inline]
    pub fn coupling(&self, m: usize, n: usize) -> Complex64 {
        let d = m.abs_diff(n) as f64;
        let diag = if m == n {
            Complex64::new(self.omega0_offset, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        diag - Complex64::i() * self.gamma0 * Complex64::from_polar(1.0, self.phase * d)
    }
}

/// Default guard on `|cos k - cos phi|` below which a dispersion query is
/// rejected as sitting on the polaritonic resonance pole.
pub const POLE_GUARD: f64 = 1e-9;

/// `N x N` single-excitation Hamiltonian.
///
/// Entries for mirrored index pairs are produced from the same precomputed
/// phase factor, so `H = H^T` holds bit for bit.
pub fn single_excitation_hamiltonian(params: &ModelParams) -> Array2<Complex64> {
    let n = params.n_atoms;
    // one phase factor per distance; reused for (m, n) and (n, m)
    let by_distance: Vec<Complex64> = (0..n)
        .map(|d| {
            -Complex64::i() * params.gamma0 * Complex64::from_polar(1.0, params.phase * d as f64)
        })
        .collect();
    let offset = Complex64::new(params.omega0_offset, 0.0);
    Array2::from_shape_fn((n, n), |(m, l)| {
        let v = by_distance[m.abs_diff(l)];
        if m == l {
            v + offset
        } else {
            v
        }
    })
}

/// Polaritonic dispersion `eps(k) = gamma0 * sin(phi) / (cos k - cos phi)`
/// for the infinite array, with the Bloch vector `k` in `(0, pi]`.
///
/// Positive (upper branch) for `k < phi`, negative (lower branch) for
/// `k > phi`; diverges at the resonance `k = phi`.
pub fn dispersion_energy(k: f64, params: &ModelParams) -> Result<Complex64> {
    dispersion_energy_guarded(k, params, POLE_GUARD)
}

pub fn dispersion_energy_guarded(k: f64, params: &ModelParams, guard: f64) -> Result<Complex64> {
    let denom = k.cos() - params.phase.cos();
    if denom.abs() < guard {
        return Err(Error::PoleProximity {
            denom: denom.abs(),
            guard,
        });
    }
    Ok(Complex64::new(
        params.gamma0 * params.phase.sin() / denom + params.omega0_offset,
        0.0,
    ))
}

/// Eigendecomposition of the single-excitation Hamiltonian.
pub fn single_spectrum(params: &ModelParams) -> Result<SpectrumResult> {
    let h = crate::hamiltonian::KPhotonHamiltonian::single(params)?;
    spectra::diagonalize(&h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_site_is_pure_decay() {
        let params = ModelParams::new(1, 0.02).unwrap();
        let h = single_excitation_hamiltonian(&params);
        assert_eq!(h.dim(), (1, 1));
        assert_abs_diff_eq!(h[[0, 0]].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h[[0, 0]].im, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn phase_pi_alternates_sign() {
        // e^{i pi} = -1 flips the nearest-neighbour coupling to +i
        let params = ModelParams::new(3, std::f64::consts::PI).unwrap();
        let h = single_excitation_hamiltonian(&params);
        for (m, l, re, im) in [
            (0usize, 1usize, 0.0, 1.0),
            (1, 2, 0.0, 1.0),
            (0, 2, 0.0, -1.0),
        ] {
            assert_abs_diff_eq!(h[[m, l]].re, re, epsilon = 1e-12);
            assert_abs_diff_eq!(h[[m, l]].im, im, epsilon = 1e-12);
        }
    }

    #[test]
    fn off_diagonal_matches_direct_evaluation() {
        let params = ModelParams::new(2, 0.02).unwrap();
        let h = single_excitation_hamiltonian(&params);
        // -i e^{0.02 i} = sin(0.02) - i cos(0.02)
        assert_abs_diff_eq!(h[[0, 1]].re, 0.01999866669333308, epsilon = 1e-15);
        assert_abs_diff_eq!(h[[0, 1]].im, -0.9998000066665778, epsilon = 1e-15);
    }

    #[test]
    fn matrix_is_bitwise_symmetric() {
        let params = ModelParams::new(17, 1.3).unwrap();
        let h = single_excitation_hamiltonian(&params);
        for m in 0..17 {
            for l in 0..17 {
                assert_eq!(h[[m, l]], h[[l, m]]);
            }
        }
    }

    #[test]
    fn dispersion_branches_and_pole() {
        let params = ModelParams::new(10, 0.02).unwrap();
        let at = |k: f64| dispersion_energy(k, &params).unwrap().re;
        assert_abs_diff_eq!(
            at(std::f64::consts::FRAC_PI_2),
            -0.020002667093402426,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(at(std::f64::consts::PI), -0.010000333346667207, epsilon = 1e-14);
        // upper branch is positive below the pole
        assert!(at(0.01) > 0.0);
        assert!(matches!(
            dispersion_energy(0.02, &params),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0, 0.02).is_err());
        assert!(ModelParams::new(3, 0.0).is_err());
        assert!(ModelParams::new(3, -1.0).is_err());
        let mut p = ModelParams::new(3, 0.1).unwrap();
        p.gamma0 = 0.0;
        assert!(p.validate().is_err());
    }
}
