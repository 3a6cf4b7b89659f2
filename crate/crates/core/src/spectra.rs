//! Dense non-Hermitian eigendecomposition with fixed conventions.
//!
//! The k-photon matrices are complex symmetric, not Hermitian, so a general
//! dense solver is required. Everything downstream relies on the conventions
//! fixed here:
//!
//! * eigenvalues are reported per photon, `eps = raw / k`;
//! * eigenpairs are sorted by ascending `Re eps`, ties by ascending `Im eps`;
//! * eigenvectors have unit norm and the largest-magnitude component is made
//!   real and positive (gauge fixing, so repeated runs give identical files);
//! * every eigenpair carries a residual `|H v - raw v|` that must stay below
//!   [`RESIDUAL_TOL`].
//!
//! [`diagonalize`] solves the matrix as given. [`diagonalize_mirror_blocked`]
//! exploits the exact reflection symmetry of the chain (`site i -> N-1-i`
//! commutes with the Hamiltonian because the coupling depends only on
//! `|m - n|`) to split the problem into even and odd sectors of roughly half
//! the dimension, which cuts the cubic solve cost by about four. Both paths
//! satisfy the same contract.

use crate::error::{Error, Result};
use crate::hamiltonian::{KPhotonHamiltonian, Representation};
use crate::model::ModelParams;
use ndarray::{Array1, Array2, ArrayView2};
use ndarray_linalg::error::LinalgError;
use ndarray_linalg::Eig;
use num_complex::Complex64;

/// Acceptance threshold on eigenpair residuals.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// One eigenstate of a k-photon Hamiltonian.
#[derive(Debug, Clone)]
pub struct EigenPair {
    /// Energy per photon, `raw_energy / k`.
    pub energy_per_photon: Complex64,
    /// Eigenvalue of the matrix as solved.
    pub raw_energy: Complex64,
    /// Unit-norm, gauge-fixed amplitude vector in the representation of the
    /// source Hamiltonian.
    pub vector: Array1<Complex64>,
    /// `|H v - raw v|` with `|v| = 1`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct SolverDiagnostics {
    pub dim: usize,
    pub max_residual: f64,
    /// Sector dimensions (even, odd) when the mirror-blocked path was used.
    pub mirror_sectors: Option<(usize, usize)>,
}

/// Sorted eigendecomposition of one k-photon Hamiltonian.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub params: ModelParams,
    pub k: usize,
    pub eigs: Vec<EigenPair>,
    pub diagnostics: SolverDiagnostics,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigs.is_empty()
    }

    pub fn energies_per_photon(&self) -> Vec<Complex64> {
        self.eigs.iter().map(|e| e.energy_per_photon).collect()
    }

    /// Index of the state with the smallest decay rate `-Im eps`.
    pub fn most_subradiant(&self) -> usize {
        self.eigs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.energy_per_photon.im.total_cmp(&b.1.energy_per_photon.im))
            .map(|(i, _)| i)
            .expect("spectrum is never empty")
    }

    /// Index of the eigenvalue closest to `target` in the complex plane.
    pub fn closest_to(&self, target: Complex64) -> usize {
        self.eigs
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1.energy_per_photon - target)
                    .norm()
                    .total_cmp(&(b.1.energy_per_photon - target).norm())
            })
            .map(|(i, _)| i)
            .expect("spectrum is never empty")
    }
}

/// Single entry point to the dense eigensolver backend (LAPACK `zgeev`).
fn eig_dense(matrix: &ArrayView2<Complex64>) -> Result<(Array1<Complex64>, Array2<Complex64>)> {
    matrix.eig().map_err(|err| match err {
        LinalgError::Lapack(lapack_err) => Error::SolverFailure {
            detail: lapack_err.to_string(),
            unconverged_lo: 0,
            unconverged_hi: matrix.nrows(),
        },
        other => Error::SolverFailure {
            detail: other.to_string(),
            unconverged_lo: 0,
            unconverged_hi: matrix.nrows(),
        },
    })
}

/// Norm of each column of `h * vectors - vectors * diag(values)`.
///
/// One BLAS gemm plus a column sweep; `vectors` columns are assumed
/// unit-norm (LAPACK guarantees this for `zgeev` output).
fn column_residuals(
    h: &ArrayView2<Complex64>,
    values: &Array1<Complex64>,
    vectors: &Array2<Complex64>,
) -> Vec<f64> {
    let hv = h.dot(vectors);
    values
        .iter()
        .enumerate()
        .map(|(j, &lambda)| {
            let mut acc = 0.0;
            for (hvi, vi) in hv.column(j).iter().zip(vectors.column(j).iter()) {
                acc += (hvi - lambda * vi).norm_sqr();
            }
            acc.sqrt()
        })
        .collect()
}

/// Normalize, fix the gauge and package eigenpairs, then sort.
pub(crate) fn finalize_pairs(
    params: &ModelParams,
    k: usize,
    dim: usize,
    mut pairs: Vec<EigenPair>,
    mirror_sectors: Option<(usize, usize)>,
) -> Result<SpectrumResult> {
    for (idx, pair) in pairs.iter_mut().enumerate() {
        let norm = pair.vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::SolverFailure {
                detail: format!("solver returned a zero eigenvector at index {idx}"),
                unconverged_lo: idx,
                unconverged_hi: idx + 1,
            });
        }
        // residual is per unit vector
        pair.residual /= norm;
        // gauge: largest-magnitude component becomes real positive
        let mut arg = 0usize;
        let mut best = -1.0f64;
        for (i, z) in pair.vector.iter().enumerate() {
            let m = z.norm_sqr();
            if m > best {
                best = m;
                arg = i;
            }
        }
        let phase = pair.vector[arg] / pair.vector[arg].norm();
        let scale = phase.conj() / norm;
        pair.vector.mapv_inplace(|z| z * scale);
    }
    let max_residual = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
    if let Some(bad) = pairs.iter().position(|p| p.residual > RESIDUAL_TOL) {
        return Err(Error::ResidualTooLarge {
            index: bad,
            residual: pairs[bad].residual,
            tol: RESIDUAL_TOL,
        });
    }
    pairs.sort_by(|a, b| {
        a.energy_per_photon
            .re
            .total_cmp(&b.energy_per_photon.re)
            .then(a.energy_per_photon.im.total_cmp(&b.energy_per_photon.im))
    });
    Ok(SpectrumResult {
        params: *params,
        k,
        eigs: pairs,
        diagnostics: SolverDiagnostics {
            dim,
            max_residual,
            mirror_sectors,
        },
    })
}

/// Full eigendecomposition of a k-photon Hamiltonian.
pub fn diagonalize(h: &KPhotonHamiltonian) -> Result<SpectrumResult> {
    let dim = h.dim();
    let (values, vectors) = eig_dense(&h.matrix.view())?;
    let residuals = column_residuals(&h.matrix.view(), &values, &vectors);
    let kf = h.k as f64;
    let pairs = values
        .iter()
        .enumerate()
        .map(|(j, &raw)| EigenPair {
            energy_per_photon: raw / kf,
            raw_energy: raw,
            vector: vectors.column(j).to_owned(),
            residual: residuals[j],
        })
        .collect();
    finalize_pairs(&h.params, h.k, dim, pairs, None)
}

/// Orbit structure of the reduced basis under the site reversal.
struct MirrorOrbits {
    /// `(t, mirror(t))` with `t < mirror(t)`.
    pairs: Vec<(usize, usize)>,
    /// Indices fixed by the reversal (odd chains only).
    fixed: Vec<usize>,
}

fn mirror_orbits(h: &KPhotonHamiltonian) -> Result<MirrorOrbits> {
    let map = match &h.representation {
        Representation::Reduced(map) => map,
        Representation::FullTensor => {
            return Err(Error::RepresentationMismatch { expected: "reduced" })
        }
    };
    let n = map.n_atoms();
    let mut pairs = Vec::new();
    let mut fixed = Vec::new();
    for (t, tuple) in map.tuples().iter().enumerate() {
        let m = map.forward(&tuple.mirrored(n));
        match m.cmp(&t) {
            std::cmp::Ordering::Greater => pairs.push((t, m)),
            std::cmp::Ordering::Equal => fixed.push(t),
            std::cmp::Ordering::Less => {}
        }
    }
    Ok(MirrorOrbits { pairs, fixed })
}

/// Eigendecomposition through the even/odd reflection sectors.
///
/// Produces the same eigenvalues as [`diagonalize`] and parity-adapted
/// eigenvectors, at about a quarter of the solve cost and memory.
pub fn diagonalize_mirror_blocked(h: &KPhotonHamiltonian) -> Result<SpectrumResult> {
    let dim = h.dim();
    let orbits = mirror_orbits(h)?;
    let npair = orbits.pairs.len();
    let dim_even = npair + orbits.fixed.len();
    let dim_odd = npair;

    // support of each sector basis vector in the full basis: (index, coeff)
    let sector_basis = |sign: f64| -> Vec<([usize; 2], [f64; 2], usize)> {
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut basis: Vec<([usize; 2], [f64; 2], usize)> = orbits
            .pairs
            .iter()
            .map(|&(t, m)| ([t, m], [inv_sqrt2, sign * inv_sqrt2], 2))
            .collect();
        if sign > 0.0 {
            basis.extend(orbits.fixed.iter().map(|&t| ([t, 0], [1.0, 0.0], 1)));
        }
        basis
    };

    let mut all_pairs: Vec<EigenPair> = Vec::with_capacity(dim);
    let kf = h.k as f64;
    for (sign, sector_dim) in [(1.0, dim_even), (-1.0, dim_odd)] {
        if sector_dim == 0 {
            continue;
        }
        let basis = sector_basis(sign);
        let full = &h.matrix;
        let mut block = Array2::<Complex64>::zeros((sector_dim, sector_dim));
        for (u, (ui, uc, un)) in basis.iter().enumerate() {
            for (v, (vi, vc, vn)) in basis.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..*un {
                    for b in 0..*vn {
                        acc += full[[ui[a], vi[b]]] * (uc[a] * vc[b]);
                    }
                }
                block[[u, v]] = acc;
            }
        }
        let (values, vectors) = eig_dense(&block.view())?;
        let residuals = column_residuals(&block.view(), &values, &vectors);
        for (j, &raw) in values.iter().enumerate() {
            // embed the sector vector back into the full reduced basis
            let mut vector = Array1::zeros(dim);
            for ((ui, uc, un), &w) in basis.iter().zip(vectors.column(j).iter()) {
                for a in 0..*un {
                    vector[ui[a]] += w * uc[a];
                }
            }
            all_pairs.push(EigenPair {
                energy_per_photon: raw / kf,
                raw_energy: raw,
                vector,
                residual: residuals[j],
            });
        }
    }
    finalize_pairs(&h.params, h.k, dim, all_pairs, Some((dim_even, dim_odd)))
}

/// Independent residual check of a spectrum against its Hamiltonian.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Indices with residual above [`RESIDUAL_TOL`].
    pub flagged: Vec<usize>,
}

impl ResidualReport {
    pub fn all_within_tolerance(&self) -> bool {
        self.flagged.is_empty()
    }
}

/// Recompute every residual from scratch (chunked gemm against the full
/// matrix), without trusting anything stored in the spectrum.
pub fn verify_residuals(result: &SpectrumResult, h: &KPhotonHamiltonian) -> Result<ResidualReport> {
    let dim = h.dim();
    if result.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: result.len(),
        });
    }
    for pair in &result.eigs {
        if pair.vector.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: pair.vector.len(),
            });
        }
    }
    const CHUNK: usize = 512;
    let mut residuals = Vec::with_capacity(dim);
    let mut start = 0;
    while start < result.len() {
        let stop = (start + CHUNK).min(result.len());
        let mut cols = Array2::zeros((dim, stop - start));
        for (j, pair) in result.eigs[start..stop].iter().enumerate() {
            cols.column_mut(j).assign(&pair.vector);
        }
        let hv = h.matrix.dot(&cols);
        for (j, pair) in result.eigs[start..stop].iter().enumerate() {
            let norm = pair.vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let mut acc = 0.0;
            for (hvi, vi) in hv.column(j).iter().zip(pair.vector.iter()) {
                acc += (hvi - pair.raw_energy * vi).norm_sqr();
            }
            residuals.push(acc.sqrt() / norm);
        }
        start = stop;
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let flagged = residuals
        .iter()
        .enumerate()
        .filter(|(_, &r)| r > RESIDUAL_TOL)
        .map(|(i, _)| i)
        .collect();
    Ok(ResidualReport {
        residuals,
        max_residual,
        flagged,
    })
}
