//! Assembly of the k-excitation effective Hamiltonian.
//!
//! Two representations are supported:
//!
//! * `Reduced` — the hard-core subspace spanned by strictly increasing site
//!   tuples. Photon blockade is exact by basis exclusion and the dimension is
//!   `C(N, k)` instead of `N^k`.
//! * `FullTensor` — the full `N^k` tensor basis with a finite on-site
//!   repulsion `chi` on coincident-pair diagonal entries. Used for
//!   interaction-strength studies and as a cross-check of the reduced path.

use crate::basis::BasisMap;
use crate::error::{Error, Result};
use crate::model::{self, Interaction, ModelParams};
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::Write;

/// Representation of a k-photon Hamiltonian matrix.
#[derive(Debug, Clone)]
pub enum Representation {
    /// Hard-core reduced basis with its tuple indexing.
    Reduced(BasisMap),
    /// Full `N^k` tensor basis, row-major in the site indices.
    FullTensor,
}

/// Dense k-photon Hamiltonian (complex symmetric, not Hermitian).
#[derive(Debug, Clone)]
pub struct KPhotonHamiltonian {
    pub params: ModelParams,
    pub k: usize,
    pub representation: Representation,
    pub matrix: Array2<Complex64>,
}

impl KPhotonHamiltonian {
    /// The `k = 1` Hamiltonian; identical in both representations.
    pub fn single(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let map = crate::basis::enumerate_basis(params.n_atoms, 1)?;
        Ok(KPhotonHamiltonian {
            params: *params,
            k: 1,
            representation: Representation::Reduced(map),
            matrix: model::single_excitation_hamiltonian(params),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn basis(&self) -> Option<&BasisMap> {
        match &self.representation {
            Representation::Reduced(map) => Some(map),
            Representation::FullTensor => None,
        }
    }

    /// Trace of the matrix; cheap identity used by the diagnostics.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.matrix[[i, i]]).sum()
    }

    /// Raw dump of the matrix as row-major little-endian (re, im) f64 pairs.
    pub fn dump_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for z in self.matrix.iter() {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }
}

/// Build the hard-core k-photon Hamiltonian in the reduced basis.
///
/// Matrix element between tuples that differ in exactly one site equals the
/// single-photon coupling between the differing sites; the diagonal is the
/// sum of the on-site terms of the occupied sites; everything else is zero.
/// Each row has exactly `k (N - k)` off-diagonal entries.
pub fn build_kphoton_hardcore(
    params: &ModelParams,
    k: usize,
    map: &BasisMap,
) -> Result<KPhotonHamiltonian> {
    params.validate()?;
    if !(2..=3).contains(&k) {
        return Err(Error::InvalidArity(k));
    }
    if map.k() != k || map.n_atoms() != params.n_atoms {
        return Err(Error::DimensionMismatch {
            expected: params.n_atoms,
            got: map.n_atoms(),
        });
    }
    let n = params.n_atoms;
    let size = map.size();
    let h1 = model::single_excitation_hamiltonian(params);

    let mut matrix = Array2::zeros((size, size));
    let rows: Vec<(usize, Vec<(usize, Complex64)>)> = (0..size)
        .into_par_iter()
        .map(|r| {
            let t = map.inverse(r);
            let sites = t.sites();
            let mut entries = Vec::with_capacity(k * (n - k) + 1);
            let diag: Complex64 = sites.iter().map(|&s| h1[[s, s]]).sum();
            entries.push((r, diag));
            let mut scratch = [0usize; crate::basis::MAX_EXCITATIONS];
            for (slot, &p) in sites.iter().enumerate() {
                for q in 0..n {
                    if sites.contains(&q) {
                        continue;
                    }
                    scratch[..k].copy_from_slice(sites);
                    scratch[slot] = q;
                    scratch[..k].sort_unstable();
                    let neighbour = crate::basis::OccupationTuple::new(&scratch[..k]).unwrap();
                    entries.push((map.forward(&neighbour), h1[[p, q]]));
                }
            }
            (r, entries)
        })
        .collect();
    for (r, entries) in rows {
        for (c, v) in entries {
            matrix[[r, c]] = v;
        }
    }

    Ok(KPhotonHamiltonian {
        params: *params,
        k,
        representation: Representation::Reduced(map.clone()),
        matrix,
    })
}

/// Default memory budget for the full tensor representation (bytes).
pub const FULL_TENSOR_BUDGET: usize = 2 << 30;

/// Build the full `N^k` Hamiltonian with a finite on-site repulsion.
///
/// The kinetic part is the Kronecker sum of `k` copies of the
/// single-excitation matrix; the interaction adds `chi` on every diagonal
/// entry once per coincident pair of site indices.
pub fn build_full_with_chi(params: &ModelParams, k: usize) -> Result<KPhotonHamiltonian> {
    build_full_with_chi_budget(params, k, FULL_TENSOR_BUDGET)
}

pub fn build_full_with_chi_budget(
    params: &ModelParams,
    k: usize,
    budget: usize,
) -> Result<KPhotonHamiltonian> {
    params.validate()?;
    if !(2..=3).contains(&k) {
        return Err(Error::InvalidArity(k));
    }
    let chi = match params.interaction {
        Interaction::Finite(chi) => chi,
        Interaction::HardCore => {
            return Err(Error::RepresentationMismatch {
                expected: "finite-chi full tensor",
            })
        }
    };
    let n = params.n_atoms;
    let dim = n.pow(k as u32);
    let required = dim * dim * std::mem::size_of::<Complex64>();
    if required > budget {
        return Err(Error::MemoryBudgetExceeded {
            dim,
            required,
            budget,
        });
    }
    let h1 = model::single_excitation_hamiltonian(params);

    // Kronecker sum: one single-photon hop per leg, identity on the others.
    let mut matrix = Array2::zeros((dim, dim));
    let decode = |mut idx: usize| -> [usize; 3] {
        let mut out = [0usize; 3];
        for slot in (0..k).rev() {
            out[slot] = idx % n;
            idx /= n;
        }
        out
    };
    let encode = |idx: &[usize]| -> usize { idx[..k].iter().fold(0, |acc, &i| acc * n + i) };

    for row in 0..dim {
        let ri = decode(row);
        for leg in 0..k {
            for q in 0..n {
                let mut ci = ri;
                ci[leg] = q;
                matrix[[row, encode(&ci)]] += h1[[ri[leg], q]];
            }
        }
        let mut pairs = 0usize;
        for a in 0..k {
            for b in a + 1..k {
                if ri[a] == ri[b] {
                    pairs += 1;
                }
            }
        }
        if pairs > 0 {
            matrix[[row, row]] += Complex64::new(chi * pairs as f64, 0.0);
        }
    }

    Ok(KPhotonHamiltonian {
        params: *params,
        k,
        representation: Representation::FullTensor,
        matrix,
    })
}
