//! Brute-force reference spectra used by the test suites.
//!
//! Everything here is assembled from first principles with explicit
//! Kronecker-delta loops and shares no matrix-assembly code with the
//! production path, so the two can be compared as independent
//! implementations. Performance is a non-goal.

use crate::error::{Error, Result};
use crate::model::{Interaction, ModelParams};
use crate::spectra::{EigenPair, SpectrumResult};
use ndarray::{Array1, Array2};
use ndarray_linalg::Eig;
use num_complex::Complex64;

/// Largest full-basis dimension the oracle will diagonalize.
pub const ORACLE_DIM_LIMIT: usize = 5000;

fn one_photon_entry(params: &ModelParams, m: usize, n: usize) -> Complex64 {
    // written out literally: offset * delta - i gamma0 e^{i phi |m-n|}
    let delta = if m == n { 1.0 } else { 0.0 };
    Complex64::new(params.omega0_offset * delta, 0.0)
        - Complex64::i()
            * params.gamma0
            * Complex64::from_polar(1.0, params.phase * m.abs_diff(n) as f64)
}

/// Multisets `m1 <= m2 <= ... <= mk` over `0..n`, lexicographic.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    match k {
        2 => {
            for a in 0..n {
                for b in a..n {
                    out.push(vec![a, b]);
                }
            }
        }
        3 => {
            for a in 0..n {
                for b in a..n {
                    for c in b..n {
                        out.push(vec![a, b, c]);
                    }
                }
            }
        }
        _ => unreachable!("oracle arity is checked by the caller"),
    }
    out
}

fn distinct_permutations(sites: &[usize]) -> Vec<Vec<usize>> {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut push = |p: Vec<usize>| {
        if !perms.contains(&p) {
            perms.push(p);
        }
    };
    match sites.len() {
        2 => {
            let (a, b) = (sites[0], sites[1]);
            push(vec![a, b]);
            push(vec![b, a]);
        }
        3 => {
            let (a, b, c) = (sites[0], sites[1], sites[2]);
            for p in [
                [a, b, c],
                [a, c, b],
                [b, a, c],
                [b, c, a],
                [c, a, b],
                [c, b, a],
            ] {
                push(p.to_vec());
            }
        }
        _ => unreachable!(),
    }
    perms
}

/// Reference spectrum from the literal full-basis construction.
///
/// The `N^k` matrix is the explicit delta-product sum of one-photon terms
/// plus `chi` on each coincident-pair diagonal entry, projected onto the
/// bosonic symmetric sector with an explicit symmetrizer isometry before
/// diagonalizing. Eigenvectors are returned expanded back to the full tensor
/// basis.
pub fn full_basis_reference_spectrum(
    params: &ModelParams,
    k: usize,
    chi: f64,
) -> Result<SpectrumResult> {
    params.validate()?;
    if !(2..=3).contains(&k) {
        return Err(Error::InvalidArity(k));
    }
    let n = params.n_atoms;
    let dim = n.pow(k as u32);
    if dim > ORACLE_DIM_LIMIT {
        return Err(Error::TooLarge {
            dim,
            max: ORACLE_DIM_LIMIT,
        });
    }

    let decode = |mut idx: usize| -> Vec<usize> {
        let mut out = vec![0usize; k];
        for slot in (0..k).rev() {
            out[slot] = idx % n;
            idx /= n;
        }
        out
    };

    let mut full = Array2::<Complex64>::zeros((dim, dim));
    for row in 0..dim {
        let i = decode(row);
        for col in 0..dim {
            let j = decode(col);
            let mut acc = Complex64::new(0.0, 0.0);
            for leg in 0..k {
                let spectators = (0..k).filter(|&l| l != leg).all(|l| i[l] == j[l]);
                if spectators {
                    acc += one_photon_entry(params, i[leg], j[leg]);
                }
            }
            if row == col {
                let mut pairs = 0usize;
                for a in 0..k {
                    for b in a + 1..k {
                        if i[a] == i[b] {
                            pairs += 1;
                        }
                    }
                }
                acc += Complex64::new(chi * pairs as f64, 0.0);
            }
            full[[row, col]] = acc;
        }
    }

    // symmetrizer isometry: one column per multiset, equal weight on each
    // distinct permutation
    let sym = multisets(n, k);
    let n_sym = sym.len();
    let encode = |idx: &[usize]| -> usize { idx.iter().fold(0, |acc, &i| acc * n + i) };
    let mut w = Array2::<Complex64>::zeros((dim, n_sym));
    for (col, sites) in sym.iter().enumerate() {
        let perms = distinct_permutations(sites);
        let weight = Complex64::new(1.0 / (perms.len() as f64).sqrt(), 0.0);
        for p in perms {
            w[[encode(&p), col]] = weight;
        }
    }

    // H restricted to the symmetric sector: W^T H W (W is real)
    let hw = full.dot(&w);
    let mut h_sym = Array2::<Complex64>::zeros((n_sym, n_sym));
    for r in 0..n_sym {
        for c in 0..n_sym {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..dim {
                acc += w[[x, r]] * hw[[x, c]];
            }
            h_sym[[r, c]] = acc;
        }
    }

    let (values, vectors) = h_sym.eig().map_err(|e| Error::SolverFailure {
        detail: format!("oracle eig failed: {e}"),
        unconverged_lo: 0,
        unconverged_hi: n_sym,
    })?;

    let mut echo = *params;
    echo.interaction = Interaction::Finite(chi);
    let kf = k as f64;
    let pairs: Vec<EigenPair> = values
        .iter()
        .enumerate()
        .map(|(j, &raw)| {
            let sector = vectors.column(j);
            let mut residual = 0.0f64;
            let hs = h_sym.dot(&sector.to_owned());
            for (a, b) in hs.iter().zip(sector.iter()) {
                residual += (a - raw * b).norm_sqr();
            }
            // expand to the full tensor basis
            let mut vector = Array1::<Complex64>::zeros(dim);
            for x in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, s) in sector.iter().enumerate() {
                    acc += w[[x, c]] * s;
                }
                vector[x] = acc;
            }
            EigenPair {
                energy_per_photon: raw / kf,
                raw_energy: raw,
                vector,
                residual: residual.sqrt(),
            }
        })
        .collect();
    crate::spectra::finalize_pairs(&echo, k, n_sym, pairs, None)
}

/// Energies of the physical (no double occupancy) part of a penalized
/// reference spectrum: eigenvalues whose magnitude stays well below `chi`.
pub fn hardcore_sector_energies(result: &SpectrumResult, chi: f64) -> Vec<Complex64> {
    result
        .eigs
        .iter()
        .filter(|p| p.raw_energy.norm() < 0.5 * chi)
        .map(|p| p.energy_per_photon)
        .collect()
}

/// Per-photon energies of all noninteracting triples `(e_a + e_b + e_c) / 3`
/// over unordered index triples with repetition, sorted by `(Re, Im)`.
pub fn noninteracting_triples(singles: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for a in 0..singles.len() {
        for b in a..singles.len() {
            for c in b..singles.len() {
                out.push((singles[a] + singles[b] + singles[c]) / 3.0);
            }
        }
    }
    sort_energies(&mut out);
    out
}

/// Canonical `(Re, Im)` ordering used for multiset comparisons.
pub fn sort_energies(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Greatest pointwise distance between two sorted energy multisets.
pub fn multiset_deviation(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets must have equal cardinality");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    sort_energies(&mut a);
    sort_energies(&mut b);
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
