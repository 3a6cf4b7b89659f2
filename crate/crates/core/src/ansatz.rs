//! Product ansaetze built from single-polariton factors, factor extraction
//! from exact eigenstates, and overlap scoring.
//!
//! On the ordered sector `a < b < c` the symmetric ansatz amplitude is the
//! permanent of the 3x3 factor matrix `[u_i(t_j)]` (sum over all six
//! permuted products) and the fermionic ansatz amplitude is its determinant
//! (antisymmetric, Slater-like combination). The reduced basis stores one
//! representative per orbit, so the bosonic sign bookkeeping of the
//! antisymmetric combination is only needed when exporting full tensors.

use crate::basis::BasisMap;
use crate::classifier::Windows;
use crate::error::{Error, Result};
use ndarray::{Array1, Array2};
use ndarray_linalg::SVD;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

/// Norm below which a hard-core projection is considered annihilated.
pub const PROJECTION_EPS: f64 = 1e-12;

/// Provenance label of a single-polariton factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// Single-photon eigenstate with its spectrum index.
    Eigenstate(usize),
    EdgeLocalized,
    CentreLocalized,
    Free,
}

/// Three normalized single-polariton wave functions.
#[derive(Debug, Clone)]
pub struct FactorSet {
    pub factors: [Array1<Complex64>; 3],
    pub kinds: [FactorKind; 3],
}

impl FactorSet {
    /// Build from arbitrary nonzero vectors; factors are normalized.
    pub fn new(factors: [Array1<Complex64>; 3]) -> Result<Self> {
        let mut out = Vec::with_capacity(3);
        for f in factors {
            let norm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::ZeroVector);
            }
            out.push(f.mapv(|z| z / norm));
        }
        let factors: [Array1<Complex64>; 3] = out.try_into().expect("three factors");
        Ok(FactorSet {
            factors,
            kinds: [FactorKind::Free; 3],
        })
    }

    pub fn n_atoms(&self) -> usize {
        self.factors[0].len()
    }
}

#[inline]
fn factor_matrix(set: &FactorSet, sites: &[usize]) -> [[Complex64; 3]; 3] {
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, u) in set.factors.iter().enumerate() {
        for (j, &s) in sites.iter().enumerate() {
            m[i][j] = u[s];
        }
    }
    m
}

#[inline]
fn permanent3(m: &[[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] + m[1][2] * m[2][1])
        + m[0][1] * (m[1][0] * m[2][2] + m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] + m[1][1] * m[2][0])
}

#[inline]
fn determinant3(m: &[[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn product_state<F>(set: &FactorSet, map: &BasisMap, amp: F) -> Result<Array1<Complex64>>
where
    F: Fn(&[[Complex64; 3]; 3]) -> Complex64,
{
    if map.k() != 3 {
        return Err(Error::InvalidArity(map.k()));
    }
    if set.n_atoms() != map.n_atoms() {
        return Err(Error::LengthMismatch {
            expected: map.n_atoms(),
            got: set.n_atoms(),
        });
    }
    let mut v = Array1::zeros(map.size());
    for (r, t) in map.tuples().iter().enumerate() {
        v[r] = amp(&factor_matrix(set, t.sites()));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < PROJECTION_EPS {
        return Err(Error::DegenerateProjection { norm });
    }
    Ok(v.mapv(|z| z / norm))
}

/// Symmetrized product of the three factors, projected onto the hard-core
/// reduced basis (coincident-site components dropped) and renormalized.
pub fn symmetric_product(set: &FactorSet, map: &BasisMap) -> Result<Array1<Complex64>> {
    product_state(set, map, permanent3)
}

/// Antisymmetric (Slater-like) combination of the three factors on the
/// ordered sector, renormalized. Vanishes when two factors are parallel.
pub fn fermionic_product(set: &FactorSet, map: &BasisMap) -> Result<Array1<Complex64>> {
    product_state(set, map, determinant3)
}

/// Squared normalized overlap `|<a, b>|^2 / (|a|^2 |b|^2)`.
pub fn overlap(a: &Array1<Complex64>, b: &Array1<Complex64>) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let na: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    let dot: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
    Ok(dot.norm_sqr() / (na * nb))
}

/// Squared overlap of `state` with the span of `vectors` (projector onto the
/// subspace). Used when candidate factors are quasi-degenerate and a single
/// ansatz vector is not well defined.
pub fn overlap_with_span(state: &Array1<Complex64>, vectors: &[Array1<Complex64>]) -> Result<f64> {
    let ns: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if ns == 0.0 {
        return Err(Error::ZeroVector);
    }
    // modified Gram-Schmidt on the candidates
    let mut basis: Vec<Array1<Complex64>> = Vec::new();
    for v in vectors {
        if v.len() != state.len() {
            return Err(Error::LengthMismatch {
                expected: state.len(),
                got: v.len(),
            });
        }
        let mut w = v.clone();
        for q in &basis {
            let c: Complex64 = q.iter().zip(w.iter()).map(|(x, y)| x.conj() * y).sum();
            w.zip_mut_with(q, |wi, qi| *wi -= c * qi);
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            basis.push(w.mapv(|z| z / norm));
        }
    }
    let mut acc = 0.0;
    for q in &basis {
        let c: Complex64 = q.iter().zip(state.iter()).map(|(x, y)| x.conj() * y).sum();
        acc += c.norm_sqr();
    }
    Ok(acc / ns)
}

/// Options for the alternating refinement in [`extract_factors_with`].
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            restarts: 4,
            max_iters: 150,
            tol: 1e-10,
        }
    }
}

impl FitOptions {
    /// Cheap settings for spectrum-wide scans.
    pub fn fast() -> Self {
        FitOptions {
            restarts: 2,
            max_iters: 40,
            tol: 1e-8,
        }
    }
}

/// Extract the leading single-polariton factors of a three-photon state.
///
/// The factors are initialized from the top singular vectors of the one-leg
/// matricization and refined by an alternating power iteration so that the
/// reconstructed symmetric product matches the input as well as possible
/// (the top singular subspace of a symmetric product is degenerate, so the
/// raw singular vectors are only determined up to mixing). `fit_quality` is
/// the squared overlap of the reconstructed product with the input.
pub fn extract_factors(state: &Array1<Complex64>, map: &BasisMap) -> Result<(FactorSet, f64)> {
    extract_factors_with(
        state,
        map,
        &Windows::default_for(map.n_atoms()),
        &FitOptions::default(),
    )
}

pub fn extract_factors_with(
    state: &Array1<Complex64>,
    map: &BasisMap,
    windows: &Windows,
    opts: &FitOptions,
) -> Result<(FactorSet, f64)> {
    if map.k() != 3 {
        return Err(Error::InvalidArity(map.k()));
    }
    let norm: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let n = map.n_atoms();
    let tensor = crate::basis::symmetrize_to_full(state, map)?;
    let flat: Vec<Complex64> = tensor.iter().copied().collect();
    let mat = Array2::from_shape_vec((n, n * n), flat).expect("contiguous tensor");
    let (u, _, _) = mat.svd(true, false).map_err(|e| Error::SolverFailure {
        detail: format!("svd failed: {e}"),
        unconverged_lo: 0,
        unconverged_hi: n,
    })?;
    let u = u.expect("left singular vectors requested");
    let svd_factors: [Array1<Complex64>; 3] = [
        u.column(0).to_owned(),
        u.column(1.min(n - 1)).to_owned(),
        u.column(2.min(n - 1)).to_owned(),
    ];

    let mut rng = ChaCha8Rng::seed_from_u64(0x57ED);
    let mut best: Option<(FactorSet, f64)> = None;
    for restart in 0..opts.restarts.max(1) {
        let init = if restart == 0 {
            svd_factors.clone()
        } else {
            // random unitary-ish mixing within the leading subspace
            let mut mixed = svd_factors.clone();
            for f in &mut mixed {
                let c: [Complex64; 3] = std::array::from_fn(|_| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                let mut w = Array1::<Complex64>::zeros(n);
                for (ci, base) in c.iter().zip(svd_factors.iter()) {
                    w.zip_mut_with(base, |wi, bi| *wi += ci * bi);
                }
                let wn = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if wn > 0.0 {
                    *f = w.mapv(|z| z / wn);
                }
            }
            mixed
        };
        let refined = refine_product_fit(&tensor.view(), init, opts);
        if let Ok(set) = FactorSet::new(refined) {
            let fit = match symmetric_product(&set, map) {
                Ok(recon) => overlap(&recon, state)?,
                Err(Error::DegenerateProjection { .. }) => 0.0,
                Err(e) => return Err(e),
            };
            if best.as_ref().map_or(true, |(_, b)| fit > *b) {
                best = Some((set, fit));
            }
        }
    }
    let (mut set, fit) = best.expect("at least one restart");
    for (kind, factor) in set.kinds.iter_mut().zip(set.factors.iter()) {
        *kind = windows.orbital_kind(factor);
    }
    Ok((set, fit))
}

/// Alternating power iteration maximizing `|<x (x) y (x) z, Psi>|`.
fn refine_product_fit(
    tensor: &ndarray::ArrayViewD<Complex64>,
    mut factors: [Array1<Complex64>; 3],
    opts: &FitOptions,
) -> [Array1<Complex64>; 3] {
    let n = tensor.shape()[0];
    let mut last = 0.0f64;
    for _ in 0..opts.max_iters {
        for leg in 0..3 {
            let (y, z) = match leg {
                0 => (&factors[1], &factors[2]),
                1 => (&factors[0], &factors[2]),
                _ => (&factors[0], &factors[1]),
            };
            let mut w = Array1::<Complex64>::zeros(n);
            for (idx, &v) in tensor.indexed_iter() {
                let idx = idx.as_array_view();
                let (a, b, c) = (idx[0], idx[1], idx[2]);
                let (slot, ob, oc) = match leg {
                    0 => (a, b, c),
                    1 => (b, a, c),
                    _ => (c, a, b),
                };
                w[slot] += v * y[ob].conj() * z[oc].conj();
            }
            let wn = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if wn < 1e-300 {
                return factors;
            }
            factors[leg] = w.mapv(|x| x / wn);
        }
        // unnormalized objective after the sweep; wn of the last leg equals it
        let score: Complex64 = {
            let mut acc = Complex64::new(0.0, 0.0);
            for (idx, &v) in tensor.indexed_iter() {
                let idx = idx.as_array_view();
                acc += v
                    * factors[0][idx[0]].conj()
                    * factors[1][idx[1]].conj()
                    * factors[2][idx[2]].conj();
            }
            acc
        };
        let now = score.norm();
        if (now - last).abs() <= opts.tol * now.max(1e-300) {
            break;
        }
        last = now;
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_basis;
    use approx::assert_abs_diff_eq;

    fn site_vector(n: usize, s: usize) -> Array1<Complex64> {
        let mut v = Array1::zeros(n);
        v[s] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn site_basis_symmetric_product_is_unit_tuple() {
        let map = enumerate_basis(3, 3).unwrap();
        let set = FactorSet::new([site_vector(3, 0), site_vector(3, 1), site_vector(3, 2)]).unwrap();
        let v = symmetric_product(&set, &map).unwrap();
        assert_eq!(v.len(), 1);
        assert_abs_diff_eq!(v[0].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn site_basis_fermionic_product_is_unit_tuple() {
        let map = enumerate_basis(3, 3).unwrap();
        let set = FactorSet::new([site_vector(3, 0), site_vector(3, 1), site_vector(3, 2)]).unwrap();
        let v = fermionic_product(&set, &map).unwrap();
        assert_abs_diff_eq!(v[0].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn parallel_factors_annihilate_fermionic() {
        let map = enumerate_basis(5, 3).unwrap();
        let u = Array1::from_iter((0..5).map(|i| Complex64::new((i as f64 + 0.3).cos(), 0.1)));
        let set = FactorSet::new([u.clone(), u.clone(), site_vector(5, 4)]).unwrap();
        assert!(matches!(
            fermionic_product(&set, &map),
            Err(Error::DegenerateProjection { .. })
        ));
    }

    #[test]
    fn symmetric_product_permutation_invariant() {
        let map = enumerate_basis(6, 3).unwrap();
        let u1 = Array1::from_iter((0..6).map(|i| Complex64::new((i as f64).sin() + 0.2, 0.0)));
        let u2 = Array1::from_iter((0..6).map(|i| Complex64::new(0.1, (i as f64 * 0.5).cos())));
        let u3 = Array1::from_iter((0..6).map(|i| Complex64::new(0.7 - 0.1 * i as f64, 0.05)));
        let a = FactorSet::new([u1.clone(), u2.clone(), u3.clone()]).unwrap();
        let b = FactorSet::new([u3, u1, u2]).unwrap();
        let va = symmetric_product(&a, &map).unwrap();
        let vb = symmetric_product(&b, &map).unwrap();
        assert!(overlap(&va, &vb).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn fermionic_product_antisymmetric_up_to_sign() {
        let map = enumerate_basis(6, 3).unwrap();
        let u1 = Array1::from_iter((0..6).map(|i| Complex64::new((i as f64).sin() + 0.2, 0.0)));
        let u2 = Array1::from_iter((0..6).map(|i| Complex64::new(0.1, (i as f64 * 0.5).cos())));
        let u3 = Array1::from_iter((0..6).map(|i| Complex64::new(0.7 - 0.1 * i as f64, 0.05)));
        let a = FactorSet::new([u1.clone(), u2.clone(), u3.clone()]).unwrap();
        let b = FactorSet::new([u2, u1, u3]).unwrap();
        let va = fermionic_product(&a, &map).unwrap();
        let vb = fermionic_product(&b, &map).unwrap();
        // swapped factors flip the sign; overlap (phase-invariant) stays 1
        assert!(overlap(&va, &vb).unwrap() > 1.0 - 1e-12);
        for (x, y) in va.iter().zip(vb.iter()) {
            assert!((x + y).norm() < 1e-12);
        }
    }

    #[test]
    fn overlap_basics() {
        let a = Array1::from(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]);
        assert_abs_diff_eq!(overlap(&a, &a).unwrap(), 1.0, epsilon = 1e-14);
        let b = Array1::from(vec![Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.0)]);
        // <a, b> = conj(1)*2i + conj(2i)*1 = 2i - 2i = 0
        assert_abs_diff_eq!(overlap(&a, &b).unwrap(), 0.0, epsilon = 1e-14);
        let scaled = a.mapv(|z| z * Complex64::from_polar(2.0, 0.8));
        assert_abs_diff_eq!(overlap(&a, &scaled).unwrap(), 1.0, epsilon = 1e-14);
        let zero: Array1<Complex64> = Array1::zeros(2);
        assert!(matches!(overlap(&a, &zero), Err(Error::ZeroVector)));
        let short: Array1<Complex64> = Array1::zeros(1);
        assert!(matches!(overlap(&a, &short), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn extract_factors_unit_tuple() {
        let map = enumerate_basis(4, 3).unwrap();
        let mut state = Array1::zeros(map.size());
        state[0] = Complex64::new(1.0, 0.0);
        let (_, fit) = extract_factors(&state, &map).unwrap();
        assert!(fit > 1.0 - 1e-9, "fit {fit}");
    }

    #[test]
    fn extract_factors_roundtrip_orthonormal() {
        // symmetric product of three orthonormal standing waves
        let n = 8;
        let map = enumerate_basis(n, 3).unwrap();
        let wave = |q: usize| -> Array1<Complex64> {
            let kq = std::f64::consts::PI * (q as f64 + 1.0) / (n as f64 + 1.0);
            let v: Array1<Complex64> = Array1::from_iter(
                (0..n).map(|j| Complex64::new((kq * (j as f64 + 1.0)).sin(), 0.0)),
            );
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.mapv(|z| z / norm)
        };
        let set = FactorSet::new([wave(0), wave(1), wave(2)]).unwrap();
        let state = symmetric_product(&set, &map).unwrap();
        let (recovered, fit) = extract_factors(&state, &map).unwrap();
        assert!(fit >= 0.99, "fit {fit}");
        // recovered factors span the same 3-space
        let span = overlap_with_span(&set.factors[0], &recovered.factors.to_vec()).unwrap();
        assert!(span > 0.95, "span {span}");
    }

    #[test]
    fn overlap_with_span_projects() {
        let e0 = site_vector(4, 0);
        let e1 = site_vector(4, 1);
        let mixed = Array1::from(vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let w = overlap_with_span(&mixed, &[e0, e1]).unwrap();
        assert_abs_diff_eq!(w, 1.0, epsilon = 1e-12);
    }
}
