//! Scalar and vector diagnostics of an eigenstate: decay rate, inverse
//! participation ratio, entanglement entropy, one-photon marginal and the
//! full probability cube.

use crate::basis::{self, BasisMap};
use crate::classifier::StateLabel;
use crate::error::{Error, Result};
use crate::spectra::EigenPair;
use ndarray::{Array1, Array2, ArrayD, ArrayView1, ArrayViewD, Axis};
use ndarray_linalg::SVD;
use num_complex::Complex64;

/// Inverse participation ratio `sum |psi|^4 / (sum |psi|^2)^2`.
///
/// Scale invariant; 1 for a single occupied component, `1/M` for a uniform
/// spread over `M` components.
pub fn ipr(vector: &ArrayView1<Complex64>) -> Result<f64> {
    let mut p2 = 0.0f64;
    let mut p4 = 0.0f64;
    for z in vector.iter() {
        let m = z.norm_sqr();
        p2 += m;
        p4 += m * m;
    }
    if p2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(p4 / (p2 * p2))
}

/// Radiative decay rate `Gamma = -Im eps` of an eigenstate (units of
/// `gamma0`).
pub fn decay_rate(eigen: &EigenPair) -> f64 {
    -eigen.energy_per_photon.im
}

/// Schmidt weights and von Neumann entropy of the one-photon reduced density
/// matrix.
///
/// The reduced state is expanded to the full tensor, matricized over one leg
/// against the rest, and the singular values `sigma` of that `N x N^(k-1)`
/// matrix give the weights `p = sigma^2 / sum sigma^2` and the entropy
/// `S = -sum p ln p` (nats). By permutation symmetry of the tensor the
/// choice of leg does not matter.
pub fn entanglement_entropy(
    state: &Array1<Complex64>,
    map: &BasisMap,
) -> Result<(f64, Vec<f64>)> {
    if !(2..=3).contains(&map.k()) {
        return Err(Error::InvalidArity(map.k()));
    }
    if state.iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::ZeroVector);
    }
    let tensor = basis::symmetrize_to_full(state, map)?;
    entropy_of_tensor(&tensor.view(), 0)
}

/// Entropy of an arbitrary rank-k tensor, matricizing leg `leg` against the
/// rest. Exposed for the leg-independence checks.
pub fn entropy_of_tensor(tensor: &ArrayViewD<Complex64>, leg: usize) -> Result<(f64, Vec<f64>)> {
    let k = tensor.ndim();
    let n = tensor.shape()[0];
    let mut order: Vec<usize> = Vec::with_capacity(k);
    order.push(leg);
    order.extend((0..k).filter(|&a| a != leg));
    let permuted: ArrayD<Complex64> = tensor.view().permuted_axes(order.as_slice()).to_owned();
    let flat: Vec<Complex64> = permuted.iter().copied().collect();
    let mat = Array2::from_shape_vec((n, flat.len() / n), flat).expect("contiguous tensor");
    let (_, sigma, _) = mat.svd(false, false).map_err(|e| Error::SolverFailure {
        detail: format!("svd failed: {e}"),
        unconverged_lo: 0,
        unconverged_hi: n,
    })?;
    let total: f64 = sigma.iter().map(|s| s * s).sum();
    if total == 0.0 {
        return Err(Error::ZeroVector);
    }
    let weights: Vec<f64> = sigma.iter().map(|s| s * s / total).collect();
    let entropy = -weights
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>();
    Ok((entropy, weights))
}

/// One-photon position distribution `P_a = sum_bc |psi_abc|^2`.
pub fn marginal(state: &Array1<Complex64>, map: &BasisMap) -> Result<Array1<f64>> {
    if map.k() != 3 {
        return Err(Error::InvalidArity(map.k()));
    }
    let total: f64 = state.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut p = Array1::zeros(map.n_atoms());
    // each tuple spreads |v|^2 equally over its three sites
    for (t, v) in map.tuples().iter().zip(state.iter()) {
        let w = v.norm_sqr() / (3.0 * total);
        for &s in t.sites() {
            p[s] += w;
        }
    }
    Ok(p)
}

/// `|psi_abc|^2` on the full `N x N x N` grid, normalized to unit total mass.
#[derive(Debug, Clone)]
pub struct ProbabilityCube {
    pub n: usize,
    pub values: ArrayD<f64>,
    /// Total mass before normalization (1 for a unit-norm state).
    pub normalization: f64,
}

impl ProbabilityCube {
    pub fn value(&self, a: usize, b: usize, c: usize) -> f64 {
        self.values[&[a, b, c][..]]
    }
}

pub fn probability_cube(state: &Array1<Complex64>, map: &BasisMap) -> Result<ProbabilityCube> {
    if map.k() != 3 {
        return Err(Error::InvalidArity(map.k()));
    }
    if state.iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::ZeroVector);
    }
    let tensor = basis::symmetrize_to_full(state, map)?;
    let mut values = tensor.mapv(|z| z.norm_sqr());
    let normalization: f64 = values.sum();
    values.mapv_inplace(|v| v / normalization);
    Ok(ProbabilityCube {
        n: map.n_atoms(),
        values,
        normalization,
    })
}

/// One eigenstate with its observable bundle.
#[derive(Debug, Clone)]
pub struct StateRecord {
    pub index: usize,
    pub eigen: EigenPair,
    pub decay_rate: f64,
    pub ipr: f64,
    pub entropy: f64,
    pub marginal: Array1<f64>,
    pub labels: StateLabel,
}

/// Compute the observable bundle for one eigenpair; labels start out
/// unassigned and are filled by the classifier.
pub fn state_record(index: usize, eigen: &EigenPair, map: &BasisMap) -> Result<StateRecord> {
    let ipr = ipr(&eigen.vector.view())?;
    let (entropy, _) = entanglement_entropy(&eigen.vector, map)?;
    let marginal = marginal(&eigen.vector, map)?;
    Ok(StateRecord {
        index,
        eigen: eigen.clone(),
        decay_rate: decay_rate(eigen),
        ipr,
        entropy,
        marginal,
        labels: StateLabel::default(),
    })
}

/// Leg-resolved marginal of an explicit tensor (used for symmetry checks).
pub fn marginal_of_tensor(values: &ArrayViewD<f64>, leg: usize) -> Array1<f64> {
    let k = values.ndim();
    let mut acc = values.to_owned();
    // sum out every axis except `leg`, from the back so indices stay valid
    for axis in (0..k).rev() {
        if axis != leg {
            acc = acc.sum_axis(Axis(axis));
        }
    }
    let flat: Vec<f64> = acc.iter().copied().collect();
    Array1::from(flat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_basis;
    use approx::assert_abs_diff_eq;
    use ndarray::IxDyn;

    fn unit_state(map: &BasisMap, idx: usize) -> Array1<Complex64> {
        let mut v = Array1::zeros(map.size());
        v[idx] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn ipr_trivial_cases() {
        let single = Array1::from(vec![Complex64::new(0.0, 3.0)]);
        assert_abs_diff_eq!(ipr(&single.view()).unwrap(), 1.0, epsilon = 1e-15);

        let uniform = Array1::from(vec![Complex64::new(0.5, 0.0); 4]);
        assert_abs_diff_eq!(ipr(&uniform.view()).unwrap(), 0.25, epsilon = 1e-15);

        // two of M components, scaled by 7: still 0.5
        let mut two = Array1::zeros(6);
        two[1] = Complex64::new(7.0, 0.0);
        two[4] = Complex64::new(0.0, 7.0);
        assert_abs_diff_eq!(ipr(&two.view()).unwrap(), 0.5, epsilon = 1e-15);

        let zero: Array1<Complex64> = Array1::zeros(3);
        assert!(matches!(ipr(&zero.view()), Err(Error::ZeroVector)));
    }

    #[test]
    fn decay_rate_examples() {
        let mk = |re, im| EigenPair {
            energy_per_photon: Complex64::new(re, im),
            raw_energy: Complex64::new(3.0 * re, 3.0 * im),
            vector: Array1::zeros(1),
            residual: 0.0,
        };
        assert_abs_diff_eq!(decay_rate(&mk(10.7298, -37.58969)), 37.58969, epsilon = 1e-12);
        assert_abs_diff_eq!(decay_rate(&mk(-0.010, -2.272e-8)), 2.272e-8, epsilon = 1e-20);
        assert_abs_diff_eq!(decay_rate(&mk(1.5, 0.0)), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn product_state_has_zero_entropy() {
        // symmetrized u (x) u (x) u in the full tensor: rank-1 bipartition
        let n = 5;
        let u: Array1<Complex64> =
            Array1::from_iter((0..n).map(|i| Complex64::new((i as f64 + 1.0).sin(), 0.3 * i as f64)));
        let mut tensor = ArrayD::zeros(IxDyn(&[n, n, n]));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    tensor[&[a, b, c][..]] = u[a] * u[b] * u[c];
                }
            }
        }
        let (s, weights) = entropy_of_tensor(&tensor.view(), 0).unwrap();
        assert!(s < 1e-10, "entropy {s}");
        assert_abs_diff_eq!(weights[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn slater_state_has_entropy_ln3() {
        // antisymmetric combination of orbitals e0, e1, e2 at N=6
        let n = 6;
        let map = enumerate_basis(n, 3).unwrap();
        let mut tensor = ArrayD::zeros(IxDyn(&[n, n, n]));
        let perms: [([usize; 3], f64); 6] = [
            ([0, 1, 2], 1.0),
            ([0, 2, 1], -1.0),
            ([1, 0, 2], -1.0),
            ([1, 2, 0], 1.0),
            ([2, 0, 1], 1.0),
            ([2, 1, 0], -1.0),
        ];
        let w = Complex64::new(1.0 / 6.0f64.sqrt(), 0.0);
        for (p, sign) in perms {
            tensor[&p[..]] = w * sign;
        }
        let (s, weights) = entropy_of_tensor(&tensor.view(), 0).unwrap();
        assert_abs_diff_eq!(s, 3.0f64.ln(), epsilon = 1e-10);
        for expected in weights.iter().take(3) {
            assert_abs_diff_eq!(*expected, 1.0 / 3.0, epsilon = 1e-10);
        }
        let _ = map;
    }

    #[test]
    fn entropy_leg_independent() {
        let map = enumerate_basis(6, 3).unwrap();
        let state = Array1::from_iter(
            (0..map.size()).map(|i| Complex64::new((i as f64).cos(), (0.7 * i as f64).sin())),
        );
        let tensor = basis::symmetrize_to_full(&state, &map).unwrap();
        let (s0, _) = entropy_of_tensor(&tensor.view(), 0).unwrap();
        let (s1, _) = entropy_of_tensor(&tensor.view(), 1).unwrap();
        let (s2, _) = entropy_of_tensor(&tensor.view(), 2).unwrap();
        assert_abs_diff_eq!(s0, s1, epsilon = 1e-10);
        assert_abs_diff_eq!(s0, s2, epsilon = 1e-10);
    }

    #[test]
    fn entropy_scale_and_phase_invariant() {
        let map = enumerate_basis(5, 3).unwrap();
        let state = Array1::from_iter(
            (0..map.size()).map(|i| Complex64::new((i as f64).cos(), (0.3 * i as f64).sin())),
        );
        let (s, _) = entanglement_entropy(&state, &map).unwrap();
        let scaled = state.mapv(|z| z * Complex64::from_polar(7.0, 1.2));
        let (s2, _) = entanglement_entropy(&scaled, &map).unwrap();
        assert_abs_diff_eq!(s, s2, epsilon = 1e-12);
    }

    #[test]
    fn marginal_of_unit_tuple() {
        let map = enumerate_basis(4, 3).unwrap();
        let v = unit_state(&map, 0); // (0,1,2)
        let p = marginal(&v, &map).unwrap();
        for site in 0..3 {
            assert_abs_diff_eq!(p[site], 1.0 / 3.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(p[3], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn marginal_uniform_superposition() {
        let map = enumerate_basis(4, 3).unwrap();
        let v = Array1::from(vec![Complex64::new(0.5, 0.0); 4]);
        let p = marginal(&v, &map).unwrap();
        for site in 0..4 {
            assert_abs_diff_eq!(p[site], 0.25, epsilon = 1e-14);
        }
    }

    #[test]
    fn marginal_sums_to_one() {
        let map = enumerate_basis(7, 3).unwrap();
        let state = Array1::from_iter(
            (0..map.size()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.2).cos())),
        );
        let p = marginal(&state, &map).unwrap();
        assert_abs_diff_eq!(p.sum(), 1.0, epsilon = 1e-10);
        // matches the tensor-level marginal on any leg
        let tensor = basis::symmetrize_to_full(&state, &map).unwrap();
        let norm: f64 = tensor.iter().map(|z| z.norm_sqr()).sum();
        let dens = tensor.mapv(|z| z.norm_sqr() / norm);
        for leg in 0..3 {
            let pt = marginal_of_tensor(&dens.view(), leg);
            for (a, b) in p.iter().zip(pt.iter()) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cube_of_unit_tuple() {
        let map = enumerate_basis(4, 3).unwrap();
        let v = unit_state(&map, 0);
        let cube = probability_cube(&v, &map).unwrap();
        let w = 1.0 / 6.0;
        assert_abs_diff_eq!(cube.value(0, 1, 2), w, epsilon = 1e-14);
        assert_abs_diff_eq!(cube.value(2, 1, 0), w, epsilon = 1e-14);
        assert_abs_diff_eq!(cube.values.sum(), 1.0, epsilon = 1e-12);
        // hard-core: coincident entries vanish
        for m in 0..4 {
            for x in 0..4 {
                assert_eq!(cube.value(m, m, x), 0.0);
            }
        }
    }
}
