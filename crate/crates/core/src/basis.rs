//! Combinatorial indexing of the k-excitation hard-core subspace.
//!
//! A hard-core k-photon state is stored on one representative per unordered
//! site tuple: the strictly increasing tuple `a < b < c` (0-based site
//! indices). Strict ordering enforces both bosonic symmetry and photon
//! blockade at once, giving a reduced basis of `C(N, k)` states instead of
//! the full `N^k` tensor basis.

use crate::error::{Error, Result};
use ndarray::{Array1, ArrayD, ArrayViewD, IxDyn};
use num_complex::Complex64;

pub const MAX_EXCITATIONS: usize = 3;

/// Strictly increasing tuple of `k` occupied sites, `k` in `{1, 2, 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationTuple {
    sites: [usize; MAX_EXCITATIONS],
    k: usize,
}

impl OccupationTuple {
    pub fn new(sites: &[usize]) -> Result<Self> {
        let k = sites.len();
        if k == 0 || k > MAX_EXCITATIONS {
            return Err(Error::InvalidArity(k));
        }
        if !sites.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidParams(format!(
                "occupation tuple must be strictly increasing, got {sites:?}"
            )));
        }
        let mut buf = [0usize; MAX_EXCITATIONS];
        buf[..k].copy_from_slice(sites);
        Ok(OccupationTuple { sites: buf, k })
    }

    #[inline]
    pub fn sites(&self) -> &[usize] {
        &self.sites[..self.k]
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Image of the tuple under the site reversal `i -> N - 1 - i`,
    /// re-sorted into canonical order.
    pub fn mirrored(&self, n_atoms: usize) -> Self {
        let mut buf = [0usize; MAX_EXCITATIONS];
        for (slot, &s) in buf[..self.k].iter_mut().zip(self.sites().iter().rev()) {
            *slot = n_atoms - 1 - s;
        }
        OccupationTuple {
            sites: buf,
            k: self.k,
        }
    }
}

/// Binomial coefficient, exact in u64 for the sizes used here (N <= ~1000).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Bijection between occupation tuples and dense indices `0..C(N, k)`.
///
/// Tuples are ordered lexicographically, so dense indices are ascending in
/// tuple order and file output is reproducible.
#[derive(Debug, Clone)]
pub struct BasisMap {
    n_atoms: usize,
    k: usize,
    tuples: Vec<OccupationTuple>,
}

impl BasisMap {
    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        self.tuples.len()
    }

    /// Full tensor dimension `N^k`.
    pub fn tensor_len(&self) -> usize {
        self.n_atoms.pow(self.k as u32)
    }

    /// Dense index of a tuple (lexicographic rank).
    pub fn forward(&self, tuple: &OccupationTuple) -> usize {
        debug_assert_eq!(tuple.k(), self.k);
        let n = self.n_atoms;
        let k = self.k;
        let mut rank = 0usize;
        let mut prev = 0usize; // smallest site the current slot may hold
        for (slot, &site) in tuple.sites().iter().enumerate() {
            for skipped in prev..site {
                rank += binomial(n - 1 - skipped, k - 1 - slot);
            }
            prev = site + 1;
        }
        rank
    }

    /// Tuple at a dense index.
    pub fn inverse(&self, index: usize) -> &OccupationTuple {
        &self.tuples[index]
    }

    pub fn tuples(&self) -> &[OccupationTuple] {
        &self.tuples
    }
}

/// Enumerate the reduced basis of `C(N, k)` strictly increasing tuples.
pub fn enumerate_basis(n_atoms: usize, k: usize) -> Result<BasisMap> {
    if k == 0 || k > MAX_EXCITATIONS {
        return Err(Error::InvalidArity(k));
    }
    if n_atoms < k {
        return Err(Error::TooFewAtoms { n: n_atoms, k });
    }
    let size = binomial(n_atoms, k);
    let mut tuples = Vec::with_capacity(size);
    match k {
        1 => {
            for a in 0..n_atoms {
                tuples.push(OccupationTuple::new(&[a]).unwrap());
            }
        }
        2 => {
            for a in 0..n_atoms {
                for b in a + 1..n_atoms {
                    tuples.push(OccupationTuple::new(&[a, b]).unwrap());
                }
            }
        }
        3 => {
            for a in 0..n_atoms {
                for b in a + 1..n_atoms {
                    for c in b + 1..n_atoms {
                        tuples.push(OccupationTuple::new(&[a, b, c]).unwrap());
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    debug_assert_eq!(tuples.len(), size);
    Ok(BasisMap {
        n_atoms,
        k,
        tuples,
    })
}

fn permutations(k: usize) -> &'static [&'static [usize]] {
    match k {
        1 => &[&[0]],
        2 => &[&[0, 1], &[1, 0]],
        3 => &[
            &[0, 1, 2],
            &[0, 2, 1],
            &[1, 0, 2],
            &[1, 2, 0],
            &[2, 0, 1],
            &[2, 1, 0],
        ],
        _ => unreachable!(),
    }
}

/// Expand a reduced amplitude vector into the full `N^k` tensor.
///
/// Each amplitude `v` spreads as `v / sqrt(k!)` over the `k!` permutations of
/// its tuple; entries with repeated site indices stay zero. The map is an
/// isometry: the Euclidean norm is preserved.
pub fn symmetrize_to_full(reduced: &Array1<Complex64>, map: &BasisMap) -> Result<ArrayD<Complex64>> {
    if reduced.len() != map.size() {
        return Err(Error::LengthMismatch {
            expected: map.size(),
            got: reduced.len(),
        });
    }
    let n = map.n_atoms();
    let k = map.k();
    let norm = 1.0 / factorial(k).sqrt();
    let mut tensor = ArrayD::zeros(IxDyn(&vec![n; k]));
    let mut idx = [0usize; MAX_EXCITATIONS];
    for (t, &v) in map.tuples().iter().zip(reduced.iter()) {
        let spread = v * norm;
        for perm in permutations(k) {
            for (slot, &p) in perm.iter().enumerate() {
                idx[slot] = t.sites()[p];
            }
            tensor[&idx[..k]] = spread;
        }
    }
    Ok(tensor)
}

/// Collapse a permutation-symmetric, zero-diagonal tensor back to the
/// reduced basis. Left inverse of [`symmetrize_to_full`].
pub fn reduce_from_full(tensor: &ArrayViewD<Complex64>, map: &BasisMap) -> Result<Array1<Complex64>> {
    let n = map.n_atoms();
    let k = map.k();
    if tensor.shape() != vec![n; k].as_slice() {
        return Err(Error::LengthMismatch {
            expected: map.tensor_len(),
            got: tensor.len(),
        });
    }
    check_hardcore_symmetry(tensor, k)?;
    let norm = 1.0 / factorial(k).sqrt();
    let mut reduced = Array1::zeros(map.size());
    let mut idx = [0usize; MAX_EXCITATIONS];
    for (r, t) in map.tuples().iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for perm in permutations(k) {
            for (slot, &p) in perm.iter().enumerate() {
                idx[slot] = t.sites()[p];
            }
            acc += tensor[&idx[..k]];
        }
        reduced[r] = acc * norm / factorial(k);
    }
    Ok(reduced)
}

/// Tolerance for the symmetry / zero-diagonal preconditions of
/// [`reduce_from_full`], relative to the tensor norm.
pub const REDUCE_TOL: f64 = 1e-10;

fn check_hardcore_symmetry(tensor: &ArrayViewD<Complex64>, k: usize) -> Result<()> {
    let scale = tensor.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = REDUCE_TOL * scale.max(1.0);
    let mut max_asym = 0.0f64;
    for (idx, &v) in tensor.indexed_iter() {
        let idx = idx.as_array_view();
        let has_repeat = (0..k).any(|i| (i + 1..k).any(|j| idx[i] == idx[j]));
        if has_repeat {
            if v.norm() > tol {
                return Err(Error::NonzeroDoubleOccupancy { magnitude: v.norm() });
            }
            continue;
        }
        // compare against the canonically sorted representative
        let mut sorted = [0usize; MAX_EXCITATIONS];
        for (slot, &s) in sorted[..k].iter_mut().zip(idx.iter()) {
            *slot = s;
        }
        sorted[..k].sort_unstable();
        let rep = tensor[&sorted[..k]];
        max_asym = max_asym.max((v - rep).norm());
    }
    if max_asym > tol {
        return Err(Error::NotSymmetric { max_dev: max_asym });
    }
    Ok(())
}

fn factorial(k: usize) -> f64 {
    (1..=k).product::<usize>() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn enumeration_is_lexicographic() {
        let map = enumerate_basis(4, 3).unwrap();
        assert_eq!(map.size(), 4);
        let expect: [&[usize]; 4] = [&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]];
        for (i, sites) in expect.iter().enumerate() {
            assert_eq!(map.inverse(i).sites(), *sites);
            assert_eq!(map.forward(&OccupationTuple::new(sites).unwrap()), i);
        }
    }

    #[test]
    fn sizes() {
        assert_eq!(enumerate_basis(42, 3).unwrap().size(), 11480);
        assert_eq!(enumerate_basis(3, 2).unwrap().size(), 3);
        assert_eq!(enumerate_basis(60, 3).unwrap().size(), 34220);
        assert_eq!(enumerate_basis(5, 1).unwrap().size(), 5);
    }

    #[test]
    fn arity_and_size_guards() {
        assert!(matches!(enumerate_basis(5, 0), Err(Error::InvalidArity(0))));
        assert!(matches!(enumerate_basis(5, 4), Err(Error::InvalidArity(4))));
        assert!(matches!(
            enumerate_basis(2, 3),
            Err(Error::TooFewAtoms { n: 2, k: 3 })
        ));
    }

    #[test]
    fn bijection_exhaustive_small() {
        for n in 1..=12 {
            for k in 1..=3.min(n) {
                let map = enumerate_basis(n, k).unwrap();
                for i in 0..map.size() {
                    assert_eq!(map.forward(map.inverse(i)), i, "n={n} k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn bijection_spot_check_large() {
        let map = enumerate_basis(60, 3).unwrap();
        for i in [0, 1, 17, 9999, 34219] {
            assert_eq!(map.forward(map.inverse(i)), i);
        }
    }

    #[test]
    fn unit_tuple_symmetrizes_to_six_entries() {
        let map = enumerate_basis(4, 3).unwrap();
        let mut v = Array1::zeros(map.size());
        v[0] = Complex64::new(1.0, 0.0);
        let tensor = symmetrize_to_full(&v, &map).unwrap();
        let w = 1.0 / 6.0f64.sqrt();
        let mut nonzero = 0;
        for (idx, &val) in tensor.indexed_iter() {
            let idx = idx.as_array_view();
            let mut s: Vec<usize> = idx.iter().copied().collect();
            s.sort_unstable();
            if s == [0, 1, 2] {
                assert_abs_diff_eq!(val.re, w, epsilon = 1e-15);
                assert_abs_diff_eq!(val.im, 0.0, epsilon = 1e-15);
                nonzero += 1;
            } else {
                assert_eq!(val, Complex64::new(0.0, 0.0));
            }
        }
        assert_eq!(nonzero, 6);
    }

    #[test]
    fn k1_symmetrize_is_identity() {
        let map = enumerate_basis(5, 1).unwrap();
        let v = Array1::from_iter((0..5).map(|i| Complex64::new(i as f64, -(i as f64))));
        let tensor = symmetrize_to_full(&v, &map).unwrap();
        for i in 0..5 {
            assert_eq!(tensor[&[i][..]], v[i]);
        }
    }

    #[test]
    fn k2_reduce_example() {
        let map = enumerate_basis(2, 2).unwrap();
        let mut tensor = ArrayD::zeros(IxDyn(&[2, 2]));
        let w = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
        tensor[&[0usize, 1][..]] = w;
        tensor[&[1usize, 0][..]] = w;
        let reduced = reduce_from_full(&tensor.view(), &map).unwrap();
        assert_abs_diff_eq!(reduced[0].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn double_occupancy_is_rejected() {
        let map = enumerate_basis(3, 3).unwrap();
        let mut v = Array1::zeros(map.size());
        v[0] = Complex64::new(1.0, 0.0);
        let mut tensor = symmetrize_to_full(&v, &map).unwrap();
        tensor[&[0usize, 0, 1][..]] = Complex64::new(1e-3, 0.0);
        assert!(matches!(
            reduce_from_full(&tensor.view(), &map),
            Err(Error::NonzeroDoubleOccupancy { .. })
        ));
    }

    #[test]
    fn asymmetric_tensor_is_rejected() {
        let map = enumerate_basis(3, 2).unwrap();
        let mut tensor = ArrayD::zeros(IxDyn(&[3, 3]));
        tensor[&[0usize, 1][..]] = Complex64::new(1.0, 0.0);
        tensor[&[1usize, 0][..]] = Complex64::new(0.5, 0.0);
        assert!(matches!(
            reduce_from_full(&tensor.view(), &map),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn mirror_involution() {
        let map = enumerate_basis(7, 3).unwrap();
        for t in map.tuples() {
            let m = t.mirrored(7);
            assert!(m.sites().windows(2).all(|w| w[0] < w[1]));
            assert_eq!(m.mirrored(7), *t);
        }
    }

    proptest! {
        #[test]
        fn round_trip_is_identity(n in 3usize..9, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for k in 1..=3usize {
                let map = enumerate_basis(n, k).unwrap();
                let v = Array1::from_iter(
                    (0..map.size()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))),
                );
                let tensor = symmetrize_to_full(&v, &map).unwrap();
                // isometry
                let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                let nt: f64 = tensor.iter().map(|z| z.norm_sqr()).sum();
                prop_assert!((nv - nt).abs() <= 1e-12 * nv.max(1.0));
                let back = reduce_from_full(&tensor.view(), &map).unwrap();
                for (a, b) in v.iter().zip(back.iter()) {
                    prop_assert!((a - b).norm() <= 1e-12);
                }
            }
        }
    }
}
