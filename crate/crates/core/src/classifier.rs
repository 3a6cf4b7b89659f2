//! Eigenstate taxonomy: radiance, region labels, localisation counting and
//! the exotic-state detectors (trimers, corner states, trimer edge states,
//! asymmetric localisation).
//!
//! All thresholds live in [`ClassifierConfig`]. The region boundaries are
//! reproduction aids calibrated once and frozen with a version number; they
//! are heuristics, not derived quantities.

use crate::ansatz::{self, FactorKind, FitOptions};
use crate::basis::BasisMap;
use crate::error::{Error, Result};
use crate::hamiltonian::KPhotonHamiltonian;
use crate::model::ModelParams;
use crate::observables::{self, ProbabilityCube, StateRecord};
use crate::spectra::{self, SpectrumResult};
use ndarray::Array1;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Collective decay class relative to the single-atom rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Radiance {
    Superradiant,
    Subradiant,
    Ordinary,
}

/// Coarse region of the entropy map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Fermionic,
    Chaotic,
    Localized,
    Scattering,
    Unassigned,
}

/// Photon counts per localisation window; always sums to 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalisationSignature {
    pub n_edge: u8,
    pub n_centre: u8,
    pub n_free: u8,
}

impl LocalisationSignature {
    pub fn free() -> Self {
        LocalisationSignature {
            n_edge: 0,
            n_centre: 0,
            n_free: 3,
        }
    }

    pub fn localized_photons(&self) -> u8 {
        self.n_edge + self.n_centre
    }
}

/// Edge and centre windows of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Windows {
    pub n_atoms: usize,
    /// Window width in sites.
    pub width: usize,
    /// Probability mass inside a window above which a single-polariton
    /// orbital counts as localized there.
    pub factor_mass: f64,
}

impl Windows {
    /// Scale-free default: `w = ceil(N / 10)`.
    pub fn default_for(n_atoms: usize) -> Self {
        Windows {
            n_atoms,
            width: n_atoms.div_ceil(10),
            factor_mass: 0.55,
        }
    }

    fn edge_sites(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width.min(self.n_atoms))
            .chain(self.n_atoms.saturating_sub(self.width)..self.n_atoms)
    }

    fn centre_sites(&self) -> impl Iterator<Item = usize> + '_ {
        let start = (self.n_atoms - self.width.min(self.n_atoms)) / 2;
        start..start + self.width.min(self.n_atoms)
    }

    pub fn edge_mass(&self, density: &Array1<f64>) -> f64 {
        self.edge_sites().map(|s| density[s]).sum()
    }

    pub fn centre_mass(&self, density: &Array1<f64>) -> f64 {
        self.centre_sites().map(|s| density[s]).sum()
    }

    /// Localisation-window test for one single-polariton orbital.
    pub fn orbital_kind(&self, orbital: &Array1<Complex64>) -> FactorKind {
        let total: f64 = orbital.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            return FactorKind::Free;
        }
        let density = orbital.mapv(|z| z.norm_sqr() / total);
        if self.edge_mass(&density) >= self.factor_mass {
            FactorKind::EdgeLocalized
        } else if self.centre_mass(&density) >= self.factor_mass {
            FactorKind::CentreLocalized
        } else {
            FactorKind::Free
        }
    }
}

/// Exponential-decay acceptance thresholds for one detector geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Maximum decay length (sites).
    pub xi_max: f64,
    /// Minimum probability mass inside the near band.
    pub mass_min: f64,
    /// Band width (in the detector's distance coordinate) counted as "near".
    pub band: usize,
}

/// Frozen thresholds for the whole taxonomy. `version` tracks calibration
/// revisions of the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierConfig {
    pub version: u32,
    /// Window width as a fraction of N (rounded up).
    pub window_fraction: f64,
    /// Single-orbital localisation mass threshold.
    pub factor_mass: f64,
    /// `Gamma < subradiance_factor * gamma0` counts as subradiant.
    pub subradiance_factor: f64,
    /// Accepted deviation of `3 * window mass` from an integer count.
    pub count_hysteresis: f64,
    /// IPR above which a state counts as localized.
    pub ipr_localized: f64,
    /// Entropy above which a poorly factorizable state counts as chaotic.
    pub entropy_chaotic: f64,
    /// Product fit at or above which a state is a scattering candidate;
    /// below it a high-entropy state is chaotic.
    pub fit_scattering: f64,
    /// Fermionic label: minimum overlap with the antisymmetric ansatz.
    pub fermionic_min_overlap: f64,
    /// Fermionic label: maximum |Re eps| (near resonance).
    pub fermionic_max_abs_re: f64,
    /// Scattering label: minimum |Re eps| (away from resonance).
    pub scattering_min_abs_re: f64,
    /// Quasi-degeneracy gap for single-photon factor candidates.
    pub degeneracy_gap: f64,
    pub trimer: DecayFit,
    pub corner: DecayFit,
    /// Corner states must not be diagonal-concentrated beyond this.
    pub corner_max_diag_mass: f64,
    pub trimer_edge: DecayFit,
    /// Marginal mass in the edge windows required for a trimer edge state.
    pub trimer_edge_mass: f64,
    /// Mirror-asymmetry threshold on `|P - reverse(P)|_1`.
    pub asymmetry_threshold: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            version: 1,
            window_fraction: 0.1,
            factor_mass: 0.55,
            subradiance_factor: 0.1,
            count_hysteresis: 0.35,
            ipr_localized: 0.02,
            entropy_chaotic: 1.1,
            fit_scattering: 0.5,
            fermionic_min_overlap: 0.5,
            fermionic_max_abs_re: 1.0,
            scattering_min_abs_re: 1.0,
            degeneracy_gap: 1e-9,
            trimer: DecayFit {
                xi_max: 3.0,
                mass_min: 0.8,
                band: 4,
            },
            corner: DecayFit {
                xi_max: 6.0,
                mass_min: 0.6,
                band: 8,
            },
            corner_max_diag_mass: 0.5,
            trimer_edge: DecayFit {
                xi_max: 4.0,
                mass_min: 0.6,
                band: 4,
            },
            trimer_edge_mass: 0.5,
            asymmetry_threshold: 0.2,
        }
    }
}

impl ClassifierConfig {
    pub fn windows(&self, n_atoms: usize) -> Windows {
        Windows {
            n_atoms,
            width: ((n_atoms as f64) * self.window_fraction).ceil() as usize,
            factor_mass: self.factor_mass,
        }
    }
}

/// Radiance classification relative to `gamma0`.
pub fn classify_radiance(decay_rate: f64, params: &ModelParams, config: &ClassifierConfig) -> Radiance {
    if decay_rate > params.gamma0 {
        Radiance::Superradiant
    } else if decay_rate < params.gamma0 * config.subradiance_factor {
        Radiance::Subradiant
    } else {
        Radiance::Ordinary
    }
}

/// Infer photon counts per window from the marginal, cross-checked against
/// the extracted factor labels.
///
/// The marginal estimator rounds `3 * (window mass)` and is trusted when the
/// estimate sits within `count_hysteresis` of an integer; otherwise the
/// factor labels decide. A confident marginal estimate that contradicts the
/// factor labels is reported as ambiguous rather than guessed.
pub fn localisation_count(
    marginal: &Array1<f64>,
    factor_kinds: &[FactorKind; 3],
    windows: &Windows,
    config: &ClassifierConfig,
) -> Result<LocalisationSignature> {
    let edge_est = 3.0 * windows.edge_mass(marginal);
    let centre_est = 3.0 * windows.centre_mass(marginal);
    let round = |est: f64| -> (u8, bool) {
        let n = est.round().clamp(0.0, 3.0);
        ((n as u8), (est - n).abs() <= config.count_hysteresis)
    };
    let (edge_a, edge_confident) = round(edge_est);
    let (centre_a, centre_confident) = round(centre_est);
    let edge_b = factor_kinds
        .iter()
        .filter(|k| matches!(k, FactorKind::EdgeLocalized))
        .count() as u8;
    let centre_b = factor_kinds
        .iter()
        .filter(|k| matches!(k, FactorKind::CentreLocalized))
        .count() as u8;

    let n_edge = if edge_confident && edge_a != edge_b {
        return Err(Error::AmbiguousSignature {
            marginal_edge: edge_a,
            marginal_centre: centre_a,
            factor_edge: edge_b,
            factor_centre: centre_b,
        });
    } else if edge_confident {
        edge_a
    } else {
        edge_b
    };
    let n_centre = if centre_confident && centre_a != centre_b {
        return Err(Error::AmbiguousSignature {
            marginal_edge: edge_a,
            marginal_centre: centre_a,
            factor_edge: edge_b,
            factor_centre: centre_b,
        });
    } else if centre_confident {
        centre_a
    } else {
        centre_b
    };
    if n_edge + n_centre > 3 {
        return Err(Error::AmbiguousSignature {
            marginal_edge: edge_a,
            marginal_centre: centre_a,
            factor_edge: edge_b,
            factor_centre: centre_b,
        });
    }
    Ok(LocalisationSignature {
        n_edge,
        n_centre,
        n_free: 3 - n_edge - n_centre,
    })
}

/// Probability mass per Chebyshev distance `r = max|index difference|` from
/// the main diagonal of the cube. Hard-core states start at `r = 2`.
pub fn diagonal_profile(cube: &ProbabilityCube) -> Vec<f64> {
    let n = cube.n;
    let mut profile = vec![0.0; n];
    for (idx, &v) in cube.values.indexed_iter() {
        let idx = idx.as_array_view();
        let (max, min) = idx
            .iter()
            .fold((0usize, usize::MAX), |(hi, lo), &i| (hi.max(i), lo.min(i)));
        profile[max - min] += v;
    }
    profile
}

/// Probability mass per Chebyshev distance from the cube corner at the given
/// chain end (`false` = site 0, `true` = site N-1).
pub fn corner_profile(cube: &ProbabilityCube, far_end: bool) -> Vec<f64> {
    let n = cube.n;
    let mut profile = vec![0.0; n];
    for (idx, &v) in cube.values.indexed_iter() {
        let idx = idx.as_array_view();
        let d = if far_end {
            n - 1 - idx.iter().copied().min().unwrap()
        } else {
            idx.iter().copied().max().unwrap()
        };
        profile[d] += v;
    }
    profile
}

/// Least-squares exponential fit `m(r) ~ exp(-r / xi)` on the log profile.
///
/// Returns `(xi, rms log residual)`; `None` when fewer than three usable
/// points exist or the profile does not decay.
pub fn fit_exponential(profile: &[f64]) -> Option<(f64, f64)> {
    const FLOOR: f64 = 1e-12;
    let pts: Vec<(f64, f64)> = profile
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > FLOOR)
        .map(|(r, &m)| (r as f64, m.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    if slope >= 0.0 {
        return None;
    }
    let intercept = (sy - slope * sx) / n;
    let rms = (pts
        .iter()
        .map(|&(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Some((-1.0 / slope, rms))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrimerEvidence {
    pub xi: f64,
    pub fit_residual: f64,
    pub diagonal_mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerEvidence {
    pub xi: f64,
    pub fit_residual: f64,
    pub corner_mass: f64,
    /// Which chain end: `false` = site 0, `true` = site N-1.
    pub far_end: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrimerEdgeEvidence {
    pub xi: f64,
    pub diagonal_mass: f64,
    pub edge_mass: f64,
}

fn near_mass(profile: &[f64], band: usize) -> f64 {
    profile.iter().take(band + 1).sum()
}

/// Bound trimer: mass hugging the main diagonal with a short exponential
/// decay length.
pub fn detect_trimer(cube: &ProbabilityCube, fit: &DecayFit) -> Option<TrimerEvidence> {
    let profile = diagonal_profile(cube);
    let diagonal_mass = near_mass(&profile, fit.band);
    if diagonal_mass < fit.mass_min {
        return None;
    }
    let (xi, fit_residual) = fit_exponential(&profile)?;
    if xi > fit.xi_max {
        return None;
    }
    Some(TrimerEvidence {
        xi,
        fit_residual,
        diagonal_mass,
    })
}

/// Corner state: mass decaying exponentially from one corner of the cube
/// (all three photons near the same chain end), distinguished from a trimer
/// by not being diagonal-concentrated.
pub fn detect_corner(
    cube: &ProbabilityCube,
    fit: &DecayFit,
    max_diag_mass: f64,
) -> Option<CornerEvidence> {
    let diag_profile = diagonal_profile(cube);
    // tolerance band mirrors the trimer detector geometry
    if near_mass(&diag_profile, fit.band) >= max_diag_mass {
        return None;
    }
    for far_end in [false, true] {
        let profile = corner_profile(cube, far_end);
        let corner_mass = near_mass(&profile, fit.band);
        if corner_mass < fit.mass_min {
            continue;
        }
        if let Some((xi, fit_residual)) = fit_exponential(&profile) {
            if xi <= fit.xi_max {
                return Some(CornerEvidence {
                    xi,
                    fit_residual,
                    corner_mass,
                    far_end,
                });
            }
        }
    }
    None
}

/// Trimer edge state: trimer geometry plus a marginal concentrated in the
/// edge windows.
pub fn detect_trimer_edge(
    cube: &ProbabilityCube,
    marginal: &Array1<f64>,
    windows: &Windows,
    fit: &DecayFit,
    edge_mass_min: f64,
) -> Option<TrimerEdgeEvidence> {
    let profile = diagonal_profile(cube);
    let diagonal_mass = near_mass(&profile, fit.band);
    if diagonal_mass < fit.mass_min {
        return None;
    }
    let (xi, _) = fit_exponential(&profile)?;
    if xi > fit.xi_max {
        return None;
    }
    let edge_mass = windows.edge_mass(marginal);
    if edge_mass < edge_mass_min {
        return None;
    }
    Some(TrimerEdgeEvidence {
        xi,
        diagonal_mass,
        edge_mass,
    })
}

/// Mirror asymmetry `|P - reverse(P)|_1` of the marginal.
pub fn mirror_asymmetry(marginal: &Array1<f64>) -> f64 {
    let n = marginal.len();
    (0..n).map(|i| (marginal[i] - marginal[n - 1 - i]).abs()).sum()
}

/// Asymmetric localisation test on the marginal.
pub fn detect_asymmetric(marginal: &Array1<f64>, threshold: f64) -> bool {
    mirror_asymmetry(marginal) > threshold
}

/// Overlap scores of one state against the reference ansaetze.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzScores {
    /// Squared overlap with the antisymmetric combination of the three most
    /// subradiant single-photon eigenstates.
    pub fermionic: f64,
    /// Squared overlap with the symmetrized product of the same factors.
    pub symmetric: f64,
    /// Best symmetric-product self-fit from factor extraction.
    pub product_fit: f64,
}

/// Full label bundle for one eigenstate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateLabel {
    pub radiance: Radiance,
    pub region: Region,
    pub localisation: LocalisationSignature,
    /// Set when the localisation estimators disagreed; the signature then
    /// holds the marginal estimate for reporting.
    pub ambiguous_localisation: bool,
    pub scores: AnsatzScores,
    pub trimer: Option<TrimerEvidence>,
    pub corner: Option<CornerEvidence>,
    pub trimer_edge: Option<TrimerEdgeEvidence>,
    pub asymmetry: f64,
    pub asymmetric_localized: bool,
}

impl Default for StateLabel {
    fn default() -> Self {
        StateLabel {
            radiance: Radiance::Ordinary,
            region: Region::Unassigned,
            localisation: LocalisationSignature::free(),
            ambiguous_localisation: false,
            scores: AnsatzScores {
                fermionic: 0.0,
                symmetric: 0.0,
                product_fit: 0.0,
            },
            trimer: None,
            corner: None,
            trimer_edge: None,
            asymmetry: 0.0,
            asymmetric_localized: false,
        }
    }
}

impl StateLabel {
    pub fn exotic_tags(&self) -> Vec<&'static str> {
        let mut tags = Vec::new();
        if self.trimer.is_some() {
            tags.push("trimer");
        }
        if self.corner.is_some() {
            tags.push("corner");
        }
        if self.trimer_edge.is_some() {
            tags.push("trimer_edge");
        }
        if self.asymmetric_localized {
            tags.push("asymmetric");
        }
        tags
    }
}

/// Region assignment from the observable bundle and ansatz scores.
pub fn region_label(
    record: &StateRecord,
    signature: &LocalisationSignature,
    scores: &AnsatzScores,
    params: &ModelParams,
    config: &ClassifierConfig,
) -> Region {
    let re = record.eigen.energy_per_photon.re - params.omega0_offset;
    let subradiant = record.decay_rate < params.gamma0 * config.subradiance_factor;
    if scores.fermionic > scores.symmetric
        && scores.fermionic >= config.fermionic_min_overlap
        && subradiant
        && re.abs() <= config.fermionic_max_abs_re
    {
        return Region::Fermionic;
    }
    if record.ipr >= config.ipr_localized || signature.localized_photons() > 0 {
        return Region::Localized;
    }
    if record.entropy >= config.entropy_chaotic && scores.product_fit < config.fit_scattering {
        return Region::Chaotic;
    }
    if scores.product_fit >= config.fit_scattering && re.abs() >= config.scattering_min_abs_re {
        return Region::Scattering;
    }
    Region::Unassigned
}

/// Reference ansatz vectors shared by every state of one run.
pub struct ReferenceAnsatz {
    pub fermionic: Vec<Array1<Complex64>>,
    pub symmetric: Vec<Array1<Complex64>>,
}

/// Build the fermionic and symmetric reference states from the three most
/// subradiant single-photon eigenstates.
///
/// When further single-photon candidates are quasi-degenerate with the
/// chosen ones (gap below `degeneracy_gap`), products over the alternative
/// choices are included and overlaps are later taken against the span.
pub fn reference_ansatz(
    params: &ModelParams,
    map: &BasisMap,
    config: &ClassifierConfig,
) -> Result<ReferenceAnsatz> {
    let singles = crate::model::single_spectrum(params)?;
    let mut order: Vec<usize> = (0..singles.len()).collect();
    order.sort_by(|&a, &b| {
        observables::decay_rate(&singles.eigs[a]).total_cmp(&observables::decay_rate(&singles.eigs[b]))
    });
    let chosen: Vec<usize> = order.iter().copied().take(3).collect();
    if chosen.len() < 3 {
        return Err(Error::TooFewAtoms {
            n: params.n_atoms,
            k: 3,
        });
    }
    // include alternates that are quasi-degenerate with the third choice
    let third_energy = singles.eigs[chosen[2]].energy_per_photon;
    let mut variants: Vec<[usize; 3]> = vec![[chosen[0], chosen[1], chosen[2]]];
    for &alt in order.iter().skip(3) {
        if (singles.eigs[alt].energy_per_photon - third_energy).norm() < config.degeneracy_gap {
            variants.push([chosen[0], chosen[1], alt]);
        }
    }
    let mut fermionic = Vec::new();
    let mut symmetric = Vec::new();
    for v in &variants {
        let set = ansatz::FactorSet::new([
            singles.eigs[v[0]].vector.clone(),
            singles.eigs[v[1]].vector.clone(),
            singles.eigs[v[2]].vector.clone(),
        ])?;
        match ansatz::fermionic_product(&set, map) {
            Ok(state) => fermionic.push(state),
            Err(Error::DegenerateProjection { .. }) => {}
            Err(e) => return Err(e),
        }
        match ansatz::symmetric_product(&set, map) {
            Ok(state) => symmetric.push(state),
            Err(Error::DegenerateProjection { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(ReferenceAnsatz {
        fermionic,
        symmetric,
    })
}

fn score_against(state: &Array1<Complex64>, reference: &[Array1<Complex64>]) -> Result<f64> {
    match reference.len() {
        0 => Ok(0.0),
        1 => ansatz::overlap(state, &reference[0]),
        _ => ansatz::overlap_with_span(state, reference),
    }
}

/// Classify every eigenstate of a spectrum.
///
/// Consumes the spectrum so the eigenvectors move into the records instead
/// of being duplicated.
pub fn classify_spectrum(
    spectrum: SpectrumResult,
    map: &BasisMap,
    config: &ClassifierConfig,
    fit_opts: &FitOptions,
) -> Result<Vec<StateRecord>> {
    let params = spectrum.params;
    let windows = config.windows(map.n_atoms());
    let reference = reference_ansatz(&params, map, config)?;
    spectrum
        .eigs
        .into_par_iter()
        .enumerate()
        .map(|(index, eigen)| {
            let mut record = observables::state_record(index, &eigen, map)?;
            record.eigen = eigen; // keep the moved vector, drop the clone
            record.labels = label_state(&record, map, &windows, &reference, &params, config, fit_opts)?;
            Ok(record)
        })
        .collect()
}

/// Label one state; `record` must carry its observables already.
pub fn label_state(
    record: &StateRecord,
    map: &BasisMap,
    windows: &Windows,
    reference: &ReferenceAnsatz,
    params: &ModelParams,
    config: &ClassifierConfig,
    fit_opts: &FitOptions,
) -> Result<StateLabel> {
    let state = &record.eigen.vector;
    let scores = AnsatzScores {
        fermionic: score_against(state, &reference.fermionic)?,
        symmetric: score_against(state, &reference.symmetric)?,
        product_fit: 0.0,
    };
    let (factors, product_fit) = ansatz::extract_factors_with(state, map, windows, fit_opts)?;
    let scores = AnsatzScores {
        product_fit,
        ..scores
    };
    let (signature, ambiguous) =
        match localisation_count(&record.marginal, &factors.kinds, windows, config) {
            Ok(sig) => (sig, false),
            Err(Error::AmbiguousSignature {
                marginal_edge,
                marginal_centre,
                ..
            }) => (
                LocalisationSignature {
                    n_edge: marginal_edge.min(3),
                    n_centre: marginal_centre.min(3 - marginal_edge.min(3)),
                    n_free: 3 - marginal_edge.min(3) - marginal_centre.min(3 - marginal_edge.min(3)),
                },
                true,
            ),
            Err(e) => return Err(e),
        };
    let region = region_label(record, &signature, &scores, params, config);
    let radiance = classify_radiance(record.decay_rate, params, config);

    let cube = observables::probability_cube(state, map)?;
    let trimer = detect_trimer(&cube, &config.trimer);
    let corner = detect_corner(&cube, &config.corner, config.corner_max_diag_mass);
    let trimer_edge = detect_trimer_edge(
        &cube,
        &record.marginal,
        windows,
        &config.trimer_edge,
        config.trimer_edge_mass,
    );
    let asymmetry = mirror_asymmetry(&record.marginal);
    let localized_flag = region == Region::Localized
        || signature.localized_photons() > 0
        || record.ipr >= config.ipr_localized;
    let asymmetric_localized =
        localized_flag && detect_asymmetric(&record.marginal, config.asymmetry_threshold);

    Ok(StateLabel {
        radiance,
        region,
        localisation: signature,
        ambiguous_localisation: ambiguous,
        scores,
        trimer,
        corner,
        trimer_edge,
        asymmetry,
        asymmetric_localized,
    })
}

/// Classification of a fresh diagonalization; convenience driver used by the
/// command-line front end.
pub fn classify_hamiltonian(
    h: &KPhotonHamiltonian,
    config: &ClassifierConfig,
    fit_opts: &FitOptions,
    mirror: bool,
) -> Result<Vec<StateRecord>> {
    let map = h
        .basis()
        .ok_or(Error::RepresentationMismatch { expected: "reduced" })?
        .clone();
    let spectrum = if mirror {
        spectra::diagonalize_mirror_blocked(h)?
    } else {
        spectra::diagonalize(h)?
    };
    classify_spectrum(spectrum, &map, config, fit_opts)
}
