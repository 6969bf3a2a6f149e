//! Sparse spectrum reconstruction from samples on `Γ₁` or `Γ₂`.
//!
//! Both algorithms compute the unshifted subgroup transforms `c_j`, keep the
//! `2t-1` heaviest bins of each, vote for characters, and estimate every
//! candidate by a componentwise median of its `n` bins. They differ in how a
//! selected bin is turned into characters: `Γ₁` votes for the whole
//! annihilator coset (`p^(r-h)` characters), `Γ₂` decodes the single
//! dominant character from shifted transforms.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::design::{ExponentSet, SamplingDesign, SubspaceFamily, Variant};
use crate::error::{Error, Result};
use crate::field::{all_vectors, FpVector};
use crate::spectral::{
    coset_label, subgroup_dft, CosetSpectrum, SampleTable, SparseSpectrum, ZERO_TOL,
};

/// Values `a -> f(a)` of a signal on `F_p`, at least on the exponent set.
#[derive(Clone, Debug, PartialEq)]
pub struct OneSparseInput {
    p: u32,
    values: BTreeMap<u32, Complex64>,
}

impl OneSparseInput {
    pub fn new(p: u32, values: BTreeMap<u32, Complex64>) -> Result<Self> {
        let exps = ExponentSet::new(p);
        if let Some(a) = exps.elements().iter().find(|a| !values.contains_key(a)) {
            return Err(Error::InvalidParameters(format!(
                "one-sparse input lacks a value at {a}"
            )));
        }
        Ok(OneSparseInput { p, values })
    }

    pub fn from_fn(exponents: &ExponentSet, mut f: impl FnMut(u32) -> Complex64) -> Self {
        let values = exponents.elements().iter().map(|&a| (a, f(a))).collect();
        OneSparseInput {
            p: exponents.modulus(),
            values,
        }
    }

    fn value(&self, a: u32) -> Complex64 {
        self.values[&a]
    }
}

/// `|x|_d`: distance from `x` to the nearest multiple of `d`.
fn dist_to_multiple(x: f64, d: f64) -> f64 {
    let r = x.rem_euclid(d);
    r.min(d - r)
}

/// Recovers the dominant frequency `y'` of `f(x) = Σ_y a_y ω_p^(xy)` from its
/// values on `K`.
///
/// For each `2^l` the phase `b = arg(f(2^l)/f(0))` in `[0, 2π)` eliminates
/// every `j` with `|p b/(2π) - 2^l j|_p >= p/6`; the smallest survivor is
/// returned (0 if none survive). Correct whenever
/// `|a_y'| > 2 Σ_{y≠y'} |a_y|`.
pub fn decode_one_sparse(input: &OneSparseInput, exponents: &ExponentSet) -> u32 {
    let p = input.p;
    let pf = p as f64;
    let f0 = input.value(0);
    let mut alive = vec![true; p as usize];
    for &pow in exponents.powers() {
        let fp = input.value(pow);
        let b = if f0.norm() < ZERO_TOL || fp.norm() < ZERO_TOL {
            0.0
        } else {
            (fp / f0).arg().rem_euclid(2.0 * PI)
        };
        let phase = pf * b / (2.0 * PI);
        for (j, keep) in alive.iter_mut().enumerate() {
            if *keep && dist_to_multiple(phase - (pow as u64 * j as u64) as f64, pf) >= pf / 6.0 {
                *keep = false;
            }
        }
    }
    alive.iter().position(|&k| k).unwrap_or(0) as u32
}

/// Middle order statistic of the real parts plus `i` times that of the
/// imaginary parts.
pub fn median_complex(values: &[Complex64]) -> Result<Complex64> {
    if values.len().is_multiple_of(2) {
        return Err(Error::EvenLength(values.len()));
    }
    let mid = values.len() / 2;
    let mut re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let mut im: Vec<f64> = values.iter().map(|z| z.im).collect();
    re.sort_by(f64::total_cmp);
    im.sort_by(f64::total_cmp);
    Ok(Complex64::new(re[mid], im[mid]))
}

/// The character `w` with `<b_k, w> = label_k` for the basis of `H_j` and
/// `<x_{l,j}, w> = u_l` for its complements.
pub fn solve_character(
    family: &SubspaceFamily,
    j: usize,
    label: &FpVector,
    u: &FpVector,
) -> FpVector {
    let sub = family.get(j);
    assert_eq!(label.len(), sub.dim(), "label length mismatch");
    assert_eq!(
        u.len(),
        sub.complements().len(),
        "complement count mismatch"
    );
    let rhs = FpVector::new(
        label.coords().iter().chain(u.coords()).copied().collect(),
        family.modulus(),
    )
    .expect("inputs are reduced");
    sub.solve_inverse().mul_vec(&rhs)
}

/// Every character whose coset label under `H_j` is `label`.
pub fn coset_characters(family: &SubspaceFamily, j: usize, label: &FpVector) -> Vec<FpVector> {
    let codim = family.get(j).complements().len();
    all_vectors(family.modulus(), codim)
        .map(|u| solve_character(family, j, label, &u))
        .collect()
}

/// Indices of the `count` largest-modulus bins; ties go to the smaller label.
fn heaviest_bins(spectrum: &CosetSpectrum, count: usize) -> Vec<usize> {
    let mut order: Vec<(f64, usize)> = spectrum
        .values()
        .iter()
        .enumerate()
        .map(|(i, z)| (z.norm(), i))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    order.truncate(count);
    order.into_iter().map(|(_, i)| i).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectedCosets {
    pub subspace: usize,
    pub labels: Vec<FpVector>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Heaviest bins kept for each subspace.
    pub selected: Vec<SelectedCosets>,
    /// Number of characters per vote count.
    pub vote_histogram: BTreeMap<usize, usize>,
    /// Bins fed to the median for each candidate, in subspace order.
    pub median_inputs: Vec<(FpVector, Vec<Complex64>)>,
    /// Median estimate of every candidate before the top-`t` cut.
    pub estimates: Vec<(FpVector, Complex64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryReport {
    pub variant: Variant,
    pub spectrum: SparseSpectrum,
    pub diagnostics: Diagnostics,
}

fn histogram(votes: &HashMap<FpVector, usize>) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for &c in votes.values() {
        *hist.entry(c).or_insert(0) += 1;
    }
    hist
}

fn unshifted_spectra(samples: &SampleTable, design: &SamplingDesign) -> Result<Vec<CosetSpectrum>> {
    let family = design.family();
    let zero = FpVector::zero(family.ambient_dim());
    (0..family.len())
        .map(|j| subgroup_dft(samples, family, j, &zero))
        .collect()
}

fn check_dims(samples: &SampleTable, design: &SamplingDesign) -> Result<()> {
    let prm = design.params();
    if samples.modulus() != prm.p || samples.dim() != prm.r {
        return Err(Error::DimensionMismatch(format!(
            "samples live in F_{}^{}, design in F_{}^{}",
            samples.modulus(),
            samples.dim(),
            prm.p,
            prm.r
        )));
    }
    Ok(())
}

/// Median estimates for `candidates` (sorted), then the `t` largest.
fn estimate_and_truncate(
    design: &SamplingDesign,
    spectra: &[CosetSpectrum],
    candidates: Vec<FpVector>,
    diagnostics: &mut Diagnostics,
) -> Result<SparseSpectrum> {
    let prm = design.params();
    let family = design.family();
    let mut estimates = Vec::with_capacity(candidates.len());
    for w in candidates {
        let inputs: Vec<Complex64> = spectra
            .iter()
            .enumerate()
            .map(|(j, c)| c.get(&coset_label(family, j, &w)))
            .collect();
        let est = median_complex(&inputs)?;
        diagnostics.median_inputs.push((w.clone(), inputs));
        estimates.push((w, est));
    }
    diagnostics.estimates = estimates.clone();
    estimates.sort_by(|a, b| {
        b.1.norm()
            .total_cmp(&a.1.norm())
            .then_with(|| a.0.cmp(&b.0))
    });
    let mut out = SparseSpectrum::new(prm.p, prm.r);
    for (w, est) in estimates.into_iter().take(prm.t) {
        out.insert(w, est);
    }
    Ok(out)
}

/// Reconstruction from samples on `Γ₁`.
///
/// Every kept bin of `c_j` votes for all `p^(r-h)` characters of its
/// annihilator coset; characters with more than `2t(m-1)` votes are
/// estimated by the median.
pub fn reconstruct_gamma1(
    samples: &SampleTable,
    design: &SamplingDesign,
) -> Result<RecoveryReport> {
    check_dims(samples, design)?;
    let prm = design.params();
    let family = design.family();
    let spectra = unshifted_spectra(samples, design)?;
    let keep = 2 * prm.t - 1;

    let mut diagnostics = Diagnostics::default();
    let mut votes: HashMap<FpVector, usize> = HashMap::new();
    for (j, c) in spectra.iter().enumerate() {
        let labels: Vec<FpVector> = heaviest_bins(c, keep)
            .into_iter()
            .map(|i| c.label(i))
            .collect();
        for label in &labels {
            for w in coset_characters(family, j, label) {
                *votes.entry(w).or_insert(0) += 1;
            }
        }
        diagnostics.selected.push(SelectedCosets {
            subspace: j,
            labels,
        });
    }
    diagnostics.vote_histogram = histogram(&votes);

    let threshold = prm.vote_threshold();
    let mut candidates: Vec<FpVector> = votes
        .into_iter()
        .filter(|&(_, c)| c > threshold)
        .map(|(w, _)| w)
        .collect();
    candidates.sort();

    let spectrum = estimate_and_truncate(design, &spectra, candidates, &mut diagnostics)?;
    Ok(RecoveryReport {
        variant: Variant::Gamma1,
        spectrum,
        diagnostics,
    })
}

/// Reconstruction from samples on `Γ₂`.
///
/// For each kept bin the coordinates `<w, x_{l,j}>` of its dominant
/// character are decoded from the bin's values in the transforms shifted by
/// `a x_{l,j}`, `a ∈ K`; the character is then solved from the bin label and
/// those coordinates. A character enters the candidate list once it gets
/// `2t(m-1)+1` votes.
pub fn reconstruct_gamma2(
    samples: &SampleTable,
    design: &SamplingDesign,
) -> Result<RecoveryReport> {
    check_dims(samples, design)?;
    let prm = design.params();
    let p = prm.p;
    let family = design.family();
    let exponents = design.exponents();
    let spectra = unshifted_spectra(samples, design)?;
    let keep = 2 * prm.t - 1;
    let target = prm.vote_threshold() + 1;

    let mut diagnostics = Diagnostics::default();
    let mut votes: HashMap<FpVector, usize> = HashMap::new();
    let mut admitted: Vec<FpVector> = Vec::new();
    for (j, c0) in spectra.iter().enumerate() {
        let sub = family.get(j);
        let labels: Vec<FpVector> = heaviest_bins(c0, keep)
            .into_iter()
            .map(|i| c0.label(i))
            .collect();

        // shifted[l][i] is the transform shifted by powers()[i] * x_{l,j}.
        let shifted = sub
            .complements()
            .iter()
            .map(|x| {
                exponents
                    .powers()
                    .iter()
                    .map(|&a| subgroup_dft(samples, family, j, &x.scale(a, p)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;

        for label in &labels {
            let decoded: Vec<u32> = shifted
                .iter()
                .map(|per_power| {
                    let input = OneSparseInput::from_fn(exponents, |a| {
                        if a == 0 {
                            c0.get(label)
                        } else {
                            let i = exponents
                                .powers()
                                .iter()
                                .position(|&k| k == a)
                                .expect("a is in K");
                            per_power[i].get(label)
                        }
                    });
                    decode_one_sparse(&input, exponents)
                })
                .collect();
            let u = FpVector::new(decoded, p).expect("decoder returns residues");
            let w = solve_character(family, j, label, &u);
            let count = votes.entry(w.clone()).or_insert(0);
            *count += 1;
            if *count == target {
                admitted.push(w);
            }
        }
        diagnostics.selected.push(SelectedCosets {
            subspace: j,
            labels,
        });
    }
    diagnostics.vote_histogram = histogram(&votes);
    admitted.sort();

    let spectrum = estimate_and_truncate(design, &spectra, admitted, &mut diagnostics)?;
    Ok(RecoveryReport {
        variant: Variant::Gamma2,
        spectrum,
        diagnostics,
    })
}

pub fn reconstruct(
    samples: &SampleTable,
    design: &SamplingDesign,
    variant: Variant,
) -> Result<RecoveryReport> {
    match variant {
        Variant::Gamma1 => reconstruct_gamma1(samples, design),
        Variant::Gamma2 => reconstruct_gamma2(samples, design),
    }
}
