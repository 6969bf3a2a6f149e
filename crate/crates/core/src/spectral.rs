//! Characters of `F_p^r`, the brute-force full DFT, subgroup transforms and
//! synthetic sparse signals.
//!
//! Transforms use the `1/|G|` normalisation on the analysis side:
//! `f̂(y) = p^-r Σ_x f(x) conj(χ_y(x))` and `f = Σ_y f̂(y) χ_y`. Subgroup
//! transforms over `H ≅ F_p^h` use `1/p^h`, so that bin `ℓ` of the transform
//! of `f|_H` is the sum of `f̂` over the annihilator coset with label `ℓ`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;

use crate::design::{SamplingSet, SubspaceFamily, Variant};
use crate::error::{Error, Result};
use crate::field::{all_vectors, FpVector};

/// Amplitudes with modulus below this are treated as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// `ω_p^k` for `k = 0..p`.
#[derive(Clone, Debug)]
pub struct RootTable {
    p: u32,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(p: u32) -> Self {
        let roots = (0..p)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64))
            .collect();
        RootTable { p, roots }
    }

    #[inline]
    pub fn pow(&self, k: u32) -> Complex64 {
        self.roots[(k % self.p) as usize]
    }

    /// `ω_p^-k`.
    #[inline]
    pub fn pow_neg(&self, k: u32) -> Complex64 {
        self.roots[((self.p - k % self.p) % self.p) as usize]
    }
}

/// `χ_y(x) = ω_p^<x, y>`.
pub fn evaluate_character(roots: &RootTable, y: &FpVector, x: &FpVector) -> Complex64 {
    roots.pow(y.dot(x, roots.p))
}

/// Finitely supported map from character labels to amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSpectrum {
    p: u32,
    r: usize,
    terms: BTreeMap<FpVector, Complex64>,
}

impl SparseSpectrum {
    pub fn new(p: u32, r: usize) -> Self {
        SparseSpectrum {
            p,
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    /// Sets the amplitude at `y`; amplitudes below [`ZERO_TOL`] remove the
    /// entry.
    pub fn insert(&mut self, y: FpVector, a: Complex64) {
        assert_eq!(y.len(), self.r, "label length mismatch");
        if a.norm() < ZERO_TOL {
            self.terms.remove(&y);
        } else {
            self.terms.insert(y, a);
        }
    }

    pub fn get(&self, y: &FpVector) -> Complex64 {
        self.terms.get(y).copied().unwrap_or_default()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FpVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn contains(&self, y: &FpVector) -> bool {
        self.terms.contains_key(y)
    }

    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm()).sum()
    }

    /// `Σ_y |self(y) - other(y)|` over the union of supports.
    pub fn l1_distance(&self, other: &SparseSpectrum) -> f64 {
        let mut total = 0.0;
        for (y, a) in &self.terms {
            total += (a - other.get(y)).norm();
        }
        for (y, b) in &other.terms {
            if !self.terms.contains_key(y) {
                total += b.norm();
            }
        }
        total
    }

    pub fn sum(&self, other: &SparseSpectrum) -> SparseSpectrum {
        let mut out = self.clone();
        for (y, b) in &other.terms {
            let a = out.get(y);
            out.insert(y.clone(), a + b);
        }
        out
    }

    pub fn max_abs_difference(&self, other: &SparseSpectrum) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|y| (self.get(y) - other.get(y)).norm())
            .fold(0.0, f64::max)
    }
}

/// Signal values on a finite set of points.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTable {
    p: u32,
    r: usize,
    /// Sampling set the points were drawn from; `None` for arbitrary or full
    /// tables.
    source: Option<Variant>,
    values: HashMap<FpVector, Complex64>,
}

impl SampleTable {
    pub fn new(p: u32, r: usize, source: Option<Variant>) -> Self {
        SampleTable {
            p,
            r,
            source,
            values: HashMap::new(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn source(&self) -> Option<Variant> {
        self.source
    }

    pub fn insert(&mut self, x: FpVector, value: Complex64) {
        assert_eq!(x.len(), self.r, "point length mismatch");
        self.values.insert(x, value);
    }

    pub fn get(&self, x: &FpVector) -> Option<Complex64> {
        self.values.get(x).copied()
    }

    pub fn require(&self, x: &FpVector) -> Result<Complex64> {
        self.get(x).ok_or_else(|| Error::MissingSamples(x.clone()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries sorted by point.
    pub fn sorted(&self) -> Vec<(&FpVector, &Complex64)> {
        let mut entries: Vec<_> = self.values.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        entries
    }

    pub fn map_values(&mut self, mut f: impl FnMut(&FpVector, Complex64) -> Complex64) {
        for (x, v) in self.values.iter_mut() {
            *v = f(x, *v);
        }
    }
}

/// `f(x) = Σ_y S(y) χ_y(x)` at every requested point.
pub fn synthesize_samples<'a>(
    spectrum: &SparseSpectrum,
    points: impl IntoIterator<Item = &'a FpVector>,
) -> SampleTable {
    let (p, r) = (spectrum.p, spectrum.r);
    let roots = RootTable::new(p);
    let mut table = SampleTable::new(p, r, None);
    for x in points {
        let value = spectrum
            .iter()
            .map(|(y, a)| a * evaluate_character(&roots, y, x))
            .sum();
        table.insert(x.clone(), value);
    }
    table
}

/// Samples of `spectrum` on a sampling set, tagged with its variant.
pub fn sample_on(spectrum: &SparseSpectrum, set: &SamplingSet) -> SampleTable {
    let mut table = synthesize_samples(spectrum, &set.points);
    table.source = Some(set.variant);
    table
}

/// Direct `O(p^2r)` transform of a complete table. Test oracle only.
pub fn full_dft_oracle(table: &SampleTable) -> Result<SparseSpectrum> {
    let (p, r) = (table.p, table.r);
    let roots = RootTable::new(p);
    let points: Vec<FpVector> = all_vectors(p, r).collect();
    let values = points
        .iter()
        .map(|x| table.require(x))
        .collect::<Result<Vec<_>>>()?;
    let scale = 1.0 / points.len() as f64;
    let mut out = SparseSpectrum::new(p, r);
    for y in &points {
        let acc: Complex64 = points
            .iter()
            .zip(&values)
            .map(|(x, fx)| fx * roots.pow_neg(y.dot(x, p)))
            .sum();
        out.insert(y.clone(), acc * scale);
    }
    Ok(out)
}

/// True iff `χ_y` is trivial on `span(basis)`.
pub fn annihilator_contains(basis: &[FpVector], y: &FpVector, p: u32) -> bool {
    basis.iter().all(|b| b.dot(y, p) == 0)
}

/// `(<b_1, y>, ..., <b_h, y>)`; two labels agree iff the characters lie in
/// the same annihilator coset.
pub fn coset_label(family: &SubspaceFamily, j: usize, y: &FpVector) -> FpVector {
    let p = family.modulus();
    let coords = family.get(j).basis().iter().map(|b| b.dot(y, p)).collect();
    FpVector::new(coords, p).expect("dot products are reduced")
}

/// Transform of `y -> f(shift + y)` over one subspace `H_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetSpectrum {
    pub subspace: usize,
    pub shift: FpVector,
    p: u32,
    h: usize,
    values: Vec<Complex64>,
}

impl CosetSpectrum {
    pub fn get(&self, label: &FpVector) -> Complex64 {
        self.values[label.to_index(self.p) as usize]
    }

    /// Bins in label-index order.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn label(&self, index: usize) -> FpVector {
        FpVector::from_index(index as u64, self.p, self.h)
    }
}

/// Multidimensional length-`p` DFT with kernel `ω^-<α, β>`, applied one axis
/// at a time. `data` is indexed by `α` in lexicographic order.
fn separable_dft(data: &mut [Complex64], p: u32, h: usize, roots: &RootTable) {
    let p_us = p as usize;
    let mut line = vec![Complex64::default(); p_us];
    let mut stride = 1usize;
    for _ in 0..h {
        let block = stride * p_us;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (d, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + d * stride];
                }
                for beta in 0..p_us {
                    let mut acc = Complex64::default();
                    for (d, v) in line.iter().enumerate() {
                        acc += v * roots.pow_neg((d * beta % p_us) as u32);
                    }
                    data[base + beta * stride] = acc;
                }
            }
        }
        stride = block;
    }
}

/// Transform over `H_j ≅ F_p^h` (through the basis `B_j`) of
/// `y -> f(shift + y)`, normalised by `1/p^h`.
///
/// Bin `ℓ` equals `Σ f̂(z) χ_z(shift)` over the characters `z` with
/// `coset_label(z) = ℓ`.
pub fn subgroup_dft(
    samples: &SampleTable,
    family: &SubspaceFamily,
    j: usize,
    shift: &FpVector,
) -> Result<CosetSpectrum> {
    let p = family.modulus();
    let sub = family.get(j);
    let h = sub.dim();
    let mut data = sub
        .coset_points(shift, p)
        .iter()
        .map(|x| samples.require(x))
        .collect::<Result<Vec<_>>>()?;
    let roots = RootTable::new(p);
    separable_dft(&mut data, p, h, &roots);
    let scale = 1.0 / data.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
    Ok(CosetSpectrum {
        subspace: j,
        shift: shift.clone(),
        p,
        h,
        values: data,
    })
}

fn random_amplitude<R: Rng + ?Sized>(rng: &mut R, magnitude: f64) -> Complex64 {
    Complex64::from_polar(magnitude, rng.gen_range(0.0..2.0 * PI))
}

/// `t` distinct labels with moduli uniform in `[min_mag, max_mag]` and
/// uniform phases.
pub fn random_sparse_spectrum<R: Rng + ?Sized>(
    rng: &mut R,
    p: u32,
    r: usize,
    t: usize,
    min_mag: f64,
    max_mag: f64,
) -> SparseSpectrum {
    let total = (p as u64).pow(r as u32);
    let t = t.min(total as usize);
    let mut out = SparseSpectrum::new(p, r);
    for idx in sample(rng, total as usize, t).into_iter() {
        let mag = if max_mag > min_mag {
            rng.gen_range(min_mag..=max_mag)
        } else {
            min_mag
        };
        out.insert(
            FpVector::from_index(idx as u64, p, r),
            random_amplitude(rng, mag),
        );
    }
    out
}

/// A noise spectrum of exact ℓ¹ mass `l1` spread over between 1 and
/// `max_labels` labels outside the support of `exclude`, with random
/// weights and phases.
pub fn random_noise<R: Rng + ?Sized>(
    rng: &mut R,
    exclude: &SparseSpectrum,
    l1: f64,
    max_labels: usize,
) -> SparseSpectrum {
    let (p, r) = (exclude.p, exclude.r);
    let mut out = SparseSpectrum::new(p, r);
    if l1 <= 0.0 {
        return out;
    }
    let total = (p as u64).pow(r as u32) as usize;
    let free: Vec<FpVector> = (0..total as u64)
        .map(|i| FpVector::from_index(i, p, r))
        .filter(|y| !exclude.contains(y))
        .collect();
    let cap = max_labels.min(free.len());
    if cap == 0 {
        return out;
    }
    let count = rng.gen_range(1..=cap);
    let chosen = sample(rng, free.len(), count);
    let weights: Vec<f64> = (0..count).map(|_| rng.gen_range(0.05..1.0)).collect();
    let wsum: f64 = weights.iter().sum();
    for (idx, w) in chosen.into_iter().zip(weights) {
        out.insert(free[idx].clone(), random_amplitude(rng, l1 * w / wsum));
    }
    out
}
