#![allow(dead_code)]

use fvs_core::field::all_vectors;
use fvs_core::spectral::{random_noise, random_sparse_spectrum};
use fvs_core::{annihilator_contains, FpVector, SparseSpectrum};
use rand::Rng;

/// Desk-scale parameter grid.
pub const GRID_P: [u32; 3] = [3, 5, 7];
pub const GRID_R: [usize; 3] = [2, 3, 4];
pub const GRID_T: [usize; 3] = [1, 2, 3];

pub fn grid() -> impl Iterator<Item = (u32, usize, usize)> {
    GRID_P.into_iter().flat_map(|p| {
        GRID_R
            .into_iter()
            .flat_map(move |r| GRID_T.into_iter().map(move |t| (p, r, t)))
    })
}

/// Signal `ĝ` (exactly `t` terms), noise `ε` off its support with
/// `‖ε‖₁ = l1`, and `f̂ = ĝ + ε`.
pub struct Instance {
    pub signal: SparseSpectrum,
    pub noise: SparseSpectrum,
    pub full: SparseSpectrum,
}

pub fn instance<R: Rng>(
    rng: &mut R,
    p: u32,
    r: usize,
    t: usize,
    l1: f64,
    min_mag: f64,
) -> Instance {
    let signal = random_sparse_spectrum(rng, p, r, t, min_mag, 2.0);
    let noise = random_noise(rng, &signal, l1, 3 * t + 3);
    let full = signal.sum(&noise);
    Instance {
        signal,
        noise,
        full,
    }
}

/// `Σ |a_y|` over `y ≠ z` in the annihilator coset of `z`, by direct
/// membership tests.
pub fn coset_mate_mass(spectrum: &SparseSpectrum, basis: &[FpVector], z: &FpVector, p: u32) -> f64 {
    spectrum
        .iter()
        .filter(|(y, _)| *y != z && annihilator_contains(basis, &y.sub(z, p), p))
        .map(|(_, a)| a.norm())
        .sum()
}

pub fn all_points(p: u32, r: usize) -> Vec<FpVector> {
    all_vectors(p, r).collect()
}
