//! Deterministic universal sampling sets for Fourier-sparse signals on
//! `F_p^r`, and the reconstruction algorithms that go with them.
//!
//! A [`SamplingDesign`] picks `n = 4t(m-1)+1` subspaces of dimension `h`,
//! any `m` of which span `F_p^r`. Samples on the union of the subspaces
//! (`Γ₁`) or of a few of their translates (`Γ₂`) determine every `t`-sparse
//! spectrum, and for arbitrary signals the recovered `t`-term spectrum `f̂'`
//! satisfies `‖f̂ - f̂'‖₁ <= (1 + 3√2) ‖ε‖₁`, where `ε` is the part of `f̂`
//! outside its best `t` terms.
//!
//! ```
//! use fvs_core::{reconstruct, sample_on, FpVector, SamplingDesign, SparseSpectrum, Variant};
//! use num_complex::Complex64;
//!
//! let design = SamplingDesign::construct(5, 3, 2).unwrap();
//! let mut signal = SparseSpectrum::new(5, 3);
//! signal.insert(FpVector::new(vec![1, 4, 2], 5).unwrap(), Complex64::new(1.0, -0.5));
//! signal.insert(FpVector::new(vec![0, 3, 3], 5).unwrap(), Complex64::new(0.25, 2.0));
//!
//! let samples = sample_on(&signal, &design.gamma2());
//! let report = reconstruct(&samples, &design, Variant::Gamma2).unwrap();
//! assert!(report.spectrum.l1_distance(&signal) < 1e-9);
//! ```

pub mod design;
pub mod error;
pub mod field;
pub mod io;
pub mod recovery;
pub mod spectral;

pub use design::{
    build_gamma1, build_gamma2, lift_family, max_coherence_count, select_parameters,
    vandermonde_set, verify_m_generating, DesignParams, ExponentSet, SamplingDesign, SamplingSet,
    SizeReport, Subspace, SubspaceFamily, Variant,
};
pub use error::{Error, Result};
pub use field::{ExtField, ExtFieldElement, FpMatrix, FpVector};
pub use recovery::{
    decode_one_sparse, median_complex, reconstruct, reconstruct_gamma1, reconstruct_gamma2,
    solve_character, OneSparseInput, RecoveryReport,
};
pub use spectral::{
    annihilator_contains, coset_label, evaluate_character, full_dft_oracle, sample_on,
    subgroup_dft, synthesize_samples, CosetSpectrum, RootTable, SampleTable, SparseSpectrum,
};
