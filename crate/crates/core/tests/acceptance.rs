//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{coset_mate_mass, grid, instance, Instance, GRID_P, GRID_R, GRID_T};
use fvs_core::field::{all_vectors, is_prime};
use fvs_core::spectral::random_sparse_spectrum;
use fvs_core::{
    annihilator_contains, coset_label, decode_one_sparse, evaluate_character, max_coherence_count,
    reconstruct, sample_on, subgroup_dft, ExponentSet, FpVector, OneSparseInput, RootTable,
    SamplingDesign, Variant,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn variants(p: u32) -> &'static [Variant] {
    if p >= 5 {
        &[Variant::Gamma1, Variant::Gamma2]
    } else {
        &[Variant::Gamma1]
    }
}

fn design(p: u32, r: usize, t: usize) -> SamplingDesign {
    SamplingDesign::construct(p, r, t).expect("design construction")
}

fn cell_seed(tag: u64, p: u32, r: usize, t: usize) -> u64 {
    tag * 1_000_003 + (p as u64) * 10_007 + (r as u64) * 101 + t as u64
}

fn exact_recovery() -> Outcome {
    let mut runs = 0;
    let mut worst = 0.0f64;
    let start = Instant::now();
    for (p, r, t) in grid() {
        let d = design(p, r, t);
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(1, p, r, t));
        for &variant in variants(p) {
            let set = d.sampling_set(variant);
            for trial in 0..100 {
                let g = random_sparse_spectrum(&mut rng, p, r, t, 0.1, 2.0);
                let samples = sample_on(&g, &set);
                let out = reconstruct(&samples, &d, variant).map_err(|e| e.to_string())?;
                let err = out.spectrum.l1_distance(&g);
                worst = worst.max(err);
                if err >= 1e-8 {
                    return Err(format!(
                        "p={p} r={r} t={t} {variant} trial {trial}: error {err:.3e}"
                    ));
                }
                runs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(120) {
        return Err(format!("took {:.1}s, limit 120s", elapsed.as_secs_f64()));
    }
    Ok(format!(
        "{runs} recoveries, worst l1 error {worst:.2e}, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn noisy_guarantee() -> Outcome {
    let factor = 1.0 + 3.0 * 2f64.sqrt();
    let mut runs = 0;
    let mut worst_ratio = 0.0f64;
    for (p, r, t) in grid() {
        let d = design(p, r, t);
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(2, p, r, t));
        for &variant in variants(p) {
            let set = d.sampling_set(variant);
            for noise in [0.01, 0.1] {
                for trial in 0..100 {
                    let Instance { full, .. } = instance(&mut rng, p, r, t, noise, 0.01);
                    let samples = sample_on(&full, &set);
                    let out = reconstruct(&samples, &d, variant).map_err(|e| e.to_string())?;
                    let err = out.spectrum.l1_distance(&full);
                    worst_ratio = worst_ratio.max(err / noise);
                    if err > factor * noise + 1e-8 {
                        return Err(format!(
                            "p={p} r={r} t={t} {variant} noise={noise} trial {trial}: error {err:.4e} > {:.4e}",
                            factor * noise
                        ));
                    }
                    runs += 1;
                }
            }
        }
    }
    Ok(format!(
        "{runs} trials, worst error/‖ε‖₁ = {worst_ratio:.3} (bound {factor:.3})"
    ))
}

fn size_bounds() -> Outcome {
    let mut cells = 0;
    for p in GRID_P.into_iter().chain([11, 13]) {
        for r in GRID_R {
            for t in GRID_T {
                let d = design(p, r, t);
                let params = d.params();
                let (pu, tu, ru) = (p as u64, t as u64, r as u64);
                let g1 = d.gamma1().len() as u64;
                let g2 = d.gamma2().len() as u64;
                let family = params.n as u64 * pu.pow(params.h as u32);
                let bound1 = 16 * pu * tu * tu * ru * ru;
                // |K| = 2 + k with 3·2^k >= p minimal, so |K| <= 2 + log2 p
                // is the integer check 2^(|K|-2) <= p.
                let kcount = d.exponents().len() as u64;
                let bound2_base = 16 * pu * tu * tu * ru * ru * ru;
                if g1 > bound1 || family >= bound1 {
                    return Err(format!(
                        "p={p} r={r} t={t}: |Γ₁|={g1}, n·p^h={family}, bound {bound1}"
                    ));
                }
                if (1u64 << (kcount - 2)) > pu || g2 > bound2_base * kcount {
                    return Err(format!(
                        "p={p} r={r} t={t}: |Γ₂|={g2}, |K|={kcount}, bound {bound2_base}·(2+log2 p)"
                    ));
                }
                let report = d.size_report();
                if !(report.gamma1_bound_holds()
                    && report.gamma2_bound_holds()
                    && report.family_bound_holds())
                {
                    return Err(format!(
                        "p={p} r={r} t={t}: size report disagrees: {report:?}"
                    ));
                }
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} designs within all three bounds"))
}

fn m_generating() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for (p, r, t) in grid() {
        let d = design(p, r, t);
        if !d.is_m_generating() {
            return Err(format!(
                "p={p} r={r} t={t}: some {} subspaces fail to span",
                d.params().m
            ));
        }
        count += 1;
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        return Err(format!("took {:.1}s, limit 30s", elapsed.as_secs_f64()));
    }
    Ok(format!(
        "{count} designs m-generating, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn one_sparse_decoder() -> Outcome {
    let mut cases = 0u64;
    let splits = [0.0, 0.25, 0.5, 0.75, 1.0];
    let phases: Vec<f64> = (0..6).map(|i| i as f64 * PI / 3.0 + 0.1).collect();
    for p in (5..=101).filter(|&p| is_prime(p)) {
        let k = ExponentSet::new(p);
        let roots = RootTable::new(p);
        for y in 0..p {
            for &main_phase in &[0.0, 1.3] {
                let main = Complex64::from_polar(1.0, main_phase);
                for &split in &splits {
                    for &ph_lo in &phases {
                        for &ph_hi in &phases {
                            let lo = Complex64::from_polar(0.49 * split, ph_lo);
                            let hi = Complex64::from_polar(0.49 * (1.0 - split), ph_hi);
                            let (y_lo, y_hi) = ((y + p - 1) % p, (y + 1) % p);
                            let input = OneSparseInput::from_fn(&k, |x| {
                                main * roots.pow((y as u64 * x as u64 % p as u64) as u32)
                                    + lo * roots.pow((y_lo as u64 * x as u64 % p as u64) as u32)
                                    + hi * roots.pow((y_hi as u64 * x as u64 % p as u64) as u32)
                            });
                            let got = decode_one_sparse(&input, &k);
                            if got != y {
                                return Err(format!(
                                    "p={p} y'={y} split={split} phases=({ph_lo:.2},{ph_hi:.2}): decoded {got}"
                                ));
                            }
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{cases} noisy inputs decoded correctly"))
}

fn coset_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cells: Vec<_> = grid().collect();
    let mut worst = 0.0f64;
    for trial in 0..500 {
        let (p, r, t) = cells[rng.gen_range(0..cells.len())];
        let d = design(p, r, t);
        let family = d.family();
        let roots = RootTable::new(p);
        let Instance { full, .. } = instance(&mut rng, p, r, t, 0.1, 0.1);
        let j = rng.gen_range(0..family.len());
        let shift = FpVector::from_index(rng.gen_range(0..(p as u64).pow(r as u32)), p, r);
        let sub = family.get(j);
        let mut points = Vec::new();
        for x in sub.coset_points(&shift, p) {
            points.push(x);
        }
        let samples = fvs_core::synthesize_samples(&full, &points);
        let spec = subgroup_dft(&samples, family, j, &shift).map_err(|e| e.to_string())?;
        // Every bin: pick a representative z with that label by brute force
        // over F_p^r, then sum f̂(y) χ_y(shift) over y ∈ z + H_j^⊥.
        for (idx, &bin) in spec.values().iter().enumerate() {
            let label = spec.label(idx);
            let z = all_vectors(p, r)
                .find(|z| coset_label(family, j, z) == label)
                .ok_or_else(|| format!("no character with label {label}"))?;
            let expected: Complex64 = full
                .iter()
                .filter(|(y, _)| annihilator_contains(sub.basis(), &y.sub(&z, p), p))
                .map(|(y, a)| a * evaluate_character(&roots, y, &shift))
                .sum();
            let err = (bin - expected).norm();
            worst = worst.max(err);
            if err >= 1e-9 {
                return Err(format!(
                    "trial {trial} p={p} r={r} j={j} bin {idx}: error {err:.3e}"
                ));
            }
        }
    }
    Ok(format!("500 triples, max abs error {worst:.2e}"))
}

fn counting_bound() -> Outcome {
    let mut instances = 0;
    for (p, r, t) in grid() {
        let d = design(p, r, t);
        let params = *d.params();
        let need = 2 * t * (params.m - 1) + 1;
        let family = d.family();
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(7, p, r, t));
        for trial in 0..200 {
            let noise = if trial % 2 == 0 { 0.01 } else { 0.1 };
            let Instance {
                full, noise: eps, ..
            } = instance(&mut rng, p, r, t, noise, 0.01);
            let threshold = eps.l1_norm() / t as f64;
            for z in all_vectors(p, r) {
                let good = family
                    .iter()
                    .filter(|sub| coset_mate_mass(&full, sub.basis(), &z, p) <= threshold + 1e-12)
                    .count();
                if good < need {
                    return Err(format!(
                        "p={p} r={r} t={t} trial {trial} z={z}: {good} < {need}"
                    ));
                }
            }
            instances += 1;
        }
    }
    Ok(format!(
        "{instances} instances, every label meets the bound"
    ))
}

fn coherence() -> Outcome {
    let mut count = 0;
    for (p, r, t) in grid() {
        let d = design(p, r, t);
        let m = d.params().m;
        let worst = max_coherence_count(d.family());
        if worst > m - 1 {
            return Err(format!(
                "p={p} r={r} t={t}: {worst} annihilators share a character, limit {}",
                m - 1
            ));
        }
        count += 1;
    }
    Ok(format!("{count} designs within the coherence limit"))
}

fn complexity_ordering() -> Outcome {
    let (p, r, t) = (5, 6, 2);
    let d = design(p, r, t);
    let g1 = d.gamma1();
    let g2 = d.gamma2();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut time1, mut time2) = (Duration::ZERO, Duration::ZERO);
    for trial in 0..5 {
        let spectrum = random_sparse_spectrum(&mut rng, p, r, t, 0.1, 2.0);
        let s1 = sample_on(&spectrum, &g1);
        let s2 = sample_on(&spectrum, &g2);
        let start = Instant::now();
        let out1 = reconstruct(&s1, &d, Variant::Gamma1).map_err(|e| e.to_string())?;
        time1 += start.elapsed();
        let start = Instant::now();
        let out2 = reconstruct(&s2, &d, Variant::Gamma2).map_err(|e| e.to_string())?;
        time2 += start.elapsed();
        for out in [&out1, &out2] {
            if out.spectrum.l1_distance(&spectrum) >= 1e-8 {
                return Err(format!("trial {trial}: {} failed to recover", out.variant));
            }
        }
    }
    let detail = format!(
        "Algorithm 1 {:.1} ms, Algorithm 2 {:.1} ms over 5 trials",
        time1.as_secs_f64() * 1e3,
        time2.as_secs_f64() * 1e3
    );
    if time2 < time1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("exact recovery", exact_recovery),
        ("noisy l1 guarantee", noisy_guarantee),
        ("sampling set size bounds", size_bounds),
        ("m-generating families", m_generating),
        ("1-sparse decoder under noise", one_sparse_decoder),
        ("coset spectrum oracle", coset_oracle),
        ("per-label counting bound", counting_bound),
        ("coherence bound", coherence),
        ("Algorithm 2 faster than Algorithm 1", complexity_ordering),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
