//! `fvs`: build sampling designs, synthesize samples, reconstruct sparse
//! spectra and check designs from the command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 I/O or parse failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fvs_core::field::{all_vectors, is_prime};
use fvs_core::io::{
    design_from_text, design_to_text, report_spectrum_from_text, report_to_text, samples_from_text,
    samples_to_text, spectrum_from_text, spectrum_to_text,
};
use fvs_core::spectral::{random_noise, random_sparse_spectrum};
use fvs_core::{
    full_dft_oracle, max_coherence_count, reconstruct, sample_on, synthesize_samples, Error,
    SampleTable, SamplingDesign, SparseSpectrum, Variant,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "fvs",
    version,
    about = "Deterministic sparse Fourier sampling over F_p^r"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a design for t-sparse signals on F_p^r.
    Design {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        r: usize,
        #[arg(short)]
        t: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Evaluate a spectrum on a sampling set.
    Sample {
        #[arg(long)]
        design: PathBuf,
        /// Spectrum file (`y_1 .. y_r : re im` per line).
        #[arg(long, required_unless_present = "seed")]
        spectrum: Option<PathBuf>,
        /// Seed for the random spectrum (when no file is given) and the noise.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "gamma1")]
        variant: SampleVariant,
        /// ℓ¹ mass of random off-support noise added to the spectrum.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Recover the t largest coefficients from samples.
    Reconstruct {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, value_enum, default_value = "gamma1")]
        variant: AlgoVariant,
        /// Reference spectrum; prints the ℓ¹ error against it.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the m-generating property, size bounds and coherence.
    Verify {
        #[arg(long)]
        design: PathBuf,
    },
    /// Time both reconstruction algorithms on random signals.
    Bench {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        r: usize,
        #[arg(short)]
        t: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Full transform of a complete sample table.
    OracleDft {
        #[arg(long)]
        samples: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoVariant {
    Gamma1,
    Gamma2,
}

impl From<AlgoVariant> for Variant {
    fn from(v: AlgoVariant) -> Self {
        match v {
            AlgoVariant::Gamma1 => Variant::Gamma1,
            AlgoVariant::Gamma2 => Variant::Gamma2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleVariant {
    Gamma1,
    Gamma2,
    /// Every point of F_p^r.
    Full,
}

enum Failure {
    Validation(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Io(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_with<T>(path: &Path, parsed: fvs_core::Result<T>) -> Result<T, Failure> {
    parsed.map_err(|e| match e {
        Error::Parse { .. } => Failure::Io(format!("{}: {e}", path.display())),
        other => Failure::from(other),
    })
}

fn load_design(path: &Path) -> Result<SamplingDesign, Failure> {
    parse_with(path, design_from_text(&read(path)?))
}

/// `# seed N` recorded in a sample file, if any.
fn recorded_seed(text: &str) -> Option<u64> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .find_map(|c| c.trim().strip_prefix("seed ")?.trim().parse().ok())
}

fn sidecar(output: &Path, ext: &str) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(ext);
    PathBuf::from(name)
}

fn print_sizes(design: &SamplingDesign) {
    let prm = design.params();
    let sizes = design.size_report();
    println!(
        "p={} r={} t={} h={} m={} n={} q={}",
        prm.p, prm.r, prm.t, prm.h, prm.m, prm.n, prm.q
    );
    println!(
        "n*p^h  = {} (bound {})",
        sizes.family_points, sizes.gamma1_bound
    );
    println!("|Gamma1| = {} (bound {})", sizes.gamma1, sizes.gamma1_bound);
    println!(
        "|Gamma2| = {} (bound {:.1})",
        sizes.gamma2, sizes.gamma2_bound
    );
    println!("|K| = {}", sizes.exponent_count);
}

fn ensure_prime(p: u32) -> CmdResult {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Failure::Validation(format!("p must be prime (got {p})")))
    }
}

fn cmd_design(p: u32, r: usize, t: usize, output: &Path) -> CmdResult {
    ensure_prime(p)?;
    let design = SamplingDesign::construct(p, r, t)?;
    write(output, &design_to_text(&design))?;
    print_sizes(&design);
    Ok(())
}

fn cmd_sample(
    design: &Path,
    spectrum: Option<&Path>,
    seed: Option<u64>,
    variant: SampleVariant,
    noise: f64,
    output: &Path,
) -> CmdResult {
    let design = load_design(design)?;
    let prm = *design.params();
    let (p, r) = (prm.p, prm.r);
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Failure::Validation(format!(
            "noise must be a finite non-negative number (got {noise})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
    let signal = match spectrum {
        Some(path) => parse_with(path, spectrum_from_text(&read(path)?, p, r))?,
        None => random_sparse_spectrum(&mut rng, p, r, prm.t, 0.5, 2.0),
    };
    let total = (p as u64).pow(r as u32) as usize;
    let eps = random_noise(&mut rng, &signal, noise, total.saturating_sub(prm.t));
    let full = signal.sum(&eps);
    let table = match variant {
        SampleVariant::Gamma1 => sample_on(&full, &design.gamma1()),
        SampleVariant::Gamma2 => sample_on(&full, &design.gamma2()),
        SampleVariant::Full => {
            let points: Vec<_> = all_vectors(p, r).collect();
            synthesize_samples(&full, &points)
        }
    };
    write(output, &samples_to_text(&table, seed))?;
    write(&sidecar(output, ".truth"), &spectrum_to_text(&full))?;
    if noise > 0.0 {
        write(&sidecar(output, ".noise"), &spectrum_to_text(&eps))?;
    }
    println!("{} samples written to {}", table.len(), output.display());
    Ok(())
}

fn cmd_reconstruct(
    design: &Path,
    samples: &Path,
    variant: Variant,
    truth: Option<&Path>,
    output: &Path,
) -> CmdResult {
    let design = load_design(design)?;
    let text = read(samples)?;
    let table: SampleTable = parse_with(samples, samples_from_text(&text))?;
    let prm = design.params();
    if table.modulus() != prm.p || table.dim() != prm.r {
        return Err(Failure::Validation(format!(
            "samples live on F_{}^{}, design on F_{}^{}",
            table.modulus(),
            table.dim(),
            prm.p,
            prm.r
        )));
    }
    let report = reconstruct(&table, &design, variant)?;
    let report_text = report_to_text(&design, &report, recorded_seed(&text));
    write(output, &report_text)?;
    println!("recovered {} coefficients", report.spectrum.support_len());
    if let Some(path) = truth {
        let reference: SparseSpectrum =
            parse_with(path, spectrum_from_text(&read(path)?, prm.p, prm.r))?;
        let recovered = parse_with(output, report_spectrum_from_text(&report_text))?;
        println!("l1 error: {:.6e}", recovered.l1_distance(&reference));
    }
    Ok(())
}

fn cmd_verify(design: &Path) -> CmdResult {
    let design = load_design(design)?;
    let prm = *design.params();
    let sizes = design.size_report();
    let coherence = max_coherence_count(design.family());
    let checks = [
        ("m-generating", design.is_m_generating()),
        ("n*p^h bound", sizes.family_bound_holds()),
        ("Gamma1 size bound", sizes.gamma1_bound_holds()),
        ("Gamma2 size bound", sizes.gamma2_bound_holds()),
        ("exponent set size", sizes.exponent_bound_holds(prm.p)),
        ("coherence", coherence < prm.m.max(1)),
    ];
    print_sizes(&design);
    println!(
        "max annihilators sharing a character: {coherence} (limit {})",
        prm.m - 1
    );
    let mut failed = Vec::new();
    for (name, ok) in checks {
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

fn cmd_bench(p: u32, r: usize, t: usize, trials: usize, seed: u64) -> CmdResult {
    ensure_prime(p)?;
    let design = SamplingDesign::construct(p, r, t)?;
    let (g1, g2) = (design.gamma1(), design.gamma2());
    let sizes = design.size_report();
    println!("# p {p} r {r} t {t} seed {seed}");
    println!("# gamma1 {} bound {}", g1.len(), sizes.gamma1_bound);
    println!("# gamma2 {} bound {:.1}", g2.len(), sizes.gamma2_bound);
    println!(
        "trial\tgamma1_samples\tgamma2_samples\talg1_ms\talg2_ms\talg1_l1_error\talg2_l1_error"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let spectrum = random_sparse_spectrum(&mut rng, p, r, t, 0.5, 2.0);
        let mut row = format!("{trial}\t{}\t{}", g1.len(), g2.len());
        let mut errors = String::new();
        for (set, variant) in [(&g1, Variant::Gamma1), (&g2, Variant::Gamma2)] {
            let samples = sample_on(&spectrum, set);
            let start = Instant::now();
            let out = reconstruct(&samples, &design, variant);
            let ms = start.elapsed().as_secs_f64() * 1e3;
            row.push_str(&format!("\t{ms:.3}"));
            match out {
                Ok(out) => {
                    errors.push_str(&format!("\t{:.3e}", out.spectrum.l1_distance(&spectrum)))
                }
                Err(e) => errors.push_str(&format!("\terror: {e}")),
            }
        }
        println!("{row}{errors}");
    }
    Ok(())
}

fn cmd_oracle_dft(samples: &Path, output: &Path) -> CmdResult {
    let table = parse_with(samples, samples_from_text(&read(samples)?))?;
    let spectrum = full_dft_oracle(&table)?;
    write(output, &spectrum_to_text(&spectrum))?;
    println!("{} nonzero coefficients", spectrum.support_len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Design { p, r, t, output } => cmd_design(*p, *r, *t, output),
        Command::Sample {
            design,
            spectrum,
            seed,
            variant,
            noise,
            output,
        } => cmd_sample(design, spectrum.as_deref(), *seed, *variant, *noise, output),
        Command::Reconstruct {
            design,
            samples,
            variant,
            truth,
            output,
        } => cmd_reconstruct(design, samples, (*variant).into(), truth.as_deref(), output),
        Command::Verify { design } => cmd_verify(design),
        Command::Bench {
            p,
            r,
            t,
            trials,
            seed,
        } => cmd_bench(*p, *r, *t, *trials, *seed),
        Command::OracleDft { samples, output } => cmd_oracle_dft(samples, output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
