//! Line-based text formats for designs, spectra, sample tables and recovery
//! reports. All integers are base 10; floats carry 17 significant digits so
//! doubles round-trip exactly. Lines starting with `#` are comments unless a
//! format gives them meaning.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::design::{DesignParams, ExponentSet, SamplingDesign, Subspace, SubspaceFamily, Variant};
use crate::error::{Error, Result};
use crate::field::{ensure_prime, FpVector};
use crate::recovery::RecoveryReport;
use crate::spectral::{SampleTable, SparseSpectrum};

pub const DESIGN_MAGIC: &str = "FVSDESIGN v1";
pub const SAMPLES_MAGIC: &str = "FVSSAMPLES v1";
pub const REPORT_MAGIC: &str = "FVSRECOVERY v1";

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    /// Next non-blank line with its 1-based number.
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .by_ref()
            .map(|(i, l)| (i + 1, l.trim()))
            .find(|(_, l)| !l.is_empty())
    }

    fn expect_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_line()
            .ok_or_else(|| Error::parse(0, format!("unexpected end of input, expected {what}")))
    }
}

fn parse_ints<T: std::str::FromStr>(line_no: usize, text: &str) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| Error::parse(line_no, format!("not an integer: {tok:?}")))
        })
        .collect()
}

fn parse_vector(line_no: usize, text: &str, p: u32, r: usize) -> Result<FpVector> {
    let coords: Vec<u32> = parse_ints(line_no, text)?;
    if coords.len() != r {
        return Err(Error::parse(
            line_no,
            format!("expected {r} coordinates, found {}", coords.len()),
        ));
    }
    FpVector::new(coords, p).map_err(|e| Error::parse(line_no, e.to_string()))
}

/// Parses `x_1 ... x_r : re im`.
fn parse_entry(line_no: usize, text: &str, p: u32, r: usize) -> Result<(FpVector, Complex64)> {
    let (lhs, rhs) = text
        .split_once(':')
        .ok_or_else(|| Error::parse(line_no, "missing ':' separator"))?;
    let x = parse_vector(line_no, lhs, p, r)?;
    let nums: Vec<f64> = rhs
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| Error::parse(line_no, format!("not a number: {tok:?}")))
        })
        .collect::<Result<_>>()?;
    if nums.len() != 2 {
        return Err(Error::parse(line_no, "expected real and imaginary parts"));
    }
    Ok((x, Complex64::new(nums[0], nums[1])))
}

fn write_entry(out: &mut String, x: &FpVector, v: &Complex64) {
    writeln!(out, "{x} : {} {}", fmt_f64(v.re), fmt_f64(v.im)).unwrap();
}

pub fn design_to_text(design: &SamplingDesign) -> String {
    let prm = design.params();
    let mut out = String::new();
    writeln!(out, "{DESIGN_MAGIC}").unwrap();
    writeln!(
        out,
        "{} {} {} {} {} {}",
        prm.p, prm.r, prm.t, prm.h, prm.m, prm.n
    )
    .unwrap();
    for (i, sub) in design.family().iter().enumerate() {
        writeln!(out, "H {}", i + 1).unwrap();
        for b in sub.basis() {
            writeln!(out, "{b}").unwrap();
        }
        writeln!(out, "X {}", i + 1).unwrap();
        for x in sub.complements() {
            writeln!(out, "{x}").unwrap();
        }
    }
    let ks: Vec<String> = design
        .exponents()
        .elements()
        .iter()
        .map(|k| k.to_string())
        .collect();
    writeln!(out, "K {}", ks.join(" ")).unwrap();
    out
}

/// Reads a design back. Subspace dimensions and complements are checked;
/// the `m`-generating property is not (see `verify_m_generating`).
pub fn design_from_text(text: &str) -> Result<SamplingDesign> {
    let mut lines = Lines::new(text);
    let (no, magic) = lines.expect_line("header")?;
    if magic != DESIGN_MAGIC {
        return Err(Error::parse(no, format!("expected {DESIGN_MAGIC:?}")));
    }
    let (no, head) = lines.expect_line("parameters")?;
    let nums: Vec<u64> = parse_ints(no, head)?;
    let [p, r, t, h, m, n] = nums[..] else {
        return Err(Error::parse(no, "expected `p r t h m n`"));
    };
    let (p, r, t, h, m, n) = (
        p as u32, r as usize, t as usize, h as usize, m as usize, n as usize,
    );
    ensure_prime(p)?;
    if r == 0 || h == 0 || h > r || t == 0 || m == 0 || n == 0 {
        return Err(Error::parse(no, "parameters out of range"));
    }
    let q = (p as u64)
        .checked_pow(h as u32)
        .ok_or_else(|| Error::parse(no, "p^h overflows"))?;
    let params = DesignParams {
        p,
        r,
        t,
        h,
        m,
        n,
        q,
        s: r.div_ceil(h),
    };

    let mut subspaces = Vec::with_capacity(n);
    for i in 1..=n {
        let (no, tag) = lines.expect_line("subspace header")?;
        if tag != format!("H {i}") {
            return Err(Error::parse(no, format!("expected `H {i}`")));
        }
        let mut basis = Vec::with_capacity(h);
        for _ in 0..h {
            let (no, l) = lines.expect_line("basis vector")?;
            basis.push(parse_vector(no, l, p, r)?);
        }
        let (no, tag) = lines.expect_line("complement header")?;
        if tag != format!("X {i}") {
            return Err(Error::parse(no, format!("expected `X {i}`")));
        }
        let mut complements = Vec::with_capacity(r - h);
        for _ in 0..r - h {
            let (no, l) = lines.expect_line("complement vector")?;
            complements.push(parse_vector(no, l, p, r)?);
        }
        subspaces.push(
            Subspace::new(basis, complements, r, p).map_err(|e| Error::parse(no, e.to_string()))?,
        );
    }
    let (no, kline) = lines.expect_line("exponent set")?;
    let rest = kline
        .strip_prefix('K')
        .ok_or_else(|| Error::parse(no, "expected `K ...`"))?;
    let exponents = ExponentSet::from_elements(p, parse_ints(no, rest)?)?;
    if let Some((no, _)) = lines.next_line() {
        return Err(Error::parse(no, "trailing content after exponent set"));
    }
    SamplingDesign::from_parts(params, SubspaceFamily::new(p, r, subspaces), exponents)
}

pub fn spectrum_to_text(spectrum: &SparseSpectrum) -> String {
    let mut out = String::new();
    for (y, a) in spectrum.iter() {
        write_entry(&mut out, y, a);
    }
    out
}

pub fn spectrum_from_text(text: &str, p: u32, r: usize) -> Result<SparseSpectrum> {
    let mut out = SparseSpectrum::new(p, r);
    for (no, line) in Lines::new(text).inner.map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (y, a) = parse_entry(no, line, p, r)?;
        out.insert(y, a);
    }
    Ok(out)
}

/// Sample file; `seed` (when given) and the source variant are recorded as
/// `# seed N` / `# source gammaX` lines after the header.
pub fn samples_to_text(samples: &SampleTable, seed: Option<u64>) -> String {
    let mut out = String::new();
    writeln!(out, "{SAMPLES_MAGIC}").unwrap();
    writeln!(out, "{} {}", samples.modulus(), samples.dim()).unwrap();
    if let Some(v) = samples.source() {
        writeln!(out, "# source {v}").unwrap();
    }
    if let Some(s) = seed {
        writeln!(out, "# seed {s}").unwrap();
    }
    for (x, v) in samples.sorted() {
        write_entry(&mut out, x, v);
    }
    out
}

pub fn samples_from_text(text: &str) -> Result<SampleTable> {
    let mut lines = Lines::new(text);
    let (no, magic) = lines.expect_line("header")?;
    if magic != SAMPLES_MAGIC {
        return Err(Error::parse(no, format!("expected {SAMPLES_MAGIC:?}")));
    }
    let (no, head) = lines.expect_line("`p r`")?;
    let nums: Vec<u64> = parse_ints(no, head)?;
    let [p, r] = nums[..] else {
        return Err(Error::parse(no, "expected `p r`"));
    };
    let (p, r) = (p as u32, r as usize);
    ensure_prime(p)?;
    let mut source = None;
    let mut entries = Vec::new();
    while let Some((no, line)) = lines.next_line() {
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("source ") {
                source = Some(v.trim().parse::<Variant>()?);
            }
            continue;
        }
        entries.push(parse_entry(no, line, p, r)?);
    }
    let mut table = SampleTable::new(p, r, source);
    for (x, v) in entries {
        table.insert(x, v);
    }
    Ok(table)
}

pub fn report_to_text(
    design: &SamplingDesign,
    report: &RecoveryReport,
    seed: Option<u64>,
) -> String {
    let prm = design.params();
    let mut out = String::new();
    writeln!(out, "{REPORT_MAGIC}").unwrap();
    writeln!(
        out,
        "p {} r {} t {} h {} m {} n {} variant {}",
        prm.p, prm.r, prm.t, prm.h, prm.m, prm.n, report.variant
    )
    .unwrap();
    if let Some(s) = seed {
        writeln!(out, "# seed {s}").unwrap();
    }
    out.push_str(&spectrum_to_text(&report.spectrum));
    writeln!(out, "# diagnostics").unwrap();
    for sel in &report.diagnostics.selected {
        writeln!(
            out,
            "# subspace {} selected {}",
            sel.subspace + 1,
            sel.labels.len()
        )
        .unwrap();
    }
    writeln!(out, "# candidates {}", report.diagnostics.estimates.len()).unwrap();
    for (votes, count) in &report.diagnostics.vote_histogram {
        writeln!(out, "# votes {votes} characters {count}").unwrap();
    }
    out
}

/// Spectrum recorded in a report file.
pub fn report_spectrum_from_text(text: &str) -> Result<SparseSpectrum> {
    let mut lines = Lines::new(text);
    let (no, magic) = lines.expect_line("header")?;
    if magic != REPORT_MAGIC {
        return Err(Error::parse(no, format!("expected {REPORT_MAGIC:?}")));
    }
    let (no, head) = lines.expect_line("parameters")?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    let field = |key: &str| -> Result<u64> {
        toks.windows(2)
            .find(|w| w[0] == key)
            .and_then(|w| w[1].parse().ok())
            .ok_or_else(|| Error::parse(no, format!("missing `{key}`")))
    };
    let (p, r) = (field("p")? as u32, field("r")? as usize);
    let mut out = SparseSpectrum::new(p, r);
    while let Some((no, line)) = lines.next_line() {
        if line.starts_with('#') {
            continue;
        }
        let (y, a) = parse_entry(no, line, p, r)?;
        out.insert(y, a);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recovery::reconstruct_gamma1;
    use crate::spectral::sample_on;

    #[test]
    fn design_text_roundtrip() {
        for &(p, r, t) in &[(3u32, 4usize, 1usize), (5, 1, 3), (2, 5, 2), (7, 3, 2)] {
            let d = SamplingDesign::construct(p, r, t).unwrap();
            let text = design_to_text(&d);
            let back = design_from_text(&text).unwrap();
            assert_eq!(back, d);
            assert_eq!(design_to_text(&back), text);
        }
    }

    #[test]
    fn design_text_layout() {
        let d = SamplingDesign::construct(3, 4, 1).unwrap();
        let text = design_to_text(&d);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "FVSDESIGN v1");
        assert_eq!(lines[1], "3 4 1 2 2 5");
        assert_eq!(lines[2], "H 1");
        assert_eq!(lines[5], "X 1");
        assert_eq!(*lines.last().unwrap(), "K 0 1");
        // header, params, 5 * (2 tags + 2 basis + 2 complements), K
        assert_eq!(lines.len(), 2 + 5 * 6 + 1);
    }

    #[test]
    fn design_parse_errors() {
        assert!(matches!(
            design_from_text("nope"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert_eq!(
            design_from_text("FVSDESIGN v1\n4 2 1 2 1 1\n"),
            Err(Error::NotPrime(4))
        );
        let d = SamplingDesign::construct(3, 4, 1).unwrap();
        let text = design_to_text(&d).replace("K 0 1", "K 0 1 2");
        assert!(design_from_text(&text).is_err());
    }

    #[test]
    fn samples_and_spectrum_roundtrip() {
        let d = SamplingDesign::construct(5, 3, 2).unwrap();
        let mut s = SparseSpectrum::new(5, 3);
        s.insert(
            FpVector::new(vec![1, 2, 3], 5).unwrap(),
            Complex64::new(0.1, -1.0 / 3.0),
        );
        s.insert(
            FpVector::new(vec![4, 0, 0], 5).unwrap(),
            Complex64::new(std::f64::consts::PI, 2.0),
        );
        let back = spectrum_from_text(&spectrum_to_text(&s), 5, 3).unwrap();
        assert_eq!(back, s);

        let table = sample_on(&s, &d.gamma1());
        let text = samples_to_text(&table, Some(7));
        assert!(text.starts_with("FVSSAMPLES v1\n5 3\n# source gamma1\n# seed 7\n"));
        let back = samples_from_text(&text).unwrap();
        assert_eq!(back, table);

        let rep = reconstruct_gamma1(&table, &d).unwrap();
        let text = report_to_text(&d, &rep, Some(7));
        assert!(text.starts_with("FVSRECOVERY v1\np 5 r 3 t 2 h 2 m 2 n 9 variant gamma1\n"));
        assert!(text.contains("# diagnostics\n# subspace 1 selected 3\n"));
        assert_eq!(report_spectrum_from_text(&text).unwrap(), rep.spectrum);
    }

    #[test]
    fn malformed_entries() {
        assert!(spectrum_from_text("1 2 3 0.5 0.5\n", 5, 3).is_err());
        assert!(spectrum_from_text("1 2 : 0.5 0.5\n", 5, 3).is_err());
        assert!(spectrum_from_text("1 2 7 : 0.5 0.5\n", 5, 3).is_err());
        assert!(spectrum_from_text("1 2 3 : 0.5\n", 5, 3).is_err());
    }
}
