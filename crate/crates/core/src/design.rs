//! Parameter selection, the Vandermonde-lifted subspace family, and the two
//! sampling sets built from it.
//!
//! A design fixes `h`-dimensional subspaces `H_1, ..., H_n` of `F_p^r` such
//! that any `m` of them span the whole space, complements `x_{l,i}` for each
//! of them, and the dyadic exponent set `K` used by the one-sparse decoder.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{
    all_vectors, complete_basis, ensure_prime, rank, rank_and_span, ExtField, ExtFieldElement,
    FpMatrix, FpVector,
};
use crate::spectral::annihilator_contains;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesignParams {
    pub p: u32,
    pub r: usize,
    pub t: usize,
    /// Dimension of every subspace.
    pub h: usize,
    /// Any `m` subspaces of the family span `F_p^r`; equals `s`.
    pub m: usize,
    /// Family size `4t(m-1)+1`.
    pub n: usize,
    pub q: u64,
    pub s: usize,
}

impl DesignParams {
    /// Vote threshold: a character is a candidate once it collects more than
    /// `2t(m-1)` votes.
    pub fn vote_threshold(&self) -> usize {
        2 * self.t * (self.m - 1)
    }

    pub fn subspace_size(&self) -> u64 {
        self.q
    }
}

fn checked_pow(p: u32, h: usize) -> Option<u64> {
    (p as u64).checked_pow(h as u32)
}

/// Picks the smallest `h >= 1` with `4t(ceil(r/h) - 1) <= p^h`.
pub fn select_parameters(p: u32, r: usize, t: usize) -> Result<DesignParams> {
    ensure_prime(p)?;
    if r == 0 || t == 0 {
        return Err(Error::InvalidParameters(format!(
            "r and t must be positive (got r={r}, t={t})"
        )));
    }
    for h in 1..=r {
        let s = r.div_ceil(h);
        let need = 4 * t as u64 * (s as u64 - 1);
        // p^h beyond u64 trivially satisfies the inequality.
        let fits = checked_pow(p, h).is_none_or(|q| need <= q);
        if fits {
            let q = checked_pow(p, h)
                .ok_or_else(|| Error::InvalidParameters(format!("p^h = {p}^{h} overflows")))?;
            return Ok(DesignParams {
                p,
                r,
                t,
                h,
                m: s,
                n: 4 * t * (s - 1) + 1,
                q,
                s,
            });
        }
    }
    unreachable!("h = r always satisfies the inequality")
}

/// First `n` points of `{(1, x, ..., x^(s-1)) : x in F_q} ∪ {(0, ..., 0, 1)}`,
/// field elements in index order and the point `(0, ..., 0, 1)` last.
///
/// Any `s` of the `q + 1` points are linearly independent over `F_q`. For
/// `s = 1` every point is `(1)`, so the result is a multiset.
pub fn vandermonde_set(field: &ExtField, s: usize, n: usize) -> Result<Vec<Vec<ExtFieldElement>>> {
    let available = field.order() as usize + 1;
    if n > available {
        return Err(Error::TooManyPoints {
            requested: n,
            available,
        });
    }
    let mut points = Vec::with_capacity(n);
    for x in field.elements().take(n) {
        let mut row = Vec::with_capacity(s);
        let mut power = field.one();
        for _ in 0..s {
            row.push(power.clone());
            power = field.mul(&power, &x);
        }
        points.push(row);
    }
    if n == available {
        let mut last = vec![field.zero(); s];
        last[s - 1] = field.one();
        points.push(last);
    }
    Ok(points)
}

/// Flattens coefficient vectors of each coordinate, then keeps the first `r`
/// entries.
fn project(point: &[ExtFieldElement], r: usize, p: u32) -> FpVector {
    let flat = point
        .iter()
        .flat_map(|e| e.coeffs().iter().map(|&c| c as u64))
        .take(r);
    FpVector::from_reduced(flat, p)
}

/// One `h`-dimensional subspace with its complement and change-of-basis
/// matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Vec<FpVector>,
    complements: Vec<FpVector>,
    /// Rows: basis, then complements.
    solve: FpMatrix,
    solve_inv: FpMatrix,
}

impl Subspace {
    /// Fails if `basis ∪ complements` is not a basis of `F_p^r`.
    pub fn new(basis: Vec<FpVector>, complements: Vec<FpVector>, r: usize, p: u32) -> Result<Self> {
        if basis.len() + complements.len() != r {
            return Err(Error::DimensionMismatch(format!(
                "{} basis + {} complement vectors do not make {r}",
                basis.len(),
                complements.len()
            )));
        }
        if let Some(bad) = basis.iter().chain(&complements).find(|v| v.len() != r) {
            return Err(Error::DimensionMismatch(format!(
                "vector ({bad}) does not have length {r}"
            )));
        }
        let rows: Vec<FpVector> = basis.iter().chain(&complements).cloned().collect();
        let solve = FpMatrix::from_rows(&rows, r, p);
        let solve_inv = solve.inverse()?;
        Ok(Subspace {
            basis,
            complements,
            solve,
            solve_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FpVector] {
        &self.basis
    }

    pub fn complements(&self) -> &[FpVector] {
        &self.complements
    }

    pub fn solve_matrix(&self) -> &FpMatrix {
        &self.solve
    }

    pub fn solve_inverse(&self) -> &FpMatrix {
        &self.solve_inv
    }

    /// `shift + sum_k alpha_k b_k` for every coefficient tuple `alpha` in
    /// lexicographic order.
    pub fn coset_points(&self, shift: &FpVector, p: u32) -> Vec<FpVector> {
        all_vectors(p, self.dim())
            .map(|alpha| {
                let mut x = shift.clone();
                for (&a, b) in alpha.coords().iter().zip(&self.basis) {
                    x.add_scaled_assign(a, b, p);
                }
                x
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFamily {
    p: u32,
    r: usize,
    subspaces: Vec<Subspace>,
}

impl SubspaceFamily {
    pub fn new(p: u32, r: usize, subspaces: Vec<Subspace>) -> Self {
        SubspaceFamily { p, r, subspaces }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn get(&self, j: usize) -> &Subspace {
        &self.subspaces[j]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Subspace> {
        self.subspaces.iter()
    }
}

/// Pulls the `F_q`-lines spanned by `points` down to `h`-dimensional
/// subspaces of `F_p^r`.
///
/// The image of `span_{F_q}{a}` is spanned by the projections of
/// `z^k a, k < h`. An image of dimension below `h` is padded with `e_1, e_2,
/// ...` (skipping vectors already in the span). Each basis is stored in
/// reduced row-echelon form and completed with standard basis vectors.
pub fn lift_family(
    params: &DesignParams,
    field: &ExtField,
    points: &[Vec<ExtFieldElement>],
) -> Result<SubspaceFamily> {
    let (p, r, h) = (params.p, params.r, params.h);
    let mut subspaces = Vec::with_capacity(points.len());
    for a in points {
        let mut gens: Vec<FpVector> = (0..h)
            .map(|k| {
                let zk = field.monomial(k);
                let scaled: Vec<ExtFieldElement> = a.iter().map(|c| field.mul(&zk, c)).collect();
                project(&scaled, r, p)
            })
            .collect();
        let mut dim = rank(&gens, p);
        for j in 0..r {
            if dim == h {
                break;
            }
            gens.push(FpVector::unit(r, j));
            let d = rank(&gens, p);
            if d > dim {
                dim = d;
            } else {
                gens.pop();
            }
        }
        let (dim, basis) = rank_and_span(&gens, p);
        debug_assert_eq!(dim, h);
        let complements = complete_basis(&basis, r, p);
        subspaces.push(Subspace::new(basis, complements, r, p)?);
    }
    Ok(SubspaceFamily::new(p, r, subspaces))
}

/// `K = {0} ∪ {2^i : 0 <= i <= k}` with `k` minimal such that `2^k >= p/3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentSet {
    p: u32,
    k: u32,
    elements: Vec<u32>,
}

impl ExponentSet {
    pub fn new(p: u32) -> Self {
        let mut k = 0u32;
        while 3u64 << k < p as u64 {
            k += 1;
        }
        let mut elements = vec![0];
        elements.extend((0..=k).map(|i| ((1u64 << i) % p as u64) as u32));
        ExponentSet { p, k, elements }
    }

    /// Rebuilds from an explicit list, which must match the canonical set.
    pub fn from_elements(p: u32, elements: Vec<u32>) -> Result<Self> {
        let canonical = ExponentSet::new(p);
        if canonical.elements != elements {
            return Err(Error::InvalidParameters(format!(
                "exponent set {elements:?} differs from {:?} for p={p}",
                canonical.elements
            )));
        }
        Ok(canonical)
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `0, 1, 2, 4, ..., 2^k` (reduced mod p).
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    /// `2^0, ..., 2^k`.
    pub fn powers(&self) -> &[u32] {
        &self.elements[1..]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Gamma1,
    Gamma2,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Gamma1 => "gamma1",
            Variant::Gamma2 => "gamma2",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma1" => Ok(Variant::Gamma1),
            "gamma2" => Ok(Variant::Gamma2),
            other => Err(Error::InvalidParameters(format!(
                "unknown variant {other:?}"
            ))),
        }
    }
}

/// One coset `H_i + k x_{l,i}` of a sampling set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetBlock {
    pub subspace: usize,
    /// `None` for the unshifted subspace itself.
    pub complement: Option<usize>,
    pub k: u32,
    pub shift: FpVector,
    pub points: Vec<FpVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingSet {
    pub variant: Variant,
    /// Deduplicated, sorted.
    pub points: Vec<FpVector>,
    pub cosets: Vec<CosetBlock>,
}

impl SamplingSet {
    fn from_blocks(variant: Variant, cosets: Vec<CosetBlock>) -> Self {
        let points: BTreeSet<FpVector> = cosets
            .iter()
            .flat_map(|b| b.points.iter().cloned())
            .collect();
        SamplingSet {
            variant,
            points: points.into_iter().collect(),
            cosets,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &FpVector) -> bool {
        self.points.binary_search(x).is_ok()
    }
}

/// Union of the subspaces.
pub fn build_gamma1(family: &SubspaceFamily) -> SamplingSet {
    let (p, r) = (family.modulus(), family.ambient_dim());
    let zero = FpVector::zero(r);
    let cosets = family
        .iter()
        .enumerate()
        .map(|(i, sub)| CosetBlock {
            subspace: i,
            complement: None,
            k: 0,
            shift: zero.clone(),
            points: sub.coset_points(&zero, p),
        })
        .collect();
    SamplingSet::from_blocks(Variant::Gamma1, cosets)
}

/// Union of the cosets `H_i + k x_{l,i}` for `k` in `K` and every complement
/// `l`. The `k = 0` coset is kept once per subspace, so the set contains
/// `Γ₁` even when `h = r`.
pub fn build_gamma2(family: &SubspaceFamily, exponents: &ExponentSet) -> SamplingSet {
    let (p, r) = (family.modulus(), family.ambient_dim());
    let zero = FpVector::zero(r);
    let mut cosets = Vec::new();
    for (i, sub) in family.iter().enumerate() {
        cosets.push(CosetBlock {
            subspace: i,
            complement: None,
            k: 0,
            shift: zero.clone(),
            points: sub.coset_points(&zero, p),
        });
        for (l, x) in sub.complements().iter().enumerate() {
            for &k in exponents.elements().iter().filter(|&&k| k != 0) {
                let shift = x.scale(k, p);
                cosets.push(CosetBlock {
                    subspace: i,
                    complement: Some(l),
                    k,
                    points: sub.coset_points(&shift, p),
                    shift,
                });
            }
        }
    }
    SamplingSet::from_blocks(Variant::Gamma2, cosets)
}

/// Calls `visit` with every `m`-subset of `0..n` (indices increasing);
/// stops early when `visit` returns `false`.
fn for_each_subset(n: usize, m: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if m > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        if !visit(&idx) {
            return false;
        }
        let Some(pos) = (0..m).rev().find(|&i| idx[i] != i + n - m) else {
            return true;
        };
        idx[pos] += 1;
        for i in pos + 1..m {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// True iff every `m` of the subspaces jointly span `F_p^r` (brute force).
pub fn verify_m_generating(family: &SubspaceFamily, m: usize) -> bool {
    let (p, r) = (family.modulus(), family.ambient_dim());
    if m == 0 {
        return r == 0;
    }
    for_each_subset(family.len(), m, |subset| {
        let vectors: Vec<FpVector> = subset
            .iter()
            .flat_map(|&i| family.get(i).basis().iter().cloned())
            .collect();
        rank(&vectors, p) == r
    })
}

/// Largest number of subspaces whose annihilator contains a single nonzero
/// character, over all nonzero labels of `F_p^r`.
pub fn max_coherence_count(family: &SubspaceFamily) -> usize {
    let (p, r) = (family.modulus(), family.ambient_dim());
    all_vectors(p, r)
        .skip(1)
        .map(|y| {
            family
                .iter()
                .filter(|sub| annihilator_contains(sub.basis(), &y, p))
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// Sizes of both sampling sets next to their guaranteed bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeReport {
    pub gamma1: usize,
    pub gamma2: usize,
    /// `n p^h`
    pub family_points: u64,
    /// `16 p t^2 r^2`
    pub gamma1_bound: u64,
    /// `16 p t^2 r^3 (2 + log2 p)`
    pub gamma2_bound: f64,
    pub exponent_count: usize,
}

impl SizeReport {
    pub fn family_bound_holds(&self) -> bool {
        self.family_points < self.gamma1_bound
    }

    pub fn gamma1_bound_holds(&self) -> bool {
        self.gamma1 as u64 <= self.family_points && self.gamma1 as u64 <= self.gamma1_bound
    }

    pub fn gamma2_bound_holds(&self) -> bool {
        (self.gamma2 as f64) <= self.gamma2_bound
    }

    /// `|K| <= 2 + log2 p`, i.e. `2^(|K|-2) <= p`.
    pub fn exponent_bound_holds(&self, p: u32) -> bool {
        self.exponent_count < 2 || (1u64 << (self.exponent_count - 2)) <= p as u64
    }
}

/// A complete design: parameters, subspace family and exponent set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingDesign {
    params: DesignParams,
    family: SubspaceFamily,
    exponents: ExponentSet,
}

impl SamplingDesign {
    pub fn construct(p: u32, r: usize, t: usize) -> Result<Self> {
        let params = select_parameters(p, r, t)?;
        let field = ExtField::new(p, params.h)?;
        let points = vandermonde_set(&field, params.s, params.n)?;
        let family = lift_family(&params, &field, &points)?;
        Ok(SamplingDesign {
            params,
            family,
            exponents: ExponentSet::new(p),
        })
    }

    /// Assembles a design from stored parts without checking that the
    /// family is `m`-generating; see [`verify_m_generating`].
    pub fn from_parts(
        params: DesignParams,
        family: SubspaceFamily,
        exponents: ExponentSet,
    ) -> Result<Self> {
        if family.len() != params.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} subspaces, found {}",
                params.n,
                family.len()
            )));
        }
        if let Some(bad) = family.iter().position(|s| s.dim() != params.h) {
            return Err(Error::DimensionMismatch(format!(
                "subspace {} has dimension {}, expected {}",
                bad + 1,
                family.get(bad).dim(),
                params.h
            )));
        }
        Ok(SamplingDesign {
            params,
            family,
            exponents,
        })
    }

    pub fn params(&self) -> &DesignParams {
        &self.params
    }

    pub fn family(&self) -> &SubspaceFamily {
        &self.family
    }

    pub fn exponents(&self) -> &ExponentSet {
        &self.exponents
    }

    pub fn gamma1(&self) -> SamplingSet {
        build_gamma1(&self.family)
    }

    pub fn gamma2(&self) -> SamplingSet {
        build_gamma2(&self.family, &self.exponents)
    }

    pub fn sampling_set(&self, variant: Variant) -> SamplingSet {
        match variant {
            Variant::Gamma1 => self.gamma1(),
            Variant::Gamma2 => self.gamma2(),
        }
    }

    pub fn is_m_generating(&self) -> bool {
        verify_m_generating(&self.family, self.params.m)
    }

    pub fn size_report(&self) -> SizeReport {
        let DesignParams { p, r, t, n, q, .. } = self.params;
        let (p64, t64, r64) = (p as u64, t as u64, r as u64);
        SizeReport {
            gamma1: self.gamma1().len(),
            gamma2: self.gamma2().len(),
            family_points: n as u64 * q,
            gamma1_bound: 16 * p64 * t64 * t64 * r64 * r64,
            gamma2_bound: 16.0
                * (p64 * t64 * t64 * r64 * r64 * r64) as f64
                * (2.0 + (p as f64).log2()),
            exponent_count: self.exponents.len(),
        }
    }
}
