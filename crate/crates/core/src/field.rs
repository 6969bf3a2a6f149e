//! Arithmetic over the prime field `F_p` and its extension `F_q`, `q = p^h`.
//!
//! Residues are stored as `u32` and reduced after every operation. Vectors of
//! `F_p^r` double as character labels: `y` stands for the character
//! `x -> omega_p^<x, y>`.

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn ensure_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    add_mod(a, p - b % p, p)
}

pub fn pow_mod(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse of a nonzero residue (Fermat).
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p as u64 - 2, p)
}

/// A point of `F_p^r`, or dually the label of a character.
///
/// The modulus is carried by the surrounding context (design, field), not by
/// the vector itself. Ordering is lexicographic in the coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector(Vec<u32>);

impl FpVector {
    pub fn new(coords: Vec<u32>, p: u32) -> Result<Self> {
        if let Some(c) = coords.iter().find(|&&c| c >= p) {
            return Err(Error::DimensionMismatch(format!(
                "coordinate {c} is not a residue mod {p}"
            )));
        }
        Ok(FpVector(coords))
    }

    /// Reduces every coordinate mod `p`.
    pub fn from_reduced(coords: impl IntoIterator<Item = u64>, p: u32) -> Self {
        FpVector(coords.into_iter().map(|c| (c % p as u64) as u32).collect())
    }

    pub fn zero(r: usize) -> Self {
        FpVector(vec![0; r])
    }

    /// Standard basis vector `e_j` (0-based `j`).
    pub fn unit(r: usize, j: usize) -> Self {
        let mut v = vec![0; r];
        v[j] = 1;
        FpVector(v)
    }

    /// Decodes `index` as a base-`p` numeral, first coordinate most
    /// significant, so index order agrees with lexicographic order.
    pub fn from_index(mut index: u64, p: u32, r: usize) -> Self {
        let mut v = vec![0u32; r];
        for slot in v.iter_mut().rev() {
            *slot = (index % p as u64) as u32;
            index /= p as u64;
        }
        FpVector(v)
    }

    pub fn to_index(&self, p: u32) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &c| acc * p as u64 + c as u64)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &FpVector, p: u32) -> FpVector {
        debug_assert_eq!(self.len(), other.len());
        FpVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| add_mod(a, b, p))
                .collect(),
        )
    }

    pub fn sub(&self, other: &FpVector, p: u32) -> FpVector {
        debug_assert_eq!(self.len(), other.len());
        FpVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| sub_mod(a, b, p))
                .collect(),
        )
    }

    pub fn scale(&self, k: u32, p: u32) -> FpVector {
        FpVector(self.0.iter().map(|&a| mul_mod(a, k, p)).collect())
    }

    /// `self + k * other`, in place.
    pub fn add_scaled_assign(&mut self, k: u32, other: &FpVector, p: u32) {
        if k == 0 {
            return;
        }
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a = add_mod(*a, mul_mod(k, b, p), p);
        }
    }

    pub fn dot(&self, other: &FpVector, p: u32) -> u32 {
        debug_assert_eq!(self.len(), other.len());
        let s = self
            .0
            .iter()
            .zip(&other.0)
            .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p as u64);
        s as u32
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// All vectors of `F_p^len` in lexicographic order.
pub fn all_vectors(p: u32, len: usize) -> impl Iterator<Item = FpVector> {
    let count = (p as u64).pow(len as u32);
    (0..count).map(move |i| FpVector::from_index(i, p, len))
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    nrows: usize,
    ncols: usize,
    entries: Vec<u32>,
}

impl FpMatrix {
    pub fn from_rows(rows: &[FpVector], ncols: usize, p: u32) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "row length mismatch");
            entries.extend(row.coords().iter().map(|&c| c % p));
        }
        FpMatrix {
            p,
            nrows: rows.len(),
            ncols,
            entries,
        }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1 % p;
        }
        FpMatrix {
            p,
            nrows: n,
            ncols: n,
            entries,
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.ncols + j]
    }

    pub fn row(&self, i: usize) -> FpVector {
        FpVector(self.entries[i * self.ncols..(i + 1) * self.ncols].to_vec())
    }

    pub fn column(&self, j: usize) -> FpVector {
        FpVector((0..self.nrows).map(|i| self.get(i, j)).collect())
    }

    pub fn mul_vec(&self, v: &FpVector) -> FpVector {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let p = self.p;
        FpVector(
            (0..self.nrows)
                .map(|i| {
                    let row = &self.entries[i * self.ncols..(i + 1) * self.ncols];
                    row.iter()
                        .zip(v.coords())
                        .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p as u64)
                        as u32
                })
                .collect(),
        )
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<FpMatrix> {
        let n = self.nrows;
        if n != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.nrows, self.ncols
            )));
        }
        let p = self.p;
        let w = 2 * n;
        let mut a = vec![0u32; n * w];
        for i in 0..n {
            a[i * w..i * w + n].copy_from_slice(&self.entries[i * n..(i + 1) * n]);
            a[i * w + n + i] = 1 % p;
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r * w + col] != 0)
                .ok_or(Error::SingularMatrix(p))?;
            if pivot != col {
                for k in 0..w {
                    a.swap(pivot * w + k, col * w + k);
                }
            }
            let inv = inv_mod(a[col * w + col], p);
            for k in 0..w {
                a[col * w + k] = mul_mod(a[col * w + k], inv, p);
            }
            for r in 0..n {
                let factor = a[r * w + col];
                if r == col || factor == 0 {
                    continue;
                }
                for k in 0..w {
                    let sub = mul_mod(factor, a[col * w + k], p);
                    a[r * w + k] = sub_mod(a[r * w + k], sub, p);
                }
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            entries.extend_from_slice(&a[i * w + n..(i + 1) * w]);
        }
        Ok(FpMatrix {
            p,
            nrows: n,
            ncols: n,
            entries,
        })
    }
}

/// Rank of the `F_p`-span of `vectors` together with its reduced row-echelon
/// basis.
pub fn rank_and_span(vectors: &[FpVector], p: u32) -> (usize, Vec<FpVector>) {
    let Some(first) = vectors.first() else {
        return (0, Vec::new());
    };
    let ncols = first.len();
    let mut rows: Vec<Vec<u32>> = vectors
        .iter()
        .map(|v| v.coords().iter().map(|&c| c % p).collect())
        .collect();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p);
        for c in rows[rank].iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (c, &pv) in row.iter_mut().zip(&pivot_row) {
                *c = sub_mod(*c, mul_mod(factor, pv, p), p);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rank, rows.into_iter().map(FpVector).collect())
}

pub fn rank(vectors: &[FpVector], p: u32) -> usize {
    rank_and_span(vectors, p).0
}

/// Greedily picks standard basis vectors `e_1, e_2, ...` that each enlarge
/// the span, until `basis` plus the picks spans `F_p^r`.
pub fn complete_basis(basis: &[FpVector], r: usize, p: u32) -> Vec<FpVector> {
    let mut current: Vec<FpVector> = basis.to_vec();
    let mut current_rank = rank(&current, p);
    let mut picked = Vec::new();
    for j in 0..r {
        if current_rank == r {
            break;
        }
        current.push(FpVector::unit(r, j));
        let new_rank = rank(&current, p);
        if new_rank > current_rank {
            current_rank = new_rank;
            picked.push(FpVector::unit(r, j));
        } else {
            current.pop();
        }
    }
    picked
}

/// Solves `m * w = v` over `F_p`.
pub fn solve_linear(m: &FpMatrix, v: &FpVector) -> Result<FpVector> {
    if m.nrows() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, vector has {} entries",
            m.nrows(),
            v.len()
        )));
    }
    Ok(m.inverse()?.mul_vec(v))
}

// Dense polynomials over F_p, coefficient of z^i at index i, no trailing zeros.

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut a = poly_trim(a.to_vec());
    let modulus = poly_trim(modulus.to_vec());
    let dm = modulus.len() - 1;
    let lead_inv = inv_mod(modulus[dm], p);
    while a.len() > dm {
        let top = a.len() - 1;
        let factor = mul_mod(a[top], lead_inv, p);
        let shift = top - dm;
        for (i, &mc) in modulus.iter().enumerate() {
            a[shift + i] = sub_mod(a[shift + i], mul_mod(factor, mc, p), p);
        }
        a = poly_trim(a);
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    poly_trim(out)
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    poly_rem(&poly_mul(a, b, p), modulus, p)
}

fn poly_powmod(base: &[u32], mut exp: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut acc = poly_rem(&[1], modulus, p);
    let mut b = poly_rem(base, modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(&acc, &b, modulus, p);
        }
        b = poly_mulmod(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility test for a monic polynomial: no roots, and no factor of
/// degree `d <= deg/2`, detected through `gcd(z^(p^d) - z, f)`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let poly = poly_trim(poly.to_vec());
    if poly.len() < 2 {
        return false;
    }
    let deg = poly.len() - 1;
    if deg == 1 {
        return true;
    }
    let has_root = (0..p).any(|x| {
        poly.iter()
            .rev()
            .fold(0u32, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
            == 0
    });
    if has_root {
        return false;
    }
    let z = vec![0, 1];
    let mut frob = z.clone();
    for _ in 1..=deg / 2 {
        frob = poly_powmod(&frob, p as u64, &poly, p);
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = sub_mod(diff[1], 1, p);
        let g = poly_gcd(&poly, &poly_trim(diff), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The first monic irreducible polynomial of degree `h`, scanning candidates
/// `z^h + c_{h-1} z^{h-1} + ... + c_0` in increasing order of the base-`p`
/// numeral whose least significant digit is `c_0`.
///
/// Returns `h + 1` coefficients, constant term first.
pub fn find_irreducible(p: u32, h: usize) -> Vec<u32> {
    assert!(h >= 1, "degree must be positive");
    let count = (p as u64).pow(h as u32);
    for idx in 0..count {
        let mut poly = Vec::with_capacity(h + 1);
        let mut rest = idx;
        for _ in 0..h {
            poly.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Element of `F_q` as `b_0 + b_1 z + ... + b_{h-1} z^{h-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtFieldElement {
    coeffs: Vec<u32>,
}

impl ExtFieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// The extension field `F_{p^h}` realised modulo a fixed monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u32,
    h: usize,
    modulus: Vec<u32>,
}

impl ExtField {
    pub fn new(p: u32, h: usize) -> Result<Self> {
        ensure_prime(p)?;
        if h == 0 {
            return Err(Error::InvalidParameters(
                "extension degree must be >= 1".into(),
            ));
        }
        Ok(ExtField {
            p,
            h,
            modulus: find_irreducible(p, h),
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.h
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.h as u32)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, coeffs: &[u32]) -> ExtFieldElement {
        assert!(coeffs.len() <= self.h, "too many coefficients");
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x % self.p).collect();
        c.resize(self.h, 0);
        ExtFieldElement { coeffs: c }
    }

    pub fn zero(&self) -> ExtFieldElement {
        self.element(&[])
    }

    pub fn one(&self) -> ExtFieldElement {
        self.element(&[1])
    }

    /// `z^k` for `k < h`.
    pub fn monomial(&self, k: usize) -> ExtFieldElement {
        let mut c = vec![0; self.h];
        c[k] = 1 % self.p;
        ExtFieldElement { coeffs: c }
    }

    /// The `index`-th element: base-`p` digits of `index` are `b_0, b_1, ...`
    /// with `b_0` least significant.
    pub fn from_index(&self, mut index: u64) -> ExtFieldElement {
        let mut c = Vec::with_capacity(self.h);
        for _ in 0..self.h {
            c.push((index % self.p as u64) as u32);
            index /= self.p as u64;
        }
        ExtFieldElement { coeffs: c }
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = ExtFieldElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &ExtFieldElement, b: &ExtFieldElement) -> ExtFieldElement {
        ExtFieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| add_mod(x, y, self.p))
                .collect(),
        }
    }

    pub fn neg(&self, a: &ExtFieldElement) -> ExtFieldElement {
        ExtFieldElement {
            coeffs: a.coeffs.iter().map(|&x| sub_mod(0, x, self.p)).collect(),
        }
    }

    pub fn mul(&self, a: &ExtFieldElement, b: &ExtFieldElement) -> ExtFieldElement {
        let mut c = poly_mulmod(&a.coeffs, &b.coeffs, &self.modulus, self.p);
        c.resize(self.h, 0);
        ExtFieldElement { coeffs: c }
    }

    pub fn pow(&self, a: &ExtFieldElement, exp: u64) -> ExtFieldElement {
        let mut c = poly_powmod(&a.coeffs, exp, &self.modulus, self.p);
        c.resize(self.h, 0);
        ExtFieldElement { coeffs: c }
    }
}
