//! Dense exact linear algebra over prime fields, canonical subspaces, and
//! subspace counting/enumeration.
//!
//! Matrices store reduced residues mod a prime `p`. A [`Subspace`] is kept
//! in reduced row echelon form, which makes equality of subspaces literal
//! equality of the struct. Counts are exact [`BigCount`] values.

use crate::caps::Caps;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exact nonnegative count that may exceed machine range.
pub type BigCount = BigUint;

/// Arithmetic helpers mod a prime. Values are reduced residues in `[0, p)`.
pub mod fp {
    pub fn add(p: u64, a: u64, b: u64) -> u64 {
        (a + b) % p
    }

    pub fn sub(p: u64, a: u64, b: u64) -> u64 {
        (a + p - b % p) % p
    }

    pub fn neg(p: u64, a: u64) -> u64 {
        (p - a % p) % p
    }

    pub fn mul(p: u64, a: u64, b: u64) -> u64 {
        // p stays far below 2^32 in practice; widen to be safe.
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn pow(p: u64, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % p;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(p, acc, a);
            }
            a = mul(p, a, a);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue, by Fermat.
    pub fn inv(p: u64, a: u64) -> u64 {
        debug_assert!(a % p != 0, "inverse of zero mod {p}");
        pow(p, a, p - 2)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Decompose `q = p^e` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = q;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            return if m == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// Dense matrix over F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        assert!(is_prime(p), "modulus {p} must be prime");
        FpMatrix { p, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = FpMatrix::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from rows, reducing entries mod p.
    pub fn from_rows(p: u64, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = FpMatrix::zero(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = FpMatrix::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = fp::add(self.p, out.get(i, j), fp::mul(self.p, a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = fp::add(self.p, acc, fp::mul(self.p, self.get(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form: pivots scaled to 1, pivot columns cleared,
    /// rows ordered by pivot column. Returns (rref, rank, pivot columns).
    pub fn rref(&self) -> (FpMatrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let p = m.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pivot_row) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pivot_row != r {
                for j in 0..m.cols {
                    let a = m.get(r, j);
                    let b = m.get(pivot_row, j);
                    m.set(r, j, b);
                    m.set(pivot_row, j, a);
                }
            }
            let inv = fp::inv(p, m.get(r, c));
            for j in 0..m.cols {
                m.set(r, j, fp::mul(p, m.get(r, j), inv));
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let f = m.get(i, c);
                    for j in 0..m.cols {
                        let v = fp::sub(p, m.get(i, j), fp::mul(p, f, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Inverse of a square matrix, if it exists.
    pub fn invert(&self) -> Option<FpMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = FpMatrix::zero(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, _, pivots) = aug.rref();
        // Invertible iff every pivot falls in the left block.
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return None;
        }
        let mut out = FpMatrix::zero(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Some(out)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Basis for the right null space {v : Av = 0}, one vector per free
    /// column of the RREF. Empty when the matrix has full column rank.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let (r, _, pivots) = self.rref();
        let mut out = Vec::new();
        for c in 0..self.cols {
            if pivots.binary_search(&c).is_ok() {
                continue;
            }
            // Free column c: set v[c] = 1, solve pivot coordinates.
            let mut v = vec![0; self.cols];
            v[c] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = fp::neg(self.p, r.get(row, c));
            }
            out.push(v);
        }
        out
    }
}

/// Subspace of F_p^n held in canonical form: the basis matrix is the RREF
/// of any spanning set, with zero rows dropped. Two values are equal as
/// structs iff they are equal as subspaces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subspace {
    p: u64,
    ambient: usize,
    // (rank x ambient) RREF rows; kept sorted by pivot column.
    basis: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn zero(p: u64, ambient: usize) -> Self {
        assert!(is_prime(p), "modulus {p} must be prime");
        Subspace { p, ambient, basis: Vec::new() }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        let rows: Vec<Vec<u64>> = (0..ambient)
            .map(|i| {
                let mut r = vec![0; ambient];
                r[i] = 1;
                r
            })
            .collect();
        Subspace { p, ambient, basis: rows }
    }

    /// Span of the given rows.
    pub fn from_rows(p: u64, ambient: usize, rows: &[Vec<u64>]) -> Self {
        let m = FpMatrix::from_rows(p, ambient, rows);
        let (r, rank, _) = m.rref();
        let basis = (0..rank).map(|i| r.row(i).to_vec()).collect();
        Subspace { p, ambient, basis }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    /// Reduce `v` against the basis; returns the residual.
    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.iter().map(|&x| x % self.p).collect::<Vec<_>>();
        for row in &self.basis {
            let pivot = row.iter().position(|&x| x != 0).expect("no zero basis rows");
            if v[pivot] != 0 {
                let f = v[pivot];
                for j in 0..self.ambient {
                    v[j] = fp::sub(self.p, v[j], fp::mul(self.p, f, row[j]));
                }
            }
        }
        v
    }

    pub fn contains_vec(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        other.basis.iter().all(|r| self.contains_vec(r))
    }

    /// Smallest subspace containing both.
    pub fn join(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_rows(self.p, self.ambient, &rows)
    }

    /// All vectors of the subspace, by enumerating coefficient tuples.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let p = self.p;
        let k = self.dim();
        let total = (p as u128).pow(k as u32);
        (0..total).map(move |mut idx| {
            let mut v = vec![0u64; self.ambient];
            for row in &self.basis {
                let c = (idx % p as u128) as u64;
                idx /= p as u128;
                if c != 0 {
                    for j in 0..self.ambient {
                        v[j] = fp::add(p, v[j], fp::mul(p, c, row[j]));
                    }
                }
            }
            v
        })
    }
}

/// Gaussian binomial `[n choose k]_q`: the number of k-dimensional
/// subspaces of F_q^n, for q >= 2 a prime power.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> Result<BigCount> {
    if prime_power(q).is_none() {
        return Err(Error::domain(format!("q = {q} is not a prime power >= 2")));
    }
    if k > n {
        return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n - i) - BigUint::one();
        den *= q.pow(i + 1) - BigUint::one();
    }
    let (quot, rem) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(rem.is_zero(), "gaussian binomial division must be exact");
    Ok(quot)
}

/// Total number of subspaces of F_q^n, all dimensions.
pub fn count_all_subspaces(n: u32, q: u64) -> Result<BigCount> {
    let mut total = BigUint::zero();
    for k in 0..=n {
        total += gaussian_binomial(n, k, q)?;
    }
    Ok(total)
}

/// Every subspace of F_q^n of the given codimension, q prime, in canonical
/// form and sorted lexicographically by basis entries.
///
/// Guarded by the enumeration cap on `q^(n * (n - codim))` candidate
/// basis tuples.
pub fn enumerate_subspaces(n: usize, q: u64, codim: usize, caps: &Caps) -> Result<Vec<Subspace>> {
    if !is_prime(q) {
        return Err(Error::domain(format!("q = {q} must be prime to enumerate subspaces")));
    }
    if codim > n {
        return Err(Error::domain(format!("codim = {codim} exceeds n = {n}")));
    }
    let k = n - codim;
    let mut needed: u128 = 1;
    for _ in 0..(n * k) {
        needed = needed.saturating_mul(q as u128);
        if needed > caps.enumeration as u128 {
            return Err(Error::Cap {
                cap: "enumeration",
                limit: caps.enumeration as u128,
                needed,
            });
        }
    }

    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // Free entries sit strictly right of each pivot, off pivot columns.
        let mut free_slots = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            for c in (pc + 1)..n {
                if !pivots.contains(&c) {
                    free_slots.push((i, c));
                }
            }
        }
        let combos = (q as u128).pow(free_slots.len() as u32);
        for mut idx in 0..combos {
            let mut rows = vec![vec![0u64; n]; k];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i][pc] = 1;
            }
            for &(i, c) in &free_slots {
                rows[i][c] = (idx % q as u128) as u64;
                idx /= q as u128;
            }
            out.push(Subspace { p: q, ambient: n, basis: rows });
        }

        // Next pivot-column combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                pivots.clear();
                break;
            }
            i -= 1;
            if pivots[i] < n - (k - i) {
                pivots[i] += 1;
                for j in (i + 1)..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
        if pivots.is_empty() {
            break;
        }
    }
    if k == 0 {
        out.push(Subspace::zero(q, n));
    }
    out.sort_by(|a, b| a.basis.cmp(&b.basis));
    out.dedup();
    Ok(out)
}
