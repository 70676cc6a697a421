//! Matrices of determinant one over `Z/M`, and the action of `SL_n(F_p)` on
//! the lines of `F_p^n`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring_arith::{
    self, crt_join_moduli, factorize, gcd, inv_mod, is_prime, mul_mod, pow_mod, prime_power, primitive_root, reduce,
    ArithError, MODULUS_GUARD,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatError {
    #[error("matrix dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("modulus {0} must lie in [2, 2^31)")]
    Modulus(u64),
    #[error("expected {expected} entries, got {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("determinant is {det} mod {modulus}, not 1")]
    Determinant { det: u64, modulus: u64 },
    #[error("elementary matrix needs distinct indices < {n}, got ({i}, {j})")]
    ElementaryIndex { n: usize, i: usize, j: usize },
    #[error("-I has determinant -1 in odd dimension {0}; use a central scalar of order dividing {0}")]
    OddMinusIdentity(usize),
    #[error("no central element of order {m}: {m} does not divide gcd({n}, {p} - 1) = {g}")]
    CentralOrder { n: u64, p: u64, m: u64, g: u64 },
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error("{0} does not divide {1}")]
    NotADivisor(u64, u64),
    #[error("{0} is not prime; projective space needs a prime field")]
    NotPrimeField(u64),
    #[error("zero vector is not a projective point")]
    ZeroVector,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T> = std::result::Result<T, MatError>;

fn check_shape(n: usize, modulus: u64) -> Result<()> {
    if n < 2 {
        return Err(MatError::Dimension(n));
    }
    if !(2..MODULUS_GUARD).contains(&modulus) {
        return Err(MatError::Modulus(modulus));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Raw dense arithmetic on row-major reduced entries.

pub(crate) fn raw_mul(n: usize, m: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let t = out[i * n + j] + aik * b[k * n + j] % m;
                out[i * n + j] = if t >= m { t - m } else { t };
            }
        }
    }
    out
}

/// Determinant modulo a prime power `p^k` by elimination with
/// minimal-valuation pivots.
fn det_prime_power(n: usize, p: u64, q: u64, a: &[u64]) -> u64 {
    let mut a: Vec<u64> = a.iter().map(|x| x % q).collect();
    let valuation = |x: u64| {
        if x == 0 {
            u32::MAX
        } else {
            let (mut x, mut v) = (x, 0);
            while x % p == 0 {
                x /= p;
                v += 1;
            }
            v
        }
    };
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv_row) = (col..n).filter(|&r| a[r * n + col] != 0).min_by_key(|&r| valuation(a[r * n + col])) else {
            return 0;
        };
        if piv_row != col {
            for j in 0..n {
                a.swap(piv_row * n + j, col * n + j);
            }
            det = (q - det) % q;
        }
        let piv = a[col * n + col];
        let v = valuation(piv);
        let pv = p.pow(v);
        let unit_inv = inv_mod((piv / pv) % q, q).expect("unit part");
        for r in col + 1..n {
            let x = a[r * n + col];
            if x == 0 {
                continue;
            }
            let f = mul_mod((x / pv) % q, unit_inv, q);
            for j in col..n {
                let sub = mul_mod(f, a[col * n + j], q);
                a[r * n + j] = (a[r * n + j] + q - sub) % q;
            }
        }
        det = mul_mod(det, piv, q);
    }
    det
}

/// Determinant of an `n x n` matrix over `Z/m` for any modulus `m >= 2`.
pub(crate) fn raw_det(n: usize, m: u64, a: &[u64]) -> u64 {
    let parts = factorize(m);
    let moduli: Vec<u64> = parts.iter().map(|&(p, e)| p.pow(e)).collect();
    let dets: Vec<u64> = parts.iter().zip(&moduli).map(|(&(p, _), &q)| det_prime_power(n, p, q, a)).collect();
    crt_join_moduli(&dets, &moduli).expect("prime-power factors are coprime")
}

fn minor(n: usize, a: &[u64], row: usize, col: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity((n - 1) * (n - 1));
    for i in (0..n).filter(|&i| i != row) {
        for j in (0..n).filter(|&j| j != col) {
            out.push(a[i * n + j]);
        }
    }
    out
}

/// Signed cofactor `(-1)^(i+j) det(minor(i, j))`.
pub(crate) fn raw_cofactor(n: usize, m: u64, a: &[u64], i: usize, j: usize) -> u64 {
    let d = if n == 1 { 1 } else { raw_det(n - 1, m, &minor(n, a, i, j)) };
    if (i + j).is_multiple_of(2) {
        d
    } else {
        (m - d) % m
    }
}

fn inverse_adjugate(n: usize, m: u64, a: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = raw_cofactor(n, m, a, j, i);
        }
    }
    out
}

/// Gauss-Jordan over the local ring `Z/p^k`; each column of an invertible
/// matrix has a unit at or below the diagonal.
fn inverse_local(n: usize, p: u64, q: u64, a: &[u64]) -> Vec<u64> {
    let mut a: Vec<u64> = a.iter().map(|x| x % q).collect();
    let mut inv = vec![0u64; n * n];
    for i in 0..n {
        inv[i * n + i] = 1;
    }
    for col in 0..n {
        let piv_row =
            (col..n).find(|&r| !a[r * n + col].is_multiple_of(p)).expect("invertible matrix has a unit pivot");
        for j in 0..n {
            a.swap(piv_row * n + j, col * n + j);
            inv.swap(piv_row * n + j, col * n + j);
        }
        let pinv = inv_mod(a[col * n + col], q).expect("unit");
        for j in 0..n {
            a[col * n + j] = mul_mod(a[col * n + j], pinv, q);
            inv[col * n + j] = mul_mod(inv[col * n + j], pinv, q);
        }
        for r in (0..n).filter(|&r| r != col) {
            let f = a[r * n + col];
            if f == 0 {
                continue;
            }
            for j in 0..n {
                a[r * n + j] = (a[r * n + j] + q - mul_mod(f, a[col * n + j], q)) % q;
                inv[r * n + j] = (inv[r * n + j] + q - mul_mod(f, inv[col * n + j], q)) % q;
            }
        }
    }
    inv
}

fn inverse_gauss(n: usize, m: u64, a: &[u64]) -> Vec<u64> {
    let parts = factorize(m);
    let moduli: Vec<u64> = parts.iter().map(|&(p, e)| p.pow(e)).collect();
    let locals: Vec<Vec<u64>> = parts.iter().zip(&moduli).map(|(&(p, _), &q)| inverse_local(n, p, q, a)).collect();
    (0..n * n)
        .map(|idx| {
            let residues: Vec<u64> = locals.iter().map(|l| l[idx]).collect();
            crt_join_moduli(&residues, &moduli).expect("coprime")
        })
        .collect()
}

// ---------------------------------------------------------------------------

/// An element of `SL_n(Z/M)`: entries reduced into `[0, M)`, determinant 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct SLMat {
    n: usize,
    modulus: u64,
    entries: Vec<u64>,
}

/// Wire form: row-major integer rows annotated with the modulus.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    modulus: u64,
    rows: Vec<Vec<i64>>,
}

impl TryFrom<MatrixRepr> for SLMat {
    type Error = MatError;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        SLMat::from_rows(r.modulus, &r.rows)
    }
}

impl From<SLMat> for MatrixRepr {
    fn from(g: SLMat) -> Self {
        MatrixRepr { modulus: g.modulus, rows: g.rows() }
    }
}

impl fmt::Debug for SLMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SLMat(mod {}, {:?})", self.modulus, self.rows())
    }
}

impl SLMat {
    /// Builds a matrix from signed row-major entries, rejecting determinants
    /// other than 1.
    pub fn new(n: usize, modulus: u64, entries: &[i64]) -> Result<Self> {
        check_shape(n, modulus)?;
        if entries.len() != n * n {
            return Err(MatError::EntryCount { expected: n * n, found: entries.len() });
        }
        let entries: Vec<u64> = entries.iter().map(|&x| reduce(x, modulus)).collect();
        Self::from_reduced(n, modulus, entries)
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatError::EntryCount { expected: n * n, found: rows.iter().map(Vec::len).sum() });
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::new(n, modulus, &flat)
    }

    pub(crate) fn from_reduced(n: usize, modulus: u64, entries: Vec<u64>) -> Result<Self> {
        check_shape(n, modulus)?;
        let det = raw_det(n, modulus, &entries);
        if det != 1 % modulus {
            return Err(MatError::Determinant { det, modulus });
        }
        Ok(SLMat { n, modulus, entries })
    }

    /// Wraps entries known to have determinant 1.
    pub(crate) fn from_trusted(n: usize, modulus: u64, entries: Vec<u64>) -> Self {
        debug_assert_eq!(raw_det(n, modulus, &entries), 1 % modulus);
        SLMat { n, modulus, entries }
    }

    pub fn identity(n: usize, modulus: u64) -> Result<Self> {
        check_shape(n, modulus)?;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Ok(SLMat { n, modulus, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.iter().map(|&x| x as i64).collect()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    /// `Some(z)` when the matrix is the scalar `z I`.
    pub fn scalar_value(&self) -> Option<u64> {
        let z = self.get(0, 0);
        let scalar = (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { z } else { 0 }));
        scalar.then_some(z)
    }

    pub fn det(&self) -> u64 {
        raw_det(self.n, self.modulus, &self.entries)
    }

    pub fn try_mul(&self, rhs: &SLMat) -> Result<SLMat> {
        if self.n != rhs.n || self.modulus != rhs.modulus {
            return Err(MatError::Mismatch(format!(
                "{}x{} mod {} times {}x{} mod {}",
                self.n, self.n, self.modulus, rhs.n, rhs.n, rhs.modulus
            )));
        }
        Ok(SLMat {
            n: self.n,
            modulus: self.modulus,
            entries: raw_mul(self.n, self.modulus, &self.entries, &rhs.entries),
        })
    }

    /// Inverse: adjugate for `n <= 4`, elimination over each prime-power
    /// component otherwise.
    pub fn inverse(&self) -> SLMat {
        let entries = if self.n <= 4 {
            inverse_adjugate(self.n, self.modulus, &self.entries)
        } else {
            inverse_gauss(self.n, self.modulus, &self.entries)
        };
        SLMat { n: self.n, modulus: self.modulus, entries }
    }

    /// Inverse by elimination regardless of size.
    pub fn inverse_by_elimination(&self) -> SLMat {
        SLMat { n: self.n, modulus: self.modulus, entries: inverse_gauss(self.n, self.modulus, &self.entries) }
    }

    pub fn transpose(&self) -> SLMat {
        let n = self.n;
        let entries = (0..n * n).map(|idx| self.entries[(idx % n) * n + idx / n]).collect();
        SLMat { n, modulus: self.modulus, entries }
    }

    pub fn pow(&self, mut k: u64) -> SLMat {
        let mut base = self.clone();
        let mut acc = SLMat::identity(self.n, self.modulus).expect("valid shape");
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Multiplies by the scalar `z`; `z^n` must be 1.
    pub fn scale(&self, z: u64) -> Result<SLMat> {
        let m = self.modulus;
        let zn = pow_mod(z, self.n as u64, m);
        if zn != 1 % m {
            return Err(MatError::Determinant { det: zn, modulus: m });
        }
        Ok(SLMat { n: self.n, modulus: m, entries: self.entries.iter().map(|&x| mul_mod(x, z, m)).collect() })
    }

    /// Entrywise reduction to a divisor of the modulus.
    pub fn reduce_to(&self, modulus: u64) -> Result<SLMat> {
        if modulus < 2 || !self.modulus.is_multiple_of(modulus) {
            return Err(MatError::NotADivisor(modulus, self.modulus));
        }
        Ok(SLMat { n: self.n, modulus, entries: self.entries.iter().map(|&x| x % modulus).collect() })
    }

    /// Components over pairwise coprime moduli whose product is the modulus.
    pub fn crt_split(&self, moduli: &[u64]) -> Result<Vec<SLMat>> {
        let product = moduli.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m));
        if product != Some(self.modulus) {
            return Err(MatError::Mismatch(format!("moduli {moduli:?} vs {}", self.modulus)));
        }
        ring_arith::crt_split_moduli(0, moduli)?;
        moduli.iter().map(|&m| self.reduce_to(m)).collect()
    }

    pub fn crt_join(parts: &[SLMat]) -> Result<SLMat> {
        let first = parts.first().ok_or_else(|| MatError::Mismatch("no components".into()))?;
        let n = first.n;
        if parts.iter().any(|g| g.n != n) {
            return Err(MatError::Mismatch("dimensions differ".into()));
        }
        let moduli: Vec<u64> = parts.iter().map(|g| g.modulus).collect();
        let modulus = moduli.iter().product();
        check_shape(n, modulus)?;
        let entries = (0..n * n)
            .map(|idx| {
                let residues: Vec<u64> = parts.iter().map(|g| g.entries[idx]).collect();
                crt_join_moduli(&residues, &moduli)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(SLMat { n, modulus, entries })
    }
}

impl Mul for &SLMat {
    type Output = SLMat;
    fn mul(self, rhs: &SLMat) -> SLMat {
        self.try_mul(rhs).expect("operands share dimension and modulus")
    }
}

/// `I + t E_ij` (zero-based indices).
pub fn elementary(n: usize, i: usize, j: usize, t: i64, modulus: u64) -> Result<SLMat> {
    if i == j || i >= n || j >= n {
        return Err(MatError::ElementaryIndex { n, i, j });
    }
    let mut g = SLMat::identity(n, modulus)?;
    g.entries[i * n + j] = reduce(t, modulus);
    Ok(g)
}

/// The central element `-I`; only exists in even dimension.
pub fn minus_identity(n: usize, modulus: u64) -> Result<SLMat> {
    if n % 2 == 1 {
        return Err(MatError::OddMinusIdentity(n));
    }
    SLMat::identity(n, modulus)?.scale(modulus - 1)
}

/// Generator of the canonical cyclic subgroup of order `m` in
/// `(Z/p^e)^*`: the smallest primitive root raised to `phi(p^e)/m`.
pub fn central_root(n: usize, p: u64, e: u32, m: u64) -> Result<u64> {
    let g = gcd(n as u64, p.saturating_sub(1));
    if m == 0 || !g.is_multiple_of(m) {
        return Err(MatError::CentralOrder { n: n as u64, p, m, g });
    }
    let q = prime_power(p, e)?;
    let phi = q / p * (p - 1);
    Ok(pow_mod(primitive_root(p, e)?, phi / m, q))
}

/// `zeta I` with `zeta` the canonical element of order `m` modulo `p^e`.
pub fn central_scalar(n: usize, p: u64, e: u32, m: u64) -> Result<SLMat> {
    let zeta = central_root(n, p, e, m)?;
    SLMat::identity(n, prime_power(p, e)?)?.scale(zeta)
}

/// `|SL_n(Z/p^e)| = p^((n^2-1)(e-1)) p^(n(n-1)/2) prod_{i=2..n} (p^i - 1)`.
pub fn sl_order(n: usize, p: u64, e: u32) -> BigUint {
    let pb = BigUint::from(p);
    let mut order = pb.pow(((n * n - 1) as u32) * (e - 1) + (n * (n - 1) / 2) as u32);
    for i in 2..=n as u32 {
        order *= pb.pow(i) - BigUint::one();
    }
    order
}

/// `|SL_n(Z/m)|` through the prime-power factorisation of `m`.
pub fn sl_order_modulus(n: usize, m: u64) -> BigUint {
    factorize(m).into_iter().map(|(p, e)| sl_order(n, p, e)).product()
}

/// `|GL_n(F_p)|`.
pub fn gl_order(n: usize, p: u64) -> BigUint {
    let pb = BigUint::from(p);
    let pn = pb.pow(n as u32);
    (0..n as u32).map(|i| &pn - pb.pow(i)).product()
}

// ---------------------------------------------------------------------------
// Projective space

/// A line of `F_p^n`, normalised so its first non-zero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    p: u64,
    coords: Vec<u64>,
}

impl ProjPoint {
    pub fn new(p: u64, coords: &[i64]) -> Result<Self> {
        if !is_prime(p) {
            return Err(MatError::NotPrimeField(p));
        }
        Self::normalize(p, coords.iter().map(|&x| reduce(x, p)).collect())
    }

    fn normalize(p: u64, mut coords: Vec<u64>) -> Result<Self> {
        let lead = *coords.iter().find(|&&x| x != 0).ok_or(MatError::ZeroVector)?;
        let inv = inv_mod(lead, p).expect("non-zero in a field");
        for x in &mut coords {
            *x = mul_mod(*x, inv, p);
        }
        Ok(ProjPoint { p, coords })
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
}

/// All `(p^n - 1)/(p - 1)` lines of `F_p^n`, each exactly once.
pub fn lines_of_projective_space(n: usize, p: u64) -> Result<Vec<ProjPoint>> {
    if !is_prime(p) {
        return Err(MatError::NotPrimeField(p));
    }
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let count = p.pow(free as u32);
        for mut idx in 0..count {
            let mut coords = vec![0u64; n];
            coords[lead] = 1;
            for slot in coords[lead + 1..].iter_mut().rev() {
                *slot = idx % p;
                idx /= p;
            }
            out.push(ProjPoint { p, coords });
        }
    }
    Ok(out)
}

/// `g . L` for `g` in `SL_n(F_p)`.
pub fn act(g: &SLMat, line: &ProjPoint) -> Result<ProjPoint> {
    if g.modulus != line.p || g.n != line.coords.len() {
        return Err(MatError::Mismatch("matrix and line live over different spaces".into()));
    }
    let n = g.n;
    let p = line.p;
    let image =
        (0..n).map(|i| (0..n).fold(0u64, |acc, j| (acc + mul_mod(g.get(i, j), line.coords[j], p)) % p)).collect();
    ProjPoint::normalize(p, image)
}
