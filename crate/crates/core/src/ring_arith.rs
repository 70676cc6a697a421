//! Exact arithmetic over `Z` and the real quadratic rings `Z[sqrt d]`.
//!
//! Everything here works with machine integers. Moduli are kept below
//! [`MODULUS_GUARD`] so that a product of two reduced residues always fits in
//! a `u64`.
//!
//! Finite places of `Q(sqrt d)` are represented by [`PrimePlace`]; only split
//! places (and the places of `Q` itself) carry residue rings, realised as
//! `Z/p^e` through a Hensel-lifted square root of `d`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound (exclusive) on every modulus handled by the crate.
pub const MODULUS_GUARD: u64 = 1 << 31;

/// Number of candidate primes a split-prime search may examine before it is
/// treated as a configuration error.
pub const PRIME_SEARCH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the prime 2 is not supported")]
    EvenPrime,
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("quadratic ring parameter must be squarefree and at least 2, got {0}")]
    BadRingParameter(i64),
    #[error("{r} is not a square root of {d} modulo {p}")]
    NotARoot { d: i64, p: u64, r: u64 },
    #[error("{p} divides {d}: the square root does not lift uniquely")]
    RamifiedLift { d: i64, p: u64 },
    #[error("{p} divides {n}")]
    PrimeDividesOrder { n: u64, p: u64 },
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("modulus {p}^{e} exceeds the 2^31 guard")]
    ModulusTooLarge { p: u64, e: u32 },
    #[error("prime count must be at least 1")]
    ZeroCount,
    #[error("congruence p = {a} mod {m} admits at most one prime (gcd({a}, {m}) != 1)")]
    DegenerateCongruence { m: u64, a: u64 },
    #[error("no match within the first {0} candidate primes")]
    SearchCapExceeded(usize),
    #[error("place {0} has no residue ring here (only split and rational places are supported)")]
    UnsupportedPlace(String),
    #[error("element of Z[sqrt {found}] used with a residue ring over Z[sqrt {expected}]")]
    RingMismatch { expected: i64, found: i64 },
    #[error("a rational place cannot reduce an element with a non-zero sqrt component")]
    IrrationalAtRationalPlace,
    #[error("residue ring factors {0} and {1} coincide")]
    DuplicatePlace(String, String),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("expected {expected} residues, got {found}")]
    ResidueCount { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, ArithError>;

// ---------------------------------------------------------------------------
// Elementary number theory

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut f = 5u64;
    while f * f <= n {
        if n.is_multiple_of(f) || n.is_multiple_of(f + 2) {
            return false;
        }
        f += 6;
    }
    true
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d.unsigned_abs();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            n /= f;
            if n.is_multiple_of(f) {
                return false;
            }
        }
        f += 1;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            let mut e = 0;
            while n.is_multiple_of(f) {
                n /= f;
                e += 1;
            }
            out.push((f, e));
        }
        f += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `p^e`, rejecting anything at or above [`MODULUS_GUARD`].
pub fn prime_power(p: u64, e: u32) -> Result<u64> {
    if e == 0 {
        return Err(ArithError::ZeroExponent);
    }
    p.checked_pow(e).filter(|&q| q < MODULUS_GUARD).ok_or(ArithError::ModulusTooLarge { p, e })
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Multiplicative order of a unit `a` modulo `m`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if gcd(a, m) != 1 {
        return None;
    }
    let phi = euler_phi(m);
    let mut order = phi;
    for (q, _) in factorize(phi) {
        while order.is_multiple_of(q) && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    Some(order)
}

/// Smallest primitive root modulo `p^e` for an odd prime `p`.
pub fn primitive_root(p: u64, e: u32) -> Result<u64> {
    check_odd_prime(p)?;
    let q = prime_power(p, e)?;
    let phi = euler_phi(q);
    let prime_divisors: Vec<u64> = factorize(phi).into_iter().map(|(f, _)| f).collect();
    (2..q)
        .find(|&g| g % p != 0 && prime_divisors.iter().all(|&f| pow_mod(g, phi / f, q) != 1))
        .ok_or(ArithError::NotPrime(p))
}

fn check_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if p == 2 {
        return Err(ArithError::EvenPrime);
    }
    Ok(())
}

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks).
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

// ---------------------------------------------------------------------------
// Splitting of rational primes in Q(sqrt d)

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Splitting {
    /// `d` is a non-zero square mod `p`; roots sorted ascending, summing to `p`.
    Split {
        roots: (u64, u64),
    },
    Inert,
    Ramified,
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Splitting::Split { roots: (r, s) } => write!(f, "split (roots {r}, {s})"),
            Splitting::Inert => f.write_str("inert"),
            Splitting::Ramified => f.write_str("ramified"),
        }
    }
}

pub fn splitting_type(p: u64, d: i64) -> Result<Splitting> {
    check_odd_prime(p)?;
    if !is_squarefree(d) {
        return Err(ArithError::NotSquarefree(d));
    }
    let residue = reduce(d, p);
    if residue == 0 {
        return Ok(Splitting::Ramified);
    }
    Ok(match sqrt_mod_prime(residue, p) {
        Some(r) => {
            let s = p - r;
            Splitting::Split { roots: (r.min(s), r.max(s)) }
        }
        None => Splitting::Inert,
    })
}

/// The `count` smallest odd primes `p` not in `exclude` with `p` split in
/// `Q(sqrt d)` and, when given, `p = a (mod m)`.
///
/// `d = 1` stands for the rational base ring, where every odd prime counts as
/// split; combined with `congruence = Some((n, 1))` this yields the primes at
/// which the full group of `n`-th roots of unity lives in `F_p`.
pub fn find_split_primes(
    d: i64,
    count: usize,
    exclude: &BTreeSet<u64>,
    congruence: Option<(u64, u64)>,
) -> Result<Vec<u64>> {
    if count == 0 {
        return Err(ArithError::ZeroCount);
    }
    if !is_squarefree(d) {
        return Err(ArithError::NotSquarefree(d));
    }
    if let Some((m, a)) = congruence {
        if m == 0 || gcd(a % m, m) != 1 {
            return Err(ArithError::DegenerateCongruence { m, a });
        }
    }
    let mut found = Vec::with_capacity(count);
    let mut examined = 0usize;
    let mut p = 3u64;
    loop {
        if is_prime(p) {
            examined += 1;
            if examined > PRIME_SEARCH_CAP {
                return Err(ArithError::SearchCapExceeded(PRIME_SEARCH_CAP));
            }
            let congruent = congruence.is_none_or(|(m, a)| p % m == a % m);
            if congruent && !exclude.contains(&p) && matches!(splitting_type(p, d)?, Splitting::Split { .. }) {
                found.push(p);
                if found.len() == count {
                    return Ok(found);
                }
            }
        }
        p += 2;
    }
}

/// Lifts a square root `r` of `d` modulo `p` to the unique root modulo `p^e`
/// congruent to `r`, one Newton step per exponent.
pub fn hensel_lift_sqrt(d: i64, p: u64, r: u64, e: u32) -> Result<u64> {
    check_odd_prime(p)?;
    let q = prime_power(p, e)?;
    let r = r % p;
    if mul_mod(r, r, p) != reduce(d, p) {
        return Err(ArithError::NotARoot { d, p, r });
    }
    if r == 0 {
        return Err(ArithError::RamifiedLift { d, p });
    }
    let mut x = r;
    let mut modulus = p;
    for _ in 1..e {
        modulus *= p;
        let f = (mul_mod(x, x, modulus) + modulus - reduce(d, modulus)) % modulus;
        let deriv_inv = inv_mod(2 * x % modulus, modulus).expect("2r is a unit for odd p, r != 0");
        x = (x + modulus - mul_mod(f, deriv_inv, modulus)) % modulus;
    }
    debug_assert_eq!(modulus, q);
    Ok(x)
}

/// Order of the group of `n`-th roots of unity in `(Z/p^e)^*`.
pub fn roots_of_unity_order(n: u64, p: u64, e: u32) -> Result<u64> {
    check_odd_prime(p)?;
    prime_power(p, e)?;
    if n.is_multiple_of(p) {
        return Err(ArithError::PrimeDividesOrder { n, p });
    }
    Ok(gcd(n, p - 1))
}

// ---------------------------------------------------------------------------
// Quadratic integers

/// `a + b sqrt(d)` in `Z[sqrt d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    a: i64,
    b: i64,
    d: i64,
}

impl QuadInt {
    pub fn new(a: i64, b: i64, d: i64) -> Result<Self> {
        if d < 2 || !is_squarefree(d) {
            return Err(ArithError::BadRingParameter(d));
        }
        Ok(QuadInt { a, b, d })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn norm(&self) -> i64 {
        self.a * self.a - self.d * self.b * self.b
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: QuadInt) -> QuadInt {
        assert_eq!(self.d, rhs.d, "mixed quadratic rings");
        QuadInt { a: self.a + rhs.a, b: self.b + rhs.b, d: self.d }
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: QuadInt) -> QuadInt {
        self + (-rhs)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: QuadInt) -> QuadInt {
        assert_eq!(self.d, rhs.d, "mixed quadratic rings");
        QuadInt { a: self.a * rhs.a + self.d * self.b * rhs.b, b: self.a * rhs.b + self.b * rhs.a, d: self.d }
    }
}

/// The non-trivial automorphism of `Q(sqrt d)`.
pub fn galois_conj(x: QuadInt) -> QuadInt {
    QuadInt { b: -x.b, ..x }
}

// ---------------------------------------------------------------------------
// Places

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaceKind {
    Rational,
    SplitFirst,
    SplitSecond,
    Inert,
    Ramified,
}

/// A finite place of `Q` or of `Q(sqrt d)`, identified by the rational prime
/// below it and, for split primes, by the root of `d` it reduces `sqrt d` to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimePlace {
    p: u64,
    kind: PlaceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    root: Option<u64>,
    label: String,
}

impl PrimePlace {
    /// The place of `Q` at `p`.
    pub fn rational(p: u64) -> Result<Self> {
        check_odd_prime(p)?;
        Ok(PrimePlace { p, kind: PlaceKind::Rational, root: None, label: p.to_string() })
    }

    /// All places of `Q(sqrt d)` above `p`: two for split primes (smaller
    /// root first), one otherwise.
    pub fn above(p: u64, d: i64) -> Result<Vec<Self>> {
        if d < 2 {
            return Err(ArithError::BadRingParameter(d));
        }
        Ok(match splitting_type(p, d)? {
            Splitting::Split { roots: (r, s) } => vec![
                PrimePlace { p, kind: PlaceKind::SplitFirst, root: Some(r), label: format!("{p}.1") },
                PrimePlace { p, kind: PlaceKind::SplitSecond, root: Some(s), label: format!("{p}.2") },
            ],
            Splitting::Inert => {
                vec![PrimePlace { p, kind: PlaceKind::Inert, root: None, label: format!("{p}i") }]
            }
            Splitting::Ramified => {
                vec![PrimePlace { p, kind: PlaceKind::Ramified, root: None, label: format!("{p}r") }]
            }
        })
    }

    /// The two places above a prime that must split.
    pub fn split_pair(p: u64, d: i64) -> Result<(Self, Self)> {
        let mut places = Self::above(p, d)?;
        if places.len() != 2 {
            return Err(ArithError::UnsupportedPlace(places.remove(0).label));
        }
        let second = places.pop().expect("two places");
        let first = places.pop().expect("two places");
        Ok((first, second))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn kind(&self) -> PlaceKind {
        self.kind
    }

    pub fn root(&self) -> Option<u64> {
        self.root
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_split(&self) -> bool {
        matches!(self.kind, PlaceKind::SplitFirst | PlaceKind::SplitSecond)
    }

    /// Checks the stored root against `d` (`None` for the rational base ring).
    pub fn validate(&self, d: Option<i64>) -> Result<()> {
        check_odd_prime(self.p)?;
        match (self.kind, d) {
            (PlaceKind::Rational, None) => Ok(()),
            (PlaceKind::SplitFirst | PlaceKind::SplitSecond, Some(d)) => {
                let r = self.root.ok_or_else(|| ArithError::UnsupportedPlace(self.label.clone()))?;
                if r >= self.p || mul_mod(r, r, self.p) != reduce(d, self.p) || r == 0 {
                    return Err(ArithError::NotARoot { d, p: self.p, r });
                }
                let first = r < self.p - r;
                if first != (self.kind == PlaceKind::SplitFirst) {
                    return Err(ArithError::UnsupportedPlace(self.label.clone()));
                }
                Ok(())
            }
            _ => Err(ArithError::UnsupportedPlace(self.label.clone())),
        }
    }
}

impl fmt::Display for PrimePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Action of the non-trivial automorphism of `Q(sqrt d)` on places.
pub fn conj_place(v: &PrimePlace) -> PrimePlace {
    let swap = |kind, root: u64, suffix| PrimePlace {
        p: v.p,
        kind,
        root: Some(v.p - root),
        label: format!("{}.{suffix}", v.p),
    };
    match (v.kind, v.root) {
        (PlaceKind::SplitFirst, Some(r)) => swap(PlaceKind::SplitSecond, r, 2),
        (PlaceKind::SplitSecond, Some(r)) => swap(PlaceKind::SplitFirst, r, 1),
        _ => v.clone(),
    }
}

// ---------------------------------------------------------------------------
// Residue rings

/// One factor `O/v^e = Z/p^e` of a residue ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueFactor {
    place: PrimePlace,
    exponent: u32,
    modulus: u64,
    d: Option<i64>,
    lifted_root: Option<u64>,
}

impl ResidueFactor {
    pub fn new(place: PrimePlace, exponent: u32, d: Option<i64>) -> Result<Self> {
        place.validate(d)?;
        let modulus = prime_power(place.p, exponent)?;
        let lifted_root = match (place.root, d) {
            (Some(r), Some(d)) => Some(hensel_lift_sqrt(d, place.p, r, exponent)?),
            _ => None,
        };
        Ok(ResidueFactor { place, exponent, modulus, d, lifted_root })
    }

    pub fn place(&self) -> &PrimePlace {
        &self.place
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn lifted_root(&self) -> Option<u64> {
        self.lifted_root
    }
}

/// Product of residue fields and their truncations at distinct places.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRing {
    factors: Vec<ResidueFactor>,
}

impl ResidueRing {
    pub fn new(factors: Vec<ResidueFactor>) -> Result<Self> {
        for (i, f) in factors.iter().enumerate() {
            if let Some(g) = factors[..i].iter().find(|g| g.place == f.place) {
                return Err(ArithError::DuplicatePlace(g.place.label.clone(), f.place.label.clone()));
            }
        }
        Ok(ResidueRing { factors })
    }

    /// `Z/p1^e1 x ... x Z/pk^ek` over rational places.
    pub fn rational(levels: &[(u64, u32)]) -> Result<Self> {
        let factors = levels
            .iter()
            .map(|&(p, e)| ResidueFactor::new(PrimePlace::rational(p)?, e, None))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[ResidueFactor] {
        &self.factors
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.modulus).collect()
    }
}

/// Reduction `a + b sqrt d -> a + b r_e (mod p^e)` at a split or rational place.
pub fn residue_map(x: &QuadInt, factor: &ResidueFactor) -> Result<u64> {
    let m = factor.modulus;
    match (factor.place.kind, factor.lifted_root, factor.d) {
        (PlaceKind::Rational, _, _) => {
            if x.b != 0 {
                return Err(ArithError::IrrationalAtRationalPlace);
            }
            Ok(reduce(x.a, m))
        }
        (PlaceKind::SplitFirst | PlaceKind::SplitSecond, Some(root), Some(d)) => {
            if d != x.d {
                return Err(ArithError::RingMismatch { expected: d, found: x.d });
            }
            Ok((reduce(x.a, m) + mul_mod(reduce(x.b, m), root, m)) % m)
        }
        _ => Err(ArithError::UnsupportedPlace(factor.place.label.clone())),
    }
}

fn check_coprime(moduli: &[u64]) -> Result<()> {
    for (i, &a) in moduli.iter().enumerate() {
        for &b in &moduli[i + 1..] {
            if gcd(a, b) != 1 {
                return Err(ArithError::NotCoprime(a, b));
            }
        }
    }
    Ok(())
}

/// Components of `x mod (m1 m2 ... mk)` for pairwise coprime `mi`.
pub fn crt_split_moduli(x: u64, moduli: &[u64]) -> Result<Vec<u64>> {
    check_coprime(moduli)?;
    Ok(moduli.iter().map(|&m| x % m).collect())
}

/// Inverse of [`crt_split_moduli`].
pub fn crt_join_moduli(residues: &[u64], moduli: &[u64]) -> Result<u64> {
    if residues.len() != moduli.len() {
        return Err(ArithError::ResidueCount { expected: moduli.len(), found: residues.len() });
    }
    check_coprime(moduli)?;
    let mut acc = 0u64;
    let mut modulus = 1u64;
    for (&r, &m) in residues.iter().zip(moduli) {
        // acc + modulus * t = r (mod m)
        let inv = inv_mod(modulus % m, m).expect("coprime moduli");
        let diff = (r % m + m - acc % m) % m;
        let t = mul_mod(diff, inv, m);
        acc += modulus * t;
        modulus *= m;
    }
    Ok(acc)
}

pub fn crt_split(x: u64, ring: &ResidueRing) -> Result<Vec<u64>> {
    crt_split_moduli(x, &ring.moduli())
}

pub fn crt_join(residues: &[u64], ring: &ResidueRing) -> Result<u64> {
    crt_join_moduli(residues, &ring.moduli())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn squares_mod(p: u64) -> Vec<u64> {
        (1..p).filter(|x| (x * x) % p != 0).map(|x| x * x % p).collect()
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_type(7, 2).unwrap(), Splitting::Split { roots: (3, 4) });
        assert_eq!(splitting_type(5, 2).unwrap(), Splitting::Inert);
        assert_eq!(splitting_type(17, 2).unwrap(), Splitting::Split { roots: (6, 11) });
        assert_eq!(splitting_type(7, 14).unwrap(), Splitting::Ramified);
        // squares mod 5 are {0, 1, 4}
        assert!(!squares_mod(5).contains(&2));
    }

    #[test]
    fn splitting_rejects_bad_input() {
        assert_eq!(splitting_type(9, 2), Err(ArithError::NotPrime(9)));
        assert_eq!(splitting_type(2, 3), Err(ArithError::EvenPrime));
        assert_eq!(splitting_type(7, 8), Err(ArithError::NotSquarefree(8)));
    }

    #[test]
    fn splitting_agrees_with_exhaustive_squares() {
        for p in (3..200).filter(|&p| is_prime(p)) {
            for d in [2i64, 3, 5, 6, 7, 10, -1, -3] {
                let sq = squares_mod(p);
                let expected_split = sq.contains(&reduce(d, p));
                match splitting_type(p, d).unwrap() {
                    Splitting::Split { roots: (r, s) } => {
                        assert!(expected_split);
                        assert!(r < s && r + s == p);
                        assert_eq!(r * r % p, reduce(d, p));
                    }
                    Splitting::Ramified => assert_eq!(reduce(d, p), 0),
                    Splitting::Inert => assert!(!expected_split && reduce(d, p) != 0),
                }
            }
        }
    }

    #[test]
    fn split_prime_search() {
        let none = BTreeSet::new();
        assert_eq!(find_split_primes(2, 2, &none, None).unwrap(), vec![7, 17]);
        assert_eq!(find_split_primes(2, 3, &none, None).unwrap(), vec![7, 17, 23]);
        let seven = BTreeSet::from([7]);
        assert_eq!(find_split_primes(2, 1, &seven, None).unwrap(), vec![17]);
        assert_eq!(find_split_primes(1, 2, &none, Some((4, 1))).unwrap(), vec![5, 13]);
        assert_eq!(find_split_primes(2, 0, &none, None), Err(ArithError::ZeroCount));
        assert!(matches!(find_split_primes(2, 1, &none, Some((4, 2))), Err(ArithError::DegenerateCongruence { .. })));
    }

    #[test]
    fn hensel_examples() {
        assert_eq!(hensel_lift_sqrt(2, 7, 3, 1).unwrap(), 3);
        assert_eq!(hensel_lift_sqrt(2, 7, 3, 2).unwrap(), 10);
        assert_eq!(hensel_lift_sqrt(2, 7, 4, 2).unwrap(), 39);
        assert!(matches!(hensel_lift_sqrt(2, 7, 2, 2), Err(ArithError::NotARoot { .. })));
    }

    #[test]
    fn hensel_matches_brute_force_and_is_coherent() {
        for p in [7u64, 17, 23] {
            let Splitting::Split { roots: (r, s) } = splitting_type(p, 2).unwrap() else {
                panic!("{p} splits");
            };
            for root in [r, s] {
                for e in 1..=4u32 {
                    let q = p.pow(e);
                    let lifted = hensel_lift_sqrt(2, p, root, e).unwrap();
                    let brute: Vec<u64> = (0..q).filter(|x| x * x % q == 2 && x % p == root).collect();
                    assert_eq!(brute, vec![lifted]);
                    if e > 1 {
                        let coarser = hensel_lift_sqrt(2, p, root, e - 1).unwrap();
                        assert_eq!(lifted % p.pow(e - 1), coarser);
                    }
                }
            }
        }
    }

    #[test]
    fn roots_of_unity_examples() {
        let count = |n: u32, q: u64| (1..q).filter(|&x| pow_mod(x, n as u64, q) == 1).count() as u64;
        assert_eq!(roots_of_unity_order(4, 5, 1).unwrap(), 4);
        assert_eq!(count(4, 5), 4);
        assert_eq!(roots_of_unity_order(2, 7, 2).unwrap(), 2);
        assert_eq!(count(2, 49), 2);
        assert_eq!(roots_of_unity_order(4, 7, 1).unwrap(), 2);
        assert_eq!(count(4, 7), 2);
        assert!(roots_of_unity_order(10, 5, 1).is_err());
        assert!(roots_of_unity_order(4, 2, 1).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let x = QuadInt::new(1, 1, 2).unwrap();
        assert_eq!(galois_conj(x), QuadInt::new(1, -1, 2).unwrap());
        let (p1, p2) = PrimePlace::split_pair(7, 2).unwrap();
        assert_eq!((p1.root(), p2.root()), (Some(3), Some(4)));
        assert_eq!(conj_place(&p1), p2);
        assert_eq!(conj_place(&p2), p1);
        let inert = PrimePlace::above(5, 2).unwrap().remove(0);
        assert_eq!(conj_place(&inert), inert);
    }

    #[test]
    fn residue_map_examples() {
        let (p1, p2) = PrimePlace::split_pair(7, 2).unwrap();
        let f1 = ResidueFactor::new(p1, 1, Some(2)).unwrap();
        let f2 = ResidueFactor::new(p2, 1, Some(2)).unwrap();
        let x = QuadInt::new(1, 1, 2).unwrap();
        assert_eq!(residue_map(&x, &f1).unwrap(), 4);
        assert_eq!(residue_map(&x, &f2).unwrap(), 5);
        assert_eq!(residue_map(&QuadInt::new(7, 0, 2).unwrap(), &f1).unwrap(), 0);
        let inert = PrimePlace::above(5, 2).unwrap().remove(0);
        assert!(ResidueFactor::new(inert, 1, Some(2)).is_err());
    }

    #[test]
    fn crt_examples() {
        let ring = ResidueRing::rational(&[(5, 1), (7, 1)]).unwrap();
        assert_eq!(crt_split(12, &ring).unwrap(), vec![2, 5]);
        assert_eq!(crt_split(0, &ring).unwrap(), vec![0, 0]);
        assert_eq!(crt_join(&[2, 5], &ring).unwrap(), 12);
        let (p1, p2) = PrimePlace::split_pair(7, 2).unwrap();
        let same_prime = ResidueRing::new(vec![
            ResidueFactor::new(p1, 1, Some(2)).unwrap(),
            ResidueFactor::new(p2, 1, Some(2)).unwrap(),
        ])
        .unwrap();
        assert_eq!(crt_split(3, &same_prime), Err(ArithError::NotCoprime(7, 7)));
    }

    #[test]
    fn crt_bijective_up_to_1000() {
        for m in 2..=1000u64 {
            let moduli: Vec<u64> = factorize(m).iter().map(|&(p, e)| p.pow(e)).collect();
            let mut seen = vec![false; m as usize];
            for x in 0..m {
                let parts = crt_split_moduli(x, &moduli).unwrap();
                let back = crt_join_moduli(&parts, &moduli).unwrap();
                assert_eq!(back, x);
                seen[parts.iter().zip(&moduli).fold(0, |acc, (&r, &q)| acc * q + r) as usize] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5, 1).unwrap(), 2);
        assert_eq!(primitive_root(7, 1).unwrap(), 3);
        assert_eq!(multiplicative_order(primitive_root(5, 2).unwrap(), 25), Some(20));
        assert_eq!(multiplicative_order(primitive_root(7, 2).unwrap(), 49), Some(42));
    }

    fn quad(d: i64) -> impl Strategy<Value = QuadInt> {
        (-1000i64..1000, -1000i64..1000).prop_map(move |(a, b)| QuadInt::new(a, b, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn conjugation_is_involutive_and_compatible(x in quad(2), e in 1u32..4) {
            prop_assert_eq!(galois_conj(galois_conj(x)), x);
            for p in [7u64, 17, 23] {
                let (v, w) = PrimePlace::split_pair(p, 2).unwrap();
                prop_assert_eq!(conj_place(&conj_place(&v)), v.clone());
                let fv = ResidueFactor::new(v.clone(), e, Some(2)).unwrap();
                let fw = ResidueFactor::new(conj_place(&v), e, Some(2)).unwrap();
                prop_assert_eq!(conj_place(&v), w);
                prop_assert_eq!(
                    residue_map(&galois_conj(x), &fv).unwrap(),
                    residue_map(&x, &fw).unwrap()
                );
            }
        }

        #[test]
        fn residue_map_is_a_ring_homomorphism(x in quad(2), y in quad(2), e in 1u32..4) {
            for place in PrimePlace::above(17, 2).unwrap() {
                let f = ResidueFactor::new(place, e, Some(2)).unwrap();
                let m = f.modulus();
                let (rx, ry) = (residue_map(&x, &f).unwrap(), residue_map(&y, &f).unwrap());
                prop_assert_eq!(residue_map(&(x + y), &f).unwrap(), (rx + ry) % m);
                prop_assert_eq!(residue_map(&(x * y), &f).unwrap(), mul_mod(rx, ry, m));
            }
        }
    }
}
