//! Congruence subgroups given by local conditions, and their finite quotients.
//!
//! A [`SubgroupSpec`] attaches a [`LocalCondition`] to finitely many prime
//! places of `Z` or `Z[sqrt d]`. Reducing modulo a [`Level`] divisible by
//! every condition's depth gives a [`FiniteQuotientGroup`], a subgroup of the
//! product of `SL_n(O/v^e)` over the level's places.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chevalley::{
    lifted_parabolic_generators, parabolic_membership, parabolic_order, ChevalleyError, ParabolicSpec, RootSubset,
};
use crate::matgroup::{central_root, elementary, raw_cofactor, raw_det, sl_order, MatError, SLMat};
use crate::oracle::closure;
use crate::ring_arith::{gcd, inv_mod, pow_mod, prime_power, ArithError, PrimePlace};

/// Length of the random elementary words used to sample full factors.
const WORD_LENGTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("place {0} appears twice")]
    DuplicatePlace(String),
    #[error("place {0} carries a condition but has no exponent in the level")]
    MissingLevel(String),
    #[error("level exponent {level} at {place} is below the condition depth {depth}")]
    LevelBelowDepth { place: String, level: u32, depth: u32 },
    #[error("level exponents must be at least 1 (place {0})")]
    ZeroLevel(String),
    #[error("invalid condition at {place}: {reason}")]
    BadCondition { place: String, reason: String },
    #[error("place {0} is not part of this quotient")]
    UnknownPlace(String),
    #[error("element has {found} components, expected {expected}")]
    ComponentCount { expected: usize, found: usize },
    #[error("component {index} is {found_n}x{found_n} mod {found_m}, expected {n}x{n} mod {m}")]
    ComponentShape { index: usize, n: usize, m: u64, found_n: usize, found_m: u64 },
    #[error("quotients have different place sets")]
    PlaceMismatch,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
}

pub type Result<T> = std::result::Result<T, CongruenceError>;

/// Condition imposed on the `v`-adic component of a congruence subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LocalCondition {
    /// No condition: the whole of `SL_n(O_v)`.
    Full,
    /// `g = I (mod v^depth)`.
    Principal { depth: u32 },
    /// `g = zeta I (mod v^depth)` with `zeta^order = 1`.
    CentralPrincipal { order: u64, depth: u32 },
    /// `g mod v` lies in the parabolic `P_theta`.
    ParabolicPullback { theta: RootSubset },
}

impl LocalCondition {
    /// Smallest level exponent at which the condition can be read off.
    pub fn depth(&self) -> u32 {
        match self {
            LocalCondition::Full => 1,
            LocalCondition::Principal { depth } | LocalCondition::CentralPrincipal { depth, .. } => *depth,
            LocalCondition::ParabolicPullback { .. } => 1,
        }
    }

    fn check(&self, n: usize, place: &PrimePlace) -> Result<()> {
        let bad = |reason: String| CongruenceError::BadCondition { place: place.to_string(), reason };
        match self {
            LocalCondition::Full => Ok(()),
            LocalCondition::Principal { depth } => {
                if *depth == 0 {
                    return Err(bad("principal depth must be at least 1".into()));
                }
                Ok(())
            }
            LocalCondition::CentralPrincipal { order, depth } => {
                if *depth == 0 {
                    return Err(bad("principal depth must be at least 1".into()));
                }
                let g = gcd(n as u64, place.p() - 1);
                if *order == 0 || !g.is_multiple_of(*order) {
                    return Err(bad(format!(
                        "central elements of order {order} need {order} | gcd(n, p - 1) = gcd({n}, {}) = {g}",
                        place.p() - 1
                    )));
                }
                Ok(())
            }
            LocalCondition::ParabolicPullback { theta } => {
                if theta.n() != n {
                    return Err(bad(format!("root subset is for SL_{}, expected SL_{n}", theta.n())));
                }
                Ok(())
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PlacedCondition {
    place: PrimePlace,
    condition: LocalCondition,
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    n: usize,
    d: Option<i64>,
    conditions: Vec<PlacedCondition>,
}

/// A congruence subgroup of `SL_n(Z)` (`d = None`) or `SL_n(Z[sqrt d])`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct SubgroupSpec {
    n: usize,
    d: Option<i64>,
    conditions: BTreeMap<PrimePlace, LocalCondition>,
}

impl TryFrom<SpecRepr> for SubgroupSpec {
    type Error = CongruenceError;

    fn try_from(repr: SpecRepr) -> Result<Self> {
        let mut spec = SubgroupSpec::new(repr.n, repr.d)?;
        for pc in repr.conditions {
            spec = spec.with(pc.place, pc.condition)?;
        }
        Ok(spec)
    }
}

impl From<SubgroupSpec> for SpecRepr {
    fn from(spec: SubgroupSpec) -> Self {
        SpecRepr {
            n: spec.n,
            d: spec.d,
            conditions: spec
                .conditions
                .into_iter()
                .map(|(place, condition)| PlacedCondition { place, condition })
                .collect(),
        }
    }
}

impl SubgroupSpec {
    pub fn new(n: usize, d: Option<i64>) -> Result<Self> {
        if n < 2 {
            return Err(MatError::Dimension(n).into());
        }
        if let Some(d) = d {
            if d < 2 || !crate::ring_arith::is_squarefree(d) {
                return Err(ArithError::BadRingParameter(d).into());
            }
        }
        Ok(SubgroupSpec { n, d, conditions: BTreeMap::new() })
    }

    /// Adds a condition at a new place.
    pub fn with(mut self, place: PrimePlace, condition: LocalCondition) -> Result<Self> {
        place.validate(self.d)?;
        condition.check(self.n, &place)?;
        if self.conditions.contains_key(&place) {
            return Err(CongruenceError::DuplicatePlace(place.to_string()));
        }
        self.conditions.insert(place, condition);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> Option<i64> {
        self.d
    }

    pub fn conditions(&self) -> &BTreeMap<PrimePlace, LocalCondition> {
        &self.conditions
    }

    /// Places carrying a condition other than [`LocalCondition::Full`].
    pub fn support(&self) -> Vec<&PrimePlace> {
        self.conditions.iter().filter(|(_, c)| **c != LocalCondition::Full).map(|(p, _)| p).collect()
    }

    /// Smallest level at which every condition is visible.
    pub fn minimal_level(&self) -> Level {
        Level(self.conditions.iter().map(|(p, c)| (p.clone(), c.depth())).collect())
    }
}

#[derive(Serialize, Deserialize)]
struct PlacedExponent {
    place: PrimePlace,
    exponent: u32,
}

/// Level `prod v^e_v` as an ordered map from places to exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<PlacedExponent>", into = "Vec<PlacedExponent>")]
pub struct Level(BTreeMap<PrimePlace, u32>);

impl From<Vec<PlacedExponent>> for Level {
    fn from(v: Vec<PlacedExponent>) -> Self {
        Level(v.into_iter().map(|pe| (pe.place, pe.exponent)).collect())
    }
}

impl From<Level> for Vec<PlacedExponent> {
    fn from(l: Level) -> Self {
        l.0.into_iter().map(|(place, exponent)| PlacedExponent { place, exponent }).collect()
    }
}

impl Level {
    pub fn new() -> Self {
        Level(BTreeMap::new())
    }

    pub fn with(mut self, place: PrimePlace, exponent: u32) -> Self {
        self.0.insert(place, exponent);
        self
    }

    pub fn exponents(&self) -> &BTreeMap<PrimePlace, u32> {
        &self.0
    }

    /// Largest level dividing both.
    pub fn join(&self, other: &Level) -> Level {
        let mut out = self.0.clone();
        for (p, &e) in &other.0 {
            let slot = out.entry(p.clone()).or_insert(e);
            *slot = (*slot).max(e);
        }
        Level(out)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(p, e)| format!("{p}^{e}")).collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Element of `prod_v SL_n(O/v^e_v)`, one component per place of the level
/// in place order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AmbientElement(Vec<SLMat>);

impl AmbientElement {
    pub fn new(components: Vec<SLMat>) -> Self {
        AmbientElement(components)
    }

    pub fn components(&self) -> &[SLMat] {
        &self.0
    }

    pub fn into_components(self) -> Vec<SLMat> {
        self.0
    }

    pub fn inverse(&self) -> AmbientElement {
        AmbientElement(self.0.iter().map(SLMat::inverse).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(SLMat::is_identity)
    }
}

impl Mul for &AmbientElement {
    type Output = AmbientElement;

    /// Componentwise product. Panics on shape mismatch.
    fn mul(self, rhs: &AmbientElement) -> AmbientElement {
        assert_eq!(self.0.len(), rhs.0.len(), "component count mismatch");
        AmbientElement(self.0.iter().zip(&rhs.0).map(|(a, b)| a * b).collect())
    }
}

/// One place of a finite quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    place: PrimePlace,
    exponent: u32,
    modulus: u64,
    condition: LocalCondition,
}

impl LocalFactor {
    pub fn place(&self) -> &PrimePlace {
        &self.place
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn condition(&self) -> &LocalCondition {
        &self.condition
    }

    fn parabolic(&self, theta: &RootSubset) -> ParabolicSpec {
        ParabolicSpec::new(self.place.p(), theta.clone()).expect("place is prime")
    }

    fn contains(&self, g: &SLMat) -> bool {
        let p = self.place.p();
        match &self.condition {
            LocalCondition::Full => true,
            LocalCondition::Principal { depth } => {
                let q = p.pow(*depth);
                congruent_to_scalar(g, q, 1)
            }
            LocalCondition::CentralPrincipal { order, depth } => {
                let q = p.pow(*depth);
                let z = g.get(0, 0) % q;
                congruent_to_scalar(g, q, z) && pow_mod(z, *order, q) == 1
            }
            LocalCondition::ParabolicPullback { theta } => parabolic_membership(g, &self.parabolic(theta)),
        }
    }

    fn order(&self, n: usize) -> BigUint {
        let p = BigUint::from(self.place.p());
        let dim = (n * n - 1) as u32;
        let kernel = |depth: u32| p.pow(dim * self.exponent.saturating_sub(depth));
        match &self.condition {
            LocalCondition::Full => sl_order(n, self.place.p(), self.exponent),
            LocalCondition::Principal { depth } => kernel(*depth),
            LocalCondition::CentralPrincipal { order, depth } => kernel(*depth) * BigUint::from(*order),
            LocalCondition::ParabolicPullback { theta } => parabolic_order(&self.parabolic(theta)) * kernel(1),
        }
    }

    /// Generators of the local image, when known at this exponent.
    fn generators(&self, n: usize) -> Result<Option<Vec<SLMat>>> {
        let q = self.modulus;
        let e = self.exponent;
        Ok(match &self.condition {
            LocalCondition::Full => {
                let mut gens = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            gens.push(elementary(n, i, j, 1, q)?);
                        }
                    }
                }
                Some(gens)
            }
            LocalCondition::Principal { depth } if *depth >= e => Some(Vec::new()),
            LocalCondition::CentralPrincipal { order, depth } if *depth >= e => {
                let zeta = central_root(n, self.place.p(), e, *order)?;
                Some(vec![SLMat::identity(n, q)?.scale(zeta)?])
            }
            LocalCondition::ParabolicPullback { theta } if e == 1 => {
                Some(lifted_parabolic_generators(&self.parabolic(theta), 1)?)
            }
            _ => None,
        })
    }

    fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<SLMat> {
        let p = self.place.p();
        let e = self.exponent;
        let q = self.modulus;
        match &self.condition {
            LocalCondition::Full => {
                let mut g = SLMat::identity(n, q)?;
                for _ in 0..WORD_LENGTH {
                    let i = rng.random_range(0..n);
                    let mut j = rng.random_range(0..n - 1);
                    if j >= i {
                        j += 1;
                    }
                    let t = rng.random_range(0..q) as i64;
                    g = &g * &elementary(n, i, j, t, q)?;
                }
                Ok(g)
            }
            LocalCondition::Principal { depth } => principal_sample(rng, n, p, *depth, e),
            LocalCondition::CentralPrincipal { order, depth } => {
                let zeta = central_root(n, p, e, *order)?;
                let k = rng.random_range(0..*order);
                Ok(principal_sample(rng, n, p, *depth, e)?.scale(pow_mod(zeta, k, q))?)
            }
            LocalCondition::ParabolicPullback { theta } => {
                let gens = lifted_parabolic_generators(&self.parabolic(theta), e)?;
                let mut g = SLMat::identity(n, q)?;
                for _ in 0..WORD_LENGTH {
                    g = &g * &gens[rng.random_range(0..gens.len())];
                }
                Ok(&g * &principal_sample(rng, n, p, 1, e)?)
            }
        }
    }
}

fn congruent_to_scalar(g: &SLMat, q: u64, z: u64) -> bool {
    let n = g.n();
    (0..n).all(|i| (0..n).all(|j| g.get(i, j) % q == if i == j { z % q } else { 0 }))
}

/// Uniform element of the kernel of `SL_n(Z/p^e) -> SL_n(Z/p^depth)`.
///
/// Draws `I + p^depth X` with `X` uniform and then fixes the determinant by
/// adjusting the `(0,0)` entry along `p^depth Z`, which is a bijection from
/// the other `n^2 - 1` entries onto the kernel.
fn principal_sample(rng: &mut ChaCha8Rng, n: usize, p: u64, depth: u32, e: u32) -> Result<SLMat> {
    let q = prime_power(p, e)?;
    if depth >= e {
        return Ok(SLMat::identity(n, q)?);
    }
    let step = p.pow(depth);
    let range = q / step;
    let mut a: Vec<u64> = (0..n * n)
        .map(|k| {
            let x = rng.random_range(0..range) * step;
            if k % (n + 1) == 0 {
                (1 + x) % q
            } else {
                x
            }
        })
        .collect();
    let det = raw_det(n, q, &a);
    let cof = raw_cofactor(n, q, &a, 0, 0);
    let cof_inv = inv_mod(cof, q).expect("cofactor is 1 mod p");
    let delta = ((1 + q - det) % q) as u128 * cof_inv as u128 % q as u128;
    a[0] = (a[0] + delta as u64) % q;
    Ok(SLMat::from_reduced(n, q, a)?)
}

/// Image of a congruence subgroup at a fixed level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteQuotientGroup {
    n: usize,
    d: Option<i64>,
    factors: Vec<LocalFactor>,
}

/// Image of `spec` modulo `level`. Places of the level without a condition
/// contribute full factors; every conditioned place must appear in the level
/// with exponent at least the condition's depth.
pub fn quotient_of(spec: &SubgroupSpec, level: &Level) -> Result<FiniteQuotientGroup> {
    for (place, cond) in &spec.conditions {
        let Some(&e) = level.0.get(place) else {
            return Err(CongruenceError::MissingLevel(place.to_string()));
        };
        if e < cond.depth() {
            return Err(CongruenceError::LevelBelowDepth { place: place.to_string(), level: e, depth: cond.depth() });
        }
    }
    let mut factors = Vec::with_capacity(level.0.len());
    for (place, &e) in &level.0 {
        if e == 0 {
            return Err(CongruenceError::ZeroLevel(place.to_string()));
        }
        place.validate(spec.d)?;
        let condition = spec.conditions.get(place).cloned().unwrap_or(LocalCondition::Full);
        factors.push(LocalFactor { place: place.clone(), exponent: e, modulus: prime_power(place.p(), e)?, condition });
    }
    Ok(FiniteQuotientGroup { n: spec.n, d: spec.d, factors })
}

impl FiniteQuotientGroup {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> Option<i64> {
        self.d
    }

    pub fn factors(&self) -> &[LocalFactor] {
        &self.factors
    }

    pub fn places(&self) -> Vec<&PrimePlace> {
        self.factors.iter().map(|f| &f.place).collect()
    }

    pub fn index_of(&self, place: &PrimePlace) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| &f.place == place)
            .ok_or_else(|| CongruenceError::UnknownPlace(place.to_string()))
    }

    pub fn identity(&self) -> AmbientElement {
        AmbientElement(
            self.factors.iter().map(|f| SLMat::identity(self.n, f.modulus).expect("validated shape")).collect(),
        )
    }

    /// `local` at place `index`, identity elsewhere.
    pub fn embed(&self, index: usize, local: SLMat) -> AmbientElement {
        let mut g = self.identity();
        g.0[index] = local;
        g
    }

    /// Checks the component count and shapes against the ambient product.
    pub fn check_shape(&self, g: &AmbientElement) -> Result<()> {
        if g.0.len() != self.factors.len() {
            return Err(CongruenceError::ComponentCount { expected: self.factors.len(), found: g.0.len() });
        }
        for (index, (c, f)) in g.0.iter().zip(&self.factors).enumerate() {
            if c.n() != self.n || c.modulus() != f.modulus {
                return Err(CongruenceError::ComponentShape {
                    index,
                    n: self.n,
                    m: f.modulus,
                    found_n: c.n(),
                    found_m: c.modulus(),
                });
            }
        }
        Ok(())
    }

    pub fn member(&self, g: &AmbientElement) -> bool {
        self.check_shape(g).is_ok() && g.0.iter().zip(&self.factors).all(|(c, f)| f.contains(c))
    }

    pub fn order(&self) -> BigUint {
        self.factors.iter().map(|f| f.order(self.n)).fold(BigUint::one(), |a, b| a * b)
    }

    /// Element drawn from a generator seeded by `seed`. Full, principal and
    /// central factors are sampled uniformly; parabolic factors through a
    /// random word in lifted generators times a uniform kernel element.
    pub fn sample(&self, seed: u64) -> AmbientElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        AmbientElement(self.factors.iter().map(|f| f.sample(self.n, &mut rng).expect("validated factor")).collect())
    }

    /// Generators of the whole quotient, or `None` when some factor's
    /// generators are not available at its exponent.
    pub fn generators(&self) -> Option<Vec<AmbientElement>> {
        let mut out = Vec::new();
        for (index, f) in self.factors.iter().enumerate() {
            for g in f.generators(self.n).ok()?? {
                out.push(self.embed(index, g));
            }
        }
        Some(out)
    }

    /// Every element, sorted, when generators are known and the order is at
    /// most `cap`.
    pub fn enumerate(&self, cap: usize) -> Option<Vec<AmbientElement>> {
        if self.order() > BigUint::from(cap) {
            return None;
        }
        let gens = self.generators()?;
        let mut all: Vec<AmbientElement> = match closure(&gens, cap) {
            Some(set) => set.into_iter().collect(),
            None if gens.is_empty() => vec![self.identity()],
            None => return None,
        };
        all.sort();
        Some(all)
    }

    /// Whether the canonical central element of order `m` at `place`
    /// (identity elsewhere) lies in the quotient.
    pub fn central_presence(&self, place: &PrimePlace, m: u64) -> Result<bool> {
        let index = self.index_of(place)?;
        let f = &self.factors[index];
        let zeta = central_root(self.n, place.p(), f.exponent, m)?;
        let local = SLMat::identity(self.n, f.modulus)?.scale(zeta)?;
        Ok(self.member(&self.embed(index, local)))
    }

    /// Reduces `g` to the (coarser) level of `target`, which must have the
    /// same places.
    pub fn reduce_to(&self, g: &AmbientElement, target: &FiniteQuotientGroup) -> Result<AmbientElement> {
        self.check_shape(g)?;
        if self.places() != target.places() {
            return Err(CongruenceError::PlaceMismatch);
        }
        let comps =
            g.0.iter()
                .zip(&target.factors)
                .map(|(c, f)| c.reduce_to(f.modulus))
                .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(AmbientElement(comps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::sl_order_modulus;
    use std::collections::HashSet;

    fn place(p: u64) -> PrimePlace {
        PrimePlace::rational(p).unwrap()
    }

    #[test]
    fn full_level_orders_match_enumeration() {
        for (p, e, expected) in [(3u64, 1u32, 24u64), (5, 1, 120), (3, 2, 648)] {
            let spec = SubgroupSpec::new(2, None).unwrap();
            let level = Level::new().with(place(p), e);
            let q = quotient_of(&spec, &level).unwrap();
            assert_eq!(q.order(), BigUint::from(expected));
            assert_eq!(q.order(), sl_order_modulus(2, p.pow(e)));
            assert_eq!(q.enumerate(10_000).unwrap().len() as u64, expected);
        }
    }

    #[test]
    fn central_principal_counts_by_brute_force() {
        // Gamma(-1; 5) mod 25 in SL_2: count matrices congruent to +-I mod 5.
        let spec = SubgroupSpec::new(2, None)
            .unwrap()
            .with(place(5), LocalCondition::CentralPrincipal { order: 2, depth: 1 })
            .unwrap();
        let level = Level::new().with(place(5), 2);
        let q = quotient_of(&spec, &level).unwrap();
        let mut count = 0u64;
        for a in 0..25i64 {
            for b in (0..25i64).step_by(5) {
                for c in (0..25i64).step_by(5) {
                    for d in 0..25i64 {
                        if let Ok(m) = SLMat::new(2, 25, &[a, b, c, d]) {
                            let g = AmbientElement::new(vec![m]);
                            if q.member(&g) {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(BigUint::from(count), q.order());
        assert_eq!(q.order(), BigUint::from(2u32 * 125));
    }

    #[test]
    fn samples_are_members_and_deterministic() {
        let spec = SubgroupSpec::new(3, None)
            .unwrap()
            .with(place(7), LocalCondition::ParabolicPullback { theta: RootSubset::from_blocks(&[1, 2]).unwrap() })
            .unwrap()
            .with(place(5), LocalCondition::Principal { depth: 1 })
            .unwrap();
        let level = Level::new().with(place(7), 2).with(place(5), 2);
        let q = quotient_of(&spec, &level).unwrap();
        for seed in 0..50 {
            let g = q.sample(seed);
            assert!(q.member(&g));
            assert_eq!(g, q.sample(seed));
        }
        assert_ne!(q.sample(1), q.sample(2));
    }

    #[test]
    fn principal_samples_cover_kernel() {
        let spec = SubgroupSpec::new(2, None).unwrap().with(place(3), LocalCondition::Principal { depth: 1 }).unwrap();
        let q = quotient_of(&spec, &Level::new().with(place(3), 2)).unwrap();
        let seen: HashSet<AmbientElement> = (0..2000).map(|s| q.sample(s)).collect();
        assert_eq!(BigUint::from(seen.len()), q.order());
    }

    #[test]
    fn parabolic_quotient_matches_closure() {
        let theta = RootSubset::from_blocks(&[1, 2]).unwrap();
        let spec =
            SubgroupSpec::new(3, None).unwrap().with(place(3), LocalCondition::ParabolicPullback { theta }).unwrap();
        let q = quotient_of(&spec, &spec.minimal_level()).unwrap();
        let all = q.enumerate(100_000).unwrap();
        assert_eq!(BigUint::from(all.len()), q.order());
        assert!(all.iter().all(|g| q.member(g)));
    }

    #[test]
    fn central_presence_detects_centre() {
        let spec = SubgroupSpec::new(4, None)
            .unwrap()
            .with(place(5), LocalCondition::CentralPrincipal { order: 2, depth: 1 })
            .unwrap()
            .with(place(7), LocalCondition::Principal { depth: 1 })
            .unwrap();
        let q = quotient_of(&spec, &spec.minimal_level()).unwrap();
        assert!(q.central_presence(&place(5), 2).unwrap());
        assert!(!q.central_presence(&place(7), 2).unwrap());
        assert_eq!(q.order(), BigUint::from(2u32));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let base = SubgroupSpec::new(3, None).unwrap();
        assert!(base.clone().with(place(5), LocalCondition::CentralPrincipal { order: 2, depth: 1 }).is_err());
        assert!(base.clone().with(place(5), LocalCondition::Principal { depth: 0 }).is_err());
        let spec = base.with(place(5), LocalCondition::Principal { depth: 2 }).unwrap();
        assert!(matches!(
            quotient_of(&spec, &Level::new().with(place(5), 1)),
            Err(CongruenceError::LevelBelowDepth { .. })
        ));
        assert!(matches!(quotient_of(&spec, &Level::new()), Err(CongruenceError::MissingLevel(_))));
    }

    #[test]
    fn spec_round_trips_through_json() {
        let (a, b) = PrimePlace::split_pair(7, 2).unwrap();
        let spec = SubgroupSpec::new(2, Some(2))
            .unwrap()
            .with(a, LocalCondition::Principal { depth: 1 })
            .unwrap()
            .with(b, LocalCondition::Full)
            .unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<SubgroupSpec>(&json).unwrap(), spec);
        let level = spec.minimal_level();
        let back: Level = serde_json::from_str(&serde_json::to_string(&level).unwrap()).unwrap();
        assert_eq!(back, level);
    }

    #[test]
    fn reduction_is_a_homomorphism() {
        let spec = SubgroupSpec::new(2, None).unwrap();
        let fine = quotient_of(&spec, &Level::new().with(place(5), 3).with(place(3), 2)).unwrap();
        let coarse = quotient_of(&spec, &Level::new().with(place(5), 1).with(place(3), 1)).unwrap();
        for s in 0..20 {
            let x = fine.sample(2 * s);
            let y = fine.sample(2 * s + 1);
            let lhs = fine.reduce_to(&(&x * &y), &coarse).unwrap();
            let rhs = &fine.reduce_to(&x, &coarse).unwrap() * &fine.reduce_to(&y, &coarse).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
