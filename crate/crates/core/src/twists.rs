//! Explicit isomorphisms between finite quotients and their verification.

use std::collections::HashSet;
use std::ops::Add;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chevalley::{graph_automorphism_inverse_with, graph_automorphism_with, WeylRep};
use crate::congruence::{AmbientElement, CongruenceError, FiniteQuotientGroup};
use crate::exec::{map_reduce, Execution};
use crate::matgroup::{central_root, MatError};
use crate::ring_arith::{inv_mod, pow_mod, PrimePlace};

/// Sources with at most this many elements are checked exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 256;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("element is not in the source quotient")]
    NotInSource,
    #[error("source and target quotients have different place sets")]
    PlaceMismatch,
    #[error("components at {a} and {b} live over different moduli ({ma} vs {mb})")]
    ModulusMismatch { a: String, b: String, ma: u64, mb: u64 },
    #[error("component at {0} is not congruent to a root of unity of the transported order")]
    NotCentral(String),
    #[error("twist acts on SL_{found}, quotient is SL_{expected}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

pub type Result<T> = std::result::Result<T, TwistError>;

/// The automorphism of the ambient product used to identify two quotients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TwistKind {
    Identity,
    /// Moves the central `m`-torsion from place `from` to place `to`.
    CentralTransport {
        from: PrimePlace,
        to: PrimePlace,
        order: u64,
    },
    /// Exchanges the components at two places with equal residue rings.
    PlaceSwap {
        a: PrimePlace,
        b: PrimePlace,
    },
    /// `g -> w (g^T)^-1 w^-1` at one place, or its inverse.
    GraphAutAtPlace {
        place: PrimePlace,
        weyl: WeylRep,
        #[serde(default)]
        inverse: bool,
    },
}

impl TwistKind {
    pub fn name(&self) -> &'static str {
        match self {
            TwistKind::Identity => "identity",
            TwistKind::CentralTransport { .. } => "central_transport",
            TwistKind::PlaceSwap { .. } => "place_swap",
            TwistKind::GraphAutAtPlace { .. } => "graph_aut_at_place",
        }
    }

    pub fn inverse(&self) -> TwistKind {
        match self {
            TwistKind::Identity => TwistKind::Identity,
            TwistKind::CentralTransport { from, to, order } => {
                TwistKind::CentralTransport { from: to.clone(), to: from.clone(), order: *order }
            }
            TwistKind::PlaceSwap { a, b } => TwistKind::PlaceSwap { a: a.clone(), b: b.clone() },
            TwistKind::GraphAutAtPlace { place, weyl, inverse } => {
                TwistKind::GraphAutAtPlace { place: place.clone(), weyl: weyl.clone(), inverse: !inverse }
            }
        }
    }
}

/// A twist together with the quotients it is claimed to identify.
#[derive(Debug, Clone)]
pub struct QuotientIso {
    kind: TwistKind,
    source: FiniteQuotientGroup,
    target: FiniteQuotientGroup,
}

impl QuotientIso {
    /// Both quotients must live over the same ambient product.
    pub fn new(kind: TwistKind, source: FiniteQuotientGroup, target: FiniteQuotientGroup) -> Result<Self> {
        if source.places() != target.places() {
            return Err(TwistError::PlaceMismatch);
        }
        if source.n() != target.n() {
            return Err(TwistError::Dimension { expected: source.n(), found: target.n() });
        }
        let moduli_match = source.factors().iter().zip(target.factors()).all(|(a, b)| a.modulus() == b.modulus());
        if !moduli_match {
            return Err(TwistError::PlaceMismatch);
        }
        match &kind {
            TwistKind::Identity => {}
            TwistKind::CentralTransport { from, to, .. } => {
                source.index_of(from)?;
                source.index_of(to)?;
            }
            TwistKind::PlaceSwap { a, b } => {
                source.index_of(a)?;
                source.index_of(b)?;
            }
            TwistKind::GraphAutAtPlace { place, weyl, .. } => {
                source.index_of(place)?;
                if weyl.n() != source.n() {
                    return Err(TwistError::Dimension { expected: source.n(), found: weyl.n() });
                }
            }
        }
        Ok(QuotientIso { kind, source, target })
    }

    pub fn kind(&self) -> &TwistKind {
        &self.kind
    }

    pub fn source(&self) -> &FiniteQuotientGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteQuotientGroup {
        &self.target
    }

    pub fn inverse(&self) -> QuotientIso {
        QuotientIso { kind: self.kind.inverse(), source: self.target.clone(), target: self.source.clone() }
    }

    /// Image of a source element. The result is not checked against the
    /// target; see [`verify_iso`].
    pub fn apply(&self, g: &AmbientElement) -> Result<AmbientElement> {
        if !self.source.member(g) {
            return Err(TwistError::NotInSource);
        }
        let mut comps = g.components().to_vec();
        match &self.kind {
            TwistKind::Identity => {}
            TwistKind::CentralTransport { from, to, order } => {
                let i = self.source.index_of(from)?;
                let j = self.source.index_of(to)?;
                let fi = &self.source.factors()[i];
                let fj = &self.source.factors()[j];
                let n = self.source.n();
                let p = from.p();
                let zeta_from = central_root(n, p, fi.exponent(), *order)?;
                let z = comps[i].get(0, 0) % p;
                let k = (0..*order)
                    .find(|&k| pow_mod(zeta_from, k, p) == z)
                    .ok_or_else(|| TwistError::NotCentral(from.to_string()))?;
                let undo = inv_mod(pow_mod(zeta_from, k, fi.modulus()), fi.modulus()).expect("unit");
                let zeta_to = central_root(n, to.p(), fj.exponent(), *order)?;
                comps[i] = comps[i].scale(undo)?;
                comps[j] = comps[j].scale(pow_mod(zeta_to, k, fj.modulus()))?;
            }
            TwistKind::PlaceSwap { a, b } => {
                let i = self.source.index_of(a)?;
                let j = self.source.index_of(b)?;
                let (ma, mb) = (comps[i].modulus(), comps[j].modulus());
                if ma != mb {
                    return Err(TwistError::ModulusMismatch { a: a.to_string(), b: b.to_string(), ma, mb });
                }
                comps.swap(i, j);
            }
            TwistKind::GraphAutAtPlace { place, weyl, inverse } => {
                let i = self.source.index_of(place)?;
                comps[i] = if *inverse {
                    graph_automorphism_inverse_with(weyl, &comps[i])
                } else {
                    graph_automorphism_with(weyl, &comps[i])
                };
            }
        }
        Ok(AmbientElement::new(comps))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Witnessed,
    Refuted,
}

/// Outcome of checking a [`QuotientIso`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub twist: String,
    pub seed: u64,
    pub samples_used: usize,
    pub generators_checked: usize,
    pub exhaustive: bool,
    pub homomorphism_failures: u64,
    pub membership_failures: u64,
    pub inverse_failures: u64,
    pub order_match: bool,
    pub source_order: String,
    pub target_order: String,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl IsoReport {
    pub fn witnessed(&self) -> bool {
        self.verdict == Verdict::Witnessed
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    hom: u64,
    mem: u64,
    inv: u64,
}

impl Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally { hom: self.hom + o.hom, mem: self.mem + o.mem, inv: self.inv + o.inv }
    }
}

/// Seed of the `index`-th sample derived from `master` (splitmix64).
pub fn child_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_element(iso: &QuotientIso, back: &QuotientIso, x: &AmbientElement) -> (Tally, Option<AmbientElement>) {
    let mut t = Tally::default();
    let Ok(y) = iso.apply(x) else {
        t.mem += 1;
        return (t, None);
    };
    if !iso.target.member(&y) {
        t.mem += 1;
        return (t, None);
    }
    if back.apply(&y).ok().as_ref() != Some(x) {
        t.inv += 1;
    }
    (t, Some(y))
}

fn check_pair(iso: &QuotientIso, back: &QuotientIso, x: &AmbientElement, y: &AmbientElement) -> Tally {
    let (tx, fx) = check_element(iso, back, x);
    let (ty, fy) = check_element(iso, back, y);
    let mut t = tx + ty;
    if let (Some(fx), Some(fy)) = (fx, fy) {
        if iso.apply(&(x * y)).ok() != Some(&fx * &fy) {
            t.hom += 1;
        }
    }
    t
}

/// [`verify_iso_with`] using the default execution mode.
pub fn verify_iso(iso: &QuotientIso, samples: usize, seed: u64) -> IsoReport {
    verify_iso_with(iso, samples, seed, Execution::default())
}

/// Checks that `iso` maps the source into the target, is multiplicative and
/// is inverted by [`QuotientIso::inverse`].
///
/// Generators (when known) are checked pairwise; `samples` random pairs are
/// drawn with seeds from [`child_seed`]. Sources with at most
/// [`EXHAUSTIVE_LIMIT`] elements are checked on every pair, which together
/// with equal orders proves the map is an isomorphism. Results do not depend
/// on `exec`.
pub fn verify_iso_with(iso: &QuotientIso, samples: usize, seed: u64, exec: Execution) -> IsoReport {
    let back = iso.inverse();
    let source_order = iso.source.order();
    let target_order = iso.target.order();
    let mut notes = Vec::new();
    let mut tally = Tally::default();

    if iso.apply(&iso.source.identity()).ok().as_ref() != Some(&iso.target.identity()) {
        tally.hom += 1;
        notes.push("identity is not mapped to identity".to_string());
    }

    if let TwistKind::GraphAutAtPlace { place, weyl, .. } = &iso.kind {
        let modulus = iso.source.index_of(place).map(|i| iso.source.factors()[i].modulus()).unwrap_or(0);
        if modulus > 0 && weyl.det(modulus) != 1 {
            tally.mem += 1;
            notes.push(format!(
                "Weyl representative has determinant -1 mod {modulus}: the twist leaves SL_{} and is rejected",
                weyl.n()
            ));
        }
    }

    let exhaustive_elements =
        if source_order <= BigUint::from(EXHAUSTIVE_LIMIT) { iso.source.enumerate(EXHAUSTIVE_LIMIT) } else { None };
    let exhaustive = exhaustive_elements.is_some();
    let mut generators_checked = 0;

    if let Some(all) = &exhaustive_elements {
        let k = all.len();
        tally = tally
            + map_reduce(
                k * k,
                exec,
                |idx| {
                    let (x, y) = (&all[idx / k], &all[idx % k]);
                    let mut t = Tally::default();
                    match (iso.apply(x), iso.apply(y), iso.apply(&(x * y))) {
                        (Ok(fx), Ok(fy), Ok(fxy)) if fxy == &fx * &fy => {}
                        (Ok(_), Ok(_), Ok(_)) => t.hom += 1,
                        _ => {}
                    }
                    t
                },
                Tally::default,
                Tally::add,
            );
        let mut images = HashSet::new();
        for x in all {
            let (t, fx) = check_element(iso, &back, x);
            tally = tally + t;
            if let Some(fx) = fx {
                images.insert(fx);
            }
        }
        if BigUint::from(images.len()) != target_order {
            notes.push(format!("image has {} elements, target has {target_order}", images.len()));
            tally.mem += 1;
        }
        notes.push(format!("exhaustive check over all {k} source elements"));
    } else if let Some(gens) = iso.source.generators() {
        generators_checked = gens.len();
        let k = gens.len();
        tally = tally
            + map_reduce(
                k * k,
                exec,
                |idx| check_pair(iso, &back, &gens[idx / k], &gens[idx % k]),
                Tally::default,
                Tally::add,
            );
    }

    tally = tally
        + map_reduce(
            samples,
            exec,
            |i| {
                let x = iso.source.sample(child_seed(seed, 2 * i as u64));
                let y = iso.source.sample(child_seed(seed, 2 * i as u64 + 1));
                check_pair(iso, &back, &x, &y)
            },
            Tally::default,
            Tally::add,
        );

    let order_match = source_order == target_order;
    if !order_match {
        notes.push("source and target orders differ".to_string());
    }
    let ok = order_match && tally == Tally::default();
    IsoReport {
        twist: iso.kind.name().to_string(),
        seed,
        samples_used: samples,
        generators_checked,
        exhaustive,
        homomorphism_failures: tally.hom,
        membership_failures: tally.mem,
        inverse_failures: tally.inv,
        order_match,
        source_order: source_order.to_string(),
        target_order: target_order.to_string(),
        verdict: if ok { Verdict::Witnessed } else { Verdict::Refuted },
        notes,
    }
}
