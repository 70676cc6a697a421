//! Preset pairs of congruence subgroups with a declared finite-level
//! isomorphism and a recomputable obstruction certificate.
//!
//! Each constructor returns a [`WitnessBundle`]. The bundle's twist is
//! checked with [`crate::twists::verify_iso`]; its certificate records the
//! finite data that rules out an algebraic isomorphism between the two
//! groups. Non-isomorphism of the lattices themselves follows from
//! superrigidity and is reported as such, not computed.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chevalley::{fixed_lines, parabolic_order, ChevalleyError, ParabolicSpec, RootSubset, WeylRep};
use crate::congruence::{
    quotient_of, AmbientElement, CongruenceError, FiniteQuotientGroup, Level, LocalCondition, SubgroupSpec,
};
use crate::matgroup::{central_root, elementary, MatError, SLMat};
use crate::ring_arith::{
    conj_place, galois_conj, gcd, is_prime, is_squarefree, residue_map, splitting_type, ArithError, PrimePlace,
    QuadInt, ResidueFactor, Splitting,
};
use crate::twists::{QuotientIso, TwistError, TwistKind};

/// Label attached to every non-isomorphism claim.
pub const NON_ISOMORPHISM_BASIS: &str =
    "not machine-verified: follows from superrigidity of higher-rank lattices given the finite certificate";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MethodError {
    #[error("{0} must be an odd prime")]
    NotOddPrime(u64),
    #[error("the two primes must differ (both are {0})")]
    EqualPrimes(u64),
    #[error("{p} is excluded for this method (excluded: {excluded:?})")]
    ExcludedPrime { p: u64, excluded: Vec<u64> },
    #[error(
        "central elements of order {m} must exist at both places with the same order: \
         {m} must divide gcd({n}, {p} - 1) = {gp} and gcd({n}, {q} - 1) = {gq}"
    )]
    CenterOrder { n: usize, p: u64, q: u64, m: u64, gp: u64, gq: u64 },
    #[error("central order must be at least 2, got {0}")]
    TrivialCenter(u64),
    #[error("{p} is {splitting} in Q(sqrt {d}); both primes must split")]
    NotSplit { p: u64, d: i64, splitting: Splitting },
    #[error("d = {0} must be squarefree and at least 2")]
    BadField(i64),
    #[error("level exponent must be at least 1")]
    ZeroLevel,
    #[error("fault {fault} does not apply to {method}")]
    FaultNotApplicable { fault: String, method: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Twist(#[from] TwistError),
}

pub type Result<T> = std::result::Result<T, MethodError>;

/// Preset parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MethodParams {
    MethodA { n: usize, p: u64, q: u64, order: u64, level: u32 },
    MethodB { p: u64, q: u64 },
    MethodC { d: i64, p: u64, q: u64 },
    S16 { p: u64 },
}

impl MethodParams {
    pub fn name(&self) -> &'static str {
        match self {
            MethodParams::MethodA { .. } => "method_a",
            MethodParams::MethodB { .. } => "method_b",
            MethodParams::MethodC { .. } => "method_c",
            MethodParams::S16 { .. } => "s16",
        }
    }
}

/// Presence of the canonical central element at one place in each quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralRow {
    pub place: String,
    pub first: bool,
    pub second: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParabolicRow {
    pub p: u64,
    pub lines: u64,
    pub fixed_first: usize,
    pub fixed_second: usize,
    pub order_first: String,
    pub order_second: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateRow {
    pub place: String,
    pub root: u64,
    pub conjugate: String,
    pub conjugate_root: u64,
    pub involutive: bool,
}

/// Method-specific finite data behind the obstruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    /// The central element sits at different places in the two groups.
    CentralAsymmetry { order: u64, rows: Vec<CentralRow> },
    /// The two parabolics at `q` are exchanged by the graph automorphism but
    /// fix different numbers of lines, so they are not conjugate.
    ParabolicNonConjugacy { theta: Vec<u32>, image: Vec<u32>, image_differs: bool, rows: Vec<ParabolicRow> },
    /// Conditions sit at `{p1, q1}` and `{p2, q1}`; the only non-trivial
    /// field automorphism also moves `q1`.
    GaloisFreeAction {
        d: i64,
        orbits: Vec<ConjugateRow>,
        support_first: Vec<String>,
        support_second: Vec<String>,
        carrying_automorphisms: Vec<String>,
        residue_compatible: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub certificate: Certificate,
    pub separating_element_ok: bool,
    pub holds: bool,
    pub non_isomorphism: String,
    pub narrative: Vec<String>,
}

/// A preset pair with its twist and certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessBundle {
    pub params: MethodParams,
    pub spec1: SubgroupSpec,
    pub spec2: SubgroupSpec,
    pub level: Level,
    pub twist: TwistKind,
    /// Element of the first quotient outside the second.
    pub separating_element: AmbientElement,
    pub obstruction: ObstructionReport,
}

/// Deliberate breakage of a bundle's twist for negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Replace a central transport by a swap of the two places.
    PlaceSwap,
    /// Flip a sign of the Weyl representative of the graph twist.
    W0Sign,
}

impl WitnessBundle {
    pub fn quotients(&self) -> Result<(FiniteQuotientGroup, FiniteQuotientGroup)> {
        Ok((quotient_of(&self.spec1, &self.level)?, quotient_of(&self.spec2, &self.level)?))
    }

    pub fn iso(&self) -> Result<QuotientIso> {
        let (q1, q2) = self.quotients()?;
        Ok(QuotientIso::new(self.twist.clone(), q1, q2)?)
    }

    /// Replaces the twist by a broken one. The certificate is unaffected.
    pub fn inject_fault(&mut self, fault: Fault) -> Result<()> {
        let not_applicable =
            || MethodError::FaultNotApplicable { fault: format!("{fault:?}"), method: self.params.name().into() };
        self.twist = match (fault, &self.twist) {
            (Fault::PlaceSwap, TwistKind::CentralTransport { from, to, .. }) => {
                TwistKind::PlaceSwap { a: from.clone(), b: to.clone() }
            }
            (Fault::W0Sign, TwistKind::GraphAutAtPlace { place, weyl, inverse }) => TwistKind::GraphAutAtPlace {
                place: place.clone(),
                weyl: WeylRep::sign_corrupted(weyl.n()),
                inverse: *inverse,
            },
            _ => return Err(not_applicable()),
        };
        Ok(())
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(MethodError::NotOddPrime(p));
    }
    Ok(())
}

fn check_not_excluded(p: u64, excluded: &[u64]) -> Result<()> {
    if excluded.contains(&p) {
        return Err(MethodError::ExcludedPrime { p, excluded: excluded.to_vec() });
    }
    Ok(())
}

fn rational(p: u64) -> Result<PrimePlace> {
    Ok(PrimePlace::rational(p)?)
}

fn central_swap_specs(n: usize, m: u64, p: &PrimePlace, q: &PrimePlace) -> Result<(SubgroupSpec, SubgroupSpec)> {
    let central = LocalCondition::CentralPrincipal { order: m, depth: 1 };
    let principal = LocalCondition::Principal { depth: 1 };
    let spec1 = SubgroupSpec::new(n, None)?.with(p.clone(), central.clone())?.with(q.clone(), principal.clone())?;
    let spec2 = SubgroupSpec::new(n, None)?.with(p.clone(), principal)?.with(q.clone(), central)?;
    Ok((spec1, spec2))
}

fn central_bundle(params: MethodParams, n: usize, m: u64, p: u64, q: u64, e: u32) -> Result<WitnessBundle> {
    let (vp, vq) = (rational(p)?, rational(q)?);
    let (spec1, spec2) = central_swap_specs(n, m, &vp, &vq)?;
    let level = Level::new().with(vp.clone(), e).with(vq.clone(), e);
    let q1 = quotient_of(&spec1, &level)?;
    let zeta = central_root(n, p, e, m)?;
    let index = q1.index_of(&vp)?;
    let local = SLMat::identity(n, q1.factors()[index].modulus())?.scale(zeta)?;
    let separating_element = q1.embed(index, local);
    let mut bundle = WitnessBundle {
        params,
        spec1,
        spec2,
        level,
        twist: TwistKind::CentralTransport { from: vp, to: vq, order: m },
        separating_element,
        obstruction: placeholder(),
    };
    bundle.obstruction = obstruction_report(&bundle)?;
    Ok(bundle)
}

fn placeholder() -> ObstructionReport {
    ObstructionReport {
        certificate: Certificate::CentralAsymmetry { order: 0, rows: Vec::new() },
        separating_element_ok: false,
        holds: false,
        non_isomorphism: String::new(),
        narrative: Vec::new(),
    }
}

/// Central element of order `m` at `p` versus at `q`, in `SL_n(Z)`, at level
/// `p^e q^e`.
pub fn method_a_pair(n: usize, p: u64, q: u64, m: u64, e: u32) -> Result<WitnessBundle> {
    if n < 2 {
        return Err(MatError::Dimension(n).into());
    }
    check_odd_prime(p)?;
    check_odd_prime(q)?;
    if p == q {
        return Err(MethodError::EqualPrimes(p));
    }
    if m < 2 {
        return Err(MethodError::TrivialCenter(m));
    }
    let (gp, gq) = (gcd(n as u64, p - 1), gcd(n as u64, q - 1));
    if gp % m != 0 || gq % m != 0 {
        return Err(MethodError::CenterOrder { n, p, q, m, gp, gq });
    }
    if e == 0 {
        return Err(MethodError::ZeroLevel);
    }
    central_bundle(MethodParams::MethodA { n, p, q, order: m, level: e }, n, m, p, q, e)
}

/// `P_1`-pullback versus `P_2`-pullback at `q` in `SL_4(Z)`, with a common
/// `P_1` condition at `p` and a principal condition at 3.
pub fn method_b_pair(p: u64, q: u64) -> Result<WitnessBundle> {
    for r in [p, q] {
        if !is_prime(r) {
            return Err(MethodError::NotOddPrime(r));
        }
        check_not_excluded(r, &[2, 3])?;
    }
    if p == q {
        return Err(MethodError::EqualPrimes(p));
    }
    let theta = RootSubset::from_blocks(&[1, 3])?;
    let image = theta.dynkin_image();
    let (vp, vq, v3) = (rational(p)?, rational(q)?, rational(3)?);
    let parabolic = |t: &RootSubset| LocalCondition::ParabolicPullback { theta: t.clone() };
    let principal = LocalCondition::Principal { depth: 1 };
    let spec1 = SubgroupSpec::new(4, None)?
        .with(vp.clone(), parabolic(&theta))?
        .with(vq.clone(), parabolic(&theta))?
        .with(v3.clone(), principal.clone())?;
    let spec2 = SubgroupSpec::new(4, None)?
        .with(vp.clone(), parabolic(&theta))?
        .with(vq.clone(), parabolic(&image))?
        .with(v3, principal)?;
    let level = spec1.minimal_level();
    let q1 = quotient_of(&spec1, &level)?;
    // I + E_{4,2} (1-based) lies in P_1 but below the blocks of P_2.
    let index = q1.index_of(&vq)?;
    let separating_element = q1.embed(index, elementary(4, 3, 1, 1, q)?);
    let mut bundle = WitnessBundle {
        params: MethodParams::MethodB { p, q },
        spec1,
        spec2,
        level,
        twist: TwistKind::GraphAutAtPlace { place: vq, weyl: WeylRep::canonical(4), inverse: false },
        separating_element,
        obstruction: placeholder(),
    };
    bundle.obstruction = obstruction_report(&bundle)?;
    Ok(bundle)
}

/// Principal conditions at `{p1, q1}` versus `{p2, q1}` in
/// `SL_2(Z[sqrt d])`, with `p` and `q` split.
pub fn method_c_pair(d: i64, p: u64, q: u64) -> Result<WitnessBundle> {
    if d < 2 || !is_squarefree(d) {
        return Err(MethodError::BadField(d));
    }
    check_odd_prime(p)?;
    check_odd_prime(q)?;
    if p == q {
        return Err(MethodError::EqualPrimes(p));
    }
    for r in [p, q] {
        let splitting = splitting_type(r, d)?;
        if !matches!(splitting, Splitting::Split { .. }) {
            return Err(MethodError::NotSplit { p: r, d, splitting });
        }
    }
    let (p1, p2) = PrimePlace::split_pair(p, d)?;
    let (q1, q2) = PrimePlace::split_pair(q, d)?;
    let principal = LocalCondition::Principal { depth: 1 };
    let spec1 =
        SubgroupSpec::new(2, Some(d))?.with(p1.clone(), principal.clone())?.with(q1.clone(), principal.clone())?;
    let spec2 = SubgroupSpec::new(2, Some(d))?.with(p2.clone(), principal.clone())?.with(q1.clone(), principal)?;
    let level = Level::new().with(p1.clone(), 1).with(p2.clone(), 1).with(q1, 1).with(q2, 1);
    let quotient1 = quotient_of(&spec1, &level)?;
    let index = quotient1.index_of(&p2)?;
    let separating_element = quotient1.embed(index, elementary(2, 0, 1, 1, p)?);
    let mut bundle = WitnessBundle {
        params: MethodParams::MethodC { d, p, q },
        spec1,
        spec2,
        level,
        twist: TwistKind::PlaceSwap { a: p1, b: p2 },
        separating_element,
        obstruction: placeholder(),
    };
    bundle.obstruction = obstruction_report(&bundle)?;
    Ok(bundle)
}

/// `SL_2` pair with the sign moved from the condition at 3 to the condition
/// at 5. `p` is the inverted prime of `Z[1/p]`; it is coprime to the level
/// and only recorded.
pub fn s16_pair(p: u64) -> Result<WitnessBundle> {
    if !is_prime(p) {
        return Err(MethodError::NotOddPrime(p));
    }
    check_not_excluded(p, &[2, 3, 5])?;
    central_bundle(MethodParams::S16 { p }, 2, 2, 3, 5, 1)
}

/// Bundle for `params`, validating every precondition.
pub fn build(params: &MethodParams) -> Result<WitnessBundle> {
    match *params {
        MethodParams::MethodA { n, p, q, order, level } => method_a_pair(n, p, q, order, level),
        MethodParams::MethodB { p, q } => method_b_pair(p, q),
        MethodParams::MethodC { d, p, q } => method_c_pair(d, p, q),
        MethodParams::S16 { p } => s16_pair(p),
    }
}

/// Recomputes the certificate of `bundle` from its specs.
pub fn obstruction_report(bundle: &WitnessBundle) -> Result<ObstructionReport> {
    let (q1, q2) = bundle.quotients()?;
    let separating_element_ok = q1.member(&bundle.separating_element) && !q2.member(&bundle.separating_element);
    let (certificate, cert_holds, narrative) = match &bundle.params {
        MethodParams::MethodA { n, p, q, order, .. } => central_certificate(&q1, &q2, *n, *p, *q, *order, None)?,
        MethodParams::S16 { p } => central_certificate(&q1, &q2, 2, 3, 5, 2, Some(*p))?,
        MethodParams::MethodB { p, q } => parabolic_certificate(&bundle.spec1, &bundle.spec2, *p, *q)?,
        MethodParams::MethodC { d, p, q } => galois_certificate(&bundle.spec1, &bundle.spec2, *d, *p, *q)?,
    };
    let distinct = bundle.spec1 != bundle.spec2 && q1.order() == q2.order();
    Ok(ObstructionReport {
        certificate,
        separating_element_ok,
        holds: cert_holds && separating_element_ok && distinct,
        non_isomorphism: NON_ISOMORPHISM_BASIS.to_string(),
        narrative,
    })
}

type CertificateParts = (Certificate, bool, Vec<String>);

fn central_certificate(
    q1: &FiniteQuotientGroup,
    q2: &FiniteQuotientGroup,
    n: usize,
    p: u64,
    q: u64,
    m: u64,
    inverted: Option<u64>,
) -> Result<CertificateParts> {
    let mut rows = Vec::new();
    for r in [p, q] {
        let v = rational(r)?;
        rows.push(CentralRow {
            place: v.to_string(),
            first: q1.central_presence(&v, m)?,
            second: q2.central_presence(&v, m)?,
        });
    }
    let holds = rows[0].first && !rows[0].second && !rows[1].first && rows[1].second;
    let mut narrative = vec![
        format!(
            "An abstract isomorphism of the two lattices in SL_{n} extends to an algebraic automorphism; \
             over Q there is no field automorphism to compose with."
        ),
        format!(
            "Inner, diagonal and graph automorphisms act place by place and preserve the centre at each place, \
             so none carries a group with central {m}-torsion at {p} to one with central {m}-torsion at {q}."
        ),
        format!(
            "The twist moves the central factor between {p} and {q}; it is an isomorphism of finite quotients \
             but not induced by an automorphism of SL_{n}."
        ),
    ];
    if m > 2 {
        narrative.push(format!(
            "Cyclic central subgroups of order {m} at {p} and {q} are matched generator to generator: \
             the smallest primitive root raised to phi/{m} on each side."
        ));
    }
    if let Some(s) = inverted {
        narrative.push(format!(
            "The ambient ring is Z[1/{s}]; {s} is coprime to the level 15, so every finite quotient \
             computed here is unaffected by inverting it."
        ));
    }
    Ok((Certificate::CentralAsymmetry { order: m, rows }, holds, narrative))
}

fn parabolic_certificate(spec1: &SubgroupSpec, spec2: &SubgroupSpec, p: u64, q: u64) -> Result<CertificateParts> {
    let vq = rational(q)?;
    let theta_of = |spec: &SubgroupSpec| match spec.conditions().get(&vq) {
        Some(LocalCondition::ParabolicPullback { theta }) => Some(theta.clone()),
        _ => None,
    };
    let (Some(theta), Some(image)) = (theta_of(spec1), theta_of(spec2)) else {
        return Ok((
            Certificate::ParabolicNonConjugacy { theta: vec![], image: vec![], image_differs: false, rows: vec![] },
            false,
            vec![],
        ));
    };
    let n = theta.n();
    let image_differs = theta.dynkin_image() == image && image != theta;
    let mut rows = Vec::new();
    for r in [p, q] {
        let a = ParabolicSpec::new(r, theta.clone())?;
        let b = ParabolicSpec::new(r, image.clone())?;
        let lines = (r.pow(n as u32) - 1) / (r - 1);
        rows.push(ParabolicRow {
            p: r,
            lines,
            fixed_first: fixed_lines(&a)?,
            fixed_second: fixed_lines(&b)?,
            order_first: parabolic_order(&a).to_string(),
            order_second: parabolic_order(&b).to_string(),
        });
    }
    let holds =
        image_differs && rows.iter().all(|r| r.fixed_first != r.fixed_second && r.order_first == r.order_second);
    let narrative = vec![
        format!(
            "The graph automorphism of SL_{n} sends the parabolic of type {:?} to type {:?}.",
            theta.blocks(),
            image.blocks()
        ),
        "Conjugate subgroups fix the same number of lines; the counts differ, so the two parabolics are not \
         conjugate in SL_4 over the residue field."
            .to_string(),
        format!(
            "An isomorphism of the lattices would be an inner or diagonal automorphism (no graph part, since the \
             condition at {p} is the same on both sides) and would carry the condition at {q} to a conjugate one."
        ),
        "The principal condition at 3 makes both groups torsion free and is shared by both sides.".to_string(),
    ];
    Ok((
        Certificate::ParabolicNonConjugacy {
            theta: theta.theta().iter().copied().collect(),
            image: image.theta().iter().copied().collect(),
            image_differs,
            rows,
        },
        holds,
        narrative,
    ))
}

fn galois_certificate(spec1: &SubgroupSpec, spec2: &SubgroupSpec, d: i64, p: u64, q: u64) -> Result<CertificateParts> {
    let (p1, p2) = PrimePlace::split_pair(p, d)?;
    let (q1, q2) = PrimePlace::split_pair(q, d)?;
    let mut orbits = Vec::new();
    let mut orbit_ok = true;
    for v in [&p1, &p2, &q1, &q2] {
        let c = conj_place(v);
        let involutive = conj_place(&c) == *v && c.validate(Some(d)).is_ok();
        orbit_ok &= involutive && c != *v;
        orbits.push(ConjugateRow {
            place: v.to_string(),
            root: v.root().unwrap_or(0),
            conjugate: c.to_string(),
            conjugate_root: c.root().unwrap_or(0),
            involutive,
        });
    }
    orbit_ok &= conj_place(&p1) == p2 && conj_place(&q1) == q2 && q2 != q1;

    let support = |s: &SubgroupSpec| s.support().into_iter().cloned().collect::<BTreeSet<_>>();
    let (s1, s2) = (support(spec1), support(spec2));
    let mut carrying = Vec::new();
    if s1 == s2 {
        carrying.push("identity".to_string());
    }
    if s1.iter().map(conj_place).collect::<BTreeSet<_>>() == s2 {
        carrying.push("conjugation".to_string());
    }

    // sigma is compatible with reduction: x mod sigma(v) = sigma(x) mod v.
    let mut residue_compatible = true;
    for v in [&p1, &p2, &q1, &q2] {
        for (a, b) in [(0, 1), (1, 1), (3, -2)] {
            let x = QuadInt::new(a, b, d)?;
            let fv = ResidueFactor::new(v.clone(), 1, Some(d))?;
            let fc = ResidueFactor::new(conj_place(v), 1, Some(d))?;
            residue_compatible &= residue_map(&galois_conj(x), &fv)? == residue_map(&x, &fc)?;
        }
    }

    let holds = orbit_ok && carrying.is_empty() && residue_compatible;
    let labels = |s: &BTreeSet<PrimePlace>| s.iter().map(ToString::to_string).collect::<Vec<_>>();
    let narrative = vec![
        format!(
            "Any isomorphism of the lattices is an algebraic automorphism of SL_2 composed with a field \
             automorphism of Q(sqrt {d}), which permutes the places above {p} and {q}."
        ),
        "Algebraic automorphisms of SL_2 preserve the level of a principal congruence subgroup, so the field \
         automorphism must carry one support set onto the other."
            .to_string(),
        format!(
            "The identity fixes {q1} but not {p1}, and conjugation moves {q1} to {q2}; neither carries the \
             first support onto the second."
        ),
        format!("Swapping the components at {p1} and {p2} identifies the finite quotients."),
    ];
    Ok((
        Certificate::GaloisFreeAction {
            d,
            orbits,
            support_first: labels(&s1),
            support_second: labels(&s2),
            carrying_automorphisms: carrying,
            residue_compatible,
        },
        holds,
        narrative,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twists::verify_iso;
    use num_bigint::BigUint;

    #[test]
    fn method_a_defaults() {
        let b = method_a_pair(4, 5, 7, 2, 2).unwrap();
        let Certificate::CentralAsymmetry { rows, .. } = &b.obstruction.certificate else { panic!() };
        let matrix: Vec<(bool, bool)> = rows.iter().map(|r| (r.first, r.second)).collect();
        assert_eq!(matrix, vec![(true, false), (false, true)]);
        assert!(b.obstruction.holds);
        let (q1, q2) = b.quotients().unwrap();
        let expected = BigUint::from(2u32) * BigUint::from(5u32).pow(15) * BigUint::from(7u32).pow(15);
        assert_eq!(q1.order(), expected);
        assert_eq!(q2.order(), expected);
        assert!(verify_iso(&b.iso().unwrap(), 300, 0).witnessed());
    }

    #[test]
    fn method_a_preconditions() {
        assert!(method_a_pair(4, 5, 13, 4, 1).is_ok());
        assert!(matches!(method_a_pair(4, 5, 7, 4, 1), Err(MethodError::CenterOrder { .. })));
        assert!(matches!(method_a_pair(4, 5, 5, 2, 1), Err(MethodError::EqualPrimes(5))));
        assert!(matches!(method_a_pair(3, 5, 7, 2, 1), Err(MethodError::CenterOrder { .. })));
        assert!(method_a_pair(4, 5, 7, 2, 0).is_err());
    }

    #[test]
    fn method_a_order_four_is_witnessed() {
        let b = method_a_pair(4, 5, 13, 4, 1).unwrap();
        assert!(b.obstruction.holds);
        assert!(verify_iso(&b.iso().unwrap(), 200, 1).witnessed());
    }

    #[test]
    fn method_b_certificate() {
        let b = method_b_pair(5, 7).unwrap();
        let Certificate::ParabolicNonConjugacy { rows, image_differs, .. } = &b.obstruction.certificate else {
            panic!()
        };
        assert!(image_differs);
        assert_eq!(
            rows.iter().map(|r| (r.lines, r.fixed_first, r.fixed_second)).collect::<Vec<_>>(),
            vec![(156, 1, 0), (400, 1, 0)]
        );
        assert_eq!(rows[0].order_first, "186000000");
        assert!(b.obstruction.holds);
        assert!(method_b_pair(5, 5).is_err());
        assert!(method_b_pair(3, 7).is_err());
    }

    #[test]
    fn method_c_certificate() {
        let b = method_c_pair(2, 7, 17).unwrap();
        assert!(b.obstruction.holds, "{:?}", b.obstruction);
        let Certificate::GaloisFreeAction { orbits, carrying_automorphisms, .. } = &b.obstruction.certificate else {
            panic!()
        };
        assert!(carrying_automorphisms.is_empty());
        let roots: Vec<u64> = orbits.iter().map(|o| o.root).collect();
        assert_eq!(roots, vec![3, 4, 6, 11]);
        assert!(matches!(method_c_pair(2, 5, 7), Err(MethodError::NotSplit { p: 5, .. })));
    }

    #[test]
    fn s16_orders_and_exclusions() {
        let b = s16_pair(7).unwrap();
        let (q1, q2) = b.quotients().unwrap();
        assert_eq!(q1.order(), BigUint::from(2u32));
        assert_eq!(q2.order(), BigUint::from(2u32));
        let report = verify_iso(&b.iso().unwrap(), 1, 0);
        assert!(report.exhaustive && report.witnessed());
        let b11 = s16_pair(11).unwrap();
        assert_eq!(b11.spec1, b.spec1);
        assert_ne!(b11.obstruction.narrative, b.obstruction.narrative);
        for p in [2, 3, 5, 9] {
            assert!(s16_pair(p).is_err());
        }
    }

    #[test]
    fn faults_break_verification() {
        let mut a = method_a_pair(4, 5, 7, 2, 2).unwrap();
        a.inject_fault(Fault::PlaceSwap).unwrap();
        let r = verify_iso(&a.iso().unwrap(), 50, 0);
        assert!(!r.witnessed() && r.membership_failures > 0);

        let mut b = method_b_pair(5, 7).unwrap();
        b.inject_fault(Fault::W0Sign).unwrap();
        let r = verify_iso(&b.iso().unwrap(), 50, 0);
        assert!(!r.witnessed() && r.membership_failures > 0);

        assert!(method_c_pair(2, 7, 17).unwrap().inject_fault(Fault::W0Sign).is_err());
    }

    #[test]
    fn bundles_round_trip_through_json() {
        for b in [
            method_a_pair(4, 5, 7, 2, 2).unwrap(),
            method_b_pair(5, 7).unwrap(),
            method_c_pair(2, 7, 17).unwrap(),
            s16_pair(7).unwrap(),
        ] {
            let json = serde_json::to_string(&b).unwrap();
            let back: WitnessBundle = serde_json::from_str(&json).unwrap();
            assert_eq!(back, b);
            assert_eq!(obstruction_report(&back).unwrap(), b.obstruction);
        }
    }
}
