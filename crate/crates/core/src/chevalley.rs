//! Standard parabolic subgroups of `SL_n(F_p)`, the graph automorphism of
//! type `A_{n-1}`, and the fixed-line invariant that separates a parabolic
//! from its image under the diagram symmetry.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{map_reduce, Execution};
use crate::matgroup::{act, elementary, gl_order, lines_of_projective_space, MatError, SLMat};
use crate::ring_arith::{inv_mod, is_prime, prime_power, primitive_root, reduce};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChevalleyError {
    #[error("simple root index {index} outside 1..={max}")]
    RootIndex { index: u32, max: u32 },
    #[error("block sizes {blocks:?} do not partition {n}")]
    Blocks { blocks: Vec<usize>, n: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("rank parameter must be at least 2, got {0}")]
    Rank(usize),
    #[error(transparent)]
    Mat(#[from] MatError),
}

pub type Result<T> = std::result::Result<T, ChevalleyError>;

/// A subset `theta` of the simple roots `alpha_1 .. alpha_{n-1}` of `SL_n`.
///
/// `theta` lists the roots kept inside the Levi factor, so the block
/// boundaries of the parabolic sit at the roots outside `theta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootSubset {
    n: usize,
    theta: BTreeSet<u32>,
}

impl RootSubset {
    pub fn new(n: usize, theta: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n < 2 {
            return Err(ChevalleyError::Rank(n));
        }
        let theta: BTreeSet<u32> = theta.into_iter().collect();
        let max = n as u32 - 1;
        if let Some(&index) = theta.iter().find(|&&i| i == 0 || i > max) {
            return Err(ChevalleyError::RootIndex { index, max });
        }
        Ok(RootSubset { n, theta })
    }

    /// The subset whose parabolic has the given diagonal block sizes.
    pub fn from_blocks(blocks: &[usize]) -> Result<Self> {
        let n: usize = blocks.iter().sum();
        if blocks.contains(&0) || n < 2 {
            return Err(ChevalleyError::Blocks { blocks: blocks.to_vec(), n });
        }
        let mut boundaries = BTreeSet::new();
        let mut acc = 0;
        for &b in &blocks[..blocks.len() - 1] {
            acc += b;
            boundaries.insert(acc as u32);
        }
        Self::new(n, (1..n as u32).filter(|i| !boundaries.contains(i)))
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::new(n, 1..n as u32)
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> &BTreeSet<u32> {
        &self.theta
    }

    /// Image under the diagram symmetry `i -> n - i`.
    pub fn dynkin_image(&self) -> RootSubset {
        RootSubset { n: self.n, theta: self.theta.iter().map(|&i| self.n as u32 - i).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.dynkin_image() == *self
    }

    /// Block index of each row (zero-based).
    pub fn block_of_rows(&self) -> Vec<usize> {
        let mut block = 0;
        (0..self.n)
            .map(|row| {
                if row > 0 && !self.theta.contains(&(row as u32)) {
                    block += 1;
                }
                block
            })
            .collect()
    }

    pub fn blocks(&self) -> Vec<usize> {
        let rows = self.block_of_rows();
        let count = rows.last().map_or(0, |b| b + 1);
        (0..count).map(|b| rows.iter().filter(|&&r| r == b).count()).collect()
    }
}

/// The standard parabolic `P_theta` of `SL_n(F_p)`: block upper triangular
/// matrices with the block sizes of `theta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParabolicSpec {
    p: u64,
    theta: RootSubset,
}

impl ParabolicSpec {
    pub fn new(p: u64, theta: RootSubset) -> Result<Self> {
        if !is_prime(p) {
            return Err(ChevalleyError::NotPrime(p));
        }
        Ok(ParabolicSpec { p, theta })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.theta.n
    }

    pub fn theta(&self) -> &RootSubset {
        &self.theta
    }

    pub fn dynkin_image(&self) -> ParabolicSpec {
        ParabolicSpec { p: self.p, theta: self.theta.dynkin_image() }
    }
}

/// Whether `g mod p` lies in `P`. `g` may live over any `Z/p^e`; matrices of
/// another dimension or characteristic are never members.
pub fn parabolic_membership(g: &SLMat, parabolic: &ParabolicSpec) -> bool {
    if g.n() != parabolic.n() || !g.modulus().is_multiple_of(parabolic.p) {
        return false;
    }
    let blocks = parabolic.theta.block_of_rows();
    let n = g.n();
    (0..n).all(|i| (0..n).all(|j| blocks[i] <= blocks[j] || g.get(i, j).is_multiple_of(parabolic.p)))
}

/// `|P_theta| = p^(#entries above the blocks) |S(GL_b1 x ... x GL_bk)|`.
pub fn parabolic_order(parabolic: &ParabolicSpec) -> BigUint {
    let blocks = parabolic.theta.blocks();
    let n = parabolic.n();
    let p = parabolic.p;
    let within: usize = blocks.iter().map(|b| b * b).sum();
    let unipotent = (n * n - within) / 2;
    let levi: BigUint = blocks.iter().map(|&b| gl_order(b, p)).product();
    BigUint::from(p).pow(unipotent as u32) * levi / BigUint::from(p - 1)
}

/// Generators of `P_theta` lifted to `SL_n(Z/p^e)`: the root elements
/// `I + E_ij` inside `P`, and one torus element `h_j(g)` per block boundary
/// `j`, with `g` the smallest primitive root modulo `p^e`.
///
/// Reducing the list mod `p` gives generators of `P_theta` itself.
pub fn lifted_parabolic_generators(parabolic: &ParabolicSpec, e: u32) -> Result<Vec<SLMat>> {
    let n = parabolic.n();
    let p = parabolic.p;
    let q = prime_power(p, e).map_err(MatError::from)?;
    let blocks = parabolic.theta.block_of_rows();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && blocks[i] <= blocks[j] {
                gens.push(elementary(n, i, j, 1, q)?);
            }
        }
    }
    if p > 2 {
        let g = primitive_root(p, e).map_err(MatError::from)?;
        let g_inv = inv_mod(g, q).expect("primitive root is a unit");
        for boundary in 1..n {
            if parabolic.theta.theta.contains(&(boundary as u32)) {
                continue;
            }
            let mut entries = vec![0i64; n * n];
            for k in 0..n {
                entries[k * n + k] = 1;
            }
            entries[(boundary - 1) * n + boundary - 1] = g as i64;
            entries[boundary * n + boundary] = g_inv as i64;
            gens.push(SLMat::new(n, q, &entries)?);
        }
    }
    Ok(gens)
}

pub fn parabolic_generators(parabolic: &ParabolicSpec) -> Result<Vec<SLMat>> {
    lifted_parabolic_generators(parabolic, 1)
}

// ---------------------------------------------------------------------------
// Graph automorphism

/// A signed reversal matrix `w` with `w[i][n-1-i] = signs[i]`, used as the
/// representative of the longest Weyl element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylRep {
    signs: Vec<i8>,
}

impl WeylRep {
    /// Reversal permutation with the `(1, n)` entry negated exactly when the
    /// reversal is an odd permutation, so that `det w = 1`.
    pub fn canonical(n: usize) -> WeylRep {
        let mut signs = vec![1i8; n];
        if (n * (n - 1) / 2) % 2 == 1 {
            signs[0] = -1;
        }
        WeylRep { signs }
    }

    /// The canonical representative with the sign of its `(1, n)` entry
    /// flipped. Fault injection only: its determinant is `-1`.
    pub fn sign_corrupted(n: usize) -> WeylRep {
        let mut w = Self::canonical(n);
        w.signs[0] = -w.signs[0];
        w
    }

    pub fn n(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Determinant modulo `modulus`, computed from the explicit matrix.
    pub fn det(&self, modulus: u64) -> u64 {
        let n = self.n();
        let mut entries = vec![0u64; n * n];
        for (i, &s) in self.signs.iter().enumerate() {
            entries[i * n + (n - 1 - i)] = reduce(s as i64, modulus);
        }
        crate::matgroup::raw_det(n, modulus, &entries)
    }

    /// Signs of the diagonal matrix `c = w (w^T)^{-1} = w^2`.
    fn square_signs(&self) -> Vec<i8> {
        let n = self.n();
        (0..n).map(|i| self.signs[i] * self.signs[n - 1 - i]).collect()
    }
}

/// `g -> w (g^T)^{-1} w^{-1}` for a signed reversal `w`.
pub fn graph_automorphism_with(w: &WeylRep, g: &SLMat) -> SLMat {
    let n = g.n();
    assert_eq!(w.n(), n, "Weyl representative has the wrong size");
    let m = g.modulus();
    let t = g.inverse().transpose();
    let mut entries = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            let x = t.get(n - 1 - i, n - 1 - j);
            entries[i * n + j] = if w.signs[i] * w.signs[j] < 0 { (m - x) % m } else { x };
        }
    }
    SLMat::from_trusted(n, m, entries)
}

/// Inverse of [`graph_automorphism_with`]: `g -> c^{-1} phi(g) c` where
/// `phi^2` is conjugation by `c = w (w^T)^{-1}`.
pub fn graph_automorphism_inverse_with(w: &WeylRep, g: &SLMat) -> SLMat {
    let phi = graph_automorphism_with(w, g);
    let c = w.square_signs();
    let n = g.n();
    let m = g.modulus();
    let entries = (0..n * n)
        .map(|idx| {
            let x = phi.entries()[idx];
            if c[idx / n] * c[idx % n] < 0 {
                (m - x) % m
            } else {
                x
            }
        })
        .collect();
    SLMat::from_trusted(n, m, entries)
}

/// The graph automorphism with the canonical Weyl representative.
pub fn graph_automorphism(g: &SLMat) -> SLMat {
    graph_automorphism_with(&WeylRep::canonical(g.n()), g)
}

pub fn graph_automorphism_inverse(g: &SLMat) -> SLMat {
    graph_automorphism_inverse_with(&WeylRep::canonical(g.n()), g)
}

/// Number of lines of `F_p^n` fixed by every element of `P`.
///
/// Conjugate subgroups fix equally many lines, so different counts certify
/// that two parabolics are not conjugate.
pub fn fixed_lines(parabolic: &ParabolicSpec) -> Result<usize> {
    fixed_lines_with(parabolic, Execution::default())
}

pub fn fixed_lines_with(parabolic: &ParabolicSpec, exec: Execution) -> Result<usize> {
    fixed_lines_of_generators(&parabolic_generators(parabolic)?, parabolic.n(), parabolic.p, exec)
}

/// Lines fixed by all of `gens` (which must live in `SL_n(F_p)`).
pub fn fixed_lines_of_generators(gens: &[SLMat], n: usize, p: u64, exec: Execution) -> Result<usize> {
    let lines = lines_of_projective_space(n, p)?;
    for g in gens {
        if g.n() != n || g.modulus() != p {
            return Err(MatError::Mismatch("generator outside SL_n(F_p)".into()).into());
        }
    }
    Ok(map_reduce(
        lines.len(),
        exec,
        |k| {
            let line = &lines[k];
            usize::from(gens.iter().all(|g| act(g, line).as_ref() == Ok(line)))
        },
        || 0,
        |a, b| a + b,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::sl_order;
    use crate::oracle::closure;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p1(p: u64) -> ParabolicSpec {
        ParabolicSpec::new(p, RootSubset::from_blocks(&[1, 3]).unwrap()).unwrap()
    }

    fn p2(p: u64) -> ParabolicSpec {
        ParabolicSpec::new(p, RootSubset::from_blocks(&[3, 1]).unwrap()).unwrap()
    }

    /// Random element of `P_theta` built directly from its block pattern.
    fn random_parabolic_element(rng: &mut ChaCha8Rng, parabolic: &ParabolicSpec) -> SLMat {
        let n = parabolic.n();
        let p = parabolic.p();
        let blocks = parabolic.theta().block_of_rows();
        loop {
            let mut entries = vec![0i64; n * n];
            for i in 0..n {
                for j in 0..n {
                    if blocks[i] <= blocks[j] {
                        entries[i * n + j] = rng.random_range(0..p as i64);
                    }
                }
            }
            let raw: Vec<u64> = entries.iter().map(|&x| x as u64).collect();
            let det = crate::matgroup::raw_det(n, p, &raw);
            if det == 0 {
                continue;
            }
            let inv = inv_mod(det, p).unwrap() as i64;
            for x in entries.iter_mut().take(n) {
                *x = *x * inv % p as i64;
            }
            return SLMat::new(n, p, &entries).unwrap();
        }
    }

    #[test]
    fn root_subsets() {
        let theta = RootSubset::from_blocks(&[1, 3]).unwrap();
        assert_eq!(theta.theta(), &BTreeSet::from([2, 3]));
        assert_eq!(theta.dynkin_image(), RootSubset::from_blocks(&[3, 1]).unwrap());
        assert!(!theta.is_symmetric());
        assert_eq!(theta.blocks(), vec![1, 3]);
        assert_eq!(RootSubset::full(4).unwrap().blocks(), vec![4]);
        assert_eq!(RootSubset::empty(4).unwrap().blocks(), vec![1, 1, 1, 1]);
        assert!(RootSubset::new(4, [4]).is_err());
        for n in 2..7 {
            for mask in 0u32..(1 << (n - 1)) {
                let t = RootSubset::new(n, (1..n as u32).filter(|i| mask & (1 << (i - 1)) != 0)).unwrap();
                assert_eq!(t.dynkin_image().dynkin_image(), t);
                assert_eq!(RootSubset::from_blocks(&t.blocks()).unwrap(), t);
            }
        }
    }

    #[test]
    fn membership_examples() {
        for p in [5u64, 7] {
            let x12 = elementary(4, 0, 1, 1, p).unwrap();
            for theta in [p1(p), p2(p)] {
                assert!(parabolic_membership(&x12, &theta));
            }
            assert!(!parabolic_membership(&elementary(4, 1, 0, 1, p).unwrap(), &p1(p)));
            assert!(!parabolic_membership(&elementary(4, 3, 2, 1, p).unwrap(), &p2(p)));
            assert!(parabolic_membership(&elementary(4, 3, 2, 1, p).unwrap(), &p1(p)));
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(sl_order(4, 5, 1) / BigUint::from(156u32), BigUint::from(186_000_000u64));
        assert_eq!(parabolic_order(&p1(5)), BigUint::from(186_000_000u64));
        for p in [5u64, 7] {
            assert_eq!(parabolic_order(&p1(p)), parabolic_order(&p2(p)));
            let full = ParabolicSpec::new(p, RootSubset::full(4).unwrap()).unwrap();
            assert_eq!(parabolic_order(&full), sl_order(4, p, 1));
        }
    }

    #[test]
    fn generators_generate_the_parabolic() {
        let borel = ParabolicSpec::new(5, RootSubset::empty(2).unwrap()).unwrap();
        let gens = parabolic_generators(&borel).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[1].rows(), vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(closure(&gens, 100_000).unwrap().len(), 20);
        let full = ParabolicSpec::new(5, RootSubset::full(2).unwrap()).unwrap();
        assert_eq!(closure(&parabolic_generators(&full).unwrap(), 100_000).unwrap().len(), 120);
        for n in [2usize, 3] {
            for p in [3u64, 5] {
                for mask in 0u32..(1 << (n - 1)) {
                    let theta = RootSubset::new(n, (1..n as u32).filter(|i| mask & (1 << (i - 1)) != 0)).unwrap();
                    let par = ParabolicSpec::new(p, theta).unwrap();
                    let order = parabolic_order(&par);
                    if order > BigUint::from(100_000u32) {
                        continue;
                    }
                    let group = closure(&parabolic_generators(&par).unwrap(), 100_000).unwrap();
                    assert_eq!(BigUint::from(group.len()), order, "n={n} p={p} mask={mask}");
                }
            }
        }
        for g in parabolic_generators(&p1(5)).unwrap() {
            assert!(parabolic_membership(&g, &p1(5)));
        }
    }

    #[test]
    fn graph_automorphism_examples() {
        let g = elementary(4, 0, 1, 1, 5).unwrap();
        assert_eq!(graph_automorphism(&g), elementary(4, 2, 3, -1, 5).unwrap());
        let minus = crate::matgroup::minus_identity(4, 25).unwrap();
        assert_eq!(graph_automorphism(&minus), minus);
        for n in 2..8 {
            assert_eq!(WeylRep::canonical(n).det(7), 1);
            assert_eq!(WeylRep::sign_corrupted(n).det(7), 6);
        }
    }

    #[test]
    fn graph_automorphism_swaps_parabolics() {
        for p in [5u64, 7] {
            for n in 2..6 {
                for mask in 0u32..(1 << (n - 1)) {
                    let theta = RootSubset::new(n, (1..n as u32).filter(|i| mask & (1 << (i - 1)) != 0)).unwrap();
                    let par = ParabolicSpec::new(p, theta).unwrap();
                    let image = par.dynkin_image();
                    for g in parabolic_generators(&par).unwrap() {
                        assert!(parabolic_membership(&graph_automorphism(&g), &image));
                    }
                    assert_eq!(parabolic_order(&par), parabolic_order(&image));
                }
            }
        }
    }

    #[test]
    fn fixed_line_examples() {
        for p in [5u64, 7] {
            assert_eq!(fixed_lines(&p1(p)).unwrap(), 1);
            assert_eq!(fixed_lines(&p2(p)).unwrap(), 0);
            assert_eq!(fixed_lines_with(&p1(p), Execution::Sequential).unwrap(), 1);
        }
        let borel = ParabolicSpec::new(3, RootSubset::empty(2).unwrap()).unwrap();
        assert_eq!(fixed_lines(&borel).unwrap(), 1);
    }

    #[test]
    fn fixed_lines_agree_with_random_members() {
        // Independent of the generator list: test each line against random
        // block-triangular members.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for p in [5u64, 7] {
            for (par, expected) in [(p1(p), 1usize), (p2(p), 0)] {
                let members: Vec<SLMat> = (0..40).map(|_| random_parabolic_element(&mut rng, &par)).collect();
                assert!(members.iter().all(|g| parabolic_membership(g, &par)));
                let count = lines_of_projective_space(4, p)
                    .unwrap()
                    .iter()
                    .filter(|l| members.iter().all(|g| act(g, l).unwrap() == **l))
                    .count();
                assert_eq!(count, expected);
            }
        }
    }

    #[test]
    fn fixed_lines_are_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for par in [p1(5), p2(5)] {
            let gens = parabolic_generators(&par).unwrap();
            let base = fixed_lines(&par).unwrap();
            for _ in 0..10 {
                let h = crate::matgroup::tests::random_sl(&mut rng, 4, 5);
                let hi = h.inverse();
                let conj: Vec<SLMat> = gens.iter().map(|g| &(&h * g) * &hi).collect();
                assert_eq!(fixed_lines_of_generators(&conj, 4, 5, Execution::default()).unwrap(), base);
            }
        }
    }

    fn matrix_over(n: usize, m: u64) -> impl Strategy<Value = SLMat> {
        any::<u64>().prop_map(move |seed| crate::matgroup::tests::random_sl(&mut ChaCha8Rng::seed_from_u64(seed), n, m))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn graph_automorphism_is_multiplicative(x in matrix_over(4, 25), y in matrix_over(4, 25)) {
            prop_assert_eq!(
                graph_automorphism(&(&x * &y)),
                &graph_automorphism(&x) * &graph_automorphism(&y)
            );
        }

        #[test]
        fn graph_automorphism_squares_to_inner(x in matrix_over(3, 49), z in matrix_over(2, 7)) {
            // phi^2 = conjugation by c = w (w^T)^{-1}
            for g in [x, z] {
                let n = g.n();
                let w = WeylRep::canonical(n);
                let m = g.modulus();
                let mut c = vec![0i64; n * n];
                for (i, s) in w.square_signs().into_iter().enumerate() {
                    c[i * n + i] = s as i64;
                }
                let c = SLMat::new(n, m, &c).unwrap();
                let twice = graph_automorphism(&graph_automorphism(&g));
                prop_assert_eq!(twice, &(&c * &g) * &c.inverse());
                prop_assert_eq!(graph_automorphism_inverse(&graph_automorphism(&g)), g.clone());
                prop_assert_eq!(graph_automorphism(&graph_automorphism_inverse(&g)), g);
            }
        }
    }
}
