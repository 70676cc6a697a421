//! Brute-force reference computations.
//!
//! These routines enumerate instead of using closed formulas. They back the
//! test suites and the command-line self-test and are deliberately kept
//! independent of the formula paths they check.

use std::collections::HashSet;
use std::hash::Hash;
use std::ops::Mul;

use crate::matgroup::{elementary, SLMat};
use crate::ring_arith::{crt_join_moduli, crt_split_moduli, factorize};

/// Subgroup generated by `gens`, or `None` once more than `cap` elements
/// have been found. An empty generating set yields `None`.
pub fn closure<T>(gens: &[T], cap: usize) -> Option<HashSet<T>>
where
    T: Clone + Eq + Hash,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    if gens.is_empty() {
        return None;
    }
    // In a finite group the closure under multiplication is a subgroup and
    // contains the identity, reached as a power of any generator.
    let mut seen: HashSet<T> = gens.iter().cloned().collect();
    let mut frontier: Vec<T> = seen.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = &x * g;
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return None;
                }
                seen.insert(y.clone());
                frontier.push(y);
            }
        }
    }
    Some(seen)
}

/// `|SL_n(Z/m)|` by testing every matrix (feasible for `m^(n^2)` up to a
/// few million).
pub fn enumerate_sl_order(n: usize, m: u64) -> u64 {
    let cells = n * n;
    let total = m.pow(cells as u32);
    let mut entries = vec![0i64; cells];
    let mut count = 0;
    for mut idx in 0..total {
        for slot in entries.iter_mut() {
            *slot = (idx % m) as i64;
            idx /= m;
        }
        if SLMat::new(n, m, &entries).is_ok() {
            count += 1;
        }
    }
    count
}

/// Order of the image of `SL_2(Z)` in `SL_2(Z/m)`, from the two standard
/// generators `[[0,-1],[1,0]]` and `[[1,1],[0,1]]`.
pub fn sl2z_image_order(m: u64) -> usize {
    let s = SLMat::new(2, m, &[0, -1, 1, 0]).expect("det 1");
    let t = elementary(2, 0, 1, 1, m).expect("valid");
    closure(&[s, t], 1_000_000).map_or(usize::MAX, |g| g.len())
}

/// Checks split/join of every residue modulo `m` against its prime-power
/// decomposition.
pub fn crt_bijective(m: u64) -> bool {
    let moduli: Vec<u64> = factorize(m).iter().map(|&(p, e)| p.pow(e)).collect();
    let mut seen = vec![false; m as usize];
    for x in 0..m {
        let Ok(parts) = crt_split_moduli(x, &moduli) else {
            return false;
        };
        if crt_join_moduli(&parts, &moduli) != Ok(x) {
            return false;
        }
        let code = parts.iter().zip(&moduli).fold(0u64, |acc, (&r, &q)| acc * q + r);
        if std::mem::replace(&mut seen[code as usize], true) {
            return false;
        }
    }
    seen.into_iter().all(|s| s)
}

/// All `x mod p^e` with `x^2 = d` and `x = r (mod p)`.
pub fn square_roots_above(d: i64, p: u64, r: u64, e: u32) -> Vec<u64> {
    let q = p.pow(e);
    let target = d.rem_euclid(q as i64) as u64;
    (0..q).filter(|&x| x * x % q == target && x % p == r % p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_orders_by_enumeration() {
        for (m, expected) in [(5u64, 120u64), (7, 336), (4, 48), (6, 144), (3, 24), (2, 6)] {
            assert_eq!(enumerate_sl_order(2, m), expected);
        }
    }

    #[test]
    fn sl2z_surjects_onto_small_levels() {
        for m in 3..=7u64 {
            assert_eq!(sl2z_image_order(m) as u64, enumerate_sl_order(2, m));
        }
    }

    #[test]
    fn closure_respects_cap() {
        let t = elementary(2, 0, 1, 1, 7).unwrap();
        assert_eq!(closure(std::slice::from_ref(&t), 100).unwrap().len(), 7);
        assert!(closure(&[t], 3).is_none());
    }
}
