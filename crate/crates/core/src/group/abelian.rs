//! Finitely generated abelian groups in normal form: a free part of rank
//! `r` plus a list of cyclic torsion factors.
//!
//! Torsion coordinates live in `0..torsion[j]`; free coordinates are exact
//! arbitrary-precision integers so infinite carriers never wrap.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::Order;

/// Normal form of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FGAbelianSpec {
    free_rank: usize,
    torsion: Vec<u64>,
}

/// An element of an [`FGAbelianSpec`] carrier: torsion coordinates reduced
/// mod the factor orders, then free coordinates.
///
/// The derived ordering is lexicographic on (torsion, free), which is the
/// canonical element order used by every search.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianElement {
    pub torsion: Vec<u64>,
    pub free: Vec<BigInt>,
}

impl AbelianElement {
    pub fn from_torsion(coords: Vec<u64>) -> Self {
        AbelianElement { torsion: coords, free: Vec::new() }
    }

    pub fn from_free(coords: Vec<i64>) -> Self {
        AbelianElement {
            torsion: Vec::new(),
            free: coords.into_iter().map(BigInt::from).collect(),
        }
    }
}

impl FGAbelianSpec {
    /// Builds a spec, rejecting torsion entries below 2.
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        for &t in &torsion {
            if t < 2 {
                return Err(Error::InvalidSpec(format!(
                    "cyclic factor order {t} is below 2"
                )));
            }
        }
        Ok(FGAbelianSpec { free_rank, torsion })
    }

    pub fn finite(torsion: Vec<u64>) -> Result<Self> {
        FGAbelianSpec::new(0, torsion)
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        FGAbelianSpec::new(0, vec![n])
    }

    /// The order-1 group (no free part, no torsion factors).
    pub fn trivial() -> Self {
        FGAbelianSpec { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FGAbelianSpec { free_rank: rank, torsion: Vec::new() }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn order(&self) -> Order {
        if self.free_rank > 0 {
            Order::Infinite
        } else {
            Order::Finite(self.torsion.iter().map(|&t| t as u128).product())
        }
    }

    pub fn identity(&self) -> AbelianElement {
        AbelianElement {
            torsion: vec![0; self.torsion.len()],
            free: vec![BigInt::zero(); self.free_rank],
        }
    }

    pub fn contains(&self, e: &AbelianElement) -> bool {
        e.torsion.len() == self.torsion.len()
            && e.free.len() == self.free_rank
            && e.torsion.iter().zip(&self.torsion).all(|(&c, &t)| c < t)
    }

    pub fn add(&self, a: &AbelianElement, b: &AbelianElement) -> AbelianElement {
        AbelianElement {
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion)
                .map(|((&x, &y), &t)| (x + y) % t)
                .collect(),
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn neg(&self, a: &AbelianElement) -> AbelianElement {
        AbelianElement {
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion)
                .map(|(&x, &t)| if x == 0 { 0 } else { t - x })
                .collect(),
            free: a.free.iter().map(|x| -x).collect(),
        }
    }

    pub fn scalar_mul(&self, a: &AbelianElement, k: &BigInt) -> AbelianElement {
        AbelianElement {
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion)
                .map(|(&x, &t)| {
                    let m = BigInt::from(t);
                    let r = (BigInt::from(x) * k).mod_floor(&m);
                    // r is in 0..t, so this cannot overflow u64
                    u64::try_from(&r).expect("reduced coordinate fits u64")
                })
                .collect(),
            free: a.free.iter().map(|x| x * k).collect(),
        }
    }

    /// The order of `e` as a group element.
    pub fn element_order(&self, e: &AbelianElement) -> Order {
        if e.free.iter().any(|x| !x.is_zero()) {
            return Order::Infinite;
        }
        let mut ord: u128 = 1;
        for (&c, &t) in e.torsion.iter().zip(&self.torsion) {
            let o = (t / t.gcd(&c)) as u128;
            ord = ord.lcm(&o);
        }
        Order::Finite(ord)
    }

    /// All elements in canonical (lexicographic) order. Finite specs only.
    pub fn elements(&self) -> Result<Vec<AbelianElement>> {
        if self.free_rank > 0 {
            return Err(Error::InfiniteEnumeration);
        }
        let mut out = Vec::new();
        let mut coords = vec![0u64; self.torsion.len()];
        loop {
            out.push(AbelianElement { torsion: coords.clone(), free: Vec::new() });
            // odometer, least significant coordinate last to preserve lex order
            let mut pos = self.torsion.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                coords[pos] += 1;
                if coords[pos] < self.torsion[pos] {
                    break;
                }
                coords[pos] = 0;
            }
        }
    }

    /// Elements whose free coordinates all lie in `[-bound, bound]`, in
    /// canonical order. For finite specs this is just [`elements`].
    ///
    /// [`elements`]: FGAbelianSpec::elements
    pub fn window_elements(&self, bound: i64) -> Vec<AbelianElement> {
        let torsion_part: Vec<Vec<u64>> = {
            let finite = FGAbelianSpec { free_rank: 0, torsion: self.torsion.clone() };
            finite
                .elements()
                .expect("finite")
                .into_iter()
                .map(|e| e.torsion)
                .collect()
        };
        let mut out = Vec::new();
        let mut free = vec![-bound; self.free_rank];
        for t in &torsion_part {
            loop {
                out.push(AbelianElement {
                    torsion: t.clone(),
                    free: free.iter().map(|&x| BigInt::from(x)).collect(),
                });
                if self.free_rank == 0 {
                    break;
                }
                let mut pos = self.free_rank;
                let mut done = false;
                loop {
                    if pos == 0 {
                        done = true;
                        break;
                    }
                    pos -= 1;
                    free[pos] += 1;
                    if free[pos] <= bound {
                        break;
                    }
                    free[pos] = -bound;
                }
                if done {
                    break;
                }
            }
        }
        out
    }

    /// Splits every torsion factor into prime-power cyclic factors.
    pub fn primary_decomposition(&self) -> PrimaryDecomposition {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &t in &self.torsion {
            for (p, e) in factorize_u64(t) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        for exps in by_prime.values_mut() {
            exps.sort_unstable();
        }
        PrimaryDecomposition { by_prime }
    }

    /// The divisibility chain d1 | d2 | ... | dm presenting the torsion part
    /// canonically. Two specs are isomorphic iff free ranks and chains match.
    pub fn canonical_invariant_factors(&self) -> Vec<u64> {
        self.primary_decomposition().invariant_factors()
    }

    pub fn is_isomorphic(&self, other: &FGAbelianSpec) -> bool {
        self.free_rank == other.free_rank
            && self.canonical_invariant_factors() == other.canonical_invariant_factors()
    }

    /// Exponent of the torsion part: the largest invariant factor, 1 if none.
    pub fn exponent(&self) -> u64 {
        self.canonical_invariant_factors().last().copied().unwrap_or(1)
    }

    /// Number of elements of each order. Finite specs only.
    pub fn order_census(&self) -> Result<BTreeMap<u128, usize>> {
        let mut census = BTreeMap::new();
        for e in self.elements()? {
            let Order::Finite(o) = self.element_order(&e) else {
                unreachable!("finite group")
            };
            *census.entry(o).or_insert(0) += 1;
        }
        Ok(census)
    }

    /// Some element of order exactly `d`, when one exists: for each prime
    /// power dividing `d`, a torsion coordinate supplies a matching cyclic
    /// piece and contributions of coprime order accumulate.
    pub fn element_of_order(&self, d: u64) -> Option<AbelianElement> {
        let mut e = self.identity();
        if d == 1 {
            return Some(e);
        }
        for (p, k) in factorize_u64(d) {
            let pe = p.pow(k);
            let j = self
                .torsion
                .iter()
                .position(|&t| t % pe == 0)?;
            let gen = {
                let mut g = self.identity();
                g.torsion[j] = self.torsion[j] / pe;
                g
            };
            e = self.add(&e, &gen);
        }
        debug_assert_eq!(self.element_order(&e), Order::Finite(d as u128));
        Some(e)
    }
}

/// Per-prime sequences of prime-power exponents, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryDecomposition {
    by_prime: BTreeMap<u64, Vec<u32>>,
}

impl PrimaryDecomposition {
    pub fn by_prime(&self) -> &BTreeMap<u64, Vec<u32>> {
        &self.by_prime
    }

    pub fn order(&self) -> u128 {
        self.by_prime
            .iter()
            .flat_map(|(&p, exps)| exps.iter().map(move |&e| (p as u128).pow(e)))
            .product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.by_prime.keys().copied()
    }

    /// Multiplicity of the exponent `i` in the p = 2 sequence: how many
    /// C_{2^i} factors the Sylow-2 part carries.
    pub fn alpha(&self, i: u32) -> usize {
        self.by_prime
            .get(&2)
            .map(|exps| exps.iter().filter(|&&e| e == i).count())
            .unwrap_or(0)
    }

    /// The alpha multiplicities as a vector indexed from exponent 1.
    pub fn alpha_vector(&self) -> Vec<usize> {
        match self.by_prime.get(&2) {
            None => Vec::new(),
            Some(exps) => {
                let max = *exps.iter().max().expect("nonempty");
                (1..=max).map(|i| self.alpha(i)).collect()
            }
        }
    }

    /// True when the group is a nontrivial 2-group.
    pub fn is_two_group(&self) -> bool {
        self.by_prime.len() == 1 && self.by_prime.contains_key(&2)
    }

    /// Re-merges the prime-power factors into the divisibility chain.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let depth = self.by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut chain = Vec::with_capacity(depth);
        // slot 0 collects the largest prime power of every prime, producing
        // the last (largest) invariant factor, and so on down the chain
        for slot in 0..depth {
            let mut d = 1u64;
            for (&p, exps) in &self.by_prime {
                if slot < exps.len() {
                    d *= p.pow(exps[exps.len() - 1 - slot]);
                }
            }
            chain.push(d);
        }
        chain.reverse();
        chain
    }
}

/// Trial-division factorization; desk-scale orders keep this cheap.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn factorize_u128(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(torsion: &[u64]) -> FGAbelianSpec {
        FGAbelianSpec::finite(torsion.to_vec()).unwrap()
    }

    #[test]
    fn rejects_small_torsion() {
        assert!(FGAbelianSpec::finite(vec![1]).is_err());
        assert!(FGAbelianSpec::finite(vec![4, 0]).is_err());
    }

    #[test]
    fn compose_in_c9() {
        // x^6 * x^4 = x^1
        let g = spec(&[9]);
        let a = AbelianElement::from_torsion(vec![6]);
        let b = AbelianElement::from_torsion(vec![4]);
        assert_eq!(g.add(&a, &b), AbelianElement::from_torsion(vec![1]));
        assert_eq!(g.add(&a, &g.identity()), a);
    }

    #[test]
    fn primary_decomposition_c12() {
        let d = spec(&[12]).primary_decomposition();
        let mut expect = BTreeMap::new();
        expect.insert(2u64, vec![2u32]);
        expect.insert(3u64, vec![1u32]);
        assert_eq!(d.by_prime(), &expect);
    }

    #[test]
    fn primary_decomposition_c2_c4_c8() {
        let d = spec(&[2, 4, 8]).primary_decomposition();
        assert_eq!(d.by_prime().get(&2), Some(&vec![1, 2, 3]));
        assert_eq!(d.alpha(1), 1);
        assert_eq!(d.alpha(2), 1);
        assert_eq!(d.alpha(3), 1);
    }

    #[test]
    fn primary_decomposition_c6_c6_census_crosscheck() {
        let d = spec(&[6, 6]).primary_decomposition();
        assert_eq!(d.by_prime().get(&2), Some(&vec![1, 1]));
        assert_eq!(d.by_prime().get(&3), Some(&vec![1, 1]));
        // the decomposition describes an isomorphic group: same order census
        let census_a = spec(&[6, 6]).order_census().unwrap();
        let census_b = spec(&[2, 2, 3, 3]).order_census().unwrap();
        assert_eq!(census_a, census_b);
        assert_eq!(d.order(), 36);
    }

    #[test]
    fn invariant_factors_examples() {
        assert_eq!(spec(&[2, 3]).canonical_invariant_factors(), vec![6]);
        assert_eq!(spec(&[2, 4, 3]).canonical_invariant_factors(), vec![2, 12]);
        assert_eq!(spec(&[9]).canonical_invariant_factors(), vec![9]);
        // census oracle for the merge: C2 x C4 x C3 and C2 x C12 agree
        assert_eq!(
            spec(&[2, 4, 3]).order_census().unwrap(),
            spec(&[2, 12]).order_census().unwrap()
        );
    }

    #[test]
    fn invariant_factors_shuffle_invariant() {
        let chains: Vec<Vec<u64>> = [
            vec![4u64, 3, 2],
            vec![2, 3, 4],
            vec![3, 4, 2],
            vec![2, 4, 3],
        ]
        .iter()
        .map(|t| spec(t).canonical_invariant_factors())
        .collect();
        assert!(chains.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(chains[0], vec![2, 12]);
        // divisibility chain property
        for w in chains[0].windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn element_order_and_enumeration() {
        let g = spec(&[4, 3]);
        let els = g.elements().unwrap();
        assert_eq!(els.len(), 12);
        assert!(els.windows(2).all(|w| w[0] < w[1]), "canonical order");
        let e = AbelianElement::from_torsion(vec![2, 1]);
        assert_eq!(g.element_order(&e), Order::Finite(6));
        let inf = FGAbelianSpec::new(1, vec![5]).unwrap();
        let z = AbelianElement { torsion: vec![0], free: vec![BigInt::from(-3)] };
        assert_eq!(inf.element_order(&z), Order::Infinite);
        assert!(inf.elements().is_err());
    }

    #[test]
    fn element_of_order_exists() {
        let g = spec(&[2, 4, 9]);
        let e = g.element_of_order(36).unwrap();
        assert_eq!(g.element_order(&e), Order::Finite(36));
        assert_eq!(g.element_of_order(8), None);
        assert_eq!(g.exponent(), 36);
    }

    #[test]
    fn window_enumeration_is_canonical() {
        let g = FGAbelianSpec::new(1, vec![2]).unwrap();
        let w = g.window_elements(2);
        assert_eq!(w.len(), 2 * 5);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn alpha_vector_example() {
        // C2^2 x C4 x C3: alpha = (2, 1)
        let d = spec(&[2, 2, 4, 3]).primary_decomposition();
        assert_eq!(d.alpha_vector(), vec![2, 1]);
        assert_eq!(spec(&[2, 2, 4, 3]).canonical_invariant_factors(), vec![2, 2, 12]);
    }
}
