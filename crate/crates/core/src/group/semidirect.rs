//! Semidirect products C_m : C_k with action exponent t, presented as
//! pairs a^i b^j with b a b^-1 = a^t.
//!
//! Multiplication pushes powers of b right: b^j a^i = a^(i * t^j) b^j.

use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::Order;

/// Raw parameters of a semidirect product before validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemidirectSpec {
    /// Order of the normal cyclic factor generated by a.
    pub m: u64,
    /// Order of the acting cyclic factor generated by b.
    pub k: u64,
    /// Action exponent: b a b^-1 = a^t.
    pub t: u64,
}

/// A validated semidirect product of order m * k.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemidirectGroup {
    m: u64,
    k: u64,
    t: u64,
    /// t^j mod m for j in 0..k.
    t_pow: Vec<u64>,
}

/// Validates the action: gcd(t, m) = 1 and t^k = 1 (mod m).
pub fn build_semidirect(spec: SemidirectSpec) -> Result<SemidirectGroup> {
    let SemidirectSpec { m, k, t } = spec;
    if m == 0 || k == 0 {
        return Err(Error::InvalidSpec("semidirect factors must be nonzero".into()));
    }
    let t = t % m.max(1);
    if m.gcd(&t) != 1 {
        return Err(Error::InvalidSpec(format!(
            "action exponent {t} is not a unit mod {m}: gcd({t}, {m}) != 1"
        )));
    }
    let mut t_pow = Vec::with_capacity(k as usize);
    let mut acc = 1u64 % m;
    for _ in 0..k {
        t_pow.push(acc);
        acc = mulmod(acc, t, m);
    }
    if acc != 1 % m {
        return Err(Error::InvalidSpec(format!(
            "action exponent fails the congruence: {t}^{k} = {acc} (mod {m}), expected 1"
        )));
    }
    Ok(SemidirectGroup { m, k, t: t % m, t_pow })
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl SemidirectGroup {
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn order(&self) -> Order {
        Order::Finite(self.m as u128 * self.k as u128)
    }

    pub fn is_commutative(&self) -> bool {
        self.t == 1 % self.m
    }

    pub fn contains(&self, a: u64, b: u64) -> bool {
        a < self.m && b < self.k
    }

    /// (a^i1 b^j1)(a^i2 b^j2) = a^(i1 + i2 t^j1) b^(j1 + j2).
    pub fn compose(&self, (i1, j1): (u64, u64), (i2, j2): (u64, u64)) -> (u64, u64) {
        let i = (i1 + mulmod(i2, self.t_pow[j1 as usize], self.m)) % self.m;
        let j = (j1 + j2) % self.k;
        (i, j)
    }

    pub fn inverse(&self, (i, j): (u64, u64)) -> (u64, u64) {
        let j_inv = (self.k - j) % self.k;
        let i_inv = (self.m - mulmod(i, self.t_pow[j_inv as usize], self.m)) % self.m;
        (i_inv, j_inv)
    }

    /// Pairs (i, j) in lexicographic order.
    pub fn elements(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity((self.m * self.k) as usize);
        for i in 0..self.m {
            for j in 0..self.k {
                out.push((i, j));
            }
        }
        out
    }

    pub fn element_order(&self, e: (u64, u64)) -> u128 {
        let id = (0, 0);
        let mut acc = e;
        let mut n = 1u128;
        while acc != id {
            acc = self.compose(acc, e);
            n += 1;
        }
        n
    }

    pub fn order_census(&self) -> BTreeMap<u128, usize> {
        let mut census = BTreeMap::new();
        for e in self.elements() {
            *census.entry(self.element_order(e)).or_insert(0) += 1;
        }
        census
    }
}
