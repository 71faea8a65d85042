//! Small standard groups materialized as validated Cayley tables: cyclic,
//! dihedral, dicyclic (including the quaternions), and A4. Used by the
//! test suites and handy for CLI experiments via exported table files.

use crate::group::{build_table_group, TableGroup};

/// C_n as a table: entry (i, j) = i + j mod n.
pub fn cyclic_table(n: usize) -> TableGroup {
    assert!(n >= 1);
    let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    build_table_group(rows).expect("cyclic tables are groups")
}

/// Dihedral group of order 2n: rotations r^i and reflections r^i s with
/// s r s = r^-1. Element 2i is r^i, element 2i+1 is r^i s.
pub fn dihedral(n: usize) -> TableGroup {
    assert!(n >= 1);
    let order = 2 * n;
    let id = |rot: usize, flip: usize| 2 * rot + flip;
    let mut rows = vec![vec![0usize; order]; order];
    for r1 in 0..n {
        for f1 in 0..2 {
            for r2 in 0..n {
                for f2 in 0..2 {
                    // (r^a s^e)(r^b s^f) = r^(a + (-1)^e b) s^(e xor f)
                    let rot = if f1 == 0 { (r1 + r2) % n } else { (r1 + n - r2 % n) % n };
                    rows[id(r1, f1)][id(r2, f2)] = id(rot, f1 ^ f2);
                }
            }
        }
    }
    build_table_group(rows).expect("dihedral tables are groups")
}

/// S3 is the dihedral group of order 6.
pub fn symmetric3() -> TableGroup {
    dihedral(3)
}

/// Dicyclic group of order 4k: <a, b | a^(2k) = 1, b^2 = a^k, b a b^-1 = a^-1>.
/// Element 2i+j encodes a^i b^j with i < 2k, j < 2.
pub fn dicyclic(k: usize) -> TableGroup {
    assert!(k >= 1);
    let m = 2 * k;
    let order = 2 * m;
    let id = |i: usize, j: usize| 2 * i + j;
    let mut rows = vec![vec![0usize; order]; order];
    for i1 in 0..m {
        for j1 in 0..2 {
            for i2 in 0..m {
                for j2 in 0..2 {
                    // b a^i = a^-i b, and b^2 = a^k folds into the a-power
                    let signed = if j1 == 0 { i1 + i2 } else { i1 + m - i2 };
                    let wrap = if j1 + j2 == 2 { k } else { 0 };
                    rows[id(i1, j1)][id(i2, j2)] = id((signed + wrap) % m, (j1 + j2) % 2);
                }
            }
        }
    }
    build_table_group(rows).expect("dicyclic tables are groups")
}

/// The quaternion group Q8 is the dicyclic group with k = 2.
pub fn quaternion8() -> TableGroup {
    dicyclic(2)
}

/// The alternating group A4 on four points, elements ordered
/// lexicographically as permutation words.
pub fn alternating4() -> TableGroup {
    let mut perms: Vec<[usize; 4]> = Vec::new();
    let base = [0usize, 1, 2, 3];
    permute(&base, &mut Vec::new(), &mut perms);
    perms.retain(|p| parity(p) == 0);
    perms.sort();
    assert_eq!(perms.len(), 12);
    let index = |p: &[usize; 4]| perms.binary_search(p).expect("closed under composition");
    let rows = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| {
                    // (p . q)(x) = p(q(x))
                    let composed = [p[q[0]], p[q[1]], p[q[2]], p[q[3]]];
                    index(&composed)
                })
                .collect()
        })
        .collect();
    build_table_group(rows).expect("A4 is a group")
}

fn permute(remaining: &[usize], prefix: &mut Vec<usize>, out: &mut Vec<[usize; 4]>) {
    if remaining.is_empty() {
        out.push([prefix[0], prefix[1], prefix[2], prefix[3]]);
        return;
    }
    for (i, &x) in remaining.iter().enumerate() {
        let mut rest = remaining.to_vec();
        rest.remove(i);
        prefix.push(x);
        permute(&rest, prefix, out);
        prefix.pop();
    }
}

fn parity(p: &[usize; 4]) -> usize {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_commutativity() {
        assert_eq!(symmetric3().order(), 6);
        assert!(!symmetric3().is_commutative());
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(dihedral(5).order(), 10);
        assert_eq!(dihedral(6).order(), 12);
        assert_eq!(quaternion8().order(), 8);
        assert_eq!(dicyclic(3).order(), 12);
        assert_eq!(alternating4().order(), 12);
        assert!(!alternating4().is_commutative());
        assert!(cyclic_table(7).is_commutative());
    }

    #[test]
    fn quaternion_census() {
        // Q8: one identity, one element of order 2, six of order 4
        let census = quaternion8().order_census();
        assert_eq!(census.get(&1), Some(&1));
        assert_eq!(census.get(&2), Some(&1));
        assert_eq!(census.get(&4), Some(&6));
    }

    #[test]
    fn dicyclic3_census() {
        // Dic3: orders 1, 2, 3, 4, 6 with counts 1, 1, 2, 6, 2
        let census = dicyclic(3).order_census();
        assert_eq!(census.get(&1), Some(&1));
        assert_eq!(census.get(&2), Some(&1));
        assert_eq!(census.get(&3), Some(&2));
        assert_eq!(census.get(&4), Some(&6));
        assert_eq!(census.get(&6), Some(&2));
    }

    #[test]
    fn a4_census() {
        // A4: identity, three double transpositions, eight 3-cycles
        let census = alternating4().order_census();
        assert_eq!(census.get(&1), Some(&1));
        assert_eq!(census.get(&2), Some(&3));
        assert_eq!(census.get(&3), Some(&8));
    }
}
