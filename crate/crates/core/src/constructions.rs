//! Explicit witness squares and the routing that turns every positive
//! verdict of the abelian characterization into a concrete verified square
//! by embedding a known witness subgroup.

use crate::error::{Error, Result};
use crate::group::{Element, Embedding, FGAbelianSpec, Group, SemidirectSpec};
use crate::oracle::decide_3magic_abelian;
use crate::square::{map_square, Square};

/// The classical 3x3 integer square with line sum 15, mapped into the first
/// free coordinate of an infinite abelian carrier.
pub fn lo_shu(group: &Group) -> Result<Square> {
    let Group::Abelian(spec) = group else {
        return Err(Error::Domain(
            "the integer square needs an abelian carrier with a free part".into(),
        ));
    };
    if spec.free_rank() == 0 {
        return Err(Error::Domain(
            "the integer square needs a free part of rank at least 1".into(),
        ));
    }
    let gen = {
        let mut coords = vec![0i64; spec.free_rank()];
        coords[0] = 1;
        let mut e = spec.identity();
        e.free = coords.into_iter().map(Into::into).collect();
        Element::Abelian(e)
    };
    let domain = FGAbelianSpec::free(1);
    let emb = Embedding::new(domain, group.clone(), vec![gen])?;
    let z = |v: i64| Element::abelian(vec![], vec![v]);
    let ints = Square::from_rows(vec![
        vec![z(8), z(1), z(6)],
        vec![z(3), z(5), z(7)],
        vec![z(4), z(9), z(2)],
    ])?;
    map_square(&ints, &emb)
}

/// The exponent grid
///
/// ```text
///   n-3  2    1
///   4    0    n-4
///   n-1  n-2  3
/// ```
///
/// in C_n, magic with product 1; the nine exponents are distinct exactly
/// when n >= 9.
pub fn cyclic_witness(n: u64) -> Result<(Group, Square)> {
    if n < 9 {
        return Err(Error::Domain(format!(
            "C{n} has fewer than the 9 distinct elements a 3x3 square needs"
        )));
    }
    let group = Group::cyclic(n)?;
    let e = |v: u64| Element::abelian(vec![v % n], vec![]);
    let square = Square::from_rows(vec![
        vec![e(n - 3), e(2), e(1)],
        vec![e(4), e(0), e(n - 4)],
        vec![e(n - 1), e(n - 2), e(3)],
    ])?;
    Ok((group, square))
}

/// The witness in C_(2k+1)^2 = <x, y>:
///
/// ```text
///   x^k          y^(k+1)   x^(k+1) y^k
///   x y^k        1         x^2k y^(k+1)
///   x^k y^(k+1)  y^k       x^(k+1)
/// ```
///
/// Note the bottom-left entry x^k y^(k+1): the variant with x^k y there is
/// not magic (its row 3 and column 1 multiply to y^(k+1), not 1).
pub fn odd_square_witness(k: u64) -> Result<(Group, Square)> {
    if k < 1 {
        return Err(Error::Domain("the odd-square witness needs k >= 1".into()));
    }
    let m = 2 * k + 1;
    let group = Group::Abelian(FGAbelianSpec::finite(vec![m, m])?);
    let e = |x: u64, y: u64| Element::abelian(vec![x % m, y % m], vec![]);
    let square = Square::from_rows(vec![
        vec![e(k, 0), e(0, k + 1), e(k + 1, k)],
        vec![e(1, k), e(0, 0), e(2 * k, k + 1)],
        vec![e(k, k + 1), e(0, k), e(k + 1, 0)],
    ])?;
    Ok((group, square))
}

/// The four fixed witnesses with no free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedWitness {
    /// C4 x C4.
    C4Sq,
    /// C8 x C2 (x of order 8, y of order 2).
    C8xC2,
    /// C4 x C8 (x of order 4, y of order 8).
    C4xC8,
    /// C7 : C3 with the faithful action b a b^-1 = a^4.
    C7RtimesC3,
}

pub fn fixed_witness(which: FixedWitness) -> (Group, Square) {
    match which {
        FixedWitness::C4Sq => {
            let group = Group::Abelian(FGAbelianSpec::finite(vec![4, 4]).expect("valid"));
            let e = |x: u64, y: u64| Element::abelian(vec![x, y], vec![]);
            let square = Square::from_rows(vec![
                vec![e(1, 0), e(0, 3), e(3, 1)],
                vec![e(2, 1), e(0, 0), e(2, 3)],
                vec![e(1, 3), e(0, 1), e(3, 0)],
            ])
            .expect("3x3");
            (group, square)
        }
        FixedWitness::C8xC2 => {
            let group = Group::Abelian(FGAbelianSpec::finite(vec![8, 2]).expect("valid"));
            let e = |x: u64, y: u64| Element::abelian(vec![x, y], vec![]);
            let square = Square::from_rows(vec![
                vec![e(1, 1), e(5, 0), e(2, 1)],
                vec![e(1, 0), e(0, 0), e(7, 0)],
                vec![e(6, 1), e(3, 0), e(7, 1)],
            ])
            .expect("3x3");
            (group, square)
        }
        FixedWitness::C4xC8 => {
            let group = Group::Abelian(FGAbelianSpec::finite(vec![4, 8]).expect("valid"));
            let e = |x: u64, y: u64| Element::abelian(vec![x, y], vec![]);
            let square = Square::from_rows(vec![
                vec![e(0, 1), e(3, 6), e(1, 1)],
                vec![e(1, 0), e(0, 0), e(3, 0)],
                vec![e(3, 7), e(1, 2), e(0, 7)],
            ])
            .expect("3x3");
            (group, square)
        }
        FixedWitness::C7RtimesC3 => {
            let group =
                Group::semidirect(SemidirectSpec { m: 7, k: 3, t: 4 }).expect("4^3 = 1 mod 7");
            let e = |a: u64, b: u64| Element::Semidirect { a, b };
            let square = Square::from_rows(vec![
                vec![e(1, 0), e(1, 1), e(3, 2)],
                vec![e(2, 2), e(0, 0), e(6, 1)],
                vec![e(2, 1), e(5, 2), e(6, 0)],
            ])
            .expect("3x3");
            (group, square)
        }
    }
}

/// A verified magic square in the given abelian group when it is 3-magic,
/// `None` when it is not. Routing prefers the cheapest embedding: a cyclic
/// subgroup of order >= 9, then C_p^2 for an odd prime p, then the 2-group
/// special cases in the order the characterization handles them.
pub fn witness_for(spec: &FGAbelianSpec) -> Result<Option<Square>> {
    if !decide_3magic_abelian(spec).is_magic() {
        return Ok(None);
    }
    let group = Group::Abelian(spec.clone());
    if spec.free_rank() > 0 {
        return Ok(Some(lo_shu(&group)?));
    }

    let exponent = spec.exponent();
    if exponent >= 9 {
        let g = spec
            .element_of_order(exponent)
            .expect("the exponent is always attained");
        let (_, witness) = cyclic_witness(exponent)?;
        let emb = Embedding::new(
            FGAbelianSpec::cyclic(exponent)?,
            group.clone(),
            vec![Element::Abelian(g)],
        )?;
        return Ok(Some(map_square(&witness, &emb)?));
    }

    // exponent below 9 with an odd prime divisor forces two torsion factors
    // sharing that prime, so C_p^2 embeds coordinate-wise
    let dec = spec.primary_decomposition();
    if let Some(p) = dec.primes().find(|&p| {
        p % 2 == 1 && spec.torsion().iter().filter(|&&t| t % p == 0).count() >= 2
    }) {
        let (j1, j2) = two_indices_divisible_by(spec, p);
        let (_, witness) = odd_square_witness((p - 1) / 2)?;
        let emb = Embedding::new(
            FGAbelianSpec::finite(vec![p, p])?,
            group.clone(),
            vec![
                coordinate_generator(spec, j1, spec.torsion()[j1] / p),
                coordinate_generator(spec, j2, spec.torsion()[j2] / p),
            ],
        )?;
        return Ok(Some(map_square(&witness, &emb)?));
    }

    // remaining positive branches live in a 2-group of exponent at most 8
    let (a1, a2, a3) = (dec.alpha(1), dec.alpha(2), dec.alpha(3));
    if a2 >= 2 || a3 >= 2 {
        let target = if a2 >= 2 { 4 } else { 8 };
        let (j1, j2) = two_indices_divisible_by(spec, target);
        let (_, witness) = fixed_witness(FixedWitness::C4Sq);
        let emb = Embedding::new(
            FGAbelianSpec::finite(vec![4, 4])?,
            group.clone(),
            vec![
                coordinate_generator(spec, j1, spec.torsion()[j1] / 4),
                coordinate_generator(spec, j2, spec.torsion()[j2] / 4),
            ],
        )?;
        return Ok(Some(map_square(&witness, &emb)?));
    }
    if a3 == 1 && a1 >= 1 {
        let j8 = index_of_factor(spec, 8);
        let j2 = index_of_factor(spec, 2);
        let (_, witness) = fixed_witness(FixedWitness::C8xC2);
        let emb = Embedding::new(
            FGAbelianSpec::finite(vec![8, 2])?,
            group.clone(),
            vec![coordinate_generator(spec, j8, 1), coordinate_generator(spec, j2, 1)],
        )?;
        return Ok(Some(map_square(&witness, &emb)?));
    }
    if a3 == 1 && a2 == 1 {
        let j4 = index_of_factor(spec, 4);
        let j8 = index_of_factor(spec, 8);
        let (_, witness) = fixed_witness(FixedWitness::C4xC8);
        let emb = Embedding::new(
            FGAbelianSpec::finite(vec![4, 8])?,
            group.clone(),
            vec![coordinate_generator(spec, j4, 1), coordinate_generator(spec, j8, 1)],
        )?;
        return Ok(Some(map_square(&witness, &emb)?));
    }
    unreachable!("every positive branch of the characterization is routed above")
}

fn coordinate_generator(spec: &FGAbelianSpec, index: usize, value: u64) -> Element {
    let mut e = spec.identity();
    e.torsion[index] = value;
    Element::Abelian(e)
}

fn two_indices_divisible_by(spec: &FGAbelianSpec, d: u64) -> (usize, usize) {
    let mut it = spec
        .torsion()
        .iter()
        .enumerate()
        .filter(|(_, &t)| t % d == 0)
        .map(|(i, _)| i);
    let a = it.next().expect("caller established two such factors");
    let b = it.next().expect("caller established two such factors");
    (a, b)
}

fn index_of_factor(spec: &FGAbelianSpec, d: u64) -> usize {
    spec.torsion()
        .iter()
        .position(|&t| t == d)
        .expect("caller established the factor exists")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::abelian_specs_up_to;
    use crate::square::verify;

    #[test]
    fn lo_shu_in_z_and_products() {
        let z = Group::Abelian(FGAbelianSpec::free(1));
        let sq = lo_shu(&z).unwrap();
        let report = verify(&z, &sq).unwrap();
        assert!(report.is_magic);
        assert_eq!(report.magic_product, Some(Element::abelian(vec![], vec![15])));

        let z2 = Group::Abelian(FGAbelianSpec::free(2));
        let sq = lo_shu(&z2).unwrap();
        assert!(verify(&z2, &sq).unwrap().is_magic);
        assert_eq!(sq.entry(0, 0), &Element::abelian(vec![], vec![8, 0]));

        let zc2 = Group::Abelian(FGAbelianSpec::new(1, vec![2]).unwrap());
        let sq = lo_shu(&zc2).unwrap();
        assert!(verify(&zc2, &sq).unwrap().is_magic);

        let c9 = Group::cyclic(9).unwrap();
        assert!(lo_shu(&c9).is_err());
    }

    #[test]
    fn cyclic_witness_grids() {
        let (g, sq) = cyclic_witness(9).unwrap();
        let e = |v: u64| Element::abelian(vec![v], vec![]);
        assert_eq!(
            sq.entries(),
            &[e(6), e(2), e(1), e(4), e(0), e(5), e(8), e(7), e(3)]
        );
        assert!(verify(&g, &sq).unwrap().is_magic);

        let (g, sq) = cyclic_witness(12).unwrap();
        assert_eq!(
            sq.entries(),
            &[e(9), e(2), e(1), e(4), e(0), e(8), e(11), e(10), e(3)]
        );
        assert!(verify(&g, &sq).unwrap().is_magic);

        assert!(cyclic_witness(8).is_err());
    }

    #[test]
    fn cyclic_witness_whole_range() {
        for n in 9..=200 {
            let (g, sq) = cyclic_witness(n).unwrap();
            let report = verify(&g, &sq).unwrap();
            assert!(report.is_magic, "C{n}");
            assert_eq!(report.magic_product, Some(g.identity()));
        }
    }

    #[test]
    fn odd_square_witness_k1_covers_c3sq() {
        let (g, sq) = odd_square_witness(1).unwrap();
        let report = verify(&g, &sq).unwrap();
        assert!(report.is_magic);
        assert_eq!(report.magic_product, Some(g.identity()));
        let mut entries = sq.entries().to_vec();
        entries.sort();
        let all = g.elements().unwrap();
        assert_eq!(entries, all, "k = 1 uses all nine elements of C3 x C3");
        assert!(odd_square_witness(0).is_err());
    }

    #[test]
    fn odd_square_witness_bottom_left_entry() {
        // k = 2: the corrected corner is x^2 y^3
        let (_, sq) = odd_square_witness(2).unwrap();
        assert_eq!(sq.entry(2, 0), &Element::abelian(vec![2, 3], vec![]));
    }

    #[test]
    fn fixed_witnesses_verify_with_identity_product() {
        for which in [
            FixedWitness::C4Sq,
            FixedWitness::C8xC2,
            FixedWitness::C4xC8,
            FixedWitness::C7RtimesC3,
        ] {
            let (g, sq) = fixed_witness(which);
            let report = verify(&g, &sq).unwrap();
            assert!(report.is_magic, "{which:?}");
            assert_eq!(report.magic_product, Some(g.identity()), "{which:?}");
        }
    }

    #[test]
    fn witness_routing_examples() {
        // C16: cyclic route
        let sq = witness_for(&FGAbelianSpec::cyclic(16).unwrap()).unwrap().unwrap();
        let g = Group::cyclic(16).unwrap();
        assert!(verify(&g, &sq).unwrap().is_magic);

        // C2^3 x C4 is not 3-magic
        let spec = FGAbelianSpec::finite(vec![2, 2, 2, 4]).unwrap();
        assert!(witness_for(&spec).unwrap().is_none());

        // C6 x C6: odd-square route through the C3^2 part
        let spec = FGAbelianSpec::finite(vec![6, 6]).unwrap();
        let sq = witness_for(&spec).unwrap().unwrap();
        assert!(verify(&Group::Abelian(spec), &sq).unwrap().is_magic);
    }

    #[test]
    fn witness_matches_oracle_up_to_order_100() {
        for spec in abelian_specs_up_to(100) {
            let verdict = decide_3magic_abelian(&spec);
            let witness = witness_for(&spec).unwrap();
            assert_eq!(
                verdict.is_magic(),
                witness.is_some(),
                "spec {:?}",
                spec.torsion()
            );
            if let Some(sq) = witness {
                let g = Group::Abelian(spec.clone());
                assert!(verify(&g, &sq).unwrap().is_magic, "spec {:?}", spec.torsion());
            }
        }
    }
}
