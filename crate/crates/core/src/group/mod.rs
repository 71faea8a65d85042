//! Group carriers and element arithmetic.
//!
//! [`Group`] is a closed union over the three carriers the crate supports:
//! finitely generated abelian groups in normal form, finite groups given by
//! a Cayley table, and semidirect products C_m : C_k. Handles are immutable
//! after construction and all operations are pure.

pub mod abelian;
pub mod embed;
pub mod semidirect;
pub mod table;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
pub use abelian::{AbelianElement, FGAbelianSpec, PrimaryDecomposition};
pub use embed::Embedding;
pub use semidirect::{build_semidirect, SemidirectGroup, SemidirectSpec};
pub use table::{build_table_group, TableGroup, MAX_TABLE_ORDER};

/// Order of a group or of one of its elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(u128),
    Infinite,
}

impl Order {
    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn finite(&self) -> Option<u128> {
        match self {
            Order::Finite(n) => Some(*n),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// An element of some [`Group`]. Elements are plain data; operations check
/// that an element fits the carrier they are used with.
///
/// The derived `Ord` realizes the canonical element order: coordinate-wise
/// lexicographic for abelian carriers, table index for table groups, and
/// (i, j) lexicographic for semidirect pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Abelian(AbelianElement),
    Table(usize),
    Semidirect { a: u64, b: u64 },
}

impl Element {
    pub fn abelian(torsion: Vec<u64>, free: Vec<i64>) -> Element {
        Element::Abelian(AbelianElement {
            torsion,
            free: free.into_iter().map(BigInt::from).collect(),
        })
    }
}

/// Uniform interface over the three group carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    Abelian(FGAbelianSpec),
    Table(TableGroup),
    Semidirect(SemidirectGroup),
}

impl Group {
    pub fn abelian(spec: FGAbelianSpec) -> Group {
        Group::Abelian(spec)
    }

    pub fn cyclic(n: u64) -> Result<Group> {
        Ok(Group::Abelian(FGAbelianSpec::cyclic(n)?))
    }

    pub fn semidirect(spec: SemidirectSpec) -> Result<Group> {
        Ok(Group::Semidirect(build_semidirect(spec)?))
    }

    pub fn order(&self) -> Order {
        match self {
            Group::Abelian(g) => g.order(),
            Group::Table(g) => Order::Finite(g.order() as u128),
            Group::Semidirect(g) => g.order(),
        }
    }

    pub fn is_commutative(&self) -> bool {
        match self {
            Group::Abelian(_) => true,
            Group::Table(g) => g.is_commutative(),
            Group::Semidirect(g) => g.is_commutative(),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Abelian(g) => Element::Abelian(g.identity()),
            Group::Table(g) => Element::Table(g.identity_idx()),
            Group::Semidirect(_) => Element::Semidirect { a: 0, b: 0 },
        }
    }

    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (Group::Abelian(g), Element::Abelian(x)) => g.contains(x),
            (Group::Table(g), Element::Table(i)) => *i < g.order(),
            (Group::Semidirect(g), Element::Semidirect { a, b }) => g.contains(*a, *b),
            _ => false,
        }
    }

    fn check_member(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(format!("{e:?} in {}", self.describe())))
        }
    }

    pub fn compose(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_member(a)?;
        self.check_member(b)?;
        Ok(match (self, a, b) {
            (Group::Abelian(g), Element::Abelian(x), Element::Abelian(y)) => {
                Element::Abelian(g.add(x, y))
            }
            (Group::Table(g), Element::Table(i), Element::Table(j)) => {
                Element::Table(g.compose_idx(*i, *j))
            }
            (Group::Semidirect(g), Element::Semidirect { a: i1, b: j1 }, Element::Semidirect { a: i2, b: j2 }) => {
                let (i, j) = g.compose((*i1, *j1), (*i2, *j2));
                Element::Semidirect { a: i, b: j }
            }
            _ => unreachable!("membership checked"),
        })
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.check_member(a)?;
        Ok(match (self, a) {
            (Group::Abelian(g), Element::Abelian(x)) => Element::Abelian(g.neg(x)),
            (Group::Table(g), Element::Table(i)) => Element::Table(g.inverse_idx(*i)),
            (Group::Semidirect(g), Element::Semidirect { a: i, b: j }) => {
                let (i, j) = g.inverse((*i, *j));
                Element::Semidirect { a: i, b: j }
            }
            _ => unreachable!("membership checked"),
        })
    }

    /// `e` raised to an arbitrary integer power.
    pub fn pow(&self, e: &Element, k: &BigInt) -> Result<Element> {
        self.check_member(e)?;
        if let (Group::Abelian(g), Element::Abelian(x)) = (self, e) {
            return Ok(Element::Abelian(g.scalar_mul(x, k)));
        }
        // finite non-abelian carriers: reduce the exponent mod the element
        // order, then multiply out
        let Order::Finite(ord) = self.element_order(e)? else {
            unreachable!("table and semidirect carriers are finite")
        };
        let ord_big = BigInt::from(ord);
        let mut r = k % &ord_big;
        if r.is_negative() {
            r += &ord_big;
        }
        let mut times = r.to_u128().expect("reduced exponent fits u128");
        let mut acc = self.identity();
        while times > 0 {
            acc = self.compose(&acc, e)?;
            times -= 1;
        }
        Ok(acc)
    }

    pub fn element_order(&self, e: &Element) -> Result<Order> {
        self.check_member(e)?;
        Ok(match (self, e) {
            (Group::Abelian(g), Element::Abelian(x)) => g.element_order(x),
            (Group::Table(g), Element::Table(i)) => Order::Finite(g.element_order_idx(*i)),
            (Group::Semidirect(g), Element::Semidirect { a, b }) => {
                Order::Finite(g.element_order((*a, *b)))
            }
            _ => unreachable!("membership checked"),
        })
    }

    /// All elements in canonical order. Errors on infinite carriers.
    pub fn elements(&self) -> Result<Vec<Element>> {
        match self {
            Group::Abelian(g) => Ok(g.elements()?.into_iter().map(Element::Abelian).collect()),
            Group::Table(g) => Ok((0..g.order()).map(Element::Table).collect()),
            Group::Semidirect(g) => Ok(g
                .elements()
                .into_iter()
                .map(|(a, b)| Element::Semidirect { a, b })
                .collect()),
        }
    }

    /// Elements with free coordinates restricted to `[-bound, bound]`, in
    /// canonical order. Identical to [`elements`] on finite carriers.
    ///
    /// [`elements`]: Group::elements
    pub fn window_elements(&self, bound: i64) -> Result<Vec<Element>> {
        match self {
            Group::Abelian(g) => {
                Ok(g.window_elements(bound).into_iter().map(Element::Abelian).collect())
            }
            _ => self.elements(),
        }
    }

    /// Materializes a finite group as a validated Cayley table, numbering
    /// elements in canonical order.
    pub fn to_table(&self) -> Result<TableGroup> {
        let els = self.elements()?;
        let n = els.len();
        if n > MAX_TABLE_ORDER {
            return Err(Error::Domain(format!(
                "cannot materialize a table of order {n}: ceiling is {MAX_TABLE_ORDER}"
            )));
        }
        let index = |e: &Element| els.binary_search(e).expect("canonical order is sorted");
        let mut rows = Vec::with_capacity(n);
        for a in &els {
            let mut row = Vec::with_capacity(n);
            for b in &els {
                row.push(index(&self.compose(a, b)?));
            }
            rows.push(row);
        }
        build_table_group(rows)
    }

    pub fn describe(&self) -> String {
        match self {
            Group::Abelian(g) => {
                if g.free_rank() > 0 {
                    format!(
                        "abelian group (free rank {}, torsion {:?})",
                        g.free_rank(),
                        g.torsion()
                    )
                } else {
                    format!("abelian group {:?}", g.torsion())
                }
            }
            Group::Table(g) => format!("table group of order {}", g.order()),
            Group::Semidirect(g) => {
                format!("semidirect product C{}:C{}|{}", g.m(), g.k(), g.t())
            }
        }
    }
}
