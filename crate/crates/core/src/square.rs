//! Squares of group elements, verification, normalization, and the
//! three-element parametrization of abelian 3x3 magic squares.

use crate::error::{Error, Result};
use crate::group::{Element, Embedding, Group};

/// An n x n array of elements of one group, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Square {
    n: usize,
    entries: Vec<Element>,
}

impl Square {
    pub fn new(n: usize, entries: Vec<Element>) -> Result<Square> {
        if n == 0 {
            return Err(Error::Domain("square side must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::Domain(format!(
                "expected {} entries for a {n}x{n} square, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(Square { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Element>>) -> Result<Square> {
        let n = rows.len();
        let entries: Vec<Element> = rows.into_iter().flatten().collect();
        Square::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    /// Entry at 0-based (row, col).
    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Element]> {
        self.entries.chunks(self.n)
    }
}

/// The 2n+2 lines of an n x n square in the fixed report order: rows 1..n
/// (left to right), columns 1..n (top to bottom), the main diagonal, then
/// the anti-diagonal from the bottom-left corner up.
pub fn lines(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::with_capacity(2 * n + 2);
    for i in 0..n {
        out.push((0..n).map(|j| (i, j)).collect());
    }
    for j in 0..n {
        out.push((0..n).map(|i| (i, j)).collect());
    }
    out.push((0..n).map(|i| (i, i)).collect());
    out.push((0..n).map(|i| (n - 1 - i, i)).collect());
    out
}

/// Outcome of checking a square against the magic conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    /// Products of the 2n+2 lines in the order given by [`lines`].
    pub line_products: Vec<Element>,
    /// The common line product, present exactly when all lines agree.
    pub magic_product: Option<Element>,
    pub lines_equal: bool,
    pub entries_distinct: bool,
    /// 0-based coordinate pairs holding equal entries.
    pub duplicate_pairs: Vec<((usize, usize), (usize, usize))>,
    pub is_magic: bool,
}

/// Checks the defining equations: every line product is computed left to
/// right along its traversal and all 2n+2 must agree; entries must be
/// pairwise distinct.
pub fn verify(group: &Group, square: &Square) -> Result<VerificationReport> {
    for e in square.entries() {
        if !group.contains(e) {
            return Err(Error::CarrierMismatch(format!(
                "{e:?} in {}",
                group.describe()
            )));
        }
    }
    let n = square.n();
    let mut line_products = Vec::with_capacity(2 * n + 2);
    for line in lines(n) {
        let mut acc = group.identity();
        for (i, j) in line {
            acc = group.compose(&acc, square.entry(i, j))?;
        }
        line_products.push(acc);
    }
    let lines_equal = line_products.windows(2).all(|w| w[0] == w[1]);
    let mut duplicate_pairs = Vec::new();
    for a in 0..n * n {
        for b in a + 1..n * n {
            if square.entries()[a] == square.entries()[b] {
                duplicate_pairs.push(((a / n, a % n), (b / n, b % n)));
            }
        }
    }
    let entries_distinct = duplicate_pairs.is_empty();
    Ok(VerificationReport {
        magic_product: lines_equal.then(|| line_products[0].clone()),
        line_products,
        lines_equal,
        entries_distinct,
        duplicate_pairs,
        is_magic: lines_equal && entries_distinct,
    })
}

/// Multiplies every entry of a magic square by the inverse of the entry at
/// 0-based (i, j), leaving the identity there. Commutative groups only; the
/// result is again magic, with product g^-n * s.
pub fn normalize(group: &Group, square: &Square, i: usize, j: usize) -> Result<Square> {
    if !group.is_commutative() {
        return Err(Error::NonCommutative("normalize"));
    }
    let n = square.n();
    if i >= n || j >= n {
        return Err(Error::Domain(format!(
            "cell ({i}, {j}) is outside a {n}x{n} square"
        )));
    }
    let report = verify(group, square)?;
    if !report.is_magic {
        return Err(Error::NotMagic(
            "normalize requires a verified magic square".into(),
        ));
    }
    let shift = group.inverse(square.entry(i, j))?;
    let entries = square
        .entries()
        .iter()
        .map(|e| group.compose(e, &shift))
        .collect::<Result<Vec<_>>>()?;
    Square::new(n, entries)
}

/// The (a, b, c) triple generating an abelian 3x3 magic square: c is the
/// center and the magic product is c^3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parametrization {
    pub a: Element,
    pub b: Element,
    pub c: Element,
}

/// Builds the 3x3 square
///
/// ```text
///   ac      a^-1 b^-1 c   bc
///   a^-1 bc c             a b^-1 c
///   b^-1 c  abc           a^-1 c
/// ```
///
/// whose eight line products all equal c^3 unconditionally. Distinctness of
/// the nine entries is not guaranteed.
pub fn parametrized_square(group: &Group, p: &Parametrization) -> Result<Square> {
    if !group.is_commutative() {
        return Err(Error::NonCommutative("parametrized_square"));
    }
    let Parametrization { a, b, c } = p;
    let ai = group.inverse(a)?;
    let bi = group.inverse(b)?;
    let mul = |x: &Element, y: &Element| group.compose(x, y);
    let entries = vec![
        mul(a, c)?,
        mul(&mul(&ai, &bi)?, c)?,
        mul(b, c)?,
        mul(&mul(&ai, b)?, c)?,
        c.clone(),
        mul(&mul(a, &bi)?, c)?,
        mul(&bi, c)?,
        mul(&mul(a, b)?, c)?,
        mul(&ai, c)?,
    ];
    Square::new(3, entries)
}

/// Reads the parameters back off a magic 3x3 square: a = g1 g5^-1,
/// b = g3 g5^-1, c = g5 (entries numbered row-major from 1).
pub fn recover_parameters(group: &Group, square: &Square) -> Result<Parametrization> {
    if !group.is_commutative() {
        return Err(Error::NonCommutative("recover_parameters"));
    }
    if square.n() != 3 {
        return Err(Error::Domain(format!(
            "parameter recovery is defined for 3x3 squares, got {0}x{0}",
            square.n()
        )));
    }
    let report = verify(group, square)?;
    if !report.is_magic {
        return Err(Error::NotMagic(
            "recover_parameters requires a verified magic square".into(),
        ));
    }
    let center_inv = group.inverse(square.entry(1, 1))?;
    Ok(Parametrization {
        a: group.compose(square.entry(0, 0), &center_inv)?,
        b: group.compose(square.entry(0, 2), &center_inv)?,
        c: square.entry(1, 1).clone(),
    })
}

/// Applies an embedding entrywise; magic squares stay magic because the map
/// is an injective homomorphism.
pub fn map_square(square: &Square, embedding: &Embedding) -> Result<Square> {
    let entries = square
        .entries()
        .iter()
        .map(|e| embedding.apply(e))
        .collect::<Result<Vec<_>>>()?;
    Square::new(square.n(), entries)
}
