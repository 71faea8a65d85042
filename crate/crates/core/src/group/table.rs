//! Finite groups given by an explicit Cayley table.
//!
//! Construction runs the full battery: shape, Latin square, two-sided
//! identity, two-sided inverses, and the complete O(n^3) associativity
//! check. Tables above [`MAX_TABLE_ORDER`] are refused.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result, TableDefect};

/// Ceiling for the cubic associativity check.
pub const MAX_TABLE_ORDER: usize = 512;

/// A validated finite group on indices `0..order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableGroup {
    order: usize,
    table: Vec<usize>, // row-major: table[i * order + j] = i * j
    identity: usize,
    inverses: Vec<usize>,
    source: Option<PathBuf>,
}

/// Validates a raw index array and computes identity and inverses.
pub fn build_table_group(rows: Vec<Vec<usize>>) -> Result<TableGroup> {
    let order = rows.len();
    if order == 0 {
        return Err(Error::Table(TableDefect::NotSquare { row: 0, len: 0, expected: 1 }));
    }
    if order > MAX_TABLE_ORDER {
        return Err(Error::Table(TableDefect::TooLarge { order, max: MAX_TABLE_ORDER }));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != order {
            return Err(Error::Table(TableDefect::NotSquare {
                row: i,
                len: row.len(),
                expected: order,
            }));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= order {
                return Err(Error::Table(TableDefect::OutOfRange { row: i, col: j, value: v }));
            }
        }
    }

    // Latin square: every row and column is a permutation
    let mut seen = vec![false; order];
    for (i, row) in rows.iter().enumerate() {
        seen.fill(false);
        for &v in row {
            if seen[v] {
                return Err(Error::Table(TableDefect::RowRepeat { index: i, value: v }));
            }
            seen[v] = true;
        }
    }
    for j in 0..order {
        seen.fill(false);
        for row in &rows {
            let v = row[j];
            if seen[v] {
                return Err(Error::Table(TableDefect::ColumnRepeat { index: j, value: v }));
            }
            seen[v] = true;
        }
    }

    let identity = (0..order)
        .find(|&e| (0..order).all(|i| rows[e][i] == i && rows[i][e] == i))
        .ok_or(Error::Table(TableDefect::NoIdentity))?;

    let mut inverses = vec![usize::MAX; order];
    for i in 0..order {
        match (0..order).find(|&j| rows[i][j] == identity && rows[j][i] == identity) {
            Some(j) => inverses[i] = j,
            None => return Err(Error::Table(TableDefect::MissingInverse { element: i })),
        }
    }

    let flat: Vec<usize> = rows.iter().flatten().copied().collect();
    let at = |i: usize, j: usize| flat[i * order + j];
    for a in 0..order {
        for b in 0..order {
            let ab = at(a, b);
            for c in 0..order {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(Error::Table(TableDefect::NotAssociative { a, b, c }));
                }
            }
        }
    }

    Ok(TableGroup { order, table: flat, identity, inverses, source: None })
}

impl TableGroup {
    /// Parses the plain-text Cayley format: line 1 holds the order n, lines
    /// 2..n+1 hold n whitespace-separated 0-based indices each.
    pub fn parse_str(text: &str, source: Option<PathBuf>) -> Result<TableGroup> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines
            .next()
            .ok_or(Error::CayleyFile { line: 1, col: 1, message: "empty file".into() })?;
        let order: usize = first.trim().parse().map_err(|_| Error::CayleyFile {
            line: 1,
            col: 1,
            message: format!("expected the order, found {:?}", first.trim()),
        })?;
        if order == 0 {
            return Err(Error::CayleyFile {
                line: 1,
                col: 1,
                message: "order must be at least 1".into(),
            });
        }
        let mut rows = Vec::with_capacity(order);
        for r in 0..order {
            let (idx, line) = lines.next().ok_or(Error::CayleyFile {
                line: r + 2,
                col: 1,
                message: format!("missing row {} of {order}", r + 1),
            })?;
            let mut row = Vec::with_capacity(order);
            for (c, tok) in line.split_whitespace().enumerate() {
                let v: usize = tok.parse().map_err(|_| Error::CayleyFile {
                    line: idx + 1,
                    col: c + 1,
                    message: format!("expected an index, found {tok:?}"),
                })?;
                row.push(v);
            }
            if row.len() != order {
                return Err(Error::CayleyFile {
                    line: idx + 1,
                    col: row.len() + 1,
                    message: format!("row has {} entries, expected {order}", row.len()),
                });
            }
            rows.push(row);
        }
        let mut g = build_table_group(rows)?;
        g.source = source;
        Ok(g)
    }

    pub fn from_file(path: &Path) -> Result<TableGroup> {
        let text = std::fs::read_to_string(path)?;
        TableGroup::parse_str(&text, Some(path.to_path_buf()))
    }

    /// Renders in the file format parsed by [`parse_str`].
    ///
    /// [`parse_str`]: TableGroup::parse_str
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for i in 0..self.order {
            let row: Vec<String> =
                (0..self.order).map(|j| self.compose_idx(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity_idx(&self) -> usize {
        self.identity
    }

    pub fn compose_idx(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order + j]
    }

    pub fn inverse_idx(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    pub fn set_source(&mut self, path: PathBuf) {
        self.source = Some(path);
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order)
            .all(|i| (i..self.order).all(|j| self.compose_idx(i, j) == self.compose_idx(j, i)))
    }

    pub fn element_order_idx(&self, i: usize) -> u128 {
        let mut acc = i;
        let mut n = 1u128;
        while acc != self.identity {
            acc = self.compose_idx(acc, i);
            n += 1;
        }
        n
    }

    pub fn order_census(&self) -> BTreeMap<u128, usize> {
        let mut census = BTreeMap::new();
        for i in 0..self.order {
            *census.entry(self.element_order_idx(i)).or_insert(0) += 1;
        }
        census
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_c2() {
        let g = build_table_group(vec![vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity_idx(), 0);

        let g = build_table_group(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity_idx(), 0);
        assert_eq!(g.inverse_idx(1), 1);
        assert!(g.is_commutative());
    }

    #[test]
    fn rejects_non_latin() {
        // rock-paper-scissors magma: idempotent rows repeat values
        let err = build_table_group(vec![vec![0, 1, 0], vec![1, 1, 2], vec![0, 2, 2]])
            .unwrap_err();
        assert!(matches!(err, Error::Table(TableDefect::RowRepeat { .. })));
    }

    #[test]
    fn rejects_non_associative_latin_square_with_identity() {
        // a loop of order 5 (identity 0, two-sided inverses) that is not a
        // group, found by enumerating the 56 reduced Latin squares of order 5
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = build_table_group(rows).unwrap_err();
        assert!(matches!(err, Error::Table(TableDefect::NotAssociative { .. })));
    }

    #[test]
    fn rejects_missing_identity_and_oversized() {
        // x*y = 2(x+y) mod 3: Latin but with no two-sided identity
        let err = build_table_group(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]])
            .unwrap_err();
        assert!(matches!(err, Error::Table(TableDefect::NoIdentity)));

        let n = MAX_TABLE_ORDER + 1;
        let rows: Vec<Vec<usize>> =
            (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let err = build_table_group(rows).unwrap_err();
        assert!(matches!(err, Error::Table(TableDefect::TooLarge { .. })));
    }

    #[test]
    fn file_round_trip_and_diagnostics() {
        let g = build_table_group(vec![
            vec![0, 1, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
        ])
        .unwrap();
        let text = g.to_file_string();
        let back = TableGroup::parse_str(&text, None).unwrap();
        assert_eq!(g, back);

        let err = TableGroup::parse_str("3\n0 1 2\n1 2\n2 0 1\n", None).unwrap_err();
        match err {
            Error::CayleyFile { line, col, .. } => {
                assert_eq!(line, 3);
                assert_eq!(col, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }

        let err = TableGroup::parse_str("3\n0 1 2\n1 x 0\n2 0 1\n", None).unwrap_err();
        assert!(matches!(err, Error::CayleyFile { line: 3, col: 2, .. }));
    }

    #[test]
    fn census_of_cyclic_table() {
        let n = 6;
        let rows: Vec<Vec<usize>> =
            (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        let g = build_table_group(rows).unwrap();
        let census = g.order_census();
        assert_eq!(census.get(&1), Some(&1));
        assert_eq!(census.get(&2), Some(&1));
        assert_eq!(census.get(&3), Some(&2));
        assert_eq!(census.get(&6), Some(&2));
    }
}
