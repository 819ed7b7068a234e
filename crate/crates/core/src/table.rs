//! Finite magmas as Cayley tables, and their text and JSON file formats.
//!
//! Text format: the order `n` on the first line, then `n` lines of `n`
//! whitespace-separated element indices. JSON: `{"order": n, "table": [[..], ..]}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};

/// An `n x n` composition table over elements `0..n`. Every entry is `< n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CayleyTable {
    order: usize,
    cells: Vec<usize>,
}

impl std::fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableJson {
    order: usize,
    table: Vec<Vec<i64>>,
}

impl CayleyTable {
    /// Validates a raw matrix: square, non-empty, every entry in `0..n`.
    pub fn validate(raw: &[Vec<i64>]) -> Result<Self> {
        let n = raw.len();
        if n == 0 {
            return Err(AlgebraError::EmptyTable);
        }
        let mut cells = Vec::with_capacity(n * n);
        for (row, r) in raw.iter().enumerate() {
            if r.len() != n {
                return Err(AlgebraError::NonSquare { row, len: r.len(), expected: n });
            }
            for (col, &value) in r.iter().enumerate() {
                if value < 0 || value as u64 >= n as u64 {
                    return Err(AlgebraError::EntryOutOfRange { row, col, value, order: n });
                }
                cells.push(value as usize);
            }
        }
        Ok(CayleyTable { order: n, cells })
    }

    /// Builds a table from row-major cells already known to be in range.
    pub fn from_cells(order: usize, cells: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(AlgebraError::EmptyTable);
        }
        if cells.len() != order * order {
            return Err(AlgebraError::NonSquare { row: 0, len: cells.len(), expected: order * order });
        }
        if let Some(i) = cells.iter().position(|&c| c >= order) {
            return Err(AlgebraError::EntryOutOfRange {
                row: i / order,
                col: i % order,
                value: cells[i] as i64,
                order,
            });
        }
        Ok(CayleyTable { order, cells })
    }

    /// Tabulates `op` over `0..order`.
    pub fn from_fn(order: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let cells = (0..order).flat_map(|a| (0..order).map(move |b| (a, b))).map(|(a, b)| op(a, b)).collect();
        Self::from_cells(order, cells)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.order + b]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.cells.chunks(self.order)
    }

    /// The table obtained by renaming every element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> CayleyTable {
        let n = self.order;
        let mut cells = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                cells[perm[a] * n + perm[b]] = perm[self.op(a, b)];
            }
        }
        CayleyTable { order: n, cells }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.order);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }

    pub fn parse_text(input: &str) -> Result<Self> {
        let mut lines = input.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let table = parse_block(&mut lines)?;
        if let Some((i, _)) = lines.next() {
            return Err(parse_err(i, "trailing content after table"));
        }
        Ok(table)
    }

    /// Parses blank-line-separated tables as written by [`CayleyTable::many_to_text`].
    pub fn parse_many_text(input: &str) -> Result<Vec<Self>> {
        let mut lines = input.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).peekable();
        let mut out = Vec::new();
        while lines.peek().is_some() {
            out.push(parse_block(&mut lines)?);
        }
        Ok(out)
    }

    pub fn many_to_text(tables: &[CayleyTable]) -> String {
        tables.iter().map(CayleyTable::to_text).collect::<Vec<_>>().join("\n")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let table: Vec<Vec<usize>> = self.rows().map(<[usize]>::to_vec).collect();
        serde_json::json!({ "order": self.order, "table": table })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn parse_json(input: &str) -> Result<Self> {
        let parsed: TableJson =
            serde_json::from_str(input).map_err(|e| parse_err(e.line().saturating_sub(1), &e.to_string()))?;
        if parsed.order != parsed.table.len() {
            return Err(parse_err(
                0,
                &format!("declared order {} but table has {} rows", parsed.order, parsed.table.len()),
            ));
        }
        Self::validate(&parsed.table)
    }

    /// Dispatches on content: JSON if it starts with `{`, text otherwise.
    pub fn parse_auto(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }
}

fn parse_err(line: usize, message: &str) -> AlgebraError {
    AlgebraError::Parse { line: line + 1, message: message.to_string() }
}

fn parse_row(line_no: usize, line: &str) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|tok| tok.parse::<i64>().map_err(|_| parse_err(line_no, &format!("not an integer: {tok:?}"))))
        .collect()
}

fn parse_block<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<CayleyTable> {
    let (i, header) = lines.next().ok_or_else(|| parse_err(0, "missing order line"))?;
    let n: usize = header.trim().parse().map_err(|_| parse_err(i, &format!("bad order line {header:?}")))?;
    if n == 0 {
        return Err(AlgebraError::EmptyTable);
    }
    let mut raw = Vec::with_capacity(n);
    for r in 0..n {
        let (i, line) = lines.next().ok_or_else(|| parse_err(i + r + 1, "table ends early"))?;
        raw.push(parse_row(i, line)?);
    }
    CayleyTable::validate(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Z4_SUB: &str = "4\n0 1 2 3\n3 0 1 2\n2 3 0 1\n1 2 3 0\n";

    #[test]
    fn z4_subtraction_table_valid() {
        let t = CayleyTable::parse_text(Z4_SUB).unwrap();
        assert_eq!(t.order(), 4);
        assert_eq!(t.op(1, 0), 3);
        assert_eq!(t.op(0, 1), 1);
        assert_eq!(t.to_text(), Z4_SUB);
    }

    #[test]
    fn trivial_magma() {
        let t = CayleyTable::validate(&[vec![0]]).unwrap();
        assert_eq!(t.order(), 1);
    }

    #[test]
    fn entry_out_of_range() {
        let err = CayleyTable::validate(&[vec![0, 2], vec![1, 0]]).unwrap_err();
        assert_eq!(err, AlgebraError::EntryOutOfRange { row: 0, col: 1, value: 2, order: 2 });
        assert!(matches!(
            CayleyTable::validate(&[vec![0, -1], vec![1, 0]]),
            Err(AlgebraError::EntryOutOfRange { value: -1, .. })
        ));
    }

    #[test]
    fn non_square_and_empty() {
        assert!(matches!(
            CayleyTable::validate(&[vec![0, 1], vec![1]]),
            Err(AlgebraError::NonSquare { row: 1, len: 1, expected: 2 })
        ));
        assert_eq!(CayleyTable::validate(&[]), Err(AlgebraError::EmptyTable));
        assert!(CayleyTable::parse_text("2\n0 1\n1 0 1\n").is_err());
    }

    #[test]
    fn text_rejects_trailing_garbage() {
        assert!(CayleyTable::parse_text("1\n0\n").is_ok());
        assert!(matches!(CayleyTable::parse_text("1\n0\nextra\n"), Err(AlgebraError::Parse { line: 3, .. })));
        assert!(CayleyTable::parse_text("1\n0 x\n").is_err());
        assert!(CayleyTable::parse_text("2\n0 1\n").is_err());
    }

    #[test]
    fn json_mirror() {
        let t = CayleyTable::parse_text(Z4_SUB).unwrap();
        let j = t.to_json();
        assert_eq!(j, r#"{"order":4,"table":[[0,1,2,3],[3,0,1,2],[2,3,0,1],[1,2,3,0]]}"#);
        assert_eq!(CayleyTable::parse_json(&j).unwrap(), t);
        assert_eq!(CayleyTable::parse_auto(&j).unwrap(), t);
        assert!(CayleyTable::parse_json(&format!("{j} []")).is_err());
        assert!(CayleyTable::parse_json(r#"{"order":2,"table":[[0]]}"#).is_err());
        assert!(CayleyTable::parse_json(r#"{"order":1,"table":[[0]],"extra":1}"#).is_err());
    }

    #[test]
    fn many_tables_blank_separated() {
        let a = CayleyTable::validate(&[vec![0]]).unwrap();
        let b = CayleyTable::parse_text(Z4_SUB).unwrap();
        let s = CayleyTable::many_to_text(&[a.clone(), b.clone()]);
        assert_eq!(s, format!("1\n0\n\n{Z4_SUB}"));
        assert_eq!(CayleyTable::parse_many_text(&s).unwrap(), vec![a, b]);
    }

    fn arb_table() -> impl Strategy<Value = CayleyTable> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec(0..n, n * n).prop_map(move |cells| CayleyTable::from_cells(n, cells).unwrap())
        })
    }

    proptest! {
        #[test]
        fn text_and_json_reparse_identically(t in arb_table()) {
            prop_assert_eq!(&CayleyTable::parse_text(&t.to_text()).unwrap(), &t);
            prop_assert_eq!(&CayleyTable::parse_json(&t.to_json()).unwrap(), &t);
        }

        #[test]
        fn relabel_by_inverse_permutation_restores(t in arb_table(), seed in any::<u64>()) {
            let n = t.order();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut inv = vec![0; n];
            for (i, &p) in perm.iter().enumerate() { inv[p] = i; }
            prop_assert_eq!(t.relabel(&perm).relabel(&inv), t);
        }
    }
}
