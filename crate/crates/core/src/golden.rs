//! Reference tables for the `L(6,1)` and `L(4,1)` constructions, embedded
//! from `data/`. One part per line, members separated by `|`.

use std::collections::BTreeSet;
use std::fmt;

use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    /// T1: 30 parts of one C24⁰ and four C6 elements.
    T1,
    /// Zone `y` for `y` in `2..=6`.
    Zone(usize),
    T3,
    T4,
    /// The three block-level 1-factorizations of `L(4,1)`.
    L41,
}

impl Table {
    pub const ALL: [Table; 9] = [
        Table::T1,
        Table::Zone(2),
        Table::Zone(3),
        Table::Zone(4),
        Table::Zone(5),
        Table::Zone(6),
        Table::T3,
        Table::T4,
        Table::L41,
    ];

    fn source(self) -> &'static str {
        match self {
            Table::T1 => include_str!("../data/table1.txt"),
            Table::Zone(2) => include_str!("../data/zone2.txt"),
            Table::Zone(3) => include_str!("../data/zone3.txt"),
            Table::Zone(4) => include_str!("../data/zone4.txt"),
            Table::Zone(5) => include_str!("../data/zone5.txt"),
            Table::Zone(6) => include_str!("../data/zone6.txt"),
            Table::Zone(y) => panic!("no zone {y}"),
            Table::T3 => include_str!("../data/t3.txt"),
            Table::T4 => include_str!("../data/t4.txt"),
            Table::L41 => include_str!("../data/l41.txt"),
        }
    }

    pub fn degree(self) -> usize {
        match self {
            Table::L41 => 4,
            _ => 6,
        }
    }

    /// Parts as written, in file order.
    pub fn parts(self) -> Vec<Vec<Permutation>> {
        let n = self.degree();
        self.source()
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|line| {
                line.split('|')
                    .map(|cell| {
                        Permutation::parse_cycles(cell.trim(), n)
                            .unwrap_or_else(|e| panic!("bad table entry {cell:?}: {e}"))
                    })
                    .collect()
            })
            .collect()
    }
}

/// A printed entry that contradicts the table it sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Erratum {
    pub table: Table,
    /// 0-based part index in file order.
    pub row: usize,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub reason: &'static str,
}

const CLASS6_PAIR: &str =
    "the printed pair (1 6 5)(2 4 3), (1 5 6)(2 3 4) is class 6 and repeats zone 6; \
                           the class-5 pair with middle 6 is (1 6 5)(2 3 4), (1 5 6)(2 4 3)";

/// Known slips in the reference tables. With them the tables cover 263
/// distinct matchings instead of 265.
pub const ERRATA: [Erratum; 4] = [
    Erratum {
        table: Table::Zone(5),
        row: 3,
        printed: "(1 6 5)(2 4 3)",
        corrected: "(1 6 5)(2 3 4)",
        reason: CLASS6_PAIR,
    },
    Erratum {
        table: Table::Zone(5),
        row: 3,
        printed: "(1 5 6)(2 3 4)",
        corrected: "(1 5 6)(2 4 3)",
        reason: CLASS6_PAIR,
    },
    Erratum {
        table: Table::T4,
        row: 1,
        printed: "(1 5 6)(2 3 4)",
        corrected: "(1 5 6)(2 4 3)",
        reason: CLASS6_PAIR,
    },
    Erratum {
        table: Table::T4,
        row: 1,
        printed: "(1 6 5)(2 4 3)",
        corrected: "(1 6 5)(2 3 4)",
        reason: CLASS6_PAIR,
    },
];

impl Table {
    pub fn errata(self) -> impl Iterator<Item = &'static Erratum> {
        ERRATA.iter().filter(move |e| e.table == self)
    }

    /// Parts with [`ERRATA`] applied.
    pub fn corrected_parts(self) -> Vec<Vec<Permutation>> {
        let n = self.degree();
        let mut parts = self.parts();
        for e in self.errata() {
            let printed = Permutation::parse_cycles(e.printed, n).expect("erratum entry");
            let slot = parts[e.row]
                .iter_mut()
                .find(|p| **p == printed)
                .expect("erratum names a printed entry");
            *slot = Permutation::parse_cycles(e.corrected, n).expect("erratum entry");
        }
        parts
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Table::T1 => write!(f, "T1"),
            Table::Zone(y) => write!(f, "zone {y}"),
            Table::T3 => write!(f, "T3"),
            Table::T4 => write!(f, "T4"),
            Table::L41 => write!(f, "L(4,1)"),
        }
    }
}

/// Parts as a set of sets, ignoring order.
pub fn as_set(parts: &[Vec<Permutation>]) -> BTreeSet<BTreeSet<Permutation>> {
    parts.iter().map(|p| p.iter().cloned().collect()).collect()
}

/// Parts present in only one side.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableDiff {
    pub missing: Vec<BTreeSet<Permutation>>,
    pub extra: Vec<BTreeSet<Permutation>>,
}

impl TableDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

impl fmt::Display for TableDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &BTreeSet<Permutation>| {
            s.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        for m in &self.missing {
            writeln!(f, "- {}", show(m))?;
        }
        for e in &self.extra {
            writeln!(f, "+ {}", show(e))?;
        }
        Ok(())
    }
}

/// Compares generated parts against a table as printed.
pub fn diff(table: Table, generated: &[Vec<Permutation>]) -> TableDiff {
    diff_sets(&table.parts(), generated)
}

/// Compares generated parts against a table with its errata applied.
pub fn diff_corrected(table: Table, generated: &[Vec<Permutation>]) -> TableDiff {
    diff_sets(&table.corrected_parts(), generated)
}

fn diff_sets(reference: &[Vec<Permutation>], generated: &[Vec<Permutation>]) -> TableDiff {
    let want = as_set(reference);
    let got = as_set(generated);
    TableDiff {
        missing: want.difference(&got).cloned().collect(),
        extra: got.difference(&want).cloned().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_parse() {
        let sizes: Vec<(usize, usize)> = Table::ALL
            .iter()
            .map(|t| (t.parts().len(), t.parts()[0].len()))
            .collect();
        assert_eq!(
            sizes,
            [
                (30, 5),
                (4, 5),
                (4, 5),
                (4, 5),
                (4, 5),
                (4, 5),
                (3, 5),
                (4, 5),
                (3, 3)
            ]
        );
    }

    /// All L(6,1) tables together, corrected, hold each derangement once
    /// outside the withheld zone 5 (whose members reappear in T3 and T4).
    #[test]
    fn errata_restore_coverage() {
        let count = |f: fn(Table) -> Vec<Vec<Permutation>>| {
            let tables = [
                Table::T1,
                Table::Zone(2),
                Table::Zone(3),
                Table::Zone(4),
                Table::Zone(6),
                Table::T3,
                Table::T4,
            ];
            let all: Vec<Permutation> = tables.iter().flat_map(|&t| f(t)).flatten().collect();
            let distinct: BTreeSet<_> = all.iter().collect();
            (all.len(), distinct.len())
        };
        assert_eq!(count(Table::parts), (265, 263));
        assert_eq!(count(Table::corrected_parts), (265, 265));
    }

    #[test]
    fn packed_and_spaced_entries_agree() {
        let t4 = Table::T4.parts();
        assert_eq!(
            t4[0][0],
            Permutation::parse_cycles("(1 2)(3 4)(5 6)", 6).unwrap()
        );
    }
}
