//! Square 0/1 matrices viewed as bipartite graphs, the `L(rm, r)` family, and
//! the 2x2 block view of 8x8 permutation matrices.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Permutation;

/// Widest supported matrix; rows are stored as `u64` masks.
pub const MAX_MATRIX_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("matrix size {0} is outside 1..={MAX_MATRIX_SIZE}")]
    BadSize(usize),
    #[error("row {row} has length {len}, expected {n}")]
    RaggedRow { row: usize, len: usize, n: usize },
    #[error("invalid matrix character {0:?}")]
    BadChar(char),
    #[error("block count m must be at least 1")]
    NoBlocks,
    #[error("graph is not regular")]
    NotRegular,
    #[error("permutation has degree {got}, graph has {n} vertices per side")]
    DegreeMismatch { got: usize, n: usize },
}

/// An `n x n` 0/1 matrix with each row stored as a bit mask (bit `j` is
/// column `j + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdjacencyMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl AdjacencyMatrix {
    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_MATRIX_SIZE {
            return Err(GraphError::BadSize(n));
        }
        if rows.len() != n {
            return Err(GraphError::RaggedRow {
                row: rows.len(),
                len: rows.len(),
                n,
            });
        }
        let full = full_mask(n);
        for (row, &mask) in rows.iter().enumerate() {
            if mask & !full != 0 {
                return Err(GraphError::RaggedRow {
                    row: row + 1,
                    len: 64 - mask.leading_zeros() as usize,
                    n,
                });
            }
        }
        Ok(AdjacencyMatrix { n, rows })
    }

    /// `J_n`, the complete bipartite graph.
    pub fn all_ones(n: usize) -> Result<Self, GraphError> {
        Self::from_rows(n, vec![full_mask(n); n.min(MAX_MATRIX_SIZE)])
    }

    /// The `n x n` matrix `P^0 + P^1 + ... + P^(k-1)` for a permutation `P`.
    pub fn power_sum(p: &Permutation, k: usize) -> Self {
        let n = p.degree();
        let mut rows = vec![0u64; n];
        let mut q = Permutation::identity(n);
        for _ in 0..k {
            for (i, row) in rows.iter_mut().enumerate() {
                *row |= 1 << (q.apply(i + 1) - 1);
            }
            q = p.compose(&q).expect("equal degrees");
        }
        AdjacencyMatrix { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i - 1] >> (j - 1) & 1 == 1
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.count_ones() as usize).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        (0..self.n)
            .map(|j| self.rows.iter().filter(|&&r| r >> j & 1 == 1).count())
            .collect()
    }

    /// The common row and column sum.
    pub fn degree(&self) -> Result<usize, GraphError> {
        let rows = self.row_sums();
        let d = rows[0];
        if rows.iter().all(|&s| s == d) && self.col_sums().iter().all(|&s| s == d) {
            Ok(d)
        } else {
            Err(GraphError::NotRegular)
        }
    }

    pub fn edge_count(&self) -> usize {
        self.row_sums().iter().sum()
    }

    /// Rows as `'0'/'1'` strings, first character is column 1.
    pub fn to_bitstrings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|&r| {
                (0..self.n)
                    .map(|j| if r >> j & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    pub fn from_bitstrings<S: AsRef<str>>(lines: &[S]) -> Result<Self, GraphError> {
        let n = lines.len();
        if n == 0 || n > MAX_MATRIX_SIZE {
            return Err(GraphError::BadSize(n));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.iter().enumerate() {
            let line = line.as_ref();
            let len = line.chars().count();
            if len != n {
                return Err(GraphError::RaggedRow { row: i + 1, len, n });
            }
            let mut mask = 0u64;
            for (j, c) in line.chars().enumerate() {
                match c {
                    '1' => mask |= 1 << j,
                    '0' => {}
                    other => return Err(GraphError::BadChar(other)),
                }
            }
            rows.push(mask);
        }
        Ok(AdjacencyMatrix { n, rows })
    }
}

impl fmt::Display for AdjacencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.to_bitstrings() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for AdjacencyMatrix {
    type Err = GraphError;

    /// `n` lines of `n` characters; blank lines are skipped.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lines: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        Self::from_bitstrings(&lines)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `L(rm, r)`: `K(rm, rm)` minus `m` disjoint copies of `K(r, r)`.
///
/// `r = 0` stands for the complete graph `K(n, n)`; `n` is then explicit and
/// `m` is fixed at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LParams {
    r: usize,
    m: usize,
    n: usize,
}

impl LParams {
    pub fn new(r: usize, m: usize) -> Result<Self, GraphError> {
        if m == 0 {
            return Err(GraphError::NoBlocks);
        }
        if r == 0 {
            return Err(GraphError::BadSize(0));
        }
        let n = r * m;
        if n > MAX_MATRIX_SIZE {
            return Err(GraphError::BadSize(n));
        }
        Ok(LParams { r, m, n })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_MATRIX_SIZE {
            return Err(GraphError::BadSize(n));
        }
        Ok(LParams { r: 0, m: 1, n })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Zero-based block index of a zero-based vertex.
    fn block(&self, v: usize) -> usize {
        v / self.r
    }

    pub fn adjacency(&self) -> AdjacencyMatrix {
        let full = full_mask(self.n);
        let rows = (0..self.n)
            .map(|i| {
                if self.r == 0 {
                    full
                } else {
                    let b = self.block(i);
                    let forbidden = full_mask(self.r) << (b * self.r);
                    full & !forbidden
                }
            })
            .collect();
        AdjacencyMatrix { n: self.n, rows }
    }

    pub fn degree(&self) -> usize {
        self.n - self.r
    }
}

/// A graph given either by `L(rm, r)` parameters or an explicit matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphSpec {
    L(LParams),
    Matrix(AdjacencyMatrix),
}

impl GraphSpec {
    pub fn l(r: usize, m: usize) -> Result<Self, GraphError> {
        LParams::new(r, m).map(GraphSpec::L)
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        LParams::complete(n).map(GraphSpec::L)
    }

    pub fn n(&self) -> usize {
        match self {
            GraphSpec::L(p) => p.n(),
            GraphSpec::Matrix(a) => a.n(),
        }
    }

    pub fn adjacency(&self) -> AdjacencyMatrix {
        match self {
            GraphSpec::L(p) => p.adjacency(),
            GraphSpec::Matrix(a) => a.clone(),
        }
    }

    pub fn degree(&self) -> Result<usize, GraphError> {
        match self {
            GraphSpec::L(p) => Ok(p.degree()),
            GraphSpec::Matrix(a) => a.degree(),
        }
    }

    pub fn l_params(&self) -> Option<LParams> {
        match self {
            GraphSpec::L(p) => Some(*p),
            GraphSpec::Matrix(_) => None,
        }
    }

    /// Whether `p` picks only edges of the graph.
    pub fn is_matching(&self, p: &Permutation) -> Result<bool, GraphError> {
        let n = self.n();
        if p.degree() != n {
            return Err(GraphError::DegreeMismatch { got: p.degree(), n });
        }
        Ok(match self {
            GraphSpec::L(params) if params.r() > 0 => p
                .raw()
                .iter()
                .enumerate()
                .all(|(i, &j)| params.block(i) != params.block(j as usize)),
            GraphSpec::L(_) => true,
            GraphSpec::Matrix(a) => p
                .raw()
                .iter()
                .enumerate()
                .all(|(i, &j)| a.rows[i] >> j & 1 == 1),
        })
    }

    pub fn label(&self) -> String {
        match self {
            GraphSpec::L(p) if p.r() == 0 => format!("K({0},{0})", p.n()),
            GraphSpec::L(p) => format!("L({},{})", p.n(), p.r()),
            GraphSpec::Matrix(a) => format!("matrix {0}x{0}", a.n()),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A 2x2 0/1 block: bit `2a + b` is the cell in row `a`, column `b` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Block(pub u8);

impl Block {
    pub const ZERO: Block = Block(0);
    pub const I2: Block = Block(0b1001);
    pub const R2: Block = Block(0b0110);
    pub const J2: Block = Block(0b1111);

    /// The single-one block `E_{a,b}` with 1-based `a, b`.
    pub fn e(a: usize, b: usize) -> Block {
        debug_assert!((1..=2).contains(&a) && (1..=2).contains(&b));
        Block(1 << (2 * (a - 1) + (b - 1)))
    }

    pub fn ones(self) -> u32 {
        self.0.count_ones()
    }

    /// `I_2` or the reversal `R_2`.
    pub fn is_invertible(self) -> bool {
        self == Block::I2 || self == Block::R2
    }

    /// `(a, b)` 1-based position of a single-one block.
    pub fn single(self) -> Option<(usize, usize)> {
        (self.ones() == 1).then(|| {
            let k = self.0.trailing_zeros() as usize;
            (k / 2 + 1, k % 2 + 1)
        })
    }

    /// Swap the two rows.
    pub fn flip_rows(self) -> Block {
        Block((self.0 & 0b0011) << 2 | (self.0 & 0b1100) >> 2)
    }

    /// Swap the two columns.
    pub fn flip_cols(self) -> Block {
        Block((self.0 & 0b0101) << 1 | (self.0 & 0b1010) >> 1)
    }

    /// Rotation by a half turn; sends `E_{a,b}` to `E_{3-a,3-b}`.
    pub fn complement(self) -> Block {
        self.flip_rows().flip_cols()
    }
}

/// The 4x4-of-2x2 block view of an 8x8 0/1 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockMatrix {
    blocks: [[Block; 4]; 4],
}

impl BlockMatrix {
    pub fn of_permutation(p: &Permutation) -> BlockMatrix {
        assert_eq!(p.degree(), 8, "block view needs degree 8");
        let mut blocks = [[Block::ZERO; 4]; 4];
        for (row, &col) in p.raw().iter().enumerate() {
            let col = col as usize;
            blocks[row / 2][col / 2].0 |= 1 << (2 * (row % 2) + col % 2);
        }
        BlockMatrix { blocks }
    }

    pub fn from_blocks(blocks: [[Block; 4]; 4]) -> BlockMatrix {
        BlockMatrix { blocks }
    }

    /// Block at 1-based block coordinates.
    pub fn block(&self, i: usize, j: usize) -> Block {
        self.blocks[i - 1][j - 1]
    }

    /// Entry at 1-based matrix coordinates.
    pub fn entry(&self, row: usize, col: usize) -> bool {
        let b = self.blocks[(row - 1) / 2][(col - 1) / 2];
        b.0 >> (2 * ((row - 1) % 2) + (col - 1) % 2) & 1 == 1
    }

    /// 1-based positions of the invertible blocks, row-major.
    pub fn invertible_blocks(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let b = self.blocks[i][j];
                if b.ones() == 2 {
                    assert!(b.is_invertible(), "two-one block of a permutation matrix");
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    /// Back to a permutation if every row and column has exactly one 1.
    pub fn to_permutation(&self) -> Option<Permutation> {
        let mut images = vec![0usize; 8];
        let mut seen_cols = 0u8;
        for (row, image) in images.iter_mut().enumerate() {
            let mut found = None;
            for col in 0..8 {
                if self.entry(row + 1, col + 1) {
                    if found.is_some() {
                        return None;
                    }
                    found = Some(col);
                }
            }
            let col = found?;
            if seen_cols >> col & 1 == 1 {
                return None;
            }
            seen_cols |= 1 << col;
            *image = col + 1;
        }
        Permutation::from_images(&images).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn derangement_board() {
        let a = GraphSpec::l(1, 6).unwrap().adjacency();
        for i in 1..=6 {
            for j in 1..=6 {
                assert_eq!(a.get(i, j), i != j);
            }
        }
    }

    #[test]
    fn two_by_two_blocks() {
        let a = GraphSpec::l(2, 2).unwrap().adjacency();
        assert_eq!(a.to_bitstrings(), vec!["0011", "0011", "1100", "1100"]);
    }

    #[test]
    fn complete_graph() {
        let a = GraphSpec::complete(3).unwrap().adjacency();
        assert_eq!(a, AdjacencyMatrix::all_ones(3).unwrap());
        assert_eq!(GraphSpec::complete(3).unwrap().degree().unwrap(), 3);
    }

    #[test]
    fn degrees() {
        assert_eq!(GraphSpec::l(1, 6).unwrap().degree().unwrap(), 5);
        assert_eq!(GraphSpec::l(2, 4).unwrap().degree().unwrap(), 6);
        let c = p("(1 2 3 4 5)", 5);
        let ex1 = GraphSpec::Matrix(AdjacencyMatrix::power_sum(&c, 3));
        assert_eq!(ex1.degree().unwrap(), 3);
        let irregular = AdjacencyMatrix::from_bitstrings(&["11", "01"]).unwrap();
        assert_eq!(irregular.degree(), Err(GraphError::NotRegular));
    }

    #[test]
    fn l_adjacency_rows_are_regular() {
        for r in 1..=4 {
            for m in 1..=4 {
                let spec = GraphSpec::l(r, m).unwrap();
                let a = spec.adjacency();
                assert!(a.row_sums().iter().all(|&s| s == r * m - r));
                assert!(a.col_sums().iter().all(|&s| s == r * m - r));
                for i in 1..=r * m {
                    for j in 1..=r * m {
                        assert_eq!(a.get(i, j), a.get(j, i));
                        assert_eq!(a.get(i, j), (i - 1) / r != (j - 1) / r);
                    }
                }
            }
        }
    }

    #[test]
    fn matching_membership() {
        let l61 = GraphSpec::l(1, 6).unwrap();
        assert!(l61.is_matching(&p("(1 2)(3 4 5 6)", 6)).unwrap());
        assert!(!l61.is_matching(&Permutation::identity(6)).unwrap());
        let l82 = GraphSpec::l(2, 4).unwrap();
        assert!(!l82.is_matching(&p("(1 2)(3 5)(4 6)(7 8)", 8)).unwrap());
        assert!(l82.is_matching(&p("(1 3)(2 4)(5 7)(6 8)", 8)).unwrap());
        assert_eq!(
            l61.is_matching(&Permutation::identity(5)),
            Err(GraphError::DegreeMismatch { got: 5, n: 6 })
        );
        let ex = GraphSpec::Matrix(AdjacencyMatrix::power_sum(&p("(1 2 3 4 5)", 5), 3));
        assert!(ex.is_matching(&p("(1 2 3 4 5)", 5)).unwrap());
        assert!(!ex.is_matching(&p("(1 4)", 5)).unwrap());
    }

    #[test]
    fn matrix_text_round_trip() {
        let text = "011\n101\n110\n";
        let a: AdjacencyMatrix = text.parse().unwrap();
        assert_eq!(a.to_string(), text);
        assert!(matches!(
            "01\n1".parse::<AdjacencyMatrix>(),
            Err(GraphError::RaggedRow { .. })
        ));
        assert_eq!(
            "0x\n10".parse::<AdjacencyMatrix>(),
            Err(GraphError::BadChar('x'))
        );
    }

    #[test]
    fn block_view_identity() {
        let bm = BlockMatrix::of_permutation(&Permutation::identity(8));
        assert_eq!(bm.invertible_blocks(), vec![(1, 1), (2, 2), (3, 3), (4, 4)]);
        for i in 1..=4 {
            assert_eq!(bm.block(i, i), Block::I2);
        }
    }

    #[test]
    fn block_view_block_swaps() {
        let q = Permutation::from_images(&[3, 4, 1, 2, 7, 8, 5, 6]).unwrap();
        let bm = BlockMatrix::of_permutation(&q);
        assert_eq!(bm.invertible_blocks(), vec![(1, 2), (2, 1), (3, 4), (4, 3)]);
        for (i, j) in bm.invertible_blocks() {
            assert_eq!(bm.block(i, j), Block::I2);
        }
        assert_eq!(bm.to_permutation(), Some(q));
    }

    #[test]
    fn block_entry_layout() {
        let q = p("(1 4 7)(2 6)", 8);
        let bm = BlockMatrix::of_permutation(&q);
        for row in 1..=8 {
            for col in 1..=8 {
                assert_eq!(bm.entry(row, col), q.apply(row) == col);
            }
        }
    }

    #[test]
    fn block_algebra() {
        assert_eq!(Block::e(1, 2).complement(), Block::e(2, 1));
        assert_eq!(Block::e(1, 1).flip_rows(), Block::e(2, 1));
        assert_eq!(Block::e(1, 1).flip_cols(), Block::e(1, 2));
        assert_eq!(Block::I2.flip_rows(), Block::R2);
        for a in 1..=2 {
            for b in 1..=2 {
                let e = Block::e(a, b);
                assert_eq!(e.single(), Some((a, b)));
                assert!(Block(e.0 | e.complement().0).is_invertible());
                let all = e.0 | e.complement().0 | e.flip_rows().0 | e.flip_cols().0;
                assert_eq!(Block(all), Block::J2);
            }
        }
    }
}
