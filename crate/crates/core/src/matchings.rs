//! Exhaustive enumeration of perfect matchings, and the two classifications
//! the constructions are organised around: cycle type for `L(6,1)` and
//! invertible-block count for `L(8,2)`.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{BlockMatrix, GraphSpec, LParams};
use crate::perm::Permutation;

/// Largest `n` accepted by [`enumerate`].
pub const ENUMERATION_MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("exhaustive enumeration supports n <= {ENUMERATION_MAX_N}, got {0}")]
    TooLarge(usize),
    #[error("classification expects {expected}, got {got}")]
    WrongGraph { expected: &'static str, got: String },
}

/// All perfect matchings of a graph, sorted by image array.
#[derive(Debug, Clone)]
pub struct MatchingSet {
    spec: GraphSpec,
    perms: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl MatchingSet {
    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Permutation> {
        self.perms.iter()
    }
}

impl<'a> IntoIterator for &'a MatchingSet {
    type Item = &'a Permutation;
    type IntoIter = std::slice::Iter<'a, Permutation>;

    fn into_iter(self) -> Self::IntoIter {
        self.perms.iter()
    }
}

/// Enumerates every perfect matching by backtracking over rows, trying free
/// columns in ascending order. The first row's choices run in parallel and
/// are concatenated in column order, so the output is sorted.
pub fn enumerate(spec: &GraphSpec) -> Result<MatchingSet, MatchingError> {
    let n = spec.n();
    if n > ENUMERATION_MAX_N {
        return Err(MatchingError::TooLarge(n));
    }
    let rows = spec.adjacency().rows().to_vec();
    let first: Vec<u32> = bits(rows[0]).collect();
    let branches: Vec<Vec<Permutation>> = first
        .par_iter()
        .map(|&c| {
            let mut out = Vec::new();
            let mut images = vec![0u8; n];
            images[0] = c as u8;
            extend(&rows, 1, 1 << c, &mut images, &mut out);
            out
        })
        .collect();
    let perms: Vec<Permutation> = branches.into_iter().flatten().collect();
    debug_assert!(perms.windows(2).all(|w| w[0] < w[1]));
    let index = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    Ok(MatchingSet {
        spec: spec.clone(),
        perms,
        index,
    })
}

fn extend(rows: &[u64], row: usize, used: u64, images: &mut [u8], out: &mut Vec<Permutation>) {
    if row == rows.len() {
        out.push(Permutation::from_raw(images.to_vec()));
        return;
    }
    for c in bits(rows[row] & !used) {
        images[row] = c as u8;
        extend(rows, row + 1, used | 1 << c, images, out);
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let c = mask.trailing_zeros();
            mask &= mask - 1;
            c
        })
    })
}

/// Derangements of 6 points split by cycle type.
#[derive(Debug, Clone)]
pub struct CycleClassification {
    /// One 6-cycle.
    pub c6: Vec<Permutation>,
    /// Two 3-cycles.
    pub c33: Vec<Permutation>,
    /// A 2-cycle and a 4-cycle.
    pub c24: Vec<Permutation>,
    /// The part of `c24` whose 2-cycle contains 1.
    pub c24_0: Vec<Permutation>,
    /// Three 2-cycles.
    pub c222: Vec<Permutation>,
}

/// Cycle classes of `L(6,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleClass {
    C6,
    C33,
    C24Zero,
    C24Other,
    C222,
}

pub fn cycle_class(p: &Permutation) -> Option<CycleClass> {
    if p.degree() != 6 {
        return None;
    }
    match p.cycle_type().lengths() {
        [6] => Some(CycleClass::C6),
        [3, 3] => Some(CycleClass::C33),
        [2, 4] => Some(if p.cycle_of(1).len() == 2 {
            CycleClass::C24Zero
        } else {
            CycleClass::C24Other
        }),
        [2, 2, 2] => Some(CycleClass::C222),
        _ => None,
    }
}

pub fn classify_l61(ms: &MatchingSet) -> Result<CycleClassification, MatchingError> {
    if ms.spec().l_params() != LParams::new(1, 6).ok() {
        return Err(MatchingError::WrongGraph {
            expected: "L(6,1)",
            got: ms.spec().label(),
        });
    }
    let mut out = CycleClassification {
        c6: Vec::new(),
        c33: Vec::new(),
        c24: Vec::new(),
        c24_0: Vec::new(),
        c222: Vec::new(),
    };
    for p in ms {
        match cycle_class(p).expect("derangement of 6 points") {
            CycleClass::C6 => out.c6.push(p.clone()),
            CycleClass::C33 => out.c33.push(p.clone()),
            CycleClass::C24Zero => {
                out.c24.push(p.clone());
                out.c24_0.push(p.clone());
            }
            CycleClass::C24Other => out.c24.push(p.clone()),
            CycleClass::C222 => out.c222.push(p.clone()),
        }
    }
    Ok(out)
}

/// Block classes of `L(8,2)` matchings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockClass {
    /// No invertible block; zero blocks form a product of two block transpositions.
    S0Involution,
    /// No invertible block; zero blocks form a block 4-cycle.
    S0Cycle,
    S1,
    S2,
    S4,
}

impl BlockClass {
    pub fn invertible_count(self) -> usize {
        match self {
            BlockClass::S0Involution | BlockClass::S0Cycle => 0,
            BlockClass::S1 => 1,
            BlockClass::S2 => 2,
            BlockClass::S4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockClass::S0Involution => "S0^1",
            BlockClass::S0Cycle => "S0-S0^1",
            BlockClass::S1 => "S1",
            BlockClass::S2 => "S2",
            BlockClass::S4 => "S4",
        }
    }
}

/// For an `S0` matching of `L(8,2)`: the block permutation sending each block
/// row to the off-diagonal block column where it is zero.
pub fn zero_pattern(bm: &BlockMatrix) -> Option<Permutation> {
    let mut images = [0usize; 4];
    for (i, image) in images.iter_mut().enumerate() {
        let zeros: Vec<usize> = (1..=4)
            .filter(|&j| j != i + 1 && bm.block(i + 1, j).ones() == 0)
            .collect();
        if zeros.len() != 1 {
            return None;
        }
        *image = zeros[0];
    }
    Permutation::from_images(&images).ok()
}

/// Block class of a matching of `L(8,2)`; `None` for anything else,
/// including the impossible count of three invertible blocks.
pub fn block_class(p: &Permutation) -> Option<BlockClass> {
    if p.degree() != 8 {
        return None;
    }
    let bm = BlockMatrix::of_permutation(p);
    if (1..=4).any(|i| bm.block(i, i).ones() != 0) {
        return None;
    }
    match bm.invertible_blocks().len() {
        0 => {
            let z = zero_pattern(&bm)?;
            Some(if z.compose(&z).ok()?.is_identity() {
                BlockClass::S0Involution
            } else {
                BlockClass::S0Cycle
            })
        }
        1 => Some(BlockClass::S1),
        2 => Some(BlockClass::S2),
        4 => Some(BlockClass::S4),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct BlockClassification {
    pub s0: Vec<Permutation>,
    pub s1: Vec<Permutation>,
    pub s2: Vec<Permutation>,
    pub s4: Vec<Permutation>,
    /// Members of `s0` whose zero blocks pair up as two block transpositions.
    pub s0_1: Vec<Permutation>,
    /// Matchings with a count outside `{0, 1, 2, 4}`; always empty for `L(8,2)`.
    pub other: Vec<Permutation>,
}

pub fn classify_l82(ms: &MatchingSet) -> Result<BlockClassification, MatchingError> {
    if ms.spec().l_params() != LParams::new(2, 4).ok() {
        return Err(MatchingError::WrongGraph {
            expected: "L(8,2)",
            got: ms.spec().label(),
        });
    }
    let mut out = BlockClassification {
        s0: Vec::new(),
        s1: Vec::new(),
        s2: Vec::new(),
        s4: Vec::new(),
        s0_1: Vec::new(),
        other: Vec::new(),
    };
    for p in ms {
        match block_class(p) {
            Some(BlockClass::S0Involution) => {
                out.s0.push(p.clone());
                out.s0_1.push(p.clone());
            }
            Some(BlockClass::S0Cycle) => out.s0.push(p.clone()),
            Some(BlockClass::S1) => out.s1.push(p.clone()),
            Some(BlockClass::S2) => out.s2.push(p.clone()),
            Some(BlockClass::S4) => out.s4.push(p.clone()),
            None => out.other.push(p.clone()),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_matchings;
    use std::collections::HashSet;

    fn p(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(&GraphSpec::l(1, 6).unwrap()).unwrap().len(), 265);
        let l21 = enumerate(&GraphSpec::l(1, 2).unwrap()).unwrap();
        assert_eq!(l21.perms(), &[p("(1 2)", 2)]);
        assert_eq!(enumerate(&GraphSpec::l(2, 4).unwrap()).unwrap().len(), 4752);
        assert!(enumerate(&GraphSpec::l(1, 1).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn enumerate_size_limit() {
        assert_eq!(
            enumerate(&GraphSpec::l(1, 17).unwrap()).unwrap_err(),
            MatchingError::TooLarge(17)
        );
    }

    #[test]
    fn enumeration_is_sorted_complete_and_valid() {
        for r in 1..=3 {
            for m in 1..=9 / r {
                let spec = GraphSpec::l(r, m).unwrap();
                let ms = enumerate(&spec).unwrap();
                assert!(ms.perms().windows(2).all(|w| w[0] < w[1]));
                assert!(ms.iter().all(|q| spec.is_matching(q).unwrap()));
                let expected: i64 = count_matchings(&spec.l_params().unwrap());
                assert_eq!(ms.len() as i64, expected);
                for (i, q) in ms.iter().enumerate() {
                    assert_eq!(ms.index_of(q), Some(i));
                }
            }
        }
    }

    #[test]
    fn l61_classes() {
        let ms = enumerate(&GraphSpec::l(1, 6).unwrap()).unwrap();
        let c = classify_l61(&ms).unwrap();
        assert_eq!(
            (
                c.c6.len(),
                c.c33.len(),
                c.c24.len(),
                c.c24_0.len(),
                c.c222.len()
            ),
            (120, 40, 90, 30, 15)
        );
        assert!(c.c24_0.contains(&p("(1 2)(3 4 5 6)", 6)));
        assert!(c.c33.contains(&p("(1 2 3)(4 6 5)", 6)));
        let all: HashSet<_> =
            c.c6.iter()
                .chain(&c.c33)
                .chain(&c.c24)
                .chain(&c.c222)
                .collect();
        assert_eq!(all.len(), 265);
    }

    #[test]
    fn c33_splits_into_inverse_pairs() {
        let ms = enumerate(&GraphSpec::l(1, 6).unwrap()).unwrap();
        let c33 = classify_l61(&ms).unwrap().c33;
        let set: HashSet<_> = c33.iter().cloned().collect();
        assert!(c33
            .iter()
            .all(|q| set.contains(&q.inverse()) && q.inverse() != *q));
        let pairs: HashSet<_> = c33
            .iter()
            .map(|q| std::cmp::min(q.clone(), q.inverse()))
            .collect();
        assert_eq!(pairs.len(), 20);
    }

    #[test]
    fn l82_classes() {
        let ms = enumerate(&GraphSpec::l(2, 4).unwrap()).unwrap();
        let c = classify_l82(&ms).unwrap();
        assert_eq!(
            (c.s0.len(), c.s1.len(), c.s2.len(), c.s4.len()),
            (2304, 1536, 768, 144)
        );
        assert_eq!(c.s0_1.len(), 768);
        assert!(c.other.is_empty());
        for q in &ms {
            let k = BlockMatrix::of_permutation(q).invertible_blocks().len();
            assert!([0, 1, 2, 4].contains(&k));
        }
    }

    #[test]
    fn wrong_graph_rejected() {
        let ms = enumerate(&GraphSpec::l(1, 5).unwrap()).unwrap();
        assert!(matches!(
            classify_l61(&ms),
            Err(MatchingError::WrongGraph { .. })
        ));
        assert!(matches!(
            classify_l82(&ms),
            Err(MatchingError::WrongGraph { .. })
        ));
    }
}
