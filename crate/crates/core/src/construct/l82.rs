//! The block construction of a perfect partition of `L(8,2)`.
//!
//! Read the 8x8 adjacency as a 4x4 grid of 2x2 blocks. A matching has 0, 1,
//! 2 or 4 invertible blocks (classes S0, S1, S2, S4); an S0 matching has one
//! zero off-diagonal block per block row, and those zeros form either a
//! product of two block transpositions (S0¹) or a block 4-cycle.
//!
//! * Type I parts: two S0¹ matchings `P`, `Q` (blockwise complements) and
//!   four S1 matchings decomposing the rest (384 parts).
//! * Type II parts: four S0 4-cycle matchings and two S2 matchings (384).
//! * Type III parts: six S4 matchings (24).
//!
//! Internally a matching is a 0-based image array; its edge set is a `u64`
//! with bit `8 * row + col`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::graph::{GraphSpec, LParams};
use crate::matchings::{block_class, enumerate, BlockClass, MatchingError};
use crate::perm::Permutation;
use crate::search::{ColumnRule, ExactCover};
use crate::verify::PartitionCertificate;

type Raw = [u8; 8];

#[derive(Debug, Error)]
pub enum L82Error {
    #[error(
        "free block P_1j = {0} is not in the first block row; the complement choice covers it"
    )]
    NotCanonical(EBlock),
    #[error("no S0¹ matching with pattern {pattern} has free blocks {free:?}")]
    NoSuchMatching {
        pattern: ZeroPattern,
        free: [EBlock; 4],
    },
    #[error(
        "type I residual for pattern {pattern}: {found} decompositions satisfy the seeding rule"
    )]
    Seeding { pattern: ZeroPattern, found: usize },
    #[error("{0} and {1} are not a complementary pair of S0¹ matchings")]
    NotAPair(Permutation, Permutation),
    #[error("type II residual has no decomposition into two S2 matchings")]
    Type2Residual,
    #[error("no exact cover of S2 by type II residual decompositions")]
    Type2Cover,
    #[error("audit failed: {0}")]
    Audit(String),
    #[error(transparent)]
    Matchings(#[from] MatchingError),
}

/// A single-one 2x2 block `E_ab`, stored 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EBlock {
    row: u8,
    col: u8,
}

impl EBlock {
    pub const ALL: [EBlock; 4] = [
        EBlock { row: 0, col: 0 },
        EBlock { row: 0, col: 1 },
        EBlock { row: 1, col: 0 },
        EBlock { row: 1, col: 1 },
    ];

    /// `E_ab` with 1-based `a, b`.
    pub fn new(a: usize, b: usize) -> Option<EBlock> {
        ((1..=2).contains(&a) && (1..=2).contains(&b)).then(|| EBlock {
            row: (a - 1) as u8,
            col: (b - 1) as u8,
        })
    }

    /// 1-based row within the block.
    pub fn row(self) -> usize {
        self.row as usize + 1
    }

    pub fn col(self) -> usize {
        self.col as usize + 1
    }

    pub fn complement(self) -> EBlock {
        EBlock {
            row: 1 - self.row,
            col: 1 - self.col,
        }
    }

    pub fn flip_rows(self) -> EBlock {
        EBlock {
            row: 1 - self.row,
            col: self.col,
        }
    }

    pub fn flip_cols(self) -> EBlock {
        EBlock {
            row: self.row,
            col: 1 - self.col,
        }
    }
}

impl fmt::Display for EBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}{}", self.row(), self.col())
    }
}

impl fmt::Debug for EBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The zero blocks of an S0¹ matching: `(1 i)(j k)` with `j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZeroPattern {
    i: u8,
}

impl ZeroPattern {
    pub fn all() -> [ZeroPattern; 3] {
        [1, 2, 3].map(|i| ZeroPattern { i })
    }

    /// 1-based `(i, j, k)`.
    pub fn roles(self) -> (usize, usize, usize) {
        let (i, j, k) = self.raw_roles();
        (i + 1, j + 1, k + 1)
    }

    fn raw_roles(self) -> (usize, usize, usize) {
        let i = self.i as usize;
        let mut rest = (1..4).filter(|&v| v != i);
        (i, rest.next().unwrap(), rest.next().unwrap())
    }

    /// Block-level zero map: `1 <-> i`, `j <-> k` (0-based).
    fn zeros(self) -> [u8; 4] {
        let (i, j, k) = self.raw_roles();
        let mut z = [0u8; 4];
        z[0] = i as u8;
        z[i] = 0;
        z[j] = k as u8;
        z[k] = j as u8;
        z
    }
}

impl fmt::Display for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j, k) = self.roles();
        write!(f, "(1,{i})({j},{k})")
    }
}

fn mask(p: &Raw) -> u64 {
    p.iter()
        .enumerate()
        .fold(0, |m, (r, &c)| m | 1 << (8 * r + c as usize))
}

fn from_mask(m: u64) -> Option<Raw> {
    if m.count_ones() != 8 {
        return None;
    }
    let mut p = [0u8; 8];
    for (r, image) in p.iter_mut().enumerate() {
        let row = (m >> (8 * r)) & 0xff;
        if row.count_ones() != 1 {
            return None;
        }
        *image = row.trailing_zeros() as u8;
    }
    Some(p)
}

/// Blockwise complement: `E_ab -> E_(3-a)(3-b)` in every block.
fn complement(p: &Raw) -> Raw {
    let mut q = [0u8; 8];
    for r in 0..8 {
        q[r ^ 1] = p[r] ^ 1;
    }
    q
}

/// Swap rows `2t-1, 2t` in every block row.
fn flip_rows(p: &Raw) -> Raw {
    let mut q = [0u8; 8];
    for r in 0..8 {
        q[r ^ 1] = p[r];
    }
    q
}

fn flip_cols(p: &Raw) -> Raw {
    p.map(|c| c ^ 1)
}

/// Swap the two rows of each listed block row (0-based).
fn flip_block_rows(p: &Raw, rows: &[usize]) -> Raw {
    let mut q = *p;
    for &t in rows {
        q.swap(2 * t, 2 * t + 1);
    }
    q
}

/// The single one of block `(bi, bj)`, if the block has exactly one.
fn single(p: &Raw, bi: usize, bj: usize) -> Option<EBlock> {
    let hits: Vec<usize> = (2 * bi..2 * bi + 2)
        .filter(|&r| p[r] as usize / 2 == bj)
        .collect();
    match hits[..] {
        [r] => Some(EBlock {
            row: (r % 2) as u8,
            col: p[r] % 2,
        }),
        _ => None,
    }
}

fn invertible_positions(p: &Raw) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for bi in 0..4 {
        for bj in 0..4 {
            if (2 * bi..2 * bi + 2).all(|r| p[r] as usize / 2 == bj) {
                out.push((bi, bj));
            }
        }
    }
    out
}

/// Block zero map of an S0 matching (0-based).
fn zero_map(p: &Raw) -> [u8; 4] {
    let mut z = [0u8; 4];
    for (bi, zi) in z.iter_mut().enumerate() {
        let used: Vec<usize> = (2 * bi..2 * bi + 2).map(|r| p[r] as usize / 2).collect();
        *zi = (0..4).find(|&bj| bj != bi && !used.contains(&bj)).unwrap() as u8;
    }
    z
}

fn to_perm(p: &Raw) -> Permutation {
    Permutation::from_raw(p.to_vec())
}

/// The matchings of `L(8,2)` indexed by class.
struct Context {
    class_of: HashMap<Raw, BlockClass>,
    s1_at: HashMap<(usize, usize), Vec<Raw>>,
    s1_by_mask: HashMap<u64, Raw>,
    s2: Vec<Raw>,
    s2_by_mask: HashMap<u64, usize>,
    s0_by_zeros: HashMap<[u8; 4], Vec<Raw>>,
    full: u64,
}

impl Context {
    fn new() -> Result<Self, L82Error> {
        let spec = l82();
        let ms = enumerate(&spec)?;
        let mut ctx = Context {
            class_of: HashMap::new(),
            s1_at: HashMap::new(),
            s1_by_mask: HashMap::new(),
            s2: Vec::new(),
            s2_by_mask: HashMap::new(),
            s0_by_zeros: HashMap::new(),
            full: mask_of_graph(&spec),
        };
        for perm in &ms {
            let p: Raw = perm.raw().try_into().expect("degree 8");
            let class = block_class(perm).expect("every L(8,2) matching has a block class");
            ctx.class_of.insert(p, class);
            match class {
                BlockClass::S0Involution | BlockClass::S0Cycle => {
                    ctx.s0_by_zeros.entry(zero_map(&p)).or_default().push(p);
                }
                BlockClass::S1 => {
                    ctx.s1_at
                        .entry(invertible_positions(&p)[0])
                        .or_default()
                        .push(p);
                    ctx.s1_by_mask.insert(mask(&p), p);
                }
                BlockClass::S2 => {
                    ctx.s2_by_mask.insert(mask(&p), ctx.s2.len());
                    ctx.s2.push(p);
                }
                BlockClass::S4 => {}
            }
        }
        Ok(ctx)
    }

    /// Unordered pairs of S2 matchings summing to `residual`, as S2 indices.
    fn s2_pairs(&self, residual: u64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, p) in self.s2.iter().enumerate() {
            let m = mask(p);
            if m & !residual != 0 {
                continue;
            }
            if let Some(&b) = self.s2_by_mask.get(&(residual ^ m)) {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Unordered pairs of matchings (any class) summing to `residual`.
    fn any_pairs(&self, residual: u64) -> Vec<(Raw, Raw)> {
        let mut out = Vec::new();
        for p in self.class_of.keys() {
            let m = mask(p);
            if m & !residual != 0 {
                continue;
            }
            if let Some(q) = from_mask(residual ^ m) {
                if self.class_of.contains_key(&q) && *p < q {
                    out.push((*p, q));
                }
            }
        }
        out.sort();
        out
    }
}

fn l82() -> GraphSpec {
    GraphSpec::L(LParams::new(2, 4).expect("L(8,2)"))
}

fn mask_of_graph(spec: &GraphSpec) -> u64 {
    let adj = spec.adjacency();
    let mut m = 0u64;
    for r in 0..8 {
        for c in 0..8 {
            if adj.get(r + 1, c + 1) {
                m |= 1 << (8 * r + c);
            }
        }
    }
    m
}

/// The four S1 matchings completing `P + Q`, with invertible blocks at
/// `(1,i)`, `(i,1)`, `(j,k)`, `(k,j)` in that order.
type S1Quad = [Raw; 4];

fn type1_decompositions(ctx: &Context, pattern: ZeroPattern, p: &Raw, q: &Raw) -> Vec<S1Quad> {
    let (i, j, k) = pattern.raw_roles();
    let residual = ctx.full & !mask(p) & !mask(q);
    let fits = |pos: (usize, usize)| -> Vec<Raw> {
        ctx.s1_at[&pos]
            .iter()
            .copied()
            .filter(|s| mask(s) & !residual == 0)
            .collect()
    };
    let (ss, ts, vs) = (fits((0, i)), fits((i, 0)), fits((k, j)));
    let mut out = Vec::new();
    for s in &ss {
        for t in &ts {
            if mask(s) & mask(t) != 0 {
                continue;
            }
            for v in &vs {
                let used = mask(s) | mask(t) | mask(v);
                if used.count_ones() != 24 {
                    continue;
                }
                if let Some(u) = ctx.s1_by_mask.get(&(residual & !used)) {
                    if invertible_positions(u) == [(j, k)] {
                        out.push([*s, *t, *u, *v]);
                    }
                }
            }
        }
    }
    out
}

/// `T_1j` shares its row-in-block with `P_ki`, and `V_j1`'s row-in-block is
/// the column-in-block of `P_j1`.
fn seeding_rule(pattern: ZeroPattern, p: &Raw, quad: &S1Quad) -> bool {
    let (i, j, k) = pattern.raw_roles();
    let [_, t, _, v] = quad;
    let (Some(t1j), Some(vj1)) = (single(t, 0, j), single(v, j, 0)) else {
        return false;
    };
    let pki = single(p, k, i).expect("S0 block");
    let pj1 = single(p, j, 0).expect("S0 block");
    t1j.row == pki.row && vj1.row == pj1.col
}

/// The seeding as literally stated: `T_1j` in the same row as `P_1k`, and
/// `V_j1` in the same row as `P_ji`.
fn literal_seeding_rule(pattern: ZeroPattern, p: &Raw, quad: &S1Quad) -> bool {
    let (i, j, k) = pattern.raw_roles();
    let [_, t, _, v] = quad;
    let (Some(t1j), Some(vj1)) = (single(t, 0, j), single(v, j, 0)) else {
        return false;
    };
    t1j.row == single(p, 0, k).expect("S0 block").row
        && vj1.row == single(p, j, i).expect("S0 block").row
}

/// S0¹ matchings of a pattern keyed by their blocks at `(1,j)`, `(i,k)`,
/// `(j,1)`, `(k,i)`.
fn s0_involutions_by_free(ctx: &Context, pattern: ZeroPattern) -> HashMap<[EBlock; 4], Raw> {
    let (i, j, k) = pattern.raw_roles();
    ctx.s0_by_zeros[&pattern.zeros()]
        .iter()
        .map(|p| {
            let key =
                [(0, j), (i, k), (j, 0), (k, i)].map(|(a, b)| single(p, a, b).expect("S0 block"));
            (key, *p)
        })
        .collect()
}

/// One type I part: `[P, Q, S, T, U, V]`.
pub struct Type1Builder {
    ctx: Context,
    by_free: HashMap<ZeroPattern, HashMap<[EBlock; 4], Raw>>,
}

impl Type1Builder {
    fn new(ctx: Context) -> Self {
        let by_free = ZeroPattern::all()
            .into_iter()
            .map(|z| (z, s0_involutions_by_free(&ctx, z)))
            .collect();
        Type1Builder { ctx, by_free }
    }

    /// Indexes the matchings of `L(8,2)`.
    pub fn load() -> Result<Self, L82Error> {
        Ok(Type1Builder::new(Context::new()?))
    }

    /// The part containing the complementary pair `{a, b}`, rebuilt from
    /// whichever member has its `(1,j)` one in the first row.
    pub fn rebuild(&self, a: &Permutation, b: &Permutation) -> Result<[Permutation; 6], L82Error> {
        let bad = || L82Error::NotAPair(a.clone(), b.clone());
        let raw = |x: &Permutation| <Raw>::try_from(x.raw()).map_err(|_| bad());
        let (ra, rb) = (raw(a)?, raw(b)?);
        if complement(&ra) != rb || self.ctx.class_of.get(&ra) != Some(&BlockClass::S0Involution) {
            return Err(bad());
        }
        let pattern = ZeroPattern::all()
            .into_iter()
            .find(|z| z.zeros() == zero_map(&ra))
            .ok_or_else(bad)?;
        let (i, j, k) = pattern.raw_roles();
        let p = if single(&ra, 0, j).ok_or_else(bad)?.row == 0 {
            ra
        } else {
            rb
        };
        let free =
            [(0, j), (i, k), (j, 0), (k, i)].map(|(x, y)| single(&p, x, y).expect("S0 block"));
        self.part(pattern, free)
    }

    /// The part determined by the free blocks `P_1j, P_ik, P_j1, P_ki`;
    /// `P_1j` must lie in the first row of its block.
    pub fn part(
        &self,
        pattern: ZeroPattern,
        free: [EBlock; 4],
    ) -> Result<[Permutation; 6], L82Error> {
        if free[0].row != 0 {
            return Err(L82Error::NotCanonical(free[0]));
        }
        let p = *self.by_free[&pattern]
            .get(&free)
            .ok_or(L82Error::NoSuchMatching { pattern, free })?;
        let q = complement(&p);
        let chosen: Vec<S1Quad> = type1_decompositions(&self.ctx, pattern, &p, &q)
            .into_iter()
            .filter(|quad| seeding_rule(pattern, &p, quad))
            .collect();
        let [quad] = chosen[..] else {
            return Err(L82Error::Seeding {
                pattern,
                found: chosen.len(),
            });
        };
        let [s, t, u, v] = quad;
        Ok([p, q, s, t, u, v].map(|x| to_perm(&x)))
    }
}

fn canonical_free_choices() -> impl Iterator<Item = [EBlock; 4]> {
    let first = [EBlock::ALL[0], EBlock::ALL[1]];
    first.into_iter().flat_map(|a| {
        EBlock::ALL.into_iter().flat_map(move |b| {
            EBlock::ALL
                .into_iter()
                .flat_map(move |c| EBlock::ALL.into_iter().map(move |d| [a, b, c, d]))
        })
    })
}

fn build_type1_with(builder: &Type1Builder) -> Result<Vec<Vec<Permutation>>, L82Error> {
    let mut out = Vec::with_capacity(384);
    for pattern in ZeroPattern::all() {
        for free in canonical_free_choices() {
            out.push(builder.part(pattern, free)?.to_vec());
        }
    }
    Ok(out)
}

/// The 384 type I parts.
pub fn build_type1() -> Result<Vec<Vec<Permutation>>, L82Error> {
    build_type1_with(&Type1Builder::new(Context::new()?))
}

/// How often each S1 matching is used when the literal seeding picks the
/// decomposition (taking the first match when several qualify).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedingAudit {
    pub parts: usize,
    /// Parts where the rule selected no decomposition or several.
    pub ambiguous: usize,
    /// S1 matchings by number of parts using them (0, 1, 2, ...).
    pub s1_usage: BTreeMap<usize, usize>,
}

/// Replays type I with the literally stated seeding rule.
pub fn literal_type1_seeding() -> Result<SeedingAudit, L82Error> {
    let builder = Type1Builder::new(Context::new()?);
    let ctx = &builder.ctx;
    let mut used: HashMap<Raw, usize> = ctx.s1_by_mask.values().map(|p| (*p, 0)).collect();
    let (mut parts, mut ambiguous) = (0, 0);
    for pattern in ZeroPattern::all() {
        for free in canonical_free_choices() {
            let p = builder.by_free[&pattern][&free];
            let chosen: Vec<S1Quad> = type1_decompositions(ctx, pattern, &p, &complement(&p))
                .into_iter()
                .filter(|quad| literal_seeding_rule(pattern, &p, quad))
                .collect();
            parts += 1;
            if chosen.len() != 1 {
                ambiguous += 1;
            }
            if let Some(quad) = chosen.first() {
                for s in quad {
                    *used.get_mut(s).expect("S1 member") += 1;
                }
            }
        }
    }
    let mut s1_usage = BTreeMap::new();
    for n in used.values() {
        *s1_usage.entry(*n).or_insert(0) += 1;
    }
    Ok(SeedingAudit {
        parts,
        ambiguous,
        s1_usage,
    })
}

/// Block 4-cycles `(1 i j k)` up to inversion, 0-based.
const CYCLES: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2]];

fn cycle_zeros(c: [usize; 4]) -> [u8; 4] {
    let mut z = [0u8; 4];
    for t in 0..4 {
        z[c[t]] = c[(t + 1) % 4] as u8;
    }
    z
}

/// The eight S0 4-cycle matchings generated from one chord choice:
/// `A1..A4` (zeros on the cycle) and `A1'..A4'` (zeros on its inverse).
#[derive(Debug, Clone)]
pub struct Type2Family {
    /// Block cycle `(1 i j k)`, 1-based.
    pub cycle: [usize; 4],
    /// Shared blocks at `(1,j)`, `(j,1)`, `(k,i)`, `(i,k)`.
    pub chords: [EBlock; 4],
    a: [Raw; 4],
    a_prime: [Raw; 4],
}

impl Type2Family {
    fn new(a1: Raw, a1p: Raw, cycle: [usize; 4], chords: [EBlock; 4]) -> Self {
        let derive = |a1: Raw| {
            let a2 = complement(&a1);
            [a1, a2, flip_rows(&a2), flip_cols(&a2)]
        };
        Type2Family {
            cycle: cycle.map(|c| c + 1),
            chords,
            a: derive(a1),
            a_prime: derive(a1p),
        }
    }

    pub fn a(&self) -> [Permutation; 4] {
        self.a.map(|x| to_perm(&x))
    }

    pub fn a_prime(&self) -> [Permutation; 4] {
        self.a_prime.map(|x| to_perm(&x))
    }

    /// `{A1, A2, A3', A4'}` and `{A1', A2', A3, A4}`.
    fn halves(&self) -> [[Raw; 4]; 2] {
        let (a, b) = (self.a, self.a_prime);
        [[a[0], a[1], b[2], b[3]], [b[0], b[1], a[2], a[3]]]
    }
}

/// Families for every chord choice on every cycle (3 x 256).
fn all_families(ctx: &Context) -> Vec<Type2Family> {
    let mut out = Vec::new();
    for c in CYCLES {
        let [_, i, j, k] = c;
        let inverse = [0, k, j, i];
        let key = |p: &Raw| {
            [(0, j), (j, 0), (k, i), (i, k)].map(|(a, b)| single(p, a, b).expect("S0 block"))
        };
        let primes: HashMap<[EBlock; 4], Raw> = ctx.s0_by_zeros[&cycle_zeros(inverse)]
            .iter()
            .map(|p| (key(p), *p))
            .collect();
        let mut firsts: Vec<&Raw> = ctx.s0_by_zeros[&cycle_zeros(c)].iter().collect();
        firsts.sort();
        for a1 in firsts {
            let chords = key(a1);
            out.push(Type2Family::new(*a1, primes[&chords], c, chords));
        }
    }
    out
}

/// One family per orbit of the row/column flips: chord `(1,j)` is `E11`.
fn representative_families(ctx: &Context) -> Vec<Type2Family> {
    all_families(ctx)
        .into_iter()
        .filter(|f| f.chords[0] == EBlock::ALL[0])
        .collect()
}

/// Counts from generating type II halves over every chord choice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type2Generation {
    pub raw_halves: usize,
    pub distinct_halves: usize,
    /// S2+S2 decompositions per half, by number of decompositions.
    pub decompositions: BTreeMap<usize, usize>,
    /// Class pairs of the decompositions of `L - (A1 + A2 + A3 + A4)`.
    pub literal_residual: Vec<(BlockClass, BlockClass)>,
}

/// Audits the type II generation step, including the all-unprimed family.
pub fn type2_generation() -> Result<Type2Generation, L82Error> {
    let ctx = Context::new()?;
    let families = all_families(&ctx);
    let mut distinct = HashSet::new();
    let mut decompositions = BTreeMap::new();
    for f in &families {
        for mut half in f.halves() {
            half.sort();
            if distinct.insert(half) {
                let residual = ctx.full & !half.iter().fold(0, |m, a| m | mask(a));
                *decompositions
                    .entry(ctx.s2_pairs(residual).len())
                    .or_insert(0) += 1;
            }
        }
    }
    let f = &families[0];
    let residual = ctx.full & !f.a.iter().fold(0, |m, a| m | mask(a));
    let literal_residual = ctx
        .any_pairs(residual)
        .iter()
        .map(|(p, q)| (ctx.class_of[p], ctx.class_of[q]))
        .collect();
    Ok(Type2Generation {
        raw_halves: 2 * families.len(),
        distinct_halves: distinct.len(),
        decompositions,
        literal_residual,
    })
}

fn build_type2_with(ctx: &Context) -> Result<Vec<Vec<Permutation>>, L82Error> {
    let halves: Vec<[Raw; 4]> = representative_families(ctx)
        .iter()
        .flat_map(Type2Family::halves)
        .collect();
    // Columns: one per half, then one per S2 matching.
    let mut ec = ExactCover::new(halves.len() + ctx.s2.len());
    let mut options = Vec::new();
    for (h, half) in halves.iter().enumerate() {
        let residual = ctx.full & !half.iter().fold(0, |m, a| m | mask(a));
        let pairs = ctx.s2_pairs(residual);
        if pairs.is_empty() {
            return Err(L82Error::Type2Residual);
        }
        for (a, b) in pairs {
            ec.add_row(&[h, halves.len() + a, halves.len() + b]);
            options.push((h, a, b));
        }
    }
    let mut solution = None;
    ec.solve(ColumnRule::MinSize, None, |rows| {
        solution = Some(rows.to_vec());
        ControlFlow::Break(())
    });
    let rows = solution.ok_or(L82Error::Type2Cover)?;
    let mut parts: Vec<Vec<Permutation>> = rows
        .iter()
        .map(|&r| {
            let (h, a, b) = options[r];
            let mut part: Vec<Permutation> = halves[h].iter().map(to_perm).collect();
            part.push(to_perm(&ctx.s2[a]));
            part.push(to_perm(&ctx.s2[b]));
            part
        })
        .collect();
    parts.sort();
    Ok(parts)
}

/// The 384 type II parts.
pub fn build_type2() -> Result<Vec<Vec<Permutation>>, L82Error> {
    build_type2_with(&Context::new()?)
}

/// Block-level 1-factorizations of the 4x4 zero-diagonal pattern.
pub const L41_PARTITION: [[&str; 3]; 3] = [
    ["(1 2)(3 4)", "(1 3 2 4)", "(1 4 2 3)"],
    ["(1 3)(2 4)", "(1 2 3 4)", "(1 4 3 2)"],
    ["(1 4)(2 3)", "(1 2 4 3)", "(1 3 4 2)"],
];

/// Identity plus the seven row-swap sets; each flips the `I2`/`R2` choice
/// in the listed block rows.
const ROW_FLIPS: [&[usize]; 8] = [&[], &[0], &[1], &[2], &[3], &[0, 1], &[0, 2], &[0, 3]];

/// `pi` expanded with the same invertible block everywhere.
fn expand(pi: &Permutation, reversed: bool) -> Raw {
    let mut p = [0u8; 8];
    for (r, image) in p.iter_mut().enumerate() {
        let b = (r % 2) as u8 ^ u8::from(reversed);
        *image = 2 * (pi.apply(r / 2 + 1) as u8 - 1) + b;
    }
    p
}

/// The 24 type III parts.
pub fn build_type3() -> Vec<Vec<Permutation>> {
    let mut out = Vec::with_capacity(24);
    for triple in L41_PARTITION {
        let base: Vec<Raw> = triple
            .iter()
            .map(|t| Permutation::parse_cycles(t, 4).expect("block matching"))
            .flat_map(|pi| [expand(&pi, false), expand(&pi, true)])
            .collect();
        for flips in ROW_FLIPS {
            out.push(
                base.iter()
                    .map(|p| to_perm(&flip_block_rows(p, flips)))
                    .collect(),
            );
        }
    }
    out
}

/// Matchings used per block class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassUsage {
    pub counts: BTreeMap<BlockClass, usize>,
}

impl ClassUsage {
    fn of(parts: &[Vec<Permutation>]) -> Self {
        let mut counts = BTreeMap::new();
        for p in parts.iter().flatten() {
            *counts
                .entry(block_class(p).expect("L(8,2) matching"))
                .or_insert(0) += 1;
        }
        ClassUsage { counts }
    }

    pub fn get(&self, class: BlockClass) -> usize {
        self.counts.get(&class).copied().unwrap_or(0)
    }
}

impl fmt::Display for ClassUsage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .counts
            .iter()
            .map(|(c, n)| format!("{} {n}", c.name()))
            .collect();
        write!(f, "{}", items.join(", "))
    }
}

/// Class sizes of `L(8,2)`.
pub const CLASS_SIZES: [(BlockClass, usize); 5] = [
    (BlockClass::S0Involution, 768),
    (BlockClass::S0Cycle, 1536),
    (BlockClass::S1, 1536),
    (BlockClass::S2, 768),
    (BlockClass::S4, 144),
];

#[derive(Debug, Clone)]
pub struct L82Construction {
    pub type1: Vec<Vec<Permutation>>,
    pub type2: Vec<Vec<Permutation>>,
    pub type3: Vec<Vec<Permutation>>,
}

impl L82Construction {
    pub fn parts(&self) -> Vec<Vec<Permutation>> {
        [&self.type1, &self.type2, &self.type3]
            .into_iter()
            .flatten()
            .cloned()
            .collect()
    }

    pub fn certificate(&self) -> PartitionCertificate {
        PartitionCertificate::new(l82(), self.parts(), true)
    }

    pub fn usage(&self) -> [ClassUsage; 3] {
        [&self.type1, &self.type2, &self.type3].map(|t| ClassUsage::of(t))
    }

    /// Per-type part counts and class usage, one line each.
    pub fn audit(&self) -> String {
        let [u1, u2, u3] = self.usage();
        let total = ClassUsage::of(&self.parts());
        format!(
            "type I: {} parts ({u1})\ntype II: {} parts ({u2})\ntype III: {} parts ({u3})\ntotal: {} parts ({total})\n",
            self.type1.len(),
            self.type2.len(),
            self.type3.len(),
            self.type1.len() + self.type2.len() + self.type3.len(),
        )
    }

    /// Every matching used once and each class used in full.
    pub fn check_usage(&self) -> Result<(), L82Error> {
        let parts = self.parts();
        let distinct: HashSet<_> = parts.iter().flatten().collect();
        let total: usize = parts.iter().map(Vec::len).sum();
        if distinct.len() != total {
            return Err(L82Error::Audit(format!(
                "{} matchings repeated",
                total - distinct.len()
            )));
        }
        let usage = ClassUsage::of(&parts);
        for (class, size) in CLASS_SIZES {
            if usage.get(class) != size {
                return Err(L82Error::Audit(format!(
                    "{} used {} times, class has {size}",
                    class.name(),
                    usage.get(class)
                )));
            }
        }
        Ok(())
    }
}

/// Builds all 792 parts and checks class usage.
pub fn build_l82() -> Result<L82Construction, L82Error> {
    let builder = Type1Builder::new(Context::new()?);
    let type1 = build_type1_with(&builder)?;
    let type2 = build_type2_with(&builder.ctx)?;
    let c = L82Construction {
        type1,
        type2,
        type3: build_type3(),
    };
    c.check_usage()?;
    Ok(c)
}
