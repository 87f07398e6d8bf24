//! The zone construction of a perfect partition of `L(6,1)`.
//!
//! The 265 derangements of 6 points split by cycle type into C6 (120),
//! C33 (40), C24 (90, of which 30 have `1` in the 2-cycle: C24⁰) and C222
//! (15). The partition has four kinds of parts:
//!
//! * T1: one C24⁰ element with four C6 elements (30 parts);
//! * T2: a C33 pair with three C24 elements, taken from four of five zones
//!   (16 parts);
//! * T3: one C222 element containing `(1 y0)` with four C24 elements from the
//!   withheld zone `y0` (3 parts);
//! * T4: a class-`y0` C33 pair with three C222 elements (4 parts).
//!
//! A C33 element written `(1 x y)(a b c)` with `a < b < c` has class `y`; its
//! pattern `(1 x y)(w v u)` selects the three C24 elements
//! `(1 w x v)(y u)`, `(1 v x u)(y w)`, `(1 u x w)(y v)`.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::graph::GraphSpec;
use crate::perm::{PermError, Permutation};
use crate::verify::{check_factorization, PartitionCertificate};

const N: usize = 6;

#[derive(Debug, Error)]
pub enum L61Error {
    #[error("{perm} is not in {class}")]
    WrongClass {
        perm: Permutation,
        class: &'static str,
    },
    #[error("bad pattern: {0}")]
    BadPattern(String),
    #[error("seed {seed} does not match pattern {pattern}")]
    SeedMismatch { seed: Permutation, pattern: Pattern },
    #[error("withheld zone must be in 2..=6, got {0}")]
    BadZone(usize),
    #[error("zone propagation failed: {0}")]
    Propagation(String),
    #[error("the withheld zone's C24 elements admit no T3 assembly")]
    T3Infeasible,
    #[error(transparent)]
    Perm(#[from] PermError),
}

fn perm(cycles: &[&[usize]]) -> Permutation {
    Permutation::from_cycles(N, cycles).expect("valid cycles on 6 points")
}

fn is_c24_zero(p: &Permutation) -> bool {
    p.degree() == N && p.cycle_type().lengths() == [2, 4] && p.apply(p.apply(1)) == 1
}

/// `(x, y, [a, b, c])` for `p = (1 x y)(a b c)`, `a` the least of the second cycle.
fn c33_parts(p: &Permutation) -> Option<(usize, usize, [usize; 3])> {
    if p.degree() != N || p.cycle_type().lengths() != [3, 3] {
        return None;
    }
    let form = p.to_cycles();
    let (first, second) = (&form.cycles()[0], &form.cycles()[1]);
    Some((first[1], first[2], [second[0], second[1], second[2]]))
}

/// Class label of a C33 element, in `2..=6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassLabel(usize);

impl ClassLabel {
    pub fn new(y: usize) -> Option<Self> {
        (2..=N).contains(&y).then_some(ClassLabel(y))
    }

    pub fn value(self) -> usize {
        self.0
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn class_of(p: &Permutation) -> Result<ClassLabel, L61Error> {
    let (x, y, [_, b, c]) = c33_parts(p).ok_or_else(|| L61Error::WrongClass {
        perm: p.clone(),
        class: "C33",
    })?;
    Ok(ClassLabel(if b < c { y } else { x }))
}

/// Whichever of `p`, `p⁻¹` reads `(1 x y)(a b c)` with `a < b < c`.
pub fn canonical_rep(p: &Permutation) -> Result<Permutation, L61Error> {
    let (_, _, [_, b, c]) = c33_parts(p).ok_or_else(|| L61Error::WrongClass {
        perm: p.clone(),
        class: "C33",
    })?;
    Ok(if b < c { p.clone() } else { p.inverse() })
}

/// `(1 x y)(w v u)`; the word is stored rotated to start at its least letter,
/// which leaves the associated elements unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pattern {
    x: usize,
    y: usize,
    word: [usize; 3],
}

impl Pattern {
    pub fn new(x: usize, y: usize, word: [usize; 3]) -> Result<Self, L61Error> {
        let mut seen = [false; N + 1];
        for &v in [1, x, y].iter().chain(&word) {
            if !(1..=N).contains(&v) || seen[v] {
                return Err(L61Error::BadPattern(format!(
                    "(1 {x} {y})({} {} {}) must use each of 1..6 once",
                    word[0], word[1], word[2]
                )));
            }
            seen[v] = true;
        }
        let k = (0..3).min_by_key(|&i| word[i]).unwrap();
        let word = [word[k], word[(k + 1) % 3], word[(k + 2) % 3]];
        Ok(Pattern { x, y, word })
    }

    /// Parses `"(1 x y)(w v u)"`.
    pub fn parse(text: &str) -> Result<Self, L61Error> {
        let p = Permutation::parse_cycles(text, N)?;
        let (x, y, word) = c33_parts(&p).ok_or_else(|| L61Error::BadPattern(text.to_string()))?;
        Pattern::new(x, y, word)
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn y(&self) -> usize {
        self.y
    }

    pub fn word(&self) -> [usize; 3] {
        self.word
    }

    /// The class-`y` element `(1 x y)(a b c)` with `a < b < c` this pattern attaches to.
    pub fn seed(&self) -> Permutation {
        let mut rest = self.word;
        rest.sort_unstable();
        perm(&[&[1, self.x, self.y], &rest])
    }

    /// `(1 y x)(u v w)`, the pattern of the swapped element in zone `x`.
    pub fn inverse(&self) -> Pattern {
        let [w, v, u] = self.word;
        Pattern::new(self.y, self.x, [u, v, w]).expect("inverse of a valid pattern")
    }

    /// The three associated C24 elements, each with `y` in its 2-cycle.
    pub fn apply(&self) -> [Permutation; 3] {
        let (x, y) = (self.x, self.y);
        let [w, v, u] = self.word;
        [
            perm(&[&[1, w, x, v], &[y, u]]),
            perm(&[&[1, v, x, u], &[y, w]]),
            perm(&[&[1, u, x, w], &[y, v]]),
        ]
    }

    /// As triples `(p, q, k)` meaning `(1 p x q)(y k)`.
    fn associated_words(&self) -> [[usize; 3]; 3] {
        let [w, v, u] = self.word;
        [[w, v, u], [v, u, w], [u, w, v]]
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [w, v, u] = self.word;
        write!(f, "(1 {} {})({w} {v} {u})", self.x, self.y)
    }
}

/// `{σ, σ⁻¹}` plus the three elements its pattern selects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZoneSubset {
    pattern: Pattern,
    members: Vec<Permutation>,
}

impl ZoneSubset {
    fn new(pattern: Pattern) -> Self {
        let seed = pattern.seed();
        let mut members = vec![seed.clone(), seed.inverse()];
        members.extend(pattern.apply());
        ZoneSubset { pattern, members }
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    /// `σ, σ⁻¹`, then the three C24 elements.
    pub fn members(&self) -> &[Permutation] {
        &self.members
    }
}

/// The four class-`y` C33 pairs with their associated C24 elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zone {
    y: ClassLabel,
    subsets: Vec<ZoneSubset>,
}

impl Zone {
    pub fn y(&self) -> ClassLabel {
        self.y
    }

    /// Ordered by the middle letter `x`.
    pub fn subsets(&self) -> &[ZoneSubset] {
        &self.subsets
    }

    pub fn members(&self) -> impl Iterator<Item = &Permutation> {
        self.subsets.iter().flat_map(|s| s.members.iter())
    }

    pub fn c24_members(&self) -> impl Iterator<Item = &Permutation> {
        self.subsets.iter().flat_map(|s| s.members[2..].iter())
    }

    fn parts(&self) -> Vec<Vec<Permutation>> {
        self.subsets.iter().map(|s| s.members.clone()).collect()
    }
}

/// The zone of `seed` under `pattern`.
///
/// Each other class-`y` element `(1 v y)(...)` takes the pattern
/// `(1 v y)(x u k)`, where `(1 u x v)(y k)` is the seed's associated element
/// with `v` right after `x`.
pub fn propagate_zone(seed: &Permutation, pattern: &Pattern) -> Result<Zone, L61Error> {
    let rep = canonical_rep(seed)?;
    if rep != pattern.seed() {
        return Err(L61Error::SeedMismatch {
            seed: seed.clone(),
            pattern: *pattern,
        });
    }
    let (x, y) = (pattern.x, pattern.y);
    let mut subsets = vec![ZoneSubset::new(*pattern)];
    for v in (2..=N).filter(|&v| v != x && v != y) {
        let [u, _, k] = pattern
            .associated_words()
            .into_iter()
            .find(|w| w[1] == v)
            .expect("each letter follows x exactly once");
        subsets.push(ZoneSubset::new(Pattern::new(v, y, [x, u, k])?));
    }
    subsets.sort_by_key(|s| s.pattern.x);
    let zone = Zone {
        y: ClassLabel(y),
        subsets,
    };
    check_zone(&zone)?;
    Ok(zone)
}

fn check_zone(zone: &Zone) -> Result<(), L61Error> {
    let y = zone.y.0;
    let fail = |msg: String| Err(L61Error::Propagation(msg));
    let distinct: HashSet<_> = zone.members().collect();
    if distinct.len() != 20 {
        return fail(format!(
            "zone {y} has {} distinct members, expected 20",
            distinct.len()
        ));
    }
    for s in &zone.subsets {
        for p in &s.members[..2] {
            if class_of(p)?.0 != y {
                return fail(format!("{p} in zone {y} has class {}", class_of(p)?));
            }
        }
        for p in &s.members[2..] {
            if p.cycle_type().lengths() != [2, 4] || p.apply(p.apply(y)) != y {
                return fail(format!("{p} in zone {y} lacks a 2-cycle through {y}"));
            }
        }
        if let Err(v) = check_factorization(&l61(), &s.members) {
            return fail(format!("zone {y} subset {}: {v}", s.pattern));
        }
    }
    // Two elements sharing the 2-cycle (y k) have 4-cycles (1 p q r) whose
    // tails are rotations of one another but never the same word.
    let c24: Vec<_> = zone.c24_members().collect();
    for (i, a) in c24.iter().enumerate() {
        for b in &c24[i + 1..] {
            if a.apply(y) != b.apply(y) {
                continue;
            }
            let (ta, tb) = (tail(a), tail(b));
            let rotations = [tb, [tb[1], tb[2], tb[0]], [tb[2], tb[0], tb[1]]];
            if ta == tb || !rotations.contains(&ta) {
                return fail(format!("{a} and {b} break the rotation rule"));
            }
        }
    }
    Ok(())
}

/// `[p, q, r]` for the 4-cycle `(1 p q r)`.
fn tail(p: &Permutation) -> [usize; 3] {
    let c = p.cycle_of(1);
    [c[1], c[2], c[3]]
}

fn l61() -> GraphSpec {
    GraphSpec::l(1, N).expect("L(6,1)")
}

/// All five zones, ordered by class. Each subset of the seed zone with
/// middle `z` and pattern `β` seeds zone `z` with `β⁻¹`.
pub fn linked_zones(seed: &Permutation, pattern: &Pattern) -> Result<Vec<Zone>, L61Error> {
    let first = propagate_zone(seed, pattern)?;
    let mut zones = vec![first.clone()];
    for s in first.subsets() {
        let inv = s.pattern.inverse();
        zones.push(propagate_zone(&inv.seed(), &inv)?);
    }
    zones.sort_by_key(|z| z.y);
    let mut seen = HashSet::new();
    for z in &zones {
        for p in z.members() {
            if !seen.insert(p) {
                return Err(L61Error::Propagation(format!("{p} lies in two zones")));
            }
        }
    }
    Ok(zones)
}

/// The T1 part of a C24⁰ element `(1 x2)(x3 x4 x5 x6)`.
pub fn t1_subset(sigma: &Permutation) -> Result<Vec<Permutation>, L61Error> {
    if !is_c24_zero(sigma) {
        return Err(L61Error::WrongClass {
            perm: sigma.clone(),
            class: "C24 with 1 in the 2-cycle",
        });
    }
    let x2 = sigma.apply(1);
    let four = sigma.cycle_of((2..=N).find(|&v| v != x2).unwrap());
    let [x3, x4, x5, x6] = [four[0], four[1], four[2], four[3]];
    Ok(vec![
        sigma.clone(),
        perm(&[&[1, x3, x2, x5, x4, x6]]),
        perm(&[&[1, x4, x2, x6, x5, x3]]),
        perm(&[&[1, x5, x2, x3, x6, x4]]),
        perm(&[&[1, x6, x2, x4, x3, x5]]),
    ])
}

/// All C24⁰ elements, ordered by `x2` then by the 4-cycle.
pub fn c24_zero() -> Vec<Permutation> {
    let mut out = Vec::with_capacity(30);
    for x2 in 2..=N {
        let rest: Vec<usize> = (2..=N).filter(|&v| v != x2).collect();
        let (r0, others) = (rest[0], &rest[1..]);
        for (a, b, c) in [
            (0, 1, 2),
            (0, 2, 1),
            (1, 0, 2),
            (1, 2, 0),
            (2, 0, 1),
            (2, 1, 0),
        ] {
            out.push(perm(&[&[1, x2], &[r0, others[a], others[b], others[c]]]));
        }
    }
    out.sort();
    out
}

pub fn build_t1() -> Vec<Vec<Permutation>> {
    c24_zero()
        .iter()
        .map(|s| t1_subset(s).expect("C24⁰ element"))
        .collect()
}

/// `{σ, σ⁻¹, (1 a)(x b)(y0 c), (1 b)(x c)(y0 a), (1 c)(x a)(y0 b)}` per
/// subset of zone `y0` with pattern `(1 x y0)(a b c)`.
pub fn build_t4(zone: &Zone) -> Vec<Vec<Permutation>> {
    let y0 = zone.y.0;
    zone.subsets
        .iter()
        .map(|s| {
            let x = s.pattern.x;
            let [a, b, c] = s.pattern.word;
            vec![
                s.members[0].clone(),
                s.members[1].clone(),
                perm(&[&[1, a], &[x, b], &[y0, c]]),
                perm(&[&[1, b], &[x, c], &[y0, a]]),
                perm(&[&[1, c], &[x, a], &[y0, b]]),
            ]
        })
        .collect()
}

/// The three C222 elements containing `(1 y0)`.
fn c222_through(y0: usize) -> Vec<Permutation> {
    let rest: Vec<usize> = (2..=N).filter(|&v| v != y0).collect();
    let (a, others) = (rest[0], &rest[1..]);
    let mut out: Vec<_> = (0..3)
        .map(|i| {
            let b = others[i];
            let cd: Vec<usize> = others.iter().copied().filter(|&v| v != b).collect();
            perm(&[&[1, y0], &[a, b], &cd])
        })
        .collect();
    out.sort();
    out
}

/// Groups the withheld zone's twelve C24 elements into three sets of four,
/// each completing one `(1 y0)` C222 element to a 1-factorization. Returns
/// every such grouping.
pub fn t3_assemblies(zone: &Zone) -> Vec<Vec<Vec<Permutation>>> {
    let spec = l61();
    let mus = c222_through(zone.y.0);
    let c24: Vec<Permutation> = zone.c24_members().cloned().collect();
    let mut solutions = Vec::new();
    let mut acc = Vec::new();
    let mut used = vec![false; c24.len()];
    fn rec(
        spec: &GraphSpec,
        mus: &[Permutation],
        c24: &[Permutation],
        used: &mut [bool],
        acc: &mut Vec<Vec<Permutation>>,
        out: &mut Vec<Vec<Vec<Permutation>>>,
    ) {
        let Some((mu, rest)) = mus.split_first() else {
            out.push(acc.clone());
            return;
        };
        let free: Vec<usize> = (0..c24.len()).filter(|&i| !used[i]).collect();
        for a in 0..free.len() {
            for b in a + 1..free.len() {
                for c in b + 1..free.len() {
                    for d in c + 1..free.len() {
                        let pick = [free[a], free[b], free[c], free[d]];
                        let mut part = vec![mu.clone()];
                        part.extend(pick.iter().map(|&i| c24[i].clone()));
                        if check_factorization(spec, &part).is_err() {
                            continue;
                        }
                        pick.iter().for_each(|&i| used[i] = true);
                        acc.push(part);
                        rec(spec, rest, c24, used, acc, out);
                        acc.pop();
                        pick.iter().for_each(|&i| used[i] = false);
                    }
                }
            }
        }
    }
    rec(&spec, &mus, &c24, &mut used, &mut acc, &mut solutions);
    solutions
}

/// A built partition with its pieces kept apart for inspection.
#[derive(Debug, Clone)]
pub struct L61Construction {
    pub y0: usize,
    pub pattern: Pattern,
    pub zones: Vec<Zone>,
    pub t1: Vec<Vec<Permutation>>,
    pub t2: Vec<Vec<Permutation>>,
    pub t3: Vec<Vec<Permutation>>,
    pub t4: Vec<Vec<Permutation>>,
    /// Number of valid T3 groupings; the first is used.
    pub t3_assemblies: usize,
}

impl L61Construction {
    pub fn zone(&self, y: usize) -> Option<&Zone> {
        self.zones.iter().find(|z| z.y.0 == y)
    }

    pub fn parts(&self) -> Vec<Vec<Permutation>> {
        [&self.t1, &self.t2, &self.t3, &self.t4]
            .into_iter()
            .flatten()
            .cloned()
            .collect()
    }

    pub fn certificate(&self) -> PartitionCertificate {
        PartitionCertificate::new(l61(), self.parts(), true)
    }
}

pub const DEFAULT_Y0: usize = 5;
pub const DEFAULT_SEED: &str = "(1 3 2)(4 5 6)";
pub const DEFAULT_PATTERN: &str = "(1 3 2)(4 6 5)";

pub fn default_seed() -> (Permutation, Pattern) {
    let seed = Permutation::parse_cycles(DEFAULT_SEED, N).expect("default seed");
    let pattern = Pattern::parse(DEFAULT_PATTERN).expect("default pattern");
    (seed, pattern)
}

/// Builds the 53-part partition, withholding zone `y0` for T3 and T4.
pub fn build_l61(
    y0: usize,
    seed: &Permutation,
    pattern: &Pattern,
) -> Result<L61Construction, L61Error> {
    if !(2..=N).contains(&y0) {
        return Err(L61Error::BadZone(y0));
    }
    let zones = linked_zones(seed, pattern)?;
    let withheld = zones
        .iter()
        .find(|z| z.y.0 == y0)
        .expect("all five zones present");
    let t2 = zones
        .iter()
        .filter(|z| z.y.0 != y0)
        .flat_map(Zone::parts)
        .collect();
    let assemblies = t3_assemblies(withheld);
    let t3 = assemblies.first().cloned().ok_or(L61Error::T3Infeasible)?;
    Ok(L61Construction {
        y0,
        pattern: *pattern,
        t1: build_t1(),
        t2,
        t3,
        t4: build_t4(withheld),
        t3_assemblies: assemblies.len(),
        zones,
    })
}

pub fn build_l61_default() -> L61Construction {
    let (seed, pattern) = default_seed();
    build_l61(DEFAULT_Y0, &seed, &pattern).expect("default construction")
}

/// Every canonical class-`y` seed with both of its patterns.
pub fn all_seeds() -> Vec<(Permutation, Pattern)> {
    let mut out = Vec::new();
    for x in 2..=N {
        for y in (2..=N).filter(|&y| y != x) {
            let rest: Vec<usize> = (2..=N).filter(|&v| v != x && v != y).collect();
            let [a, b, c] = [rest[0], rest[1], rest[2]];
            for word in [[a, b, c], [a, c, b]] {
                let pattern = Pattern::new(x, y, word).expect("valid");
                out.push((pattern.seed(), pattern));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_partition;

    fn p(text: &str) -> Permutation {
        Permutation::parse_cycles(text, N).unwrap()
    }

    fn set(perms: &[Permutation]) -> Vec<Permutation> {
        let mut v = perms.to_vec();
        v.sort();
        v
    }

    #[test]
    fn classes() {
        assert_eq!(class_of(&p("(1 2 3)(4 6 5)")).unwrap().value(), 2);
        assert_eq!(class_of(&p("(1 3 2)(4 5 6)")).unwrap().value(), 2);
        assert_eq!(class_of(&p("(1 2 3)(4 5 6)")).unwrap().value(), 3);
        assert_eq!(
            canonical_rep(&p("(1 2 3)(4 6 5)")).unwrap(),
            p("(1 3 2)(4 5 6)")
        );
        assert!(class_of(&p("(1 2)(3 4 5 6)")).is_err());
    }

    #[test]
    fn classes_are_balanced() {
        // 40 C33 elements, 8 per class, inverse pairs together
        let mut counts = [0usize; N + 1];
        for (seed, _) in all_seeds().iter().step_by(2) {
            for q in [seed.clone(), seed.inverse()] {
                let c = class_of(&q).unwrap();
                assert_eq!(c, class_of(&q.inverse()).unwrap());
                counts[c.value()] += 1;
            }
        }
        assert_eq!(&counts[2..], &[8; 5]);
    }

    #[test]
    fn pattern_application() {
        let beta = Pattern::parse("(1 3 2)(4 6 5)").unwrap();
        assert_eq!(
            set(&beta.apply()),
            set(&[
                p("(1 4 3 6)(2 5)"),
                p("(1 6 3 5)(2 4)"),
                p("(1 5 3 4)(2 6)")
            ])
        );
        let other = Pattern::parse("(1 3 2)(4 5 6)").unwrap();
        assert_eq!(
            set(&other.apply()),
            set(&[
                p("(1 4 3 5)(2 6)"),
                p("(1 5 3 6)(2 4)"),
                p("(1 6 3 4)(2 5)")
            ])
        );
        let a: HashSet<_> = beta.apply().into_iter().collect();
        assert!(other.apply().iter().all(|q| !a.contains(q)));
        assert_eq!(Pattern::parse("(1 3 2)(6 5 4)").unwrap(), beta);
        assert!(Pattern::new(3, 3, [4, 5, 6]).is_err());
        assert!(Pattern::parse("(1 2)(3 4 5 6)").is_err());
    }

    #[test]
    fn t1_rows() {
        assert_eq!(
            t1_subset(&p("(1 2)(3 4 5 6)")).unwrap(),
            vec![
                p("(1 2)(3 4 5 6)"),
                p("(1 3 2 5 4 6)"),
                p("(1 4 2 6 5 3)"),
                p("(1 5 2 3 6 4)"),
                p("(1 6 2 4 3 5)")
            ]
        );
        assert_eq!(
            set(&t1_subset(&p("(1 6)(2 5 3 4)")).unwrap()),
            set(&[
                p("(1 6)(2 5 3 4)"),
                p("(1 2 6 3 5 4)"),
                p("(1 5 6 4 3 2)"),
                p("(1 3 6 2 4 5)"),
                p("(1 4 6 5 2 3)")
            ])
        );
        assert!(t1_subset(&p("(1 2 3)(4 5 6)")).is_err());
        assert!(t1_subset(&p("(1 3 4 5)(2 6)")).is_err());
    }

    /// The formula read off any rotation of the 4-cycle gives the same set.
    #[test]
    fn t1_rotation_invariance() {
        for sigma in c24_zero() {
            let x2 = sigma.apply(1);
            let four = sigma.cycle_of((2..=N).find(|&v| v != x2).unwrap());
            let base = set(&t1_subset(&sigma).unwrap());
            for r in 0..4 {
                let [x3, x4, x5, x6] = [
                    four[r],
                    four[(r + 1) % 4],
                    four[(r + 2) % 4],
                    four[(r + 3) % 4],
                ];
                let direct = [
                    sigma.clone(),
                    perm(&[&[1, x3, x2, x5, x4, x6]]),
                    perm(&[&[1, x4, x2, x6, x5, x3]]),
                    perm(&[&[1, x5, x2, x3, x6, x4]]),
                    perm(&[&[1, x6, x2, x4, x3, x5]]),
                ];
                assert_eq!(set(&direct), base);
            }
        }
    }

    #[test]
    fn t1_covers_c6_once() {
        let t1 = build_t1();
        assert_eq!(t1.len(), 30);
        let all: HashSet<_> = t1.iter().flatten().collect();
        assert_eq!(all.len(), 150);
        let c6 = all
            .iter()
            .filter(|q| q.cycle_type().lengths() == [6])
            .count();
        assert_eq!(c6, 120);
        for part in &t1 {
            assert_eq!(check_factorization(&l61(), part), Ok(()));
        }
    }

    #[test]
    fn zone_well_defined_from_any_member() {
        let (seed, pattern) = default_seed();
        let zone = propagate_zone(&seed, &pattern).unwrap();
        for s in zone.subsets() {
            let again = propagate_zone(&s.members()[1], s.pattern()).unwrap();
            assert_eq!(again, zone);
        }
    }

    #[test]
    fn seed_mismatch() {
        let pattern = Pattern::parse("(1 3 2)(4 6 5)").unwrap();
        assert!(matches!(
            propagate_zone(&p("(1 2 4)(3 5 6)"), &pattern),
            Err(L61Error::SeedMismatch { .. })
        ));
    }

    #[test]
    fn default_build() {
        let c = build_l61_default();
        assert_eq!(
            (c.t1.len(), c.t2.len(), c.t3.len(), c.t4.len()),
            (30, 16, 3, 4)
        );
        assert_eq!(c.t3_assemblies, 1);
        let rep = check_partition(&c.certificate()).unwrap();
        assert!(rep.is_ok(), "{rep}");
        assert_eq!(rep.total_matchings, Some(265));
    }

    #[test]
    fn t4_uses_c222_without_1y0() {
        let c = build_l61_default();
        let c222: HashSet<_> = c.t4.iter().flat_map(|q| &q[2..]).collect();
        assert_eq!(c222.len(), 12);
        assert!(c222
            .iter()
            .all(|q| q.cycle_type().lengths() == [2, 2, 2] && q.apply(1) != c.y0));
    }

    #[test]
    fn bad_zone() {
        let (seed, pattern) = default_seed();
        assert!(matches!(
            build_l61(1, &seed, &pattern),
            Err(L61Error::BadZone(1))
        ));
        assert!(matches!(
            build_l61(7, &seed, &pattern),
            Err(L61Error::BadZone(7))
        ));
    }
}
