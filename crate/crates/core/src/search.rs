//! Exact-cover search at two levels: matchings covering the edges of a graph
//! (a 1-factorization), and factorizations covering the matchings (a perfect
//! partition).

use std::ops::ControlFlow;

use thiserror::Error;

use crate::counting::necessary_condition;
use crate::graph::{GraphError, GraphSpec};
use crate::matchings::{enumerate, MatchingError, MatchingSet};
use crate::perm::Permutation;
use crate::verify::PartitionCertificate;

/// Largest `n` the factorization search accepts; edges must fit in a `u64`.
pub const SEARCH_MAX_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search supports n <= {SEARCH_MAX_N}, got {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matchings(#[from] MatchingError),
    #[error("matching {0} is not a perfect matching of the graph")]
    NotAMatching(Permutation),
}

/// Which primary column Algorithm X branches on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRule {
    /// Fewest remaining rows, lowest index on ties.
    MinSize,
    /// Lowest-index uncovered column.
    First,
}

/// Exact cover by dancing links.
///
/// Rows are added as sorted lists of column indices. Solutions are reported
/// as row indices in the order they were chosen.
#[derive(Debug, Clone)]
pub struct ExactCover {
    columns: usize,
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    rows: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverOutcome {
    /// The whole tree was explored (or the callback stopped early).
    Completed,
    /// The node budget ran out before the tree was exhausted.
    BudgetExhausted,
}

impl ExactCover {
    /// Node 0 is the root; nodes `1..=columns` are column headers.
    pub fn new(columns: usize) -> Self {
        let header = columns + 1;
        let mut ec = ExactCover {
            columns,
            left: (0..header)
                .map(|i| if i == 0 { columns } else { i - 1 })
                .collect(),
            right: (0..header)
                .map(|i| if i == columns { 0 } else { i + 1 })
                .collect(),
            up: (0..header).collect(),
            down: (0..header).collect(),
            col: (0..header).collect(),
            row: vec![usize::MAX; header],
            size: vec![0; header],
            rows: 0,
        };
        ec.size[0] = usize::MAX;
        ec
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Adds a row covering the given (distinct) columns; returns its index.
    pub fn add_row(&mut self, cols: &[usize]) -> usize {
        let r = self.rows;
        self.rows += 1;
        let mut first: Option<usize> = None;
        for &c in cols {
            assert!(c < self.columns, "column {c} out of range");
            let h = c + 1;
            let node = self.left.len();
            self.col.push(h);
            self.row.push(r);
            self.up.push(self.up[h]);
            self.down.push(h);
            let above = self.up[h];
            self.down[above] = node;
            self.up[h] = node;
            self.size[h] += 1;
            match first {
                None => {
                    self.left.push(node);
                    self.right.push(node);
                    first = Some(node);
                }
                Some(f) => {
                    let last = self.left[f];
                    self.left.push(last);
                    self.right.push(f);
                    self.right[last] = node;
                    self.left[f] = node;
                }
            }
        }
        r
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    fn choose(&self, rule: ColumnRule) -> usize {
        match rule {
            ColumnRule::First => self.right[0],
            ColumnRule::MinSize => {
                let mut best = self.right[0];
                let mut c = self.right[best];
                while c != 0 {
                    if self.size[c] < self.size[best] {
                        best = c;
                    }
                    c = self.right[c];
                }
                best
            }
        }
    }

    /// Runs Algorithm X, calling `visit` with each solution. `budget` caps the
    /// number of search nodes (row selections).
    pub fn solve<F>(
        &mut self,
        rule: ColumnRule,
        budget: Option<u64>,
        mut visit: F,
    ) -> (CoverOutcome, u64)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut partial = Vec::new();
        let mut nodes = 0u64;
        let res = self.search(rule, budget, &mut nodes, &mut partial, &mut visit);
        let outcome = match res {
            Err(()) => CoverOutcome::BudgetExhausted,
            Ok(_) => CoverOutcome::Completed,
        };
        (outcome, nodes)
    }

    /// `Ok(Break)` when the visitor asked to stop, `Err` on budget exhaustion.
    fn search<F>(
        &mut self,
        rule: ColumnRule,
        budget: Option<u64>,
        nodes: &mut u64,
        partial: &mut Vec<usize>,
        visit: &mut F,
    ) -> Result<ControlFlow<()>, ()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if self.right[0] == 0 {
            return Ok(visit(partial));
        }
        let c = self.choose(rule);
        if self.size[c] == 0 {
            return Ok(ControlFlow::Continue(()));
        }
        self.cover(c);
        let mut r = self.down[c];
        let mut result = Ok(ControlFlow::Continue(()));
        while r != c {
            *nodes += 1;
            if budget.is_some_and(|b| *nodes > b) {
                result = Err(());
                break;
            }
            partial.push(self.row[r]);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            let step = self.search(rule, budget, nodes, partial, visit);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            partial.pop();
            match step {
                Ok(ControlFlow::Continue(())) => {}
                other => {
                    result = other;
                    break;
                }
            }
            r = self.down[r];
        }
        self.uncover(c);
        result
    }
}

/// Matchings of a graph with `n <= 8` as edge masks (bit `8 * row + col`).
#[derive(Debug, Clone)]
pub struct FactorizationSearch {
    matchings: MatchingSet,
    masks: Vec<u64>,
    edges: u64,
    degree: usize,
}

impl FactorizationSearch {
    pub fn new(spec: &GraphSpec) -> Result<Self, SearchError> {
        let n = spec.n();
        if n > SEARCH_MAX_N {
            return Err(SearchError::TooLarge(n));
        }
        let degree = spec.degree()?;
        let matchings = enumerate(spec)?;
        let masks = matchings.iter().map(edge_mask).collect();
        let edges = spec
            .adjacency()
            .rows()
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &r)| acc | r << (8 * i));
        Ok(FactorizationSearch {
            matchings,
            masks,
            edges,
            degree,
        })
    }

    pub fn matchings(&self) -> &MatchingSet {
        &self.matchings
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Visits every factorization (as sorted matching indices) that contains
    /// all of `forced`. Branches on the uncovered edge with the fewest
    /// compatible matchings.
    pub fn for_each<F>(&self, forced: &[usize], mut visit: F)
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut covered = 0u64;
        for &f in forced {
            if covered & self.masks[f] != 0 {
                return;
            }
            covered |= self.masks[f];
        }
        let mut chosen: Vec<usize> = forced.to_vec();
        let _ = self.extend(covered, &mut chosen, &mut |sel: &[usize]| {
            let mut sorted = sel.to_vec();
            sorted.sort_unstable();
            visit(&sorted)
        });
    }

    fn extend<F>(&self, covered: u64, chosen: &mut Vec<usize>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let open = self.edges & !covered;
        if open == 0 {
            return visit(chosen);
        }
        // most constrained open edge
        let mut best: Option<(u32, Vec<usize>)> = None;
        let mut rest = open;
        while rest != 0 {
            let e = rest.trailing_zeros();
            rest &= rest - 1;
            let cands: Vec<usize> = (0..self.masks.len())
                .filter(|&k| self.masks[k] >> e & 1 == 1 && self.masks[k] & covered == 0)
                .collect();
            if best.as_ref().is_none_or(|(_, b)| cands.len() < b.len()) {
                let empty = cands.is_empty();
                best = Some((e, cands));
                if empty {
                    break;
                }
            }
        }
        let (_, cands) = best.expect("open edge exists");
        for k in cands {
            chosen.push(k);
            let flow = self.extend(covered | self.masks[k], chosen, visit);
            chosen.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// All factorizations containing `forced`, sorted.
    pub fn all_containing(&self, forced: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each(forced, |f| {
            out.push(f.to_vec());
            ControlFlow::Continue(())
        });
        out.sort();
        out
    }

    pub fn first_containing(&self, forced: &[usize]) -> Option<Vec<usize>> {
        let mut out = None;
        self.for_each(forced, |f| {
            out = Some(f.to_vec());
            ControlFlow::Break(())
        });
        out
    }

    pub fn to_perms(&self, indices: &[usize]) -> Vec<Permutation> {
        indices
            .iter()
            .map(|&k| self.matchings.perms()[k].clone())
            .collect()
    }
}

fn edge_mask(p: &Permutation) -> u64 {
    p.raw()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &j)| acc | 1 << (8 * i + j as usize))
}

/// Factorizations of `spec`, optionally forced to contain `containing`, in
/// sorted order.
pub fn find_factorizations(
    spec: &GraphSpec,
    containing: Option<&Permutation>,
) -> Result<Vec<Vec<Permutation>>, SearchError> {
    let search = FactorizationSearch::new(spec)?;
    let forced = match containing {
        Some(p) => vec![search
            .matchings()
            .index_of(p)
            .ok_or_else(|| SearchError::NotAMatching(p.clone()))?],
        None => Vec::new(),
    };
    Ok(search
        .all_containing(&forced)
        .iter()
        .map(|f| search.to_perms(f))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoneReason {
    /// The degree does not divide the number of matchings.
    Divisibility,
    /// The full search tree was exhausted.
    Exhausted,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Vec<PartitionCertificate>),
    None(NoneReason),
    BudgetExceeded {
        nodes: u64,
        found: Vec<PartitionCertificate>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Collect every partition instead of stopping at the first.
    pub find_all: bool,
    /// Node limit for the outer search.
    pub budget: Option<u64>,
    /// Return `None(Divisibility)` without searching when `degree` does not
    /// divide the matching count.
    pub divisibility_precheck: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            find_all: false,
            budget: None,
            divisibility_precheck: true,
        }
    }
}

/// Searches for a perfect partition: always branches on the least uncovered
/// matching and tries the factorizations containing it.
pub fn find_perfect_partition(
    spec: &GraphSpec,
    options: SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    if spec.n() > SEARCH_MAX_N {
        return Err(SearchError::TooLarge(spec.n()));
    }
    if options.divisibility_precheck {
        let report = necessary_condition(spec, false).map_err(|e| match e {
            crate::counting::CountError::Graph(g) => SearchError::Graph(g),
            crate::counting::CountError::TooLarge(n) => SearchError::TooLarge(n),
        })?;
        if !report.divisible {
            return Ok(SearchOutcome::None(NoneReason::Divisibility));
        }
    }
    let search = FactorizationSearch::new(spec)?;
    let factorizations = search.all_containing(&[]);
    let mut ec = ExactCover::new(search.matchings().len());
    for f in &factorizations {
        ec.add_row(f);
    }
    let mut found = Vec::new();
    let (outcome, nodes) = ec.solve(ColumnRule::First, options.budget, |rows| {
        let parts = rows
            .iter()
            .map(|&r| search.to_perms(&factorizations[r]))
            .collect();
        found.push(PartitionCertificate::new(spec.clone(), parts, true));
        if options.find_all {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    });
    Ok(match outcome {
        CoverOutcome::BudgetExhausted => SearchOutcome::BudgetExceeded { nodes, found },
        CoverOutcome::Completed if found.is_empty() => SearchOutcome::None(NoneReason::Exhausted),
        CoverOutcome::Completed => SearchOutcome::Found(found),
    })
}
