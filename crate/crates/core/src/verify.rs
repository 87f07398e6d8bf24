//! Checking 1-factorizations and perfect-partition certificates.
//!
//! Violations are returned as values so a caller can report all of them.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AdjacencyMatrix, GraphError, GraphSpec, LParams};
use crate::matchings::{enumerate, MatchingError};
use crate::perm::{PermError, Permutation};
use crate::search::{FactorizationSearch, SearchError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matchings(#[from] MatchingError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("bad permutation in certificate: {0}")]
    Perm(#[from] PermError),
    #[error("certificate JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("certificate declares n = {declared} but the graph has n = {actual}")]
    SizeMismatch { declared: usize, actual: usize },
}

/// Why a set of permutations is not a 1-factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorViolation {
    WrongDegree {
        member: usize,
        degree: usize,
        n: usize,
    },
    NotAMatching {
        member: usize,
        perm: Permutation,
    },
    WrongSize {
        expected: usize,
        got: usize,
    },
    /// 1-based edge `(row, col)` covered more than once.
    DoubledEdge {
        row: usize,
        col: usize,
        times: usize,
    },
    MissingEdge {
        row: usize,
        col: usize,
    },
}

impl fmt::Display for FactorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorViolation::WrongDegree { member, degree, n } => {
                write!(f, "member {member} has degree {degree}, expected {n}")
            }
            FactorViolation::NotAMatching { member, perm } => {
                write!(f, "member {member} {perm} is not a matching of the graph")
            }
            FactorViolation::WrongSize { expected, got } => {
                write!(f, "{got} members, expected {expected}")
            }
            FactorViolation::DoubledEdge { row, col, times } => {
                write!(f, "edge ({row},{col}) covered {times} times")
            }
            FactorViolation::MissingEdge { row, col } => {
                write!(f, "edge ({row},{col}) not covered")
            }
        }
    }
}

/// Checks that `perms` are matchings of `spec` whose permutation matrices sum
/// to its adjacency matrix. Reports the first problem found.
pub fn check_factorization(spec: &GraphSpec, perms: &[Permutation]) -> Result<(), FactorViolation> {
    let n = spec.n();
    let adj = spec.adjacency();
    for (member, p) in perms.iter().enumerate() {
        if p.degree() != n {
            return Err(FactorViolation::WrongDegree {
                member,
                degree: p.degree(),
                n,
            });
        }
        if !spec.is_matching(p).expect("degree checked") {
            return Err(FactorViolation::NotAMatching {
                member,
                perm: p.clone(),
            });
        }
    }
    let expected = adj.row_sums()[0];
    if perms.len() != expected {
        return Err(FactorViolation::WrongSize {
            expected,
            got: perms.len(),
        });
    }
    let mut counter = vec![0usize; n * n];
    for p in perms {
        for (i, &j) in p.raw().iter().enumerate() {
            counter[i * n + j as usize] += 1;
        }
    }
    for i in 0..n {
        for j in 0..n {
            let c = counter[i * n + j];
            if c > 1 {
                return Err(FactorViolation::DoubledEdge {
                    row: i + 1,
                    col: j + 1,
                    times: c,
                });
            }
            if c == 0 && adj.get(i + 1, j + 1) {
                return Err(FactorViolation::MissingEdge {
                    row: i + 1,
                    col: j + 1,
                });
            }
        }
    }
    Ok(())
}

/// A claimed partition of a graph's perfect matchings into 1-factorizations.
///
/// Parts and their members are kept in sorted order, so two certificates with
/// the same content serialize identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCertificate {
    spec: GraphSpec,
    degree: usize,
    complete: bool,
    parts: Vec<Vec<Permutation>>,
}

impl PartitionCertificate {
    /// Sorts members and parts. The degree recorded is the graph's row sum of
    /// row 1, so irregular graphs still produce a certificate that fails
    /// verification rather than panicking here.
    pub fn new(spec: GraphSpec, mut parts: Vec<Vec<Permutation>>, complete: bool) -> Self {
        for part in &mut parts {
            part.sort();
        }
        parts.sort();
        let degree = spec.adjacency().row_sums()[0];
        PartitionCertificate {
            spec,
            degree,
            complete,
            parts,
        }
    }

    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn parts(&self) -> &[Vec<Permutation>] {
        &self.parts
    }

    pub fn matching_count(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn to_json(&self) -> String {
        let doc = CertificateJson {
            graph: match &self.spec {
                GraphSpec::L(p) => GraphJson::L { r: p.r(), m: p.m() },
                GraphSpec::Matrix(a) => GraphJson::Matrix {
                    rows: a.to_bitstrings(),
                },
            },
            n: self.spec.n(),
            degree: self.degree,
            complete: self.complete,
            parts: self
                .parts
                .iter()
                .map(|part| part.iter().map(Permutation::images).collect())
                .collect(),
        };
        let mut out = serde_json::to_string(&doc).expect("certificate serializes");
        out.push('\n');
        out
    }

    /// Parses a certificate. Members are re-sorted; the declared degree is
    /// kept as written so [`check_partition`] can flag a wrong claim.
    pub fn from_json(text: &str) -> Result<Self, VerifyError> {
        let doc: CertificateJson = serde_json::from_str(text)?;
        let spec = match doc.graph {
            GraphJson::L { r: 0, .. } => GraphSpec::complete(doc.n)?,
            GraphJson::L { r, m } => GraphSpec::L(LParams::new(r, m)?),
            GraphJson::Matrix { rows } => {
                GraphSpec::Matrix(AdjacencyMatrix::from_bitstrings(&rows)?)
            }
        };
        if spec.n() != doc.n {
            return Err(VerifyError::SizeMismatch {
                declared: doc.n,
                actual: spec.n(),
            });
        }
        let parts = doc
            .parts
            .iter()
            .map(|part| part.iter().map(|im| Permutation::from_images(im)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        let mut cert = PartitionCertificate::new(spec, parts, doc.complete);
        cert.degree = doc.degree;
        Ok(cert)
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    graph: GraphJson,
    n: usize,
    degree: usize,
    complete: bool,
    parts: Vec<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum GraphJson {
    #[serde(rename = "L")]
    L { r: usize, m: usize },
    #[serde(rename = "matrix")]
    Matrix { rows: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    /// The declared degree differs from the graph's.
    DegreeClaim { declared: usize, actual: usize },
    Part {
        index: usize,
        violation: FactorViolation,
    },
    /// The same matching appears in two parts (or twice in one).
    Overlap {
        first: usize,
        second: usize,
        perm: Permutation,
    },
    /// A matching of the graph that no part contains.
    Uncovered { perm: Permutation },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionViolation::DegreeClaim { declared, actual } => {
                write!(f, "declared degree {declared}, graph degree {actual}")
            }
            PartitionViolation::Part { index, violation } => write!(f, "part {index}: {violation}"),
            PartitionViolation::Overlap {
                first,
                second,
                perm,
            } => {
                write!(f, "{perm} appears in parts {first} and {second}")
            }
            PartitionViolation::Uncovered { perm } => write!(f, "{perm} is not in any part"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PartitionReport {
    pub parts: usize,
    pub matchings_in_parts: usize,
    /// Total matchings of the graph, when completeness was checked.
    pub total_matchings: Option<usize>,
    pub violations: Vec<PartitionViolation>,
}

impl PartitionReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} parts, {} matchings",
            self.parts, self.matchings_in_parts
        )?;
        if let Some(t) = self.total_matchings {
            write!(f, " of {t}")?;
        }
        if self.is_ok() {
            return write!(f, ": ok");
        }
        writeln!(f, ": {} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Verifies each part, pairwise disjointness, and (for a complete
/// certificate) that every matching of the graph is covered.
pub fn check_partition(cert: &PartitionCertificate) -> Result<PartitionReport, VerifyError> {
    let spec = cert.spec();
    let actual = spec.degree()?;
    let mut violations = Vec::new();
    if cert.degree() != actual {
        violations.push(PartitionViolation::DegreeClaim {
            declared: cert.degree(),
            actual,
        });
    }
    let part_results: Vec<Result<(), FactorViolation>> = cert
        .parts()
        .par_iter()
        .map(|part| check_factorization(spec, part))
        .collect();
    for (index, res) in part_results.into_iter().enumerate() {
        if let Err(violation) = res {
            violations.push(PartitionViolation::Part { index, violation });
        }
    }
    let mut owner: HashMap<&Permutation, usize> = HashMap::new();
    for (index, part) in cert.parts().iter().enumerate() {
        for p in part {
            if let Some(&first) = owner.get(p) {
                violations.push(PartitionViolation::Overlap {
                    first,
                    second: index,
                    perm: p.clone(),
                });
            } else {
                owner.insert(p, index);
            }
        }
    }
    let mut total_matchings = None;
    if cert.complete() {
        let all = enumerate(spec)?;
        total_matchings = Some(all.len());
        for p in &all {
            if !owner.contains_key(p) {
                violations.push(PartitionViolation::Uncovered { perm: p.clone() });
            }
        }
    }
    Ok(PartitionReport {
        parts: cert.parts().len(),
        matchings_in_parts: cert.matching_count(),
        total_matchings,
        violations,
    })
}

#[derive(Debug, Clone)]
pub struct ExtendabilityReport {
    pub checked: usize,
    /// A matching that lies in no 1-factorization.
    pub counterexample: Option<Permutation>,
}

impl ExtendabilityReport {
    pub fn is_ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Confirms that every perfect matching of a regular graph lies in some
/// 1-factorization, one exact-cover query per matching.
pub fn check_extendability(spec: &GraphSpec) -> Result<ExtendabilityReport, VerifyError> {
    spec.degree()?;
    let search = FactorizationSearch::new(spec)?;
    let checked = search.matchings().len();
    let counterexample = (0..checked)
        .into_par_iter()
        .find_first(|&k| search.first_containing(&[k]).is_none())
        .map(|k| search.matchings().perms()[k].clone());
    Ok(ExtendabilityReport {
        checked,
        counterexample,
    })
}
