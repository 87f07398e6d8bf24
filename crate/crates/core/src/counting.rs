//! Matching counts for `L(rm, r)`: the rook-polynomial inclusion-exclusion
//! formula, and Ryser's permanent as an independent check.
//!
//! Everything here is generic over the integer type. Use [`crate::Count`]
//! (a big integer) unless the caller knows the result fits in a machine word.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{AdjacencyMatrix, GraphError, GraphSpec, LParams};

/// Integer types the counting routines can run over.
pub trait CountScalar:
    Clone + Num + Signed + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync
{
}

impl<T> CountScalar for T where
    T: Clone + Num + Signed + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync
{
}

/// Largest matrix accepted by [`ryser_permanent`].
pub const RYSER_MAX_N: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("Ryser oracle supports n <= {RYSER_MAX_N}, got {0}")]
    TooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Polynomial with integer coefficients, `coeffs[k]` multiplies `x^k`.
/// Trailing zeros are trimmed; the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: CountScalar> IntPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn one() -> Self {
        IntPolynomial {
            coeffs: vec![T::one()],
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPolynomial { coeffs: Vec::new() };
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        IntPolynomial::new(out)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = IntPolynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

fn from_usize<T: CountScalar>(v: usize) -> T {
    T::from_usize(v).expect("small integer fits the scalar type")
}

pub fn factorial<T: CountScalar>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * from_usize(k))
}

pub fn binomial<T: CountScalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    // exact at every step: the running value is C(n - k + i, i)
    (1..=k).fold(T::one(), |acc, i| {
        acc * from_usize(n - k + i) / from_usize(i)
    })
}

/// Rook polynomial of the full `r x r` board: `sum_k k! C(r,k)^2 x^k`.
pub fn rook_block<T: CountScalar>(r: usize) -> IntPolynomial<T> {
    IntPolynomial::new(
        (0..=r)
            .map(|k| {
                let c: T = binomial(r, k);
                factorial::<T>(k) * c.clone() * c
            })
            .collect(),
    )
}

/// Rook polynomial of the forbidden board of `L(rm, r)`, `rook_block(r)^m`.
pub fn forbidden_rook_polynomial<T: CountScalar>(params: &LParams) -> IntPolynomial<T> {
    if params.r() == 0 {
        return IntPolynomial::one();
    }
    rook_block::<T>(params.r()).pow(params.m())
}

/// Number of perfect matchings of `L(rm, r)`:
/// `sum_k (-1)^k a_k (n-k)!` with `a_k` the forbidden-board rook numbers.
pub fn count_matchings<T: CountScalar>(params: &LParams) -> T {
    let n = params.n();
    let a = forbidden_rook_polynomial::<T>(params);
    // (n-k)! for k = n, n-1, ..., 0 built upward to avoid recomputation
    let mut fact = vec![T::one(); n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1].clone() * from_usize(k);
    }
    (0..=n).fold(T::zero(), |acc, k| {
        let term = a.coeff(k) * fact[n - k].clone();
        if k % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Permanent of a 0/1 matrix by Ryser's inclusion-exclusion over column
/// subsets, visiting subsets in Gray-code order so each step adds or removes
/// one column from the running row sums.
pub fn ryser_permanent<T: CountScalar>(a: &AdjacencyMatrix) -> Result<T, CountError> {
    let n = a.n();
    if n > RYSER_MAX_N {
        return Err(CountError::TooLarge(n));
    }
    let total: u64 = 1 << n;
    // chunking only matters for large n; the partial sums are combined in
    // chunk order so the result does not depend on scheduling
    let chunks: u64 = if n >= 18 { 64 } else { 1 };
    let span = total / chunks;
    let partials: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| ryser_range(a, c * span, (c + 1) * span))
        .collect();
    let sum = partials.into_iter().fold(T::zero(), |acc, p| acc + p);
    Ok(if n % 2 == 1 { -sum } else { sum })
}

/// `sum over k in [lo, hi)` of `(-1)^{|S_k|} prod_i rowsum_i(S_k)` where `S_k`
/// is the column set of the `k`-th Gray code.
fn ryser_range<T: CountScalar>(a: &AdjacencyMatrix, lo: u64, hi: u64) -> T {
    let n = a.n();
    let rows = a.rows();
    let mut sums = vec![0i64; n];
    let mut gray = lo ^ (lo >> 1);
    for (i, s) in sums.iter_mut().enumerate() {
        *s = (rows[i] & gray).count_ones() as i64;
    }
    let mut acc = T::zero();
    let mut fast: i128 = 0;
    for k in lo..hi {
        if k != lo {
            let next = k ^ (k >> 1);
            let col = (gray ^ next).trailing_zeros();
            let added = next >> col & 1 == 1;
            for (i, s) in sums.iter_mut().enumerate() {
                if rows[i] >> col & 1 == 1 {
                    *s += if added { 1 } else { -1 };
                }
            }
            gray = next;
        }
        if gray == 0 || sums.contains(&0) {
            continue;
        }
        let negative = gray.count_ones() % 2 == 1;
        match sums
            .iter()
            .try_fold(1i128, |p, &s| p.checked_mul(s as i128))
        {
            Some(prod) => {
                let signed = if negative { -prod } else { prod };
                match fast.checked_add(signed) {
                    Some(v) => fast = v,
                    None => {
                        acc = acc + T::from_i128(fast).expect("i128 fits");
                        fast = signed;
                    }
                }
            }
            None => {
                let prod = sums
                    .iter()
                    .fold(T::one(), |p, &s| p * from_usize(s as usize));
                acc = if negative { acc - prod } else { acc + prod };
            }
        }
    }
    acc + T::from_i128(fast).expect("i128 fits")
}

/// Matching count, regularity degree and the divisibility test
/// `degree | count` that any perfect partition requires.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub graph: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(serialize_with = "ser_opt_big")]
    pub rook_count: Option<BigInt>,
    #[serde(serialize_with = "ser_opt_big")]
    pub oracle_count: Option<BigInt>,
    pub degree: usize,
    pub divisible: bool,
    /// Number of parts a perfect partition would have, when divisible.
    #[serde(serialize_with = "ser_opt_big")]
    pub parts: Option<BigInt>,
}

impl CountReport {
    /// The count used for the divisibility test: the rook formula when
    /// available, otherwise the permanent.
    pub fn count(&self) -> &BigInt {
        self.rook_count
            .as_ref()
            .or(self.oracle_count.as_ref())
            .expect("report carries at least one count")
    }

    /// False only when both counts are present and differ.
    pub fn counts_agree(&self) -> bool {
        match (&self.rook_count, &self.oracle_count) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
}

impl std::fmt::Display for CountReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "graph:      {}", self.graph)?;
        if let Some(c) = &self.rook_count {
            writeln!(f, "rook count: {c}")?;
        }
        if let Some(c) = &self.oracle_count {
            writeln!(f, "permanent:  {c}")?;
        }
        writeln!(f, "degree:     {}", self.degree)?;
        match &self.parts {
            Some(p) => write!(f, "divisible:  yes ({p} parts of {})", self.degree),
            None => write!(f, "divisible:  no"),
        }
    }
}

fn ser_opt_big<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(b) => match b.to_u64() {
            Some(u) => s.serialize_u64(u),
            None => s.serialize_str(&b.to_string()),
        },
    }
}

/// Counts matchings of a regular graph and checks `degree | count`.
///
/// `L` graphs use the rook formula (plus the permanent when `with_oracle`);
/// explicit matrices always use the permanent.
pub fn necessary_condition(spec: &GraphSpec, with_oracle: bool) -> Result<CountReport, CountError> {
    let degree = spec.degree()?;
    let (r, m, rook_count) = match spec {
        GraphSpec::L(p) => (Some(p.r()), Some(p.m()), Some(count_matchings::<BigInt>(p))),
        GraphSpec::Matrix(_) => (None, None, None),
    };
    let oracle_count = if with_oracle || rook_count.is_none() {
        Some(ryser_permanent::<BigInt>(&spec.adjacency())?)
    } else {
        None
    };
    let count = rook_count
        .as_ref()
        .or(oracle_count.as_ref())
        .cloned()
        .unwrap_or_default();
    let d = BigInt::from(degree);
    let divisible = degree > 0 && (&count % &d).is_zero();
    Ok(CountReport {
        graph: spec.label(),
        n: spec.n(),
        r,
        m,
        rook_count,
        oracle_count,
        degree,
        divisible,
        parts: divisible.then(|| count / d),
    })
}
