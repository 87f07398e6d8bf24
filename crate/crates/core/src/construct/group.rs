//! Coset partitions.
//!
//! For the cyclic group `H = <c>`, `c = (1 2 ... n)`, every left coset `gH`
//! is a 1-factorization of `K(n,n)`: `g c^t` sends `i` to `g(i + t)`, which
//! runs over all columns as `t` varies. The lexicographically least member of
//! `gH` is the one with `g(1) = 1`, so the transversal is the stabilizer of 1.

use thiserror::Error;

use crate::graph::{GraphError, GraphSpec};
use crate::perm::Permutation;
use crate::verify::PartitionCertificate;

/// Largest `n` accepted; `K(n,n)` certificates hold `n!` matchings.
pub const GROUP_MAX_N: usize = 10;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("n = {n} is outside 1..={max}")]
    OutOfRange { n: usize, max: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check_n(n: usize, max: usize) -> Result<(), GroupError> {
    if n == 0 || n > max {
        return Err(GroupError::OutOfRange { n, max });
    }
    Ok(())
}

/// Image arrays (0-based) of the permutations fixing 0, in lexicographic order.
fn stabilizer_of_first(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    // next_permutation on cur[1..]
    loop {
        let tail = &mut cur[1..];
        let Some(i) = (0..tail.len().saturating_sub(1))
            .rev()
            .find(|&i| tail[i] < tail[i + 1])
        else {
            return out;
        };
        let j = (i + 1..tail.len())
            .rev()
            .find(|&j| tail[j] > tail[i])
            .unwrap();
        tail.swap(i, j);
        tail[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// `g c^t` as 0-based images: `i -> g[(i + t) mod n]`.
fn rotate(g: &[u8], t: usize) -> Vec<u8> {
    let n = g.len();
    (0..n).map(|i| g[(i + t) % n]).collect()
}

/// Left cosets of the cyclic group generated by `(1 2 ... n)`.
pub fn knn_partition(n: usize) -> Result<PartitionCertificate, GroupError> {
    check_n(n, GROUP_MAX_N)?;
    let spec = GraphSpec::complete(n)?;
    let parts = stabilizer_of_first(n)
        .iter()
        .map(|g| {
            (0..n)
                .map(|t| Permutation::from_raw(rotate(g, t)))
                .collect()
        })
        .collect();
    Ok(PartitionCertificate::new(spec, parts, true))
}

/// Paired cosets for `L(2n,n)`.
///
/// A matching of `L(2n,n)` is a pair `(a, b)` of bijections, `a` from the
/// first block to the second and `b` back. For transversal elements `g, h`
/// and an offset `d`, the part `{(g c^t, h c^(t+d)) : t}` covers every edge
/// of both off-diagonal blocks once. The pair `(a, b)` fixes `g, h, t` and
/// `t + d`, so parts are disjoint; there are `((n-1)!)^2 n` of them.
pub fn l2nn_partition(n: usize) -> Result<PartitionCertificate, GroupError> {
    check_n(n, 5)?;
    let spec = GraphSpec::l(n, 2)?;
    let reps = stabilizer_of_first(n);
    let mut parts = Vec::with_capacity(reps.len() * reps.len() * n);
    for g in &reps {
        for h in &reps {
            for d in 0..n {
                let part = (0..n)
                    .map(|t| {
                        let a = rotate(g, t);
                        let b = rotate(h, t + d);
                        let mut images = Vec::with_capacity(2 * n);
                        images.extend(a.iter().map(|&x| x + n as u8));
                        images.extend(b.iter().copied());
                        Permutation::from_raw(images)
                    })
                    .collect();
                parts.push(part);
            }
        }
    }
    Ok(PartitionCertificate::new(spec, parts, true))
}
