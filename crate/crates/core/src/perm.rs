//! Permutations of `{1..n}` and their cycle notation.
//!
//! A perfect matching of an `n x n` bipartite graph is stored as the
//! permutation sending each row to its matched column. Labels are 1-based at
//! every public boundary; the images are kept 0-based internally.
//!
//! Composition follows the usual right-to-left convention:
//! `a.compose(&b)` is the map `i -> a(b(i))`, so `b` is applied first.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported degree. Images are stored in a byte each.
pub const MAX_DEGREE: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree must be between 1 and {MAX_DEGREE}, got {0}")]
    BadDegree(usize),
    #[error("element {element} is out of range 1..={n}")]
    OutOfRange { element: usize, n: usize },
    #[error("element {0} appears more than once")]
    Repeated(usize),
    #[error("malformed cycle notation: {0}")]
    Malformed(String),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
}

/// A bijection on `{1..n}`.
///
/// Ordering is lexicographic on the image array, which is the order used for
/// every sorted collection of matchings in this crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u8]>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&n), "degree {n} out of range");
        Permutation {
            images: (0..n as u8).collect(),
        }
    }

    /// Builds a permutation from 1-based images, `images[i - 1] = p(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(PermError::BadDegree(n));
        }
        let mut seen = vec![false; n];
        let mut raw = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n {
                return Err(PermError::OutOfRange { element: v, n });
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(PermError::Repeated(v));
            }
            raw.push((v - 1) as u8);
        }
        Ok(Permutation {
            images: raw.into_boxed_slice(),
        })
    }

    /// 0-based images; the caller guarantees a bijection.
    pub(crate) fn from_raw(raw: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = raw.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v as usize)
        });
        Permutation {
            images: raw.into_boxed_slice(),
        }
    }

    /// Builds a permutation from disjoint cycles of 1-based labels.
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Result<Self, PermError> {
        if n == 0 || n > MAX_DEGREE {
            return Err(PermError::BadDegree(n));
        }
        let mut raw: Vec<u8> = (0..n as u8).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &x in cycle {
                if x == 0 || x > n {
                    return Err(PermError::OutOfRange { element: x, n });
                }
                if std::mem::replace(&mut used[x - 1], true) {
                    return Err(PermError::Repeated(x));
                }
            }
            for (k, &x) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                raw[x - 1] = (next - 1) as u8;
            }
        }
        Ok(Permutation::from_raw(raw))
    }

    /// Parses cycle notation such as `(1 2)(3 4 5 6)`.
    ///
    /// Entries may be separated by whitespace or commas. For `n <= 9` a run of
    /// digits like `(123)` is read one digit per element. The empty string and
    /// `()` both denote the identity.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Self, PermError> {
        let cycles = parse_cycle_groups(text, n)?;
        Permutation::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// The image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// 1-based image array.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| i == v as usize)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation::from_raw(
            other
                .images
                .iter()
                .map(|&j| self.images[j as usize])
                .collect(),
        ))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Permutation::from_raw(inv)
    }

    pub fn pow(&self, k: usize) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..k {
            acc = self.compose(&acc).expect("equal degrees");
        }
        acc
    }

    /// Canonical cycle form: each cycle starts at its minimum, cycles sorted
    /// by minimum, fixed points omitted.
    pub fn to_cycles(&self) -> CycleForm {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut x = self.images[start] as usize;
            while x != start {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        CycleForm { cycles }
    }

    pub fn cycle_type(&self) -> CycleType {
        let n = self.degree();
        let mut lengths = Vec::new();
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            lengths.push(len);
        }
        CycleType::new(lengths)
    }

    /// The cycle through the 1-based point `i`, starting at `i`.
    pub fn cycle_of(&self, i: usize) -> Vec<usize> {
        let mut cycle = vec![i];
        let mut x = self.apply(i);
        while x != i {
            cycle.push(x);
            x = self.apply(x);
        }
        cycle
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_cycles().fmt(f)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycles())
    }
}

fn parse_cycle_groups(text: &str, n: usize) -> Result<Vec<Vec<usize>>, PermError> {
    let mut groups = Vec::new();
    let mut current: Option<Vec<usize>> = None;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' => {
                if current.is_some() {
                    return Err(PermError::Malformed("nested '('".into()));
                }
                current = Some(Vec::new());
            }
            ')' => match current.take() {
                Some(g) => groups.push(g),
                None => return Err(PermError::Malformed("unmatched ')'".into())),
            },
            c if c.is_whitespace() || c == ',' => {}
            c if c.is_ascii_digit() => {
                let mut token = String::from(c);
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        token.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let group = current
                    .as_mut()
                    .ok_or_else(|| PermError::Malformed(format!("'{token}' outside a cycle")))?;
                if n <= 9 && token.len() > 1 {
                    group.extend(token.bytes().map(|b| (b - b'0') as usize));
                } else {
                    let v: usize = token
                        .parse()
                        .map_err(|_| PermError::Malformed(format!("bad number '{token}'")))?;
                    group.push(v);
                }
            }
            other => return Err(PermError::Malformed(format!("unexpected '{other}'"))),
        }
    }
    if current.is_some() {
        return Err(PermError::Malformed("unclosed '('".into()));
    }
    Ok(groups)
}

/// Disjoint cycles in canonical order; fixed points are not listed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleForm {
    cycles: Vec<Vec<usize>>,
}

impl CycleForm {
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn to_permutation(&self, n: usize) -> Result<Permutation, PermError> {
        Permutation::from_cycles(n, &self.cycles)
    }
}

impl fmt::Display for CycleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in &self.cycles {
            f.write_str("(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Multiset of cycle lengths, fixed points included, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    pub fn new(mut lengths: Vec<usize>) -> Self {
        lengths.sort_unstable();
        CycleType(lengths)
    }

    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for CycleType {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let lengths = inner
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| PermError::Malformed(format!("bad cycle length '{t}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycleType::new(lengths))
    }
}
