use serde::{Deserialize, Serialize};

use crate::{CoreError, QuasimetricSpace};

/// Reflexive transitive relation stored as bitset rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quasipartition {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Quasipartition {
    pub fn identity(n: usize) -> Self {
        let words = words_for(n);
        let mut q = Self {
            n,
            words,
            bits: vec![0; n * words],
        };
        for x in 0..n {
            q.set(x, x);
        }
        q
    }

    pub fn full(n: usize) -> Self {
        let mut q = Self::identity(n);
        for x in 0..n {
            for y in 0..n {
                q.set(x, y);
            }
        }
        q
    }

    /// Reachability closure of the given ordered pairs.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in pairs {
            adj[u].push(v);
        }
        let mut q = Self::identity(n);
        let mut stack = Vec::new();
        for s in 0..n {
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if !q.contains(s, v) {
                        q.set(s, v);
                        stack.push(v);
                    }
                }
            }
        }
        q
    }

    /// Validates a dense boolean matrix as a quasipartition.
    pub fn try_from_matrix(n: usize, rel: &[bool]) -> Result<Self, CoreError> {
        if rel.len() != n * n {
            return Err(CoreError::SizeMismatch(rel.len(), n * n));
        }
        if let Some(x) = (0..n).find(|&x| !rel[x * n + x]) {
            return Err(CoreError::NotReflexive(x));
        }
        if let Some((a, b, c)) = transitivity_gap(n, rel) {
            return Err(CoreError::NotTransitive(a, b, c));
        }
        let mut q = Self::identity(n);
        for x in 0..n {
            for y in 0..n {
                if rel[x * n + y] {
                    q.set(x, y);
                }
            }
        }
        Ok(q)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, x: usize, y: usize) {
        self.bits[x * self.words + y / 64] |= 1 << (y % 64);
    }

    /// Ordered pairs `(x,y)` with `x != y` in the relation.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| {
            (0..self.n).filter_map(move |y| (x != y && self.contains(x, y)).then_some((x, y)))
        })
    }

    pub fn to_matrix(&self) -> Vec<bool> {
        let n = self.n;
        (0..n * n).map(|i| self.contains(i / n, i % n)).collect()
    }

    /// Relation restricted to `points` (in order) and relabelled.
    pub fn restrict(&self, points: &[usize]) -> Quasipartition {
        let mut q = Quasipartition::identity(points.len());
        for (i, &a) in points.iter().enumerate() {
            for (j, &b) in points.iter().enumerate() {
                if self.contains(a, b) {
                    q.set(i, j);
                }
            }
        }
        q
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.contains(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        transitivity_gap(self.n, &self.to_matrix()).is_none()
    }

    /// Rows as run-length encoded `(start, length)` intervals of members.
    pub fn run_length_rows(&self) -> Vec<Vec<(usize, usize)>> {
        (0..self.n)
            .map(|x| {
                let mut runs = Vec::new();
                let mut y = 0;
                while y < self.n {
                    if self.contains(x, y) {
                        let start = y;
                        while y < self.n && self.contains(x, y) {
                            y += 1;
                        }
                        runs.push((start, y - start));
                    } else {
                        y += 1;
                    }
                }
                runs
            })
            .collect()
    }
}

fn transitivity_gap(n: usize, rel: &[bool]) -> Option<(usize, usize, usize)> {
    for a in 0..n {
        for b in 0..n {
            if !rel[a * n + b] {
                continue;
            }
            for c in 0..n {
                if rel[b * n + c] && !rel[a * n + c] {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Smallest reflexive transitive superset of a dense boolean relation.
pub fn transitive_closure(n: usize, rel: &[bool]) -> Result<Quasipartition, CoreError> {
    if rel.len() != n * n {
        return Err(CoreError::SizeMismatch(rel.len(), n * n));
    }
    let mut q = Quasipartition::identity(n);
    for x in 0..n {
        for y in 0..n {
            if rel[x * n + y] {
                q.set(x, y);
            }
        }
    }
    let w = q.words;
    for k in 0..n {
        let row_k: Vec<u64> = q.bits[k * w..(k + 1) * w].to_vec();
        for i in 0..n {
            if q.contains(i, k) {
                for (dst, src) in q.bits[i * w..(i + 1) * w].iter_mut().zip(&row_k) {
                    *dst |= src;
                }
            }
        }
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub max_distance: f64,
    pub bounded: bool,
    pub offending: Vec<(usize, usize, f64)>,
}

/// Largest distance over related pairs, and the pairs exceeding `r`.
pub fn bound_check(
    p: &Quasipartition,
    q: &QuasimetricSpace,
    r: f64,
) -> Result<BoundReport, CoreError> {
    if p.size() != q.size() {
        return Err(CoreError::SizeMismatch(p.size(), q.size()));
    }
    let mut max_distance: f64 = 0.0;
    let mut offending = Vec::new();
    for (x, y) in p.pairs() {
        let d = q.get(x, y);
        max_distance = max_distance.max(d);
        if !crate::approx_le(d, r) {
            offending.push((x, y, d));
        }
    }
    Ok(BoundReport {
        max_distance,
        bounded: offending.is_empty(),
        offending,
    })
}
