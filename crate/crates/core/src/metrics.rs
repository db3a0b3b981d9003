use serde::{Deserialize, Serialize};

use crate::{CoreError, Quasipartition};

/// Quasimetric taking values in {0,1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroOneQuasimetric {
    n: usize,
    table: Vec<bool>,
}

impl ZeroOneQuasimetric {
    /// Distance 0 exactly on the pairs of `rel`; rejects non-transitive input.
    pub fn from_relation(n: usize, rel: &[bool]) -> Result<Self, CoreError> {
        let q = Quasipartition::try_from_matrix(n, rel)?;
        Ok(zero_one_from_quasipartition(&q))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        if self.table[x * self.n + y] {
            1.0
        } else {
            0.0
        }
    }

    /// First triple violating `d(x,z) <= d(x,y) + d(y,z)`.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for x in 0..n {
            for z in 0..n {
                if !self.table[x * n + z] {
                    continue;
                }
                for y in 0..n {
                    if !self.table[x * n + y] && !self.table[y * n + z] {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}

pub fn zero_one_from_quasipartition(p: &Quasipartition) -> ZeroOneQuasimetric {
    let n = p.size();
    ZeroOneQuasimetric {
        n,
        table: (0..n * n).map(|i| !p.contains(i / n, i % n)).collect(),
    }
}

/// `d_S(x,y) = 1` iff `x ∈ S` and `y ∉ S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirectedCutMetric {
    side: Vec<bool>,
}

impl DirectedCutMetric {
    pub fn from_indicator(side: Vec<bool>) -> Self {
        Self { side }
    }

    pub fn size(&self) -> usize {
        self.side.len()
    }

    pub fn in_side(&self, x: usize) -> bool {
        self.side[x]
    }

    pub fn side(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&x| self.side[x]).collect()
    }

    pub fn indicator(&self) -> &[bool] {
        &self.side
    }

    #[inline]
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        if self.side[x] && !self.side[y] {
            1.0
        } else {
            0.0
        }
    }

    pub fn to_zero_one(&self) -> ZeroOneQuasimetric {
        let n = self.side.len();
        ZeroOneQuasimetric {
            n,
            table: (0..n * n).map(|i| self.side[i / n] && !self.side[i % n]).collect(),
        }
    }
}

pub fn directed_cut_from_set(n: usize, set: &[usize]) -> Result<DirectedCutMetric, CoreError> {
    let mut side = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(CoreError::VertexOutOfRange { vertex: v, n });
        }
        side[v] = true;
    }
    Ok(DirectedCutMetric { side })
}
