use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde_json::{json, Value};

use crate::{approx_le, CoreError, WeightedDigraph, TOL};

/// Dense n×n distance table; `f64::INFINITY` marks unreachable pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasimetricSpace {
    n: usize,
    d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Diagonal { x: usize, value: f64 },
    Negative { x: usize, y: usize, value: f64 },
    ZeroOffDiagonal { x: usize, y: usize },
    Triangle { x: usize, y: usize, z: usize, excess: f64 },
}

impl QuasimetricSpace {
    pub fn from_table(n: usize, d: Vec<f64>) -> Result<Self, CoreError> {
        if d.len() != n * n {
            return Err(CoreError::SizeMismatch(d.len(), n * n));
        }
        Ok(Self { n, d })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, CoreError> {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(CoreError::SizeMismatch(r.len(), n));
            }
            d.extend(r);
        }
        Ok(Self { n, d })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.d[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.d[x * self.n..(x + 1) * self.n]
    }

    pub fn table(&self) -> &[f64] {
        &self.d
    }

    /// Largest finite distance.
    pub fn diameter(&self) -> f64 {
        self.d
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.d.iter().all(|v| v.is_finite())
    }

    /// Restriction to the listed points, in order.
    pub fn restrict(&self, points: &[usize]) -> QuasimetricSpace {
        let k = points.len();
        let mut d = Vec::with_capacity(k * k);
        for &a in points {
            for &b in points {
                d.push(self.get(a, b));
            }
        }
        QuasimetricSpace { n: k, d }
    }

    /// JSON matrix with `"inf"` for unreachable pairs.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.n)
                .map(|x| {
                    Value::Array(
                        self.row(x)
                            .iter()
                            .map(|&v| if v.is_finite() { json!(v) } else { json!("inf") })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, CoreError> {
        let bad = |msg: &str| CoreError::Parse {
            line: 0,
            msg: msg.to_string(),
        };
        let rows = v.as_array().ok_or_else(|| bad("expected array of rows"))?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or_else(|| bad("expected row array"))?;
            let mut row = Vec::with_capacity(r.len());
            for c in r {
                row.push(match c {
                    Value::String(s) if s == "inf" => f64::INFINITY,
                    other => other.as_f64().ok_or_else(|| bad("expected number or \"inf\""))?,
                });
            }
            out.push(row);
        }
        Self::from_rows(out)
    }
}

#[derive(PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Single-source distances over `adj` (edge indices per vertex).
/// With `reverse`, follows edges backwards, giving distances *to* `src`.
pub fn dijkstra_with(
    g: &WeightedDigraph,
    adj: &[Vec<usize>],
    src: usize,
    reverse: bool,
) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(HeapItem(0.0, src));
    while let Some(HeapItem(du, u)) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        for &ei in &adj[u] {
            let e = g.edge(ei);
            let v = if reverse { e.tail } else { e.head };
            let nd = du + e.weight;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapItem(nd, v));
            }
        }
    }
    dist
}

pub fn dijkstra(g: &WeightedDigraph, src: usize) -> Vec<f64> {
    dijkstra_with(g, &g.out_adjacency(), src, false)
}

pub fn shortest_path_quasimetric(g: &WeightedDigraph) -> QuasimetricSpace {
    let n = g.vertex_count();
    let adj = g.out_adjacency();
    let mut d = Vec::with_capacity(n * n);
    for s in 0..n {
        d.extend(dijkstra_with(g, &adj, s, false));
    }
    QuasimetricSpace { n, d }
}

/// Axiom violations; `d(x,y)=0 ⇒ x=y` is only checked when `strict`.
pub fn validate_quasimetric(q: &QuasimetricSpace, strict: bool) -> Vec<Violation> {
    let n = q.size();
    let mut out = Vec::new();
    for x in 0..n {
        let v = q.get(x, x);
        if v.abs() > TOL {
            out.push(Violation::Diagonal { x, value: v });
        }
        for y in 0..n {
            let v = q.get(x, y);
            if v < -TOL || v.is_nan() {
                out.push(Violation::Negative { x, y, value: v });
            }
            if strict && x != y && v.abs() <= TOL {
                out.push(Violation::ZeroOffDiagonal { x, y });
            }
        }
    }
    for x in 0..n {
        for z in 0..n {
            let dxz = q.get(x, z);
            if dxz.is_infinite() {
                continue;
            }
            for y in 0..n {
                let via = dxz + q.get(z, y);
                let direct = q.get(x, y);
                if !approx_le(direct, via) {
                    out.push(Violation::Triangle {
                        x,
                        y,
                        z,
                        excess: direct - via,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> WeightedDigraph {
        let mut g = WeightedDigraph::new(3);
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(1, 2, 1.0).unwrap();
        g.add_edge(2, 0, 1.0).unwrap();
        g
    }

    #[test]
    fn directed_cycle_distances() {
        let q = shortest_path_quasimetric(&cycle3());
        assert_eq!(q.get(0, 1), 1.0);
        assert_eq!(q.get(1, 0), 2.0);
        assert!(validate_quasimetric(&q, true).is_empty());
    }

    #[test]
    fn unreachable_is_infinite() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge(0, 1, 5.0).unwrap();
        let q = shortest_path_quasimetric(&g);
        assert_eq!(q.get(0, 1), 5.0);
        assert!(q.get(1, 0).is_infinite());
        assert!(validate_quasimetric(&q, false).is_empty());
    }

    #[test]
    fn two_hop_shortcut() {
        let mut g = WeightedDigraph::new(3);
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(1, 2, 1.0).unwrap();
        g.add_edge(0, 2, 3.0).unwrap();
        assert_eq!(shortest_path_quasimetric(&g).get(0, 2), 2.0);
    }

    #[test]
    fn forced_triangle_violation() {
        let q = QuasimetricSpace::from_rows(vec![
            vec![0.0, 5.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        let v = validate_quasimetric(&q, false);
        assert!(v.contains(&Violation::Triangle {
            x: 0,
            y: 1,
            z: 2,
            excess: 3.0
        }));
    }

    #[test]
    fn zero_edge_needs_relaxed_mode() {
        let mut g = WeightedDigraph::new(2);
        g.add_bidirected(0, 1, 0.0, 0.0).unwrap();
        let q = shortest_path_quasimetric(&g);
        assert!(validate_quasimetric(&q, false).is_empty());
        assert_eq!(validate_quasimetric(&q, true).len(), 2);
    }

    #[test]
    fn empty_graph() {
        let q = shortest_path_quasimetric(&WeightedDigraph::new(0));
        assert_eq!(q.size(), 0);
        assert_eq!(q.diameter(), 0.0);
    }

    #[test]
    fn json_uses_inf_sentinel() {
        let mut g = WeightedDigraph::new(2);
        g.add_edge(0, 1, 2.0).unwrap();
        let q = shortest_path_quasimetric(&g);
        let j = q.to_json();
        assert_eq!(j[1][0], json!("inf"));
        assert_eq!(QuasimetricSpace::from_json(&j).unwrap(), q);
    }
}
