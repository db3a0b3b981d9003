/// True if some `z + i·r` with `i ≥ 0` lies in `[a, b)`.
pub fn crosses(a: f64, b: f64, z: f64, r: f64) -> bool {
    if !(a < b) {
        return false;
    }
    let i = ((a - z) / r).ceil().max(0.0);
    let mut t = z + i * r;
    // ceil can land one step short through rounding
    if t < a {
        t += r;
    }
    t < b
}

/// True if `a ≤ z < b`.
pub fn crosses_once(a: f64, b: f64, z: f64) -> bool {
    a <= z && z < b
}

/// Sorted distinct values `v mod r` in `(0, r)` for finite `v ≥ 0`.
pub fn residues(values: impl IntoIterator<Item = f64>, r: f64) -> Vec<f64> {
    let mut out: Vec<f64> = values
        .into_iter()
        .filter(|v| v.is_finite())
        .map(|v| v.rem_euclid(r))
        .filter(|&m| m > 0.0 && m < r)
        .collect();
    dedup_sorted(&mut out);
    out
}

pub fn dedup_sorted(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

/// Cells `[lo, hi)` of `[0, len)` cut at the given interior points.
pub fn cells(points: &[f64], len: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.0];
    cuts.extend(points.iter().copied().filter(|&p| p > 0.0 && p < len));
    cuts.push(len);
    dedup_sorted(&mut cuts);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_multiples() {
        assert!(crosses(0.0, 1.0, 0.5, 2.0));
        assert!(!crosses(0.0, 0.4, 0.5, 2.0));
        assert!(crosses(2.0, 2.6, 0.5, 2.0));
        assert!(crosses(2.5, 2.6, 0.5, 2.0));
        assert!(!crosses(2.4, 2.5, 0.5, 2.0));
        assert!(crosses(7.0, f64::INFINITY, 0.5, 2.0));
        assert!(!crosses(3.0, 3.0, 1.0, 2.0));
        assert!(!crosses(3.0, 1.0, 1.0, 2.0));
    }

    #[test]
    fn residues_and_cells() {
        let r = residues([0.0, 1.0, 2.0, 3.0, f64::INFINITY], 1.5);
        assert_eq!(r, vec![0.5, 1.0]);
        assert_eq!(cells(&r, 1.5), vec![(0.0, 0.5), (0.5, 1.0), (1.0, 1.5)]);
    }
}
