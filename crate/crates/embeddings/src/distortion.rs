use qcut_core::QuasimetricSpace;

/// Best scaling `alpha` with `d ≤ alpha·d'` and the resulting distortion
/// `alpha · max d'/d`, over pairs with finite positive source distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distortion {
    pub alpha: f64,
    pub distortion: f64,
    /// Pair attaining `alpha`.
    pub contraction: Option<(usize, usize)>,
    /// Pair attaining the largest `d'/d`.
    pub expansion: Option<(usize, usize)>,
}

/// Infinite when some pair at positive distance is mapped to zero, or a pair
/// at distance zero is mapped apart.
pub fn exact_distortion(q: &QuasimetricSpace, image: impl Fn(usize, usize) -> f64) -> Distortion {
    let n = q.size();
    let mut alpha: f64 = 0.0;
    let mut expand: f64 = 0.0;
    let (mut contraction, mut expansion) = (None, None);
    let mut degenerate = false;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let (d, e) = (q.get(x, y), image(x, y));
            if !d.is_finite() {
                continue;
            }
            if d <= qcut_core::TOL {
                degenerate |= e > qcut_core::TOL;
                continue;
            }
            let c = if e > 0.0 { d / e } else { f64::INFINITY };
            if c > alpha {
                alpha = c;
                contraction = Some((x, y));
            }
            if e / d > expand {
                expand = e / d;
                expansion = Some((x, y));
            }
        }
    }
    let distortion = if degenerate || alpha.is_infinite() {
        f64::INFINITY
    } else if contraction.is_none() {
        1.0
    } else {
        alpha * expand
    };
    Distortion {
        alpha,
        distortion,
        contraction,
        expansion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_copy_has_distortion_one() {
        let q = QuasimetricSpace::from_rows(vec![vec![0.0, 2.0], vec![4.0, 0.0]]).unwrap();
        let d = exact_distortion(&q, |x, y| q.get(x, y) / 8.0);
        assert!((d.alpha - 8.0).abs() < 1e-12);
        assert!((d.distortion - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collapsed_pair_is_infinite() {
        let q = QuasimetricSpace::from_rows(vec![vec![0.0, 2.0], vec![4.0, 0.0]]).unwrap();
        let d = exact_distortion(&q, |x, _| if x == 0 { 0.0 } else { 1.0 });
        assert!(d.distortion.is_infinite());
    }

    #[test]
    fn uneven_stretch() {
        let q = QuasimetricSpace::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let d = exact_distortion(&q, |x, _| if x == 0 { 1.0 } else { 3.0 });
        assert!((d.distortion - 3.0).abs() < 1e-12);
        assert_eq!(d.contraction, Some((0, 1)));
        assert_eq!(d.expansion, Some((1, 0)));
    }
}
