use serde::{Deserialize, Serialize};

use crate::{approx_eq, CoreError, QuasimetricSpace};

/// `Σ|x_i - y_i| + Σx_i - Σy_i`.
pub fn directed_l1_distance(x: &[f64], y: &[f64]) -> Result<f64, CoreError> {
    if x.len() != y.len() {
        return Err(CoreError::DimensionMismatch(x.len(), y.len()));
    }
    // |a-b| + a - b written as 2·max(a-b, 0) to avoid negative round-off
    Ok(x.iter().zip(y).map(|(a, b)| 2.0 * (a - b).max(0.0)).sum())
}

/// Point per vertex in directed l1 together with a scale factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectedL1Embedding {
    coords: Vec<Vec<f64>>,
    scale: f64,
}

impl DirectedL1Embedding {
    pub fn new(coords: Vec<Vec<f64>>, scale: f64) -> Result<Self, CoreError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(CoreError::BadScale(scale));
        }
        let dim = coords.first().map_or(0, Vec::len);
        for (v, c) in coords.iter().enumerate() {
            if c.len() != dim {
                return Err(CoreError::DimensionMismatch(c.len(), dim));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(CoreError::NonFiniteCoordinate(v));
            }
        }
        Ok(Self { coords, scale })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.coords.first().map_or(0, Vec::len)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn coords(&self) -> &[Vec<f64>] {
        &self.coords
    }

    /// Unscaled directed l1 distance between the images of `x` and `y`.
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        directed_l1_distance(&self.coords[x], &self.coords[y]).expect("uniform dimension")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    /// Smallest `c` with `d <= α·d' <= c·d`; infinite if the embedding contracts.
    pub distortion: f64,
    /// `max / min` of the stretch `α·d'/d`, the distortion after the best rescaling.
    pub rescaled_distortion: f64,
    pub min_stretch: f64,
    pub max_stretch: f64,
    /// Pairs with infinite source distance, left out of the ratios.
    pub excluded: Vec<(usize, usize)>,
}

pub fn evaluate_embedding(
    e: &DirectedL1Embedding,
    q: &QuasimetricSpace,
) -> Result<DistortionReport, CoreError> {
    if e.len() != q.size() {
        return Err(CoreError::SizeMismatch(e.len(), q.size()));
    }
    let n = q.size();
    let mut min_stretch = f64::INFINITY;
    let mut max_stretch: f64 = 0.0;
    let mut excluded = Vec::new();
    let mut degenerate = false;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let d = q.get(x, y);
            if d.is_infinite() {
                excluded.push((x, y));
                continue;
            }
            let img = e.scale * e.distance(x, y);
            if approx_eq(d, 0.0) {
                degenerate |= !approx_eq(img, 0.0);
                continue;
            }
            let s = img / d;
            min_stretch = min_stretch.min(s);
            max_stretch = max_stretch.max(s);
        }
    }
    if min_stretch.is_infinite() {
        min_stretch = 1.0;
        max_stretch = max_stretch.max(1.0);
    }
    let rescaled = if degenerate || min_stretch <= 0.0 {
        f64::INFINITY
    } else {
        max_stretch / min_stretch
    };
    let distortion = if degenerate || min_stretch < 1.0 - crate::TOL {
        f64::INFINITY
    } else {
        max_stretch.max(1.0)
    };
    Ok(DistortionReport {
        distortion,
        rescaled_distortion: rescaled,
        min_stretch,
        max_stretch,
        excluded,
    })
}
