//! Hausdorff distance between finite point sets under the Euclidean metric.
//!
//! [`hausdorff_distance`] is the exhaustive O(|a|·|b|) definition.
//! [`hausdorff_distance_indexed`] answers the same question through a KD-tree
//! and is exact as well; it exists for attractor-scale clouds (10^5 points
//! and up) where the quadratic form is too slow.

use kiddo::immutable::float::kdtree::ImmutableKdTree;
use kiddo::SquaredEuclidean;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::point::{Point2, PointSet};

/// `max_{p ∈ from} min_{q ∈ to} |p - q|`, brute force.
pub fn directed_hausdorff(from: &PointSet, to: &PointSet) -> Result<f64> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let targets = to.as_slice();
    let worst_sq = from
        .as_slice()
        .par_iter()
        .map(|p| {
            targets
                .iter()
                .map(|q| p.distance_squared(*q))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst_sq.sqrt())
}

/// Symmetric Hausdorff distance, brute force over all pairs.
pub fn hausdorff_distance(a: &PointSet, b: &PointSet) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

type Tree = ImmutableKdTree<f64, u32, 2, 32>;

/// Nearest-neighbour index over a fixed point set.
pub struct PointIndex {
    tree: Tree,
}

impl PointIndex {
    pub fn new(s: &PointSet) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let coords: Vec<[f64; 2]> = s.iter().map(|p| [p.x, p.y]).collect();
        Ok(Self {
            tree: Tree::new_from_slice(&coords),
        })
    }

    pub fn nearest_distance(&self, p: Point2) -> f64 {
        self.tree
            .nearest_one::<SquaredEuclidean>(&[p.x, p.y])
            .distance
            .sqrt()
    }

    /// Directed distance from every point of `from` to this index.
    pub fn directed_from(&self, from: &[Point2]) -> f64 {
        from.par_iter()
            .map(|p| self.nearest_distance(*p))
            .reduce(|| 0.0, f64::max)
    }
}

/// Directed distance via a KD-tree over `to`.
pub fn directed_hausdorff_indexed(from: &PointSet, to: &PointSet) -> Result<f64> {
    if from.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    Ok(PointIndex::new(to)?.directed_from(from.as_slice()))
}

/// Same value as [`hausdorff_distance`], computed with two KD-trees.
pub fn hausdorff_distance_indexed(a: &PointSet, b: &PointSet) -> Result<f64> {
    Ok(directed_hausdorff_indexed(a, b)?.max(directed_hausdorff_indexed(b, a)?))
}
