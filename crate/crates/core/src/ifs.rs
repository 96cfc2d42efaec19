//! Iterated function systems on the plane and their chaos-game rendering.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::point::{Point2, PointSet};
use crate::rng::XorShift64Star;

/// Points discarded at the head of every chaos-game orbit unless overridden.
pub const DEFAULT_BURN_IN: usize = 14;

/// Floor applied to `|det A|` by [`IfsSystem::with_det_weights`].
const DET_WEIGHT_FLOOR: f64 = 0.01;

/// Tolerance on the sum of selection weights.
const WEIGHT_SUM_TOL: f64 = 1e-9;

/// An affine map `w(x) = A x + b` of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap2 {
    a11: f64,
    a12: f64,
    a21: f64,
    a22: f64,
    b1: f64,
    b2: f64,
}

impl AffineMap2 {
    pub const IDENTITY: AffineMap2 = AffineMap2 {
        a11: 1.0,
        a12: 0.0,
        a21: 0.0,
        a22: 1.0,
        b1: 0.0,
        b2: 0.0,
    };

    /// Matrix entries row-major, then the translation.
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64, b1: f64, b2: f64) -> Result<Self> {
        let named = [
            ("a11", a11),
            ("a12", a12),
            ("a21", a21),
            ("a22", a22),
            ("b1", b1),
            ("b2", b2),
        ];
        if let Some((name, _)) = named.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteCoefficient { name });
        }
        Ok(Self {
            a11,
            a12,
            a21,
            a22,
            b1,
            b2,
        })
    }

    pub fn from_coefficients(c: [f64; 6]) -> Result<Self> {
        Self::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }

    pub fn coefficients(&self) -> [f64; 6] {
        [self.a11, self.a12, self.a21, self.a22, self.b1, self.b2]
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn translation(&self) -> Point2 {
        Point2::new(self.b1, self.b2)
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        Point2::new(
            self.a11 * p.x + self.a12 * p.y + self.b1,
            self.a21 * p.x + self.a22 * p.y + self.b2,
        )
    }

    /// The linear part only, `A v`.
    #[inline]
    pub fn apply_linear(&self, v: Point2) -> Point2 {
        Point2::new(self.a11 * v.x + self.a12 * v.y, self.a21 * v.x + self.a22 * v.y)
    }

    pub fn determinant(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    /// Largest singular value of `A`: the smallest Lipschitz constant of the
    /// map under the Euclidean metric.
    ///
    /// Closed form from the eigenvalues of the symmetric 2x2 matrix `AᵀA`:
    /// `λmax = (p + r)/2 + sqrt(((p - r)/2)² + q²)`.
    pub fn contractivity(&self) -> f64 {
        let p = self.a11 * self.a11 + self.a21 * self.a21;
        let r = self.a12 * self.a12 + self.a22 * self.a22;
        let q = self.a11 * self.a12 + self.a21 * self.a22;
        let mean = 0.5 * (p + r);
        let half_diff = 0.5 * (p - r);
        let lambda_max = mean + half_diff.hypot(q);
        lambda_max.max(0.0).sqrt()
    }
}

/// Applies a single map to a point.
pub fn apply_map(map: &AffineMap2, p: Point2) -> Point2 {
    map.apply(p)
}

pub fn map_contractivity(map: &AffineMap2) -> f64 {
    map.contractivity()
}

/// An ordered, nonempty list of affine maps with optional selection weights.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsSystem {
    maps: Vec<AffineMap2>,
    weights: Option<Vec<f64>>,
}

impl IfsSystem {
    /// Uniform map selection.
    pub fn new(maps: Vec<AffineMap2>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::EmptySystem);
        }
        Ok(Self { maps, weights: None })
    }

    /// Weights must be positive, one per map, and sum to 1 within 1e-9.
    pub fn with_weights(maps: Vec<AffineMap2>, weights: Vec<f64>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::EmptySystem);
        }
        if weights.len() != maps.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {} maps",
                weights.len(),
                maps.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(Self {
            maps,
            weights: Some(weights),
        })
    }

    /// Weights proportional to `max(|det Aᵢ|, 0.01)`, the usual density heuristic.
    pub fn with_det_weights(maps: Vec<AffineMap2>) -> Result<Self> {
        let raw: Vec<f64> = maps
            .iter()
            .map(|m| m.determinant().abs().max(DET_WEIGHT_FLOOR))
            .collect();
        let total: f64 = raw.iter().sum();
        Self::with_weights(maps, raw.into_iter().map(|w| w / total).collect())
    }

    pub fn maps(&self) -> &[AffineMap2] {
        &self.maps
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `s = max sᵢ`. Values `>= 1` are reported, never rejected.
    pub fn contractivity(&self) -> f64 {
        self.maps
            .iter()
            .map(AffineMap2::contractivity)
            .fold(0.0, f64::max)
    }

    pub fn is_contractive(&self) -> bool {
        self.contractivity() < 1.0
    }
}

pub fn system_contractivity(ifs: &IfsSystem) -> f64 {
    ifs.contractivity()
}

/// Chaos-game settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosParams {
    pub n_points: usize,
    pub burn_in: usize,
    pub seed: u64,
    /// Orbit start; the origin when `None`.
    pub start: Option<Point2>,
}

impl ChaosParams {
    pub fn new(n_points: usize) -> Self {
        Self {
            n_points,
            burn_in: DEFAULT_BURN_IN,
            seed: 0,
            start: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn start(mut self, start: Point2) -> Self {
        self.start = Some(start);
        self
    }
}

/// Picks map indices from a [`XorShift64Star`] stream.
///
/// Each step draws one unit float `u`. Uniform systems take `floor(u * n)`;
/// weighted systems take the first index whose cumulative weight exceeds `u`
/// (the last index if rounding leaves `u` above the final partial sum).
struct MapSelector {
    rng: XorShift64Star,
    n: usize,
    cumulative: Option<Vec<f64>>,
}

impl MapSelector {
    fn new(ifs: &IfsSystem, seed: u64) -> Self {
        let cumulative = ifs.weights().map(|w| {
            w.iter()
                .scan(0.0, |acc, &x| {
                    *acc += x;
                    Some(*acc)
                })
                .collect()
        });
        Self {
            rng: XorShift64Star::new(seed),
            n: ifs.len(),
            cumulative,
        }
    }

    #[inline]
    fn next(&mut self) -> usize {
        let u = self.rng.next_f64();
        match &self.cumulative {
            None => ((u * self.n as f64) as usize).min(self.n - 1),
            Some(c) => c.iter().position(|&edge| u < edge).unwrap_or(self.n - 1),
        }
    }
}

/// Random-iteration rendering of the attractor.
///
/// Starting from `params.start` (default origin), each step selects a map
/// with [`MapSelector`] seeded by `params.seed` and applies it. The first
/// `burn_in` orbit points are dropped and the next `n_points` are returned in
/// generation order, so a run is a prefix of any longer run with the same
/// seed, start and burn-in.
pub fn chaos_game(ifs: &IfsSystem, params: &ChaosParams) -> Result<PointSet> {
    if params.n_points == 0 {
        return Err(Error::ZeroPoints);
    }
    let start = params.start.unwrap_or(Point2::ORIGIN);
    if !start.is_finite() {
        return Err(Error::NonFinitePoint { index: 0 });
    }
    let maps = ifs.maps();
    let mut selector = MapSelector::new(ifs, params.seed);
    let mut p = start;
    for step in 0..params.burn_in {
        p = maps[selector.next()].apply(p);
        if !p.is_finite() {
            return Err(Error::Diverged { step });
        }
    }
    let mut points = Vec::with_capacity(params.n_points);
    for i in 0..params.n_points {
        p = maps[selector.next()].apply(p);
        if !p.is_finite() {
            return Err(Error::Diverged {
                step: params.burn_in + i,
            });
        }
        points.push(p);
    }
    Ok(PointSet::from_vec_unchecked(points))
}

/// One application of the Hutchinson operator `W(S) = ∪ wᵢ(S)`, map-major.
pub fn hutchinson_step(ifs: &IfsSystem, s: &PointSet) -> PointSet {
    let src = s.as_slice();
    let mut out = vec![Point2::ORIGIN; ifs.len() * src.len()];
    if !src.is_empty() {
        out.par_chunks_mut(src.len())
            .zip(ifs.maps().par_iter())
            .for_each(|(chunk, map)| {
                for (dst, p) in chunk.iter_mut().zip(src) {
                    *dst = map.apply(*p);
                }
            });
    }
    PointSet::from_vec_unchecked(out)
}
