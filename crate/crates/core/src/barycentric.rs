//! Affine bases of the plane and conversion between rectangular and
//! barycentric coordinates.
//!
//! With basis vertices `A = (a1, a2)`, `B = (b1, b2)`, `C = (c1, c2)` the
//! conversion matrix is
//!
//! ```text
//!     | a1 b1 c1 |
//! T = | a2 b2 c2 |      (x, y, 1)ᵀ = T (a, b, c)ᵀ
//!     |  1  1  1 |
//! ```
//!
//! and the inverse direction uses the adjugate of `T` divided by
//! `det T = a1 b2 - b1 a2 + b1 c2 - c1 b2 + c1 a2 - a1 c2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::AffineMap2;
use crate::point::{Point2, PointSet};

/// Relative degeneracy threshold: a basis is rejected when
/// `|det T| <= DEGENERACY_REL * max(1, L²)`, `L` the longest edge.
pub const DEGENERACY_REL: f64 = 1e-9;

const PARTITION_TOL: f64 = 1e-12;

/// An ordered vertex triple `(A, B, C)` used as an affine frame.
///
/// Construction does not reject collinear triples; operations that need an
/// invertible frame check [`AffineBasis::validate`] and fail with
/// [`Error::DegenerateBasis`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineBasis {
    pub a: Point2,
    pub b: Point2,
    pub c: Point2,
}

impl AffineBasis {
    pub const fn new(a: Point2, b: Point2, c: Point2) -> Self {
        Self { a, b, c }
    }

    /// `[x1, y1, x2, y2, x3, y3]`.
    pub fn from_flat(v: [f64; 6]) -> Self {
        Self::new(
            Point2::new(v[0], v[1]),
            Point2::new(v[2], v[3]),
            Point2::new(v[4], v[5]),
        )
    }

    pub fn to_flat(&self) -> [f64; 6] {
        [self.a.x, self.a.y, self.b.x, self.b.y, self.c.x, self.c.y]
    }

    pub fn vertices(&self) -> [Point2; 3] {
        [self.a, self.b, self.c]
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }

    /// `T` as in the module docs, row-major.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [
            [self.a.x, self.b.x, self.c.x],
            [self.a.y, self.b.y, self.c.y],
            [1.0, 1.0, 1.0],
        ]
    }

    /// The six-term expansion of `det T`; twice the signed area of `ABC`.
    pub fn determinant(&self) -> f64 {
        let (a1, a2) = (self.a.x, self.a.y);
        let (b1, b2) = (self.b.x, self.b.y);
        let (c1, c2) = (self.c.x, self.c.y);
        a1 * b2 - b1 * a2 + b1 * c2 - c1 * b2 + c1 * a2 - a1 * c2
    }

    fn longest_edge_squared(&self) -> f64 {
        self.a
            .distance_squared(self.b)
            .max(self.b.distance_squared(self.c))
            .max(self.c.distance_squared(self.a))
    }

    /// Scale-aware threshold below which `|det T|` counts as zero.
    pub fn degeneracy_threshold(&self) -> f64 {
        DEGENERACY_REL * self.longest_edge_squared().max(1.0)
    }

    pub fn is_degenerate(&self) -> bool {
        let det = self.determinant();
        !(det.is_finite() && det.abs() > self.degeneracy_threshold())
    }

    /// Returns `det T` when the frame is usable.
    pub fn validate(&self) -> Result<f64> {
        let det = self.determinant();
        let threshold = self.degeneracy_threshold();
        if det.is_finite() && det.abs() > threshold {
            Ok(det)
        } else {
            Err(Error::DegenerateBasis {
                det: det.abs(),
                threshold,
            })
        }
    }

    pub fn centroid(&self) -> Point2 {
        Point2::new(
            (self.a.x + self.b.x + self.c.x) / 3.0,
            (self.a.y + self.b.y + self.c.y) / 3.0,
        )
    }

    pub fn vertex(&self, v: VertexId) -> Point2 {
        match v {
            VertexId::A => self.a,
            VertexId::B => self.b,
            VertexId::C => self.c,
        }
    }

    pub fn with_vertex(mut self, v: VertexId, p: Point2) -> Self {
        match v {
            VertexId::A => self.a = p,
            VertexId::B => self.b = p,
            VertexId::C => self.c = p,
        }
        self
    }

    /// The basis with every vertex pushed through `g`.
    pub fn mapped(&self, g: &AffineMap2) -> Self {
        Self::new(g.apply(self.a), g.apply(self.b), g.apply(self.c))
    }
}

/// Names a basis vertex. Ordered `A < B < C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VertexId {
    A,
    B,
    C,
}

impl VertexId {
    pub const ALL: [VertexId; 3] = [VertexId::A, VertexId::B, VertexId::C];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::str::FromStr for VertexId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(VertexId::A),
            "B" | "b" => Ok(VertexId::B),
            "C" | "c" => Ok(VertexId::C),
            other => Err(format!("unknown vertex {other:?}, expected A, B or C")),
        }
    }
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VertexId::A => "A",
            VertexId::B => "B",
            VertexId::C => "C",
        };
        f.write_str(s)
    }
}

/// Barycentric weights `(a, b, c)` with `a + b + c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaryCoord {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BaryCoord {
    /// Checks the affine-combination constraint, relative to the component magnitude.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let sum = a + b + c;
        let scale = (a.abs() + b.abs() + c.abs()).max(1.0);
        if !sum.is_finite() || (sum - 1.0).abs() > PARTITION_TOL * scale {
            return Err(Error::NotAffineCombination { sum });
        }
        Ok(Self { a, b, c })
    }

    pub fn sum(&self) -> f64 {
        self.a + self.b + self.c
    }
}

/// Barycentric coordinates of a whole point set, index-parallel to it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BarySet {
    coords: Vec<BaryCoord>,
}

impl BarySet {
    pub fn new(coords: Vec<BaryCoord>) -> Self {
        Self { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn as_slice(&self) -> &[BaryCoord] {
        &self.coords
    }
}

/// `T` for the given basis; degenerate bases still produce a matrix.
pub fn basis_matrix(basis: &AffineBasis) -> [[f64; 3]; 3] {
    basis.matrix()
}

pub fn basis_determinant(basis: &AffineBasis) -> f64 {
    basis.determinant()
}

/// Precomputed `T⁻¹` for repeated rectangular-to-barycentric conversion.
#[derive(Debug, Clone, Copy)]
struct InverseFrame {
    rows: [[f64; 3]; 3],
}

impl InverseFrame {
    fn new(basis: &AffineBasis) -> Result<Self> {
        let det = basis.validate()?;
        let (a1, a2) = (basis.a.x, basis.a.y);
        let (b1, b2) = (basis.b.x, basis.b.y);
        let (c1, c2) = (basis.c.x, basis.c.y);
        let adj = [
            [b2 - c2, c1 - b1, b1 * c2 - b2 * c1],
            [c2 - a2, a1 - c1, a2 * c1 - a1 * c2],
            [a2 - b2, b1 - a1, a1 * b2 - a2 * b1],
        ];
        let inv = 1.0 / det;
        Ok(Self {
            rows: adj.map(|r| r.map(|v| v * inv)),
        })
    }

    #[inline]
    fn convert(&self, p: Point2) -> BaryCoord {
        let [ra, rb, rc] = &self.rows;
        BaryCoord {
            a: ra[0] * p.x + ra[1] * p.y + ra[2],
            b: rb[0] * p.x + rb[1] * p.y + rb[2],
            c: rc[0] * p.x + rc[1] * p.y + rc[2],
        }
    }
}

pub fn to_barycentric(basis: &AffineBasis, p: Point2) -> Result<BaryCoord> {
    Ok(InverseFrame::new(basis)?.convert(p))
}

/// `a A + b B + c C`.
#[inline]
pub fn from_barycentric(basis: &AffineBasis, q: BaryCoord) -> Point2 {
    Point2::new(
        q.a * basis.a.x + q.b * basis.b.x + q.c * basis.c.x,
        q.a * basis.a.y + q.b * basis.b.y + q.c * basis.c.y,
    )
}

pub fn to_barycentric_set(basis: &AffineBasis, s: &PointSet) -> Result<BarySet> {
    let frame = InverseFrame::new(basis)?;
    Ok(BarySet::new(
        s.as_slice().par_iter().map(|p| frame.convert(*p)).collect(),
    ))
}

pub fn from_barycentric_set(basis: &AffineBasis, bs: &BarySet) -> PointSet {
    PointSet::from_vec_unchecked(
        bs.as_slice()
            .par_iter()
            .map(|q| from_barycentric(basis, *q))
            .collect(),
    )
}

/// The unique affine map sending `old.A, old.B, old.C` to `new.A, new.B, new.C`.
///
/// Computed as the top two rows of `T_new · T_old⁻¹`. `new` may be degenerate,
/// which yields a rank-deficient map.
pub fn retarget_map(old: &AffineBasis, new: &AffineBasis) -> Result<AffineMap2> {
    let inv = InverseFrame::new(old)?.rows;
    let top = [[new.a.x, new.b.x, new.c.x], [new.a.y, new.b.y, new.c.y]];
    let entry = |r: usize, c: usize| top[r][0] * inv[0][c] + top[r][1] * inv[1][c] + top[r][2] * inv[2][c];
    AffineMap2::new(
        entry(0, 0),
        entry(0, 1),
        entry(1, 0),
        entry(1, 1),
        entry(0, 2),
        entry(1, 2),
    )
}

/// Applies `map` to every point, preserving order.
pub fn apply_map_to_set(map: &AffineMap2, s: &PointSet) -> PointSet {
    PointSet::from_vec_unchecked(s.as_slice().par_iter().map(|p| map.apply(*p)).collect())
}
