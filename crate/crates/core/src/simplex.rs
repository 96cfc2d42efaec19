//! Minimal canonical simplex: the smallest isosceles right triangle with
//! axis-parallel legs that contains a point cloud.
//!
//! With the right angle at the lower-left box corner `(xmin, ymin)` the only
//! free parameter is the leg length `L`, and the hypotenuse
//! `x + y = xmin + ymin + L` is the binding constraint, so
//! `L = max_p ((p.x - xmin) + (p.y - ymin))`. The other three reflections are
//! the same construction about a different corner.

use crate::barycentric::AffineBasis;
use crate::error::{Error, Result};
use crate::ifs::{chaos_game, ChaosParams, IfsSystem};
use crate::point::{Point2, PointSet};

/// Leg padding for clouds with (near) zero extent, relative to `max(1, |corner|)`.
/// Large enough that the padded triangle passes the basis degeneracy check
/// (`|det T| = L²` must exceed `1e-9 · max(1, 2L²)`).
pub const LEG_PADDING_REL: f64 = 1e-4;

/// Axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box2 {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Box2 {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Option<Self> {
        let finite = [xmin, ymin, xmax, ymax].iter().all(|v| v.is_finite());
        (finite && xmin <= xmax && ymin <= ymax).then_some(Self {
            xmin,
            ymin,
            xmax,
            ymax,
        })
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    pub fn include(&mut self, p: Point2) {
        self.xmin = self.xmin.min(p.x);
        self.ymin = self.ymin.min(p.y);
        self.xmax = self.xmax.max(p.x);
        self.ymax = self.ymax.max(p.y);
    }

    /// Grows each side by `frac` of the corresponding extent.
    pub fn expanded(&self, frac: f64) -> Self {
        let dx = self.width() * frac;
        let dy = self.height() * frac;
        Self {
            xmin: self.xmin - dx,
            ymin: self.ymin - dy,
            xmax: self.xmax + dx,
            ymax: self.ymax + dy,
        }
    }
}

/// Tight bounds of a nonempty point set.
pub fn bounding_box(s: &PointSet) -> Result<Box2> {
    let mut it = s.iter();
    let first = *it.next().ok_or(Error::EmptyPointSet)?;
    let mut b = Box2 {
        xmin: first.x,
        ymin: first.y,
        xmax: first.x,
        ymax: first.y,
    };
    for p in it {
        b.include(*p);
    }
    Ok(b)
}

/// Which bounding-box corner carries the right angle. Legs point away from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimplexOrientation {
    /// Corner `(xmin, ymin)`, legs toward +x and +y.
    #[default]
    LowerLeft,
    /// Corner `(xmax, ymin)`, legs toward -x and +y.
    LowerRight,
    /// Corner `(xmin, ymax)`, legs toward +x and -y.
    UpperLeft,
    /// Corner `(xmax, ymax)`, legs toward -x and -y.
    UpperRight,
}

impl SimplexOrientation {
    fn signs(self) -> (f64, f64) {
        match self {
            SimplexOrientation::LowerLeft => (1.0, 1.0),
            SimplexOrientation::LowerRight => (-1.0, 1.0),
            SimplexOrientation::UpperLeft => (1.0, -1.0),
            SimplexOrientation::UpperRight => (-1.0, -1.0),
        }
    }
}

/// Corner and leg of a canonical simplex; `basis()` gives the triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalSimplex {
    pub corner: Point2,
    pub leg: f64,
    pub orientation: SimplexOrientation,
}

impl CanonicalSimplex {
    /// `(corner, corner + L·x̂, corner + L·ŷ)` with signs from the orientation.
    pub fn basis(&self) -> AffineBasis {
        let (sx, sy) = self.orientation.signs();
        let c = self.corner;
        AffineBasis::new(
            c,
            Point2::new(c.x + sx * self.leg, c.y),
            Point2::new(c.x, c.y + sy * self.leg),
        )
    }

    /// Signed offset of `p` along the hypotenuse normal; `<= leg` inside.
    pub fn level(&self, p: Point2) -> f64 {
        let (sx, sy) = self.orientation.signs();
        sx * (p.x - self.corner.x) + sy * (p.y - self.corner.y)
    }

    pub fn area(&self) -> f64 {
        0.5 * self.leg * self.leg
    }
}

/// The simplex with its parameters, in any of the four orientations.
pub fn canonical_simplex(s: &PointSet, orientation: SimplexOrientation) -> Result<CanonicalSimplex> {
    let bbox = bounding_box(s)?;
    let (sx, sy) = orientation.signs();
    let corner = Point2::new(
        if sx > 0.0 { bbox.xmin } else { bbox.xmax },
        if sy > 0.0 { bbox.ymin } else { bbox.ymax },
    );
    let leg = s
        .iter()
        .map(|p| sx * (p.x - corner.x) + sy * (p.y - corner.y))
        .fold(0.0, f64::max);
    let pad = LEG_PADDING_REL * corner.x.abs().max(corner.y.abs()).max(1.0);
    Ok(CanonicalSimplex {
        corner,
        leg: leg.max(pad),
        orientation,
    })
}

/// Minimal canonical simplex with the right angle at `(xmin, ymin)`.
pub fn minimal_canonical_simplex(s: &PointSet) -> Result<AffineBasis> {
    Ok(canonical_simplex(s, SimplexOrientation::default())?.basis())
}

/// Simplex of the n-th preattractor: chaos game, then [`minimal_canonical_simplex`].
///
/// `params.n_points` of 10^5 or more samples typical attractors well enough
/// for the simplex to stabilise.
pub fn simplex_for_ifs(ifs: &IfsSystem, params: &ChaosParams) -> Result<AffineBasis> {
    minimal_canonical_simplex(&chaos_game(ifs, params)?)
}
