//! Interactive modeling session: a fixed attractor sample bound to a control
//! triangle, re-emitted whenever a triangle vertex moves.
//!
//! Barycentric coordinates are taken once, against the basis in force when
//! the points were generated. Every edit then costs one 2x3 affine map
//! (`retarget_map(base, current)`) applied to the original points, so a long
//! drag accumulates no error: the state after k moves depends only on the
//! final basis.
//!
//! The session has a single writer. Readers on other threads take frames
//! through a [`FrameSource`]; a frame is an immutable `Arc` swapped in whole,
//! so a reader never sees points from one edit with the basis of another.

use std::sync::{Arc, RwLock};
use std::time::{Duration, Instant};

use crate::barycentric::{
    apply_map_to_set, from_barycentric_set, retarget_map, to_barycentric_set, AffineBasis, BarySet, VertexId,
};
use crate::error::Result;
use crate::ifs::{chaos_game, ChaosParams, IfsSystem};
use crate::point::{Point2, PointSet};
use crate::simplex::minimal_canonical_simplex;

/// How the control triangle is chosen at session start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisMode {
    UserTriangle(AffineBasis),
    MinimalSimplex,
}

/// Diagnostics attached to every frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Telemetry {
    /// `|det T|` of the current basis.
    pub det: f64,
    pub point_count: usize,
    /// Wall time of the edit (or initialisation) that produced the frame.
    pub last_update: Duration,
    pub contractivity: f64,
    /// Set when the system's contractivity factor is `>= 1`.
    pub non_contractive: bool,
}

/// Immutable render snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub points: PointSet,
    pub basis: AffineBasis,
    pub telemetry: Telemetry,
}

/// Cloneable read handle onto a session's latest frame.
#[derive(Debug, Clone)]
pub struct FrameSource {
    slot: Arc<RwLock<Arc<Frame>>>,
}

impl FrameSource {
    pub fn latest(&self) -> Arc<Frame> {
        Arc::clone(&self.slot.read().unwrap_or_else(|e| e.into_inner()))
    }

    fn publish(&self, frame: Arc<Frame>) {
        *self.slot.write().unwrap_or_else(|e| e.into_inner()) = frame;
    }
}

#[derive(Debug)]
pub struct ModelingSession {
    ifs: IfsSystem,
    params: ChaosParams,
    base_basis: AffineBasis,
    base_points: PointSet,
    bary_cache: BarySet,
    current: Arc<Frame>,
    source: FrameSource,
}

impl ModelingSession {
    /// Renders the attractor and binds it to the chosen basis.
    pub fn init(ifs: IfsSystem, params: ChaosParams, mode: BasisMode) -> Result<Self> {
        let started = Instant::now();
        if let BasisMode::UserTriangle(basis) = mode {
            basis.validate()?;
        }
        let points = chaos_game(&ifs, &params)?;
        let base_basis = match mode {
            BasisMode::UserTriangle(basis) => basis,
            BasisMode::MinimalSimplex => minimal_canonical_simplex(&points)?,
        };
        let det = base_basis.validate()?;
        let bary_cache = to_barycentric_set(&base_basis, &points)?;
        let contractivity = ifs.contractivity();
        let frame = Arc::new(Frame {
            points: points.clone(),
            basis: base_basis,
            telemetry: Telemetry {
                det: det.abs(),
                point_count: points.len(),
                last_update: started.elapsed(),
                contractivity,
                non_contractive: contractivity >= 1.0,
            },
        });
        Ok(Self {
            ifs,
            params,
            base_basis,
            base_points: points,
            bary_cache,
            source: FrameSource {
                slot: Arc::new(RwLock::new(Arc::clone(&frame))),
            },
            current: frame,
        })
    }

    /// Moves one vertex and re-emits the point cloud.
    ///
    /// A move that would make the basis degenerate is rejected and the
    /// session is left exactly as it was.
    pub fn move_vertex(&mut self, v: VertexId, new_pos: Point2) -> Result<Arc<Frame>> {
        self.set_basis(self.current.basis.with_vertex(v, new_pos))
    }

    /// Replaces the whole triangle in one transaction.
    pub fn set_basis(&mut self, basis: AffineBasis) -> Result<Arc<Frame>> {
        let started = Instant::now();
        let det = basis.validate()?;
        let map = retarget_map(&self.base_basis, &basis)?;
        let frame = Arc::new(Frame {
            points: apply_map_to_set(&map, &self.base_points),
            basis,
            telemetry: Telemetry {
                det: det.abs(),
                last_update: started.elapsed(),
                ..self.current.telemetry
            },
        });
        self.current = Arc::clone(&frame);
        self.source.publish(Arc::clone(&frame));
        Ok(frame)
    }

    /// Nearest vertex within `radius` of `cursor`; ties go to the earlier vertex.
    pub fn hit_test(&self, cursor: Point2, radius: f64) -> Option<VertexId> {
        hit_test_basis(&self.current.basis, cursor, radius)
    }

    pub fn get_frame(&self) -> Arc<Frame> {
        Arc::clone(&self.current)
    }

    pub fn frame_source(&self) -> FrameSource {
        self.source.clone()
    }

    pub fn ifs(&self) -> &IfsSystem {
        &self.ifs
    }

    pub fn params(&self) -> &ChaosParams {
        &self.params
    }

    pub fn base_basis(&self) -> &AffineBasis {
        &self.base_basis
    }

    pub fn current_basis(&self) -> &AffineBasis {
        &self.current.basis
    }

    /// The chaos-game output the session was initialised with.
    pub fn base_points(&self) -> &PointSet {
        &self.base_points
    }

    pub fn bary_cache(&self) -> &BarySet {
        &self.bary_cache
    }

    /// The defining identity recomputed point by point; a test oracle for the
    /// retarget path, O(n) with three products per point.
    pub fn reconvert(&self) -> PointSet {
        from_barycentric_set(&self.current.basis, &self.bary_cache)
    }
}

/// [`ModelingSession::hit_test`] over a bare triangle.
pub fn hit_test_basis(basis: &AffineBasis, cursor: Point2, radius: f64) -> Option<VertexId> {
    if radius.is_nan() || radius <= 0.0 {
        return None;
    }
    let r2 = radius * radius;
    let mut best: Option<(VertexId, f64)> = None;
    for v in VertexId::ALL {
        let d2 = basis.vertex(v).distance_squared(cursor);
        if d2 <= r2 && best.is_none_or(|(_, b)| d2 < b) {
            best = Some((v, d2));
        }
    }
    best.map(|(v, _)| v)
}
