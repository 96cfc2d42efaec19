//! Edit-latency harness: a scripted drag measured frame by frame.

use std::time::{Duration, Instant};

use crate::barycentric::VertexId;
use crate::error::Result;
use crate::point::Point2;
use crate::session::ModelingSession;

/// Per-frame timings of one scripted drag, sorted ascending.
#[derive(Debug, Clone)]
pub struct LatencyStats {
    samples: Vec<Duration>,
}

impl LatencyStats {
    pub fn from_samples(mut samples: Vec<Duration>) -> Self {
        samples.sort_unstable();
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Nearest-rank percentile, `q` in `[0, 1]`.
    pub fn percentile(&self, q: f64) -> Duration {
        if self.samples.is_empty() {
            return Duration::ZERO;
        }
        let rank = (q.clamp(0.0, 1.0) * self.samples.len() as f64).ceil() as usize;
        self.samples[rank.clamp(1, self.samples.len()) - 1]
    }

    pub fn median(&self) -> Duration {
        self.percentile(0.5)
    }

    pub fn p99(&self) -> Duration {
        self.percentile(0.99)
    }

    pub fn max(&self) -> Duration {
        self.samples.last().copied().unwrap_or_default()
    }
}

/// Drags vertex `C` around a small circle for `frames` edits, timing each
/// `move_vertex` plus the frame snapshot a renderer would take, then puts
/// the vertex back.
pub fn scripted_drag(session: &mut ModelingSession, frames: usize) -> Result<LatencyStats> {
    let home = session.current_basis().c;
    let span = {
        let b = session.current_basis();
        b.a.distance(b.b).max(b.a.distance(b.c)).max(1e-6)
    };
    let radius = 0.05 * span;
    let mut samples = Vec::with_capacity(frames);
    for k in 0..frames {
        let t = k as f64 / frames.max(1) as f64 * std::f64::consts::TAU;
        let target = home + Point2::new(radius * t.cos(), radius * t.sin());
        let started = Instant::now();
        session.move_vertex(VertexId::C, target)?;
        let frame = session.get_frame();
        std::hint::black_box(&frame.points);
        samples.push(started.elapsed());
    }
    session.move_vertex(VertexId::C, home)?;
    Ok(LatencyStats::from_samples(samples))
}
