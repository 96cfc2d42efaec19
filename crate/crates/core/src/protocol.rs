//! JSON message protocol over a [`ModelingSession`].
//!
//! One request object in, one response object out. The same shapes serve an
//! in-process binding, the `session` CLI subcommand (JSON lines on
//! stdin/stdout) and a local service.
//!
//! Requests:
//!
//! ```json
//! {"type": "init", "ifs": "<IFS file text>", "points": 100000, "burn_in": 14, "seed": 42, "basis": "auto"}
//! {"type": "init", "ifs": "...", "basis": [0, 0, 4, 0, 0, 4]}
//! {"type": "move", "vertex": "B", "x": 4.5, "y": 0.25}
//! {"type": "hit", "x": 4.1, "y": 0.0, "radius": 0.2}
//! {"type": "frame"}
//! ```
//!
//! Responses carry `"type"` of `ready`, `moved`, `hit`, `frame` or `error`.
//! Frame points travel as one flat `[x0, y0, x1, y1, ...]` array of 32-bit
//! floats; bases as `[x1, y1, x2, y2, x3, y3]`.

use serde::{Deserialize, Serialize};

use crate::barycentric::{AffineBasis, VertexId};
use crate::codec::parse_ifs;
use crate::error::Error;
use crate::ifs::ChaosParams;
use crate::point::Point2;
use crate::session::{BasisMode, Frame, ModelingSession, Telemetry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AutoBasis {
    #[default]
    Auto,
}

/// `"auto"` (minimal simplex) or six vertex coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisSpec {
    Auto(AutoBasis),
    Triangle([f64; 6]),
}

impl Default for BasisSpec {
    fn default() -> Self {
        BasisSpec::Auto(AutoBasis::Auto)
    }
}

impl BasisSpec {
    pub fn mode(&self) -> BasisMode {
        match self {
            BasisSpec::Auto(_) => BasisMode::MinimalSimplex,
            BasisSpec::Triangle(v) => BasisMode::UserTriangle(AffineBasis::from_flat(*v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Request {
    Init {
        ifs: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        burn_in: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default)]
        basis: BasisSpec,
    },
    Move {
        vertex: VertexId,
        x: f64,
        y: f64,
    },
    Hit {
        x: f64,
        y: f64,
        radius: f64,
    },
    Frame,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TelemetryMsg {
    pub det: f64,
    pub point_count: usize,
    pub last_update_us: f64,
    pub contractivity: f64,
    pub non_contractive: bool,
}

impl From<&Telemetry> for TelemetryMsg {
    fn from(t: &Telemetry) -> Self {
        Self {
            det: t.det,
            point_count: t.point_count,
            last_update_us: t.last_update.as_secs_f64() * 1e6,
            contractivity: t.contractivity,
            non_contractive: t.non_contractive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Response {
    Ready {
        basis: [f64; 6],
        telemetry: TelemetryMsg,
    },
    Moved {
        basis: [f64; 6],
        telemetry: TelemetryMsg,
    },
    Hit {
        vertex: Option<VertexId>,
    },
    Frame {
        points: Vec<f32>,
        basis: [f64; 6],
        telemetry: TelemetryMsg,
    },
    Error {
        kind: String,
        message: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        det: Option<f64>,
    },
}

impl Response {
    fn error(kind: &str, message: impl Into<String>) -> Self {
        Response::Error {
            kind: kind.to_string(),
            message: message.into(),
            det: None,
        }
    }

    fn frame(frame: &Frame) -> Self {
        Response::Frame {
            points: frame.points.to_flat_f32(),
            basis: frame.basis.to_flat(),
            telemetry: (&frame.telemetry).into(),
        }
    }
}

impl From<Error> for Response {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::DegenerateBasis { .. } => "DegenerateBasis",
            Error::EmptySystem => "EmptySystem",
            Error::ZeroPoints => "ZeroPoints",
            Error::Diverged { .. } => "Diverged",
            _ => "EngineError",
        };
        let det = match e {
            Error::DegenerateBasis { det, .. } => Some(det),
            _ => None,
        };
        Response::Error {
            kind: kind.to_string(),
            message: e.to_string(),
            det,
        }
    }
}

/// Owns at most one session and answers protocol requests against it.
#[derive(Debug, Default)]
pub struct SessionServer {
    session: Option<ModelingSession>,
}

impl SessionServer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn session(&self) -> Option<&ModelingSession> {
        self.session.as_ref()
    }

    pub fn handle(&mut self, request: Request) -> Response {
        match request {
            Request::Init {
                ifs,
                points,
                burn_in,
                seed,
                basis,
            } => self.init(&ifs, points, burn_in, seed, basis),
            Request::Move { vertex, x, y } => {
                let Some(session) = self.session.as_mut() else {
                    return Response::error("NoSession", "send an init request first");
                };
                match session.move_vertex(vertex, Point2::new(x, y)) {
                    Ok(frame) => Response::Moved {
                        basis: frame.basis.to_flat(),
                        telemetry: (&frame.telemetry).into(),
                    },
                    Err(e) => e.into(),
                }
            }
            Request::Hit { x, y, radius } => match &self.session {
                Some(session) => Response::Hit {
                    vertex: session.hit_test(Point2::new(x, y), radius),
                },
                None => Response::error("NoSession", "send an init request first"),
            },
            Request::Frame => match &self.session {
                Some(session) => Response::frame(&session.get_frame()),
                None => Response::error("NoSession", "send an init request first"),
            },
        }
    }

    fn init(
        &mut self,
        text: &str,
        points: Option<usize>,
        burn_in: Option<usize>,
        seed: Option<u64>,
        basis: BasisSpec,
    ) -> Response {
        let doc = match parse_ifs(text) {
            Ok(doc) => doc,
            Err(e) => return Response::error("ParseError", e.to_string()),
        };
        let ifs = match doc.system() {
            Ok(ifs) => ifs,
            Err(e) => return e.into(),
        };
        let mut params: ChaosParams = doc.chaos_params();
        if let Some(n) = points {
            params.n_points = n;
        }
        if let Some(b) = burn_in {
            params.burn_in = b;
        }
        if let Some(s) = seed {
            params.seed = s;
        }
        match ModelingSession::init(ifs, params, basis.mode()) {
            Ok(session) => {
                let frame = session.get_frame();
                self.session = Some(session);
                Response::Ready {
                    basis: frame.basis.to_flat(),
                    telemetry: (&frame.telemetry).into(),
                }
            }
            Err(e) => e.into(),
        }
    }

    /// Text-level entry point: one JSON request in, one JSON response out.
    pub fn handle_json(&mut self, line: &str) -> String {
        let response = match serde_json::from_str::<Request>(line) {
            Ok(req) => self.handle(req),
            Err(e) => Response::error("BadRequest", e.to_string()),
        };
        serde_json::to_string(&response).expect("responses always serialize")
    }
}
