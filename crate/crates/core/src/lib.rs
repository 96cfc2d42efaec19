//! Real-time affine modeling of 2D IFS attractors.
//!
//! An attractor is sampled once with the chaos game, every sample is given
//! barycentric coordinates relative to a control triangle, and each edit of
//! the triangle re-emits the whole cloud through the single affine map the
//! edit induces.
//!
//! ```
//! use ifs_affine::{datasets, BasisMode, ChaosParams, ModelingSession, Point2, VertexId};
//!
//! let ifs = datasets::bundled("flower").unwrap().system().unwrap();
//! let mut session =
//!     ModelingSession::init(ifs, ChaosParams::new(10_000).seed(42), BasisMode::MinimalSimplex).unwrap();
//! let c = session.current_basis().c;
//! let frame = session.move_vertex(VertexId::C, c + Point2::new(0.5, 0.0)).unwrap();
//! assert_eq!(frame.points.len(), 10_000);
//! ```

pub mod barycentric;
pub mod bench;
pub mod cli;
pub mod codec;
pub mod datasets;
pub mod error;
pub mod hausdorff;
pub mod ifs;
pub mod point;
pub mod protocol;
pub mod render;
pub mod rng;
pub mod session;
pub mod simplex;

pub use barycentric::{
    apply_map_to_set, basis_determinant, basis_matrix, from_barycentric, from_barycentric_set, retarget_map,
    to_barycentric, to_barycentric_set, AffineBasis, BaryCoord, BarySet, VertexId,
};
pub use codec::{parse_ifs, serialize_ifs, IfsDocument, MapEntry, ParseError, RenderDefaults};
pub use error::{Error, Result};
pub use hausdorff::{hausdorff_distance, hausdorff_distance_indexed};
pub use ifs::{
    apply_map, chaos_game, hutchinson_step, map_contractivity, system_contractivity, AffineMap2, ChaosParams,
    IfsSystem, DEFAULT_BURN_IN,
};
pub use point::{Point2, PointSet};
pub use render::{rasterize, render_svg, RgbImage, Viewport};
pub use session::{hit_test_basis, BasisMode, Frame, FrameSource, ModelingSession, Telemetry};
pub use simplex::{
    bounding_box, canonical_simplex, minimal_canonical_simplex, simplex_for_ifs, Box2, CanonicalSimplex,
    SimplexOrientation,
};
