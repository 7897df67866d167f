//! Hyperbolic and quasihyperbolic geometry of plane domains.
//!
//! A [`Domain`] is the complement of finitely many closed primitives
//! (points, closed disks, disk exteriors and closed half-planes). On top of it
//! the crate evaluates metric densities, lengths and distances, builds
//! geodesics (closed forms where known, a grid solver otherwise), computes
//! the Beardon–Pommerenke function and its extremal annuli, and runs the
//! structural checks in [`analysis`].
//!
//! ```
//! use qhgeom::{domains::Domain, metrics::{self, MetricKind}, pt};
//!
//! let dom = Domain::punctured_unit_disk();
//! let d = metrics::closed_form_distance(&dom, MetricKind::Quasihyperbolic, pt(0.1, 0.0), pt(0.4, 0.0))
//!     .unwrap()
//!     .unwrap();
//! assert!((d - 4f64.ln()).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod beta;
pub mod cli;
pub mod domains;
pub mod error;
pub mod geodesics;
pub mod geom;
pub mod metrics;
pub mod report;

pub use domains::Domain;
pub use error::{Error, Result};
pub use geom::{pt, Annulus, Circle, Point};
pub use metrics::{DensityInterval, MetricKind, PathPolyline};
