//! Representation Topology Divergence.
//!
//! Compares two point clouds of equal size with a one-to-one correspondence
//! between points. The clouds are turned into distance matrices, glued into
//! an augmented weighted graph on doubled vertices, and the Vietoris-Rips
//! barcode of that graph (the *R-Cross-Barcode*) records where the
//! multi-scale topology of the two clouds disagrees. The sum of bar lengths in
//! dimension one, averaged over both directions and over random batches, is
//! the RTD score.
//!
//! ```
//! use rtd_core::geometry::PointCloud;
//! use rtd_core::rtd::{rtd_score, RtdConfig};
//!
//! let p = PointCloud::new(vec![
//!     vec![0.0, 0.0],
//!     vec![1.0, 0.0],
//!     vec![0.0, 1.0],
//!     vec![1.0, 1.0],
//! ])
//! .unwrap();
//! let report = rtd_score(&p, &p, &RtdConfig::default()).unwrap();
//! assert_eq!(report.rtd_score, 0.0);
//! ```

pub mod baselines;
pub mod crossgraph;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod persistence;
pub mod rtd;
pub mod synthetic;

pub use error::{Error, Result};
pub use geometry::{PointCloud, WeightMatrix};
pub use persistence::{Bar, Barcode};
