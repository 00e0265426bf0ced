//! Numerical geometry of oscillating systems: quantum state evolution on the
//! Fubini-Study sphere, Grover search and its Fisher-information geodesic,
//! geodesic integration on coordinate metrics, and classical analogues
//! (a fluid-sphere interior metric and the Jacobi metric of a piston).
//!
//! ```
//! use geoharmonic::{groverian_path, fisher_information, FisherMode};
//!
//! let path = groverian_path(16).unwrap();
//! let f = fisher_information(&path, 0.4, FisherMode::Analytic).unwrap();
//! assert!((f - 4.0).abs() < 1e-12);
//! ```

pub mod analog;
pub mod error;
pub mod fisher;
pub mod geodesic;
pub mod grover;
pub mod hilbert;
pub mod ode;
pub mod stencil;

pub use analog::*;
pub use error::{Error, Result};
pub use fisher::*;
pub use geodesic::*;
pub use grover::*;
pub use hilbert::*;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    struct Intro;
    #[doc = include_str!("../../../book/src/hilbert.md")]
    struct Hilbert;
    #[doc = include_str!("../../../book/src/grover.md")]
    struct Grover;
    #[doc = include_str!("../../../book/src/fisher.md")]
    struct Fisher;
    #[doc = include_str!("../../../book/src/geodesics.md")]
    struct Geodesics;
    #[doc = include_str!("../../../book/src/analog.md")]
    struct Analog;
}
