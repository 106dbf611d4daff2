//! Extended string-topology products on spheres: exact product and
//! coproduct tables, their structural verification, Morse-Bott homology of
//! the antipodal path space, and a numerical geodesic/index lab used to
//! cross-check the critical-value bookkeeping.

pub mod coalgebra;
pub mod element;
pub mod error;
pub mod extension;
pub mod generator;
pub mod geodesic;
pub mod group;
pub mod homology;
pub mod provenance;
pub mod report;
pub mod ring;
pub mod sphere;

pub use element::{combine, degree, Degree, GradedElement};
pub use error::{Error, Result};
pub use generator::{Family, Generator, HalfIndex, Space};
pub use group::AbelianGroupSummary;
pub use provenance::table_hash;
pub use report::{CheckReport, Violation};
pub use ring::{Coeff, CoefficientRing};
pub use sphere::{Regime, SphereAlgebraTable};
