//! Explicit computational content around limit multiplicity for arithmetic
//! lattices in PGL(2,R) and PGL(2,C): number fields, Mahler measures,
//! Bruhat–Tits trees, representation zeta functions, covolumes, archimedean
//! orbital integrals, nerve covers and conjugacy-counting diagnostics.

pub mod battery;
pub mod btree;
pub mod conjcount;
pub mod error;
pub mod geom;
pub mod mahler;
pub mod modp;
pub mod nerve;
pub mod numfield;
pub mod poly;
pub mod quadrature;
pub mod repzeta;
pub mod roots;
pub mod scalar;
pub mod volume;

pub use btree::{GL2Rational, TreeVertex};
pub use error::{Error, Result};
pub use geom::{MobiusElement, RadialBump};
pub use nerve::{MetricSampleSpace, NerveComplex};
pub use numfield::NumberField;
pub use poly::{IntPolynomial, Poly};
pub use scalar::{DoubleDouble, RealScalar};

/// Möbius transformations in double precision.
pub type Mobius = MobiusElement<f64>;
/// Möbius transformations in double-double precision.
pub type MobiusDD = MobiusElement<DoubleDouble>;
