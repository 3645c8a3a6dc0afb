//! Weighted composition operators `W_{psi,phi} f = psi * (f o phi)` between
//! Hardy spaces of the unit ball of C^n.
//!
//! The crate evaluates symbols on the closed ball, builds the pullback
//! measure `mu_{psi,phi,q}` as a weighted point cloud, and turns it into
//! essential-norm estimates, boundedness and compactness verdicts, and
//! Carleson-measure diagnostics.

pub mod carleson;
pub mod citations;
pub mod error;
pub mod estimators;
pub mod geometry;
pub mod hardy;
pub mod numeric;
pub mod pullback;
pub mod search;
pub mod symbols;

pub use error::{Error, Result};
pub use carleson::CarlesonReport;
pub use estimators::{Compactness, EstimateReport, Setting};
pub use geometry::{BallPoint, CarlesonWindow, QuadratureScheme, SchemeKind};
pub use hardy::{HardyExpansion, TestKernel};
pub use numeric::Estimate;
pub use symbols::{BallSelfMap, MultiIndex, PolynomialSymbol, Symbol, SymbolPair};
