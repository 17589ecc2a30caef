//! Coefficients: the ring `Z[L, L^-1]`, its dimensional completion, graded
//! series over it, curve data and the coefficient-asymptotics helpers.

pub mod completion;
pub mod curve;
pub mod laurent;
pub mod series;
pub mod tauberian;

pub use completion::CompletionElement;
pub use curve::CurveData;
pub use laurent::{ll, LefschetzLaurent, VirtualDim};
pub use series::{GradedMonomial, GradedSeries, SeriesJson, Truncation};
