//! Exact exterior calculus and numerics for parallel Spin(7)-structures on
//! cones over 3-Sasakian 7-manifolds.
//!
//! The crate has two halves. The exact half ([`symexpr`], [`coframe`],
//! [`structures`]) works in the rational-function coefficient ring over a
//! fixed 13-symbol universe and derives, from dΦ = 0, the first-order system
//! governing the metric functions A1, A2, A3, B, C of the cone metric
//!
//! ```text
//! dt² + A1²η1² + A2²η2² + A3²η3² + B²(η4²+η5²) + C²(η6²+η7²).
//! ```
//!
//! The numeric half ([`flows`], [`calabi`]) integrates that system from the
//! singular boundary at t = 0 and evaluates the closed-form SU(4)-holonomy
//! family ḡ_α, checking each against the other.

pub mod calabi;
pub mod coframe;
pub mod error;
pub mod flows;
pub mod structures;
pub mod symexpr;

pub use error::{Error, Result};
