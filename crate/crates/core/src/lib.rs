//! Counting edge-magic total labelings of paths and cycles.
//!
//! A labeling assigns `1..=|V|+|E|` bijectively to the vertices and edges of
//! a graph; it is edge-magic when every edge, together with its two end
//! vertices, sums to the same constant `k`.
//!
//! Two engines are provided. [`oracle`] walks every permutation and is only
//! usable for small instances. [`search`] fixes `k`, then the first vertex and
//! edge, and propagates: each further vertex label is forced by the previous
//! vertex and the chosen edge label.

pub mod bounds;
pub mod cycles;
pub mod error;
pub mod model;
pub mod oracle;
pub mod output;
pub mod report;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Convention, KRange, Label, Labeling, MagicConstant, PathInstance};
pub use report::{CountReport, Family, Mode, Reduction};
