//! Index combinatorics, array representations and the exact event oracle.

pub mod boxes;
pub mod closed;
pub mod dense;
pub mod index;
pub mod latent;
pub mod model;
pub mod moments;
pub mod query;
pub mod sampling;
pub mod slicing;
pub mod spec;

pub use boxes::{enumerate_boxes, BoxKind, BoxSpec};
pub use closed::{ClosedFormTwoDim, FixedSizeEr, ProductArray};
pub use dense::DenseTable;
pub use index::{support, DSubsetIndex, Subset};
pub use latent::TupleSet;
pub use model::{ArrayModel, Mixture};
pub use query::{EventQuery, Symbol};
pub use sampling::{GraphSampling, HighDimSemiRandom};
pub use slicing::{slicing, SlicingProfile};
pub use spec::{ModelSpec, Num};
