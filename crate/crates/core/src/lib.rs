//! PL critical points, discrete gradient fields and relatively perfect
//! gradient construction on small simplicial complexes.

pub mod cli;
pub mod complex;
pub mod correspond;
pub mod error;
pub mod fixtures;
pub mod gvf;
pub mod homology;
pub mod io;
pub mod plcrit;
pub mod report;
pub mod rpbuild;

pub use complex::{Level, Simplex, SimplexSet, SimplicialComplex, Vertex, VertexScalarField};
pub use error::{Error, Result};
pub use gvf::GradientField;
pub use homology::FieldChoice;
