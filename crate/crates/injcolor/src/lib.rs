//! Constructive injective coloring of sparse graphs.
//!
//! An *injective coloring* assigns colors to vertices so that any two
//! vertices with a common neighbor receive distinct colors — equivalently,
//! a proper coloring of the graph whose edges join vertices at distance
//! exactly two through some shared neighbor. This crate computes such
//! colorings constructively for graphs whose *maximum average degree*
//! (the largest average degree over all subgraphs) is small:
//!
//! * maximum degree 3 and maximum average degree below 36/13: five colors;
//! * maximum degree at least 4 and maximum average degree below 14/5:
//!   `Δ + 2` colors.
//!
//! The pipeline peels small local configurations off the graph, colors the
//! remainder recursively, and extends the coloring back over the peeled
//! vertices by exhaustive list coloring. When no local configuration
//! exists, a global structure (a near-regular subgraph threaded by
//! 2-vertices) is located and colored by a degree-choosability argument.
//!
//! Supporting machinery that is useful on its own:
//!
//! * [`density::mad_exact`] — exact maximum average degree as a rational,
//!   with a densest-subgraph witness, via max-flow;
//! * [`discharge`] — charge-redistribution audits that certify the average
//!   degree bounds used by the coloring procedure;
//! * [`listcolor::chi_exact`] — exact chromatic number by branch and bound;
//! * [`gen`] — generators for named graphs, subdivisions, and random
//!   sparse instances used in testing and benchmarking.

pub mod density;
pub mod discharge;
mod flow;
pub mod gen;
pub mod io;
pub mod graph;
pub mod listcolor;
pub mod rational;
pub mod reduce;
pub mod solver;

pub use density::{mad_exact, satisfies_hypothesis, DensityError, DensityWitness};
pub use graph::{Coloring, Graph, GraphError, VertexSet, Violation};
pub use rational::{ratio, Rational};
