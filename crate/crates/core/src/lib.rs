//! Recognition of interval k-graphs and interval H-graphs.
//!
//! Given a graph whose vertices are colored by the vertices of a pattern
//! graph H (with H complete this is the classic k-partite setting), decide
//! whether intervals can be assigned so that pattern-adjacent colors are
//! adjacent exactly when their intervals intersect. A positive answer comes
//! with a certified vertex ordering and an explicit integer interval
//! representation; a negative answer carries checkable evidence.

pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod order_state;
pub mod pair_digraph;
pub mod recognizer;
pub mod representation;

pub use graph::{ColoredGraph, GraphError, PatternGraph, Vertex};
pub use io::{parse_graph, render_graph, ParseError};
