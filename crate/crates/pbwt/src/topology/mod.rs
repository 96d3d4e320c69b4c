//! Navigable ordered trees and the marked/prime node scheme.

pub mod marking;
pub mod tree;

pub use marking::MarkingScheme;
pub use tree::{NavTree, Node};
