//! Homomorphism bases of graph motif parameters and exact homomorphism-count
//! features.
//!
//! A graph motif parameter such as "number of 5-cycles" is a finite rational
//! combination of homomorphism counts. This crate computes that combination
//! (the spasm of the pattern with its coefficients), counts homomorphisms
//! from the basis graphs into host graphs by dynamic programming over tree
//! decompositions, and assembles the results into feature matrices at graph
//! or node level.
//!
//! ```
//! use homspasm::graph::Graph;
//! use homspasm::homcount::{evaluate, HostGraph};
//! use homspasm::spasm::spasm_of;
//!
//! let basis = spasm_of(&Graph::cycle(5)).unwrap();
//! assert_eq!(basis.terms().len(), 3);
//! let host = HostGraph::from(&Graph::cycle(5));
//! assert_eq!(evaluate(&basis, &host).unwrap().to_string(), "1");
//! ```

pub mod cli;
pub mod decomp;
pub mod error;
pub mod features;
pub mod graph;
pub mod homcount;
pub mod oracle;
pub mod spasm;

pub use error::{Error, Result};
