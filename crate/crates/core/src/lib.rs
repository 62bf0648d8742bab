//! Exact GKM computations for Kac-Moody flag varieties.
//!
//! A generalized Cartan matrix and a parabolic subset determine a moment
//! graph whose vertices are minimal coset representatives and whose edges
//! carry inversion roots. Equivariant cohomology and K-theory are computed as
//! the subrings of vertexwise tuples satisfying the edge divisibility
//! conditions, with exact rational and big-integer arithmetic throughout.
//!
//! ```
//! use gkm_core::coxeter::{CartanMatrix, Parabolic};
//! use gkm_core::graph::{GkmGraph, Theory};
//! use gkm_core::ring::{canonical_generators_h, is_member};
//!
//! let a2 = CartanMatrix::parse("2,-1;-1,2").unwrap();
//! let g = GkmGraph::from_cartan(&a2, &Parabolic::default(), None).unwrap();
//! assert_eq!(g.num_vertices(), 6);
//! assert!(g.validate(Theory::H).passed);
//!
//! let gens = canonical_generators_h(&g, None).unwrap();
//! assert!(gens.classes.iter().all(|x| is_member(&g, x).unwrap().member));
//! ```

pub mod coxeter;
pub mod error;
pub mod examples;
pub mod graph;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod qcomb;
pub mod ring;

pub use coxeter::{CartanMatrix, CosetSystem, Parabolic};
pub use error::Error;
pub use graph::{GkmGraph, Theory};
pub use lattice::Weight;
pub use poly::{LaurentElt, PolyElt, Rational};
pub use ring::{ClassH, ClassK, GeneratorSet, GkmClass};
