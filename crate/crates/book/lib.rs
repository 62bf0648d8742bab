// Each chapter of the guide becomes the doc comment of an empty module, so
// `cargo test --doc -p gkm-book` compiles and runs every ```rust block in it.
// One module per chapter keeps failures traceable to their file.

#[doc = include_str!("../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../book/src/graphs.md")]
pub mod graphs {}
#[doc = include_str!("../../book/src/polynomials.md")]
pub mod polynomials {}
#[doc = include_str!("../../book/src/generators.md")]
pub mod generators {}
#[doc = include_str!("../../book/src/expansions.md")]
pub mod expansions {}
#[doc = include_str!("../../book/src/k-theory.md")]
pub mod k_theory {}
#[doc = include_str!("../../book/src/loops.md")]
pub mod loops {}
#[doc = include_str!("../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../README.md")]
pub mod readme {}
