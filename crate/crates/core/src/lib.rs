//! Exact integer-matrix algorithms for one-sided shifts of finite type.
//!
//! A square nonnegative integer matrix presents a one-sided edge shift. This
//! crate computes the classical invariants and decision procedures attached
//! to such presentations, always in exact arbitrary-precision arithmetic:
//!
//! - graph moves: outsplits, out-amalgamations, total amalgamation, insplit
//!   verification, balanced elementary strong shift equivalence ([`moves`]);
//! - one-sided conjugacy and conjugate higher powers, decided through total
//!   amalgamations and permutation equivalence ([`conjugacy`]);
//! - the dimension module with its canonical automorphism and order unit,
//!   and the unital signed Bowen-Franks invariant ([`dimension`]);
//! - shift-equivalence certificates, the unital condition, the polynomial
//!   shift-equivalence identity, and SL / SL+ checks ([`se`]);
//! - the component poset and the canonical/standard form predicates
//!   ([`graph`]);
//! - bounded bidirectional search for balanced move paths ([`search`]).
//!
//! Everything is pure and immutable after construction; all operations are
//! safe to call concurrently.

pub mod conjugacy;
pub mod dimension;
pub mod graph;
pub mod matrix;
pub mod moves;
pub mod poly;
pub mod se;
pub mod search;
pub mod snf;

pub use matrix::{parse_matrix, Int, IntMatrix, MatrixError, MatrixParseError, Sign};
pub use poly::{char_poly, IntPolynomial};
pub use snf::{smith_normal_form, smith_normal_form_with, PivotStrategy, SnfDecomposition};
