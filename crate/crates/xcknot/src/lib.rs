//! XC-Gauss diagrams, XC-tangles, their move calculus and the universal invariant over
//! matrix XC-algebras, with the finite-type pairing layer.

pub mod algebra;
pub mod cli;
pub mod gauss;
pub mod invariant;
pub mod moves;
pub mod parse;
pub mod polyak;
pub mod ring;
pub mod tangle;
pub mod virtualt;

pub use parse::ParseError;
