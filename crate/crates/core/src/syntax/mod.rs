//! Abstract syntax of ζ-terms: parsing, printing, α-equivalence and
//! capture-avoiding substitution.

mod parse;
mod phase;
mod print;
mod term;

pub use parse::{parse, parse_phase, parse_type, ParseError};
pub use phase::{Phase, PHASE_EPS};
pub use print::print;
pub use term::{fresh_name, Basis, Term};
