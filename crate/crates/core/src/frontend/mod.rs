//! Text syntax, operator specifications, reports and the command-line driver.

pub mod cli;
pub mod opspec;
pub mod parse;
pub mod report;

pub use cli::run;
pub use opspec::{parse_idop, parse_operator, Operator};
pub use parse::{
    parse_field, parse_form, parse_polynomial, parse_value, parse_vector_form, Parsed,
};
