//! Exact arithmetic in the field of rational functions over the chart
//! coordinates, named constants, abstract functions and exponential atoms.

pub mod assume;
pub mod context;
mod gcd;
pub mod int;
pub mod parse;
pub mod poly;
pub mod print;
pub mod scalar;
pub mod symbol;

pub use assume::{AssumptionError, AssumptionSet, Substitution};
pub use context::{Context, DeclError};
pub use int::Int;
pub use parse::{parse_expr, ParseError, ParseErrorKind};
pub use scalar::{sum, Expr};
pub use symbol::{Sym, SymbolData};
