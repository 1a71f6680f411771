//! The script language: expressions, declarations and checks.

pub mod ast;
pub mod expr;
pub mod parser;
pub mod report;
pub mod runner;

pub use ast::Script;
pub use parser::{parse, Diagnostic};
pub use report::{Report, Verdict};
pub use runner::{run, RunOptions};
