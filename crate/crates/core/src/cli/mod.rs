//! Instance files and the command-line front end.

pub mod app;
pub mod commands;
pub mod document;
pub mod reader;
pub mod sexpr;

pub use document::{parse, Arg, Command, Directive, InstanceDocument, Item};
pub use reader::{Decl, FunctionExpr, Kind, Reader};
pub use sexpr::{read_all, read_one, Pos, Sexp};
pub use commands::{exit_code, run, run_directive, Format, Options, Outcome, Record, Report, Section};
pub use app::{main_with, Cli};
