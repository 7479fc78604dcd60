//! Library half of the `multicx` command-line tool: the document format,
//! report rendering and the command implementations.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;
