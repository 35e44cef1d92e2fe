//! Command-line front end for `polytrope-sound`: config handling, CSV and SVG
//! output, and run manifests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod invocation;
pub mod manifest;
pub mod run;
pub mod svg;
pub mod table;

pub use error::{exit, CliError, Result};
pub use invocation::{parse_invocation, Invocation, SubcommandKind, Task};
pub use run::{execute, run_cli, run_command, RunReport};
pub use svg::{render_svg_plot, LineStyle};
pub use table::{read_csv, write_csv, Cell, Table};
