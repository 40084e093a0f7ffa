//! Command-line front end for `nobodies`: JSON jobs in, JSON results and SVG
//! figures out. All numbers stay exact; rationals travel as `"p/q"` strings.

pub mod error;
pub mod exact;
pub mod job;
pub mod run;
pub mod svg;
pub mod verify;

pub use error::{CliError, Result};
pub use job::{parse_job, JobFile, Payload};
pub use run::{run_job, Figure, Outcome, ResultFile, Status};
pub use svg::render_svg;
