//! File formats, bundled corpus and command line for `coxsurf-core`.

pub mod commands;
pub mod corpus;
pub mod load;
pub mod report;
pub mod schema;

pub use commands::{run, Outcome, EXIT_INPUT, EXIT_OK, EXIT_UNDETERMINED};
pub use load::{parse_surface, parse_surface_str, InputError, LoadedSurface};
