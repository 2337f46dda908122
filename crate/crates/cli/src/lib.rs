//! Text front end: workspace sources, commands, reports and graph export.

pub mod commands;
pub mod dot;
pub mod dsl;
pub mod report;
pub mod workspace;

pub use commands::{run, Outcome};
pub use report::{Report, Status};
pub use workspace::{parse_workspace, Workspace, WorkspaceError};
