//! Instance file format, deterministic instance generators, report
//! emission, and the command-line dispatcher behind the `dilation` binary.

pub mod commands;
pub mod generate;
pub mod instance;
pub mod report;

pub use commands::run_cli;
pub use generate::{collinear_path_instance, generate_instance, GenModel, SplitMix64};
pub use instance::{
    emit_instance, parse_instance, InstanceFile, ParseError, ParsedInstance, SpaceDescriptor,
};
pub use report::MachineReport;
