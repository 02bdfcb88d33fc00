//! Config-driven batches: raw samples through preprocessing, homology and diagram stages.

mod config;
mod run;

pub use config::{
    parse_config, Format, GridRange, InputSpec, Kind, Op, OutputSpec, PipelineConfig, SchemaError, SchemaErrors, Shape,
    OP_NAMES,
};
pub use run::{apply, load_sample, run_pipeline, SampleError, SampleOutput, Value};
