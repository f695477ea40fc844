//! Data loading, result files and the command entry points used by the
//! `mvsv-dfc` binary.
//!
//! All JSON floats are written with 17 significant digits. Every output file
//! records the package version, seed and chain index that produced it.

mod commands;
mod data;
mod json;
mod files;

pub use commands::{
    cmd_fit, cmd_simulate, cmd_summarize, load_dataset, ChainOutput, FitConfig, FitReport, SamplerOverrides,
    SimulateConfig, SummarizeConfig, D_HIST_FILE, NU_HIST_FILE, PARAM_TRACE_FILE, PERCENTILES_FILE, SUMMARY_FILE,
    TRACE_FILE,
};
pub use data::{load_csv, parse_csv, standardize, Dataset, RawData};
pub use files::{FitEcho, PercentileBlock, Provenance, SummaryFile, TraceFile, TruthFile, TRACE_FORMAT};
pub use json::{fmt_f64, read_json, to_json_string, write_json};
