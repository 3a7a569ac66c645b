//! Parallel flexible skylines: the partition / local pass / merge / final
//! pass engine, dataset and constraint file formats, and the benchmark
//! harness behind the `flexsky` binary.

pub mod bench;
pub mod engine;
pub mod io;
pub mod metrics;

pub use engine::{run_parallel, EngineConfig, EngineError, ExecutionReport, Op};
