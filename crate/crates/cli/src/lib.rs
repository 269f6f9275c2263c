//! Verification suites, instance generation and report I/O on top of
//! `qbound_core`.
//!
//! [`run_suite`] is deterministic in its configuration: each instance draws
//! from its own ChaCha stream keyed by (seed, suite, index), instances run in
//! parallel, and rows come back in index order.

#![forbid(unsafe_code)]

pub mod config;
pub mod error;
pub mod generate;
pub mod output;
pub mod suites;

pub use config::{OutputFormat, Span, Suite, SuiteConfig};
pub use error::CliError;
pub use generate::{generate, GenerateKind, GenerateParams, KernelSpec};
pub use suites::{evaluate_instance, instance_rng, run_suite, Check, Record, Row, SuiteOutcome, SuiteResult};
