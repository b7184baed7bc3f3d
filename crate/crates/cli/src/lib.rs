//! Scenario loading, orchestration, result caching and report emission for
//! the `fclab` command.

pub mod cache;
pub mod pipeline;
pub mod report;
pub mod scenario;

pub use cache::ResultCache;
pub use pipeline::Pipeline;
pub use report::RunReport;
pub use scenario::Scenario;
