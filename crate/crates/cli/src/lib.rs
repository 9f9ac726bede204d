//! Library surface of the descent-lab CLI: config files, CSV/SVG reports,
//! and run manifests. The binary in `main.rs` is a thin dispatcher over
//! these modules; tests exercise them directly.

pub mod config;
pub mod manifest;
pub mod report;
pub mod svg;
