//! Batch runner, report formatting and property suites for `sublinext`.

pub mod lpfile;
pub mod problem;
pub mod report;
pub mod suites;
