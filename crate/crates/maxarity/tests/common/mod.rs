// shared across integration test targets; each target uses a subset
#![allow(dead_code)]

pub mod fixtures;
pub mod oracle;
