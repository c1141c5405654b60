pub mod cli;
pub mod enumerate;
pub mod error;
pub mod flownet;
pub mod kcore;
pub mod labeling;
pub mod netrep;
pub mod oracle_builder;
pub mod pip;
pub mod potts;
pub mod suites;

pub use error::{Error, Result};
