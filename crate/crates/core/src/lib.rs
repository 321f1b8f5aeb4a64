//! Amplitude-damping Shor codes `[[(w+1)(w+K), K]]` and their dual-rail
//! concatenations: construction, exact noise simulation, decoding and
//! certification of the approximate error-correction conditions.

pub mod channels;
pub mod cli;
pub mod code;
pub mod decoder;
pub mod error;
pub mod qla;
pub mod reference;
pub mod report;
pub mod repro;
pub mod verify;

pub use code::CodeSpec;
pub use error::{Error, Result};
pub use qla::{StateVector, C64};
