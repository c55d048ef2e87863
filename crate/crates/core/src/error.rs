use std::io;

use thiserror::Error;

/// Errors produced by the grouping, modelling and coding layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A grouping plan covers fewer letters than the alphabet it is applied to.
    #[error("plan covers {covered} letters but the alphabet has {needed}")]
    Coverage { covered: u64, needed: u64 },

    /// A letter id or position is outside `0..len`.
    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    /// A count would exceed the configured maximum.
    #[error("count of letter {letter} is saturated at {max}")]
    Saturated { letter: usize, max: u32 },

    /// A count would go below zero.
    #[error("count of letter {letter} is already zero")]
    Underflow { letter: usize },

    /// Malformed textual plan, header or bit stream.
    #[error("format error: {0}")]
    Format(String),

    /// The payload does not decode under the model described by its header.
    #[error("corrupt stream: {0}")]
    Corrupt(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
