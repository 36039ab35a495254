use thiserror::Error;

/// Errors produced by the steganography library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("block id {0} out of range, expected 0..4")]
    InvalidBlock(usize),

    #[error("insufficient capacity: {needed} bytes needed, {available} bytes available")]
    Capacity { needed: usize, available: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("unsupported image format (expected binary P5 or P6)")]
    UnsupportedFormat,

    #[error("unsupported sample depth: maxval {0}, only 255 is supported")]
    UnsupportedDepth(u32),

    #[error("corrupt image file: {0}")]
    CorruptFile(String),

    #[error("not a stego image: magic {found:02x?} does not match \"STG1\"")]
    NotStego { found: [u8; 4] },

    #[error("corrupt stego header: payload length {claimed} exceeds remaining capacity {available}")]
    CorruptHeader { claimed: usize, available: usize },

    #[error("payload of {0} bytes does not fit the 32-bit length header")]
    PayloadTooLarge(usize),

    #[error("kernel launch failed: {0}")]
    Launch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
