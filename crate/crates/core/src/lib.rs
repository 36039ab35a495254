//! Two-bit least-significant-bit image steganography.
//!
//! A payload byte is split into four 2-bit slices. Slice `i` of byte `j` in a
//! chunk of length `L` replaces the two low bits of pixel `L*i + j` of an image
//! row, so a row of width `w` carries `floor(w / 4)` bytes. The per-pixel work
//! is expressed as a kernel over a 4-block by `n`-thread index space and run by
//! [`exec`], which offers sequential, parallel and shuffled schedules that are
//! required to agree bit for bit.
//!
//! Layers, bottom-up:
//!
//! * [`bitplane`]: pure cell and row kernels.
//! * [`exec`]: the block/thread launch harness and the row-level runners.
//! * [`image_io`]: binary PGM (`P5`) / PPM (`P6`) codecs and plane split/merge.
//! * [`pipeline`]: capacity, row planning, the `STG1` header and whole-plane
//!   embed/extract.
//! * [`metrics`]: MSE and PSNR.

pub mod bitplane;
mod error;
pub mod exec;
pub mod image_io;
pub mod metrics;
pub mod pipeline;

pub use bitplane::{embed_cell, embed_row, extract_cell, extract_row, BlockId, MaskTable};
pub use error::{Error, Result};
pub use exec::{launch, run_embed, run_extract, Backend, KernelIndex, LaunchConfig, LaunchError};
pub use image_io::{decode, encode, merge_plane, split_plane, Channel, Image, ImagePlane, RgbImage};
pub use metrics::{mse, psnr, Psnr, QualityReport, SampleGrid};
pub use pipeline::{
    capacity, embed_image, extract_image, plan_rows, stream_plan, usable_capacity, RowPlan, RowSpan,
    StegoHeader, HEADER_LEN, MAGIC,
};
