//! Cell and row kernels for 2-bit LSB embedding.
//!
//! Block `i` owns bits `[2i, 2i+1]` of every payload byte. Embedding moves that
//! slice down into the two low bits of a pixel; extraction moves it back up.
//! For a chunk of `L` bytes, byte `j` / block `i` lands on pixel `L*i + j`, so the
//! four blocks occupy four consecutive runs of `L` pixels at the start of the row.

use crate::error::{Error, Result};

/// Per-block masks and shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskTable {
    pub data_mask: [u8; 4],
    pub shift_bits: [u32; 4],
    pub pixel_clear_mask: u8,
}

impl MaskTable {
    pub const STANDARD: MaskTable = MaskTable {
        data_mask: [0x03, 0x0C, 0x30, 0xC0],
        shift_bits: [0, 2, 4, 6],
        pixel_clear_mask: 0xFC,
    };
}

/// Number of blocks in a steganography launch; one per 2-bit slice of a byte.
pub const BLOCKS: usize = 4;

/// A block id in `0..4`, selecting which 2-bit slice of a payload byte is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockId(u8);

impl BlockId {
    pub const ALL: [BlockId; BLOCKS] = [BlockId(0), BlockId(1), BlockId(2), BlockId(3)];

    pub fn new(id: usize) -> Result<Self> {
        if id < BLOCKS {
            Ok(BlockId(id as u8))
        } else {
            Err(Error::InvalidBlock(id))
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    fn mask(self) -> u8 {
        MaskTable::STANDARD.data_mask[self.index()]
    }

    #[inline]
    fn shift(self) -> u32 {
        MaskTable::STANDARD.shift_bits[self.index()]
    }
}

impl TryFrom<usize> for BlockId {
    type Error = Error;

    fn try_from(id: usize) -> Result<Self> {
        BlockId::new(id)
    }
}

/// Replaces the two low bits of `pixel` with slice `block` of `data`.
#[inline]
pub fn embed_cell(pixel: u8, data: u8, block: BlockId) -> u8 {
    (pixel & MaskTable::STANDARD.pixel_clear_mask) | ((data & block.mask()) >> block.shift())
}

/// Recovers slice `block` of a payload byte from the two low bits of `pixel`,
/// already shifted back into position.
#[inline]
pub fn extract_cell(pixel: u8, block: BlockId) -> u8 {
    (pixel & 0x03) << block.shift()
}

/// Largest chunk a row of `width` pixels can carry.
#[inline]
pub fn row_capacity(width: usize) -> usize {
    width / BLOCKS
}

fn check_capacity(width: usize, len: usize) -> Result<()> {
    let needed = len.saturating_mul(BLOCKS);
    if needed > width {
        return Err(Error::Capacity {
            needed: len,
            available: row_capacity(width),
        });
    }
    Ok(())
}

/// Scalar reference for one row. Pixels at `4 * chunk.len()` and beyond are
/// copied through unchanged.
pub fn embed_row(row: &[u8], chunk: &[u8]) -> Result<Vec<u8>> {
    check_capacity(row.len(), chunk.len())?;
    let len = chunk.len();
    let mut out = row.to_vec();
    for block in BlockId::ALL {
        let base = len * block.index();
        for (j, &byte) in chunk.iter().enumerate() {
            out[base + j] = embed_cell(row[base + j], byte, block);
        }
    }
    Ok(out)
}

/// Scalar reference for one row: reads `count` bytes back out of `row`.
pub fn extract_row(row: &[u8], count: usize) -> Result<Vec<u8>> {
    check_capacity(row.len(), count)?;
    Ok((0..count)
        .map(|j| {
            BlockId::ALL
                .iter()
                .fold(0u8, |acc, &block| acc | extract_cell(row[count * block.index() + j], block))
        })
        .collect())
}
