//! Whole-plane embedding and extraction.
//!
//! The embedded stream is an 8-byte [`StegoHeader`] followed by the payload.
//! Each segment is laid out greedily in raster order by a cursor over the
//! plane: at the cursor's row, a segment takes `min(remaining, free / 4)`
//! bytes, where `free` is the number of pixels left in that row, and embeds them
//! as one row chunk starting at the cursor's pixel. The cursor then advances
//! past the `4 * len` pixels it used, moving to the next row once a row cannot
//! hold another byte.
//!
//! For a segment that starts at the beginning of a row this is exactly
//! [`plan_rows`]. Because the header is laid out on its own, its 8 bytes always
//! sit at the same pixels regardless of payload length (the first 32 pixels of
//! row 0 when the plane is at least 32 wide), which is what lets extraction
//! read the length before it knows the payload layout. No capacity is lost: a
//! row whose first `k` bytes went to the header still holds
//! `floor(width / 4) - k` more.

use crate::bitplane::{row_capacity, BLOCKS};
use crate::error::{Error, Result};
use crate::exec::{run_embed, run_extract, Backend};
use crate::image_io::ImagePlane;

pub const MAGIC: [u8; 4] = *b"STG1";
pub const HEADER_LEN: usize = 8;

/// `STG1` magic followed by the payload length, big-endian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StegoHeader {
    pub payload_len: u32,
}

impl StegoHeader {
    pub fn for_payload(payload: &[u8]) -> Result<Self> {
        let payload_len = u32::try_from(payload.len()).map_err(|_| Error::PayloadTooLarge(payload.len()))?;
        Ok(StegoHeader { payload_len })
    }

    pub fn to_bytes(self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&MAGIC);
        out[4..].copy_from_slice(&self.payload_len.to_be_bytes());
        out
    }

    pub fn parse(bytes: &[u8; HEADER_LEN]) -> Result<Self> {
        let magic: [u8; 4] = bytes[..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(Error::NotStego { found: magic });
        }
        Ok(StegoHeader {
            payload_len: u32::from_be_bytes(bytes[4..].try_into().unwrap()),
        })
    }
}

/// One row chunk: `len` stream bytes starting at `stream_offset`, embedded in
/// row `row` from pixel `pixel_offset` on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowSpan {
    pub row: usize,
    pub pixel_offset: usize,
    pub stream_offset: usize,
    pub len: usize,
}

impl RowSpan {
    /// Plane indices of the four pixels that carry stream byte `stream_offset + j`.
    pub fn pixels_of(&self, width: usize, j: usize) -> [usize; BLOCKS] {
        let base = self.row * width + self.pixel_offset + j;
        std::array::from_fn(|block| base + block * self.len)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RowPlan {
    spans: Vec<RowSpan>,
}

impl RowPlan {
    pub fn spans(&self) -> &[RowSpan] {
        &self.spans
    }

    pub fn stream_len(&self) -> usize {
        self.spans.iter().map(|s| s.len).sum()
    }

    /// Every plane index the plan reads or writes, in stream order
    /// (four per stream byte).
    pub fn pixel_positions(&self, width: usize) -> Vec<usize> {
        self.spans
            .iter()
            .flat_map(|span| (0..span.len).flat_map(move |j| span.pixels_of(width, j)))
            .collect()
    }
}

/// Bytes a `width` x `height` plane can carry, header included.
pub fn capacity(width: usize, height: usize) -> usize {
    height * row_capacity(width)
}

/// Payload bytes available once the header is accounted for.
pub fn usable_capacity(width: usize, height: usize) -> usize {
    capacity(width, height).saturating_sub(HEADER_LEN)
}

struct Cursor {
    width: usize,
    height: usize,
    row: usize,
    pixel: usize,
    stream_offset: usize,
}

impl Cursor {
    fn new(width: usize, height: usize) -> Self {
        Cursor {
            width,
            height,
            row: 0,
            pixel: 0,
            stream_offset: 0,
        }
    }

    fn remaining(&self) -> usize {
        if self.row >= self.height {
            return 0;
        }
        row_capacity(self.width - self.pixel) + (self.height - self.row - 1) * row_capacity(self.width)
    }

    fn take(&mut self, len: usize, spans: &mut Vec<RowSpan>) -> Result<()> {
        let available = self.remaining();
        if len > available {
            return Err(Error::Capacity { needed: len, available });
        }
        let mut left = len;
        while left > 0 {
            let fits = row_capacity(self.width - self.pixel);
            if fits == 0 {
                self.row += 1;
                self.pixel = 0;
                continue;
            }
            let chunk = left.min(fits);
            spans.push(RowSpan {
                row: self.row,
                pixel_offset: self.pixel,
                stream_offset: self.stream_offset,
                len: chunk,
            });
            self.pixel += chunk * BLOCKS;
            self.stream_offset += chunk;
            left -= chunk;
        }
        Ok(())
    }
}

/// Greedy raster-order partition of a `stream_len`-byte stream starting at the
/// first pixel: each row takes `min(remaining, floor(width / 4))` bytes.
pub fn plan_rows(width: usize, height: usize, stream_len: usize) -> Result<RowPlan> {
    let mut spans = Vec::new();
    Cursor::new(width, height).take(stream_len, &mut spans)?;
    Ok(RowPlan { spans })
}

/// Plan for a header followed by a `payload_len`-byte payload.
pub fn stream_plan(width: usize, height: usize, payload_len: usize) -> Result<RowPlan> {
    let total = capacity(width, height);
    let needed = HEADER_LEN.saturating_add(payload_len);
    if needed > total {
        return Err(Error::Capacity {
            needed,
            available: total,
        });
    }
    let mut cursor = Cursor::new(width, height);
    let mut spans = Vec::new();
    cursor.take(HEADER_LEN, &mut spans)?;
    cursor.take(payload_len, &mut spans)?;
    Ok(RowPlan { spans })
}

fn span_pixels(plane: &ImagePlane, span: &RowSpan) -> std::ops::Range<usize> {
    let start = span.row * plane.width() + span.pixel_offset;
    start..start + span.len * BLOCKS
}

fn embed_spans(plane: &mut ImagePlane, spans: &[RowSpan], stream: &[u8], backend: Backend) -> Result<()> {
    for span in spans {
        let range = span_pixels(plane, span);
        let chunk = &stream[span.stream_offset..span.stream_offset + span.len];
        let stego = run_embed(backend, &plane.samples()[range.clone()], chunk)?;
        plane.samples_mut()[range].copy_from_slice(&stego);
    }
    Ok(())
}

fn extract_spans(plane: &ImagePlane, spans: &[RowSpan], backend: Backend, out: &mut Vec<u8>) -> Result<()> {
    for span in spans {
        out.extend(run_extract(backend, &plane.samples()[span_pixels(plane, span)], span.len)?);
    }
    Ok(())
}

/// Returns a copy of `plane` carrying `header ‖ payload`.
pub fn embed_image(plane: &ImagePlane, payload: &[u8], backend: Backend) -> Result<ImagePlane> {
    let header = StegoHeader::for_payload(payload)?;
    let plan = stream_plan(plane.width(), plane.height(), payload.len())?;
    let mut stream = Vec::with_capacity(HEADER_LEN + payload.len());
    stream.extend_from_slice(&header.to_bytes());
    stream.extend_from_slice(payload);

    let mut stego = plane.clone();
    embed_spans(&mut stego, plan.spans(), &stream, backend)?;
    Ok(stego)
}

/// Reads the header, validates it and returns the payload it describes.
pub fn extract_image(plane: &ImagePlane, backend: Backend) -> Result<Vec<u8>> {
    let mut cursor = Cursor::new(plane.width(), plane.height());
    let mut spans = Vec::new();
    if cursor.take(HEADER_LEN, &mut spans).is_err() {
        return Err(Error::NotStego { found: [0; 4] });
    }
    let mut header = Vec::with_capacity(HEADER_LEN);
    extract_spans(plane, &spans, backend, &mut header)?;
    let header = StegoHeader::parse(header.as_slice().try_into().unwrap())?;

    let claimed = header.payload_len as usize;
    let available = cursor.remaining();
    if claimed > available {
        return Err(Error::CorruptHeader { claimed, available });
    }
    spans.clear();
    cursor.take(claimed, &mut spans)?;
    let mut payload = Vec::with_capacity(claimed);
    extract_spans(plane, &spans, backend, &mut payload)?;
    Ok(payload)
}
