//! Block/thread launch harness.
//!
//! A launch runs a kernel once per `(block, work item)` pair. Work items are
//! tiled over the threads of a block with a grid stride: thread `t` of a block
//! with `n` threads handles items `t, t + n, t + 2n, ...` below the extent.
//! Three interchangeable backends execute the same index space:
//!
//! * [`Backend::Sequential`] walks blocks, threads and strides in order.
//! * [`Backend::Parallel`] runs every `(block, thread)` on the rayon pool.
//! * [`Backend::Shuffled`] runs every instance on the calling thread in a
//!   seeded random order, which surfaces kernels whose result depends on
//!   ordering.
//!
//! Kernels must have pairwise disjoint write sets. Inputs and outputs live in
//! separate buffers, so no instance reads what another one wrote during the
//! same launch.

use std::fmt;
use std::panic::{self, AssertUnwindSafe};
use std::str::FromStr;
use std::sync::atomic::{AtomicU8, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::bitplane::{self, embed_cell, extract_cell, BlockId, BLOCKS};
use crate::error::{Error, Result};

/// Thread cap per block for steganography launches.
pub const MAX_THREADS_PER_BLOCK: usize = 32;

/// Environment variable consulted by [`Backend::from_env`].
pub const BACKEND_ENV: &str = "LSBSTEGO_BACKEND";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaunchConfig {
    num_blocks: usize,
    threads_per_block: usize,
}

impl LaunchConfig {
    /// Returns `None` if either dimension is zero.
    pub fn new(num_blocks: usize, threads_per_block: usize) -> Option<Self> {
        (num_blocks >= 1 && threads_per_block >= 1).then_some(LaunchConfig {
            num_blocks,
            threads_per_block,
        })
    }

    /// Four blocks of `min(32, len)` threads (at least one).
    pub fn for_chunk(len: usize) -> Self {
        LaunchConfig {
            num_blocks: BLOCKS,
            threads_per_block: len.clamp(1, MAX_THREADS_PER_BLOCK),
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn threads_per_block(&self) -> usize {
        self.threads_per_block
    }
}

/// Identity of one kernel instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KernelIndex {
    pub block: usize,
    pub thread: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    Sequential,
    #[default]
    Parallel,
    Shuffled {
        seed: u64,
    },
}

impl Backend {
    /// Backend named by `LSBSTEGO_BACKEND`, or `None` when unset or unparsable.
    pub fn from_env() -> Option<Backend> {
        std::env::var(BACKEND_ENV).ok()?.parse().ok()
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Sequential => f.write_str("sequential"),
            Backend::Parallel => f.write_str("parallel"),
            Backend::Shuffled { seed } => write!(f, "shuffled:{seed}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown backend {0:?}, expected seq, par or shuf[:SEED]")]
pub struct ParseBackendError(String);

impl FromStr for Backend {
    type Err = ParseBackendError;

    /// Accepts `seq`, `par`, `shuf` (and the long names), with an optional
    /// `:SEED` suffix on the shuffled form.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (name, seed) = match s.split_once(':') {
            Some((name, seed)) => (name, Some(seed)),
            None => (s, None),
        };
        let err = || ParseBackendError(s.to_string());
        match (name.to_ascii_lowercase().as_str(), seed) {
            ("seq" | "sequential", None) => Ok(Backend::Sequential),
            ("par" | "parallel", None) => Ok(Backend::Parallel),
            ("shuf" | "shuffled", None) => Ok(Backend::Shuffled { seed: 0 }),
            ("shuf" | "shuffled", Some(seed)) => Ok(Backend::Shuffled {
                seed: seed.parse().map_err(|_| err())?,
            }),
            _ => Err(err()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaunchError<E> {
    #[error("kernel failed at block {block}, work item {item}: {source}")]
    Kernel { block: usize, item: usize, source: E },
    #[error("kernel panicked at block {block}, work item {item}: {message}")]
    Panicked {
        block: usize,
        item: usize,
        message: String,
    },
}

fn invoke<F, E>(kernel: &F, index: KernelIndex, item: usize) -> std::result::Result<(), LaunchError<E>>
where
    F: Fn(KernelIndex, usize) -> std::result::Result<(), E>,
{
    match panic::catch_unwind(AssertUnwindSafe(|| kernel(index, item))) {
        Ok(Ok(())) => Ok(()),
        Ok(Err(source)) => Err(LaunchError::Kernel {
            block: index.block,
            item,
            source,
        }),
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "non-string panic payload".to_string());
            Err(LaunchError::Panicked {
                block: index.block,
                item,
                message,
            })
        }
    }
}

/// Runs `kernel` once for every block in the config and every work item in
/// `0..work_extent`. Returns after all instances have completed, or with the
/// first failure observed. A zero extent is a no-op.
pub fn launch<F, E>(
    config: LaunchConfig,
    backend: Backend,
    work_extent: usize,
    kernel: F,
) -> std::result::Result<(), LaunchError<E>>
where
    F: Fn(KernelIndex, usize) -> std::result::Result<(), E> + Sync,
    E: Send,
{
    if work_extent == 0 {
        return Ok(());
    }
    let n = config.threads_per_block;
    let stride = |index: KernelIndex| -> std::result::Result<(), LaunchError<E>> {
        for item in (index.thread..work_extent).step_by(n) {
            invoke(&kernel, index, item)?;
        }
        Ok(())
    };
    match backend {
        Backend::Sequential => {
            for block in 0..config.num_blocks {
                for thread in 0..n {
                    stride(KernelIndex { block, thread })?;
                }
            }
            Ok(())
        }
        Backend::Parallel => (0..config.num_blocks * n)
            .into_par_iter()
            .try_for_each(|unit| {
                stride(KernelIndex {
                    block: unit / n,
                    thread: unit % n,
                })
            }),
        Backend::Shuffled { seed } => {
            let mut order: Vec<(usize, usize)> = (0..config.num_blocks)
                .flat_map(|block| (0..work_extent).map(move |item| (block, item)))
                .collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            for (block, item) in order {
                invoke(&kernel, KernelIndex { block, thread: item % n }, item)?;
            }
            Ok(())
        }
    }
}

fn launch_failed<E: fmt::Display>(err: LaunchError<E>) -> Error {
    Error::Launch(err.to_string())
}

fn into_bytes(cells: Vec<AtomicU8>) -> Vec<u8> {
    cells.into_iter().map(AtomicU8::into_inner).collect()
}

/// Embeds `chunk` into `row` with a 4-block launch. Equal to
/// [`bitplane::embed_row`] on every backend.
pub fn run_embed(backend: Backend, row: &[u8], chunk: &[u8]) -> Result<Vec<u8>> {
    if chunk.len() * BLOCKS > row.len() {
        return bitplane::embed_row(row, chunk);
    }
    let len = chunk.len();
    let out: Vec<AtomicU8> = row.iter().map(|&p| AtomicU8::new(p)).collect();
    launch(LaunchConfig::for_chunk(len), backend, len, |index, j| {
        let block = BlockId::new(index.block)?;
        let at = len * block.index() + j;
        out[at].store(embed_cell(row[at], chunk[j], block), Ordering::Relaxed);
        Ok::<_, Error>(())
    })
    .map_err(launch_failed)?;
    Ok(into_bytes(out))
}

/// Extracts `count` bytes from `row`. Equal to [`bitplane::extract_row`] on
/// every backend.
///
/// Runs in two launches. The 4-block launch writes each block's shifted slice
/// to its own cell of a partial buffer; a single-block gather launch then ORs
/// the four partials of byte `j` together. Every instance writes one cell that
/// no other instance touches.
pub fn run_extract(backend: Backend, row: &[u8], count: usize) -> Result<Vec<u8>> {
    if count * BLOCKS > row.len() {
        return bitplane::extract_row(row, count);
    }
    let partial: Vec<AtomicU8> = (0..count * BLOCKS).map(|_| AtomicU8::new(0)).collect();
    launch(LaunchConfig::for_chunk(count), backend, count, |index, j| {
        let block = BlockId::new(index.block)?;
        let at = count * block.index() + j;
        partial[at].store(extract_cell(row[at], block), Ordering::Relaxed);
        Ok::<_, Error>(())
    })
    .map_err(launch_failed)?;

    let out: Vec<AtomicU8> = (0..count).map(|_| AtomicU8::new(0)).collect();
    let gather = LaunchConfig::new(1, count.clamp(1, MAX_THREADS_PER_BLOCK)).expect("non-zero");
    launch(gather, backend, count, |_, j| {
        let byte = (0..BLOCKS).fold(0u8, |acc, i| acc | partial[count * i + j].load(Ordering::Relaxed));
        out[j].store(byte, Ordering::Relaxed);
        Ok::<_, Error>(())
    })
    .map_err(launch_failed)?;
    Ok(into_bytes(out))
}
