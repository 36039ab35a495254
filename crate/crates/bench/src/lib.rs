//! Input generators shared by the benchmarks.

use lsbstego_core::ImagePlane;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn random_plane(width: usize, height: usize, seed: u64) -> ImagePlane {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut samples = vec![0u8; width * height];
    rng.fill(samples.as_mut_slice());
    ImagePlane::new(width, height, samples).expect("dimensions match")
}

pub fn random_payload(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut payload = vec![0u8; len];
    rng.fill(payload.as_mut_slice());
    payload
}
