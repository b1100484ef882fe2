use rayon::prelude::*;

use super::rng::RngStream;

/// Draws per sampling block. Block `b` always uses stream `stream_base + b`,
/// so results do not depend on how many workers share the blocks.
pub const BLOCK_SIZE: usize = 8192;

/// Stream id base for a named purpose, keeping unrelated draws of one seed
/// on disjoint substreams.
pub fn stream_base(tag: u32) -> u64 {
    (tag as u64) << 32
}

/// Draws `n` values with `draw`, spread over `workers` threads.
///
/// Blocks are concatenated in block order, so the output is bit-identical
/// for every worker count.
pub fn sample_blocks<T, F>(n: usize, seed: u64, stream_base: u64, workers: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RngStream) -> T + Sync,
{
    let blocks = n.div_ceil(BLOCK_SIZE);
    let run_block = |b: usize| -> Vec<T> {
        let mut rng = RngStream::new(seed, stream_base + b as u64);
        let len = BLOCK_SIZE.min(n - b * BLOCK_SIZE);
        (0..len).map(|_| draw(&mut rng)).collect()
    };
    if workers <= 1 || blocks <= 1 {
        return (0..blocks).flat_map(run_block).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("failed to build worker pool");
    pool.install(|| {
        let parts: Vec<Vec<T>> = (0..blocks).into_par_iter().map(run_block).collect();
        parts.into_iter().flatten().collect()
    })
}
