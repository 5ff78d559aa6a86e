//! Deterministic sampling helpers shared by the spot-check routines, the
//! falsifiers and the verification suite. Every consumer derives its own
//! stream from a base seed so that parallel and sequential runs agree.

use crate::model::{Event, FiniteSpace, Gamble, OptionSet};
use crate::rational::Rat;
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::Arc;

/// A ChaCha stream derived from a base seed and a stream tag. Distinct tags
/// give independent streams, so per-trial RNGs can be built without any
/// sequential draws.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A random rational with numerator in `[-max_num, max_num]` and denominator
/// in `[1, max_den]`.
pub fn sample_rat(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rat {
    let num = rng.gen_range(-max_num..=max_num);
    let den = rng.gen_range(1..=max_den);
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// A strictly positive rational with numerator in `[1, max]`, denominator in
/// `[1, max]`.
pub fn sample_positive_rat(rng: &mut ChaCha8Rng, max: i64) -> Rat {
    let num = rng.gen_range(1..=max);
    let den = rng.gen_range(1..=max);
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// A random gamble with entries from the `sample_rat` lattice.
pub fn sample_gamble(rng: &mut ChaCha8Rng, space: &Arc<FiniteSpace>, bound: i64) -> Gamble {
    let values = (0..space.size()).map(|_| sample_rat(rng, bound, 4)).collect();
    Gamble::new(space.clone(), values).expect("sampled values match the space")
}

/// A random exact pmf: integer weights in `[0, scale]` with at least one
/// positive, normalized by their sum.
pub fn sample_pmf(rng: &mut ChaCha8Rng, n: usize, scale: i64) -> Vec<Rat> {
    loop {
        let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=scale)).collect();
        let total: i64 = weights.iter().sum();
        if total > 0 {
            return weights
                .into_iter()
                .map(|w| Rat::new(BigInt::from(w), BigInt::from(total)))
                .collect();
        }
    }
}

/// A strictly positive exact pmf.
pub fn sample_interior_pmf(rng: &mut ChaCha8Rng, n: usize, scale: i64) -> Vec<Rat> {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=scale)).collect();
    let total: i64 = weights.iter().sum();
    weights
        .into_iter()
        .map(|w| Rat::new(BigInt::from(w), BigInt::from(total)))
        .collect()
}

/// A uniformly random subset of `0..n`.
pub fn sample_subset(rng: &mut ChaCha8Rng, n: usize) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

/// A uniformly random proper non-empty subset of `0..n` (requires `n >= 2`).
pub fn sample_proper_subset(rng: &mut ChaCha8Rng, n: usize) -> BTreeSet<usize> {
    loop {
        let s = sample_subset(rng, n);
        if !s.is_empty() && s.len() < n {
            return s;
        }
    }
}

/// A random event, possibly empty or full.
pub fn sample_event(rng: &mut ChaCha8Rng, space: &Arc<FiniteSpace>) -> Event {
    Event::new(space.clone(), sample_subset(rng, space.size())).expect("indices in range")
}

/// A random proper non-empty event.
pub fn sample_proper_event(rng: &mut ChaCha8Rng, space: &Arc<FiniteSpace>) -> Event {
    Event::new(space.clone(), sample_proper_subset(rng, space.size())).expect("indices in range")
}

/// A random option set with 1 to `max_opts` sampled gambles (duplicates
/// collapse, so the result may be smaller).
pub fn sample_option_set(
    rng: &mut ChaCha8Rng,
    space: &Arc<FiniteSpace>,
    max_opts: usize,
    bound: i64,
) -> OptionSet {
    let count = rng.gen_range(1..=max_opts);
    let gambles = (0..count).map(|_| sample_gamble(rng, space, bound)).collect();
    OptionSet::new(space.clone(), gambles).expect("sampled gambles match the space")
}

/// A random partition of `0..n` into `cells` non-empty blocks.
pub fn sample_partition(rng: &mut ChaCha8Rng, n: usize, cells: usize) -> Vec<BTreeSet<usize>> {
    assert!(cells >= 1 && cells <= n);
    loop {
        let mut blocks: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cells];
        for i in 0..n {
            blocks[rng.gen_range(0..cells)].insert(i);
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            return blocks;
        }
    }
}

/// An integer lattice point, handy for tagging trial streams.
pub fn mix(parts: &[u64]) -> u64 {
    let mut acc: u64 = 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        acc = acc.wrapping_mul(0x100_0000_01b3).wrapping_add(p.rotate_left(17) ^ p);
    }
    acc
}
