//! Deterministic pairwise reduction over index ranges.
//!
//! A range is split at fixed midpoints down to leaves of [`LEAF`] indices;
//! leaves are folded sequentially and the halves merged bottom-up. The split
//! points depend only on the range, never on the thread count, so results are
//! bit-identical whether the tree is evaluated on one worker or many.

use std::ops::Range;

/// Indices folded sequentially at the bottom of the tree.
pub const LEAF: u64 = 16;

/// Ranges shorter than this are not split across threads.
const PAR_MIN: u64 = 1 << 10;

/// A partial result that can absorb its right neighbour.
pub trait Accumulate: Send + Sized {
    fn merge(self, right: Self) -> Self;
}

impl Accumulate for f64 {
    fn merge(self, right: Self) -> Self {
        self + right
    }
}

impl Accumulate for Vec<f64> {
    fn merge(mut self, right: Self) -> Self {
        debug_assert_eq!(self.len(), right.len());
        for (a, b) in self.iter_mut().zip(right) {
            *a += b;
        }
        self
    }
}

impl<A: Accumulate, B: Accumulate> Accumulate for (A, B) {
    fn merge(self, right: Self) -> Self {
        (self.0.merge(right.0), self.1.merge(right.1))
    }
}

impl<T: Accumulate, E: Send> Accumulate for Result<T, E> {
    fn merge(self, right: Self) -> Self {
        Ok(self?.merge(right?))
    }
}

/// Reduces `range` by calling `leaf` on each leaf range and merging pairwise.
///
/// `range` must be non-empty.
pub fn pairwise_reduce<A, F>(range: Range<u64>, leaf: &F) -> A
where
    A: Accumulate,
    F: Fn(Range<u64>) -> A + Sync,
{
    let len = range.end - range.start;
    debug_assert!(len > 0);
    if len <= LEAF {
        return leaf(range);
    }
    let mid = range.start + len / 2;
    let (left, right) = if len >= PAR_MIN {
        rayon::join(
            || pairwise_reduce(range.start..mid, leaf),
            || pairwise_reduce(mid..range.end, leaf),
        )
    } else {
        (
            pairwise_reduce(range.start..mid, leaf),
            pairwise_reduce(mid..range.end, leaf),
        )
    };
    left.merge(right)
}

/// Pairwise sum of a slice (same tree shape as [`pairwise_reduce`]).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    pairwise_reduce(0..xs.len() as u64, &|r: Range<u64>| {
        xs[r.start as usize..r.end as usize].iter().sum::<f64>()
    })
}

/// Running mean and sum of squared deviations, merged with Chan's update.
///
/// A stream of identical values keeps `m2` at exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanVar {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl MeanVar {
    pub const EMPTY: MeanVar = MeanVar {
        count: 0,
        mean: 0.0,
        m2: 0.0,
    };

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        (self.variance() / self.count as f64).sqrt()
    }
}

impl Accumulate for MeanVar {
    fn merge(self, right: Self) -> Self {
        if self.count == 0 {
            return right;
        }
        if right.count == 0 {
            return self;
        }
        let count = self.count + right.count;
        let delta = right.mean - self.mean;
        let weight = right.count as f64 / count as f64;
        MeanVar {
            count,
            mean: self.mean + delta * weight,
            m2: self.m2 + right.m2 + delta * delta * self.count as f64 * weight,
        }
    }
}

/// Runs `f` on a dedicated pool of `workers` threads (`None` uses rayon's
/// global pool).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        None => f(),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
    }
}
