//! The cross-covariance contrast and its overlap machinery.
//!
//! `U_n(theta)` sums products of increments over interval pairs `(I, J)`
//! with `I cap (J - theta)` nonempty. For each lag the overlapping `J`s of
//! a given `I` form one contiguous run, so a two-pointer sweep enumerates
//! all pairs in `O(n1 + n2 + #pairs)` per lag; a quadratic reference loop
//! is kept for cross-checking. Whenever endpoints and lags are commensurate
//! the interval logic runs on an exact integer lattice, which keeps
//! touching intervals non-overlapping even though `t - theta` is not exact
//! in floating point; otherwise it falls back to exact float comparisons
//! with an optional epsilon for measured data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::leadlag::{build_partition, IntervalPartition, LagGrid};
use crate::sim::PathPair;

/// Options for the overlap predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastOptions {
    /// Minimum overlap length for two intervals to count as intersecting.
    ///
    /// The default 0 compares endpoints exactly, the right choice for
    /// constructed sampling times. For ingested real data with timestamp
    /// noise, a small positive epsilon treats near-touching intervals as
    /// disjoint. A positive epsilon disables the integer-lattice path.
    pub epsilon: f64,
}

impl Default for ContrastOptions {
    fn default() -> Self {
        ContrastOptions { epsilon: 0.0 }
    }
}

/// Contrast values per lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContrastResult {
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
    /// Set for lags at which no interval pair overlapped (e.g. the lag
    /// shifts every `J` outside the data range); the value there is 0.
    pub no_overlap: Vec<bool>,
}

/// Interval endpoints in either exact-lattice or float coordinates.
enum Geometry {
    Ticks {
        ends1: Vec<i64>,
        ends2: Vec<i64>,
        thetas: Vec<i64>,
    },
    Float {
        ends1: Vec<f64>,
        ends2: Vec<f64>,
        thetas: Vec<f64>,
        epsilon: f64,
    },
}

impl Geometry {
    fn build(p1: &IntervalPartition, p2: &IntervalPartition, grid: &LagGrid, opts: &ContrastOptions) -> Geometry {
        let e1 = p1.endpoints();
        let e2 = p2.endpoints();
        if opts.epsilon == 0.0 {
            let all = e1.iter().chain(e2.iter()).chain(grid.thetas().iter()).copied();
            if let Some(lat) = Lattice::fit(all) {
                let snap = |v: &[f64]| v.iter().map(|&x| lat.index_of(x)).collect::<Option<Vec<i64>>>();
                if let (Some(ends1), Some(ends2), Some(thetas)) = (snap(&e1), snap(&e2), snap(grid.thetas())) {
                    return Geometry::Ticks { ends1, ends2, thetas };
                }
            }
        }
        Geometry::Float {
            ends1: e1,
            ends2: e2,
            thetas: grid.thetas().to_vec(),
            epsilon: opts.epsilon,
        }
    }

    fn n1(&self) -> usize {
        match self {
            Geometry::Ticks { ends1, .. } => ends1.len() - 1,
            Geometry::Float { ends1, .. } => ends1.len() - 1,
        }
    }

    fn n2(&self) -> usize {
        match self {
            Geometry::Ticks { ends2, .. } => ends2.len() - 1,
            Geometry::Float { ends2, .. } => ends2.len() - 1,
        }
    }

    /// Does `I_i` intersect `J_j - theta_t`? Used by the reference loop.
    fn overlap(&self, i: usize, j: usize, t: usize) -> bool {
        match self {
            Geometry::Ticks { ends1, ends2, thetas } => {
                let th = thetas[t];
                ends1[i] < ends2[j + 1] - th && ends2[j] - th < ends1[i + 1]
            }
            Geometry::Float { ends1, ends2, thetas, epsilon } => {
                let th = thetas[t];
                ends1[i] + epsilon < ends2[j + 1] - th && (ends2[j] - th) + epsilon < ends1[i + 1]
            }
        }
    }

    /// For lag index `t`, the contiguous run `[lo_i, hi_i)` of `j`s whose
    /// shifted `J_j` intersects `I_i`, for every `i`.
    fn ranges_for_lag(&self, t: usize, out: &mut Vec<(u32, u32)>) {
        out.clear();
        let n1 = self.n1();
        let n2 = self.n2();
        match self {
            Geometry::Ticks { ends1, ends2, thetas } => {
                let th = thetas[t];
                let mut lo = 0usize;
                let mut hi = 0usize;
                for i in 0..n1 {
                    let (a, b) = (ends1[i], ends1[i + 1]);
                    while lo < n2 && ends2[lo + 1] - th <= a {
                        lo += 1;
                    }
                    if hi < lo {
                        hi = lo;
                    }
                    while hi < n2 && ends2[hi] - th < b {
                        hi += 1;
                    }
                    out.push((lo as u32, hi as u32));
                }
            }
            Geometry::Float { ends1, ends2, thetas, epsilon } => {
                let th = thetas[t];
                let mut lo = 0usize;
                let mut hi = 0usize;
                for i in 0..n1 {
                    let (a, b) = (ends1[i], ends1[i + 1]);
                    while lo < n2 && ends2[lo + 1] - th <= a + epsilon {
                        lo += 1;
                    }
                    if hi < lo {
                        hi = lo;
                    }
                    while hi < n2 && (ends2[hi] - th) + epsilon < b {
                        hi += 1;
                    }
                    out.push((lo as u32, hi as u32));
                }
            }
        }
    }
}

/// Overlap runs for every lag of a grid, reusable across bootstrap
/// replications. Runs are precomputed (`8 * n1 * |grid|` bytes) when that
/// fits the byte cap, and recomputed per evaluation otherwise; either way
/// the overlap decisions come from the same geometry, so results are
/// identical.
pub struct OverlapTable {
    pub thetas: Vec<f64>,
    geo: Geometry,
    /// `ranges[t][i] = (lo, hi)`: `J_lo..J_hi` intersect `I_i` at lag `t`.
    cached: Option<Vec<Vec<(u32, u32)>>>,
}

impl OverlapTable {
    pub fn build(
        p1: &IntervalPartition,
        p2: &IntervalPartition,
        grid: &LagGrid,
        opts: &ContrastOptions,
        cap_bytes: usize,
    ) -> OverlapTable {
        let geo = Geometry::build(p1, p2, grid, opts);
        let bytes = 8usize
            .checked_mul(p1.len())
            .and_then(|b| b.checked_mul(grid.len()));
        let cached = match bytes {
            Some(b) if b <= cap_bytes => {
                let mut ranges = Vec::with_capacity(grid.len());
                let mut buf = Vec::with_capacity(p1.len());
                for t in 0..grid.len() {
                    geo.ranges_for_lag(t, &mut buf);
                    ranges.push(buf.clone());
                }
                Some(ranges)
            }
            _ => None,
        };
        OverlapTable {
            thetas: grid.thetas().to_vec(),
            geo,
            cached,
        }
    }

    /// Whether the runs were precomputed or are streamed per evaluation.
    pub fn is_cached(&self) -> bool {
        self.cached.is_some()
    }

    /// Evaluate `max_t |sum_{(i,j)} y1[i] y2[j]|` over the table, the shared
    /// kernel of the contrast and every bootstrap replication. Accumulation
    /// runs in `(t, i, j)` order so results are bit-stable.
    pub fn max_abs_weighted(&self, y1: &[f64], y2: &[f64]) -> f64 {
        let mut max = 0.0f64;
        self.for_each_lag(|_, ranges| {
            let u = Self::weighted_sum(ranges, y1, y2);
            if u.abs() > max {
                max = u.abs();
            }
        });
        max
    }

    /// The per-lag weighted sums (the contrast itself when `y` are the raw
    /// increments), plus the no-overlap flags.
    pub fn weighted_sums(&self, y1: &[f64], y2: &[f64]) -> (Vec<f64>, Vec<bool>) {
        let n = self.thetas.len();
        let mut values = Vec::with_capacity(n);
        let mut empty = Vec::with_capacity(n);
        self.for_each_lag(|_, ranges| {
            values.push(Self::weighted_sum(ranges, y1, y2));
            empty.push(ranges.iter().all(|&(lo, hi)| lo == hi));
        });
        (values, empty)
    }

    fn for_each_lag(&self, mut f: impl FnMut(usize, &[(u32, u32)])) {
        match &self.cached {
            Some(ranges) => {
                for (t, r) in ranges.iter().enumerate() {
                    f(t, r);
                }
            }
            None => {
                let mut buf = Vec::with_capacity(self.geo.n1());
                for t in 0..self.thetas.len() {
                    self.geo.ranges_for_lag(t, &mut buf);
                    f(t, &buf);
                }
            }
        }
    }

    fn weighted_sum(ranges: &[(u32, u32)], y1: &[f64], y2: &[f64]) -> f64 {
        let mut acc = 0.0f64;
        for (i, &(lo, hi)) in ranges.iter().enumerate() {
            let yi = y1[i];
            for j in lo..hi {
                acc += yi * y2[j as usize];
            }
        }
        acc
    }

    pub fn n_lags(&self) -> usize {
        self.thetas.len()
    }
}

fn increments_and_partitions(path: &PathPair) -> Result<(IntervalPartition, IntervalPartition, Vec<f64>, Vec<f64>)> {
    path.validate()?;
    let p1 = build_partition(&path.scheme.times1)?;
    let p2 = build_partition(&path.scheme.times2)?;
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::Data("empty partition".into()));
    }
    Ok((p1, p2, path.increments1(), path.increments2()))
}

/// The contrast `U_n(theta)` for every lag of the grid, via the two-pointer
/// sweep.
pub fn contrast(path: &PathPair, grid: &LagGrid, opts: &ContrastOptions) -> Result<ContrastResult> {
    let (p1, p2, d1, d2) = increments_and_partitions(path)?;
    let geo = Geometry::build(&p1, &p2, grid, opts);
    let mut values = Vec::with_capacity(grid.len());
    let mut no_overlap = Vec::with_capacity(grid.len());
    let mut buf = Vec::with_capacity(p1.len());
    for t in 0..grid.len() {
        geo.ranges_for_lag(t, &mut buf);
        values.push(OverlapTable::weighted_sum(&buf, &d1, &d2));
        no_overlap.push(buf.iter().all(|&(lo, hi)| lo == hi));
    }
    Ok(ContrastResult {
        thetas: grid.thetas().to_vec(),
        values,
        no_overlap,
    })
}

/// Quadratic-cost reference: the same contrast by the naive double loop
/// over all `(I, J)` pairs, sharing the overlap predicate and accumulation
/// order with the sweep so results must agree bitwise.
pub fn contrast_naive(path: &PathPair, grid: &LagGrid, opts: &ContrastOptions) -> Result<ContrastResult> {
    let (p1, p2, d1, d2) = increments_and_partitions(path)?;
    let geo = Geometry::build(&p1, &p2, grid, opts);
    let mut values = Vec::with_capacity(grid.len());
    let mut no_overlap = Vec::with_capacity(grid.len());
    for t in 0..grid.len() {
        let mut acc = 0.0f64;
        let mut any = false;
        for i in 0..p1.len() {
            for j in 0..p2.len() {
                if geo.overlap(i, j, t) {
                    acc += d1[i] * d2[j];
                    any = true;
                }
            }
        }
        values.push(acc);
        no_overlap.push(!any);
    }
    Ok(ContrastResult {
        thetas: grid.thetas().to_vec(),
        values,
        no_overlap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{SamplingScheme, SchemeKind};

    fn path_from(times1: Vec<f64>, x1: Vec<f64>, times2: Vec<f64>, x2: Vec<f64>, horizon: f64) -> PathPair {
        PathPair {
            scheme: SamplingScheme {
                times1,
                times2,
                kind: SchemeKind::Custom,
                horizon,
            },
            x1,
            x2,
        }
    }

    /// Increments a = (a1, a2), b = (b1, b2) on the shared grid {0, 0.5, 1}.
    fn two_interval_path(a: (f64, f64), b: (f64, f64)) -> PathPair {
        path_from(
            vec![0.0, 0.5, 1.0],
            vec![0.0, a.0, a.0 + a.1],
            vec![0.0, 0.5, 1.0],
            vec![0.0, b.0, b.0 + b.1],
            1.0,
        )
    }

    #[test]
    fn zero_lag_pairs_matching_intervals() {
        let path = two_interval_path((1.5, -2.0), (0.5, 3.0));
        let grid = LagGrid::new(vec![0.0]).unwrap();
        let r = contrast(&path, &grid, &ContrastOptions::default()).unwrap();
        // Only (I1, J1) and (I2, J2) overlap: a1 b1 + a2 b2.
        assert_eq!(r.values, vec![1.5 * 0.5 + (-2.0) * 3.0]);
        assert_eq!(r.no_overlap, vec![false]);
    }

    #[test]
    fn half_lag_pairs_the_shifted_interval() {
        let path = two_interval_path((1.5, -2.0), (0.5, 3.0));
        let grid = LagGrid::new(vec![0.5]).unwrap();
        let r = contrast(&path, &grid, &ContrastOptions::default()).unwrap();
        // Only I1 cap (J2 - 0.5) = (0, 0.5] is nonempty: a1 b2.
        assert_eq!(r.values, vec![1.5 * 3.0]);
    }

    #[test]
    fn lag_beyond_data_range_gives_zero_with_flag() {
        let path = two_interval_path((1.0, 1.0), (1.0, 1.0));
        let grid = LagGrid::new(vec![2.0]).unwrap();
        let r = contrast(&path, &grid, &ContrastOptions::default()).unwrap();
        assert_eq!(r.values, vec![0.0]);
        assert_eq!(r.no_overlap, vec![true]);
    }

    #[test]
    fn statistic_example_from_contrast_values() {
        // a = (1, -1), b = (1, 1): U(0) = 0, U(0.5) = 1.
        let path = two_interval_path((1.0, -1.0), (1.0, 1.0));
        let grid = LagGrid::new(vec![0.0, 0.5]).unwrap();
        let r = contrast(&path, &grid, &ContrastOptions::default()).unwrap();
        assert_eq!(r.values, vec![0.0, 1.0]);
        let t = crate::leadlag::test_statistic(&r.values, 0, false).unwrap();
        assert_eq!(t, 1.0);
    }

    #[test]
    fn sweep_equals_naive_on_nonsynchronous_data() {
        let path = path_from(
            vec![0.0, 0.13, 0.19, 0.55, 0.91, 1.0],
            vec![0.0, 1.0, -0.5, 0.25, 2.0, 1.0],
            vec![0.0, 0.07, 0.44, 0.80, 1.0],
            vec![0.5, 0.0, 1.5, -1.0, 0.75],
            1.0,
        );
        let grid = LagGrid::new(vec![-0.3, -0.11, 0.0, 0.2, 0.5]).unwrap();
        let opts = ContrastOptions::default();
        let sweep = contrast(&path, &grid, &opts).unwrap();
        let naive = contrast_naive(&path, &grid, &opts).unwrap();
        assert_eq!(sweep, naive);
    }

    #[test]
    fn millisecond_lags_use_the_exact_lattice() {
        // theta = h shifts J_j onto J_{j-1}'s slot exactly; with float
        // arithmetic alone the touching pairs would jitter.
        let h = 1e-3;
        let times: Vec<f64> = (0..=100).map(|i| i as f64 * h).collect();
        let x: Vec<f64> = times.iter().map(|t| t.sin()).collect();
        let path = path_from(times.clone(), x.clone(), times, x, 0.1);
        let grid = LagGrid::symmetric(h, 5.0 * h).unwrap();
        let r = contrast(&path, &grid, &ContrastOptions::default()).unwrap();
        let naive = contrast_naive(&path, &grid, &ContrastOptions::default()).unwrap();
        assert_eq!(r, naive);
        // At lag k h each I_i pairs exactly with J_{i+k}.
        let d: Vec<f64> = x_diffs(&path.x1);
        let k = 2usize;
        let expect: f64 = (0..d.len() - k).map(|i| d[i] * d[i + k]).sum();
        let idx = grid.thetas().iter().position(|&t| (t - 2e-3).abs() < 1e-12).unwrap();
        assert!((r.values[idx] - expect).abs() < 1e-12);
    }

    fn x_diffs(x: &[f64]) -> Vec<f64> {
        x.windows(2).map(|w| w[1] - w[0]).collect()
    }

    #[test]
    fn positive_epsilon_drops_hairline_overlaps() {
        // J - theta overlaps I by 1e-7, below the 1e-6 epsilon.
        let path = path_from(
            vec![0.0, 0.5],
            vec![0.0, 1.0],
            vec![0.5 - 1e-7, 1.0],
            vec![0.0, 1.0],
            1.0,
        );
        let grid = LagGrid::new(vec![0.0]).unwrap();
        let exact = contrast(&path, &grid, &ContrastOptions { epsilon: 0.0 }).unwrap();
        assert_eq!(exact.values, vec![1.0]);
        let fuzzy = contrast(&path, &grid, &ContrastOptions { epsilon: 1e-6 }).unwrap();
        assert_eq!(fuzzy.values, vec![0.0]);
    }

    #[test]
    fn overlap_table_matches_contrast() {
        let path = path_from(
            vec![0.0, 0.25, 0.5, 0.75, 1.0],
            vec![0.0, 0.3, -0.2, 0.8, 0.1],
            vec![0.0, 0.4, 0.6, 1.0],
            vec![0.2, -0.1, 0.5, 0.9],
            1.0,
        );
        let grid = LagGrid::symmetric(0.25, 0.5).unwrap();
        let opts = ContrastOptions::default();
        let p1 = build_partition(&path.scheme.times1).unwrap();
        let p2 = build_partition(&path.scheme.times2).unwrap();
        let table = OverlapTable::build(&p1, &p2, &grid, &opts, usize::MAX);
        assert!(table.is_cached());
        let (vals, flags) = table.weighted_sums(&path.increments1(), &path.increments2());
        let direct = contrast(&path, &grid, &opts).unwrap();
        assert_eq!(vals, direct.values);
        assert_eq!(flags, direct.no_overlap);

        // A starved cache streams the same ranges and must agree bitwise.
        let streamed = OverlapTable::build(&p1, &p2, &grid, &opts, 0);
        assert!(!streamed.is_cached());
        let (vals2, flags2) = streamed.weighted_sums(&path.increments1(), &path.increments2());
        assert_eq!(vals, vals2);
        assert_eq!(flags, flags2);
    }
}
