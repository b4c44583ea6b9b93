//! Rationalization of constructed time points onto an exact integer lattice.
//!
//! Sampling times, lags and volatility breakpoints in this crate are
//! *constructed* quantities (multiples of a step like 1e-3), not measured
//! ones. Arithmetic such as `t - theta` is exact on an integer lattice but
//! not in floating point, and the overlap indicator `1{I cap J_-theta != {}}`
//! is discontinuous, so one ulp of rounding can flip a touching pair into a
//! spuriously overlapping one. Whenever a set of points is commensurate we
//! therefore snap it to integer ticks and do interval logic exactly.

/// Base resolution for tick snapping: one nano time unit.
const TICK: f64 = 1e-9;
/// A point must sit within this distance of its snapped tick to count as
/// exactly representable.
const SNAP_TOL: f64 = 1e-12;

/// An exact lattice `{k * step : k in Z}` together with the tick step.
#[derive(Debug, Clone)]
pub struct Lattice {
    /// Lattice step in time units (an integer multiple of 1e-9).
    pub step: f64,
    /// Lattice step in integer nano-ticks.
    pub step_ticks: i64,
}

impl Lattice {
    /// Find the coarsest lattice containing every point, or `None` when the
    /// points are not commensurate at nano resolution.
    pub fn fit(points: impl IntoIterator<Item = f64>) -> Option<Lattice> {
        let mut g: i64 = 0;
        for p in points {
            let t = to_ticks(p)?;
            g = gcd(g, t.abs());
        }
        if g == 0 {
            // All points are zero; any step works.
            g = 1_000_000; // 1e-3 in ticks, an arbitrary benign default
        }
        Some(Lattice {
            step: g as f64 * TICK,
            step_ticks: g,
        })
    }

    /// Index of `p` on the lattice, or `None` if `p` does not lie on it.
    pub fn index_of(&self, p: f64) -> Option<i64> {
        let t = to_ticks(p)?;
        if t % self.step_ticks == 0 {
            Some(t / self.step_ticks)
        } else {
            None
        }
    }

    /// The time value of lattice index `k`.
    pub fn value_of(&self, k: i64) -> f64 {
        (k * self.step_ticks) as f64 * TICK
    }
}

/// Snap a point to integer nano-ticks; `None` if it is farther than
/// `SNAP_TOL` from every tick (incommensurate input).
pub fn to_ticks(p: f64) -> Option<i64> {
    let scaled = p / TICK;
    let rounded = scaled.round();
    if (p - rounded * TICK).abs() > SNAP_TOL || rounded.abs() > 9.0e17 {
        None
    } else {
        Some(rounded as i64)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
