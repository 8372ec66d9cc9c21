//! Uniform spatial grid over the spatial coordinates of a configuration.
//!
//! Cells are visited in rings of increasing Chebyshev distance, which lets
//! cone-type queries stop as soon as the remaining cells are provably too far.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::PointConfiguration;
use crate::math;

/// Cell layout: origin, side length and per-axis cell counts.
#[derive(Debug, Clone)]
pub struct GridGeometry {
    pub lo: Vec<f64>,
    pub cell: f64,
    pub dims: Vec<usize>,
}

impl GridGeometry {
    /// A grid over the box `[lo, hi]` with about `target` cells in total.
    pub fn covering(lo: &[f64], hi: &[f64], target: usize) -> Self {
        let k = lo.len();
        let extent: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (b - a).max(1e-300)).collect();
        let vol: f64 = extent.iter().product();
        let mut cell = math::powf(vol / target.max(1) as f64, 1.0 / k as f64);
        if !(cell > 0.0) || !cell.is_finite() {
            cell = extent.iter().copied().fold(0.0, f64::max).max(1e-12);
        }
        // Bound the total number of cells even for very elongated boxes.
        loop {
            let dims: Vec<usize> = extent.iter().map(|e| (math::floor(e / cell) as usize + 1).max(1)).collect();
            let total = dims.iter().try_fold(1usize, |acc, d| acc.checked_mul(*d));
            match total {
                Some(t) if t <= 4 * target.max(1) + 16 => return Self { lo: lo.to_vec(), cell, dims },
                _ => cell *= 1.5,
            }
        }
    }

    pub fn k(&self) -> usize {
        self.dims.len()
    }

    pub fn total_cells(&self) -> usize {
        self.dims.iter().product()
    }

    /// Integer cell coordinates, clamped to the grid.
    pub fn coords(&self, x: &[f64], out: &mut [isize]) {
        for (k, v) in x.iter().enumerate() {
            let c = math::floor((v - self.lo[k]) / self.cell) as isize;
            out[k] = c.clamp(0, self.dims[k] as isize - 1);
        }
    }

    pub fn linear(&self, coords: &[isize]) -> usize {
        let mut idx = 0usize;
        for k in (0..self.k()).rev() {
            idx = idx * self.dims[k] + coords[k] as usize;
        }
        idx
    }

    /// Euclidean distance from `x` to the closed cell with coordinates `coords`.
    /// Border cells extend to infinity, matching the clamping in [`Self::coords`].
    pub fn min_dist(&self, x: &[f64], coords: &[isize]) -> f64 {
        let mut s = 0.0;
        for k in 0..self.k() {
            let c = coords[k];
            let a = if c == 0 { f64::NEG_INFINITY } else { self.lo[k] + c as f64 * self.cell };
            let b =
                if c as usize == self.dims[k] - 1 { f64::INFINITY } else { self.lo[k] + (c + 1) as f64 * self.cell };
            let gap = if x[k] < a {
                a - x[k]
            } else if x[k] > b {
                x[k] - b
            } else {
                0.0
            };
            s += gap * gap;
        }
        math::sqrt(s)
    }

    /// Largest Chebyshev ring index that still contains grid cells around `center`.
    pub fn max_ring(&self, center: &[isize]) -> usize {
        (0..self.k()).map(|k| (center[k] as usize).max(self.dims[k] - 1 - center[k] as usize)).max().unwrap_or(0)
    }

    /// Calls `visit` on every cell at Chebyshev distance exactly `ring` from `center`.
    /// Stops early and returns `true` when `visit` does.
    pub fn for_each_in_ring(&self, center: &[isize], ring: usize, mut visit: impl FnMut(&[isize]) -> bool) -> bool {
        let k = self.k();
        let r = ring as isize;
        let lo: Vec<isize> = (0..k).map(|j| (center[j] - r).max(0)).collect();
        let hi: Vec<isize> = (0..k).map(|j| (center[j] + r).min(self.dims[j] as isize - 1)).collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return false;
        }
        let mut cur = lo.clone();
        loop {
            let cheb = (0..k).map(|j| (cur[j] - center[j]).abs()).max().unwrap_or(0);
            if cheb == r && visit(&cur) {
                return true;
            }
            let mut j = 0;
            loop {
                if j == k {
                    return false;
                }
                if cur[j] < hi[j] {
                    cur[j] += 1;
                    break;
                }
                cur[j] = lo[j];
                j += 1;
            }
        }
    }
}

/// Static grid with buckets sorted by time (ties by index).
#[derive(Debug, Clone)]
pub struct TimeSortedGrid {
    pub geometry: GridGeometry,
    starts: Vec<usize>,
    entries: Vec<usize>,
}

impl TimeSortedGrid {
    /// Builds the index with roughly `per_cell` points per cell.
    pub fn build(config: &PointConfiguration, per_cell: f64) -> Self {
        let n = config.len();
        let (lo, hi) =
            if n == 0 { (vec![0.0; config.stride], vec![1.0; config.stride]) } else { config.bounding_box() };
        let target = ((n as f64 / per_cell.max(0.5)) as usize).max(1);
        let geometry = GridGeometry::covering(&lo, &hi, target);
        let mut coords = vec![0isize; config.stride];
        let mut cell_of = Vec::with_capacity(n);
        let mut counts = vec![0usize; geometry.total_cells() + 1];
        for i in 0..n {
            geometry.coords(config.x(i), &mut coords);
            let c = geometry.linear(&coords);
            cell_of.push(c);
            counts[c + 1] += 1;
        }
        for c in 0..geometry.total_cells() {
            counts[c + 1] += counts[c];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut entries = vec![0usize; n];
        for (i, &c) in cell_of.iter().enumerate() {
            entries[fill[c]] = i;
            fill[c] += 1;
        }
        for c in 0..geometry.total_cells() {
            entries[starts[c]..starts[c + 1]].sort_by(|&a, &b| config.h(a).total_cmp(&config.h(b)).then(a.cmp(&b)));
        }
        Self { geometry, starts, entries }
    }

    /// Indices in the cell, sorted by increasing time.
    pub fn bucket(&self, coords: &[isize]) -> &[usize] {
        let c = self.geometry.linear(coords);
        &self.entries[self.starts[c]..self.starts[c + 1]]
    }
}
