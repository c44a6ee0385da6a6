//! Uniform-grid neighbor index for fixed-radius queries.
//!
//! Points are counting-sorted into a dense row-major grid over their
//! bounding box. With the cell size at least the query radius, every point
//! within range of a query lies in the 3x3 block of cells around it, and
//! each row of that block is one contiguous run of entries.

use crate::geometry::Vec2;

// Grids with more cells than this many per point get coarser cells.
const CELLS_PER_POINT: i64 = 16;

#[derive(Clone, Debug)]
pub struct NeighborIndex {
    cell_size: f64,
    origin: (i64, i64),
    width: i64,
    height: i64,
    // starts[c]..starts[c + 1] indexes `entries` for cell c.
    starts: Vec<u32>,
    // (id, position), grouped by cell, insertion order within a cell.
    entries: Vec<(usize, Vec2)>,
    occupied: usize,
}

impl NeighborIndex {
    /// Indexes `(id, position)` pairs with cells of at least `cell_size`.
    /// Panics unless `cell_size > 0`.
    pub fn build(agents: impl IntoIterator<Item = (usize, Vec2)>, cell_size: f64) -> Self {
        assert!(cell_size > 0.0, "cell size must be positive");
        let points: Vec<(usize, Vec2)> = agents.into_iter().collect();
        let max_cells = CELLS_PER_POINT * points.len() as i64 + 64;
        let mut cell_size = cell_size.max(fitted_cell_size(&points, max_cells));
        let (origin, width, height) = loop {
            let (lo, hi) = bounds(&points, cell_size);
            let (w, h) = (hi.0 - lo.0 + 1, hi.1 - lo.1 + 1);
            if w.saturating_mul(h) <= max_cells {
                break (lo, w, h);
            }
            cell_size *= 1.25;
        };

        let cells = (width * height) as usize;
        let cell_index = |p: Vec2| {
            let (x, y) = cell_of(p, cell_size);
            ((y - origin.1) * width + (x - origin.0)) as usize
        };
        // Counting sort: counts, then running ends, then fill backwards so
        // each starts[c] ends up at the first entry of cell c.
        let keys: Vec<usize> = points.iter().map(|&(_, p)| cell_index(p)).collect();
        let mut starts = vec![0u32; cells + 1];
        for &k in &keys {
            starts[k] += 1;
        }
        let occupied = starts.iter().filter(|&&c| c > 0).count();
        for c in 1..=cells {
            starts[c] += starts[c - 1];
        }
        let mut entries = vec![(0, Vec2::ZERO); points.len()];
        for (&k, &e) in keys.iter().zip(&points).rev() {
            starts[k] -= 1;
            entries[starts[k] as usize] = e;
        }
        Self {
            cell_size,
            origin,
            width,
            height,
            starts,
            entries,
            occupied,
        }
    }

    /// Cell size actually used: the requested size, grown until the grid
    /// has at most a few cells per point.
    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    /// Number of non-empty cells.
    pub fn bucket_count(&self) -> usize {
        self.occupied
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Ids in the cell containing `p`, in insertion order.
    pub fn bucket_ids(&self, p: Vec2) -> Vec<usize> {
        let (x, y) = cell_of(p, self.cell_size);
        self.run(y, x, x).iter().map(|&(id, _)| id).collect()
    }

    /// Ids within distance `r` of `center` (boundary inclusive), ascending.
    pub fn query_radius(&self, center: Vec2, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.query_radius_into(center, r, &mut out);
        out
    }

    /// Like [`query_radius`](Self::query_radius) but reuses `out`.
    pub fn query_radius_into(&self, center: Vec2, r: f64, out: &mut Vec<usize>) {
        out.clear();
        let r2 = r * r;
        let reach = ((r / self.cell_size).ceil() as i64).max(1);
        let (cx, cy) = cell_of(center, self.cell_size);
        for gy in cy.saturating_sub(reach)..=cy.saturating_add(reach) {
            let run = self.run(gy, cx.saturating_sub(reach), cx.saturating_add(reach));
            out.extend(
                run.iter()
                    .filter(|(_, p)| p.distance_squared(center) <= r2)
                    .map(|&(id, _)| id),
            );
        }
        out.sort_unstable();
    }

    // Entries of cells x0..=x1 in row y, clipped to the grid.
    fn run(&self, y: i64, x0: i64, x1: i64) -> &[(usize, Vec2)] {
        let row = y - self.origin.1;
        let lo = (x0 - self.origin.0).max(0);
        let hi = (x1 - self.origin.0).min(self.width - 1);
        if self.entries.is_empty() || row < 0 || row >= self.height || lo > hi {
            return &[];
        }
        let base = (row * self.width) as usize;
        let a = self.starts[base + lo as usize] as usize;
        let b = self.starts[base + hi as usize + 1] as usize;
        &self.entries[a..b]
    }
}

// Cell size that covers the points' bounding box with about `max_cells`
// cells.
fn fitted_cell_size(points: &[(usize, Vec2)], max_cells: i64) -> f64 {
    let (mut lo, mut hi) = (Vec2::new(f64::MAX, f64::MAX), Vec2::new(f64::MIN, f64::MIN));
    for &(_, p) in points {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if points.is_empty() {
        return 0.0;
    }
    ((hi.x - lo.x) * (hi.y - lo.y) / max_cells as f64).sqrt()
}

fn bounds(points: &[(usize, Vec2)], cell_size: f64) -> ((i64, i64), (i64, i64)) {
    let mut lo = (i64::MAX, i64::MAX);
    let mut hi = (i64::MIN, i64::MIN);
    for &(_, p) in points {
        let (x, y) = cell_of(p, cell_size);
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    if points.is_empty() {
        ((0, 0), (0, 0))
    } else {
        (lo, hi)
    }
}

fn cell_of(p: Vec2, cell_size: f64) -> (i64, i64) {
    (
        (p.x / cell_size).floor() as i64,
        (p.y / cell_size).floor() as i64,
    )
}

/// Reference scan over every point; same contract as
/// [`NeighborIndex::query_radius`].
pub fn naive_radius_oracle(agents: &[(usize, Vec2)], center: Vec2, r: f64) -> Vec<usize> {
    let mut ids: Vec<usize> = agents
        .iter()
        .filter(|(_, p)| p.distance_squared(center) <= r * r)
        .map(|&(id, _)| id)
        .collect();
    ids.sort_unstable();
    ids
}
