//! The free-space matrix and the stationary discrete Fréchet distance.
//!
//! Rows are indexed by the points of `P` (row 0 at the bottom), columns by the
//! points of `Q` (column 0 at the left). A path moves up, right or diagonally
//! through 1-entries.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{dist, point_in_closed_disk, Circle, Point2, Tolerance};
use crate::{Error, Result};

/// A nonempty sequence of finite points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSequence {
    points: Vec<Point2>,
}

impl PointSequence {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySequence);
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(PointSequence { points })
    }

    pub fn from_xy(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Point2::from(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn first(&self) -> Point2 {
        self.points[0]
    }

    pub fn translated(&self, t: Point2) -> PointSequence {
        PointSequence {
            points: self.points.iter().map(|&p| p + t).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridStep {
    Up,
    Right,
    Diagonal,
}

impl GridStep {
    pub const ALL: [GridStep; 3] = [GridStep::Up, GridStep::Right, GridStep::Diagonal];

    /// Row and column increments of the step.
    pub fn offset(self) -> (usize, usize) {
        match self {
            GridStep::Up => (1, 0),
            GridStep::Right => (0, 1),
            GridStep::Diagonal => (1, 1),
        }
    }
}

/// Row-major 0/1 matrix `M_delta(P, Q + t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeSpaceMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
    delta: f64,
    translation: Point2,
}

impl FreeSpaceMatrix {
    /// Entry `(i, j)` is set iff `q_j + t` lies in the closed disk of radius
    /// `delta` around `p_i` (within the tolerance).
    pub fn build(
        p: &PointSequence,
        q: &PointSequence,
        t: Point2,
        delta: f64,
        tol: Tolerance,
    ) -> Result<Self> {
        if delta.is_nan() || delta < 0.0 {
            return Err(Error::NegativeDelta(delta));
        }
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        let (rows, cols) = (p.len(), q.len());
        let mut bits = Vec::with_capacity(rows * cols);
        for &pi in p.points() {
            for &qj in q.points() {
                bits.push(point_in_closed_disk(t, Circle::new(pi - qj, delta), tol));
            }
        }
        Ok(FreeSpaceMatrix {
            rows,
            cols,
            bits,
            delta,
            translation: t,
        })
    }

    /// A bare matrix with no geometric origin (delta 0, zero translation).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                bits.push(f(i, j));
            }
        }
        FreeSpaceMatrix {
            rows,
            cols,
            bits,
            delta: 0.0,
            translation: Point2::ORIGIN,
        }
    }

    pub fn filled(rows: usize, cols: usize, bit: bool) -> Self {
        Self::from_fn(rows, cols, |_, _| bit)
    }

    /// Builds from rows listed bottom-up (`rows[0]` is row 0).
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j] != 0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn translation(&self) -> Point2 {
        self.translation
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if i < self.rows && j < self.cols {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) -> Result<()> {
        self.check(i, j)?;
        self.bits[i * self.cols + j] = bit;
        Ok(())
    }

    pub fn toggle(&mut self, i: usize, j: usize) -> Result<()> {
        self.check(i, j)?;
        let b = &mut self.bits[i * self.cols + j];
        *b = !*b;
        Ok(())
    }

    /// Swaps the roles of `P` and `Q`; monotone paths map onto monotone paths.
    pub fn transpose(&self) -> FreeSpaceMatrix {
        let mut t = FreeSpaceMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i));
        t.delta = self.delta;
        t.translation = self.translation;
        t
    }

    /// Entries set to 1, in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows)
            .flat_map(move |i| (0..self.cols).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.get(i, j))
    }
}

/// Whether a monotone path of 1-entries joins the bottom-left and top-right
/// corners.
pub fn stationary_decide(m: &FreeSpaceMatrix) -> bool {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 || !m.get(0, 0) {
        return false;
    }
    // prev[j]: (i-1, j) reachable; cur[j]: (i, j) reachable.
    let mut prev = vec![false; cols];
    let mut cur = vec![false; cols];
    for i in 0..rows {
        for j in 0..cols {
            cur[j] = m.get(i, j)
                && ((i == 0 && j == 0)
                    || prev[j]
                    || (j > 0 && (cur[j - 1] || prev[j - 1])));
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[cols - 1]
}

/// The discrete Fréchet distance of `P` and `Q` without translation.
///
/// The optimum is one of the pairwise distances, so the search runs over their
/// sorted list rather than over real numbers.
pub fn stationary_frechet(p: &PointSequence, q: &PointSequence) -> f64 {
    let d = pairwise_distances(p, q);
    let mut cands = d.clone();
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let feasible = |delta: f64| {
        let m = FreeSpaceMatrix::from_fn(p.len(), q.len(), |i, j| d[i * q.len() + j] <= delta);
        stationary_decide(&m)
    };
    // The largest distance always admits the all-ones matrix.
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands[lo]
}

pub(crate) fn pairwise_distances(p: &PointSequence, q: &PointSequence) -> Vec<f64> {
    p.points()
        .iter()
        .flat_map(|&pi| q.points().iter().map(move |&qj| dist(pi, qj)))
        .collect()
}
