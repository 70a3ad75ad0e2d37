//! Boundary-to-boundary reachability summaries of matrix blocks.
//!
//! A block spans rows `row..=top` and columns `col..=right`. Its input boundary
//! is enumerated along the bottom row from right to left and then up the left
//! column; its output boundary up the right column and then along the top row
//! from right to left. Both enumerations have `height + width - 1` entries and
//! share the bottom-right and top-left corners.
//!
//! For each input 1-entry the summary keeps the first and last output entry it
//! reaches. Monotone paths that start further along the input boundary can only
//! cross earlier paths, so these intervals are nondecreasing in both endpoints,
//! and any output entry inside an input's interval that is reachable from some
//! input is reachable from that input. That is what lets [`Summary::propagate`]
//! and the merges run in time linear in the boundary length.
//!
//! [`VerticalReach`] is the same summary restricted to the left and right
//! columns, used when blocks are only ever concatenated side by side.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::free_space::FreeSpaceMatrix;
use crate::{Entry, Error, Result};

/// A contiguous block of a matrix. All sizes are at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
}

impl Block {
    pub fn new(row: usize, col: usize, height: usize, width: usize) -> Self {
        assert!(height >= 1 && width >= 1, "empty block");
        Block {
            row,
            col,
            height,
            width,
        }
    }

    pub fn whole(m: &FreeSpaceMatrix) -> Self {
        Block::new(0, 0, m.rows(), m.cols())
    }

    pub fn top(&self) -> usize {
        self.row + self.height - 1
    }

    pub fn right(&self) -> usize {
        self.col + self.width - 1
    }

    pub fn boundary_len(&self) -> usize {
        self.height + self.width - 1
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        (self.row..=self.top()).contains(&i) && (self.col..=self.right()).contains(&j)
    }

    pub fn input_cell(&self, k: usize) -> Entry {
        debug_assert!(k < self.boundary_len());
        if k < self.width {
            (self.row, self.right() - k)
        } else {
            (self.row + k + 1 - self.width, self.col)
        }
    }

    pub fn output_cell(&self, k: usize) -> Entry {
        debug_assert!(k < self.boundary_len());
        if k < self.height {
            (self.row + k, self.right())
        } else {
            (self.top(), self.right() + self.height - 1 - k)
        }
    }

    pub fn input_index(&self, i: usize, j: usize) -> Option<usize> {
        if !self.contains(i, j) {
            None
        } else if i == self.row {
            Some(self.right() - j)
        } else if j == self.col {
            Some(self.width - 1 + i - self.row)
        } else {
            None
        }
    }

    pub fn output_index(&self, i: usize, j: usize) -> Option<usize> {
        if !self.contains(i, j) {
            None
        } else if j == self.right() {
            Some(i - self.row)
        } else if i == self.top() {
            Some(self.height - 1 + self.right() - j)
        } else {
            None
        }
    }

    /// Splits the rows into two blocks sharing row `row + lower_height - 1`.
    pub fn split_rows(&self, lower_height: usize) -> (Block, Block) {
        assert!(lower_height >= 2 && lower_height <= self.height - 1);
        let lower = Block::new(self.row, self.col, lower_height, self.width);
        let upper = Block::new(
            lower.top(),
            self.col,
            self.height - lower_height + 1,
            self.width,
        );
        (lower, upper)
    }

    /// Splits the columns into two blocks sharing column `col + left_width - 1`.
    pub fn split_cols(&self, left_width: usize) -> (Block, Block) {
        assert!(left_width >= 2 && left_width <= self.width - 1);
        let left = Block::new(self.row, self.col, self.height, left_width);
        let right = Block::new(
            self.row,
            left.right(),
            self.height,
            self.width - left_width + 1,
        );
        (left, right)
    }
}

/// How two sibling blocks are glued.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// The first block lies below the second; they share a full row.
    Horizontal,
    /// The first block lies left of the second; they share a full column.
    Vertical,
}

/// Inverse lists stored contiguously: `get(j)` are the inputs whose target is `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndexLists {
    offsets: Vec<usize>,
    items: Vec<usize>,
}

impl IndexLists {
    fn from_targets(n_out: usize, targets: &[Option<usize>]) -> Self {
        let mut offsets = vec![0usize; n_out + 1];
        for t in targets.iter().flatten() {
            offsets[t + 1] += 1;
        }
        for j in 0..n_out {
            offsets[j + 1] += offsets[j];
        }
        let mut fill = offsets.clone();
        let mut items = vec![0usize; offsets[n_out]];
        for (i, t) in targets.iter().enumerate() {
            if let Some(t) = *t {
                items[fill[t]] = i;
                fill[t] += 1;
            }
        }
        IndexLists { offsets, items }
    }

    pub fn get(&self, j: usize) -> &[usize] {
        &self.items[self.offsets[j]..self.offsets[j + 1]]
    }
}

/// Reachability summary between an ordered input boundary and an ordered
/// output boundary. Indices are positions in those enumerations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    first: Vec<Option<usize>>,
    last: Vec<Option<usize>>,
    reach: Vec<bool>,
    first_of: IndexLists,
    last_of: IndexLists,
}

impl Summary {
    fn from_parts(first: Vec<Option<usize>>, last: Vec<Option<usize>>, reach: Vec<bool>) -> Self {
        let first_of = IndexLists::from_targets(reach.len(), &first);
        let last_of = IndexLists::from_targets(reach.len(), &last);
        Summary {
            first,
            last,
            reach,
            first_of,
            last_of,
        }
    }

    /// Direct computation: a dynamic program from every input 1-entry.
    fn brute_force(m: &FreeSpaceMatrix, block: Block, inputs: &[Entry], outputs: &[Entry]) -> Self {
        let (h, w) = (block.height, block.width);
        let mut first = vec![None; inputs.len()];
        let mut last = vec![None; inputs.len()];
        let mut reach = vec![false; outputs.len()];
        let mut table = vec![false; h * w];
        for (k, &(si, sj)) in inputs.iter().enumerate() {
            if !m.get(si, sj) {
                continue;
            }
            let (r0, c0) = (si - block.row, sj - block.col);
            table.iter_mut().for_each(|b| *b = false);
            for r in r0..h {
                for c in c0..w {
                    let here = m.get(block.row + r, block.col + c);
                    table[r * w + c] = here
                        && ((r == r0 && c == c0)
                            || (r > r0 && table[(r - 1) * w + c])
                            || (c > c0 && table[r * w + c - 1])
                            || (r > r0 && c > c0 && table[(r - 1) * w + c - 1]));
                }
            }
            for (o, &(oi, oj)) in outputs.iter().enumerate() {
                if table[(oi - block.row) * w + (oj - block.col)] {
                    first[k].get_or_insert(o);
                    last[k] = Some(o);
                    reach[o] = true;
                }
            }
        }
        Summary::from_parts(first, last, reach)
    }

    pub fn n_inputs(&self) -> usize {
        self.first.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.reach.len()
    }

    /// First output reached from input `i` (`None` for 0-entries and dead ends).
    pub fn sigma_a(&self, i: usize) -> Option<usize> {
        self.first[i]
    }

    /// Last output reached from input `i`.
    pub fn sigma_z(&self, i: usize) -> Option<usize> {
        self.last[i]
    }

    /// Whether output `j` is reachable from some input.
    pub fn flag(&self, j: usize) -> bool {
        self.reach[j]
    }

    /// Inputs whose first reached output is `j`.
    pub fn list_a(&self, j: usize) -> &[usize] {
        self.first_of.get(j)
    }

    /// Inputs whose last reached output is `j`.
    pub fn list_z(&self, j: usize) -> &[usize] {
        self.last_of.get(j)
    }

    /// Outputs reachable from the marked inputs.
    ///
    /// Each marked input scans its interval starting after the part already
    /// covered by the previous marked input, so the total work is linear.
    pub fn propagate(&self, marked: &[bool]) -> Vec<bool> {
        assert_eq!(marked.len(), self.n_inputs());
        let mut out = vec![false; self.n_outputs()];
        let mut prev_last: Option<usize> = None;
        for (i, _) in marked.iter().enumerate().filter(|(_, &b)| b) {
            let (Some(a), Some(z)) = (self.first[i], self.last[i]) else {
                continue;
            };
            let start = prev_last.map_or(a, |p| p.max(a));
            for j in start..=z {
                if self.reach[j] {
                    out[j] = true;
                }
            }
            prev_last = Some(z);
        }
        out
    }

    /// Interval endpoints are nondecreasing along the input order, lists are
    /// consistent with the maps, and every endpoint is a flagged output.
    pub fn check_invariants(&self) -> bool {
        let mut prev: Option<(usize, usize)> = None;
        for i in 0..self.n_inputs() {
            match (self.first[i], self.last[i]) {
                (None, None) => {}
                (Some(a), Some(z)) => {
                    if a > z || !self.reach[a] || !self.reach[z] {
                        return false;
                    }
                    if let Some((pa, pz)) = prev {
                        if a < pa || z < pz {
                            return false;
                        }
                    }
                    prev = Some((a, z));
                }
                _ => return false,
            }
        }
        let mut seen_a = vec![0u8; self.n_inputs()];
        let mut seen_z = vec![0u8; self.n_inputs()];
        for j in 0..self.n_outputs() {
            for &i in self.list_a(j) {
                seen_a[i] += 1;
                if self.first[i] != Some(j) {
                    return false;
                }
            }
            for &i in self.list_z(j) {
                seen_z[i] += 1;
                if self.last[i] != Some(j) {
                    return false;
                }
            }
        }
        (0..self.n_inputs()).all(|i| {
            seen_a[i] == self.first[i].is_some() as u8 && seen_z[i] == self.last[i].is_some() as u8
        })
    }
}

/// Index bookkeeping for gluing two summaries `v` (first) and `w` (second).
struct Layout {
    n_in: usize,
    n_out: usize,
    v_in_offset: usize,
    /// Inputs of `w` that are not on the shared boundary.
    w_own: Range<usize>,
    w_own_offset: usize,
    /// Shared boundary: outputs `common_v..` of `v` are inputs `common_w..` of `w`.
    common_v: usize,
    common_w: usize,
    common_len: usize,
    /// Outputs of `v` that stay on the boundary of the union.
    v_direct: Range<usize>,
    v_direct_offset: usize,
    w_out_offset: usize,
    /// Whether the direct outputs of `v` precede all outputs of `w`.
    direct_first: bool,
}

/// Glues two summaries along a shared boundary in time linear in the sizes.
fn merge(v: &Summary, w: &Summary, lay: &Layout) -> Summary {
    let mut first = vec![None; lay.n_in];
    let mut last = vec![None; lay.n_in];
    let mut reach = vec![false; lay.n_out];

    // Paths from inputs of `w` off the shared boundary stay inside `w`.
    for k in lay.w_own.clone() {
        first[k + lay.w_own_offset] = w.first[k].map(|o| o + lay.w_out_offset);
        last[k + lay.w_own_offset] = w.last[k].map(|o| o + lay.w_out_offset);
    }
    // Paths ending on the remaining boundary of `v` stay inside `v`.
    for o in lay.v_direct.clone() {
        reach[o + lay.v_direct_offset] = v.reach[o];
    }

    // Flags on the outputs of `w`: sweep the outputs in order while tracking
    // the inputs of `w` that are themselves reachable and whose interval is
    // open. An output is reachable iff some such interval covers it.
    let common_w = lay.common_w..lay.common_w + lay.common_len;
    let active = |k: usize| {
        if common_w.contains(&k) {
            v.reach[lay.common_v + k - lay.common_w]
        } else {
            true
        }
    };
    let mut open = vec![false; w.n_inputs()];
    let mut open_count = 0usize;
    for j in 0..w.n_outputs() {
        for &k in w.first_of.get(j) {
            if active(k) {
                open[k] = true;
                open_count += 1;
            }
        }
        if open_count > 0 && w.reach[j] {
            reach[j + lay.w_out_offset] = true;
        }
        for &k in w.last_of.get(j) {
            if open[k] {
                open[k] = false;
                open_count -= 1;
            }
        }
    }

    // A shared-boundary entry passes reachability on only if `v` reaches it
    // and it reaches something in `w`.
    let len = lay.common_len;
    let good = |t: usize| v.reach[lay.common_v + t] && w.first[lay.common_w + t].is_some();
    let mut next_good = vec![len; len + 1];
    for t in (0..len).rev() {
        next_good[t] = if good(t) { t } else { next_good[t + 1] };
    }
    let mut prev_good = vec![usize::MAX; len];
    for t in 0..len {
        prev_good[t] = if good(t) {
            t
        } else if t > 0 {
            prev_good[t - 1]
        } else {
            usize::MAX
        };
    }
    let nv = v.n_outputs();
    let mut next_flag = vec![nv; nv + 1];
    for o in (0..nv).rev() {
        next_flag[o] = if v.reach[o] { o } else { next_flag[o + 1] };
    }
    let mut prev_flag = vec![usize::MAX; nv];
    for o in 0..nv {
        prev_flag[o] = if v.reach[o] {
            o
        } else if o > 0 {
            prev_flag[o - 1]
        } else {
            usize::MAX
        };
    }

    for e in 0..v.n_inputs() {
        let (Some(a), Some(z)) = (v.first[e], v.last[e]) else {
            continue;
        };
        let mut composed = None;
        let (lo, hi) = (a.max(lay.common_v), z.min(lay.common_v + len - 1));
        if lo <= hi {
            let g1 = next_good[lo - lay.common_v];
            if g1 <= hi - lay.common_v {
                let g2 = prev_good[hi - lay.common_v];
                let fa = w.first[lay.common_w + g1].expect("good entry") + lay.w_out_offset;
                let fz = w.last[lay.common_w + g2].expect("good entry") + lay.w_out_offset;
                composed = Some((fa, fz));
            }
        }
        let mut direct = None;
        if !lay.v_direct.is_empty() {
            let (lo, hi) = (a.max(lay.v_direct.start), z.min(lay.v_direct.end - 1));
            if lo <= hi && next_flag[lo] <= hi {
                direct = Some((
                    next_flag[lo] + lay.v_direct_offset,
                    prev_flag[hi] + lay.v_direct_offset,
                ));
            }
        }
        let (fa, fz) = match (composed, direct) {
            (None, None) => continue,
            (Some(c), None) => c,
            (None, Some(d)) => d,
            (Some(c), Some(d)) if lay.direct_first => (d.0, c.1),
            (Some(c), Some(d)) => (c.0, d.1),
        };
        first[e + lay.v_in_offset] = Some(fa);
        last[e + lay.v_in_offset] = Some(fz);
    }

    Summary::from_parts(first, last, reach)
}

/// Summary over the full input and output boundaries of a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockReach {
    block: Block,
    summary: Summary,
}

impl BlockReach {
    /// Exhaustive construction; used at tree leaves and as a reference.
    pub fn brute_force(m: &FreeSpaceMatrix, block: Block) -> Self {
        let n = block.boundary_len();
        let inputs: Vec<Entry> = (0..n).map(|k| block.input_cell(k)).collect();
        let outputs: Vec<Entry> = (0..n).map(|k| block.output_cell(k)).collect();
        BlockReach {
            block,
            summary: Summary::brute_force(m, block, &inputs, &outputs),
        }
    }

    pub fn block(&self) -> Block {
        self.block
    }

    pub fn summary(&self) -> &Summary {
        &self.summary
    }

    pub fn propagate(&self, marked: &[bool]) -> Vec<bool> {
        self.summary.propagate(marked)
    }

    /// Summary of the union of two sibling blocks.
    pub fn merge(v: &BlockReach, w: &BlockReach, orientation: Orientation) -> Result<BlockReach> {
        let (bv, bw) = (v.block, w.block);
        match orientation {
            Orientation::Horizontal => {
                if bv.col != bw.col || bv.width != bw.width || bw.row != bv.top() {
                    return Err(Error::IncompatibleBlocks);
                }
                let block = Block::new(bv.row, bv.col, bv.height + bw.height - 1, bv.width);
                let n = block.boundary_len();
                let c = bv.width;
                let lay = Layout {
                    n_in: n,
                    n_out: n,
                    v_in_offset: 0,
                    w_own: c..bw.boundary_len(),
                    w_own_offset: bv.height - 1,
                    common_v: bv.height - 1,
                    common_w: 0,
                    common_len: c,
                    v_direct: 0..bv.height - 1,
                    v_direct_offset: 0,
                    w_out_offset: bv.height - 1,
                    direct_first: true,
                };
                Ok(BlockReach {
                    block,
                    summary: merge(&v.summary, &w.summary, &lay),
                })
            }
            Orientation::Vertical => {
                if bv.row != bw.row || bv.height != bw.height || bw.col != bv.right() {
                    return Err(Error::IncompatibleBlocks);
                }
                let block = Block::new(bv.row, bv.col, bv.height, bv.width + bw.width - 1);
                let n = block.boundary_len();
                let h = bv.height;
                let lay = Layout {
                    n_in: n,
                    n_out: n,
                    v_in_offset: bw.width - 1,
                    w_own: 0..bw.width - 1,
                    w_own_offset: 0,
                    common_v: 0,
                    common_w: bw.width - 1,
                    common_len: h,
                    v_direct: h..bv.boundary_len(),
                    v_direct_offset: bw.width - 1,
                    w_out_offset: 0,
                    direct_first: false,
                };
                Ok(BlockReach {
                    block,
                    summary: merge(&v.summary, &w.summary, &lay),
                })
            }
        }
    }

    /// Restriction to the left and right columns.
    ///
    /// Intervals that leave the right column are clamped to the last right-column
    /// entry they reach; flags are recomputed for left-column sources only.
    pub fn restrict_to_vertical(&self) -> VerticalReach {
        let s = &self.summary;
        let h = self.block.height;
        let w = self.block.width;
        let mut prev_flag = vec![usize::MAX; h];
        for o in 0..h {
            prev_flag[o] = if s.reach[o] {
                o
            } else if o > 0 {
                prev_flag[o - 1]
            } else {
                usize::MAX
            };
        }
        let mut first = vec![None; h];
        let mut last = vec![None; h];
        for k in 0..h {
            let i = w - 1 + k;
            if let (Some(a), Some(z)) = (s.first[i], s.last[i]) {
                if a < h {
                    first[k] = Some(a);
                    last[k] = Some(if z < h { z } else { prev_flag[h - 1] });
                }
            }
        }
        let first_of = IndexLists::from_targets(h, &first);
        let last_of = IndexLists::from_targets(h, &last);
        let mut reach = vec![false; h];
        let mut open = 0usize;
        for j in 0..h {
            open += first_of.get(j).len();
            reach[j] = open > 0 && s.reach[j];
            open -= last_of.get(j).len();
        }
        VerticalReach {
            block: self.block,
            summary: Summary {
                first,
                last,
                reach,
                first_of,
                last_of,
            },
        }
    }
}

/// Summary from the left column (bottom to top) to the right column (bottom to
/// top) of a block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalReach {
    block: Block,
    summary: Summary,
}

impl VerticalReach {
    pub fn brute_force(m: &FreeSpaceMatrix, block: Block) -> Self {
        let inputs: Vec<Entry> = (0..block.height).map(|k| (block.row + k, block.col)).collect();
        let outputs: Vec<Entry> = (0..block.height)
            .map(|k| (block.row + k, block.right()))
            .collect();
        VerticalReach {
            block,
            summary: Summary::brute_force(m, block, &inputs, &outputs),
        }
    }

    pub fn block(&self) -> Block {
        self.block
    }

    pub fn summary(&self) -> &Summary {
        &self.summary
    }

    pub fn propagate(&self, marked: &[bool]) -> Vec<bool> {
        self.summary.propagate(marked)
    }

    /// Summary of `v` followed on the right by `w`, sharing one full column.
    pub fn merge(v: &VerticalReach, w: &VerticalReach) -> Result<VerticalReach> {
        let (bv, bw) = (v.block, w.block);
        if bv.row != bw.row || bv.height != bw.height || bw.col != bv.right() {
            return Err(Error::IncompatibleBlocks);
        }
        let h = bv.height;
        let lay = Layout {
            n_in: h,
            n_out: h,
            v_in_offset: 0,
            w_own: 0..0,
            w_own_offset: 0,
            common_v: 0,
            common_w: 0,
            common_len: h,
            v_direct: h..h,
            v_direct_offset: 0,
            w_out_offset: 0,
            direct_first: false,
        };
        Ok(VerticalReach {
            block: Block::new(bv.row, bv.col, h, bv.width + bw.width - 1),
            summary: merge(&v.summary, &w.summary, &lay),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::block_boundary_reach;
    use proptest::prelude::*;

    fn ones(h: usize, w: usize) -> FreeSpaceMatrix {
        FreeSpaceMatrix::filled(h, w, true)
    }

    #[test]
    fn enumerations_of_a_2x2_block() {
        let b = Block::new(0, 0, 2, 2);
        let inputs: Vec<_> = (0..3).map(|k| b.input_cell(k)).collect();
        let outputs: Vec<_> = (0..3).map(|k| b.output_cell(k)).collect();
        assert_eq!(inputs, [(0, 1), (0, 0), (1, 0)]);
        assert_eq!(outputs, [(0, 1), (1, 1), (1, 0)]);
        for k in 0..3 {
            let (i, j) = b.input_cell(k);
            assert_eq!(b.input_index(i, j), Some(k));
            let (i, j) = b.output_cell(k);
            assert_eq!(b.output_index(i, j), Some(k));
        }
    }

    #[test]
    fn all_ones_2x2() {
        let r = BlockReach::brute_force(&ones(2, 2), Block::new(0, 0, 2, 2));
        let s = r.summary();
        let firsts: Vec<_> = (0..3).map(|i| s.sigma_a(i)).collect();
        let lasts: Vec<_> = (0..3).map(|i| s.sigma_z(i)).collect();
        assert_eq!(firsts, [Some(0), Some(0), Some(1)]);
        assert_eq!(lasts, [Some(1), Some(2), Some(2)]);
        assert!((0..3).all(|j| s.flag(j)));
        assert!(s.check_invariants());
    }

    #[test]
    fn all_zeros_2x2() {
        let r = BlockReach::brute_force(&FreeSpaceMatrix::filled(2, 2, false), Block::new(0, 0, 2, 2));
        let s = r.summary();
        assert!((0..3).all(|i| s.sigma_a(i).is_none() && s.sigma_z(i).is_none()));
        assert!((0..3).all(|j| !s.flag(j)));
    }

    #[test]
    fn diagonal_2x2() {
        let m = FreeSpaceMatrix::from_rows(&[[1, 0], [0, 1]]);
        let s = BlockReach::brute_force(&m, Block::new(0, 0, 2, 2)).summary().clone();
        assert_eq!(s.sigma_a(1), Some(1));
        assert_eq!(s.sigma_z(1), Some(1));
        assert_eq!(s.sigma_a(0), None);
        assert_eq!(s.sigma_a(2), None);
    }

    #[test]
    fn propagate_examples() {
        let r = BlockReach::brute_force(&ones(2, 2), Block::new(0, 0, 2, 2));
        assert_eq!(r.propagate(&[false, true, false]), [true, true, true]);
        assert_eq!(r.propagate(&[false, false, false]), [false, false, false]);
    }

    #[test]
    fn merging_all_ones_columns() {
        let m = ones(2, 3);
        let v = BlockReach::brute_force(&m, Block::new(0, 0, 2, 2));
        let w = BlockReach::brute_force(&m, Block::new(0, 1, 2, 2));
        let y = BlockReach::merge(&v, &w, Orientation::Vertical).unwrap();
        assert_eq!(y, BlockReach::brute_force(&m, Block::new(0, 0, 2, 3)));
    }

    #[test]
    fn merge_rejects_misaligned_blocks() {
        let m = ones(4, 4);
        let v = BlockReach::brute_force(&m, Block::new(0, 0, 2, 2));
        let w = BlockReach::brute_force(&m, Block::new(2, 0, 2, 2));
        assert_eq!(
            BlockReach::merge(&v, &w, Orientation::Horizontal),
            Err(Error::IncompatibleBlocks)
        );
        let vv = v.restrict_to_vertical();
        let ww = w.restrict_to_vertical();
        assert_eq!(VerticalReach::merge(&vv, &ww), Err(Error::IncompatibleBlocks));
    }

    // The upper block's first shared-row entry reached from below is a dead end
    // there, but a later shared entry continues upward.
    #[test]
    fn composition_skips_dead_shared_entries() {
        let m = FreeSpaceMatrix::from_rows(&[[1, 0, 0], [1, 1, 0], [1, 0, 0]]);
        let v = BlockReach::brute_force(&m, Block::new(0, 0, 2, 3));
        let w = BlockReach::brute_force(&m, Block::new(1, 0, 2, 3));
        let y = BlockReach::merge(&v, &w, Orientation::Horizontal).unwrap();
        assert_eq!(y, BlockReach::brute_force(&m, Block::new(0, 0, 3, 3)));
        let corner = y.block().input_index(0, 0).unwrap();
        assert_eq!(
            y.summary().sigma_a(corner),
            y.block().output_index(2, 0)
        );
    }

    #[test]
    fn merging_next_to_a_zero_block() {
        let m = FreeSpaceMatrix::from_fn(3, 5, |_, j| j <= 2);
        let v = BlockReach::brute_force(&m, Block::new(0, 0, 3, 3));
        let w = BlockReach::brute_force(&m, Block::new(0, 2, 3, 3));
        let y = BlockReach::merge(&v, &w, Orientation::Vertical).unwrap();
        for k in 0..y.block().boundary_len() {
            let (i, j) = y.block().output_cell(k);
            if j > 2 {
                assert!(!y.summary().flag(k), "({i},{j})");
            }
        }
    }

    #[test]
    fn vertical_restriction_examples() {
        let b = Block::new(0, 0, 2, 2);
        let r = BlockReach::brute_force(&ones(2, 2), b).restrict_to_vertical();
        let s = r.summary();
        assert_eq!((s.sigma_a(0), s.sigma_z(0)), (Some(0), Some(1)));
        assert_eq!((s.sigma_a(1), s.sigma_z(1)), (Some(1), Some(1)));

        let top_only = FreeSpaceMatrix::from_rows(&[[0, 0, 0], [1, 1, 1]]);
        let r = BlockReach::brute_force(&top_only, Block::new(0, 0, 2, 3)).restrict_to_vertical();
        assert_eq!(r.summary().sigma_a(0), None);
        assert_eq!(r.summary().sigma_a(1), Some(1));
        assert_eq!(r, VerticalReach::brute_force(&top_only, Block::new(0, 0, 2, 3)));
    }

    #[test]
    fn vertical_merge_examples() {
        let m = ones(3, 5);
        let v = VerticalReach::brute_force(&m, Block::new(0, 0, 3, 3));
        let w = VerticalReach::brute_force(&m, Block::new(0, 2, 3, 3));
        let y = VerticalReach::merge(&v, &w).unwrap();
        assert_eq!(y, VerticalReach::brute_force(&m, Block::new(0, 0, 3, 5)));
        assert_eq!(y.summary().sigma_a(0), Some(0));
        assert_eq!(y.summary().sigma_z(0), Some(2));

        let zeros_left = FreeSpaceMatrix::from_fn(3, 5, |_, j| j >= 2);
        let v = VerticalReach::brute_force(&zeros_left, Block::new(0, 0, 3, 3));
        let w = VerticalReach::brute_force(&zeros_left, Block::new(0, 2, 3, 3));
        let y = VerticalReach::merge(&v, &w).unwrap();
        assert!((0..3).all(|j| !y.summary().flag(j) && y.summary().sigma_a(j).is_none()));
    }

    #[test]
    fn propagate_vertical_examples() {
        let b = Block::new(0, 0, 2, 2);
        let r = VerticalReach::brute_force(&ones(2, 2), b);
        assert_eq!(r.propagate(&[true, false]), [true, true]);
        assert_eq!(r.propagate(&[false, false]), [false, false]);
    }

    fn check_propagation(m: &FreeSpaceMatrix, block: Block, mask: u64) -> core::result::Result<(), TestCaseError> {
        let r = BlockReach::brute_force(m, block);
        let n = block.boundary_len();
        let marked: Vec<bool> = (0..n)
            .map(|k| {
                let (i, j) = block.input_cell(k);
                m.get(i, j) && (mask >> k) & 1 == 1
            })
            .collect();
        prop_assert_eq!(r.propagate(&marked), block_boundary_reach(m, block, &marked));
        Ok(())
    }

    #[test]
    fn propagate_exhaustive_small_blocks() {
        for (h, w) in [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2), (2, 3), (3, 2), (3, 3), (1, 9), (9, 1), (2, 4), (4, 2)] {
            let cells = h * w;
            for bits in 0u32..(1 << cells) {
                let m = FreeSpaceMatrix::from_fn(h, w, |i, j| bits >> (i * w + j) & 1 == 1);
                let block = Block::whole(&m);
                let s = BlockReach::brute_force(&m, block);
                assert!(s.summary().check_invariants(), "{h}x{w} {bits:b}");
                for mask in [u64::MAX, 0b1, 0b101, 0b110] {
                    check_propagation(&m, block, mask).unwrap();
                }
                let marked: Vec<bool> = (0..h).map(|k| m.get(k, 0)).collect();
                let vr = VerticalReach::brute_force(&m, block);
                let expect = crate::oracles::vertical_boundary_reach(&m, block, &marked);
                assert_eq!(vr.propagate(&marked), expect);
            }
        }
    }

    fn matrix(max: usize) -> impl Strategy<Value = FreeSpaceMatrix> {
        (1..=max, 1..=max, 0.2..0.95f64).prop_flat_map(|(r, c, p)| {
            proptest::collection::vec(proptest::bool::weighted(p), r * c)
                .prop_map(move |b| FreeSpaceMatrix::from_fn(r, c, |i, j| b[i * c + j]))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn propagate_matches_bruteforce(m in matrix(6), mask in any::<u64>()) {
            check_propagation(&m, Block::whole(&m), mask)?;
        }

        #[test]
        fn brute_force_summaries_are_monotone(m in matrix(8)) {
            prop_assert!(BlockReach::brute_force(&m, Block::whole(&m)).summary().check_invariants());
            prop_assert!(VerticalReach::brute_force(&m, Block::whole(&m)).summary().check_invariants());
        }

        // No flagged output inside an input's interval is unreachable from it.
        #[test]
        fn intervals_hold_only_own_reachable_entries(m in matrix(8)) {
            let block = Block::whole(&m);
            let r = BlockReach::brute_force(&m, block);
            let s = r.summary();
            for i in 0..block.boundary_len() {
                if let (Some(a), Some(z)) = (s.sigma_a(i), s.sigma_z(i)) {
                    let mut marked = vec![false; block.boundary_len()];
                    marked[i] = true;
                    let own = block_boundary_reach(&m, block, &marked);
                    for j in a..=z {
                        prop_assert_eq!(own[j], s.flag(j));
                    }
                }
            }
        }

        #[test]
        fn crossing_paths_exchange_targets(m in matrix(7)) {
            let block = Block::whole(&m);
            let n = block.boundary_len();
            let single = |i: usize| {
                let mut marked = vec![false; n];
                marked[i] = true;
                block_boundary_reach(&m, block, &marked)
            };
            let reach: Vec<Vec<bool>> = (0..n).map(single).collect();
            for i in 0..n {
                for j in i + 1..n {
                    for si in 0..n {
                        for sj in 0..si {
                            if reach[i][si] && reach[j][sj] {
                                prop_assert!(reach[i][sj] && reach[j][si]);
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn merge_matches_bruteforce(m in matrix(9), cut in 0.0..1.0f64, vertical in any::<bool>()) {
            let whole = Block::whole(&m);
            let (len, orient) = if vertical {
                (m.cols(), Orientation::Vertical)
            } else {
                (m.rows(), Orientation::Horizontal)
            };
            prop_assume!(len >= 3);
            let first = 2 + ((len - 3) as f64 * cut) as usize;
            let (bv, bw) = if vertical { whole.split_cols(first) } else { whole.split_rows(first) };
            let v = BlockReach::brute_force(&m, bv);
            let w = BlockReach::brute_force(&m, bw);
            let y = BlockReach::merge(&v, &w, orient).unwrap();
            prop_assert!(y.summary().check_invariants());
            prop_assert_eq!(y, BlockReach::brute_force(&m, whole));
        }

        #[test]
        fn vertical_merge_matches_bruteforce(m in matrix(9), cut in 0.0..1.0f64) {
            prop_assume!(m.cols() >= 3);
            let whole = Block::whole(&m);
            let first = 2 + ((m.cols() - 3) as f64 * cut) as usize;
            let (bv, bw) = whole.split_cols(first);
            let v = BlockReach::brute_force(&m, bv).restrict_to_vertical();
            let w = BlockReach::brute_force(&m, bw).restrict_to_vertical();
            prop_assert_eq!(&v, &VerticalReach::brute_force(&m, bv));
            let y = VerticalReach::merge(&v, &w).unwrap();
            prop_assert!(y.summary().check_invariants());
            prop_assert_eq!(y, VerticalReach::brute_force(&m, whole));
        }

        #[test]
        fn restriction_matches_bruteforce(m in matrix(9)) {
            let whole = Block::whole(&m);
            prop_assert_eq!(
                BlockReach::brute_force(&m, whole).restrict_to_vertical(),
                VerticalReach::brute_force(&m, whole)
            );
        }
    }
}
