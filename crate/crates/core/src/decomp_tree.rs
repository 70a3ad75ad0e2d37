//! Decomposition trees that keep the end-to-end reachability bit of a matrix up
//! to date while single entries change.
//!
//! [`SquareTree`] recursively halves a block, alternating between rows and
//! columns (the longer side first), with consecutive halves sharing one row or
//! column. Leaves have both sides at most 2. Every node stores the
//! [`BlockReach`] summary of its block, so changing an entry only requires
//! rebuilding the nodes whose block contains it.
//!
//! [`RectTree`] handles `m x n` matrices with `m <= n`: the columns are cut into
//! roughly square tiles overlapping in one column, each tile carries its own
//! square tree, and a balanced tree over the tiles merges their vertical
//! summaries.

use alloc::vec::Vec;

use crate::block_reach::{Block, BlockReach, Orientation, VerticalReach};
use crate::free_space::FreeSpaceMatrix;
use crate::{Error, Result};

/// Instrumentation for one update.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UpdateStats {
    /// Node summaries recomputed.
    pub phi_rebuilds: usize,
    /// Number of levels visited below and including the root.
    pub depth_touched: usize,
    /// Elementary operations: boundary entries written by merges plus cells
    /// scanned by leaf dynamic programs.
    pub work: u64,
}

impl UpdateStats {
    fn absorb(&mut self, other: UpdateStats) {
        self.phi_rebuilds += other.phi_rebuilds;
        self.depth_touched = self.depth_touched.max(other.depth_touched);
        self.work += other.work;
    }
}

fn leaf_work(block: Block) -> u64 {
    (block.boundary_len() * block.height * block.width) as u64
}

fn merge_work(block: Block) -> u64 {
    2 * block.boundary_len() as u64
}

#[derive(Clone, Debug)]
struct Node {
    reach: BlockReach,
    children: Option<(usize, usize, Orientation)>,
}

/// Tree over one block of a matrix that lives outside the tree.
#[derive(Clone, Debug)]
struct BlockTree {
    nodes: Vec<Node>,
    root: usize,
    depth: usize,
}

impl BlockTree {
    fn build(m: &FreeSpaceMatrix, block: Block, work: &mut u64) -> Self {
        let mut nodes = Vec::new();
        let mut depth = 0;
        let root = Self::build_node(m, block, &mut nodes, 1, &mut depth, work);
        BlockTree { nodes, root, depth }
    }

    fn build_node(
        m: &FreeSpaceMatrix,
        block: Block,
        nodes: &mut Vec<Node>,
        level: usize,
        depth: &mut usize,
        work: &mut u64,
    ) -> usize {
        *depth = (*depth).max(level);
        let node = match split(block) {
            None => {
                *work += leaf_work(block);
                Node {
                    reach: BlockReach::brute_force(m, block),
                    children: None,
                }
            }
            Some((a, b, orientation)) => {
                let ia = Self::build_node(m, a, nodes, level + 1, depth, work);
                let ib = Self::build_node(m, b, nodes, level + 1, depth, work);
                *work += merge_work(block);
                let reach = BlockReach::merge(&nodes[ia].reach, &nodes[ib].reach, orientation)
                    .expect("children of a split are compatible");
                Node {
                    reach,
                    children: Some((ia, ib, orientation)),
                }
            }
        };
        nodes.push(node);
        nodes.len() - 1
    }

    fn root(&self) -> &BlockReach {
        &self.nodes[self.root].reach
    }

    /// Rebuilds every node whose block contains `(i, j)`, children first.
    fn update(&mut self, m: &FreeSpaceMatrix, i: usize, j: usize) -> UpdateStats {
        let mut stats = UpdateStats::default();
        self.update_node(m, self.root, i, j, 1, &mut stats);
        stats
    }

    fn update_node(
        &mut self,
        m: &FreeSpaceMatrix,
        idx: usize,
        i: usize,
        j: usize,
        level: usize,
        stats: &mut UpdateStats,
    ) {
        let block = self.nodes[idx].reach.block();
        if !block.contains(i, j) {
            return;
        }
        stats.phi_rebuilds += 1;
        stats.depth_touched = stats.depth_touched.max(level);
        match self.nodes[idx].children {
            None => {
                stats.work += leaf_work(block);
                self.nodes[idx].reach = BlockReach::brute_force(m, block);
            }
            Some((a, b, orientation)) => {
                self.update_node(m, a, i, j, level + 1, stats);
                self.update_node(m, b, i, j, level + 1, stats);
                stats.work += merge_work(block);
                self.nodes[idx].reach =
                    BlockReach::merge(&self.nodes[a].reach, &self.nodes[b].reach, orientation)
                        .expect("children of a split are compatible");
            }
        }
    }

    fn nodes_containing(&self, i: usize, j: usize) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.reach.block().contains(i, j))
            .count()
    }
}

/// Halves the longer side (rows on ties); `None` for leaves.
fn split(block: Block) -> Option<(Block, Block, Orientation)> {
    if block.height <= 2 && block.width <= 2 {
        None
    } else if block.height >= block.width {
        let (a, b) = block.split_rows(block.height / 2 + 1);
        Some((a, b, Orientation::Horizontal))
    } else {
        let (a, b) = block.split_cols(block.width / 2 + 1);
        Some((a, b, Orientation::Vertical))
    }
}

fn full_query(reach: &BlockReach) -> bool {
    let b = reach.block();
    let s = reach.summary();
    let (start, end) = (b.width - 1, b.height - 1);
    match (s.sigma_a(start), s.sigma_z(start)) {
        (Some(a), Some(z)) => a <= end && end <= z && s.flag(end),
        _ => false,
    }
}

/// Decomposition tree of a whole matrix.
///
/// Square matrices are the intended input; other shapes are accepted and split
/// along their longer side.
#[derive(Clone, Debug)]
pub struct SquareTree {
    matrix: FreeSpaceMatrix,
    tree: BlockTree,
    build_work: u64,
}

impl SquareTree {
    pub fn build(m: FreeSpaceMatrix) -> Self {
        let mut build_work = 0;
        let tree = BlockTree::build(&m, Block::whole(&m), &mut build_work);
        SquareTree {
            matrix: m,
            tree,
            build_work,
        }
    }

    pub fn matrix(&self) -> &FreeSpaceMatrix {
        &self.matrix
    }

    pub fn root(&self) -> &BlockReach {
        self.tree.root()
    }

    /// Number of levels, the root counting as one.
    pub fn depth(&self) -> usize {
        self.tree.depth
    }

    pub fn node_count(&self) -> usize {
        self.tree.nodes.len()
    }

    pub fn build_work(&self) -> u64 {
        self.build_work
    }

    /// Sets entry `(i, j)` and rebuilds the affected nodes.
    pub fn update(&mut self, i: usize, j: usize, bit: bool) -> Result<UpdateStats> {
        self.matrix.set(i, j, bit)?;
        Ok(self.tree.update(&self.matrix, i, j))
    }

    pub fn toggle(&mut self, i: usize, j: usize) -> Result<UpdateStats> {
        self.matrix.toggle(i, j)?;
        Ok(self.tree.update(&self.matrix, i, j))
    }

    /// Whether a monotone path joins the two corners of the matrix.
    pub fn query(&self) -> bool {
        full_query(self.root())
    }

    /// How many nodes have `(i, j)` inside their block.
    pub fn nodes_containing(&self, i: usize, j: usize) -> usize {
        self.tree.nodes_containing(i, j)
    }
}

#[derive(Clone, Debug)]
struct TNode {
    reach: VerticalReach,
    tiles: (usize, usize),
    children: Option<(usize, usize)>,
}

/// Tiled structure for `m x n` matrices, transposing when `m > n`.
#[derive(Clone, Debug)]
pub struct RectTree {
    /// Stored with at most as many rows as columns.
    matrix: FreeSpaceMatrix,
    transposed: bool,
    tiles: Vec<BlockTree>,
    nodes: Vec<TNode>,
    root: usize,
    build_work: u64,
}

impl RectTree {
    pub fn build(m: FreeSpaceMatrix) -> Self {
        let transposed = m.rows() > m.cols();
        let matrix = if transposed { m.transpose() } else { m };
        let (rows, cols) = (matrix.rows(), matrix.cols());
        let width = rows.max(2).min(cols);
        let mut build_work = 0;
        let mut tiles = Vec::new();
        let mut start = 0;
        loop {
            let end = (start + width - 1).min(cols - 1);
            let block = Block::new(0, start, rows, end - start + 1);
            tiles.push(BlockTree::build(&matrix, block, &mut build_work));
            if end == cols - 1 {
                break;
            }
            start = end;
        }
        let mut nodes = Vec::new();
        let root = Self::build_node(&tiles, 0, tiles.len(), &mut nodes, &mut build_work);
        RectTree {
            matrix,
            transposed,
            tiles,
            nodes,
            root,
            build_work,
        }
    }

    fn build_node(
        tiles: &[BlockTree],
        lo: usize,
        hi: usize,
        nodes: &mut Vec<TNode>,
        work: &mut u64,
    ) -> usize {
        let node = if hi - lo == 1 {
            *work += merge_work(tiles[lo].root().block());
            TNode {
                reach: tiles[lo].root().restrict_to_vertical(),
                tiles: (lo, hi),
                children: None,
            }
        } else {
            let mid = (lo + hi) / 2;
            let a = Self::build_node(tiles, lo, mid, nodes, work);
            let b = Self::build_node(tiles, mid, hi, nodes, work);
            let reach = VerticalReach::merge(&nodes[a].reach, &nodes[b].reach)
                .expect("adjacent tiles share a column");
            *work += 2 * reach.block().height as u64;
            TNode {
                reach,
                tiles: (lo, hi),
                children: Some((a, b)),
            }
        };
        nodes.push(node);
        nodes.len() - 1
    }

    /// The matrix as given to [`RectTree::build`] (after any updates).
    pub fn matrix(&self) -> FreeSpaceMatrix {
        if self.transposed {
            self.matrix.transpose()
        } else {
            self.matrix.clone()
        }
    }

    pub fn is_transposed(&self) -> bool {
        self.transposed
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    /// Vertical summary of the whole (possibly transposed) matrix.
    pub fn root(&self) -> &VerticalReach {
        &self.nodes[self.root].reach
    }

    pub fn build_work(&self) -> u64 {
        self.build_work
    }

    /// Deepest square tree among the tiles.
    pub fn tile_depth(&self) -> usize {
        self.tiles.iter().map(|t| t.depth).max().unwrap_or(0)
    }

    pub fn update(&mut self, i: usize, j: usize, bit: bool) -> Result<UpdateStats> {
        let (i, j) = self.map(i, j)?;
        self.matrix.set(i, j, bit)?;
        Ok(self.refresh(i, j))
    }

    pub fn toggle(&mut self, i: usize, j: usize) -> Result<UpdateStats> {
        let (i, j) = self.map(i, j)?;
        self.matrix.toggle(i, j)?;
        Ok(self.refresh(i, j))
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        if self.transposed {
            self.matrix.get(j, i)
        } else {
            self.matrix.get(i, j)
        }
    }

    /// Whether a monotone path joins the two corners of the matrix.
    pub fn query(&self) -> bool {
        let s = self.root().summary();
        let top = self.matrix.rows() - 1;
        match (s.sigma_a(0), s.sigma_z(0)) {
            (Some(_), Some(z)) => z == top && s.flag(top),
            _ => false,
        }
    }

    fn map(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        let (rows, cols) = if self.transposed {
            (self.matrix.cols(), self.matrix.rows())
        } else {
            (self.matrix.rows(), self.matrix.cols())
        };
        if i >= rows || j >= cols {
            return Err(Error::IndexOutOfRange { row: i, col: j, rows, cols });
        }
        Ok(if self.transposed { (j, i) } else { (i, j) })
    }

    fn refresh(&mut self, i: usize, j: usize) -> UpdateStats {
        let mut stats = UpdateStats::default();
        let mut touched = Vec::with_capacity(2);
        for (k, tile) in self.tiles.iter_mut().enumerate() {
            if tile.root().block().contains(i, j) {
                stats.absorb(tile.update(&self.matrix, i, j));
                touched.push(k);
            }
        }
        let tile_levels = stats.depth_touched;
        let mut tstats = UpdateStats::default();
        self.update_node(self.root, &touched, 1, &mut tstats);
        stats.phi_rebuilds += tstats.phi_rebuilds;
        stats.work += tstats.work;
        stats.depth_touched = tile_levels + tstats.depth_touched;
        stats
    }

    fn update_node(&mut self, idx: usize, touched: &[usize], level: usize, stats: &mut UpdateStats) {
        let (lo, hi) = self.nodes[idx].tiles;
        if !touched.iter().any(|&k| lo <= k && k < hi) {
            return;
        }
        stats.phi_rebuilds += 1;
        stats.depth_touched = stats.depth_touched.max(level);
        match self.nodes[idx].children {
            None => {
                let tile = self.tiles[lo].root();
                stats.work += merge_work(tile.block());
                self.nodes[idx].reach = tile.restrict_to_vertical();
            }
            Some((a, b)) => {
                self.update_node(a, touched, level + 1, stats);
                self.update_node(b, touched, level + 1, stats);
                let reach = VerticalReach::merge(&self.nodes[a].reach, &self.nodes[b].reach)
                    .expect("adjacent tiles share a column");
                stats.work += 2 * reach.block().height as u64;
                self.nodes[idx].reach = reach;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_space::stationary_decide;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, p: f64) -> FreeSpaceMatrix {
        FreeSpaceMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(p))
    }

    #[test]
    fn small_matrix_is_a_single_leaf() {
        let m = FreeSpaceMatrix::from_rows(&[[1, 0], [1, 1]]);
        let g = SquareTree::build(m.clone());
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.root(), &BlockReach::brute_force(&m, Block::whole(&m)));
    }

    #[test]
    fn all_ones_4x4_root() {
        let m = FreeSpaceMatrix::filled(4, 4, true);
        let g = SquareTree::build(m);
        let s = g.root().summary();
        assert_eq!(s.sigma_a(3), Some(0));
        assert_eq!(s.sigma_z(3), Some(6));
        assert!(g.query());
    }

    #[test]
    fn blocked_start_fails() {
        let mut m = FreeSpaceMatrix::filled(4, 4, true);
        m.set(0, 0, false).unwrap();
        assert!(!SquareTree::build(m).query());
    }

    #[test]
    fn random_roots_match_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = random_matrix(&mut rng, 8, 8, 0.7);
            let g = SquareTree::build(m.clone());
            assert_eq!(g.root(), &BlockReach::brute_force(&m, Block::whole(&m)));
            assert_eq!(g.query(), stationary_decide(&m));
        }
    }

    #[test]
    fn toggling_twice_restores_the_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random_matrix(&mut rng, 9, 9, 0.6);
        let mut g = SquareTree::build(m);
        let before = g.root().clone();
        g.toggle(4, 4).unwrap();
        g.toggle(4, 4).unwrap();
        assert_eq!(g.root(), &before);
    }

    #[test]
    fn updates_match_fresh_builds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_matrix(&mut rng, 16, 16, 0.75);
        let mut g = SquareTree::build(m);
        for _ in 0..500 {
            let (i, j) = (rng.gen_range(0..16), rng.gen_range(0..16));
            let bit = rng.gen_bool(0.7);
            let stats = g.update(i, j, bit).unwrap();
            assert_eq!(stats.phi_rebuilds, g.nodes_containing(i, j));
            let fresh = SquareTree::build(g.matrix().clone());
            assert_eq!(g.root(), fresh.root());
            assert_eq!(g.query(), stationary_decide(g.matrix()));
        }
    }

    #[test]
    fn shared_entries_rebuild_both_paths() {
        let m = FreeSpaceMatrix::filled(16, 16, true);
        let mut g = SquareTree::build(m);
        let interior = g.toggle(0, 1).unwrap();
        let shared = g.toggle(8, 8).unwrap();
        assert!(shared.phi_rebuilds > interior.phi_rebuilds);
        assert_eq!(shared.phi_rebuilds, g.nodes_containing(8, 8));
        assert!(interior.depth_touched <= g.depth());
    }

    #[test]
    fn out_of_range_updates_are_rejected() {
        let mut g = SquareTree::build(FreeSpaceMatrix::filled(3, 3, true));
        assert!(matches!(g.toggle(3, 0), Err(Error::IndexOutOfRange { .. })));
        let mut r = RectTree::build(FreeSpaceMatrix::filled(2, 5, true));
        assert!(matches!(r.toggle(0, 5), Err(Error::IndexOutOfRange { .. })));
        let mut t = RectTree::build(FreeSpaceMatrix::filled(5, 2, true));
        assert!(matches!(t.toggle(5, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(t.toggle(4, 1).is_ok());
    }

    #[test]
    fn square_input_is_one_tile() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let m = random_matrix(&mut rng, 6, 6, 0.7);
        let r = RectTree::build(m.clone());
        assert_eq!(r.tile_count(), 1);
        let g = SquareTree::build(m);
        assert_eq!(r.root(), &g.root().restrict_to_vertical());
        assert_eq!(r.query(), g.query());
    }

    #[test]
    fn rect_examples() {
        assert!(RectTree::build(FreeSpaceMatrix::filled(2, 5, true)).query());
        assert!(!RectTree::build(FreeSpaceMatrix::filled(3, 7, false)).query());
        assert!(RectTree::build(FreeSpaceMatrix::filled(1, 1, true)).query());
        assert!(RectTree::build(FreeSpaceMatrix::filled(1, 4, true)).query());
        assert!(RectTree::build(FreeSpaceMatrix::filled(4, 1, true)).query());
    }

    #[test]
    fn rect_root_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let m = random_matrix(&mut rng, 4, 16, 0.7);
            let r = RectTree::build(m.clone());
            assert_eq!(r.root(), &VerticalReach::brute_force(&m, Block::whole(&m)));
        }
    }

    #[test]
    fn rect_queries_match_dp() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let m = random_matrix(&mut rng, 6, 20, 0.75);
            assert_eq!(RectTree::build(m.clone()).query(), stationary_decide(&m));
        }
    }

    #[test]
    fn rect_updates_match_dp() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = random_matrix(&mut rng, 8, 64, 0.8);
        let mut r = RectTree::build(m);
        for _ in 0..500 {
            let (i, j) = (rng.gen_range(0..8), rng.gen_range(0..64));
            r.toggle(i, j).unwrap();
            assert_eq!(r.query(), stationary_decide(&r.matrix()));
        }
        let before = r.root().clone();
        r.toggle(3, 7).unwrap();
        r.toggle(3, 7).unwrap();
        assert_eq!(r.root(), &before);
        let fresh = RectTree::build(r.matrix());
        assert_eq!(r.root(), fresh.root());
    }

    #[test]
    fn transposed_updates_match_dp() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let m = random_matrix(&mut rng, 13, 3, 0.8);
        let mut r = RectTree::build(m);
        assert!(r.is_transposed());
        for _ in 0..200 {
            let (i, j) = (rng.gen_range(0..13), rng.gen_range(0..3));
            r.toggle(i, j).unwrap();
            assert_eq!(r.query(), stationary_decide(&r.matrix()));
        }
    }

    #[test]
    fn exhaustive_3x3() {
        for bits in 0u32..512 {
            let m = FreeSpaceMatrix::from_fn(3, 3, |i, j| bits >> (3 * i + j) & 1 == 1);
            assert_eq!(SquareTree::build(m.clone()).query(), stationary_decide(&m));
            assert_eq!(RectTree::build(m.clone()).query(), stationary_decide(&m));
        }
    }
}
