//! Slow reference implementations.
//!
//! Nothing here touches the block summaries, the decomposition trees or the
//! arrangement traversal: the oracles only use the matrix construction, plain
//! dynamic programming and raw circle intersections, so they can cross-check
//! the fast paths independently.

use alloc::vec;
use alloc::vec::Vec;

use crate::block_reach::Block;
use crate::decide::{critical_values, DecisionResult, DecisionStats};
use crate::free_space::{stationary_decide, FreeSpaceMatrix, PointSequence};
use crate::geometry::{circle_circle_intersections, rightmost_point, Circle, Point2, Tolerance};
use crate::{Error, Result};

/// Entries reachable from the bottom-left corner by monotone paths of 1-entries.
pub fn matrix_reach_bruteforce(m: &FreeSpaceMatrix) -> FreeSpaceMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let mut reach = FreeSpaceMatrix::filled(rows, cols, false);
    for i in 0..rows {
        for j in 0..cols {
            let from_start = i == 0 && j == 0;
            let pred = (i > 0 && reach.get(i - 1, j))
                || (j > 0 && reach.get(i, j - 1))
                || (i > 0 && j > 0 && reach.get(i - 1, j - 1));
            if m.get(i, j) && (from_start || pred) {
                reach.set(i, j, true).expect("in range");
            }
        }
    }
    reach
}

/// Breadth-first search inside `block` from every marked entry at once.
fn flood(m: &FreeSpaceMatrix, block: Block, sources: &[(usize, usize)]) -> Vec<bool> {
    let (h, w) = (block.height, block.width);
    let mut seen = vec![false; h * w];
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for &(i, j) in sources {
        let (r, c) = (i - block.row, j - block.col);
        if m.get(i, j) && !seen[r * w + c] {
            seen[r * w + c] = true;
            queue.push((r, c));
        }
    }
    while let Some((r, c)) = queue.pop() {
        for (dr, dc) in [(1, 0), (0, 1), (1, 1)] {
            let (nr, nc) = (r + dr, c + dc);
            if nr < h && nc < w && !seen[nr * w + nc] && m.get(block.row + nr, block.col + nc) {
                seen[nr * w + nc] = true;
                queue.push((nr, nc));
            }
        }
    }
    seen
}

/// Output-boundary entries of `block` reachable from the marked input-boundary
/// entries, both in the block's boundary enumeration order.
pub fn block_boundary_reach(m: &FreeSpaceMatrix, block: Block, marked: &[bool]) -> Vec<bool> {
    let n = block.boundary_len();
    assert_eq!(marked.len(), n);
    let sources: Vec<_> = (0..n)
        .filter(|&k| marked[k])
        .map(|k| block.input_cell(k))
        .collect();
    let seen = flood(m, block, &sources);
    (0..n)
        .map(|k| {
            let (i, j) = block.output_cell(k);
            seen[(i - block.row) * block.width + j - block.col]
        })
        .collect()
}

/// Right-column entries reachable from the marked left-column entries.
pub fn vertical_boundary_reach(m: &FreeSpaceMatrix, block: Block, marked: &[bool]) -> Vec<bool> {
    assert_eq!(marked.len(), block.height);
    let sources: Vec<_> = (0..block.height)
        .filter(|&k| marked[k])
        .map(|k| (block.row + k, block.col))
        .collect();
    let seen = flood(m, block, &sources);
    (0..block.height)
        .map(|k| seen[k * block.width + block.width - 1])
        .collect()
}

/// Candidate translations: every pairwise intersection of the translation
/// circles, one boundary point per circle, and the translation aligning the
/// first points.
pub fn candidate_translations(
    p: &PointSequence,
    q: &PointSequence,
    delta: f64,
    tol: Tolerance,
) -> Result<Vec<Point2>> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::NegativeDelta(delta));
    }
    let mut circles = Vec::with_capacity(p.len() * q.len());
    for &pi in p.points() {
        for &qj in q.points() {
            circles.push(Circle::new(pi - qj, delta));
        }
    }
    let mut out = vec![p.first() - q.first()];
    for (a, &ca) in circles.iter().enumerate() {
        out.push(rightmost_point(ca).unwrap_or(ca.center));
        for &cb in &circles[a + 1..] {
            // Coincident circles contribute through the other candidates.
            if let Ok(x) = circle_circle_intersections(ca, cb, tol) {
                out.extend(x.points());
            }
        }
    }
    Ok(out)
}

/// Decision by evaluating the stationary dynamic program at every candidate.
pub fn naive_decide(
    p: &PointSequence,
    q: &PointSequence,
    delta: f64,
    tol: Tolerance,
) -> Result<DecisionResult> {
    let mut stats = DecisionStats::default();
    for t in candidate_translations(p, q, delta, tol)? {
        let m = FreeSpaceMatrix::build(p, q, t, delta, tol)?;
        stats.probes_executed += 1;
        stats.dp_work += (p.len() * q.len()) as u64;
        if stationary_decide(&m) {
            return Ok(DecisionResult {
                feasible: true,
                witness: Some(t),
                stats,
            });
        }
    }
    Ok(DecisionResult {
        feasible: false,
        witness: None,
        stats,
    })
}

/// The first critical value, in increasing order, at which [`naive_decide`]
/// succeeds, with its witness.
pub fn naive_optimize(p: &PointSequence, q: &PointSequence, tol: Tolerance) -> Result<(f64, Point2)> {
    for c in critical_values(p, q, tol).values() {
        let r = naive_decide(p, q, c.value, tol)?;
        if let Some(w) = r.witness {
            return Ok((c.value, w));
        }
    }
    Err(Error::NoFeasibleValue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seq(pts: &[(f64, f64)]) -> PointSequence {
        PointSequence::from_xy(pts).unwrap()
    }

    #[test]
    fn reach_table_examples() {
        let m = FreeSpaceMatrix::from_rows(&[[1, 1], [0, 1]]);
        let r = matrix_reach_bruteforce(&m);
        let ones: Vec<_> = r.ones().collect();
        assert_eq!(ones, [(0, 0), (0, 1), (1, 1)]);
        let z = FreeSpaceMatrix::filled(3, 3, false);
        assert_eq!(matrix_reach_bruteforce(&z).ones().count(), 0);
    }

    #[test]
    fn reach_table_agrees_with_dp() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let m = FreeSpaceMatrix::from_fn(6, 6, |_, _| rng.gen_bool(0.65));
            assert_eq!(matrix_reach_bruteforce(&m).get(5, 5), stationary_decide(&m));
        }
    }

    #[test]
    fn naive_decide_examples() {
        let tol = Tolerance::default();
        let r = naive_decide(&seq(&[(0.0, 0.0), (2.0, 0.0)]), &seq(&[(0.0, 0.0)]), 1.0, tol).unwrap();
        assert!(r.feasible);
        let w = r.witness.unwrap();
        assert!(w.norm() <= 1.0 + 1e-9 && (w - Point2::new(2.0, 0.0)).norm() <= 1.0 + 1e-9);

        let p = seq(&[(0.0, 0.0), (1.0, 0.0)]);
        let q = seq(&[(0.0, 0.0), (0.0, 1.0)]);
        assert!(!naive_decide(&p, &q, 0.5, tol).unwrap().feasible);
        assert!(naive_decide(&p, &q, 0.8, tol).unwrap().feasible);
    }

    #[test]
    fn naive_optimize_examples() {
        let tol = Tolerance::default();
        let (d, w) = naive_optimize(&seq(&[(0.0, 0.0)]), &seq(&[(5.0, 0.0)]), tol).unwrap();
        assert_eq!(d, 0.0);
        assert!((w - Point2::new(-5.0, 0.0)).norm() < 1e-9);

        let p = seq(&[(0.0, 0.0), (1.0, 0.0)]);
        let q = seq(&[(0.0, 0.0), (0.0, 1.0)]);
        let (d, w) = naive_optimize(&p, &q, tol).unwrap();
        assert!((d - FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((w - Point2::new(0.5, -0.5)).norm() < 1e-6);
    }

    #[test]
    fn naive_decide_is_monotone() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let mut pts = |k: usize| {
                let v: Vec<(f64, f64)> = (0..k)
                    .map(|_| (rng.gen_range(0..5) as f64, rng.gen_range(0..5) as f64))
                    .collect();
                seq(&v)
            };
            let (p, q) = (pts(3), pts(3));
            let mut was = false;
            for k in 0..10 {
                let now = naive_decide(&p, &q, 0.3 * k as f64, tol).unwrap().feasible;
                assert!(!was || now);
                was = now;
            }
        }
    }

    #[test]
    fn naive_optimum_is_tight() {
        let tol = Tolerance::default();
        let p = seq(&[(0.0, 0.0), (3.0, 1.0), (4.0, 4.0)]);
        let q = seq(&[(1.0, 0.0), (2.0, 2.0)]);
        let (d, w) = naive_optimize(&p, &q, tol).unwrap();
        let m = FreeSpaceMatrix::build(&p, &q, w, d, tol).unwrap();
        assert!(stationary_decide(&m));
        let values = critical_values(&p, &q, tol);
        let pos = values.values().iter().position(|c| c.value == d).unwrap();
        if pos > 0 {
            let prev = values.values()[pos - 1].value;
            assert!(!naive_decide(&p, &q, prev, tol).unwrap().feasible);
        }
    }
}
