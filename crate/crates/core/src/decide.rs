//! Deciding whether some translation brings the curves within a given
//! distance, and minimizing that distance over translations.
//!
//! The fast backend walks the faces of the disk arrangement while a
//! [`RectTree`] tracks the end-to-end reachability bit under single-entry
//! toggles. The naive backend recomputes the dynamic program from scratch at
//! every arrangement vertex.
//!
//! The optimum is attained at a critical value: zero, half the distance of two
//! difference points `p_i - q_j`, or the circumradius of three of them. The
//! exact optimizer enumerates these and binary searches with the decision
//! procedure.

use alloc::vec::Vec;

use crate::arrangement::{build_arrangement, build_disks, make_traversal_plan, PlanEvent};
use crate::decomp_tree::RectTree;
use crate::free_space::{stationary_decide, stationary_frechet, FreeSpaceMatrix, PointSequence};
use crate::geometry::{circumradius, dist, Point2, Tolerance};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    #[default]
    Fast,
    Naive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecisionStats {
    pub faces_visited: usize,
    pub toggles_applied: usize,
    pub probes_executed: usize,
    /// Summaries rebuilt by tree updates (fast backend).
    pub phi_rebuilds: usize,
    /// Elementary operations spent on reachability: tree construction and
    /// update work for the fast backend, matrix cells scanned by the dynamic
    /// program for the naive one.
    pub dp_work: u64,
}

impl DecisionStats {
    pub fn add(&mut self, other: &DecisionStats) {
        self.faces_visited += other.faces_visited;
        self.toggles_applied += other.toggles_applied;
        self.probes_executed += other.probes_executed;
        self.phi_rebuilds += other.phi_rebuilds;
        self.dp_work += other.dp_work;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionResult {
    pub feasible: bool,
    /// A translation `t` with `M_delta(P, Q + t)` admitting a monotone path;
    /// present exactly when feasible.
    pub witness: Option<Point2>,
    pub stats: DecisionStats,
}

/// Whether some translation of `Q` is within discrete Fréchet distance `delta`
/// of `P`.
pub fn decide(
    p: &PointSequence,
    q: &PointSequence,
    delta: f64,
    backend: Backend,
    tol: Tolerance,
) -> Result<DecisionResult> {
    let ds = build_disks(p, q, delta)?;
    let ag = build_arrangement(&ds, tol)?;
    let mut stats = DecisionStats::default();
    let found = |witness: Point2, stats: DecisionStats| DecisionResult {
        feasible: true,
        witness: Some(witness),
        stats,
    };

    if backend == Backend::Naive {
        let first = p.first() - q.first();
        let candidates = core::iter::once(first).chain(ag.vertices().iter().map(|v| v.point));
        for t in candidates {
            let m = FreeSpaceMatrix::build(p, q, t, delta, tol)?;
            stats.probes_executed += 1;
            stats.dp_work += (p.len() * q.len()) as u64;
            if stationary_decide(&m) {
                return Ok(found(t, stats));
            }
        }
        return Ok(DecisionResult {
            feasible: false,
            witness: None,
            stats,
        });
    }

    let plan = make_traversal_plan(&ag, ag.default_start());
    let mut start = FreeSpaceMatrix::filled(p.len(), q.len(), false);
    for &(i, j) in &plan.start_entries {
        start.set(i, j, true)?;
    }
    let mut tree = RectTree::build(start);
    stats.dp_work += tree.build_work();
    if tree.query() {
        return Ok(found(plan.start, stats));
    }
    for event in &plan.events {
        match event {
            PlanEvent::Toggle { entry, face } => {
                let u = tree.toggle(entry.0, entry.1)?;
                stats.toggles_applied += 1;
                stats.phi_rebuilds += u.phi_rebuilds;
                stats.dp_work += u.work;
                if let Some(f) = face {
                    stats.faces_visited += 1;
                    if tree.query() {
                        return Ok(found(ag.faces()[*f].sample, stats));
                    }
                }
            }
            PlanEvent::Visit { face } => {
                stats.faces_visited += 1;
                if tree.query() {
                    return Ok(found(ag.faces()[*face].sample, stats));
                }
            }
            PlanEvent::Probe { vertex, toggles } => {
                stats.probes_executed += 1;
                for &(i, j) in toggles {
                    let u = tree.toggle(i, j)?;
                    stats.toggles_applied += 1;
                    stats.phi_rebuilds += u.phi_rebuilds;
                    stats.dp_work += u.work;
                }
                let hit = tree.query();
                for &(i, j) in toggles {
                    let u = tree.toggle(i, j)?;
                    stats.toggles_applied += 1;
                    stats.phi_rebuilds += u.phi_rebuilds;
                    stats.dp_work += u.work;
                }
                if hit {
                    return Ok(found(ag.vertices()[*vertex].point, stats));
                }
            }
        }
    }
    Ok(DecisionResult {
        feasible: false,
        witness: None,
        stats,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalKind {
    Zero,
    /// Half the distance between two difference points.
    HalfDistance,
    /// Circumradius of three difference points.
    Circumradius,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalValue {
    pub value: f64,
    pub kind: CriticalKind,
}

/// Candidate optimal distances, strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalValueSet {
    values: Vec<CriticalValue>,
}

impl CriticalValueSet {
    pub fn values(&self) -> &[CriticalValue] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Whether `x` matches a member within the deduplication tolerance.
    pub fn contains(&self, x: f64, tol: Tolerance) -> bool {
        let slack = tol.eps().max(tol.eps() * x.abs());
        let i = self.values.partition_point(|c| c.value < x - slack);
        self.values.get(i).is_some_and(|c| c.value <= x + slack)
    }
}

fn difference_points(p: &PointSequence, q: &PointSequence, tol: Tolerance) -> Vec<Point2> {
    let mut pts: Vec<Point2> = Vec::with_capacity(p.len() * q.len());
    for &pi in p.points() {
        for &qj in q.points() {
            let d = pi - qj;
            if pts.iter().all(|&e| dist(e, d) > tol.eps()) {
                pts.push(d);
            }
        }
    }
    pts
}

pub fn critical_values(p: &PointSequence, q: &PointSequence, tol: Tolerance) -> CriticalValueSet {
    let pts = difference_points(p, q, tol);
    let mut raw = Vec::new();
    raw.push(CriticalValue {
        value: 0.0,
        kind: CriticalKind::Zero,
    });
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            raw.push(CriticalValue {
                value: 0.5 * dist(pts[a], pts[b]),
                kind: CriticalKind::HalfDistance,
            });
            for c in b + 1..pts.len() {
                if let Ok(r) = circumradius(pts[a], pts[b], pts[c], tol) {
                    raw.push(CriticalValue {
                        value: r,
                        kind: CriticalKind::Circumradius,
                    });
                }
            }
        }
    }
    raw.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut values: Vec<CriticalValue> = Vec::with_capacity(raw.len());
    for c in raw {
        match values.last() {
            Some(last) if c.value - last.value <= tol.eps().max(tol.eps() * c.value.abs()) => {}
            _ => values.push(c),
        }
    }
    CriticalValueSet { values }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    pub delta: f64,
    pub witness: Point2,
    /// Decision calls made during the search.
    pub decisions: usize,
    pub stats: DecisionStats,
}

/// Smallest critical value at which [`decide`] succeeds.
pub fn optimize_exact(
    p: &PointSequence,
    q: &PointSequence,
    backend: Backend,
    tol: Tolerance,
) -> Result<Optimum> {
    let values = critical_values(p, q, tol);
    let mut stats = DecisionStats::default();
    let mut decisions = 0;
    let mut run = |delta: f64| -> Result<Option<Point2>> {
        let r = decide(p, q, delta, backend, tol)?;
        decisions += 1;
        stats.add(&r.stats);
        Ok(r.witness)
    };
    let vals = values.values();
    let (mut lo, mut hi) = (0usize, vals.len() - 1);
    let mut best = run(vals[hi].value)?.ok_or(Error::NoFeasibleValue)?;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match run(vals[mid].value)? {
            Some(w) => {
                hi = mid;
                best = w;
            }
            None => lo = mid + 1,
        }
    }
    Ok(Optimum {
        delta: vals[hi].value,
        witness: best,
        decisions,
        stats,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    /// Infeasible, except when both ends are zero.
    pub lo: f64,
    /// Feasible, with `witness`.
    pub hi: f64,
    pub witness: Point2,
    pub decisions: usize,
}

/// Bisection on `delta` until the bracket is at most `eps_target` wide.
///
/// Starts from `[0, d]` where `d` is the distance without translation.
pub fn optimize_bisect(
    p: &PointSequence,
    q: &PointSequence,
    eps_target: f64,
    backend: Backend,
    tol: Tolerance,
) -> Result<Bracket> {
    if !(eps_target > 0.0) || !eps_target.is_finite() {
        return Err(Error::InvalidTolerance(eps_target));
    }
    let mut decisions = 1;
    if let Some(w) = decide(p, q, 0.0, backend, tol)?.witness {
        return Ok(Bracket {
            lo: 0.0,
            hi: 0.0,
            witness: w,
            decisions,
        });
    }
    let (mut lo, mut hi) = (0.0, stationary_frechet(p, q));
    let mut witness = Point2::ORIGIN;
    while hi - lo > eps_target {
        let mid = 0.5 * (lo + hi);
        decisions += 1;
        match decide(p, q, mid, backend, tol)?.witness {
            Some(w) => {
                hi = mid;
                witness = w;
            }
            None => lo = mid,
        }
    }
    Ok(Bracket {
        lo,
        hi,
        witness,
        decisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{naive_decide, naive_optimize};
    use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seq(pts: &[(f64, f64)]) -> PointSequence {
        PointSequence::from_xy(pts).unwrap()
    }

    fn verifies(p: &PointSequence, q: &PointSequence, delta: f64, w: Point2) -> bool {
        stationary_decide(&FreeSpaceMatrix::build(p, q, w, delta, Tolerance::default()).unwrap())
    }

    fn square() -> (PointSequence, PointSequence) {
        (seq(&[(0.0, 0.0), (1.0, 0.0)]), seq(&[(0.0, 0.0), (0.0, 1.0)]))
    }

    #[test]
    fn decide_examples() {
        let tol = Tolerance::default();
        for backend in [Backend::Fast, Backend::Naive] {
            let p = seq(&[(0.0, 0.0), (2.0, 0.0)]);
            let q = seq(&[(0.0, 0.0)]);
            let r = decide(&p, &q, 1.0, backend, tol).unwrap();
            assert!(r.feasible);
            assert!(verifies(&p, &q, 1.0, r.witness.unwrap()));

            let (p, q) = square();
            assert!(!decide(&p, &q, 0.5, backend, tol).unwrap().feasible);
            let r = decide(&p, &q, 0.8, backend, tol).unwrap();
            assert!(r.feasible);
            assert!(verifies(&p, &q, 0.8, r.witness.unwrap()));
        }
    }

    #[test]
    fn exactly_critical_delta_is_feasible() {
        let (p, q) = square();
        for backend in [Backend::Fast, Backend::Naive] {
            let r = decide(&p, &q, FRAC_1_SQRT_2, backend, Tolerance::default()).unwrap();
            assert!(r.feasible, "{backend:?}");
        }
    }

    #[test]
    fn critical_value_examples() {
        let tol = Tolerance::default();
        let v = critical_values(&seq(&[(0.0, 0.0)]), &seq(&[(0.0, 0.0)]), tol);
        assert_eq!(v.values(), [CriticalValue { value: 0.0, kind: CriticalKind::Zero }]);

        let v = critical_values(&seq(&[(0.0, 0.0), (2.0, 0.0)]), &seq(&[(0.0, 0.0)]), tol);
        let xs: Vec<f64> = v.values().iter().map(|c| c.value).collect();
        assert_eq!(xs, [0.0, 1.0]);

        let (p, q) = square();
        let v = critical_values(&p, &q, tol);
        assert!(v.contains(FRAC_1_SQRT_2, tol));
        // Difference points (0,0), (0,-1), (1,0), (1,-1): half-distances 1/2
        // and sqrt(2)/2; every triple is a right triangle with hypotenuse sqrt(2).
        let xs: Vec<f64> = v.values().iter().map(|c| c.value).collect();
        assert_eq!(xs.len(), 3);
        assert!((xs[1] - 0.5).abs() < 1e-12 && (xs[2] - SQRT_2 / 2.0).abs() < 1e-12);
        assert!(v.values().windows(2).all(|w| w[0].value < w[1].value));
    }

    #[test]
    fn optimize_examples() {
        let tol = Tolerance::default();
        for backend in [Backend::Fast, Backend::Naive] {
            let o = optimize_exact(&seq(&[(0.0, 0.0)]), &seq(&[(5.0, 0.0)]), backend, tol).unwrap();
            assert_eq!(o.delta, 0.0);
            assert!((o.witness - Point2::new(-5.0, 0.0)).norm() < 1e-9);

            let p = seq(&[(0.0, 0.0), (2.0, 0.0)]);
            let q = seq(&[(0.0, 0.0)]);
            let o = optimize_exact(&p, &q, backend, tol).unwrap();
            assert!((o.delta - 1.0).abs() < 1e-12);
            assert!((o.witness - Point2::new(1.0, 0.0)).norm() < 1e-6);

            let (p, q) = square();
            let o = optimize_exact(&p, &q, backend, tol).unwrap();
            assert!((o.delta - FRAC_1_SQRT_2).abs() < 1e-9);
            assert!(verifies(&p, &q, o.delta, o.witness));
            assert!((o.witness - Point2::new(0.5, -0.5)).norm() < 1e-6);
        }
    }

    #[test]
    fn bisect_examples() {
        let tol = Tolerance::default();
        let p = seq(&[(0.0, 0.0), (1.0, 2.0), (3.0, 1.0)]);
        let b = optimize_bisect(&p, &p, 1e-6, Backend::Fast, tol).unwrap();
        assert_eq!((b.lo, b.hi), (0.0, 0.0));

        let (p, q) = square();
        let b = optimize_bisect(&p, &q, 1e-6, Backend::Fast, tol).unwrap();
        assert!(b.hi - b.lo <= 1e-6);
        assert!(b.lo <= FRAC_1_SQRT_2 && FRAC_1_SQRT_2 <= b.hi);
        assert!(verifies(&p, &q, b.hi, b.witness));
        assert!(optimize_bisect(&p, &q, 0.0, Backend::Fast, tol).is_err());
    }

    fn random_instance(rng: &mut ChaCha8Rng, max: usize, coord: i32) -> (PointSequence, PointSequence) {
        let m = rng.gen_range(1..=max);
        let n = rng.gen_range(1..=max);
        let mut pts = |k: usize| {
            let v: Vec<(f64, f64)> = (0..k)
                .map(|_| (rng.gen_range(0..=coord) as f64, rng.gen_range(0..=coord) as f64))
                .collect();
            seq(&v)
        };
        (pts(m), pts(n))
    }

    #[test]
    fn backends_agree_with_the_oracle() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for round in 0..60 {
            let (p, q) = random_instance(&mut rng, 4, 6);
            let delta = [0.4, 0.9, 1.5, 2.5][round % 4];
            let fast = decide(&p, &q, delta, Backend::Fast, tol).unwrap();
            let naive = decide(&p, &q, delta, Backend::Naive, tol).unwrap();
            let oracle = naive_decide(&p, &q, delta, tol).unwrap();
            assert_eq!(fast.feasible, oracle.feasible);
            assert_eq!(naive.feasible, oracle.feasible);
            for w in [fast.witness, naive.witness].into_iter().flatten() {
                assert!(verifies(&p, &q, delta, w));
            }
        }
    }

    #[test]
    fn optimum_matches_the_oracle_and_is_translation_invariant() {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..15 {
            let (p, q) = random_instance(&mut rng, 3, 5);
            let o = optimize_exact(&p, &q, Backend::Fast, tol).unwrap();
            let (d, _) = naive_optimize(&p, &q, tol).unwrap();
            assert!((o.delta - d).abs() <= 1e-9);
            assert!(o.delta <= stationary_frechet(&p, &q) + 1e-9);
            assert!(critical_values(&p, &q, tol).contains(o.delta, tol));
            let s = Point2::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let shifted = optimize_exact(&p, &q.translated(s), Backend::Fast, tol).unwrap();
            assert!((shifted.delta - o.delta).abs() <= 1e-9);
        }
    }
}
