//! Random-instance instrumentation: touch counts of tree updates and the cost
//! of the two decision backends.

use std::time::Instant;

use dfrechet_core::decide::{decide, Backend};
use dfrechet_core::decomp_tree::RectTree;
use dfrechet_core::free_space::stationary_frechet;
use dfrechet_core::{FreeSpaceMatrix, PointSequence, Point2, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::BenchReport;
use crate::CliError;

pub const TOGGLES_PER_TRIAL: usize = 1000;

/// Per-update rebuild allowance for an `m x n` tiled tree.
pub fn rebuild_bound(m: usize, n: usize) -> usize {
    let (m, n) = (m.min(n), m.max(n));
    let log_m = (m as f64).log2().ceil() as usize;
    let log_k = (n as f64 / m as f64).log2().ceil().max(0.0) as usize;
    2 * (log_m + 1) + 2 * (log_k + 2)
}

fn random_points(rng: &mut ChaCha8Rng, k: usize) -> PointSequence {
    let pts = (0..k)
        .map(|_| Point2::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
        .collect();
    PointSequence::new(pts).expect("nonempty and finite")
}

pub fn run(m: usize, n: usize, seed: u64, trials: usize, tol: Tolerance) -> Result<BenchReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rebuilds = 0usize;
    let mut max_rebuilds = 0usize;
    let mut updates = 0usize;
    let mut agree = true;
    let (mut fast_work, mut naive_work) = (0u64, 0u64);
    let (mut fast_ms, mut naive_ms) = (0.0, 0.0);
    for _ in 0..trials {
        let matrix = FreeSpaceMatrix::from_fn(m, n, |_, _| rng.gen_bool(0.7));
        let mut tree = RectTree::build(matrix);
        for _ in 0..TOGGLES_PER_TRIAL {
            let s = tree
                .toggle(rng.gen_range(0..m), rng.gen_range(0..n))
                .map_err(|e| CliError::Invariant(e.to_string()))?;
            rebuilds += s.phi_rebuilds;
            max_rebuilds = max_rebuilds.max(s.phi_rebuilds);
            updates += 1;
        }

        let p = random_points(&mut rng, m);
        let q = random_points(&mut rng, n);
        let delta = 0.5 * stationary_frechet(&p, &q);
        let start = Instant::now();
        let fast = decide(&p, &q, delta, Backend::Fast, tol).map_err(|e| CliError::Invariant(e.to_string()))?;
        fast_ms += start.elapsed().as_secs_f64() * 1e3;
        let start = Instant::now();
        let naive = decide(&p, &q, delta, Backend::Naive, tol).map_err(|e| CliError::Invariant(e.to_string()))?;
        naive_ms += start.elapsed().as_secs_f64() * 1e3;
        agree &= fast.feasible == naive.feasible;
        fast_work += fast.stats.dp_work;
        naive_work += naive.stats.dp_work;
    }
    let bound = rebuild_bound(m, n);
    Ok(BenchReport {
        m,
        n,
        seed,
        trials,
        toggles_per_trial: TOGGLES_PER_TRIAL,
        phi_rebuilds_mean: if updates == 0 { 0.0 } else { rebuilds as f64 / updates as f64 },
        phi_rebuilds_max: max_rebuilds,
        phi_rebuilds_bound: bound,
        within_bound: max_rebuilds <= bound,
        backends_agree: agree,
        fast_dp_work: fast_work,
        naive_dp_work: naive_work,
        fast_ms,
        naive_ms,
        time_ratio: if fast_ms > 0.0 { naive_ms / fast_ms } else { 0.0 },
    })
}
