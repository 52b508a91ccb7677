//! Improvement procedures: Lloyd-style location-allocation, best-improvement
//! single-point transfers, and the hybrid that runs a capped number of Lloyd
//! iterations before transferring points until no improving move remains.

use crate::core::{
    assign, solution_from_assignment, sq_dist, Assignment, CenterSet, ClusterStats, Dataset,
    Solution,
};
use crate::incremental::{add_delta, add_point, remove_delta, remove_point};
use crate::{Error, Result};

/// How a starting center set is refined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImproveMode {
    /// Lloyd iterations up to the cap, then transfer descent to a fixed
    /// point.
    #[default]
    Hybrid,
    /// Lloyd iterations only, up to the cap.
    Lloyd,
    /// Transfer descent only, from the Voronoi assignment of the centers.
    Phase3,
    /// No improvement: just the consistent solution of the assignment.
    None,
}

impl std::str::FromStr for ImproveMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hybrid" => Ok(ImproveMode::Hybrid),
            "lloyd" => Ok(ImproveMode::Lloyd),
            "phase3" => Ok(ImproveMode::Phase3),
            "none" => Ok(ImproveMode::None),
            other => Err(Error::Config(format!("unknown improve mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for ImproveMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ImproveMode::Hybrid => "hybrid",
            ImproveMode::Lloyd => "lloyd",
            ImproveMode::Phase3 => "phase3",
            ImproveMode::None => "none",
        };
        f.write_str(s)
    }
}

/// Improvement settings. The Lloyd cap of 10 is the hybrid's default; the
/// convergence test is always "assignment unchanged", never an objective
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImproveConfig {
    pub lloyd_cap: usize,
    pub mode: ImproveMode,
}

impl Default for ImproveConfig {
    fn default() -> Self {
        ImproveConfig {
            lloyd_cap: 10,
            mode: ImproveMode::Hybrid,
        }
    }
}

/// Alternates nearest-center assignment and centroid updates until the
/// assignment stops changing or `max_iter` passes have run. Returns the
/// final consistent solution and the number of passes. An empty cluster is
/// repaired by reseeding it at the point farthest from its own center.
///
/// With `max_iter = 0` the points are assigned once (and repaired if
/// needed) but no update pass is counted.
pub fn lloyd(dataset: &Dataset, centers: &CenterSet, max_iter: usize) -> Result<(Solution, usize)> {
    lloyd_traced(dataset, centers, max_iter, |_| ())
}

/// [`lloyd`] that reports the objective after every pass.
pub fn lloyd_traced(
    dataset: &Dataset,
    centers: &CenterSet,
    max_iter: usize,
    mut trace: impl FnMut(f64),
) -> Result<(Solution, usize)> {
    let k = centers.k();
    let mut centers = centers.clone();
    let mut last: Option<Solution> = None;
    let mut iterations = 0;

    while iterations < max_iter {
        let mut assignment = assign(dataset, &centers)?;
        repair_empty_clusters(dataset, &mut assignment, &mut centers)?;
        iterations += 1;

        let solution = solution_from_assignment(dataset, assignment, k)?;
        trace(solution.objective);
        let updated = solution.centers();
        let converged = updated == centers;
        centers = updated;
        last = Some(solution);
        if converged {
            break;
        }
    }

    match last {
        Some(solution) => Ok((solution, iterations)),
        None => {
            // Zero-iteration call: still deliver a consistent solution.
            let mut assignment = assign(dataset, &centers)?;
            repair_empty_clusters(dataset, &mut assignment, &mut centers)?;
            let solution = solution_from_assignment(dataset, assignment, k)?;
            trace(solution.objective);
            Ok((solution, 0))
        }
    }
}

/// Moves the point farthest from its own center into each empty cluster.
/// Donors must keep at least one member, so exactly `k` clusters survive.
fn repair_empty_clusters(
    dataset: &Dataset,
    assignment: &mut Assignment,
    centers: &mut CenterSet,
) -> Result<()> {
    let k = centers.k();
    let mut sizes = vec![0usize; k];
    for &label in assignment.labels() {
        sizes[label] += 1;
    }
    for empty in 0..k {
        if sizes[empty] > 0 {
            continue;
        }
        let mut donor: Option<(usize, f64)> = None;
        for i in 0..dataset.n() {
            let label = assignment.label(i);
            if sizes[label] < 2 {
                continue;
            }
            let dist = sq_dist(dataset.point(i), centers.center(label));
            if donor.is_none_or(|(_, best)| dist > best) {
                donor = Some((i, dist));
            }
        }
        let (i, _) = donor.ok_or(Error::InvalidK { k, n: dataset.n() })?;
        sizes[assignment.label(i)] -= 1;
        sizes[empty] += 1;
        centers.set_center(empty, dataset.point(i));
        assignment.set(i, empty);
    }
    Ok(())
}

/// Signed objective change from moving `point` out of `src` into `dst`;
/// negative means the move improves the solution. Moving the only member
/// of a cluster is a distinct signal, not a number.
pub fn transfer_gain(src: &ClusterStats, dst: &ClusterStats, point: &[f64]) -> Result<f64> {
    if src.size == 1 {
        return Err(Error::SingletonMove);
    }
    Ok(add_delta(dst, point)? + remove_delta(src, point)?)
}

/// Repeatedly applies the best improving single-point transfer until none
/// exists. Points are scanned in ascending index and target clusters in
/// ascending index; ties keep the first candidate. Moves that would empty
/// a cluster are skipped. Ends with a full stats rebuild to cancel the
/// drift of the incremental updates.
pub fn phase3_descent(dataset: &Dataset, solution: Solution) -> Result<Solution> {
    phase3_descent_traced(dataset, solution, |_| ())
}

/// [`phase3_descent`] that reports the objective after every applied move.
pub fn phase3_descent_traced(
    dataset: &Dataset,
    mut solution: Solution,
    mut trace: impl FnMut(f64),
) -> Result<Solution> {
    let n = dataset.n();
    let k = solution.k();
    let cap = n.saturating_mul(k).saturating_mul(1000);
    let mut moves = 0usize;

    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..n {
            let src = solution.assignment.label(i);
            if solution.stats[src].size < 2 {
                continue;
            }
            let point = dataset.point(i);
            let removal = remove_delta(&solution.stats[src], point)?;
            for dst in 0..k {
                if dst == src {
                    continue;
                }
                let gain = add_delta(&solution.stats[dst], point)? + removal;
                if gain < best.map_or(0.0, |(_, _, g)| g) {
                    best = Some((i, dst, gain));
                }
            }
        }
        let Some((i, dst, _)) = best else { break };

        moves += 1;
        if moves > cap {
            return Err(Error::MoveCapExceeded { cap });
        }
        let point = dataset.point(i);
        let src = solution.assignment.label(i);
        let out = remove_point(&mut solution.stats[src], point)?;
        let inn = add_point(&mut solution.stats[dst], point)?;
        solution.assignment.set(i, dst);
        solution.objective += out + inn;
        trace(solution.objective);
    }

    solution.rebuild(dataset)?;
    Ok(solution)
}

/// The hybrid improvement: Lloyd up to `config.lloyd_cap` passes, then
/// transfer descent until it terminates.
pub fn hybrid_improve(
    dataset: &Dataset,
    centers: &CenterSet,
    config: &ImproveConfig,
) -> Result<Solution> {
    hybrid_improve_traced(dataset, centers, config, |_| ())
}

/// [`hybrid_improve`] reporting the objective after every Lloyd pass and
/// every applied transfer.
pub fn hybrid_improve_traced(
    dataset: &Dataset,
    centers: &CenterSet,
    config: &ImproveConfig,
    mut trace: impl FnMut(f64),
) -> Result<Solution> {
    let (solution, _) = lloyd_traced(dataset, centers, config.lloyd_cap, &mut trace)?;
    phase3_descent_traced(dataset, solution, &mut trace)
}

/// Applies the configured improvement mode to a starting center set.
pub fn improve(dataset: &Dataset, centers: &CenterSet, config: &ImproveConfig) -> Result<Solution> {
    match config.mode {
        ImproveMode::Hybrid => hybrid_improve(dataset, centers, config),
        ImproveMode::Lloyd => Ok(lloyd(dataset, centers, config.lloyd_cap)?.0),
        ImproveMode::Phase3 => {
            let (solution, _) = lloyd(dataset, centers, 0)?;
            phase3_descent(dataset, solution)
        }
        ImproveMode::None => Ok(lloyd(dataset, centers, 0)?.0),
    }
}
