//! Ground-truth computations used to verify everything else: a brute-force
//! objective with no incremental shortcuts, an exhaustive optimum for tiny
//! instances, and the analytic two-squares instance family.

use crate::core::{solution_from_assignment, Assignment, Dataset, Solution};
use crate::{Error, Result};

/// Enumeration refuses instances with more partitions than this.
pub const MAX_PARTITIONS: f64 = 1e7;

/// Compensated (Kahan) summation, so oracle values carry less rounding
/// than the code they check.
fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Recomputes the objective of an assignment with naive double loops:
/// per-cluster centroid by direct averaging, then the plain sum of squared
/// distances, both under compensated summation.
pub fn brute_objective(dataset: &Dataset, assignment: &Assignment, k: usize) -> Result<f64> {
    let n = dataset.n();
    let d = dataset.d();
    let mut total = 0.0;
    let mut total_carry = 0.0;
    for cluster in 0..k {
        let members: Vec<usize> = (0..n).filter(|&i| assignment.label(i) == cluster).collect();
        if members.is_empty() {
            return Err(Error::EmptyCluster { index: cluster });
        }
        let mut centroid = vec![0.0; d];
        for (col, c) in centroid.iter_mut().enumerate() {
            *c = kahan_sum(members.iter().map(|&i| dataset.point(i)[col])) / members.len() as f64;
        }
        let wss = kahan_sum(members.iter().map(|&i| {
            kahan_sum(
                dataset
                    .point(i)
                    .iter()
                    .zip(&centroid)
                    .map(|(x, c)| (x - c) * (x - c)),
            )
        }));
        // Kahan step for the cluster total as well.
        let y = wss - total_carry;
        let t = total + y;
        total_carry = (t - total) - y;
        total = t;
    }
    Ok(total)
}

/// Number of partitions of an `n`-set into exactly `k` non-empty parts
/// (Stirling number of the second kind), computed in f64 so oversized
/// requests can be reported rather than overflowing.
pub fn partition_count(n: usize, k: usize) -> f64 {
    if k == 0 || k > n {
        return 0.0;
    }
    let mut row = vec![0.0f64; k + 1];
    row[0] = 1.0; // S(0, 0)
    for _ in 1..=n {
        for j in (1..=k).rev() {
            row[j] = j as f64 * row[j] + row[j - 1];
        }
        row[0] = 0.0;
    }
    row[k]
}

/// Finds the global optimum by enumerating every partition of the points
/// into exactly `k` non-empty clusters, as restricted-growth strings.
/// Each candidate is scored with [`brute_objective`]-style naive sums.
/// Refuses instances whose partition count exceeds [`MAX_PARTITIONS`].
pub fn exhaustive_optimum(dataset: &Dataset, k: usize) -> Result<(Solution, f64)> {
    let n = dataset.n();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let count = partition_count(n, k);
    if count > MAX_PARTITIONS {
        return Err(Error::InstanceTooLarge {
            partitions: count,
            limit: MAX_PARTITIONS,
        });
    }

    let mut labels = vec![0usize; n];
    let mut best_labels: Option<Vec<usize>> = None;
    let mut best_value = f64::INFINITY;

    // Depth-first walk over restricted-growth strings: position i may use
    // any label up to one past the maximum used so far, pruned so exactly
    // k labels appear by the end.
    fn walk(
        dataset: &Dataset,
        k: usize,
        pos: usize,
        max_used: usize, // number of labels used in labels[..pos]
        labels: &mut Vec<usize>,
        best_value: &mut f64,
        best_labels: &mut Option<Vec<usize>>,
    ) {
        let n = dataset.n();
        if pos == n {
            if max_used == k {
                let assignment = Assignment::new(labels.clone(), k).expect("labels in range");
                let value = brute_objective(dataset, &assignment, k).expect("no empty parts");
                if value < *best_value {
                    *best_value = value;
                    *best_labels = Some(labels.clone());
                }
            }
            return;
        }
        // Remaining positions must be able to introduce the missing labels.
        let remaining = n - pos;
        let missing = k.saturating_sub(max_used);
        if missing > remaining {
            return;
        }
        let cap = (max_used + 1).min(k);
        for label in 0..cap {
            labels[pos] = label;
            let next_max = max_used.max(label + 1);
            walk(
                dataset,
                k,
                pos + 1,
                next_max,
                labels,
                best_value,
                best_labels,
            );
        }
    }

    walk(
        dataset,
        k,
        0,
        0,
        &mut labels,
        &mut best_value,
        &mut best_labels,
    );

    let labels = best_labels.expect("at least one partition exists when k <= n");
    let assignment = Assignment::new(labels, k)?;
    let solution = solution_from_assignment(dataset, assignment, k)?;
    Ok((solution, best_value))
}

/// The eight vertices of two unit squares whose near sides are `x` apart,
/// left square at the origin. For `x` below `(sqrt(3) - 1)/2` the optimal
/// 2-clustering is the 6-2 split with objective `3 + (1 + 2x)^2 / 3`.
#[derive(Debug, Clone)]
pub struct TwoSquaresInstance {
    x: f64,
    dataset: Dataset,
    optimal_objective: Option<f64>,
}

impl TwoSquaresInstance {
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    /// Closed-form optimal objective, present only inside the gap range
    /// where the formula holds.
    pub fn optimal_objective(&self) -> Option<f64> {
        self.optimal_objective
    }
}

/// Upper end of the gap range in which the closed-form optimum applies.
pub fn two_squares_formula_limit() -> f64 {
    0.5 * (3.0_f64.sqrt() - 1.0)
}

/// Builds the two-squares instance for gap `x >= 0`.
pub fn make_two_squares(x: f64) -> Result<TwoSquaresInstance> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Config(format!(
            "two-squares gap must be >= 0, got {x}"
        )));
    }
    let rows = vec![
        vec![0.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
        vec![1.0 + x, 0.0],
        vec![1.0 + x, 1.0],
        vec![2.0 + x, 0.0],
        vec![2.0 + x, 1.0],
    ];
    let dataset = Dataset::from_rows(format!("two-squares-x{x}"), &rows)?;
    let limit = two_squares_formula_limit();
    let optimal_objective = (x < limit).then(|| {
        let side = 1.0 + 2.0 * x;
        3.0 + side * side / 3.0
    });
    Ok(TwoSquaresInstance {
        x,
        dataset,
        optimal_objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{sse_objective, CenterSet};

    #[test]
    fn brute_matches_constructor_on_two_squares() {
        let inst = make_two_squares(0.25).unwrap();
        let a = Assignment::new(vec![0, 0, 0, 0, 0, 0, 1, 1], 2).unwrap();
        let brute = brute_objective(inst.dataset(), &a, 2).unwrap();
        assert!((brute - 3.75).abs() < 1e-12);
    }

    #[test]
    fn brute_zero_for_singletons() {
        let d = Dataset::from_rows("t", &[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let a = Assignment::new(vec![0, 1, 2], 3).unwrap();
        assert_eq!(brute_objective(&d, &a, 3).unwrap(), 0.0);
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partition_count(4, 2), 7.0);
        assert_eq!(partition_count(8, 2), 127.0);
        assert_eq!(partition_count(12, 3), 86526.0);
        assert_eq!(partition_count(5, 5), 1.0);
        assert_eq!(partition_count(5, 6), 0.0);
    }

    #[test]
    fn exhaustive_small_line() {
        let d = Dataset::from_rows("t", &[vec![0.0], vec![1.0], vec![10.0], vec![11.0]]).unwrap();
        let (solution, value) = exhaustive_optimum(&d, 2).unwrap();
        assert!((value - 1.0).abs() < 1e-12);
        let labels = solution.assignment.labels();
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[2], labels[3]);
        assert_ne!(labels[0], labels[2]);
    }

    #[test]
    fn exhaustive_two_squares_values() {
        for (x, expected) in [(0.25, 3.75), (0.35, 3.0 + 1.7 * 1.7 / 3.0)] {
            let inst = make_two_squares(x).unwrap();
            let (_, value) = exhaustive_optimum(inst.dataset(), 2).unwrap();
            assert!(
                (value - expected).abs() < 1e-12,
                "x={x}: got {value}, want {expected}"
            );
        }
    }

    #[test]
    fn exhaustive_matches_formula_across_gap_range() {
        for x in [0.0, 0.1, 0.25, 0.30, 0.35] {
            let inst = make_two_squares(x).unwrap();
            let formula = inst.optimal_objective().unwrap();
            let (_, value) = exhaustive_optimum(inst.dataset(), 2).unwrap();
            assert!(
                (value - formula).abs() < 1e-12,
                "x={x}: {value} vs {formula}"
            );
        }
    }

    #[test]
    fn refuses_oversized_instances() {
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64]).collect();
        let d = Dataset::from_rows("t", &rows).unwrap();
        assert!(matches!(
            exhaustive_optimum(&d, 4),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn two_squares_vertices_and_formula_range() {
        let inst = make_two_squares(0.30).unwrap();
        assert_eq!(inst.dataset().n(), 8);
        assert_eq!(inst.dataset().point(6), &[2.3, 0.0]);
        let expected = 3.0 + 1.6 * 1.6 / 3.0;
        assert!((inst.optimal_objective().unwrap() - expected).abs() < 1e-12);

        // Outside the range the closed form no longer applies.
        assert!(make_two_squares(0.5).unwrap().optimal_objective().is_none());
        assert!(make_two_squares(-0.1).is_err());
    }

    #[test]
    fn seven_one_split_never_optimal() {
        // On a grid of gaps, every 7-1 partition scores strictly worse
        // than the 6-2 split.
        for i in 0..=20 {
            let x = i as f64 * 0.05;
            let inst = make_two_squares(x).unwrap();
            let six_two = Assignment::new(vec![0, 0, 0, 0, 0, 0, 1, 1], 2).unwrap();
            let six_two_value = brute_objective(inst.dataset(), &six_two, 2).unwrap();
            for lone in 0..8 {
                let labels: Vec<usize> = (0..8).map(|i| usize::from(i == lone)).collect();
                let a = Assignment::new(labels, 2).unwrap();
                let value = brute_objective(inst.dataset(), &a, 2).unwrap();
                assert!(value > six_two_value, "x={x}, lone={lone}");
            }
        }
    }

    #[test]
    fn six_two_beats_five_three_up_to_half() {
        // Strict below x = 0.5; the two configurations tie exactly there,
        // where (1 + 2x)^2 = 4 closes the 8/15 constant gap.
        for i in 0..=10 {
            let x = i as f64 * 0.05;
            let inst = make_two_squares(x).unwrap();
            let six_two = Assignment::new(vec![0, 0, 0, 0, 0, 0, 1, 1], 2).unwrap();
            let six_two_value = brute_objective(inst.dataset(), &six_two, 2).unwrap();
            // 5-3: one near vertex moves over, the far pair plus the other
            // near vertex stay.
            let five_three = Assignment::new(vec![0, 0, 0, 0, 0, 1, 1, 1], 2).unwrap();
            let five_three_value = brute_objective(inst.dataset(), &five_three, 2).unwrap();
            if i < 10 {
                assert!(
                    six_two_value < five_three_value,
                    "x={x}: 6-2 {six_two_value} vs 5-3 {five_three_value}"
                );
            } else {
                assert!((six_two_value - five_three_value).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn natural_four_four_centers_cost_four() {
        let inst = make_two_squares(0.25).unwrap();
        let centers = CenterSet::from_rows(&[vec![0.5, 0.5], vec![1.75, 0.5]]).unwrap();
        let obj = sse_objective(inst.dataset(), &centers).unwrap();
        assert!((obj - 4.0).abs() < 1e-12);
    }
}
