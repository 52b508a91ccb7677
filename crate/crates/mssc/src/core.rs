//! Domain types and the exact clustering operations every other module is
//! built on: squared-distance objective, nearest-center assignment, and
//! centroid computation.

use crate::{Error, Result};

/// Squared Euclidean distance between two coordinate slices.
#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// An immutable `n x d` matrix of point coordinates. Row order is fixed
/// after construction; the row index is the stable point identifier.
#[derive(Debug, Clone)]
pub struct Dataset {
    name: String,
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl Dataset {
    /// Builds a dataset from row vectors, validating shape and finiteness.
    pub fn from_rows(name: impl Into<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::RaggedRow {
                row: 0,
                len: 0,
                expected: 1,
            });
        }
        let mut data = Vec::with_capacity(n * d);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::RaggedRow {
                    row,
                    len: r.len(),
                    expected: d,
                });
            }
            for (col, &v) in r.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteCoordinate { row, col });
                }
                data.push(v);
            }
        }
        Ok(Dataset {
            name: name.into(),
            data,
            n,
            d,
        })
    }

    /// Builds a dataset from a flat row-major buffer of length `n * d`.
    pub fn from_flat(name: impl Into<String>, data: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::EmptyDataset);
        }
        assert_eq!(data.len(), n * d, "flat buffer length must equal n * d");
        for (i, &v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteCoordinate {
                    row: i / d,
                    col: i % d,
                });
            }
        }
        Ok(Dataset {
            name: name.into(),
            data,
            n,
            d,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    /// New dataset holding the given rows (in the given order).
    pub fn subset(&self, name: impl Into<String>, indices: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(indices.len() * self.d);
        for &i in indices {
            data.extend_from_slice(self.point(i));
        }
        Dataset::from_flat(name, data, indices.len(), self.d)
    }
}

/// A set of `k` candidate cluster centers in the dataset's space.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSet {
    data: Vec<f64>,
    k: usize,
    d: usize,
}

impl CenterSet {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::EmptyDataset);
        }
        let d = rows[0].len();
        let mut data = Vec::with_capacity(k * d);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::RaggedRow {
                    row,
                    len: r.len(),
                    expected: d,
                });
            }
            for (col, &v) in r.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteCoordinate { row, col });
                }
                data.push(v);
            }
        }
        Ok(CenterSet { data, k, d })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn center(&self, j: usize) -> &[f64] {
        &self.data[j * self.d..(j + 1) * self.d]
    }

    pub fn centers(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    pub fn set_center(&mut self, j: usize, coords: &[f64]) {
        assert_eq!(coords.len(), self.d);
        self.data[j * self.d..(j + 1) * self.d].copy_from_slice(coords);
    }
}

/// Maps every point index to exactly one cluster index in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    labels: Vec<usize>,
}

impl Assignment {
    /// Wraps a label vector, validating that every label is below `k`.
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        for (point, &label) in labels.iter().enumerate() {
            if label >= k {
                return Err(Error::LabelOutOfRange { point, label, k });
            }
        }
        Ok(Assignment { labels })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, point: usize) -> usize {
        self.labels[point]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub(crate) fn set(&mut self, point: usize, label: usize) {
        self.labels[point] = label;
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }
}

/// Size, centroid, and within-cluster sum of squares of one cluster — the
/// unit all incremental updates operate on.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterStats {
    pub size: usize,
    pub centroid: Vec<f64>,
    pub wss: f64,
}

impl ClusterStats {
    /// Stats of a single-point cluster.
    pub fn singleton(point: &[f64]) -> Self {
        ClusterStats {
            size: 1,
            centroid: point.to_vec(),
            wss: 0.0,
        }
    }

    /// Recomputes stats from scratch over the given members.
    pub fn from_members(dataset: &Dataset, members: &[usize]) -> Result<Self> {
        let centroid = centroid(dataset, members)?;
        let wss = members
            .iter()
            .map(|&i| sq_dist(dataset.point(i), &centroid))
            .sum();
        Ok(ClusterStats {
            size: members.len(),
            centroid,
            wss,
        })
    }
}

/// A full clustering: assignment, per-cluster stats, and total objective.
#[derive(Debug, Clone)]
pub struct Solution {
    pub assignment: Assignment,
    pub stats: Vec<ClusterStats>,
    pub objective: f64,
}

impl Solution {
    pub fn k(&self) -> usize {
        self.stats.len()
    }

    /// The cluster centroids as a center set.
    pub fn centers(&self) -> CenterSet {
        let rows: Vec<Vec<f64>> = self.stats.iter().map(|s| s.centroid.clone()).collect();
        CenterSet::from_rows(&rows).expect("stats always hold at least one non-empty centroid")
    }

    /// Rebuilds stats and objective from the assignment alone. Used after a
    /// run of incremental updates to cap floating-point drift.
    pub fn rebuild(&mut self, dataset: &Dataset) -> Result<()> {
        let fresh = solution_from_assignment(dataset, self.assignment.clone(), self.k())?;
        self.stats = fresh.stats;
        self.objective = fresh.objective;
        Ok(())
    }

    /// Checks internal consistency against a from-scratch recomputation.
    pub fn validate(&self, dataset: &Dataset, tol: f64) -> Result<()> {
        let fresh = solution_from_assignment(dataset, self.assignment.clone(), self.k())?;
        let scale = fresh.objective.abs().max(1.0);
        if (fresh.objective - self.objective).abs() > tol * scale {
            return Err(Error::Config(format!(
                "objective {} differs from recomputed {}",
                self.objective, fresh.objective
            )));
        }
        Ok(())
    }
}

/// Total squared distance from every point to its nearest center.
/// Independent of center order.
pub fn sse_objective(dataset: &Dataset, centers: &CenterSet) -> Result<f64> {
    check_dims(dataset, centers)?;
    let mut total = 0.0;
    for p in dataset.points() {
        let mut best = f64::INFINITY;
        for c in centers.centers() {
            let dist = sq_dist(p, c);
            if dist < best {
                best = dist;
            }
        }
        total += best;
    }
    Ok(total)
}

/// Assigns every point to its nearest center; ties go to the lowest
/// cluster index so that seeded runs are reproducible.
pub fn assign(dataset: &Dataset, centers: &CenterSet) -> Result<Assignment> {
    check_dims(dataset, centers)?;
    let labels = dataset
        .points()
        .map(|p| {
            let mut best = f64::INFINITY;
            let mut label = 0;
            for (j, c) in centers.centers().enumerate() {
                let dist = sq_dist(p, c);
                if dist < best {
                    best = dist;
                    label = j;
                }
            }
            label
        })
        .collect();
    Ok(Assignment { labels })
}

/// Coordinate-wise mean of the given members.
pub fn centroid(dataset: &Dataset, members: &[usize]) -> Result<Vec<f64>> {
    if members.is_empty() {
        return Err(Error::EmptyMembers);
    }
    let mut mean = vec![0.0; dataset.d()];
    for &i in members {
        for (m, x) in mean.iter_mut().zip(dataset.point(i)) {
            *m += x;
        }
    }
    let inv = 1.0 / members.len() as f64;
    for m in &mut mean {
        *m *= inv;
    }
    Ok(mean)
}

/// Builds a consistent [`Solution`] from an assignment by a full pass over
/// the data: per-cluster centroids, per-cluster sums of squares, and their
/// total. Every cluster in `[0, k)` must be non-empty.
pub fn solution_from_assignment(
    dataset: &Dataset,
    assignment: Assignment,
    k: usize,
) -> Result<Solution> {
    if assignment.len() != dataset.n() {
        return Err(Error::Config(format!(
            "assignment covers {} points, dataset has {}",
            assignment.len(),
            dataset.n()
        )));
    }
    let d = dataset.d();
    let mut sizes = vec![0usize; k];
    let mut sums = vec![0.0f64; k * d];
    for (i, &label) in assignment.labels().iter().enumerate() {
        if label >= k {
            return Err(Error::LabelOutOfRange { point: i, label, k });
        }
        sizes[label] += 1;
        let row = &mut sums[label * d..(label + 1) * d];
        for (s, x) in row.iter_mut().zip(dataset.point(i)) {
            *s += x;
        }
    }
    if let Some(index) = sizes.iter().position(|&m| m == 0) {
        return Err(Error::EmptyCluster { index });
    }

    let mut stats: Vec<ClusterStats> = sizes
        .iter()
        .enumerate()
        .map(|(j, &m)| {
            let inv = 1.0 / m as f64;
            let centroid = sums[j * d..(j + 1) * d].iter().map(|s| s * inv).collect();
            ClusterStats {
                size: m,
                centroid,
                wss: 0.0,
            }
        })
        .collect();

    for (i, &label) in assignment.labels().iter().enumerate() {
        stats[label].wss += sq_dist(dataset.point(i), &stats[label].centroid);
    }
    let objective = stats.iter().map(|s| s.wss).sum();
    Ok(Solution {
        assignment,
        stats,
        objective,
    })
}

fn check_dims(dataset: &Dataset, centers: &CenterSet) -> Result<()> {
    if dataset.d() != centers.d() {
        return Err(Error::DimensionMismatch {
            dataset: dataset.d(),
            centers: centers.d(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn dataset_1d(xs: &[f64]) -> Dataset {
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        Dataset::from_rows("1d", &rows).unwrap()
    }

    fn centers_1d(xs: &[f64]) -> CenterSet {
        let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x]).collect();
        CenterSet::from_rows(&rows).unwrap()
    }

    #[test]
    fn objective_two_points_one_center() {
        let d = dataset_1d(&[0.0, 2.0]);
        let c = centers_1d(&[1.0]);
        assert_eq!(sse_objective(&d, &c).unwrap(), 2.0);
    }

    #[test]
    fn objective_zero_when_every_point_is_a_center() {
        let d = dataset_1d(&[3.0, -1.0, 7.5, 0.25]);
        let c = centers_1d(&[3.0, -1.0, 7.5, 0.25]);
        assert_eq!(sse_objective(&d, &c).unwrap(), 0.0);
    }

    #[test]
    fn objective_two_squares_natural_centers() {
        let inst = oracle::make_two_squares(0.25).unwrap();
        let c = CenterSet::from_rows(&[vec![0.5, 0.5], vec![1.75, 0.5]]).unwrap();
        let obj = sse_objective(inst.dataset(), &c).unwrap();
        assert!((obj - 4.0).abs() < 1e-12, "got {obj}");
    }

    #[test]
    fn objective_invariant_under_center_permutation() {
        let d = dataset_1d(&[0.0, 1.0, 5.0, 9.0, 10.0]);
        let a = centers_1d(&[1.0, 9.0, 4.0]);
        let b = centers_1d(&[4.0, 1.0, 9.0]);
        assert_eq!(
            sse_objective(&d, &a).unwrap(),
            sse_objective(&d, &b).unwrap()
        );
    }

    #[test]
    fn objective_dimension_mismatch() {
        let d = dataset_1d(&[0.0]);
        let c = CenterSet::from_rows(&[vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            sse_objective(&d, &c),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn assign_nearest_center() {
        let d = dataset_1d(&[0.0, 10.0]);
        let c = centers_1d(&[1.0, 9.0]);
        assert_eq!(assign(&d, &c).unwrap().labels(), &[0, 1]);
    }

    #[test]
    fn assign_tie_breaks_to_lowest_index() {
        let d = dataset_1d(&[5.0]);
        let c = centers_1d(&[4.0, 6.0]);
        assert_eq!(assign(&d, &c).unwrap().labels(), &[0]);
    }

    #[test]
    fn assign_two_squares_splits_left_right() {
        let inst = oracle::make_two_squares(0.25).unwrap();
        let c = CenterSet::from_rows(&[vec![0.5, 0.5], vec![1.75, 0.5]]).unwrap();
        let a = assign(inst.dataset(), &c).unwrap();
        assert_eq!(a.labels(), &[0, 0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn assign_is_idempotent() {
        let d = dataset_1d(&[0.0, 1.5, 2.0, 8.0, 9.0]);
        let c = centers_1d(&[1.0, 8.5]);
        let first = assign(&d, &c).unwrap();
        let second = assign(&d, &c).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn centroid_midpoint_and_identity() {
        let d = dataset_1d(&[0.0, 1.0, 2.0]);
        assert_eq!(centroid(&d, &[0, 2]).unwrap(), vec![1.0]);
        assert_eq!(centroid(&d, &[1]).unwrap(), vec![1.0]);
        assert!(matches!(centroid(&d, &[]), Err(Error::EmptyMembers)));
    }

    #[test]
    fn centroid_of_left_square() {
        let inst = oracle::make_two_squares(0.25).unwrap();
        assert_eq!(
            centroid(inst.dataset(), &[0, 1, 2, 3]).unwrap(),
            vec![0.5, 0.5]
        );
    }

    #[test]
    fn solution_from_assignment_examples() {
        let d = dataset_1d(&[0.0, 1.0, 10.0, 11.0]);
        let a = Assignment::new(vec![0, 0, 1, 1], 2).unwrap();
        let s = solution_from_assignment(&d, a, 2).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-12);
        assert_eq!(s.stats[0].size, 2);
        assert_eq!(s.stats[0].centroid, vec![0.5]);

        let singletons = Assignment::new(vec![0, 1, 2, 3], 4).unwrap();
        let s = solution_from_assignment(&d, singletons, 4).unwrap();
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn solution_two_squares_six_two_split() {
        let inst = oracle::make_two_squares(0.25).unwrap();
        let a = Assignment::new(vec![0, 0, 0, 0, 0, 0, 1, 1], 2).unwrap();
        let s = solution_from_assignment(inst.dataset(), a, 2).unwrap();
        assert!((s.objective - 3.75).abs() < 1e-12, "got {}", s.objective);
    }

    #[test]
    fn solution_names_empty_cluster() {
        let d = dataset_1d(&[0.0, 1.0]);
        let a = Assignment::new(vec![0, 0], 2).unwrap();
        match solution_from_assignment(&d, a, 2) {
            Err(Error::EmptyCluster { index }) => assert_eq!(index, 1),
            other => panic!("expected empty-cluster error, got {other:?}"),
        }
    }

    #[test]
    fn centroid_centers_never_worse_than_original_centers() {
        // Replacing any center set by the per-cluster centroids of its own
        // assignment cannot increase the objective of that assignment.
        let mut rng = crate::grasp::RandomSource::new(11);
        for _ in 0..200 {
            let n = 2 + rng.index(12);
            let d = 1 + rng.index(3);
            let k = 1 + rng.index(n.min(4));
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.uniform() * 10.0).collect())
                .collect();
            let dataset = Dataset::from_rows("rand", &rows).unwrap();
            let crows: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..d).map(|_| rng.uniform() * 10.0).collect())
                .collect();
            let centers = CenterSet::from_rows(&crows).unwrap();

            let a = assign(&dataset, &centers).unwrap();
            // Skip draws that leave a cluster empty; the property needs a
            // consistent solution.
            let Ok(s) = solution_from_assignment(&dataset, a, k) else {
                continue;
            };
            let original = sse_objective(&dataset, &centers).unwrap();
            assert!(s.objective <= original + 1e-9 * original.abs().max(1.0));
        }
    }

    #[test]
    fn objective_matches_brute_force_on_random_instances() {
        let mut rng = crate::grasp::RandomSource::new(23);
        for _ in 0..1000 {
            let n = 2 + rng.index(10);
            let d = 1 + rng.index(3);
            let k = 1 + rng.index(n.min(3));
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.uniform() * 4.0 - 2.0).collect())
                .collect();
            let dataset = Dataset::from_rows("rand", &rows).unwrap();
            let labels: Vec<usize> = (0..n)
                .map(|i| if i < k { i } else { rng.index(k) })
                .collect();
            let assignment = Assignment::new(labels, k).unwrap();
            let s = solution_from_assignment(&dataset, assignment.clone(), k).unwrap();
            let brute = oracle::brute_objective(&dataset, &assignment, k).unwrap();
            let scale = brute.abs().max(1.0);
            assert!((s.objective - brute).abs() <= 1e-9 * scale);
        }
    }
}
