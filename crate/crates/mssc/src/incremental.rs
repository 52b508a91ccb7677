//! Constant-time-per-dimension objective deltas for the three cluster
//! moves: adding a point, removing a point, and merging two clusters.
//!
//! For a cluster of size `m` with centroid `c`, the change in the
//! sum-of-squares objective is
//!
//! * add point `p`:      `+ m/(m+1) * |p - c|^2`
//! * remove member `p`:  `- m/(m-1) * |p - c|^2`
//! * merge with a cluster of size `m2`, centroid `c2`:
//!   `+ m*m2/(m+m2) * |c - c2|^2`
//!
//! Each delta separates over dimensions, so only the cluster size and
//! centroid are needed — never the member list.

use crate::core::{sq_dist, ClusterStats};
use crate::{Error, Result};

/// Objective increase from adding `point` to the cluster. Does not mutate
/// the stats. The cluster must be non-empty; creating a fresh cluster is a
/// zero-delta event the caller handles itself.
pub fn add_delta(stats: &ClusterStats, point: &[f64]) -> Result<f64> {
    if stats.size == 0 {
        return Err(Error::UndefinedClusterStats);
    }
    let m = stats.size as f64;
    Ok(m / (m + 1.0) * sq_dist(point, &stats.centroid))
}

/// Signed objective change (non-positive) from removing the member `point`.
/// Removing the last member is a distinct outcome, not an arithmetic
/// result: the formula divides by `m - 1`, and callers decide whether a
/// cluster may vanish.
pub fn remove_delta(stats: &ClusterStats, point: &[f64]) -> Result<f64> {
    match stats.size {
        0 => Err(Error::UndefinedClusterStats),
        1 => Err(Error::SingletonRemoval),
        m => {
            let m = m as f64;
            Ok(-(m / (m - 1.0)) * sq_dist(point, &stats.centroid))
        }
    }
}

/// Objective increase from combining two clusters into one. Symmetric in
/// its arguments, including floating-point evaluation order.
pub fn merge_delta(a: &ClusterStats, b: &ClusterStats) -> f64 {
    merge_delta_parts(a.size, &a.centroid, b.size, &b.centroid)
}

/// [`merge_delta`] on bare size/centroid pairs, for callers that keep
/// cluster summaries outside a [`ClusterStats`].
pub fn merge_delta_parts(size_a: usize, ca: &[f64], size_b: usize, cb: &[f64]) -> f64 {
    debug_assert!(size_a >= 1 && size_b >= 1);
    let m1 = size_a as f64;
    let m2 = size_b as f64;
    m1 * m2 / (m1 + m2) * sq_dist(ca, cb)
}

/// Centroid and size of the cluster obtained by merging `a` and `b`:
/// the size-weighted mean of the two centroids.
pub fn merge_centers(a: &ClusterStats, b: &ClusterStats) -> (Vec<f64>, usize) {
    merge_centers_parts(a.size, &a.centroid, b.size, &b.centroid)
}

/// [`merge_centers`] on bare size/centroid pairs.
pub fn merge_centers_parts(
    size_a: usize,
    ca: &[f64],
    size_b: usize,
    cb: &[f64],
) -> (Vec<f64>, usize) {
    debug_assert!(size_a >= 1 && size_b >= 1);
    let m1 = size_a as f64;
    let m2 = size_b as f64;
    let inv = 1.0 / (m1 + m2);
    let centroid = ca
        .iter()
        .zip(cb)
        .map(|(x1, x2)| (m1 * x1 + m2 * x2) * inv)
        .collect();
    (centroid, size_a + size_b)
}

/// Applies an add move in place: centroid shifts by `(p - c)/(m+1)` and the
/// wss grows by [`add_delta`]. O(d).
pub fn add_point(stats: &mut ClusterStats, point: &[f64]) -> Result<f64> {
    let delta = add_delta(stats, point)?;
    let m1 = stats.size as f64 + 1.0;
    for (c, p) in stats.centroid.iter_mut().zip(point) {
        *c += (p - *c) / m1;
    }
    stats.size += 1;
    stats.wss += delta;
    Ok(delta)
}

/// Applies a remove move in place: the inverse centroid shift plus the
/// (negative) [`remove_delta`]. O(d). The wss is clamped at zero to stop
/// rounding from leaking a negative sum of squares.
pub fn remove_point(stats: &mut ClusterStats, point: &[f64]) -> Result<f64> {
    let delta = remove_delta(stats, point)?;
    let m1 = stats.size as f64 - 1.0;
    for (c, p) in stats.centroid.iter_mut().zip(point) {
        *c -= (p - *c) / m1;
    }
    stats.size -= 1;
    stats.wss = (stats.wss + delta).max(0.0);
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::Dataset;
    use crate::grasp::RandomSource;

    fn stats_1d(points: &[f64]) -> ClusterStats {
        let rows: Vec<Vec<f64>> = points.iter().map(|&x| vec![x]).collect();
        let d = Dataset::from_rows("t", &rows).unwrap();
        let members: Vec<usize> = (0..points.len()).collect();
        ClusterStats::from_members(&d, &members).unwrap()
    }

    /// Brute-force sum of squares of a 1-D point list.
    fn sse(points: &[f64]) -> f64 {
        let mean = points.iter().sum::<f64>() / points.len() as f64;
        points.iter().map(|x| (x - mean) * (x - mean)).sum()
    }

    #[test]
    fn add_matches_brute_force() {
        let s = stats_1d(&[0.0, 2.0]);
        assert_eq!(s.wss, 2.0);
        let delta = add_delta(&s, &[4.0]).unwrap();
        assert!((delta - 6.0).abs() < 1e-12);
        assert!(((s.wss + delta) - sse(&[0.0, 2.0, 4.0])).abs() < 1e-12);
    }

    #[test]
    fn add_at_centroid_is_free() {
        let s = stats_1d(&[0.0, 2.0]);
        assert_eq!(add_delta(&s, &[1.0]).unwrap(), 0.0);
    }

    #[test]
    fn add_to_singleton() {
        let s = stats_1d(&[0.0]);
        let delta = add_delta(&s, &[2.0]).unwrap();
        assert!((delta - 2.0).abs() < 1e-12);
        assert!((delta - sse(&[0.0, 2.0])).abs() < 1e-12);
    }

    #[test]
    fn add_to_empty_is_an_error() {
        let s = ClusterStats {
            size: 0,
            centroid: vec![0.0],
            wss: 0.0,
        };
        assert!(matches!(
            add_delta(&s, &[1.0]),
            Err(crate::Error::UndefinedClusterStats)
        ));
    }

    #[test]
    fn remove_matches_brute_force() {
        let s = stats_1d(&[0.0, 2.0, 4.0]);
        assert!((s.wss - 8.0).abs() < 1e-12);
        let delta = remove_delta(&s, &[4.0]).unwrap();
        assert!((delta + 6.0).abs() < 1e-12);
        assert!(((s.wss + delta) - sse(&[0.0, 2.0])).abs() < 1e-12);
    }

    #[test]
    fn remove_at_centroid_is_free() {
        let s = stats_1d(&[0.0, 2.0, 4.0]);
        assert_eq!(remove_delta(&s, &[2.0]).unwrap(), 0.0);
    }

    #[test]
    fn remove_down_to_singleton() {
        let s = stats_1d(&[0.0, 2.0]);
        let delta = remove_delta(&s, &[0.0]).unwrap();
        assert!((delta + 2.0).abs() < 1e-12);
    }

    #[test]
    fn remove_from_singleton_is_a_distinct_signal() {
        let s = stats_1d(&[5.0]);
        assert!(matches!(
            remove_delta(&s, &[5.0]),
            Err(crate::Error::SingletonRemoval)
        ));
    }

    #[test]
    fn remove_never_exceeds_wss() {
        let mut rng = RandomSource::new(41);
        for _ in 0..500 {
            let n = 2 + rng.index(8);
            let points: Vec<f64> = (0..n).map(|_| rng.uniform() * 6.0).collect();
            let s = stats_1d(&points);
            let delta = remove_delta(&s, &[points[0]]).unwrap();
            assert!(delta.abs() <= s.wss + 1e-9);
        }
    }

    #[test]
    fn merge_singletons() {
        let a = stats_1d(&[0.0]);
        let b = stats_1d(&[2.0]);
        assert!((merge_delta(&a, &b) - 2.0).abs() < 1e-12);
        let (c, m) = merge_centers(&a, &b);
        assert_eq!((c, m), (vec![1.0], 2));
    }

    #[test]
    fn merge_identical_centroids_is_free() {
        let a = stats_1d(&[0.0, 2.0]);
        let b = stats_1d(&[1.0]);
        assert_eq!(merge_delta(&a, &b), 0.0);
        let (c, m) = merge_centers(&a, &b);
        assert_eq!((c, m), (vec![1.0], 3));
    }

    #[test]
    fn merge_two_squares_halves() {
        let a = ClusterStats {
            size: 4,
            centroid: vec![0.5, 0.5],
            wss: 2.0,
        };
        let b = ClusterStats {
            size: 4,
            centroid: vec![1.75, 0.5],
            wss: 2.0,
        };
        let delta = merge_delta(&a, &b);
        assert!((delta - 3.125).abs() < 1e-12, "got {delta}");
    }

    #[test]
    fn merge_weighted_center() {
        let a = ClusterStats {
            size: 3,
            centroid: vec![0.0],
            wss: 0.0,
        };
        let b = ClusterStats {
            size: 1,
            centroid: vec![4.0],
            wss: 0.0,
        };
        let (c, m) = merge_centers(&a, &b);
        assert_eq!((c, m), (vec![1.0], 4));
    }

    #[test]
    fn merge_is_exactly_symmetric() {
        let mut rng = RandomSource::new(17);
        for _ in 0..1000 {
            let d = 1 + rng.index(5);
            let a = ClusterStats {
                size: 1 + rng.index(20),
                centroid: (0..d).map(|_| rng.uniform() * 10.0 - 5.0).collect(),
                wss: 0.0,
            };
            let b = ClusterStats {
                size: 1 + rng.index(20),
                centroid: (0..d).map(|_| rng.uniform() * 10.0 - 5.0).collect(),
                wss: 0.0,
            };
            assert_eq!(merge_delta(&a, &b), merge_delta(&b, &a));
        }
    }

    #[test]
    fn add_then_remove_nets_to_zero() {
        let mut rng = RandomSource::new(29);
        for _ in 0..1000 {
            let d = 1 + rng.index(4);
            let n = 1 + rng.index(6);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.uniform() * 8.0).collect())
                .collect();
            let data = Dataset::from_rows("t", &rows).unwrap();
            let members: Vec<usize> = (0..n).collect();
            let mut stats = ClusterStats::from_members(&data, &members).unwrap();
            let p: Vec<f64> = (0..d).map(|_| rng.uniform() * 8.0).collect();

            let up = add_point(&mut stats, &p).unwrap();
            let down = remove_point(&mut stats, &p).unwrap();
            assert!((up + down).abs() <= 1e-9 * up.abs().max(1.0));
        }
    }

    #[test]
    fn delta_separates_over_dimensions() {
        let a = ClusterStats {
            size: 3,
            centroid: vec![1.0, -2.0, 0.5],
            wss: 0.0,
        };
        let p = [4.0, 0.0, 0.25];
        let whole = add_delta(&a, &p).unwrap();
        let per_dim: f64 = (0..3)
            .map(|j| {
                let s = ClusterStats {
                    size: 3,
                    centroid: vec![a.centroid[j]],
                    wss: 0.0,
                };
                add_delta(&s, &p[j..=j]).unwrap()
            })
            .sum();
        assert!((whole - per_dim).abs() < 1e-12);
    }
}
