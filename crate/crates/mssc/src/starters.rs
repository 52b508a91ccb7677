//! Starting-solution generators. Three are the point of this crate —
//! agglomerative merging, two-phase construction, and separation — plus the
//! usual baselines (random partition, random points, k-means++ seeding).
//!
//! Scan orders are deterministic everywhere (ascending cluster id,
//! ascending point id), so a run with `alpha = 1` and GRASP disabled is
//! bit-reproducible.

use crate::core::{centroid, sq_dist, CenterSet, ClusterStats, Dataset, Solution};
use crate::core::{solution_from_assignment, Assignment};
use crate::grasp::{reservoir_select, top2_select, AlphaRule, RandomSource};
use crate::improve::{hybrid_improve, ImproveConfig};
use crate::incremental::{
    add_delta, add_point, merge_centers, merge_centers_parts, merge_delta, merge_delta_parts,
};
use crate::{Error, Result};

/// Which starting-solution generator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarterKind {
    Merging,
    MergingBasic,
    Construction,
    Separation,
    RandomPartition,
    RandomPoints,
    KmeansPlusPlus,
}

impl std::str::FromStr for StarterKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "merging" => Ok(StarterKind::Merging),
            "merging-basic" => Ok(StarterKind::MergingBasic),
            "construction" => Ok(StarterKind::Construction),
            "separation" => Ok(StarterKind::Separation),
            "random-partition" => Ok(StarterKind::RandomPartition),
            "random-points" => Ok(StarterKind::RandomPoints),
            "kmeanspp" => Ok(StarterKind::KmeansPlusPlus),
            other => Err(Error::Config(format!("unknown starter '{other}'"))),
        }
    }
}

impl std::fmt::Display for StarterKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StarterKind::Merging => "merging",
            StarterKind::MergingBasic => "merging-basic",
            StarterKind::Construction => "construction",
            StarterKind::Separation => "separation",
            StarterKind::RandomPartition => "random-partition",
            StarterKind::RandomPoints => "random-points",
            StarterKind::KmeansPlusPlus => "kmeanspp",
        };
        f.write_str(s)
    }
}

/// A starter plus the knobs it needs. `alpha` only matters for the merging
/// kinds, `grasp_enabled` for construction and separation.
#[derive(Debug, Clone, Copy)]
pub struct StarterConfig {
    pub kind: StarterKind,
    pub alpha: AlphaRule,
    pub grasp_enabled: bool,
    pub seed: u64,
}

impl StarterConfig {
    pub fn new(kind: StarterKind) -> Self {
        StarterConfig {
            kind,
            alpha: AlphaRule::default(),
            grasp_enabled: true,
            seed: 0,
        }
    }

    /// Runs the configured starter with a fresh stream from `self.seed`.
    pub fn start(&self, dataset: &Dataset, k: usize) -> Result<CenterSet> {
        let mut rng = RandomSource::new(self.seed);
        self.start_with(dataset, k, &mut rng)
    }

    /// Runs the configured starter on a caller-owned stream (the form the
    /// multi-start harness uses).
    pub fn start_with(
        &self,
        dataset: &Dataset,
        k: usize,
        rng: &mut RandomSource,
    ) -> Result<CenterSet> {
        match self.kind {
            StarterKind::Merging => merging_start(dataset, k, self.alpha, rng),
            StarterKind::MergingBasic => merging_start_basic(dataset, k, self.alpha, rng),
            StarterKind::Construction => {
                Ok(construction_start(dataset, k, self.grasp_enabled, rng)?.centers())
            }
            StarterKind::Separation => separation_start(dataset, k, self.grasp_enabled, rng),
            StarterKind::RandomPartition => {
                baseline_start(dataset, k, BaselineKind::RandomPartition, rng)
            }
            StarterKind::RandomPoints => {
                baseline_start(dataset, k, BaselineKind::RandomPoints, rng)
            }
            StarterKind::KmeansPlusPlus => {
                baseline_start(dataset, k, BaselineKind::KmeansPlusPlus, rng)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Merging
// ---------------------------------------------------------------------------

const DEAD: usize = usize::MAX;

/// One live cluster of the merging process. Only the size and centroid are
/// kept; member lists are never needed. `best_delta`/`best_partner` cache
/// the cheapest merge seen for this cluster and who provides it.
#[derive(Debug, Clone)]
struct MergeCluster {
    id: usize,
    size: usize,
    centroid: Vec<f64>,
    best_delta: f64,
    best_partner: usize,
    evaluated: bool,
}

/// The cache of cheapest merges, with O(1) removal by swap-with-last.
/// Cluster ids are stable across removals; the merged cluster keeps the id
/// of the cluster it replaced.
struct MergeCache {
    clusters: Vec<MergeCluster>,
    pos_of_id: Vec<usize>,
    id_limit: usize,
}

impl MergeCache {
    fn from_singletons(dataset: &Dataset) -> Self {
        let n = dataset.n();
        let clusters = (0..n)
            .map(|i| MergeCluster {
                id: i,
                size: 1,
                centroid: dataset.point(i).to_vec(),
                best_delta: f64::INFINITY,
                best_partner: DEAD,
                evaluated: false,
            })
            .collect();
        MergeCache {
            clusters,
            pos_of_id: (0..n).collect(),
            id_limit: n,
        }
    }

    fn live(&self) -> usize {
        self.clusters.len()
    }

    fn get(&self, id: usize) -> &MergeCluster {
        &self.clusters[self.pos_of_id[id]]
    }

    fn get_mut(&mut self, id: usize) -> &mut MergeCluster {
        &mut self.clusters[self.pos_of_id[id]]
    }

    fn is_live(&self, id: usize) -> bool {
        id < self.id_limit && self.pos_of_id[id] != DEAD
    }

    fn live_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.id_limit).filter(|&id| self.pos_of_id[id] != DEAD)
    }

    fn remove(&mut self, id: usize) {
        let pos = self.pos_of_id[id];
        self.pos_of_id[id] = DEAD;
        self.clusters.swap_remove(pos);
        if pos < self.clusters.len() {
            let moved = self.clusters[pos].id;
            self.pos_of_id[moved] = pos;
        }
    }

    /// Merge increase between two live clusters.
    fn delta_between(&self, a: usize, b: usize) -> f64 {
        let ca = self.get(a);
        let cb = self.get(b);
        merge_delta_parts(ca.size, &ca.centroid, cb.size, &cb.centroid)
    }

    /// Cheapest merge for `id` over all other live clusters, scanning ids
    /// in ascending order (first minimum wins). Returns `(delta, partner)`.
    fn cheapest_for(&self, id: usize) -> (f64, usize) {
        let mut best = f64::INFINITY;
        let mut partner = DEAD;
        for other_id in self.live_ids() {
            if other_id == id {
                continue;
            }
            let delta = self.delta_between(id, other_id);
            if delta < best {
                best = delta;
                partner = other_id;
            }
        }
        (best, partner)
    }

    /// Merges `other` into `keep` without touching the centroid (used when
    /// the two centroids already coincide) and removes `other`.
    fn absorb_coincident(&mut self, keep: usize, other: usize) {
        let extra = self.get(other).size;
        self.remove(other);
        let cluster = self.get_mut(keep);
        cluster.size += extra;
        cluster.evaluated = false;
    }

    /// Merges `partner` into `keep` with the weighted-mean center and
    /// removes `partner`.
    fn merge_into(&mut self, keep: usize, partner: usize) {
        let a = self.get(keep);
        let b = self.get(partner);
        let (new_centroid, new_size) =
            merge_centers_parts(a.size, &a.centroid, b.size, &b.centroid);
        self.remove(partner);
        let cluster = self.get_mut(keep);
        cluster.centroid = new_centroid;
        cluster.size = new_size;
        cluster.evaluated = false;
    }

    /// After `merged_id` absorbed `removed_id`, restore every other
    /// evaluated cluster's cached cheapest merge: a cheaper merge with the
    /// new cluster replaces the cache entry, and entries that pointed at
    /// either merged cluster are recomputed from scratch.
    fn repair_others(&mut self, merged_id: usize, removed_id: usize) {
        let ids: Vec<usize> = self.live_ids().collect();
        for id in ids {
            if id == merged_id || !self.get(id).evaluated {
                continue;
            }
            let delta = self.delta_between(id, merged_id);
            let entry = self.get_mut(id);
            if delta < entry.best_delta {
                entry.best_delta = delta;
                entry.best_partner = merged_id;
            } else if entry.best_partner == merged_id || entry.best_partner == removed_id {
                let (best, partner) = self.cheapest_for(id);
                let entry = self.get_mut(id);
                entry.best_delta = best;
                entry.best_partner = partner;
            }
        }
    }

    /// Full cache repair after a main-loop merge: everyone else first,
    /// then the merged cluster's own entry from scratch.
    fn repair_after_merge(&mut self, merged_id: usize, removed_id: usize) {
        self.repair_others(merged_id, removed_id);
        let (best, partner) = self.cheapest_for(merged_id);
        let entry = self.get_mut(merged_id);
        entry.best_delta = best;
        entry.best_partner = partner;
        entry.evaluated = true;
    }

    /// Full consistency check of every evaluated cache entry against a
    /// from-scratch recomputation. Test hook.
    #[cfg(test)]
    fn validate(&self) {
        if self.live() < 2 {
            return;
        }
        for id in self.live_ids() {
            let cluster = self.get(id);
            if !cluster.evaluated {
                continue;
            }
            let (best, _) = self.cheapest_for(id);
            let cached = cluster.best_delta;
            let scale = best.abs().max(1.0);
            assert!(
                (cached - best).abs() <= 1e-9 * scale,
                "cluster {id}: cached {cached}, recomputed {best}"
            );
            assert!(
                self.is_live(cluster.best_partner),
                "cluster {id}: dead partner"
            );
            let attained = self.delta_between(id, cluster.best_partner);
            assert!(
                (cached - attained).abs() <= 1e-9 * scale,
                "cluster {id}: partner does not attain the cached delta"
            );
        }
    }

    fn centers(&self) -> CenterSet {
        let rows: Vec<Vec<f64>> = self
            .live_ids()
            .map(|id| self.get(id).centroid.clone())
            .collect();
        CenterSet::from_rows(&rows).expect("at least one live cluster")
    }
}

/// Runs the cache invariant check in test builds when asked to.
fn validate_cache(cache: &MergeCache, enabled: bool) {
    #[cfg(test)]
    if enabled {
        cache.validate();
    }
    #[cfg(not(test))]
    let _ = (cache, enabled);
}

/// Agglomerative merging with the cached cheapest-merge table. Starts from
/// `n` singletons. The initialization pass computes each cluster's
/// cheapest merge in ascending id order and immediately absorbs any
/// zero-increase partner (coincident centroids), restarting that cluster's
/// scan from the lowest id. The main loop then repeatedly GRASP-selects a
/// cluster by its cached delta, merges it with its partner, and repairs
/// the cache, until `k` clusters remain. Their centroids are returned.
pub fn merging_start(
    dataset: &Dataset,
    k: usize,
    alpha: AlphaRule,
    rng: &mut RandomSource,
) -> Result<CenterSet> {
    merging_start_impl(dataset, k, alpha, rng, false)
}

fn merging_start_impl(
    dataset: &Dataset,
    k: usize,
    alpha: AlphaRule,
    rng: &mut RandomSource,
    validate: bool,
) -> Result<CenterSet> {
    let n = dataset.n();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let mut cache = MergeCache::from_singletons(dataset);
    if cache.live() == k {
        return Ok(cache.centers());
    }

    // Initialization: cheapest merge per cluster, with immediate
    // absorption of zero-increase pairs (coincident centroids). After an
    // absorption the revised cluster rescans from the lowest id.
    for id in 0..n {
        if cache.live() == k {
            return Ok(cache.centers());
        }
        if !cache.is_live(id) {
            continue;
        }
        'evaluate: loop {
            let mut best = f64::INFINITY;
            let mut partner = DEAD;
            let others: Vec<usize> = cache.live_ids().filter(|&o| o != id).collect();
            for other_id in others {
                let delta = cache.delta_between(id, other_id);
                if delta == 0.0 {
                    cache.absorb_coincident(id, other_id);
                    cache.repair_others(id, other_id);
                    validate_cache(&cache, validate);
                    if cache.live() == k {
                        return Ok(cache.centers());
                    }
                    continue 'evaluate;
                }
                if delta < best {
                    best = delta;
                    partner = other_id;
                }
            }
            let entry = cache.get_mut(id);
            entry.best_delta = best;
            entry.best_partner = partner;
            entry.evaluated = true;
            break;
        }
    }
    validate_cache(&cache, validate);

    // Main loop: GRASP-select by cached delta, merge, repair.
    while cache.live() > k {
        let candidates: Vec<(usize, f64)> = cache
            .live_ids()
            .map(|id| (id, cache.get(id).best_delta))
            .collect();
        let selected = reservoir_select(candidates, alpha, rng)?;
        let partner = cache.get(selected).best_partner;
        cache.merge_into(selected, partner);
        cache.repair_after_merge(selected, partner);
        validate_cache(&cache, validate);
    }
    Ok(cache.centers())
}

/// Reference form of the merging starter: every step rescans all cluster
/// pairs (`i < j`, lexicographic) for the cheapest merge, stopping the
/// scan early when a zero-increase pair turns up. Much slower than
/// [`merging_start`]; kept as its oracle.
pub fn merging_start_basic(
    dataset: &Dataset,
    k: usize,
    alpha: AlphaRule,
    rng: &mut RandomSource,
) -> Result<CenterSet> {
    let n = dataset.n();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let mut clusters: Vec<ClusterStats> = (0..n)
        .map(|i| ClusterStats::singleton(dataset.point(i)))
        .collect();

    while clusters.len() > k {
        let mut selected: Option<(usize, usize)> = None;
        let mut best = f64::INFINITY;
        let mut r = 1u64;
        'scan: for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let delta = merge_delta(&clusters[i], &clusters[j]);
                if delta < best {
                    best = delta;
                    selected = Some((i, j));
                    r = 1;
                    if delta == 0.0 {
                        break 'scan;
                    }
                } else if delta < alpha.alpha() * best {
                    r += 1;
                    if rng.chance(1.0 / r as f64) {
                        selected = Some((i, j));
                    }
                }
            }
        }
        let (i, j) = selected.expect("at least one pair while more than k clusters remain");
        let (new_centroid, new_size) = if best == 0.0 {
            (
                clusters[i].centroid.clone(),
                clusters[i].size + clusters[j].size,
            )
        } else {
            merge_centers(&clusters[i], &clusters[j])
        };
        clusters[i].centroid = new_centroid;
        clusters[i].size = new_size;
        clusters.swap_remove(j);
    }

    let rows: Vec<Vec<f64>> = clusters.iter().map(|c| c.centroid.clone()).collect();
    CenterSet::from_rows(&rows)
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// Two-phase construction. Phase 1 seeds `k` clusters: two random points,
/// then repeatedly the point whose distance to the nearest seed is largest
/// (or second largest under GRASP). Phase 2 repeatedly commits the
/// globally cheapest (or second cheapest under GRASP) point-to-cluster
/// insertion until everything is assigned. The transfer descent that
/// completes the original three-phase scheme lives in the improvement
/// module.
pub fn construction_start(
    dataset: &Dataset,
    k: usize,
    grasp: bool,
    rng: &mut RandomSource,
) -> Result<Solution> {
    let n = dataset.n();
    if k < 2 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let pair = rng.distinct_pair(n);
    construction_start_from_pair(dataset, k, pair, grasp, rng)
}

/// [`construction_start`] with the two Phase-1 seed points pinned by the
/// caller. Useful for reproducing a specific run.
pub fn construction_start_from_pair(
    dataset: &Dataset,
    k: usize,
    first_pair: (usize, usize),
    grasp: bool,
    rng: &mut RandomSource,
) -> Result<Solution> {
    let n = dataset.n();
    if k < 2 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let (a, b) = first_pair;
    if a == b || a >= n || b >= n {
        return Err(Error::Config(format!(
            "invalid seed pair ({a}, {b}) for n={n}"
        )));
    }

    // Phase 1: farthest-point seeding.
    let mut seed_of_point = vec![usize::MAX; n];
    let mut nearest_seed_dist = vec![f64::INFINITY; n];
    let mut seeds = Vec::with_capacity(k);
    let add_seed = |point: usize, seeds: &mut Vec<usize>, nearest: &mut Vec<f64>| {
        seeds.push(point);
        for (i, entry) in nearest.iter_mut().enumerate() {
            let dist = sq_dist(dataset.point(i), dataset.point(point));
            if dist < *entry {
                *entry = dist;
            }
        }
    };
    add_seed(a, &mut seeds, &mut nearest_seed_dist);
    add_seed(b, &mut seeds, &mut nearest_seed_dist);
    seed_of_point[a] = 0;
    seed_of_point[b] = 1;

    while seeds.len() < k {
        let mut best: Option<(usize, f64)> = None;
        let mut second: Option<(usize, f64)> = None;
        for i in 0..n {
            if seed_of_point[i] != usize::MAX {
                continue;
            }
            let value = nearest_seed_dist[i];
            if best.is_none_or(|(_, v)| value > v) {
                second = best;
                best = Some((i, value));
            } else if second.is_none_or(|(_, v)| value > v) {
                second = Some((i, value));
            }
        }
        let best = best.expect("fewer seeds than points");
        let chosen = if grasp {
            top2_select(best, second, rng).0
        } else {
            best.0
        };
        seed_of_point[chosen] = seeds.len();
        add_seed(chosen, &mut seeds, &mut nearest_seed_dist);
    }

    // Phase 2: cheapest insertion, one commitment per scan.
    let mut labels = vec![usize::MAX; n];
    let mut stats: Vec<ClusterStats> = Vec::with_capacity(k);
    for (cluster, &s) in seeds.iter().enumerate() {
        labels[s] = cluster;
        stats.push(ClusterStats::singleton(dataset.point(s)));
    }
    let mut unassigned = n - k;
    while unassigned > 0 {
        let mut best: Option<(usize, usize, f64)> = None;
        let mut second: Option<(usize, usize, f64)> = None;
        for (i, &label) in labels.iter().enumerate() {
            if label != usize::MAX {
                continue;
            }
            let point = dataset.point(i);
            for (cluster, stat) in stats.iter().enumerate() {
                let delta = add_delta(stat, point)?;
                if best.is_none_or(|(_, _, d)| delta < d) {
                    second = best;
                    best = Some((i, cluster, delta));
                } else if second.is_none_or(|(_, _, d)| delta < d) {
                    second = Some((i, cluster, delta));
                }
            }
        }
        let best = best.expect("an unassigned point remains");
        let (point, cluster, _) = if grasp {
            top2_select(best, second, rng)
        } else {
            best
        };
        add_point(&mut stats[cluster], dataset.point(point))?;
        labels[point] = cluster;
        unassigned -= 1;
    }

    // Full rebuild so the returned stats carry no incremental drift.
    let assignment = Assignment::new(labels, k)?;
    solution_from_assignment(dataset, assignment, k)
}

// ---------------------------------------------------------------------------
// Separation
// ---------------------------------------------------------------------------

/// Number of sub-problems the separation starter solves first:
/// `floor(1.3 * sqrt(k))`.
pub fn choose_q(k: usize) -> usize {
    (1.3 * (k as f64).sqrt()).floor() as usize
}

/// Separation: solve a `q`-cluster problem, split the points by that
/// solution, allocate the `k` centers among the `q` subsets in proportion
/// to their sizes, then solve each subset for its allocated count. Subsets
/// allocated one center are solved by their centroid directly. Falls back
/// to construction when `k` is too small for the scheme (`k < 3`, or
/// `q < 2`, or `q >= k`) or when the allocation cannot be balanced.
pub fn separation_start(
    dataset: &Dataset,
    k: usize,
    grasp: bool,
    rng: &mut RandomSource,
) -> Result<CenterSet> {
    let n = dataset.n();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let q = choose_q(k);
    if k < 3 || q < 2 || q >= k {
        return Ok(construction_start(dataset, k, grasp, rng)?.centers());
    }

    let improver = ImproveConfig::default();
    let coarse = construction_start(dataset, q, grasp, rng)?;
    let coarse = hybrid_improve(dataset, &coarse.centers(), &improver)?;

    let mut subsets: Vec<Vec<usize>> = vec![Vec::new(); q];
    for (i, &label) in coarse.assignment.labels().iter().enumerate() {
        subsets[label].push(i);
    }
    let sizes: Vec<usize> = subsets.iter().map(Vec::len).collect();
    let wss: Vec<f64> = coarse.stats.iter().map(|s| s.wss).collect();

    let Some(allocation) = allocate_centers(&sizes, &wss, n, k) else {
        return Ok(construction_start(dataset, k, grasp, rng)?.centers());
    };

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (s, subset) in subsets.iter().enumerate() {
        let count = allocation[s];
        if count == 1 {
            let sub = dataset.subset(format!("{}#{s}", dataset.name()), subset)?;
            rows.push(centroid(&sub, &(0..sub.n()).collect::<Vec<_>>())?);
            continue;
        }
        let sub = dataset.subset(format!("{}#{s}", dataset.name()), subset)?;
        let start = construction_start(&sub, count, grasp, rng)?;
        let solved = hybrid_improve(&sub, &start.centers(), &improver)?;
        rows.extend(solved.stats.iter().map(|st| st.centroid.clone()));
    }
    debug_assert_eq!(rows.len(), k);
    CenterSet::from_rows(&rows)
}

/// Proportional center allocation: `max(1, round(k * n_s / n))` per
/// subset, clamped to the subset size, then repaired to sum exactly `k` by
/// decrementing the subsets with the smallest wss-per-center and
/// incrementing those with the largest. Returns `None` when no balanced
/// allocation exists.
fn allocate_centers(sizes: &[usize], wss: &[f64], n: usize, k: usize) -> Option<Vec<usize>> {
    let mut alloc: Vec<usize> = sizes
        .iter()
        .map(|&m| {
            let ideal = (k as f64 * m as f64 / n as f64).round() as usize;
            ideal.clamp(1, m)
        })
        .collect();
    let mut total: usize = alloc.iter().sum();

    while total > k {
        let candidate = (0..alloc.len())
            .filter(|&s| alloc[s] > 1)
            .min_by(|&a, &b| {
                let pa = wss[a] / alloc[a] as f64;
                let pb = wss[b] / alloc[b] as f64;
                pa.partial_cmp(&pb).unwrap()
            })?;
        alloc[candidate] -= 1;
        total -= 1;
    }
    while total < k {
        let candidate = (0..alloc.len())
            .filter(|&s| alloc[s] < sizes[s])
            .max_by(|&a, &b| {
                let pa = wss[a] / alloc[a] as f64;
                let pb = wss[b] / alloc[b] as f64;
                pa.partial_cmp(&pb).unwrap()
            })?;
        alloc[candidate] += 1;
        total += 1;
    }
    Some(alloc)
}

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// Uniform random labels, repaired so every cluster is non-empty;
    /// centers are the cluster centroids.
    RandomPartition,
    /// `k` distinct points chosen uniformly (Forgy-style).
    RandomPoints,
    /// k-means++ seeding: each new center is a point drawn with
    /// probability proportional to its squared distance to the nearest
    /// chosen center.
    KmeansPlusPlus,
}

/// Baseline initializers used for comparison runs.
pub fn baseline_start(
    dataset: &Dataset,
    k: usize,
    kind: BaselineKind,
    rng: &mut RandomSource,
) -> Result<CenterSet> {
    let n = dataset.n();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    match kind {
        BaselineKind::RandomPartition => {
            let mut labels: Vec<usize> = (0..n).map(|_| rng.index(k)).collect();
            let mut sizes = vec![0usize; k];
            for &l in &labels {
                sizes[l] += 1;
            }
            for empty in 0..k {
                if sizes[empty] > 0 {
                    continue;
                }
                let donors: Vec<usize> = (0..n).filter(|&i| sizes[labels[i]] >= 2).collect();
                let pick = donors[rng.index(donors.len())];
                sizes[labels[pick]] -= 1;
                labels[pick] = empty;
                sizes[empty] += 1;
            }
            let assignment = Assignment::new(labels, k)?;
            let solution = solution_from_assignment(dataset, assignment, k)?;
            Ok(solution.centers())
        }
        BaselineKind::RandomPoints => {
            // Partial Fisher-Yates over the index range.
            let mut indices: Vec<usize> = (0..n).collect();
            let mut rows = Vec::with_capacity(k);
            for step in 0..k {
                let j = step + rng.index(n - step);
                indices.swap(step, j);
                rows.push(dataset.point(indices[step]).to_vec());
            }
            CenterSet::from_rows(&rows)
        }
        BaselineKind::KmeansPlusPlus => {
            let first = rng.index(n);
            kmeanspp_from_first(dataset, k, first, rng)
        }
    }
}

/// k-means++ seeding with the first center pinned.
pub(crate) fn kmeanspp_from_first(
    dataset: &Dataset,
    k: usize,
    first: usize,
    rng: &mut RandomSource,
) -> Result<CenterSet> {
    fn add_center(
        dataset: &Dataset,
        point: usize,
        chosen: &mut [bool],
        rows: &mut Vec<Vec<f64>>,
        nearest: &mut [f64],
    ) {
        chosen[point] = true;
        rows.push(dataset.point(point).to_vec());
        for (i, entry) in nearest.iter_mut().enumerate() {
            let dist = sq_dist(dataset.point(i), dataset.point(point));
            if dist < *entry {
                *entry = dist;
            }
        }
    }

    let n = dataset.n();
    let mut chosen = vec![false; n];
    let mut rows = Vec::with_capacity(k);
    let mut nearest = vec![f64::INFINITY; n];
    add_center(dataset, first, &mut chosen, &mut rows, &mut nearest);

    while rows.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.uniform() * total;
            let mut pick = None;
            for (i, &w) in nearest.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                target -= w;
                if target < 0.0 {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave a sliver: fall back to the last weighted
            // point.
            pick.unwrap_or_else(|| {
                nearest
                    .iter()
                    .enumerate()
                    .rev()
                    .find(|(_, &w)| w > 0.0)
                    .map(|(i, _)| i)
                    .expect("total weight was positive")
            })
        } else {
            // All remaining points coincide with chosen centers; pick an
            // unchosen index uniformly.
            let unchosen: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            unchosen[rng.index(unchosen.len())]
        };
        add_center(dataset, pick, &mut chosen, &mut rows, &mut nearest);
    }
    CenterSet::from_rows(&rows)
}
