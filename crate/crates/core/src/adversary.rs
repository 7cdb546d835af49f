//! The eavesdropper: clusters the emitted-action time series and scores how
//! well the clusters recover the private states.
//!
//! Everything here works from [`ActionTrace`]s, which carry emitted actions and
//! wall-clock slots only. Ground truth enters solely through
//! [`clustering_accuracy`], after the attack has been made.

use crate::error::{Error, Result};
use crate::rl::{ActionId, StateId};
use crate::rng::RngStream;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceSample {
    pub day: usize,
    pub slot: usize,
    pub action: ActionId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActionTrace {
    samples: Vec<TraceSample>,
}

impl ActionTrace {
    pub fn new(samples: Vec<TraceSample>) -> Result<Self> {
        for w in samples.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (b.day, b.slot) <= (a.day, a.slot) {
                return Err(Error::domain(format!(
                    "trace samples must advance in time: ({}, {}) then ({}, {})",
                    a.day, a.slot, b.day, b.slot
                )));
            }
        }
        Ok(Self { samples })
    }

    /// Trace of consecutive steps starting at step 0.
    pub fn from_steps(actions: &[ActionId], slots_per_day: usize) -> Result<Self> {
        if slots_per_day == 0 {
            return Err(Error::domain("slots_per_day must be positive"));
        }
        Self::new(
            actions
                .iter()
                .enumerate()
                .map(|(t, &action)| TraceSample {
                    day: t / slots_per_day,
                    slot: t % slots_per_day,
                    action,
                })
                .collect(),
        )
    }

    pub fn samples(&self) -> &[TraceSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// How samples become points.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    /// Slots per day; `None` drops the time-of-day axis.
    pub slots_per_day: Option<usize>,
    /// Physical value of each action index.
    pub action_values: Vec<f64>,
    /// Scale of the action axis relative to the unit clock axis.
    pub action_weight: f64,
}

/// Map samples to `(slot, action value)` points with the clock on `[0, 1]` and
/// the action on `[0, action_weight]`, or to the action axis alone when the
/// feature space has no clock.
pub fn featurize<T: Scalar>(trace: &ActionTrace, space: &FeatureSpace) -> Result<Vec<Vec<T>>> {
    if trace.is_empty() {
        return Err(Error::domain("cannot featurize an empty trace"));
    }
    let lo = space.action_values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = space.action_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain("feature space needs finite action values"));
    }
    if !(space.action_weight.is_finite() && space.action_weight > 0.0) {
        return Err(Error::domain(format!(
            "action weight {} must be positive",
            space.action_weight
        )));
    }
    let span = if hi > lo { hi - lo } else { 1.0 };
    trace
        .samples()
        .iter()
        .map(|s| {
            let value = *space.action_values.get(s.action.0).ok_or(Error::IndexOutOfRange {
                what: "action",
                index: s.action.0,
                size: space.action_values.len(),
            })?;
            let a = T::lit(space.action_weight * (value - lo) / span);
            match space.slots_per_day {
                Some(n) => {
                    let denom = n.saturating_sub(1).max(1) as f64;
                    Ok(vec![T::lit(s.slot as f64 / denom), a])
                }
                None => Ok(vec![a]),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel<T> {
    pub k: usize,
    pub centroids: Vec<Vec<T>>,
    pub assignments: Vec<usize>,
    pub wcss: T,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansOptions {
    pub restarts: usize,
    pub max_iterations: usize,
}

impl Default for KMeansOptions {
    fn default() -> Self {
        Self {
            restarts: 10,
            max_iterations: 300,
        }
    }
}

fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

fn nearest<T: Scalar>(p: &[T], centroids: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, sq_dist(p, &centroids[0]));
    for (j, c) in centroids.iter().enumerate().skip(1) {
        let d = sq_dist(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn check_points<T: Scalar>(points: &[Vec<T>], k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    if k > points.len() {
        return Err(Error::domain(format!("k = {k} exceeds the {} points", points.len())));
    }
    let dim = points[0].len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::domain("points must share a positive dimension"));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::domain("points must be finite"));
    }
    Ok(())
}

/// k-means++ seeding: first centre uniform, later ones with probability
/// proportional to the squared distance to the nearest chosen centre.
fn seed_plus_plus<T: Scalar>(points: &[Vec<T>], k: usize, rng: &mut RngStream) -> Vec<Vec<T>> {
    let mut centroids = vec![points[rng.below(points.len())].clone()];
    let mut d2: Vec<f64> = points
        .iter()
        .map(|p| sq_dist(p, &centroids[0]).to_f64_lossy())
        .collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            rng.categorical(&d2)
        } else {
            rng.below(points.len())
        };
        let c = points[pick].clone();
        for (p, d) in points.iter().zip(d2.iter_mut()) {
            *d = d.min(sq_dist(p, &c).to_f64_lossy());
        }
        centroids.push(c);
    }
    centroids
}

/// Lloyd iterations from the given centres. An emptied cluster is re-seeded at
/// the point currently farthest from its centre.
fn lloyd<T: Scalar>(points: &[Vec<T>], mut centroids: Vec<Vec<T>>, max_iterations: usize) -> ClusterModel<T> {
    let k = centroids.len();
    let dim = points[0].len();
    let mut assignments = vec![usize::MAX; points.len()];
    let mut iterations = 0;
    loop {
        let mut changed = false;
        for (p, slot) in points.iter().zip(assignments.iter_mut()) {
            let (j, _) = nearest(p, &centroids);
            if *slot != j {
                *slot = j;
                changed = true;
            }
        }
        if !changed || iterations >= max_iterations {
            break;
        }
        iterations += 1;
        let mut sums = vec![vec![T::zero(); dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &j) in points.iter().zip(&assignments) {
            counts[j] += 1;
            for (s, &v) in sums[j].iter_mut().zip(p) {
                *s += v;
            }
        }
        for j in 0..k {
            if counts[j] > 0 {
                let n = T::from_usize_lossy(counts[j]);
                centroids[j] = sums[j].iter().map(|&s| s / n).collect();
            }
        }
        for j in 0..k {
            if counts[j] == 0 {
                let far = points
                    .iter()
                    .zip(&assignments)
                    .enumerate()
                    .max_by(|(ia, (pa, &ja)), (ib, (pb, &jb))| {
                        let da = sq_dist(pa, &centroids[ja]);
                        let db = sq_dist(pb, &centroids[jb]);
                        da.partial_cmp(&db).unwrap().then(ib.cmp(ia))
                    })
                    .map(|(i, _)| i)
                    .unwrap();
                centroids[j] = points[far].clone();
                assignments[far] = j;
            }
        }
    }
    let wcss = points
        .iter()
        .zip(&assignments)
        .map(|(p, &j)| sq_dist(p, &centroids[j]))
        .sum();
    ClusterModel {
        k,
        centroids,
        assignments,
        wcss,
        iterations,
    }
}

/// Best of `options.restarts` k-means++ / Lloyd runs by WCSS; the earliest
/// restart wins ties.
pub fn kmeans_with<T: Scalar>(
    points: &[Vec<T>],
    k: usize,
    options: KMeansOptions,
    rng: &mut RngStream,
) -> Result<ClusterModel<T>> {
    check_points(points, k)?;
    let mut best: Option<ClusterModel<T>> = None;
    for _ in 0..options.restarts.max(1) {
        let model = lloyd(points, seed_plus_plus(points, k, rng), options.max_iterations);
        if best.as_ref().is_none_or(|b| model.wcss < b.wcss) {
            best = Some(model);
        }
    }
    Ok(best.expect("at least one restart"))
}

pub fn kmeans<T: Scalar>(points: &[Vec<T>], k: usize, rng: &mut RngStream) -> Result<ClusterModel<T>> {
    kmeans_with(points, k, KMeansOptions::default(), rng)
}

/// Best models for `k = 1..=k_max` (capped at the point count).
///
/// Besides the random restarts, each `k > 1` also tries the best `k − 1`
/// solution plus the worst-fitted point as an extra centre. Lloyd never
/// increases WCSS, so the returned curve is non-increasing in `k`.
pub fn wcss_models<T: Scalar>(
    points: &[Vec<T>],
    k_max: usize,
    options: KMeansOptions,
    rng: &mut RngStream,
) -> Result<Vec<ClusterModel<T>>> {
    check_points(points, 1)?;
    let k_max = k_max.min(points.len());
    let mut models: Vec<ClusterModel<T>> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut best = kmeans_with(points, k, options, rng)?;
        if let Some(prev) = models.last() {
            let far = points
                .iter()
                .zip(&prev.assignments)
                .enumerate()
                .max_by(|(ia, (pa, &ja)), (ib, (pb, &jb))| {
                    let da = sq_dist(pa, &prev.centroids[ja]);
                    let db = sq_dist(pb, &prev.centroids[jb]);
                    da.partial_cmp(&db).unwrap().then(ib.cmp(ia))
                })
                .map(|(i, _)| i)
                .unwrap();
            let mut centroids = prev.centroids.clone();
            centroids.push(points[far].clone());
            let warm = lloyd(points, centroids, options.max_iterations);
            if warm.wcss < best.wcss {
                best = warm;
            }
        }
        models.push(best);
    }
    Ok(models)
}

/// Elbow of a WCSS curve (`wcss[i]` is WCSS at `k = i + 1`).
///
/// Picks the interior `k` with the largest second difference
/// `W(k−1) − 2·W(k) + W(k+1)`, smaller `k` on ties. Returns 1 when the data
/// has no spread, or when splitting in two removes less than
/// `single_cluster_drop` of the total WCSS.
pub fn elbow_from_curve<T: Scalar>(wcss: &[T], single_cluster_drop: T) -> usize {
    let Some(&w1) = wcss.first() else {
        return 1;
    };
    if w1 <= T::lit(1e-12) || wcss.len() < 3 {
        return 1;
    }
    if (w1 - wcss[1]) < single_cluster_drop * w1 {
        return 1;
    }
    let mut best_k = 2;
    let mut best = T::neg_infinity();
    for k in 2..wcss.len() {
        let d2 = wcss[k - 2] - T::lit(2.0) * wcss[k - 1] + wcss[k];
        if d2 > best {
            best = d2;
            best_k = k;
        }
    }
    best_k
}

/// Default relative WCSS drop below which the data counts as one cluster.
pub const SINGLE_CLUSTER_DROP: f64 = 0.4;

/// Elbow `k` over `1..=k_max` and the WCSS curve it was read from.
pub fn elbow_k<T: Scalar>(
    points: &[Vec<T>],
    k_max: usize,
    rng: &mut RngStream,
) -> Result<(usize, Vec<ClusterModel<T>>)> {
    if k_max < 3 {
        return Err(Error::domain("elbow search needs k_max >= 3"));
    }
    let models = wcss_models(points, k_max, KMeansOptions::default(), rng)?;
    let curve: Vec<T> = models.iter().map(|m| m.wcss).collect();
    Ok((elbow_from_curve(&curve, T::lit(SINGLE_CLUSTER_DROP)), models))
}

/// Maximum-weight assignment on a square matrix (Hungarian algorithm).
/// Returns `row → column`.
pub fn max_weight_assignment(weights: &[Vec<i64>]) -> Vec<usize> {
    let n = weights.len();
    if n == 0 {
        return Vec::new();
    }
    // Minimise the negated weights; potentials-based O(n³) form with 1-based
    // helper arrays.
    let cost = |i: usize, j: usize| -weights[i][j];
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    row_to_col
}

/// Fraction of samples whose cluster maps to their true state under the best
/// one-to-one cluster → state mapping. Clusters left without a state count as
/// wrong.
pub fn clustering_accuracy<T: Scalar>(assignments: &[usize], truth: &[StateId]) -> Result<T> {
    if assignments.len() != truth.len() {
        return Err(Error::domain(format!(
            "{} assignments but {} labels",
            assignments.len(),
            truth.len()
        )));
    }
    if truth.is_empty() {
        return Err(Error::domain("accuracy of an empty labelling"));
    }
    let clusters = assignments.iter().max().map_or(0, |&m| m + 1);
    let labels = truth.iter().map(|s| s.0).max().map_or(0, |m| m + 1);
    let n = clusters.max(labels);
    let mut table = vec![vec![0i64; n]; n];
    for (&c, s) in assignments.iter().zip(truth) {
        table[c][s.0] += 1;
    }
    let mapping = max_weight_assignment(&table);
    // Padding rows/columns hold zeros, so matches with them add nothing.
    let hits: i64 = mapping.iter().enumerate().map(|(c, &l)| table[c][l]).sum();
    Ok(T::from_usize_lossy(hits as usize) / T::from_usize_lossy(truth.len()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackOptions {
    pub k_max: usize,
    /// Use this many clusters instead of the elbow.
    pub fixed_k: Option<usize>,
    pub kmeans: KMeansOptions,
    pub action_weight: f64,
}

impl Default for AttackOptions {
    fn default() -> Self {
        Self {
            k_max: 8,
            fixed_k: None,
            kmeans: KMeansOptions::default(),
            action_weight: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attack {
    pub elbow_k: usize,
    pub wcss: Vec<f64>,
    pub model: ClusterModel<f64>,
    /// Best model for each `k` in `1..=k_max`.
    pub models: Vec<ClusterModel<f64>>,
}

impl Attack {
    pub fn model_for(&self, k: usize) -> Option<&ClusterModel<f64>> {
        self.models.get(k.checked_sub(1)?)
    }
}

/// Cluster a trace the way the eavesdropper would: WCSS curve over
/// `1..=k_max`, elbow choice of `k`, and the model for that `k`.
pub fn attack(
    trace: &ActionTrace,
    space: &FeatureSpace,
    options: &AttackOptions,
    rng: &mut RngStream,
) -> Result<Attack> {
    let points = featurize::<f64>(trace, space)?;
    let k_max = options.k_max.max(options.fixed_k.unwrap_or(0));
    let models = wcss_models(&points, k_max, options.kmeans, rng)?;
    let wcss: Vec<f64> = models.iter().map(|m| m.wcss).collect();
    let elbow = elbow_from_curve(&wcss, SINGLE_CLUSTER_DROP);
    let k = options.fixed_k.unwrap_or(elbow).min(models.len());
    Ok(Attack {
        elbow_k: elbow,
        wcss,
        model: models[k - 1].clone(),
        models,
    })
}
