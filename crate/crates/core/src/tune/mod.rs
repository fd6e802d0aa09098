//! Interval tuning by iterated racing.
//!
//! [`race_tune`] looks for one tail `(p_2, …, p_d)` that does well for every
//! set size in `[n_lo, n_hi]`. Candidates are compared by their mean rank over
//! the instances (set sizes) they were evaluated on. The budget counts
//! (configuration, instance) evaluations; repeated pairs are served from a
//! cache and cost nothing.

mod stats;

pub use stats::{friedman, mean_ranks, ranks, FriedmanOutcome};

use std::collections::BTreeMap;
use std::io::Write;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::optimize::{kronecker_objective, sanitize, DEFAULT_BOUNDS};
use crate::{Error, Result};

pub const DEFAULT_ELIM_ALPHA: f64 = 0.05;
pub const DEFAULT_ELITES: usize = 3;
pub const DEFAULT_MIN_INSTANCES: usize = 5;
pub const DEFAULT_SAMPLED_INSTANCES: usize = 20;
pub const DEFAULT_D: usize = 3;
const MIN_SPREAD: f64 = 0.01;

/// Instance sizes a scenario races on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Instances {
    /// These sizes, in any order.
    Explicit(Vec<usize>),
    /// This many distinct sizes drawn uniformly from the interval.
    Sampled(usize),
}

impl Default for Instances {
    fn default() -> Self {
        Instances::Sampled(DEFAULT_SAMPLED_INSTANCES)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningScenario {
    pub n_lo: usize,
    pub n_hi: usize,
    #[serde(default)]
    pub instances: Instances,
    /// Total (configuration, instance) evaluations.
    pub budget_pairs: usize,
    pub seed: u64,
    #[serde(default = "default_alpha")]
    pub elim_alpha: f64,
    #[serde(default = "default_elites")]
    pub elites: usize,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default = "default_min_instances")]
    pub min_instances: usize,
}

fn default_alpha() -> f64 {
    DEFAULT_ELIM_ALPHA
}
fn default_elites() -> usize {
    DEFAULT_ELITES
}
fn default_d() -> usize {
    DEFAULT_D
}
fn default_min_instances() -> usize {
    DEFAULT_MIN_INSTANCES
}

impl TuningScenario {
    pub fn new(n_lo: usize, n_hi: usize, budget_pairs: usize, seed: u64) -> Self {
        Self {
            n_lo,
            n_hi,
            instances: Instances::default(),
            budget_pairs,
            seed,
            elim_alpha: DEFAULT_ELIM_ALPHA,
            elites: DEFAULT_ELITES,
            d: DEFAULT_D,
            min_instances: DEFAULT_MIN_INSTANCES,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Self = serde_json::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.n_lo < 5 || self.n_lo > self.n_hi {
            return fail(format!(
                "need 5 <= n_lo <= n_hi, got [{}, {}]",
                self.n_lo, self.n_hi
            ));
        }
        if !(2..=4).contains(&self.d) {
            return fail(format!("d must be in 2..=4, got {}", self.d));
        }
        if self.elites == 0 {
            return fail("elites must be at least 1".into());
        }
        if self.budget_pairs < 10 * self.elites {
            return fail(format!(
                "budget_pairs {} is below 10 x elites = {}",
                self.budget_pairs,
                10 * self.elites
            ));
        }
        if !(self.elim_alpha > 0.0 && self.elim_alpha < 1.0) {
            return fail(format!(
                "elim_alpha must be in (0, 1), got {}",
                self.elim_alpha
            ));
        }
        if self.min_instances < 2 {
            return fail("min_instances must be at least 2".into());
        }
        match &self.instances {
            Instances::Explicit(ns) if ns.is_empty() => {
                fail("explicit instance list is empty".into())
            }
            Instances::Explicit(ns) => match ns.iter().find(|&&n| n < self.n_lo || n > self.n_hi) {
                Some(n) => fail(format!(
                    "instance {n} lies outside [{}, {}]",
                    self.n_lo, self.n_hi
                )),
                None => Ok(()),
            },
            Instances::Sampled(0) => fail("sampled instance count must be positive".into()),
            Instances::Sampled(_) => Ok(()),
        }
    }

    /// Training sizes, sorted and distinct. Sampled lists come from the
    /// scenario seed.
    pub fn instance_list(&self) -> Vec<usize> {
        let mut ns = match &self.instances {
            Instances::Explicit(ns) => ns.clone(),
            Instances::Sampled(k) => {
                let width = self.n_hi - self.n_lo + 1;
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(u64::MAX);
                index::sample(&mut rng, width, (*k).min(width))
                    .into_iter()
                    .map(|i| self.n_lo + i)
                    .collect()
            }
        };
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    fn free_params(&self) -> usize {
        self.d - 1
    }

    /// Number of racing iterations, `2 + ⌊log2(d − 1)⌋`.
    pub fn iterations(&self) -> usize {
        2 + self.free_params().ilog2() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TunedConfig {
    pub params: Vec<f64>,
    pub per_instance_values: BTreeMap<usize, f64>,
    /// Mean rank among the survivors of the final race.
    pub mean_rank: f64,
    pub scenario: TuningScenario,
    pub instances: Vec<usize>,
    pub evals_used: usize,
    pub candidates_sampled: usize,
}

struct Candidate {
    params: Vec<f64>,
    values: BTreeMap<usize, f64>,
}

struct Racer<'a> {
    scenario: &'a TuningScenario,
    instances: Vec<usize>,
    rng: ChaCha8Rng,
    pool: Vec<Candidate>,
    used: usize,
}

impl Racer<'_> {
    fn sample_uniform(&mut self) -> Vec<f64> {
        let (lo, hi) = DEFAULT_BOUNDS;
        (0..self.scenario.free_params())
            .map(|_| self.rng.random_range(lo..hi))
            .collect()
    }

    fn sample_near(&mut self, parent: &[f64], spread: f64) -> Vec<f64> {
        let (lo, hi) = DEFAULT_BOUNDS;
        let mut child = Vec::with_capacity(parent.len());
        for &mu in parent {
            let normal = Normal::new(mu, spread).expect("positive spread");
            let mut x = normal.sample(&mut self.rng);
            for _ in 0..100 {
                if x > lo && x < hi {
                    break;
                }
                x = normal.sample(&mut self.rng);
            }
            child.push(x.clamp(lo, hi));
        }
        child
    }

    fn evaluate(&mut self, ids: &[usize], n: usize) -> Result<()> {
        let todo: Vec<usize> = ids
            .iter()
            .copied()
            .filter(|&c| !self.pool[c].values.contains_key(&n))
            .collect();
        let values: Vec<f64> = todo
            .par_iter()
            .map(|&c| kronecker_objective(n, &self.pool[c].params).map(sanitize))
            .collect::<Result<_>>()?;
        for (&c, v) in todo.iter().zip(values) {
            self.pool[c].values.insert(n, v);
        }
        self.used += todo.len();
        Ok(())
    }

    fn missing(&self, ids: &[usize], n: usize) -> usize {
        ids.iter()
            .filter(|&&c| !self.pool[c].values.contains_key(&n))
            .count()
    }

    fn blocks(&self, ids: &[usize], seen: &[usize]) -> Vec<Vec<f64>> {
        seen.iter()
            .map(|n| ids.iter().map(|&c| self.pool[c].values[n]).collect())
            .collect()
    }

    /// `ids` sorted by mean rank over `seen`, ties by creation order.
    fn ranked(&self, ids: &[usize], seen: &[usize]) -> Vec<(usize, f64)> {
        let means = if seen.is_empty() {
            vec![0.0; ids.len()]
        } else {
            mean_ranks(&self.blocks(ids, seen))
        };
        let mut out: Vec<(usize, f64)> = ids.iter().copied().zip(means).collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }

    /// One race over a freshly shuffled instance order; returns the survivors
    /// ranked best first.
    fn race(&mut self, mut alive: Vec<usize>, round_budget: usize) -> Result<Vec<(usize, f64)>> {
        let sc = self.scenario;
        let mut order = self.instances.clone();
        order.shuffle(&mut self.rng);
        let start = self.used;
        let mut seen: Vec<usize> = Vec::new();
        for n in order {
            if alive.len() <= sc.elites.max(1) && !seen.is_empty() {
                break;
            }
            let left = round_budget - (self.used - start);
            if self.missing(&alive, n) > left {
                if seen.len() < sc.min_instances {
                    break;
                }
                // Out of budget for the whole field: keep the best by mean
                // rank that can still be afforded on this instance.
                let mut kept = Vec::new();
                let mut cost = 0;
                for (c, _) in self.ranked(&alive, &seen) {
                    let extra = usize::from(!self.pool[c].values.contains_key(&n));
                    if cost + extra <= left {
                        cost += extra;
                        kept.push(c);
                    }
                }
                if kept.len() < 2 {
                    break;
                }
                kept.sort_unstable();
                alive = kept;
            }
            self.evaluate(&alive, n)?;
            seen.push(n);
            if seen.len() >= sc.min_instances && alive.len() > 1 {
                if let Some(test) = friedman(&self.blocks(&alive, &seen), sc.elim_alpha) {
                    let mut keep = Vec::with_capacity(alive.len());
                    for (j, &c) in alive.iter().enumerate() {
                        if test.worse.binary_search(&j).is_err() {
                            keep.push(c);
                        }
                    }
                    alive = keep;
                }
            }
        }
        Ok(self.ranked(&alive, &seen))
    }
}

/// Iterated racing over `(p_2, …, p_d)` for the sizes in the scenario.
///
/// Round `j` gets an equal share of the remaining budget and samples new
/// candidates until the share covers about `min_instances + min(5, j)`
/// evaluations each. The first round samples uniformly; later rounds sample
/// truncated normals around the elites, with spread `0.5^j` floored at
/// `0.01`. A race evaluates every live candidate instance by instance and,
/// once `min_instances` instances are in, drops candidates that a Friedman
/// test with post-hoc comparison at `elim_alpha` finds worse than the best.
/// When the budget can no longer cover every live candidate, the race keeps
/// those with the best mean rank that still fit.
pub fn race_tune(scenario: &TuningScenario) -> Result<TunedConfig> {
    scenario.validate()?;
    let instances = scenario.instance_list();
    let iterations = scenario.iterations();
    let mut racer = Racer {
        scenario,
        instances,
        rng: ChaCha8Rng::seed_from_u64(scenario.seed),
        pool: Vec::new(),
        used: 0,
    };
    let mut elites: Vec<(usize, f64)> = Vec::new();
    for j in 1..=iterations {
        let remaining = scenario.budget_pairs - racer.used;
        let round_budget = remaining / (iterations - j + 1);
        let per_candidate = (scenario.min_instances + j.min(5)).min(racer.instances.len());
        let target = round_budget / per_candidate;
        if j == 1 && target < 2 {
            return Err(Error::Config(format!(
                "budget of {} pairs cannot race two candidates over {} instances",
                scenario.budget_pairs, per_candidate
            )));
        }
        if target <= elites.len() {
            break;
        }
        let mut alive: Vec<usize> = elites.iter().map(|&(c, _)| c).collect();
        let spread = (0.5f64.powi(j as i32)).max(MIN_SPREAD);
        let weights: Vec<usize> = (1..=elites.len()).rev().collect();
        let total_weight: usize = weights.iter().sum();
        for _ in elites.len()..target {
            let params = if elites.is_empty() {
                racer.sample_uniform()
            } else {
                let mut pick = racer.rng.random_range(0..total_weight);
                let mut parent = 0;
                while pick >= weights[parent] {
                    pick -= weights[parent];
                    parent += 1;
                }
                let parent = racer.pool[elites[parent].0].params.clone();
                racer.sample_near(&parent, spread)
            };
            alive.push(racer.pool.len());
            racer.pool.push(Candidate {
                params,
                values: BTreeMap::new(),
            });
        }
        alive.sort_unstable();
        let survivors = racer.race(alive, round_budget)?;
        elites = survivors.into_iter().take(scenario.elites).collect();
    }
    let &(best, mean_rank) = elites
        .first()
        .ok_or_else(|| Error::Config("race ended without a survivor".into()))?;
    let Candidate { params, values } = std::mem::replace(
        &mut racer.pool[best],
        Candidate {
            params: Vec::new(),
            values: BTreeMap::new(),
        },
    );
    Ok(TunedConfig {
        params,
        per_instance_values: values,
        mean_rank,
        scenario: scenario.clone(),
        instances: racer.instances,
        evals_used: racer.used,
        candidates_sampled: racer.pool.len(),
    })
}

/// Exact discrepancy of the shifted set with `p_1 = 1/n` and tail `params`,
/// for every `n` in `ns`.
pub fn evaluate_config_over_interval(params: &[f64], ns: &[usize]) -> Result<BTreeMap<usize, f64>> {
    if let Some(&n) = ns.iter().find(|&&n| n == 0) {
        return Err(Error::InvalidInput(format!(
            "set size must be at least 1, got {n}"
        )));
    }
    let values: Vec<f64> = ns
        .par_iter()
        .map(|&n| kronecker_objective(n, params))
        .collect::<Result<_>>()?;
    Ok(ns.iter().copied().zip(values).collect())
}

/// Mean ranks of a tuned config and the random baseline on one interval's
/// probes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineComparison {
    pub tuned_mean_rank: f64,
    pub baseline_mean_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalStudy {
    pub intervals: Vec<(usize, usize)>,
    pub configs: Vec<TunedConfig>,
    /// Probe sizes per interval.
    pub probes: Vec<Vec<usize>>,
    /// Fixed random tail used as the baseline row.
    pub baseline_params: Vec<f64>,
    /// One row per config, then the baseline; one column per probe size in
    /// interval order.
    pub matrix: Vec<Vec<f64>>,
    pub own_interval: Vec<BaselineComparison>,
}

/// `k` sizes evenly spread over `[lo, hi]`, endpoints included.
pub fn probe_sizes(lo: usize, hi: usize, k: usize) -> Vec<usize> {
    let mut out: Vec<usize> = match k {
        0 => Vec::new(),
        1 => vec![lo + (hi - lo) / 2],
        _ => (0..k)
            .map(|i| lo + ((hi - lo) as f64 * i as f64 / (k - 1) as f64).round() as usize)
            .collect(),
    };
    out.dedup();
    out
}

/// Tunes one config per interval from `template` (with the interval bounds
/// and seed `template.seed + index` substituted) and evaluates every config,
/// plus a fixed random baseline, on every interval's probe sizes.
pub fn interval_study(
    intervals: &[(usize, usize)],
    template: &TuningScenario,
    probes_per_interval: usize,
) -> Result<IntervalStudy> {
    if intervals.is_empty() {
        return Err(Error::InvalidInput("no intervals given".into()));
    }
    if probes_per_interval == 0 {
        return Err(Error::InvalidInput(
            "need at least one probe per interval".into(),
        ));
    }
    let mut sorted = intervals.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0].1 >= w[1].0) {
        return Err(Error::InvalidInput(format!(
            "intervals [{}, {}] and [{}, {}] overlap",
            w[0].0, w[0].1, w[1].0, w[1].1
        )));
    }
    let mut configs = Vec::with_capacity(intervals.len());
    for (k, &(lo, hi)) in intervals.iter().enumerate() {
        let mut scenario = template.clone();
        scenario.n_lo = lo;
        scenario.n_hi = hi;
        scenario.seed = template.seed.wrapping_add(k as u64);
        if let Instances::Explicit(ns) = &template.instances {
            let inside: Vec<usize> = ns
                .iter()
                .copied()
                .filter(|n| (lo..=hi).contains(n))
                .collect();
            scenario.instances = if inside.is_empty() {
                Instances::default()
            } else {
                Instances::Explicit(inside)
            };
        }
        configs.push(race_tune(&scenario)?);
    }

    let probes: Vec<Vec<usize>> = intervals
        .iter()
        .map(|&(lo, hi)| probe_sizes(lo, hi, probes_per_interval))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(template.seed);
    rng.set_stream(u64::MAX - 1);
    let (lo, hi) = DEFAULT_BOUNDS;
    let baseline_params: Vec<f64> = (1..template.d).map(|_| rng.random_range(lo..hi)).collect();

    let all_probes: Vec<usize> = probes.iter().flatten().copied().collect();
    let mut matrix = Vec::with_capacity(configs.len() + 1);
    for params in configs.iter().map(|c| &c.params).chain([&baseline_params]) {
        let values = evaluate_config_over_interval(params, &all_probes)?;
        matrix.push(all_probes.iter().map(|n| values[n]).collect::<Vec<f64>>());
    }

    let baseline_row = matrix.len() - 1;
    let mut own_interval = Vec::with_capacity(configs.len());
    let mut offset = 0;
    for (k, ns) in probes.iter().enumerate() {
        let blocks: Vec<Vec<f64>> = (offset..offset + ns.len())
            .map(|col| vec![matrix[k][col], matrix[baseline_row][col]])
            .collect();
        let means = mean_ranks(&blocks);
        own_interval.push(BaselineComparison {
            tuned_mean_rank: means[0],
            baseline_mean_rank: means[1],
        });
        offset += ns.len();
    }

    Ok(IntervalStudy {
        intervals: intervals.to_vec(),
        configs,
        probes,
        baseline_params,
        matrix,
        own_interval,
    })
}

impl IntervalStudy {
    /// Writes the cross-evaluation matrix: one row per config (labelled by its
    /// training interval) plus a `random` row, one column per probe size.
    pub fn write_matrix_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["config".to_string()];
        header.extend(self.probes.iter().flatten().map(|n| format!("n={n}")));
        w.write_record(&header)?;
        let labels = self
            .intervals
            .iter()
            .map(|(lo, hi)| format!("{lo}-{hi}"))
            .chain(["random".to_string()]);
        for (label, row) in labels.zip(&self.matrix) {
            let mut record = vec![label];
            record.extend(row.iter().map(f64::to_string));
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("<matrix>", e))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PointSet;

    fn small(seed: u64) -> TuningScenario {
        let mut s = TuningScenario::new(5, 30, 300, seed);
        s.instances = Instances::Sampled(8);
        s
    }

    #[test]
    fn scenario_validation() {
        assert!(TuningScenario::new(4, 30, 300, 0).validate().is_err());
        assert!(TuningScenario::new(30, 20, 300, 0).validate().is_err());
        assert!(TuningScenario::new(5, 30, 29, 0).validate().is_err());
        assert!(TuningScenario::new(5, 30, 30, 0).validate().is_ok());
        let mut s = TuningScenario::new(5, 30, 300, 0);
        s.instances = Instances::Explicit(vec![4]);
        assert!(s.validate().is_err());
        s.instances = Instances::Explicit(vec![]);
        assert!(s.validate().is_err());
        s.instances = Instances::Sampled(0);
        assert!(s.validate().is_err());
        s.instances = Instances::Sampled(3);
        s.elim_alpha = 1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn iteration_count_follows_parameter_count() {
        let mut s = TuningScenario::new(5, 30, 300, 0);
        s.d = 2;
        assert_eq!(s.iterations(), 2);
        s.d = 3;
        assert_eq!(s.iterations(), 3);
        s.d = 4;
        assert_eq!(s.iterations(), 3);
    }

    #[test]
    fn scenario_json_defaults() {
        let s = TuningScenario::from_json(
            r#"{"n_lo": 5, "n_hi": 100, "budget_pairs": 2000, "seed": 7}"#,
        )
        .unwrap();
        assert_eq!(s, TuningScenario::new(5, 100, 2000, 7));
        let s = TuningScenario::from_json(
            r#"{"n_lo": 100, "n_hi": 100, "budget_pairs": 500, "seed": 1, "instances": {"explicit": [100]}}"#,
        )
        .unwrap();
        assert_eq!(s.instance_list(), vec![100]);
        assert!(TuningScenario::from_json(r#"{"n_lo": 5}"#).is_err());
    }

    #[test]
    fn sampled_instances_are_distinct_and_inside() {
        let mut s = TuningScenario::new(5, 12, 300, 3);
        s.instances = Instances::Sampled(50);
        assert_eq!(s.instance_list(), (5..=12).collect::<Vec<_>>());
        s.n_hi = 1000;
        s.instances = Instances::Sampled(10);
        let ns = s.instance_list();
        assert_eq!(ns.len(), 10);
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
        assert!(ns.iter().all(|n| (5..=1000).contains(n)));
    }

    #[test]
    fn budget_too_small_for_a_round() {
        let mut s = TuningScenario::new(5, 30, 30, 0);
        s.elites = 3;
        let err = race_tune(&s).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }

    #[test]
    fn race_is_deterministic_and_within_budget() {
        let a = race_tune(&small(11)).unwrap();
        let b = race_tune(&small(11)).unwrap();
        assert_eq!(a, b);
        assert!(a.evals_used <= 300);
        assert_eq!(a.params.len(), 2);
        assert!(a.per_instance_values.len() >= a.scenario.min_instances);
        for (&n, &v) in &a.per_instance_values {
            assert_eq!(kronecker_objective(n, &a.params).unwrap(), v);
        }
        let c = race_tune(&small(12)).unwrap();
        assert_ne!(a.params, c.params);
    }

    #[test]
    fn single_instance_scenario_is_plain_search() {
        let mut s = TuningScenario::new(20, 20, 200, 5);
        s.instances = Instances::Explicit(vec![20]);
        let t = race_tune(&s).unwrap();
        assert_eq!(
            t.per_instance_values.keys().copied().collect::<Vec<_>>(),
            vec![20]
        );
        assert!(
            t.evals_used <= 200 && t.evals_used > 150,
            "{}",
            t.evals_used
        );
        // Fibonacci-like quality is easy to reach at n = 20 with 200 samples.
        assert!(t.per_instance_values[&20] < 0.2);
    }

    #[test]
    fn evaluate_over_interval_matches_objective() {
        let params = [0.5494, 0.7867];
        let got = evaluate_config_over_interval(&params, &[5, 20, 7]).unwrap();
        assert_eq!(got.len(), 3);
        for (&n, &v) in &got {
            assert_eq!(v, kronecker_objective(n, &params).unwrap());
        }
        assert!(evaluate_config_over_interval(&params, &[0]).is_err());
    }

    #[test]
    fn one_point_set_sits_at_origin_of_first_axis() {
        let phi = crate::pointset::GOLDEN_RATIO - 1.0;
        let got = evaluate_config_over_interval(&[phi, 0.3], &[1]).unwrap();
        let point = PointSet::new(3, vec![0.0, phi, 0.3]).unwrap();
        assert_eq!(
            got[&1],
            crate::star_discrepancy_oracle(&point).unwrap().value
        );
    }

    #[test]
    fn probe_sizes_cover_interval() {
        assert_eq!(probe_sizes(5, 100, 5), vec![5, 29, 53, 76, 100]);
        assert_eq!(probe_sizes(5, 7, 5), vec![5, 6, 7]);
        assert_eq!(probe_sizes(10, 20, 1), vec![15]);
    }

    #[test]
    fn interval_study_shape() {
        let mut template = TuningScenario::new(5, 5, 120, 4);
        template.instances = Instances::Sampled(6);
        let study = interval_study(&[(5, 15), (16, 30)], &template, 3).unwrap();
        assert_eq!(study.configs.len(), 2);
        assert_eq!(study.matrix.len(), 3);
        assert!(study.matrix.iter().all(|row| row.len() == 6));
        assert_eq!(study.own_interval.len(), 2);
        for c in &study.own_interval {
            assert!((c.tuned_mean_rank + c.baseline_mean_rank - 3.0).abs() < 1e-12);
        }
        let mut csv = Vec::new();
        study.write_matrix_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("config,n=5,"));
        assert!(lines[1].starts_with("5-15,"));
        assert!(lines[3].starts_with("random,"));
        assert!(interval_study(&[(5, 20), (20, 30)], &template, 3).is_err());
    }
}
