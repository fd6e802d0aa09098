//! Per-size search for Kronecker parameters.
//!
//! [`optimize_kronecker`] minimizes the exact discrepancy of the shifted set
//! `(1/n, p_2, …, p_d)` over `(p_2, …, p_d)` with [`cmaes_minimize`]. Each run
//! starts from a uniform random mean and restarts whenever the search
//! distribution collapses or stops improving, until the run's evaluation
//! budget is spent. [`random_search_minimize`] is the uniform baseline.

mod cmaes;

pub use cmaes::cmaes_minimize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrepancy::star_discrepancy_exact;
use crate::pointset::kronecker_with_unit_first;
use crate::{Error, Result};

/// Cost assigned to candidates whose objective is not finite.
pub const WORST_COST: f64 = 1.0;

pub const DEFAULT_INITIAL_STEP: f64 = 0.3;
pub const DEFAULT_BOUNDS: (f64, f64) = (1e-9, 1.0 - 1e-9);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Objective evaluations per run.
    pub budget_evals: usize,
    pub runs: usize,
    pub seed: u64,
    /// Population size; `None` picks `max(6, 4 + ⌊3 ln dim⌋)`.
    pub population: Option<usize>,
    pub initial_step: f64,
    pub bounds: Vec<(f64, f64)>,
}

impl OptimizerConfig {
    /// Defaults for a `dim`-dimensional search in the open unit box.
    pub fn new(dim: usize, budget_evals: usize, runs: usize, seed: u64) -> Self {
        Self {
            budget_evals,
            runs,
            seed,
            population: None,
            initial_step: DEFAULT_INITIAL_STEP,
            bounds: vec![DEFAULT_BOUNDS; dim],
        }
    }

    pub fn lambda(&self) -> usize {
        self.population.unwrap_or_else(|| {
            let dim = self.bounds.len().max(1) as f64;
            (4 + (3.0 * dim.ln()).floor() as usize).max(6)
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.bounds.is_empty() {
            return Err(Error::Config(
                "at least one search coordinate is required".into(),
            ));
        }
        if self.population.is_some_and(|p| p < 2) {
            return Err(Error::Config("population must be at least 2".into()));
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.budget_evals < self.lambda() {
            return Err(Error::Config(format!(
                "budget of {} evaluations is below the population size {}",
                self.budget_evals,
                self.lambda()
            )));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::Config("initial step must be positive".into()));
        }
        if let Some(&(lo, hi)) = self
            .bounds
            .iter()
            .find(|&&(lo, hi)| !(0.0 < lo && lo < hi && hi < 1.0))
        {
            return Err(Error::Config(format!(
                "bounds ({lo}, {hi}) must satisfy 0 < lo < hi < 1"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    /// Best value seen so far, recorded after every generation of every run.
    pub history: Vec<f64>,
    pub evals_used: usize,
    pub seed: u64,
}

impl OptResult {
    fn empty(seed: u64) -> Self {
        Self {
            best_params: Vec::new(),
            best_value: f64::INFINITY,
            history: Vec::new(),
            evals_used: 0,
            seed,
        }
    }

    fn record(&mut self, candidates: &[Vec<f64>], values: &[f64]) {
        for (x, &v) in candidates.iter().zip(values) {
            if v < self.best_value {
                self.best_value = v;
                self.best_params.clone_from(x);
            }
        }
        self.evals_used += candidates.len();
        self.history.push(self.best_value);
    }
}

pub(crate) fn sanitize(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        WORST_COST
    }
}

/// Uniform sampling in the box with the same total budget
/// (`budget_evals × runs`) and bookkeeping as [`cmaes_minimize`].
pub fn random_search_minimize<F>(objective: F, config: &OptimizerConfig) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    let batch = config.lambda();
    let total = config.budget_evals * config.runs;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut result = OptResult::empty(config.seed);
    while result.evals_used < total {
        let k = batch.min(total - result.evals_used);
        let candidates: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                config
                    .bounds
                    .iter()
                    .map(|&(lo, hi)| rng.random_range(lo..hi))
                    .collect()
            })
            .collect();
        let values: Vec<f64> = candidates
            .par_iter()
            .map(|x| sanitize(objective(x)))
            .collect();
        result.record(&candidates, &values);
    }
    Ok(result)
}

/// Exact discrepancy of the shifted set with `p_1 = 1/n` and `tail` after it.
pub fn kronecker_objective(n: usize, tail: &[f64]) -> Result<f64> {
    let set = kronecker_with_unit_first(n, tail)?;
    Ok(star_discrepancy_exact(&set)?.value)
}

fn check_kronecker_args(n: usize, d: usize, config: &OptimizerConfig) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if !(2..=4).contains(&d) {
        return Err(Error::InvalidInput(format!(
            "Kronecker search supports d in 2..=4, got {d}"
        )));
    }
    if config.bounds.len() != d - 1 {
        return Err(Error::Config(format!(
            "{} bounds given for {} free parameters",
            config.bounds.len(),
            d - 1
        )));
    }
    Ok(())
}

/// CMA-ES over `(p_2, …, p_d)` for one set size.
pub fn optimize_kronecker(n: usize, d: usize, config: &OptimizerConfig) -> Result<OptResult> {
    check_kronecker_args(n, d, config)?;
    cmaes_minimize(|p| kronecker_objective(n, p).unwrap_or(f64::NAN), config)
}

/// Uniform random search over `(p_2, …, p_d)` at the same budget.
pub fn random_search_kronecker(n: usize, d: usize, config: &OptimizerConfig) -> Result<OptResult> {
    check_kronecker_args(n, d, config)?;
    random_search_minimize(|p| kronecker_objective(n, p).unwrap_or(f64::NAN), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::star_discrepancy_oracle;
    use crate::pointset::fibonacci_set;

    #[test]
    fn default_population() {
        assert_eq!(OptimizerConfig::new(1, 100, 1, 0).lambda(), 6);
        assert_eq!(OptimizerConfig::new(2, 100, 1, 0).lambda(), 6);
        assert_eq!(OptimizerConfig::new(3, 100, 1, 0).lambda(), 7);
        assert_eq!(OptimizerConfig::new(10, 100, 1, 0).lambda(), 10);
    }

    #[test]
    fn invalid_configs() {
        let ok = OptimizerConfig::new(2, 100, 1, 0);
        assert!(ok.validate().is_ok());
        let bad = [
            OptimizerConfig {
                budget_evals: 5,
                ..ok.clone()
            },
            OptimizerConfig {
                runs: 0,
                ..ok.clone()
            },
            OptimizerConfig {
                initial_step: 0.0,
                ..ok.clone()
            },
            OptimizerConfig {
                bounds: vec![(0.5, 0.5); 2],
                ..ok.clone()
            },
            OptimizerConfig {
                bounds: vec![(0.0, 0.5); 2],
                ..ok.clone()
            },
            OptimizerConfig {
                bounds: vec![],
                ..ok.clone()
            },
            OptimizerConfig {
                population: Some(1),
                ..ok.clone()
            },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
        assert!(optimize_kronecker(10, 5, &OptimizerConfig::new(4, 100, 1, 0)).is_err());
        assert!(optimize_kronecker(10, 3, &OptimizerConfig::new(1, 100, 1, 0)).is_err());
    }

    #[test]
    fn small_two_dimensional_search_matches_fibonacci() {
        let fib = star_discrepancy_oracle(&fibonacci_set(5).unwrap())
            .unwrap()
            .value;
        let r = optimize_kronecker(5, 2, &OptimizerConfig::new(1, 300, 2, 3)).unwrap();
        assert!(r.best_value <= fib, "{} > {fib}", r.best_value);
    }

    #[test]
    fn best_value_reproduces() {
        let r = optimize_kronecker(40, 3, &OptimizerConfig::new(2, 200, 2, 9)).unwrap();
        let again = kronecker_objective(40, &r.best_params).unwrap();
        assert!((again - r.best_value).abs() <= 1e-12);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(r.evals_used, 400);
        assert_eq!(*r.history.last().unwrap(), r.best_value);
    }

    #[test]
    fn random_search_is_seeded() {
        let cfg = OptimizerConfig::new(2, 60, 2, 5);
        let a = random_search_kronecker(30, 3, &cfg).unwrap();
        assert_eq!(a, random_search_kronecker(30, 3, &cfg).unwrap());
        assert_eq!(a.evals_used, 120);
    }
}
