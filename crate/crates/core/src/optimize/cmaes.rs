//! (μ/μ_w, λ)-CMA-ES with rank-one and rank-μ covariance updates, box
//! constraints by reflection, and restarts inside each run's budget.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{sanitize, OptResult, OptimizerConfig};
use crate::Result;

/// Stop a descent once the search distribution is this narrow.
const TOL_X: f64 = 1e-10;
const MIN_EIGENVALUE: f64 = 1e-20;

struct Params {
    lambda: usize,
    weights: Vec<f64>,
    mu_eff: f64,
    c_sigma: f64,
    d_sigma: f64,
    c_c: f64,
    c_1: f64,
    c_mu: f64,
    chi_n: f64,
}

impl Params {
    fn new(dim: usize, lambda: usize) -> Self {
        let nf = dim as f64;
        let mu = lambda / 2;
        let raw: Vec<f64> = (1..=mu)
            .map(|i| (mu as f64 + 0.5).ln() - (i as f64).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let mu_eff = 1.0 / weights.iter().map(|w| w * w).sum::<f64>();
        let c_sigma = (mu_eff + 2.0) / (nf + mu_eff + 5.0);
        let d_sigma = 1.0 + 2.0 * (((mu_eff - 1.0) / (nf + 1.0)).sqrt() - 1.0).max(0.0) + c_sigma;
        let c_c = (4.0 + mu_eff / nf) / (nf + 4.0 + 2.0 * mu_eff / nf);
        let c_1 = 2.0 / ((nf + 1.3).powi(2) + mu_eff);
        let c_mu =
            (1.0 - c_1).min(2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nf + 2.0).powi(2) + mu_eff));
        let chi_n = nf.sqrt() * (1.0 - 1.0 / (4.0 * nf) + 1.0 / (21.0 * nf * nf));
        Self {
            lambda,
            weights,
            mu_eff,
            c_sigma,
            d_sigma,
            c_c,
            c_1,
            c_mu,
            chi_n,
        }
    }
}

/// Mirror `x` back into `[lo, hi]`, folding repeatedly for far excursions.
pub(crate) fn reflect(x: f64, lo: f64, hi: f64) -> f64 {
    if (lo..=hi).contains(&x) {
        return x;
    }
    let w = hi - lo;
    let mut y = (x - lo).rem_euclid(2.0 * w);
    if y > w {
        y = 2.0 * w - y;
    }
    (lo + y).clamp(lo, hi)
}

/// Mutable state of one descent.
struct Descent {
    mean: DVector<f64>,
    sigma: f64,
    cov: DMatrix<f64>,
    p_sigma: DVector<f64>,
    p_c: DVector<f64>,
    generation: u32,
    best: f64,
    since_improvement: usize,
}

impl Descent {
    fn start(cfg: &OptimizerConfig, rng: &mut ChaCha8Rng) -> Self {
        let dim = cfg.bounds.len();
        let mean = DVector::from_iterator(
            dim,
            cfg.bounds.iter().map(|&(lo, hi)| rng.random_range(lo..hi)),
        );
        Self {
            mean,
            sigma: cfg.initial_step,
            cov: DMatrix::identity(dim, dim),
            p_sigma: DVector::zeros(dim),
            p_c: DVector::zeros(dim),
            generation: 0,
            best: f64::INFINITY,
            since_improvement: 0,
        }
    }
}

pub fn cmaes_minimize<F>(objective: F, config: &OptimizerConfig) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    let dim = config.bounds.len();
    let params = Params::new(dim, config.lambda());
    let lambda = params.lambda;
    let stall_limit = 10 + (30.0 * dim as f64 / lambda as f64).ceil() as usize;

    let mut result = OptResult::empty(config.seed);
    for run in 0..config.runs {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(run as u64);
        let mut descent = Descent::start(config, &mut rng);
        let mut used = 0usize;

        while used < config.budget_evals {
            let batch = lambda.min(config.budget_evals - used);
            let eig = SymmetricEigen::new(descent.cov.clone());
            let scales = eig.eigenvalues.map(|v| v.max(MIN_EIGENVALUE).sqrt());
            let basis = &eig.eigenvectors;

            // Candidates and the steps (x - m) / σ that produced them after reflection.
            let mut candidates = Vec::with_capacity(batch);
            let mut steps = Vec::with_capacity(batch);
            for _ in 0..batch {
                let z = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
                let y = basis * z.component_mul(&scales);
                let x: Vec<f64> = (0..dim)
                    .map(|j| {
                        let (lo, hi) = config.bounds[j];
                        reflect(descent.mean[j] + descent.sigma * y[j], lo, hi)
                    })
                    .collect();
                steps.push(DVector::from_iterator(
                    dim,
                    x.iter()
                        .enumerate()
                        .map(|(j, &xj)| (xj - descent.mean[j]) / descent.sigma),
                ));
                candidates.push(x);
            }
            let values: Vec<f64> = candidates
                .par_iter()
                .map(|x| sanitize(objective(x)))
                .collect();
            used += batch;
            result.record(&candidates, &values);

            if batch < lambda {
                break;
            }

            let mut order: Vec<usize> = (0..lambda).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

            let generation_best = values[order[0]];
            if generation_best < descent.best - 1e-15 {
                descent.best = generation_best;
                descent.since_improvement = 0;
            } else {
                descent.since_improvement += 1;
            }

            let mut y_w = DVector::zeros(dim);
            for (w, &k) in params.weights.iter().zip(&order) {
                y_w += &steps[k] * *w;
            }
            descent.mean += &y_w * descent.sigma;

            let inv_sqrt =
                basis * DMatrix::from_diagonal(&scales.map(|s| 1.0 / s)) * basis.transpose();
            let cs = params.c_sigma;
            descent.p_sigma = &descent.p_sigma * (1.0 - cs)
                + (inv_sqrt * &y_w) * (cs * (2.0 - cs) * params.mu_eff).sqrt();
            descent.generation += 1;
            let ps_norm = descent.p_sigma.norm();
            let h_sigma = ps_norm / (1.0 - (1.0 - cs).powi(2 * descent.generation as i32)).sqrt()
                < (1.4 + 2.0 / (dim as f64 + 1.0)) * params.chi_n;
            let h = if h_sigma { 1.0 } else { 0.0 };
            let cc = params.c_c;
            descent.p_c =
                &descent.p_c * (1.0 - cc) + &y_w * (h * (cc * (2.0 - cc) * params.mu_eff).sqrt());

            let mut rank_mu = DMatrix::zeros(dim, dim);
            for (w, &k) in params.weights.iter().zip(&order) {
                rank_mu += &steps[k] * steps[k].transpose() * *w;
            }
            let decay = 1.0 - params.c_1 - params.c_mu + (1.0 - h) * params.c_1 * cc * (2.0 - cc);
            descent.cov = &descent.cov * decay
                + &descent.p_c * descent.p_c.transpose() * params.c_1
                + rank_mu * params.c_mu;
            descent.cov = (&descent.cov + descent.cov.transpose()) * 0.5;
            descent.sigma *= ((cs / params.d_sigma) * (ps_norm / params.chi_n - 1.0)).exp();

            let spread = descent.sigma * descent.cov.diagonal().max().max(0.0).sqrt();
            let degenerate = !spread.is_finite() || !descent.mean.iter().all(|m| m.is_finite());
            if degenerate || spread < TOL_X || descent.since_improvement >= stall_limit {
                descent = Descent::start(config, &mut rng);
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| (v - 0.5).powi(2)).sum()
    }

    #[test]
    fn sphere_converges() {
        for seed in 0..5 {
            let cfg = OptimizerConfig::new(3, 500, 1, seed);
            let r = cmaes_minimize(sphere, &cfg).unwrap();
            assert!(r.best_value < 1e-6, "seed {seed}: {}", r.best_value);
            assert_eq!(r.evals_used, 500);
        }
    }

    #[test]
    fn same_seed_same_result() {
        let cfg = OptimizerConfig::new(2, 400, 3, 42);
        let f = |x: &[f64]| (x[0] * 13.0).sin() * (x[1] * 7.0).cos() + x[0];
        let a = cmaes_minimize(f, &cfg).unwrap();
        let b = cmaes_minimize(f, &cfg).unwrap();
        assert_eq!(a, b);
        let c = cmaes_minimize(f, &OptimizerConfig { seed: 43, ..cfg }).unwrap();
        assert_ne!(a.best_params, c.best_params);
    }

    #[test]
    fn non_finite_costs_are_worst() {
        let cfg = OptimizerConfig::new(2, 120, 1, 1);
        let r = cmaes_minimize(|x| if x[0] < 0.5 { f64::NAN } else { 0.5 }, &cfg).unwrap();
        assert_eq!(r.best_value, 0.5);
        assert!(r.best_params[0] >= 0.5);
        let r = cmaes_minimize(|_| f64::INFINITY, &cfg).unwrap();
        assert_eq!(r.best_value, 1.0);
    }

    #[test]
    fn reflection_folds_into_box() {
        assert_eq!(reflect(0.5, 0.0, 1.0), 0.5);
        assert!((reflect(1.25, 0.0, 1.0) - 0.75).abs() < 1e-15);
        assert!((reflect(-0.25, 0.0, 1.0) - 0.25).abs() < 1e-15);
        assert!((reflect(2.25, 0.0, 1.0) - 0.25).abs() < 1e-15);
        assert!((reflect(-3.5, 0.0, 1.0) - 0.5).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn candidates_stay_in_bounds_and_history_is_monotone(
            seed in 0u64..1000,
            lo in 0.01f64..0.4,
            width in 0.05f64..0.5,
        ) {
            let hi = lo + width;
            let cfg = OptimizerConfig {
                bounds: vec![(lo, hi); 2],
                initial_step: 0.8,
                ..OptimizerConfig::new(2, 300, 2, seed)
            };
            let seen = std::sync::Mutex::new(Vec::new());
            let r = cmaes_minimize(|x| {
                seen.lock().unwrap().push(x.to_vec());
                (x[0] - 0.9).abs() + (x[1] * 31.0).sin()
            }, &cfg).unwrap();
            for x in seen.into_inner().unwrap() {
                prop_assert!(x.iter().all(|v| (lo..=hi).contains(v)));
            }
            prop_assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
            prop_assert_eq!(r.evals_used, 600);
        }
    }
}
