//! Brute-force maximization over rank-one weighted states.
//!
//! Independent of the conjugation reduction: a rank-one state `g` evaluates
//! `f(ax) = g*axg / g*ag` directly, sampled at random and then refined by
//! adaptive random-perturbation hill-climbing. States are drawn as
//! `g = a^{-1/2}h` with `h` on the unit sphere, which only reshapes the
//! sampling distribution; every objective value is computed from `a` and `x`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matrix::{ComplexMatrix, C64};
use crate::state::Weight;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub samples: usize,
    /// Best samples used as hill-climbing starts.
    pub climbers: usize,
    pub max_iterations: usize,
}

impl OracleConfig {
    pub fn full() -> Self {
        Self {
            samples: 100_000,
            climbers: 50,
            max_iterations: 40_000,
        }
    }

    pub fn light() -> Self {
        Self {
            samples: 1_000,
            climbers: 24,
            max_iterations: 20_000,
        }
    }
}

/// `sup |f(ax)|` over rank-one a-states.
pub fn oracle_a_numerical_radius<R: Rng + ?Sized>(
    x: &ComplexMatrix,
    w: &Weight,
    cfg: &OracleConfig,
    rng: &mut R,
) -> Result<f64> {
    w.a().ensure_same_dim(x)?;
    let ax = w.a().matmul(x);
    let a = w.a();
    let objective = |g: &[C64]| ax.quadratic_form(g).norm() / a.quadratic_form(g).re;
    Ok(maximize(&objective, w.inv_sqrt_a(), cfg, rng))
}

/// `sup sqrt(f(x*ax))` over rank-one a-states.
pub fn oracle_a_seminorm<R: Rng + ?Sized>(
    x: &ComplexMatrix,
    w: &Weight,
    cfg: &OracleConfig,
    rng: &mut R,
) -> Result<f64> {
    w.a().ensure_same_dim(x)?;
    let xax = x.adjoint().matmul(w.a()).matmul(x);
    let a = w.a();
    let objective = |g: &[C64]| (xax.quadratic_form(g).re / a.quadratic_form(g).re).max(0.0);
    Ok(maximize(&objective, w.inv_sqrt_a(), cfg, rng).sqrt())
}

fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let mut g: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    normalize(&mut g);
    g
}

fn normalize(g: &mut [C64]) {
    let norm = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in g.iter_mut() {
            *z /= norm;
        }
    }
}

fn maximize<R: Rng + ?Sized>(
    objective: &impl Fn(&[C64]) -> f64,
    precondition: &ComplexMatrix,
    cfg: &OracleConfig,
    rng: &mut R,
) -> f64 {
    let n = precondition.dim();
    let objective = |h: &[C64]| objective(&precondition.mat_vec(h));
    let objective = &objective;
    let keep = cfg.climbers.max(1);
    // best `keep` samples, sorted descending by value
    let mut top: Vec<(f64, Vec<C64>)> = Vec::with_capacity(keep + 1);
    for _ in 0..cfg.samples.max(1) {
        let g = random_unit(n, rng);
        let value = objective(&g);
        if top.len() < keep || value > top[top.len() - 1].0 {
            let pos = top.partition_point(|(v, _)| *v >= value);
            top.insert(pos, (value, g));
            top.truncate(keep);
        }
    }
    top.into_iter()
        .map(|(value, g)| climb(objective, g, value, cfg.max_iterations, rng))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// (1+1) random search with the one-fifth success rule.
fn climb<R: Rng + ?Sized>(
    objective: &impl Fn(&[C64]) -> f64,
    mut g: Vec<C64>,
    mut value: f64,
    iterations: usize,
    rng: &mut R,
) -> f64 {
    let mut sigma = 0.3;
    let shrink = 2f64.powf(-0.25);
    let mut candidate = g.clone();
    for _ in 0..iterations {
        for (c, z) in candidate.iter_mut().zip(&g) {
            let dz = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            *c = z + dz * sigma;
        }
        normalize(&mut candidate);
        let v = objective(&candidate);
        if v > value {
            value = v;
            std::mem::swap(&mut g, &mut candidate);
            sigma = (sigma * 2.0).min(1.0);
        } else {
            sigma *= shrink;
        }
        if sigma < 1e-9 {
            break;
        }
    }
    value
}
