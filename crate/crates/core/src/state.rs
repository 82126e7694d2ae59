//! Weighted states, numerical radius and the a-seminorm.
//!
//! For a positive-definite weight `a`, the a-numerical range of `x` equals the
//! numerical range of `ã = a^{1/2} x a^{-1/2}` (substitute `σ = a^{1/2}ρa^{1/2}`
//! in `f(ax) = tr(ρax)`). Hence `v_a(x) = v(ã)` and `‖x‖_a = ‖ã‖`.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{extreme_eigenvalues, hermitian_eig, max_eigenvalue, min_eigenvalue, operator_norm};
use crate::matrix::{ComplexMatrix, C64};

pub const DEFAULT_RADIUS_TOL: f64 = 1e-9;

const SWEEP_GRID: usize = 720;
const REFINED_PEAKS: usize = 3;
/// Relative bisection accuracy used while scanning the θ grid.
const GRID_EIG_TOL: f64 = 1e-9;

/// Positive-definite weight with cached roots and inverse.
#[derive(Clone, Debug)]
pub struct Weight {
    a: ComplexMatrix,
    sqrt_a: ComplexMatrix,
    inv_sqrt_a: ComplexMatrix,
    inv_a: ComplexMatrix,
    lambda_min: f64,
    lambda_max: f64,
    identity: bool,
}

impl Weight {
    pub fn new(a: ComplexMatrix) -> Result<Self> {
        let eig = hermitian_eig(&a)?;
        let (lambda_min, lambda_max) = (eig.min(), eig.max());
        if !(lambda_max > 0.0) || lambda_min <= 1e-10 * lambda_max {
            return Err(Error::SingularWeight {
                lambda_min,
                lambda_max,
            });
        }
        let identity = a.distance(&ComplexMatrix::identity(a.dim())) == 0.0;
        Ok(Self {
            sqrt_a: eig.map(f64::sqrt),
            inv_sqrt_a: eig.map(|l| 1.0 / l.sqrt()),
            inv_a: eig.map(|l| 1.0 / l),
            a,
            lambda_min,
            lambda_max,
            identity,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let id = ComplexMatrix::identity(dim);
        Self {
            a: id.clone(),
            sqrt_a: id.clone(),
            inv_sqrt_a: id.clone(),
            inv_a: id,
            lambda_min: 1.0,
            lambda_max: 1.0,
            identity: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn sqrt_a(&self) -> &ComplexMatrix {
        &self.sqrt_a
    }

    pub fn inv_sqrt_a(&self) -> &ComplexMatrix {
        &self.inv_sqrt_a
    }

    pub fn inv_a(&self) -> &ComplexMatrix {
        &self.inv_a
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// `a ⪰ 1`.
    pub fn geq_one(&self) -> bool {
        self.lambda_min >= 1.0 - 1e-12
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    /// `a^{1/2} x a^{-1/2}`.
    pub fn reduce(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.a.ensure_same_dim(x)?;
        x.ensure_finite()?;
        if self.identity {
            return Ok(x.clone());
        }
        Ok(self.sqrt_a.matmul(x).matmul(&self.inv_sqrt_a))
    }
}

/// `f(y) = tr(ρy)` with `ρ ⪰ 0` and `tr(ρa) = 1`.
#[derive(Clone, Debug)]
pub struct AState<'w> {
    rho: ComplexMatrix,
    weight: &'w Weight,
}

impl<'w> AState<'w> {
    pub fn new(rho: ComplexMatrix, weight: &'w Weight) -> Result<Self> {
        weight.a().ensure_same_dim(&rho)?;
        rho.ensure_finite()?;
        let scale = rho.frobenius_norm();
        if rho.hermitian_defect() > 1e-10 * (1.0 + scale) {
            return Err(Error::InvalidState("density is not Hermitian".into()));
        }
        let mut rho = rho;
        rho.symmetrize();
        let low = min_eigenvalue(&rho);
        if low < -1e-12 * scale.max(1.0) {
            return Err(Error::InvalidState(format!(
                "density has negative eigenvalue {low:.3e}"
            )));
        }
        let norm = trace_product(&rho, weight.a()).re;
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("f(a) = {norm}, expected 1")));
        }
        Ok(Self { rho, weight })
    }

    /// The rank-one state `f(y) = g*yg / g*ag`.
    pub fn rank_one(g: &[C64], weight: &'w Weight) -> Result<Self> {
        if g.len() != weight.dim() {
            return Err(Error::DimensionMismatch {
                expected: weight.dim(),
                found: g.len(),
            });
        }
        let denom = weight.a().quadratic_form(g).re;
        if !(denom > 0.0) {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let n = g.len();
        let mut rho = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                rho[(i, j)] = g[i] * g[j].conj() / denom;
            }
        }
        Ok(Self { rho, weight })
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn weight(&self) -> &'w Weight {
        self.weight
    }

    pub fn apply(&self, y: &ComplexMatrix) -> Result<C64> {
        state_apply(self, y)
    }
}

fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `f(y) = tr(ρy)`.
pub fn state_apply(f: &AState<'_>, y: &ComplexMatrix) -> Result<C64> {
    f.rho.ensure_same_dim(y)?;
    Ok(trace_product(&f.rho, y))
}

/// `ρ = g g* / tr(g g* a)` for a complex Gaussian `n × rank` factor `g`.
pub fn random_state<'w, R: Rng + ?Sized>(w: &'w Weight, rank: usize, rng: &mut R) -> AState<'w> {
    let n = w.dim();
    let rank = rank.clamp(1, n);
    let g = ComplexMatrix::random_gaussian(n, rng);
    // keep the first `rank` columns
    let mut factor = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..rank {
            factor[(i, j)] = g[(i, j)];
        }
    }
    let mut rho = factor.cogram();
    let norm = trace_product(&rho, w.a()).re;
    rho.scale_mut(1.0 / norm);
    AState { rho, weight: w }
}

/// `cos θ·H₀ − sin θ·H₁ = Re(e^{iθ}x)`.
struct RotatedHermitian {
    h0: ComplexMatrix,
    h1: ComplexMatrix,
}

impl RotatedHermitian {
    fn new(x: &ComplexMatrix) -> Self {
        let xs = x.adjoint();
        let h0 = (x + &xs).scale(0.5);
        let h1 = (x - &xs).scale_complex(C64::new(0.0, -0.5));
        let (mut h0, mut h1) = (h0, h1);
        h0.symmetrize();
        h1.symmetrize();
        Self { h0, h1 }
    }

    fn at(&self, theta: f64) -> ComplexMatrix {
        self.h0.lin_comb(theta.cos(), &self.h1, -theta.sin())
    }
}

/// `v(x) = max_θ λ_max(Re(e^{iθ}x))`.
///
/// A uniform θ grid locates the peaks; the best few are refined by golden
/// section to width `√tol`, which bounds the error by `‖x‖·tol/2`.
pub fn numerical_radius(x: &ComplexMatrix, tol: f64) -> Result<f64> {
    x.ensure_finite()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if x.dim() == 1 {
        return Ok(x[(0, 0)].norm());
    }
    let rot = RotatedHermitian::new(x);
    let step = 2.0 * PI / SWEEP_GRID as f64;
    let half = SWEEP_GRID / 2;
    let mut g = vec![0.0; SWEEP_GRID];
    // Re(e^{i(θ+π)}x) = −Re(e^{iθ}x): one reduction serves both angles
    for k in 0..half {
        let (lo, hi) = extreme_eigenvalues(&rot.at(k as f64 * step), GRID_EIG_TOL);
        g[k] = hi;
        g[k + half] = -lo;
    }
    let mut peaks: Vec<usize> = (0..SWEEP_GRID)
        .filter(|&i| {
            let prev = g[(i + SWEEP_GRID - 1) % SWEEP_GRID];
            let next = g[(i + 1) % SWEEP_GRID];
            g[i] >= prev && g[i] >= next
        })
        .collect();
    peaks.sort_by(|&i, &j| g[j].total_cmp(&g[i]).then(i.cmp(&j)));
    peaks.truncate(REFINED_PEAKS);

    let width = tol.sqrt().max(1e-12);
    let eval = |theta: f64| max_eigenvalue(&rot.at(theta));
    let mut best = 0.0f64;
    for &i in &peaks {
        let center = i as f64 * step;
        best = best.max(golden_max(&eval, center - step, center + step, width, eval(center)));
    }
    Ok(best.max(0.0))
}

/// Golden-section search for a maximum on `[a, b]`; returns the best value
/// seen, seeded with `initial`.
fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64, initial: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = initial.max(fc).max(fd);
    while b - a > width {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            best = best.max(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            best = best.max(fd);
        }
    }
    best
}

/// Boundary points `u*xu` of the numerical range, `u` the top eigenvector of
/// `Re(e^{iθ}x)` on a uniform θ grid. Returns `(θ, point)` pairs.
pub fn numerical_range_boundary(x: &ComplexMatrix, n_points: usize) -> Result<Vec<(f64, C64)>> {
    x.ensure_finite()?;
    if n_points < 3 {
        return Err(Error::InvalidParameter(format!(
            "at least 3 boundary points required, got {n_points}"
        )));
    }
    let rot = RotatedHermitian::new(x);
    let n = x.dim();
    (0..n_points)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n_points as f64;
            let eig = hermitian_eig(&rot.at(theta))?;
            let u = eig.eigenvectors.column(n - 1);
            Ok((theta, x.quadratic_form(&u)))
        })
        .collect()
}

/// `x^{#a} = a⁻¹x*a`.
pub fn a_adjoint(x: &ComplexMatrix, w: &Weight) -> Result<ComplexMatrix> {
    w.a().ensure_same_dim(x)?;
    if w.is_identity() {
        return Ok(x.adjoint());
    }
    Ok(w.inv_a().matmul(&x.adjoint()).matmul(w.a()))
}

/// `‖x‖_a = ‖a^{1/2}xa^{-1/2}‖`.
pub fn a_seminorm(x: &ComplexMatrix, w: &Weight) -> Result<f64> {
    operator_norm(&w.reduce(x)?)
}

/// `v_a(x) = v(a^{1/2}xa^{-1/2})`.
pub fn a_numerical_radius(x: &ComplexMatrix, w: &Weight, tol: f64) -> Result<f64> {
    numerical_radius(&w.reduce(x)?, tol)
}

/// `ax` Hermitian, relative to `‖ax‖`.
pub fn is_a_selfadjoint(x: &ComplexMatrix, w: &Weight, tol: f64) -> bool {
    if w.a().ensure_same_dim(x).is_err() {
        return false;
    }
    let ax = w.a().matmul(x);
    ax.hermitian_defect() <= tol * ax.frobenius_norm()
}

/// `ax` Hermitian and positive semidefinite, relative to `‖ax‖`.
pub fn is_a_positive(x: &ComplexMatrix, w: &Weight, tol: f64) -> bool {
    if !is_a_selfadjoint(x, w, tol) {
        return false;
    }
    let mut ax = w.a().matmul(x);
    ax.symmetrize();
    let scale = ax.frobenius_norm();
    min_eigenvalue(&ax) >= -tol * scale
}
