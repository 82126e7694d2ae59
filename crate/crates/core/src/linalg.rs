//! Dense Hermitian spectral calculus.
//!
//! Full eigendecompositions use cyclic complex Jacobi rotations. Extreme
//! eigenvalues alone (the hot path of the numerical-radius sweep) go through
//! Householder tridiagonalization followed by Sturm bisection.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::orlicz::OrliczFn;

/// Relative off-diagonal mass at which Jacobi sweeps stop.
const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;
/// Negative eigenvalues down to `-PSD_CLAMP·‖H‖` are treated as zero.
pub const PSD_CLAMP: f64 = 1e-12;

/// Eigendecomposition `H = V·diag(λ)·V*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns.
    pub eigenvectors: ComplexMatrix,
}

impl HermEig {
    /// Rebuilds `V·diag(f(λ))·V*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &fk) in fl.iter().enumerate() {
                    if fk != 0.0 {
                        acc += v[(i, k)] * v[(j, k)].conj() * fk;
                    }
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    h.ensure_finite()?;
    let defect = h.hermitian_defect();
    if defect > 1e-10 * (1.0 + h.frobenius_norm()) {
        return Err(Error::NotHermitian { asymmetry: defect });
    }
    Ok(())
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermEig> {
    check_hermitian(h)?;
    let n = h.dim();
    let mut a = h.clone();
    a.symmetrize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= JACOBI_TOL * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(HermEig {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// The unitary is `G = D·R` where `D` rotates the phase of column `q` so the
/// pivot becomes real and `R` is the classical real rotation.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // skip pivots that are already below roundoff of both diagonal entries
    if abs < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / abs;
    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();
    let n = a.dim();

    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * ph_conj * s;
        a[(k, q)] = akp * s + akq * ph_conj * c;
    }
    // A <- G* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * ph_conj * s;
        v[(k, q)] = vkp * s + vkq * ph_conj * c;
    }
}

/// Real symmetric tridiagonal form of a Hermitian matrix: diagonal and
/// (nonnegative) sub-diagonal.
fn tridiagonalize(h: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.dim();
    let mut a = h.clone();
    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut p = vec![C64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let m = k + 1;
        let norm: f64 = (m..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(m, k)];
        let x0_abs = x0.norm();
        let unit = if x0_abs > 0.0 { x0 / x0_abs } else { C64::new(1.0, 0.0) };
        let alpha = -unit * norm;
        // v = x - alpha e1, then normalize
        for i in m..n {
            v[i] = a[(i, k)];
        }
        v[m] -= alpha;
        let vnorm: f64 = (m..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in v[m..n].iter_mut() {
            *vi /= vnorm;
        }
        a[(m, k)] = alpha;
        a[(k, m)] = alpha.conj();
        for i in (m + 1)..n {
            a[(i, k)] = C64::new(0.0, 0.0);
            a[(k, i)] = C64::new(0.0, 0.0);
        }
        // trailing block: A <- H A H with H = I - 2 v v*
        for i in m..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in m..n {
                acc += a[(i, j)] * v[j];
            }
            p[i] = acc;
        }
        let kappa: f64 = (m..n).map(|i| (v[i].conj() * p[i]).re).sum();
        for i in m..n {
            p[i] -= v[i] * kappa;
        }
        for i in m..n {
            for j in m..n {
                a[(i, j)] -= (v[i] * p[j].conj() + p[i] * v[j].conj()) * 2.0;
            }
        }
    }
    let diag = (0..n).map(|i| a[(i, i)].re).collect();
    let off = (0..n.saturating_sub(1)).map(|i| a[(i + 1, i)].norm()).collect();
    (diag, off)
}

/// Number of eigenvalues of the tridiagonal `(d, e)` strictly below `sigma`.
fn sturm_count(d: &[f64], e: &[f64], sigma: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - sigma;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        q = d[i] - sigma - e[i - 1] * e[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// `k`-th smallest eigenvalue (0-based) of a symmetric tridiagonal matrix.
/// Bisection stops once the bracket is below `rel_tol·span` (at least 2ε).
fn tridiagonal_eigenvalue(d: &[f64], e: &[f64], k: usize, rel_tol: f64) -> f64 {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1] } else { 0.0 } + if i + 1 < n { e[i] } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let span = hi.abs().max(lo.abs());
    let pivmin = f64::MIN_POSITIVE.max(span * 1e-300);
    lo -= 2.0 * f64::EPSILON * span + pivmin;
    hi += 2.0 * f64::EPSILON * span + pivmin;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hi - lo <= rel_tol.max(2.0 * f64::EPSILON) * span.max(f64::MIN_POSITIVE) {
            break;
        }
        if sturm_count(d, e, mid, pivmin) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn closed_form_2x2(h: &ComplexMatrix) -> (f64, f64) {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = h[(0, 1)];
    let mean = 0.5 * (a + d);
    let rad = (0.5 * (a - d)).hypot(b.norm());
    (mean - rad, mean + rad)
}

/// Largest eigenvalue of a Hermitian matrix. The input is assumed Hermitian;
/// only its lower triangle and real diagonal are read.
pub fn max_eigenvalue(h: &ComplexMatrix) -> f64 {
    match h.dim() {
        1 => h[(0, 0)].re,
        2 => closed_form_2x2(h).1,
        n => {
            let (d, e) = tridiagonalize(h);
            tridiagonal_eigenvalue(&d, &e, n - 1, 0.0)
        }
    }
}

/// Smallest eigenvalue of a Hermitian matrix (same contract as [`max_eigenvalue`]).
pub fn min_eigenvalue(h: &ComplexMatrix) -> f64 {
    match h.dim() {
        1 => h[(0, 0)].re,
        2 => closed_form_2x2(h).0,
        _ => {
            let (d, e) = tridiagonalize(h);
            tridiagonal_eigenvalue(&d, &e, 0, 0.0)
        }
    }
}

/// `(λ_min, λ_max)` of a Hermitian matrix from one reduction, each to
/// relative accuracy `rel_tol` of the spectral span.
pub fn extreme_eigenvalues(h: &ComplexMatrix, rel_tol: f64) -> (f64, f64) {
    match h.dim() {
        1 => (h[(0, 0)].re, h[(0, 0)].re),
        2 => closed_form_2x2(h),
        n => {
            let (d, e) = tridiagonalize(h);
            (
                tridiagonal_eigenvalue(&d, &e, 0, rel_tol),
                tridiagonal_eigenvalue(&d, &e, n - 1, rel_tol),
            )
        }
    }
}

/// Spectral (operator 2-) norm `sqrt(λ_max(x*x))`.
pub fn operator_norm(x: &ComplexMatrix) -> Result<f64> {
    x.ensure_finite()?;
    Ok(max_eigenvalue(&x.gram()).max(0.0).sqrt())
}

/// Eigendecomposition of a PSD matrix with slightly negative eigenvalues
/// clamped to zero.
fn psd_eig(h: &ComplexMatrix) -> Result<HermEig> {
    let mut eig = hermitian_eig(h)?;
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    for l in eig.eigenvalues.iter_mut() {
        if *l < 0.0 {
            if *l < -PSD_CLAMP * scale {
                return Err(Error::NotPsd { eigenvalue: *l });
            }
            *l = 0.0;
        }
    }
    Ok(eig)
}

/// `|x| = (x*x)^{1/2}`.
pub fn matrix_abs(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.ensure_finite()?;
    Ok(psd_eig(&x.gram())?.map(f64::sqrt))
}

/// `H^α` for PSD `H` and `α ≥ 0`, with `0⁰ = 1` on the clamped spectrum.
pub fn psd_power(h: &ComplexMatrix, alpha: f64) -> Result<ComplexMatrix> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "power exponent must be finite and nonnegative, got {alpha}"
        )));
    }
    let eig = psd_eig(h)?;
    Ok(eig.map(|l| if alpha == 0.0 { 1.0 } else { l.powf(alpha) }))
}

/// `φ(H)` for PSD `H` through the spectral decomposition.
pub fn matrix_func(h: &ComplexMatrix, phi: &OrliczFn) -> Result<ComplexMatrix> {
    let eig = psd_eig(h)?;
    Ok(eig.map(|l| phi.eval(l)))
}

/// Unitary factor `u` of the polar decomposition `x = u|x|` (x invertible).
pub fn polar_unitary(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.ensure_finite()?;
    let eig = hermitian_eig(&x.gram())?;
    let norm = eig.max().max(0.0).sqrt();
    let sigma_min = eig.min().max(0.0).sqrt();
    if norm == 0.0 || sigma_min <= 1e-12 * norm {
        return Err(Error::Singular { sigma_min });
    }
    let inv_abs = eig.map(|l| 1.0 / l.sqrt());
    Ok(x.matmul(&inv_abs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn diag(d: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(d).unwrap()
    }

    #[test]
    fn diagonal_input_is_already_diagonal() {
        let eig = hermitian_eig(&diag(&[1.0, 2.0])).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0]);
        assert!(eig.eigenvectors.distance(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn swap_matrix_eigenvectors() {
        let h = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // up to phase: |<v, (1, ∓1)/√2>| = 1
        let v0 = eig.eigenvectors.column(0);
        let v1 = eig.eigenvectors.column(1);
        let d0 = (v0[0] * s - v0[1] * s).norm();
        let d1 = (v1[0] * s + v1[1] * s).norm();
        assert!((d0 - 1.0).abs() < 1e-14 && (d1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [3usize, 5, 8, 16] {
            let h = ComplexMatrix::random_hermitian(n, &mut rng);
            let eig = hermitian_eig(&h).unwrap();
            let norm = operator_norm(&h).unwrap();
            assert!(eig.reconstruct().distance(&h) <= 1e-12 * norm, "n={n}");
            let vv = eig.eigenvectors.gram();
            assert!(vv.distance(&ComplexMatrix::identity(n)) <= 1e-12);
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn bisection_matches_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=12 {
            for _ in 0..5 {
                let h = ComplexMatrix::random_hermitian(n, &mut rng);
                let eig = hermitian_eig(&h).unwrap();
                let scale = 1.0 + eig.max().abs().max(eig.min().abs());
                assert!((max_eigenvalue(&h) - eig.max()).abs() < 1e-13 * scale, "n={n}");
                assert!((min_eigenvalue(&h) - eig.min()).abs() < 1e-13 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_and_nan() {
        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&x), Err(Error::NotHermitian { .. })));
        let mut y = ComplexMatrix::identity(2);
        y[(0, 0)] = c(f64::INFINITY, 0.0);
        assert!(operator_norm(&y).is_err());
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(&diag(&[3.0, -4.0])).unwrap(), 4.0);
        let j = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(operator_norm(&j).unwrap(), 1.0);
    }

    #[test]
    fn operator_norm_squared_is_top_gram_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=7 {
            let x = ComplexMatrix::random_gaussian(n, &mut rng);
            let top = hermitian_eig(&x.gram()).unwrap().max();
            assert!((operator_norm(&x).unwrap().powi(2) - top).abs() < 1e-10);
        }
    }

    #[test]
    fn abs_examples() {
        let a = matrix_abs(&diag(&[-2.0, 3.0])).unwrap();
        assert!(a.distance(&diag(&[2.0, 3.0])) < 1e-14);
        let j = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matrix_abs(&j).unwrap().distance(&diag(&[0.0, 1.0])) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = ComplexMatrix::random_gaussian(4, &mut rng);
        let u = polar_unitary(&x).unwrap();
        assert!(matrix_abs(&u).unwrap().distance(&ComplexMatrix::identity(4)) < 1e-12);
        let ax = matrix_abs(&x).unwrap();
        let n2 = operator_norm(&x).unwrap().powi(2);
        assert!((&ax * &ax).distance(&x.gram()) <= 1e-10 * n2);
    }

    #[test]
    fn power_examples() {
        let h = diag(&[4.0, 9.0]);
        assert!(psd_power(&h, 0.5).unwrap().distance(&diag(&[2.0, 3.0])) < 1e-14);
        assert!(psd_power(&h, 1.5).unwrap().distance(&diag(&[8.0, 27.0])) < 1e-12);
        let singular = diag(&[0.0, 2.0]);
        assert!(psd_power(&singular, 0.0)
            .unwrap()
            .distance(&ComplexMatrix::identity(2))
            < 1e-15);
        assert!(matches!(psd_power(&diag(&[-1.0, 1.0]), 0.5), Err(Error::NotPsd { .. })));
        // roundoff-level negatives are clamped
        assert!(psd_power(&diag(&[-1e-15, 1.0]), 0.5).is_ok());
    }

    #[test]
    fn func_examples() {
        let sq = OrliczFn::power(2.0);
        assert!(matrix_func(&diag(&[1.0, 2.0]), &sq).unwrap().distance(&diag(&[1.0, 4.0])) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = ComplexMatrix::random_gaussian(4, &mut rng);
        let h = g.gram();
        let lin = OrliczFn::power(1.0);
        assert!(matrix_func(&h, &lin).unwrap().distance(&h) < 1e-12 * h.frobenius_norm());
        // direct product oracle for t³/3
        let cube = OrliczFn::power_scaled(3.0);
        let direct = (&(&h * &h) * &h).scale(1.0 / 3.0);
        let via_spectrum = matrix_func(&h, &cube).unwrap();
        assert!(via_spectrum.distance(&direct) < 1e-10 * direct.frobenius_norm().max(1.0));
    }

    #[test]
    fn polar_examples() {
        let x = ComplexMatrix::from_diag(&[c(-2.0, 0.0), c(0.0, 3.0)]).unwrap();
        let u = polar_unitary(&x).unwrap();
        let expected = ComplexMatrix::from_diag(&[c(-1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(u.distance(&expected) < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = ComplexMatrix::random_gaussian(3, &mut rng);
        let pd = &g.gram() + &ComplexMatrix::identity(3);
        assert!(polar_unitary(&pd).unwrap().distance(&ComplexMatrix::identity(3)) < 1e-12);

        let singular = diag(&[1.0, 0.0]);
        assert!(matches!(polar_unitary(&singular), Err(Error::Singular { .. })));
    }

    #[test]
    fn polar_residuals_and_power_transport() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let x = ComplexMatrix::random_gaussian(4, &mut rng);
            let norm = operator_norm(&x).unwrap();
            let u = polar_unitary(&x).unwrap();
            let abs = matrix_abs(&x).unwrap();
            assert!(u.gram().distance(&ComplexMatrix::identity(4)) <= 1e-10 * norm.max(1.0));
            assert!((&u * &abs).distance(&x) <= 1e-10 * norm);
            let abs_adj = matrix_abs(&x.adjoint()).unwrap();
            for alpha in [0.5, 1.0, 2.0] {
                let lhs = psd_power(&abs, alpha).unwrap().conjugate_by(&u);
                let rhs = psd_power(&abs_adj, alpha).unwrap();
                assert!(lhs.distance(&rhs) <= 1e-9 * norm.powf(alpha).max(1.0));
            }
        }
    }
}
