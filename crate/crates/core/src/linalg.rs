//! Dense complex linear-algebra helpers shared by the numerics modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(c)
}

pub fn trace(m: &CMat) -> C64 {
    m.diagonal().iter().sum()
}

/// `Tr(a b)` without forming the product.
pub fn trace_of_product(a: &CMat, b: &CMat) -> C64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let mut s = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// `q^T m q` for real orthogonal `q`.
pub fn conjugate_by_real(q: &RMat, m: &CMat) -> CMat {
    let re = q.transpose() * m.map(|z| z.re) * q;
    let im = q.transpose() * m.map(|z| z.im) * q;
    CMat::from_fn(re.nrows(), re.ncols(), |i, j| C64::new(re[(i, j)], im[(i, j)]))
}

/// `q m q^T` for real orthogonal `q`.
pub fn unconjugate_by_real(q: &RMat, m: &CMat) -> CMat {
    let re = q * m.map(|z| z.re) * q.transpose();
    let im = q * m.map(|z| z.im) * q.transpose();
    CMat::from_fn(re.nrows(), re.ncols(), |i, j| C64::new(re[(i, j)], im[(i, j)]))
}

pub fn real_matvec(q: &RMat, v: &CVec) -> CVec {
    let re = q * v.map(|z| z.re);
    let im = q * v.map(|z| z.im);
    CVec::from_fn(re.len(), |i, _| C64::new(re[i], im[i]))
}

pub fn real_tr_matvec(q: &RMat, v: &CVec) -> CVec {
    let re = q.tr_mul(&v.map(|z| z.re));
    let im = q.tr_mul(&v.map(|z| z.im));
    CVec::from_fn(re.len(), |i, _| C64::new(re[i], im[i]))
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix (ascending eigenvalues are not
/// guaranteed).
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let e = SymmetricEigen::new(hermitian_part(m));
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitian_part(m)).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Applies `f` to the spectrum of Hermitian `m`.
pub fn hermitian_fn(m: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let (vals, vecs) = eigh(m);
    let fd = CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&x| f(x))));
    &vecs * fd * vecs.adjoint()
}

pub fn sqrt_psd(m: &CMat) -> CMat {
    hermitian_fn(m, |x| c(x.max(0.0).sqrt()))
}

/// `exp(-i t h)` for Hermitian `h`.
pub fn expm_hermitian(h: &CMat, t: f64) -> CMat {
    hermitian_fn(h, |x| C64::from_polar(1.0, -t * x))
}

/// Schatten-1 norm of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &CMat) -> f64 {
    eigvalsh(m).iter().map(|x| x.abs()).sum()
}

/// Schatten-1 norm of a general matrix (sum of singular values).
pub fn trace_norm(m: &CMat) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn unitarity_defect(u: &CMat) -> f64 {
    frobenius(&(u.adjoint() * u - CMat::identity(u.ncols(), u.ncols())))
}

/// Reduced density matrix of a pure state on subsystems with local
/// dimensions `dims` (first entry most significant), keeping `keep` in the
/// listed order.
pub fn reduced_density(psi: &CVec, dims: &[usize], keep: &[usize]) -> CMat {
    let total: usize = dims.iter().product();
    assert_eq!(psi.len(), total, "state length does not match subsystem dimensions");
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let dk: usize = keep.iter().map(|&i| dims[i]).product();
    let dt: usize = traced.iter().map(|&i| dims[i]).product();
    let strides: Vec<usize> = (0..dims.len()).map(|i| dims[i + 1..].iter().product()).collect();
    let offsets = |sel: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &s in sel.iter().rev() {
            off += (idx % dims[s]) * strides[s];
            idx /= dims[s];
        }
        off
    };
    let keep_off: Vec<usize> = (0..dk).map(|i| offsets(keep, i)).collect();
    let trace_off: Vec<usize> = (0..dt).map(|i| offsets(&traced, i)).collect();
    // psi as a dk x dt matrix
    let m = CMat::from_fn(dk, dt, |i, j| psi[keep_off[i] + trace_off[j]]);
    &m * m.adjoint()
}

/// Partial trace of a density matrix, keeping `keep` (in the listed order).
pub fn partial_trace(rho: &CMat, dims: &[usize], keep: &[usize]) -> CMat {
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let dk: usize = keep.iter().map(|&i| dims[i]).product();
    let dt: usize = traced.iter().map(|&i| dims[i]).product();
    let strides: Vec<usize> = (0..dims.len()).map(|i| dims[i + 1..].iter().product()).collect();
    let offsets = |sel: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &s in sel.iter().rev() {
            off += (idx % dims[s]) * strides[s];
            idx /= dims[s];
        }
        off
    };
    let keep_off: Vec<usize> = (0..dk).map(|i| offsets(keep, i)).collect();
    let trace_off: Vec<usize> = (0..dt).map(|i| offsets(&traced, i)).collect();
    CMat::from_fn(dk, dk, |i, j| {
        trace_off.iter().map(|&t| rho[(keep_off[i] + t, keep_off[j] + t)]).sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_trace_of_product_state() {
        let a = CMat::from_row_slice(2, 2, &[c(0.7), C64::new(0.1, 0.2), C64::new(0.1, -0.2), c(0.3)]);
        let b = CMat::from_row_slice(2, 2, &[c(0.4), c(0.0), c(0.0), c(0.6)]);
        let ab = kron(&a, &b);
        assert!(max_abs_diff(&partial_trace(&ab, &[2, 2], &[0]), &a) < 1e-14);
        assert!(max_abs_diff(&partial_trace(&ab, &[2, 2], &[1]), &b) < 1e-14);
        let ba = kron(&b, &a);
        assert!(max_abs_diff(&partial_trace(&ab, &[2, 2], &[1, 0]), &ba) < 1e-14);
    }

    #[test]
    fn reduced_density_agrees_with_partial_trace() {
        let psi = CVec::from_iterator(8, (0..8).map(|i| C64::new(i as f64, (i * i) as f64 * 0.1)));
        let psi = psi.normalize();
        let rho = &psi * psi.adjoint();
        for keep in [vec![0], vec![2], vec![2, 0], vec![1, 2]] {
            let a = reduced_density(&psi, &[2, 2, 2], &keep);
            let b = partial_trace(&rho, &[2, 2, 2], &keep);
            assert!(max_abs_diff(&a, &b) < 1e-13);
        }
    }

    #[test]
    fn trace_norm_routes_agree() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0), C64::new(0.0, 2.0), C64::new(0.0, -2.0), c(-0.5)]);
        assert!((trace_norm(&m) - trace_norm_hermitian(&m)).abs() < 1e-12);
    }
}
