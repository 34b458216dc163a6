//! Small complex linear-algebra layer.
//!
//! `CVec` and `CMat` wrap `nalgebra` dense storage and only expose what the
//! rate and beamformer code needs: inner products, projections onto
//! orthogonal complements, Hermitian quadratic forms and a null-space basis.

use std::ops::{Add, Index, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative rank tolerance for [`null_space_basis`].
pub const RANK_TOL: f64 = 1e-10;

/// Relative eigenvalue floor for [`CMat::psd_factor`].
pub const PSD_FACTOR_TOL: f64 = 1e-14;

/// Complex column vector with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CVec(DVector<C64>);

/// Dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat(DMatrix<C64>);

impl CVec {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(CVec(DVector::from_vec(entries)))
    }

    pub fn from_parts(parts: &[(f64, f64)]) -> Result<Self> {
        Self::new(parts.iter().map(|&(re, im)| C64::new(re, im)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        CVec(DVector::zeros(dim))
    }

    /// Unit vector `e_k` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        CVec(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: C64) -> CVec {
        CVec(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> CVec {
        self.scale(C64::new(s, 0.0))
    }

    /// `self / ‖self‖`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<CVec> {
        let n = self.norm();
        if n > 0.0 {
            Some(self.scale_real(1.0 / n))
        } else {
            None
        }
    }

    /// The rank-one covariance `v vᴴ`.
    pub fn outer(&self) -> CMat {
        CMat(&self.0 * self.0.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<usize> for CVec {
    type Output = C64;

    fn index(&self, k: usize) -> &C64 {
        &self.0[k]
    }
}

impl Add for &CVec {
    type Output = CVec;

    fn add(self, rhs: &CVec) -> CVec {
        CVec(&self.0 + &rhs.0)
    }
}

impl Sub for &CVec {
    type Output = CVec;

    fn sub(self, rhs: &CVec) -> CVec {
        CVec(&self.0 - &rhs.0)
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `aᴴ b`, conjugate-linear in `a`.
pub fn inner(a: &CVec, b: &CVec) -> Result<C64> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.0.dotc(&b.0))
}

/// `(I − â âᴴ) target` with `â = anchor / ‖anchor‖`.
pub fn project_complement(target: &CVec, anchor: &CVec) -> Result<CVec> {
    check_dims(anchor.dim(), target.dim())?;
    let unit = anchor.normalized().ok_or(Error::ZeroAnchor)?;
    let coeff = unit.0.dotc(&target.0);
    Ok(CVec(&target.0 - &unit.0 * coeff))
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        CMat(DMatrix::identity(n, n))
    }

    /// Builds a matrix from row vectors; every row must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for row in rows {
            check_dims(ncols, row.len())?;
        }
        let m = DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(CMat(m))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[CVec]) -> Result<Self> {
        let Some(first) = cols.first() else {
            return Err(Error::EmptyVector);
        };
        for c in cols {
            check_dims(first.dim(), c.dim())?;
        }
        let parts: Vec<_> = cols.iter().map(|c| c.0.clone()).collect();
        Ok(CMat(DMatrix::from_columns(&parts)))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.0.row(i).iter().copied().collect()
    }

    pub fn column(&self, j: usize) -> CVec {
        CVec(self.0.column(j).into_owned())
    }

    pub fn adjoint(&self) -> CMat {
        CMat(self.0.adjoint())
    }

    pub fn mul_vec(&self, v: &CVec) -> Result<CVec> {
        check_dims(self.cols(), v.dim())?;
        Ok(CVec(&self.0 * &v.0))
    }

    pub fn matmul(&self, rhs: &CMat) -> Result<CMat> {
        check_dims(self.cols(), rhs.rows())?;
        Ok(CMat(&self.0 * &rhs.0))
    }

    pub fn scale_real(&self, s: f64) -> CMat {
        CMat(&self.0 * C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Real quadratic form `vᴴ M v` for Hermitian `M`.
    pub fn quad_form(&self, v: &CVec) -> Result<f64> {
        check_dims(self.cols(), v.dim())?;
        check_dims(self.rows(), v.dim())?;
        Ok(v.0.dotc(&(&self.0 * &v.0)).re)
    }

    /// Smallest eigenvalue of the Hermitian part of a square matrix.
    pub fn min_hermitian_eigenvalue(&self) -> f64 {
        if self.rows() == 0 {
            return 0.0;
        }
        let herm = (&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().min()
    }

    /// Factor `F` with `F Fᴴ` equal to the PSD part of the Hermitian part.
    ///
    /// Products `A F` avoid the cancellation of forming `A · self` when
    /// `self` nearly lies in the kernel of `A`.
    pub fn psd_factor(&self) -> CMat {
        let herm = (&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        // eigenvalues at round-off level are zero, not tiny positive mass
        let floor = PSD_FACTOR_TOL * eig.eigenvalues.amax();
        let mut f = eig.eigenvectors;
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let keep = if lambda > floor { lambda.sqrt() } else { 0.0 };
            f.column_mut(k).scale_mut(keep);
        }
        CMat(f)
    }

    /// Solves `self · x = rhs` for Hermitian positive definite `self`.
    pub fn solve_hpd(&self, rhs: &CVec) -> Option<CVec> {
        let chol = self.0.clone().cholesky()?;
        Some(CVec(chol.solve(&rhs.0)))
    }
}

impl Add for &CMat {
    type Output = CMat;

    fn add(self, rhs: &CMat) -> CMat {
        CMat(&self.0 + &rhs.0)
    }
}

impl Mul<f64> for &CMat {
    type Output = CMat;

    fn mul(self, s: f64) -> CMat {
        self.scale_real(s)
    }
}

/// Numerical rank with singular values below `RANK_TOL · σ_max` treated as zero.
pub fn rank(m: &CMat) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let sv = m.0.clone().singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOL * smax).count()
}

/// Orthonormal basis of `{x : m x = 0}` as the columns of the result.
///
/// The matrix is zero-padded to square so the SVD yields a full right
/// singular basis; the trailing `N_t − rank` right singular vectors span the
/// kernel. Returns an `N_t × 0` matrix when the kernel is trivial.
pub fn null_space_basis(m: &CMat) -> CMat {
    let nt = m.cols();
    if nt == 0 {
        return CMat::zeros(0, 0);
    }
    let n = nt.max(m.rows());
    let mut padded = DMatrix::<C64>::zeros(n, nt);
    padded.view_mut((0, 0), (m.rows(), nt)).copy_from(&m.0);

    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let smax = svd.singular_values.max();

    let mut kernel = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if smax == 0.0 || s <= RANK_TOL * smax {
            // row k of Vᴴ, conjugated, is the k-th right singular vector
            kernel.push(v_t.row(k).adjoint());
        }
    }
    if kernel.is_empty() {
        return CMat::zeros(nt, 0);
    }
    CMat(DMatrix::from_columns(&kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn inner_examples() {
        let e1 = CVec::from_parts(&[(1.0, 0.0), (0.0, 0.0)]).unwrap();
        let e2 = CVec::from_parts(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        assert_eq!(inner(&e1, &e2).unwrap(), c(0.0, 0.0));

        let i = CVec::from_parts(&[(0.0, 1.0), (0.0, 0.0)]).unwrap();
        assert_eq!(inner(&i, &i).unwrap(), c(1.0, 0.0));

        // conj(1+i)*3 + conj(2)*(1-i) = 3-3i + 2-2i
        let a = CVec::from_parts(&[(1.0, 1.0), (2.0, 0.0)]).unwrap();
        let b = CVec::from_parts(&[(3.0, 0.0), (1.0, -1.0)]).unwrap();
        assert_eq!(inner(&a, &b).unwrap(), c(5.0, -5.0));
    }

    #[test]
    fn inner_rejects_dimension_mismatch() {
        let a = CVec::zeros(2);
        let b = CVec::zeros(3);
        assert!(matches!(
            inner(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn new_rejects_empty_and_nan() {
        assert!(matches!(CVec::new(vec![]), Err(Error::EmptyVector)));
        assert!(CVec::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(CVec::new(vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn projection_examples() {
        let t = CVec::from_parts(&[(1.0, 0.0), (1.0, 0.0)]).unwrap();
        let a = CVec::from_parts(&[(1.0, 0.0), (0.0, 0.0)]).unwrap();
        let p = project_complement(&t, &a).unwrap();
        assert_eq!(p.entries(), &[c(0.0, 0.0), c(1.0, 0.0)]);

        let p = project_complement(&a, &a).unwrap();
        assert!(p.norm() < 1e-15);
    }

    #[test]
    fn projection_residual_is_parallel_to_anchor() {
        let t = CVec::from_parts(&[(1.0, 1.0), (2.0, -1.0), (0.5, 0.0)]).unwrap();
        let a = CVec::from_parts(&[(0.3, 0.0), (-1.0, 0.0), (0.0, 2.0)]).unwrap();
        let p = project_complement(&t, &a).unwrap();
        assert!(inner(&a, &p).unwrap().norm() <= 1e-10 * t.norm() * a.norm());

        // t − p = λ a for λ = aᴴ(t−p)/‖a‖²
        let d = &t - &p;
        let lambda = inner(&a, &d).unwrap() / a.norm_sq();
        let resid = &d - &a.scale(lambda);
        assert!(resid.norm() < 1e-12);
    }

    #[test]
    fn projection_rejects_zero_anchor() {
        let t = CVec::from_parts(&[(1.0, 0.0)]).unwrap();
        let z = CVec::zeros(1);
        assert!(matches!(project_complement(&t, &z), Err(Error::ZeroAnchor)));
    }

    #[test]
    fn null_space_of_coordinate_functional() {
        let m = CMat::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let v = null_space_basis(&m);
        assert_eq!((v.rows(), v.cols()), (2, 1));
        assert!(v.get(0, 0).norm() < 1e-12);
        assert!((v.get(1, 0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn null_space_of_wide_matrix_is_annihilated() {
        let rows: Vec<Vec<C64>> = (0..2)
            .map(|i| (0..5).map(|j| c((i * 5 + j) as f64 * 0.37 - 1.1, ((i + 2 * j) % 3) as f64 - 0.9)).collect())
            .collect();
        let m = CMat::from_rows(&rows).unwrap();
        let v = null_space_basis(&m);
        assert_eq!(v.cols(), 3);
        let mv = m.matmul(&v).unwrap();
        assert!(mv.frobenius() < 1e-12 * m.frobenius(), "{}", mv.frobenius());
        let gram = v.adjoint().matmul(&v).unwrap();
        assert!((&gram + &CMat::identity(3).scale_real(-1.0)).frobenius() < 1e-12);
    }

    #[test]
    fn psd_factor_reproduces_matrix() {
        let v = CVec::from_parts(&[(1.0, 2.0), (-0.5, 0.25), (0.0, 1.0)]).unwrap();
        let q = v.outer();
        let f = q.psd_factor();
        let back = f.matmul(&f.adjoint()).unwrap();
        assert!((&back + &q.scale_real(-1.0)).frobenius() < 1e-12);
    }

    #[test]
    fn null_space_of_identity_is_empty() {
        let v = null_space_basis(&CMat::identity(2));
        assert_eq!((v.rows(), v.cols()), (2, 0));
    }

    #[test]
    fn null_space_of_zero_is_everything() {
        let v = null_space_basis(&CMat::zeros(2, 3));
        assert_eq!(v.cols(), 3);
        let gram = v.adjoint().matmul(&v).unwrap();
        let eye = CMat::identity(3);
        let diff = &gram + &eye.scale_real(-1.0);
        assert!(diff.frobenius() < 1e-12);
    }

    #[test]
    fn min_eigenvalue_of_diagonal() {
        let m = CMat::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-0.5, 0.0)],
        ])
        .unwrap();
        assert!((m.min_hermitian_eigenvalue() + 0.5).abs() < 1e-14);
    }
}
