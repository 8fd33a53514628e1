//! Small dense complex linear-algebra helpers shared by the physics modules.

use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Mat2 = Matrix2<Complex64>;
pub type Mat4 = Matrix4<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrices (σ₁, σ₂, σ₃).
pub fn pauli() -> [Mat2; 3] {
    [
        Mat2::new(ZERO, ONE, ONE, ZERO),
        Mat2::new(ZERO, -I, I, ZERO),
        Mat2::new(ONE, ZERO, ZERO, -ONE),
    ]
}

/// σ·v for a real 3-vector.
pub fn sigma_dot(v: [f64; 3]) -> Mat2 {
    let s = pauli();
    s[0] * c(v[0], 0.0) + s[1] * c(v[1], 0.0) + s[2] * c(v[2], 0.0)
}

/// Assemble a 4×4 matrix from 2×2 blocks `[[a, b], [c, d]]`.
pub fn blocks(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

pub fn commutator<M>(a: &M, b: &M) -> M
where
    for<'x> &'x M: std::ops::Mul<&'x M, Output = M> + std::ops::Sub<&'x M, Output = M>,
    M: std::ops::Sub<M, Output = M>,
{
    a * b - b * a
}

/// Largest entry modulus of a complex matrix of any shape.
pub fn max_abs<R, Cc, S>(m: &nalgebra::Matrix<C64, R, Cc, S>) -> f64
where
    R: nalgebra::Dim,
    Cc: nalgebra::Dim,
    S: nalgebra::RawStorage<C64, R, Cc>,
{
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest entry-wise distance between two matrices of the same shape.
pub fn max_abs_diff<R, Cc, S1, S2>(
    a: &nalgebra::Matrix<C64, R, Cc, S1>,
    b: &nalgebra::Matrix<C64, R, Cc, S2>,
) -> f64
where
    R: nalgebra::Dim,
    Cc: nalgebra::Dim,
    S1: nalgebra::RawStorage<C64, R, Cc>,
    S2: nalgebra::RawStorage<C64, R, Cc>,
{
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// max |A - A†|
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// max |A + A†|
pub fn anti_hermiticity_residual(m: &CMatrix) -> f64 {
    let sum = m + m.adjoint();
    max_abs(&sum)
}

/// Kronecker product of two dense complex matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn to_dynamic2(m: &Mat2) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| m[(i, j)])
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Eigenpairs of a Hermitian matrix sorted by ascending eigenvalue.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Complex eigenvalues of a general square matrix via the complex Schur form.
pub fn general_eigenvalues(m: &CMatrix) -> Option<Vec<C64>> {
    nalgebra::linalg::Schur::new(m.clone())
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
}
