//! Dirac matrices, the spinor generators S^μν of the Lorentz group and the
//! finite rotations and boosts they generate.
//!
//! Index conventions: Greek indices run over 0..4 with 0 the time axis and the
//! metric is `diag(+1, -1, -1, -1)`. Vector transforms act on contravariant
//! components, `x'^μ = Λ^μ_ν x^ν`.
//!
//! The finite spinor transforms are normalised so that
//! `S(Λ)⁻¹ γ^μ S(Λ) = Λ^μ_ν γ^ν` holds with the vector transforms returned
//! here. Explicitly:
//!
//! * boost with rapidity vector η: `S = exp(+i η·K)`, `K = (S^01, S^02, S^03)`,
//!   paired with the boost that maps the event `(t, x, 0, 0)` to
//!   `(t cosh η − x sinh η, x cosh η − t sinh η, 0, 0)`;
//! * rotation by the axis-angle vector θ: `S = exp(−i θ·Σ)`, paired with the
//!   active (Rodrigues) rotation matrix.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::linalg::{blocks, c, max_abs, max_abs_diff, pauli, Mat2, Mat4, C64, I};

/// Diagonal of the Minkowski metric `g^μν` (equal to `g_μν`).
pub const METRIC_SIGNATURE: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// The Minkowski metric with signature (+, −, −, −).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Metric;

impl Metric {
    pub fn g(&self, mu: usize, nu: usize) -> f64 {
        if mu == nu {
            METRIC_SIGNATURE[mu]
        } else {
            0.0
        }
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&Vector4::from(METRIC_SIGNATURE))
    }

    /// Lower (or raise) the index of a 4-vector.
    pub fn lower(&self, v: [f64; 4]) -> [f64; 4] {
        [v[0], -v[1], -v[2], -v[3]]
    }

    pub fn dot(&self, a: [f64; 4], b: [f64; 4]) -> f64 {
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Dirac,
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dirac" | "standard" => Ok(Representation::Dirac),
            other => Err(Error::UnsupportedRepresentation(other.to_string())),
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::Dirac => f.write_str("dirac"),
        }
    }
}

/// The four Dirac matrices γ^μ in a fixed representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    gamma: [Mat4; 4],
    representation: Representation,
}

impl GammaSet {
    pub fn dirac() -> Self {
        let s = pauli();
        let z = Mat2::zeros();
        let id = Mat2::identity();
        let g0 = blocks(&id, &z, &z, &(-id));
        let spatial = |k: usize| blocks(&z, &s[k], &(-s[k]), &z);
        GammaSet {
            gamma: [g0, spatial(0), spatial(1), spatial(2)],
            representation: Representation::Dirac,
        }
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn gamma(&self, mu: usize) -> &Mat4 {
        &self.gamma[mu]
    }

    pub fn all(&self) -> &[Mat4; 4] {
        &self.gamma
    }

    /// Largest entry of `{γ^μ, γ^ν} − 2 g^μν I` over all index pairs.
    pub fn clifford_residual(&self) -> f64 {
        let metric = Metric;
        let mut worst = 0.0_f64;
        for mu in 0..4 {
            for nu in 0..4 {
                let anti = self.gamma[mu] * self.gamma[nu] + self.gamma[nu] * self.gamma[mu];
                let target = Mat4::identity() * c(2.0 * metric.g(mu, nu), 0.0);
                worst = worst.max(max_abs_diff(&anti, &target));
            }
        }
        worst
    }

    /// Largest deviation from `γ^0 = γ^0†` and `γ^k = −γ^k†`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = max_abs_diff(&self.gamma[0], &self.gamma[0].adjoint());
        for k in 1..4 {
            worst = worst.max(max_abs(&(self.gamma[k] + self.gamma[k].adjoint())));
        }
        worst
    }

    /// Dirac adjoint of a 4×4 operator: `γ^0 A† γ^0`.
    pub fn dirac_adjoint(&self, a: &Mat4) -> Mat4 {
        self.gamma[0] * a.adjoint() * self.gamma[0]
    }
}

/// Build the γ matrices for a representation label.
pub fn make_gamma(representation: &str) -> Result<GammaSet> {
    match representation.parse::<Representation>()? {
        Representation::Dirac => Ok(GammaSet::dirac()),
    }
}

/// The spinor Lorentz generators `S^μν = (i/4)[γ^μ, γ^ν]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinTensor {
    s: [[Mat4; 4]; 4],
}

impl SpinTensor {
    /// Wrap an arbitrary 4×4 array of generators. Used to probe the residual
    /// checks with deliberately broken input.
    pub fn from_entries(s: [[Mat4; 4]; 4]) -> Self {
        SpinTensor { s }
    }

    pub fn get(&self, mu: usize, nu: usize) -> &Mat4 {
        &self.s[mu][nu]
    }

    pub fn entries(&self) -> &[[Mat4; 4]; 4] {
        &self.s
    }

    /// Largest entry of `S^μν + S^νμ`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for mu in 0..4 {
            for nu in 0..4 {
                worst = worst.max(max_abs(&(self.s[mu][nu] + self.s[nu][mu])));
            }
        }
        worst
    }

    /// Largest entry of `γ^0 (S^μν)† γ^0 − S^μν`.
    pub fn dirac_adjoint_residual(&self, gammas: &GammaSet) -> f64 {
        let mut worst = 0.0_f64;
        for row in &self.s {
            for s in row {
                worst = worst.max(max_abs_diff(&gammas.dirac_adjoint(s), s));
            }
        }
        worst
    }

    /// Rotation generators `Σ_i = ε_ijk S^jk / 2`.
    pub fn sigma_vector(&self) -> [Mat4; 3] {
        let mut out = [Mat4::zeros(); 3];
        for (i, sigma) in out.iter_mut().enumerate() {
            for j in 0..3 {
                for k in 0..3 {
                    let eps = levi_civita(i, j, k);
                    if eps != 0.0 {
                        *sigma += self.s[j + 1][k + 1] * c(0.5 * eps, 0.0);
                    }
                }
            }
        }
        out
    }

    /// Boost generators `K = (S^01, S^02, S^03)`.
    pub fn k_vector(&self) -> [Mat4; 3] {
        [self.s[0][1], self.s[0][2], self.s[0][3]]
    }

    /// `Σ_μν ω_μν S^μν` for a (not necessarily antisymmetric) coefficient array
    /// with lower indices.
    pub fn contract(&self, omega_lower: &[[f64; 4]; 4]) -> Mat4 {
        let mut acc = Mat4::zeros();
        for mu in 0..4 {
            for nu in 0..4 {
                if omega_lower[mu][nu] != 0.0 {
                    acc += self.s[mu][nu] * c(omega_lower[mu][nu], 0.0);
                }
            }
        }
        acc
    }
}

pub fn spin_tensor(g: &GammaSet) -> SpinTensor {
    let quarter_i = c(0.0, 0.25);
    let mut s = [[Mat4::zeros(); 4]; 4];
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            let comm = g.gamma(mu) * g.gamma(nu) - g.gamma(nu) * g.gamma(mu);
            let entry = comm * quarter_i;
            s[mu][nu] = entry;
            s[nu][mu] = -entry;
        }
    }
    SpinTensor { s }
}

pub fn sigma_vector(s: &SpinTensor) -> [Mat4; 3] {
    s.sigma_vector()
}

pub fn k_vector(s: &SpinTensor) -> [Mat4; 3] {
    s.k_vector()
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Rapidity 3-vector of a pure boost; its direction is the boost axis and its
/// length the rapidity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RapidityVector {
    eta: [f64; 3],
}

impl RapidityVector {
    pub fn new(eta: [f64; 3]) -> Result<Self> {
        if eta.iter().all(|x| x.is_finite()) {
            Ok(RapidityVector { eta })
        } else {
            Err(Error::Precondition(format!("rapidity {eta:?} is not finite")))
        }
    }

    pub fn along_x(eta: f64) -> Self {
        RapidityVector { eta: [eta, 0.0, 0.0] }
    }

    pub fn components(&self) -> [f64; 3] {
        self.eta
    }

    pub fn magnitude(&self) -> f64 {
        norm3(self.eta)
    }

    pub fn neg(&self) -> Self {
        RapidityVector {
            eta: [-self.eta[0], -self.eta[1], -self.eta[2]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Rotation,
    Boost,
    Mixed,
}

/// A finite Lorentz transformation acting on Dirac spinors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorTransform {
    pub matrix: Mat4,
    pub kind: TransformKind,
}

impl SpinorTransform {
    pub fn identity() -> Self {
        SpinorTransform {
            matrix: Mat4::identity(),
            kind: TransformKind::Rotation,
        }
    }

    /// max |S†S − I|
    pub fn unitarity_residual(&self) -> f64 {
        max_abs_diff(&(self.matrix.adjoint() * self.matrix), &Mat4::identity())
    }

    /// max |γ^0 S† γ^0 S − I|
    pub fn dirac_unitarity_residual(&self, gammas: &GammaSet) -> f64 {
        max_abs_diff(&(gammas.dirac_adjoint(&self.matrix) * self.matrix), &Mat4::identity())
    }

    /// Inverse through the Dirac adjoint, which is exact for every element of
    /// the spinor Lorentz group.
    pub fn inverse(&self, gammas: &GammaSet) -> SpinorTransform {
        SpinorTransform {
            matrix: gammas.dirac_adjoint(&self.matrix),
            kind: self.kind,
        }
    }

    pub fn apply(&self, spinor: &nalgebra::Vector4<C64>) -> nalgebra::Vector4<C64> {
        self.matrix * spinor
    }
}

impl Mul for &SpinorTransform {
    type Output = SpinorTransform;

    fn mul(self, rhs: &SpinorTransform) -> SpinorTransform {
        let kind = if self.kind == rhs.kind {
            self.kind
        } else {
            TransformKind::Mixed
        };
        SpinorTransform {
            matrix: self.matrix * rhs.matrix,
            kind,
        }
    }
}

/// A finite Lorentz transformation on contravariant 4-vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorTransform {
    pub lambda: Matrix4<f64>,
}

impl VectorTransform {
    pub fn identity() -> Self {
        VectorTransform {
            lambda: Matrix4::identity(),
        }
    }

    /// max |Λᵀ g Λ − g|
    pub fn metric_residual(&self) -> f64 {
        let g = Metric.matrix();
        (self.lambda.transpose() * g * self.lambda - g).amax()
    }

    pub fn determinant(&self) -> f64 {
        self.lambda.determinant()
    }

    /// Exact inverse `g Λᵀ g`.
    pub fn inverse(&self) -> VectorTransform {
        let g = Metric.matrix();
        VectorTransform {
            lambda: g * self.lambda.transpose() * g,
        }
    }

    pub fn apply(&self, x: [f64; 4]) -> [f64; 4] {
        let v = self.lambda * Vector4::from(x);
        [v[0], v[1], v[2], v[3]]
    }

    /// Transform a contravariant rank-2 tensor: `T' = Λ T Λᵀ`.
    pub fn apply_tensor(&self, t: &Matrix4<f64>) -> Matrix4<f64> {
        self.lambda * t * self.lambda.transpose()
    }
}

impl Mul for &VectorTransform {
    type Output = VectorTransform;

    fn mul(self, rhs: &VectorTransform) -> VectorTransform {
        VectorTransform {
            lambda: self.lambda * rhs.lambda,
        }
    }
}

/// `S = exp(i η·K)`.
pub fn finite_spinor_boost(s: &SpinTensor, eta: &RapidityVector) -> SpinorTransform {
    let k = s.k_vector();
    let e = eta.components();
    let generator = (k[0] * c(e[0], 0.0) + k[1] * c(e[1], 0.0) + k[2] * c(e[2], 0.0)) * I;
    SpinorTransform {
        matrix: generator.exp(),
        kind: TransformKind::Boost,
    }
}

/// Pure boost `Λ(η)` with cosh/sinh of the rapidity magnitude.
pub fn finite_vector_boost(eta: &RapidityVector) -> VectorTransform {
    let rapidity = eta.magnitude();
    if rapidity == 0.0 {
        return VectorTransform::identity();
    }
    let e = eta.components();
    let n = [e[0] / rapidity, e[1] / rapidity, e[2] / rapidity];
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    let mut lambda = Matrix4::identity();
    lambda[(0, 0)] = ch;
    for i in 0..3 {
        lambda[(0, i + 1)] = -n[i] * sh;
        lambda[(i + 1, 0)] = -n[i] * sh;
        for j in 0..3 {
            lambda[(i + 1, j + 1)] += (ch - 1.0) * n[i] * n[j];
        }
    }
    VectorTransform { lambda }
}

/// `S = exp(−i θ·Σ)` for the axis-angle vector θ.
pub fn finite_spinor_rotation(s: &SpinTensor, axis_angle: [f64; 3]) -> SpinorTransform {
    let sigma = s.sigma_vector();
    let generator = (sigma[0] * c(axis_angle[0], 0.0)
        + sigma[1] * c(axis_angle[1], 0.0)
        + sigma[2] * c(axis_angle[2], 0.0))
        * (-I);
    SpinorTransform {
        matrix: generator.exp(),
        kind: TransformKind::Rotation,
    }
}

/// Active rotation by the axis-angle vector θ (Rodrigues formula) embedded in
/// the spatial block.
pub fn finite_vector_rotation(axis_angle: [f64; 3]) -> VectorTransform {
    let angle = norm3(axis_angle);
    let mut lambda = Matrix4::identity();
    if angle == 0.0 {
        return VectorTransform { lambda };
    }
    let n = [axis_angle[0] / angle, axis_angle[1] / angle, axis_angle[2] / angle];
    let (sn, cs) = angle.sin_cos();
    let cross = [[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            let outer = n[i] * n[j];
            let delta = if i == j { 1.0 } else { 0.0 };
            lambda[(i + 1, j + 1)] = cs * delta + sn * cross[i][j] + (1.0 - cs) * outer;
        }
    }
    VectorTransform { lambda }
}

/// Largest entry of `S⁻¹ γ^μ S − Λ^μ_ν γ^ν` over μ.
pub fn covariance_residual(
    gammas: &GammaSet,
    spinor: &SpinorTransform,
    vector: &VectorTransform,
) -> f64 {
    let inv = spinor
        .matrix
        .try_inverse()
        .unwrap_or_else(|| gammas.dirac_adjoint(&spinor.matrix));
    let mut worst = 0.0_f64;
    for mu in 0..4 {
        let lhs = inv * gammas.gamma(mu) * spinor.matrix;
        let mut rhs = Mat4::zeros();
        for nu in 0..4 {
            rhs += gammas.gamma(nu) * c(vector.lambda[(mu, nu)], 0.0);
        }
        worst = worst.max(max_abs_diff(&lhs, &rhs));
    }
    worst
}

/// Worst violation of the Lorentz algebra and the index where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraResidual {
    pub max_residual: f64,
    pub worst_indices: [usize; 4],
}

/// Check `[S^μν, S^ρσ] = i(g^νρ S^μσ − g^μρ S^νσ − g^νσ S^μρ + g^μσ S^νρ)` over
/// all 256 index combinations.
pub fn check_lorentz_algebra(s: &SpinTensor) -> AlgebraResidual {
    let g = Metric;
    let mut out = AlgebraResidual {
        max_residual: 0.0,
        worst_indices: [0; 4],
    };
    for mu in 0..4 {
        for nu in 0..4 {
            for rho in 0..4 {
                for sigma in 0..4 {
                    let lhs = s.get(mu, nu) * s.get(rho, sigma) - s.get(rho, sigma) * s.get(mu, nu);
                    let rhs = (s.get(mu, sigma) * c(g.g(nu, rho), 0.0)
                        - s.get(nu, sigma) * c(g.g(mu, rho), 0.0)
                        - s.get(mu, rho) * c(g.g(nu, sigma), 0.0)
                        + s.get(nu, rho) * c(g.g(mu, sigma), 0.0))
                        * I;
                    let r = max_abs_diff(&lhs, &rhs);
                    if r > out.max_residual {
                        out.max_residual = r;
                        out.worst_indices = [mu, nu, rho, sigma];
                    }
                }
            }
        }
    }
    out
}

/// The block forms `Σ = ½ diag(σ, σ)` and `K = (i/2) offdiag(σ, σ)` of the
/// Dirac representation, built directly from the Pauli matrices.
pub fn dirac_block_forms() -> ([Mat4; 3], [Mat4; 3]) {
    let s = pauli();
    let z = Mat2::zeros();
    let half = c(0.5, 0.0);
    let half_i = c(0.0, 0.5);
    let sigma = [0, 1, 2].map(|k| blocks(&(s[k] * half), &z, &z, &(s[k] * half)));
    let k = [0, 1, 2].map(|k| blocks(&z, &(s[k] * half_i), &(s[k] * half_i), &z));
    (sigma, k)
}

/// Largest entry of the difference between the generators derived from the γ
/// matrices and the explicit block forms.
pub fn block_form_residual(s: &SpinTensor) -> f64 {
    let (sigma_ref, k_ref) = dirac_block_forms();
    let sigma = s.sigma_vector();
    let k = s.k_vector();
    (0..3)
        .map(|i| max_abs_diff(&sigma[i], &sigma_ref[i]).max(max_abs_diff(&k[i], &k_ref[i])))
        .fold(0.0, f64::max)
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
