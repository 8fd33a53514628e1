//! Two-component reduction of the Dirac equation in external fields.
//!
//! The four-component operator
//!
//! ```text
//! H = (p − eA)²/2m + eΦ − (e/m) Σ·B + (e/m) K·E
//! ```
//!
//! splits, for `ψ = (φ, χ)`, into the coupled pair
//! `H0 φ + H1 χ`, `H1 φ + H0 χ` with
//!
//! ```text
//! H0 = (p − eA)²/2m + eΦ − (e/2m) σ·B        (Hermitian)
//! H1 = i (e/2m) σ·E                           (anti-Hermitian)
//! ```
//!
//! and the combinations `ψ± = φ ± χ` decouple it into `H0 ± H1`.
//!
//! Uniform-field problems are posed on a periodic plane-wave basis, which makes
//! every operator an exact finite matrix. Basis index layout for two-component
//! operators is `2·mode + spin`; four-component operators stack the upper
//! (φ) and lower (χ) halves, each in the two-component layout.

use nalgebra::DMatrix;

use crate::clifford::{make_gamma, spin_tensor};
use crate::dirac_grid::Grid1D;
use crate::error::{Error, Result};
use crate::linalg::{
    anti_hermiticity_residual, c, hermitian_eigen, hermiticity_residual, kron, max_abs,
    sigma_dot, to_dynamic2, CMatrix, Mat4, C64, I, ZERO,
};

#[derive(Debug, Clone, PartialEq)]
pub enum ScalarPotential {
    Constant(f64),
    /// Values at the sites of a 1D grid.
    Sampled(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum VectorPotential {
    Constant([f64; 3]),
    /// x-component at the sites of a 1D grid.
    SampledX(Vec<f64>),
}

/// How the uniform `E`, `B` vectors relate to the potentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// `E` and `B` are external inputs entering only through the spin terms;
    /// the potentials enter only through the orbital terms.
    SpinOnly,
    /// `E = −∇Φ − ∂_t A` and `B = ∇×A` must hold for the uniform parts.
    SelfConsistent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfig {
    pub e_field: [f64; 3],
    pub b_field: [f64; 3],
    /// Uniform `∂_t A`.
    pub a_dot: [f64; 3],
    pub scalar_potential: ScalarPotential,
    pub vector_potential: VectorPotential,
    pub charge: f64,
    pub mass: f64,
    pub coupling: Coupling,
}

impl FieldConfig {
    /// No fields, no potentials.
    pub fn free(charge: f64, mass: f64) -> Self {
        FieldConfig {
            e_field: [0.0; 3],
            b_field: [0.0; 3],
            a_dot: [0.0; 3],
            scalar_potential: ScalarPotential::Constant(0.0),
            vector_potential: VectorPotential::Constant([0.0; 3]),
            charge,
            mass,
            coupling: Coupling::SpinOnly,
        }
    }

    pub fn with_e_field(mut self, e: [f64; 3]) -> Self {
        self.e_field = e;
        self
    }

    pub fn with_b_field(mut self, b: [f64; 3]) -> Self {
        self.b_field = b;
        self
    }

    pub fn with_scalar_potential(mut self, phi: ScalarPotential) -> Self {
        self.scalar_potential = phi;
        self
    }

    pub fn with_vector_potential(mut self, a: VectorPotential) -> Self {
        self.vector_potential = a;
        self
    }

    pub fn with_a_dot(mut self, a_dot: [f64; 3]) -> Self {
        self.a_dot = a_dot;
        self
    }

    pub fn with_coupling(mut self, coupling: Coupling) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass.is_finite() && self.mass > 0.0) {
            return Err(Error::InconsistentField(format!("mass {} must be positive", self.mass)));
        }
        let finite = self
            .e_field
            .iter()
            .chain(&self.b_field)
            .chain(&self.a_dot)
            .chain(std::iter::once(&self.charge))
            .all(|x| x.is_finite());
        let potentials_finite = match &self.scalar_potential {
            ScalarPotential::Constant(v) => v.is_finite(),
            ScalarPotential::Sampled(v) => v.iter().all(|x| x.is_finite()),
        } && match &self.vector_potential {
            VectorPotential::Constant(v) => v.iter().all(|x| x.is_finite()),
            VectorPotential::SampledX(v) => v.iter().all(|x| x.is_finite()),
        };
        if !(finite && potentials_finite) {
            return Err(Error::InconsistentField("non-finite field component".into()));
        }
        if self.coupling == Coupling::SelfConsistent {
            // Representable potentials are constant or periodic 1D samples:
            // their uniform gradient and curl vanish.
            let scale = 1.0 + norm3(self.e_field).max(norm3(self.a_dot));
            let mismatch = (0..3)
                .map(|k| (self.e_field[k] + self.a_dot[k]).abs())
                .fold(0.0, f64::max);
            if mismatch > 1e-12 * scale {
                return Err(Error::InconsistentField(format!(
                    "uniform E = {:?} differs from −∂_tA = {:?}",
                    self.e_field,
                    self.a_dot.map(|x| -x)
                )));
            }
            if norm3(self.b_field) > 0.0 {
                return Err(Error::InconsistentField(
                    "uniform B cannot be generated by the supplied vector potential".into(),
                ));
            }
        }
        Ok(())
    }

    /// True unless the scalar potential varies in space.
    pub fn has_uniform_e(&self) -> bool {
        match &self.scalar_potential {
            ScalarPotential::Constant(_) => true,
            ScalarPotential::Sampled(v) => {
                let (lo, hi) = v
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
                v.is_empty() || hi - lo <= 1e-14 * (1.0 + hi.abs().max(lo.abs()))
            }
        }
    }

    pub fn is_static(&self) -> bool {
        self.a_dot.iter().all(|&x| x == 0.0)
    }

    fn coupling_strength(&self) -> f64 {
        self.charge / (2.0 * self.mass)
    }

    fn constant_potentials(&self) -> Result<(f64, [f64; 3])> {
        let phi = match &self.scalar_potential {
            ScalarPotential::Constant(v) => *v,
            ScalarPotential::Sampled(_) => {
                return Err(Error::InconsistentField(
                    "plane-wave basis needs a constant scalar potential".into(),
                ))
            }
        };
        let a = match &self.vector_potential {
            VectorPotential::Constant(v) => *v,
            VectorPotential::SampledX(_) => {
                return Err(Error::InconsistentField(
                    "plane-wave basis needs a constant vector potential".into(),
                ))
            }
        };
        Ok((phi, a))
    }
}

/// Periodic box of side `box_length` with `modes_per_axis` plane waves per
/// Cartesian axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveBasis {
    pub box_length: f64,
    pub modes_per_axis: usize,
}

impl PlaneWaveBasis {
    pub fn new(box_length: f64, modes_per_axis: usize) -> Result<Self> {
        if !(box_length.is_finite() && box_length > 0.0) || modes_per_axis == 0 {
            return Err(Error::Precondition(format!(
                "plane-wave basis needs L > 0 and at least one mode (L = {box_length}, N = {modes_per_axis})"
            )));
        }
        Ok(PlaneWaveBasis {
            box_length,
            modes_per_axis,
        })
    }

    /// Integer labels `−⌊N/2⌋ … ⌈N/2⌉−1` per axis.
    fn labels(&self) -> Vec<i64> {
        let n = self.modes_per_axis as i64;
        (-(n / 2)..(n - n / 2)).collect()
    }

    pub fn wave_vectors(&self) -> Vec<[f64; 3]> {
        let dk = 2.0 * std::f64::consts::PI / self.box_length;
        let labels = self.labels();
        let mut out = Vec::with_capacity(labels.len().pow(3));
        for &a in &labels {
            for &b in &labels {
                for &cc in &labels {
                    out.push([a as f64 * dk, b as f64 * dk, cc as f64 * dk]);
                }
            }
        }
        out
    }

    pub fn mode_count(&self) -> usize {
        self.modes_per_axis.pow(3)
    }

    /// Dimension of the two-component space.
    pub fn dimension(&self) -> usize {
        2 * self.mode_count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorLabel {
    H0,
    H1,
    Full,
    Block,
}

/// A finite-matrix operator together with the meaning of its rows.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOperator {
    pub matrix: CMatrix,
    pub label: OperatorLabel,
    /// Number of spinor components per spatial mode (2 or 4).
    pub components: usize,
}

impl PauliOperator {
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.matrix)
    }

    pub fn anti_hermiticity_residual(&self) -> f64 {
        anti_hermiticity_residual(&self.matrix)
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Quadrant `(row, col)` ∈ {0,1}² of a four-component operator.
    pub fn block(&self, row: usize, col: usize) -> CMatrix {
        let half = self.matrix.nrows() / 2;
        self.matrix.view((row * half, col * half), (half, half)).into_owned()
    }

    /// Largest entry of the two off-diagonal quadrants.
    pub fn off_block_residual(&self) -> f64 {
        max_abs(&self.block(0, 1)).max(max_abs(&self.block(1, 0)))
    }
}

fn spin_operator(m: &crate::linalg::Mat2, modes: usize) -> CMatrix {
    kron(&CMatrix::identity(modes, modes), &to_dynamic2(m))
}

pub fn build_h0(cfg: &FieldConfig, basis: &PlaneWaveBasis) -> Result<PauliOperator> {
    cfg.validate()?;
    let (phi, a) = cfg.constant_potentials()?;
    let ks = basis.wave_vectors();
    let mut matrix = spin_operator(&(sigma_dot(cfg.b_field) * c(-cfg.coupling_strength(), 0.0)), ks.len());
    for (idx, k) in ks.iter().enumerate() {
        let kin = (0..3).map(|i| (k[i] - cfg.charge * a[i]).powi(2)).sum::<f64>() / (2.0 * cfg.mass);
        let diag = kin + cfg.charge * phi;
        for s in 0..2 {
            matrix[(2 * idx + s, 2 * idx + s)] += c(diag, 0.0);
        }
    }
    Ok(PauliOperator {
        matrix,
        label: OperatorLabel::H0,
        components: 2,
    })
}

pub fn build_h1(cfg: &FieldConfig, basis: &PlaneWaveBasis) -> Result<PauliOperator> {
    cfg.validate()?;
    if !cfg.has_uniform_e() {
        return Err(Error::NonUniformField(
            "the spin coupling i(e/2m)σ·E needs a uniform field".into(),
        ));
    }
    let spin = sigma_dot(cfg.e_field) * (I * cfg.coupling_strength());
    Ok(PauliOperator {
        matrix: spin_operator(&spin, basis.mode_count()),
        label: OperatorLabel::H1,
        components: 2,
    })
}

/// Four-component operator `(p − eA)²/2m + eΦ − (e/m)Σ·B + (e/m)K·E`, with Σ
/// and K taken from the Dirac-representation generators.
pub fn build_full_pauli(cfg: &FieldConfig, basis: &PlaneWaveBasis) -> Result<PauliOperator> {
    cfg.validate()?;
    let (phi, a) = cfg.constant_potentials()?;
    let gammas = make_gamma("dirac")?;
    let s = spin_tensor(&gammas);
    let sigma = s.sigma_vector();
    let kvec = s.k_vector();
    let ratio = cfg.charge / cfg.mass;
    let mut spin = Mat4::zeros();
    for i in 0..3 {
        spin -= sigma[i] * c(ratio * cfg.b_field[i], 0.0);
        spin += kvec[i] * c(ratio * cfg.e_field[i], 0.0);
    }

    let ks = basis.wave_vectors();
    let half = 2 * ks.len();
    let mut matrix = DMatrix::from_element(2 * half, 2 * half, ZERO);
    let place = |component: usize, mode: usize| (component / 2) * half + 2 * mode + component % 2;
    for (idx, k) in ks.iter().enumerate() {
        let kin = (0..3).map(|i| (k[i] - cfg.charge * a[i]).powi(2)).sum::<f64>() / (2.0 * cfg.mass);
        let scalar = kin + cfg.charge * phi;
        for r in 0..4 {
            for col in 0..4 {
                let mut v = spin[(r, col)];
                if r == col {
                    v += c(scalar, 0.0);
                }
                matrix[(place(r, idx), place(col, idx))] = v;
            }
        }
    }
    Ok(PauliOperator {
        matrix,
        label: OperatorLabel::Full,
        components: 4,
    })
}

/// `ψ+ = φ + χ`, `ψ− = φ − χ` (unnormalised).
pub fn basis_change_pm(phi: &[C64], chi: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    if phi.len() != chi.len() {
        return Err(Error::DimensionMismatch {
            expected: phi.len(),
            actual: chi.len(),
        });
    }
    let plus = phi.iter().zip(chi).map(|(a, b)| a + b).collect();
    let minus = phi.iter().zip(chi).map(|(a, b)| a - b).collect();
    Ok((plus, minus))
}

/// Inverse of [`basis_change_pm`]: `φ = (ψ+ + ψ−)/2`, `χ = (ψ+ − ψ−)/2`.
pub fn basis_change_pm_inverse(plus: &[C64], minus: &[C64]) -> Result<(Vec<C64>, Vec<C64>)> {
    let (sum, diff) = basis_change_pm(plus, minus)?;
    Ok((
        sum.into_iter().map(|z| z * 0.5).collect(),
        diff.into_iter().map(|z| z * 0.5).collect(),
    ))
}

/// `T H T⁻¹` with `T = [[1, 1], [1, −1]]` acting on the (φ, χ) halves.
pub fn transform_to_pm(full: &PauliOperator) -> Result<PauliOperator> {
    if full.components != 4 {
        return Err(Error::Precondition("ψ± transform needs a four-component operator".into()));
    }
    let half = full.dimension() / 2;
    let id = CMatrix::identity(half, half);
    let mut t = DMatrix::from_element(2 * half, 2 * half, ZERO);
    t.view_mut((0, 0), (half, half)).copy_from(&id);
    t.view_mut((0, half), (half, half)).copy_from(&id);
    t.view_mut((half, 0), (half, half)).copy_from(&id);
    t.view_mut((half, half), (half, half)).copy_from(&(-&id));
    let t_inv = &t * c(0.5, 0.0);
    Ok(PauliOperator {
        matrix: &t * &full.matrix * t_inv,
        label: OperatorLabel::Block,
        components: 4,
    })
}

/// max |H0 H1 − H1 H0|
pub fn check_commutation(cfg: &FieldConfig, basis: &PlaneWaveBasis) -> Result<f64> {
    let h0 = build_h0(cfg, basis)?;
    let h1 = build_h1(cfg, basis)?;
    let comm = &h0.matrix * &h1.matrix - &h1.matrix * &h0.matrix;
    Ok(max_abs(&comm))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

/// One level of `H0` seen in both decoupled branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPair {
    /// Eigenvalue in the `H0 + H1` branch.
    pub plus: C64,
    /// Eigenvalue in the `H0 − H1` branch.
    pub minus: C64,
    pub epsilon0: C64,
    pub epsilon1: C64,
    /// `plus − minus = 2ε1`.
    pub splitting: C64,
    /// |⟨v+|v−⟩| of the paired eigenvectors.
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<C64>,
    pub branches: Vec<Branch>,
    /// Eigenvalues whose imaginary part is below the Hermitian tolerance.
    pub real_flags: Vec<bool>,
    pub pairs: Vec<LevelPair>,
    /// `2ε1` of the lowest level.
    pub splitting: C64,
    /// Largest |2ε1| over all levels.
    pub splitting_magnitude: f64,
}

impl SpectrumResult {
    pub fn plus_branch(&self) -> impl Iterator<Item = C64> + '_ {
        self.eigenvalues
            .iter()
            .zip(&self.branches)
            .filter(|(_, b)| **b == Branch::Plus)
            .map(|(z, _)| *z)
    }

    pub fn minus_branch(&self) -> impl Iterator<Item = C64> + '_ {
        self.eigenvalues
            .iter()
            .zip(&self.branches)
            .filter(|(_, b)| **b == Branch::Minus)
            .map(|(z, _)| *z)
    }

    /// Smallest and largest |2ε1| across levels.
    pub fn splitting_range(&self) -> (f64, f64) {
        self.pairs.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), p| {
            let s = p.splitting.norm();
            (lo.min(s), hi.max(s))
        })
    }
}

/// Eigenpairs of `H0 + H1` for Hermitian `H0` and anti-Hermitian `H1` that
/// commute: diagonalise `H0`, then the Hermitian `−iH1` inside each
/// degenerate eigenspace of `H0`.
fn commuting_eigenpairs(h0: &CMatrix, h1: &CMatrix) -> (Vec<C64>, CMatrix) {
    let n = h0.nrows();
    let (values, vectors) = hermitian_eigen(h0);
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut eigenvalues = Vec::with_capacity(n);
    let mut joint = DMatrix::from_element(n, n, ZERO);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= 1e-10 * scale {
            end += 1;
        }
        let v = vectors.columns(start, end - start).into_owned();
        let restricted = v.adjoint() * (h1 * (-I)) * &v;
        let restricted = (&restricted + restricted.adjoint()) * c(0.5, 0.0);
        let (lam, w) = hermitian_eigen(&restricted);
        let block = &v * w;
        for (j, l) in lam.iter().enumerate() {
            let col = block.column(j);
            let e0 = (col.adjoint() * h0 * col)[(0, 0)].re;
            eigenvalues.push(c(e0, 0.0) + I * *l);
            joint.set_column(start + j, &col);
        }
        start = end;
    }
    (eigenvalues, joint)
}

/// Diagonalise `blockdiag(H0 + H1, H0 − H1)` and pair the two branches level
/// by level through eigenvector overlap.
pub fn splitting_spectrum(
    cfg: &FieldConfig,
    basis: &PlaneWaveBasis,
    hermitian_tolerance: f64,
) -> Result<SpectrumResult> {
    if norm3(cfg.b_field) != 0.0 {
        return Err(Error::Precondition(
            "level splitting requires B = 0 so that H0 and H1 commute".into(),
        ));
    }
    let h0 = build_h0(cfg, basis)?;
    let h1 = build_h1(cfg, basis)?;
    let (plus_vals, plus_vecs) = commuting_eigenpairs(&h0.matrix, &h1.matrix);
    let (minus_vals, minus_vecs) = commuting_eigenpairs(&h0.matrix, &(-&h1.matrix));

    let n = plus_vals.len();
    let overlaps = plus_vecs.adjoint() * &minus_vecs;
    let mut candidates: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, overlaps[(i, j)].norm()))
        .filter(|(_, _, o)| *o > 1e-8)
        .collect();
    candidates.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    let mut used_plus = vec![false; n];
    let mut used_minus = vec![false; n];
    let mut pairs = Vec::with_capacity(n);
    for (i, j, o) in candidates {
        if used_plus[i] || used_minus[j] {
            continue;
        }
        used_plus[i] = true;
        used_minus[j] = true;
        let (p, m) = (plus_vals[i], minus_vals[j]);
        pairs.push(LevelPair {
            plus: p,
            minus: m,
            epsilon0: (p + m) * 0.5,
            epsilon1: (p - m) * 0.5,
            splitting: p - m,
            overlap: o,
        });
    }
    if pairs.len() != n {
        return Err(Error::Eigensolver);
    }
    pairs.sort_by(|a, b| {
        a.epsilon0
            .re
            .total_cmp(&b.epsilon0.re)
            .then(b.epsilon1.im.total_cmp(&a.epsilon1.im))
    });

    let mut eigenvalues = plus_vals.clone();
    eigenvalues.extend_from_slice(&minus_vals);
    let branches = std::iter::repeat_n(Branch::Plus, n)
        .chain(std::iter::repeat_n(Branch::Minus, n))
        .collect();
    let real_flags = eigenvalues.iter().map(|z| z.im.abs() <= hermitian_tolerance).collect();
    let splitting = pairs.first().map(|p| p.splitting).unwrap_or(ZERO);
    let splitting_magnitude = pairs.iter().map(|p| p.splitting.norm()).fold(0.0, f64::max);
    Ok(SpectrumResult {
        eigenvalues,
        branches,
        real_flags,
        pairs,
        splitting,
        splitting_magnitude,
    })
}

/// Discretisation of `(p − eA)²/2m` on a periodic 1D grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LatticeKinetic {
    /// Nearest-neighbour Laplacian with Peierls links.
    ThreePoint,
    /// `Π²/2m + W`: the square of the central-difference covariant momentum
    /// plus the Wilson term, i.e. the leading non-relativistic image of the
    /// Wilson-Dirac lattice Hamiltonian with the same `r`.
    DiracMatched { wilson_r: f64 },
}

/// `H0` sampled on a 1D grid (layout `2·site + spin`).
pub fn build_h0_lattice(
    cfg: &FieldConfig,
    grid: &Grid1D,
    kinetic: LatticeKinetic,
) -> Result<PauliOperator> {
    cfg.validate()?;
    let n = grid.n_points();
    let a = grid.spacing();
    let phi = grid.sample_scalar(&cfg.scalar_potential)?;
    let t = grid.covariant_shift(cfg.charge, &cfg.vector_potential)?;
    let td = t.adjoint();
    let id = CMatrix::identity(n, n);
    let spatial = match kinetic {
        LatticeKinetic::ThreePoint => (&id * c(2.0, 0.0) - &t - &td) * c(1.0 / (2.0 * cfg.mass * a * a), 0.0),
        LatticeKinetic::DiracMatched { wilson_r } => {
            let p = (&t - &td) * c(0.0, -1.0 / (2.0 * a));
            let w = (&id * c(2.0, 0.0) - &t - &td) * c(wilson_r / (2.0 * a), 0.0);
            &p * &p * c(1.0 / (2.0 * cfg.mass), 0.0) + w
        }
    };
    let mut spatial = spatial;
    for (j, v) in phi.iter().enumerate() {
        spatial[(j, j)] += c(cfg.charge * v, 0.0);
    }
    let mut matrix = kron(&spatial, &CMatrix::identity(2, 2));
    matrix += spin_operator(&(sigma_dot(cfg.b_field) * c(-cfg.coupling_strength(), 0.0)), n);
    Ok(PauliOperator {
        matrix,
        label: OperatorLabel::H0,
        components: 2,
    })
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
