//! One-dimensional lattice Dirac Hamiltonian.
//!
//! ```text
//! H = α Π + β (m + W) + eΦ,   α = σ1, β = σ3
//! Π ψ_j = −i (U_j ψ_{j+1} − U†_{j−1} ψ_{j−1}) / 2a
//! W ψ_j = (r/2a) (2ψ_j − U_j ψ_{j+1} − U†_{j−1} ψ_{j−1})
//! ```
//!
//! with Peierls links `U_j = exp(−i e a A_{j+1/2})` and periodic boundaries.
//! The free spectrum is `E(k)² = (m + (r/a)(1 − cos ka))² + sin²(ka)/a²`.
//! Matrix layout is `2·site + spin`.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, hermitian_eigenvalues, hermiticity_residual, kron, pauli, to_dynamic2, CMatrix, C64, I, ZERO};
use crate::pauli::{build_h0_lattice, FieldConfig, LatticeKinetic, ScalarPotential, VectorPotential};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    spacing: f64,
}

impl Grid1D {
    pub fn new(n_points: usize, spacing: f64) -> Result<Self> {
        if n_points < 16 || !n_points.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n_points must be even and at least 16, got {n_points}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        Ok(Grid1D { n_points, spacing })
    }

    /// Grid of `n_points` sites covering a ring of circumference `length`.
    pub fn with_length(n_points: usize, length: f64) -> Result<Self> {
        Self::new(n_points, length / n_points as f64)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn length(&self) -> f64 {
        self.n_points as f64 * self.spacing
    }

    /// Site coordinates, symmetric about the origin.
    pub fn positions(&self) -> Vec<f64> {
        let half = self.n_points as f64 / 2.0;
        (0..self.n_points)
            .map(|j| (j as f64 - half + 0.5) * self.spacing)
            .collect()
    }

    /// Allowed momenta `2πj/L`, `j = −n/2 … n/2 − 1`.
    pub fn momenta(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        let dk = 2.0 * std::f64::consts::PI / self.length();
        (-(n / 2)..n / 2).map(|j| j as f64 * dk).collect()
    }

    pub fn sample_scalar(&self, phi: &ScalarPotential) -> Result<Vec<f64>> {
        match phi {
            ScalarPotential::Constant(v) => Ok(vec![*v; self.n_points]),
            ScalarPotential::Sampled(v) if v.len() == self.n_points => Ok(v.clone()),
            ScalarPotential::Sampled(v) => Err(Error::DimensionMismatch {
                expected: self.n_points,
                actual: v.len(),
            }),
        }
    }

    /// `A_x` at the midpoint of each link `j → j+1`.
    pub fn link_potential(&self, a: &VectorPotential) -> Result<Vec<f64>> {
        match a {
            VectorPotential::Constant(v) => {
                if v[1] != 0.0 || v[2] != 0.0 {
                    return Err(Error::Precondition(
                        "a 1D grid only carries the x-component of A".into(),
                    ));
                }
                Ok(vec![v[0]; self.n_points])
            }
            VectorPotential::SampledX(v) if v.len() == self.n_points => Ok((0..self.n_points)
                .map(|j| 0.5 * (v[j] + v[(j + 1) % self.n_points]))
                .collect()),
            VectorPotential::SampledX(v) => Err(Error::DimensionMismatch {
                expected: self.n_points,
                actual: v.len(),
            }),
        }
    }

    pub fn links(&self, charge: f64, a: &VectorPotential) -> Result<Vec<C64>> {
        Ok(self
            .link_potential(a)?
            .into_iter()
            .map(|ax| (-I * (charge * self.spacing * ax)).exp())
            .collect())
    }

    /// Covariant forward shift `(Tψ)_j = U_j ψ_{j+1}`.
    pub fn covariant_shift(&self, charge: f64, a: &VectorPotential) -> Result<CMatrix> {
        let n = self.n_points;
        let links = self.links(charge, a)?;
        let mut t = DMatrix::from_element(n, n, ZERO);
        for (j, u) in links.into_iter().enumerate() {
            t[(j, (j + 1) % n)] = u;
        }
        Ok(t)
    }
}

/// Free Wilson-lattice dispersion.
pub fn lattice_dispersion(k: f64, mass: f64, spacing: f64, wilson_r: f64) -> f64 {
    let ka = k * spacing;
    let m = mass + wilson_r / spacing * (1.0 - ka.cos());
    (m * m + (ka.sin() / spacing).powi(2)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDiracOperator {
    pub matrix: CMatrix,
    pub grid: Grid1D,
    pub wilson_r: f64,
    pub mass: f64,
    pub charge: f64,
    /// Link phases `U_j`.
    pub links: Vec<C64>,
    /// Potential energy `eΦ_j`.
    pub potential: Vec<f64>,
}

impl LatticeDiracOperator {
    pub fn hermiticity_residual(&self) -> f64 {
        hermiticity_residual(&self.matrix)
    }

    /// Sorted eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        hermitian_eigen(&self.matrix)
    }

    /// Smallest positive eigenvalue.
    pub fn lowest_positive(&self) -> Option<f64> {
        self.eigenvalues().into_iter().find(|&e| e > 0.0)
    }
}

fn assemble(grid: &Grid1D, cfg: &FieldConfig, wilson_r: f64) -> Result<LatticeDiracOperator> {
    cfg.validate()?;
    let n = grid.n_points();
    let a = grid.spacing();
    let phi = grid.sample_scalar(&cfg.scalar_potential)?;
    let links = grid.links(cfg.charge, &cfg.vector_potential)?;
    let t = grid.covariant_shift(cfg.charge, &cfg.vector_potential)?;
    let td = t.adjoint();
    let id = CMatrix::identity(n, n);
    let p = (&t - &td) * c(0.0, -1.0 / (2.0 * a));
    let mass_term = &id * c(cfg.mass, 0.0) + (&id * c(2.0, 0.0) - &t - &td) * c(wilson_r / (2.0 * a), 0.0);
    let [s1, _, s3] = pauli();
    let mut matrix = kron(&p, &to_dynamic2(&s1)) + kron(&mass_term, &to_dynamic2(&s3));
    let potential: Vec<f64> = phi.iter().map(|v| cfg.charge * v).collect();
    for (j, v) in potential.iter().enumerate() {
        for s in 0..2 {
            matrix[(2 * j + s, 2 * j + s)] += c(*v, 0.0);
        }
    }
    Ok(LatticeDiracOperator {
        matrix,
        grid: *grid,
        wilson_r,
        mass: cfg.mass,
        charge: cfg.charge,
        links,
        potential,
    })
}

/// Wilson-Dirac Hamiltonian; `wilson_r` must lie in (0, 1].
pub fn build_dirac_1d(grid: &Grid1D, cfg: &FieldConfig, wilson_r: f64) -> Result<LatticeDiracOperator> {
    if !(wilson_r > 0.0 && wilson_r <= 1.0) {
        return Err(Error::InvalidWilson(wilson_r));
    }
    assemble(grid, cfg, wilson_r)
}

/// Naive central-difference Hamiltonian without the Wilson term. It carries
/// the doubler branch at `k = π/a`; kept for comparison only.
pub fn build_naive_dirac_1d(grid: &Grid1D, cfg: &FieldConfig) -> Result<LatticeDiracOperator> {
    assemble(grid, cfg, 0.0)
}

/// Static second-order operator acting on the spatial part.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderOperator {
    /// `Π² + (m + W)² + ieαE_x`.
    pub matrix: CMatrix,
    /// The spin-field piece `ieαE_x` alone.
    pub spin_field: CMatrix,
}

/// Builds `Π² + (m + W)² + ieαE_x` directly from five-point stencils, with
/// `E_x = −(Φ_{j+1} − Φ_{j−1})/2a`. For `Φ = 0` its eigenvalues are the
/// squares of the first-order spectrum.
pub fn second_order_operator(grid: &Grid1D, cfg: &FieldConfig, wilson_r: f64) -> Result<SecondOrderOperator> {
    if !cfg.is_static() {
        return Err(Error::TimeDependentField);
    }
    if !(wilson_r > 0.0 && wilson_r <= 1.0) {
        return Err(Error::InvalidWilson(wilson_r));
    }
    cfg.validate()?;
    let n = grid.n_points();
    let a = grid.spacing();
    let u = grid.links(cfg.charge, &cfg.vector_potential)?;
    let phi = grid.sample_scalar(&cfg.scalar_potential)?;
    let m = cfg.mass;
    let w = wilson_r / (2.0 * a);
    let p2 = 1.0 / (4.0 * a * a);

    let up = |j: usize| u[j % n];
    let down = |j: usize| u[(j + n - 1) % n].conj();
    // Scalar (spin-independent) stencil coefficients for offsets −2..=2.
    let mut spatial = DMatrix::from_element(n, n, ZERO);
    for j in 0..n {
        let fwd1 = up(j);
        let fwd2 = up(j) * up(j + 1);
        let bwd1 = down(j);
        let bwd2 = down(j) * down(j + n - 1);
        let diag = 2.0 * p2 + m * m + 4.0 * m * w + 6.0 * w * w;
        let near = -2.0 * m * w - 4.0 * w * w;
        let far = w * w - p2;
        spatial[(j, j)] += c(diag, 0.0);
        spatial[(j, (j + 1) % n)] += fwd1 * near;
        spatial[(j, (j + n - 1) % n)] += bwd1 * near;
        spatial[(j, (j + 2) % n)] += fwd2 * far;
        spatial[(j, (j + n - 2) % n)] += bwd2 * far;
    }

    let [s1, _, _] = pauli();
    let mut field = DMatrix::from_element(n, n, ZERO);
    for j in 0..n {
        let ex = -(phi[(j + 1) % n] - phi[(j + n - 1) % n]) / (2.0 * a);
        field[(j, j)] = I * (cfg.charge * ex);
    }
    let spin_field = kron(&field, &to_dynamic2(&s1));
    let matrix = kron(&spatial, &CMatrix::identity(2, 2)) + &spin_field;
    Ok(SecondOrderOperator { matrix, spin_field })
}

/// Lattice-vs-analytic and lattice-vs-continuum comparison of the free spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionCheck {
    /// Largest |E_numeric − E_lattice(k)| over the whole spectrum.
    pub lattice_residual: f64,
    /// Largest relative deviation from √(k² + m²) over modes with |k|a ≤ ka_max.
    pub continuum_rel_error: f64,
    pub modes_compared: usize,
}

pub fn free_dispersion_check(grid: &Grid1D, mass: f64, wilson_r: f64, ka_max: f64) -> Result<DispersionCheck> {
    let op = build_dirac_1d(grid, &FieldConfig::free(1.0, mass), wilson_r)?;
    let numeric = op.eigenvalues();
    let a = grid.spacing();
    let mut analytic: Vec<(f64, f64)> = grid
        .momenta()
        .into_iter()
        .map(|k| (lattice_dispersion(k, mass, a, wilson_r), k))
        .collect();
    analytic.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut full: Vec<f64> = analytic.iter().flat_map(|(e, _)| [-e, *e]).collect();
    full.sort_by(f64::total_cmp);
    let lattice_residual = numeric
        .iter()
        .zip(&full)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);

    let positive: Vec<f64> = numeric.iter().copied().filter(|&e| e > 0.0).collect();
    let mut continuum_rel_error = 0.0_f64;
    let mut modes_compared = 0;
    for (e_num, (_, k)) in positive.iter().zip(&analytic) {
        if (k * a).abs() <= ka_max + 1e-12 {
            let exact = (k * k + mass * mass).sqrt();
            continuum_rel_error = continuum_rel_error.max((e_num - exact).abs() / exact);
            modes_compared += 1;
        }
    }
    Ok(DispersionCheck {
        lattice_residual,
        continuum_rel_error,
        modes_compared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonrelLevel {
    pub mass: f64,
    /// Dirac ground state minus the rest mass.
    pub dirac_binding: f64,
    /// Ground state of the matched two-component operator.
    pub schrodinger: f64,
    /// Relative discrepancy; absolute for a zero-depth well.
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonrelComparison {
    pub well_depth: f64,
    pub well_width: f64,
    pub wilson_r: f64,
    pub base: NonrelLevel,
    pub doubled: NonrelLevel,
    /// `doubled.discrepancy / base.discrepancy`.
    pub error_ratio: f64,
}

/// Square well `eΦ = −depth` for `|x| < width/2`.
pub fn square_well(grid: &Grid1D, depth: f64, width: f64) -> Vec<f64> {
    grid.positions()
        .into_iter()
        .map(|x| if x.abs() < width / 2.0 { -depth } else { 0.0 })
        .collect()
}

fn nonrel_level(grid: &Grid1D, well: &[f64], mass: f64, wilson_r: f64, zero_depth: bool) -> Result<NonrelLevel> {
    let cfg = FieldConfig::free(1.0, mass).with_scalar_potential(ScalarPotential::Sampled(well.to_vec()));
    let dirac = build_dirac_1d(grid, &cfg, wilson_r)?
        .lowest_positive()
        .ok_or(Error::Eigensolver)?;
    let h0 = build_h0_lattice(&cfg, grid, LatticeKinetic::DiracMatched { wilson_r })?;
    let schrodinger = *hermitian_eigenvalues(&h0.matrix).first().ok_or(Error::Eigensolver)?;
    let dirac_binding = dirac - mass;
    let diff = (dirac_binding - schrodinger).abs();
    let discrepancy = if zero_depth { diff } else { diff / schrodinger.abs() };
    Ok(NonrelLevel {
        mass,
        dirac_binding,
        schrodinger,
        discrepancy,
    })
}

/// Ground state of a shallow square well from the lattice Dirac operator and
/// from the two-component reduction on the same grid, at `m` and `2m`.
pub fn nonrel_limit_compare(
    well_depth: f64,
    well_width: f64,
    mass: f64,
    grid: &Grid1D,
    wilson_r: f64,
) -> Result<NonrelComparison> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::Precondition(format!("mass must be positive, got {mass}")));
    }
    if !(well_depth.is_finite() && well_depth >= 0.0 && well_width.is_finite() && well_width >= 0.0) {
        return Err(Error::Precondition("well depth and width must be non-negative".into()));
    }
    if well_depth >= mass / 2.0 {
        return Err(Error::RelativisticRegime {
            depth: well_depth,
            limit: mass / 2.0,
        });
    }
    let well = square_well(grid, well_depth, well_width);
    let zero_depth = well_depth == 0.0;
    let base = nonrel_level(grid, &well, mass, wilson_r, zero_depth)?;
    let doubled = nonrel_level(grid, &well, 2.0 * mass, wilson_r, zero_depth)?;
    Ok(NonrelComparison {
        well_depth,
        well_width,
        wilson_r,
        base,
        doubled,
        error_ratio: doubled.discrepancy / base.discrepancy,
    })
}

/// Writes `index,re,im,branch` rows.
pub fn write_spectrum_csv<W: Write>(writer: W, rows: &[(C64, &str)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Precondition(format!("csv write failed: {e}"));
    w.write_record(["index", "re", "im", "branch"]).map_err(io)?;
    for (i, (z, branch)) in rows.iter().enumerate() {
        w.write_record([
            i.to_string(),
            format!("{:.16e}", z.re),
            format!("{:.16e}", z.im),
            branch.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Precondition(format!("csv flush failed: {e}")))?;
    Ok(())
}

/// Rows for a real spectrum, labelled by sign.
pub fn spectrum_rows(eigenvalues: &[f64]) -> Vec<(C64, &'static str)> {
    eigenvalues
        .iter()
        .map(|&e| (c(e, 0.0), if e >= 0.0 { "positive" } else { "negative" }))
        .collect()
}

pub fn write_spectrum_file(path: &Path, rows: &[(C64, &str)]) -> Result<()> {
    let mut buf = Vec::new();
    write_spectrum_csv(&mut buf, rows)?;
    crate::report::write_atomic(path, &buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn grid() -> Grid1D {
        Grid1D::new(64, 0.1).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(15, 0.1).is_err());
        assert!(Grid1D::new(17, 0.1).is_err());
        assert!(Grid1D::new(16, 0.0).is_err());
        let g = Grid1D::new(16, 0.5).unwrap();
        assert_eq!(g.length(), 8.0);
        assert_eq!(g.momenta().len(), 16);
        let x = g.positions();
        assert!((x[0] + x[15]).abs() < 1e-15);
    }

    #[test]
    fn wilson_parameter_range() {
        let cfg = FieldConfig::free(1.0, 1.0);
        for r in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(build_dirac_1d(&grid(), &cfg, r), Err(Error::InvalidWilson(_))));
        }
        assert!(build_dirac_1d(&grid(), &cfg, 1.0).is_ok());
    }

    #[test]
    fn hermitian_for_generic_fields() {
        let g = grid();
        let x = g.positions();
        let cfg = FieldConfig::free(-0.7, 1.3)
            .with_scalar_potential(ScalarPotential::Sampled(x.iter().map(|v| 0.1 * (v * 2.0).sin()).collect()))
            .with_vector_potential(VectorPotential::SampledX(x.iter().map(|v| 0.3 * v.cos() + 0.2).collect()));
        let op = build_dirac_1d(&g, &cfg, 0.6).unwrap();
        assert!(op.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn free_spectrum_matches_lattice_dispersion() {
        let check = free_dispersion_check(&grid(), 1.0, 1.0, 0.3).unwrap();
        assert!(check.lattice_residual < 1e-10, "{check:?}");
    }

    #[test]
    fn constant_potential_shifts_spectrum() {
        let free = build_dirac_1d(&grid(), &FieldConfig::free(1.0, 1.0), 1.0).unwrap();
        let cfg = FieldConfig::free(1.0, 1.0).with_scalar_potential(ScalarPotential::Constant(0.25));
        let shifted = build_dirac_1d(&grid(), &cfg, 1.0).unwrap();
        for (a, b) in free.eigenvalues().iter().zip(shifted.eigenvalues()) {
            assert!((b - a - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn free_spectrum_is_symmetric() {
        let ev = build_dirac_1d(&grid(), &FieldConfig::free(1.0, 1.0), 1.0).unwrap().eigenvalues();
        let n = ev.len();
        let worst = (0..n).map(|i| (ev[i] + ev[n - 1 - i]).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-12);
    }

    #[test]
    fn wilson_term_removes_doublers() {
        let cfg = FieldConfig::free(1.0, 1.0);
        let near_mass = |ev: Vec<f64>| ev.iter().filter(|e| e.abs() < 1.0 + 0.05).count();
        let wilson = build_dirac_1d(&grid(), &cfg, 1.0).unwrap().eigenvalues();
        let naive = build_naive_dirac_1d(&grid(), &cfg).unwrap().eigenvalues();
        assert_eq!(near_mass(wilson), 2);
        assert_eq!(near_mass(naive), 4);
    }

    #[test]
    fn quantized_gauge_shift_preserves_spectrum() {
        let g = grid();
        let charge = 1.0;
        let shift = 2.0 * std::f64::consts::PI / (charge * g.length());
        let x = g.positions();
        let base_a: Vec<f64> = x.iter().map(|v| 0.4 * (2.0 * std::f64::consts::PI * v / g.length()).sin()).collect();
        let well = square_well(&g, 0.1, 2.0);
        let cfg = FieldConfig::free(charge, 1.0)
            .with_scalar_potential(ScalarPotential::Sampled(well))
            .with_vector_potential(VectorPotential::SampledX(base_a.clone()));
        let shifted = cfg
            .clone()
            .with_vector_potential(VectorPotential::SampledX(base_a.iter().map(|v| v + shift).collect()));
        let a = build_dirac_1d(&g, &cfg, 1.0).unwrap().eigenvalues();
        let b = build_dirac_1d(&g, &shifted, 1.0).unwrap().eigenvalues();
        let worst = a.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn squared_hamiltonian_equals_second_order_operator() {
        let g = grid();
        let x = g.positions();
        let cfg = FieldConfig::free(1.0, 1.0)
            .with_vector_potential(VectorPotential::SampledX(x.iter().map(|v| 0.5 * (v * 1.3).cos()).collect()));
        let h = build_dirac_1d(&g, &cfg, 0.8).unwrap();
        let k2 = second_order_operator(&g, &cfg, 0.8).unwrap();
        assert!(max_abs_diff(&(&h.matrix * &h.matrix), &k2.matrix) < 1e-9);
        assert_eq!(crate::linalg::max_abs(&k2.spin_field), 0.0);
    }

    #[test]
    fn second_order_spin_term_tracks_field() {
        let g = grid();
        let x = g.positions();
        let phi: Vec<f64> = x.iter().map(|v| 0.2 * (2.0 * std::f64::consts::PI * v / g.length()).sin()).collect();
        let cfg = FieldConfig::free(1.0, 1.0).with_scalar_potential(ScalarPotential::Sampled(phi));
        let k2 = second_order_operator(&g, &cfg, 1.0).unwrap();
        assert!(crate::linalg::max_abs(&k2.spin_field) > 0.01);
        assert!(k2.spin_field.iter().all(|z| z.re == 0.0));
        let moving = FieldConfig::free(1.0, 1.0).with_a_dot([0.1, 0.0, 0.0]);
        assert!(matches!(second_order_operator(&g, &moving, 1.0), Err(Error::TimeDependentField)));
    }

    #[test]
    fn nonrel_rejects_deep_wells() {
        let g = Grid1D::with_length(64, 40.0).unwrap();
        assert!(matches!(
            nonrel_limit_compare(0.6, 10.0, 1.0, &g, 0.01),
            Err(Error::RelativisticRegime { .. })
        ));
    }

    #[test]
    fn zero_depth_well_agrees() {
        let g = Grid1D::with_length(64, 40.0).unwrap();
        let cmp = nonrel_limit_compare(0.0, 10.0, 1.0, &g, 0.01).unwrap();
        assert!(cmp.base.discrepancy < 1e-6);
        assert!(cmp.doubled.discrepancy < 1e-6);
    }

    #[test]
    fn spectrum_csv_layout() {
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, &spectrum_rows(&[-1.0, 2.5])).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,re,im,branch");
        assert!(lines[1].starts_with("0,-1.0000000000000000e0,0.0000000000000000e0,negative"));
        assert!(lines[2].ends_with(",positive"));
    }
}
