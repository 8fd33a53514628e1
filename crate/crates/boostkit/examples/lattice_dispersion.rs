// Free lattice Dirac spectrum with and without the Wilson term.
//
// The Wilson term lifts the doubler at k = π/a; without it a second light
// branch appears. The squared Hamiltonian agrees with the second-order
// operator built from stencils.

use boostkit::dirac_grid::{
    build_dirac_1d, build_naive_dirac_1d, free_dispersion_check, lattice_dispersion, second_order_operator, Grid1D,
};
use boostkit::linalg::hermitian_eigenvalues;
use boostkit::pauli::{FieldConfig, VectorPotential};

pub fn run() -> boostkit::Result<()> {
    let m = 1.0;
    for spacing in [0.1, 0.01] {
        let grid = Grid1D::new(256, spacing)?;
        let check = free_dispersion_check(&grid, m, 1.0, 0.3)?;
        println!(
            "a = {spacing:<5} lattice residual {:.1e}, continuum error (ka ≤ 0.3) {:.3}% over {} modes",
            check.lattice_residual,
            100.0 * check.continuum_rel_error,
            check.modes_compared
        );
    }

    let grid = Grid1D::new(64, 0.1)?;
    let cfg = FieldConfig::free(1.0, m);
    let light = |ev: Vec<f64>| ev.into_iter().filter(|e| e.abs() < m + 0.05).count();
    println!(
        "\nstates with |E| < m + 0.05: Wilson r = 1 → {}, naive → {}",
        light(build_dirac_1d(&grid, &cfg, 1.0)?.eigenvalues()),
        light(build_naive_dirac_1d(&grid, &cfg)?.eigenvalues())
    );
    let k_edge = std::f64::consts::PI / grid.spacing();
    println!("E(π/a) with r = 1: {:.3}", lattice_dispersion(k_edge, m, grid.spacing(), 1.0));

    let with_a = cfg.with_vector_potential(VectorPotential::Constant([0.4, 0.0, 0.0]));
    let h = build_dirac_1d(&grid, &with_a, 1.0)?;
    let mut squared: Vec<f64> = h.eigenvalues().iter().map(|e| e * e).collect();
    squared.sort_by(f64::total_cmp);
    let second = hermitian_eigenvalues(&second_order_operator(&grid, &with_a, 1.0)?.matrix);
    let worst = squared.iter().zip(&second).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("spec(H)² vs second-order operator: {worst:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> boostkit::Result<()> {
    run()
}
