// Shallow square well: lattice Dirac ground state minus the rest mass against
// the two-component Hamiltonian on the same grid. The discrepancy is a
// relativistic correction and roughly halves when the mass doubles.

use boostkit::dirac_grid::{nonrel_limit_compare, Grid1D};

pub fn run() -> boostkit::Result<()> {
    let grid = Grid1D::with_length(256, 100.0)?;
    for depth in [0.0, 0.005, 0.01, 0.02] {
        let cmp = nonrel_limit_compare(depth, 10.0, 1.0, &grid, 0.01)?;
        println!(
            "depth {depth:<6} E_D − m = {:+.6e}  E_S = {:+.6e}  discrepancy {:.2e}  (2m: {:.2e}, ratio {:.3})",
            cmp.base.dirac_binding,
            cmp.base.schrodinger,
            cmp.base.discrepancy,
            cmp.doubled.discrepancy,
            cmp.error_ratio
        );
    }
    match nonrel_limit_compare(0.6, 10.0, 1.0, &grid, 0.01) {
        Err(e) => println!("deep well rejected: {e}"),
        Ok(_) => println!("deep well unexpectedly accepted"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> boostkit::Result<()> {
    run()
}
