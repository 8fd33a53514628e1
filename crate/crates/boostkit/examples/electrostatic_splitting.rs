// Spin splitting of free levels by a uniform electric field.
//
// With B = 0 the Hermitian `H0` and the anti-Hermitian `H1 = i(e/2m)σ·E`
// commute, the ψ± combinations decouple the system into `H0 ± H1`, and each
// level splits by `|2ε1| = (e/m)|E|`. A magnetic field crossed with E spoils
// the commutation.

use boostkit::pauli::{
    build_full_pauli, check_commutation, splitting_spectrum, transform_to_pm, FieldConfig, PlaneWaveBasis,
};

pub fn run() -> boostkit::Result<()> {
    let basis = PlaneWaveBasis::new(2.0 * std::f64::consts::PI, 3)?;
    let (e, m) = (1.0, 1.0);

    println!("{:>8} {:>14} {:>14} {:>12}", "E0", "|2ε1|", "(e/m)E0", "[H0,H1]");
    for e0 in [0.0, 0.001, 0.01, 0.1] {
        let cfg = FieldConfig::free(e, m).with_e_field([0.0, 0.0, e0]);
        let spectrum = splitting_spectrum(&cfg, &basis, 1e-12)?;
        println!(
            "{e0:>8.3} {:>14.6e} {:>14.6e} {:>12.2e}",
            spectrum.splitting_magnitude,
            e / m * e0,
            check_commutation(&cfg, &basis)?
        );
    }

    let cfg = FieldConfig::free(e, m).with_e_field([0.0, 0.0, 0.01]);
    let spectrum = splitting_spectrum(&cfg, &basis, 1e-12)?;
    println!("\nlowest levels (ε0, ε1):");
    for pair in spectrum.pairs.iter().take(4) {
        println!("  ε0 = {:+.4}   ε1 = {:+.4}i", pair.epsilon0.re, pair.epsilon1.im);
    }

    let off = transform_to_pm(&build_full_pauli(&cfg, &basis)?)?.off_block_residual();
    println!("\noff-block residual after the ψ± change of basis: {off:.2e}");

    println!("\ncrossed B ⟂ E:");
    for s in [0.1, 0.2, 0.4] {
        let crossed = FieldConfig::free(e, m).with_b_field([0.0, 0.0, s]).with_e_field([s, 0.0, 0.0]);
        println!("  |B||E| = {:.3}: [H0,H1] = {:.3e}", s * s, check_commutation(&crossed, &basis)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> boostkit::Result<()> {
    run()
}
