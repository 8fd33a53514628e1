// Finite boosts and rotations in the spinor and vector representations.
//
// The spinor boost `S = exp(iη·K)` and the vector boost `Λ(η)` satisfy
// `S⁻¹ γ^μ S = Λ^μ_ν γ^ν`. Boosts are not unitary, rotations are.

use boostkit::clifford::{
    covariance_residual, finite_spinor_boost, finite_spinor_rotation, finite_vector_boost, finite_vector_rotation,
    make_gamma, spin_tensor, RapidityVector,
};

pub fn run() -> boostkit::Result<()> {
    let gammas = make_gamma("dirac")?;
    let s = spin_tensor(&gammas);

    println!("{:>6} {:>14} {:>14} {:>14}", "η", "covariance", "‖S†S − 1‖", "S̄ S − 1");
    for eta in [0.1, 0.5, 1.0, 2.0] {
        let rapidity = RapidityVector::along_x(eta);
        let spinor = finite_spinor_boost(&s, &rapidity);
        let vector = finite_vector_boost(&rapidity);
        println!(
            "{eta:>6.2} {:>14.2e} {:>14.2e} {:>14.2e}",
            covariance_residual(&gammas, &spinor, &vector),
            spinor.unitarity_residual(),
            spinor.dirac_unitarity_residual(&gammas)
        );
    }

    // Event (t, x) = (1, 0) seen after a boost of rapidity 0.5 along x.
    let lambda = finite_vector_boost(&RapidityVector::along_x(0.5));
    let x = lambda.apply([1.0, 0.0, 0.0, 0.0]);
    println!("\nboosted event: t' = {:.6}, x' = {:.6}", x[0], x[1]);

    let theta = [0.0, 0.0, std::f64::consts::FRAC_PI_2];
    let rot_s = finite_spinor_rotation(&s, theta);
    let rot_v = finite_vector_rotation(theta);
    println!(
        "rotation by π/2 about z: covariance {:.2e}, unitarity {:.2e}",
        covariance_residual(&gammas, &rot_s, &rot_v),
        rot_s.unitarity_residual()
    );
    let full_turn = finite_spinor_rotation(&s, [0.0, 0.0, 2.0 * std::f64::consts::PI]);
    println!("spinor rotation by 2π: S[0][0] = {:.3}", full_turn.matrix[(0, 0)].re);
    Ok(())
}

#[allow(dead_code)]
fn main() -> boostkit::Result<()> {
    run()
}
