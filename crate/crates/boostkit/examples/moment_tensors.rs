// Moment tensors of moving charges.
//
// `M^μν = ½ Σ e (x^μ u^ν − x^ν u^μ)/γ` equals `(e/2m′) L^μν` for a single
// charge, contains the magnetic moment in its spatial block and the electric
// moment in its time-space block, and mixes the two under boosts.

use boostkit::clifford::{finite_vector_boost, RapidityVector};
use boostkit::moments::{
    electric_moment, magnetic_moment, moment_tensor, verify_moment_relation, ChargedParticle, ParticleSystem,
};

pub fn run() -> boostkit::Result<()> {
    // A charge on a circle of radius 1 moving at 0.6 tangentially.
    let orbiting = ChargedParticle::new(1.0, 1.0, [0.0, 1.0, 0.0, 0.0], [0.0, 0.6, 0.0])?;
    let m = moment_tensor(&[orbiting]);
    println!("circulating charge: μ = {:?}", magnetic_moment(&m));
    println!("  expected μ_z = e v r / 2 = {}", 0.5 * 0.6);
    println!("  relation residual {:.2e}", verify_moment_relation(&[orbiting])?);

    // A static pair forms an electric dipole.
    let pair = ParticleSystem::new(vec![
        ChargedParticle::at_rest(1.0, 1.0, 0.0, [0.0, 0.0, 0.5])?,
        ChargedParticle::at_rest(1.0, -1.0, 0.0, [0.0, 0.0, -0.5])?,
    ])?;
    let md = moment_tensor(&pair);
    println!("\nstatic dipole pair: d = {:?}", electric_moment(&md));

    // Boosting the orbiting charge along x turns part of μ into d.
    let lambda = finite_vector_boost(&RapidityVector::new([0.6, 0.0, 0.0])?);
    let boosted = orbiting.transformed(&lambda);
    let mb = moment_tensor(&[boosted]);
    println!("\nafter a boost along x:");
    println!("  μ' = {:?}", magnetic_moment(&mb));
    println!("  d' = {:?}", electric_moment(&mb));
    println!("  relation residual {:.2e}", verify_moment_relation(&[boosted])?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> boostkit::Result<()> {
    run()
}
