// Far-field potential from the moment tensor compared with exact potentials.
//
// For a dipole pair the truncation error falls as (d/r)², so doubling the
// distance cuts it by four. A square current loop shows the magnetic term.

use boostkit::moments::{
    exact_potential_oracle, multipole_potential, ChargedParticle, MultipoleOrder, ParticleSystem, Source,
    StaticCurrentLoop,
};

fn rel(a: [f64; 4], b: [f64; 4]) -> f64 {
    let d: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    d / b.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn run() -> boostkit::Result<()> {
    let pair = ParticleSystem::new(vec![
        ChargedParticle::at_rest(1.0, 1.0, 0.0, [0.0, 0.0, 0.5])?,
        ChargedParticle::at_rest(1.0, -1.0, 0.0, [0.0, 0.0, -0.5])?,
    ])?;
    println!("dipole pair, d = 1, field point on the axis");
    println!("{:>6} {:>14} {:>14} {:>12}", "r/d", "A0 dipole", "A0 exact", "rel. error");
    let mut previous: Option<f64> = None;
    for r in [5.0, 10.0, 20.0, 40.0] {
        let x = [0.0, 0.0, r];
        let approx = multipole_potential(Source::Particles(&pair), x, MultipoleOrder::Dipole)?;
        let exact = exact_potential_oracle(Source::Particles(&pair), x)?;
        let err = rel(approx, exact);
        let ratio = previous.map(|p| format!("  (÷{:.2})", p / err)).unwrap_or_default();
        println!("{r:>6.0} {:>14.6e} {:>14.6e} {err:>12.3e}{ratio}", approx[0], exact[0]);
        previous = Some(err);
    }

    let lp = StaticCurrentLoop::square(1.0, 1.0, 16);
    println!("\nsquare loop, side a = 1, unit current");
    for r in [5.0, 10.0, 20.0] {
        let x = [r, 0.0, 0.0];
        let approx = multipole_potential(Source::Loop(&lp), x, MultipoleOrder::Dipole)?;
        let exact = exact_potential_oracle(Source::Loop(&lp), x)?;
        println!("  r = {r:>4.0}a: A_y = {:.6e} (exact {:.6e}), rel. error {:.2e}", approx[2], exact[2], rel(approx, exact));
    }

    match multipole_potential(Source::Loop(&lp), [1.0, 0.0, 0.0], MultipoleOrder::Dipole) {
        Err(e) => println!("\nnear-field request rejected: {e}"),
        Ok(_) => println!("\nnear-field request unexpectedly accepted"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> boostkit::Result<()> {
    run()
}
