// Builds the Dirac-representation γ matrices and the spin generators, then
// checks the Clifford relation, the Lorentz algebra and the Σ/K block forms.
//
// ```text
// cargo run --example gamma_algebra
// ```

use boostkit::clifford::{block_form_residual, check_lorentz_algebra, make_gamma, spin_tensor};

pub fn run() -> boostkit::Result<()> {
    let gammas = make_gamma("dirac")?;
    println!("representation: {}", gammas.representation());
    println!("{{γ^μ, γ^ν}} − 2g^μν        max residual {:.2e}", gammas.clifford_residual());
    println!("γ0 γ^μ† γ0 − γ^μ            max residual {:.2e}", gammas.hermiticity_residual());

    let s = spin_tensor(&gammas);
    let algebra = check_lorentz_algebra(&s);
    println!(
        "Lorentz algebra             max residual {:.2e} (worst at {:?})",
        algebra.max_residual, algebra.worst_indices
    );
    println!("Σ, K against block forms    max residual {:.2e}", block_form_residual(&s));

    let sigma = s.sigma_vector();
    println!("\nΣ3 =");
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| format!("{:>5.2}", sigma[2][(i, j)].re)).collect();
        println!("  [{}]", row.join(" "));
    }

    if gammas.clifford_residual() > 1e-12 {
        return Err(boostkit::Error::Precondition("Clifford relation violated".into()));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> boostkit::Result<()> {
    run()
}
