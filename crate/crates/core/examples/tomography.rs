//! Reconstruct a random two-qubit-plus-qutrit state from exact product-probe
//! probabilities.

use qfactor::linalg;
use qfactor::tomography::{self, DEFAULT_NOISE_BOUND};
use qfactor::{random, DEFAULT_SEED};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qfactor::Result<()> {
    let dims = [2, 2, 3];
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let rho = random::density(&mut rng, &dims, 5);

    let count = tomography::required_probe_count(&dims)?;
    let probes = tomography::product_probe_set(&dims)?;
    println!(
        "dims {dims:?}: {} probes, {} nontrivial probabilities needed",
        probes.len(),
        count.required
    );

    let ops = tomography::probe_operators(&dims, &probes)?;
    let probabilities = tomography::probe_probabilities(&rho, &ops);
    let rec = tomography::reconstruct(&probabilities, &ops, &dims, DEFAULT_NOISE_BOUND)?;
    println!("Gram condition number  {:.3e}", rec.gram_condition);
    println!("Frobenius error        {:.3e}", linalg::frobenius_distance(&rec.operator, rho.matrix())?);
    println!("min eigenvalue         {:.3e}", rec.min_eigenvalue);
    println!("flagged                {}", rec.flagged);

    // one qubit probe basis and the dyad expansion behind it
    let basis = tomography::build_probe_basis(2)?;
    println!("\nqubit probe basis Gram determinant {:.4}", basis.gram_determinant);
    let dyad = tomography::dyad_as_projectors(0, 1, 2)?;
    for (coef, p) in &dyad.terms {
        println!("  {coef:>12.3} x rank-{} projector", p.rank());
    }
    println!("  sum = {:.3}", dyad.sum());
    Ok(())
}
