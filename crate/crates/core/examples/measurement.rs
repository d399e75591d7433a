//! Lüders measurements on part of a random three-qubit state, and local
//! unitary evolution that cannot signal.

use qfactor::dynamics::{self, ProjectiveDecomposition};
use qfactor::linalg;
use qfactor::{random, DEFAULT_SEED};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qfactor::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let rho = random::density(&mut rng, &[2, 2, 2], 3);
    let measured = [0, 1];
    let distant = [2];

    let pd = ProjectiveDecomposition::computational(&[2, 2])?;
    let after = dynamics::luders_nonselective(&rho, &measured, &pd)?;
    let change = linalg::frobenius_distance(after.reduced(&distant)?.matrix(), rho.reduced(&distant)?.matrix())?;
    println!("distant state change under nonselective measurement: {change:.1e}");

    let dd = dynamics::distant_decomposition(&rho, &measured, &pd)?;
    for o in &dd.outcomes {
        println!("  outcome {} with probability {:.4}, distant purity {:.4}", o.index, o.weight, o.state.purity());
    }
    let mix = linalg::frobenius_distance(&dd.mixture(), rho.reduced(&distant)?.matrix())?;
    println!("weighted mixture vs distant state: {mix:.1e}");

    let p1 = &pd.projectors()[0];
    let p2 = random::ray_projector(&mut rng, 2);
    let id = dynamics::conditional_probability_identity(&rho, &measured, p1, &distant, &p2)?;
    println!("joint {:.6} = marginal x conditional {:.6}", id.lhs, id.rhs);

    let selected = dynamics::luders_selective(&rho, &measured, p1)?;
    println!("selective update purity {:.4}", selected.purity());

    let u01 = random::unitary(&mut rng, 4);
    let u2 = random::unitary(&mut rng, 2);
    let dev = dynamics::local_unitary_no_signaling(&rho, &[0, 1], &[2], &u01, &u2, 10)?;
    println!("no-signaling deviation over 10 steps: {dev:.1e}");
    Ok(())
}
