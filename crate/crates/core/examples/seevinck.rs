//! The product condition over two groups holds for two singlets and fails
//! for the Seevinck state.

use qfactor::factorization::{self, Groups, DEFAULT_SEARCH_BUDGET};
use qfactor::{fixtures, DEFAULT_SEED};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qfactor::Result<()> {
    let groups = Groups::parse("1,2|3,4", 4)?;
    for (name, psi) in [("two singlets", fixtures::eq15()), ("Seevinck state", fixtures::seevinck21())] {
        let rho = psi.density();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        let best = factorization::search_seevinck_violation(&rho, &groups, DEFAULT_SEARCH_BUDGET, 1e-10, &mut rng)?
            .expect("nonzero budget");
        println!(
            "{name:<15} largest |lhs - rhs| over {DEFAULT_SEARCH_BUDGET} quadruples: {:.3e} (lhs {:.4}, rhs {:.4})",
            best.check.deviation(),
            best.check.lhs,
            best.check.rhs
        );
    }
    Ok(())
}
