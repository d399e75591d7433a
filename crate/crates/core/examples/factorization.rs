//! Finest uncorrelated cluster decompositions, homogeneity and isolation.

use qfactor::factorization::{self, default_tolerance};
use qfactor::{fixtures, random, DEFAULT_SEED};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qfactor::Result<()> {
    for (name, psi) in [("two singlets", fixtures::eq15()), ("Seevinck state", fixtures::seevinck21())] {
        let rho = psi.density();
        let r = factorization::finest_ucd(&rho, default_tolerance(rho.dim()))?;
        println!("{name:<15} -> {}", r.decomposition);
    }

    // a Bell pair on (1,3), a lone qubit 2 and a random mixed pair (4,5)
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let bell = fixtures::phi_plus().density();
    let lone = random::full_rank_density(&mut rng, &[2]);
    let pair = random::full_rank_density(&mut rng, &[2, 2]);
    // bell(1,3) lone(2) pair(4,5) in tensor order 1,3,2,4,5
    let rho = bell.tensor(&lone).tensor(&pair).permute(&[0, 2, 1, 3, 4])?;
    let tol = default_tolerance(rho.dim());
    let r = factorization::finest_ucd(&rho, tol)?;
    println!("assembled state -> {} (residual {:.1e})", r.decomposition, r.residual);
    for split in &r.splits {
        println!("  split {:?} off {:?}, residual {:.1e}", split.part, split.cluster, split.residual);
    }
    let oracle = factorization::fucd_oracle(&rho, tol)?;
    println!("exhaustive oracle -> {oracle}");

    for cl in r.decomposition.clusters() {
        println!("  cluster {cl:?}: {:?}", factorization::classify_homogeneity(&rho, cl, tol)?);
    }
    println!(
        "system (1,3) isolated from the rest: {}",
        factorization::is_correlationally_isolated(&rho, &[0, 2], tol)?
    );
    println!(
        "system (1,2) isolated from the rest: {}",
        factorization::is_correlationally_isolated(&rho, &[0, 1], tol)?
    );
    Ok(())
}
