//! Cluster decompositions of four subsystems and their refinement order.

use qfactor::partition::{enumerate_partitions, ClusterDecomposition};

fn main() -> qfactor::Result<()> {
    for n in 1..=6 {
        println!("partitions of {n}: {}", enumerate_partitions(n)?.count());
    }

    let a: ClusterDecomposition = "1,2|3|4".parse()?;
    let b: ClusterDecomposition = "1|2,3|4".parse()?;
    println!("{a} meet {b} = {}", a.intersect(&b)?);
    let coarse: Vec<String> = a.coarsenings()?.iter().map(|c| c.to_string()).collect();
    println!("coarsenings of {a}: {}", coarse.join("  "));
    println!("{a} restricted to (1,3) = {}", a.induced(&[0, 2])?);
    println!("1,2,3|4 coarser than {a}: {}", "1,2,3|4".parse::<ClusterDecomposition>()?.is_coarsening_of(&a));
    Ok(())
}
