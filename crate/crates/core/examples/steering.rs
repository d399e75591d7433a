//! Two singlets on (1,2) and (3,4). Measuring the middle pair in the Bell
//! basis leaves the outer pair in the matching Bell state.

use qfactor::dynamics::{self, ProjectiveDecomposition};
use qfactor::fixtures;
use qfactor::schmidt;

const NAMES: [&str; 4] = ["psi+", "psi-", "phi+", "phi-"];

fn main() -> qfactor::Result<()> {
    let psi = fixtures::eq15();

    let form = schmidt::schmidt_decompose(&psi, &[1, 2])?;
    println!("Schmidt coefficients across (2,3)|(1,4): {:?}", form.coefficients);

    let bell: Vec<_> = fixtures::bell_basis().iter().map(|b| b.amplitudes().clone()).collect();
    let partners = schmidt::partners_in_basis(&psi, &[1, 2], &bell)?;
    for (name, p) in NAMES.iter().zip(&partners) {
        let overlaps: Vec<String> = fixtures::bell_basis()
            .iter()
            .map(|b| format!("{:+.2}", b.amplitudes().dotc(&p.vector).re))
            .collect();
        println!("  {name}(2,3) has weight {:.2}, partner in Bell basis [{}]", p.coefficient, overlaps.join(" "));
    }

    let rho = psi.density();
    let dd = dynamics::distant_decomposition(&rho, &[1, 2], &ProjectiveDecomposition::bell()?)?;
    for o in &dd.outcomes {
        let target = &fixtures::bell_basis()[o.index];
        let fidelity = rho_fidelity(o.state.matrix(), target.amplitudes());
        println!(
            "outcome {:<5} probability {:.3}, state of (1,4) has fidelity {:.6} with {}",
            NAMES[o.index], o.weight, fidelity, NAMES[o.index]
        );
    }
    Ok(())
}

fn rho_fidelity(m: &qfactor::CMatrix, v: &qfactor::CVector) -> f64 {
    v.dotc(&(m * v)).re
}
