//! Seen correlations and correlation information of the singlet and of two
//! singlets read over different cluster decompositions.

use qfactor::correlations::{self, EventString};
use qfactor::fixtures::{self, spin_down, spin_up, x_plus};
use qfactor::ClusterDecomposition;

fn main() -> qfactor::Result<()> {
    let rho = fixtures::singlet().density();
    let cd: ClusterDecomposition = "1|2".parse()?;
    for (label, a, b) in [
        ("up, up", spin_up(), spin_up()),
        ("up, down", spin_up(), spin_down()),
        ("up, x+", spin_up(), x_plus()),
    ] {
        let s = EventString::new(vec![Some(a), Some(b)]);
        let r = correlations::seen_correlation(&rho, &cd, &s)?;
        println!(
            "singlet {label:<9} coincidence {:.3}  marginals {:.3}  seen {:.3}",
            r.coincidence, r.marginal_product, r.seen
        );
    }

    let two = fixtures::eq15().density();
    for text in ["1,2|3,4", "2,3|1,4", "1|2|3|4"] {
        let cd: ClusterDecomposition = text.parse()?;
        let ci = correlations::correlation_information(&two, &cd)?;
        let within: Vec<String> = ci.within.iter().map(|w| format!("{:.2}", w.abs())).collect();
        println!(
            "two singlets over {text:<8} within [{}] among {:.2} total {:.2} bits",
            within.join(", "),
            ci.among.abs(),
            ci.total
        );
    }
    Ok(())
}
