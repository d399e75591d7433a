//! Tensor factorization of states over cluster decompositions: the
//! uncorrelated-decomposition test, the finest such decomposition, and the
//! predicates built on it.

use rand::Rng;
use serde::Serialize;

use crate::correlations::Projector;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::partition::{bipartition_candidates, enumerate_partitions, ClusterDecomposition};
use crate::random;
use crate::state::DensityOperator;

/// Largest number of subsystems handled by [`finest_ucd`].
pub const MAX_SUBSYSTEMS: usize = 16;

/// Largest number of subsystems handled by [`fucd_oracle`].
pub const MAX_ORACLE_SUBSYSTEMS: usize = 8;

/// Quadruples tried by a Seevinck violation search unless told otherwise.
pub const DEFAULT_SEARCH_BUDGET: usize = 10_000;

/// Default factorization tolerance, `1e-9` times the total dimension.
pub fn default_tolerance(dim: usize) -> f64 {
    1e-9 * dim as f64
}

/// Tensor product of the cluster states, in the global subsystem order.
pub fn product_of_marginals(rho: &DensityOperator, cd: &ClusterDecomposition) -> Result<CMatrix> {
    check_cd(rho, cd)?;
    let marginals: Vec<CMatrix> = cd
        .clusters()
        .iter()
        .map(|cl| rho.reduced(cl).map(DensityOperator::into_matrix))
        .collect::<Result<_>>()?;
    linalg::kron_clusters(&marginals, cd.clusters(), rho.dims())
}

fn check_cd(rho: &DensityOperator, cd: &ClusterDecomposition) -> Result<()> {
    if cd.n() != rho.num_subsystems() {
        return Err(Error::DimensionMismatch(format!(
            "decomposition of {} subsystems for a state of {}",
            cd.n(),
            rho.num_subsystems()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UcdCheck {
    pub holds: bool,
    /// `||rho - ⊗_k rho_k||_F`
    pub residual: f64,
}

/// Whether `rho` equals the tensor product of its cluster states.
pub fn is_ucd(rho: &DensityOperator, cd: &ClusterDecomposition, tol: f64) -> Result<UcdCheck> {
    if cd.is_trivial() {
        check_cd(rho, cd)?;
        return Ok(UcdCheck { holds: true, residual: 0.0 });
    }
    let product = product_of_marginals(rho, cd)?;
    let residual = linalg::frobenius_distance(rho.matrix(), &product)?;
    Ok(UcdCheck { holds: residual <= tol, residual })
}

/// A split accepted by the search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitRecord {
    /// Cluster that was split (zero-based global indices).
    pub cluster: Vec<usize>,
    /// One side of the split; the other is the rest of `cluster`.
    pub part: Vec<usize>,
    pub residual: f64,
}

/// A candidate split whose residual fell within a decade of the tolerance
/// on either side, so its classification is numerically fragile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmbiguousSplit {
    pub cluster: Vec<usize>,
    pub part: Vec<usize>,
    pub residual: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationResult {
    pub decomposition: ClusterDecomposition,
    pub splits: Vec<SplitRecord>,
    pub tolerance: f64,
    /// Residual of the whole state against the product over `decomposition`.
    pub residual: f64,
    pub ambiguous: Vec<AmbiguousSplit>,
}

impl FactorizationResult {
    pub fn is_ambiguous(&self) -> bool {
        !self.ambiguous.is_empty()
    }
}

fn near_threshold(residual: f64, tol: f64) -> bool {
    residual > tol / 10.0 && residual <= tol * 10.0
}

/// Searches the bipartitions of one cluster state in the fixed order (smaller
/// side ascending, then lexicographic) and returns the first that factorizes.
fn first_factorizing_split(
    cluster_state: &DensityOperator,
    cluster: &[usize],
    tol: f64,
    ambiguous: &mut Vec<AmbiguousSplit>,
) -> Result<Option<(Vec<usize>, f64)>> {
    let local: Vec<usize> = (0..cluster.len()).collect();
    for part in bipartition_candidates(&local) {
        let cd = ClusterDecomposition::bipartition(cluster.len(), &part)?;
        let chk = is_ucd(cluster_state, &cd, tol)?;
        let global_part: Vec<usize> = part.iter().map(|&k| cluster[k]).collect();
        if near_threshold(chk.residual, tol) {
            ambiguous.push(AmbiguousSplit {
                cluster: cluster.to_vec(),
                part: global_part.clone(),
                residual: chk.residual,
                accepted: chk.holds,
            });
        }
        if chk.holds {
            return Ok(Some((global_part, chk.residual)));
        }
    }
    Ok(None)
}

/// The finest uncorrelated cluster decomposition, by recursive splitting:
/// a cluster whose state factorizes over some bipartition is replaced by the
/// two halves, which are examined in turn, until no cluster splits.
pub fn finest_ucd(rho: &DensityOperator, tol: f64) -> Result<FactorizationResult> {
    let n = rho.num_subsystems();
    if n > MAX_SUBSYSTEMS {
        return Err(Error::OutOfRange(format!(
            "factorization handles at most {MAX_SUBSYSTEMS} subsystems, got {n}"
        )));
    }
    let mut pending: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut done: Vec<Vec<usize>> = Vec::new();
    let mut splits = Vec::new();
    let mut ambiguous = Vec::new();
    while let Some(cluster) = pending.pop() {
        if cluster.len() == 1 {
            done.push(cluster);
            continue;
        }
        let state = rho.reduced(&cluster)?;
        match first_factorizing_split(&state, &cluster, tol, &mut ambiguous)? {
            Some((part, residual)) => {
                let rest: Vec<usize> = cluster.iter().copied().filter(|k| !part.contains(k)).collect();
                splits.push(SplitRecord { cluster: cluster.clone(), part: part.clone(), residual });
                pending.push(rest);
                pending.push(part);
            }
            None => done.push(cluster),
        }
    }
    let decomposition = ClusterDecomposition::new(n, done)?;
    let residual = is_ucd(rho, &decomposition, tol)?.residual;
    Ok(FactorizationResult { decomposition, splits, tolerance: tol, residual, ambiguous })
}

/// Intersection of every uncorrelated decomposition, found by exhaustive
/// enumeration. Independent of [`finest_ucd`]; `N <= 8`.
pub fn fucd_oracle(rho: &DensityOperator, tol: f64) -> Result<ClusterDecomposition> {
    let n = rho.num_subsystems();
    if n > MAX_ORACLE_SUBSYSTEMS {
        return Err(Error::OutOfRange(format!(
            "exhaustive search handles at most {MAX_ORACLE_SUBSYSTEMS} subsystems, got {n}"
        )));
    }
    let mut acc = ClusterDecomposition::trivial(n);
    for cd in enumerate_partitions(n)? {
        if is_ucd(rho, &cd, tol)?.holds {
            acc = acc.intersect(&cd)?;
        }
    }
    Ok(acc)
}

/// Every uncorrelated decomposition, by enumeration (`N <= 8`).
pub fn all_ucds(rho: &DensityOperator, tol: f64) -> Result<Vec<ClusterDecomposition>> {
    let n = rho.num_subsystems();
    if n > MAX_ORACLE_SUBSYSTEMS {
        return Err(Error::OutOfRange(format!("at most {MAX_ORACLE_SUBSYSTEMS} subsystems, got {n}")));
    }
    let mut out = Vec::new();
    for cd in enumerate_partitions(n)? {
        if is_ucd(rho, &cd, tol)?.holds {
            out.push(cd);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Homogeneity {
    Homogeneous,
    Heterogeneous,
}

/// A cluster is homogeneous when it is exactly one cluster of the finest
/// uncorrelated decomposition of its own state.
pub fn classify_homogeneity(rho: &DensityOperator, cluster: &[usize], tol: f64) -> Result<Homogeneity> {
    let state = rho.reduced(cluster)?;
    let fucd = finest_ucd(&state, tol)?;
    Ok(if fucd.decomposition.is_trivial() {
        Homogeneity::Homogeneous
    } else {
        Homogeneity::Heterogeneous
    })
}

/// Whether the state of `system` is a tensor factor of the extended state.
pub fn is_correlationally_isolated(extended: &DensityOperator, system: &[usize], tol: f64) -> Result<bool> {
    Ok(isolation_check(extended, system, tol)?.holds)
}

pub fn isolation_check(extended: &DensityOperator, system: &[usize], tol: f64) -> Result<UcdCheck> {
    let n = extended.num_subsystems();
    if system.is_empty() || system.len() >= n {
        return Err(Error::InvalidInput(format!(
            "system {system:?} must be a proper nonempty subset of {n} subsystems"
        )));
    }
    let cd = ClusterDecomposition::bipartition(n, system)?;
    is_ucd(extended, &cd, tol)
}

/// Two groups of subsystems; events are listed group by group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groups {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl Groups {
    pub fn new(n: usize, first: Vec<usize>, second: Vec<usize>) -> Result<Self> {
        ClusterDecomposition::new(n, vec![first.clone(), second.clone()])?;
        Ok(Self { first, second })
    }

    /// Parses `a,b|c,d` (one-based), keeping the written order.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let groups = crate::partition::parse_groups(text)?;
        if groups.len() != 2 {
            return Err(Error::InvalidPartition(format!("expected two groups, got {}", groups.len())));
        }
        Self::new(n, groups[0].clone(), groups[1].clone())
    }

    pub fn subsystems(&self) -> Vec<usize> {
        self.first.iter().chain(&self.second).copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeevinckCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl SeevinckCheck {
    pub fn deviation(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// `tr(W0 A B C D)` against `tr(W_I A B) tr(W_II C D)` for one event per
/// subsystem, listed in `groups` order.
pub fn seevinck_condition(
    rho: &DensityOperator,
    groups: &Groups,
    events: &[Projector],
    tol: f64,
) -> Result<SeevinckCheck> {
    let order = groups.subsystems();
    if order.len() != rho.num_subsystems() {
        return Err(Error::DimensionMismatch(format!(
            "groups cover {} subsystems, state has {}",
            order.len(),
            rho.num_subsystems()
        )));
    }
    if events.len() != order.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} events for {} subsystems",
            events.len(),
            order.len()
        )));
    }
    for (p, &k) in events.iter().zip(&order) {
        if p.dim() != rho.dims()[k] {
            return Err(Error::DimensionMismatch(format!(
                "event of dimension {} on subsystem {} of dimension {}",
                p.dim(),
                k + 1,
                rho.dims()[k]
            )));
        }
    }
    let ops: Vec<CMatrix> = events.iter().map(|p| p.matrix().clone()).collect();
    let singletons: Vec<Vec<usize>> = order.iter().map(|&k| vec![k]).collect();
    let full = linalg::kron_clusters(&ops, &singletons, rho.dims())?;
    let lhs = rho.expectation(&full);

    let side = |group: &[usize], ops: &[CMatrix]| -> Result<f64> {
        let state = rho.reduced(group)?;
        // reduced states keep ascending order; place each event accordingly
        let mut sorted = group.to_vec();
        sorted.sort_unstable();
        let local: Vec<Vec<usize>> = group
            .iter()
            .map(|k| vec![sorted.iter().position(|s| s == k).unwrap()])
            .collect();
        let op = linalg::kron_clusters(ops, &local, state.dims())?;
        Ok(state.expectation(&op))
    };
    let k = groups.first.len();
    let rhs = side(&groups.first, &ops[..k])? * side(&groups.second, &ops[k..])?;
    Ok(SeevinckCheck { lhs, rhs, holds: (lhs - rhs).abs() <= tol })
}

#[derive(Debug, Clone)]
pub struct SeevinckWitness {
    pub events: Vec<Projector>,
    pub check: SeevinckCheck,
}

/// Samples random ray-projector quadruples and returns the one with the
/// largest `|lhs - rhs|`.
pub fn search_seevinck_violation<R: Rng + ?Sized>(
    rho: &DensityOperator,
    groups: &Groups,
    budget: usize,
    tol: f64,
    rng: &mut R,
) -> Result<Option<SeevinckWitness>> {
    let order = groups.subsystems();
    let mut best: Option<SeevinckWitness> = None;
    for _ in 0..budget {
        let events: Vec<Projector> = order
            .iter()
            .map(|&k| random::ray_projector(rng, rho.dims()[k]))
            .collect();
        let check = seevinck_condition(rho, groups, &events, tol)?;
        if best.as_ref().is_none_or(|b| check.deviation() > b.check.deviation()) {
            best = Some(SeevinckWitness { events, check });
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cd(s: &str) -> ClusterDecomposition {
        s.parse().unwrap()
    }

    fn tol(rho: &DensityOperator) -> f64 {
        default_tolerance(rho.dim())
    }

    #[test]
    fn eq15_ucd_checks() {
        let rho = fixtures::eq15().density();
        let chk = is_ucd(&rho, &cd("1,2|3,4"), tol(&rho)).unwrap();
        assert!(chk.holds && chk.residual <= 1e-12);
        assert!(!is_ucd(&rho, &cd("2,3|1,4"), tol(&rho)).unwrap().holds);
        let chk = is_ucd(&rho, &ClusterDecomposition::trivial(4), tol(&rho)).unwrap();
        assert!(chk.holds && chk.residual == 0.0);
    }

    #[test]
    fn finest_of_fixtures() {
        let rho = fixtures::eq15().density();
        let r = finest_ucd(&rho, tol(&rho)).unwrap();
        assert_eq!(r.decomposition, cd("1,2|3,4"));
        assert!(r.residual <= r.tolerance);
        assert!(r.splits.iter().all(|s| s.residual <= r.tolerance));
        let rho = fixtures::seevinck21().density();
        assert!(finest_ucd(&rho, tol(&rho)).unwrap().decomposition.is_trivial());
    }

    #[test]
    fn finest_of_three_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random::full_rank_density(&mut rng, &[2]);
        let b = random::full_rank_density(&mut rng, &[2]);
        let c = random::full_rank_density(&mut rng, &[2]);
        let rho = a.tensor(&b).tensor(&c);
        let r = finest_ucd(&rho, tol(&rho)).unwrap();
        assert_eq!(r.decomposition, ClusterDecomposition::maximal(3));
        assert_eq!(fucd_oracle(&rho, tol(&rho)).unwrap(), r.decomposition);
    }

    #[test]
    fn oracle_examples() {
        let s = fixtures::singlet().density();
        assert!(fucd_oracle(&s, tol(&s)).unwrap().is_trivial());
        let m = DensityOperator::maximally_mixed(vec![2]).unwrap();
        let p = fixtures::x_plus();
        let pure = DensityOperator::new(vec![2], p.matrix().clone()).unwrap();
        let rho = m.tensor(&pure);
        assert_eq!(fucd_oracle(&rho, tol(&rho)).unwrap(), cd("1|2"));
        let rho = fixtures::eq15().density();
        assert_eq!(fucd_oracle(&rho, tol(&rho)).unwrap(), cd("1,2|3,4"));
    }

    #[test]
    fn homogeneity() {
        let rho = fixtures::eq15().density();
        let t = tol(&rho);
        assert_eq!(classify_homogeneity(&rho, &[0, 1], t).unwrap(), Homogeneity::Homogeneous);
        assert_eq!(classify_homogeneity(&rho, &[0, 1, 2, 3], t).unwrap(), Homogeneity::Heterogeneous);
        let rho = fixtures::seevinck21().density();
        assert_eq!(classify_homogeneity(&rho, &[0, 1, 2, 3], t).unwrap(), Homogeneity::Homogeneous);
    }

    #[test]
    fn isolation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let env = random::full_rank_density(&mut rng, &[2, 3]);
        let ext = fixtures::singlet().density().tensor(&env);
        let t = tol(&ext);
        assert!(is_correlationally_isolated(&ext, &[0, 1], t).unwrap());
        // a subsystem of an isolated system is isolated from the environment
        let sub_ext = ext.reduced(&[0, 2, 3]).unwrap();
        assert!(is_correlationally_isolated(&sub_ext, &[0], t).unwrap());

        let mut ghz = crate::linalg::CVector::zeros(8);
        ghz[0] = crate::linalg::c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        ghz[7] = crate::linalg::c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let ghz = crate::state::StateVector::new(vec![2, 2, 2], ghz).unwrap().density();
        assert!(!is_correlationally_isolated(&ghz, &[0, 1], tol(&ghz)).unwrap());
        assert!(isolation_check(&ghz, &[0, 1, 2], 1e-9).is_err());
    }

    #[test]
    fn seevinck_identity_events_hold() {
        for rho in [fixtures::eq15().density(), fixtures::seevinck21().density()] {
            let g = Groups::parse("1,2|3,4", 4).unwrap();
            let ids = vec![Projector::identity(2); 4];
            let chk = seevinck_condition(&rho, &g, &ids, 1e-10).unwrap();
            assert!(chk.holds);
            assert!((chk.lhs - 1.0).abs() < 1e-12 && (chk.rhs - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seevinck_group_order_matters_for_event_placement() {
        // events on (3,1 | 4,2) must land on subsystems 3,1,4,2
        let rho = fixtures::eq15().density();
        let g = Groups::parse("3,1|4,2", 4).unwrap();
        let up = fixtures::spin_up();
        let down = fixtures::spin_down();
        let id = Projector::identity(2);
        // subsystem 3 up, subsystem 4 up: the 3-4 singlet forbids it
        let chk = seevinck_condition(&rho, &g, &[up.clone(), id.clone(), up.clone(), id.clone()], 1e-10).unwrap();
        assert!(chk.lhs.abs() < 1e-14);
        let chk = seevinck_condition(&rho, &g, &[up, id.clone(), down, id], 1e-10).unwrap();
        assert!((chk.lhs - 0.5).abs() < 1e-14);
        assert!(Groups::parse("1,2|3", 4).is_err());
        assert!(Groups::parse("1,2|3|4", 4).is_err());
    }
}
