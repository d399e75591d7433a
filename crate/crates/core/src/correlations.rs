//! Correlations seen by event strings and entropy-based correlation
//! information.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, HERMITIAN_TOL};
use crate::partition::ClusterDecomposition;
use crate::random;
use crate::state::DensityOperator;

/// Eigenvalues below this are treated as exactly zero in entropies.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// Marginal probabilities at or below this count as zero-probability events.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// A Hermitian idempotent operator (an event).
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: CMatrix,
    rank: usize,
}

impl Projector {
    /// Checks `P = P^dag` and `P^2 = P` entrywise within `1e-10`.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotProjector(format!("shape {:?}", matrix.shape())));
        }
        if !linalg::all_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotProjector(format!("not Hermitian ({defect:.3e})")));
        }
        let idem = (&matrix * &matrix - &matrix).camax();
        if idem > HERMITIAN_TOL {
            return Err(Error::NotProjector(format!("P^2 != P ({idem:.3e})")));
        }
        let rank = linalg::trace_of(&matrix).re.round() as usize;
        Ok(Self { matrix: linalg::hermitian_part(&matrix), rank })
    }

    /// `|v><v| / <v|v>`
    pub fn ray(v: &CVector) -> Result<Self> {
        let n = v.norm();
        if n < 1e-300 {
            return Err(Error::NotProjector("zero vector".into()));
        }
        let u = v.unscale(n);
        Ok(Self { matrix: linalg::outer(&u), rank: 1 })
    }

    /// Projector onto the span of orthonormal vectors.
    pub fn span(vectors: &[CVector]) -> Result<Self> {
        let d = vectors.first().map(|v| v.len()).unwrap_or(0);
        let m = vectors
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, v| acc + linalg::outer(v));
        Self::from_matrix(m)
    }

    /// The certain event.
    pub fn identity(dim: usize) -> Self {
        Self { matrix: linalg::identity(dim), rank: dim }
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: CMatrix::zeros(dim, dim), rank: 0 }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tensor(&self, other: &Projector) -> Projector {
        Projector { matrix: linalg::kron(&self.matrix, &other.matrix), rank: self.rank * other.rank }
    }

    /// `I - P`
    pub fn complement(&self) -> Projector {
        Projector {
            matrix: linalg::identity(self.dim()) - &self.matrix,
            rank: self.dim() - self.rank,
        }
    }

    /// Orthonormal vectors spanning the range, completed by vectors spanning
    /// the kernel: `(range, kernel)`.
    pub fn split_basis(&self) -> (Vec<CVector>, Vec<CVector>) {
        let eig = linalg::hermitian_eig(&self.matrix).expect("projector is Hermitian");
        let mut range = Vec::new();
        let mut kernel = Vec::new();
        for (k, &lam) in eig.values.iter().enumerate() {
            if lam > 0.5 {
                range.push(eig.vector(k));
            } else {
                kernel.push(eig.vector(k));
            }
        }
        (range, kernel)
    }
}

/// One event per cluster; `None` stands for the certain event.
#[derive(Debug, Clone, PartialEq)]
pub struct EventString {
    entries: Vec<Option<Projector>>,
}

impl EventString {
    pub fn new(entries: Vec<Option<Projector>>) -> Self {
        Self { entries }
    }

    pub fn identities(len: usize) -> Self {
        Self { entries: vec![None; len] }
    }

    pub fn entries(&self) -> &[Option<Projector>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks alignment with `cd` over the given subsystem dimensions.
    pub fn check(&self, dims: &[usize], cd: &ClusterDecomposition) -> Result<()> {
        if cd.n() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "decomposition of {} subsystems for a state of {}",
                cd.n(),
                dims.len()
            )));
        }
        if self.entries.len() != cd.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} events for {} clusters",
                self.entries.len(),
                cd.len()
            )));
        }
        for (entry, cl) in self.entries.iter().zip(cd.clusters()) {
            let dc: usize = cl.iter().map(|&k| dims[k]).product();
            if let Some(p) = entry {
                if p.dim() != dc {
                    return Err(Error::DimensionMismatch(format!(
                        "event of dimension {} on cluster of dimension {}",
                        p.dim(),
                        dc
                    )));
                }
            }
        }
        Ok(())
    }

    /// The coincidence event `P_1 ⊗ ... ⊗ P_n` in the global subsystem order.
    pub fn operator(&self, dims: &[usize], cd: &ClusterDecomposition) -> Result<CMatrix> {
        self.check(dims, cd)?;
        let ops: Vec<CMatrix> = self
            .entries
            .iter()
            .zip(cd.clusters())
            .map(|(e, cl)| match e {
                Some(p) => p.matrix().clone(),
                None => linalg::identity(cl.iter().map(|&k| dims[k]).product()),
            })
            .collect();
        linalg::kron_clusters(&ops, cd.clusters(), dims)
    }
}

/// Correlation seen by one event string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    /// `tr(rho P_1...P_n)`
    pub coincidence: f64,
    /// `prod_k tr(rho_k P_k)`
    pub marginal_product: f64,
    /// `|coincidence - marginal_product|`
    pub seen: f64,
    /// `coincidence - marginal_product`; positive means the coincidence is
    /// more likely than independence predicts.
    pub signed: f64,
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// `tr(rho Q)` for the coincidence event of `s`.
pub fn coincidence_probability(
    rho: &DensityOperator,
    cd: &ClusterDecomposition,
    s: &EventString,
) -> Result<f64> {
    let q = s.operator(rho.dims(), cd)?;
    Ok(clamp_probability(rho.expectation(&q)))
}

/// Evaluates many strings against one `(rho, cd)`, caching the cluster states.
pub struct StringEvaluator<'a> {
    rho: &'a DensityOperator,
    cd: &'a ClusterDecomposition,
    marginals: Vec<DensityOperator>,
}

impl<'a> StringEvaluator<'a> {
    pub fn new(rho: &'a DensityOperator, cd: &'a ClusterDecomposition) -> Result<Self> {
        if cd.n() != rho.num_subsystems() {
            return Err(Error::DimensionMismatch(format!(
                "decomposition of {} subsystems for a state of {}",
                cd.n(),
                rho.num_subsystems()
            )));
        }
        let marginals = cd
            .clusters()
            .iter()
            .map(|cl| rho.reduced(cl))
            .collect::<Result<_>>()?;
        Ok(Self { rho, cd, marginals })
    }

    pub fn marginals(&self) -> &[DensityOperator] {
        &self.marginals
    }

    /// Probability of each cluster event in its cluster state.
    pub fn marginal_probabilities(&self, s: &EventString) -> Result<Vec<f64>> {
        s.check(self.rho.dims(), self.cd)?;
        Ok(s.entries
            .iter()
            .zip(&self.marginals)
            .map(|(e, m)| match e {
                Some(p) => clamp_probability(m.expectation(p.matrix())),
                None => 1.0,
            })
            .collect())
    }

    pub fn evaluate(&self, s: &EventString) -> Result<CorrelationReport> {
        let marginal_product: f64 = self.marginal_probabilities(s)?.iter().product();
        let coincidence = clamp_probability(self.rho.expectation(&s.operator(self.rho.dims(), self.cd)?));
        let signed = coincidence - marginal_product;
        Ok(CorrelationReport { coincidence, marginal_product, seen: signed.abs(), signed })
    }
}

/// `|tr(rho prod P_k) - prod tr(rho_k P_k)|` together with its parts.
pub fn seen_correlation(
    rho: &DensityOperator,
    cd: &ClusterDecomposition,
    s: &EventString,
) -> Result<CorrelationReport> {
    StringEvaluator::new(rho, cd)?.evaluate(s)
}

/// Outcome of the zero-probability check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlindnessCheck {
    /// Some cluster event has probability at most `1e-12`.
    pub has_zero_probability_event: bool,
    /// The string then sees at most `1e-10`.
    pub blind: bool,
    pub report: CorrelationReport,
}

/// A string containing a zero-probability cluster event sees no correlation.
pub fn zero_probability_blindness(
    rho: &DensityOperator,
    cd: &ClusterDecomposition,
    s: &EventString,
) -> Result<BlindnessCheck> {
    let eval = StringEvaluator::new(rho, cd)?;
    let probs = eval.marginal_probabilities(s)?;
    let report = eval.evaluate(s)?;
    let has_zero = probs.iter().any(|&p| p <= ZERO_PROBABILITY);
    Ok(BlindnessCheck {
        has_zero_probability_event: has_zero,
        blind: has_zero && report.seen <= HERMITIAN_TOL,
        report,
    })
}

/// True when `s` contains a zero-probability event and, as it must, sees
/// nothing.
pub fn check_zero_probability_blindness(
    rho: &DensityOperator,
    cd: &ClusterDecomposition,
    s: &EventString,
) -> Result<bool> {
    Ok(zero_probability_blindness(rho, cd, s)?.blind)
}

/// `-sum lambda log2 lambda` in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let s: f64 = values
        .iter()
        .filter(|&&x| x > ENTROPY_CUTOFF)
        .map(|&x| -x * x.log2())
        .sum();
    s.max(0.0)
}

/// Correlation information over a cluster decomposition, in bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationInformation {
    /// Correlation internal to each cluster.
    pub within: Vec<f64>,
    /// Correlation among the clusters.
    pub among: f64,
    /// Total correlation information of the whole system.
    pub total: f64,
}

impl CorrelationInformation {
    /// `total - sum(within) - among`; zero up to rounding.
    pub fn additivity_defect(&self) -> f64 {
        self.total - self.within.iter().sum::<f64>() - self.among
    }
}

pub fn correlation_information(
    rho: &DensityOperator,
    cd: &ClusterDecomposition,
) -> Result<CorrelationInformation> {
    if cd.n() != rho.num_subsystems() {
        return Err(Error::DimensionMismatch(format!(
            "decomposition of {} subsystems for a state of {}",
            cd.n(),
            rho.num_subsystems()
        )));
    }
    let single: Vec<f64> = (0..rho.num_subsystems())
        .map(|k| rho.reduced(&[k]).map(|r| von_neumann_entropy(&r)))
        .collect::<Result<_>>()?;
    let whole = von_neumann_entropy(rho);
    let mut within = Vec::with_capacity(cd.len());
    let mut cluster_sum = 0.0;
    for cl in cd.clusters() {
        let s_cluster = von_neumann_entropy(&rho.reduced(cl)?);
        let s_parts: f64 = cl.iter().map(|&k| single[k]).sum();
        within.push(s_parts - s_cluster);
        cluster_sum += s_cluster;
    }
    Ok(CorrelationInformation {
        within,
        among: cluster_sum - whole,
        total: single.iter().sum::<f64>() - whole,
    })
}

/// A random string of product ray projectors: every subsystem of a cluster
/// gets an independent uniformly random ray.
pub fn random_product_string<R: Rng + ?Sized>(
    rng: &mut R,
    dims: &[usize],
    cd: &ClusterDecomposition,
) -> EventString {
    EventString::new(
        cd.clusters()
            .iter()
            .map(|cl| {
                let p = cl
                    .iter()
                    .map(|&k| random::ray_projector(rng, dims[k]))
                    .reduce(|a, b| a.tensor(&b))
                    .expect("clusters are nonempty");
                Some(p)
            })
            .collect(),
    )
}

/// Randomized search for a product ray-projector string seeing more than
/// `threshold`. Returns the first hit.
pub fn find_correlation_witness<R: Rng + ?Sized>(
    rho: &DensityOperator,
    cd: &ClusterDecomposition,
    threshold: f64,
    budget: usize,
    rng: &mut R,
) -> Result<Option<(EventString, CorrelationReport)>> {
    let eval = StringEvaluator::new(rho, cd)?;
    for _ in 0..budget {
        let s = random_product_string(rng, rho.dims(), cd);
        let report = eval.evaluate(&s)?;
        if report.seen > threshold {
            return Ok(Some((s, report)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, spin_down, spin_up, x_minus, x_plus};
    use crate::linalg::{c, identity};

    fn two(s: &str) -> ClusterDecomposition {
        s.parse().unwrap()
    }

    #[test]
    fn projector_validation() {
        assert!(Projector::from_matrix(identity(2) * c(2.0, 0.0)).is_err());
        assert!(Projector::from_matrix(linalg::real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0])).is_err());
        assert_eq!(Projector::from_matrix(identity(3)).unwrap().rank(), 3);
        assert_eq!(spin_up().complement(), spin_down());
    }

    #[test]
    fn singlet_coincidences() {
        // z-up is written |+> in the singlet's notation
        let rho = fixtures::singlet().density();
        let cd = two("1|2");
        let same = EventString::new(vec![Some(spin_up()), Some(spin_up())]);
        assert!(coincidence_probability(&rho, &cd, &same).unwrap().abs() < 1e-15);
        let opposite = EventString::new(vec![Some(spin_up()), Some(spin_down())]);
        assert!((coincidence_probability(&rho, &cd, &opposite).unwrap() - 0.5).abs() < 1e-15);
        let certain = EventString::identities(2);
        assert!((coincidence_probability(&rho, &cd, &certain).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singlet_seen_correlation_sign() {
        let rho = fixtures::singlet().density();
        let cd = two("1|2");
        let same = EventString::new(vec![Some(spin_up()), Some(spin_up())]);
        let r = seen_correlation(&rho, &cd, &same).unwrap();
        assert!((r.seen - 0.25).abs() < 1e-15);
        assert!((r.signed + 0.25).abs() < 1e-15);
        let opposite = EventString::new(vec![Some(spin_up()), Some(spin_down())]);
        let r = seen_correlation(&rho, &cd, &opposite).unwrap();
        assert!((r.seen - 0.25).abs() < 1e-15);
        assert!((r.signed - 0.25).abs() < 1e-15);
    }

    #[test]
    fn product_state_sees_nothing() {
        let a = fixtures::x_plus();
        let rho_a = DensityOperator::new(vec![2], a.matrix().clone()).unwrap();
        let rho_b = DensityOperator::new(
            vec![2],
            linalg::real_matrix(2, 2, &[0.8, 0.1, 0.1, 0.2]),
        )
        .unwrap();
        let rho = rho_a.tensor(&rho_b);
        let cd = two("1|2");
        for (p, q) in [(spin_up(), x_minus()), (x_plus(), spin_down()), (x_minus(), x_plus())] {
            let r = seen_correlation(&rho, &cd, &EventString::new(vec![Some(p), Some(q)])).unwrap();
            assert!(r.seen < 1e-15);
        }
    }

    #[test]
    fn misaligned_string_is_rejected() {
        let rho = fixtures::singlet().density();
        let s = EventString::new(vec![Some(spin_up())]);
        assert!(seen_correlation(&rho, &two("1|2"), &s).is_err());
        let s = EventString::new(vec![Some(spin_up()), Some(Projector::identity(3))]);
        assert!(seen_correlation(&rho, &two("1|2"), &s).is_err());
    }

    #[test]
    fn zero_probability_blindness_cases() {
        let rho = fixtures::fixture("up_up").unwrap().density();
        let cd = two("1|2");
        let s = EventString::new(vec![Some(spin_down()), Some(x_plus())]);
        let chk = zero_probability_blindness(&rho, &cd, &s).unwrap();
        assert!(chk.blind);
        assert_eq!(chk.report.seen, 0.0);

        let s = EventString::new(vec![Some(spin_down()), None]);
        let chk = zero_probability_blindness(&rho, &cd, &s).unwrap();
        assert!(chk.blind);
        assert_eq!(chk.report.coincidence, 0.0);
        assert_eq!(chk.report.marginal_product, 0.0);

        let singlet = fixtures::singlet().density();
        let s = EventString::new(vec![Some(spin_up()), Some(spin_up())]);
        assert!(!check_zero_probability_blindness(&singlet, &cd, &s).unwrap());
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&fixtures::singlet().density()).abs() < 1e-12);
        let q = DensityOperator::maximally_mixed(vec![2]).unwrap();
        assert!((von_neumann_entropy(&q) - 1.0).abs() < 1e-14);
        let q = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        assert!((von_neumann_entropy(&q) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn eq15_information_split() {
        let rho = fixtures::eq15().density();
        let info = correlation_information(&rho, &two("1,2|3,4")).unwrap();
        assert!((info.within[0] - 2.0).abs() < 1e-9);
        assert!((info.within[1] - 2.0).abs() < 1e-9);
        assert!(info.among.abs() < 1e-9);
        assert!((info.total - 4.0).abs() < 1e-9);

        let info = correlation_information(&rho, &two("2,3|1,4")).unwrap();
        // canonical order puts {1,4} first
        assert!(info.within.iter().all(|x| x.abs() < 1e-9));
        assert!((info.among - 4.0).abs() < 1e-9);
        assert!((info.total - 4.0).abs() < 1e-9);
    }

    #[test]
    fn product_state_has_no_information() {
        let a = DensityOperator::new(vec![2], linalg::real_matrix(2, 2, &[0.6, 0.2, 0.2, 0.4])).unwrap();
        let rho = a.tensor(&a).tensor(&a);
        for cd in crate::partition::enumerate_partitions(3).unwrap() {
            let info = correlation_information(&rho, &cd).unwrap();
            assert!(info.total.abs() < 1e-9);
            assert!(info.among.abs() < 1e-9);
            assert!(info.within.iter().all(|x| x.abs() < 1e-9));
        }
    }
}
