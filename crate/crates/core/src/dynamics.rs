//! Lüders measurement on a cluster and its effect on the distant cluster.

use serde::Serialize;

use crate::correlations::Projector;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::linalg::{self, CMatrix, HERMITIAN_TOL};
use crate::state::DensityOperator;

/// Outcomes at or below this probability are dropped from decompositions.
pub const ZERO_PROBABILITY: f64 = 1e-12;

/// Largest tolerated `||U^dag U - I||_F`.
pub const UNITARITY_TOL: f64 = 1e-9;

/// Pairwise orthogonal projectors summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveDecomposition {
    projectors: Vec<Projector>,
}

impl ProjectiveDecomposition {
    pub fn new(projectors: Vec<Projector>) -> Result<Self> {
        let d = projectors
            .first()
            .map(Projector::dim)
            .ok_or_else(|| Error::NotProjectiveDecomposition("no projectors".into()))?;
        if projectors.iter().any(|p| p.dim() != d) {
            return Err(Error::NotProjectiveDecomposition("projectors of different dimensions".into()));
        }
        let sum = projectors
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, p| acc + p.matrix());
        let completeness = (sum - linalg::identity(d)).camax();
        if completeness > HERMITIAN_TOL {
            return Err(Error::NotProjectiveDecomposition(format!(
                "projectors do not sum to the identity ({completeness:.3e})"
            )));
        }
        for (i, p) in projectors.iter().enumerate() {
            for q in &projectors[i + 1..] {
                let overlap = (p.matrix() * q.matrix()).camax();
                if overlap > HERMITIAN_TOL {
                    return Err(Error::NotProjectiveDecomposition(format!(
                        "projectors are not orthogonal ({overlap:.3e})"
                    )));
                }
            }
        }
        Ok(Self { projectors })
    }

    /// The trivial measurement `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self { projectors: vec![Projector::identity(dim)] }
    }

    /// Product basis of the given orthonormal single-factor bases.
    fn product_of(bases: Vec<Vec<Projector>>) -> Result<Self> {
        let mut acc: Vec<Projector> = vec![Projector::identity(1)];
        for basis in bases {
            acc = acc
                .iter()
                .flat_map(|a| basis.iter().map(move |b| a.tensor(b)))
                .collect();
        }
        Self::new(acc)
    }

    /// Computational (spin-z) basis rays of each factor.
    pub fn computational(dims: &[usize]) -> Result<Self> {
        Self::product_of(
            dims.iter()
                .map(|&d| (0..d).map(|m| Projector::ray(&linalg::basis_vector(d, m))).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?,
        )
    }

    /// Spin-x basis on each qubit factor.
    pub fn x_basis(n_qubits: usize) -> Result<Self> {
        Self::product_of(vec![vec![fixtures::x_plus(), fixtures::x_minus()]; n_qubits])
    }

    /// Bell basis on two qubits, ordered `psi+, psi-, phi+, phi-`.
    pub fn bell() -> Result<Self> {
        Self::new(
            fixtures::bell_basis()
                .iter()
                .map(|b| Projector::ray(b.amplitudes()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }
}

fn check_measured(rho: &DensityOperator, measured: &[usize], dim: usize) -> Result<()> {
    if measured.is_empty() {
        return Err(Error::InvalidInput("measured cluster is empty".into()));
    }
    if measured.iter().any(|&k| k >= rho.num_subsystems()) {
        return Err(Error::OutOfRange(format!("measured cluster {measured:?}")));
    }
    let dc = rho.cluster_dim(measured);
    if dc != dim {
        return Err(Error::DimensionMismatch(format!(
            "measurement of dimension {dim} on a cluster of dimension {dc}"
        )));
    }
    Ok(())
}

fn lift(rho: &DensityOperator, measured: &[usize], p: &Projector) -> Result<CMatrix> {
    check_measured(rho, measured, p.dim())?;
    linalg::embed_operator(p.matrix(), rho.dims(), measured)
}

fn sandwich(p: &CMatrix, rho: &CMatrix) -> CMatrix {
    p * rho * p
}

/// `rho -> sum_q P_q rho P_q`
pub fn luders_nonselective(
    rho: &DensityOperator,
    measured: &[usize],
    pd: &ProjectiveDecomposition,
) -> Result<DensityOperator> {
    let d = rho.dim();
    let mut out = CMatrix::zeros(d, d);
    for p in pd.projectors() {
        out += sandwich(&lift(rho, measured, p)?, rho.matrix());
    }
    Ok(DensityOperator::from_parts(rho.dims().to_vec(), linalg::hermitian_part(&out)))
}

/// `rho -> P rho P / tr(rho P)`
pub fn luders_selective(rho: &DensityOperator, measured: &[usize], p: &Projector) -> Result<DensityOperator> {
    let full = lift(rho, measured, p)?;
    let prob = rho.expectation(&full);
    if prob <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(prob));
    }
    let out = sandwich(&full, rho.matrix()) / linalg::c(prob, 0.0);
    Ok(DensityOperator::from_parts(rho.dims().to_vec(), linalg::hermitian_part(&out)))
}

/// One term of a distant state decomposition.
#[derive(Debug, Clone)]
pub struct DistantOutcome {
    /// Index of the projector in the measurement.
    pub index: usize,
    pub weight: f64,
    pub state: DensityOperator,
}

/// `rho_distant = sum_q w_q rho_distant{q}`, zero-weight outcomes omitted.
#[derive(Debug, Clone)]
pub struct DistantDecomposition {
    /// Subsystems of the unmeasured cluster, ascending.
    pub distant: Vec<usize>,
    pub outcomes: Vec<DistantOutcome>,
}

impl DistantDecomposition {
    pub fn mixture(&self) -> CMatrix {
        let d = self.outcomes[0].state.dim();
        self.outcomes
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, o| acc + o.state.matrix() * linalg::c(o.weight, 0.0))
    }

    pub fn total_weight(&self) -> f64 {
        self.outcomes.iter().map(|o| o.weight).sum()
    }
}

/// `w_q = tr(rho P_q)` and `rho_distant{q} = tr_measured(rho P_q) / w_q`.
pub fn distant_decomposition(
    rho: &DensityOperator,
    measured: &[usize],
    pd: &ProjectiveDecomposition,
) -> Result<DistantDecomposition> {
    let distant = linalg::complement(measured, rho.num_subsystems());
    if distant.is_empty() {
        return Err(Error::InvalidInput("nothing left unmeasured".into()));
    }
    let mut outcomes = Vec::new();
    for (index, p) in pd.projectors().iter().enumerate() {
        let full = lift(rho, measured, p)?;
        let weight = rho.expectation(&full);
        if weight <= ZERO_PROBABILITY {
            continue;
        }
        let prod = rho.matrix() * &full;
        let reduced = linalg::partial_trace(&prod, rho.dims(), &distant)? / linalg::c(weight, 0.0);
        let dims = distant.iter().map(|&k| rho.dims()[k]).collect();
        outcomes.push(DistantOutcome {
            index,
            weight,
            state: DensityOperator::from_parts(dims, linalg::hermitian_part(&reduced)),
        });
    }
    Ok(DistantDecomposition { distant, outcomes })
}

/// Both sides of `tr(rho P1 P2) = tr(rho P1) tr(rho_distant{P1} P2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
}

pub fn conditional_probability_identity(
    rho: &DensityOperator,
    measured: &[usize],
    p1: &Projector,
    distant: &[usize],
    p2: &Projector,
) -> Result<ConditionalIdentity> {
    let mut both: Vec<usize> = measured.iter().chain(distant).copied().collect();
    both.sort_unstable();
    let len = both.len();
    both.dedup();
    if both.len() != len || both.len() != rho.num_subsystems() {
        return Err(Error::InvalidInput(format!(
            "measured {measured:?} and distant {distant:?} must partition the subsystems"
        )));
    }
    let full1 = lift(rho, measured, p1)?;
    if p2.dim() != rho.cluster_dim(distant) {
        return Err(Error::DimensionMismatch("distant event dimension".into()));
    }
    let full2 = linalg::embed_operator(p2.matrix(), rho.dims(), distant)?;
    let w = rho.expectation(&full1);
    if w <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(w));
    }
    let lhs = rho.expectation(&(&full1 * &full2));
    let conditional = linalg::partial_trace(&(rho.matrix() * &full1), rho.dims(), distant)? / linalg::c(w, 0.0);
    let rhs = w * linalg::trace_product(&conditional, p2.matrix()).re;
    Ok(ConditionalIdentity { lhs, rhs, deviation: (lhs - rhs).abs() })
}

/// Evolves `rho` by `(U_int ⊗ U_dist)` for `steps` steps and returns the
/// largest Frobenius distance between the distant reduced state and
/// `U_dist^t rho_dist U_dist^t^dag`.
pub fn local_unitary_no_signaling(
    rho: &DensityOperator,
    interacting: &[usize],
    distant: &[usize],
    u_interacting: &CMatrix,
    u_distant: &CMatrix,
    steps: usize,
) -> Result<f64> {
    for u in [u_interacting, u_distant] {
        let defect = linalg::unitarity_defect(u);
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary(defect));
        }
    }
    let clusters = vec![sorted(interacting), sorted(distant)];
    crate::partition::ClusterDecomposition::new(rho.num_subsystems(), clusters.clone())?;
    let u = linalg::kron_clusters(&[u_interacting.clone(), u_distant.clone()], &clusters, rho.dims())?;
    let mut state = rho.matrix().clone();
    let mut distant_state = rho.reduced(&clusters[1])?.into_matrix();
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        state = &u * &state * u.adjoint();
        distant_state = u_distant * &distant_state * u_distant.adjoint();
        let reduced = linalg::partial_trace(&state, rho.dims(), &clusters[1])?;
        worst = worst.max(linalg::frobenius_distance(&reduced, &distant_state)?);
    }
    Ok(worst)
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{singlet, spin_down, spin_up};
    use crate::linalg::{basis_vector, frobenius_distance, outer};
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn decomposition_validation() {
        assert!(ProjectiveDecomposition::new(vec![spin_up()]).is_err());
        assert!(ProjectiveDecomposition::new(vec![spin_up(), spin_up()]).is_err());
        assert!(ProjectiveDecomposition::new(vec![spin_up(), spin_down()]).is_ok());
        assert_eq!(ProjectiveDecomposition::computational(&[2, 3]).unwrap().len(), 6);
        assert_eq!(ProjectiveDecomposition::bell().unwrap().len(), 4);
        assert_eq!(ProjectiveDecomposition::x_basis(2).unwrap().len(), 4);
    }

    #[test]
    fn nonselective_on_singlet() {
        let rho = singlet().density();
        let pd = ProjectiveDecomposition::computational(&[2]).unwrap();
        let out = luders_nonselective(&rho, &[0], &pd).unwrap();
        // (|up down><up down| + |down up><down up|)/2
        let expected = (outer(&basis_vector(4, 0b01)) + outer(&basis_vector(4, 0b10))) * linalg::c(0.5, 0.0);
        assert!(frobenius_distance(out.matrix(), &expected).unwrap() < 1e-15);
        let same = luders_nonselective(&rho, &[0], &ProjectiveDecomposition::trivial(2)).unwrap();
        assert!(frobenius_distance(same.matrix(), rho.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn nonselective_on_product_acts_factorwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random::full_rank_density(&mut rng, &[2]);
        let b = random::full_rank_density(&mut rng, &[3]);
        let pd = ProjectiveDecomposition::x_basis(1).unwrap();
        let out = luders_nonselective(&a.tensor(&b), &[0], &pd).unwrap();
        let a_measured = luders_nonselective(&a, &[0], &pd).unwrap();
        let expected = a_measured.tensor(&b);
        assert!(frobenius_distance(out.matrix(), expected.matrix()).unwrap() < 1e-14);
    }

    #[test]
    fn singlet_distant_states() {
        let rho = singlet().density();
        let pd = ProjectiveDecomposition::computational(&[2]).unwrap();
        let dd = distant_decomposition(&rho, &[0], &pd).unwrap();
        assert_eq!(dd.outcomes.len(), 2);
        assert!((dd.outcomes[0].weight - 0.5).abs() < 1e-15);
        assert!((dd.outcomes[1].weight - 0.5).abs() < 1e-15);
        assert!(frobenius_distance(dd.outcomes[0].state.matrix(), spin_down().matrix()).unwrap() < 1e-15);
        assert!(frobenius_distance(dd.outcomes[1].state.matrix(), spin_up().matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn uncorrelated_distant_decomposition_is_trivial() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random::full_rank_density(&mut rng, &[2]);
        let b = random::full_rank_density(&mut rng, &[2]);
        let pd = ProjectiveDecomposition::x_basis(1).unwrap();
        let dd = distant_decomposition(&a.tensor(&b), &[0], &pd).unwrap();
        for o in &dd.outcomes {
            assert!(frobenius_distance(o.state.matrix(), b.matrix()).unwrap() < 1e-14);
        }
    }

    #[test]
    fn zero_probability_outcomes_are_dropped() {
        let rho = fixtures::fixture("up_up").unwrap().density();
        let pd = ProjectiveDecomposition::computational(&[2]).unwrap();
        let dd = distant_decomposition(&rho, &[0], &pd).unwrap();
        assert_eq!(dd.outcomes.len(), 1);
        assert_eq!(dd.outcomes[0].index, 0);
    }

    #[test]
    fn selective_examples() {
        let rho = singlet().density();
        let out = luders_selective(&rho, &[0], &spin_up()).unwrap();
        assert!(frobenius_distance(out.matrix(), &outer(&basis_vector(4, 0b01))).unwrap() < 1e-15);
        let same = luders_selective(&rho, &[0], &Projector::identity(2)).unwrap();
        assert!(frobenius_distance(same.matrix(), rho.matrix()).unwrap() < 1e-15);
        let up_up = fixtures::fixture("up_up").unwrap().density();
        assert!(matches!(
            luders_selective(&up_up, &[0], &spin_down()),
            Err(Error::ZeroProbability(_))
        ));
    }

    #[test]
    fn selective_on_product_leaves_distant_side() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random::full_rank_density(&mut rng, &[2]);
        let b = random::full_rank_density(&mut rng, &[2]);
        let out = luders_selective(&a.tensor(&b), &[0], &fixtures::x_plus()).unwrap();
        let distant = out.reduced(&[1]).unwrap();
        assert!(frobenius_distance(distant.matrix(), b.matrix()).unwrap() < 1e-14);
    }

    #[test]
    fn conditional_identity_examples() {
        let rho = singlet().density();
        let id = conditional_probability_identity(&rho, &[0], &spin_up(), &[1], &spin_down()).unwrap();
        assert!((id.lhs - 0.5).abs() < 1e-15 && (id.rhs - 0.5).abs() < 1e-15);
        let id = conditional_probability_identity(&rho, &[0], &spin_up(), &[1], &Projector::identity(2)).unwrap();
        assert!((id.lhs - 0.5).abs() < 1e-15 && id.deviation < 1e-15);
        let up_up = fixtures::fixture("up_up").unwrap().density();
        assert!(conditional_probability_identity(&up_up, &[0], &spin_down(), &[1], &spin_up()).is_err());
    }

    #[test]
    fn no_signaling_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rho = random::full_rank_density(&mut rng, &[2, 2, 2]);
        let u01 = random::unitary(&mut rng, 4);
        let dev = local_unitary_no_signaling(&rho, &[0, 1], &[2], &u01, &linalg::identity(2), 3).unwrap();
        assert!(dev <= 1e-12);
        let u2 = random::unitary(&mut rng, 2);
        assert!(local_unitary_no_signaling(&rho, &[0, 1], &[2], &u01, &u2, 5).unwrap() <= 1e-10);
        let bad = linalg::identity(2) * linalg::c(2.0, 0.0);
        assert!(matches!(
            local_unitary_no_signaling(&rho, &[0, 1], &[2], &u01, &bad, 1),
            Err(Error::NotUnitary(_))
        ));
        assert!(local_unitary_no_signaling(&rho, &[0], &[2], &linalg::identity(2), &u2, 1).is_err());
    }
}
