//! State reconstruction from coincidence probabilities of product ray
//! projectors.
//!
//! For each `M`-dimensional factor the probe basis holds the `M` diagonal
//! rays `|m><m|` and, for every pair `m < m'`, the rays onto
//! `(|m> + |m'>)/sqrt2` and `(|m> - i|m'>)/sqrt2`. A multipartite probe is a
//! tensor product of one probe per factor. The density operator is
//! recovered by expanding it in the probes, `rho = sum_q chi_q P_q`, and
//! solving the Gram system `tr(P_q rho) = sum_q' chi_q' tr(P_q P_q')`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::correlations::{EventString, Projector};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::partition::ClusterDecomposition;
use crate::state::DensityOperator;

/// Threshold on the normalized Gram determinant.
pub const GRAM_DET_TOL: f64 = 1e-12;

/// Smallest accepted reciprocal condition number of a reconstruction's
/// Gram matrix. The determinant is useless here: for a product family it is
/// a product of per-factor determinants raised to large powers.
pub const GRAM_RCOND_TOL: f64 = 1e-12;

/// Default bound on Hermiticity and trace defects of a reconstruction.
pub const DEFAULT_NOISE_BOUND: f64 = 1e-8;

/// Number of non-trivial probabilities needed to fix a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProbeCount {
    /// `(prod M_k)^2 - 1`
    pub required: usize,
    /// `prod (M_k^2) - 1`: non-trivial strings formed by joining the certain
    /// event to each factor's `M_k^2 - 1` non-trivial probes.
    pub nontrivial_strings: usize,
}

pub fn required_probe_count(dims: &[usize]) -> Result<ProbeCount> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidInput(format!("every dimension must be at least 2, got {dims:?}")));
    }
    let total = linalg::product(dims);
    Ok(ProbeCount {
        required: total * total - 1,
        nontrivial_strings: dims.iter().map(|&d| d * d).product::<usize>() - 1,
    })
}

/// `|m><m'|` as a combination of four ray projectors.
#[derive(Debug, Clone)]
pub struct DyadDecomposition {
    pub m: usize,
    pub mp: usize,
    pub terms: Vec<(Complex64, Projector)>,
}

impl DyadDecomposition {
    pub fn sum(&self) -> CMatrix {
        let d = self.terms[0].1.dim();
        self.terms
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, (w, p)| acc + p.matrix() * *w)
    }

    /// The decomposition of the adjoint dyad `|m'><m|`.
    pub fn adjoint(&self) -> DyadDecomposition {
        DyadDecomposition {
            m: self.mp,
            mp: self.m,
            terms: self.terms.iter().map(|(w, p)| (w.conj(), p.clone())).collect(),
        }
    }
}

/// `(|m> + |m'>)/sqrt2`
pub fn superposition_plus(m: usize, mp: usize, dim: usize) -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = CVector::zeros(dim);
    v[m] = c(s, 0.0);
    v[mp] = c(s, 0.0);
    v
}

/// `(|m> - i|m'>)/sqrt2`
pub fn superposition_minus_i(m: usize, mp: usize, dim: usize) -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = CVector::zeros(dim);
    v[m] = c(s, 0.0);
    v[mp] = c(0.0, -s);
    v
}

/// Writes `|m><m'|` (`m != m'`) with coefficients `1, -i, (i-1)/2, (i-1)/2`
/// on the two superposition rays and the two diagonal rays. For `m > m'`
/// the adjoint of the `(m', m)` decomposition is returned.
pub fn dyad_as_projectors(m: usize, mp: usize, dim: usize) -> Result<DyadDecomposition> {
    if m >= dim || mp >= dim {
        return Err(Error::OutOfRange(format!("indices ({m}, {mp}) in dimension {dim}")));
    }
    if m == mp {
        return Err(Error::InvalidInput(format!("|{m}><{m}| is already a projector")));
    }
    if m > mp {
        return Ok(dyad_as_projectors(mp, m, dim)?.adjoint());
    }
    let half = c(-0.5, 0.5);
    let terms = vec![
        (c(1.0, 0.0), Projector::ray(&superposition_plus(m, mp, dim))?),
        (c(0.0, -1.0), Projector::ray(&superposition_minus_i(m, mp, dim))?),
        (half, Projector::ray(&linalg::basis_vector(dim, m))?),
        (half, Projector::ray(&linalg::basis_vector(dim, mp))?),
    ];
    Ok(DyadDecomposition { m, mp, terms })
}

/// Result of the linear-independence test on an operator family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramCheck {
    pub independent: bool,
    /// `det G` with `G_qq' = tr(P_q^dag P_q')`.
    pub determinant: f64,
    /// `det G / prod_q G_qq`, in `[0, 1]` (Hadamard); compared against
    /// [`GRAM_DET_TOL`].
    pub normalized_determinant: f64,
}

pub fn gram_matrix(ops: &[CMatrix]) -> CMatrix {
    let n = ops.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        let ai = ops[i].adjoint();
        for j in i..n {
            let v = linalg::trace_product(&ai, &ops[j]);
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    g
}

fn normalized_gram_determinant(g: &CMatrix) -> (f64, f64) {
    let det = g.clone().lu().determinant().re;
    let diag: f64 = (0..g.nrows()).map(|k| g[(k, k)].re).product();
    let normalized = if diag > 0.0 { det / diag } else { 0.0 };
    (det, normalized)
}

/// Linear independence through the Gram determinant.
pub fn gram_linear_independence_check(ops: &[CMatrix]) -> Result<GramCheck> {
    if let Some(first) = ops.first() {
        let d = first.nrows();
        if ops.iter().any(|o| o.shape() != (d, d)) {
            return Err(Error::DimensionMismatch("operators of different shapes".into()));
        }
        if ops.len() > d * d {
            return Err(Error::InvalidInput(format!(
                "{} operators in a space of dimension {}",
                ops.len(),
                d * d
            )));
        }
    }
    let g = gram_matrix(ops);
    let (determinant, normalized) = normalized_gram_determinant(&g);
    Ok(GramCheck {
        independent: normalized.abs() > GRAM_DET_TOL,
        determinant,
        normalized_determinant: normalized,
    })
}

/// A linearly independent family of `M^2` ray projectors spanning the
/// operators on one `M`-dimensional factor.
#[derive(Debug, Clone)]
pub struct ProbeBasis {
    pub dim: usize,
    pub projectors: Vec<Projector>,
    pub gram: CMatrix,
    pub gram_determinant: f64,
}

pub fn build_probe_basis(dim: usize) -> Result<ProbeBasis> {
    if dim < 2 {
        return Err(Error::InvalidInput(format!("probe basis needs dimension >= 2, got {dim}")));
    }
    let mut projectors: Vec<Projector> = (0..dim)
        .map(|m| Projector::ray(&linalg::basis_vector(dim, m)))
        .collect::<Result<_>>()?;
    for m in 0..dim {
        for mp in m + 1..dim {
            projectors.push(Projector::ray(&superposition_plus(m, mp, dim))?);
            projectors.push(Projector::ray(&superposition_minus_i(m, mp, dim))?);
        }
    }
    let ops: Vec<CMatrix> = projectors.iter().map(|p| p.matrix().clone()).collect();
    let gram = gram_matrix(&ops);
    let (det, normalized) = normalized_gram_determinant(&gram);
    if normalized.abs() <= GRAM_DET_TOL {
        return Err(Error::SingularGram(normalized));
    }
    Ok(ProbeBasis { dim, projectors, gram, gram_determinant: det })
}

/// All `prod M_k^2` product probes over the maximal decomposition, with
/// subsystem 0's probe index varying slowest.
pub fn product_probe_set(dims: &[usize]) -> Result<Vec<EventString>> {
    let bases: Vec<ProbeBasis> = dims.iter().map(|&d| build_probe_basis(d)).collect::<Result<_>>()?;
    let mut strings: Vec<Vec<Option<Projector>>> = vec![Vec::new()];
    for basis in &bases {
        let mut next = Vec::with_capacity(strings.len() * basis.projectors.len());
        for s in &strings {
            for p in &basis.projectors {
                let mut e = s.clone();
                e.push(Some(p.clone()));
                next.push(e);
            }
        }
        strings = next;
    }
    Ok(strings.into_iter().map(EventString::new).collect())
}

/// Full operators of the product probes.
pub fn probe_operators(dims: &[usize], probes: &[EventString]) -> Result<Vec<CMatrix>> {
    let cd = ClusterDecomposition::maximal(dims.len());
    probes.iter().map(|s| s.operator(dims, &cd)).collect()
}

/// Exact probe probabilities `tr(P_q rho)`.
pub fn probe_probabilities(rho: &DensityOperator, probes: &[CMatrix]) -> Vec<f64> {
    probes.iter().map(|p| rho.expectation(p)).collect()
}

/// Reconstructed operator with its diagnostics. Nothing is projected or
/// repaired; the defects are reported as measured.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub dims: Vec<usize>,
    pub operator: CMatrix,
    pub chi: Vec<f64>,
    pub gram_condition: f64,
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    /// Some defect exceeds the noise bound.
    pub flagged: bool,
}

impl Reconstruction {
    /// Validated density operator; fails if the reconstruction is not one.
    pub fn density(&self) -> Result<DensityOperator> {
        DensityOperator::new(self.dims.clone(), self.operator.clone())
    }
}

/// Solves the Gram system for the expansion coefficients and assembles the
/// operator.
pub fn reconstruct(
    probabilities: &[f64],
    probes: &[CMatrix],
    dims: &[usize],
    noise_bound: f64,
) -> Result<Reconstruction> {
    if probabilities.len() != probes.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities for {} probes",
            probabilities.len(),
            probes.len()
        )));
    }
    let d = linalg::product(dims);
    if probes.iter().any(|p| p.shape() != (d, d)) {
        return Err(Error::DimensionMismatch(format!("probes must be {d}x{d}")));
    }
    let g = gram_matrix(probes);
    // projectors are Hermitian, so G is real symmetric
    let g_real = DMatrix::from_fn(g.nrows(), g.ncols(), |i, j| g[(i, j)].re);
    let sv = g_real.singular_values();
    let rcond = sv.min() / sv.max();
    if rcond.is_nan() || rcond <= GRAM_RCOND_TOL {
        return Err(Error::SingularGram(rcond));
    }
    let gram_condition = 1.0 / rcond;
    let rhs = nalgebra::DVector::from_column_slice(probabilities);
    let chi = g_real.lu().solve(&rhs).ok_or(Error::SingularGram(rcond))?;
    let operator = probes
        .iter()
        .zip(chi.iter())
        .fold(CMatrix::zeros(d, d), |acc, (p, &w)| acc + p * c(w, 0.0));
    let hermiticity_defect = linalg::hermiticity_defect(&operator);
    let trace_defect = (linalg::trace_of(&operator) - c(1.0, 0.0)).norm();
    let min_eigenvalue = linalg::hermitian_part(&operator).symmetric_eigen().eigenvalues.min();
    let flagged = hermiticity_defect > noise_bound || trace_defect > noise_bound || min_eigenvalue < -noise_bound;
    Ok(Reconstruction {
        dims: dims.to_vec(),
        operator,
        chi: chi.iter().copied().collect(),
        gram_condition,
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        flagged,
    })
}

/// Summary of a measure-then-reconstruct cycle with exact probabilities.
#[derive(Debug, Clone, Serialize)]
pub struct RoundTrip {
    pub dims: Vec<usize>,
    pub probe_count: usize,
    pub required: usize,
    pub error: f64,
    pub gram_condition: f64,
    pub flagged: bool,
}

pub fn round_trip(rho: &DensityOperator) -> Result<RoundTrip> {
    let dims = rho.dims().to_vec();
    let probes = probe_operators(&dims, &product_probe_set(&dims)?)?;
    let probs = probe_probabilities(rho, &probes);
    let rec = reconstruct(&probs, &probes, &dims, DEFAULT_NOISE_BOUND)?;
    Ok(RoundTrip {
        required: required_probe_count(&dims)?.required,
        probe_count: probes.len(),
        error: linalg::frobenius_distance(&rec.operator, rho.matrix())?,
        gram_condition: rec.gram_condition,
        flagged: rec.flagged,
        dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::{dyad, basis_vector, real_matrix};

    #[test]
    fn probe_counts() {
        assert_eq!(required_probe_count(&[2, 2]).unwrap().required, 15);
        for m in 2..6 {
            assert_eq!(required_probe_count(&[m]).unwrap().required, m * m - 1);
        }
        assert_eq!(required_probe_count(&[2, 3]).unwrap().required, 35);
        assert!(required_probe_count(&[1, 2]).is_err());
    }

    #[test]
    fn dyad_two_dim_is_exact() {
        let d = dyad_as_projectors(0, 1, 2).unwrap();
        let coeffs: Vec<Complex64> = d.terms.iter().map(|t| t.0).collect();
        assert_eq!(coeffs, vec![c(1.0, 0.0), c(0.0, -1.0), c(-0.5, 0.5), c(-0.5, 0.5)]);
        let expected = real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!((d.sum() - &expected).camax() < 1e-15);
        let adj = dyad_as_projectors(1, 0, 2).unwrap();
        assert!((adj.sum() - expected.transpose()).camax() < 1e-15);
    }

    #[test]
    fn dyad_hand_expansion_entries() {
        // |+><+| = 1/2 [[1,1],[1,1]], |(-i)><(-i)| = 1/2 [[1, i],[-i, 1]]
        let plus = real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let mi = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(0.5, 0.0)]);
        let sum = plus - mi * c(0.0, 1.0)
            + real_matrix(2, 2, &[1.0, 0.0, 0.0, 1.0]) * c(-0.5, 0.5);
        assert!((sum - real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0])).camax() < 1e-15);
    }

    #[test]
    fn dyad_three_dim_residual() {
        let d = dyad_as_projectors(0, 2, 3).unwrap();
        let target = dyad(&basis_vector(3, 0), &basis_vector(3, 2));
        assert!((d.sum() - target).camax() <= 1e-12);
        assert!(dyad_as_projectors(1, 1, 3).is_err());
        assert!(dyad_as_projectors(0, 3, 3).is_err());
    }

    #[test]
    fn probe_basis_shapes() {
        let b = build_probe_basis(2).unwrap();
        assert_eq!(b.projectors.len(), 4);
        // Gram of {|0>,|1>,|+>,|-i>}: hand-computed determinant 1/4
        assert!((b.gram_determinant - 0.25).abs() < 1e-14);
        let b3 = build_probe_basis(3).unwrap();
        assert_eq!(b3.projectors.len(), 9);
        assert!(b3.projectors.iter().all(|p| p.rank() == 1));
        assert!(build_probe_basis(1).is_err());
    }

    #[test]
    fn probe_set_sizes() {
        assert_eq!(product_probe_set(&[2, 2]).unwrap().len(), 16);
        assert_eq!(product_probe_set(&[2]).unwrap().len(), 4);
        assert_eq!(product_probe_set(&[2, 2, 2]).unwrap().len(), 64);
    }

    #[test]
    fn gram_examples() {
        let id = linalg::identity(2);
        let x = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let y = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let z = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let paulis: Vec<CMatrix> = [id, x, y, z].iter().map(|m| m * c(0.5, 0.0)).collect();
        let chk = gram_linear_independence_check(&paulis).unwrap();
        assert!(chk.independent);
        // orthogonal family, G = I/2
        assert!((chk.determinant - 1.0 / 16.0).abs() < 1e-15);
        let p = fixtures::spin_up().matrix().clone();
        let chk = gram_linear_independence_check(&[p.clone(), p]).unwrap();
        assert!(!chk.independent);
        assert!(chk.determinant.abs() < 1e-15);
    }

    #[test]
    fn singlet_and_mixed_round_trip() {
        let rt = round_trip(&fixtures::singlet().density()).unwrap();
        assert!(rt.error < 1e-8);
        assert_eq!(rt.probe_count - 1, rt.required);
        let mixed = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        let rt = round_trip(&mixed).unwrap();
        assert!(rt.error < 1e-8);
        assert!(!rt.flagged);
    }

    #[test]
    fn inconsistent_probabilities_are_flagged_not_repaired() {
        let dims = [2];
        let probes = probe_operators(&dims, &product_probe_set(&dims).unwrap()).unwrap();
        // |+> certain, |-i> certain, |0> certain: no state does this
        let rec = reconstruct(&[1.0, 1.0, 1.0, 1.0], &probes, &dims, 1e-8).unwrap();
        assert!(rec.flagged);
        assert!(rec.density().is_err());
        assert!(reconstruct(&[1.0], &probes, &dims, 1e-8).is_err());
    }

    #[test]
    fn singular_probe_family_is_an_error() {
        let p = fixtures::spin_up().matrix().clone();
        let q = fixtures::spin_down().matrix().clone();
        let probes = vec![p.clone(), q.clone(), p, q];
        assert!(matches!(
            reconstruct(&[0.5; 4], &probes, &[2], 1e-8),
            Err(Error::SingularGram(_))
        ));
    }
}
