//! Schmidt decomposition of bipartite pure states and the antiunitary
//! correlation operator.
//!
//! A bipartition is given by its left part; the right part is the
//! complement. Both parts keep the global subsystem order internally.

use num_complex::Complex64;

use crate::correlations::Projector;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, HERMITIAN_TOL};
use crate::state::StateVector;

/// Schmidt coefficients at or below this are dropped.
pub const COEFFICIENT_CUTOFF: f64 = 1e-12;

/// The state vector rearranged as a `dim_left x dim_right` coefficient
/// matrix `C` with `psi = sum_ij C_ij |i>|j>`.
#[derive(Debug, Clone)]
pub struct Bipartite {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
    pub coefficients: CMatrix,
}

impl Bipartite {
    pub fn new(psi: &StateVector, left: &[usize]) -> Result<Self> {
        let n = psi.num_subsystems();
        let mut l = left.to_vec();
        l.sort_unstable();
        l.dedup();
        if l.len() != left.len() || l.is_empty() || l.len() >= n || l.iter().any(|&k| k >= n) {
            return Err(Error::InvalidPartition(format!(
                "left part {left:?} is not a proper nonempty subset of {n} subsystems"
            )));
        }
        let r = linalg::complement(&l, n);
        let mut order = l.clone();
        order.extend(&r);
        let v = psi.permute(&order)?;
        let left_dims: Vec<usize> = l.iter().map(|&k| psi.dims()[k]).collect();
        let right_dims: Vec<usize> = r.iter().map(|&k| psi.dims()[k]).collect();
        let (dl, dr) = (linalg::product(&left_dims), linalg::product(&right_dims));
        let a = v.amplitudes();
        let coefficients = CMatrix::from_fn(dl, dr, |i, j| a[i * dr + j]);
        Ok(Self { left: l, right: r, left_dims, right_dims, coefficients })
    }

    /// `C C^dag`
    pub fn left_state(&self) -> CMatrix {
        &self.coefficients * self.coefficients.adjoint()
    }

    /// `C^T C^*`
    pub fn right_state(&self) -> CMatrix {
        self.coefficients.transpose() * self.coefficients.conjugate()
    }

    /// Unnormalized partner `(<b| ⊗ I)|psi> = C^T conj(b)`.
    pub fn partner(&self, b: &CVector) -> CVector {
        self.coefficients.transpose() * b.conjugate()
    }

    /// `sum_i |l_i> ⊗ |r_i>` flattened in `left ++ right` order.
    fn assemble(pairs: impl Iterator<Item = (CVector, CVector)>, len: usize) -> CVector {
        pairs.fold(CVector::zeros(len), |acc, (l, r)| acc + linalg::kron_vec(&l, &r))
    }
}

/// `psi = sum_i c_i |l_i> ⊗ |r_i>` with `c` descending.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
    pub left_subsystems: Vec<usize>,
    pub right_subsystems: Vec<usize>,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Reassembles the vector in `left ++ right` subsystem order.
    pub fn reconstruct(&self) -> CVector {
        let len = self.left[0].len() * self.right[0].len();
        Bipartite::assemble(
            self.coefficients
                .iter()
                .zip(self.left.iter().zip(&self.right))
                .map(|(&k, (l, r))| (l * Complex64::new(k, 0.0), r.clone())),
            len,
        )
    }
}

pub fn schmidt_decompose(psi: &StateVector, left: &[usize]) -> Result<SchmidtForm> {
    let bp = Bipartite::new(psi, left)?;
    Ok(schmidt_of(&bp))
}

fn schmidt_of(bp: &Bipartite) -> SchmidtForm {
    let svd = bp.coefficients.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^dag");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut coefficients = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in order {
        let s = svd.singular_values[k];
        if s <= COEFFICIENT_CUTOFF {
            continue;
        }
        let mut l: CVector = u.column(k).into_owned();
        // C = sum s l r^dag, so the right partner is the transposed row of V^dag
        let mut r: CVector = v_t.row(k).transpose();
        if let Some(z) = l.iter().find(|z| z.norm() > 1e-8).copied() {
            let phase = z / z.norm();
            l *= phase.conj();
            r *= phase;
        }
        coefficients.push(s);
        left.push(l);
        right.push(r);
    }
    SchmidtForm {
        coefficients,
        left,
        right,
        left_subsystems: bp.left.clone(),
        right_subsystems: bp.right.clone(),
    }
}

/// The antilinear map `v -> U conj(v)` carrying left Schmidt vectors to
/// their right partners. Defined on the support of the left reduced state.
#[derive(Debug, Clone)]
pub struct CorrelationOperator {
    /// Linear part `U`, of size `dim_right x dim_left`.
    pub matrix: CMatrix,
    /// Orthonormal basis of the domain (support of the left reduced state).
    pub support: Vec<CVector>,
}

impl CorrelationOperator {
    pub fn apply(&self, v: &CVector) -> CVector {
        &self.matrix * v.conjugate()
    }

    /// `U_a^dag` on the range: `w -> U^T conj(w)`.
    pub fn apply_inverse(&self, w: &CVector) -> CVector {
        self.matrix.transpose() * w.conjugate()
    }

    /// Projector onto the domain.
    pub fn support_projector(&self) -> CMatrix {
        let d = self.matrix.ncols();
        self.support
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, v| acc + linalg::outer(v))
    }
}

pub fn correlation_operator(psi: &StateVector, left: &[usize]) -> Result<CorrelationOperator> {
    let form = schmidt_decompose(psi, left)?;
    Ok(correlation_operator_of(&form))
}

pub fn correlation_operator_of(form: &SchmidtForm) -> CorrelationOperator {
    // U = sum_i r_i l_i^T so that U conj(l_j) = r_j
    let (dl, dr) = (form.left[0].len(), form.right[0].len());
    let matrix = form
        .left
        .iter()
        .zip(&form.right)
        .fold(CMatrix::zeros(dr, dl), |acc, (l, r)| acc + r * l.transpose());
    CorrelationOperator { matrix, support: form.left.clone() }
}

/// One term of an expansion in a prescribed left basis.
#[derive(Debug, Clone)]
pub struct Partner {
    pub coefficient: f64,
    /// Unit vector on the right part; zero when `coefficient` is zero.
    pub vector: CVector,
}

/// Expands `psi` in the given orthonormal left basis,
/// `psi = sum_i c_i |b_i> ⊗ |p_i>`, which is a Schmidt form exactly when the
/// basis diagonalizes the left reduced state and covers its support.
pub fn partners_in_basis(psi: &StateVector, left: &[usize], basis: &[CVector]) -> Result<Vec<Partner>> {
    let bp = Bipartite::new(psi, left)?;
    let dl = bp.coefficients.nrows();
    if basis.is_empty() {
        return Err(Error::IncompatibleBasis("empty basis".into()));
    }
    for (i, b) in basis.iter().enumerate() {
        if b.len() != dl {
            return Err(Error::DimensionMismatch(format!(
                "basis vector {i} has length {} but the left part has dimension {dl}",
                b.len()
            )));
        }
        for (j, b2) in basis.iter().enumerate().skip(i) {
            let ip = b.dotc(b2);
            let expected = if i == j { 1.0 } else { 0.0 };
            if (ip - Complex64::new(expected, 0.0)).norm() > HERMITIAN_TOL {
                return Err(Error::IncompatibleBasis(format!(
                    "basis is not orthonormal (<b{i}|b{j}> = {ip:.3e})"
                )));
            }
        }
    }
    let rho_left = bp.left_state();
    let mut covered = 0.0;
    for (i, b) in basis.iter().enumerate() {
        let rb = &rho_left * b;
        covered += b.dotc(&rb).re;
        for (j, b2) in basis.iter().enumerate() {
            if i != j {
                let off = b2.dotc(&rb).norm();
                if off > HERMITIAN_TOL {
                    return Err(Error::IncompatibleBasis(format!(
                        "reduced state is not diagonal in the basis (|<b{j}|rho|b{i}>| = {off:.3e})"
                    )));
                }
            }
        }
    }
    if (covered - 1.0).abs() > HERMITIAN_TOL {
        return Err(Error::IncompatibleBasis(format!(
            "basis misses part of the reduced-state support (weight {covered:.12})"
        )));
    }
    Ok(basis
        .iter()
        .map(|b| {
            let p = bp.partner(b);
            let coefficient = p.norm();
            let vector = if coefficient > COEFFICIENT_CUTOFF { p.unscale(coefficient) } else { CVector::zeros(p.len()) };
            Partner { coefficient, vector }
        })
        .collect())
}

/// Reassembles `sum c_i |b_i> ⊗ |p_i>` in `left ++ right` order.
pub fn reassemble(basis: &[CVector], partners: &[Partner]) -> CVector {
    let len = basis[0].len() * partners[0].vector.len();
    Bipartite::assemble(
        basis
            .iter()
            .zip(partners)
            .map(|(b, p)| (b * Complex64::new(p.coefficient, 0.0), p.vector.clone())),
        len,
    )
}

/// Correlation seen by `P_1 ⊗ P_2` on a bipartite pure state, evaluated
/// through the correlation operator:
/// `|sum'_q <q| rho_1^{1/2} U_a^dag P_2 U_a rho_1^{1/2} |q> - tr(rho_1 P_1) tr(rho_2 P_2)|`
/// where `{q}` is an orthonormal basis whose first vectors span `P_1`.
pub fn lemma1_seen_correlation(
    psi: &StateVector,
    left: &[usize],
    p1: &Projector,
    p2: &Projector,
) -> Result<f64> {
    let bp = Bipartite::new(psi, left)?;
    let (dl, dr) = bp.coefficients.shape();
    if p1.dim() != dl || p2.dim() != dr {
        return Err(Error::DimensionMismatch(format!(
            "events of dimensions ({}, {}) on parts of dimensions ({dl}, {dr})",
            p1.dim(),
            p2.dim()
        )));
    }
    let form = schmidt_of(&bp);
    let ua = correlation_operator_of(&form);
    let rho1 = bp.left_state();
    let rho2 = bp.right_state();
    let sqrt_rho1 = linalg::matrix_sqrt_psd(&rho1)?;
    let (range, _) = p1.split_basis();
    let joint: f64 = range
        .iter()
        .map(|q| {
            let w = ua.apply(&(&sqrt_rho1 * q));
            w.dotc(&(p2.matrix() * &w)).re
        })
        .sum();
    let m1 = linalg::trace_product(&rho1, p1.matrix()).re;
    let m2 = linalg::trace_product(&rho2, p2.matrix()).re;
    Ok((joint - m1 * m2).abs())
}
