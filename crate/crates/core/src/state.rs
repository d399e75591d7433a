//! Multipartite density operators and state vectors with labeled subsystem
//! dimensions.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, HERMITIAN_TOL};

fn check_subsystem_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidInput("at least one subsystem is required".into()));
    }
    if dims.contains(&0) {
        return Err(Error::InvalidInput(format!("zero-dimensional subsystem in {dims:?}")));
    }
    Ok(())
}

/// A trace-one positive operator on `H_0 ⊗ H_1 ⊗ ... ⊗ H_{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity (all at `1e-10`).
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        check_subsystem_dims(&dims)?;
        let d = linalg::product(&dims);
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, dimensions {:?} need {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                dims,
                d,
                d
            )));
        }
        if !linalg::all_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = linalg::trace_of(&matrix).re;
        if (tr - 1.0).abs() > HERMITIAN_TOL {
            return Err(Error::BadTrace(tr));
        }
        let lowest = linalg::hermitian_eigenvalues(&matrix)?[0];
        if lowest < -HERMITIAN_TOL {
            return Err(Error::NotPositive(lowest));
        }
        Ok(Self { dims, matrix: linalg::hermitian_part(&matrix) })
    }

    /// Skips validation; used where the result is a density operator by
    /// construction (reductions, products, reorderings).
    pub(crate) fn from_parts(dims: Vec<usize>, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), linalg::product(&dims));
        Self { dims, matrix }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        check_subsystem_dims(&dims)?;
        let d = linalg::product(&dims);
        Ok(Self::from_parts(dims, linalg::identity(d) * linalg::c(1.0 / d as f64, 0.0)))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Dimension of the joint space of the given subsystems.
    pub fn cluster_dim(&self, cluster: &[usize]) -> usize {
        cluster.iter().map(|&k| self.dims[k]).product()
    }

    /// State of the subsystems in `cluster`, tracing out the rest. Subsystems
    /// keep their global order.
    pub fn reduced(&self, cluster: &[usize]) -> Result<DensityOperator> {
        if cluster.is_empty() {
            return Err(Error::InvalidInput("cannot reduce to an empty cluster".into()));
        }
        let m = linalg::partial_trace(&self.matrix, &self.dims, cluster)?;
        let mut kept = cluster.to_vec();
        kept.sort_unstable();
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(Self::from_parts(dims, m))
    }

    /// Reorders tensor factors: subsystem `perm[j]` moves to position `j`.
    pub fn permute(&self, perm: &[usize]) -> Result<DensityOperator> {
        let m = linalg::permute_operator(&self.matrix, &self.dims, perm)?;
        Ok(Self::from_parts(linalg::permuted_dims(&self.dims, perm), m))
    }

    /// `self ⊗ other`, with `other`'s subsystems appended.
    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        let mut dims = self.dims.clone();
        dims.extend(&other.dims);
        Self::from_parts(dims, linalg::kron(&self.matrix, &other.matrix))
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix).expect("density operator is Hermitian")
    }

    /// `tr(rho op)`
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        linalg::trace_product(&self.matrix, op).re
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_product(&self.matrix, &self.matrix).re
    }
}

/// A unit vector on a multipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amplitudes: CVector,
}

impl StateVector {
    /// Validates unit norm within `1e-10`.
    pub fn new(dims: Vec<usize>, amplitudes: CVector) -> Result<Self> {
        check_subsystem_dims(&dims)?;
        if amplitudes.len() != linalg::product(&dims) {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dimensions {:?}",
                amplitudes.len(),
                dims
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > HERMITIAN_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(dims: Vec<usize>, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Self::new(dims, amplitudes.unscale(norm))
    }

    pub(crate) fn from_parts(dims: Vec<usize>, amplitudes: CVector) -> Self {
        Self { dims, amplitudes }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_parts(self.dims.clone(), linalg::outer(&self.amplitudes))
    }

    pub fn permute(&self, perm: &[usize]) -> Result<StateVector> {
        let v = linalg::permute_vector(&self.amplitudes, &self.dims, perm)?;
        Ok(Self::from_parts(linalg::permuted_dims(&self.dims, perm), v))
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.clone();
        dims.extend(&other.dims);
        Self::from_parts(dims, linalg::kron_vec(&self.amplitudes, &other.amplitudes))
    }

    /// `|<self|other>|^2`
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }
}

/// A pure or mixed state.
#[derive(Debug, Clone)]
pub enum AnyState {
    Pure(StateVector),
    Mixed(DensityOperator),
}

impl AnyState {
    pub fn density(&self) -> DensityOperator {
        match self {
            AnyState::Pure(v) => v.density(),
            AnyState::Mixed(d) => d.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&StateVector> {
        match self {
            AnyState::Pure(v) => Some(v),
            AnyState::Mixed(_) => None,
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            AnyState::Pure(v) => v.dims(),
            AnyState::Mixed(d) => d.dims(),
        }
    }
}

/// Free-function form of [`DensityOperator::reduced`].
pub fn reduced_state(rho: &DensityOperator, cluster: &[usize]) -> Result<DensityOperator> {
    rho.reduced(cluster)
}

/// Free-function form of [`DensityOperator::permute`].
pub fn permute_subsystems(rho: &DensityOperator, perm: &[usize]) -> Result<DensityOperator> {
    rho.permute(perm)
}
