//! Dense complex linear algebra on multipartite operators.
//!
//! Subsystem `0` is always the leftmost (slowest-varying) tensor factor.
//! Index sets passed to the functions here are zero-based.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Entrywise tolerance for Hermiticity and eigenvalue sign checks.
pub const HERMITIAN_TOL: f64 = 1e-10;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Builds a complex matrix from real entries given row by row.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j], 0.0))
}

/// `|v><v|`
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// `|u><v|`
pub fn dyad(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Kronecker product of a sequence, left to right. Empty input gives `[[1]]`.
pub fn kron_all<'a, I>(factors: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    factors
        .into_iter()
        .fold(CMatrix::from_element(1, 1, ONE), |acc, f| acc.kronecker(f))
}

pub fn trace_of(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// `tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    assert_eq!(a.ncols(), b.nrows());
    assert_eq!(a.nrows(), b.ncols());
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok((a - b).norm())
}

/// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && hermiticity_defect(m) <= tol
}

/// `(m + m^dag) / 2`
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    /// `V diag(f(lambda)) V^dag`
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            let w = f(self.values[k]);
            scaled.column_mut(k).scale_mut(w);
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {:?}",
            m.shape()
        )));
    }
    if !all_finite(m) {
        return Err(Error::NonFinite);
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(m)?.values)
}

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// `[-HERMITIAN_TOL, 0)` are clamped to zero.
pub fn matrix_sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(m)?;
    if let Some(&lowest) = eig.values.first() {
        if lowest < -HERMITIAN_TOL {
            return Err(Error::NotPositive(lowest));
        }
    }
    Ok(eig.map(|x| x.max(0.0).sqrt()))
}

pub fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Row-major strides of a multi-index with the given dimensions.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Flat offsets contributed by every joint value of the selected axes.
/// Entries are listed with the first selected axis varying slowest.
fn axis_offsets(dims: &[usize], axes: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut offsets = vec![0usize];
    for &a in axes {
        let mut next = Vec::with_capacity(offsets.len() * dims[a]);
        for &o in &offsets {
            for i in 0..dims[a] {
                next.push(o + i * st[a]);
            }
        }
        offsets = next;
    }
    offsets
}

fn check_dims(m: &CMatrix, dims: &[usize]) -> Result<()> {
    let d = product(dims);
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{} but subsystem dimensions {:?} multiply to {}",
            m.nrows(),
            m.ncols(),
            dims,
            d
        )));
    }
    Ok(())
}

fn check_index_set(set: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != set.len() {
        return Err(Error::InvalidInput(format!("repeated subsystem in {set:?}")));
    }
    if let Some(&bad) = sorted.iter().find(|&&k| k >= n) {
        return Err(Error::OutOfRange(format!(
            "subsystem {bad} (only {n} subsystems)"
        )));
    }
    Ok(sorted)
}

/// Complement of `set` in `0..n`, ascending.
pub fn complement(set: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|k| !set.contains(k)).collect()
}

/// Traces out every subsystem not in `keep`. Kept subsystems retain their
/// global order regardless of how `keep` is listed.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    check_dims(m, dims)?;
    let keep = check_index_set(keep, dims.len())?;
    let traced = complement(&keep, dims.len());
    let kept_off = axis_offsets(dims, &keep);
    let traced_off = axis_offsets(dims, &traced);
    let dk = kept_off.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (r, &ro) in kept_off.iter().enumerate() {
        for (s, &so) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += m[(ro + t, so + t)];
            }
            out[(r, s)] = acc;
        }
    }
    Ok(out)
}

/// For each flat index of the permuted layout, the flat index in the
/// original layout. `perm[j]` names the original subsystem placed at
/// position `j`.
pub fn permutation_index_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let n = dims.len();
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "{perm:?} has length {} for {n} subsystems",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!(
                "{perm:?} is not a bijection on 0..{n}"
            )));
        }
        seen[p] = true;
    }
    Ok(axis_offsets(dims, perm))
}

pub fn permuted_dims(dims: &[usize], perm: &[usize]) -> Vec<usize> {
    perm.iter().map(|&p| dims[p]).collect()
}

/// Reorders the tensor factors of an operator.
pub fn permute_operator(m: &CMatrix, dims: &[usize], perm: &[usize]) -> Result<CMatrix> {
    check_dims(m, dims)?;
    let map = permutation_index_map(dims, perm)?;
    let d = map.len();
    Ok(CMatrix::from_fn(d, d, |i, j| m[(map[i], map[j])]))
}

/// Reorders the tensor factors of a vector.
pub fn permute_vector(v: &CVector, dims: &[usize], perm: &[usize]) -> Result<CVector> {
    if v.len() != product(dims) {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} vs dimensions {:?}",
            v.len(),
            dims
        )));
    }
    let map = permutation_index_map(dims, perm)?;
    Ok(CVector::from_fn(map.len(), |i, _| v[map[i]]))
}

/// Inverse of a permutation given as a position list.
pub fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (j, &p) in perm.iter().enumerate() {
        inv[p] = j;
    }
    inv
}

/// Lifts `op`, acting on the subsystems in `cluster` (in their global
/// order), to the full space by tensoring with identities.
pub fn embed_operator(op: &CMatrix, dims: &[usize], cluster: &[usize]) -> Result<CMatrix> {
    let cluster = check_index_set(cluster, dims.len())?;
    let dc: usize = cluster.iter().map(|&k| dims[k]).product();
    if op.nrows() != dc || op.ncols() != dc {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{} but cluster {:?} has dimension {}",
            op.nrows(),
            op.ncols(),
            cluster,
            dc
        )));
    }
    let rest = complement(&cluster, dims.len());
    let dr: usize = rest.iter().map(|&k| dims[k]).product();
    let block = kron(op, &identity(dr));
    let mut order = cluster.clone();
    order.extend(&rest);
    let block_dims = permuted_dims(dims, &order);
    permute_operator(&block, &block_dims, &inverse_permutation(&order))
}

/// Tensor product of operators on the given disjoint clusters, rearranged
/// into the global subsystem order. The clusters must cover `0..dims.len()`.
pub fn kron_clusters(ops: &[CMatrix], clusters: &[Vec<usize>], dims: &[usize]) -> Result<CMatrix> {
    if ops.len() != clusters.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} operators for {} clusters",
            ops.len(),
            clusters.len()
        )));
    }
    let order: Vec<usize> = clusters.iter().flatten().copied().collect();
    for (op, cl) in ops.iter().zip(clusters) {
        let dc: usize = cl.iter().map(|&k| dims[k]).product();
        if op.nrows() != dc || op.ncols() != dc {
            return Err(Error::DimensionMismatch(format!(
                "operator of size {} on cluster {:?} of dimension {}",
                op.nrows(),
                cl,
                dc
            )));
        }
    }
    let block = kron_all(ops.iter());
    let block_dims = permuted_dims(dims, &order);
    permute_operator(&block, &block_dims, &inverse_permutation(&order))
}

/// `||U^dag U - I||_F`
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (u.adjoint() * u - identity(u.nrows())).norm()
}
