#![allow(dead_code)]

use nalgebra::DMatrix;
use qfactor::linalg::{self, c, CMatrix};
use qfactor::partition::ClusterDecomposition;
use qfactor::random;
use qfactor::{DensityOperator, Projector};
use rand::Rng;

/// Uniform-ish random partition of `0..n` from a random restricted growth string.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> ClusterDecomposition {
    let mut labels = vec![0usize; n];
    let mut max = 0;
    for label in labels.iter_mut().skip(1) {
        *label = rng.random_range(0..=max + 1);
        max = max.max(*label);
    }
    ClusterDecomposition::from_labels(&labels)
}

/// Product over `cd` of random cluster states, each pure or mixed with a
/// random rank, with subsystems put back in their global positions.
pub fn product_state<R: Rng>(rng: &mut R, dims: &[usize], cd: &ClusterDecomposition) -> DensityOperator {
    let mut order = Vec::new();
    let mut acc: Option<DensityOperator> = None;
    for cl in cd.clusters() {
        let cdims: Vec<usize> = cl.iter().map(|&k| dims[k]).collect();
        let d = linalg::product(&cdims);
        let factor = if rng.random_bool(0.5) {
            random::pure_state(rng, &cdims).density()
        } else {
            let rank = rng.random_range(1..=d);
            random::density(rng, &cdims, rank)
        };
        acc = Some(match acc {
            None => factor,
            Some(a) => a.tensor(&factor),
        });
        order.extend_from_slice(cl);
    }
    let rho = acc.expect("at least one cluster");
    rho.permute(&linalg::inverse_permutation(&order)).unwrap()
}

/// Random complete set of orthogonal projectors on a `dim`-dimensional
/// space, with random ranks.
pub fn random_measurement<R: Rng>(rng: &mut R, dim: usize) -> Vec<Projector> {
    let u = random::unitary(rng, dim);
    let mut out = Vec::new();
    let mut start = 0;
    while start < dim {
        let size = rng.random_range(1..=dim - start);
        let cols = u.columns(start, size).into_owned();
        out.push(Projector::from_matrix(&cols * cols.adjoint()).unwrap());
        start += size;
    }
    out
}

/// Von Neumann entropy in bits from nalgebra's Hermitian eigenvalues.
pub fn entropy_bits(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .filter(|&&p| p > 1e-12)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `|psi><psi|`-free expectation `<v|M|v>` for a plain vector.
pub fn expectation(m: &CMatrix, v: &qfactor::CVector) -> f64 {
    v.dotc(&(m * v)).re
}

/// Real-valued copy of a complex matrix's real part, for LU work.
pub fn real_part(m: &CMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

pub fn scaled(m: &CMatrix, s: f64) -> CMatrix {
    m * c(s, 0.0)
}
