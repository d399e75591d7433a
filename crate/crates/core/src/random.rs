//! Random states, projectors and unitaries for property tests and examples.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::correlations::Projector;
use crate::linalg::{self, c, CMatrix, CVector};
use crate::state::{DensityOperator, StateVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unit vector of length `dim`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> StateVector {
    StateVector::from_parts(dims.to_vec(), unit_vector(rng, linalg::product(dims)))
}

/// Induced-measure mixed state of the given rank (`G G^dag / tr`).
pub fn density<R: Rng + ?Sized>(rng: &mut R, dims: &[usize], rank: usize) -> DensityOperator {
    let d = linalg::product(dims);
    let g = ginibre(rng, d, rank.clamp(1, d));
    let m = &g * g.adjoint();
    let tr = linalg::trace_of(&m).re;
    DensityOperator::from_parts(dims.to_vec(), linalg::hermitian_part(&(m / c(tr, 0.0))))
}

/// Full-rank random state.
pub fn full_rank_density<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> DensityOperator {
    density(rng, dims, linalg::product(dims))
}

/// Haar unitary via QR of a Ginibre matrix with the phase correction.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let qr = ginibre(rng, dim, dim).qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    q
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    linalg::hermitian_part(&ginibre(rng, dim, dim))
}

/// Uniformly random rank-one projector.
pub fn ray_projector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Projector {
    Projector::ray(&unit_vector(rng, dim)).expect("unit vector")
}

/// Random projector of the given rank.
pub fn projector<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Projector {
    let u = unitary(rng, dim);
    let cols = u.columns(0, rank.min(dim)).into_owned();
    Projector::from_matrix(&cols * cols.adjoint()).expect("orthonormal columns span a projector")
}

/// Random projector with rank drawn uniformly from `0..=dim`.
pub fn any_projector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Projector {
    let rank = rng.random_range(0..=dim);
    projector(rng, dim, rank)
}
