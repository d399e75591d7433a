//! Named canonical states and single-qubit events.
//!
//! Spin labels are fixed globally: `|+> = |up> = index 0` and
//! `|-> = |down> = index 1`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::correlations::Projector;
use crate::error::{Error, Result};
use crate::linalg::{c, CVector};
use crate::state::{AnyState, DensityOperator, StateVector};

pub const FIXTURE_NAMES: &[&str] = &[
    "singlet",
    "psi_plus",
    "psi_minus",
    "phi_plus",
    "phi_minus",
    "eq15",
    "eq16",
    "seevinck21",
    "up_up",
    "mixed_qubit",
    "mixed_two_qubits",
];

fn qubits(n: usize, amps: &[(usize, f64)]) -> StateVector {
    let mut v = CVector::zeros(1 << n);
    for &(idx, a) in amps {
        v[idx] = c(a, 0.0);
    }
    StateVector::new(vec![2; n], v).expect("fixture amplitudes are normalized")
}

/// `(|+-> - |-+>)/sqrt(2)`, amplitudes `(0, 1/sqrt2, -1/sqrt2, 0)`.
pub fn singlet() -> StateVector {
    psi_minus()
}

pub fn psi_plus() -> StateVector {
    qubits(2, &[(0b01, FRAC_1_SQRT_2), (0b10, FRAC_1_SQRT_2)])
}

pub fn psi_minus() -> StateVector {
    qubits(2, &[(0b01, FRAC_1_SQRT_2), (0b10, -FRAC_1_SQRT_2)])
}

pub fn phi_plus() -> StateVector {
    qubits(2, &[(0b00, FRAC_1_SQRT_2), (0b11, FRAC_1_SQRT_2)])
}

pub fn phi_minus() -> StateVector {
    qubits(2, &[(0b00, FRAC_1_SQRT_2), (0b11, -FRAC_1_SQRT_2)])
}

/// The four Bell states in the order `psi+, psi-, phi+, phi-`.
pub fn bell_basis() -> [StateVector; 4] {
    [psi_plus(), psi_minus(), phi_plus(), phi_minus()]
}

/// Two singlets on pairs `(1,2)` and `(3,4)`.
pub fn eq15() -> StateVector {
    singlet().tensor(&singlet())
}

/// The same state with its factors reordered `2,3,1,4`.
pub fn eq16() -> StateVector {
    let s = 0.5;
    // index bits: s2 s3 s1 s4
    qubits(
        4,
        &[(0b1001, s), (0b1100, -s), (0b0011, -s), (0b0110, s)],
    )
}

/// `(|up down up down> - |down up down up>)/sqrt(2)`
pub fn seevinck21() -> StateVector {
    qubits(4, &[(0b0101, FRAC_1_SQRT_2), (0b1010, -FRAC_1_SQRT_2)])
}

pub fn fixture(name: &str) -> Result<AnyState> {
    let state = match name {
        "singlet" => AnyState::Pure(singlet()),
        "psi_plus" => AnyState::Pure(psi_plus()),
        "psi_minus" => AnyState::Pure(psi_minus()),
        "phi_plus" => AnyState::Pure(phi_plus()),
        "phi_minus" => AnyState::Pure(phi_minus()),
        "eq15" => AnyState::Pure(eq15()),
        "eq16" => AnyState::Pure(eq16()),
        "seevinck21" => AnyState::Pure(seevinck21()),
        "up_up" => AnyState::Pure(qubits(2, &[(0, 1.0)])),
        "mixed_qubit" => AnyState::Mixed(DensityOperator::maximally_mixed(vec![2])?),
        "mixed_two_qubits" => AnyState::Mixed(DensityOperator::maximally_mixed(vec![2, 2])?),
        _ => {
            return Err(Error::UnknownFixture {
                name: name.to_string(),
                available: FIXTURE_NAMES.join(", "),
            })
        }
    };
    Ok(state)
}

pub fn spin_up() -> Projector {
    Projector::ray(&CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)])).unwrap()
}

pub fn spin_down() -> Projector {
    Projector::ray(&CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)])).unwrap()
}

/// `(|up> + |down>)/sqrt(2)`
pub fn x_plus() -> Projector {
    Projector::ray(&CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)])).unwrap()
}

/// `(|up> - |down>)/sqrt(2)`
pub fn x_minus() -> Projector {
    Projector::ray(&CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)])).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, identity};
    use crate::schmidt::schmidt_decompose;

    #[test]
    fn singlet_amplitudes() {
        let a = singlet();
        let expected = [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0];
        for (z, e) in a.amplitudes().iter().zip(expected) {
            assert_eq!(*z, c(e, 0.0));
        }
    }

    #[test]
    fn eq15_is_tensor_of_singlets() {
        let v = eq15();
        assert_eq!(v.dims(), &[2, 2, 2, 2]);
        assert_eq!(v.amplitudes(), &crate::linalg::kron_vec(singlet().amplitudes(), singlet().amplitudes()));
    }

    #[test]
    fn seevinck_support() {
        let v = seevinck21();
        for (i, z) in v.amplitudes().iter().enumerate() {
            match i {
                0b0101 => assert!((z.re - FRAC_1_SQRT_2).abs() < 1e-16),
                0b1010 => assert!((z.re + FRAC_1_SQRT_2).abs() < 1e-16),
                _ => assert_eq!(z.norm(), 0.0),
            }
        }
    }

    #[test]
    fn bell_states_orthonormal_and_maximally_entangled() {
        let basis = bell_basis();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let ip = a.amplitudes().dotc(b.amplitudes());
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c(expected, 0.0)).norm() < 1e-15);
            }
            let form = schmidt_decompose(a, &[0]).unwrap();
            assert_eq!(form.coefficients.len(), 2);
            for &k in &form.coefficients {
                assert!((k - FRAC_1_SQRT_2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn seevinck_marginals_and_bipartitions() {
        let v = seevinck21();
        let rho = v.density();
        for k in 0..4 {
            let r = rho.reduced(&[k]).unwrap();
            assert!(frobenius_distance(r.matrix(), &(identity(2) * c(0.5, 0.0))).unwrap() < 1e-15);
        }
        for left in [vec![0], vec![1], vec![0, 1], vec![0, 2], vec![0, 3]] {
            let form = schmidt_decompose(&v, &left).unwrap();
            assert_eq!(form.coefficients.len(), 2, "split {left:?}");
            for &k in &form.coefficients {
                assert!((k - FRAC_1_SQRT_2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unknown_name_lists_catalog() {
        let err = fixture("nope").unwrap_err().to_string();
        assert!(err.contains("singlet") && err.contains("seevinck21"));
        for name in FIXTURE_NAMES {
            fixture(name).unwrap();
        }
    }

    #[test]
    fn basis_projectors() {
        let sum = spin_up().matrix() + spin_down().matrix();
        assert_eq!(sum, identity(2));
        let sum = x_plus().matrix() + x_minus().matrix();
        assert!(frobenius_distance(&sum, &identity(2)).unwrap() < 1e-15);
    }
}
