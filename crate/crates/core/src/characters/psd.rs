//! Positive semidefiniteness of Hermitian matrices over cyclotomic fields.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cyclotomic::Cyclotomic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PsdStatus {
    Psd,
    NotPsd,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub status: PsdStatus,
    /// Smallest eigenvalue from the floating-point eigensolver.
    pub min_eigenvalue: f64,
    /// Bound on the distance from `min_eigenvalue` to the true smallest eigenvalue.
    pub error_bound: f64,
    pub reason: String,
}

/// Relative size below which a floating evaluation is not trusted for its sign.
const SIGN_TOLERANCE: f64 = 1e-9;

/// Sign of a real cyclotomic number: by evaluation when it is clearly away
/// from zero, by exact zero test otherwise. `None` means undecided.
fn real_sign(x: &Cyclotomic) -> Option<Ordering> {
    if x.is_zero() {
        return Some(Ordering::Equal);
    }
    if let Some(q) = x.as_rational() {
        return Some(if q.is_negative() { Ordering::Less } else { Ordering::Greater });
    }
    let value = x.to_complex().re;
    if value.abs() > SIGN_TOLERANCE * (1.0 + x.coefficient_mass()) {
        Some(value.partial_cmp(&0.0).expect("finite"))
    } else {
        None
    }
}

fn float_matrix(m: &[Vec<Cyclotomic>]) -> DMatrix<Complex64> {
    let k = m.len();
    DMatrix::from_fn(k, k, |i, j| m[i][j].to_complex())
}

/// Smallest eigenvalue of the Hermitian part and a Weyl-type error bound
/// covering entry rounding and the eigensolver's backward error.
pub fn min_eigenvalue(m: &[Vec<Cyclotomic>]) -> (f64, f64) {
    let k = m.len();
    if k == 0 {
        return (0.0, 0.0);
    }
    let a = float_matrix(m);
    let hermitian = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let eigen = hermitian.clone().symmetric_eigen();
    let (index, lambda) = eigen
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty spectrum");
    let v = eigen.eigenvectors.column(index);
    let residual = (&hermitian * v - v * Complex64::new(lambda, 0.0)).norm();
    let bound = residual + 64.0 * f64::EPSILON * (k as f64) * hermitian.norm().max(1.0);
    (lambda, bound)
}

/// Decides whether the matrix is positive semidefinite.
///
/// An exact `LDL*` elimination over the cyclotomic field is run first; pivot
/// signs come from [`real_sign`]. A zero pivot is fine only if the rest of its
/// column vanishes. When a pivot sign cannot be decided the floating
/// eigenvalue with its error bound is used, and `Indeterminate` is returned
/// if that is inconclusive too.
pub fn decide_psd(m: &[Vec<Cyclotomic>]) -> PsdVerdict {
    let (min_eigenvalue, error_bound) = min_eigenvalue(m);
    let verdict = |status, reason: &str| PsdVerdict { status, min_eigenvalue, error_bound, reason: reason.into() };
    let k = m.len();
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate().skip(i) {
            if *x != m[j][i].conj() {
                return verdict(PsdStatus::NotPsd, &format!("not Hermitian at ({i},{j})"));
            }
        }
    }
    let mut a: Vec<Vec<Cyclotomic>> = m.to_vec();
    for p in 0..k {
        match real_sign(&a[p][p]) {
            Some(Ordering::Less) => return verdict(PsdStatus::NotPsd, &format!("negative pivot {}", a[p][p])),
            Some(Ordering::Equal) => {
                if let Some(i) = (p + 1..k).find(|&i| !a[i][p].is_zero()) {
                    return verdict(PsdStatus::NotPsd, &format!("zero pivot {p} with nonzero entry in row {i}"));
                }
            }
            Some(Ordering::Greater) => {
                let inv = a[p][p].inverse().expect("positive pivot");
                let (above, below) = a.split_at_mut(p + 1);
                let pivot_row = &above[p];
                for row in below {
                    let factor = row[p].mul(&inv);
                    for (x, pj) in row.iter_mut().zip(pivot_row).skip(p + 1) {
                        *x = x.sub(&factor.mul(pj));
                    }
                }
            }
            None => {
                return if min_eigenvalue - error_bound > 0.0 {
                    verdict(PsdStatus::Psd, "floating eigenvalue certified positive")
                } else if min_eigenvalue + error_bound < 0.0 {
                    verdict(PsdStatus::NotPsd, "floating eigenvalue certified negative")
                } else {
                    verdict(PsdStatus::Indeterminate, "pivot sign undecided and eigenvalue within error bound")
                };
            }
        }
    }
    verdict(PsdStatus::Psd, "exact LDL* with nonnegative pivots")
}
