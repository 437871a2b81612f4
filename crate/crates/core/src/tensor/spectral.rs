//! Functional calculus for Hermitian matrices.

use crate::error::{Error, Result};
use crate::tol::Tolerances;

use super::matrix::{ComplexMatrix, C64};

/// Eigendecomposition `h = V diag(λ) V*` of a Hermitian matrix.
///
/// Eigenvalues are returned in ascending order with matching columns of `V`.
pub fn eigh(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(h, Tolerances::default().identity)?;
    Ok(eigh_unchecked(h))
}

fn eigh_unchecked(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = h.rows();
    // symmetrize first so that rounding noise in the input does not leak into V
    let sym = (h + &h.adjoint()).scale_real(0.5);
    let eig = sym.to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

fn check_hermitian(h: &ComplexMatrix, rel: f64) -> Result<()> {
    if !h.is_square() {
        return Err(crate::error::shape_err(
            "square matrix",
            format!("{}x{}", h.rows(), h.cols()),
        ));
    }
    let residual = h.hermitian_residual();
    if residual > rel * h.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

/// `f(h) = V diag(f(λ)) V*` for Hermitian `h`.
pub fn herm_apply(h: &ComplexMatrix, f: impl Fn(f64) -> C64) -> Result<ComplexMatrix> {
    check_hermitian(h, Tolerances::default().identity)?;
    let (values, v) = eigh_unchecked(h);
    Ok(rebuild(&values, &v, f))
}

fn rebuild(values: &[f64], v: &ComplexMatrix, f: impl Fn(f64) -> C64) -> ComplexMatrix {
    let n = values.len();
    let fv: Vec<C64> = values.iter().map(|&x| f(x)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += v[(i, k)] * fv[k] * v[(j, k)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// `h^z` for positive definite `h` and complex `z`, on the principal branch.
pub fn herm_power(h: &ComplexMatrix, z: C64) -> Result<ComplexMatrix> {
    herm_power_with(h, z, &Tolerances::default())
}

pub fn herm_power_with(h: &ComplexMatrix, z: C64, tol: &Tolerances) -> Result<ComplexMatrix> {
    check_hermitian(h, tol.identity)?;
    let (values, v) = eigh_unchecked(h);
    let min = values.first().copied().unwrap_or(1.0);
    if min <= tol.pd_rel * h.frobenius_norm() {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    Ok(rebuild(&values, &v, |x| (z * x.ln()).exp()))
}

pub fn herm_power_real(h: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    herm_power(h, C64::new(p, 0.0))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    let (values, _) = eigh(h)?;
    Ok(values.first().copied().unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_positive, seeded};
    use proptest::prelude::*;

    fn id(n: usize) -> ComplexMatrix {
        ComplexMatrix::identity(n)
    }

    #[test]
    fn square_root_of_diagonal() {
        let h = ComplexMatrix::diag_real(&[4.0, 1.0]);
        let r = herm_power_real(&h, 0.5).unwrap();
        assert!(r.distance(&ComplexMatrix::diag_real(&[2.0, 1.0])) < 1e-14);
    }

    #[test]
    fn imaginary_powers_form_a_unitary_group() {
        let mut rng = seeded(3);
        let h = random_positive(&mut rng, 3);
        let t = 0.7;
        let a = herm_power(&h, C64::new(0.0, t)).unwrap();
        let b = herm_power(&h, C64::new(0.0, -t)).unwrap();
        assert!((&a * &b).distance(&id(3)) < 1e-12);
        for t in [-1.0, 0.5] {
            let u = herm_power(&h, C64::new(0.0, t)).unwrap();
            assert!((&u.adjoint() * &u).distance(&id(3)) < 1e-12);
        }
    }

    #[test]
    fn power_one_and_zero() {
        let h = random_positive(&mut seeded(4), 4);
        assert!(herm_power_real(&h, 1.0).unwrap().distance(&h) < 1e-12);
        assert!(herm_power_real(&h, 0.0).unwrap().distance(&id(4)) < 1e-12);
    }

    #[test]
    fn rejects_non_positive_and_non_hermitian() {
        let h = ComplexMatrix::diag_real(&[1.0, -1.0]);
        assert!(matches!(herm_power_real(&h, 0.5), Err(Error::NotPositiveDefinite { .. })));
        let h = ComplexMatrix::diag_real(&[1.0, 0.0]);
        assert!(matches!(herm_power_real(&h, 0.5), Err(Error::NotPositiveDefinite { .. })));
        let mut h = id(2);
        h[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(herm_power_real(&h, 0.5), Err(Error::NotHermitian { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn group_law(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0) {
            let h = random_positive(&mut seeded(seed), 3);
            let z1 = C64::new(a, b);
            let z2 = C64::new(c, d);
            let lhs = &herm_power(&h, z1).unwrap() * &herm_power(&h, z2).unwrap();
            let rhs = herm_power(&h, z1 + z2).unwrap();
            prop_assert!(lhs.rel_distance(&rhs) <= 1e-10);
        }
    }
}
