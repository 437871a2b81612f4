//! Kernels of real-linear maps between spaces of complex matrices.
//!
//! A complex `r x c` matrix is realified to `R^{2rc}` by sending entry `k` to
//! the coordinates `2k` (real part) and `2k + 1` (imaginary part). The
//! Euclidean inner product there is `Re⟨A, B⟩_HS`.

use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone)]
pub struct Nullspace {
    /// Real-orthonormal kernel basis.
    pub basis: Vec<ComplexMatrix>,
    /// Singular values of the realified map, descending.
    pub singular_values: Vec<f64>,
    /// Ratio between the smallest retained singular value and the largest
    /// discarded one; `f64::INFINITY` when nothing is discarded or the
    /// kernel is everything.
    pub gap: f64,
}

impl Nullspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn realify(parts: &[ComplexMatrix]) -> Vec<f64> {
    parts
        .iter()
        .flat_map(|m| m.data().iter().flat_map(|z| [z.re, z.im]))
        .collect()
}

fn complexify(rows: usize, cols: usize, v: &[f64]) -> ComplexMatrix {
    let data = v.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    ComplexMatrix::new(rows, cols, data).expect("finite realified vector")
}

/// Realified matrix of `map` on `rows x cols` complex matrices.
pub fn realified_matrix(
    rows: usize,
    cols: usize,
    map: impl Fn(&ComplexMatrix) -> Vec<ComplexMatrix>,
) -> DMatrix<f64> {
    let n_in = 2 * rows * cols;
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n_in);
    for k in 0..n_in {
        let mut e = ComplexMatrix::zeros(rows, cols);
        e[(k / 2 / cols, (k / 2) % cols)] = if k % 2 == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 1.0)
        };
        columns.push(realify(&map(&e)));
    }
    let n_out = columns.first().map_or(0, Vec::len);
    assert!(columns.iter().all(|c| c.len() == n_out), "map output shape must not depend on input");
    DMatrix::from_fn(n_out, n_in, |i, j| columns[j][i])
}

/// Real kernel of a real-linear `map` on `rows x cols` complex matrices.
///
/// Singular values at or below `rank_rel * σ_max` count as zero. The map may
/// involve conjugation; its output may be any list of matrices whose shapes
/// do not depend on the input.
pub fn real_nullspace(
    rows: usize,
    cols: usize,
    rank_rel: f64,
    map: impl Fn(&ComplexMatrix) -> Vec<ComplexMatrix>,
) -> Nullspace {
    real_nullspace_of_matrix(rows, cols, rank_rel, realified_matrix(rows, cols, map))
}

pub fn real_nullspace_of_matrix(rows: usize, cols: usize, rank_rel: f64, a: DMatrix<f64>) -> Nullspace {
    let n_in = a.ncols();
    // reduce to a square system with the same kernel
    let square = if a.nrows() > n_in {
        a.qr().r()
    } else if a.nrows() < n_in {
        let mut padded = DMatrix::<f64>::zeros(n_in, n_in);
        padded.rows_mut(0, a.nrows()).copy_from(&a);
        padded
    } else {
        a
    };
    if n_in == 0 {
        return Nullspace {
            basis: Vec::new(),
            singular_values: Vec::new(),
            gap: f64::INFINITY,
        };
    }
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    let threshold = rank_rel * smax;

    let mut basis = Vec::new();
    let mut largest_dropped: f64 = 0.0;
    let mut smallest_kept = f64::INFINITY;
    for (k, &s) in sigma.iter().enumerate() {
        if s <= threshold {
            largest_dropped = largest_dropped.max(s);
            let v: Vec<f64> = v_t.row(k).iter().copied().collect();
            basis.push(complexify(rows, cols, &v));
        } else {
            smallest_kept = smallest_kept.min(s);
        }
    }
    let gap = if basis.is_empty() || smallest_kept.is_infinite() || largest_dropped == 0.0 {
        f64::INFINITY
    } else {
        smallest_kept / largest_dropped
    };
    let mut singular_values = sigma;
    singular_values.sort_by(|a, b| b.total_cmp(a));
    Nullspace {
        basis,
        singular_values,
        gap,
    }
}

/// Orthogonal projection of `x` onto the real span of a real-orthonormal
/// family, returning the residual norm `‖x − P x‖`.
pub fn real_span_residual(x: &ComplexMatrix, basis: &[ComplexMatrix]) -> f64 {
    let mut r = x.clone();
    for b in basis {
        let c = super::matrix::hs_inner(b, x).expect("matching shapes").re;
        r = &r - &b.scale_real(c);
    }
    r.frobenius_norm()
}

/// Real Gram–Schmidt; drops members whose remainder falls below `drop_tol`.
pub fn real_orthonormalize(family: &[ComplexMatrix], drop_tol: f64) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::new();
    for f in family {
        let mut r = f.clone();
        for _ in 0..2 {
            for b in &out {
                let c = super::matrix::hs_inner(b, &r).expect("matching shapes").re;
                r = &r - &b.scale_real(c);
            }
        }
        let n = r.frobenius_norm();
        if n > drop_tol {
            out.push(r.scale_real(1.0 / n));
        }
    }
    out
}
