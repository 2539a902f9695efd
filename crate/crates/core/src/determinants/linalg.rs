use crate::error::{GapError, Result};
use crate::numerics::Scalar;

/// Row-major square matrix factored in place by Gaussian elimination with
/// partial pivoting. Returns the pivots' product sign-corrected, i.e. the
/// determinant.
pub fn lu_det<S: Scalar>(mut a: Vec<S>, n: usize) -> S {
    assert_eq!(a.len(), n * n, "matrix must be n×n");
    if n == 0 {
        return S::one(64);
    }
    let prec = a[0].precision();
    let mut det = S::one(prec);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                a[r1 * n + col].modulus().partial_cmp(&a[r2 * n + col].modulus()).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        if a[pivot_row * n + col].modulus().is_zero() {
            return S::zero(prec);
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(pivot_row * n + j, col * n + j);
            }
            det = det.neg();
        }
        let pivot = a[col * n + col].clone();
        det = det.mul(&pivot);
        for row in col + 1..n {
            let factor = a[row * n + col].div(&pivot);
            if factor.modulus().is_zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row * n);
            let pivot_row = &upper[col * n..col * n + n];
            for j in col + 1..n {
                lower[j].sub_mul_assign(&factor, &pivot_row[j]);
            }
        }
    }
    det
}

/// Solves `a x = b` by partial-pivoting LU.
pub fn lu_solve<S: Scalar>(mut a: Vec<S>, n: usize, mut b: Vec<S>) -> Result<Vec<S>> {
    assert_eq!(a.len(), n * n, "matrix must be n×n");
    assert_eq!(b.len(), n, "right-hand side must have length n");
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                a[r1 * n + col].modulus().partial_cmp(&a[r2 * n + col].modulus()).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        if a[pivot_row * n + col].modulus().is_zero() {
            return Err(GapError::PrecisionInsufficient(format!("singular system at column {col}")));
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(pivot_row * n + j, col * n + j);
            }
            b.swap(pivot_row, col);
        }
        let pivot = a[col * n + col].clone();
        for row in col + 1..n {
            let factor = a[row * n + col].div(&pivot);
            if factor.modulus().is_zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row * n);
            let pivot_row = &upper[col * n..col * n + n];
            for j in col + 1..n {
                lower[j].sub_mul_assign(&factor, &pivot_row[j]);
            }
            let bc = b[col].clone();
            b[row].sub_mul_assign(&factor, &bc);
        }
    }
    let mut x = b;
    for row in (0..n).rev() {
        let mut acc = x[row].clone();
        for j in row + 1..n {
            acc.sub_mul_assign(&a[row * n + j], &x[j]);
        }
        x[row] = acc.div(&a[row * n + row]);
    }
    Ok(x)
}
