use alloc::vec::Vec;

const PIVOT_TOL: f64 = 1e-12;

/// Solves the dense `n x n` system `a x = b` (row-major `a`) by Gaussian
/// elimination with partial pivoting. Returns `None` when singular.
pub(crate) fn solve(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let (pivot, max) = (col..n)
            .map(|r| (r, libm::fabs(a[r * n + col])))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if max < PIVOT_TOL {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let diag = a[col * n + col];
        for r in col + 1..n {
            let factor = a[r * n + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[r * n + k] -= factor * a[col * n + k];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = alloc::vec![0.0; n];
    for r in (0..n).rev() {
        let tail: f64 = (r + 1..n).map(|k| a[r * n + k] * x[k]).sum();
        x[r] = (b[r] - tail) / a[r * n + r];
    }
    Some(x)
}
