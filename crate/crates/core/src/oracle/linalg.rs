//! Small dense real solves used by the projection steps.

/// Solves the symmetric positive semidefinite system `(G + ridge·I)·w = b` by Gaussian
/// elimination with partial pivoting. `g` is row-major `m×m`.
pub(crate) fn solve_ridge(g: &[f64], b: &[f64], ridge: f64) -> Vec<f64> {
    let m = b.len();
    let mut a = g.to_vec();
    let mut rhs = b.to_vec();
    for i in 0..m {
        a[i * m + i] += ridge;
    }
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&r, &s| a[r * m + col].abs().total_cmp(&a[s * m + col].abs()))
            .unwrap();
        if a[piv * m + col] == 0.0 {
            continue;
        }
        if piv != col {
            for k in 0..m {
                a.swap(col * m + k, piv * m + k);
            }
            rhs.swap(col, piv);
        }
        let d = a[col * m + col];
        for r in (col + 1)..m {
            let f = a[r * m + col] / d;
            if f == 0.0 {
                continue;
            }
            for k in col..m {
                a[r * m + k] -= f * a[col * m + k];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut w = vec![0.0; m];
    for i in (0..m).rev() {
        let d = a[i * m + i];
        if d == 0.0 {
            continue;
        }
        let s: f64 = ((i + 1)..m).map(|k| a[i * m + k] * w[k]).sum();
        w[i] = (rhs[i] - s) / d;
    }
    w
}
