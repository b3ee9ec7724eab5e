//! Small dense linear algebra helpers on top of nalgebra, plus exact
//! rational elimination for structure-constant checks.

use nalgebra::{DMatrix, DVector};
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

/// Relative singular-value threshold for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-9;

struct Svd {
    /// columns are left singular vectors
    u: DMatrix<f64>,
    /// nonincreasing
    s: Vec<f64>,
    /// columns are right singular vectors
    v: DMatrix<f64>,
}

/// Full SVD through faer; nalgebra's iteration loses accuracy on matrices
/// with many repeated singular values.
fn svd(m: &DMatrix<f64>) -> Svd {
    let (r, c) = (m.nrows(), m.ncols());
    let a = faer::Mat::<f64>::from_fn(r, c, |i, j| m[(i, j)]);
    let d = a.svd().expect("svd did not converge");
    let s = d.S().column_vector();
    Svd {
        u: DMatrix::from_fn(r, r, |i, j| d.U()[(i, j)]),
        s: (0..r.min(c)).map(|i| s[i]).collect(),
        v: DMatrix::from_fn(c, c, |i, j| d.V()[(i, j)]),
    }
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let a = faer::Mat::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let mut s = a.singular_values().expect("svd did not converge");
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

fn count_above(s: &[f64]) -> usize {
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > RANK_TOL * top).count(),
        _ => 0,
    }
}

/// Numerical rank with threshold `RANK_TOL * sigma_max`.
pub fn rank(m: &DMatrix<f64>) -> usize {
    count_above(&singular_values(m))
}

/// Orthonormal basis of the kernel, as columns.
pub fn nullspace(m: &DMatrix<f64>) -> DMatrix<f64> {
    let cols = m.ncols();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(cols, cols);
    }
    let d = svd(m);
    let r = count_above(&d.s);
    d.v.columns(r, cols - r).into_owned()
}

/// Moore-Penrose pseudo-inverse with the same rank threshold.
pub fn pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (r, c) = (m.nrows(), m.ncols());
    if r == 0 || c == 0 {
        return DMatrix::zeros(c, r);
    }
    let d = svd(m);
    let k = count_above(&d.s);
    let mut out = DMatrix::zeros(c, r);
    for i in 0..k {
        out += d.v.column(i) * d.u.column(i).transpose() / d.s[i];
    }
    out
}

/// Minimum-norm least-squares solution and the residual norm |Ax - b|.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let x = pinv(a) * b;
    let res = (a * &x - b).norm();
    (x, res)
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Exact rank of a matrix given as a list of columns.
pub fn exact_rank(mut cols: Vec<Vec<BigRational>>) -> usize {
    let ncols = cols.len();
    if ncols == 0 {
        return 0;
    }
    let nrows = cols[0].len();
    let mut rank = 0;
    for r in 0..nrows {
        let Some(piv) = (rank..ncols).find(|&c| !cols[c][r].is_zero()) else {
            continue;
        };
        cols.swap(rank, piv);
        let pivot = cols[rank].clone();
        for c in rank + 1..ncols {
            if cols[c][r].is_zero() {
                continue;
            }
            let f = &cols[c][r] / &pivot[r];
            for k in r..nrows {
                if !pivot[k].is_zero() {
                    let d = &f * &pivot[k];
                    cols[c][k] -= d;
                }
            }
        }
        rank += 1;
        if rank == ncols {
            break;
        }
    }
    rank
}

/// Exact inverse of a small rational matrix, `None` if singular.
pub fn exact_inverse(m: &[Vec<Rational64>]) -> Option<Vec<Vec<Rational64>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational64::one() } else { Rational64::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= f * *y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
