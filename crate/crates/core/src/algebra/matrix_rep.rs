//! Block-matrix realizations used as an independent check of the tables.

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{Grade, GradedLieAlgebra, StructureKind, Q};
use crate::error::{Error, Result};

type Mat = Vec<Vec<Q>>;

fn zeros(s: usize) -> Mat {
    vec![vec![Q::zero(); s]; s]
}

fn unit(s: usize, r: usize, c: usize) -> Mat {
    let mut m = zeros(s);
    m[r][c] = Q::from_integer(1);
    m
}

fn add_scaled(acc: &mut Mat, m: &Mat, c: Q) {
    for (ra, rm) in acc.iter_mut().zip(m) {
        for (a, x) in ra.iter_mut().zip(rm) {
            *a += *x * c;
        }
    }
}

fn commutator(a: &Mat, b: &Mat) -> Mat {
    let s = a.len();
    let mut out = zeros(s);
    for i in 0..s {
        for k in 0..s {
            for j in 0..s {
                out[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
        }
    }
    out
}

/// Matrices of every global basis element in the defining representation.
pub fn realization(alg: &GradedLieAlgebra) -> Vec<Mat> {
    let half = Q::new(1, 2);
    match alg.kind() {
        StructureKind::Grassmannian { p, q } => grassmannian(alg, p, q),
        StructureKind::Projective { q } => grassmannian(alg, 1, q),
        StructureKind::Lagrangian { m } | StructureKind::Spinorial { m } => {
            let symmetric = matches!(alg.kind(), StructureKind::Lagrangian { .. });
            let s = 2 * m;
            let sign = if symmetric { 1 } else { -1 };
            let pairs: Vec<(usize, usize)> = (0..m)
                .flat_map(|k| {
                    let start = if symmetric { k } else { k + 1 };
                    (start..m).map(move |l| (k, l))
                })
                .collect();
            let pair_mat = |k: usize, l: usize| {
                // (E_kl +- E_lk) / 2
                let mut a = vec![vec![Q::zero(); m]; m];
                a[k][l] += half;
                a[l][k] += half * Q::from_integer(sign);
                a
            };
            let mut out = Vec::new();
            for &(k, l) in &pairs {
                let a = pair_mat(k, l);
                let mut b = zeros(s);
                for i in 0..m {
                    for j in 0..m {
                        b[m + i][j] = a[i][j];
                    }
                }
                out.push(b);
            }
            for p in 0..m {
                for w in 0..m {
                    // -E_pw on the first block, E_wp on the second
                    let mut b = zeros(s);
                    b[p][w] = Q::from_integer(-1);
                    b[m + w][m + p] = Q::from_integer(1);
                    out.push(b);
                }
            }
            for &(k, l) in &pairs {
                let a = pair_mat(k, l);
                let mut b = zeros(s);
                for i in 0..m {
                    for j in 0..m {
                        b[i][m + j] = a[i][j];
                    }
                }
                out.push(b);
            }
            out
        }
        StructureKind::Conformal { m } => {
            let s = m + 2;
            let mut out = Vec::new();
            for i in 0..m {
                let mut b = unit(s, 1 + i, 0);
                add_scaled(&mut b, &unit(s, m + 1, 1 + i), Q::from_integer(-1));
                out.push(b);
            }
            let mut e = unit(s, 0, 0);
            add_scaled(&mut e, &unit(s, m + 1, m + 1), Q::from_integer(-1));
            out.push(e);
            for i in 0..m {
                for j in i + 1..m {
                    let mut b = unit(s, 1 + i, 1 + j);
                    add_scaled(&mut b, &unit(s, 1 + j, 1 + i), Q::from_integer(-1));
                    out.push(b);
                }
            }
            for i in 0..m {
                let mut b = unit(s, 0, 1 + i);
                add_scaled(&mut b, &unit(s, 1 + i, m + 1), Q::from_integer(-1));
                out.push(b);
            }
            out
        }
    }
}

fn grassmannian(alg: &GradedLieAlgebra, p: usize, q: usize) -> Vec<Mat> {
    let s = p + q;
    let mut out = Vec::new();
    for a in 0..p {
        for i in 0..q {
            out.push(unit(s, p + i, a));
        }
    }
    // g0 basis: off-diagonal entries in the order of the table, then H_r
    let mut off = Vec::new();
    for r in 0..s {
        for c in 0..s {
            if r != c && ((r < p) == (c < p)) {
                off.push((r, c));
            }
        }
    }
    for &(r, c) in &off {
        out.push(unit(s, r, c));
    }
    for r in 0..s - 1 {
        let mut h = unit(s, r, r);
        add_scaled(&mut h, &unit(s, r + 1, r + 1), Q::from_integer(-1));
        out.push(h);
    }
    debug_assert_eq!(out.len(), alg.n() + alg.n0());
    for a in 0..p {
        for i in 0..q {
            out.push(unit(s, a, p + i));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub kind: String,
    /// Global scalar per graded piece relating table basis and matrices.
    pub scale_minus: String,
    pub scale_zero: String,
    pub scale_plus: String,
    pub max_discrepancy: f64,
    pub pairs_checked: usize,
}

/// Compares the table against matrix commutators after fixing one scalar per
/// graded piece. The scalars on g-1 and g0 are fixed to 1; the scalar on g1 is
/// solved from the first nonzero [g-1, g1] bracket.
pub fn cross_check(alg: &GradedLieAlgebra) -> Result<CrossCheckReport> {
    let mats = realization(alg);
    if mats.len() != alg.dim() {
        return Err(Error::Validation(format!(
            "realization has {} matrices for an algebra of dimension {}",
            mats.len(),
            alg.dim()
        )));
    }
    let size = mats[0].len();
    let expand = |entries: &[(usize, Q)], lambda: &dyn Fn(usize) -> Q| {
        let mut m = zeros(size);
        for &(w, c) in entries {
            add_scaled(&mut m, &mats[w], c * lambda(w));
        }
        m
    };
    // solve for the g1 scalar
    let one = |_: usize| Q::from_integer(1);
    let mut lambda_plus = None;
    'outer: for x in 0..alg.n() {
        for a in 0..alg.n() {
            let f = alg.global(Grade::Plus, a);
            let table = expand(alg.bracket_exact(x, f), &one);
            let comm = commutator(&mats[x], &mats[f]);
            for (rt, rc) in table.iter().zip(&comm) {
                for (t, c) in rt.iter().zip(rc) {
                    if !c.is_zero() {
                        lambda_plus = Some(*t / *c);
                        break 'outer;
                    }
                }
            }
        }
    }
    let lp = lambda_plus.ok_or_else(|| Error::Validation("[g-1, g1] vanishes".into()))?;
    if lp.is_zero() {
        return Err(Error::Validation("g1 scalar is zero".into()));
    }
    let lambda = |u: usize| {
        if alg.grade_of(u) == Grade::Plus {
            lp
        } else {
            Q::from_integer(1)
        }
    };
    let mut max_disc = 0.0f64;
    let mut worst = None;
    let mut pairs = 0;
    for u in 0..alg.dim() {
        for v in u..alg.dim() {
            let mut lhs = commutator(&mats[u], &mats[v]);
            let luv = lambda(u) * lambda(v);
            for row in lhs.iter_mut() {
                for x in row.iter_mut() {
                    *x *= luv;
                }
            }
            let rhs = expand(alg.bracket_exact(u, v), &lambda);
            pairs += 1;
            for (rl, rr) in lhs.iter().zip(&rhs) {
                for (l, r) in rl.iter().zip(rr) {
                    let d = (*l - *r).to_f64().unwrap().abs();
                    if d > max_disc {
                        max_disc = d;
                        worst = Some((u, v));
                    }
                }
            }
        }
    }
    if let Some((u, v)) = worst {
        return Err(Error::Validation(format!(
            "table bracket [{}, {}] disagrees with the matrix commutator by {max_disc}",
            u, v
        )));
    }
    Ok(CrossCheckReport {
        kind: alg.kind().to_string(),
        scale_minus: "1".into(),
        scale_zero: "1".into(),
        scale_plus: lp.to_string(),
        max_discrepancy: max_disc,
        pairs_checked: pairs,
    })
}
