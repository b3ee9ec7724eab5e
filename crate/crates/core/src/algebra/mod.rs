//! |1|-graded Lie algebras g = g-1 + g0 + g1 with exact structure constants.
//!
//! Basis elements are numbered globally: g-1 occupies `0..n`, g0 occupies
//! `n..n+n0` and g1 occupies `n+n0..2n+n0`.

pub mod kind;
pub mod matrix_rep;
pub(crate) mod tables;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

pub use kind::StructureKind;
pub(crate) use tables::{Q, SVec};

use crate::error::{Error, Result};
use crate::linalg;

/// Which graded piece a basis element or an element lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Grade {
    Minus,
    Zero,
    Plus,
}

impl Grade {
    pub fn value(self) -> i32 {
        match self {
            Grade::Minus => -1,
            Grade::Zero => 0,
            Grade::Plus => 1,
        }
    }

    pub fn from_value(v: i32) -> Option<Grade> {
        match v {
            -1 => Some(Grade::Minus),
            0 => Some(Grade::Zero),
            1 => Some(Grade::Plus),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GradedLieAlgebra {
    kind: StructureKind,
    n: usize,
    n0: usize,
    labels: [Vec<String>; 3],
    table: Vec<SVec>,
    table_f: Vec<Vec<(usize, f64)>>,
    dense: Vec<f64>,
    pairing: DMatrix<f64>,
    dual: DMatrix<f64>,
    weights: Vec<Vec<Q>>,
}

/// An element of g as three coordinate vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradedElement {
    pub minus: Vec<f64>,
    pub zero: Vec<f64>,
    pub plus: Vec<f64>,
}

impl GradedElement {
    pub fn zero(alg: &GradedLieAlgebra) -> Self {
        GradedElement {
            minus: vec![0.0; alg.n],
            zero: vec![0.0; alg.n0],
            plus: vec![0.0; alg.n],
        }
    }

    pub fn basis(alg: &GradedLieAlgebra, u: usize) -> Self {
        let mut flat = vec![0.0; alg.dim()];
        flat[u] = 1.0;
        Self::from_flat(alg, &flat)
    }

    pub fn from_flat(alg: &GradedLieAlgebra, flat: &[f64]) -> Self {
        let (n, n0) = (alg.n, alg.n0);
        GradedElement {
            minus: flat[..n].to_vec(),
            zero: flat[n..n + n0].to_vec(),
            plus: flat[n + n0..].to_vec(),
        }
    }

    pub fn in_piece(alg: &GradedLieAlgebra, grade: Grade, coords: &[f64]) -> Self {
        let mut e = Self::zero(alg);
        match grade {
            Grade::Minus => e.minus.copy_from_slice(coords),
            Grade::Zero => e.zero.copy_from_slice(coords),
            Grade::Plus => e.plus.copy_from_slice(coords),
        }
        e
    }

    pub fn flat(&self) -> Vec<f64> {
        let mut v = self.minus.clone();
        v.extend_from_slice(&self.zero);
        v.extend_from_slice(&self.plus);
        v
    }

    pub fn piece(&self, grade: Grade) -> &[f64] {
        match grade {
            Grade::Minus => &self.minus,
            Grade::Zero => &self.zero,
            Grade::Plus => &self.plus,
        }
    }

    fn check(&self, alg: &GradedLieAlgebra) -> Result<()> {
        if self.minus.len() != alg.n || self.zero.len() != alg.n0 || self.plus.len() != alg.n {
            return Err(Error::Shape(format!(
                "element has component sizes ({}, {}, {}), algebra has ({}, {}, {})",
                self.minus.len(),
                self.zero.len(),
                self.plus.len(),
                alg.n,
                alg.n0,
                alg.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self, scale: f64) -> Self {
        let f = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + scale * y).collect();
        GradedElement {
            minus: f(&self.minus, &other.minus),
            zero: f(&self.zero, &other.zero),
            plus: f(&self.plus, &other.plus),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.flat().iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraDescription {
    pub kind: String,
    pub params: serde_json::Value,
    pub dims: [usize; 3],
    pub labels: [Vec<String>; 3],
    pub nonzero_structure_constants: usize,
}

/// One nonzero structure constant: `[e_i, e_j]` has coefficient `value` at `e_k`.
#[derive(Clone, Debug, Serialize)]
pub struct Triple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: String,
}

pub fn build_algebra(kind: StructureKind) -> Result<GradedLieAlgebra> {
    kind.validate()?;
    let t = tables::table_for(kind);
    GradedLieAlgebra::from_table(kind, t.n, t.n0, t.labels, t.brackets, t.pairing)
}

impl GradedLieAlgebra {
    fn from_table(
        kind: StructureKind,
        n: usize,
        n0: usize,
        labels: [Vec<String>; 3],
        table: Vec<SVec>,
        pairing_exact: Vec<Vec<Q>>,
    ) -> Result<Self> {
        let big_n = 2 * n + n0;
        let mut dense = vec![0.0; big_n * big_n * big_n];
        for (uv, entries) in table.iter().enumerate() {
            for &(w, c) in entries {
                dense[uv * big_n + w] = c.to_f64().unwrap_or(f64::NAN);
            }
        }
        let table_f = table
            .iter()
            .map(|e| e.iter().map(|&(w, c)| (w, c.to_f64().unwrap())).collect())
            .collect();
        let pairing = DMatrix::from_fn(n, n, |a, x| pairing_exact[a][x].to_f64().unwrap());
        let inv = linalg::exact_inverse(&pairing_exact)
            .ok_or_else(|| Error::Validation("duality pairing is singular".into()))?;
        let dual = DMatrix::from_fn(n, n, |i, a| inv[i][a].to_f64().unwrap());
        let mut alg = GradedLieAlgebra {
            kind,
            n,
            n0,
            labels,
            table,
            table_f,
            dense,
            pairing,
            dual,
            weights: Vec::new(),
        };
        alg.weights = alg.compute_weights();
        Ok(alg)
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    /// dim g-1 (= dim g1).
    pub fn n(&self) -> usize {
        self.n
    }

    /// dim g0.
    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn dim(&self) -> usize {
        2 * self.n + self.n0
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.n, self.n0, self.n]
    }

    pub fn piece_dim(&self, grade: Grade) -> usize {
        match grade {
            Grade::Zero => self.n0,
            _ => self.n,
        }
    }

    /// Global index of the `i`-th basis element of a graded piece.
    pub fn global(&self, grade: Grade, i: usize) -> usize {
        match grade {
            Grade::Minus => i,
            Grade::Zero => self.n + i,
            Grade::Plus => self.n + self.n0 + i,
        }
    }

    pub fn grade_of(&self, u: usize) -> Grade {
        if u < self.n {
            Grade::Minus
        } else if u < self.n + self.n0 {
            Grade::Zero
        } else {
            Grade::Plus
        }
    }

    pub fn offset(&self, grade: Grade) -> usize {
        self.global(grade, 0)
    }

    pub fn labels(&self, grade: Grade) -> &[String] {
        match grade {
            Grade::Minus => &self.labels[0],
            Grade::Zero => &self.labels[1],
            Grade::Plus => &self.labels[2],
        }
    }

    /// Exact bracket of two global basis elements.
    pub(crate) fn bracket_exact(&self, u: usize, v: usize) -> &SVec {
        &self.table[u * self.dim() + v]
    }

    /// Coefficient of `e_w` in `[e_u, e_v]`.
    #[inline]
    pub fn c(&self, u: usize, v: usize, w: usize) -> f64 {
        let d = self.dim();
        self.dense[(u * d + v) * d + w]
    }

    /// Sparse floating-point bracket of two basis elements.
    #[inline]
    pub fn basis_bracket(&self, u: usize, v: usize) -> &[(usize, f64)] {
        &self.table_f[u * self.dim() + v]
    }

    /// `pairing()[(a, x)]` = <f_a, e_x> for f_a in g1 and e_x in g-1.
    pub fn pairing(&self) -> &DMatrix<f64> {
        &self.pairing
    }

    /// Rows are the g1 coordinates of the dual basis u_i with <u_i, e_x> = d_ix.
    pub fn dual_matrix(&self) -> &DMatrix<f64> {
        &self.dual
    }

    /// Weight of each global basis element under the diagonal part of g0.
    pub(crate) fn weights(&self) -> &[Vec<Q>] {
        &self.weights
    }

    fn compute_weights(&self) -> Vec<Vec<Q>> {
        let torus: Vec<usize> = (0..self.n0)
            .map(|c| self.global(Grade::Zero, c))
            .filter(|&h| {
                (0..self.dim()).all(|b| self.bracket_exact(h, b).iter().all(|&(w, _)| w == b))
            })
            .collect();
        (0..self.dim())
            .map(|b| {
                torus
                    .iter()
                    .map(|&h| {
                        self.bracket_exact(h, b)
                            .first()
                            .map_or(Q::zero(), |&(_, c)| c)
                    })
                    .collect()
            })
            .collect()
    }

    fn check_element(&self, x: &GradedElement) -> Result<()> {
        x.check(self)
    }

    pub fn bracket(&self, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(GradedElement::from_flat(
            self,
            &self.bracket_flat(&x.flat(), &y.flat()),
        ))
    }

    pub fn bracket_flat(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d];
        for (u, &xu) in x.iter().enumerate() {
            if xu == 0.0 {
                continue;
            }
            for (v, &yv) in y.iter().enumerate() {
                if yv == 0.0 {
                    continue;
                }
                for &(w, c) in self.basis_bracket(u, v) {
                    out[w] += xu * yv * c;
                }
            }
        }
        out
    }

    /// Dual basis of g1: for each g-1 basis index, the g1 coordinates of its dual.
    pub fn dual_basis(&self) -> Vec<(usize, Vec<f64>)> {
        (0..self.n)
            .map(|i| (i, self.dual.row(i).iter().copied().collect()))
            .collect()
    }

    /// Ad(exp Z) x = x + [Z, x] + 1/2 [Z, [Z, x]] for Z in g1.
    pub fn ad_exp(&self, z: &[f64], x: &GradedElement) -> Result<GradedElement> {
        if z.len() != self.n {
            return Err(Error::Shape(format!(
                "Z has {} coordinates, g1 has dimension {}",
                z.len(),
                self.n
            )));
        }
        let ze = GradedElement::in_piece(self, Grade::Plus, z);
        let zx = self.bracket(&ze, x)?;
        let zzx = self.bracket(&ze, &zx)?;
        Ok(x.add(&zx, 1.0).add(&zzx, 0.5))
    }

    /// The matrix of ad(e_u) restricted to `from` with values in `to`:
    /// entry (w, v) is the coefficient of `to_w` in `[e_u, from_v]`.
    pub fn ad_block(&self, u: usize, from: Grade, to: Grade) -> DMatrix<f64> {
        let (fo, to_o) = (self.offset(from), self.offset(to));
        DMatrix::from_fn(self.piece_dim(to), self.piece_dim(from), |w, v| {
            self.c(u, fo + v, to_o + w)
        })
    }

    /// Trace of ad(A) on g-1 for each g0 basis element A.
    pub fn ad_trace_minus(&self) -> Vec<f64> {
        (0..self.n0)
            .map(|c| {
                let u = self.global(Grade::Zero, c);
                (0..self.n).map(|z| self.c(u, z, z)).sum()
            })
            .collect()
    }

    // -----------------------------------------------------------------------
    // Exact invariant checks.

    /// Exact antisymmetry and grading of the table; returns the first offending pair.
    pub fn check_antisymmetry_and_grading(&self) -> std::result::Result<(), (usize, usize)> {
        let d = self.dim();
        for u in 0..d {
            for v in 0..d {
                let uv = self.bracket_exact(u, v);
                let vu = self.bracket_exact(v, u);
                let neg: SVec = vu.iter().map(|&(w, c)| (w, -c)).collect();
                if *uv != neg {
                    return Err((u, v));
                }
                let target = self.grade_of(u).value() + self.grade_of(v).value();
                let ok = match Grade::from_value(target) {
                    Some(g) => uv.iter().all(|&(w, _)| self.grade_of(w) == g),
                    None => uv.is_empty(),
                };
                if !ok {
                    return Err((u, v));
                }
            }
        }
        Ok(())
    }

    /// Exact Jacobi check over all basis triples; returns the offending triples.
    pub fn jacobi_violations(&self, limit: usize) -> Vec<(usize, usize, usize)> {
        let d = self.dim();
        let mut out = Vec::new();
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for u in 0..d {
            for v in u + 1..d {
                for w in v + 1..d {
                    acc.clear();
                    for (a, b, c) in [(u, v, w), (v, w, u), (w, u, v)] {
                        for &(k, x) in self.bracket_exact(a, b) {
                            for &(l, y) in self.bracket_exact(k, c) {
                                *acc.entry(l).or_insert_with(Q::zero) += x * y;
                            }
                        }
                    }
                    if acc.values().any(|x| !x.is_zero()) {
                        out.push((u, v, w));
                        if out.len() >= limit {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }

    fn exact_rank_of(&self, cols: Vec<Vec<(usize, Q)>>, rows: usize) -> usize {
        let m: Vec<Vec<BigRational>> = cols
            .iter()
            .map(|col| {
                let mut dense = vec![BigRational::zero(); rows];
                for &(r, c) in col {
                    dense[r] += BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()));
                }
                dense
            })
            .collect();
        linalg::exact_rank(m)
    }

    /// Dimension of the center of g0, by exact rank.
    pub fn center_dim(&self) -> usize {
        let n0 = self.n0;
        let cols: Vec<Vec<(usize, Q)>> = (0..n0)
            .map(|c| {
                let u = self.global(Grade::Zero, c);
                (0..n0)
                    .flat_map(|b| {
                        let v = self.global(Grade::Zero, b);
                        self.bracket_exact(u, v)
                            .iter()
                            .map(move |&(w, x)| (b * n0 + (w - self.n), x))
                            .collect::<Vec<_>>()
                    })
                    .collect()
            })
            .collect();
        n0 - self.exact_rank_of(cols, n0 * n0)
    }

    /// Rank of A -> ad(A)|g-1 (equal to n0 when the action is faithful).
    pub fn g0_action_rank(&self) -> usize {
        let n = self.n;
        let cols: Vec<Vec<(usize, Q)>> = (0..self.n0)
            .map(|c| {
                let u = self.global(Grade::Zero, c);
                (0..n)
                    .flat_map(|x| {
                        self.bracket_exact(u, x)
                            .iter()
                            .map(move |&(w, v)| (x * n + w, v))
                            .collect::<Vec<_>>()
                    })
                    .collect()
            })
            .collect();
        self.exact_rank_of(cols, n * n)
    }

    /// Rank of Z -> ad(Z)|g-1 from g1 to Hom(g-1, g0) (equal to n when injective).
    pub fn g1_action_rank(&self) -> usize {
        let (n, n0) = (self.n, self.n0);
        let cols: Vec<Vec<(usize, Q)>> = (0..n)
            .map(|a| {
                let u = self.global(Grade::Plus, a);
                (0..n)
                    .flat_map(|x| {
                        self.bracket_exact(u, x)
                            .iter()
                            .map(move |&(w, v)| (x * n0 + (w - n), v))
                            .collect::<Vec<_>>()
                    })
                    .collect()
            })
            .collect();
        self.exact_rank_of(cols, n * n0)
    }

    // -----------------------------------------------------------------------
    // Reporting.

    pub fn describe(&self) -> AlgebraDescription {
        AlgebraDescription {
            kind: self.kind.name().to_string(),
            params: self.kind.params(),
            dims: self.dims(),
            labels: self.labels.clone(),
            nonzero_structure_constants: self.table.iter().map(Vec::len).sum(),
        }
    }

    pub fn sparse_triples(&self) -> Vec<Triple> {
        let d = self.dim();
        let mut out = Vec::new();
        for u in 0..d {
            for v in 0..d {
                for &(w, c) in self.bracket_exact(u, v) {
                    out.push(Triple {
                        i: u,
                        j: v,
                        k: w,
                        value: c.to_string(),
                    });
                }
            }
        }
        out
    }

    /// A copy with the sign of one structure constant flipped in both
    /// `[e_u, e_v]` and `[e_v, e_u]`: the first nonzero coefficient of the
    /// bracket between the first g-1 and g1 basis elements. Used to test
    /// that the invariant checks catch corrupted tables.
    pub fn with_flipped_constant(&self) -> GradedLieAlgebra {
        let mut alg = self.clone();
        let d = self.dim();
        let (u, v) = (0, self.global(Grade::Plus, 0));
        for (a, b) in [(u, v), (v, u)] {
            if let Some(first) = alg.table[a * d + b].first_mut() {
                first.1 = -first.1;
                alg.table_f[a * d + b][0].1 *= -1.0;
                alg.dense[(a * d + b) * d + first.0] *= -1.0;
            }
        }
        alg
    }
}
