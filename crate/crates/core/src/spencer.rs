//! Spencer differential and codifferential, cohomology dimensions and the
//! harmonic decomposition of torsions.
//!
//! Dense routines act on `OneCochain` / `TwoCochain` values. Rank and kernel
//! computations use a second, independent assembly of the same operators as
//! sparse columns read off the structure constants, split into weight blocks
//! of the diagonal part of g0 (every operator here is g0-equivariant).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::algebra::{Grade, GradedLieAlgebra, Q};
use crate::cochain::{pair_index, pairs, OneCochain, TwoCochain};
use crate::error::{Error, Result};
use crate::linalg;

fn grade(g: i32) -> Result<Grade> {
    Grade::from_value(g).ok_or_else(|| Error::Shape(format!("no graded piece of degree {g}")))
}

/// (d psi)(X, Y) = [psi(X), Y] - [psi(Y), X] for psi of degree 0 or 1.
pub fn spencer_d(alg: &GradedLieAlgebra, psi: &OneCochain) -> Result<TwoCochain> {
    if psi.grade != 0 && psi.grade != 1 {
        return Err(Error::Shape(format!(
            "d is defined on cochains of degree 0 or 1, got {}",
            psi.grade
        )));
    }
    psi.check(alg, psi.grade)?;
    let src = grade(psi.grade)?;
    let dst = grade(psi.grade - 1)?;
    let (n, off_t, off_o) = (alg.n(), alg.offset(src), alg.offset(dst));
    let mut out = TwoCochain::zeros(alg, psi.grade - 1)?;
    for x in 0..n {
        for y in x + 1..n {
            let mut v = vec![0.0; out.m];
            for t in 0..psi.m {
                let (a, b) = (psi.get(x, t), psi.get(y, t));
                if a != 0.0 {
                    for &(w, c) in alg.basis_bracket(off_t + t, y) {
                        v[w - off_o] += a * c;
                    }
                }
                if b != 0.0 {
                    for &(w, c) in alg.basis_bracket(off_t + t, x) {
                        v[w - off_o] -= b * c;
                    }
                }
            }
            for (t, val) in v.into_iter().enumerate() {
                out.set_pair(x, y, t, val);
            }
        }
    }
    Ok(out)
}

/// (d* phi)(X) = sum_i [u_i, phi(e_i, X)] with u_i the dual basis of g1.
pub fn spencer_dstar(alg: &GradedLieAlgebra, phi: &TwoCochain) -> Result<OneCochain> {
    if phi.grade != -1 && phi.grade != 0 {
        return Err(Error::Shape(format!(
            "d* is defined on cochains of degree -1 or 0, got {}",
            phi.grade
        )));
    }
    phi.check(alg, phi.grade)?;
    let src = grade(phi.grade)?;
    let dst = grade(phi.grade + 1)?;
    let (n, off_t, off_o, off_p) = (
        alg.n(),
        alg.offset(src),
        alg.offset(dst),
        alg.offset(Grade::Plus),
    );
    let dual = alg.dual_matrix();
    let mut out = OneCochain::zeros(alg, phi.grade + 1)?;
    for x in 0..n {
        let mut v = vec![0.0; out.m];
        for i in 0..n {
            let w = phi.value(i, x);
            for a in 0..n {
                let ua = dual[(i, a)];
                if ua == 0.0 {
                    continue;
                }
                for (t, &wt) in w.iter().enumerate() {
                    if wt == 0.0 {
                        continue;
                    }
                    for &(s, c) in alg.basis_bracket(off_p + a, off_t + t) {
                        v[s - off_o] += ua * wt * c;
                    }
                }
            }
        }
        out.data[x * out.m..(x + 1) * out.m].copy_from_slice(&v);
    }
    Ok(out)
}

pub fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                v.push((a, b, c));
            }
        }
    }
    v
}

/// d on g0-valued two-cochains: (dK)(X, Y, Z) = [K(X,Y),Z] + [K(Y,Z),X] + [K(Z,X),Y],
/// listed over sorted triples as `out[triple * n + z]`. Its kernel is the
/// first Bianchi identity.
pub fn spencer_d2(alg: &GradedLieAlgebra, k: &TwoCochain) -> Result<Vec<f64>> {
    k.check(alg, 0)?;
    let n = alg.n();
    let off0 = alg.offset(Grade::Zero);
    let tr = triples(n);
    let mut out = vec![0.0; tr.len() * n];
    for (ti, &(a, b, c)) in tr.iter().enumerate() {
        for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
            for (t, &v) in k.value(p, q).iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                for &(w, cc) in alg.basis_bracket(off0 + t, r) {
                    out[ti * n + w] += v * cc;
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Induced g0 actions.

pub(crate) fn ad_of(alg: &GradedLieAlgebra, a: &[f64], from: Grade, to: Grade) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(alg.piece_dim(to), alg.piece_dim(from));
    for (c, &ac) in a.iter().enumerate() {
        if ac != 0.0 {
            m += alg.ad_block(alg.global(Grade::Zero, c), from, to) * ac;
        }
    }
    m
}

/// (A.psi)(X) = [A, psi(X)] - psi([A, X]) for A in g0.
pub fn g0_act_one(alg: &GradedLieAlgebra, a: &[f64], psi: &OneCochain) -> Result<OneCochain> {
    let g = grade(psi.grade)?;
    psi.check(alg, psi.grade)?;
    let ad_t = ad_of(alg, a, g, g);
    let ad_m = ad_of(alg, a, Grade::Minus, Grade::Minus);
    let p = DMatrix::from_row_slice(psi.n, psi.m, &psi.data);
    let r = &p * ad_t.transpose() - ad_m.transpose() * &p;
    OneCochain::from_vec(alg, psi.grade, r.transpose().iter().copied().collect())
}

/// (A.phi)(X, Y) = [A, phi(X,Y)] - phi([A,X], Y) - phi(X, [A,Y]) for A in g0.
pub fn g0_act_two(alg: &GradedLieAlgebra, a: &[f64], phi: &TwoCochain) -> Result<TwoCochain> {
    let g = grade(phi.grade)?;
    phi.check(alg, phi.grade)?;
    let ad_t = ad_of(alg, a, g, g);
    let ad_m = ad_of(alg, a, Grade::Minus, Grade::Minus);
    let (n, m) = (phi.n, phi.m);
    let mut out = TwoCochain::zeros(alg, phi.grade)?;
    for x in 0..n {
        for y in 0..n {
            for t in 0..m {
                let mut v = 0.0;
                for s in 0..m {
                    v += ad_t[(t, s)] * phi.get(x, y, s);
                }
                for z in 0..n {
                    v -= ad_m[(z, x)] * phi.get(z, y, t) + ad_m[(z, y)] * phi.get(x, z, t);
                }
                out.data[(x * n + y) * m + t] = v;
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Sparse weight-blocked assembly.

/// A cochain space: `arity` arguments from g-1 (sorted, distinct) and values
/// in the piece `grade`. Arity 0 is the piece itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Space {
    pub arity: usize,
    pub grade: Grade,
}

impl Space {
    pub const fn new(arity: usize, grade: Grade) -> Self {
        Space { arity, grade }
    }

    fn args(&self, n: usize) -> Vec<Vec<usize>> {
        match self.arity {
            0 => vec![vec![]],
            1 => (0..n).map(|x| vec![x]).collect(),
            2 => pairs(n).into_iter().map(|(x, y)| vec![x, y]).collect(),
            3 => triples(n).into_iter().map(|(a, b, c)| vec![a, b, c]).collect(),
            _ => unimplemented!("cochains of arity above 3"),
        }
    }

    pub fn dim(&self, alg: &GradedLieAlgebra) -> usize {
        self.args(alg.n()).len() * alg.piece_dim(self.grade)
    }

    /// Weight of every basis vector, in the storage order `arg_index * m + t`.
    fn keys(&self, alg: &GradedLieAlgebra) -> Vec<Vec<Q>> {
        let w = alg.weights();
        let m = alg.piece_dim(self.grade);
        let mut out = Vec::with_capacity(self.dim(alg));
        for args in self.args(alg.n()) {
            for t in 0..m {
                let mut k = w[alg.global(self.grade, t)].clone();
                for &x in &args {
                    for (ki, wi) in k.iter_mut().zip(&w[x]) {
                        *ki -= *wi;
                    }
                }
                out.push(k);
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Partition {
    blocks: BTreeMap<Vec<Q>, Vec<usize>>,
    pos: Vec<usize>,
}

impl Partition {
    fn new(keys: Vec<Vec<Q>>) -> Self {
        let mut blocks: BTreeMap<Vec<Q>, Vec<usize>> = BTreeMap::new();
        let mut pos = vec![0; keys.len()];
        for (i, k) in keys.into_iter().enumerate() {
            let b = blocks.entry(k).or_default();
            pos[i] = b.len();
            b.push(i);
        }
        Partition { blocks, pos }
    }
}

/// A linear operator between cochain spaces, stored as dense weight blocks.
/// (source indices, target indices, matrix)
type Block = (Vec<usize>, Vec<usize>, DMatrix<f64>);

#[derive(Clone, Debug)]
pub struct BlockedOperator {
    pub src: Space,
    pub dst: Space,
    src_dim: usize,
    dst_dim: usize,
    /// keyed by weight
    blocks: BTreeMap<Vec<Q>, Block>,
}

impl BlockedOperator {
    fn assemble(
        alg: &GradedLieAlgebra,
        src: Space,
        dst: Space,
        column: impl Fn(usize) -> Vec<(usize, f64)>,
    ) -> Self {
        let sp = Partition::new(src.keys(alg));
        let dp = Partition::new(dst.keys(alg));
        let empty = Vec::new();
        let mut blocks = BTreeMap::new();
        for (key, cols) in &sp.blocks {
            let rows = dp.blocks.get(key).unwrap_or(&empty);
            let mut mat = DMatrix::zeros(rows.len(), cols.len());
            for (j, &c) in cols.iter().enumerate() {
                for (r, v) in column(c) {
                    debug_assert_eq!(rows.get(dp.pos[r]), Some(&r), "operator breaks weights");
                    mat[(dp.pos[r], j)] += v;
                }
            }
            blocks.insert(key.clone(), (cols.clone(), rows.clone(), mat));
        }
        BlockedOperator {
            src,
            dst,
            src_dim: src.dim(alg),
            dst_dim: dst.dim(alg),
            blocks,
        }
    }

    pub fn src_dim(&self) -> usize {
        self.src_dim
    }

    pub fn dst_dim(&self) -> usize {
        self.dst_dim
    }

    pub fn rank(&self) -> usize {
        self.blocks.values().map(|(_, _, m)| linalg::rank(m)).sum()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dst_dim];
        for (cols, rows, m) in self.blocks.values() {
            let x = DVector::from_iterator(cols.len(), cols.iter().map(|&c| v[c]));
            let y = m * x;
            for (r, val) in rows.iter().zip(y.iter()) {
                out[*r] += val;
            }
        }
        out
    }

    /// The full matrix, for small spaces and tests.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dst_dim, self.src_dim);
        for (cols, rows, m) in self.blocks.values() {
            for (j, &c) in cols.iter().enumerate() {
                for (i, &r) in rows.iter().enumerate() {
                    out[(r, c)] = m[(i, j)];
                }
            }
        }
        out
    }

    fn block(&self, key: &[Q]) -> Option<&Block> {
        self.blocks.get(key)
    }
}

/// Sparse d: C^1(g_i) -> C^2(g_{i-1}).
pub fn d_operator(alg: &GradedLieAlgebra, src_grade: Grade) -> BlockedOperator {
    let n = alg.n();
    let dst_grade = Grade::from_value(src_grade.value() - 1).expect("degree 0 or 1");
    let m_src = alg.piece_dim(src_grade);
    let m_dst = alg.piece_dim(dst_grade);
    let (off_s, off_d) = (alg.offset(src_grade), alg.offset(dst_grade));
    BlockedOperator::assemble(
        alg,
        Space::new(1, src_grade),
        Space::new(2, dst_grade),
        |col| {
            let (x, t) = (col / m_src, col % m_src);
            let mut out = Vec::new();
            for y in 0..n {
                if y == x {
                    continue;
                }
                // psi(e_x) = g_t contributes [g_t, e_y] at (x, y) and its negative at (y, x)
                let (p, sign) = if x < y {
                    (pair_index(n, x, y), 1.0)
                } else {
                    (pair_index(n, y, x), -1.0)
                };
                for &(w, c) in alg.basis_bracket(off_s + t, y) {
                    out.push((p * m_dst + (w - off_d), sign * c));
                }
            }
            out
        },
    )
}

/// Sparse d*: C^2(g_j) -> C^1(g_{j+1}).
pub fn dstar_operator(alg: &GradedLieAlgebra, src_grade: Grade) -> BlockedOperator {
    let n = alg.n();
    let dst_grade = Grade::from_value(src_grade.value() + 1).expect("degree -1 or 0");
    let m_src = alg.piece_dim(src_grade);
    let m_dst = alg.piece_dim(dst_grade);
    let (off_s, off_d, off_p) = (
        alg.offset(src_grade),
        alg.offset(dst_grade),
        alg.offset(Grade::Plus),
    );
    let ps = pairs(n);
    let dual = alg.dual_matrix().clone();
    BlockedOperator::assemble(
        alg,
        Space::new(2, src_grade),
        Space::new(1, dst_grade),
        move |col| {
            let (p, t) = (col / m_src, col % m_src);
            let (x, y) = ps[p];
            let mut out = Vec::new();
            // phi(e_x, e_y) = g_t gives d*phi(e_y) = [u_x, g_t], d*phi(e_x) = -[u_y, g_t]
            for (arg, i, sign) in [(y, x, 1.0), (x, y, -1.0)] {
                for a in 0..n {
                    let ua = dual[(i, a)];
                    if ua == 0.0 {
                        continue;
                    }
                    for &(s, c) in alg.basis_bracket(off_p + a, off_s + t) {
                        out.push((arg * m_dst + (s - off_d), sign * ua * c));
                    }
                }
            }
            out
        },
    )
}

/// Sparse d: C^2(g0) -> C^3(g-1) (the Bianchi operator).
pub fn d2_operator(alg: &GradedLieAlgebra) -> BlockedOperator {
    let n = alg.n();
    let n0 = alg.n0();
    let off0 = alg.offset(Grade::Zero);
    let ps = pairs(n);
    let tr = triples(n);
    let tindex: BTreeMap<(usize, usize, usize), usize> =
        tr.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    BlockedOperator::assemble(
        alg,
        Space::new(2, Grade::Zero),
        Space::new(3, Grade::Minus),
        move |col| {
            let (p, t) = (col / n0, col % n0);
            let (x, y) = ps[p];
            let mut out = Vec::new();
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let mut s = [x, y, z];
                s.sort_unstable();
                let (a, b, c) = (s[0], s[1], s[2]);
                // which cyclic slot (a,b), (b,c), (c,a) the pair {x, y} occupies
                let sign = if (x, y) == (a, b) || (x, y) == (b, c) {
                    1.0
                } else {
                    -1.0
                };
                let ti = tindex[&(a, b, c)];
                for &(w, cc) in alg.basis_bracket(off0 + t, z) {
                    out.push((ti * n + w, sign * cc));
                }
            }
            out
        },
    )
}

/// Z -> ad_Z restricted to g-1, from g1 to C^1(g0).
pub fn ad_z_operator(alg: &GradedLieAlgebra) -> BlockedOperator {
    let n = alg.n();
    let n0 = alg.n0();
    let (off0, offp) = (alg.offset(Grade::Zero), alg.offset(Grade::Plus));
    BlockedOperator::assemble(
        alg,
        Space::new(0, Grade::Plus),
        Space::new(1, Grade::Zero),
        |a| {
            let mut out = Vec::new();
            for x in 0..n {
                for &(w, c) in alg.basis_bracket(offp + a, x) {
                    out.push((x * n0 + (w - off0), c));
                }
            }
            out
        },
    )
}

// ---------------------------------------------------------------------------
// Reports.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Level {
    /// d: C^1(g0) -> C^2(g-1)
    H11,
    /// d: C^1(g1) -> C^2(g0)
    H21,
}

impl Level {
    fn grades(self) -> (Grade, Grade) {
        match self {
            Level::H11 => (Grade::Zero, Grade::Minus),
            Level::H21 => (Grade::Plus, Grade::Zero),
        }
    }
}

/// Dimension of H^{1,1} or H^{2,1} by rank-nullity.
pub fn cohomology_dim(alg: &GradedLieAlgebra, level: Level) -> usize {
    let (src, _) = level.grades();
    let d = d_operator(alg, src);
    let ker = d.src_dim() - d.rank();
    match level {
        Level::H11 => ker - ad_z_operator(alg).rank(),
        Level::H21 => ker,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplementarityReport {
    pub level: Level,
    pub dim_total: usize,
    pub dim_im_d: usize,
    pub dim_ker_dstar: usize,
    pub intersection_dim: usize,
    pub complementary: bool,
}

/// im d and ker d* inside C^2: their intersection is im d minus the rank of
/// d* restricted to it, computed blockwise as rank(d) - rank(d* d).
pub fn complementarity_check(alg: &GradedLieAlgebra, level: Level) -> ComplementarityReport {
    let (src, two) = level.grades();
    let d = d_operator(alg, src);
    let ds = dstar_operator(alg, two);
    let mut rank_d = 0;
    let mut rank_ds = 0;
    let mut rank_dsd = 0;
    for (key, (_, _, md)) in &d.blocks {
        rank_d += linalg::rank(md);
        if let Some((_, _, ms)) = ds.block(key) {
            if ms.ncols() > 0 && md.nrows() > 0 {
                rank_dsd += linalg::rank(&(ms * md));
            }
        }
    }
    for (_, _, ms) in ds.blocks.values() {
        rank_ds += linalg::rank(ms);
    }
    let total = ds.src_dim();
    let ker_ds = total - rank_ds;
    let inter = rank_d - rank_dsd;
    ComplementarityReport {
        level,
        dim_total: total,
        dim_im_d: rank_d,
        dim_ker_dstar: ker_ds,
        intersection_dim: inter,
        complementary: inter == 0 && rank_d + ker_ds == total,
    }
}

/// t = harmonic + d psi with d*(harmonic) = 0 and psi of minimal norm.
pub fn harmonic_decompose(
    alg: &GradedLieAlgebra,
    t: &TwoCochain,
) -> Result<(TwoCochain, OneCochain)> {
    t.check(alg, -1)?;
    let d = d_operator(alg, Grade::Zero);
    let ds = dstar_operator(alg, Grade::Minus);
    let tv = t.pair_values();
    let rhs = ds.apply(&tv);
    let mut psi = vec![0.0; d.src_dim()];
    for (key, (cols, _, md)) in &d.blocks {
        let Some((_, rows_s, ms)) = ds.block(key) else {
            continue;
        };
        // d* d maps C^1(g0) to itself; rows of d* in this block are the same
        // coordinates as the columns of d
        debug_assert_eq!(rows_s, cols);
        let a = ms * md;
        let b = DVector::from_iterator(cols.len(), cols.iter().map(|&c| rhs[c]));
        let x = linalg::pinv(&a) * b;
        for (c, v) in cols.iter().zip(x.iter()) {
            psi[*c] = *v;
        }
    }
    let psi = OneCochain::from_vec(alg, 0, psi)?;
    let dpsi = spencer_d(alg, &psi)?;
    Ok((t.sub(&dpsi), psi))
}

/// Orthogonal projection onto the common kernel of operators with a shared
/// source space, computed blockwise.
#[derive(Clone, Debug)]
pub struct KernelProjector {
    dim: usize,
    blocks: Vec<(Vec<usize>, DMatrix<f64>)>,
}

impl KernelProjector {
    pub fn new(ops: &[&BlockedOperator]) -> Self {
        let dim = ops[0].src_dim();
        let mut blocks = Vec::new();
        for (key, (cols, _, _)) in &ops[0].blocks {
            let mats: Vec<&DMatrix<f64>> =
                ops.iter().filter_map(|o| o.block(key).map(|b| &b.2)).collect();
            let rows: usize = mats.iter().map(|m| m.nrows()).sum();
            let mut stacked = DMatrix::zeros(rows, cols.len());
            let mut r = 0;
            for m in mats {
                stacked.rows_mut(r, m.nrows()).copy_from(m);
                r += m.nrows();
            }
            let basis = linalg::nullspace(&stacked);
            if basis.ncols() > 0 {
                blocks.push((cols.clone(), basis));
            }
        }
        KernelProjector { dim, blocks }
    }

    pub fn kernel_dim(&self) -> usize {
        self.blocks.iter().map(|(_, b)| b.ncols()).sum()
    }

    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (cols, basis) in &self.blocks {
            let x = DVector::from_iterator(cols.len(), cols.iter().map(|&c| v[c]));
            let y = basis * (basis.transpose() * x);
            for (c, val) in cols.iter().zip(y.iter()) {
                out[*c] = *val;
            }
        }
        out
    }
}

/// Projector onto g0-valued two-cochains satisfying the Bianchi identity.
pub fn bianchi_projector(alg: &GradedLieAlgebra) -> KernelProjector {
    KernelProjector::new(&[&d2_operator(alg)])
}

/// Projector onto Hodge-harmonic g0-valued two-cochains (Bianchi and d*-closed).
pub fn harmonic_projector(alg: &GradedLieAlgebra) -> KernelProjector {
    KernelProjector::new(&[&d2_operator(alg), &dstar_operator(alg, Grade::Zero)])
}

/// Projector onto d*-closed g-1-valued two-cochains (harmonic torsions).
pub fn torsion_harmonic_projector(alg: &GradedLieAlgebra) -> KernelProjector {
    KernelProjector::new(&[&dstar_operator(alg, Grade::Minus)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, StructureKind};

    fn seq(len: usize, seed: f64) -> Vec<f64> {
        (0..len).map(|i| ((i as f64 + seed) * 0.7).sin()).collect()
    }

    #[test]
    fn dense_and_sparse_d_agree() {
        for kind in [
            StructureKind::Grassmannian { p: 2, q: 2 },
            StructureKind::Spinorial { m: 4 },
            StructureKind::Conformal { m: 3 },
        ] {
            let alg = build_algebra(kind).unwrap();
            for g in [Grade::Zero, Grade::Plus] {
                let psi = OneCochain::from_vec(&alg, g.value(), seq(alg.n() * alg.piece_dim(g), 1.0))
                    .unwrap();
                let dense = spencer_d(&alg, &psi).unwrap().pair_values();
                let sparse = d_operator(&alg, g).apply(&psi.data);
                let err = dense.iter().zip(&sparse).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                assert!(err < 1e-12, "{kind}: {err}");
            }
        }
    }

    #[test]
    fn dense_and_sparse_dstar_agree() {
        let alg = build_algebra(StructureKind::Lagrangian { m: 3 }).unwrap();
        for g in [Grade::Minus, Grade::Zero] {
            let np = alg.n() * (alg.n() - 1) / 2;
            let phi =
                TwoCochain::from_pair_values(&alg, g.value(), &seq(np * alg.piece_dim(g), 2.0))
                    .unwrap();
            let dense = spencer_dstar(&alg, &phi).unwrap().data;
            let sparse = dstar_operator(&alg, g).apply(&phi.pair_values());
            let err = dense.iter().zip(&sparse).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn dense_and_sparse_bianchi_agree() {
        let alg = build_algebra(StructureKind::Grassmannian { p: 1, q: 3 }).unwrap();
        let np = alg.n() * (alg.n() - 1) / 2;
        let k = TwoCochain::from_pair_values(&alg, 0, &seq(np * alg.n0(), 3.0)).unwrap();
        let dense = spencer_d2(&alg, &k).unwrap();
        let sparse = d2_operator(&alg).apply(&k.pair_values());
        let err = dense.iter().zip(&sparse).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-12);
    }

    #[test]
    fn zero_in_zero_out() {
        let alg = build_algebra(StructureKind::Grassmannian { p: 2, q: 2 }).unwrap();
        let psi = OneCochain::zeros(&alg, 0).unwrap();
        assert_eq!(spencer_d(&alg, &psi).unwrap().max_abs(), 0.0);
        let phi = TwoCochain::zeros(&alg, 0).unwrap();
        assert_eq!(spencer_dstar(&alg, &phi).unwrap().max_abs(), 0.0);
        assert!(spencer_d(&alg, &OneCochain::zeros(&alg, -1).unwrap()).is_err());
    }

    #[test]
    fn already_harmonic_is_fixed() {
        let alg = build_algebra(StructureKind::Grassmannian { p: 2, q: 2 }).unwrap();
        let t = TwoCochain::zeros(&alg, -1).unwrap();
        let (h, psi) = harmonic_decompose(&alg, &t).unwrap();
        assert_eq!(h.max_abs(), 0.0);
        assert_eq!(psi.max_abs(), 0.0);
    }
}
