//! Algebraic model of the first and second prolongation: change of torsion
//! under a change of frame, the action of B = G0 exp(g1) on torsions, and
//! the structure function of the flat model.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::algebra::{Grade, GradedLieAlgebra};
use crate::cochain::{OneCochain, TwoCochain};
use crate::error::{Error, Result};
use crate::spencer::{ad_of, spencer_d};

const TOL: f64 = 1e-10;

/// t - d psi: the torsion after changing the frame by psi in C^1(g0).
pub fn torsion_change(alg: &GradedLieAlgebra, t: &TwoCochain, psi: &OneCochain) -> Result<TwoCochain> {
    t.check(alg, -1)?;
    psi.check(alg, 0)?;
    Ok(t.sub(&spencer_d(alg, psi)?))
}

/// b = b0 exp(Z) with b0 = exp(A) for A in g0, stored through the matrices
/// of Ad(b0) on each graded piece.
#[derive(Clone, Debug)]
pub struct FrameChange {
    pub ad: [DMatrix<f64>; 3],
    pub z: Vec<f64>,
}

fn piece_index(g: Grade) -> usize {
    (g.value() + 1) as usize
}

impl FrameChange {
    pub fn identity(alg: &GradedLieAlgebra) -> Self {
        FrameChange {
            ad: [Grade::Minus, Grade::Zero, Grade::Plus]
                .map(|g| DMatrix::identity(alg.piece_dim(g), alg.piece_dim(g))),
            z: vec![0.0; alg.n()],
        }
    }

    pub fn new(alg: &GradedLieAlgebra, a: &[f64], z: Vec<f64>) -> Result<Self> {
        if a.len() != alg.n0() || z.len() != alg.n() {
            return Err(Error::Shape(format!(
                "frame change needs A in g0 ({} coordinates) and Z in g1 ({})",
                alg.n0(),
                alg.n()
            )));
        }
        Ok(FrameChange {
            ad: [Grade::Minus, Grade::Zero, Grade::Plus].map(|g| ad_of(alg, a, g, g).exp()),
            z,
        })
    }

    pub fn ad(&self, g: Grade) -> &DMatrix<f64> {
        &self.ad[piece_index(g)]
    }

    pub fn inverse_b0(&self) -> Result<Self> {
        let inv = |m: &DMatrix<f64>| {
            m.clone()
                .try_inverse()
                .ok_or_else(|| Error::Validation("Ad(b0) is singular".into()))
        };
        Ok(FrameChange {
            ad: [inv(&self.ad[0])?, inv(&self.ad[1])?, inv(&self.ad[2])?],
            z: vec![0.0; self.z.len()],
        })
    }

    /// Ad(b0) on a flat coordinate vector of g.
    pub fn apply_b0(&self, alg: &GradedLieAlgebra, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(x.len());
        for g in [Grade::Minus, Grade::Zero, Grade::Plus] {
            let o = alg.offset(g);
            let v = DVector::from_column_slice(&x[o..o + alg.piece_dim(g)]);
            out.extend((self.ad(g) * v).iter());
        }
        out
    }

    /// max |Ad(b0)[u, v] - [Ad(b0) u, Ad(b0) v]| over basis pairs.
    pub fn automorphism_defect(&self, alg: &GradedLieAlgebra) -> f64 {
        let d = alg.dim();
        let basis = |u: usize| {
            let mut e = vec![0.0; d];
            e[u] = 1.0;
            e
        };
        let images: Vec<Vec<f64>> = (0..d).map(|u| self.apply_b0(alg, &basis(u))).collect();
        let mut worst = 0.0f64;
        for u in 0..d {
            for v in u + 1..d {
                let lhs = self.apply_b0(alg, &alg.bracket_flat(&basis(u), &basis(v)));
                let rhs = alg.bracket_flat(&images[u], &images[v]);
                for (a, b) in lhs.iter().zip(&rhs) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
        worst
    }
}

/// Right action of b0 on a two-cochain:
/// (b0.t)(X, Y) = Ad(b0)^-1 t(Ad(b0) X, Ad(b0) Y).
pub fn act_two(alg: &GradedLieAlgebra, fc: &FrameChange, t: &TwoCochain) -> Result<TwoCochain> {
    let g = Grade::from_value(t.grade).ok_or_else(|| Error::Shape("bad degree".into()))?;
    t.check(alg, t.grade)?;
    let inv = fc.inverse_b0()?;
    let (am, at) = (fc.ad(Grade::Minus), inv.ad(g));
    let (n, m) = (t.n, t.m);
    let mut out = TwoCochain::zeros(alg, t.grade)?;
    for x in 0..n {
        for y in x + 1..n {
            let mut v = DVector::zeros(m);
            for a in 0..n {
                for b in 0..n {
                    let c = am[(a, x)] * am[(b, y)];
                    if c != 0.0 {
                        v += DVector::from_column_slice(t.value(a, b)) * c;
                    }
                }
            }
            let w = at * v;
            for (s, val) in w.iter().enumerate() {
                out.set_pair(x, y, s, *val);
            }
        }
    }
    Ok(out)
}

/// Right action of b0 on a one-cochain: (b0.psi)(X) = Ad(b0)^-1 psi(Ad(b0) X).
pub fn act_one(alg: &GradedLieAlgebra, fc: &FrameChange, psi: &OneCochain) -> Result<OneCochain> {
    let g = Grade::from_value(psi.grade).ok_or_else(|| Error::Shape("bad degree".into()))?;
    psi.check(alg, psi.grade)?;
    let inv = fc.inverse_b0()?;
    let p = DMatrix::from_row_slice(psi.n, psi.m, &psi.data);
    // row x of the result: Ad^-1 applied to sum_a am[(a, x)] psi(e_a)
    let r = fc.ad(Grade::Minus).transpose() * p * inv.ad(g).transpose();
    OneCochain::from_vec(alg, psi.grade, r.transpose().iter().copied().collect())
}

/// (X, Y) -> [[Z, X], Y] - [[Z, Y], X], the term exp(Z) would add to the
/// torsion. It vanishes by the Jacobi identity since g-1 is abelian.
pub fn b1_contribution(alg: &GradedLieAlgebra, z: &[f64]) -> Result<TwoCochain> {
    if z.len() != alg.n() {
        return Err(Error::Shape("Z must be an element of g1".into()));
    }
    let n = alg.n();
    let zx: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            let mut e = vec![0.0; alg.dim()];
            e[x] = 1.0;
            let mut ze = vec![0.0; alg.dim()];
            ze[alg.offset(Grade::Plus)..].copy_from_slice(z);
            alg.bracket_flat(&ze, &e)
        })
        .collect();
    let mut out = TwoCochain::zeros(alg, -1)?;
    for x in 0..n {
        for y in x + 1..n {
            let mut ey = vec![0.0; alg.dim()];
            ey[y] = 1.0;
            let mut ex = vec![0.0; alg.dim()];
            ex[x] = 1.0;
            let a = alg.bracket_flat(&zx[x], &ey);
            let b = alg.bracket_flat(&zx[y], &ex);
            for t in 0..n {
                out.set_pair(x, y, t, a[t] - b[t]);
            }
        }
    }
    Ok(out)
}

/// Torsion of the frame changed by b = b0 exp(Z). The exp(Z) part enters as
/// -[A_X, Y'] + [A_Y, X'] with X' = Ad(b0) X and A_X = Ad(b0)[Z, X]; it must
/// cancel, so the result is b0.t.
pub fn torsion_equivariance(alg: &GradedLieAlgebra, t: &TwoCochain, fc: &FrameChange) -> Result<TwoCochain> {
    t.check(alg, -1)?;
    if fc.z.len() != alg.n() {
        return Err(Error::Shape("Z must be an element of g1".into()));
    }
    let n = alg.n();
    let d = alg.dim();
    let mut ze = vec![0.0; d];
    ze[alg.offset(Grade::Plus)..].copy_from_slice(&fc.z);
    let unit = |x: usize| {
        let mut e = vec![0.0; d];
        e[x] = 1.0;
        e
    };
    let xs: Vec<Vec<f64>> = (0..n).map(|x| fc.apply_b0(alg, &unit(x))).collect();
    let ax: Vec<Vec<f64>> = (0..n)
        .map(|x| fc.apply_b0(alg, &alg.bracket_flat(&ze, &unit(x))))
        .collect();
    let mut extra = TwoCochain::zeros(alg, -1)?;
    for x in 0..n {
        for y in x + 1..n {
            let a = alg.bracket_flat(&ax[x], &xs[y]);
            let b = alg.bracket_flat(&ax[y], &xs[x]);
            for s in 0..n {
                extra.set_pair(x, y, s, b[s] - a[s]);
            }
        }
    }
    let scale = crate::linalg::max_abs(&fc.z).max(1.0);
    if extra.max_abs() > TOL * scale {
        return Err(Error::Validation(format!(
            "exp(Z) changes the torsion by {:e}",
            extra.max_abs()
        )));
    }
    // Ad(b0)^-1 (t(X', Y') + extra(X, Y))
    let inv = fc.inverse_b0()?;
    let moved = {
        let mut m = TwoCochain::zeros(alg, -1)?;
        let ai = inv.ad(Grade::Minus);
        for x in 0..n {
            for y in x + 1..n {
                let v = ai * DVector::from_column_slice(extra.value(x, y));
                for (s, val) in v.iter().enumerate() {
                    m.set_pair(x, y, s, *val);
                }
            }
        }
        m
    };
    Ok(act_two(alg, fc, t)?.axpy(1.0, &moved))
}

/// A bilinear map on g with values in the first `out` coordinates of g,
/// `data[(u * dim + v) * out + w]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BilinearMap {
    pub dim: usize,
    pub out: usize,
    pub data: Vec<f64>,
}

impl BilinearMap {
    pub fn zeros(dim: usize, out: usize) -> Self {
        BilinearMap {
            dim,
            out,
            data: vec![0.0; dim * dim * out],
        }
    }

    pub fn get(&self, u: usize, v: usize) -> &[f64] {
        let s = (u * self.dim + v) * self.out;
        &self.data[s..s + self.out]
    }

    pub fn get_mut(&mut self, u: usize, v: usize) -> &mut [f64] {
        let s = (u * self.dim + v) * self.out;
        &mut self.data[s..s + self.out]
    }

    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(&self.data)
    }
}

/// Adds each cochain, evaluated on the g-1 arguments, to the g-1 x g-1 block.
fn add_cochains(alg: &GradedLieAlgebra, map: &mut BilinearMap, kappa: &[&TwoCochain], sign: f64) -> Result<()> {
    for k in kappa {
        let g = Grade::from_value(k.grade).ok_or_else(|| Error::Shape("bad degree".into()))?;
        k.check(alg, k.grade)?;
        let o = alg.offset(g);
        if o + k.m > map.out {
            return Err(Error::Shape(format!("cochain of degree {} does not fit the values", k.grade)));
        }
        for x in 0..alg.n() {
            for y in 0..alg.n() {
                let val = k.value(x, y).to_vec();
                let cell = map.get_mut(x, y);
                for (t, v) in val.into_iter().enumerate() {
                    cell[o + t] += sign * v;
                }
            }
        }
    }
    Ok(())
}

/// S(u, v) = [u, v] + kappa(pr u, pr v) with pr the projection onto g-1.
/// With no cochains this is the structure function of the flat model.
pub fn flat_structure_function(alg: &GradedLieAlgebra, kappa: &[&TwoCochain]) -> Result<BilinearMap> {
    let d = alg.dim();
    let mut s = BilinearMap::zeros(d, d);
    for u in 0..d {
        for v in 0..d {
            let cell = s.get_mut(u, v);
            for &(w, c) in alg.basis_bracket(u, v) {
                cell[w] += c;
            }
        }
    }
    add_cochains(alg, &mut s, kappa, 1.0)?;
    Ok(s)
}

/// max over basis triples of |S(S(u, v), w) + S(S(v, w), u) + S(S(w, u), v)|,
/// the obstruction to d^2 = 0 for the Maurer-Cartan equation built from S.
pub fn closure_residual(alg: &GradedLieAlgebra, s: &BilinearMap) -> Result<f64> {
    let d = alg.dim();
    if s.dim != d || s.out != d {
        return Err(Error::Shape("closure needs a g-valued bilinear map on g".into()));
    }
    let apply = |x: &[f64], w: usize| {
        let mut out = vec![0.0; d];
        for (u, &xu) in x.iter().enumerate() {
            if xu != 0.0 {
                for (o, v) in out.iter_mut().zip(s.get(u, w)) {
                    *o += xu * v;
                }
            }
        }
        out
    };
    let mut worst = 0.0f64;
    for u in 0..d {
        for v in u + 1..d {
            for w in v + 1..d {
                let a = apply(s.get(u, v), w);
                let b = apply(s.get(v, w), u);
                let c = apply(s.get(w, u), v);
                for i in 0..d {
                    worst = worst.max((a[i] + b[i] + c[i]).abs());
                }
            }
        }
    }
    Ok(worst)
}

/// The second-level torsion of a model with curvature kappa, on all of g
/// with values in g-1 + g0: kappa(pr u, pr v) - pr[u, v].
pub fn model_second_torsion(alg: &GradedLieAlgebra, kappa: &[&TwoCochain]) -> Result<BilinearMap> {
    let d = alg.dim();
    let out = alg.n() + alg.n0();
    let mut m = BilinearMap::zeros(d, out);
    for u in 0..d {
        for v in 0..d {
            let cell = m.get_mut(u, v);
            for &(w, c) in alg.basis_bracket(u, v) {
                if w < out {
                    cell[w] -= c;
                }
            }
        }
    }
    add_cochains(alg, &mut m, kappa, 1.0)?;
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct SecondTorsion {
    /// g0 component on g-1 pairs.
    pub kappa0: TwoCochain,
    /// max |full(u, v) - full(pr u, pr v) + pr[u, v]| over basis pairs.
    pub defect: f64,
}

/// Reads off the g0 component and measures how far `full` is from being
/// determined by its restriction to g-1.
pub fn second_torsion_defect(alg: &GradedLieAlgebra, full: &BilinearMap) -> Result<SecondTorsion> {
    let d = alg.dim();
    let (n, n0) = (alg.n(), alg.n0());
    if full.dim != d || full.out != n + n0 {
        return Err(Error::Shape(format!(
            "expected a map on the {d}-dimensional g with values in g-1 + g0 ({})",
            n + n0
        )));
    }
    let mut defect = 0.0f64;
    for u in 0..d {
        for v in 0..d {
            let mut diff: Vec<f64> = full.get(u, v).to_vec();
            if u < n && v < n {
                for (a, b) in diff.iter_mut().zip(full.get(u, v)) {
                    *a -= b;
                }
            }
            for &(w, c) in alg.basis_bracket(u, v) {
                if w < n + n0 {
                    diff[w] += c;
                }
            }
            defect = defect.max(crate::linalg::max_abs(&diff));
        }
    }
    let mut kappa0 = TwoCochain::zeros(alg, 0)?;
    for x in 0..n {
        for y in x + 1..n {
            for t in 0..n0 {
                kappa0.set_pair(x, y, t, full.get(x, y)[n + t]);
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for t in 0..n0 {
                let skew = full.get(x, y)[n + t] + full.get(y, x)[n + t];
                defect = defect.max(skew.abs());
            }
        }
    }
    Ok(SecondTorsion { kappa0, defect })
}

/// The g0 component of a valid second-level torsion.
pub fn second_torsion_reduction(alg: &GradedLieAlgebra, full: &BilinearMap) -> Result<TwoCochain> {
    let r = second_torsion_defect(alg, full)?;
    let scale = full.max_abs().max(1.0);
    if r.defect > TOL * scale {
        return Err(Error::Validation(format!(
            "not determined by its g-1 component (defect {:e})",
            r.defect
        )));
    }
    Ok(r.kappa0)
}
