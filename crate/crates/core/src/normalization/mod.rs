//! Curvature traces, the deformation of the curvature by a tensor
//! Gamma: g-1 -> g1, and the normalization kbar0 = k0 - delta k0(Gamma)
//! making the trace of the curvature vanish.

pub mod closed_form;

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::matrix_rep::realization;
use crate::algebra::{Grade, GradedLieAlgebra, StructureKind};
use crate::cochain::{OneCochain, TwoCochain};
use crate::error::{Error, Result};
use crate::linalg;
use crate::spencer::spencer_dstar;

pub const CONVENTION: &str = "kbar = k - delta(k)";

/// Raw curvature R^i_{jkl} of a linear connection on g-1, with
/// R(e_k, e_l) e_j = R^i_{jkl} e_i.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawCurvature {
    pub dim: usize,
    /// `r[((i * dim + j) * dim + k) * dim + l]`
    pub r: Vec<f64>,
}

impl RawCurvature {
    pub fn zeros(dim: usize) -> Self {
        RawCurvature {
            dim,
            r: vec![0.0; dim.pow(4)],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let d = self.dim;
        self.r[((i * d + j) * d + k) * d + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let d = self.dim;
        self.r[((i * d + j) * d + k) * d + l] = v;
    }

    /// Constant curvature R^i_{jkl} = d^i_k d_jl - d^i_l d_jk.
    pub fn constant_curvature(dim: usize) -> Self {
        let mut r = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    r.set(i, j, i, j, 1.0);
                    r.set(i, j, j, i, -1.0);
                }
            }
        }
        r
    }

    /// R_jk = R^l_{jlk}.
    pub fn ricci(&self) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |j, k| (0..d).map(|l| self.get(l, j, l, k)).sum())
    }

    /// R^l_{ljk}.
    pub fn trace_contraction(&self) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |j, k| (0..d).map(|l| self.get(l, l, j, k)).sum())
    }

    pub fn scalar(&self) -> f64 {
        self.ricci().trace()
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut m = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        m = m.max((self.get(i, j, k, l) + self.get(i, j, l, k)).abs());
                    }
                }
            }
        }
        m
    }

    /// Max of |R^i_{jkl} + R^j_{ikl}|, the metric symmetry in an orthonormal basis.
    pub fn metric_defect(&self) -> f64 {
        let d = self.dim;
        let mut m = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        m = m.max((self.get(i, j, k, l) + self.get(j, i, k, l)).abs());
                    }
                }
            }
        }
        m
    }

    /// Max of |R^i_{jkl} + R^i_{klj} + R^i_{ljk}|.
    pub fn bianchi_defect(&self) -> f64 {
        let d = self.dim;
        let mut m = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let s = self.get(i, j, k, l) + self.get(i, k, l, j) + self.get(i, l, j, k);
                        m = m.max(s.abs());
                    }
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureData {
    /// Torsion part, g-1 valued; `None` for torsion-free data.
    pub kappa_minus: Option<TwoCochain>,
    pub kappa0: TwoCochain,
    pub raw: Option<RawCurvature>,
}

/// Gamma: g-1 -> g1 stored through its form
/// `form[(x, y)]` = <Gamma(e_x), e_y>, i.e. Gamma_{(Y)(X)} with Y = e_y, X = e_x.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeformationTensor {
    pub kind: StructureKind,
    #[serde(serialize_with = "serialize_rows")]
    pub form: DMatrix<f64>,
}

/// Rows of a matrix as nested vectors.
pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn serialize_rows<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    matrix_rows(m).serialize(s)
}

impl DeformationTensor {
    pub fn from_cochain(alg: &GradedLieAlgebra, gamma: &OneCochain) -> Result<Self> {
        gamma.check(alg, 1)?;
        let g = DMatrix::from_row_slice(alg.n(), alg.n(), &gamma.data);
        Ok(DeformationTensor {
            kind: alg.kind(),
            form: g * alg.pairing(),
        })
    }

    pub fn to_cochain(&self, alg: &GradedLieAlgebra) -> Result<OneCochain> {
        if self.form.nrows() != alg.n() || self.form.ncols() != alg.n() {
            return Err(Error::Shape(format!(
                "deformation tensor is {}x{}, g-1 has dimension {}",
                self.form.nrows(),
                self.form.ncols(),
                alg.n()
            )));
        }
        let g = &self.form * alg.dual_matrix();
        OneCochain::from_vec(alg, 1, g.transpose().iter().copied().collect())
    }

    /// Gamma_jk for conformal and projective structures.
    pub fn ij(&self, j: usize, k: usize) -> f64 {
        self.form[(k, j)]
    }

    /// Gamma_{^c_l ^a_k}: the e^l_c-component paired from Gamma(e^a_k).
    pub fn grassmannian(&self, c: usize, l: usize, a: usize, k: usize) -> f64 {
        let q = match self.kind.grassmannian_blocks() {
            Some((_, q)) => q,
            None => panic!("not a grassmannian tensor"),
        };
        self.form[(a * q + k, c * q + l)]
    }

    /// Gamma_(pq)(kl) resp. Gamma_[pq][kl] for lagrangian and spinorial structures.
    pub fn pair(&self, p: usize, q: usize, k: usize, l: usize) -> f64 {
        let (m, symmetric) = match self.kind {
            StructureKind::Lagrangian { m } => (m, true),
            StructureKind::Spinorial { m } => (m, false),
            _ => panic!("not a pair tensor"),
        };
        closed_form::pair_entry(&self.form, m, symmetric, (p, q), (k, l))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.form - &other.form).amax()
    }
}

/// (Tr k0)(X, Y) = sum_i <u_i-coefficient of [k0(e_i, X), Y]>, i.e. the
/// evaluation over the first and the last entry. Entry (x, y).
pub fn trace_kappa0(alg: &GradedLieAlgebra, k0: &TwoCochain) -> Result<DMatrix<f64>> {
    k0.check(alg, 0)?;
    let n = alg.n();
    let off0 = alg.offset(Grade::Zero);
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for x in 0..n {
            for (c, &v) in k0.value(i, x).iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                for y in 0..n {
                    for &(w, cc) in alg.basis_bracket(off0 + c, y) {
                        if w == i {
                            out[(x, y)] += v * cc;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Trace within g0: entry (x, z) is the trace of ad(k(e_x, e_z)) on g-1.
pub fn trace_g0(alg: &GradedLieAlgebra, k: &TwoCochain) -> Result<DMatrix<f64>> {
    k.check(alg, 0)?;
    let tr = alg.ad_trace_minus();
    let n = alg.n();
    Ok(DMatrix::from_fn(n, n, |x, z| {
        k.value(x, z).iter().zip(&tr).map(|(a, b)| a * b).sum()
    }))
}

/// Matrix traces of the two diagonal blocks of k(e_x, e_z) in the defining
/// representation of sl(p+q).
pub fn grassmannian_block_traces(
    alg: &GradedLieAlgebra,
    k: &TwoCochain,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (p, _) = alg
        .kind()
        .grassmannian_blocks()
        .ok_or_else(|| Error::Parameter("block traces need a grassmannian grading".into()))?;
    k.check(alg, 0)?;
    let mats = realization(alg);
    let traces: Vec<(f64, f64)> = (0..alg.n0())
        .map(|c| {
            let m = &mats[alg.global(Grade::Zero, c)];
            let t = |r: std::ops::Range<usize>| r.map(|i| m[i][i].to_f64().unwrap()).sum::<f64>();
            (t(0..p), t(p..m.len()))
        })
        .collect();
    let n = alg.n();
    let block = |second: bool| {
        DMatrix::from_fn(n, n, |x, z| {
            k.value(x, z)
                .iter()
                .zip(&traces)
                .map(|(v, (t1, t2))| v * if second { t2 } else { t1 })
                .sum()
        })
    };
    Ok((block(false), block(true)))
}

/// delta k0(Gamma)(X, Y) = [Gamma(X), Y] - [Gamma(Y), X].
pub fn deformation_delta_kappa0(alg: &GradedLieAlgebra, gamma: &OneCochain) -> Result<TwoCochain> {
    gamma.check(alg, 1)?;
    let n = alg.n();
    let (off0, offp) = (alg.offset(Grade::Zero), alg.offset(Grade::Plus));
    let mut out = TwoCochain::zeros(alg, 0)?;
    // [Gamma(e_x), e_y] as g0 coordinates
    let mut gy = vec![vec![vec![0.0; alg.n0()]; n]; n];
    for (x, row) in gy.iter_mut().enumerate() {
        for (a, &g) in gamma.value(x).iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            for (y, cell) in row.iter_mut().enumerate() {
                for &(w, c) in alg.basis_bracket(offp + a, y) {
                    cell[w - off0] += g * c;
                }
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            for t in 0..alg.n0() {
                out.set_pair(x, y, t, gy[x][y][t] - gy[y][x][t]);
            }
        }
    }
    Ok(out)
}

fn scale_of(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        1.0
    }
}

/// Whether d* T vanishes up to `1e-10 * max|T|`.
pub fn torsion_is_harmonic(alg: &GradedLieAlgebra, t: &TwoCochain) -> Result<bool> {
    t.check(alg, -1)?;
    let ds = spencer_dstar(alg, t)?;
    Ok(ds.max_abs() <= 1e-10 * scale_of(t.max_abs()))
}

/// Form of d* k0: entry (x, y) = <(d* k0)(e_x), e_y>.
pub fn dstar_form(alg: &GradedLieAlgebra, k0: &TwoCochain) -> Result<DMatrix<f64>> {
    let ds = spencer_dstar(alg, k0)?;
    Ok(DMatrix::from_row_slice(alg.n(), alg.n(), &ds.data) * alg.pairing())
}

/// R^i_{jkl} = e_i-coefficient of [k0(e_k, e_l), e_j].
pub fn raw_from_kappa0(alg: &GradedLieAlgebra, k0: &TwoCochain) -> Result<RawCurvature> {
    k0.check(alg, 0)?;
    let n = alg.n();
    let off0 = alg.offset(Grade::Zero);
    let mut raw = RawCurvature::zeros(n);
    for k in 0..n {
        for l in 0..n {
            for (c, &v) in k0.value(k, l).iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                for j in 0..n {
                    for &(i, cc) in alg.basis_bracket(off0 + c, j) {
                        let d = raw.get(i, j, k, l) + v * cc;
                        raw.set(i, j, k, l, d);
                    }
                }
            }
        }
    }
    Ok(raw)
}

/// Inverse of `raw_from_kappa0`: each R(e_k, e_l) must lie in ad(g0).
pub fn kappa0_from_raw(alg: &GradedLieAlgebra, raw: &RawCurvature) -> Result<TwoCochain> {
    let n = alg.n();
    if raw.dim != n || raw.r.len() != n.pow(4) {
        return Err(Error::Shape(format!(
            "raw curvature of dimension {} for a {n}-dimensional g-1",
            raw.dim
        )));
    }
    if raw.antisymmetry_defect() > 1e-10 * scale_of(linalg::max_abs(&raw.r)) {
        return Err(Error::Validation("raw curvature is not antisymmetric in k, l".into()));
    }
    // columns: ad(g0 basis) flattened as (i, j) -> coefficient of e_i in [A, e_j]
    let ad = DMatrix::from_fn(n * n, alg.n0(), |ij, c| {
        alg.c(alg.global(Grade::Zero, c), ij % n, ij / n)
    });
    let pinv = linalg::pinv(&ad);
    let mut out = TwoCochain::zeros(alg, 0)?;
    let mut worst = 0.0f64;
    for k in 0..n {
        for l in k + 1..n {
            let b = DVector::from_fn(n * n, |ij, _| raw.get(ij / n, ij % n, k, l));
            let a = &pinv * &b;
            worst = worst.max((&ad * &a - &b).amax());
            for (t, v) in a.iter().enumerate() {
                out.set_pair(k, l, t, *v);
            }
        }
    }
    if worst > 1e-9 * scale_of(linalg::max_abs(&raw.r)) {
        return Err(Error::Validation(format!(
            "raw curvature values do not lie in g0 (residual {worst:e})"
        )));
    }
    Ok(out)
}

/// Assembled linear map Gamma -> Tr(delta k0(Gamma)) and its pseudo-inverse.
#[derive(Clone, Debug)]
pub struct TraceSolver {
    kind: StructureKind,
    n: usize,
    map: DMatrix<f64>,
    pinv: DMatrix<f64>,
    kernel_dim: usize,
}

impl TraceSolver {
    pub fn new(alg: &GradedLieAlgebra) -> Result<Self> {
        let map = crate::testkit::brute_force_trace_map(alg)?;
        let rank = linalg::rank(&map);
        Ok(TraceSolver {
            kind: alg.kind(),
            n: alg.n(),
            pinv: linalg::pinv(&map),
            kernel_dim: map.ncols() - rank,
            map,
        })
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn map(&self) -> &DMatrix<f64> {
        &self.map
    }

    /// Gamma with Tr(delta k0(Gamma)) = `trace`, as a deformation tensor.
    pub fn solve(&self, alg: &GradedLieAlgebra, trace: &DMatrix<f64>) -> Result<DeformationTensor> {
        if self.kernel_dim > 0 {
            return Err(Error::NonUnique {
                kernel_dim: self.kernel_dim,
            });
        }
        let n = self.n;
        let b = DVector::from_iterator(n * n, trace.transpose().iter().copied());
        let x = &self.pinv * &b;
        let res = (&self.map * &x - &b).amax();
        if res > 1e-9 * scale_of(b.amax()) {
            return Err(Error::Validation(format!(
                "trace equation is not solvable (residual {res:e})"
            )));
        }
        let gamma = OneCochain::from_vec(alg, 1, x.iter().copied().collect())?;
        let mut t = DeformationTensor::from_cochain(alg, &gamma)?;
        t.kind = self.kind;
        Ok(t)
    }
}

/// Solves Tr(delta k0(Gamma)) = Tr(k0) by least squares with a residual check.
pub fn oracle_gamma(alg: &GradedLieAlgebra, k0: &TwoCochain) -> Result<DeformationTensor> {
    let solver = TraceSolver::new(alg)?;
    solver.solve(alg, &trace_kappa0(alg, k0)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct UniquenessReport {
    pub kind: String,
    pub kernel_dim_trace: usize,
    pub kernel_dim_combined: usize,
    pub unique: bool,
}

/// Kernel of Gamma -> (Tr delta k0(Gamma), Tr_g0 delta k0(Gamma)).
pub fn uniqueness_certificate(alg: &GradedLieAlgebra) -> Result<UniquenessReport> {
    let n = alg.n();
    let t = crate::testkit::brute_force_trace_map(alg)?;
    let mut combined = DMatrix::zeros(2 * n * n, n * n);
    combined.rows_mut(0, n * n).copy_from(&t);
    for col in 0..n * n {
        let mut g = OneCochain::zeros(alg, 1)?;
        g.data[col] = 1.0;
        let tg = trace_g0(alg, &deformation_delta_kappa0(alg, &g)?)?;
        for (r, v) in tg.transpose().iter().enumerate() {
            combined[(n * n + r, col)] = *v;
        }
    }
    let kt = n * n - linalg::rank(&t);
    let kc = n * n - linalg::rank(&combined);
    Ok(UniquenessReport {
        kind: alg.kind().to_string(),
        kernel_dim_trace: kt,
        kernel_dim_combined: kc,
        unique: kc == 0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberReport {
    /// max |d* k-1|
    pub torsion_dstar: f64,
    /// max |d*(k0 - [tau, k-1]) - d* k0|
    pub residual: f64,
    /// max |d*([tau, k-1]) - [tau, d* k-1]|
    pub interchange_residual: f64,
    pub passed: bool,
}

/// The g0-valued cochain (X, Y) -> [tau, k-1(X, Y)] for tau in g1.
pub fn bracket_with_torsion(
    alg: &GradedLieAlgebra,
    tau: &[f64],
    km1: &TwoCochain,
) -> Result<TwoCochain> {
    km1.check(alg, -1)?;
    if tau.len() != alg.n() {
        return Err(Error::Shape("tau must be an element of g1".into()));
    }
    let n = alg.n();
    let (off0, offp) = (alg.offset(Grade::Zero), alg.offset(Grade::Plus));
    let mut out = TwoCochain::zeros(alg, 0)?;
    for x in 0..n {
        for y in x + 1..n {
            let mut v = vec![0.0; alg.n0()];
            for (a, &ta) in tau.iter().enumerate() {
                for (z, &k) in km1.value(x, y).iter().enumerate() {
                    if ta * k == 0.0 {
                        continue;
                    }
                    for &(w, c) in alg.basis_bracket(offp + a, z) {
                        v[w - off0] += ta * k * c;
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

/// Residuals of the fiber-constancy identity without enforcing anything.
pub fn fiber_constancy_defect(
    alg: &GradedLieAlgebra,
    k0: &TwoCochain,
    km1: &TwoCochain,
    tau: &[f64],
) -> Result<FiberReport> {
    k0.check(alg, 0)?;
    let dkm1 = spencer_dstar(alg, km1)?;
    let shifted = k0.sub(&bracket_with_torsion(alg, tau, km1)?);
    let lhs = spencer_dstar(alg, &shifted)?;
    let rhs = spencer_dstar(alg, k0)?;
    let residual = lhs.sub(&rhs).max_abs();
    // [tau, d* k-1(X)] in g1
    let n = alg.n();
    let (off0, offp) = (alg.offset(Grade::Zero), alg.offset(Grade::Plus));
    let mut bracket = OneCochain::zeros(alg, 1)?;
    for x in 0..n {
        for (a, &ta) in tau.iter().enumerate() {
            for (c, &v) in dkm1.value(x).iter().enumerate() {
                if ta * v == 0.0 {
                    continue;
                }
                for &(w, cc) in alg.basis_bracket(offp + a, off0 + c) {
                    let i = x * n + (w - offp);
                    bracket.data[i] += ta * v * cc;
                }
            }
        }
    }
    let inter = spencer_dstar(alg, &bracket_with_torsion(alg, tau, km1)?)?
        .sub(&bracket)
        .max_abs();
    let scale = scale_of(k0.max_abs().max(km1.max_abs()) * scale_of(linalg::max_abs(tau)));
    let torsion_dstar = dkm1.max_abs();
    Ok(FiberReport {
        torsion_dstar,
        residual,
        interchange_residual: inter,
        passed: residual <= 1e-10 * scale && inter <= 1e-10 * scale,
    })
}

/// Checks that d*(k0 - [tau, k-1]) = d* k0 for a harmonic torsion k-1.
pub fn fiber_constancy_check(
    alg: &GradedLieAlgebra,
    k0: &TwoCochain,
    km1: &TwoCochain,
    tau: &[f64],
) -> Result<FiberReport> {
    if !torsion_is_harmonic(alg, km1)? {
        return Err(Error::Precondition("torsion k-1 is not harmonic".into()));
    }
    let r = fiber_constancy_defect(alg, k0, km1, tau)?;
    if !r.passed {
        return Err(Error::Validation(format!(
            "fiber constancy fails with residual {:e}",
            r.residual
        )));
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizationResult {
    pub gamma: DeformationTensor,
    pub gamma_oracle: DeformationTensor,
    pub method: &'static str,
    pub max_abs_diff: f64,
    pub residual_trace_norm: f64,
    pub convention: &'static str,
}

/// max |Tr(k0 - delta k0(Gamma))|.
pub fn normalized_trace_residual(
    alg: &GradedLieAlgebra,
    k0: &TwoCochain,
    gamma: &DeformationTensor,
) -> Result<f64> {
    let kbar = k0.sub(&deformation_delta_kappa0(alg, &gamma.to_cochain(alg)?)?);
    Ok(trace_kappa0(alg, &kbar)?.amax())
}

/// Closed-form and oracle deformation tensors for one curvature.
pub fn normalize(
    alg: &GradedLieAlgebra,
    solver: &TraceSolver,
    data: &CurvatureData,
) -> Result<NormalizationResult> {
    let k0 = &data.kappa0;
    if !alg.kind().is_normalizable() {
        if solver.kernel_dim() > 0 {
            return Err(Error::NonUnique {
                kernel_dim: solver.kernel_dim(),
            });
        }
        return Err(Error::Degenerate(format!(
            "{} is outside the range of the closed formulas",
            alg.kind()
        )));
    }
    let oracle = solver.solve(alg, &trace_kappa0(alg, k0)?)?;
    let closed = closed_form::closed_form_gamma(alg, k0, data.raw.as_ref())?;
    let residual = normalized_trace_residual(alg, k0, &closed)?;
    Ok(NormalizationResult {
        max_abs_diff: closed.max_abs_diff(&oracle),
        gamma: closed,
        gamma_oracle: oracle,
        method: "closed_form",
        residual_trace_norm: residual,
        convention: CONVENTION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;

    #[test]
    fn zero_inputs() {
        let alg = build_algebra(StructureKind::Lagrangian { m: 2 }).unwrap();
        let k0 = TwoCochain::zeros(&alg, 0).unwrap();
        assert_eq!(trace_kappa0(&alg, &k0).unwrap().amax(), 0.0);
        assert_eq!(trace_g0(&alg, &k0).unwrap().amax(), 0.0);
        let g = OneCochain::zeros(&alg, 1).unwrap();
        assert_eq!(deformation_delta_kappa0(&alg, &g).unwrap().max_abs(), 0.0);
        assert_eq!(oracle_gamma(&alg, &k0).unwrap().form.amax(), 0.0);
        assert!(torsion_is_harmonic(&alg, &TwoCochain::zeros(&alg, -1).unwrap()).unwrap());
    }

    #[test]
    fn constant_curvature_contractions() {
        let r = RawCurvature::constant_curvature(4);
        assert_eq!(r.ricci(), DMatrix::identity(4, 4) * 3.0);
        assert_eq!(r.scalar(), 12.0);
        assert_eq!(r.trace_contraction().amax(), 0.0);
        assert_eq!(r.bianchi_defect(), 0.0);
    }

    #[test]
    fn raw_round_trip() {
        let alg = build_algebra(StructureKind::Projective { q: 3 }).unwrap();
        let r = RawCurvature::constant_curvature(3);
        let k0 = kappa0_from_raw(&alg, &r).unwrap();
        let back = raw_from_kappa0(&alg, &k0).unwrap();
        assert!(linalg::max_abs(&back.r.iter().zip(&r.r).map(|(a, b)| a - b).collect::<Vec<_>>()) < 1e-12);
    }

    #[test]
    fn sl2_is_not_unique() {
        let alg = build_algebra(StructureKind::Grassmannian { p: 1, q: 1 }).unwrap();
        let k0 = TwoCochain::zeros(&alg, 0).unwrap();
        assert!(matches!(
            oracle_gamma(&alg, &k0),
            Err(Error::NonUnique { kernel_dim: 1 })
        ));
    }
}
