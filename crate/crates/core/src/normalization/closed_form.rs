//! Explicit deformation tensors for the five structures.
//!
//! All functions take and return forms in the layout of
//! [`DeformationTensor`]: entry (x, y) pairs the value on the x-th basis
//! vector of g-1 with the y-th one. Traces use the same layout, entry (x, y)
//! being Tr(e_x, e_y).
//!
//! The Lagrangian, spinorial and projective formulas come in two versions.
//! The `*_printed` ones are the classical combinations, which only invert the
//! trace change on tensors symmetric under exchange of the two argument pairs
//! (symmetric Ricci curvature). The unsuffixed ones also treat the skew part,
//! on which the trace change acts as a scalar.

use nalgebra::DMatrix;

use super::{grassmannian_block_traces, raw_from_kappa0, trace_kappa0, DeformationTensor, RawCurvature};
use crate::algebra::{GradedLieAlgebra, StructureKind};
use crate::cochain::TwoCochain;
use crate::error::{Error, Result};

fn degenerate(what: &str) -> Error {
    Error::Degenerate(what.to_string())
}

fn check_square(m: &DMatrix<f64>, n: usize, what: &str) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::Shape(format!(
            "{what} must be {n}x{n}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn skew(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m - m.transpose()) * 0.5
}

fn conformal_check(m: usize, ricci: &DMatrix<f64>) -> Result<()> {
    if m < 3 {
        return Err(degenerate("conformal formula needs m >= 3"));
    }
    check_square(ricci, m, "Ricci tensor")
}

fn conformal_tensor(m: usize, g: DMatrix<f64>) -> DeformationTensor {
    DeformationTensor {
        kind: StructureKind::Conformal { m },
        form: g.transpose(),
    }
}

/// Conformal, classical form Gamma_ij = -1/(m-2) (R_ij - d_ij R / (2(m-1))).
pub fn gamma_conformal_printed(m: usize, ricci: &DMatrix<f64>, scalar: f64) -> Result<DeformationTensor> {
    conformal_check(m, ricci)?;
    let mf = m as f64;
    let g = (ricci - DMatrix::identity(m, m) * (scalar / (2.0 * (mf - 1.0)))) * (-1.0 / (mf - 2.0));
    Ok(conformal_tensor(m, g))
}

/// Conformal: the classical form on the symmetric part of the Ricci tensor,
/// -1/m times its skew part.
pub fn gamma_conformal(m: usize, ricci: &DMatrix<f64>, scalar: f64) -> Result<DeformationTensor> {
    conformal_check(m, ricci)?;
    let mut t = gamma_conformal_printed(m, &sym(ricci), scalar)?;
    t.form -= skew(ricci).transpose() / m as f64;
    Ok(t)
}

/// Grassmannian: with s = p + q and Gamma_{^c_l ^a_k} at entry (a k, c l),
/// Gamma = -1/(4 - s^2) (s Tr(R) + 2 Tr(R) with a, c exchanged
///                       + s Tr_g0(R_2) with a, c exchanged + 2 Tr_g0(R_2)),
/// where `tr_g0_2` is the matrix trace of the gl(q) block of the curvature.
pub fn gamma_grassmannian(
    p: usize,
    q: usize,
    trr: &DMatrix<f64>,
    tr_g0_2: &DMatrix<f64>,
) -> Result<DeformationTensor> {
    if p < 1 || q < p {
        return Err(Error::Parameter(format!("grassmannian needs q >= p >= 1, got ({p}, {q})")));
    }
    if p + q < 3 {
        return Err(degenerate("grassmannian formula needs p + q >= 3"));
    }
    let n = p * q;
    check_square(trr, n, "trace of the curvature")?;
    check_square(tr_g0_2, n, "block trace")?;
    let s = (p + q) as f64;
    let c = -1.0 / (4.0 - s * s);
    let idx = |a: usize, k: usize| a * q + k;
    let mut g = DMatrix::zeros(n, n);
    for a in 0..p {
        for k in 0..q {
            for cc in 0..p {
                for l in 0..q {
                    let (x, y) = (idx(a, k), idx(cc, l));
                    let (xs, ys) = (idx(cc, k), idx(a, l));
                    g[(x, y)] = c
                        * (s * trr[(x, y)]
                            + 2.0 * trr[(xs, ys)]
                            + s * tr_g0_2[(xs, ys)]
                            + 2.0 * tr_g0_2[(x, y)]);
                }
            }
        }
    }
    Ok(DeformationTensor {
        kind: StructureKind::Grassmannian { p, q },
        form: g,
    })
}

fn projective_common(q: usize, raw: &RawCurvature) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if q < 2 {
        return Err(degenerate("projective formula needs q > 1"));
    }
    if raw.dim != q {
        return Err(Error::Shape(format!("raw curvature of dimension {} for q = {q}", raw.dim)));
    }
    Ok((raw.ricci(), raw.trace_contraction()))
}

/// Projective: Gamma_jk = (R^l_{jlk} - R^l_{ljk} / (q+1)) / (q-1), i.e. the
/// symmetric part of the Ricci tensor over q-1 plus its skew part over q+1.
pub fn gamma_projective(q: usize, raw: &RawCurvature) -> Result<DeformationTensor> {
    let (ric, tr) = projective_common(q, raw)?;
    let qf = q as f64;
    let g = (ric - tr / (qf + 1.0)) / (qf - 1.0);
    Ok(DeformationTensor {
        kind: StructureKind::Projective { q },
        form: g.transpose(),
    })
}

/// Projective, classical form Gamma_jk = (R^l_{jlk} + R^l_{ljk}) / (q-1).
pub fn gamma_projective_printed(q: usize, raw: &RawCurvature) -> Result<DeformationTensor> {
    let (ric, tr) = projective_common(q, raw)?;
    let g = (ric + tr) / (q as f64 - 1.0);
    Ok(DeformationTensor {
        kind: StructureKind::Projective { q },
        form: g.transpose(),
    })
}

/// Pair layout shared by the Lagrangian and spinorial forms.
pub(crate) struct Pairs {
    m: usize,
    symmetric: bool,
}

impl Pairs {
    fn new(m: usize, symmetric: bool) -> Self {
        Pairs { m, symmetric }
    }

    fn count(&self) -> usize {
        if self.symmetric {
            self.m * (self.m + 1) / 2
        } else {
            self.m * (self.m - 1) / 2
        }
    }

    /// Index and sign of the pair (k, l) in the basis.
    fn index(&self, k: usize, l: usize) -> Option<(usize, f64)> {
        let m = self.m;
        let (a, b, s) = if k <= l { (k, l, 1.0) } else { (l, k, if self.symmetric { 1.0 } else { -1.0 }) };
        if self.symmetric {
            Some((a * (2 * m - a + 1) / 2 + (b - a), s))
        } else if a == b {
            None
        } else {
            Some((a * (2 * m - a - 1) / 2 + (b - a - 1), s))
        }
    }

    fn list(&self) -> Vec<(usize, usize)> {
        let m = self.m;
        (0..m)
            .flat_map(|k| {
                let start = if self.symmetric { k } else { k + 1 };
                (start..m).map(move |l| (k, l))
            })
            .collect()
    }

    /// F_(pq)(kl) = F[(kl), (pq)], with signs for antisymmetric pairs.
    fn get(&self, f: &DMatrix<f64>, pq: (usize, usize), kl: (usize, usize)) -> f64 {
        match (self.index(kl.0, kl.1), self.index(pq.0, pq.1)) {
            (Some((x, sx)), Some((y, sy))) => sx * sy * f[(x, y)],
            _ => 0.0,
        }
    }

    /// Builds a form from its values on basis pairs.
    fn build(&self, entry: impl Fn((usize, usize), (usize, usize)) -> f64) -> DMatrix<f64> {
        let list = self.list();
        let n = list.len();
        DMatrix::from_fn(n, n, |x, y| entry(list[y], list[x]))
    }
}

pub(crate) fn pair_entry(
    f: &DMatrix<f64>,
    m: usize,
    symmetric: bool,
    pq: (usize, usize),
    kl: (usize, usize),
) -> f64 {
    Pairs::new(m, symmetric).get(f, pq, kl)
}

fn lagrangian_check(m: usize, trr: &DMatrix<f64>) -> Result<Pairs> {
    if m < 2 {
        return Err(degenerate("lagrangian formula needs m(m+1) != 2"));
    }
    let pairs = Pairs::new(m, true);
    check_square(trr, pairs.count(), "trace of the curvature")?;
    Ok(pairs)
}

fn spinorial_check(m: usize, trr: &DMatrix<f64>) -> Result<Pairs> {
    if m < 3 {
        return Err(degenerate("spinorial formula needs m(m-1) != 2"));
    }
    let pairs = Pairs::new(m, false);
    check_square(trr, pairs.count(), "trace of the curvature")?;
    Ok(pairs)
}

/// Gamma_(pq)(kl) = (m T_(pq)(kl) + T_(pk)(ql) + T_(pl)(qk)) / (m(m+1) - 2).
pub fn gamma_lagrangian_printed(m: usize, trr: &DMatrix<f64>) -> Result<DeformationTensor> {
    let pairs = lagrangian_check(m, trr)?;
    let mf = m as f64;
    let c = 1.0 / (mf * (mf + 1.0) - 2.0);
    let form = pairs.build(|(p, q), (k, l)| {
        c * (mf * pairs.get(trr, (p, q), (k, l))
            + pairs.get(trr, (p, k), (q, l))
            + pairs.get(trr, (p, l), (q, k)))
    });
    Ok(DeformationTensor {
        kind: StructureKind::Lagrangian { m },
        form,
    })
}

/// The classical combination on the pair-symmetric part of the trace, the
/// pair-skew part divided by m+1.
pub fn gamma_lagrangian(m: usize, trr: &DMatrix<f64>) -> Result<DeformationTensor> {
    lagrangian_check(m, trr)?;
    let mut t = gamma_lagrangian_printed(m, &sym(trr))?;
    t.form += skew(trr) / (m as f64 + 1.0);
    Ok(t)
}

/// Gamma_[pq][kl] = (m T_[pq][kl] + T_[pk][ql] - T_[pl][qk]) / (m(m-1) - 2).
pub fn gamma_spinorial_printed(m: usize, trr: &DMatrix<f64>) -> Result<DeformationTensor> {
    let pairs = spinorial_check(m, trr)?;
    let mf = m as f64;
    let c = 1.0 / (mf * (mf - 1.0) - 2.0);
    let form = pairs.build(|(p, q), (k, l)| {
        c * (mf * pairs.get(trr, (p, q), (k, l)) + pairs.get(trr, (p, k), (q, l))
            - pairs.get(trr, (p, l), (q, k)))
    });
    Ok(DeformationTensor {
        kind: StructureKind::Spinorial { m },
        form,
    })
}

/// The classical combination on the pair-symmetric part, the pair-skew part
/// divided by m-1.
pub fn gamma_spinorial(m: usize, trr: &DMatrix<f64>) -> Result<DeformationTensor> {
    spinorial_check(m, trr)?;
    let mut t = gamma_spinorial_printed(m, &sym(trr))?;
    t.form += skew(trr) / (m as f64 - 1.0);
    Ok(t)
}

/// A four-index array `t[((p * m + q) * m + k) * m + l]` = T_(pq)(kl),
/// without any symmetry between or within the pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct PairTensor {
    pub m: usize,
    pub t: Vec<f64>,
}

impl PairTensor {
    fn from_fn(m: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Vec::with_capacity(m.pow(4));
        for p in 0..m {
            for q in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        t.push(f(p, q, k, l));
                    }
                }
            }
        }
        PairTensor { m, t }
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, k: usize, l: usize) -> f64 {
        let m = self.m;
        self.t[((p * m + q) * m + k) * m + l]
    }

    /// Entries of a form in the pair basis, signed for antisymmetric pairs.
    pub fn from_form(m: usize, symmetric: bool, form: &DMatrix<f64>) -> Self {
        let pairs = Pairs::new(m, symmetric);
        Self::from_fn(m, |p, q, k, l| pairs.get(form, (p, q), (k, l)))
    }

    /// Back to a form, reading the sorted representative of each pair.
    pub fn to_form(&self, symmetric: bool) -> DMatrix<f64> {
        Pairs::new(self.m, symmetric).build(|(p, q), (k, l)| self.get(p, q, k, l))
    }

    pub fn scale(&self, c: f64) -> Self {
        PairTensor {
            m: self.m,
            t: self.t.iter().map(|v| v * c).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.t
            .iter()
            .zip(&other.t)
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()))
    }
}

/// Formal trace change of the Lagrangian deformation:
/// F_(pq)(kl) = Gamma_(kp)(ql) + Gamma_(lp)(qk) - (m+1) Gamma_(pq)(kl).
pub fn lagrangian_trace_change(g: &PairTensor) -> PairTensor {
    let mf = g.m as f64;
    PairTensor::from_fn(g.m, |p, q, k, l| {
        g.get(k, p, q, l) + g.get(l, p, q, k) - (mf + 1.0) * g.get(p, q, k, l)
    })
}

/// m F_(pq)(kl) + F_(pk)(ql) + F_(pl)(qk).
pub fn lagrangian_combination(f: &PairTensor) -> PairTensor {
    let mf = f.m as f64;
    PairTensor::from_fn(f.m, |p, q, k, l| {
        mf * f.get(p, q, k, l) + f.get(p, k, q, l) + f.get(p, l, q, k)
    })
}

/// Formal trace change of the spinorial deformation:
/// F_[pq][kl] = Gamma_[pk][ql] + Gamma_[lp][qk] - (m-1) Gamma_[pq][kl].
pub fn spinorial_trace_change(g: &PairTensor) -> PairTensor {
    let mf = g.m as f64;
    PairTensor::from_fn(g.m, |p, q, k, l| {
        g.get(p, k, q, l) + g.get(l, p, q, k) - (mf - 1.0) * g.get(p, q, k, l)
    })
}

/// m F_[pq][kl] + F_[pk][ql] - F_[pl][qk].
pub fn spinorial_combination(f: &PairTensor) -> PairTensor {
    let mf = f.m as f64;
    PairTensor::from_fn(f.m, |p, q, k, l| {
        mf * f.get(p, q, k, l) + f.get(p, k, q, l) - f.get(p, l, q, k)
    })
}

/// Closed-form deformation tensor computed from k0 (and the raw curvature
/// where the formula is stated in those terms).
pub fn closed_form_gamma(
    alg: &GradedLieAlgebra,
    k0: &TwoCochain,
    raw: Option<&RawCurvature>,
) -> Result<DeformationTensor> {
    match alg.kind() {
        StructureKind::Conformal { m } => {
            let owned;
            let r = match raw {
                Some(r) => r,
                None => {
                    owned = raw_from_kappa0(alg, k0)?;
                    &owned
                }
            };
            gamma_conformal(m, &r.ricci(), r.scalar())
        }
        StructureKind::Projective { q } => {
            let owned;
            let r = match raw {
                Some(r) => r,
                None => {
                    owned = raw_from_kappa0(alg, k0)?;
                    &owned
                }
            };
            gamma_projective(q, r)
        }
        StructureKind::Grassmannian { p, q } => {
            let trr = trace_kappa0(alg, k0)?;
            let (_, b2) = grassmannian_block_traces(alg, k0)?;
            gamma_grassmannian(p, q, &trr, &b2)
        }
        StructureKind::Lagrangian { m } => gamma_lagrangian(m, &trace_kappa0(alg, k0)?),
        StructureKind::Spinorial { m } => gamma_spinorial(m, &trace_kappa0(alg, k0)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_traces_give_zero() {
        let z = DMatrix::zeros(6, 6);
        assert_eq!(gamma_lagrangian(3, &z).unwrap().form.amax(), 0.0);
        assert_eq!(gamma_spinorial(4, &z).unwrap().form.amax(), 0.0);
        assert_eq!(gamma_grassmannian(2, 3, &z, &z).unwrap().form.amax(), 0.0);
        assert_eq!(gamma_conformal(6, &z, 0.0).unwrap().form.amax(), 0.0);
    }

    #[test]
    fn degenerate_parameters() {
        let z = DMatrix::zeros(1, 1);
        assert!(matches!(gamma_grassmannian(1, 1, &z, &z), Err(Error::Degenerate(_))));
        assert!(matches!(gamma_conformal(2, &DMatrix::zeros(2, 2), 0.0), Err(Error::Degenerate(_))));
        assert!(gamma_projective(1, &RawCurvature::zeros(1)).is_err());
        assert!(gamma_spinorial(2, &z).is_err());
    }

    #[test]
    fn constant_curvature_spot_values() {
        let r = RawCurvature::constant_curvature(4);
        let g = gamma_conformal(4, &r.ricci(), r.scalar()).unwrap();
        assert!((g.form.clone() + DMatrix::identity(4, 4) * 0.5).amax() < 1e-15);
        let r = RawCurvature::constant_curvature(3);
        let g = gamma_projective(3, &r).unwrap();
        assert!((g.form - DMatrix::identity(3, 3)).amax() < 1e-15);
    }

    #[test]
    fn pair_indices() {
        let p = Pairs::new(3, true);
        for (i, (k, l)) in p.list().into_iter().enumerate() {
            assert_eq!(p.index(k, l), Some((i, 1.0)));
            assert_eq!(p.index(l, k), Some((i, 1.0)));
        }
        let p = Pairs::new(4, false);
        for (i, (k, l)) in p.list().into_iter().enumerate() {
            assert_eq!(p.index(l, k), Some((i, -1.0)));
        }
        assert_eq!(p.index(2, 2), None);
    }
}
