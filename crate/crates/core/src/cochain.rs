//! Cochains on the abelian algebra g-1 with values in a graded piece.

use serde::{Deserialize, Serialize};

use crate::algebra::{Grade, GradedLieAlgebra};
use crate::error::{Error, Result};

/// Linear map g-1 -> g_i, `data[x * m + t]` = coefficient of the `t`-th basis
/// element of g_i in the value on e_x.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneCochain {
    pub grade: i32,
    pub n: usize,
    pub m: usize,
    pub data: Vec<f64>,
}

/// Alternating bilinear map g-1 x g-1 -> g_j, stored in full:
/// `data[(x * n + y) * m + t]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoCochain {
    pub grade: i32,
    pub n: usize,
    pub m: usize,
    pub data: Vec<f64>,
}

fn target_dim(alg: &GradedLieAlgebra, grade: i32) -> Result<usize> {
    Grade::from_value(grade)
        .map(|g| alg.piece_dim(g))
        .ok_or_else(|| Error::Shape(format!("no graded piece of degree {grade}")))
}

/// Index of the unordered pair x < y among all pairs of `0..n`.
pub fn pair_index(n: usize, x: usize, y: usize) -> usize {
    debug_assert!(x < y && y < n);
    x * (2 * n - x - 1) / 2 + (y - x - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect()
}

impl OneCochain {
    pub fn zeros(alg: &GradedLieAlgebra, grade: i32) -> Result<Self> {
        let m = target_dim(alg, grade)?;
        Ok(OneCochain {
            grade,
            n: alg.n(),
            m,
            data: vec![0.0; alg.n() * m],
        })
    }

    pub fn from_vec(alg: &GradedLieAlgebra, grade: i32, data: Vec<f64>) -> Result<Self> {
        let mut c = Self::zeros(alg, grade)?;
        if data.len() != c.data.len() {
            return Err(Error::Shape(format!(
                "one-cochain of degree {grade} needs {} entries, got {}",
                c.data.len(),
                data.len()
            )));
        }
        c.data = data;
        Ok(c)
    }

    #[inline]
    pub fn get(&self, x: usize, t: usize) -> f64 {
        self.data[x * self.m + t]
    }

    #[inline]
    pub fn set(&mut self, x: usize, t: usize, v: f64) {
        self.data[x * self.m + t] = v;
    }

    /// Value on e_x as coordinates in the target piece.
    pub fn value(&self, x: usize) -> &[f64] {
        &self.data[x * self.m..(x + 1) * self.m]
    }

    pub fn check(&self, alg: &GradedLieAlgebra, grade: i32) -> Result<()> {
        let m = target_dim(alg, grade)?;
        if self.grade != grade || self.n != alg.n() || self.m != m || self.data.len() != self.n * m {
            return Err(Error::Shape(format!(
                "expected a one-cochain of degree {grade} on a {}-dimensional g-1 with {m}-dimensional values",
                alg.n()
            )));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(&self.data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    /// self + a * other
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
        out
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x *= a);
        out
    }
}

impl TwoCochain {
    pub fn zeros(alg: &GradedLieAlgebra, grade: i32) -> Result<Self> {
        let m = target_dim(alg, grade)?;
        let n = alg.n();
        Ok(TwoCochain {
            grade,
            n,
            m,
            data: vec![0.0; n * n * m],
        })
    }

    /// Builds an alternating cochain from its values on pairs x < y, given as
    /// `vals[pair_index(x, y) * m + t]`.
    pub fn from_pair_values(alg: &GradedLieAlgebra, grade: i32, vals: &[f64]) -> Result<Self> {
        let mut c = Self::zeros(alg, grade)?;
        let np = c.n * (c.n.saturating_sub(1)) / 2;
        if vals.len() != np * c.m {
            return Err(Error::Shape(format!(
                "expected {} pair values, got {}",
                np * c.m,
                vals.len()
            )));
        }
        for (p, (x, y)) in pairs(c.n).into_iter().enumerate() {
            for t in 0..c.m {
                c.set_pair(x, y, t, vals[p * c.m + t]);
            }
        }
        Ok(c)
    }

    /// Builds a cochain from a full array, which must be alternating.
    pub fn from_full(alg: &GradedLieAlgebra, grade: i32, data: Vec<f64>, tol: f64) -> Result<Self> {
        let mut c = Self::zeros(alg, grade)?;
        if data.len() != c.data.len() {
            return Err(Error::Shape(format!(
                "two-cochain of degree {grade} needs {} entries, got {}",
                c.data.len(),
                data.len()
            )));
        }
        c.data = data;
        let defect = c.alternation_defect();
        if defect > tol {
            return Err(Error::Validation(format!(
                "two-cochain is not alternating (defect {defect:e})"
            )));
        }
        Ok(c)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, t: usize) -> f64 {
        self.data[(x * self.n + y) * self.m + t]
    }

    /// Sets the (x, y) value and the opposite (y, x) value.
    pub fn set_pair(&mut self, x: usize, y: usize, t: usize, v: f64) {
        if x == y {
            return;
        }
        let (n, m) = (self.n, self.m);
        self.data[(x * n + y) * m + t] = v;
        self.data[(y * n + x) * m + t] = -v;
    }

    pub fn value(&self, x: usize, y: usize) -> &[f64] {
        let s = (x * self.n + y) * self.m;
        &self.data[s..s + self.m]
    }

    /// Values on pairs x < y, the inverse of `from_pair_values`.
    pub fn pair_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2 * self.m);
        for (x, y) in pairs(self.n) {
            out.extend_from_slice(self.value(x, y));
        }
        out
    }

    pub fn alternation_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for x in 0..self.n {
            for y in x..self.n {
                for t in 0..self.m {
                    d = d.max((self.get(x, y, t) + self.get(y, x, t)).abs());
                }
            }
        }
        d
    }

    pub fn check(&self, alg: &GradedLieAlgebra, grade: i32) -> Result<()> {
        let m = target_dim(alg, grade)?;
        let n = alg.n();
        if self.grade != grade || self.n != n || self.m != m || self.data.len() != n * n * m {
            return Err(Error::Shape(format!(
                "expected a two-cochain of degree {grade} on a {n}-dimensional g-1 with {m}-dimensional values"
            )));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(&self.data)
    }

    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x *= a);
        out
    }
}
