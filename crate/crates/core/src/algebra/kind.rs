use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five families of |1|-graded algebras handled here.
///
/// `Projective { q }` is the `p = 1` Grassmannian grading of `sl(q+1)` but is
/// tracked as its own kind because its normalization and cohomology behave
/// differently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StructureKind {
    Conformal { m: usize },
    Grassmannian { p: usize, q: usize },
    Projective { q: usize },
    Lagrangian { m: usize },
    Spinorial { m: usize },
}

impl StructureKind {
    pub fn from_parts(
        kind: &str,
        p: Option<usize>,
        q: Option<usize>,
        m: Option<usize>,
    ) -> Result<Self> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| Error::Parameter(format!("kind `{kind}` needs --{name}")))
        };
        let k = match kind {
            "conformal" => StructureKind::Conformal { m: need(m, "m")? },
            "grassmannian" => StructureKind::Grassmannian {
                p: need(p, "p")?,
                q: need(q, "q")?,
            },
            "projective" => StructureKind::Projective {
                q: need(q.or(m), "q")?,
            },
            "lagrangian" => StructureKind::Lagrangian { m: need(m, "m")? },
            "spinorial" => StructureKind::Spinorial { m: need(m, "m")? },
            other => return Err(Error::Parameter(format!("unknown kind `{other}`"))),
        };
        k.validate()?;
        Ok(k)
    }

    pub fn name(&self) -> &'static str {
        match self {
            StructureKind::Conformal { .. } => "conformal",
            StructureKind::Grassmannian { .. } => "grassmannian",
            StructureKind::Projective { .. } => "projective",
            StructureKind::Lagrangian { .. } => "lagrangian",
            StructureKind::Spinorial { .. } => "spinorial",
        }
    }

    /// Checks that the algebra can be built at all.
    pub fn validate(&self) -> Result<()> {
        match *self {
            StructureKind::Conformal { m } if m < 1 => {
                Err(Error::Parameter("conformal needs m >= 1".into()))
            }
            StructureKind::Grassmannian { p, q } if p < 1 || q < p => Err(Error::Parameter(
                format!("grassmannian needs q >= p >= 1, got p = {p}, q = {q}"),
            )),
            StructureKind::Projective { q } if q < 1 => {
                Err(Error::Parameter("projective needs q >= 1".into()))
            }
            StructureKind::Lagrangian { m } if m < 1 => {
                Err(Error::Parameter("lagrangian needs m >= 1".into()))
            }
            // m = 2 gives a one-dimensional g_-1 on which gl(2) cannot act faithfully
            StructureKind::Spinorial { m } if m < 3 => {
                Err(Error::Parameter("spinorial needs m >= 3".into()))
            }
            _ => Ok(()),
        }
    }

    /// Parameter range in which the normal Cartan connection is unique and
    /// the closed-form deformation tensors are defined.
    pub fn is_normalizable(&self) -> bool {
        match *self {
            StructureKind::Conformal { m } => m >= 3,
            StructureKind::Grassmannian { p, q } => q >= p && p >= 1 && p + q >= 3,
            StructureKind::Projective { q } => q >= 2,
            StructureKind::Lagrangian { m } => m >= 2,
            StructureKind::Spinorial { m } => m >= 3,
        }
    }

    /// The realizations of sl(2) with its only |1|-grading.
    pub fn is_sl2(&self) -> bool {
        self.dim_minus() == 1
    }

    /// Gradings isomorphic to the projective one, where H^{1,1} does not vanish.
    /// spinorial(3) is so(3,3) = sl(4) graded as projective 3-space.
    pub fn is_projective_type(&self) -> bool {
        match *self {
            StructureKind::Projective { q } => q >= 2,
            StructureKind::Grassmannian { p, q } => p == 1 && q >= 2,
            StructureKind::Spinorial { m } => m == 3,
            _ => false,
        }
    }

    pub fn dim_minus(&self) -> usize {
        match *self {
            StructureKind::Conformal { m } => m,
            StructureKind::Grassmannian { p, q } => p * q,
            StructureKind::Projective { q } => q,
            StructureKind::Lagrangian { m } => m * (m + 1) / 2,
            StructureKind::Spinorial { m } => m * (m - 1) / 2,
        }
    }

    pub fn dim_zero(&self) -> usize {
        match *self {
            StructureKind::Conformal { m } => 1 + m * (m - 1) / 2,
            StructureKind::Grassmannian { p, q } => p * p + q * q - 1,
            StructureKind::Projective { q } => q * q,
            StructureKind::Lagrangian { m } | StructureKind::Spinorial { m } => m * m,
        }
    }

    /// `(p, q)` for the sl(p+q) gradings.
    pub fn grassmannian_blocks(&self) -> Option<(usize, usize)> {
        match *self {
            StructureKind::Grassmannian { p, q } => Some((p, q)),
            StructureKind::Projective { q } => Some((1, q)),
            _ => None,
        }
    }

    pub fn params(&self) -> serde_json::Value {
        match *self {
            StructureKind::Conformal { m }
            | StructureKind::Lagrangian { m }
            | StructureKind::Spinorial { m } => serde_json::json!({ "m": m }),
            StructureKind::Grassmannian { p, q } => serde_json::json!({ "p": p, "q": q }),
            StructureKind::Projective { q } => serde_json::json!({ "q": q }),
        }
    }

    /// Test grid used by the verification suite: every constructible kind
    /// with p, q <= `pq_max` and m <= `m_max`.
    pub fn grid(pq_max: usize, m_max: usize) -> Vec<StructureKind> {
        let mut out = Vec::new();
        for m in 1..=m_max {
            out.push(StructureKind::Conformal { m });
        }
        for p in 1..=pq_max {
            for q in p..=pq_max {
                out.push(StructureKind::Grassmannian { p, q });
            }
        }
        for q in 1..=pq_max {
            out.push(StructureKind::Projective { q });
        }
        for m in 1..=m_max {
            out.push(StructureKind::Lagrangian { m });
        }
        for m in 3..=m_max {
            out.push(StructureKind::Spinorial { m });
        }
        out
    }
}

impl std::fmt::Display for StructureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            StructureKind::Conformal { m } => write!(f, "conformal(m={m})"),
            StructureKind::Grassmannian { p, q } => write!(f, "grassmannian(p={p},q={q})"),
            StructureKind::Projective { q } => write!(f, "projective(q={q})"),
            StructureKind::Lagrangian { m } => write!(f, "lagrangian(m={m})"),
            StructureKind::Spinorial { m } => write!(f, "spinorial(m={m})"),
        }
    }
}
