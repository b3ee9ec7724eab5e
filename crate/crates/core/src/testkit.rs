//! Seeded sample generators and brute-force oracles.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_algebra, GradedLieAlgebra, StructureKind};
use crate::cochain::{OneCochain, TwoCochain};
use crate::error::{Error, Result};
use crate::normalization::{
    deformation_delta_kappa0, raw_from_kappa0, trace_kappa0, CurvatureData, DeformationTensor,
};
use crate::spencer::{bianchi_projector, harmonic_projector, torsion_harmonic_projector, KernelProjector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    /// k0 satisfies the first Bianchi identity; the raw curvature is attached
    /// for conformal and projective kinds.
    RiemannSymmetric,
    /// k0 is Bianchi-closed and d*-closed, k-1 is d*-closed.
    Harmonic,
    /// k0 = delta k0(Gamma) for a random Gamma.
    DeformationImage,
    ArbitraryAlternating,
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "riemann-symmetric" => Ok(Symmetry::RiemannSymmetric),
            "harmonic" => Ok(Symmetry::Harmonic),
            "deformation-image" => Ok(Symmetry::DeformationImage),
            "arbitrary-alternating" => Ok(Symmetry::ArbitraryAlternating),
            other => Err(Error::Parameter(format!("unknown symmetry flag `{other}`"))),
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::RiemannSymmetric => "riemann-symmetric",
            Symmetry::Harmonic => "harmonic",
            Symmetry::DeformationImage => "deformation-image",
            Symmetry::ArbitraryAlternating => "arbitrary-alternating",
        })
    }
}

/// JSON form: `{"kind": "lagrangian", "params": {"m": 3}, "seed": 1,
/// "count": 10, "symmetry": "harmonic"}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SampleSpecJson", into = "SampleSpecJson")]
pub struct SampleSpec {
    pub kind: StructureKind,
    pub seed: u64,
    pub count: usize,
    pub symmetry: Symmetry,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleSpecJson {
    kind: String,
    #[serde(default)]
    params: serde_json::Map<String, serde_json::Value>,
    seed: u64,
    #[serde(default = "one")]
    count: usize,
    symmetry: String,
}

fn one() -> usize {
    1
}

impl TryFrom<SampleSpecJson> for SampleSpec {
    type Error = Error;

    fn try_from(j: SampleSpecJson) -> Result<Self> {
        let get = |k: &str| j.params.get(k).and_then(|v| v.as_u64()).map(|v| v as usize);
        Ok(SampleSpec {
            kind: StructureKind::from_parts(&j.kind, get("p"), get("q"), get("m"))?,
            seed: j.seed,
            count: j.count,
            symmetry: j.symmetry.parse()?,
        })
    }
}

impl From<SampleSpec> for SampleSpecJson {
    fn from(s: SampleSpec) -> Self {
        let params = match s.kind.params() {
            serde_json::Value::Object(m) => m,
            _ => serde_json::Map::new(),
        };
        SampleSpecJson {
            kind: s.kind.name().into(),
            params,
            seed: s.seed,
            count: s.count,
            symmetry: s.symmetry.to_string(),
        }
    }
}

/// A seeded stream of random cochains for one algebra. Projectors are built
/// on first use.
pub struct Sampler<'a> {
    alg: &'a GradedLieAlgebra,
    rng: ChaCha8Rng,
    bianchi: OnceCell<KernelProjector>,
    harmonic: OnceCell<KernelProjector>,
    torsion: OnceCell<KernelProjector>,
}

impl<'a> Sampler<'a> {
    pub fn new(alg: &'a GradedLieAlgebra, seed: u64) -> Self {
        Sampler {
            alg,
            rng: ChaCha8Rng::seed_from_u64(seed),
            bianchi: OnceCell::new(),
            harmonic: OnceCell::new(),
            torsion: OnceCell::new(),
        }
    }

    pub fn uniform(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.rng.random_range(-1.0..=1.0)).collect()
    }

    fn pair_count(&self) -> usize {
        let n = self.alg.n();
        n * n.saturating_sub(1) / 2
    }

    pub fn one_cochain(&mut self, grade: i32) -> Result<OneCochain> {
        let len = OneCochain::zeros(self.alg, grade)?.data.len();
        let v = self.uniform(len);
        OneCochain::from_vec(self.alg, grade, v)
    }

    pub fn alternating(&mut self, grade: i32) -> Result<TwoCochain> {
        let m = TwoCochain::zeros(self.alg, grade)?.m;
        let v = self.uniform(self.pair_count() * m);
        TwoCochain::from_pair_values(self.alg, grade, &v)
    }

    /// A random element of g1.
    pub fn g1_element(&mut self) -> Vec<f64> {
        self.uniform(self.alg.n())
    }

    /// A random element of g0.
    pub fn g0_element(&mut self) -> Vec<f64> {
        self.uniform(self.alg.n0())
    }

    fn projected(&mut self, grade: i32, which: fn(&Self) -> &KernelProjector) -> Result<TwoCochain> {
        let raw = self.alternating(grade)?;
        let p = which(self).project(&raw.pair_values());
        TwoCochain::from_pair_values(self.alg, grade, &p)
    }

    fn bianchi(&self) -> &KernelProjector {
        self.bianchi.get_or_init(|| bianchi_projector(self.alg))
    }

    fn hodge(&self) -> &KernelProjector {
        self.harmonic.get_or_init(|| harmonic_projector(self.alg))
    }

    fn torsion(&self) -> &KernelProjector {
        self.torsion.get_or_init(|| torsion_harmonic_projector(self.alg))
    }

    pub fn bianchi_closed(&mut self) -> Result<TwoCochain> {
        self.projected(0, Self::bianchi)
    }

    pub fn harmonic_curvature(&mut self) -> Result<TwoCochain> {
        self.projected(0, Self::hodge)
    }

    pub fn harmonic_torsion(&mut self) -> Result<TwoCochain> {
        self.projected(-1, Self::torsion)
    }

    fn with_raw(&self, kappa0: TwoCochain, kappa_minus: Option<TwoCochain>) -> Result<CurvatureData> {
        let raw = match self.alg.kind() {
            StructureKind::Conformal { .. } | StructureKind::Projective { .. } => {
                Some(raw_from_kappa0(self.alg, &kappa0)?)
            }
            _ => None,
        };
        Ok(CurvatureData {
            kappa_minus,
            kappa0,
            raw,
        })
    }

    pub fn curvature(&mut self, symmetry: Symmetry) -> Result<CurvatureData> {
        match symmetry {
            Symmetry::RiemannSymmetric => {
                let k0 = self.bianchi_closed()?;
                self.with_raw(k0, None)
            }
            Symmetry::Harmonic => {
                let k0 = self.harmonic_curvature()?;
                let km1 = self.harmonic_torsion()?;
                self.with_raw(k0, Some(km1))
            }
            Symmetry::DeformationImage => {
                let g = self.one_cochain(1)?;
                let k0 = deformation_delta_kappa0(self.alg, &g)?;
                self.with_raw(k0, None)
            }
            Symmetry::ArbitraryAlternating => {
                let k0 = self.alternating(0)?;
                let km1 = self.alternating(-1)?;
                self.with_raw(k0, Some(km1))
            }
        }
    }

    /// k0 = delta k0(Gamma_true) + harmonic, returned with Gamma_true.
    pub fn round_trip(&mut self) -> Result<(CurvatureData, DeformationTensor)> {
        let g = self.one_cochain(1)?;
        let h = self.harmonic_curvature()?;
        let k0 = deformation_delta_kappa0(self.alg, &g)?.axpy(1.0, &h);
        let data = self.with_raw(k0, None)?;
        Ok((data, DeformationTensor::from_cochain(self.alg, &g)?))
    }

    /// Like `round_trip`, but for conformal kinds Gamma_true is symmetric so
    /// the raw curvature also satisfies R_ijkl = -R_jikl.
    pub fn riemannian_round_trip(&mut self) -> Result<(CurvatureData, DeformationTensor)> {
        if !matches!(self.alg.kind(), StructureKind::Conformal { .. }) {
            return self.round_trip();
        }
        let n = self.alg.n();
        let g = DMatrix::from_vec(n, n, self.uniform(n * n));
        let truth = DeformationTensor {
            kind: self.alg.kind(),
            form: (&g + g.transpose()) * 0.5,
        };
        let h = self.harmonic_curvature()?;
        let k0 = deformation_delta_kappa0(self.alg, &truth.to_cochain(self.alg)?)?.axpy(1.0, &h);
        Ok((self.with_raw(k0, None)?, truth))
    }
}

/// All `spec.count` samples of the stream.
pub fn samples(spec: &SampleSpec) -> Result<Vec<CurvatureData>> {
    let alg = build_algebra(spec.kind)?;
    let mut s = Sampler::new(&alg, spec.seed);
    (0..spec.count).map(|_| s.curvature(spec.symmetry)).collect()
}

/// The first sample of the stream.
pub fn random_curvature(spec: &SampleSpec) -> Result<CurvatureData> {
    let alg = build_algebra(spec.kind)?;
    Sampler::new(&alg, spec.seed).curvature(spec.symmetry)
}

/// Matrix of Gamma -> Tr(delta k0(Gamma)). Column `x * n + a` is the image of
/// the cochain with Gamma(e_x) = e^a; row `x * n + y` is trace entry (x, y).
pub fn brute_force_trace_map(alg: &GradedLieAlgebra) -> Result<DMatrix<f64>> {
    let n = alg.n();
    let mut out = DMatrix::zeros(n * n, n * n);
    let mut g = OneCochain::zeros(alg, 1)?;
    for col in 0..n * n {
        g.data[col] = 1.0;
        let t = trace_kappa0(alg, &deformation_delta_kappa0(alg, &g)?)?;
        for (r, v) in t.transpose().iter().enumerate() {
            out[(r, col)] = *v;
        }
        g.data[col] = 0.0;
    }
    Ok(out)
}
