//! The invariant suite behind `ahs verify`: every check over a grid of
//! structures, with seeded samples and a deterministic JSON report.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::matrix_rep::cross_check;
use crate::algebra::{build_algebra, GradedLieAlgebra, StructureKind};
use crate::cochain::OneCochain;
use crate::error::{Error, Result};
use crate::normalization::closed_form::{
    lagrangian_combination, lagrangian_trace_change, spinorial_combination, spinorial_trace_change,
    PairTensor,
};
use crate::normalization::{
    deformation_delta_kappa0, dstar_form, fiber_constancy_check, normalize, trace_g0, trace_kappa0,
    DeformationTensor, TraceSolver,
};
use crate::prolongation::{
    act_one, closure_residual, flat_structure_function, model_second_torsion,
    second_torsion_reduction, torsion_equivariance, FrameChange,
};
use crate::spencer::{cohomology_dim, complementarity_check, spencer_dstar, Level};
use crate::testkit::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Jacobi,
    Axioms,
    CrossCheck,
    DstarTrace,
    Complementarity,
    H11,
    H21,
    Uniqueness,
    Normalize,
    Substitution,
    FiberConstancy,
    G0Trace,
    Prolongation,
}

impl Check {
    pub const ALL: [Check; 13] = [
        Check::Jacobi,
        Check::Axioms,
        Check::CrossCheck,
        Check::DstarTrace,
        Check::Complementarity,
        Check::H11,
        Check::H21,
        Check::Uniqueness,
        Check::Normalize,
        Check::Substitution,
        Check::FiberConstancy,
        Check::G0Trace,
        Check::Prolongation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Jacobi => "jacobi",
            Check::Axioms => "axioms",
            Check::CrossCheck => "cross-check",
            Check::DstarTrace => "dstar-trace",
            Check::Complementarity => "complementarity",
            Check::H11 => "h11",
            Check::H21 => "h21",
            Check::Uniqueness => "uniqueness",
            Check::Normalize => "normalize",
            Check::Substitution => "substitution",
            Check::FiberConstancy => "fiber-constancy",
            Check::G0Trace => "g0-trace",
            Check::Prolongation => "prolongation",
        }
    }

    /// Checks that only read the structure-constant table.
    fn table_only(self) -> bool {
        matches!(self, Check::Jacobi | Check::Axioms | Check::CrossCheck)
    }

    fn default_tolerance(self) -> f64 {
        match self {
            Check::Normalize => 1e-9,
            Check::Prolongation | Check::FiberConstancy => 1e-10,
            _ => 1e-12,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown check `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub kinds: Vec<StructureKind>,
    /// `None` runs every check.
    pub checks: Option<Vec<Check>>,
    pub seed: u64,
    pub samples: usize,
    /// Overrides every per-check tolerance.
    pub tolerance: Option<f64>,
    /// Flip one structure constant before checking (only the table checks run).
    pub mutate: bool,
}

impl VerifyConfig {
    pub fn default_grid(seed: u64) -> Self {
        VerifyConfig {
            kinds: StructureKind::grid(3, 5),
            checks: None,
            seed,
            samples: 10,
            tolerance: None,
            mutate: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub kind: String,
    pub check: Check,
    pub passed: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub mutated: bool,
    pub results: Vec<CheckResult>,
    pub all_passed: bool,
}

fn scale(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        1.0
    }
}

struct Outcome {
    residual: f64,
    passed: bool,
    detail: String,
}

impl Outcome {
    fn residual(residual: f64, tol: f64, detail: String) -> Self {
        Outcome {
            residual,
            passed: residual <= tol,
            detail,
        }
    }

    fn exact(passed: bool, detail: String) -> Self {
        Outcome {
            residual: if passed { 0.0 } else { 1.0 },
            passed,
            detail,
        }
    }
}

fn seed_for(seed: u64, kind: StructureKind, check: Check) -> u64 {
    // stable mixing so each (kind, check) pair gets its own stream
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in kind.to_string().bytes().chain(check.name().bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn applies(check: Check, kind: StructureKind) -> bool {
    match check {
        Check::Substitution => matches!(kind, StructureKind::Lagrangian { .. } | StructureKind::Spinorial { .. }),
        Check::G0Trace => kind.grassmannian_blocks().is_some(),
        _ => true,
    }
}

/// Runs the configured checks. Errors only on invalid configuration; failing
/// invariants are reported in the result.
pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    let checks: Vec<Check> = config.checks.clone().unwrap_or_else(|| Check::ALL.to_vec());
    let mut results = Vec::new();
    for &kind in &config.kinds {
        kind.validate()?;
        let mut alg = build_algebra(kind)?;
        if config.mutate {
            alg = alg.with_flipped_constant();
        }
        for &check in &checks {
            if !applies(check, kind) || (config.mutate && !check.table_only()) {
                continue;
            }
            let tol = config.tolerance.unwrap_or(check.default_tolerance());
            let seed = seed_for(config.seed, kind, check);
            let out = match run_check(&alg, check, seed, config.samples, tol) {
                Ok(o) => o,
                Err(e) => Outcome {
                    residual: f64::INFINITY,
                    passed: false,
                    detail: format!("error: {e}"),
                },
            };
            results.push(CheckResult {
                kind: kind.to_string(),
                check,
                passed: out.passed,
                max_residual: out.residual,
                tolerance: tol,
                detail: out.detail,
            });
        }
    }
    Ok(VerifyReport {
        seed: config.seed,
        samples: config.samples,
        mutated: config.mutate,
        all_passed: results.iter().all(|r| r.passed),
        results,
    })
}

fn run_check(alg: &GradedLieAlgebra, check: Check, seed: u64, samples: usize, tol: f64) -> Result<Outcome> {
    let kind = alg.kind();
    Ok(match check {
        Check::Jacobi => {
            let anti = alg.check_antisymmetry_and_grading();
            let jac = alg.jacobi_violations(10);
            let detail = match (&anti, jac.first()) {
                (Err((u, v)), _) => format!("antisymmetry or grading fails at ({u}, {v})"),
                (Ok(()), Some((u, v, w))) => {
                    format!("Jacobi fails on ({u}, {v}, {w}); {} violating triples found", jac.len())
                }
                (Ok(()), None) => "exact".into(),
            };
            Outcome::exact(anti.is_ok() && jac.is_empty(), detail)
        }
        Check::Axioms => {
            let (c, r0, r1) = (alg.center_dim(), alg.g0_action_rank(), alg.g1_action_rank());
            // co(2) is abelian
            let want_center = if kind == (StructureKind::Conformal { m: 2 }) { 2 } else { 1 };
            Outcome::exact(
                c == want_center && r0 == alg.n0() && r1 == alg.n(),
                format!("center {c}, rank g0 -> End(g-1) {r0}/{}, rank g1 -> Hom(g-1, g0) {r1}/{}", alg.n0(), alg.n()),
            )
        }
        Check::CrossCheck => match cross_check(alg) {
            Ok(r) => Outcome::exact(
                r.max_discrepancy == 0.0,
                format!(
                    "scales {} / {} / {} over {} pairs",
                    r.scale_minus, r.scale_zero, r.scale_plus, r.pairs_checked
                ),
            ),
            Err(e) => Outcome::exact(false, e.to_string()),
        },
        Check::DstarTrace => {
            let mut s = Sampler::new(alg, seed);
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let k0 = s.alternating(0)?;
                let d = dstar_form(alg, &k0)? - trace_kappa0(alg, &k0)?;
                worst = worst.max(d.amax() / scale(k0.max_abs()));
            }
            Outcome::residual(worst, tol, format!("{samples} random k0"))
        }
        Check::Complementarity => {
            let a = complementarity_check(alg, Level::H11);
            let b = complementarity_check(alg, Level::H21);
            Outcome::exact(
                a.complementary && b.complementary,
                format!(
                    "C2(g-1): im {} + ker {} of {}; C2(g0): im {} + ker {} of {}",
                    a.dim_im_d, a.dim_ker_dstar, a.dim_total, b.dim_im_d, b.dim_ker_dstar, b.dim_total
                ),
            )
        }
        Check::H11 => {
            let h = cohomology_dim(alg, Level::H11);
            let want = kind.is_projective_type();
            Outcome::exact((h != 0) == want, format!("dim H11 = {h}, expected {}", if want { "> 0" } else { "0" }))
        }
        Check::H21 => {
            let h = cohomology_dim(alg, Level::H21);
            let want = !kind.is_normalizable();
            Outcome::exact((h != 0) == want, format!("dim H21 = {h}, expected {}", if want { "> 0" } else { "0" }))
        }
        Check::Uniqueness => {
            let r = crate::normalization::uniqueness_certificate(alg)?;
            let want = kind.is_normalizable();
            Outcome::exact(
                r.unique == want,
                format!("kernel {} (trace map alone {})", r.kernel_dim_combined, r.kernel_dim_trace),
            )
        }
        Check::Normalize => {
            let solver = TraceSolver::new(alg)?;
            let mut s = Sampler::new(alg, seed);
            if !kind.is_normalizable() {
                let (data, _) = s.round_trip()?;
                return Ok(match normalize(alg, &solver, &data) {
                    Err(Error::NonUnique { kernel_dim }) => {
                        Outcome::exact(true, format!("non-unique as expected (kernel {kernel_dim})"))
                    }
                    Err(e) => Outcome::exact(false, e.to_string()),
                    Ok(_) => Outcome::exact(false, "normalized outside the valid range".into()),
                });
            }
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let (data, truth) = s.round_trip()?;
                let r = normalize(alg, &solver, &data)?;
                worst = worst
                    .max(r.max_abs_diff)
                    .max(r.residual_trace_norm)
                    .max(r.gamma.max_abs_diff(&truth));
            }
            Outcome::residual(worst, tol, format!("{samples} round trips, closed form against oracle"))
        }
        Check::Substitution => {
            let mut s = Sampler::new(alg, seed);
            let n = alg.n();
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let g = DMatrix::from_vec(n, n, s.uniform(n * n));
                let (m, symmetric, c) = match kind {
                    StructureKind::Lagrangian { m } => (m, true, 2.0 - (m * (m + 1)) as f64),
                    StructureKind::Spinorial { m } => (m, false, 2.0 - (m * (m - 1)) as f64),
                    _ => unreachable!(),
                };
                let change = |t: &PairTensor| {
                    if symmetric {
                        lagrangian_trace_change(t)
                    } else {
                        spinorial_trace_change(t)
                    }
                };
                let gt = PairTensor::from_form(m, symmetric, &g);
                let f = change(&gt);
                let comb = if symmetric {
                    lagrangian_combination(&f)
                } else {
                    spinorial_combination(&f)
                };
                worst = worst.max(comb.max_abs_diff(&gt.scale(c)));
                // the true trace change on a pair-symmetric Gamma
                let sym = (&g + g.transpose()) * 0.5;
                let t = DeformationTensor { kind, form: sym.clone() };
                let tr = trace_kappa0(alg, &deformation_delta_kappa0(alg, &t.to_cochain(alg)?)?)?;
                let formal = change(&PairTensor::from_form(m, symmetric, &sym)).to_form(symmetric);
                worst = worst.max((tr + formal).amax());
            }
            Outcome::residual(worst, tol, format!("{samples} random Gamma"))
        }
        Check::FiberConstancy => {
            let mut s = Sampler::new(alg, seed);
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let k0 = s.alternating(0)?;
                let km1 = s.harmonic_torsion()?;
                let tau = s.g1_element();
                let r = fiber_constancy_check(alg, &k0, &km1, &tau)?;
                worst = worst.max(r.residual).max(r.interchange_residual);
            }
            Outcome::residual(worst, tol, format!("{samples} harmonic torsions"))
        }
        Check::G0Trace => {
            let mut s = Sampler::new(alg, seed);
            let n = alg.n();
            let mut worst = 0.0f64;
            for _ in 0..samples {
                let g = DMatrix::from_vec(n, n, s.uniform(n * n));
                let t = DeformationTensor { kind, form: (&g + g.transpose()) * 0.5 };
                let d = deformation_delta_kappa0(alg, &t.to_cochain(alg)?)?;
                worst = worst.max(trace_g0(alg, &d)?.amax());
            }
            Outcome::residual(worst, tol, format!("{samples} symmetric Gamma"))
        }
        Check::Prolongation => prolongation_suite(alg, seed, samples, tol)?,
    })
}

fn prolongation_suite(alg: &GradedLieAlgebra, seed: u64, samples: usize, tol: f64) -> Result<Outcome> {
    let mut s = Sampler::new(alg, seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let a = s.g0_element();
        let z = s.g1_element();
        let fc = FrameChange::new(alg, &a, z.clone())?;
        let ad_scale = fc.ad.iter().map(|m| m.amax()).fold(1.0, f64::max);
        worst = worst.max(fc.automorphism_defect(alg) / (ad_scale * ad_scale));
        let t = s.alternating(-1)?;
        // exp(Z) alone acts trivially
        let pure = FrameChange { z, ..FrameChange::identity(alg) };
        worst = worst.max(torsion_equivariance(alg, &t, &pure)?.sub(&t).max_abs());
        // d* commutes with the action
        let lhs = spencer_dstar(alg, &torsion_equivariance(alg, &t, &fc)?)?;
        let rhs = act_one(alg, &fc, &spencer_dstar(alg, &t)?)?;
        worst = worst.max(lhs.sub(&rhs).max_abs() / scale(rhs.max_abs().max(1.0)));
        // the flat model and its second torsion
        let k0 = s.alternating(0)?;
        let full = model_second_torsion(alg, &[&k0, &t])?;
        let back = second_torsion_reduction(alg, &full)?;
        worst = worst.max(back.sub(&k0).max_abs());
        let psi = OneCochain::from_vec(alg, 0, s.uniform(alg.n() * alg.n0()))?;
        let moved = crate::prolongation::torsion_change(alg, &t, &psi)?;
        let (h1, _) = crate::spencer::harmonic_decompose(alg, &t)?;
        let (h2, _) = crate::spencer::harmonic_decompose(alg, &moved)?;
        worst = worst.max(h1.sub(&h2).max_abs());
    }
    let flat = closure_residual(alg, &flat_structure_function(alg, &[])?)?;
    worst = worst.max(flat);
    Ok(Outcome::residual(
        worst,
        tol,
        format!("{samples} frame changes; flat closure residual {flat:e}"),
    ))
}

impl VerifyReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
