//! Command-line front end. Every command prints a JSON document; arrays are
//! row-major in the g-1 basis order of the algebra (see `algebra-info`).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::matrix_rep::cross_check;
use crate::algebra::{build_algebra, GradedLieAlgebra, StructureKind};
use crate::cochain::TwoCochain;
use crate::error::{Error, Result};
use crate::normalization::{
    kappa0_from_raw, matrix_rows, normalize, raw_from_kappa0, CurvatureData, RawCurvature, TraceSolver,
};
use crate::spencer::{cohomology_dim, complementarity_check, Level};
use crate::testkit::{random_curvature, SampleSpec};
use crate::verify::{self, Check, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NON_UNIQUE: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "ahs", version, about = "Graded Lie algebras of AHS structures and normal Cartan connections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions, bases and consistency checks of one algebra.
    AlgebraInfo(KindArgs),
    /// H^{1,1}, H^{2,1} and complementarity of im d and ker d*.
    Cohomology(KindArgs),
    /// Deformation tensor of the normal connection for a curvature file.
    Normalize(NormalizeArgs),
    /// The invariant suite over a grid of structures.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct KindArgs {
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct NormalizeArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    /// Curvature JSON file, or a sample spec to draw the curvature from.
    #[arg(long)]
    pub input: PathBuf,
    /// Tolerance for the closed form against the oracle and the trace residual.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub kind: KindArgs,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Restrict to these checks (repeatable).
    #[arg(long = "check")]
    pub checks: Vec<String>,
    /// Flip the sign of one structure constant first.
    #[arg(long, hide = true)]
    pub debug_mutate: bool,
}

/// Curvature input: `kappa0[x][y][t]` is the coefficient of the t-th g0 basis
/// element in k0(e_x, e_y); `raw.R[i][j][k][l]` is R^i_{jkl} with
/// R(e_k, e_l) e_j = R^i_{jkl} e_i.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureFile {
    pub kind: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub kappa0: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    pub kappa_minus: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    pub raw: Option<RawInput>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInput {
    #[serde(rename = "R")]
    pub r: Vec<Vec<Vec<Vec<f64>>>>,
    #[serde(default, rename = "Ricci")]
    pub ricci: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub scalar: Option<f64>,
}

/// Output of a command: the JSON text and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub json: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonUnique { .. } => EXIT_NON_UNIQUE,
        _ => EXIT_VALIDATION,
    }
}

fn resolve_kind(a: &KindArgs) -> Result<StructureKind> {
    let kind = a
        .kind
        .as_deref()
        .ok_or_else(|| Error::Parameter("--kind is required".into()))?;
    StructureKind::from_parts(kind, a.p, a.q, a.m)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

pub fn algebra_info(a: &KindArgs) -> Result<Outcome> {
    let alg = build_algebra(resolve_kind(a)?)?;
    let d = alg.describe();
    let cc = match cross_check(&alg) {
        Ok(r) => json!({
            "passed": r.max_discrepancy == 0.0,
            "scales": [r.scale_minus, r.scale_zero, r.scale_plus],
            "pairs_checked": r.pairs_checked,
        }),
        Err(e) => json!({ "passed": false, "error": e.to_string() }),
    };
    let total = alg.dim().pow(3);
    let v = json!({
        "kind": d.kind,
        "params": d.params,
        "dims": { "minus": d.dims[0], "zero": d.dims[1], "plus": d.dims[2] },
        "labels": { "minus": d.labels[0], "zero": d.labels[1], "plus": d.labels[2] },
        "center_dim": alg.center_dim(),
        "structure_constants": {
            "nonzero": d.nonzero_structure_constants,
            "density": d.nonzero_structure_constants as f64 / total as f64,
        },
        "pairing": matrix_rows(alg.pairing()),
        "matrix_cross_check": cc,
    });
    Ok(Outcome {
        json: to_json(&v)?,
        code: EXIT_OK,
    })
}

pub fn cohomology(a: &KindArgs) -> Result<Outcome> {
    let alg = build_algebra(resolve_kind(a)?)?;
    let c = [
        complementarity_check(&alg, Level::H11),
        complementarity_check(&alg, Level::H21),
    ];
    let v = json!({
        "kind": alg.kind().name(),
        "params": alg.kind().params(),
        "H11": cohomology_dim(&alg, Level::H11),
        "H21": cohomology_dim(&alg, Level::H21),
        "complementarity": c.iter().all(|r| r.complementary),
        "complementarity_detail": c,
    });
    Ok(Outcome {
        json: to_json(&v)?,
        code: EXIT_OK,
    })
}

fn cochain_from_nested(
    alg: &GradedLieAlgebra,
    grade: i32,
    v: &[Vec<Vec<f64>>],
    what: &str,
) -> Result<TwoCochain> {
    let zero = TwoCochain::zeros(alg, grade)?;
    let (n, m) = (zero.n, zero.m);
    if v.len() != n || v.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != m)) {
        return Err(Error::Schema(format!("{what} must be a {n} x {n} x {m} array")));
    }
    let flat: Vec<f64> = v.iter().flatten().flatten().copied().collect();
    let scale = crate::linalg::max_abs(&flat).max(1.0);
    TwoCochain::from_full(alg, grade, flat, 1e-12 * scale)
}

fn raw_from_input(n: usize, r: &RawInput) -> Result<RawCurvature> {
    let ok = r.r.len() == n
        && r.r
            .iter()
            .all(|a| a.len() == n && a.iter().all(|b| b.len() == n && b.iter().all(|c| c.len() == n)));
    if !ok {
        return Err(Error::Schema(format!("raw.R must be a {n}^4 array")));
    }
    let raw = RawCurvature {
        dim: n,
        r: r.r.iter().flatten().flatten().flatten().copied().collect(),
    };
    let scale = crate::linalg::max_abs(&raw.r).max(1.0);
    if let Some(ric) = &r.ricci {
        let want = raw.ricci();
        if ric.len() != n || ric.iter().any(|row| row.len() != n) {
            return Err(Error::Schema(format!("raw.Ricci must be {n} x {n}")));
        }
        let diff = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .fold(0.0f64, |a, (j, k)| a.max((ric[j][k] - want[(j, k)]).abs()));
        if diff > 1e-9 * scale {
            return Err(Error::Validation(format!(
                "raw.Ricci differs from the contraction R^l_jlk of raw.R by {diff:e}"
            )));
        }
    }
    if let Some(s) = r.scalar {
        if (s - raw.scalar()).abs() > 1e-9 * scale {
            return Err(Error::Validation("raw.scalar differs from the trace of the Ricci tensor".into()));
        }
    }
    Ok(raw)
}

/// Parses and validates a curvature file against the algebra.
pub fn read_curvature(text: &str, override_kind: Option<StructureKind>) -> Result<(GradedLieAlgebra, CurvatureData)> {
    let file: CurvatureFile =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("curvature file: {e}")))?;
    let kind = StructureKind::from_parts(&file.kind, file.params.p, file.params.q, file.params.m)?;
    if let Some(k) = override_kind {
        if k != kind {
            return Err(Error::Validation(format!("file describes {kind}, command line asks for {k}")));
        }
    }
    let alg = build_algebra(kind)?;
    let raw = match &file.raw {
        Some(r) => {
            if !matches!(kind, StructureKind::Conformal { .. } | StructureKind::Projective { .. }) {
                return Err(Error::Schema("raw curvature is accepted for conformal and projective kinds only".into()));
            }
            Some(raw_from_input(alg.n(), r)?)
        }
        None => None,
    };
    let kappa0 = match (&file.kappa0, &raw) {
        (Some(k), _) => cochain_from_nested(&alg, 0, k, "kappa0")?,
        (None, Some(r)) => kappa0_from_raw(&alg, r)?,
        (None, None) => return Err(Error::Schema("either kappa0 or raw must be given".into())),
    };
    if let (Some(_), Some(r)) = (&file.kappa0, &raw) {
        let back = raw_from_kappa0(&alg, &kappa0)?;
        let diff = crate::linalg::max_abs(&back.r.iter().zip(&r.r).map(|(a, b)| a - b).collect::<Vec<_>>());
        if diff > 1e-9 * crate::linalg::max_abs(&r.r).max(1.0) {
            return Err(Error::Validation("kappa0 and raw.R describe different curvatures".into()));
        }
    }
    let kappa_minus = match &file.kappa_minus {
        Some(k) => Some(cochain_from_nested(&alg, -1, k, "kappa_minus")?),
        None => None,
    };
    Ok((
        alg,
        CurvatureData {
            kappa_minus,
            kappa0,
            raw,
        },
    ))
}

pub fn normalize_cmd(a: &NormalizeArgs) -> Result<Outcome> {
    if let Some(t) = a.tolerance {
        check_tolerance(t)?;
    }
    let text = std::fs::read_to_string(&a.input)?;
    let override_kind = match &a.kind.kind {
        Some(_) => Some(resolve_kind(&a.kind)?),
        None => None,
    };
    let (alg, data) = if is_sample_spec(&text) {
        let spec: SampleSpec =
            serde_json::from_str(&text).map_err(|e| Error::Schema(format!("sample spec: {e}")))?;
        if override_kind.is_some_and(|k| k != spec.kind) {
            return Err(Error::Validation("sample spec and command line name different kinds".into()));
        }
        (build_algebra(spec.kind)?, random_curvature(&spec)?)
    } else {
        read_curvature(&text, override_kind)?
    };
    let solver = TraceSolver::new(&alg)?;
    let r = normalize(&alg, &solver, &data)?;
    let tol = a.tolerance.unwrap_or(1e-9);
    let scale = data.kappa0.max_abs().max(1.0);
    let passed = r.max_abs_diff <= tol * scale && r.residual_trace_norm <= tol * scale;
    let v = json!({
        "kind": alg.kind().name(),
        "params": alg.kind().params(),
        "gamma": matrix_rows(&r.gamma.form),
        "gamma_oracle": matrix_rows(&r.gamma_oracle.form),
        "max_abs_diff": r.max_abs_diff,
        "residual_trace_norm": r.residual_trace_norm,
        "method": r.method,
        "convention": r.convention,
        "index_order": "gamma[x][y] = <Gamma(e_x), e_y> for the g-1 basis e of algebra-info",
        "passed": passed,
    });
    Ok(Outcome {
        json: to_json(&v)?,
        code: if passed { EXIT_OK } else { EXIT_INVARIANT },
    })
}

/// A JSON object with a `seed` field is a sample spec rather than a curvature.
fn is_sample_spec(text: &str) -> bool {
    serde_json::from_str::<Value>(text).is_ok_and(|v| v.get("seed").is_some())
}

fn check_tolerance(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("tolerance must be positive, got {t}")))
    }
}

fn verify_kinds(a: &KindArgs) -> Result<Vec<StructureKind>> {
    let grid = StructureKind::grid(3, 5);
    match &a.kind {
        None => Ok(grid),
        Some(name) if a.p.is_none() && a.q.is_none() && a.m.is_none() => {
            let ks: Vec<_> = grid.into_iter().filter(|k| k.name() == name).collect();
            if ks.is_empty() {
                return Err(Error::Parameter(format!("unknown kind `{name}`")));
            }
            Ok(ks)
        }
        Some(_) => Ok(vec![resolve_kind(a)?]),
    }
}

pub fn verify_cmd(a: &VerifyArgs) -> Result<Outcome> {
    if let Some(t) = a.tolerance {
        check_tolerance(t)?;
    }
    let checks = if a.checks.is_empty() {
        None
    } else {
        Some(a.checks.iter().map(|c| c.parse::<Check>()).collect::<Result<Vec<_>>>()?)
    };
    let config = VerifyConfig {
        kinds: verify_kinds(&a.kind)?,
        checks,
        seed: a.seed,
        samples: a.samples,
        tolerance: a.tolerance,
        mutate: a.debug_mutate,
    };
    let report = verify::run(&config)?;
    Ok(Outcome {
        json: report.to_json()?,
        code: if report.all_passed { EXIT_OK } else { EXIT_INVARIANT },
    })
}

fn output_path(c: &Command) -> Option<&PathBuf> {
    match c {
        Command::AlgebraInfo(a) | Command::Cohomology(a) => a.output.as_ref(),
        Command::Normalize(a) => a.kind.output.as_ref(),
        Command::Verify(a) => a.kind.output.as_ref(),
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::AlgebraInfo(a) => algebra_info(a),
        Command::Cohomology(a) => cohomology(a),
        Command::Normalize(a) => normalize_cmd(a),
        Command::Verify(a) => verify_cmd(a),
    }
}

/// Runs a parsed command, writes its output and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|o| {
        match output_path(&cli.command) {
            Some(p) => std::fs::write(p, format!("{}\n", o.json))?,
            None => {
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                match writeln!(out, "{}", o.json) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                    _ => {}
                }
            }
        }
        Ok(o.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let v: Value = json!({ "error": e.to_string(), "exit_code": exit_code(&e) });
            eprintln!("{}", serde_json::to_string_pretty(&v).unwrap_or_else(|_| e.to_string()));
            exit_code(&e)
        }
    }
}
