use std::path::Path;

use bgf_core::bigframe::{
    adjoint_identity_deviation, bi_g_frame_operator, canonical_pair, classify_bi_g_frame,
    coefficient_identity_check, lift_to_biframe, reconstruct, solve_synthesis_coefficients,
    CoefficientIdentity,
};
use bgf_core::classical::classify_biframe;
use bgf_core::generators::{
    gen_bi_g_frame, gen_negative, is_valid_target, random_pd_target, GenKind, GenSpec,
};
use bgf_core::gframe::classify_g_frame;
use bgf_core::kernel::{norm, sub};
use bgf_core::rng::GaussianSource;
use bgf_core::{BiGFrameSystem, Matrix, Reconstruction, Side, C64};
use serde_json::Value;

use crate::error::CliError;
use crate::report::{complex, digest, number, Report};
use crate::schema::{parse_operator, FrameSystemFile, SystemEntry, VectorEntry};

/// Stream index for the vector `f` written by `gen`.
const GEN_VECTOR_STREAM: u64 = 0x7665_6374;
/// Lower and upper spectrum of the random target used by `gen`.
const GEN_TARGET_RANGE: (f64, f64) = (0.5, 5.0);

/// What a command produced: a report (or raw instance bytes) plus the exit code.
pub struct Outcome {
    pub stdout: Output,
    pub code: i32,
}

pub enum Output {
    Report(Report),
    Raw(Vec<u8>),
}

impl Outcome {
    fn verdict(report: Report, ok: bool) -> Self {
        Outcome {
            stdout: Output::Report(report),
            code: if ok { 0 } else { 1 },
        }
    }

    fn success(report: Report) -> Self {
        Outcome {
            stdout: Output::Report(report),
            code: 0,
        }
    }
}

pub struct Context {
    pub command: Vec<String>,
    pub tol: f64,
}

impl Context {
    fn report(&self, input: &Input) -> Report {
        let mut r = Report::new(&self.command);
        r.set("input_digest", input.digest.clone())
            .set_f64("tolerance", self.tol);
        r
    }
}

/// Names of the two systems forming a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub lambda: String,
    pub gamma: String,
}

impl std::str::FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split(',').collect::<Vec<_>>()[..] {
            [l, g] if !l.is_empty() && !g.is_empty() => Ok(Pair {
                lambda: l.into(),
                gamma: g.into(),
            }),
            _ => Err(format!(
                "expected two system names separated by a comma, got '{s}'"
            )),
        }
    }
}

pub struct Input {
    pub file: FrameSystemFile,
    pub digest: String,
}

impl Input {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        let file = FrameSystemFile::parse(&bytes)
            .map_err(|e| CliError::input(format!("{}: {}", path.display(), strip(&e))))?;
        Ok(Input {
            file,
            digest: digest(&bytes),
        })
    }

    fn pair(&self, pair: &Pair) -> Result<BiGFrameSystem, CliError> {
        let lambda = self.file.system(&pair.lambda)?;
        let gamma = self.file.system(&pair.gamma)?;
        BiGFrameSystem::new(lambda, gamma).map_err(|e| {
            CliError::input(format!(
                "systems {} and {} do not form a pair: {e}",
                pair.lambda, pair.gamma
            ))
        })
    }
}

fn strip(e: &CliError) -> String {
    match e {
        CliError::Input(m) | CliError::NotFrame(m) | CliError::Numerical(m) => m.clone(),
    }
}

fn shape(r: &mut Report, sys: &BiGFrameSystem) {
    r.entry("shape", "dim", sys.dim());
    r.entry("shape", "block_dims", sys.lambda().block_dims());
    r.entry("shape", "gamma_block_dims", sys.gamma().block_dims());
}

pub fn check(
    ctx: &Context,
    file: &Path,
    pair: &Pair,
    bounds_only: bool,
) -> Result<Outcome, CliError> {
    let input = Input::load(file)?;
    let sys = input.pair(pair)?;
    let verdict = classify_bi_g_frame(&sys, ctx.tol);
    let mut r = ctx.report(&input);
    r.entry("verdicts", "frame", verdict.is_frame);
    if let Some(b) = &verdict.bounds {
        r.bounds(b);
    }
    if !bounds_only {
        r.entry("verdicts", "bessel", verdict.is_bessel)
            .entry("verdicts", "tight", verdict.is_tight)
            .entry("verdicts", "parseval", verdict.is_parseval)
            .entry_f64("deviations", "hermitian", verdict.hermitian_deviation)
            .entry_f64(
                "deviations",
                "adjoint_identity",
                adjoint_identity_deviation(&sys),
            );
        if let Some(inv) = verdict.inverse_norm {
            r.entry_f64("bounds", "inverse_norm", inv);
        }
        shape(&mut r, &sys);
    }
    Ok(Outcome::verdict(r, verdict.is_frame))
}

pub fn gcheck(ctx: &Context, file: &Path, system: &str) -> Result<Outcome, CliError> {
    let input = Input::load(file)?;
    let sys = input.file.system(system)?;
    let verdict = classify_g_frame(&sys, ctx.tol);
    let mut r = ctx.report(&input);
    r.entry("verdicts", "bessel", verdict.is_bessel)
        .entry("verdicts", "frame", verdict.is_frame)
        .entry("verdicts", "tight", verdict.is_tight)
        .entry("verdicts", "parseval", verdict.is_parseval)
        .entry("verdicts", "riesz", verdict.is_riesz)
        .entry_f64("deviations", "hermitian", verdict.hermitian_deviation)
        .entry("shape", "dim", sys.dim())
        .entry("shape", "block_dims", sys.block_dims());
    if let Some(b) = &verdict.bounds {
        r.bounds(b);
    }
    Ok(Outcome::verdict(r, verdict.is_frame))
}

/// Frobenius distance of `Σ Y_j* X_j` from the identity.
fn identity_gap(x: &bgf_core::GFrameSystem, y: &bgf_core::GFrameSystem) -> Result<f64, CliError> {
    let s = bi_g_frame_operator(&BiGFrameSystem::new(x.clone(), y.clone())?);
    Ok(s.sub(&Matrix::identity(s.rows()))?.frobenius_norm())
}

pub fn dual(
    ctx: &Context,
    file: &Path,
    pair: &Pair,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let mut input = Input::load(file)?;
    let sys = input.pair(pair)?;
    let verdict = classify_bi_g_frame(&sys, ctx.tol);
    let dual = canonical_pair(&sys, ctx.tol)?;
    let names = [format!("{}~", pair.lambda), format!("{}~", pair.gamma)];
    input.file.systems.insert(
        names[0].clone(),
        SystemEntry::from_system(&dual.lambda_tilde),
    );
    input.file.systems.insert(
        names[1].clone(),
        SystemEntry::from_system(&dual.gamma_tilde),
    );
    let target = out.unwrap_or(file);
    let bytes = input.file.to_bytes();
    std::fs::write(target, &bytes)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", target.display())))?;

    let dual_verdict = classify_bi_g_frame(&dual.as_system(), ctx.tol);
    let mut r = ctx.report(&input);
    if let Some(b) = &verdict.bounds {
        r.bounds(b);
    }
    if let Some(b) = &dual_verdict.bounds {
        r.entry_f64("dual_bounds", "C", b.lower)
            .entry_f64("dual_bounds", "D", b.upper);
    }
    r.entry("verdicts", "frame", verdict.is_frame)
        .entry("verdicts", "dual_frame", dual_verdict.is_frame)
        .entry_f64(
            "residuals",
            "dual_analysis",
            identity_gap(&dual.lambda_tilde, sys.gamma())?,
        )
        .entry_f64(
            "residuals",
            "dual_synthesis",
            identity_gap(sys.lambda(), &dual.gamma_tilde)?,
        )
        .set("written", Value::from(names.to_vec()))
        .set("output", target.display().to_string())
        .set("output_digest", digest(&bytes));
    Ok(Outcome::success(r))
}

fn relative_residual(approx: &[C64], f: &[C64]) -> f64 {
    let err = norm(&sub(approx, f));
    let scale = norm(f);
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

pub fn reconstruct_cmd(
    ctx: &Context,
    file: &Path,
    pair: &Pair,
    vector: &str,
    variant: u8,
) -> Result<Outcome, CliError> {
    let input = Input::load(file)?;
    let sys = input.pair(pair)?;
    let vectors = input.file.vector_list(vector)?;
    let formula = match variant {
        1 => Reconstruction::DualAnalysis,
        _ => Reconstruction::DualSynthesis,
    };
    let mut residuals = Vec::with_capacity(vectors.len());
    for f in &vectors {
        residuals.push(relative_residual(
            &reconstruct(&sys, f, formula, ctx.tol)?,
            f,
        ));
    }
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let ok = worst <= ctx.tol;
    let mut r = ctx.report(&input);
    r.set("variant", variant)
        .entry(
            "residuals",
            "relative",
            residuals.into_iter().map(number).collect::<Vec<_>>(),
        )
        .entry_f64("residuals", "max", worst)
        .entry("verdicts", "reconstructed", ok);
    if ok {
        Ok(Outcome::success(r))
    } else {
        eprintln!(
            "relative residual {worst:e} exceeds tolerance {:e}",
            ctx.tol
        );
        Ok(Outcome {
            stdout: Output::Report(r),
            code: 3,
        })
    }
}

pub fn lift(
    ctx: &Context,
    file: &Path,
    pair: &Pair,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let input = Input::load(file)?;
    let sys = input.pair(pair)?;
    let (u, v) = lift_to_biframe(&sys);
    let mut lifted = FrameSystemFile::new(sys.dim());
    lifted.vectors.insert(
        pair.lambda.clone(),
        u.vectors()
            .iter()
            .map(|x| VectorEntry::from_vector(x))
            .collect(),
    );
    lifted.vectors.insert(
        pair.gamma.clone(),
        v.vectors()
            .iter()
            .map(|x| VectorEntry::from_vector(x))
            .collect(),
    );
    let target = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| file.with_extension("lift.json"));
    let bytes = lifted.to_bytes();
    std::fs::write(&target, &bytes)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", target.display())))?;

    let block = classify_bi_g_frame(&sys, ctx.tol);
    let vector = classify_biframe(&u, &v, ctx.tol)?;
    let bound_gap = match (&block.bounds, &vector.bounds) {
        (Some(a), Some(b)) => Some(a.distance(b)),
        _ => None,
    };
    let agrees = block.is_frame == vector.is_frame && block.is_tight == vector.is_tight;
    let mut r = ctx.report(&input);
    r.entry("verdicts", "frame", block.is_frame)
        .entry("verdicts", "lifted_frame", vector.is_frame)
        .entry("verdicts", "agree", agrees)
        .entry("shape", "vectors", u.len())
        .set("output", target.display().to_string())
        .set("output_digest", digest(&bytes));
    if let Some(b) = &vector.bounds {
        r.bounds(b);
    }
    if let Some(gap) = bound_gap {
        r.entry_f64("deviations", "bounds", gap);
    }
    if agrees {
        Ok(Outcome::success(r))
    } else {
        eprintln!("lifted verdict disagrees with the block verdict");
        Ok(Outcome {
            stdout: Output::Report(r),
            code: 3,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GenChoice {
    /// A bi-g-frame whose operator is a given or random positive target.
    Prescribed,
    /// A pair whose operator has a nontrivial kernel.
    RankDeficient,
    /// A pair whose operator is not Hermitian.
    NonHermitian,
}

pub struct GenArgs<'a> {
    pub dim: usize,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub target: Option<&'a Path>,
    pub kind: GenChoice,
    pub out: Option<&'a Path>,
}

pub fn gen(ctx: &Context, args: GenArgs) -> Result<Outcome, CliError> {
    let n = args.dim;
    if n == 0 {
        return Err(CliError::input("--dim must be at least 1"));
    }
    let kind = match args.kind {
        GenChoice::Prescribed => GenKind::PrescribedOperator,
        GenChoice::RankDeficient => GenKind::RankDeficient,
        GenChoice::NonHermitian => GenKind::NonHermitianPair,
    };
    if args.target.is_some() && kind != GenKind::PrescribedOperator {
        return Err(CliError::input(
            "--target-op only applies to --kind prescribed",
        ));
    }
    let spec = GenSpec::new(n, args.dims.clone(), args.seed, kind);
    let sys = match kind {
        GenKind::PrescribedOperator => {
            let target = match args.target {
                Some(path) => load_target(path, n)?,
                None => random_pd_target(n, args.seed, GEN_TARGET_RANGE.0, GEN_TARGET_RANGE.1),
            };
            gen_bi_g_frame(&spec, &target)?
        }
        _ => gen_negative(&spec)?,
    };

    let mut file = FrameSystemFile::new(n);
    file.systems
        .insert("L".into(), SystemEntry::from_system(sys.lambda()));
    file.systems
        .insert("G".into(), SystemEntry::from_system(sys.gamma()));
    let mut e1 = vec![C64::new(0.0, 0.0); n];
    e1[0] = C64::new(1.0, 0.0);
    let f = GaussianSource::stream(args.seed, GEN_VECTOR_STREAM).complex_vector(n);
    file.vectors
        .insert("e1".into(), vec![VectorEntry::from_vector(&e1)]);
    file.vectors
        .insert("f".into(), vec![VectorEntry::from_vector(&f)]);
    let bytes = file.to_bytes();

    let Some(out) = args.out else {
        return Ok(Outcome {
            stdout: Output::Raw(bytes),
            code: 0,
        });
    };
    std::fs::write(out, &bytes)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", out.display())))?;
    let mut r = Report::new(&ctx.command);
    r.set("output", out.display().to_string())
        .set("output_digest", digest(&bytes))
        .set("seed", args.seed)
        .set("kind", format!("{:?}", kind))
        .set("systems", Value::from(vec!["G", "L"]))
        .set("vectors", Value::from(vec!["e1", "f"]));
    shape(&mut r, &sys);
    Ok(Outcome::success(r))
}

fn load_target(path: &Path, n: usize) -> Result<Matrix, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let target = parse_operator(&bytes, n)
        .map_err(|e| CliError::input(format!("{}: {}", path.display(), strip(&e))))?;
    if !is_valid_target(&target) {
        return Err(CliError::input(format!(
            "{}: target operator must be Hermitian positive definite",
            path.display()
        )));
    }
    Ok(target)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SideChoice {
    Gamma,
    Lambda,
    Both,
}

pub struct IdentityArgs<'a> {
    pub pair: &'a Pair,
    pub vector: &'a str,
    pub perturb: usize,
    pub side: SideChoice,
    pub seed: u64,
}

fn identity_value(c: &CoefficientIdentity) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("gap".into(), number((C64::new(c.lhs, 0.0) - c.rhs).norm()));
    m.insert("holds".into(), Value::from(c.holds));
    m.insert("lhs".into(), number(c.lhs));
    m.insert("rhs".into(), complex(c.rhs));
    Value::Object(m)
}

pub fn identity(ctx: &Context, file: &Path, args: IdentityArgs) -> Result<Outcome, CliError> {
    let input = Input::load(file)?;
    let sys = input.pair(args.pair)?;
    let vectors = input.file.vector_list(args.vector)?;
    let sides: &[(Side, &str)] = match args.side {
        SideChoice::Gamma => &[(Side::Gamma, "gamma")],
        SideChoice::Lambda => &[(Side::Lambda, "lambda")],
        SideChoice::Both => &[(Side::Gamma, "gamma"), (Side::Lambda, "lambda")],
    };
    let mut rng = GaussianSource::new(args.seed);
    let mut all_hold = true;
    let mut worst = 0.0f64;
    let mut r = ctx.report(&input);
    for &(side, label) in sides {
        let mut particular = Vec::new();
        let mut side_worst = 0.0f64;
        let mut null_dim = 0;
        for f in &vectors {
            let sol = solve_synthesis_coefficients(&sys, f, side, ctx.tol)?;
            null_dim = sol.null_basis.len();
            let base = coefficient_identity_check(&sys, f, &sol.particular, side, ctx.tol)?;
            all_hold &= base.holds;
            side_worst = side_worst.max((C64::new(base.lhs, 0.0) - base.rhs).norm());
            particular.push(identity_value(&base));
            for _ in 0..args.perturb {
                let mut g = sol.particular.clone();
                for h in &sol.null_basis {
                    g = g.add_scaled(rng.complex_normal(), h);
                }
                let c = coefficient_identity_check(&sys, f, &g, side, ctx.tol)?;
                all_hold &= c.holds;
                side_worst = side_worst.max((C64::new(c.lhs, 0.0) - c.rhs).norm());
            }
        }
        worst = worst.max(side_worst);
        r.entry(label, "particular", particular)
            .entry(label, "null_dim", null_dim)
            .entry(label, "perturbations", args.perturb)
            .entry_f64(label, "max_gap", side_worst);
    }
    r.entry_f64("residuals", "max_gap", worst)
        .entry("verdicts", "identity_holds", all_hold);
    if all_hold {
        Ok(Outcome::success(r))
    } else {
        eprintln!("coefficient identity gap {worst:e} exceeds tolerance");
        Ok(Outcome {
            stdout: Output::Report(r),
            code: 3,
        })
    }
}
