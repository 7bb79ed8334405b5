//! Command line front end. Every subcommand is a thin wrapper over the
//! library: inputs and outputs are JSON, campaigns echo their seed and
//! budget, and exit codes follow one convention: 0 pass, 1 mathematical
//! failure, 2 usage error, 3 budget exhausted.

use std::path::{Path, PathBuf};
use std::process;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use breadth_lab::camina::{
    camina_via_structure_matrices, is_camina, max_nonsingular_skew_subspace, CaminaError,
    SpanCheck,
};
use breadth_lab::campaign::{cmd_verify, CampaignError, CampaignOptions, DEFAULT_BUDGET};
use breadth_lab::constructions::{
    degree_heisenberg, five_dim_three_step, free_two_step, heisenberg, ideal_dim1,
    ideal_dim2_even, ideal_dim2_odd, ideal_dim3_quaternion, sl2,
};
use breadth_lab::field::{FieldError, FieldSpec};
use breadth_lab::groupcorr::{ExponentPGroup, GroupError};
use breadth_lab::io::{
    algebra_to_json, elem_to_json, field_from_shorthand, field_to_json, ideal_to_json,
    read_algebra, read_ideal, IoError,
};
use breadth_lab::liealg::{BreadthScan, LieError};
use breadth_lab::matrix::{enumerate_subspaces, Subspace};
use breadth_lab::normal_form::{classify_4gen_2step, Family, NormalFormError};

#[derive(Parser)]
#[command(
    name = "breadth-lab",
    version,
    about = "Exact breadth type computations for nilpotent Lie algebras over finite fields and the rationals"
)]
struct Cli {
    /// Worker threads; the BREADTHLAB_JOBS variable is the fallback.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the JSON output to this path instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification campaign and emit its report.
    Verify {
        /// One of t01, t02, t03-odd, t03-even, camina-bound,
        /// correspondence, rational-camina.
        theorem: String,
        /// Field shorthand: gfP, gfP^N, or rational.
        #[arg(long)]
        field: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra probe size for the camina-bound campaign.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Breadth type of an algebra loaded from JSON.
    Breadth {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Sample size when an exhaustive scan is unavailable.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sort a four-generated class-two algebra into its quotient family.
    Classify {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Decide the everywhere-maximal bracket condition.
    Camina {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Largest subspace of alternating n x n matrices with nonsingular span.
    SksSearch {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "gf2")]
        field: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Write a named construction as JSON.
    Make {
        /// free-two-step, heisenberg, degree-heisenberg, sl2,
        /// five-dim-three-step, ideal-dim1, ideal-dim2-odd,
        /// ideal-dim2-even, ideal-dim3-quaternion.
        name: String,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        gens: Option<usize>,
    },
    /// Conjugate types of central quotients against quotient breadth types.
    Correspond {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        /// Check every central subgroup instead of only the trivial one.
        #[arg(long)]
        all_central_subgroups: bool,
        /// Check the single subgroup read from this ideal file.
        #[arg(long)]
        ideal: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

enum CliError {
    Usage(String),
    Budget(String),
    Math(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Math(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Budget(m) | CliError::Math(m) => m,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> CliError {
        match e {
            LieError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<CaminaError> for CliError {
    fn from(e: CaminaError) -> CliError {
        match e {
            CaminaError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> CliError {
        match e {
            GroupError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<NormalFormError> for CliError {
    fn from(e: NormalFormError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<CampaignError> for CliError {
    fn from(e: CampaignError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    init_jobs(cli.jobs);
    match run(cli.command, &cli.json) {
        Ok(code) => process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            process::exit(e.code());
        }
    }
}

fn init_jobs(flag: Option<usize>) {
    let jobs = flag.or_else(|| {
        std::env::var("BREADTHLAB_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = jobs {
        if n > 0 {
            // A direct test harness may have installed a pool already.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_value(path: &Option<PathBuf>, v: &Value) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    emit(path, &s)
}

fn parse_field(s: &str) -> Result<FieldSpec, CliError> {
    Ok(field_from_shorthand(s)?)
}

fn run(command: Command, out: &Option<PathBuf>) -> Result<i32, CliError> {
    match command {
        Command::Verify {
            theorem,
            field,
            budget,
            seed,
            n,
        } => {
            let f = field.as_deref().map(parse_field).transpose()?;
            let opts = CampaignOptions {
                budget,
                seed,
                probe_n: n,
            };
            let report = cmd_verify(&theorem, f.as_ref(), &opts)?;
            emit(out, &report.to_json_string())?;
            Ok(report.exit_code())
        }
        Command::Breadth {
            alg,
            budget,
            samples,
            seed,
        } => cmd_breadth(&alg, budget, samples, seed, out),
        Command::Classify { alg, budget } => cmd_classify(&alg, budget, out),
        Command::Camina { alg, budget } => cmd_camina(&alg, budget, out),
        Command::SksSearch { n, field, budget } => cmd_sks_search(n, &field, budget, out),
        Command::Make {
            name,
            field,
            m,
            gens,
        } => cmd_make(&name, field.as_deref(), m, gens, out),
        Command::Correspond {
            p,
            m,
            all_central_subgroups,
            ideal,
            budget,
        } => cmd_correspond(p, m, all_central_subgroups, ideal.as_deref(), budget, out),
    }
}

fn cmd_breadth(
    alg: &Path,
    budget: u64,
    samples: Option<u64>,
    seed: u64,
    out: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let a = read_algebra(alg)?;
    let (bt, code) = match a.breadth_type_with_budget(budget) {
        Ok(bt) => (bt, 0),
        Err(LieError::BudgetExceeded { .. }) => {
            (a.breadth_type_sampled(samples.unwrap_or(10_000), seed), 3)
        }
        Err(LieError::Field(FieldError::Unsupported(_))) => {
            (a.breadth_type_sampled(samples.unwrap_or(10_000), seed), 0)
        }
        Err(e) => return Err(e.into()),
    };
    let scan = match bt.scan {
        BreadthScan::Exhaustive { cosets } => json!({"exhaustive": {"cosets": cosets as u64}}),
        BreadthScan::Sampled { samples, seed } => {
            json!({"sampled": {"samples": samples, "seed": seed}})
        }
    };
    let report = json!({
        "command": "breadth",
        "field": field_to_json(a.field()),
        "dim": a.dim(),
        "breadths": bt.breadths,
        "complete": bt.complete,
        "max_possible": bt.max_possible,
        "scan": scan,
    });
    emit_value(out, &report)?;
    Ok(code)
}

fn family_json(family: &Family, f: &FieldSpec) -> Value {
    let (name, parameter) = match family {
        Family::Free => ("free", None),
        Family::DimOneQuotient(r) => ("dim-one-quotient", Some(r.to_string())),
        Family::DimTwoOddQuotient(t) => ("dim-two-odd-quotient", Some(t.to_string())),
        Family::DimTwoEvenQuotient(z) => ("dim-two-even-quotient", Some(z.to_string())),
        Family::CaminaDerivedDim3 => ("camina-derived-dim-3", None),
        Family::NotBreadthType => ("not-breadth-type", None),
    };
    json!({
        "name": name,
        "parameter": parameter,
        "label": family.roman_label(f),
    })
}

fn cmd_classify(alg: &Path, budget: u64, out: &Option<PathBuf>) -> Result<i32, CliError> {
    let a = read_algebra(alg)?;
    let cls = classify_4gen_2step(&a, budget)?;
    let report = json!({
        "command": "classify",
        "field": field_to_json(a.field()),
        "dim": a.dim(),
        "stem_dim": cls.stem_dim,
        "family": family_json(&cls.family, a.field()),
        "ideal": ideal_to_json(4, &cls.ideal),
        "ideal_dim": cls.ideal.dim(),
    });
    emit_value(out, &report)?;
    Ok(0)
}

fn span_check_json(v: &SpanCheck) -> Value {
    match v {
        SpanCheck::AllNonsingular => json!("all-nonsingular"),
        SpanCheck::SingularCombination { coeffs } => {
            json!({"singular-combination": coeffs.iter().map(elem_to_json).collect::<Vec<_>>()})
        }
        SpanCheck::Undetermined => json!("undetermined"),
    }
}

fn cmd_camina(alg: &Path, budget: u64, out: &Option<PathBuf>) -> Result<i32, CliError> {
    let a = read_algebra(alg)?;
    let direct = if a.field().order().is_some() {
        Some(is_camina(&a, budget)?)
    } else {
        None
    };
    let span = match camina_via_structure_matrices(&a, budget) {
        Ok(v) => Some(v),
        Err(CaminaError::Hypothesis(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let direct_verdict = direct.as_ref().map(|c| c.camina);
    let span_verdict = span.as_ref().and_then(|v| match v {
        SpanCheck::AllNonsingular => Some(true),
        SpanCheck::SingularCombination { .. } => Some(false),
        SpanCheck::Undetermined => None,
    });
    let camina = direct_verdict.or(span_verdict);
    let report = json!({
        "command": "camina",
        "field": field_to_json(a.field()),
        "dim": a.dim(),
        "camina": camina,
        "degenerate": direct.as_ref().map(|c| c.degenerate),
        "witness": direct.as_ref().and_then(|c| {
            c.witness.as_ref().map(|w| w.iter().map(elem_to_json).collect::<Vec<_>>())
        }),
        "cosets_checked": direct.as_ref().map(|c| c.cosets_checked as u64),
        "span_route": span.as_ref().map(span_check_json),
    });
    emit_value(out, &report)?;
    // Both routes apply to class-two stems and must then agree.
    if let (Some(d), Some(s)) = (direct_verdict, span_verdict) {
        if d != s {
            return Err(CliError::Math(
                "direct scan and span route disagree".to_string(),
            ));
        }
    }
    Ok(0)
}

fn cmd_sks_search(
    n: usize,
    field: &str,
    budget: u64,
    out: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let f = parse_field(field)?;
    let rep = max_nonsingular_skew_subspace(&f, n, budget)?;
    let report = json!({
        "command": "sks-search",
        "field": field_to_json(&f),
        "n": rep.n,
        "max_dim": rep.max_dim,
        "complete": rep.complete,
        "rank_checks": rep.rank_checks,
        "witness": ideal_to_json(n, &rep.witness),
    });
    emit_value(out, &report)?;
    Ok(if rep.complete { 0 } else { 3 })
}

fn cmd_make(
    name: &str,
    field: Option<&str>,
    m: Option<usize>,
    gens: Option<usize>,
    out: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let f = parse_field(field.unwrap_or("gf3"))?;
    let need_m = || m.ok_or_else(|| CliError::Usage(format!("{name} needs --m")));
    let algebra = |a: &breadth_lab::liealg::LieAlgebra| {
        serde_json::to_value(algebra_to_json(a)).expect("algebra serializes")
    };
    let ideal = |s: &Subspace| serde_json::to_value(ideal_to_json(4, s)).expect("ideal serializes");
    let value = match name {
        "free-two-step" => {
            let g = gens.ok_or_else(|| CliError::Usage("free-two-step needs --gens".into()))?;
            algebra(&free_two_step(&f, g))
        }
        "heisenberg" => algebra(&heisenberg(&f, need_m()?)),
        "degree-heisenberg" => algebra(&degree_heisenberg(&f, need_m()?)),
        "sl2" => algebra(&sl2(&f)),
        "five-dim-three-step" => algebra(&five_dim_three_step(&f)),
        "ideal-dim1" => ideal(&ideal_dim1(&f)),
        "ideal-dim2-odd" => {
            let t = f
                .find_nonsquare()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            ideal(&ideal_dim2_odd(&f, &t))
        }
        "ideal-dim2-even" => {
            let z = f
                .least_trace_one()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            ideal(&ideal_dim2_even(&f, &z))
        }
        "ideal-dim3-quaternion" => ideal(&ideal_dim3_quaternion(&f)),
        other => {
            return Err(CliError::Usage(format!(
                "unknown construction {other:?}; see breadth-lab make --help"
            )))
        }
    };
    emit_value(out, &value)?;
    Ok(0)
}

fn cmd_correspond(
    p: u64,
    m: usize,
    all: bool,
    ideal: Option<&Path>,
    budget: u64,
    out: &Option<PathBuf>,
) -> Result<i32, CliError> {
    if all && ideal.is_some() {
        return Err(CliError::Usage(
            "--all-central-subgroups and --ideal are mutually exclusive".to_string(),
        ));
    }
    let g = ExponentPGroup::new(p, m)?;
    let f = g.field().clone();
    let rank = g.commutator_rank();
    let subgroups: Vec<Subspace> = if all {
        let mut v = Vec::new();
        for d in 0..=rank {
            v.extend(enumerate_subspaces(&f, rank, d)?);
        }
        v
    } else if let Some(path) = ideal {
        let (gens, s) = read_ideal(path)?;
        if gens != m + 1 || s.ambient_dim() != rank {
            return Err(CliError::Usage(format!(
                "ideal is on {gens} generators, expected {}",
                m + 1
            )));
        }
        if s.field() != &f {
            return Err(CliError::Usage("ideal field does not match --p".to_string()));
        }
        vec![s]
    } else {
        vec![Subspace::zero(&f, rank)]
    };

    let mut cases = Vec::new();
    let mut all_ok = true;
    let mut exhausted = false;
    for n in &subgroups {
        match g.verify_correspondence(n, budget) {
            Ok(vc) => {
                all_ok &= vc.ok;
                cases.push(json!({
                    "subgroup_dim": n.dim(),
                    "conjugate_exponents": vc.conjugate_exponents,
                    "breadth_exponents": vc.breadth_exponents,
                    "group_order": vc.group_order.to_string(),
                    "algebra_dim": vc.algebra_dim,
                    "ok": vc.ok,
                }));
            }
            Err(GroupError::BudgetExceeded { .. }) => {
                exhausted = true;
                cases.push(json!({
                    "subgroup_dim": n.dim(),
                    "skipped": "over budget",
                }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let report = json!({
        "command": "correspond",
        "p": p,
        "m": m,
        "checked": cases.len(),
        "ok": all_ok,
        "budget_exhausted": exhausted,
        "cases": cases,
    });
    emit_value(out, &report)?;
    Ok(if !all_ok {
        1
    } else if exhausted {
        3
    } else {
        0
    })
}
