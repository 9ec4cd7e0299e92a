//! `kanlift`: compute lifted structures over finite carriers, check
//! simulations and bisimulations of labelled Markov processes, solve exact
//! Kantorovich distances, and run the verification batteries.

mod files;
mod render;

use clap::{Args, Parser, Subcommand};
use files::{CliError, CliResult};
use kanlift_core::codensity::{
    builtin_param, closed_form_lift, codensity_lift, engine_matches_closed_forms, is_closed, phi,
    verify_lifting_laws, ClosedFormKind, LiftingParam,
};
use kanlift_core::density::{
    product_comonad_laws, product_density_lift, product_density_lift_enumerate,
    stream_comonad_laws, stream_density_member, Lasso,
};
use kanlift_core::fibration::{EndoRel, FibreObject, Tag};
use kanlift_core::finset::{FinSet, Subset};
use kanlift_core::giry::{
    check_bisimulation, check_simulation_single, check_simulation_two, GiryError, SimWitness,
};
use kanlift_core::kantorovich::{kantorovich, kantorovich_oracle, KantError};
use kanlift_core::monad::{powerset_monad, verify_monad_laws};
use kanlift_core::report::LawReport;
use kanlift_core::util::rational::format_q;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kanlift", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lift a structure along a monad with a built-in or inline parameter.
    Lift(LiftArgs),
    /// Check a simulation or bisimulation between processes.
    Check(CheckArgs),
    /// Exact Kantorovich distance between two measures over a metric space.
    Kantorovich(KantorovichArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Lift a predicate along the product comonad.
    DensityLift(DensityArgs),
    /// Decide membership of a stream in a lifted stream predicate.
    StreamMember(StreamArgs),
}

#[derive(Args)]
struct LiftArgs {
    /// Monad name (only `powerset` is built in).
    #[arg(long, default_value = "powerset")]
    monad: String,
    /// Built-in parameter: lower-pre, upper-pre, convex-pre,
    /// lower-vietoris, upper-vietoris.
    #[arg(long, conflicts_with = "param_file")]
    param: Option<String>,
    /// Inline parameter file (kind `lifting_param`).
    #[arg(long)]
    param_file: Option<PathBuf>,
    /// Write the machine-readable result here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Instance file (kind preorder, topology, pred, or metric_space).
    instance: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    /// Check kind: sim1, sim2, or bisim.
    kind: String,
    /// For sim1: process and relation. For sim2/bisim: two processes and a
    /// relation.
    files: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KantorovichArgs {
    /// Metric space file (kind `metric_space`).
    metric: PathBuf,
    /// First measure (kind `measure`).
    #[arg(long)]
    v1: PathBuf,
    /// Second measure (kind `measure`).
    #[arg(long)]
    v2: PathBuf,
    /// Print an optimal test function.
    #[arg(long)]
    certificate: bool,
    /// Cross-check against the vertex-enumeration oracle.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: monad-laws, lifting-laws, closed-objects, comonad-laws,
    /// engine-vs-closed-form.
    suite: String,
    /// Carrier size bound for the exhaustive batteries.
    #[arg(long, default_value_t = 2)]
    max_points: usize,
}

#[derive(Args)]
struct DensityArgs {
    /// Arity atoms, comma-separated.
    #[arg(long)]
    arity: String,
    /// Parameter carrier atoms, comma-separated.
    #[arg(long, name = "r")]
    r: String,
    /// Parameter members as `r,a` pairs separated by `;`.
    #[arg(long, default_value = "")]
    s0: String,
    /// Base predicate file (kind `pred`).
    pred: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StreamArgs {
    /// Stream parameter file (kind `stream_param`).
    #[arg(long)]
    param: PathBuf,
    /// Base predicate file (kind `pred`).
    #[arg(long)]
    pred: PathBuf,
    /// Candidate stream as `prefix|cycle` over the predicate's ambient.
    #[arg(long)]
    stream: String,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Lift(args) => cmd_lift(args),
        Command::Check(args) => cmd_check(args),
        Command::Kantorovich(args) => cmd_kantorovich(args),
        Command::Verify(args) => cmd_verify(args),
        Command::DensityLift(args) => cmd_density_lift(args),
        Command::StreamMember(args) => cmd_stream_member(args),
    }
}

fn engine_error(e: kanlift_core::codensity::EngineError) -> CliError {
    use kanlift_core::codensity::EngineError as E;
    match e {
        E::Fibre(_) | E::ParamCarrierMismatch { .. } | E::MixedParamTags => {
            CliError::Mismatch(e.to_string())
        }
        other => CliError::Schema(other.to_string()),
    }
}

fn cmd_lift(args: LiftArgs) -> CliResult<ExitCode> {
    if args.monad != "powerset" {
        return Err(CliError::Schema(format!(
            "unknown monad `{}` (built-in: powerset)",
            args.monad
        )));
    }
    let monad = powerset_monad();
    let instance = files::load_lift_instance(&args.instance)?;

    let (param, param_name): (LiftingParam, String) = match (&args.param, &args.param_file) {
        (Some(name), None) => {
            let kind = ClosedFormKind::from_name(name).ok_or_else(|| {
                CliError::Schema(format!(
                    "unknown parameter `{name}` (expected lower-pre, upper-pre, convex-pre, lower-vietoris, upper-vietoris)"
                ))
            })?;
            (builtin_param(&monad, kind), name.clone())
        }
        (None, Some(path)) => (files::load_lifting_param(path)?, "inline".to_string()),
        _ => {
            return Err(CliError::Schema(
                "exactly one of --param and --param-file is required".to_string(),
            ))
        }
    };

    let lifted = codensity_lift(&monad, &param, &instance).map_err(engine_error)?;
    print!("{}", render::fibre_to_table(&lifted.result)?);
    println!("hom-set elements folded: {}", lifted.witness_count);

    let result = json!({
        "format_version": files::FORMAT_VERSION,
        "command": "lift",
        "monad": args.monad,
        "param": param_name,
        "base": render::fibre_to_json(&instance)?,
        "result": render::fibre_to_json(&lifted.result)?,
        "witness_count": lifted.witness_count,
    });
    render::write_result(args.out.as_deref(), &result)?;
    Ok(ExitCode::SUCCESS)
}

fn giry_error(e: GiryError) -> CliError {
    match e {
        GiryError::ActionMismatch | GiryError::SpaceMismatch(_) => {
            CliError::Mismatch(e.to_string())
        }
        other => CliError::Schema(other.to_string()),
    }
}

fn verdict_output(
    kind: &str,
    witness: Option<SimWitness>,
    out: Option<&Path>,
) -> CliResult<ExitCode> {
    let holds = witness.is_none();
    if holds {
        println!("{kind}: holds");
    } else {
        println!("{kind}: FAILS");
        if let Some(w) = &witness {
            println!("{}", render::witness_to_text(w));
        }
    }
    let result = json!({
        "format_version": files::FORMAT_VERSION,
        "command": "check",
        "kind": kind,
        "holds": holds,
        "witness": witness.as_ref().map(render::witness_to_json),
    });
    render::write_result(out, &result)?;
    Ok(if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_check(args: CheckArgs) -> CliResult<ExitCode> {
    match args.kind.as_str() {
        "sim1" => {
            let [lmp_path, rel_path] = args.files.as_slice() else {
                return Err(CliError::Schema(
                    "sim1 expects a process file and a relation file".to_string(),
                ));
            };
            let lmp = files::load_lmp(lmp_path)?;
            let carrier = lmp.space().carrier().clone();
            let rel = files::load_relation(rel_path, &carrier, &carrier)?;
            let endo = EndoRel::from_rows(carrier, rel.rows().to_vec());
            let witness = check_simulation_single(&lmp, &endo).map_err(giry_error)?;
            verdict_output("sim1", witness, args.out.as_deref())
        }
        "sim2" | "bisim" => {
            let [lmp1_path, lmp2_path, rel_path] = args.files.as_slice() else {
                return Err(CliError::Schema(format!(
                    "{} expects two process files and a relation file",
                    args.kind
                )));
            };
            let lmp1 = files::load_lmp(lmp1_path)?;
            let lmp2 = files::load_lmp(lmp2_path)?;
            let rel = files::load_relation(
                rel_path,
                lmp1.space().carrier(),
                lmp2.space().carrier(),
            )?;
            let witness = if args.kind == "sim2" {
                check_simulation_two(&lmp1, &lmp2, &rel).map_err(giry_error)?
            } else {
                check_bisimulation(&lmp1, &lmp2, &rel).map_err(giry_error)?
            };
            verdict_output(&args.kind, witness, args.out.as_deref())
        }
        other => Err(CliError::Schema(format!(
            "unknown check kind `{other}` (expected sim1, sim2, bisim)"
        ))),
    }
}

fn kant_error(e: KantError) -> CliError {
    match e {
        KantError::SpaceMismatch(_) => CliError::Mismatch(e.to_string()),
        other => CliError::Schema(other.to_string()),
    }
}

fn cmd_kantorovich(args: KantorovichArgs) -> CliResult<ExitCode> {
    let metric = files::load_metric(&args.metric)?;
    let v1 = files::load_measure(&args.v1, metric.carrier())?;
    let v2 = files::load_measure(&args.v2, metric.carrier())?;
    if v1.space() != v2.space() {
        return Err(CliError::Mismatch(
            "the two measures declare different σ-algebras".to_string(),
        ));
    }
    let result = kantorovich(&metric, &v1, &v2).map_err(kant_error)?;
    println!("{}", format_q(&result.distance));
    if args.certificate {
        for (i, atom) in metric.carrier().atoms().iter().enumerate() {
            println!("f({atom}) = {}", format_q(&result.optimal_f[i]));
        }
    }
    let mut oracle_agrees = None;
    if args.oracle {
        let reference = kantorovich_oracle(&metric, &v1, &v2).map_err(kant_error)?;
        let agrees = reference == result.distance;
        println!(
            "oracle: {} ({})",
            format_q(&reference),
            if agrees { "agrees" } else { "DISAGREES" }
        );
        oracle_agrees = Some(agrees);
    }
    let payload = json!({
        "format_version": files::FORMAT_VERSION,
        "command": "kantorovich",
        "distance": format_q(&result.distance),
        "certificate": if args.certificate {
            Some(result.optimal_f.iter().map(format_q).collect::<Vec<_>>())
        } else {
            None
        },
        "oracle_agrees": oracle_agrees,
    });
    render::write_result(args.out.as_deref(), &payload)?;
    Ok(if oracle_agrees == Some(false) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn print_report(report: &LawReport) {
    print!("{report}");
}

fn cmd_verify(args: VerifyArgs) -> CliResult<ExitCode> {
    let monad = powerset_monad();
    let max = args.max_points.min(3);
    let report = match args.suite.as_str() {
        "monad-laws" => {
            let carriers = [FinSet::empty(), FinSet::of(&["x"]), FinSet::of(&["x", "y"])];
            verify_monad_laws(&monad, &carriers)
        }
        "lifting-laws" => {
            let mut combined = LawReport::new("lifting laws for the built-in parameters".into());
            for kind in all_kinds() {
                let samples = samples_for(kind, max);
                let param = builtin_param(&monad, kind);
                let lift =
                    |x: &FibreObject| codensity_lift(&monad, &param, x).map(|l| l.result);
                let mut report = verify_lifting_laws(&monad, &lift, &samples);
                for check in &mut report.checks {
                    check.law = format!("{}: {}", kind.name(), check.law);
                }
                combined.extend(report);
            }
            combined
        }
        "closed-objects" => {
            let mut report = LawReport::new("closed objects".into());
            for kind in all_kinds() {
                let param = builtin_param(&monad, kind);
                let mut check =
                    kanlift_core::report::LawCheck::pass(&format!("{}: outputs closed, seeding returns them", kind.name()));
                'kind: for x in samples_for(kind, max) {
                    let s = codensity_lift(&monad, &param, &x)
                        .map_err(engine_error)?
                        .result;
                    match is_closed(&monad, &x, &s) {
                        Ok(true) => {}
                        Ok(false) => {
                            check = kanlift_core::report::LawCheck::fail(
                                &format!("{}: outputs closed, seeding returns them", kind.name()),
                                format!("engine output at {x:?} not closed"),
                            );
                            break 'kind;
                        }
                        Err(e) => return Err(engine_error(e)),
                    }
                    let back = phi(&monad, &x, &s, &x).map_err(engine_error)?;
                    if back != s {
                        check = kanlift_core::report::LawCheck::fail(
                            &format!("{}: outputs closed, seeding returns them", kind.name()),
                            format!("seeded lifting at {x:?} returned {back:?}"),
                        );
                        break 'kind;
                    }
                }
                report.push(check);
            }
            report
        }
        "comonad-laws" => {
            let mut report = product_comonad_laws(2, 2, 2);
            let binary = FinSet::of(&["0", "1"]);
            let xy = FinSet::of(&["x", "y"]);
            let v = Lasso::new(&binary, [], ["0", "1"]).expect("alphabet atoms exist");
            let param = kanlift_core::density::StreamParam::new(binary, vec![v])
                .expect("parameter over its own alphabet");
            let pred = Subset::from_atoms(&xy, ["x"]).expect("ambient atoms exist");
            let candidates = [
                Lasso::new(&xy, [], ["x", "y"]).unwrap(),
                Lasso::new(&xy, [], ["y", "x"]).unwrap(),
                Lasso::new(&xy, ["y"], ["x", "y"]).unwrap(),
                Lasso::new(&xy, [], ["x"]).unwrap(),
            ];
            report.extend(stream_comonad_laws(&param, &pred, &candidates));
            report
        }
        "engine-vs-closed-form" => engine_matches_closed_forms(&monad, args.max_points.min(3).max(3)),
        other => {
            return Err(CliError::Schema(format!(
                "unknown suite `{other}` (expected monad-laws, lifting-laws, closed-objects, comonad-laws, engine-vs-closed-form)"
            )))
        }
    };
    print_report(&report);
    Ok(if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn all_kinds() -> [ClosedFormKind; 5] {
    [
        ClosedFormKind::LowerPre,
        ClosedFormKind::UpperPre,
        ClosedFormKind::ConvexPre,
        ClosedFormKind::LowerVietoris,
        ClosedFormKind::UpperVietoris,
    ]
}

fn samples_for(kind: ClosedFormKind, max: usize) -> Vec<FibreObject> {
    if kind.expected_tag() == Tag::Pre {
        kanlift_core::codensity::all_preorders_up_to(max)
    } else {
        kanlift_core::codensity::all_topologies_up_to(max)
    }
}

fn split_atoms(text: &str) -> Vec<String> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

fn cmd_density_lift(args: DensityArgs) -> CliResult<ExitCode> {
    let arity_atoms = split_atoms(&args.arity);
    let r_atoms = split_atoms(&args.r);
    let arity = FinSet::new(arity_atoms)
        .map_err(|e| CliError::Schema(format!("arity: {e}")))?;
    let r = FinSet::new(r_atoms).map_err(|e| CliError::Schema(format!("parameter carrier: {e}")))?;
    let ra = r.product(&arity);
    let mut s = Subset::empty(&ra);
    for pair in args.s0.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let parts = split_atoms(pair);
        let [rv, av] = parts.as_slice() else {
            return Err(CliError::Schema(format!(
                "parameter member `{pair}` must be `r,a`"
            )));
        };
        let ri = r
            .index_of(rv)
            .ok_or_else(|| CliError::Schema(format!("unknown parameter atom `{rv}`")))?;
        let ai = arity
            .index_of(av)
            .ok_or_else(|| CliError::Schema(format!("unknown arity atom `{av}`")))?;
        let atom = ra.atom(r.pair_index(&arity, ri, ai)).clone();
        s = s
            .union(&Subset::from_atoms(&ra, [atom.as_str()]).expect("product atom exists"))
            .expect("same ambient");
    }
    let x = files::load_pred(&args.pred)?;

    let lifted = product_density_lift(&arity, &r, &s, &x)
        .map_err(|e| CliError::Mismatch(e.to_string()))?;
    let direct = product_density_lift_enumerate(&arity, &r, &s, &x)
        .map_err(|e| CliError::Mismatch(e.to_string()))?;
    let agree = lifted == direct;

    let members: Vec<_> = lifted.members().cloned().collect();
    println!(
        "lifted predicate over {} atoms: {{{}}}",
        lifted.ambient().len(),
        members.join(", ")
    );
    println!(
        "cross-check against direct enumeration: {}",
        if agree { "agree" } else { "DISAGREE" }
    );
    let result = json!({
        "format_version": files::FORMAT_VERSION,
        "command": "density-lift",
        "ambient": lifted.ambient().atoms(),
        "members": members,
        "cross_check": agree,
    });
    render::write_result(args.out.as_deref(), &result)?;
    Ok(if agree { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_stream_member(args: StreamArgs) -> CliResult<ExitCode> {
    let param = files::load_stream_param(&args.param)?;
    let pred = files::load_pred(&args.pred)?;
    let stream = Lasso::parse(pred.ambient(), &args.stream)
        .map_err(|e| CliError::Schema(format!("stream: {e}")))?;
    let member = stream_density_member(&param, &pred, &stream)
        .map_err(|e| CliError::Mismatch(e.to_string()))?;
    println!(
        "{}: {}",
        stream.display(),
        if member { "member" } else { "not a member" }
    );
    Ok(if member {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

// closed_form_lift is re-exported for the integration tests
#[allow(unused_imports)]
use closed_form_lift as _closed_form_lift;
