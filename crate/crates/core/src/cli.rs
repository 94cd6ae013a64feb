//! Command-line front end.
//!
//! Exit codes: `0` success or relation holds, `1` relation fails, `2` input
//! or infeasibility error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exec::{
    brute_force_optimal, build_energy_aware_ts, build_pal_energy_ts, build_pal_time_ts, build_reconfigurable_ts,
    optimal_offline, run_fixed, run_policy, GuardMode, SchemeId, Trace, DEFAULT_BRUTE_FORCE_BOUND,
};
use crate::json;
use crate::machine::{parse_model, validate_model, CostModel};
use crate::num::Fixed;
use crate::relations::{
    check_by_simulation, check_c_simulation, largest_betterment, largest_simulation, min_c_factor, project,
    ObsProjection, RelationVerdict,
};
use crate::ts::WeightedTs;
use crate::weight::{TimeEnergyWeight, TimeWeight};
use crate::workload::{gen_synthetic, parse_workload, GenParams, Profile, WorkloadFormat, WorkloadSpec};

#[derive(Parser, Debug)]
#[command(name = "wtsim", version, about = "Deadline-constrained execution on reconfigurable machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Execute a workload under a scheme and write the trace.
    Run {
        #[arg(long)]
        workload: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "baseline")]
        scheme: String,
        /// Execute only the first N actions.
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value = "literal")]
        guard_mode: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide a relation between two systems built from one workload.
    Check {
        #[arg(long, value_enum)]
        relation: RelationKind,
        #[arg(long)]
        workload: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Left-hand (simulated) system.
        #[arg(long, default_value = "spec")]
        lhs: String,
        /// Right-hand (simulating) system.
        #[arg(long, alias = "scheme")]
        rhs: String,
        #[arg(long, default_value = "time")]
        obs: String,
        /// Constant factor for `csim`.
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value = "literal")]
        guard_mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the offline minimum-energy schedule.
    Optimal {
        #[arg(long)]
        workload: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Dp)]
        method: Method,
        /// Upper bound on |configs|^n for the brute-force method.
        #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_BOUND)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic workload.
    Gen {
        #[arg(long, default_value = "uniform")]
        profile: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1")]
        min: String,
        #[arg(long, default_value = "10")]
        max: String,
        /// Comma-separated action labels.
        #[arg(long, default_value = "f")]
        labels: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Empirical competitive ratio of a scheme against a reference run.
    Compare {
        #[arg(long)]
        workload: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Against::Optimal)]
        against: Against,
        #[arg(long, default_value = "pal_energy")]
        scheme: String,
        #[arg(long, default_value = "energy")]
        obs: String,
        #[arg(long, default_value = "literal")]
        guard_mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RelationKind {
    Bysim,
    Sim,
    Betterment,
    Csim,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Method {
    Dp,
    Bruteforce,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Against {
    Optimal,
    Baseline,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Run { workload, model, scheme, horizon, guard_mode, format, out: path } => {
            let (spec, m) = load(&workload, &model, horizon, err)?;
            let mode: GuardMode = guard_mode.parse()?;
            let (name, trace) = if let Some(r) = scheme.strip_prefix("fixed:") {
                (scheme.clone(), run_fixed(r, &spec, &m)?)
            } else {
                let id: SchemeId = scheme.parse()?;
                (id.name().to_string(), run_policy(id, &spec, &m, mode)?)
            };
            emit_trace(&trace, &m, &name, format, path.as_deref(), out)?;
            Ok(0)
        }
        Command::Check { relation, workload, model, lhs, rhs, obs, c, horizon, guard_mode, out: path } => {
            let factor = match (relation, c) {
                (RelationKind::Csim, None) => {
                    return Err(Error::InvalidParams("--c is required for --relation csim".into()))
                }
                (RelationKind::Csim, Some(c)) => Some(parse_fixed(&c, "--c")?),
                (_, _) => None,
            };
            let (spec, m) = load(&workload, &model, horizon, err)?;
            let mode: GuardMode = guard_mode.parse()?;
            let obs: ObsProjection = obs.parse()?;
            let t1 = build_system(&lhs, &spec, &m, mode, obs)?;
            let t2 = build_system(&rhs, &spec, &m, mode, obs)?;
            let verdict: RelationVerdict = match relation {
                RelationKind::Bysim => check_by_simulation(&t1, &t2)?,
                RelationKind::Sim => largest_simulation(&t1, &t2)?,
                RelationKind::Betterment => largest_betterment(&t1, &t2)?,
                RelationKind::Csim => {
                    check_c_simulation(&t1, &t2, &TimeWeight::new(factor.expect("checked above")))?
                }
            };
            write_json(&verdict.to_json(), path.as_deref(), out)?;
            Ok(if verdict.holds { 0 } else { 1 })
        }
        Command::Optimal { workload, model, method, bound, format, out: path } => {
            let (spec, m) = load(&workload, &model, None, err)?;
            let (name, (trace, _)) = match method {
                Method::Dp => ("optimal_dp", optimal_offline(&spec, &m)?),
                Method::Bruteforce => ("bruteforce", brute_force_optimal(&spec, &m, bound)?),
            };
            emit_trace(&trace, &m, name, format, path.as_deref(), out)?;
            Ok(0)
        }
        Command::Gen { profile, n, seed, min, max, labels, format, out: path } => {
            let profile: Profile = profile.parse()?;
            let params = GenParams {
                min: parse_fixed(&min, "--min")?,
                max: parse_fixed(&max, "--max")?,
                labels: labels.split(',').map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect(),
                ..GenParams::default()
            };
            let spec = gen_synthetic(profile, n, seed, params)?;
            let text = match format {
                Format::Json => pretty(&spec.to_json()),
                Format::Csv => spec.to_csv()?,
            };
            write_text(&text, path.as_deref(), out)?;
            Ok(0)
        }
        Command::Compare { workload, model, against, scheme, obs, guard_mode, out: path } => {
            let (spec, m) = load(&workload, &model, None, err)?;
            let mode: GuardMode = guard_mode.parse()?;
            let obs: ObsProjection = obs.parse()?;
            let scheme_id: SchemeId = scheme.parse()?;
            let reference = match against {
                Against::Optimal => optimal_offline(&spec, &m)?.0,
                Against::Baseline => run_policy(SchemeId::Baseline, &spec, &m, mode)?,
            };
            let candidate = run_policy(scheme_id, &spec, &m, mode)?;
            let alphabet = spec.alphabet();
            let t1 = project(&reference.to_ts(&alphabet)?, obs)?;
            let t2 = project(&candidate.to_ts(&alphabet)?, obs)?;
            let min_c = min_c_factor(&t1, &t2)?;
            let report = json::object([
                ("scheme", Value::String(scheme_id.name().to_string())),
                ("against", Value::String(match against {
                    Against::Optimal => "optimal".into(),
                    Against::Baseline => "baseline".into(),
                })),
                ("scheme_energy", json::number(candidate.total_energy())),
                ("reference_energy", json::number(reference.total_energy())),
                ("min_c", json::number(min_c)),
                ("alpha_hat", alpha_hat(&spec, &m)?.map_or(Value::Null, json::number)),
            ]);
            write_json(&report, path.as_deref(), out)?;
            Ok(0)
        }
    }
}

/// `max τ(r,a)/τ(rmax,a)` over the workload's actions and all configs,
/// rounded up; `None` when `rmax` takes zero time on every action.
pub fn alpha_hat(spec: &WorkloadSpec, m: &CostModel) -> Result<Option<Fixed>> {
    let rmax = m.rmax()?;
    let mut best: Option<Fixed> = None;
    for label in spec.alphabet() {
        let base = m.tau(rmax, &label)?;
        if !base.is_positive() {
            continue;
        }
        for r in m.ids() {
            let ratio = Fixed::ratio_ceil(m.tau(r, &label)?, base);
            best = Some(best.map_or(ratio, |b| b.max(ratio)));
        }
    }
    Ok(best)
}

/// Builds a named system as a scalar-observing transition system.
///
/// Names: `spec`, `reconfigurable`, `pal_time` (time-only systems),
/// `energy_aware`, `pal_energy` (time and energy), and deterministic runs
/// `fixed:NAME`, `baseline`, `greedy_min_energy`, `optimal_dp`, or
/// `run:SCHEME` for the path taken by any scheme's policy.
fn build_system(
    name: &str,
    spec: &WorkloadSpec,
    m: &CostModel,
    mode: GuardMode,
    obs: ObsProjection,
) -> Result<WeightedTs<TimeWeight>> {
    let n = spec.len();
    let time_only = |ts: WeightedTs<TimeWeight>| -> Result<WeightedTs<TimeWeight>> {
        match obs {
            ObsProjection::Time => Ok(ts),
            _ => Err(Error::InvalidParams(format!("system `{name}` observes time only"))),
        }
    };
    let trace = |t: Trace| -> Result<WeightedTs<TimeWeight>> { project(&t.to_ts(&spec.alphabet())?, obs) };
    let both = |ts: WeightedTs<TimeEnergyWeight>| project(&ts, obs);
    match name {
        "spec" => time_only(spec.build_spec_ts()),
        "reconfigurable" => time_only(build_reconfigurable_ts(spec, m, n)?.ts),
        "pal_time" => time_only(build_pal_time_ts(spec, m, n, mode)?.ts),
        "energy_aware" => both(build_energy_aware_ts(spec, m, n)?.ts),
        "pal_energy" => both(build_pal_energy_ts(spec, m, n, mode)?.ts),
        "baseline" | "greedy_min_energy" | "optimal_dp" => trace(run_policy(name.parse()?, spec, m, mode)?),
        other => {
            if let Some(r) = other.strip_prefix("fixed:") {
                trace(run_fixed(r, spec, m)?)
            } else if let Some(s) = other.strip_prefix("run:") {
                trace(run_policy(s.parse()?, spec, m, mode)?)
            } else {
                Err(Error::InvalidParams(format!("unknown system `{other}`")))
            }
        }
    }
}

fn load(workload: &Path, model: &Path, horizon: Option<usize>, err: &mut dyn Write) -> Result<(WorkloadSpec, CostModel)> {
    let text = std::fs::read_to_string(workload)?;
    let mut spec = parse_workload(&text, WorkloadFormat::from_path(workload))?;
    if let Some(h) = horizon {
        spec = spec.prefix(h)?;
    }
    let m = parse_model(&std::fs::read_to_string(model)?)?;
    let violations = validate_model(&m, &spec.alphabet());
    let mut structural = Vec::new();
    for v in violations {
        if v.is_structural() {
            structural.push(v.to_string());
        } else {
            let _ = writeln!(err, "warning: {v}");
        }
    }
    if !structural.is_empty() {
        return Err(Error::InvalidParams(format!("invalid model: {}", structural.join("; "))));
    }
    Ok((spec, m))
}

fn parse_fixed(text: &str, flag: &str) -> Result<Fixed> {
    Fixed::parse(text).map_err(|source| Error::Number { context: flag.to_string(), source })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn emit_trace(trace: &Trace, m: &CostModel, scheme: &str, format: Format, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let text = match format {
        Format::Json => pretty(&trace.to_json(m, scheme)),
        Format::Csv => trace.to_csv(m)?,
    };
    write_text(&text, path, out)
}

fn write_json(v: &Value, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    write_text(&pretty(v), path, out)
}

fn write_text(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desk;

    fn invoke(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("wtsim").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(invoke(&[]).0, 2);
        assert_eq!(invoke(&["frobnicate"]).0, 2);
        assert_eq!(invoke(&["--help"]).0, 0);
    }

    #[test]
    fn alpha_hat_desk() {
        assert_eq!(alpha_hat(&desk::w1(), &desk::m1()).unwrap(), Some("1.666666667".parse().unwrap()));
        assert_eq!(alpha_hat(&WorkloadSpec::default(), &desk::m1()).unwrap(), None);
    }

    #[test]
    fn csim_needs_factor() {
        let (code, _, err) = invoke(&[
            "check", "--relation", "csim", "--workload", "w.json", "--model", "m.json", "--rhs", "baseline",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("--c"));
    }
}
