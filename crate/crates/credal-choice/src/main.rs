use clap::{Parser, Subcommand, ValueEnum};
use credal_choice::choice::{choose, reject_option, ChoiceModel, Criterion};
use credal_choice::axioms::{check_coherence_axioms, find_mixing_violation};
use credal_choice::error::Error;
use credal_choice::independence::{
    classical_independent_events, classical_independent_variables, event_credibility,
    is_trivial_event, is_trivial_variable, s_independent_events, s_independent_variables,
    s_irrelevant_events, s_irrelevant_variables, variable_credibly_indeterminate, EventWitness,
    Method, Witness, DEFAULT_SUBSET_CAP,
};
use credal_choice::io::{self, gamble_json, model_file_json, option_set_json, ModelFile};
use credal_choice::marginals::{corollary1_check, distribution_model};
use credal_choice::model::{Event, Gamble, OptionSet, Variable};
use credal_choice::rational::format_rat;
use credal_choice::verify::{run_verify_suite_filtered, SuiteConfig};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::process::ExitCode;

/// Exact checks and choices for sets of probabilities on finite spaces.
#[derive(Parser)]
#[command(name = "credal-choice", version)]
struct Cli {
    /// Emit canonical JSON (sorted keys, reduced rationals) instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Lower,
    Upper,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Meu,
    Maximality,
    Eadmissibility,
    Lowerset,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Criterion {
        match c {
            CriterionArg::Meu => Criterion::Meu,
            CriterionArg::Maximality => Criterion::Maximality,
            CriterionArg::Eadmissibility => Criterion::EAdmissibility,
            CriterionArg::Lowerset => Criterion::Lowerset,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Event,
    Variable,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    SIrrelevance,
    SIndependence,
    Classical,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Direct,
    Characterization,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the lower/upper prevision of a gamble.
    Eval {
        #[arg(short, long)]
        model: String,
        /// Named gamble or inline JSON object atom→rational.
        #[arg(short, long)]
        gamble: String,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Test membership of an option set in the set of desirable option sets.
    Member {
        #[arg(short, long)]
        model: String,
        /// Named option set or inline JSON array of gambles.
        #[arg(short = 'A', long)]
        option_set: String,
    },
    /// Apply a decision criterion to an option set.
    Choose {
        #[arg(short, long)]
        model: String,
        #[arg(short = 'A', long)]
        option_set: String,
        #[arg(short, long, value_enum)]
        criterion: CriterionArg,
    },
    /// Decide rejection of one option from an option set.
    Reject {
        #[arg(short, long)]
        model: String,
        #[arg(short = 'A', long)]
        option_set: String,
        /// Named gamble or inline JSON.
        #[arg(short, long)]
        option: String,
    },
    /// Spot-check the coherence axioms on sampled instances.
    CheckCoherence {
        #[arg(short, long)]
        model: String,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Search for a violation of the mixing property.
    FindMixingViolation {
        #[arg(short, long)]
        model: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Decide irrelevance / independence between events or variables.
    CheckIndependence {
        #[arg(short, long)]
        model: String,
        #[arg(long, value_enum)]
        level: LevelArg,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Named event/variable (per --level) or inline JSON event.
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Report credibility of an event, or credible indeterminacy of a variable.
    CheckCredibility {
        #[arg(short, long)]
        model: String,
        #[arg(long, conflicts_with = "variable")]
        event: Option<String>,
        #[arg(long)]
        variable: Option<String>,
    },
    /// Decide triviality of an event or variable, member by member.
    CheckTrivial {
        #[arg(short, long)]
        model: String,
        #[arg(long, conflicts_with = "variable")]
        event: Option<String>,
        #[arg(long)]
        variable: Option<String>,
    },
    /// Push the model forward along a variable and print the induced model.
    Marginalize {
        #[arg(short, long)]
        model: String,
        #[arg(long)]
        variable: String,
    },
    /// Run the combined marginalization check over a pair of variables.
    Corollary1 {
        #[arg(short, long)]
        model: String,
        #[arg(short = 'x', long)]
        first: String,
        #[arg(short = 'y', long)]
        second: String,
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run the differential battery suite.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long)]
        battery: Option<String>,
        /// Disable the parallel pool.
        #[arg(long)]
        sequential: bool,
    },
}

fn subset_cap() -> usize {
    std::env::var("CREDAL_CHOICE_SUBSET_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_SUBSET_CAP)
}

fn load(path: &str) -> Result<ModelFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {path:?}: {e}")))?;
    io::parse_model_file(&text)
}

fn resolve_gamble(mf: &ModelFile, name_or_json: &str) -> Result<Gamble, Error> {
    if name_or_json.trim_start().starts_with('{') {
        let map: BTreeMap<String, String> =
            serde_json::from_str(name_or_json).map_err(|e| Error::Parse(e.to_string()))?;
        io::parse_gamble(&mf.space, &map)
    } else {
        mf.gambles
            .get(name_or_json)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("unknown gamble {name_or_json:?}")))
    }
}

fn resolve_option_set(mf: &ModelFile, name_or_json: &str) -> Result<OptionSet, Error> {
    if name_or_json.trim_start().starts_with('[') {
        let list: Vec<BTreeMap<String, String>> =
            serde_json::from_str(name_or_json).map_err(|e| Error::Parse(e.to_string()))?;
        let gambles = list
            .iter()
            .map(|m| io::parse_gamble(&mf.space, m))
            .collect::<Result<Vec<_>, _>>()?;
        OptionSet::new(mf.space.clone(), gambles)
    } else {
        mf.option_sets
            .get(name_or_json)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("unknown option set {name_or_json:?}")))
    }
}

fn resolve_event(mf: &ModelFile, name_or_json: &str) -> Result<Event, Error> {
    if name_or_json.trim_start().starts_with('[') {
        let labels: Vec<String> =
            serde_json::from_str(name_or_json).map_err(|e| Error::Parse(e.to_string()))?;
        Event::from_labels(mf.space.clone(), labels.iter().map(String::as_str))
    } else {
        mf.events
            .get(name_or_json)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("unknown event {name_or_json:?}")))
    }
}

fn resolve_variable(mf: &ModelFile, name: &str) -> Result<Variable, Error> {
    mf.variables
        .get(name)
        .cloned()
        .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))
}

fn emit(json: bool, value: Value, text: String) {
    if json {
        println!("{}", serde_json::to_string(&value).expect("serializable"));
    } else {
        println!("{text}");
    }
}

fn event_witness_json(w: &EventWitness) -> Value {
    json!({
        "member": w.member,
        "lambda": format_rat(&w.lambda),
        "mu": format_rat(&w.mu),
        "gamble": gamble_json(&w.gamble),
    })
}

fn witness_json(w: &Witness, x: Option<&Variable>, y: Option<&Variable>) -> Value {
    match w {
        Witness::Event(e) => event_witness_json(e),
        Witness::Variable(v) => {
            let labels = |var: Option<&Variable>, subset: &std::collections::BTreeSet<usize>| {
                var.map(|var| {
                    subset
                        .iter()
                        .map(|&i| var.codomain()[i].clone())
                        .collect::<Vec<_>>()
                })
            };
            json!({
                "x_subset": labels(x, &v.x_subset),
                "y_subset": labels(y, &v.y_subset),
                "witness": event_witness_json(&v.inner),
            })
        }
    }
}

/// Exit code contract: 0 = property holds / plain success, 1 = property
/// fails (witness on stdout), 2 = usage or data error.
fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.cmd {
        Cmd::Eval { model, gamble, side } => {
            let mf = load(model)?;
            let f = resolve_gamble(&mf, gamble)?;
            let member = match &mf.model {
                ChoiceModel::Linear(_) | ChoiceModel::Credal(_) => mf.model.members()[0],
                ChoiceModel::LowerSet(_) => {
                    return Err(Error::PreconditionFailed(
                        "eval expects a linear or credal model; lower sets have one envelope per member"
                            .into(),
                    ))
                }
            };
            let (lo, hi) = (member.lower(&f)?, member.upper(&f)?);
            match side {
                SideArg::Lower => emit(cli.json, json!({"lower": format_rat(&lo)}),
                    format!("lower = {}", format_rat(&lo))),
                SideArg::Upper => emit(cli.json, json!({"upper": format_rat(&hi)}),
                    format!("upper = {}", format_rat(&hi))),
                SideArg::Both => emit(
                    cli.json,
                    json!({"lower": format_rat(&lo), "upper": format_rat(&hi)}),
                    format!("lower = {}, upper = {}", format_rat(&lo), format_rat(&hi)),
                ),
            }
            Ok(0)
        }
        Cmd::Member { model, option_set } => {
            let mf = load(model)?;
            let a = resolve_option_set(&mf, option_set)?;
            let slack = mf.model.archimedean_slack(&a)?;
            let member = mf.model.k_member(&a)?;
            emit(
                cli.json,
                json!({
                    "member": member,
                    "archimedean_slack": slack.as_ref().map(format_rat),
                }),
                format!(
                    "member: {member} (archimedean slack {})",
                    slack.as_ref().map(format_rat).unwrap_or_else(|| "-".into())
                ),
            );
            Ok(if member { 0 } else { 1 })
        }
        Cmd::Choose { model, option_set, criterion } => {
            let mf = load(model)?;
            let a = resolve_option_set(&mf, option_set)?;
            let result = choose(&mf.model, &a, (*criterion).into())?;
            let certs: Vec<Value> = result
                .certificates
                .iter()
                .map(|c| {
                    json!({
                        "option": gamble_json(&c.option),
                        "witnesses": c.witnesses.iter().map(gamble_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            emit(
                cli.json,
                json!({
                    "chosen": option_set_json(&result.chosen),
                    "rejected": option_set_json(&result.rejected),
                    "certificates": certs,
                }),
                format!(
                    "chosen {} of {} options: {:?}\nrejected: {:?}",
                    result.chosen.len(),
                    a.len(),
                    result.chosen,
                    result.rejected
                ),
            );
            Ok(0)
        }
        Cmd::Reject { model, option_set, option } => {
            let mf = load(model)?;
            let a = resolve_option_set(&mf, option_set)?;
            let f = resolve_gamble(&mf, option)?;
            match reject_option(&mf.model, &a, &f)? {
                Some(cert) => {
                    emit(
                        cli.json,
                        json!({
                            "rejected": true,
                            "witnesses": cert.witnesses.iter().map(gamble_json).collect::<Vec<_>>(),
                        }),
                        format!("rejected; per-member witnesses {:?}", cert.witnesses),
                    );
                    Ok(0)
                }
                None => {
                    emit(cli.json, json!({"rejected": false}), "not rejected".into());
                    Ok(1)
                }
            }
        }
        Cmd::CheckCoherence { model, instances, seed } => {
            let mf = load(model)?;
            let reports = check_coherence_axioms(&mf.model, *instances, *seed)?;
            let ok = reports.iter().all(|r| r.passed());
            let detail: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "axiom": r.axiom,
                        "instances": r.instances,
                        "violations": r.violations,
                    })
                })
                .collect();
            let text = reports
                .iter()
                .map(|r| format!("{}: {}", r.axiom, if r.passed() { "ok" } else { "VIOLATED" }))
                .collect::<Vec<_>>()
                .join("\n");
            emit(cli.json, json!({"passed": ok, "axioms": detail}), text);
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::FindMixingViolation { model, trials, seed } => {
            let mf = load(model)?;
            match find_mixing_violation(&mf.model, *trials, *seed)? {
                Some(w) => {
                    emit(
                        cli.json,
                        json!({
                            "violation": true,
                            "B": option_set_json(&w.b),
                            "A": option_set_json(&w.a),
                        }),
                        format!("mixing violated:\n  B = {:?}\n  A = {:?}", w.b, w.a),
                    );
                    Ok(1)
                }
                None => {
                    emit(cli.json, json!({"violation": false}),
                        format!("no violation in {trials} trials"));
                    Ok(0)
                }
            }
        }
        Cmd::CheckIndependence { model, level, kind, first, second, method } => {
            let mf = load(model)?;
            check_independence(cli, &mf, *level, *kind, first, second, *method)
        }
        Cmd::CheckCredibility { model, event, variable } => {
            let mf = load(model)?;
            match (event, variable) {
                (Some(e), None) => {
                    let ev = resolve_event(&mf, e)?;
                    let status = event_credibility(&mf.model, &ev)?;
                    emit(
                        cli.json,
                        json!({
                            "credible": status.credible,
                            "complement_credible": status.complement_credible,
                            "credibly_indeterminate": status.credibly_indeterminate(),
                        }),
                        format!(
                            "credible: {}, complement credible: {}, credibly indeterminate: {}",
                            status.credible,
                            status.complement_credible,
                            status.credibly_indeterminate()
                        ),
                    );
                    Ok(if status.credible { 0 } else { 1 })
                }
                (None, Some(v)) => {
                    let var = resolve_variable(&mf, v)?;
                    let witness = variable_credibly_indeterminate(&mf.model, &var)?;
                    let labels = witness.as_ref().map(|s| {
                        s.iter().map(|&i| var.codomain()[i].clone()).collect::<Vec<_>>()
                    });
                    emit(
                        cli.json,
                        json!({
                            "credibly_indeterminate": witness.is_some(),
                            "witness_values": labels,
                        }),
                        match &labels {
                            Some(l) => format!("credibly indeterminate via values {l:?}"),
                            None => "not credibly indeterminate".into(),
                        },
                    );
                    Ok(if witness.is_some() { 0 } else { 1 })
                }
                _ => Err(Error::PreconditionFailed("pass exactly one of --event / --variable".into())),
            }
        }
        Cmd::CheckTrivial { model, event, variable } => {
            let mf = load(model)?;
            let members = match &mf.model {
                ChoiceModel::Linear(_) => {
                    return Err(Error::PreconditionFailed(
                        "triviality is defined against credal models; wrap the prevision as a one-vertex credal set"
                            .into(),
                    ))
                }
                ChoiceModel::Credal(m) => vec![m.clone()],
                ChoiceModel::LowerSet(s) => s.members().to_vec(),
            };
            let per_member: Vec<bool> = match (event, variable) {
                (Some(e), None) => {
                    let ev = resolve_event(&mf, e)?;
                    members
                        .iter()
                        .map(|m| is_trivial_event(m, &ev))
                        .collect::<Result<_, _>>()?
                }
                (None, Some(v)) => {
                    let var = resolve_variable(&mf, v)?;
                    members
                        .iter()
                        .map(|m| is_trivial_variable(m, &var))
                        .collect::<Result<_, _>>()?
                }
                _ => {
                    return Err(Error::PreconditionFailed(
                        "pass exactly one of --event / --variable".into(),
                    ))
                }
            };
            let all = per_member.iter().all(|&b| b);
            emit(
                cli.json,
                json!({"trivial": all, "per_member": per_member}),
                format!("trivial: {all} (per member {per_member:?})"),
            );
            Ok(if all { 0 } else { 1 })
        }
        Cmd::Marginalize { model, variable } => {
            let mf = load(model)?;
            let var = resolve_variable(&mf, variable)?;
            let marginal = distribution_model(&mf.model, &var)?;
            let file = model_file_json(&marginal);
            let rendered = serde_json::to_string_pretty(&file).expect("serializable");
            if cli.json {
                println!("{}", serde_json::to_string(&file).expect("serializable"));
            } else {
                println!("{rendered}");
            }
            Ok(0)
        }
        Cmd::Corollary1 { model, first, second, budget, seed } => {
            let mf = load(model)?;
            let x = resolve_variable(&mf, first)?;
            let y = resolve_variable(&mf, second)?;
            let report = corollary1_check(&mf.model, &x, &y, *budget, *seed)?;
            emit(
                cli.json,
                json!({
                    "passed": report.all_hold(),
                    "x_credibly_indeterminate": report.x_credibly_indeterminate,
                    "irrelevance_holds": report.irrelevance_holds,
                    "members_precise_on_y": report.members_precise_on_y,
                    "marginal_is_linear_set": report.marginal_is_linear_set,
                    "falsifier_silent": report.falsifier_silent,
                    "notes": report.notes,
                }),
                format!(
                    "clauses: indeterminate {} | irrelevant {} | precise {} | linear-set {} | falsifier-silent {}\n{}",
                    report.x_credibly_indeterminate,
                    report.irrelevance_holds,
                    report.members_precise_on_y,
                    report.marginal_is_linear_set,
                    report.falsifier_silent,
                    report.notes.join("\n")
                ),
            );
            Ok(if report.all_hold() { 0 } else { 1 })
        }
        Cmd::Verify { seed, trials, battery, sequential } => {
            let cfg = SuiteConfig {
                seed: *seed,
                trials: *trials,
                subset_cap: subset_cap(),
                parallel: !sequential,
                ..SuiteConfig::default()
            };
            let report = run_verify_suite_filtered(&cfg, battery.as_deref())?;
            let detail: Vec<Value> = report
                .batteries
                .iter()
                .map(|b| {
                    json!({
                        "name": b.name,
                        "cases": b.cases,
                        "failures": b.failures,
                        "first_counterexample": b.first_counterexample,
                    })
                })
                .collect();
            let text = report
                .batteries
                .iter()
                .map(|b| {
                    let status = if b.passed() { "pass" } else { "FAIL" };
                    match &b.first_counterexample {
                        Some(c) => format!("{:<17} {status} ({} cases) — {c}", b.name, b.cases),
                        None => format!("{:<17} {status} ({} cases)", b.name, b.cases),
                    }
                })
                .collect::<Vec<_>>()
                .join("\n");
            emit(
                cli.json,
                json!({"passed": report.passed(), "batteries": detail, "runtime_ms": report.runtime_ms as u64}),
                format!("{text}\nruntime: {} ms", report.runtime_ms),
            );
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn check_independence(
    cli: &Cli,
    mf: &ModelFile,
    level: LevelArg,
    kind: KindArg,
    first: &str,
    second: &str,
    method: MethodArg,
) -> Result<u8, Error> {
    if matches!(kind, KindArg::Classical) {
        let ChoiceModel::Linear(p) = &mf.model else {
            return Err(Error::CriterionMismatch(
                "classical independence is defined for linear models".into(),
            ));
        };
        let holds = match level {
            LevelArg::Event => {
                let a = resolve_event(mf, first)?;
                let b = resolve_event(mf, second)?;
                classical_independent_events(p, &a, &b)?
            }
            LevelArg::Variable => {
                let x = resolve_variable(mf, first)?;
                let y = resolve_variable(mf, second)?;
                classical_independent_variables(p, &x, &y)?
            }
        };
        emit(cli.json, json!({"holds": holds}), format!("classical independence: {holds}"));
        return Ok(if holds { 0 } else { 1 });
    }

    let methods: Vec<Method> = match method {
        MethodArg::Direct => vec![Method::Direct],
        MethodArg::Characterization => vec![Method::Characterization],
        MethodArg::Both => vec![Method::Direct, Method::Characterization],
    };
    let cap = subset_cap();
    let mut verdicts = Vec::new();
    let mut vars: (Option<Variable>, Option<Variable>) = (None, None);
    for m in &methods {
        let v = match level {
            LevelArg::Event => {
                let a = resolve_event(mf, first)?;
                let b = resolve_event(mf, second)?;
                match kind {
                    KindArg::SIrrelevance => s_irrelevant_events(&mf.model, &a, &b, *m)?,
                    KindArg::SIndependence => s_independent_events(&mf.model, &a, &b, *m)?,
                    KindArg::Classical => unreachable!(),
                }
            }
            LevelArg::Variable => {
                let x = resolve_variable(mf, first)?;
                let y = resolve_variable(mf, second)?;
                let v = match kind {
                    KindArg::SIrrelevance => s_irrelevant_variables(&mf.model, &x, &y, *m, cap)?,
                    KindArg::SIndependence => s_independent_variables(&mf.model, &x, &y, *m, cap)?,
                    KindArg::Classical => unreachable!(),
                };
                vars = (Some(x), Some(y));
                v
            }
        };
        verdicts.push(v);
    }
    if verdicts.len() == 2 && verdicts[0].holds != verdicts[1].holds {
        return Err(Error::PreconditionFailed(format!(
            "decision routes disagree: direct={} characterization={}",
            verdicts[0].holds, verdicts[1].holds
        )));
    }
    let verdict = &verdicts[0];
    let witness = verdicts
        .iter()
        .find_map(|v| v.witness.as_ref())
        .map(|w| witness_json(w, vars.0.as_ref(), vars.1.as_ref()));
    emit(
        cli.json,
        json!({"holds": verdict.holds, "witness": witness}),
        match &witness {
            Some(w) => format!("holds: {}\nwitness: {w}", verdict.holds),
            None => format!("holds: {}", verdict.holds),
        },
    );
    Ok(if verdict.holds { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
