//! Named fixtures, random model generators, and the differential battery
//! suite. Each battery pits two independent decision routes against each
//! other, or a decided verdict against a falsifier, on seeded random models.
//!
//! Counts scale from `SuiteConfig::trials`; the defaults meet the stated
//! budgets at `trials = 500`.

use crate::axioms::{check_coherence_axioms, check_mixing_axiom_instance, find_mixing_violation};
use crate::choice::{choose, ChoiceModel, Criterion};
use crate::error::{Error, Result};
use crate::independence::{
    classical_independent_events, partition_criterion_value, s_irrelevant_events,
    s_irrelevant_variables, s_irrelevant_variables_sampled, Method, DEFAULT_SUBSET_CAP,
};
use crate::lp::Relation;
use crate::marginals::{corollary1_check, distribution_model, product_space, ProductSpace};
use crate::model::{indicator, Event, FiniteSpace};
use crate::previsions::{
    check_lower_prevision_properties, ArchimedeanModel, CredalConstraint, CredalSet,
    LinearPrevision,
};
use crate::rational::{rat, rat_int, rat_zero, Rat};
use crate::sampling;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Base trial count; battery budgets are derived from it.
    pub trials: usize,
    pub space_min: usize,
    pub space_max: usize,
    pub max_vertices: usize,
    pub subset_cap: usize,
    /// Run batteries and their trials on the rayon pool when the `parallel`
    /// feature is compiled in.
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig {
            seed: 1,
            trials: 500,
            space_min: 2,
            space_max: 8,
            max_vertices: 5,
            subset_cap: DEFAULT_SUBSET_CAP,
            parallel: true,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::PreconditionFailed("trials must be positive".into()));
        }
        if self.space_min < 2 || self.space_max < self.space_min {
            return Err(Error::PreconditionFailed("space-size bounds must be ≥ 2 and ordered".into()));
        }
        if self.max_vertices == 0 {
            return Err(Error::PreconditionFailed("vertex bound must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BatteryOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_counterexample: Option<String>,
}

impl BatteryOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub batteries: Vec<BatteryOutcome>,
    pub runtime_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.batteries.iter().all(BatteryOutcome::passed)
    }
}

pub const BATTERY_NAMES: [&str; 10] = [
    "theorem3",
    "theorem5",
    "complementation",
    "precise-collapse",
    "mixing",
    "coherence",
    "variables",
    "corollary",
    "lp-backend",
    "lp-properties",
];

// ---------------------------------------------------------------- fixtures

pub fn omega4() -> Arc<FiniteSpace> {
    FiniteSpace::new(["ab", "ab-", "a-b", "a-b-"]).expect("static fixture")
}

pub fn omega4_event_a() -> Event {
    Event::from_labels(omega4(), ["ab", "ab-"]).expect("static fixture")
}

pub fn omega4_event_b() -> Event {
    Event::from_labels(omega4(), ["ab", "a-b"]).expect("static fixture")
}

fn lin(space: &Arc<FiniteSpace>, pmf: &[Rat]) -> LinearPrevision {
    LinearPrevision::new(space.clone(), pmf.to_vec()).expect("static fixture")
}

pub fn fix_unif() -> ChoiceModel {
    ChoiceModel::Linear(LinearPrevision::uniform(omega4()))
}

pub fn fix_dep() -> ChoiceModel {
    let sp = omega4();
    ChoiceModel::Linear(lin(&sp, &[rat(3, 10), rat(1, 5), rat(1, 5), rat(3, 10)]))
}

pub fn fix_c2() -> CredalSet {
    let sp = omega4();
    let unif = LinearPrevision::uniform(sp.clone());
    let p2 = lin(&sp, &[rat(9, 100), rat(21, 100), rat(21, 100), rat(49, 100)]);
    CredalSet::from_vertices(sp, vec![unif, p2]).expect("static fixture")
}

pub fn fix_vac2() -> ChoiceModel {
    let sp = FiniteSpace::new(["1", "2"]).expect("static fixture");
    ChoiceModel::Credal(
        CredalSet::from_vertices(
            sp.clone(),
            vec![
                LinearPrevision::degenerate(sp.clone(), 0).expect("static fixture"),
                LinearPrevision::degenerate(sp, 1).expect("static fixture"),
            ],
        )
        .expect("static fixture"),
    )
}

pub fn fix_eadm() -> ChoiceModel {
    let sp = FiniteSpace::new(["1", "2"]).expect("static fixture");
    let members = (0..2)
        .map(|i| {
            CredalSet::from_vertices(
                sp.clone(),
                vec![LinearPrevision::degenerate(sp.clone(), i).expect("static fixture")],
            )
            .expect("static fixture")
        })
        .collect();
    ChoiceModel::LowerSet(ArchimedeanModel::new(members).expect("static fixture"))
}

/// The product-space fixture: two members, each two product vertices with a
/// shared second-coordinate marginal. Joints are recomputed from the
/// marginals here rather than written out.
pub fn fix_cor1() -> (ProductSpace, ChoiceModel) {
    let ps = product_space(
        &["x0".to_string(), "x1".to_string()],
        &["y0".to_string(), "y1".to_string()],
    )
    .expect("static fixture");
    let joint = |xm: [Rat; 2], ym: [Rat; 2]| -> LinearPrevision {
        let pmf = vec![
            &xm[0] * &ym[0],
            &xm[0] * &ym[1],
            &xm[1] * &ym[0],
            &xm[1] * &ym[1],
        ];
        lin(&ps.space, &pmf)
    };
    let r1 = [rat(3, 10), rat(7, 10)];
    let r2 = [rat(1, 2), rat(1, 2)];
    let m1 = CredalSet::from_vertices(
        ps.space.clone(),
        vec![
            joint([rat(1, 5), rat(4, 5)], r1.clone()),
            joint([rat(3, 5), rat(2, 5)], r1.clone()),
        ],
    )
    .expect("static fixture");
    let m2 = CredalSet::from_vertices(
        ps.space.clone(),
        vec![
            joint([rat(1, 5), rat(4, 5)], r2.clone()),
            joint([rat(3, 5), rat(2, 5)], r2.clone()),
        ],
    )
    .expect("static fixture");
    let model = ChoiceModel::LowerSet(ArchimedeanModel::new(vec![m1, m2]).expect("static fixture"));
    (ps, model)
}

/// The two induced second-coordinate previsions of the fixture.
pub fn fix_cor1_marginals() -> (Vec<Rat>, Vec<Rat>) {
    (vec![rat(3, 10), rat(7, 10)], vec![rat(1, 2), rat(1, 2)])
}

// -------------------------------------------------------------- generators

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Linear,
    Credal,
    ProductFactorizing,
    LowerSet,
}

fn gen_space(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Arc<FiniteSpace> {
    let n = rng.gen_range(cfg.space_min..=cfg.space_max);
    FiniteSpace::new((0..n).map(|i| format!("w{i}"))).expect("generated labels are distinct")
}

fn gen_linear(rng: &mut ChaCha8Rng, space: &Arc<FiniteSpace>) -> LinearPrevision {
    LinearPrevision::new(space.clone(), sampling::sample_pmf(rng, space.size(), 8))
        .expect("sampled pmf is valid")
}

fn gen_credal(rng: &mut ChaCha8Rng, cfg: &SuiteConfig, space: &Arc<FiniteSpace>) -> CredalSet {
    let k = rng.gen_range(1..=cfg.max_vertices);
    let vertices = (0..k).map(|_| gen_linear(rng, space)).collect();
    CredalSet::from_vertices(space.clone(), vertices).expect("sampled vertices are valid")
}

/// A credal set on a small product space whose vertices are product
/// measures sharing the second-coordinate marginal: the regime where
/// irrelevance of the first coordinate provably holds.
fn gen_product_factorizing(rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> (ProductSpace, CredalSet) {
    let nx = rng.gen_range(2..=3usize);
    let ny = rng.gen_range(2..=3usize);
    let ps = product_space(
        &(0..nx).map(|i| format!("u{i}")).collect::<Vec<_>>(),
        &(0..ny).map(|j| format!("v{j}")).collect::<Vec<_>>(),
    )
    .expect("generated labels are distinct");
    let y_marginal = sampling::sample_interior_pmf(rng, ny, 6);
    let k = rng.gen_range(1..=cfg.max_vertices.min(3));
    let vertices = (0..k)
        .map(|_| {
            let x_marginal = sampling::sample_interior_pmf(rng, nx, 6);
            let mut pmf = Vec::with_capacity(nx * ny);
            for xi in &x_marginal {
                for yj in &y_marginal {
                    pmf.push(xi * yj);
                }
            }
            LinearPrevision::new(ps.space.clone(), pmf).expect("product pmf is valid")
        })
        .collect();
    let set = CredalSet::from_vertices(ps.space.clone(), vertices).expect("vertices are valid");
    (ps, set)
}

pub fn gen_random_model(cfg: &SuiteConfig, kind: ModelKind, rng: &mut ChaCha8Rng) -> ChoiceModel {
    match kind {
        ModelKind::Linear => {
            let sp = gen_space(rng, cfg);
            ChoiceModel::Linear(gen_linear(rng, &sp))
        }
        ModelKind::Credal => {
            let sp = gen_space(rng, cfg);
            ChoiceModel::Credal(gen_credal(rng, cfg, &sp))
        }
        ModelKind::ProductFactorizing => ChoiceModel::Credal(gen_product_factorizing(rng, cfg).1),
        ModelKind::LowerSet => {
            let sp = gen_space(rng, cfg);
            let k = rng.gen_range(1..=3usize);
            let members = (0..k).map(|_| gen_credal(rng, cfg, &sp)).collect();
            ChoiceModel::LowerSet(ArchimedeanModel::new(members).expect("members share the space"))
        }
    }
}

// --------------------------------------------------------------- plumbing

/// Runs independent trial closures, on the rayon pool when available, and
/// keeps the failure count plus the lowest-indexed counterexample.
fn run_cases<F>(parallel: bool, count: usize, f: F) -> (usize, Option<String>)
where
    F: Fn(usize) -> Option<String> + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        let mut fails: Vec<(usize, String)> = (0..count)
            .into_par_iter()
            .filter_map(|i| f(i).map(|m| (i, m)))
            .collect();
        fails.sort_by_key(|(i, _)| *i);
        let first = fails.first().map(|(i, m)| format!("case {i}: {m}"));
        return (fails.len(), first);
    }
    let _ = parallel;
    let mut failures = 0;
    let mut first = None;
    for i in 0..count {
        if let Some(m) = f(i) {
            failures += 1;
            if first.is_none() {
                first = Some(format!("case {i}: {m}"));
            }
        }
    }
    (failures, first)
}

fn outcome(name: &'static str, cases: usize, result: (usize, Option<String>)) -> BatteryOutcome {
    BatteryOutcome { name, cases, failures: result.0, first_counterexample: result.1 }
}

/// Flattens a trial body returning `Result<Option<String>>`: internal errors
/// count as failures.
fn flat(r: Result<Option<String>>) -> Option<String> {
    match r {
        Ok(v) => v,
        Err(e) => Some(format!("internal error: {e}")),
    }
}

// --------------------------------------------------------------- batteries

/// Per-trial case for the linear battery: model plus event pair.
fn linear_case(cfg: &SuiteConfig, t: usize) -> (LinearPrevision, Event, Event) {
    let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[1, t as u64]));
    let sp = gen_space(&mut rng, cfg);
    let p = gen_linear(&mut rng, &sp);
    let a = sampling::sample_event(&mut rng, &sp);
    let b = sampling::sample_event(&mut rng, &sp);
    (p, a, b)
}

fn battery_theorem3(cfg: &SuiteConfig) -> BatteryOutcome {
    let count = cfg.trials * 2;
    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            let (p, a, b) = linear_case(cfg, t);
            let model = ChoiceModel::Linear(p.clone());
            let direct = s_irrelevant_events(&model, &a, &b, Method::Direct)?.holds;
            let classical = classical_independent_events(&p, &a, &b)?;
            if direct != classical {
                return Ok(Some(format!(
                    "direct={direct} classical={classical} a={:?} b={:?} pmf={:?}",
                    a.members(),
                    b.members(),
                    p.pmf()
                )));
            }
            Ok(None)
        })())
    });
    outcome("theorem3", count, result)
}

/// Per-trial case for the credal battery: model, event pair, and whether the
/// verdict is pinned in advance.
fn credal_case(cfg: &SuiteConfig, t: usize) -> (ChoiceModel, Event, Event, Option<bool>) {
    let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[2, t as u64]));
    if t % 2 == 0 {
        let sp = gen_space(&mut rng, cfg);
        let m = gen_credal(&mut rng, cfg, &sp);
        let a = sampling::sample_event(&mut rng, &sp);
        let b = sampling::sample_event(&mut rng, &sp);
        (ChoiceModel::Credal(m), a, b, None)
    } else {
        let (ps, m) = gen_product_factorizing(&mut rng, cfg);
        let a = ps.x.preimage(&sampling::sample_proper_subset(&mut rng, ps.x.codomain_size()));
        let b = ps.y.preimage(&sampling::sample_proper_subset(&mut rng, ps.y.codomain_size()));
        (ChoiceModel::Credal(m), a, b, Some(true))
    }
}

fn check_routes_agree(
    model: &ChoiceModel,
    a: &Event,
    b: &Event,
    expect: Option<bool>,
) -> Result<Option<String>> {
    let direct = s_irrelevant_events(model, a, b, Method::Direct)?;
    let chara = s_irrelevant_events(model, a, b, Method::Characterization)?;
    if direct.holds != chara.holds {
        return Ok(Some(format!(
            "routes disagree: direct={} characterization={} a={:?} b={:?}",
            direct.holds,
            chara.holds,
            a.members(),
            b.members()
        )));
    }
    if let Some(want) = expect {
        if direct.holds != want {
            return Ok(Some(format!(
                "pinned verdict missed: got {} want {want}",
                direct.holds
            )));
        }
    }
    Ok(None)
}

fn battery_theorem5(cfg: &SuiteConfig) -> BatteryOutcome {
    let count = cfg.trials + 1;
    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            if t == cfg.trials {
                // The two-vertex fixture must fail through both routes.
                let model = ChoiceModel::Credal(fix_c2());
                return check_routes_agree(&model, &omega4_event_a(), &omega4_event_b(), Some(false));
            }
            let (model, a, b, expect) = credal_case(cfg, t);
            check_routes_agree(&model, &a, &b, expect)
        })())
    });
    outcome("theorem5", count, result)
}

fn battery_complementation(cfg: &SuiteConfig) -> BatteryOutcome {
    let linear_count = cfg.trials * 2;
    let count = linear_count + cfg.trials;
    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            let (model, a, b) = if t < linear_count {
                let (p, a, b) = linear_case(cfg, t);
                (ChoiceModel::Linear(p), a, b)
            } else {
                let (m, a, b, _) = credal_case(cfg, t - linear_count);
                (m, a, b)
            };
            let base = s_irrelevant_events(&model, &a, &b, Method::Direct)?.holds;
            for (ea, eb) in [
                (a.complement(), b.clone()),
                (a.clone(), b.complement()),
                (a.complement(), b.complement()),
            ] {
                if s_irrelevant_events(&model, &ea, &eb, Method::Direct)?.holds != base {
                    return Ok(Some(format!(
                        "complement combination flips the verdict: a={:?} b={:?}",
                        a.members(),
                        b.members()
                    )));
                }
            }
            Ok(None)
        })())
    });
    outcome("complementation", count, result)
}

fn battery_precise_collapse(cfg: &SuiteConfig) -> BatteryOutcome {
    let count = cfg.trials;
    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[4, t as u64]));
            let sp = gen_space(&mut rng, cfg);
            let p = gen_linear(&mut rng, &sp);
            let a = sampling::sample_option_set(&mut rng, &sp, 6, 4);
            let linear = ChoiceModel::Linear(p.clone());
            let credal = ChoiceModel::Credal(
                CredalSet::from_vertices(sp.clone(), vec![p.clone()])?,
            );
            let lower_set = ChoiceModel::LowerSet(ArchimedeanModel::new(vec![
                CredalSet::from_vertices(sp.clone(), vec![p])?,
            ])?);
            let meu = choose(&linear, &a, Criterion::Meu)?.chosen;
            let maximal = choose(&credal, &a, Criterion::Maximality)?.chosen;
            let eadm = choose(&lower_set, &a, Criterion::EAdmissibility)?.chosen;
            if meu != maximal || meu != eadm {
                return Ok(Some(format!(
                    "criteria disagree on a precise model: meu={meu:?} maximality={maximal:?} eadmissibility={eadm:?}"
                )));
            }
            Ok(None)
        })())
    });
    outcome("precise-collapse", count, result)
}

fn battery_mixing(cfg: &SuiteConfig) -> BatteryOutcome {
    let models = (cfg.trials / 5).max(1);
    let count = models + 1;
    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            if t == 0 {
                let model = fix_vac2();
                let Some(w) = find_mixing_violation(&model, 100, cfg.seed)? else {
                    return Ok(Some("no witness for the vacuous fixture in 100 trials".into()));
                };
                if check_mixing_axiom_instance(&model, &w.b, &w.a)? {
                    return Ok(Some("witness does not self-validate".into()));
                }
                return Ok(None);
            }
            // All-linear lower sets admit no violation.
            let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[5, t as u64]));
            let sp = gen_space(&mut rng, cfg);
            let k = rng.gen_range(1..=3usize);
            let members = (0..k)
                .map(|_| CredalSet::from_vertices(sp.clone(), vec![gen_linear(&mut rng, &sp)]))
                .collect::<Result<Vec<_>>>()?;
            let model = ChoiceModel::LowerSet(ArchimedeanModel::new(members)?);
            if let Some(w) = find_mixing_violation(&model, 1000, cfg.seed ^ t as u64)? {
                return Ok(Some(format!(
                    "violation reported for an all-linear model: B={:?} A={:?}",
                    w.b, w.a
                )));
            }
            Ok(None)
        })())
    });
    outcome("mixing", count, result)
}

fn battery_coherence(cfg: &SuiteConfig) -> BatteryOutcome {
    // 10 fresh models per kind, instances split across them.
    let chunks = 10usize;
    let per_chunk = (cfg.trials * 2 / chunks).max(1);
    let kinds = [ModelKind::Linear, ModelKind::Credal, ModelKind::LowerSet];
    let count = kinds.len() * chunks;
    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            let kind = kinds[t / chunks];
            let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[6, t as u64]));
            let model = gen_random_model(cfg, kind, &mut rng);
            let reports = check_coherence_axioms(&model, per_chunk, cfg.seed ^ t as u64)?;
            for r in reports {
                if !r.passed() {
                    return Ok(Some(format!(
                        "{} violated on a {kind:?} model: {}",
                        r.axiom, r.violations[0]
                    )));
                }
            }
            Ok(None)
        })())
    });
    outcome("coherence", count, result)
}

/// Treats the four-atom fixture space as a 2×2 product of the first and
/// second event's coordinates.
fn fix_c2_as_product() -> (ProductSpace, ChoiceModel) {
    let ps = product_space(&["a".to_string(), "a-".to_string()], &["b".to_string(), "b-".to_string()])
        .expect("static fixture");
    let unif = LinearPrevision::uniform(ps.space.clone());
    let p2 = LinearPrevision::new(
        ps.space.clone(),
        vec![rat(9, 100), rat(21, 100), rat(21, 100), rat(49, 100)],
    )
    .expect("static fixture");
    let m = CredalSet::from_vertices(ps.space.clone(), vec![unif, p2]).expect("static fixture");
    (ps, ChoiceModel::Credal(m))
}

fn battery_variables(cfg: &SuiteConfig) -> BatteryOutcome {
    let random_cases = (cfg.trials / 5).max(2);
    let count = random_cases + 1;
    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            if t == 0 {
                // The fixture as a product must fail, and the stated witness
                // must certify the failure exactly.
                let (ps, model) = fix_c2_as_product();
                let verdict =
                    s_irrelevant_variables(&model, &ps.x, &ps.y, Method::Direct, cfg.subset_cap)?;
                if verdict.holds {
                    return Ok(Some("fixture-as-product verdict should fail".into()));
                }
                let a = ps.x.preimage(&std::collections::BTreeSet::from([0]));
                let b = ps.y.preimage(&std::collections::BTreeSet::from([0]));
                let f = crate::model::event_gamble(&b, &rat(3, 5), &rat(-2, 5));
                let member = model.members()[0];
                let first = member.lower(&indicator(&a.complement()).mul(&f)?)?;
                let second = member.lower(&indicator(&a).mul(&f)?.neg())?;
                if first != rat(-7, 100) || second != rat(-1, 20) {
                    return Ok(Some(format!(
                        "stated witness values off: got {first:?}, {second:?}"
                    )));
                }
                if s_irrelevant_variables_sampled(&model, &ps.x, &ps.y, 200, cfg.seed)?.is_none() {
                    return Ok(Some("falsifier missed the fixture violation".into()));
                }
                return Ok(None);
            }
            let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[7, t as u64]));
            // Alternate a provably-irrelevant model with a generic credal
            // set on the same product space.
            let (ps, factorizing) = gen_product_factorizing(&mut rng, cfg);
            let model = if t % 2 == 0 {
                ChoiceModel::Credal(factorizing)
            } else {
                ChoiceModel::Credal(gen_credal(&mut rng, cfg, &ps.space))
            };
            let exact =
                s_irrelevant_variables(&model, &ps.x, &ps.y, Method::Direct, cfg.subset_cap)?;
            let witness = s_irrelevant_variables_sampled(&model, &ps.x, &ps.y, 200, cfg.seed)?;
            match (exact.holds, witness) {
                (true, Some(w)) => Ok(Some(format!(
                    "falsifier contradicts an exact holds verdict: {w:?}"
                ))),
                (false, None) => Ok(Some(
                    "exact failure but the guided witness family stayed silent".into(),
                )),
                (false, Some(w)) => {
                    // Confirm the witness standalone against the criterion.
                    let member = model.members()[w.member];
                    let v =
                        partition_criterion_value(&member, &ps.x, &ps.y, &w.partition, &w.gambles)?;
                    if v >= rat_zero() {
                        Ok(Some("returned witness does not re-verify".into()))
                    } else {
                        Ok(None)
                    }
                }
                (true, None) => Ok(None),
            }
        })())
    });
    outcome("variables", count, result)
}

fn battery_corollary(cfg: &SuiteConfig) -> BatteryOutcome {
    let implication_cases = (cfg.trials * 2 / 5).max(1);
    let count = 1 + cfg.trials + implication_cases;
    let (ps, model) = fix_cor1();
    let marginal = match distribution_model(&model, &ps.y) {
        Ok(m) => m,
        Err(e) => {
            return outcome("corollary", count, (count, Some(format!("marginalization failed: {e}"))))
        }
    };
    let explicit = (|| -> Result<ChoiceModel> {
        let sp = FiniteSpace::new(["y0", "y1"])?;
        let (r1, r2) = fix_cor1_marginals();
        let members = vec![
            CredalSet::from_vertices(sp.clone(), vec![LinearPrevision::new(sp.clone(), r1)?])?,
            CredalSet::from_vertices(sp.clone(), vec![LinearPrevision::new(sp.clone(), r2)?])?,
        ];
        Ok(ChoiceModel::LowerSet(ArchimedeanModel::new(members)?))
    })();
    let explicit = match explicit {
        Ok(m) => m,
        Err(e) => return outcome("corollary", count, (count, Some(format!("fixture error: {e}")))),
    };

    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            if t == 0 {
                let report = corollary1_check(&model, &ps.x, &ps.y, 200, cfg.seed)?;
                if !report.all_hold() {
                    return Ok(Some(format!("fixture clause failed: {:?}", report.notes)));
                }
                return Ok(None);
            }
            if t <= cfg.trials {
                // Induced second-coordinate desirability agrees with the
                // explicit two-member representation.
                let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[8, t as u64]));
                let a = sampling::sample_option_set(&mut rng, explicit.space(), 4, 4);
                let lhs = marginal.k_member(&a)?;
                let rhs = explicit.k_member(&a)?;
                if lhs != rhs {
                    return Ok(Some(format!(
                        "marginal membership {lhs} != explicit membership {rhs} on {a:?}"
                    )));
                }
                return Ok(None);
            }
            // Generated irrelevant models with credibly indeterminate first
            // coordinate: precision of the second coordinate must follow.
            let u = t - cfg.trials - 1;
            let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[9, u as u64]));
            let (ps, first) = gen_product_factorizing(&mut rng, cfg);
            let mut members = vec![first];
            if rng.gen_bool(0.5) {
                // A second member on the same space, same regime.
                let y_marginal = sampling::sample_interior_pmf(&mut rng, ps.y.codomain_size(), 6);
                let x_marginal = sampling::sample_interior_pmf(&mut rng, ps.x.codomain_size(), 6);
                let mut pmf = Vec::new();
                for xi in &x_marginal {
                    for yj in &y_marginal {
                        pmf.push(xi * yj);
                    }
                }
                members.push(CredalSet::from_vertices(
                    ps.space.clone(),
                    vec![LinearPrevision::new(ps.space.clone(), pmf)?],
                )?);
            }
            let model = ChoiceModel::LowerSet(ArchimedeanModel::new(members)?);
            let report = corollary1_check(&model, &ps.x, &ps.y, 50, cfg.seed ^ u as u64)?;
            if report.x_credibly_indeterminate
                && report.irrelevance_holds
                && !report.members_precise_on_y
            {
                return Ok(Some(
                    "irrelevance with indeterminacy did not force a precise second coordinate".into(),
                ));
            }
            if !report.x_credibly_indeterminate || !report.irrelevance_holds {
                return Ok(Some("generator left its regime".into()));
            }
            Ok(None)
        })())
    });
    outcome("corollary", count, result)
}

/// Exact inverse by Gauss–Jordan elimination; `None` for singular input.
fn invert(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat_int(1) } else { rat_zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                a[r][j] = &a[r][j] - &factor * &a[col][j];
                inv[r][j] = &inv[r][j] - &factor * &inv[col][j];
            }
        }
    }
    Some(inv)
}

fn battery_lp_backend(cfg: &SuiteConfig) -> BatteryOutcome {
    let count = (cfg.trials * 2 / 5).max(1);
    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[10, t as u64]));
            let n = rng.gen_range(2..=4usize);
            let sp = FiniteSpace::new((0..n).map(|i| format!("w{i}")))?;
            // n affinely independent pmfs double as a vertex list and, via
            // the inverse of their transpose, as non-negativity constraints
            // on the barycentric coordinates.
            let (vertices, inv) = loop {
                let vs: Vec<Vec<Rat>> =
                    (0..n).map(|_| sampling::sample_pmf(&mut rng, n, 6)).collect();
                let transposed: Vec<Vec<Rat>> =
                    (0..n).map(|i| (0..n).map(|j| vs[j][i].clone()).collect()).collect();
                if let Some(inv) = invert(&transposed) {
                    break (vs, inv);
                }
            };
            let vertex_form = CredalSet::from_vertices(
                sp.clone(),
                vertices
                    .iter()
                    .map(|p| LinearPrevision::new(sp.clone(), p.clone()))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let constraints = inv
                .iter()
                .map(|row| CredalConstraint {
                    coeffs: row.clone(),
                    rel: Relation::Ge,
                    rhs: rat_zero(),
                })
                .collect();
            let constraint_form = CredalSet::from_constraints(sp.clone(), constraints)?;
            for _ in 0..5 {
                let f = sampling::sample_gamble(&mut rng, &sp, 5);
                let by_vertices = vertex_form.lower(&f)?;
                let by_lp = constraint_form.lower(&f)?;
                if by_vertices != by_lp {
                    return Ok(Some(format!(
                        "envelopes disagree on {f:?}: vertices give {by_vertices}, LP gives {by_lp}"
                    )));
                }
            }
            // Desirable sets built by lifting a gamble above zero must carry
            // positive slack under every model kind.
            let kind = [ModelKind::Linear, ModelKind::Credal, ModelKind::LowerSet][t % 3];
            let model = gen_random_model(cfg, kind, &mut rng);
            let msp = model.space().clone();
            let mut a = sampling::sample_option_set(&mut rng, &msp, 3, 4);
            let g = sampling::sample_gamble(&mut rng, &msp, 4);
            a.insert(g.shift(&(rat(1, 2) - g.min_value())))?;
            match model.archimedean_slack(&a)? {
                Some(s) if s > rat_zero() => Ok(None),
                other => Ok(Some(format!("non-positive slack {other:?} on a lifted set"))),
            }
        })())
    });
    outcome("lp-backend", count, result)
}

fn battery_lp_properties(cfg: &SuiteConfig) -> BatteryOutcome {
    let count = 20;
    let result = run_cases(cfg.parallel, count, |t| {
        flat((|| {
            let mut rng = sampling::rng_for(cfg.seed, sampling::mix(&[11, t as u64]));
            let sp = gen_space(&mut rng, cfg);
            let m = gen_credal(&mut rng, cfg, &sp);
            let report = check_lower_prevision_properties(&m, cfg.trials, cfg.seed ^ t as u64)?;
            if !report.passed() {
                let v = &report.violations[0];
                return Ok(Some(format!("{} violated: {}", v.property, v.detail)));
            }
            Ok(None)
        })())
    });
    outcome("lp-properties", count, result)
}

// ------------------------------------------------------------------ suite

fn run_battery(cfg: &SuiteConfig, name: &str) -> Option<BatteryOutcome> {
    match name {
        "theorem3" => Some(battery_theorem3(cfg)),
        "theorem5" => Some(battery_theorem5(cfg)),
        "complementation" => Some(battery_complementation(cfg)),
        "precise-collapse" => Some(battery_precise_collapse(cfg)),
        "mixing" => Some(battery_mixing(cfg)),
        "coherence" => Some(battery_coherence(cfg)),
        "variables" => Some(battery_variables(cfg)),
        "corollary" => Some(battery_corollary(cfg)),
        "lp-backend" => Some(battery_lp_backend(cfg)),
        "lp-properties" => Some(battery_lp_properties(cfg)),
        _ => None,
    }
}

/// Runs the batteries matching `filter` (all when `None`).
pub fn run_verify_suite_filtered(cfg: &SuiteConfig, filter: Option<&str>) -> Result<SuiteReport> {
    cfg.validate()?;
    if let Some(name) = filter {
        if !BATTERY_NAMES.contains(&name) {
            return Err(Error::PreconditionFailed(format!(
                "unknown battery {name:?}; known: {}",
                BATTERY_NAMES.join(", ")
            )));
        }
    }
    let start = Instant::now();
    let names: Vec<&'static str> = BATTERY_NAMES
        .iter()
        .copied()
        .filter(|n| filter.is_none_or(|f| f == *n))
        .collect();
    let batteries = names
        .into_iter()
        .map(|n| run_battery(cfg, n).expect("filtered names are known"))
        .collect();
    Ok(SuiteReport { batteries, runtime_ms: start.elapsed().as_millis() })
}

pub fn run_verify_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    run_verify_suite_filtered(cfg, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Gamble;
    use num_traits::One;

    fn small_cfg() -> SuiteConfig {
        SuiteConfig { trials: 30, space_max: 5, ..SuiteConfig::default() }
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = SuiteConfig { trials: 0, ..SuiteConfig::default() };
        assert!(run_verify_suite(&cfg).is_err());
    }

    #[test]
    fn unknown_battery_rejected() {
        assert!(run_verify_suite_filtered(&small_cfg(), Some("nope")).is_err());
    }

    #[test]
    fn generators_emit_valid_models() {
        let cfg = small_cfg();
        for kind in [
            ModelKind::Linear,
            ModelKind::Credal,
            ModelKind::ProductFactorizing,
            ModelKind::LowerSet,
        ] {
            for t in 0..25 {
                let mut rng = sampling::rng_for(3, sampling::mix(&[99, t]));
                let model = gen_random_model(&cfg, kind, &mut rng);
                // Members evaluate a constant exactly; smoke for validity.
                let one = Gamble::constant(model.space().clone(), rat_int(1));
                for m in model.members() {
                    assert!(m.lower(&one).unwrap().is_one());
                }
            }
        }
    }

    #[test]
    fn product_factorizing_vertices_factorize() {
        let cfg = small_cfg();
        let mut rng = sampling::rng_for(5, 0);
        for _ in 0..20 {
            let (ps, m) = gen_product_factorizing(&mut rng, &cfg);
            for v in m.vertices().unwrap() {
                assert!(crate::independence::classical_independent_variables(v, &ps.x, &ps.y)
                    .unwrap());
            }
        }
    }

    #[test]
    fn invert_round_trips() {
        let m = vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0], vec![rat_int(1), rat_int(-1)]);
        assert_eq!(inv[1], vec![rat_int(-1), rat_int(2)]);
        let singular = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ];
        assert!(invert(&singular).is_none());
    }

    #[test]
    fn small_suite_passes_and_is_deterministic() {
        let cfg = small_cfg();
        let a = run_verify_suite(&cfg).unwrap();
        assert!(a.passed(), "{:?}", a.batteries);
        let b = run_verify_suite(&cfg).unwrap();
        for (x, y) in a.batteries.iter().zip(&b.batteries) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.cases, y.cases);
            assert_eq!(x.failures, y.failures);
            assert_eq!(x.first_counterexample, y.first_counterexample);
        }
    }

    #[test]
    fn sequential_matches_parallel() {
        let mut cfg = small_cfg();
        cfg.trials = 12;
        let par = run_verify_suite(&cfg).unwrap();
        cfg.parallel = false;
        let seq = run_verify_suite(&cfg).unwrap();
        for (x, y) in par.batteries.iter().zip(&seq.batteries) {
            assert_eq!((x.name, x.cases, x.failures), (y.name, y.cases, y.failures));
            assert_eq!(x.first_counterexample, y.first_counterexample);
        }
    }

    #[test]
    fn battery_filter_runs_one() {
        let report = run_verify_suite_filtered(&small_cfg(), Some("mixing")).unwrap();
        assert_eq!(report.batteries.len(), 1);
        assert_eq!(report.batteries[0].name, "mixing");
        assert!(report.passed());
    }
}
