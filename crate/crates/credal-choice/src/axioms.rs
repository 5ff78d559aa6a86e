//! Coherence axioms for sets of desirable option sets, the mixing property,
//! and a falsifier that hunts for mixing violations.

use crate::choice::ChoiceModel;
use crate::error::{Error, Result};
use crate::model::{Event, Gamble, OptionSet};
use crate::posi::posi_member;
use crate::rational::{rat, rat_zero};
use crate::sampling;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub axiom: &'static str,
    pub instances: usize,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples an option set that is guaranteed to be desirable: a random set
/// plus one uniformly positive gamble.
fn sample_desirable_set(rng: &mut ChaCha8Rng, model: &ChoiceModel) -> Result<OptionSet> {
    let space = model.space().clone();
    let mut a = sampling::sample_option_set(rng, &space, 3, 4);
    let g = sampling::sample_gamble(rng, &space, 4);
    let lift = rat(1, 1) - g.min_value();
    a.insert(g.shift(&lift))?;
    debug_assert!(model.k_member(&a)?);
    Ok(a)
}

fn without(a: &OptionSet, f: &Gamble) -> Result<OptionSet> {
    OptionSet::new(
        a.space().clone(),
        a.iter().filter(|g| *g != f).cloned().collect(),
    )
}

/// Spot-checks the coherence axioms on sampled instances: removing the zero
/// gamble, non-desirability of the zero singleton, desirability of uniformly
/// positive singletons, closure under positive pairwise combinations
/// (including zero-coefficient edges), and monotonicity under supersets.
pub fn check_coherence_axioms(
    model: &ChoiceModel,
    instances: usize,
    seed: u64,
) -> Result<Vec<AxiomReport>> {
    assert!(instances >= 1, "instance budget must be positive");
    let space = model.space().clone();
    let mut reports: Vec<AxiomReport> = ["K0", "K1", "K2", "K3", "K4"]
        .into_iter()
        .map(|axiom| AxiomReport { axiom, instances, violations: Vec::new() })
        .collect();

    for i in 0..instances {
        let mut rng = sampling::rng_for(seed, sampling::mix(&[0xa1, i as u64]));

        // K0: a desirable set stays desirable when the zero gamble leaves.
        let mut a = sample_desirable_set(&mut rng, model)?;
        a.insert(Gamble::zero(space.clone()))?;
        if !model.k_member(&without(&a, &Gamble::zero(space.clone()))?)? {
            reports[0].violations.push(format!("instance {i}: {a:?}"));
        }

        // K1: the zero singleton is not desirable.
        let zero_set = OptionSet::new(space.clone(), vec![Gamble::zero(space.clone())])?;
        if model.k_member(&zero_set)? {
            reports[1].violations.push(format!("instance {i}"));
        }

        // K2: uniformly positive singletons are desirable.
        let g = sampling::sample_gamble(&mut rng, &space, 4);
        let pos = g.shift(&(rat(1, 3) - g.min_value()));
        let singleton = OptionSet::new(space.clone(), vec![pos.clone()])?;
        if !model.k_member(&singleton)? {
            reports[2].violations.push(format!("instance {i}: {pos:?}"));
        }

        // K3: positive combinations of two desirable sets, with λ = 0 and
        // μ = 0 edges included in the coefficient tables.
        let a1 = sample_desirable_set(&mut rng, model)?;
        let a2 = sample_desirable_set(&mut rng, model)?;
        let mut combined = OptionSet::new(space.clone(), Vec::new())?;
        for f in a1.iter() {
            for g in a2.iter() {
                let (lam, mu) = match rng.gen_range(0..4u8) {
                    0 => (rat_zero(), sampling::sample_positive_rat(&mut rng, 4)),
                    1 => (sampling::sample_positive_rat(&mut rng, 4), rat_zero()),
                    _ => (
                        sampling::sample_positive_rat(&mut rng, 4),
                        sampling::sample_positive_rat(&mut rng, 4),
                    ),
                };
                combined.insert(f.scale(&lam).add(&g.scale(&mu))?)?;
            }
        }
        if !model.k_member(&combined)? {
            reports[3]
                .violations
                .push(format!("instance {i}: {a1:?} x {a2:?}"));
        }

        // K4: supersets of desirable sets are desirable.
        let a1 = sample_desirable_set(&mut rng, model)?;
        let mut a2 = a1.clone();
        for _ in 0..rng.gen_range(1..=3) {
            a2.insert(sampling::sample_gamble(&mut rng, &space, 4))?;
        }
        if !model.k_member(&a2)? {
            reports[4].violations.push(format!("instance {i}: {a2:?}"));
        }
    }
    Ok(reports)
}

/// Checks one instance of the mixing property: for `B ⊆ A` with every element
/// of `A` a positive combination of elements of `B`, desirability of `A` must
/// carry down to `B`. Errors when the preconditions do not hold.
pub fn check_mixing_axiom_instance(
    model: &ChoiceModel,
    b: &OptionSet,
    a: &OptionSet,
) -> Result<bool> {
    if !b.is_subset(a) {
        return Err(Error::PreconditionFailed("B is not a subset of A".into()));
    }
    for h in a.iter() {
        if posi_member(h, b)?.is_none() {
            return Err(Error::PreconditionFailed(format!(
                "{h:?} is not a positive combination of B"
            )));
        }
    }
    Ok(!model.k_member(a)? || model.k_member(b)?)
}

/// A pair witnessing a mixing failure: `A` is desirable, `B` is not, yet
/// `B ⊆ A ⊆ posi(B)`.
#[derive(Debug, Clone)]
pub struct MixingWitness {
    pub b: OptionSet,
    pub a: OptionSet,
}

/// Searches for a mixing violation: first a targeted sweep over events on
/// which some member is imprecise, then seeded random pairs. Models whose
/// members are all linear previsions admit no violation and return `None`.
pub fn find_mixing_violation(
    model: &ChoiceModel,
    trials: usize,
    seed: u64,
) -> Result<Option<MixingWitness>> {
    let space = model.space().clone();
    let n = space.size();

    // Sweep: a member imprecise on an event E yields a violation from the
    // pair f = I_E - κ, g = (κ + δ) - I_E with κ the interval midpoint and
    // δ a quarter of its width: f + g is the positive constant δ, so
    // {f, g, f+g} is desirable for every member, while that member sees no
    // positive option in {f, g}.
    if n <= 16 {
        for member in model.members() {
            for mask in 1..(1u32 << n) - 1 {
                let members: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let e = Event::new(space.clone(), members)?;
                let ind = crate::model::indicator(&e);
                let low = member.lower(&ind)?;
                let upp = member.upper(&ind)?;
                if low >= upp {
                    continue;
                }
                let kappa = (&low + &upp) / rat(2, 1);
                let delta = (&upp - &kappa) / rat(2, 1);
                let f = ind.shift(&-kappa.clone());
                let g = ind.neg().shift(&(&kappa + &delta));
                let b = OptionSet::new(space.clone(), vec![f.clone(), g.clone()])?;
                let mut a = b.clone();
                a.insert(f.add(&g)?)?;
                if check_mixing_axiom_instance(model, &b, &a)? {
                    continue;
                }
                return Ok(Some(MixingWitness { b, a }));
            }
        }
    }

    for t in 0..trials {
        let mut rng = sampling::rng_for(seed, sampling::mix(&[0xb2, t as u64]));
        let f = sampling::sample_gamble(&mut rng, &space, 4);
        let g = sampling::sample_gamble(&mut rng, &space, 4);
        let b = OptionSet::new(space.clone(), vec![f.clone(), g.clone()])?;
        if b.len() < 2 {
            continue;
        }
        let mut a = b.clone();
        a.insert(f.add(&g)?)?;
        if model.k_member(&a)? && !model.k_member(&b)? {
            debug_assert!(!check_mixing_axiom_instance(model, &b, &a)?);
            return Ok(Some(MixingWitness { b, a }));
        }
    }
    Ok(None)
}
