//! Triviality, credibility, classical independence, and the subset-relation
//! notion of irrelevance between events and between variables.
//!
//! Irrelevance of `A` to `B` asks that no gamble contingent on `B` becomes
//! desirable merely by observing `A`: there is no `f = λ·I_B + μ·I_coB` with
//! both `low(I_coA · f) < 0` and `low(-I_A · f) < 0`. On a finite credal
//! model this reduces, per ordered pair of vertices, to the feasibility of a
//! pair of open half-planes in the `(λ, μ)` plane, which is decided in closed
//! form. An equivalent characterization goes through triviality, precision
//! and vertex-wise factorization; both routes are implemented independently
//! so they can be played against each other.

use crate::choice::{ChoiceModel, MemberView};
use crate::error::{Error, Result};
use crate::lp::open_halfplane_pair_feasible;
use crate::model::{event_gamble, indicator, Event, Gamble, Variable};
use crate::previsions::{CredalSet, LinearPrevision};
use crate::rational::{format_rat, rat_zero, Rat};
use crate::sampling;
use num_traits::Zero;
use rand::Rng;
use std::collections::BTreeSet;

/// Default cap on `|codomain X| + |codomain Y|` for exact variable-level
/// decisions, overridable through `CREDAL_CHOICE_SUBSET_CAP`.
pub const DEFAULT_SUBSET_CAP: usize = 16;

/// A closed interval with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RationalInterval {
    pub fn new(lo: Rat, hi: Rat) -> Result<RationalInterval> {
        if lo > hi {
            return Err(Error::InvalidModel(format!(
                "interval [{}, {}] is empty",
                format_rat(&lo),
                format_rat(&hi)
            )));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn point(v: Rat) -> RationalInterval {
        RationalInterval { lo: v.clone(), hi: v }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// `[a, b] ⊙ c`: the exact image of the interval under scaling by `c`.
pub fn interval_product(i: &RationalInterval, c: &Rat) -> RationalInterval {
    if c >= &rat_zero() {
        RationalInterval { lo: &i.lo * c, hi: &i.hi * c }
    } else {
        RationalInterval { lo: &i.hi * c, hi: &i.lo * c }
    }
}

/// Envelope interval of a gamble under one member.
pub fn envelope_interval(member: &MemberView, f: &Gamble) -> Result<RationalInterval> {
    RationalInterval::new(member.lower(f)?, member.upper(f)?)
}

/// Triviality of an event under one member: its indicator or the
/// complement's carries upper probability zero.
fn member_trivial_event(member: &MemberView, e: &Event) -> Result<bool> {
    Ok(member.upper(&indicator(e))?.is_zero()
        || member.upper(&indicator(&e.complement()))?.is_zero())
}

/// An event is trivial for a credal set when it or its complement has upper
/// probability zero.
pub fn is_trivial_event(model: &CredalSet, e: &Event) -> Result<bool> {
    member_trivial_event(&MemberView::Credal(model), e)
}

/// A variable is trivial when every event it determines is trivial;
/// equivalently, at most one codomain value has positive upper probability.
pub fn is_trivial_variable(model: &CredalSet, z: &Variable) -> Result<bool> {
    let member = MemberView::Credal(model);
    let mut live = 0usize;
    for v in 0..z.codomain_size() {
        let pre = z.preimage(&BTreeSet::from([v]));
        if !member.upper(&indicator(&pre))?.is_zero() {
            live += 1;
        }
    }
    Ok(live <= 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CredibilityStatus {
    /// Every member gives the event strictly positive lower probability.
    pub credible: bool,
    pub complement_credible: bool,
}

impl CredibilityStatus {
    pub fn credibly_indeterminate(&self) -> bool {
        self.credible && self.complement_credible
    }
}

pub fn event_credibility(model: &ChoiceModel, e: &Event) -> Result<CredibilityStatus> {
    let ind = indicator(e);
    let co = indicator(&e.complement());
    let mut credible = true;
    let mut complement_credible = true;
    for member in model.members() {
        if member.lower(&ind)? <= rat_zero() {
            credible = false;
        }
        if member.lower(&co)? <= rat_zero() {
            complement_credible = false;
        }
    }
    Ok(CredibilityStatus { credible, complement_credible })
}

/// A variable is credibly indeterminate when some set of its values is, as
/// an event. Returns a witnessing codomain subset. Complementation symmetry
/// halves the enumeration.
pub fn variable_credibly_indeterminate(
    model: &ChoiceModel,
    z: &Variable,
) -> Result<Option<BTreeSet<usize>>> {
    let k = z.codomain_size();
    for subset in codomain_representatives(k) {
        let status = event_credibility(model, &z.preimage(&subset))?;
        if status.credibly_indeterminate() {
            return Ok(Some(subset));
        }
    }
    Ok(None)
}

/// Proper non-empty subsets of `0..k` containing 0; one representative per
/// complementation pair.
fn codomain_representatives(k: usize) -> Vec<BTreeSet<usize>> {
    assert!(k <= 24, "codomain too large to enumerate");
    if k < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // Bit i of the mask selects value i + 1; value 0 is always in.
    for mask in 0..(1u32 << (k - 1)) - 1 {
        let mut s = BTreeSet::from([0usize]);
        for i in 0..k - 1 {
            if mask >> i & 1 == 1 {
                s.insert(i + 1);
            }
        }
        out.push(s);
    }
    out
}

/// Classical independence of two events under a linear prevision.
pub fn classical_independent_events(
    p: &LinearPrevision,
    a: &Event,
    b: &Event,
) -> Result<bool> {
    Ok(p.prob(&a.intersect(b)?)? == p.prob(a)? * p.prob(b)?)
}

/// Classical independence of two variables: every pair of values factorizes.
pub fn classical_independent_variables(
    p: &LinearPrevision,
    x: &Variable,
    y: &Variable,
) -> Result<bool> {
    for xv in 0..x.codomain_size() {
        let ex = x.preimage(&BTreeSet::from([xv]));
        for yv in 0..y.codomain_size() {
            let ey = y.preimage(&BTreeSet::from([yv]));
            if !classical_independent_events(p, &ex, &ey)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decision route for irrelevance queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Open-cone feasibility over ordered vertex pairs.
    Direct,
    /// Triviality, or shared second-event probability plus vertex-wise
    /// factorization.
    Characterization,
}

/// Why a member satisfies the characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoldsClause {
    Triviality,
    PrecisionFactorization,
}

/// A contingent gamble certifying an irrelevance failure for one member.
#[derive(Debug, Clone)]
pub struct EventWitness {
    pub member: usize,
    pub lambda: Rat,
    pub mu: Rat,
    /// `λ·I_B + μ·I_coB` on the underlying space.
    pub gamble: Gamble,
}

#[derive(Debug, Clone)]
pub struct VariableWitness {
    pub x_subset: BTreeSet<usize>,
    pub y_subset: BTreeSet<usize>,
    pub inner: EventWitness,
}

#[derive(Debug, Clone)]
pub enum Witness {
    Event(EventWitness),
    Variable(VariableWitness),
}

#[derive(Debug, Clone)]
pub struct IndependenceVerdict {
    pub holds: bool,
    pub method: Method,
    /// Per member, the satisfied clause; only for the characterization route.
    pub clauses: Vec<HoldsClause>,
    pub witness: Option<Witness>,
}

fn require_vertices<'a>(member: &'a MemberView) -> Result<Vec<&'a LinearPrevision>> {
    match member {
        MemberView::Linear(p) => Ok(vec![p]),
        MemberView::Credal(m) => Ok(m.vertices()?.iter().collect()),
    }
}

/// Searches one member for a contingent gamble with both conditional lower
/// previsions strictly negative, through the two-dimensional open-cone
/// reduction over ordered vertex pairs.
fn member_direct_witness(
    member: &MemberView,
    a: &Event,
    b: &Event,
) -> Result<Option<(Rat, Rat)>> {
    let vertices = require_vertices(member)?;
    let co_a = a.complement();
    let co_b = b.complement();
    for q1 in &vertices {
        let row1 = [
            q1.prob(&co_a.intersect(b)?)?,
            q1.prob(&co_a.intersect(&co_b)?)?,
        ];
        for q2 in &vertices {
            let row2 = [
                -q2.prob(&a.intersect(b)?)?,
                -q2.prob(&a.intersect(&co_b)?)?,
            ];
            if let Some([lambda, mu]) = open_halfplane_pair_feasible(&row1, &row2) {
                // Recheck on the envelopes; the pairwise reduction must agree.
                let f = event_gamble(b, &lambda, &mu);
                let first = member.lower(&indicator(&co_a).mul(&f)?)?;
                let second = member.lower(&indicator(a).mul(&f)?.neg())?;
                debug_assert!(first < rat_zero() && second < rat_zero());
                return Ok(Some((lambda, mu)));
            }
        }
    }
    Ok(None)
}

/// The characterization clause satisfied by one member, if any: the first
/// event is trivial, or every vertex agrees on the second event's
/// probability and factorizes the intersection.
fn member_characterization(
    member: &MemberView,
    a: &Event,
    b: &Event,
) -> Result<Option<HoldsClause>> {
    if member_trivial_event(member, a)? {
        return Ok(Some(HoldsClause::Triviality));
    }
    let vertices = require_vertices(member)?;
    let beta = vertices[0].prob(b)?;
    for q in &vertices {
        if q.prob(b)? != beta {
            return Ok(None);
        }
        if q.prob(&a.intersect(b)?)? != q.prob(a)? * &beta {
            return Ok(None);
        }
    }
    Ok(Some(HoldsClause::PrecisionFactorization))
}

/// Whether observing `a` leaves gambles contingent on `b` undesirable, for
/// every member of the model.
pub fn s_irrelevant_events(
    model: &ChoiceModel,
    a: &Event,
    b: &Event,
    method: Method,
) -> Result<IndependenceVerdict> {
    let mut clauses = Vec::new();
    for (idx, member) in model.members().iter().enumerate() {
        match method {
            Method::Direct => {
                if let Some((lambda, mu)) = member_direct_witness(member, a, b)? {
                    let gamble = event_gamble(b, &lambda, &mu);
                    return Ok(IndependenceVerdict {
                        holds: false,
                        method,
                        clauses: Vec::new(),
                        witness: Some(Witness::Event(EventWitness {
                            member: idx,
                            lambda,
                            mu,
                            gamble,
                        })),
                    });
                }
            }
            Method::Characterization => match member_characterization(member, a, b)? {
                Some(clause) => clauses.push(clause),
                None => {
                    return Ok(IndependenceVerdict {
                        holds: false,
                        method,
                        clauses: Vec::new(),
                        witness: None,
                    })
                }
            },
        }
    }
    Ok(IndependenceVerdict { holds: true, method, clauses, witness: None })
}

pub fn s_independent_events(
    model: &ChoiceModel,
    a: &Event,
    b: &Event,
    method: Method,
) -> Result<IndependenceVerdict> {
    let forward = s_irrelevant_events(model, a, b, method)?;
    if !forward.holds {
        return Ok(forward);
    }
    s_irrelevant_events(model, b, a, method)
}

fn check_cap(x: &Variable, y: &Variable, cap: usize) -> Result<()> {
    let total = x.codomain_size() + y.codomain_size();
    if total > cap {
        Err(Error::CapExceeded(format!(
            "combined codomain size {total} exceeds cap {cap}; raise CREDAL_CHOICE_SUBSET_CAP \
             or use the sampled falsifier"
        )))
    } else {
        Ok(())
    }
}

/// Variable-level irrelevance: the event-level relation for every pair of
/// codomain subsets. Complementation invariance cuts the enumeration to one
/// representative per subset pair.
pub fn s_irrelevant_variables(
    model: &ChoiceModel,
    x: &Variable,
    y: &Variable,
    method: Method,
    cap: usize,
) -> Result<IndependenceVerdict> {
    check_cap(x, y, cap)?;
    let mut clauses = Vec::new();
    for xs in codomain_representatives(x.codomain_size()) {
        let a = x.preimage(&xs);
        for ys in codomain_representatives(y.codomain_size()) {
            let b = y.preimage(&ys);
            let verdict = s_irrelevant_events(model, &a, &b, method)?;
            if !verdict.holds {
                let witness = verdict.witness.map(|w| match w {
                    Witness::Event(inner) => Witness::Variable(VariableWitness {
                        x_subset: xs.clone(),
                        y_subset: ys.clone(),
                        inner,
                    }),
                    other => other,
                });
                return Ok(IndependenceVerdict { holds: false, method, clauses: Vec::new(), witness });
            }
            clauses.extend(verdict.clauses);
        }
    }
    Ok(IndependenceVerdict { holds: true, method, clauses, witness: None })
}

pub fn s_independent_variables(
    model: &ChoiceModel,
    x: &Variable,
    y: &Variable,
    method: Method,
    cap: usize,
) -> Result<IndependenceVerdict> {
    let forward = s_irrelevant_variables(model, x, y, method, cap)?;
    if !forward.holds {
        return Ok(forward);
    }
    s_irrelevant_variables(model, y, x, method, cap)
}

/// A partition of the first variable's codomain, with one contingent gamble
/// per cell, on which some member's criterion value goes strictly negative.
#[derive(Debug, Clone)]
pub struct PartitionWitness {
    pub member: usize,
    pub partition: Vec<BTreeSet<usize>>,
    /// Per cell, a gamble on the second variable's codomain.
    pub gambles: Vec<Vec<Rat>>,
}

/// The criterion value of one member on one partition instance: the maximum
/// over cells `E` of `low( Σ_{C ≠ E} I_C(X) · (s_E(Y) − s_C(Y)) )`.
/// Irrelevance forces this to be at least zero.
pub fn partition_criterion_value(
    member: &MemberView,
    x: &Variable,
    y: &Variable,
    partition: &[BTreeSet<usize>],
    gambles: &[Vec<Rat>],
) -> Result<Rat> {
    let composed: Vec<Gamble> = gambles
        .iter()
        .map(|s| y.compose(s))
        .collect::<Result<Vec<_>>>()?;
    let indicators: Vec<Gamble> = partition
        .iter()
        .map(|cell| indicator(&x.preimage(cell)))
        .collect();
    let mut best: Option<Rat> = None;
    for k in 0..partition.len() {
        let mut term = Gamble::zero(x.space().clone());
        for j in 0..partition.len() {
            if j == k {
                continue;
            }
            term = term.add(&indicators[j].mul(&composed[k].sub(&composed[j])?)?)?;
        }
        let v = member.lower(&term)?;
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best.ok_or_else(|| Error::PreconditionFailed("partition must be non-empty".into()))
}

/// Hunts for a violation of variable-level irrelevance without enumerating
/// all subset pairs: a theorem-guided family built from event-level
/// witnesses on two-cell partitions, then seeded random partitions and
/// contingent gambles. `None` means no violation was found, not a proof.
pub fn s_irrelevant_variables_sampled(
    model: &ChoiceModel,
    x: &Variable,
    y: &Variable,
    trials: usize,
    seed: u64,
) -> Result<Option<PartitionWitness>> {
    let members = model.members();

    // Guided family: an event-level witness (λ, μ) on the subset pair
    // (A, B) turns into the two-cell partition {A, coA} with s_A the witness
    // gamble and s_coA zero.
    if x.codomain_size() + y.codomain_size() <= 20 && x.codomain_size() >= 2 {
        for xs in codomain_representatives(x.codomain_size()) {
            let a = x.preimage(&xs);
            for ys in codomain_representatives(y.codomain_size()) {
                let b = y.preimage(&ys);
                for (idx, member) in members.iter().enumerate() {
                    let Some((lambda, mu)) = member_direct_witness(member, &a, &b)? else {
                        continue;
                    };
                    let co_xs: BTreeSet<usize> =
                        (0..x.codomain_size()).filter(|v| !xs.contains(v)).collect();
                    let s_a: Vec<Rat> = (0..y.codomain_size())
                        .map(|v| if ys.contains(&v) { lambda.clone() } else { mu.clone() })
                        .collect();
                    let s_co = vec![rat_zero(); y.codomain_size()];
                    let partition = vec![xs.clone(), co_xs];
                    let gambles = vec![s_a, s_co];
                    if partition_criterion_value(member, x, y, &partition, &gambles)? < rat_zero() {
                        return Ok(Some(PartitionWitness { member: idx, partition, gambles }));
                    }
                }
            }
        }
    }

    let cells_max = x.codomain_size().min(4);
    if cells_max < 2 {
        return Ok(None);
    }
    for t in 0..trials {
        let mut rng = sampling::rng_for(seed, sampling::mix(&[0xc3, t as u64]));
        let cells = rng.gen_range(2..=cells_max);
        let partition = sampling::sample_partition(&mut rng, x.codomain_size(), cells);
        let gambles: Vec<Vec<Rat>> = (0..cells)
            .map(|_| {
                (0..y.codomain_size())
                    .map(|_| sampling::sample_rat(&mut rng, 3, 3))
                    .collect()
            })
            .collect();
        for (idx, member) in members.iter().enumerate() {
            if partition_criterion_value(member, x, y, &partition, &gambles)? < rat_zero() {
                return Ok(Some(PartitionWitness { member: idx, partition, gambles }));
            }
        }
    }
    Ok(None)
}

/// The induced distribution of a variable, when every vertex agrees on it.
pub fn precise_distribution(model: &CredalSet, z: &Variable) -> Result<Option<Vec<Rat>>> {
    let vertices = model.vertices()?;
    let first = vertices[0].pushforward(
        &(0..model.space().size()).map(|i| z.value_at(i)).collect::<Vec<_>>(),
        z.codomain_size(),
    );
    for v in &vertices[1..] {
        let pmf = v.pushforward(
            &(0..model.space().size()).map(|i| z.value_at(i)).collect::<Vec<_>>(),
            z.codomain_size(),
        );
        if pmf != first {
            return Ok(None);
        }
    }
    Ok(Some(first))
}

#[derive(Debug, Clone)]
pub struct FactorizationReport {
    /// The shared distribution of the second variable; `None` when the
    /// precondition fails.
    pub y_marginal: Option<Vec<Rat>>,
    /// Every vertex factorizes every value pair against the shared marginal.
    pub vertex_factorization: bool,
    /// Sampled interval identity `lowupp(f(X)·g(Y)) = lowupp(f(X)) ⊙ E(g)`.
    pub sampled_identity: bool,
    pub samples: usize,
    pub notes: Vec<String>,
}

impl FactorizationReport {
    pub fn holds(&self) -> bool {
        self.y_marginal.is_some() && self.vertex_factorization && self.sampled_identity
    }
}

/// Checks whether the model factorizes over the pair of variables: the
/// second variable must have a precise distribution, every vertex must
/// factorize against it, and sampled product gambles must satisfy the
/// interval identity.
pub fn factorization_check(
    model: &CredalSet,
    x: &Variable,
    y: &Variable,
    samples: usize,
    seed: u64,
) -> Result<FactorizationReport> {
    let mut notes = Vec::new();
    let Some(marginal) = precise_distribution(model, y)? else {
        notes.push("second variable has no precise distribution".into());
        return Ok(FactorizationReport {
            y_marginal: None,
            vertex_factorization: false,
            sampled_identity: false,
            samples: 0,
            notes,
        });
    };

    let mut vertex_factorization = true;
    'vertices: for (vi, q) in model.vertices()?.iter().enumerate() {
        for xv in 0..x.codomain_size() {
            let ex = x.preimage(&BTreeSet::from([xv]));
            for yv in 0..y.codomain_size() {
                let ey = y.preimage(&BTreeSet::from([yv]));
                if q.prob(&ex.intersect(&ey)?)? != q.prob(&ex)? * &marginal[yv] {
                    notes.push(format!("vertex {vi} fails at value pair ({xv}, {yv})"));
                    vertex_factorization = false;
                    break 'vertices;
                }
            }
        }
    }

    let member = MemberView::Credal(model);
    let mut sampled_identity = true;
    let mut rng = sampling::rng_for(seed, 0xfac);
    for t in 0..samples {
        let fx: Vec<Rat> = (0..x.codomain_size())
            .map(|_| sampling::sample_rat(&mut rng, 4, 3))
            .collect();
        let gy: Vec<Rat> = (0..y.codomain_size())
            .map(|_| sampling::sample_rat(&mut rng, 4, 3))
            .collect();
        let product = x.compose(&fx)?.mul(&y.compose(&gy)?)?;
        let lhs = envelope_interval(&member, &product)?;
        let expectation: Rat = gy.iter().zip(&marginal).map(|(g, m)| g * m).sum();
        let rhs = interval_product(&envelope_interval(&member, &x.compose(&fx)?)?, &expectation);
        if lhs != rhs {
            notes.push(format!("sample {t} breaks the interval identity"));
            sampled_identity = false;
            break;
        }
    }
    Ok(FactorizationReport {
        y_marginal: Some(marginal),
        vertex_factorization,
        sampled_identity,
        samples,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FiniteSpace;
    use crate::rational::{rat, rat_int};
    use std::sync::Arc;

    fn omega4() -> Arc<FiniteSpace> {
        FiniteSpace::new(["ab", "ab-", "a-b", "a-b-"]).unwrap()
    }

    fn lin(space: &Arc<FiniteSpace>, pmf: &[Rat]) -> LinearPrevision {
        LinearPrevision::new(space.clone(), pmf.to_vec()).unwrap()
    }

    fn event_a(sp: &Arc<FiniteSpace>) -> Event {
        Event::from_labels(sp.clone(), ["ab", "ab-"]).unwrap()
    }

    fn event_b(sp: &Arc<FiniteSpace>) -> Event {
        Event::from_labels(sp.clone(), ["ab", "a-b"]).unwrap()
    }

    fn fix_unif() -> ChoiceModel {
        ChoiceModel::Linear(LinearPrevision::uniform(omega4()))
    }

    fn fix_dep() -> ChoiceModel {
        let sp = omega4();
        ChoiceModel::Linear(lin(&sp, &[rat(3, 10), rat(1, 5), rat(1, 5), rat(3, 10)]))
    }

    fn fix_c2_set() -> CredalSet {
        let sp = omega4();
        let unif = LinearPrevision::uniform(sp.clone());
        let p2 = lin(&sp, &[rat(9, 100), rat(21, 100), rat(21, 100), rat(49, 100)]);
        CredalSet::from_vertices(sp, vec![unif, p2]).unwrap()
    }

    #[test]
    fn interval_product_flips_under_negative_scalars() {
        let i = RationalInterval::new(rat(1, 3), rat(1, 2)).unwrap();
        let scaled = interval_product(&i, &rat_int(-2));
        assert_eq!(scaled, RationalInterval::new(rat_int(-1), rat(-2, 3)).unwrap());
        let point = interval_product(&RationalInterval::point(rat(1, 4)), &rat_int(0));
        assert!(point.is_point());
    }

    #[test]
    fn triviality_of_events() {
        let m = fix_c2_set();
        let sp = m.space().clone();
        assert!(is_trivial_event(&m, &Event::empty(sp.clone())).unwrap());
        assert!(is_trivial_event(&m, &Event::full(sp.clone())).unwrap());
        assert!(!is_trivial_event(&m, &event_a(&sp)).unwrap());
    }

    #[test]
    fn credibility_on_fixtures() {
        let sp = omega4();
        let a = event_a(&sp);
        let status = event_credibility(&fix_unif(), &a).unwrap();
        assert!(status.credibly_indeterminate());
        // A point mass on one atom makes the complement incredible.
        let point = ChoiceModel::Linear(LinearPrevision::degenerate(sp.clone(), 0).unwrap());
        let status = event_credibility(&point, &a).unwrap();
        assert!(status.credible && !status.complement_credible);
        assert!(!status.credibly_indeterminate());
    }

    #[test]
    fn classical_independence_on_fixtures() {
        let sp = omega4();
        let (a, b) = (event_a(&sp), event_b(&sp));
        let unif = LinearPrevision::uniform(sp.clone());
        assert!(classical_independent_events(&unif, &a, &b).unwrap());
        let dep = lin(&sp, &[rat(3, 10), rat(1, 5), rat(1, 5), rat(3, 10)]);
        assert!(!classical_independent_events(&dep, &a, &b).unwrap());
    }

    #[test]
    fn linear_irrelevance_agrees_with_classical_independence() {
        let sp = omega4();
        let (a, b) = (event_a(&sp), event_b(&sp));
        for method in [Method::Direct, Method::Characterization] {
            assert!(s_irrelevant_events(&fix_unif(), &a, &b, method).unwrap().holds);
            let v = s_irrelevant_events(&fix_dep(), &a, &b, method).unwrap();
            assert!(!v.holds);
        }
        let v = s_irrelevant_events(&fix_dep(), &a, &b, Method::Direct).unwrap();
        let Some(Witness::Event(w)) = v.witness else { panic!("expected witness") };
        // Revalidate the witness against the definition.
        let model = fix_dep();
        let member = model.members()[0];
        let co_a = a.complement();
        assert!(member.lower(&indicator(&co_a).mul(&w.gamble).unwrap()).unwrap() < rat_zero());
        assert!(member.lower(&indicator(&a).mul(&w.gamble).unwrap().neg()).unwrap() < rat_zero());
    }

    #[test]
    fn credal_fixture_fails_irrelevance_both_routes() {
        let model = ChoiceModel::Credal(fix_c2_set());
        let sp = omega4();
        let (a, b) = (event_a(&sp), event_b(&sp));
        for method in [Method::Direct, Method::Characterization] {
            assert!(!s_irrelevant_events(&model, &a, &b, method).unwrap().holds);
        }
        // The stated contingent gamble I_B - 2/5 certifies the failure.
        let f = event_gamble(&b, &rat(3, 5), &rat(-2, 5));
        let member = model.members()[0];
        assert_eq!(
            member.lower(&indicator(&a.complement()).mul(&f).unwrap()).unwrap(),
            rat(-7, 100)
        );
        assert_eq!(
            member.lower(&indicator(&a).mul(&f).unwrap().neg()).unwrap(),
            rat(-1, 20)
        );
    }

    #[test]
    fn complementation_invariance() {
        let model = ChoiceModel::Credal(fix_c2_set());
        let sp = omega4();
        let (a, b) = (event_a(&sp), event_b(&sp));
        let base = s_irrelevant_events(&model, &a, &b, Method::Direct).unwrap().holds;
        for (ea, eb) in [
            (a.complement(), b.clone()),
            (a.clone(), b.complement()),
            (a.complement(), b.complement()),
        ] {
            assert_eq!(
                s_irrelevant_events(&model, &ea, &eb, Method::Direct).unwrap().holds,
                base
            );
        }
    }

    #[test]
    fn vacuous_model_is_irrelevant_by_triviality_or_cone() {
        // The vacuous credal set on omega4 never sees both strict
        // inequalities: vertices are point masses, so some conditional
        // probability row vanishes only when the event rows vanish. Check
        // both routes agree.
        let sp = omega4();
        let vertices = (0..4)
            .map(|i| LinearPrevision::degenerate(sp.clone(), i).unwrap())
            .collect();
        let model = ChoiceModel::Credal(CredalSet::from_vertices(sp.clone(), vertices).unwrap());
        let (a, b) = (event_a(&sp), event_b(&sp));
        let d = s_irrelevant_events(&model, &a, &b, Method::Direct).unwrap();
        let c = s_irrelevant_events(&model, &a, &b, Method::Characterization).unwrap();
        assert_eq!(d.holds, c.holds);
    }

    fn cor1_space() -> (Arc<FiniteSpace>, Variable, Variable) {
        let sp = FiniteSpace::new(["x0y0", "x0y1", "x1y0", "x1y1"]).unwrap();
        let x = Variable::new(
            sp.clone(),
            vec!["x0".into(), "x1".into()],
            &["x0".into(), "x0".into(), "x1".into(), "x1".into()],
        )
        .unwrap();
        let y = Variable::new(
            sp.clone(),
            vec!["y0".into(), "y1".into()],
            &["y0".into(), "y1".into(), "y0".into(), "y1".into()],
        )
        .unwrap();
        (sp, x, y)
    }

    #[test]
    fn factorizing_credal_set_passes_variable_irrelevance() {
        let (sp, x, y) = cor1_space();
        let v1 = lin(&sp, &[rat(3, 50), rat(7, 50), rat(12, 50), rat(28, 50)]);
        let v2 = lin(&sp, &[rat(9, 50), rat(21, 50), rat(6, 50), rat(14, 50)]);
        let m = CredalSet::from_vertices(sp.clone(), vec![v1, v2]).unwrap();
        let model = ChoiceModel::Credal(m.clone());
        for method in [Method::Direct, Method::Characterization] {
            let v = s_irrelevant_variables(&model, &x, &y, method, DEFAULT_SUBSET_CAP).unwrap();
            assert!(v.holds, "failed via {method:?}");
        }
        assert_eq!(
            precise_distribution(&m, &y).unwrap(),
            Some(vec![rat(3, 10), rat(7, 10)])
        );
        let report = factorization_check(&m, &x, &y, 50, 9).unwrap();
        assert!(report.holds(), "{:?}", report.notes);
        assert!(s_irrelevant_variables_sampled(&model, &x, &y, 100, 2).unwrap().is_none());
    }

    #[test]
    fn non_factorizing_credal_set_fails_variable_irrelevance() {
        let (sp, x, y) = cor1_space();
        // Two vertices with different Y-marginals.
        let v1 = lin(&sp, &[rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)]);
        let v2 = lin(&sp, &[rat(9, 100), rat(21, 100), rat(21, 100), rat(49, 100)]);
        let m = CredalSet::from_vertices(sp.clone(), vec![v1, v2]).unwrap();
        let model = ChoiceModel::Credal(m.clone());
        for method in [Method::Direct, Method::Characterization] {
            let v = s_irrelevant_variables(&model, &x, &y, method, DEFAULT_SUBSET_CAP).unwrap();
            assert!(!v.holds);
        }
        let witness = s_irrelevant_variables_sampled(&model, &x, &y, 200, 4).unwrap();
        let w = witness.expect("sampled falsifier should find the violation");
        // Revalidate against the criterion.
        let member = model.members()[w.member];
        let value = partition_criterion_value(&member, &x, &y, &w.partition, &w.gambles).unwrap();
        assert!(value < rat_zero());
        assert!(precise_distribution(&m, &y).unwrap().is_none());
        assert!(!factorization_check(&m, &x, &y, 20, 5).unwrap().holds());
    }

    #[test]
    fn cap_is_enforced() {
        let (_, x, y) = cor1_space();
        let model = fix_unif_on_product();
        assert!(matches!(
            s_irrelevant_variables(&model, &x, &y, Method::Direct, 3),
            Err(Error::CapExceeded(_))
        ));
    }

    fn fix_unif_on_product() -> ChoiceModel {
        let sp = FiniteSpace::new(["x0y0", "x0y1", "x1y0", "x1y1"]).unwrap();
        ChoiceModel::Linear(LinearPrevision::uniform(sp))
    }

    #[test]
    fn variable_credible_indeterminacy() {
        let (sp, x, _) = cor1_space();
        let model = ChoiceModel::Linear(LinearPrevision::uniform(sp.clone()));
        assert!(variable_credibly_indeterminate(&model, &x).unwrap().is_some());
        let point = ChoiceModel::Linear(LinearPrevision::degenerate(sp, 0).unwrap());
        assert!(variable_credibly_indeterminate(&point, &x).unwrap().is_none());
    }

    #[test]
    fn variable_triviality() {
        let (sp, x, _) = cor1_space();
        let m = CredalSet::from_vertices(
            sp.clone(),
            vec![LinearPrevision::uniform(sp.clone())],
        )
        .unwrap();
        assert!(!is_trivial_variable(&m, &x).unwrap());
        let point = CredalSet::from_vertices(
            sp.clone(),
            vec![LinearPrevision::degenerate(sp, 0).unwrap()],
        )
        .unwrap();
        assert!(is_trivial_variable(&point, &x).unwrap());
    }
}
