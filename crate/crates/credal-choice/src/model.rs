//! Finite possibility spaces, gambles, events, option sets and variables.
//!
//! All values are immutable after construction and arithmetic is exact, so
//! everything here is safe to share across threads.

use crate::error::{Error, Result};
use crate::rational::{format_rat, rat_one, rat_zero, Rat};
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A finite possibility space: an ordered list of distinct atom labels.
///
/// The ordering is fixed at construction and used for all serialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSpace {
    atoms: Vec<String>,
}

impl FiniteSpace {
    pub fn new<I, S>(atoms: I) -> Result<Arc<FiniteSpace>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidModel("possibility space must be non-empty".into()));
        }
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert(a.clone()) {
                return Err(Error::InvalidModel(format!("duplicate atom label {a:?}")));
            }
        }
        Ok(Arc::new(FiniteSpace { atoms }))
    }

    pub fn size(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, label: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == label)
    }
}

pub(crate) fn same_space(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>) -> bool {
    Arc::ptr_eq(a, b) || a.atoms == b.atoms
}

pub(crate) fn check_space(a: &Arc<FiniteSpace>, b: &Arc<FiniteSpace>, what: &str) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(what.into()))
    }
}

/// A gamble: one exact rational reward per atom.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gamble {
    space: Arc<FiniteSpace>,
    values: Vec<Rat>,
}

impl fmt::Debug for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(format_rat).collect();
        write!(f, "({})", vals.join(","))
    }
}

impl Gamble {
    pub fn new(space: Arc<FiniteSpace>, values: Vec<Rat>) -> Result<Gamble> {
        if values.len() != space.size() {
            return Err(Error::InvalidModel(format!(
                "gamble has {} values for a space of {} atoms",
                values.len(),
                space.size()
            )));
        }
        Ok(Gamble { space, values })
    }

    pub fn constant(space: Arc<FiniteSpace>, c: Rat) -> Gamble {
        let n = space.size();
        Gamble { space, values: vec![c; n] }
    }

    pub fn zero(space: Arc<FiniteSpace>) -> Gamble {
        Gamble::constant(space, rat_zero())
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> &Rat {
        &self.values[atom]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn min_value(&self) -> &Rat {
        self.values.iter().min().expect("non-empty space")
    }

    pub fn max_value(&self) -> &Rat {
        self.values.iter().max().expect("non-empty space")
    }

    pub fn add(&self, other: &Gamble) -> Result<Gamble> {
        check_space(&self.space, &other.space, "gamble addition")?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Gamble { space: self.space.clone(), values })
    }

    pub fn sub(&self, other: &Gamble) -> Result<Gamble> {
        check_space(&self.space, &other.space, "gamble subtraction")?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Gamble { space: self.space.clone(), values })
    }

    pub fn neg(&self) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Adds the constant gamble `c`.
    pub fn shift(&self, c: &Rat) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Pointwise product; houses the products `fg` of gambles on two events.
    pub fn mul(&self, other: &Gamble) -> Result<Gamble> {
        check_space(&self.space, &other.space, "gamble product")?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Gamble { space: self.space.clone(), values })
    }
}

/// An event: a subset of the atoms of a space, possibly empty or full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    space: Arc<FiniteSpace>,
    members: BTreeSet<usize>,
}

impl Event {
    pub fn new(space: Arc<FiniteSpace>, members: BTreeSet<usize>) -> Result<Event> {
        if let Some(&i) = members.iter().find(|&&i| i >= space.size()) {
            return Err(Error::InvalidModel(format!("event member index {i} out of range")));
        }
        Ok(Event { space, members })
    }

    pub fn from_labels<'a, I: IntoIterator<Item = &'a str>>(
        space: Arc<FiniteSpace>,
        labels: I,
    ) -> Result<Event> {
        let mut members = BTreeSet::new();
        for l in labels {
            let i = space
                .atom_index(l)
                .ok_or_else(|| Error::InvalidModel(format!("unknown atom {l:?}")))?;
            members.insert(i);
        }
        Ok(Event { space, members })
    }

    pub fn empty(space: Arc<FiniteSpace>) -> Event {
        Event { space, members: BTreeSet::new() }
    }

    pub fn full(space: Arc<FiniteSpace>) -> Event {
        let members = (0..space.size()).collect();
        Event { space, members }
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.members.contains(&atom)
    }

    pub fn complement(&self) -> Event {
        let members = (0..self.space.size())
            .filter(|i| !self.members.contains(i))
            .collect();
        Event { space: self.space.clone(), members }
    }

    pub fn intersect(&self, other: &Event) -> Result<Event> {
        check_space(&self.space, &other.space, "event intersection")?;
        let members = self.members.intersection(&other.members).copied().collect();
        Ok(Event { space: self.space.clone(), members })
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The indicator gamble of an event: 1 on its members, 0 elsewhere.
pub fn indicator(event: &Event) -> Gamble {
    let values = (0..event.space().size())
        .map(|i| if event.contains(i) { rat_one() } else { rat_zero() })
        .collect();
    Gamble { space: event.space().clone(), values }
}

/// The two-parameter family of gambles on the occurrence of an event.
#[derive(Debug, Clone)]
pub struct EventGamble {
    pub event: Event,
    pub lambda: Rat,
    pub mu: Rat,
}

impl EventGamble {
    pub fn to_gamble(&self) -> Gamble {
        event_gamble(&self.event, &self.lambda, &self.mu)
    }
}

/// `lambda` on the event, `mu` on its complement.
pub fn event_gamble(event: &Event, lambda: &Rat, mu: &Rat) -> Gamble {
    let values = (0..event.space().size())
        .map(|i| if event.contains(i) { lambda.clone() } else { mu.clone() })
        .collect();
    Gamble { space: event.space().clone(), values }
}

/// A finite set of gambles with set semantics: duplicates collapse and
/// equality ignores order.
#[derive(Clone, PartialEq, Eq)]
pub struct OptionSet {
    space: Arc<FiniteSpace>,
    gambles: BTreeSet<Gamble>,
}

impl fmt::Debug for OptionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.gambles.iter()).finish()
    }
}

impl OptionSet {
    pub fn new(space: Arc<FiniteSpace>, gambles: Vec<Gamble>) -> Result<OptionSet> {
        let mut set = BTreeSet::new();
        for g in gambles {
            check_space(&space, g.space(), "option set member")?;
            set.insert(g);
        }
        Ok(OptionSet { space, gambles: set })
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.gambles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gambles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Gamble> {
        self.gambles.iter()
    }

    pub fn contains(&self, g: &Gamble) -> bool {
        self.gambles.contains(g)
    }

    pub fn insert(&mut self, g: Gamble) -> Result<()> {
        check_space(&self.space, g.space(), "option set member")?;
        self.gambles.insert(g);
        Ok(())
    }

    pub fn is_subset(&self, other: &OptionSet) -> bool {
        self.gambles.is_subset(&other.gambles)
    }

    /// Shifts every option by the constant `-eps`.
    pub fn shift_down(&self, eps: &Rat) -> OptionSet {
        let gambles = self.gambles.iter().map(|g| g.shift(&-eps.clone())).collect();
        OptionSet { space: self.space.clone(), gambles }
    }
}

/// `A ⊖ f = {g − f : g ∈ A \ {f}}`.
pub fn opt_minus(a: &OptionSet, f: &Gamble) -> Result<OptionSet> {
    if !a.contains(f) {
        return Err(Error::FNotInSet);
    }
    let mut out = OptionSet {
        space: a.space.clone(),
        gambles: BTreeSet::new(),
    };
    for g in a.iter() {
        if g != f {
            out.gambles.insert(g.sub(f)?);
        }
    }
    Ok(out)
}

/// Dominance orders on gambles over a shared space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceKind {
    /// `min(f − g) > 0`.
    StrictUniform,
    /// `f ≥ g` pointwise and `f ≠ g`.
    StrictPointwise,
    /// `f ≥ g` pointwise.
    Weak,
}

pub fn dominates(f: &Gamble, g: &Gamble, kind: DominanceKind) -> Result<bool> {
    check_space(f.space(), g.space(), "dominance comparison")?;
    let diff = f.sub(g)?;
    Ok(match kind {
        DominanceKind::StrictUniform => diff.min_value() > &rat_zero(),
        DominanceKind::StrictPointwise => {
            diff.min_value() >= &rat_zero() && !diff.is_zero()
        }
        DominanceKind::Weak => diff.min_value() >= &rat_zero(),
    })
}

/// A variable: a map from atoms to value labels in a finite codomain.
///
/// Variables need not be surjective; unreached codomain values carry induced
/// probability zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    space: Arc<FiniteSpace>,
    codomain: Vec<String>,
    /// Per-atom index into `codomain`.
    assignment: Vec<usize>,
}

impl Variable {
    pub fn new(
        space: Arc<FiniteSpace>,
        codomain: Vec<String>,
        assignment_labels: &[String],
    ) -> Result<Variable> {
        let mut seen = BTreeSet::new();
        for c in &codomain {
            if !seen.insert(c.clone()) {
                return Err(Error::InvalidModel(format!("duplicate codomain label {c:?}")));
            }
        }
        if assignment_labels.len() != space.size() {
            return Err(Error::InvalidModel(format!(
                "variable assigns {} atoms of a space with {}",
                assignment_labels.len(),
                space.size()
            )));
        }
        let assignment = assignment_labels
            .iter()
            .map(|l| {
                codomain
                    .iter()
                    .position(|c| c == l)
                    .ok_or_else(|| Error::InvalidModel(format!("assigned label {l:?} not in codomain")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Variable { space, codomain, assignment })
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn codomain(&self) -> &[String] {
        &self.codomain
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain.len()
    }

    /// Codomain value index at the given atom.
    pub fn value_at(&self, atom: usize) -> usize {
        self.assignment[atom]
    }

    /// The event `Z ∈ C` for a subset `C` of codomain value indices.
    pub fn preimage(&self, value_indices: &BTreeSet<usize>) -> Event {
        let members = (0..self.space.size())
            .filter(|&i| value_indices.contains(&self.assignment[i]))
            .collect();
        Event { space: self.space.clone(), members }
    }

    /// The gamble `h ∘ Z` on the possibility space, for `h` given per codomain value.
    pub fn compose(&self, h: &[Rat]) -> Result<Gamble> {
        if h.len() != self.codomain.len() {
            return Err(Error::InvalidModel(format!(
                "gamble on codomain has {} values for {} codomain labels",
                h.len(),
                self.codomain.len()
            )));
        }
        let values = self.assignment.iter().map(|&v| h[v].clone()).collect();
        Ok(Gamble { space: self.space.clone(), values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn space3() -> Arc<FiniteSpace> {
        FiniteSpace::new(["w1", "w2", "w3"]).unwrap()
    }

    fn g(space: &Arc<FiniteSpace>, vals: &[i64]) -> Gamble {
        Gamble::new(space.clone(), vals.iter().map(|&v| rat_int(v)).collect()).unwrap()
    }

    #[test]
    fn indicator_of_empty_and_full() {
        let sp = space3();
        assert!(indicator(&Event::empty(sp.clone())).is_zero());
        let full = indicator(&Event::full(sp.clone()));
        assert_eq!(full, Gamble::constant(sp, rat_int(1)));
    }

    #[test]
    fn indicator_of_subset() {
        let sp = space3();
        let e = Event::from_labels(sp.clone(), ["w1", "w3"]).unwrap();
        assert_eq!(indicator(&e), g(&sp, &[1, 0, 1]));
    }

    #[test]
    fn event_gamble_collapses() {
        let sp = space3();
        let e = Event::from_labels(sp.clone(), ["w2"]).unwrap();
        assert_eq!(event_gamble(&e, &rat_int(1), &rat_int(0)), indicator(&e));
        let c = rat(5, 3);
        assert_eq!(
            event_gamble(&e, &c, &c),
            Gamble::constant(sp, c.clone())
        );
    }

    #[test]
    fn event_gamble_family_is_additive() {
        let sp = space3();
        let e = Event::from_labels(sp.clone(), ["w1"]).unwrap();
        let a = event_gamble(&e, &rat(1, 2), &rat(-2, 5));
        let b = event_gamble(&e, &rat(1, 3), &rat(3, 5));
        let sum = event_gamble(&e, &(rat(1, 2) + rat(1, 3)), &(rat(-2, 5) + rat(3, 5)));
        assert_eq!(a.add(&b).unwrap(), sum);
    }

    #[test]
    fn indicators_of_event_and_complement_sum_to_one() {
        let sp = space3();
        let e = Event::from_labels(sp.clone(), ["w2", "w3"]).unwrap();
        let sum = indicator(&e).add(&indicator(&e.complement())).unwrap();
        assert_eq!(sum, Gamble::constant(sp, rat_int(1)));
    }

    #[test]
    fn opt_minus_singleton_is_empty() {
        let sp = space3();
        let f = g(&sp, &[1, 0, 0]);
        let a = OptionSet::new(sp, vec![f.clone()]).unwrap();
        assert!(opt_minus(&a, &f).unwrap().is_empty());
    }

    #[test]
    fn opt_minus_subtracts() {
        let sp = FiniteSpace::new(["1", "2"]).unwrap();
        let f1 = g(&sp, &[1, 0]);
        let f2 = g(&sp, &[0, 1]);
        let f3 = g(&sp, &[2, -2]);
        let a = OptionSet::new(sp.clone(), vec![f1.clone(), f2.clone()]).unwrap();
        let d = opt_minus(&a, &f1).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.contains(&g(&sp, &[-1, 1])));

        let a = OptionSet::new(sp.clone(), vec![f1, f2, f3.clone()]).unwrap();
        let d = opt_minus(&a, &f3).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.contains(&g(&sp, &[-1, 2])));
        assert!(d.contains(&g(&sp, &[-2, 3])));
    }

    #[test]
    fn opt_minus_rejects_foreign_gamble() {
        let sp = space3();
        let a = OptionSet::new(sp.clone(), vec![g(&sp, &[1, 1, 1])]).unwrap();
        assert!(matches!(opt_minus(&a, &g(&sp, &[0, 0, 0])), Err(Error::FNotInSet)));
    }

    #[test]
    fn dominance_kinds() {
        let sp = FiniteSpace::new(["1", "2"]).unwrap();
        let f = g(&sp, &[1, 0]);
        let zero = g(&sp, &[0, 0]);
        let one = g(&sp, &[1, 1]);
        assert!(dominates(&f, &f, DominanceKind::Weak).unwrap());
        assert!(!dominates(&f, &f, DominanceKind::StrictPointwise).unwrap());
        assert!(!dominates(&f, &f, DominanceKind::StrictUniform).unwrap());
        assert!(dominates(&one, &zero, DominanceKind::StrictUniform).unwrap());
        assert!(dominates(&f, &zero, DominanceKind::StrictPointwise).unwrap());
        assert!(!dominates(&f, &zero, DominanceKind::StrictUniform).unwrap());
    }

    #[test]
    fn variable_preimage_and_compose() {
        let sp = FiniteSpace::new(["x0y0", "x0y1", "x1y0", "x1y1"]).unwrap();
        let x = Variable::new(
            sp.clone(),
            vec!["x0".into(), "x1".into()],
            &["x0".into(), "x0".into(), "x1".into(), "x1".into()],
        )
        .unwrap();
        let pre = x.preimage(&BTreeSet::from([0]));
        assert_eq!(pre.members(), &BTreeSet::from([0, 1]));
        let h = vec![rat_int(3), rat_int(-1)];
        let composed = x.compose(&h).unwrap();
        assert_eq!(composed, g(&sp, &[3, 3, -1, -1]));
    }

    #[test]
    fn variable_rejects_label_outside_codomain() {
        let sp = FiniteSpace::new(["a", "b"]).unwrap();
        let r = Variable::new(sp, vec!["u".into()], &["u".into(), "v".into()]);
        assert!(r.is_err());
    }
}
