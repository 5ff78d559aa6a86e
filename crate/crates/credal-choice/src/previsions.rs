//! Linear previsions, credal sets and the lower/upper envelopes they induce.

use crate::error::{Error, Result};
use crate::lp::{lp_minimize, Constraint, LinearProgram, LpStatus, Relation};
use crate::model::{check_space, Event, FiniteSpace, Gamble};
use crate::rational::{format_rat, rat_int, rat_zero, Rat};
use crate::sampling;
use num_traits::{One, Signed};
use std::sync::Arc;

/// A linear prevision on a finite space: an exact probability mass function,
/// evaluated as the expectation operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearPrevision {
    space: Arc<FiniteSpace>,
    pmf: Vec<Rat>,
}

impl LinearPrevision {
    pub fn new(space: Arc<FiniteSpace>, pmf: Vec<Rat>) -> Result<LinearPrevision> {
        if pmf.len() != space.size() {
            return Err(Error::InvalidModel(format!(
                "pmf has {} masses for a space of {} atoms",
                pmf.len(),
                space.size()
            )));
        }
        if let Some(neg) = pmf.iter().find(|m| m.is_negative()) {
            return Err(Error::InvalidModel(format!(
                "negative probability mass {}",
                format_rat(neg)
            )));
        }
        let total: Rat = pmf.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::InvalidModel(format!(
                "probability masses sum to {}, not 1",
                format_rat(&total)
            )));
        }
        Ok(LinearPrevision { space, pmf })
    }

    /// Point mass at one atom.
    pub fn degenerate(space: Arc<FiniteSpace>, atom: usize) -> Result<LinearPrevision> {
        let pmf = (0..space.size())
            .map(|i| if i == atom { rat_int(1) } else { rat_zero() })
            .collect();
        LinearPrevision::new(space, pmf)
    }

    pub fn uniform(space: Arc<FiniteSpace>) -> LinearPrevision {
        let n = space.size() as i64;
        let pmf = vec![Rat::new(1.into(), n.into()); space.size()];
        LinearPrevision { space, pmf }
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn pmf(&self) -> &[Rat] {
        &self.pmf
    }

    /// Expectation of a gamble.
    pub fn eval(&self, f: &Gamble) -> Result<Rat> {
        check_space(&self.space, f.space(), "prevision evaluation")?;
        Ok(self
            .pmf
            .iter()
            .zip(f.values())
            .map(|(p, v)| p * v)
            .sum())
    }

    /// Probability of an event.
    pub fn prob(&self, e: &Event) -> Result<Rat> {
        check_space(&self.space, e.space(), "event probability")?;
        Ok(e.members().iter().map(|&i| self.pmf[i].clone()).sum())
    }

    /// Pushforward along a variable, as a pmf on the variable's codomain.
    pub fn pushforward(&self, assignment: &[usize], codomain_size: usize) -> Vec<Rat> {
        let mut out = vec![rat_zero(); codomain_size];
        for (i, &v) in assignment.iter().enumerate() {
            out[v] = &out[v] + &self.pmf[i];
        }
        out
    }
}

/// One linear constraint on the atom masses of a pmf, for constraint-form
/// credal sets.
#[derive(Debug, Clone)]
pub struct CredalConstraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

/// A credal set: a polytope of linear previsions inside the probability
/// simplex, given by its vertices, by constraint rows, or both.
///
/// Constraint-only sets support envelope evaluation through the LP backend;
/// decision procedures that enumerate vertices reject them.
#[derive(Debug, Clone)]
pub struct CredalSet {
    space: Arc<FiniteSpace>,
    vertices: Vec<LinearPrevision>,
    constraints: Option<Vec<CredalConstraint>>,
}

impl CredalSet {
    pub fn from_vertices(
        space: Arc<FiniteSpace>,
        vertices: Vec<LinearPrevision>,
    ) -> Result<CredalSet> {
        if vertices.is_empty() {
            return Err(Error::InvalidModel("credal set needs at least one vertex".into()));
        }
        let mut deduped: Vec<LinearPrevision> = Vec::new();
        for v in vertices {
            check_space(&space, v.space(), "credal vertex")?;
            if !deduped.contains(&v) {
                deduped.push(v);
            }
        }
        Ok(CredalSet { space, vertices: deduped, constraints: None })
    }

    pub fn from_constraints(
        space: Arc<FiniteSpace>,
        constraints: Vec<CredalConstraint>,
    ) -> Result<CredalSet> {
        for (i, c) in constraints.iter().enumerate() {
            if c.coeffs.len() != space.size() {
                return Err(Error::InvalidModel(format!(
                    "constraint {i} has {} coefficients for {} atoms",
                    c.coeffs.len(),
                    space.size()
                )));
            }
        }
        Ok(CredalSet { space, vertices: Vec::new(), constraints: Some(constraints) })
    }

    /// Vertex form with constraint rows attached; every vertex must satisfy
    /// every row.
    pub fn with_constraints(mut self, constraints: Vec<CredalConstraint>) -> Result<CredalSet> {
        for v in &self.vertices {
            for (i, c) in constraints.iter().enumerate() {
                let lhs: Rat = c.coeffs.iter().zip(v.pmf()).map(|(a, p)| a * p).sum();
                let ok = match c.rel {
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Le => lhs <= c.rhs,
                };
                if !ok {
                    return Err(Error::InvalidModel(format!(
                        "vertex violates constraint row {i}"
                    )));
                }
            }
        }
        self.constraints = Some(constraints);
        Ok(self)
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn has_vertex_form(&self) -> bool {
        !self.vertices.is_empty()
    }

    pub fn vertices(&self) -> Result<&[LinearPrevision]> {
        if self.vertices.is_empty() {
            Err(Error::VertexFormRequired)
        } else {
            Ok(&self.vertices)
        }
    }

    pub fn constraints(&self) -> Option<&[CredalConstraint]> {
        self.constraints.as_deref()
    }

    /// Lower envelope of a gamble; the minimum over the polytope.
    pub fn lower(&self, f: &Gamble) -> Result<Rat> {
        check_space(&self.space, f.space(), "envelope evaluation")?;
        if self.has_vertex_form() {
            let mut best: Option<Rat> = None;
            for v in &self.vertices {
                let val = v.eval(f)?;
                if best.as_ref().is_none_or(|b| val < *b) {
                    best = Some(val);
                }
            }
            Ok(best.expect("non-empty vertex list"))
        } else {
            self.lower_via_lp(f)
        }
    }

    /// Lower envelope through the LP backend, ignoring any vertex list.
    pub fn lower_via_lp(&self, f: &Gamble) -> Result<Rat> {
        check_space(&self.space, f.space(), "envelope evaluation")?;
        let n = self.space.size();
        let mut constraints = vec![Constraint {
            coeffs: vec![rat_int(1); n],
            rel: Relation::Eq,
            rhs: rat_int(1),
        }];
        if let Some(rows) = &self.constraints {
            for r in rows {
                constraints.push(Constraint {
                    coeffs: r.coeffs.clone(),
                    rel: r.rel,
                    rhs: r.rhs.clone(),
                });
            }
        }
        let lp = LinearProgram::new(f.values().to_vec(), constraints);
        let out = lp_minimize(&lp)?;
        match out.status {
            LpStatus::Optimal => Ok(out.optimum.expect("optimal outcome carries optimum")),
            LpStatus::Infeasible => Err(Error::InvalidModel(
                "constraint-form credal set is empty".into(),
            )),
            LpStatus::Unbounded => Err(Error::InvalidModel(
                "credal envelope unbounded; constraints do not confine the simplex".into(),
            )),
        }
    }

    /// Upper envelope; the conjugate `-lower(-f)`.
    pub fn upper(&self, f: &Gamble) -> Result<Rat> {
        Ok(-self.lower(&f.neg())?)
    }

    pub fn lower_prob(&self, e: &Event) -> Result<Rat> {
        self.lower(&crate::model::indicator(e))
    }

    pub fn upper_prob(&self, e: &Event) -> Result<Rat> {
        self.upper(&crate::model::indicator(e))
    }

    /// A vertex attaining the lower envelope of `f`.
    pub fn attaining_vertex(&self, f: &Gamble) -> Result<&LinearPrevision> {
        let target = self.lower(f)?;
        for v in self.vertices()? {
            if v.eval(f)? == target {
                return Ok(v);
            }
        }
        unreachable!("minimum over a finite list is attained")
    }
}

/// Exact precision test: lower and upper envelope coincide on `f`.
pub fn is_precise_on(model: &CredalSet, f: &Gamble) -> Result<bool> {
    Ok(model.lower(f)? == model.upper(f)?)
}

/// Side selector for envelope evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeSide {
    Lower,
    Upper,
}

pub fn prevision_eval(model: &CredalSet, f: &Gamble, side: EnvelopeSide) -> Result<Rat> {
    match side {
        EnvelopeSide::Lower => model.lower(f),
        EnvelopeSide::Upper => model.upper(f),
    }
}

/// A finite intersection of lower-prevision choice models, each represented
/// by one credal set.
#[derive(Debug, Clone)]
pub struct ArchimedeanModel {
    members: Vec<CredalSet>,
}

impl ArchimedeanModel {
    pub fn new(members: Vec<CredalSet>) -> Result<ArchimedeanModel> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidModel("lower_set needs at least one member".into()))?;
        let space = first.space().clone();
        for m in &members[1..] {
            check_space(&space, m.space(), "lower_set member")?;
        }
        Ok(ArchimedeanModel { members })
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        self.members[0].space()
    }

    pub fn members(&self) -> &[CredalSet] {
        &self.members
    }
}

/// One violation found while spot-checking coherence properties.
#[derive(Debug, Clone)]
pub struct PropertyViolation {
    pub property: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub instances: usize,
    pub violations: Vec<PropertyViolation>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Spot-checks the standard coherence properties of the lower envelope on
/// sampled gambles: bounds, homogeneity, superadditivity, monotonicity,
/// constant additivity, the mixed additivity chain, and the finite-space
/// Lipschitz bound that replaces uniform continuity.
pub fn check_lower_prevision_properties(
    model: &CredalSet,
    samples: usize,
    seed: u64,
) -> Result<PropertyReport> {
    assert!(samples >= 1, "sample budget must be positive");
    let mut violations = Vec::new();
    let mut rng = sampling::rng_for(seed, 0x1075);
    let space = model.space().clone();
    for _ in 0..samples {
        let f = sampling::sample_gamble(&mut rng, &space, 6);
        let g = sampling::sample_gamble(&mut rng, &space, 6);
        let lam = sampling::sample_positive_rat(&mut rng, 5);
        let mu = sampling::sample_rat(&mut rng, 5, 4);

        let lf = model.lower(&f)?;
        let uf = model.upper(&f)?;
        let lg = model.lower(&g)?;
        let ug = model.upper(&g)?;
        let sum = f.add(&g)?;
        let lsum = model.lower(&sum)?;
        let usum = model.upper(&sum)?;

        // LP1: lower dominates the infimum.
        if &lf < f.min_value() {
            violations.push(PropertyViolation {
                property: "LP1",
                detail: format!("lower({f:?}) = {} < min", format_rat(&lf)),
            });
        }
        // LP2: positive homogeneity.
        if model.lower(&f.scale(&lam))? != &lam * &lf {
            violations.push(PropertyViolation {
                property: "LP2",
                detail: format!("lambda = {}, f = {f:?}", format_rat(&lam)),
            });
        }
        // LP3: superadditivity.
        if lsum < &lf + &lg {
            violations.push(PropertyViolation {
                property: "LP3",
                detail: format!("f = {f:?}, g = {g:?}"),
            });
        }
        // LP4: inf <= lower <= upper <= sup.
        if !(f.min_value() <= &lf && lf <= uf && &uf <= f.max_value()) {
            violations.push(PropertyViolation {
                property: "LP4",
                detail: format!("f = {f:?}"),
            });
        }
        // LP5: monotonicity, tested on f and f + |g|.
        let bigger = f.add(&Gamble::new(
            space.clone(),
            g.values().iter().map(|v| v.abs()).collect(),
        )?)?;
        if model.lower(&bigger)? < lf || model.upper(&bigger)? < uf {
            violations.push(PropertyViolation {
                property: "LP5",
                detail: format!("f = {f:?}, g = {g:?}"),
            });
        }
        // LP6: constant additivity.
        if model.lower(&f.shift(&mu))? != &lf + &mu {
            violations.push(PropertyViolation {
                property: "LP6",
                detail: format!("mu = {}, f = {f:?}", format_rat(&mu)),
            });
        }
        // LP7 restated: |lower(f) - lower(g)| <= max|f - g|.
        let gap = (&lf - &lg).abs();
        let dist = f
            .sub(&g)?
            .values()
            .iter()
            .map(|v| v.abs())
            .max()
            .expect("non-empty space");
        if gap > dist {
            violations.push(PropertyViolation {
                property: "LP7",
                detail: format!("f = {f:?}, g = {g:?}"),
            });
        }
        // LP8: mixed additivity chain.
        let chain_ok = &lf + &lg <= lsum
            && lsum <= &lf + &ug
            && &lf + &ug <= usum
            && usum <= &uf + &ug;
        if !chain_ok {
            violations.push(PropertyViolation {
                property: "LP8",
                detail: format!("f = {f:?}, g = {g:?}"),
            });
        }
    }
    Ok(PropertyReport { instances: samples, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{indicator, Event};
    use crate::rational::rat;

    fn space2() -> Arc<FiniteSpace> {
        FiniteSpace::new(["1", "2"]).unwrap()
    }

    fn omega4() -> Arc<FiniteSpace> {
        FiniteSpace::new(["ab", "ab-", "a-b", "a-b-"]).unwrap()
    }

    fn lin(space: &Arc<FiniteSpace>, pmf: &[Rat]) -> LinearPrevision {
        LinearPrevision::new(space.clone(), pmf.to_vec()).unwrap()
    }

    fn fix_c2() -> CredalSet {
        let sp = omega4();
        let unif = LinearPrevision::uniform(sp.clone());
        let p2 = lin(&sp, &[rat(9, 100), rat(21, 100), rat(21, 100), rat(49, 100)]);
        CredalSet::from_vertices(sp, vec![unif, p2]).unwrap()
    }

    fn event_b(sp: &Arc<FiniteSpace>) -> Event {
        Event::from_labels(sp.clone(), ["ab", "a-b"]).unwrap()
    }

    #[test]
    fn pmf_must_sum_to_one() {
        let sp = space2();
        assert!(LinearPrevision::new(sp.clone(), vec![rat(1, 2), rat(2, 5)]).is_err());
        assert!(LinearPrevision::new(sp, vec![rat(3, 2), rat(-1, 2)]).is_err());
    }

    #[test]
    fn uniform_prevision_of_indicator() {
        let sp = omega4();
        let b = event_b(&sp);
        let p = LinearPrevision::uniform(sp);
        assert_eq!(p.eval(&indicator(&b)).unwrap(), rat(1, 2));
    }

    #[test]
    fn vacuous_envelope_is_min_max() {
        let sp = space2();
        let m = CredalSet::from_vertices(
            sp.clone(),
            vec![
                LinearPrevision::degenerate(sp.clone(), 0).unwrap(),
                LinearPrevision::degenerate(sp.clone(), 1).unwrap(),
            ],
        )
        .unwrap();
        let f = Gamble::new(sp, vec![rat_int(2), rat_int(-1)]).unwrap();
        assert_eq!(m.lower(&f).unwrap(), rat_int(-1));
        assert_eq!(m.upper(&f).unwrap(), rat_int(2));
    }

    #[test]
    fn fix_c2_envelope_of_b() {
        let m = fix_c2();
        let b = event_b(m.space());
        assert_eq!(m.lower_prob(&b).unwrap(), rat(3, 10));
        assert_eq!(m.upper_prob(&b).unwrap(), rat(1, 2));
        assert!(!is_precise_on(&m, &indicator(&b)).unwrap());
    }

    #[test]
    fn single_vertex_is_precise_everywhere() {
        let sp = space2();
        let m = CredalSet::from_vertices(sp.clone(), vec![LinearPrevision::uniform(sp.clone())])
            .unwrap();
        let f = Gamble::new(sp, vec![rat(7, 3), rat(-1, 4)]).unwrap();
        assert!(is_precise_on(&m, &f).unwrap());
    }

    #[test]
    fn constants_are_precise_on_vacuous() {
        let sp = space2();
        let m = CredalSet::from_vertices(
            sp.clone(),
            vec![
                LinearPrevision::degenerate(sp.clone(), 0).unwrap(),
                LinearPrevision::degenerate(sp.clone(), 1).unwrap(),
            ],
        )
        .unwrap();
        let c = Gamble::constant(sp, rat(5, 7));
        assert!(is_precise_on(&m, &c).unwrap());
    }

    #[test]
    fn conjugacy_and_attainment() {
        let m = fix_c2();
        let f = Gamble::new(
            m.space().clone(),
            vec![rat(3, 5), rat(-2, 5), rat(3, 5), rat(-2, 5)],
        )
        .unwrap();
        assert_eq!(m.upper(&f).unwrap(), -m.lower(&f.neg()).unwrap());
        let v = m.attaining_vertex(&f).unwrap();
        assert_eq!(v.eval(&f).unwrap(), m.lower(&f).unwrap());
    }

    #[test]
    fn lower_plus_upper_of_complement_is_one() {
        let m = fix_c2();
        let b = event_b(m.space());
        let sum = m.lower_prob(&b).unwrap() + m.upper_prob(&b.complement()).unwrap();
        assert_eq!(sum, rat_int(1));
    }

    #[test]
    fn superadditivity_instance_from_fixture() {
        let m = fix_c2();
        let b = indicator(&event_b(m.space()));
        let twice = b.add(&b).unwrap();
        assert_eq!(m.lower(&twice).unwrap(), rat(3, 5));
        assert!(m.lower(&twice).unwrap() >= rat(3, 10) + rat(3, 10));
    }

    #[test]
    fn property_report_clean_on_random_credal() {
        let m = fix_c2();
        let report = check_lower_prevision_properties(&m, 200, 7).unwrap();
        assert!(report.passed(), "violations: {:?}", report.violations);
    }

    #[test]
    fn constraint_form_matches_vertex_form_on_full_simplex() {
        let sp = space2();
        let by_constraints = CredalSet::from_constraints(sp.clone(), Vec::new()).unwrap();
        let by_vertices = CredalSet::from_vertices(
            sp.clone(),
            vec![
                LinearPrevision::degenerate(sp.clone(), 0).unwrap(),
                LinearPrevision::degenerate(sp.clone(), 1).unwrap(),
            ],
        )
        .unwrap();
        let f = Gamble::new(sp, vec![rat(2, 3), rat(-1, 5)]).unwrap();
        assert_eq!(by_constraints.lower(&f).unwrap(), by_vertices.lower(&f).unwrap());
        assert!(matches!(by_constraints.vertices(), Err(Error::VertexFormRequired)));
    }
}
