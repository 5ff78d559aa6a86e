//! Choice models, the sets of desirable option sets they induce, and the
//! decision criteria that fall out of them.
//!
//! Everything routes through one duality: an option `f` is rejected from `A`
//! exactly when `A ⊖ f` belongs to the model's set of desirable option sets,
//! and an option set belongs to that set exactly when every member assigns
//! some element a strictly positive lower prevision. The four named criteria
//! only differ in which model kinds they accept.

use crate::error::{Error, Result};
use crate::model::{check_space, dominates, opt_minus, DominanceKind, FiniteSpace, Gamble, OptionSet};
use crate::previsions::{ArchimedeanModel, CredalSet, LinearPrevision};
use crate::rational::{rat_zero, Rat};
use std::sync::Arc;

/// A choice model: one linear prevision, one coherent lower prevision given
/// by its credal set, or a finite set of lower previsions.
#[derive(Debug, Clone)]
pub enum ChoiceModel {
    Linear(LinearPrevision),
    Credal(CredalSet),
    LowerSet(ArchimedeanModel),
}

/// A read-only view of one member lower prevision of a choice model.
#[derive(Debug, Clone, Copy)]
pub enum MemberView<'a> {
    Linear(&'a LinearPrevision),
    Credal(&'a CredalSet),
}

impl MemberView<'_> {
    pub fn lower(&self, f: &Gamble) -> Result<Rat> {
        match self {
            MemberView::Linear(p) => p.eval(f),
            MemberView::Credal(m) => m.lower(f),
        }
    }

    pub fn upper(&self, f: &Gamble) -> Result<Rat> {
        Ok(-self.lower(&f.neg())?)
    }
}

impl ChoiceModel {
    pub fn space(&self) -> &Arc<FiniteSpace> {
        match self {
            ChoiceModel::Linear(p) => p.space(),
            ChoiceModel::Credal(m) => m.space(),
            ChoiceModel::LowerSet(s) => s.space(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ChoiceModel::Linear(_) => "linear",
            ChoiceModel::Credal(_) => "credal",
            ChoiceModel::LowerSet(_) => "lower_set",
        }
    }

    /// The member lower previsions whose induced sets of desirable option
    /// sets are intersected.
    pub fn members(&self) -> Vec<MemberView<'_>> {
        match self {
            ChoiceModel::Linear(p) => vec![MemberView::Linear(p)],
            ChoiceModel::Credal(m) => vec![MemberView::Credal(m)],
            ChoiceModel::LowerSet(s) => s.members().iter().map(MemberView::Credal).collect(),
        }
    }

    /// `min` over members of `max` over options of the lower prevision; the
    /// option set is desirable exactly when this is strictly positive.
    /// `None` for the empty option set, which is never desirable.
    pub fn archimedean_slack(&self, a: &OptionSet) -> Result<Option<Rat>> {
        check_space(self.space(), a.space(), "option set membership")?;
        if a.is_empty() {
            return Ok(None);
        }
        let mut slack: Option<Rat> = None;
        for member in self.members() {
            let mut best: Option<Rat> = None;
            for f in a.iter() {
                let v = member.lower(f)?;
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
            let best = best.expect("non-empty option set");
            if slack.as_ref().is_none_or(|s| best < *s) {
                slack = Some(best);
            }
        }
        Ok(slack)
    }

    /// Membership of `a` in the model's set of desirable option sets.
    pub fn k_member(&self, a: &OptionSet) -> Result<bool> {
        Ok(matches!(self.archimedean_slack(a)?, Some(s) if s > rat_zero()))
    }
}

/// The decision criteria. Each is only defined for the matching model kind;
/// mixing them up is an error rather than a silent reinterpretation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Maximize expected utility; linear models.
    Meu,
    /// Undominated under the lower prevision order; credal models.
    Maximality,
    /// Optimal under some member prevision; lower sets of single-vertex members.
    EAdmissibility,
    /// Maximal under some member lower prevision; lower sets.
    Lowerset,
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::Meu => "meu",
            Criterion::Maximality => "maximality",
            Criterion::EAdmissibility => "eadmissibility",
            Criterion::Lowerset => "lowerset",
        }
    }

    fn check_model(&self, model: &ChoiceModel) -> Result<()> {
        let ok = match self {
            Criterion::Meu => matches!(model, ChoiceModel::Linear(_)),
            Criterion::Maximality => matches!(model, ChoiceModel::Credal(_)),
            Criterion::EAdmissibility => match model {
                ChoiceModel::LowerSet(s) => s
                    .members()
                    .iter()
                    .all(|m| m.has_vertex_form() && m.vertices().map_or(false, |v| v.len() == 1)),
                _ => false,
            },
            Criterion::Lowerset => matches!(model, ChoiceModel::LowerSet(_)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::CriterionMismatch(format!(
                "{} is not defined for this {} model",
                self.name(),
                model.kind_name()
            )))
        }
    }
}

/// Why one option was rejected: for every member, an alternative whose
/// difference gamble has strictly positive lower prevision.
#[derive(Debug, Clone)]
pub struct RejectionCertificate {
    pub option: Gamble,
    /// One witness per member, in member order.
    pub witnesses: Vec<Gamble>,
}

#[derive(Debug, Clone)]
pub struct ChoiceResult {
    pub chosen: OptionSet,
    pub rejected: OptionSet,
    pub certificates: Vec<RejectionCertificate>,
}

/// Decides rejection of `f` from `a` directly through the duality. Returns a
/// certificate when rejected.
pub fn reject_option(
    model: &ChoiceModel,
    a: &OptionSet,
    f: &Gamble,
) -> Result<Option<RejectionCertificate>> {
    check_space(model.space(), a.space(), "rejection query")?;
    let shifted = opt_minus(a, f)?;
    let mut witnesses = Vec::new();
    for member in model.members() {
        let mut found = None;
        for g in a.iter() {
            if g == f {
                continue;
            }
            if member.lower(&g.sub(f)?)? > rat_zero() {
                found = Some(g.clone());
                break;
            }
        }
        match found {
            Some(g) => witnesses.push(g),
            None => return Ok(None),
        }
    }
    debug_assert!(model.k_member(&shifted)?);
    Ok(Some(RejectionCertificate { option: f.clone(), witnesses }))
}

/// Applies a decision criterion to a non-empty option set.
pub fn choose(model: &ChoiceModel, a: &OptionSet, criterion: Criterion) -> Result<ChoiceResult> {
    criterion.check_model(model)?;
    if a.is_empty() {
        return Err(Error::PreconditionFailed("cannot choose from an empty option set".into()));
    }
    let mut chosen = OptionSet::new(model.space().clone(), Vec::new())?;
    let mut rejected = OptionSet::new(model.space().clone(), Vec::new())?;
    let mut certificates = Vec::new();
    for f in a.iter() {
        match reject_option(model, a, f)? {
            Some(cert) => {
                rejected.insert(f.clone())?;
                certificates.push(cert);
            }
            None => chosen.insert(f.clone())?,
        }
    }
    Ok(ChoiceResult { chosen, rejected, certificates })
}

/// Drops every option strictly pointwise dominated by another option.
pub fn dominance_filter(a: &OptionSet) -> Result<OptionSet> {
    let mut kept = OptionSet::new(a.space().clone(), Vec::new())?;
    for f in a.iter() {
        let mut dominated = false;
        for g in a.iter() {
            if g != f && dominates(g, f, DominanceKind::StrictPointwise)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            kept.insert(f.clone())?;
        }
    }
    Ok(kept)
}
