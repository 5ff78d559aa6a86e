//! Product spaces, induced distribution models for variables, and the
//! combined marginalization property check.

use crate::axioms::find_mixing_violation;
use crate::choice::ChoiceModel;
use crate::error::Result;
use crate::independence::{
    s_irrelevant_variables, s_irrelevant_variables_sampled, variable_credibly_indeterminate,
    Method, DEFAULT_SUBSET_CAP,
};
use crate::model::{FiniteSpace, Variable};
use crate::previsions::{ArchimedeanModel, CredalSet, LinearPrevision};
use std::sync::Arc;

/// A possibility space built as the product of two value sets, with the two
/// coordinate projections as variables. Atom labels concatenate the value
/// labels in row-major order.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    pub space: Arc<FiniteSpace>,
    pub x: Variable,
    pub y: Variable,
}

pub fn product_space(x_values: &[String], y_values: &[String]) -> Result<ProductSpace> {
    let mut atoms = Vec::with_capacity(x_values.len() * y_values.len());
    let mut x_assignment = Vec::new();
    let mut y_assignment = Vec::new();
    for xv in x_values {
        for yv in y_values {
            atoms.push(format!("{xv}{yv}"));
            x_assignment.push(xv.clone());
            y_assignment.push(yv.clone());
        }
    }
    let space = FiniteSpace::new(atoms)?;
    let x = Variable::new(space.clone(), x_values.to_vec(), &x_assignment)?;
    let y = Variable::new(space.clone(), y_values.to_vec(), &y_assignment)?;
    Ok(ProductSpace { space, x, y })
}

fn codomain_space(z: &Variable) -> Result<Arc<FiniteSpace>> {
    FiniteSpace::new(z.codomain().to_vec())
}

fn pushforward_prevision(
    p: &LinearPrevision,
    z: &Variable,
    target: &Arc<FiniteSpace>,
) -> Result<LinearPrevision> {
    let assignment: Vec<usize> = (0..p.space().size()).map(|i| z.value_at(i)).collect();
    LinearPrevision::new(target.clone(), p.pushforward(&assignment, z.codomain_size()))
}

fn pushforward_credal(m: &CredalSet, z: &Variable, target: &Arc<FiniteSpace>) -> Result<CredalSet> {
    let vertices = m
        .vertices()?
        .iter()
        .map(|v| pushforward_prevision(v, z, target))
        .collect::<Result<Vec<_>>>()?;
    // Duplicate images collapse inside the constructor.
    CredalSet::from_vertices(target.clone(), vertices)
}

/// The distribution model of a variable: the image of the model on the
/// variable's codomain, taken vertex by vertex and member by member.
pub fn distribution_model(model: &ChoiceModel, z: &Variable) -> Result<ChoiceModel> {
    let target = codomain_space(z)?;
    Ok(match model {
        ChoiceModel::Linear(p) => ChoiceModel::Linear(pushforward_prevision(p, z, &target)?),
        ChoiceModel::Credal(m) => ChoiceModel::Credal(pushforward_credal(m, z, &target)?),
        ChoiceModel::LowerSet(s) => {
            let members = s
                .members()
                .iter()
                .map(|m| pushforward_credal(m, z, &target))
                .collect::<Result<Vec<_>>>()?;
            ChoiceModel::LowerSet(ArchimedeanModel::new(members)?)
        }
    })
}

/// Survey of the marginalization property on one model and variable pair.
#[derive(Debug, Clone)]
pub struct MarginalReport {
    /// Some set of first-variable values is credibly indeterminate.
    pub x_credibly_indeterminate: bool,
    /// Exact variable-level irrelevance of the first variable to the second.
    pub irrelevance_holds: bool,
    /// Every member induces a single distribution on the second variable.
    pub members_precise_on_y: bool,
    /// The induced model on the second variable's codomain is a set of
    /// linear previsions.
    pub marginal_is_linear_set: bool,
    /// The sampled partition falsifier stayed silent.
    pub falsifier_silent: bool,
    pub notes: Vec<String>,
}

impl MarginalReport {
    pub fn all_hold(&self) -> bool {
        self.x_credibly_indeterminate
            && self.irrelevance_holds
            && self.members_precise_on_y
            && self.marginal_is_linear_set
            && self.falsifier_silent
    }
}

/// Checks, clause by clause, that a model with a credibly indeterminate
/// first variable and irrelevance towards the second collapses to a set of
/// linear previsions on the second variable's codomain. Every clause is
/// evaluated even when an earlier one fails.
pub fn corollary1_check(
    model: &ChoiceModel,
    x: &Variable,
    y: &Variable,
    budget: usize,
    seed: u64,
) -> Result<MarginalReport> {
    let mut notes = Vec::new();

    let x_credibly_indeterminate = variable_credibly_indeterminate(model, x)?.is_some();
    if !x_credibly_indeterminate {
        notes.push("no set of first-variable values is credibly indeterminate".into());
    }

    let irrelevance_holds =
        s_irrelevant_variables(model, x, y, Method::Direct, DEFAULT_SUBSET_CAP)?.holds;
    if !irrelevance_holds {
        notes.push("exact variable-level irrelevance fails".into());
    }

    let mut members_precise_on_y = true;
    for (i, member) in model.members().iter().enumerate() {
        let precise = match member {
            crate::choice::MemberView::Linear(_) => true,
            crate::choice::MemberView::Credal(m) => {
                crate::independence::precise_distribution(m, y)?.is_some()
            }
        };
        if !precise {
            notes.push(format!("member {i} has no precise second-variable distribution"));
            members_precise_on_y = false;
        }
    }

    let marginal = distribution_model(model, y)?;
    let marginal_is_linear_set = marginal.members().iter().all(|m| match m {
        crate::choice::MemberView::Linear(_) => true,
        crate::choice::MemberView::Credal(c) => {
            c.vertices().map(|v| v.len() == 1).unwrap_or(false)
        }
    }) && find_mixing_violation(&marginal, budget, seed)?.is_none();
    if !marginal_is_linear_set {
        notes.push("induced second-variable model is not a set of linear previsions".into());
    }

    let falsifier_silent = s_irrelevant_variables_sampled(model, x, y, budget, seed)?.is_none();
    if !falsifier_silent {
        notes.push("sampled partition falsifier found a violation".into());
    }

    Ok(MarginalReport {
        x_credibly_indeterminate,
        irrelevance_holds,
        members_precise_on_y,
        marginal_is_linear_set,
        falsifier_silent,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, Rat};

    fn lin(space: &Arc<FiniteSpace>, pmf: &[Rat]) -> LinearPrevision {
        LinearPrevision::new(space.clone(), pmf.to_vec()).unwrap()
    }

    fn fix_cor1() -> (ProductSpace, ChoiceModel) {
        let ps = product_space(
            &["x0".to_string(), "x1".to_string()],
            &["y0".to_string(), "y1".to_string()],
        )
        .unwrap();
        let sp = ps.space.clone();
        let m1 = CredalSet::from_vertices(
            sp.clone(),
            vec![
                lin(&sp, &[rat(3, 50), rat(7, 50), rat(12, 50), rat(28, 50)]),
                lin(&sp, &[rat(9, 50), rat(21, 50), rat(6, 50), rat(14, 50)]),
            ],
        )
        .unwrap();
        let m2 = CredalSet::from_vertices(
            sp.clone(),
            vec![
                lin(&sp, &[rat(1, 10), rat(1, 10), rat(2, 5), rat(2, 5)]),
                lin(&sp, &[rat(3, 10), rat(3, 10), rat(1, 5), rat(1, 5)]),
            ],
        )
        .unwrap();
        let model = ChoiceModel::LowerSet(ArchimedeanModel::new(vec![m1, m2]).unwrap());
        (ps, model)
    }

    #[test]
    fn product_space_layout() {
        let ps = product_space(
            &["x0".to_string(), "x1".to_string()],
            &["y0".to_string(), "y1".to_string()],
        )
        .unwrap();
        assert_eq!(ps.space.atoms(), ["x0y0", "x0y1", "x1y0", "x1y1"]);
        assert_eq!(ps.x.value_at(0), 0);
        assert_eq!(ps.x.value_at(2), 1);
        assert_eq!(ps.y.value_at(2), 0);
    }

    #[test]
    fn distribution_model_collapses_duplicates() {
        let (ps, model) = fix_cor1();
        let marginal = distribution_model(&model, &ps.y).unwrap();
        // Both vertices of each member share the Y-marginal, so each member
        // collapses to a single vertex.
        let ChoiceModel::LowerSet(s) = &marginal else { panic!("kind preserved") };
        for m in s.members() {
            assert_eq!(m.vertices().unwrap().len(), 1);
        }
        let expected = [vec![rat(3, 10), rat(7, 10)], vec![rat(1, 2), rat(1, 2)]];
        for (m, want) in s.members().iter().zip(&expected) {
            assert_eq!(m.vertices().unwrap()[0].pmf(), &want[..]);
        }
    }

    #[test]
    fn corollary_fixture_passes_all_clauses() {
        let (ps, model) = fix_cor1();
        let report = corollary1_check(&model, &ps.x, &ps.y, 200, 17).unwrap();
        assert!(report.all_hold(), "{:?}", report.notes);
    }

    #[test]
    fn perturbed_fixture_fails_with_clause_detail() {
        let ps = product_space(
            &["x0".to_string(), "x1".to_string()],
            &["y0".to_string(), "y1".to_string()],
        )
        .unwrap();
        let sp = ps.space.clone();
        // Vertices with different Y-marginals: irrelevance and precision break.
        let m = CredalSet::from_vertices(
            sp.clone(),
            vec![
                lin(&sp, &[rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)]),
                lin(&sp, &[rat(9, 100), rat(21, 100), rat(21, 100), rat(49, 100)]),
            ],
        )
        .unwrap();
        let model = ChoiceModel::LowerSet(ArchimedeanModel::new(vec![m]).unwrap());
        let report = corollary1_check(&model, &ps.x, &ps.y, 200, 19).unwrap();
        assert!(!report.all_hold());
        assert!(report.x_credibly_indeterminate);
        assert!(!report.irrelevance_holds);
        assert!(!report.members_precise_on_y);
        assert!(!report.marginal_is_linear_set);
        assert!(!report.falsifier_silent);
    }

    #[test]
    fn linear_pushforward() {
        let ps = product_space(
            &["x0".to_string(), "x1".to_string()],
            &["y0".to_string(), "y1".to_string()],
        )
        .unwrap();
        let sp = ps.space.clone();
        let p = lin(&sp, &[rat(3, 50), rat(7, 50), rat(12, 50), rat(28, 50)]);
        let marginal = distribution_model(&ChoiceModel::Linear(p), &ps.x).unwrap();
        let ChoiceModel::Linear(q) = marginal else { panic!("kind preserved") };
        assert_eq!(q.pmf(), &[rat(1, 5), rat(4, 5)]);
    }
}
