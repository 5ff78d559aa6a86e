//! Membership in the positive linear span of a finite set of gambles.

use crate::error::Result;
use crate::lp::{lp_minimize, Constraint, LinearProgram, LpStatus, Relation};
use crate::model::{check_space, Gamble, OptionSet};
use crate::rational::{rat_int, rat_zero, Rat};

/// Decides whether `h` is a positive linear combination of the generators,
/// i.e. `h = Σ λ_k f_k` with `λ ≥ 0`, `λ ≠ 0`. Returns the coefficients on
/// success. For `h = 0` a normalization `Σ λ = 1` rules out the trivial
/// all-zero combination.
pub fn posi_member(h: &Gamble, generators: &OptionSet) -> Result<Option<Vec<Rat>>> {
    check_space(h.space(), generators.space(), "posi membership")?;
    if generators.is_empty() {
        return Ok(None);
    }
    let gens: Vec<&Gamble> = generators.iter().collect();
    let k = gens.len();
    let n = h.space().size();

    let mut constraints = Vec::with_capacity(n + 1);
    for atom in 0..n {
        constraints.push(Constraint {
            coeffs: gens.iter().map(|g| g.value(atom).clone()).collect(),
            rel: Relation::Eq,
            rhs: h.value(atom).clone(),
        });
    }
    if h.is_zero() {
        constraints.push(Constraint {
            coeffs: vec![rat_int(1); k],
            rel: Relation::Eq,
            rhs: rat_int(1),
        });
    }
    let lp = LinearProgram::new(vec![rat_zero(); k], constraints);
    let out = lp_minimize(&lp)?;
    match out.status {
        LpStatus::Optimal => Ok(out.witness),
        _ => Ok(None),
    }
}
