//! Exact rational linear programming.
//!
//! A dense two-phase simplex over arbitrary-precision rationals, pivoting by
//! Bland's rule so that termination is guaranteed and every strict sign test
//! is decided exactly. Also hosts the 2-D open-cone feasibility primitive the
//! independence criteria reduce to.

use crate::error::{Error, Result};
use crate::rational::{rat_one, rat_zero, Rat};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Eq,
    Le,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

impl LinearProgram {
    /// All variables non-negative.
    pub fn new(objective: Vec<Rat>, constraints: Vec<Constraint>) -> LinearProgram {
        let bounds = vec![VarBound::NonNegative; objective.len()];
        LinearProgram { objective, constraints, bounds }
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if n == 0 {
            return Err(Error::MalformedProgram("no variables".into()));
        }
        if self.bounds.len() != n {
            return Err(Error::MalformedProgram("bounds/objective length mismatch".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::MalformedProgram(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub optimum: Option<Rat>,
    pub witness: Option<Vec<Rat>>,
}

/// Minimizes the objective over the constraint set.
pub fn lp_minimize(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;

    // Map to standard form: minimize c'y, Ay = b, y >= 0. Free variables are
    // split into a positive and a negative part.
    let n_orig = lp.objective.len();
    let mut col_of_var: Vec<(usize, Option<usize>)> = Vec::with_capacity(n_orig);
    let mut n_std = 0usize;
    for b in &lp.bounds {
        match b {
            VarBound::NonNegative => {
                col_of_var.push((n_std, None));
                n_std += 1;
            }
            VarBound::Free => {
                col_of_var.push((n_std, Some(n_std + 1)));
                n_std += 2;
            }
        }
    }

    let m = lp.constraints.len();
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rat> = Vec::with_capacity(m);
    let mut rels: Vec<Relation> = Vec::with_capacity(m);
    for c in &lp.constraints {
        let mut row = vec![rat_zero(); n_std];
        for (j, coef) in c.coeffs.iter().enumerate() {
            let (pos, neg) = col_of_var[j];
            row[pos] = coef.clone();
            if let Some(neg) = neg {
                row[neg] = -coef.clone();
            }
        }
        let (row, r, rel) = if c.rhs.is_negative() {
            let flipped = match c.rel {
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
                Relation::Le => Relation::Ge,
            };
            (row.iter().map(|v| -v).collect(), -c.rhs.clone(), flipped)
        } else {
            (row, c.rhs.clone(), c.rel)
        };
        rows.push(row);
        rhs.push(r);
        rels.push(rel);
    }

    // Slack/surplus columns, then artificials.
    let mut n_total = n_std;
    let mut slack_col: Vec<Option<usize>> = vec![None; m];
    for (i, rel) in rels.iter().enumerate() {
        match rel {
            Relation::Le | Relation::Ge => {
                slack_col[i] = Some(n_total);
                n_total += 1;
            }
            Relation::Eq => {}
        }
    }
    let art_start = n_total;
    let mut art_col: Vec<Option<usize>> = vec![None; m];
    for (i, rel) in rels.iter().enumerate() {
        let needs_art = match rel {
            Relation::Le => false,
            Relation::Ge | Relation::Eq => true,
        };
        if needs_art {
            art_col[i] = Some(n_total);
            n_total += 1;
        }
    }

    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![rat_zero(); n_total + 1];
        row[..n_std].clone_from_slice(&rows[i]);
        if let Some(s) = slack_col[i] {
            row[s] = match rels[i] {
                Relation::Le => rat_one(),
                Relation::Ge => -rat_one(),
                Relation::Eq => unreachable!(),
            };
        }
        if let Some(a) = art_col[i] {
            row[a] = rat_one();
        }
        row[n_total] = rhs[i].clone();
        basis.push(art_col[i].unwrap_or_else(|| slack_col[i].expect("basis column")));
        tab.push(row);
    }

    // Phase 1: drive the artificials to zero.
    if art_start < n_total {
        let mut costs = vec![rat_zero(); n_total];
        for c in costs.iter_mut().skip(art_start) {
            *c = rat_one();
        }
        run_simplex(&mut tab, &mut basis, &costs, n_total, n_total)?;
        let phase1: Rat = basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= art_start)
            .map(|(i, _)| tab[i][n_total].clone())
            .sum();
        if !phase1.is_zero() {
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                optimum: None,
                witness: None,
            });
        }
        // Pivot remaining zero-valued artificials out of the basis.
        let mut drop_rows = Vec::new();
        for i in 0..m {
            if basis[i] >= art_start {
                match (0..art_start).find(|&j| !tab[i][j].is_zero()) {
                    Some(j) => pivot(&mut tab, &mut basis, i, j, n_total),
                    None => drop_rows.push(i),
                }
            }
        }
        for &i in drop_rows.iter().rev() {
            tab.remove(i);
            basis.remove(i);
        }
    }

    // Phase 2 over the columns excluding artificials.
    let mut costs = vec![rat_zero(); n_total];
    for (j, c) in lp.objective.iter().enumerate() {
        let (pos, neg) = col_of_var[j];
        costs[pos] = c.clone();
        if let Some(neg) = neg {
            costs[neg] = -c.clone();
        }
    }
    let bounded = run_simplex(&mut tab, &mut basis, &costs, art_start, n_total)?;
    if !bounded {
        return Ok(LpOutcome {
            status: LpStatus::Unbounded,
            optimum: None,
            witness: None,
        });
    }

    let mut y = vec![rat_zero(); n_total];
    for (i, &b) in basis.iter().enumerate() {
        y[b] = tab[i][n_total].clone();
    }
    let witness: Vec<Rat> = col_of_var
        .iter()
        .map(|&(pos, neg)| match neg {
            Some(neg) => &y[pos] - &y[neg],
            None => y[pos].clone(),
        })
        .collect();
    let optimum: Rat = lp
        .objective
        .iter()
        .zip(&witness)
        .map(|(c, x)| c * x)
        .sum();
    Ok(LpOutcome {
        status: LpStatus::Optimal,
        optimum: Some(optimum),
        witness: Some(witness),
    })
}

/// Bland's rule simplex on the tableau; returns false when unbounded.
fn run_simplex(
    tab: &mut Vec<Vec<Rat>>,
    basis: &mut [usize],
    costs: &[Rat],
    n_cols: usize,
    rhs_col: usize,
) -> Result<bool> {
    loop {
        // Reduced costs r_j = c_j - c_B B^-1 a_j, recomputed each round.
        let entering = (0..n_cols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let z: Rat = basis
                .iter()
                .enumerate()
                .map(|(i, &b)| &costs[b] * &tab[i][j])
                .sum();
            costs[j] < z
        });
        let Some(j) = entering else {
            return Ok(true);
        };
        // Ratio test, ties broken by smallest basis index.
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..tab.len() {
            if tab[i][j].is_positive() {
                let ratio = &tab[i][rhs_col] / &tab[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leave else {
            return Ok(false);
        };
        pivot(tab, basis, i, j, rhs_col);
    }
}

fn pivot(tab: &mut [Vec<Rat>], basis: &mut [usize], row: usize, col: usize, rhs_col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v = &*v / &p;
    }
    for i in 0..tab.len() {
        if i != row && !tab[i][col].is_zero() {
            let factor = tab[i][col].clone();
            for j in 0..=rhs_col {
                let delta = &factor * &tab[row][j];
                tab[i][j] = &tab[i][j] - &delta;
            }
        }
    }
    basis[row] = col;
}

/// Decides whether some point of the plane lies strictly inside both open
/// half-planes `a·x < 0` and `b·x < 0`, returning a witness when it does.
///
/// Closed form: infeasible exactly when one normal vanishes or the normals
/// point in strictly opposite directions.
pub fn open_halfplane_pair_feasible(a: &[Rat; 2], b: &[Rat; 2]) -> Option<[Rat; 2]> {
    let a_zero = a[0].is_zero() && a[1].is_zero();
    let b_zero = b[0].is_zero() && b[1].is_zero();
    if a_zero || b_zero {
        return None;
    }
    let cross = &a[0] * &b[1] - &a[1] * &b[0];
    if cross.is_zero() {
        let dot = &a[0] * &b[0] + &a[1] * &b[1];
        if dot.is_negative() {
            return None;
        }
        // Parallel, same direction: walk against the shared normal.
        let w = [-a[0].clone(), -a[1].clone()];
        debug_assert!((&a[0] * &w[0] + &a[1] * &w[1]).is_negative());
        return Some(w);
    }
    // Independent normals: solve a·x = -1, b·x = -1.
    let x0 = (&a[1] - &b[1]) / &cross;
    let x1 = (&b[0] - &a[0]) / &cross;
    Some([x0, x1])
}
