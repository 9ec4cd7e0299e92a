//! Dense exact-rational primal simplex with Bland's rule.
//!
//! Solves `max c·x  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`, so the slack basis
//! is feasible and no phase-one is needed. Bland's pivoting rule (smallest
//! eligible index both entering and leaving) guarantees termination, and
//! the final tableau certifies optimality by dual feasibility: every
//! reduced cost is ≤ 0.

use crate::util::rational::Q;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplexError {
    #[error("constraint right-hand side {0} is negative; slack basis infeasible")]
    NegativeRhs(String),
    #[error("objective unbounded above")]
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexSolution {
    pub value: Q,
    pub point: Vec<Q>,
    /// All reduced costs at termination are ≤ 0.
    pub dual_feasible: bool,
}

/// `constraints` are pairs `(a, b)` meaning `a·x ≤ b`.
pub fn maximize(
    objective: &[Q],
    constraints: &[(Vec<Q>, Q)],
) -> Result<SimplexSolution, SimplexError> {
    let n = objective.len();
    let m = constraints.len();
    for (_, b) in constraints {
        if b < &Q::zero() {
            return Err(SimplexError::NegativeRhs(b.to_string()));
        }
    }

    // tableau: m rows × (n structural + m slack + 1 rhs)
    let cols = n + m;
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut rhs: Vec<Q> = Vec::with_capacity(m);
    for (i, (a, b)) in constraints.iter().enumerate() {
        assert_eq!(a.len(), n, "constraint width mismatch");
        let mut row = vec![Q::zero(); cols];
        row[..n].clone_from_slice(a);
        row[n + i] = Q::from_integer(1.into());
        rows.push(row);
        rhs.push(b.clone());
    }
    let mut reduced: Vec<Q> = objective
        .iter()
        .cloned()
        .chain(std::iter::repeat(Q::zero()).take(m))
        .collect();
    let mut value = Q::zero();
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: entering = smallest column with positive reduced cost
        let Some(enter) = (0..cols).find(|&j| reduced[j] > Q::zero()) else {
            break;
        };
        // ratio test; Bland tie-break on smallest basis variable
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if rows[i][enter] > Q::zero() {
                let ratio = rhs[i].clone() / rows[i][enter].clone();
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((best_i, best)) => {
                        if ratio < *best || (ratio == *best && basis[i] < basis[*best_i]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            return Err(SimplexError::Unbounded);
        };

        // pivot
        let pivot = rows[pivot_row][enter].clone();
        for v in rows[pivot_row].iter_mut() {
            *v /= pivot.clone();
        }
        rhs[pivot_row] /= pivot.clone();
        for i in 0..m {
            if i != pivot_row && !rows[i][enter].is_zero() {
                let factor = rows[i][enter].clone();
                for j in 0..cols {
                    let delta = factor.clone() * rows[pivot_row][j].clone();
                    rows[i][j] -= delta;
                }
                let delta = factor * rhs[pivot_row].clone();
                rhs[i] -= delta;
            }
        }
        if !reduced[enter].is_zero() {
            let factor = reduced[enter].clone();
            for j in 0..cols {
                let delta = factor.clone() * rows[pivot_row][j].clone();
                reduced[j] -= delta;
            }
            value += factor * rhs[pivot_row].clone();
        }
        basis[pivot_row] = enter;
    }

    let mut point = vec![Q::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            point[basis[i]] = rhs[i].clone();
        }
    }
    let dual_feasible = reduced.iter().all(|r| r <= &Q::zero());
    debug_assert!(dual_feasible);
    Ok(SimplexSolution {
        value,
        point,
        dual_feasible,
    })
}
