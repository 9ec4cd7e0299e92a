//! The Kantorovich pseudometric between sub-probability measures over a
//! finite pseudometric space, computed exactly.
//!
//! The distance is the supremum of `|∫f dv₁ − ∫f dv₂|` over measurable
//! non-expansive maps into `[0,1]`. Over a finite carrier every function is
//! measurable once it is constant on σ-algebra blocks, the objective is
//! linear, and the feasible functions form a polytope
//! `{0 ≤ f ≤ 1, f(x) − f(y) ≤ d(x,y)}`, so the supremum is attained at a
//! vertex and equals the LP optimum. The LP is solved by an exact-rational
//! simplex; an independent vertex-enumeration oracle (all square subsystems
//! of tight constraints) backs the acceptance tests.

pub mod simplex;

use crate::fibration::Metric;
use crate::measurable::SubProb;
use crate::report::{LawCheck, LawReport};
use crate::util::rational::{ExtQ, Q};
use num_traits::{One, Zero};
use simplex::{maximize, SimplexError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KantError {
    #[error("carrier of size {0} exceeds the oracle bound {1}")]
    CarrierTooLarge(usize, usize),
    #[error("measure space does not match the metric carrier: {0}")]
    SpaceMismatch(String),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Meas(#[from] crate::measurable::MeasError),
}

/// Largest carrier the brute-force oracle will accept.
pub const ORACLE_MAX_CARRIER: usize = 5;

/// The polytope of admissible test functions plus an objective: variables
/// `f(x) ∈ [0,1]`, difference constraints from finite distances (both
/// orientations), block-equality constraints when the σ-algebra is not
/// discrete, and objective coefficients `v₁({x}) − v₂({x})` spread over
/// block representatives.
#[derive(Debug, Clone)]
pub struct LpInstance {
    pub objective: Vec<Q>,
    pub constraints: Vec<(Vec<Q>, Q)>,
}

fn unit_vec(n: usize, i: usize, sign: i64) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::from_integer(sign.into());
    v
}

fn diff_vec(n: usize, i: usize, j: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v[j] = -Q::one();
    v
}

pub fn build_instance(metric: &Metric, v1: &SubProb, v2: &SubProb) -> Result<LpInstance, KantError> {
    let carrier = metric.carrier();
    let n = carrier.len();
    if v1.space() != v2.space() {
        return Err(KantError::SpaceMismatch(
            "the two measures live on different spaces".to_string(),
        ));
    }
    if v1.space().carrier() != carrier {
        return Err(KantError::SpaceMismatch(
            "measure carrier differs from the metric carrier".to_string(),
        ));
    }

    let mut constraints = Vec::new();
    for i in 0..n {
        constraints.push((unit_vec(n, i, 1), Q::one())); // f(x) ≤ 1
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                if let ExtQ::Fin(d) = metric.at(i, j) {
                    // both orientations arise since the metric is symmetric
                    constraints.push((diff_vec(n, i, j), d.clone()));
                }
            }
        }
    }
    // non-discrete σ-algebras force f constant on blocks
    for blk in v1.space().blocks() {
        let mut points = blk.ones();
        if let Some(first) = points.next() {
            for p in points {
                constraints.push((diff_vec(n, first, p), Q::zero()));
                constraints.push((diff_vec(n, p, first), Q::zero()));
            }
        }
    }

    // objective: block mass difference charged to the block representative
    let mut objective = vec![Q::zero(); n];
    for (b, blk) in v1.space().blocks().iter().enumerate() {
        let first = blk.ones().next().expect("blocks are nonempty");
        objective[first] = v1.block_mass(b).clone() - v2.block_mass(b).clone();
    }

    Ok(LpInstance {
        objective,
        constraints,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KantResult {
    pub distance: Q,
    /// An optimal test function witnessing the distance.
    pub optimal_f: Vec<Q>,
}

/// The lifted distance, as the max of the LP optimum for the objective and
/// its negation (the absolute value in the supremum).
pub fn kantorovich(metric: &Metric, v1: &SubProb, v2: &SubProb) -> Result<KantResult, KantError> {
    let instance = build_instance(metric, v1, v2)?;
    let pos = maximize(&instance.objective, &instance.constraints)?;
    let neg_obj: Vec<Q> = instance.objective.iter().map(|c| -c.clone()).collect();
    let neg = maximize(&neg_obj, &instance.constraints)?;
    let result = if pos.value >= neg.value {
        KantResult {
            distance: pos.value,
            optimal_f: pos.point,
        }
    } else {
        KantResult {
            distance: neg.value,
            optimal_f: neg.point,
        }
    };
    Ok(result)
}

fn solve_square(mut mat: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = mat[col][col].clone();
        for v in mat[col].iter_mut() {
            *v /= p.clone();
        }
        rhs[col] /= p;
        for r in 0..n {
            if r != col && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in 0..n {
                    let delta = factor.clone() * mat[col][c].clone();
                    mat[r][c] -= delta;
                }
                let delta = factor * rhs[col].clone();
                rhs[r] -= delta;
            }
        }
    }
    Some(rhs)
}

/// Independent brute-force evaluation: enumerate every candidate vertex of
/// the polytope by solving each square subsystem of tight constraints,
/// keep the feasible points, and return the largest absolute objective.
pub fn kantorovich_oracle(metric: &Metric, v1: &SubProb, v2: &SubProb) -> Result<Q, KantError> {
    let n = metric.carrier().len();
    if n > ORACLE_MAX_CARRIER {
        return Err(KantError::CarrierTooLarge(n, ORACLE_MAX_CARRIER));
    }
    let instance = build_instance(metric, v1, v2)?;
    if n == 0 {
        return Ok(Q::zero());
    }

    // full constraint list including the lower bounds −f(x) ≤ 0
    let mut all: Vec<(Vec<Q>, Q)> = (0..n).map(|i| (unit_vec(n, i, -1), Q::zero())).collect();
    all.extend(instance.constraints.iter().cloned());

    let feasible = |x: &[Q]| {
        all.iter().all(|(a, b)| {
            let lhs: Q = a.iter().zip(x.iter()).map(|(c, v)| c.clone() * v.clone()).sum();
            lhs <= *b
        })
    };

    let mut best = Q::zero(); // f ≡ 0 is always feasible with objective 0
    let mut combo: Vec<usize> = (0..n).collect();
    loop {
        let mat: Vec<Vec<Q>> = combo.iter().map(|&k| all[k].0.clone()).collect();
        let rhs: Vec<Q> = combo.iter().map(|&k| all[k].1.clone()).collect();
        if let Some(x) = solve_square(mat, rhs) {
            if feasible(&x) {
                let val: Q = instance
                    .objective
                    .iter()
                    .zip(x.iter())
                    .map(|(c, v)| c.clone() * v.clone())
                    .sum();
                let abs = if val < Q::zero() { -val } else { val };
                if abs > best {
                    best = abs;
                }
            }
        }
        // next n-combination of indices into `all`
        let m = all.len();
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            if combo[i] != i + m - n {
                combo[i] += 1;
                for j in i + 1..n {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Checks the pseudometric axioms of the lifted distance on the samples,
/// plus the clipped-distance law for point masses:
/// `K(δx, δy) = min(d(x,y), 1)`.
pub fn verify_pseudometric_laws(metric: &Metric, samples: &[SubProb]) -> LawReport {
    let mut report = LawReport::new("lifted pseudometric laws".to_string());

    let dist = |a: &SubProb, b: &SubProb| kantorovich(metric, a, b).map(|r| r.distance);

    let mut refl = LawCheck::pass("K(v,v) = 0");
    for v in samples {
        match dist(v, v) {
            Ok(d) if d.is_zero() => {}
            Ok(d) => {
                refl = LawCheck::fail("K(v,v) = 0", format!("got {d}"));
                break;
            }
            Err(e) => {
                refl = LawCheck::fail("K(v,v) = 0", e.to_string());
                break;
            }
        }
    }
    report.push(refl);

    let mut sym = LawCheck::pass("K(v,w) = K(w,v)");
    'sym: for v in samples {
        for w in samples {
            match (dist(v, w), dist(w, v)) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(a), Ok(b)) => {
                    sym = LawCheck::fail("K(v,w) = K(w,v)", format!("{a} vs {b}"));
                    break 'sym;
                }
                _ => {
                    sym = LawCheck::fail("K(v,w) = K(w,v)", "solver error".to_string());
                    break 'sym;
                }
            }
        }
    }
    report.push(sym);

    let mut tri = LawCheck::pass("K(u,w) ≤ K(u,v) + K(v,w)");
    'tri: for u in samples {
        for v in samples {
            for w in samples {
                let (a, b, c) = match (dist(u, w), dist(u, v), dist(v, w)) {
                    (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                    _ => {
                        tri = LawCheck::fail(
                            "K(u,w) ≤ K(u,v) + K(v,w)",
                            "solver error".to_string(),
                        );
                        break 'tri;
                    }
                };
                if a > b.clone() + c.clone() {
                    tri = LawCheck::fail(
                        "K(u,w) ≤ K(u,v) + K(v,w)",
                        format!("{a} > {b} + {c}"),
                    );
                    break 'tri;
                }
            }
        }
    }
    report.push(tri);

    let mut unit = LawCheck::pass("K(δx, δy) = min(d(x,y), 1)");
    if let Some(first) = samples.first() {
        let space = first.space().clone();
        if space.block_count() == metric.carrier().len() {
            'unit: for x in 0..metric.carrier().len() {
                for y in 0..metric.carrier().len() {
                    let dx = SubProb::dirac(&space, x);
                    let dy = SubProb::dirac(&space, y);
                    let lifted = match dist(&dx, &dy) {
                        Ok(d) => d,
                        Err(e) => {
                            unit = LawCheck::fail("K(δx, δy) = min(d(x,y), 1)", e.to_string());
                            break 'unit;
                        }
                    };
                    let clipped = match metric.at(x, y) {
                        ExtQ::Fin(d) => d.clone().min(Q::one()),
                        ExtQ::Inf => Q::one(),
                    };
                    if lifted != clipped {
                        unit = LawCheck::fail(
                            "K(δx, δy) = min(d(x,y), 1)",
                            format!(
                                "at ({}, {}): lifted {lifted}, clipped {clipped}",
                                metric.carrier().atom(x),
                                metric.carrier().atom(y)
                            ),
                        );
                        break 'unit;
                    }
                }
            }
        }
    }
    report.push(unit);

    report
}
