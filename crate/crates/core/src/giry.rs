//! Decidable membership oracles for relation liftings of sub-probability
//! measures, and simulation/bisimulation checkers for finite labelled
//! Markov processes.
//!
//! Lifted relations over the space of measures are never materialised:
//! each proposition here is a ∀-statement over the finitely many
//! measurable sets of a finite σ-algebra, so membership is decided by
//! looping over block unions with exact rational comparisons.

use crate::fibration::relation::{BinRel, EndoRel};
use crate::finset::Atom;
use crate::measurable::{FinMeasSpace, Lmp, MeasError, SubProb};
use crate::util::mask::Mask;
use crate::util::rational::Q;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GiryError {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("action sets differ")]
    ActionMismatch,
    #[error("relation is not reflexive (required for single-process simulations)")]
    NotReflexive,
    #[error(transparent)]
    Meas(#[from] MeasError),
}

/// The base relation on `[0,1]` seeding a lifting. `Leq` and `Eq` satisfy
/// the closure hypotheses (indicator closure, convex hulls, pointwise
/// suprema) that make the subset characterisation below sound; custom
/// relations are accepted on the caller's certification and logged
/// otherwise.
#[derive(Clone)]
pub enum RelParam {
    Leq,
    Eq,
    Custom {
        name: String,
        pred: fn(&Q, &Q) -> bool,
        caller_certified: bool,
    },
}

impl RelParam {
    pub fn holds(&self, a: &Q, b: &Q) -> bool {
        match self {
            RelParam::Leq => a <= b,
            RelParam::Eq => a == b,
            RelParam::Custom { pred, .. } => pred(a, b),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            RelParam::Leq => "leq",
            RelParam::Eq => "eq",
            RelParam::Custom { name, .. } => name,
        }
    }

    fn warn_if_uncertified(&self) {
        if let RelParam::Custom {
            name,
            caller_certified: false,
            ..
        } = self
        {
            log::warn!(
                "relation parameter `{name}` is not certified to satisfy the closure hypotheses; membership answers may not characterise the lifting"
            );
        }
    }

    fn holds_bits(&self, a: bool, b: bool) -> bool {
        let one = Q::from_integer(1.into());
        let zero = Q::from_integer(0.into());
        self.holds(
            if a { &one } else { &zero },
            if b { &one } else { &zero },
        )
    }
}

/// A binary-relation object between two measurable spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BRelObj {
    pub left: FinMeasSpace,
    pub right: FinMeasSpace,
    pub rel: BinRel,
}

impl BRelObj {
    pub fn new(left: FinMeasSpace, right: FinMeasSpace, rel: BinRel) -> Result<BRelObj, GiryError> {
        if rel.left() != left.carrier() || rel.right() != right.carrier() {
            return Err(GiryError::SpaceMismatch(
                "relation endpoints differ from the spaces".to_string(),
            ));
        }
        Ok(BRelObj { left, right, rel })
    }
}

/// An endorelation object on one measurable space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ERelObj {
    pub space: FinMeasSpace,
    pub rel: EndoRel,
}

impl ERelObj {
    pub fn new(space: FinMeasSpace, rel: EndoRel) -> Result<ERelObj, GiryError> {
        if rel.carrier() != space.carrier() {
            return Err(GiryError::SpaceMismatch(
                "relation carrier differs from the space".to_string(),
            ));
        }
        Ok(ERelObj { space, rel })
    }
}

/// Membership in the binary-relation lifting: for all measurable `V`, `W`
/// whose indicator pair is a relation morphism into the parameter,
/// `(v1(V), v2(W))` must satisfy the parameter.
pub fn brel_member(
    x: &BRelObj,
    s0: &RelParam,
    v1: &SubProb,
    v2: &SubProb,
) -> Result<bool, GiryError> {
    s0.warn_if_uncertified();
    if v1.space() != &x.left || v2.space() != &x.right {
        return Err(GiryError::SpaceMismatch(
            "measures not over the object's spaces".to_string(),
        ));
    }
    let vs = x.left.measurable_sets()?;
    let ws = x.right.measurable_sets()?;
    for v in &vs {
        for w in &ws {
            let indicator_morphism = x
                .rel
                .pairs()
                .all(|(a, b)| s0.holds_bits(v.contains(a), w.contains(b)));
            if indicator_morphism && !s0.holds(&v1.eval(v)?, &v2.eval(w)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Membership in the endorelation lifting: for all measurable `V` whose
/// indicator preserves the relation, `(v1(V), v2(V))` must satisfy the
/// parameter.
pub fn erel_member(
    x: &ERelObj,
    s0: &RelParam,
    v1: &SubProb,
    v2: &SubProb,
) -> Result<bool, GiryError> {
    s0.warn_if_uncertified();
    if v1.space() != &x.space || v2.space() != &x.space {
        return Err(GiryError::SpaceMismatch(
            "measures not over the object's space".to_string(),
        ));
    }
    for v in x.space.measurable_sets()? {
        let indicator_morphism = x
            .rel
            .pairs()
            .all(|(a, b)| s0.holds_bits(v.contains(a), v.contains(b)));
        if indicator_morphism && !s0.holds(&v1.eval(&v)?, &v2.eval(&v)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A counterexample to a simulation/bisimulation condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimWitness {
    pub pair: (Atom, Atom),
    pub action: Atom,
    pub v: Vec<Atom>,
    pub w: Option<Vec<Atom>>,
    pub lhs: Q,
    pub rhs: Q,
}

fn atoms_of(space: &FinMeasSpace, set: &Mask) -> Vec<Atom> {
    set.ones().map(|i| space.carrier().atom(i).clone()).collect()
}

/// Simulation on a single process: for related states, for every action
/// and every measurable set closed under the relation image, the simulating
/// state gets at least as much mass. Requires a reflexive relation.
pub fn check_simulation_single(lmp: &Lmp, r: &EndoRel) -> Result<Option<SimWitness>, GiryError> {
    if r.carrier() != lmp.space().carrier() {
        return Err(GiryError::SpaceMismatch(
            "relation carrier differs from the process".to_string(),
        ));
    }
    if !r.is_reflexive() {
        return Err(GiryError::NotReflexive);
    }
    let sets = lmp.space().measurable_sets()?;
    for (s1, s2) in r.pairs() {
        for a in 0..lmp.actions().len() {
            for u in &sets {
                if r.image(u).is_subset(u) {
                    let m1 = lmp.measure(a, s1).eval(u)?;
                    let m2 = lmp.measure(a, s2).eval(u)?;
                    if m1 > m2 {
                        return Ok(Some(SimWitness {
                            pair: (
                                lmp.space().carrier().atom(s1).clone(),
                                lmp.space().carrier().atom(s2).clone(),
                            ),
                            action: lmp.actions().atom(a).clone(),
                            v: atoms_of(lmp.space(), u),
                            w: None,
                            lhs: m1,
                            rhs: m2,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn is_simulation_single(lmp: &Lmp, r: &EndoRel) -> Result<bool, GiryError> {
    Ok(check_simulation_single(lmp, r)?.is_none())
}

fn check_actions(lmp1: &Lmp, lmp2: &Lmp) -> Result<(), GiryError> {
    if lmp1.actions() != lmp2.actions() {
        return Err(GiryError::ActionMismatch);
    }
    Ok(())
}

fn rel_endpoints_check(lmp1: &Lmp, lmp2: &Lmp, r: &BinRel) -> Result<(), GiryError> {
    if r.left() != lmp1.space().carrier() || r.right() != lmp2.space().carrier() {
        return Err(GiryError::SpaceMismatch(
            "relation endpoints differ from the processes".to_string(),
        ));
    }
    Ok(())
}

/// Is the per-pair simulation condition met for `(s1, s2)` with respect to
/// the ambient relation `r`? (`r[V] ⊆ W ⟹ mass₁(V) ≤ mass₂(W)`.)
fn sim_two_pair_condition(
    lmp1: &Lmp,
    lmp2: &Lmp,
    r: &BinRel,
    s1: usize,
    s2: usize,
    vs: &[Mask],
    ws: &[Mask],
) -> Result<Option<SimWitness>, GiryError> {
    for a in 0..lmp1.actions().len() {
        for v in vs {
            let image = r.image(v);
            for w in ws {
                if image.is_subset(w) {
                    let m1 = lmp1.measure(a, s1).eval(v)?;
                    let m2 = lmp2.measure(a, s2).eval(w)?;
                    if m1 > m2 {
                        return Ok(Some(SimWitness {
                            pair: (
                                lmp1.space().carrier().atom(s1).clone(),
                                lmp2.space().carrier().atom(s2).clone(),
                            ),
                            action: lmp1.actions().atom(a).clone(),
                            v: atoms_of(lmp1.space(), v),
                            w: Some(atoms_of(lmp2.space(), w)),
                            lhs: m1,
                            rhs: m2,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Simulation from one process to another.
pub fn check_simulation_two(
    lmp1: &Lmp,
    lmp2: &Lmp,
    r: &BinRel,
) -> Result<Option<SimWitness>, GiryError> {
    check_actions(lmp1, lmp2)?;
    rel_endpoints_check(lmp1, lmp2, r)?;
    let vs = lmp1.space().measurable_sets()?;
    let ws = lmp2.space().measurable_sets()?;
    for (s1, s2) in r.pairs() {
        if let Some(w) = sim_two_pair_condition(lmp1, lmp2, r, s1, s2, &vs, &ws)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn is_simulation_two(lmp1: &Lmp, lmp2: &Lmp, r: &BinRel) -> Result<bool, GiryError> {
    Ok(check_simulation_two(lmp1, lmp2, r)?.is_none())
}

/// Bisimulation between two processes: on relation-closed measurable pairs
/// `(V, W)`, related states give them equal mass.
pub fn check_bisimulation(
    lmp1: &Lmp,
    lmp2: &Lmp,
    r: &BinRel,
) -> Result<Option<SimWitness>, GiryError> {
    check_actions(lmp1, lmp2)?;
    rel_endpoints_check(lmp1, lmp2, r)?;
    let vs = lmp1.space().measurable_sets()?;
    let ws = lmp2.space().measurable_sets()?;
    for (s1, s2) in r.pairs() {
        for a in 0..lmp1.actions().len() {
            for v in &vs {
                for w in &ws {
                    let closed = r
                        .pairs()
                        .all(|(x, y)| v.contains(x) == w.contains(y));
                    if closed {
                        let m1 = lmp1.measure(a, s1).eval(v)?;
                        let m2 = lmp2.measure(a, s2).eval(w)?;
                        if m1 != m2 {
                            return Ok(Some(SimWitness {
                                pair: (
                                    lmp1.space().carrier().atom(s1).clone(),
                                    lmp2.space().carrier().atom(s2).clone(),
                                ),
                                action: lmp1.actions().atom(a).clone(),
                                v: atoms_of(lmp1.space(), v),
                                w: Some(atoms_of(lmp2.space(), w)),
                                lhs: m1,
                                rhs: m2,
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn is_bisimulation(lmp1: &Lmp, lmp2: &Lmp, r: &BinRel) -> Result<bool, GiryError> {
    Ok(check_bisimulation(lmp1, lmp2, r)?.is_none())
}

/// Whether images of measurable sets under the relation stay measurable.
pub fn preserves_measurable_sets(
    r: &BinRel,
    left: &FinMeasSpace,
    right: &FinMeasSpace,
) -> Result<bool, GiryError> {
    if r.left() != left.carrier() || r.right() != right.carrier() {
        return Err(GiryError::SpaceMismatch(
            "relation endpoints differ from the spaces".to_string(),
        ));
    }
    for v in left.measurable_sets()? {
        if !right.is_measurable(&r.image(&v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greatest fixpoint below `start` of the monotone simulation functional
/// `F(R) = {(s1,s2) ∈ R | sim condition w.r.t. R}`. The result is the
/// largest simulation contained in `start`.
pub fn largest_simulation_below(
    lmp1: &Lmp,
    lmp2: &Lmp,
    start: &BinRel,
) -> Result<BinRel, GiryError> {
    check_actions(lmp1, lmp2)?;
    rel_endpoints_check(lmp1, lmp2, start)?;
    let vs = lmp1.space().measurable_sets()?;
    let ws = lmp2.space().measurable_sets()?;
    let mut cur = start.clone();
    loop {
        let mut rows = vec![Mask::empty(r_width(&cur)); cur.left().len()];
        for (s1, s2) in cur.pairs() {
            if sim_two_pair_condition(lmp1, lmp2, &cur, s1, s2, &vs, &ws)?.is_none() {
                rows[s1].insert(s2);
            }
        }
        let next = BinRel::from_rows(cur.left().clone(), cur.right().clone(), rows);
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

fn r_width(r: &BinRel) -> usize {
    r.right().len()
}

/// Greatest simulation: the fixpoint below the total relation.
pub fn largest_simulation_two(lmp1: &Lmp, lmp2: &Lmp) -> Result<BinRel, GiryError> {
    let total = BinRel::total(lmp1.space().carrier(), lmp2.space().carrier());
    largest_simulation_below(lmp1, lmp2, &total)
}

/// Constant-kernel process: every state steps to the same measure, for a
/// single action named `a`.
pub fn constant_lmp(measure: &SubProb) -> Lmp {
    let space = measure.space().clone();
    let n = space.carrier().len();
    let actions = crate::finset::FinSet::of(&["a"]);
    Lmp::new(space, actions, vec![vec![measure.clone(); n]]).expect("constant kernels are measurable")
}
