//! Finite measurable spaces, rational sub-probability measures, and
//! labelled Markov processes.
//!
//! A σ-algebra on a finite carrier is exactly a partition: the measurable
//! sets are the unions of blocks, so every measurability question reduces
//! to block arithmetic. Masses are exact rationals throughout.

use crate::finset::{Atom, FinFun, FinSet, Subset};
use crate::util::mask::Mask;
use crate::util::rational::Q;
use num_traits::Zero;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasError {
    #[error("blocks do not partition the carrier: {0}")]
    NotPartition(String),
    #[error("set is not measurable (not a union of blocks)")]
    NotMeasurable,
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("negative mass `{0}`")]
    NegativeMass(String),
    #[error("total mass {0} exceeds 1")]
    MassExceedsOne(String),
    #[error("kernel not measurable: action `{action}`, block of `{state}` gets uneven mass on {set}")]
    KernelNotMeasurable {
        action: Atom,
        state: Atom,
        set: String,
    },
    #[error("too many blocks ({0}) for subset enumeration (limit {1}, see KANLIFT_MAX_BLOCKS)")]
    TooManyBlocks(usize, usize),
    #[error("unknown atom `{0}`")]
    UnknownAtom(Atom),
}

/// Default bound on the number of partition blocks for the `2^#blocks`
/// measurable-subset loops; override with `KANLIFT_MAX_BLOCKS`.
pub const DEFAULT_MAX_BLOCKS: usize = 16;

pub fn max_blocks() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("KANLIFT_MAX_BLOCKS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_MAX_BLOCKS)
    })
}

/// A finite measurable space: a carrier with a partition whose block
/// unions form the σ-algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinMeasSpace {
    carrier: FinSet,
    blocks: Vec<Mask>,
    // block index of each point
    block_of: Vec<usize>,
}

impl FinMeasSpace {
    pub fn new(carrier: FinSet, blocks: Vec<Mask>) -> Result<FinMeasSpace, MeasError> {
        let n = carrier.len();
        let mut block_of = vec![usize::MAX; n];
        let mut seen = Mask::empty(n);
        for (b, blk) in blocks.iter().enumerate() {
            if blk.len() != n {
                return Err(MeasError::NotPartition("block width mismatch".to_string()));
            }
            if blk.is_empty() {
                return Err(MeasError::NotPartition("empty block".to_string()));
            }
            if blk.intersects(&seen) {
                return Err(MeasError::NotPartition("overlapping blocks".to_string()));
            }
            seen = seen.union(blk);
            for i in blk.ones() {
                block_of[i] = b;
            }
        }
        if seen != Mask::full(n) {
            return Err(MeasError::NotPartition(
                "blocks do not cover the carrier".to_string(),
            ));
        }
        Ok(FinMeasSpace {
            carrier,
            blocks,
            block_of,
        })
    }

    /// Every point is its own block.
    pub fn discrete(carrier: &FinSet) -> FinMeasSpace {
        let n = carrier.len();
        FinMeasSpace {
            carrier: carrier.clone(),
            blocks: (0..n).map(|i| Mask::singleton(n, i)).collect(),
            block_of: (0..n).collect(),
        }
    }

    /// One block containing everything (empty carrier has no blocks).
    pub fn indiscrete(carrier: &FinSet) -> FinMeasSpace {
        let n = carrier.len();
        let blocks = if n == 0 { vec![] } else { vec![Mask::full(n)] };
        FinMeasSpace {
            carrier: carrier.clone(),
            blocks,
            block_of: vec![0; n],
        }
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn blocks(&self) -> &[Mask] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.block_of[point]
    }

    pub fn is_measurable(&self, set: &Mask) -> bool {
        self.blocks
            .iter()
            .all(|blk| !blk.intersects(set) || blk.is_subset(set))
    }

    /// All measurable subsets (unions of blocks), `2^#blocks` of them.
    pub fn measurable_sets(&self) -> Result<Vec<Mask>, MeasError> {
        let b = self.blocks.len();
        let limit = max_blocks();
        if b > limit {
            return Err(MeasError::TooManyBlocks(b, limit));
        }
        let n = self.carrier.len();
        let mut out = Vec::with_capacity(1 << b);
        for bits in 0..(1u64 << b) {
            let mut m = Mask::empty(n);
            for (k, blk) in self.blocks.iter().enumerate() {
                if bits & (1 << k) != 0 {
                    m = m.union(blk);
                }
            }
            out.push(m);
        }
        Ok(out)
    }
}

/// The coarsest partition whose block unions include every generator:
/// points fall in the same block iff no generator separates them.
pub fn sigma_generate(carrier: &FinSet, generators: &[Subset]) -> FinMeasSpace {
    let n = carrier.len();
    for g in generators {
        assert_eq!(
            g.ambient(),
            carrier,
            "generator over a different carrier"
        );
    }
    let mut blocks: Vec<Mask> = Vec::new();
    let mut assigned = Mask::empty(n);
    for i in 0..n {
        if assigned.contains(i) {
            continue;
        }
        let blk = Mask::from_indices(
            n,
            (0..n).filter(|&j| {
                generators
                    .iter()
                    .all(|g| g.mask().contains(i) == g.mask().contains(j))
            }),
        );
        assigned = assigned.union(&blk);
        blocks.push(blk);
    }
    FinMeasSpace::new(carrier.clone(), blocks).expect("construction yields a partition")
}

/// A sub-probability measure: one nonnegative rational mass per block,
/// totalling at most 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubProb {
    space: FinMeasSpace,
    mass: Vec<Q>,
}

impl SubProb {
    pub fn new(space: FinMeasSpace, mass: Vec<Q>) -> Result<SubProb, MeasError> {
        assert_eq!(mass.len(), space.block_count(), "one mass per block");
        for m in &mass {
            if m < &Q::zero() {
                return Err(MeasError::NegativeMass(m.to_string()));
            }
        }
        let total: Q = mass.iter().cloned().sum();
        if total > Q::from_integer(1.into()) {
            return Err(MeasError::MassExceedsOne(total.to_string()));
        }
        Ok(SubProb { space, mass })
    }

    pub fn zero(space: &FinMeasSpace) -> SubProb {
        SubProb {
            space: space.clone(),
            mass: vec![Q::zero(); space.block_count()],
        }
    }

    /// Point mass on the block containing `point` (discrete spaces: on the
    /// point itself).
    pub fn dirac(space: &FinMeasSpace, point: usize) -> SubProb {
        let mut mass = vec![Q::zero(); space.block_count()];
        mass[space.block_of(point)] = Q::from_integer(1.into());
        SubProb {
            space: space.clone(),
            mass,
        }
    }

    pub fn space(&self) -> &FinMeasSpace {
        &self.space
    }

    pub fn block_mass(&self, b: usize) -> &Q {
        &self.mass[b]
    }

    pub fn total(&self) -> Q {
        self.mass.iter().cloned().sum()
    }

    /// Measure of a measurable set, i.e. a block union.
    pub fn eval(&self, set: &Mask) -> Result<Q, MeasError> {
        if !self.space.is_measurable(set) {
            return Err(MeasError::NotMeasurable);
        }
        Ok(self
            .space
            .blocks
            .iter()
            .enumerate()
            .filter(|(_, blk)| blk.is_subset(set) && !blk.is_empty())
            .map(|(b, _)| self.mass[b].clone())
            .sum())
    }

    pub fn eval_subset(&self, u: &Subset) -> Result<Q, MeasError> {
        if u.ambient() != self.space.carrier() {
            return Err(MeasError::CarrierMismatch(
                "subset over a different carrier".to_string(),
            ));
        }
        self.eval(u.mask())
    }
}

/// Evaluates `v` on a measurable subset.
pub fn measure_eval(v: &SubProb, u: &Subset) -> Result<Q, MeasError> {
    v.eval_subset(u)
}

/// Whether `f` is measurable: preimages of blocks are block unions.
pub fn is_measurable_fun(
    f: &FinFun,
    dom: &FinMeasSpace,
    cod: &FinMeasSpace,
) -> Result<bool, MeasError> {
    if f.dom() != dom.carrier() || f.cod() != cod.carrier() {
        return Err(MeasError::CarrierMismatch(
            "function endpoints differ from the spaces".to_string(),
        ));
    }
    let n = dom.carrier().len();
    Ok(cod.blocks().iter().all(|blk| {
        let pre = Mask::from_indices(n, (0..n).filter(|&i| blk.contains(f.apply_index(i))));
        dom.is_measurable(&pre)
    }))
}

/// A labelled Markov process on a finite measurable space: per action and
/// state, a sub-probability measure on the space. State-measurability of
/// each kernel is validated at construction: for every action and
/// measurable set, the mass function must be constant on blocks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lmp {
    space: FinMeasSpace,
    actions: FinSet,
    // kernel[a][s] = measure for action a at state s
    kernel: Vec<Vec<SubProb>>,
}

impl Lmp {
    pub fn new(
        space: FinMeasSpace,
        actions: FinSet,
        kernel: Vec<Vec<SubProb>>,
    ) -> Result<Lmp, MeasError> {
        assert_eq!(kernel.len(), actions.len(), "one kernel row per action");
        for row in &kernel {
            assert_eq!(row.len(), space.carrier().len(), "one measure per state");
            for m in row {
                if m.space() != &space {
                    return Err(MeasError::CarrierMismatch(
                        "kernel measure over a different space".to_string(),
                    ));
                }
            }
        }
        let lmp = Lmp {
            space,
            actions,
            kernel,
        };
        lmp.check_measurability()?;
        Ok(lmp)
    }

    fn check_measurability(&self) -> Result<(), MeasError> {
        // constant block masses per source block suffice: every measurable
        // set is a disjoint block union
        for (ai, row) in self.kernel.iter().enumerate() {
            for blk in self.space.blocks() {
                let mut points = blk.ones();
                let first = points.next().expect("blocks are nonempty");
                for p in points {
                    for (tb, tgt) in self.space.blocks().iter().enumerate() {
                        if row[p].block_mass(tb) != row[first].block_mass(tb) {
                            return Err(MeasError::KernelNotMeasurable {
                                action: self.actions.atom(ai).clone(),
                                state: self.space.carrier().atom(p).clone(),
                                set: format!("{tgt:?}"),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &FinMeasSpace {
        &self.space
    }

    pub fn actions(&self) -> &FinSet {
        &self.actions
    }

    pub fn measure(&self, action: usize, state: usize) -> &SubProb {
        &self.kernel[action][state]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rational::{q, q_int};

    #[test]
    fn sigma_generate_from_point_is_discrete() {
        let c = FinSet::of(&["0", "1"]);
        let g = Subset::from_atoms(&c, ["0"]).unwrap();
        let sp = sigma_generate(&c, &[g]);
        assert_eq!(sp, FinMeasSpace::discrete(&c));
    }

    #[test]
    fn sigma_generate_empty_is_indiscrete() {
        let c = FinSet::of(&["0", "1"]);
        let sp = sigma_generate(&c, &[]);
        assert_eq!(sp, FinMeasSpace::indiscrete(&c));
        assert_eq!(sp.block_count(), 1);
    }

    #[test]
    fn sigma_generate_closes_under_complement() {
        let c = FinSet::of(&["a", "b", "c"]);
        let g = Subset::from_atoms(&c, ["a", "b"]).unwrap();
        let sp = sigma_generate(&c, &[g]);
        assert_eq!(sp.block_count(), 2);
        assert!(sp.is_measurable(&Mask::from_indices(3, [2])));
        assert!(!sp.is_measurable(&Mask::from_indices(3, [0])));
    }

    #[test]
    fn sigma_generate_idempotent() {
        let c = FinSet::of(&["a", "b", "c", "d"]);
        let g1 = Subset::from_atoms(&c, ["a", "b"]).unwrap();
        let g2 = Subset::from_atoms(&c, ["b", "c"]).unwrap();
        let sp = sigma_generate(&c, &[g1, g2]);
        let regen_gens: Vec<Subset> = sp
            .measurable_sets()
            .unwrap()
            .into_iter()
            .map(|m| Subset::from_mask(c.clone(), m))
            .collect();
        let sp2 = sigma_generate(&c, &regen_gens);
        assert_eq!(sp, sp2);
    }

    #[test]
    fn measure_eval_basics() {
        let c = FinSet::of(&["0", "1"]);
        let sp = FinMeasSpace::discrete(&c);
        let v1 = SubProb::new(sp.clone(), vec![q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(v1.eval_subset(&Subset::full(&c)).unwrap(), q_int(1));
        assert_eq!(v1.eval_subset(&Subset::empty(&c)).unwrap(), Q::zero());
        let v3 = SubProb::new(sp, vec![q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(
            v3.eval_subset(&Subset::from_atoms(&c, ["1"]).unwrap()).unwrap(),
            q(2, 3)
        );
    }

    #[test]
    fn measure_eval_rejects_non_measurable() {
        let c = FinSet::of(&["0", "1"]);
        let sp = FinMeasSpace::indiscrete(&c);
        let v = SubProb::new(sp, vec![q_int(1)]).unwrap();
        let s = Subset::from_atoms(&c, ["0"]).unwrap();
        assert_eq!(v.eval_subset(&s), Err(MeasError::NotMeasurable));
    }

    #[test]
    fn measure_is_additive_and_monotone() {
        let c = FinSet::of(&["a", "b", "c"]);
        let sp = FinMeasSpace::discrete(&c);
        let v = SubProb::new(sp.clone(), vec![q(1, 6), q(1, 3), q(1, 2)]).unwrap();
        let sets = sp.measurable_sets().unwrap();
        for u in &sets {
            for w in &sets {
                if !u.intersects(w) {
                    let both = v.eval(&u.union(w)).unwrap();
                    assert_eq!(both, v.eval(u).unwrap() + v.eval(w).unwrap());
                }
                if u.is_subset(w) {
                    assert!(v.eval(u).unwrap() <= v.eval(w).unwrap());
                }
            }
        }
    }

    #[test]
    fn mass_validation() {
        let c = FinSet::of(&["0"]);
        let sp = FinMeasSpace::discrete(&c);
        assert!(matches!(
            SubProb::new(sp.clone(), vec![q(-1, 2)]),
            Err(MeasError::NegativeMass(_))
        ));
        assert!(matches!(
            SubProb::new(sp, vec![q(3, 2)]),
            Err(MeasError::MassExceedsOne(_))
        ));
    }

    #[test]
    fn measurable_fun_criteria() {
        let c = FinSet::of(&["0", "1"]);
        let disc = FinMeasSpace::discrete(&c);
        let ind = FinMeasSpace::indiscrete(&c);
        let id = FinFun::identity(&c);
        // into indiscrete: always measurable
        assert!(is_measurable_fun(&id, &ind, &ind).unwrap());
        assert!(is_measurable_fun(&id, &disc, &ind).unwrap());
        // identity from indiscrete to discrete is not
        assert!(!is_measurable_fun(&id, &ind, &disc).unwrap());
        // identity on one space is
        assert!(is_measurable_fun(&id, &disc, &disc).unwrap());
    }

    #[test]
    fn lmp_measurability_validation() {
        let c = FinSet::of(&["s", "t"]);
        let ind = FinMeasSpace::indiscrete(&c);
        let act = FinSet::of(&["a"]);
        // masses differ across the single block: not a measurable kernel
        let m1 = SubProb::new(ind.clone(), vec![q(1, 2)]).unwrap();
        let m2 = SubProb::new(ind.clone(), vec![q(1, 3)]).unwrap();
        assert!(matches!(
            Lmp::new(ind.clone(), act.clone(), vec![vec![m1.clone(), m2]]),
            Err(MeasError::KernelNotMeasurable { .. })
        ));
        // constant kernels are fine
        assert!(Lmp::new(ind, act, vec![vec![m1.clone(), m1]]).is_ok());
    }

    #[test]
    fn partition_validation() {
        let c = FinSet::of(&["a", "b"]);
        // overlapping
        assert!(matches!(
            FinMeasSpace::new(
                c.clone(),
                vec![Mask::from_indices(2, [0, 1]), Mask::from_indices(2, [1])]
            ),
            Err(MeasError::NotPartition(_))
        ));
        // not covering
        assert!(matches!(
            FinMeasSpace::new(c, vec![Mask::from_indices(2, [0])]),
            Err(MeasError::NotPartition(_))
        ));
    }
}
