//! Topologies on finite carriers.
//!
//! A finite topology is determined by the minimal open neighbourhood of
//! each point, and every family generated from a subbasis closes to one
//! whose opens are exactly the unions of minimal neighbourhoods. We store
//! the vector of minimal neighbourhoods: generation, reindexing, meets and
//! continuity checks all become cheap bit operations, and the explicit
//! canonical open-set family is recovered on demand for small carriers.

use crate::finset::FinSet;
use crate::util::mask::Mask;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("carrier of size {0} too large to enumerate opens (limit {1})")]
    TooLargeToEnumerate(usize, usize),
}

/// Largest carrier for which the full open family is materialised.
pub const MAX_ENUMERATED_CARRIER: usize = 16;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Topology {
    carrier: FinSet,
    // mins[i] = smallest open set containing point i
    mins: Vec<Mask>,
}

impl Topology {
    /// The topology generated by a subbasis: close under finite
    /// intersections and arbitrary unions. Idempotent.
    pub fn generate(carrier: &FinSet, subbasis: &[Mask]) -> Topology {
        let n = carrier.len();
        let mins = (0..n)
            .map(|i| {
                let mut m = Mask::full(n);
                for s in subbasis {
                    assert_eq!(s.len(), n, "subbasis width mismatch");
                    if s.contains(i) {
                        m = m.intersect(s);
                    }
                }
                m
            })
            .collect();
        Topology {
            carrier: carrier.clone(),
            mins,
        }
    }

    pub fn indiscrete(carrier: &FinSet) -> Topology {
        Topology::generate(carrier, &[])
    }

    pub fn discrete(carrier: &FinSet) -> Topology {
        let n = carrier.len();
        Topology {
            carrier: carrier.clone(),
            mins: (0..n).map(|i| Mask::singleton(n, i)).collect(),
        }
    }

    /// Sierpiński space: `open_point` is open, the other points are not
    /// separated from the whole space.
    pub fn sierpinski(carrier: &FinSet, open_point: &str) -> Topology {
        let i = carrier.index_of(open_point).expect("open point exists");
        Topology::generate(carrier, &[Mask::singleton(carrier.len(), i)])
    }

    pub fn from_mins(carrier: FinSet, mins: Vec<Mask>) -> Topology {
        let t = Topology { carrier, mins };
        // quadratic-and-worse check; skip on large carriers
        debug_assert!(
            t.carrier.len() > 64 || t.mins_coherent(),
            "minimal neighbourhoods not coherent"
        );
        t
    }

    fn mins_coherent(&self) -> bool {
        self.mins.iter().enumerate().all(|(i, m)| {
            m.contains(i) && m.ones().all(|j| self.mins[j].is_subset(m))
        })
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn min_nbhd(&self, i: usize) -> &Mask {
        &self.mins[i]
    }

    pub fn mins(&self) -> &[Mask] {
        &self.mins
    }

    pub fn is_open(&self, set: &Mask) -> bool {
        set.ones().all(|i| self.mins[i].is_subset(set))
    }

    /// The canonical sorted family of all opens. Only for small carriers.
    pub fn opens(&self) -> Result<Vec<Mask>, TopologyError> {
        let n = self.carrier.len();
        if n > MAX_ENUMERATED_CARRIER {
            return Err(TopologyError::TooLargeToEnumerate(n, MAX_ENUMERATED_CARRIER));
        }
        let mut out = Vec::new();
        for bits in 0..(1u64 << n) {
            let m = Mask::from_bits(n, bits);
            if self.is_open(&m) {
                out.push(m);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Initial topology along `f : Y → X` (self on `X`): opens are exactly
    /// the preimages of opens.
    pub fn reindex_along(&self, images: &[usize], dom: &FinSet) -> Topology {
        let n = dom.len();
        let mins = (0..n)
            .map(|y| {
                let target = &self.mins[images[y]];
                Mask::from_indices(n, (0..n).filter(|&z| target.contains(images[z])))
            })
            .collect();
        Topology {
            carrier: dom.clone(),
            mins,
        }
    }

    /// Meet in the fibre ordered by coarseness: the coarsest topology
    /// refining all arguments, i.e. generated by the union of the families.
    pub fn meet(&self, other: &Topology) -> Topology {
        assert_eq!(self.carrier, other.carrier, "fibre carrier mismatch");
        Topology {
            carrier: self.carrier.clone(),
            mins: self
                .mins
                .iter()
                .zip(other.mins.iter())
                .map(|(a, b)| a.intersect(b))
                .collect(),
        }
    }

    /// Fibre order: `self ≤ other` iff `self` is finer (has every open of
    /// `other`).
    pub fn finer_than(&self, other: &Topology) -> bool {
        assert_eq!(self.carrier, other.carrier, "fibre carrier mismatch");
        self.mins
            .iter()
            .zip(other.mins.iter())
            .all(|(a, b)| a.is_subset(b))
    }

    /// Continuity of `images : dom → self.carrier` from `dom_top`.
    pub fn continuous_from(&self, dom_top: &Topology, images: &[usize]) -> bool {
        // f continuous ⟺ f(min(y)) ⊆ min(f(y)) for all y
        dom_top.mins.iter().enumerate().all(|(y, m)| {
            let target = &self.mins[images[y]];
            m.ones().all(|z| target.contains(images[z]))
        })
    }

    /// Enumerates all topologies on the carrier (small carriers only).
    /// A subset of an n-point carrier is its own n-bit index, so union and
    /// intersection of opens are bitwise or/and of indices.
    pub fn enumerate_all(carrier: &FinSet) -> Vec<Topology> {
        let n = carrier.len();
        assert!(n <= 4, "carrier too large to enumerate topologies");
        let subset_count = 1usize << n;
        let mut out = Vec::new();
        // a family of opens, encoded by one bit per subset index
        for fam in 0..(1u64 << subset_count) {
            let has = |i: usize| fam & (1 << i) != 0;
            if !has(0) || !has(subset_count - 1) {
                continue; // must contain ∅ and the full set
            }
            let mut closed = true;
            'pairs: for i in 0..subset_count {
                if !has(i) {
                    continue;
                }
                for j in 0..i {
                    if has(j) && (!has(i | j) || !has(i & j)) {
                        closed = false;
                        break 'pairs;
                    }
                }
            }
            if !closed {
                continue;
            }
            let family: Vec<Mask> = (0..subset_count)
                .filter(|&i| has(i))
                .map(|i| Mask::from_bits(n, i as u64))
                .collect();
            out.push(Topology::generate(carrier, &family));
        }
        // distinct closed families are distinct topologies; sort for determinism
        out.sort_by(|a, b| a.mins.cmp(&b.mins));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_is_idempotent_and_canonical() {
        let c = FinSet::of(&["0", "1"]);
        let t = Topology::sierpinski(&c, "1");
        let opens = t.opens().unwrap();
        assert_eq!(opens.len(), 3);
        let regenerated = Topology::generate(&c, &opens);
        assert_eq!(regenerated, t);
    }

    #[test]
    fn meet_of_complementary_sierpinski_is_discrete() {
        let c = FinSet::of(&["0", "1"]);
        let t1 = Topology::sierpinski(&c, "1");
        let t0 = Topology::sierpinski(&c, "0");
        assert_eq!(t1.meet(&t0), Topology::discrete(&c));
    }

    #[test]
    fn continuity_of_constants_and_identity() {
        let c = FinSet::of(&["0", "1"]);
        let s = Topology::sierpinski(&c, "1");
        // identity continuous
        assert!(s.continuous_from(&s, &[0, 1]));
        // constants continuous from anything
        assert!(s.continuous_from(&Topology::indiscrete(&c), &[0, 0]));
        assert!(s.continuous_from(&Topology::indiscrete(&c), &[1, 1]));
        // the swap from indiscrete is not
        assert!(!s.continuous_from(&Topology::indiscrete(&c), &[1, 0]));
    }

    #[test]
    fn enumeration_counts_match_known_values() {
        // #topologies on n labelled points: 1, 1, 4, 29
        assert_eq!(Topology::enumerate_all(&FinSet::empty()).len(), 1);
        assert_eq!(Topology::enumerate_all(&FinSet::of(&["a"])).len(), 1);
        assert_eq!(Topology::enumerate_all(&FinSet::of(&["a", "b"])).len(), 4);
        assert_eq!(
            Topology::enumerate_all(&FinSet::of(&["a", "b", "c"])).len(),
            29
        );
    }

    #[test]
    fn opens_agree_with_union_closure_of_mins() {
        let c = FinSet::of(&["a", "b", "c"]);
        for t in Topology::enumerate_all(&c) {
            let opens = t.opens().unwrap();
            // every open is a union of minimal neighbourhoods of its points
            for o in &opens {
                let mut u = Mask::empty(3);
                for i in o.ones() {
                    u = u.union(t.min_nbhd(i));
                }
                assert_eq!(&u, o);
            }
        }
    }
}
