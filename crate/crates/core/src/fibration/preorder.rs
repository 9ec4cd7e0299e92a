//! Preorders on finite carriers, stored as full reflexive-transitive
//! relation matrices so equality is canonical.

use crate::finset::{FinSet, FinSetError};
use crate::util::mask::Mask;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Preorder {
    carrier: FinSet,
    // rows[i] = mask of j with i ≤ j
    rows: Vec<Mask>,
}

impl Preorder {
    /// Builds the preorder generated by the given pairs: the reflexive,
    /// transitive closure of the input relation.
    pub fn generated_by<'a, I>(carrier: &FinSet, pairs: I) -> Result<Preorder, FinSetError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let n = carrier.len();
        let mut rows: Vec<Mask> = (0..n).map(|i| Mask::singleton(n, i)).collect();
        for (a, b) in pairs {
            let i = carrier
                .index_of(a)
                .ok_or_else(|| FinSetError::UnknownAtom(a.to_string()))?;
            let j = carrier
                .index_of(b)
                .ok_or_else(|| FinSetError::UnknownAtom(b.to_string()))?;
            rows[i].insert(j);
        }
        Ok(Preorder::close(carrier.clone(), rows))
    }

    /// Builds from explicit rows, closing reflexively and transitively.
    pub fn from_rows(carrier: FinSet, rows: Vec<Mask>) -> Preorder {
        let n = carrier.len();
        let mut rows = rows;
        for (i, row) in rows.iter_mut().enumerate() {
            assert_eq!(row.len(), n, "row width mismatch");
            row.insert(i);
        }
        Preorder::close(carrier, rows)
    }

    fn close(carrier: FinSet, mut rows: Vec<Mask>) -> Preorder {
        let n = carrier.len();
        // Warshall over bit rows
        for k in 0..n {
            for i in 0..n {
                if rows[i].contains(k) {
                    rows[i] = rows[i].union(&rows[k]);
                }
            }
        }
        Preorder { carrier, rows }
    }

    pub fn discrete(carrier: &FinSet) -> Preorder {
        let n = carrier.len();
        Preorder {
            carrier: carrier.clone(),
            rows: (0..n).map(|i| Mask::singleton(n, i)).collect(),
        }
    }

    pub fn total(carrier: &FinSet) -> Preorder {
        let n = carrier.len();
        Preorder {
            carrier: carrier.clone(),
            rows: (0..n).map(|_| Mask::full(n)).collect(),
        }
    }

    /// The two-element chain `bottom ≤ top`.
    pub fn chain2(bottom: &str, top: &str) -> Preorder {
        let carrier = FinSet::of(&[bottom, top]);
        Preorder::generated_by(&carrier, [(bottom, top)]).expect("atoms exist")
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn le_atoms(&self, a: &str, b: &str) -> Option<bool> {
        let i = self.carrier.index_of(a)?;
        let j = self.carrier.index_of(b)?;
        Some(self.le(i, j))
    }

    pub fn rows(&self) -> &[Mask] {
        &self.rows
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.carrier.len()).flat_map(move |i| self.rows[i].ones().map(move |j| (i, j)))
    }

    /// Relation-inclusion order on the fibre.
    pub fn included_in(&self, other: &Preorder) -> bool {
        assert_eq!(self.carrier, other.carrier, "fibre carrier mismatch");
        self.rows
            .iter()
            .zip(other.rows.iter())
            .all(|(a, b)| a.is_subset(b))
    }

    pub fn intersect(&self, other: &Preorder) -> Preorder {
        assert_eq!(self.carrier, other.carrier, "fibre carrier mismatch");
        // intersections of preorders are preorders; no re-closure needed
        Preorder {
            carrier: self.carrier.clone(),
            rows: self
                .rows
                .iter()
                .zip(other.rows.iter())
                .map(|(a, b)| a.intersect(b))
                .collect(),
        }
    }

    /// Enumerates every preorder on the carrier (filtering all reflexive
    /// relations for transitivity). Intended for carriers of size ≤ 4.
    pub fn enumerate_all(carrier: &FinSet) -> Vec<Preorder> {
        let n = carrier.len();
        let off_diag: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        assert!(off_diag.len() <= 20, "carrier too large to enumerate preorders");
        let mut out = Vec::new();
        for bits in 0..(1u64 << off_diag.len()) {
            let mut rows: Vec<Mask> = (0..n).map(|i| Mask::singleton(n, i)).collect();
            for (k, &(i, j)) in off_diag.iter().enumerate() {
                if bits & (1 << k) != 0 {
                    rows[i].insert(j);
                }
            }
            let transitive = (0..n).all(|i| rows[i].ones().all(|k| rows[k].is_subset(&rows[i])));
            if transitive {
                out.push(Preorder {
                    carrier: carrier.clone(),
                    rows,
                });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_closure_is_transitive() {
        let c = FinSet::of(&["a", "b", "c"]);
        let p = Preorder::generated_by(&c, [("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(p.le_atoms("a", "c"), Some(true));
        assert_eq!(p.le_atoms("c", "a"), Some(false));
        assert_eq!(p.le_atoms("a", "a"), Some(true));
    }

    #[test]
    fn intersect_opposite_chains_is_discrete() {
        let c = FinSet::of(&["a", "b"]);
        let up = Preorder::generated_by(&c, [("a", "b")]).unwrap();
        let down = Preorder::generated_by(&c, [("b", "a")]).unwrap();
        assert_eq!(up.intersect(&down), Preorder::discrete(&c));
    }

    #[test]
    fn enumeration_counts_match_known_values() {
        // #preorders on n labelled points: 1, 1, 4, 29
        assert_eq!(Preorder::enumerate_all(&FinSet::empty()).len(), 1);
        assert_eq!(Preorder::enumerate_all(&FinSet::of(&["a"])).len(), 1);
        assert_eq!(Preorder::enumerate_all(&FinSet::of(&["a", "b"])).len(), 4);
        assert_eq!(
            Preorder::enumerate_all(&FinSet::of(&["a", "b", "c"])).len(),
            29
        );
    }
}
