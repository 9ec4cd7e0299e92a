//! Plain binary relations: endorelations on one carrier and relations
//! between two carriers. No closure properties are imposed.

use crate::finset::{FinSet, FinSetError};
use crate::util::mask::Mask;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EndoRel {
    carrier: FinSet,
    rows: Vec<Mask>,
}

impl EndoRel {
    pub fn new<'a, I>(carrier: &FinSet, pairs: I) -> Result<EndoRel, FinSetError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let n = carrier.len();
        let mut rows = vec![Mask::empty(n); n];
        for (a, b) in pairs {
            let i = carrier
                .index_of(a)
                .ok_or_else(|| FinSetError::UnknownAtom(a.to_string()))?;
            let j = carrier
                .index_of(b)
                .ok_or_else(|| FinSetError::UnknownAtom(b.to_string()))?;
            rows[i].insert(j);
        }
        Ok(EndoRel {
            carrier: carrier.clone(),
            rows,
        })
    }

    pub fn from_rows(carrier: FinSet, rows: Vec<Mask>) -> EndoRel {
        assert!(rows.iter().all(|r| r.len() == carrier.len()));
        assert_eq!(rows.len(), carrier.len());
        EndoRel { carrier, rows }
    }

    pub fn diagonal(carrier: &FinSet) -> EndoRel {
        let n = carrier.len();
        EndoRel {
            carrier: carrier.clone(),
            rows: (0..n).map(|i| Mask::singleton(n, i)).collect(),
        }
    }

    pub fn total(carrier: &FinSet) -> EndoRel {
        let n = carrier.len();
        EndoRel {
            carrier: carrier.clone(),
            rows: vec![Mask::full(n); n],
        }
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn rows(&self) -> &[Mask] {
        &self.rows
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows.len()).flat_map(move |i| self.rows[i].ones().map(move |j| (i, j)))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.carrier.len()).all(|i| self.related(i, i))
    }

    /// Relational image `R[A]`.
    pub fn image(&self, set: &Mask) -> Mask {
        let mut out = Mask::empty(self.carrier.len());
        for i in set.ones() {
            out = out.union(&self.rows[i]);
        }
        out
    }

    pub fn included_in(&self, other: &EndoRel) -> bool {
        assert_eq!(self.carrier, other.carrier, "fibre carrier mismatch");
        self.rows
            .iter()
            .zip(other.rows.iter())
            .all(|(a, b)| a.is_subset(b))
    }

    pub fn intersect(&self, other: &EndoRel) -> EndoRel {
        assert_eq!(self.carrier, other.carrier, "fibre carrier mismatch");
        EndoRel {
            carrier: self.carrier.clone(),
            rows: self
                .rows
                .iter()
                .zip(other.rows.iter())
                .map(|(a, b)| a.intersect(b))
                .collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinRel {
    left: FinSet,
    right: FinSet,
    rows: Vec<Mask>,
}

impl BinRel {
    pub fn new<'a, I>(left: &FinSet, right: &FinSet, pairs: I) -> Result<BinRel, FinSetError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut rows = vec![Mask::empty(right.len()); left.len()];
        for (a, b) in pairs {
            let i = left
                .index_of(a)
                .ok_or_else(|| FinSetError::UnknownAtom(a.to_string()))?;
            let j = right
                .index_of(b)
                .ok_or_else(|| FinSetError::UnknownAtom(b.to_string()))?;
            rows[i].insert(j);
        }
        Ok(BinRel {
            left: left.clone(),
            right: right.clone(),
            rows,
        })
    }

    pub fn from_rows(left: FinSet, right: FinSet, rows: Vec<Mask>) -> BinRel {
        assert_eq!(rows.len(), left.len());
        assert!(rows.iter().all(|r| r.len() == right.len()));
        BinRel { left, right, rows }
    }

    pub fn total(left: &FinSet, right: &FinSet) -> BinRel {
        BinRel {
            left: left.clone(),
            right: right.clone(),
            rows: vec![Mask::full(right.len()); left.len()],
        }
    }

    /// The identity relation between two carriers of equal size, matching
    /// positions pairwise.
    pub fn positional_diagonal(left: &FinSet, right: &FinSet) -> BinRel {
        assert_eq!(left.len(), right.len());
        BinRel {
            left: left.clone(),
            right: right.clone(),
            rows: (0..left.len())
                .map(|i| Mask::singleton(right.len(), i))
                .collect(),
        }
    }

    pub fn left(&self) -> &FinSet {
        &self.left
    }

    pub fn right(&self) -> &FinSet {
        &self.right
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn rows(&self) -> &[Mask] {
        &self.rows
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows.len()).flat_map(move |i| self.rows[i].ones().map(move |j| (i, j)))
    }

    pub fn image(&self, set: &Mask) -> Mask {
        let mut out = Mask::empty(self.right.len());
        for i in set.ones() {
            out = out.union(&self.rows[i]);
        }
        out
    }

    /// Relational composition `self ; other`.
    pub fn compose(&self, other: &BinRel) -> BinRel {
        assert_eq!(self.right, other.left, "composition endpoints differ");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = Mask::empty(other.right.len());
                for j in r.ones() {
                    out = out.union(&other.rows[j]);
                }
                out
            })
            .collect();
        BinRel {
            left: self.left.clone(),
            right: other.right.clone(),
            rows,
        }
    }

    pub fn included_in(&self, other: &BinRel) -> bool {
        assert_eq!(self.left, other.left, "fibre carrier mismatch");
        assert_eq!(self.right, other.right, "fibre carrier mismatch");
        self.rows
            .iter()
            .zip(other.rows.iter())
            .all(|(a, b)| a.is_subset(b))
    }

    pub fn intersect(&self, other: &BinRel) -> BinRel {
        assert_eq!(self.left, other.left, "fibre carrier mismatch");
        assert_eq!(self.right, other.right, "fibre carrier mismatch");
        BinRel {
            left: self.left.clone(),
            right: self.right.clone(),
            rows: self
                .rows
                .iter()
                .zip(other.rows.iter())
                .map(|(a, b)| a.intersect(b))
                .collect(),
        }
    }
}
