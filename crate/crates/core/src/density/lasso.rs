//! Eventually periodic streams as lassos: a finite prefix plus a repeating
//! cycle over a finite alphabet.
//!
//! Lassos are kept in canonical form — the cycle is primitive (not a power
//! of a shorter word) and the prefix is shortest (its last element differs
//! from the cycle's last) — so structural equality coincides with equality
//! of the denoted streams.

use crate::finset::FinSet;
use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LassoError {
    #[error("cycle must be nonempty")]
    EmptyCycle,
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Lasso {
    alphabet: FinSet,
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl Lasso {
    pub fn new<'a, I, J>(alphabet: &FinSet, prefix: I, cycle: J) -> Result<Lasso, LassoError>
    where
        I: IntoIterator<Item = &'a str>,
        J: IntoIterator<Item = &'a str>,
    {
        let to_indices = |it: &mut dyn Iterator<Item = &'a str>| -> Result<Vec<usize>, LassoError> {
            it.map(|a| {
                alphabet
                    .index_of(a)
                    .ok_or_else(|| LassoError::UnknownAtom(a.to_string()))
            })
            .collect()
        };
        let prefix = to_indices(&mut prefix.into_iter())?;
        let cycle = to_indices(&mut cycle.into_iter())?;
        Lasso::from_indices(alphabet.clone(), prefix, cycle)
    }

    pub fn from_indices(
        alphabet: FinSet,
        prefix: Vec<usize>,
        cycle: Vec<usize>,
    ) -> Result<Lasso, LassoError> {
        if cycle.is_empty() {
            return Err(LassoError::EmptyCycle);
        }
        assert!(
            prefix.iter().chain(cycle.iter()).all(|&i| i < alphabet.len()),
            "lasso letter outside alphabet"
        );
        Ok(Lasso::canonical(alphabet, prefix, cycle))
    }

    fn canonical(alphabet: FinSet, mut prefix: Vec<usize>, mut cycle: Vec<usize>) -> Lasso {
        // primitive root of the cycle
        let len = cycle.len();
        for d in 1..=len {
            if len % d == 0 && (0..len).all(|i| cycle[i] == cycle[i % d]) {
                cycle.truncate(d);
                break;
            }
        }
        // shortest prefix: absorb matching tail letters into the rotation
        while let (Some(&p), Some(&c)) = (prefix.last(), cycle.last()) {
            if p != c {
                break;
            }
            cycle.rotate_right(1);
            prefix.pop();
        }
        Lasso {
            alphabet,
            prefix,
            cycle,
        }
    }

    pub fn alphabet(&self) -> &FinSet {
        &self.alphabet
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// The letter index at stream position `i`.
    pub fn at(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn atom_at(&self, i: usize) -> &str {
        self.alphabet.atom(self.at(i))
    }

    /// The lasso of the `i`-th tail of the stream.
    pub fn tail(&self, i: usize) -> Lasso {
        if i < self.prefix.len() {
            Lasso::canonical(
                self.alphabet.clone(),
                self.prefix[i..].to_vec(),
                self.cycle.clone(),
            )
        } else {
            let k = (i - self.prefix.len()) % self.cycle.len();
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(k);
            Lasso::canonical(self.alphabet.clone(), Vec::new(), cycle)
        }
    }

    /// Positions `0..bound` suffice to compare this lasso with `other`
    /// pointwise, and all joint behaviour repeats beyond it.
    pub fn joint_bound(&self, other: &Lasso) -> usize {
        let p = self.prefix.len().max(other.prefix.len());
        let l = self.cycle.len().lcm(&other.cycle.len());
        p + l
    }

    /// Renders as `a,b|c,d` (prefix before the bar, cycle after).
    pub fn display(&self) -> String {
        let fmt = |ix: &[usize]| {
            ix.iter()
                .map(|&i| self.alphabet.atom(i).as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{}|{}", fmt(&self.prefix), fmt(&self.cycle))
    }

    /// Parses the `display` format.
    pub fn parse(alphabet: &FinSet, text: &str) -> Result<Lasso, LassoError> {
        let (prefix, cycle) = text.split_once('|').unwrap_or(("", text));
        let split = |s: &str| -> Vec<String> {
            s.split([',', ' '])
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect()
        };
        let p = split(prefix);
        let c = split(cycle);
        Lasso::new(
            alphabet,
            p.iter().map(String::as_str),
            c.iter().map(String::as_str),
        )
    }
}
