//! Finite sets, total functions between them, subsets, and exhaustive
//! enumeration of function spaces. Everything downstream builds on these.
//!
//! Carriers keep their atoms in insertion order and all enumerations are
//! deterministic, so every computed structure can be compared byte-for-byte.

use crate::util::mask::Mask;
use std::fmt;
use thiserror::Error;

pub type Atom = String;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinSetError {
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(Atom),
    #[error("empty atom name")]
    EmptyAtom,
    #[error("unknown atom `{0}`")]
    UnknownAtom(Atom),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("not a total function: {0}")]
    NotTotal(String),
}

/// An ordered finite set of named atoms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet {
    elements: Vec<Atom>,
}

impl FinSet {
    pub fn new<I, S>(atoms: I) -> Result<FinSet, FinSetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<Atom>,
    {
        let mut elements: Vec<Atom> = Vec::new();
        for a in atoms {
            let a = a.into();
            if a.is_empty() {
                return Err(FinSetError::EmptyAtom);
            }
            if elements.contains(&a) {
                return Err(FinSetError::DuplicateAtom(a));
            }
            elements.push(a);
        }
        Ok(FinSet { elements })
    }

    /// Infallible constructor for literals; panics on duplicates.
    pub fn of<S: Into<Atom> + Clone>(atoms: &[S]) -> FinSet {
        FinSet::new(atoms.iter().cloned()).expect("invalid atom list")
    }

    pub fn empty() -> FinSet {
        FinSet { elements: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.elements
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.elements[i]
    }

    pub fn index_of(&self, a: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == a)
    }

    /// Cartesian product with atoms named `(x,y)`, ordered row-major.
    pub fn product(&self, other: &FinSet) -> FinSet {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for x in &self.elements {
            for y in &other.elements {
                elements.push(format!("({x},{y})"));
            }
        }
        FinSet { elements }
    }

    pub fn pair_index(&self, other: &FinSet, i: usize, j: usize) -> usize {
        i * other.len() + j
    }

    pub fn unpair_index(&self, other: &FinSet, k: usize) -> (usize, usize) {
        (k / other.len(), k % other.len())
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinSet[")?;
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// A total function between finite sets, stored as image indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinFun {
    dom: FinSet,
    cod: FinSet,
    images: Vec<usize>,
}

impl FinFun {
    pub fn new(dom: FinSet, cod: FinSet, images: Vec<usize>) -> Result<FinFun, FinSetError> {
        if images.len() != dom.len() {
            return Err(FinSetError::NotTotal(format!(
                "expected {} images, got {}",
                dom.len(),
                images.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&i| i >= cod.len()) {
            return Err(FinSetError::NotTotal(format!(
                "image index {bad} outside codomain of size {}",
                cod.len()
            )));
        }
        Ok(FinFun { dom, cod, images })
    }

    pub fn from_pairs<'a, I>(dom: FinSet, cod: FinSet, pairs: I) -> Result<FinFun, FinSetError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut images = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let xi = dom
                .index_of(x)
                .ok_or_else(|| FinSetError::UnknownAtom(x.to_string()))?;
            let yi = cod
                .index_of(y)
                .ok_or_else(|| FinSetError::UnknownAtom(y.to_string()))?;
            images[xi] = yi;
        }
        if let Some(i) = images.iter().position(|&v| v == usize::MAX) {
            return Err(FinSetError::NotTotal(format!(
                "no image for `{}`",
                dom.atom(i)
            )));
        }
        FinFun::new(dom, cod, images)
    }

    pub fn identity(carrier: &FinSet) -> FinFun {
        FinFun {
            dom: carrier.clone(),
            cod: carrier.clone(),
            images: (0..carrier.len()).collect(),
        }
    }

    pub fn constant(dom: &FinSet, cod: &FinSet, value: usize) -> FinFun {
        assert!(value < cod.len(), "constant value outside codomain");
        FinFun {
            dom: dom.clone(),
            cod: cod.clone(),
            images: vec![value; dom.len()],
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn apply(&self, a: &str) -> Option<&Atom> {
        self.dom.index_of(a).map(|i| self.cod.atom(self.images[i]))
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `g ∘ self`; requires `self.cod = g.dom`.
    pub fn then(&self, g: &FinFun) -> Result<FinFun, FinSetError> {
        if self.cod != g.dom {
            return Err(FinSetError::AmbientMismatch(
                "composition endpoints differ".to_string(),
            ));
        }
        Ok(FinFun {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            images: self.images.iter().map(|&i| g.images[i]).collect(),
        })
    }

    /// Direct image of a subset of the domain.
    pub fn image(&self, s: &Subset) -> Result<Subset, FinSetError> {
        if s.ambient() != &self.dom {
            return Err(FinSetError::AmbientMismatch(
                "subset not over the function's domain".to_string(),
            ));
        }
        let mut mask = Mask::empty(self.cod.len());
        for i in s.mask().ones() {
            mask.insert(self.images[i]);
        }
        Ok(Subset::from_mask(self.cod.clone(), mask))
    }
}

impl fmt::Debug for FinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinFun[")?;
        for (i, &j) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}->{}", self.dom.atom(i), self.cod.atom(j))?;
        }
        write!(f, "]")
    }
}

/// Inverse image `f⁻¹(s)` for a subset of the codomain.
pub fn preimage(f: &FinFun, s: &Subset) -> Result<Subset, FinSetError> {
    if s.ambient() != f.cod() {
        return Err(FinSetError::AmbientMismatch(
            "subset not over the function's codomain".to_string(),
        ));
    }
    let mask = Mask::from_indices(
        f.dom().len(),
        (0..f.dom().len()).filter(|&i| s.mask().contains(f.apply_index(i))),
    );
    Ok(Subset::from_mask(f.dom().clone(), mask))
}

/// A subset of an ambient finite set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    ambient: FinSet,
    mask: Mask,
}

impl Subset {
    pub fn from_mask(ambient: FinSet, mask: Mask) -> Subset {
        assert_eq!(mask.len(), ambient.len(), "mask does not fit ambient");
        Subset { ambient, mask }
    }

    pub fn from_atoms<'a, I>(ambient: &FinSet, atoms: I) -> Result<Subset, FinSetError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut mask = Mask::empty(ambient.len());
        for a in atoms {
            let i = ambient
                .index_of(a)
                .ok_or_else(|| FinSetError::UnknownAtom(a.to_string()))?;
            mask.insert(i);
        }
        Ok(Subset {
            ambient: ambient.clone(),
            mask,
        })
    }

    pub fn empty(ambient: &FinSet) -> Subset {
        Subset {
            ambient: ambient.clone(),
            mask: Mask::empty(ambient.len()),
        }
    }

    pub fn full(ambient: &FinSet) -> Subset {
        Subset {
            ambient: ambient.clone(),
            mask: Mask::full(ambient.len()),
        }
    }

    pub fn ambient(&self) -> &FinSet {
        &self.ambient
    }

    pub fn mask(&self) -> &Mask {
        &self.mask
    }

    pub fn contains(&self, a: &str) -> bool {
        self.ambient
            .index_of(a)
            .is_some_and(|i| self.mask.contains(i))
    }

    pub fn members(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.mask.ones().map(|i| self.ambient.atom(i))
    }

    pub fn card(&self) -> usize {
        self.mask.count()
    }

    pub fn union(&self, other: &Subset) -> Result<Subset, FinSetError> {
        self.check_ambient(other)?;
        Ok(Subset::from_mask(
            self.ambient.clone(),
            self.mask.union(&other.mask),
        ))
    }

    pub fn intersect(&self, other: &Subset) -> Result<Subset, FinSetError> {
        self.check_ambient(other)?;
        Ok(Subset::from_mask(
            self.ambient.clone(),
            self.mask.intersect(&other.mask),
        ))
    }

    pub fn complement(&self) -> Subset {
        Subset::from_mask(self.ambient.clone(), self.mask.complement())
    }

    pub fn is_subset_of(&self, other: &Subset) -> Result<bool, FinSetError> {
        self.check_ambient(other)?;
        Ok(self.mask.is_subset(&other.mask))
    }

    fn check_ambient(&self, other: &Subset) -> Result<(), FinSetError> {
        if self.ambient != other.ambient {
            return Err(FinSetError::AmbientMismatch(
                "subsets over different ambients".to_string(),
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.members().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Lazily yields all `|cod|^|dom|` total functions `dom → cod`, each exactly
/// once, in mixed-radix order (the first domain position cycles fastest).
/// An empty codomain with a nonempty domain yields nothing.
pub fn enumerate_functions(dom: &FinSet, cod: &FinSet) -> FunctionIter {
    let degenerate = cod.is_empty() && !dom.is_empty();
    FunctionIter {
        dom: dom.clone(),
        cod: cod.clone(),
        digits: vec![0; dom.len()],
        done: degenerate,
    }
}

pub struct FunctionIter {
    dom: FinSet,
    cod: FinSet,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for FunctionIter {
    type Item = FinFun;

    fn next(&mut self) -> Option<FinFun> {
        if self.done {
            return None;
        }
        let out = FinFun {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            images: self.digits.clone(),
        };
        // odometer step
        let base = self.cod.len();
        let mut pos = 0;
        loop {
            if pos == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[pos] += 1;
            if self.digits[pos] < base {
                break;
            }
            self.digits[pos] = 0;
            pos += 1;
        }
        Some(out)
    }
}

/// The finite function space `A ⋔ X` materialised as a carrier whose atoms
/// name functions. Indexing is mixed-radix with the first `A`-position as
/// the lowest digit, matching `enumerate_functions` order.
#[derive(Clone, PartialEq, Eq)]
pub struct FunctionSpace {
    arity: FinSet,
    base: FinSet,
    carrier: FinSet,
}

impl FunctionSpace {
    pub fn new(arity: &FinSet, base: &FinSet) -> FunctionSpace {
        let total = base.len().checked_pow(arity.len() as u32).unwrap_or_else(|| {
            panic!(
                "function space {}^{} too large to materialise",
                base.len(),
                arity.len()
            )
        });
        let mut elements = Vec::with_capacity(total);
        let mut digits = vec![0usize; arity.len()];
        for _ in 0..total {
            let mut name = String::from("[");
            for (k, &d) in digits.iter().enumerate() {
                if k > 0 {
                    name.push(',');
                }
                name.push_str(arity.atom(k));
                name.push_str("->");
                name.push_str(base.atom(d));
            }
            name.push(']');
            elements.push(name);
            let mut pos = 0;
            while pos < digits.len() {
                digits[pos] += 1;
                if digits[pos] < base.len() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
        FunctionSpace {
            arity: arity.clone(),
            base: base.clone(),
            carrier: FinSet { elements },
        }
    }

    pub fn arity(&self) -> &FinSet {
        &self.arity
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// Component `a ↦ digits[a]` of the function named by `index`.
    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut rest = index;
        let base = self.base.len();
        let mut digits = Vec::with_capacity(self.arity.len());
        for _ in 0..self.arity.len() {
            digits.push(rest % base);
            rest /= base;
        }
        digits
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        let base = self.base.len();
        let mut index = 0;
        for &d in digits.iter().rev() {
            assert!(d < base, "digit outside base carrier");
            index = index * base + d;
        }
        index
    }

    pub fn component(&self, index: usize, a_pos: usize) -> usize {
        let base = self.base.len();
        (index / base.pow(a_pos as u32)) % base
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> FinSet {
        FinSet::of(names)
    }

    #[test]
    fn rejects_duplicates() {
        assert_eq!(
            FinSet::new(["a", "a"]),
            Err(FinSetError::DuplicateAtom("a".to_string()))
        );
    }

    #[test]
    fn enumerate_counts_two_by_two() {
        let d = set(&["0", "1"]);
        let fs: Vec<_> = enumerate_functions(&d, &d).collect();
        assert_eq!(fs.len(), 4);
    }

    #[test]
    fn enumerate_empty_domain_is_single() {
        let fs: Vec<_> = enumerate_functions(&FinSet::empty(), &set(&["a"])).collect();
        assert_eq!(fs.len(), 1);
    }

    #[test]
    fn enumerate_empty_codomain_yields_nothing() {
        let fs: Vec<_> = enumerate_functions(&set(&["a"]), &FinSet::empty()).collect();
        assert!(fs.is_empty());
    }

    #[test]
    fn enumerate_eight_distinct() {
        // brute-force distinctness cross-check
        let dom = set(&["a", "b", "c"]);
        let cod = set(&["0", "1"]);
        let fs: Vec<_> = enumerate_functions(&dom, &cod).collect();
        assert_eq!(fs.len(), 8);
        for i in 0..fs.len() {
            for j in 0..i {
                assert_ne!(fs[i], fs[j]);
            }
        }
    }

    #[test]
    fn preimage_identity_and_constant() {
        let d = set(&["0", "1"]);
        let id = FinFun::identity(&d);
        let one = Subset::from_atoms(&d, ["1"]).unwrap();
        assert_eq!(preimage(&id, &one).unwrap(), one);

        let c0 = FinFun::constant(&d, &d, 0);
        assert_eq!(preimage(&c0, &one).unwrap(), Subset::empty(&d));
    }

    #[test]
    fn preimage_by_evaluation() {
        let dom = set(&["a", "b", "c"]);
        let cod = set(&["x", "y"]);
        let f = FinFun::from_pairs(dom.clone(), cod.clone(), [("a", "x"), ("b", "x"), ("c", "y")])
            .unwrap();
        let s = Subset::from_atoms(&cod, ["x"]).unwrap();
        let p = preimage(&f, &s).unwrap();
        assert_eq!(p, Subset::from_atoms(&dom, ["a", "b"]).unwrap());
    }

    #[test]
    fn preimage_ambient_mismatch() {
        let d = set(&["0", "1"]);
        let e = set(&["a"]);
        let f = FinFun::identity(&d);
        let s = Subset::full(&e);
        assert!(matches!(preimage(&f, &s), Err(FinSetError::AmbientMismatch(_))));
    }

    #[test]
    fn preimage_boolean_structure() {
        let dom = set(&["a", "b", "c"]);
        let cod = set(&["0", "1", "2"]);
        for f in enumerate_functions(&dom, &cod) {
            assert_eq!(preimage(&f, &Subset::full(&cod)).unwrap(), Subset::full(&dom));
            assert_eq!(preimage(&f, &Subset::empty(&cod)).unwrap(), Subset::empty(&dom));
            let u = Subset::from_atoms(&cod, ["0", "1"]).unwrap();
            let v = Subset::from_atoms(&cod, ["1", "2"]).unwrap();
            assert_eq!(
                preimage(&f, &u.intersect(&v).unwrap()).unwrap(),
                preimage(&f, &u).unwrap().intersect(&preimage(&f, &v).unwrap()).unwrap()
            );
            assert_eq!(
                preimage(&f, &u.union(&v).unwrap()).unwrap(),
                preimage(&f, &u).unwrap().union(&preimage(&f, &v).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn function_space_round_trip() {
        let a = set(&["p", "q"]);
        let x = set(&["0", "1", "2"]);
        let fs = FunctionSpace::new(&a, &x);
        assert_eq!(fs.len(), 9);
        for i in 0..fs.len() {
            let digits = fs.decode(i);
            assert_eq!(fs.encode(&digits), i);
            for (pos, &d) in digits.iter().enumerate() {
                assert_eq!(fs.component(i, pos), d);
            }
        }
        // matches enumerate_functions order
        for (i, f) in enumerate_functions(&a, &x).enumerate() {
            assert_eq!(f.images(), fs.decode(i).as_slice());
        }
    }

    #[test]
    fn product_indexing() {
        let a = set(&["x", "y"]);
        let b = set(&["0", "1", "2"]);
        let p = a.product(&b);
        assert_eq!(p.len(), 6);
        assert_eq!(p.atom(a.pair_index(&b, 1, 2)), "(y,2)");
        assert_eq!(a.unpair_index(&b, 5), (1, 2));
    }
}
