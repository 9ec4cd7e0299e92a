//! Posetal fibrations over finite sets with fibred meets.
//!
//! A `FibreObject` is an object of the total category sitting above a given
//! carrier: a predicate, preorder, topology, endorelation, binary relation
//! or extended pseudometric. The module provides the fibration structure
//! shared by all of them: inverse images (`reindex`), fibred meets,
//! morphism tests, hom-set enumeration, powers, fibre tops and the fibre
//! order.
//!
//! Binary-relation objects live over a *pair* of carriers; their inverse
//! images and morphism tests take explicit pairs of maps (`reindex_pair`,
//! `is_morphism_pair`). The single-map entry points reject them.

pub mod metric;
pub mod preorder;
pub mod relation;
pub mod topology;

pub use metric::{Metric, MetricError};
pub use preorder::Preorder;
pub use relation::{BinRel, EndoRel};
pub use topology::{Topology, TopologyError};

use crate::finset::{enumerate_functions, FinFun, FinSet, Subset};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FibreError {
    #[error("tag mismatch: expected {expected}, got {got}")]
    TagMismatch { expected: Tag, got: Tag },
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("empty meet family has no distinguished carrier")]
    EmptyList,
    #[error("operation not supported for tag {0}")]
    UnsupportedTag(Tag),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Pred,
    Pre,
    Top,
    ERel,
    BRel,
    Met,
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Tag::Pred => "PRED",
            Tag::Pre => "PRE",
            Tag::Top => "TOP",
            Tag::ERel => "EREL",
            Tag::BRel => "BREL",
            Tag::Met => "MET",
        };
        write!(f, "{s}")
    }
}

/// An object of the total category above a finite carrier.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FibreObject {
    Pred(Subset),
    Pre(Preorder),
    Top(Topology),
    ERel(EndoRel),
    BRel(BinRel),
    Met(Metric),
}

impl FibreObject {
    pub fn tag(&self) -> Tag {
        match self {
            FibreObject::Pred(_) => Tag::Pred,
            FibreObject::Pre(_) => Tag::Pre,
            FibreObject::Top(_) => Tag::Top,
            FibreObject::ERel(_) => Tag::ERel,
            FibreObject::BRel(_) => Tag::BRel,
            FibreObject::Met(_) => Tag::Met,
        }
    }

    /// The carrier below the object. Binary relations have two; this
    /// returns the left one — use [`FibreObject::carriers`] when both matter.
    pub fn carrier(&self) -> &FinSet {
        match self {
            FibreObject::Pred(s) => s.ambient(),
            FibreObject::Pre(p) => p.carrier(),
            FibreObject::Top(t) => t.carrier(),
            FibreObject::ERel(r) => r.carrier(),
            FibreObject::BRel(r) => r.left(),
            FibreObject::Met(m) => m.carrier(),
        }
    }

    pub fn carriers(&self) -> (&FinSet, Option<&FinSet>) {
        match self {
            FibreObject::BRel(r) => (r.left(), Some(r.right())),
            other => (other.carrier(), None),
        }
    }

    fn expect_tag(&self, expected: Tag) -> Result<(), FibreError> {
        if self.tag() != expected {
            return Err(FibreError::TagMismatch {
                expected,
                got: self.tag(),
            });
        }
        Ok(())
    }
}

fn carrier_check(cond: bool, what: &str) -> Result<(), FibreError> {
    if cond {
        Ok(())
    } else {
        Err(FibreError::CarrierMismatch(what.to_string()))
    }
}

/// Inverse image `f*(s)` along `f` into the carrier of `s`.
pub fn reindex(f: &FinFun, s: &FibreObject) -> Result<FibreObject, FibreError> {
    match s {
        FibreObject::BRel(_) => Err(FibreError::UnsupportedTag(Tag::BRel)),
        FibreObject::Pred(p) => {
            carrier_check(f.cod() == p.ambient(), "map codomain vs predicate ambient")?;
            Ok(FibreObject::Pred(
                crate::finset::preimage(f, p).expect("checked ambient"),
            ))
        }
        FibreObject::Pre(p) => {
            carrier_check(f.cod() == p.carrier(), "map codomain vs preorder carrier")?;
            let n = f.dom().len();
            let rows = (0..n)
                .map(|i| {
                    crate::util::mask::Mask::from_indices(
                        n,
                        (0..n).filter(|&j| p.le(f.apply_index(i), f.apply_index(j))),
                    )
                })
                .collect();
            // inverse images of preorders are preorders already
            Ok(FibreObject::Pre(Preorder::from_rows(f.dom().clone(), rows)))
        }
        FibreObject::Top(t) => {
            carrier_check(f.cod() == t.carrier(), "map codomain vs space carrier")?;
            Ok(FibreObject::Top(t.reindex_along(f.images(), f.dom())))
        }
        FibreObject::ERel(r) => {
            carrier_check(f.cod() == r.carrier(), "map codomain vs relation carrier")?;
            let n = f.dom().len();
            let rows = (0..n)
                .map(|i| {
                    crate::util::mask::Mask::from_indices(
                        n,
                        (0..n).filter(|&j| r.related(f.apply_index(i), f.apply_index(j))),
                    )
                })
                .collect();
            Ok(FibreObject::ERel(EndoRel::from_rows(f.dom().clone(), rows)))
        }
        FibreObject::Met(m) => {
            carrier_check(f.cod() == m.carrier(), "map codomain vs metric carrier")?;
            Ok(FibreObject::Met(m.reindex_along(f.images(), f.dom())))
        }
    }
}

/// Inverse image of a binary-relation object along a pair of maps.
pub fn reindex_pair(f1: &FinFun, f2: &FinFun, s: &FibreObject) -> Result<FibreObject, FibreError> {
    match s {
        FibreObject::BRel(r) => {
            carrier_check(f1.cod() == r.left(), "left map codomain vs left carrier")?;
            carrier_check(f2.cod() == r.right(), "right map codomain vs right carrier")?;
            let rows = (0..f1.dom().len())
                .map(|i| {
                    crate::util::mask::Mask::from_indices(
                        f2.dom().len(),
                        (0..f2.dom().len())
                            .filter(|&j| r.related(f1.apply_index(i), f2.apply_index(j))),
                    )
                })
                .collect();
            Ok(FibreObject::BRel(BinRel::from_rows(
                f1.dom().clone(),
                f2.dom().clone(),
                rows,
            )))
        }
        other => Err(FibreError::TagMismatch {
            expected: Tag::BRel,
            got: other.tag(),
        }),
    }
}

/// Meet of a nonempty family above one carrier: intersections for
/// predicate/relation-like objects, the join-generated refinement for
/// topologies, the pointwise sup for pseudometrics.
pub fn fibred_meet(items: &[FibreObject]) -> Result<FibreObject, FibreError> {
    let (first, rest) = items.split_first().ok_or(FibreError::EmptyList)?;
    let mut acc = first.clone();
    for item in rest {
        item.expect_tag(acc.tag())?;
        acc = match (&acc, item) {
            (FibreObject::Pred(a), FibreObject::Pred(b)) => {
                carrier_check(a.ambient() == b.ambient(), "meet over different ambients")?;
                FibreObject::Pred(a.intersect(b).expect("checked ambient"))
            }
            (FibreObject::Pre(a), FibreObject::Pre(b)) => {
                carrier_check(a.carrier() == b.carrier(), "meet over different carriers")?;
                FibreObject::Pre(a.intersect(b))
            }
            (FibreObject::Top(a), FibreObject::Top(b)) => {
                carrier_check(a.carrier() == b.carrier(), "meet over different carriers")?;
                FibreObject::Top(a.meet(b))
            }
            (FibreObject::ERel(a), FibreObject::ERel(b)) => {
                carrier_check(a.carrier() == b.carrier(), "meet over different carriers")?;
                FibreObject::ERel(a.intersect(b))
            }
            (FibreObject::BRel(a), FibreObject::BRel(b)) => {
                carrier_check(
                    a.left() == b.left() && a.right() == b.right(),
                    "meet over different carriers",
                )?;
                FibreObject::BRel(a.intersect(b))
            }
            (FibreObject::Met(a), FibreObject::Met(b)) => {
                carrier_check(a.carrier() == b.carrier(), "meet over different carriers")?;
                FibreObject::Met(a.meet(b))
            }
            _ => unreachable!("tags checked above"),
        };
    }
    Ok(acc)
}

/// The top of the fibre above `carrier` for a single-carrier tag: the value
/// of the empty meet.
pub fn fibre_top(tag: Tag, carrier: &FinSet) -> Result<FibreObject, FibreError> {
    Ok(match tag {
        Tag::Pred => FibreObject::Pred(Subset::full(carrier)),
        Tag::Pre => FibreObject::Pre(Preorder::total(carrier)),
        Tag::Top => FibreObject::Top(Topology::indiscrete(carrier)),
        Tag::ERel => FibreObject::ERel(EndoRel::total(carrier)),
        Tag::Met => FibreObject::Met(Metric::zero(carrier)),
        Tag::BRel => return Err(FibreError::UnsupportedTag(Tag::BRel)),
    })
}

pub fn fibre_top_brel(left: &FinSet, right: &FinSet) -> FibreObject {
    FibreObject::BRel(BinRel::total(left, right))
}

/// The fibre order. Predicates and relations are ordered by inclusion,
/// topologies by coarseness (finer is lower), pseudometrics reversed
/// pointwise (larger is lower).
pub fn fibre_le(x: &FibreObject, y: &FibreObject) -> Result<bool, FibreError> {
    y.expect_tag(x.tag())?;
    Ok(match (x, y) {
        (FibreObject::Pred(a), FibreObject::Pred(b)) => {
            carrier_check(a.ambient() == b.ambient(), "order over different ambients")?;
            a.is_subset_of(b).expect("checked ambient")
        }
        (FibreObject::Pre(a), FibreObject::Pre(b)) => {
            carrier_check(a.carrier() == b.carrier(), "order over different carriers")?;
            a.included_in(b)
        }
        (FibreObject::Top(a), FibreObject::Top(b)) => {
            carrier_check(a.carrier() == b.carrier(), "order over different carriers")?;
            a.finer_than(b)
        }
        (FibreObject::ERel(a), FibreObject::ERel(b)) => {
            carrier_check(a.carrier() == b.carrier(), "order over different carriers")?;
            a.included_in(b)
        }
        (FibreObject::BRel(a), FibreObject::BRel(b)) => {
            carrier_check(
                a.left() == b.left() && a.right() == b.right(),
                "order over different carriers",
            )?;
            a.included_in(b)
        }
        (FibreObject::Met(a), FibreObject::Met(b)) => {
            carrier_check(a.carrier() == b.carrier(), "order over different carriers")?;
            a.below(b)
        }
        _ => unreachable!("tags checked above"),
    })
}

/// Whether `f` is a morphism `x → y` in the total category: predicate
/// preservation, monotonicity, continuity, relation preservation or
/// non-expansiveness according to the tag.
pub fn is_morphism(f: &FinFun, x: &FibreObject, y: &FibreObject) -> Result<bool, FibreError> {
    y.expect_tag(x.tag())?;
    Ok(match (x, y) {
        (FibreObject::Pred(a), FibreObject::Pred(b)) => {
            carrier_check(
                f.dom() == a.ambient() && f.cod() == b.ambient(),
                "map endpoints vs predicate ambients",
            )?;
            a.mask()
                .ones()
                .all(|i| b.mask().contains(f.apply_index(i)))
        }
        (FibreObject::Pre(a), FibreObject::Pre(b)) => {
            carrier_check(
                f.dom() == a.carrier() && f.cod() == b.carrier(),
                "map endpoints vs preorder carriers",
            )?;
            a.pairs()
                .all(|(i, j)| b.le(f.apply_index(i), f.apply_index(j)))
        }
        (FibreObject::Top(a), FibreObject::Top(b)) => {
            carrier_check(
                f.dom() == a.carrier() && f.cod() == b.carrier(),
                "map endpoints vs space carriers",
            )?;
            b.continuous_from(a, f.images())
        }
        (FibreObject::ERel(a), FibreObject::ERel(b)) => {
            carrier_check(
                f.dom() == a.carrier() && f.cod() == b.carrier(),
                "map endpoints vs relation carriers",
            )?;
            a.pairs()
                .all(|(i, j)| b.related(f.apply_index(i), f.apply_index(j)))
        }
        (FibreObject::Met(a), FibreObject::Met(b)) => {
            carrier_check(
                f.dom() == a.carrier() && f.cod() == b.carrier(),
                "map endpoints vs metric carriers",
            )?;
            b.non_expansive_from(a, f.images())
        }
        (FibreObject::BRel(_), _) => return Err(FibreError::UnsupportedTag(Tag::BRel)),
        _ => unreachable!("tags checked above"),
    })
}

/// Morphism test for binary-relation objects: a pair of maps preserving
/// the relation.
pub fn is_morphism_pair(
    f1: &FinFun,
    f2: &FinFun,
    x: &FibreObject,
    y: &FibreObject,
) -> Result<bool, FibreError> {
    match (x, y) {
        (FibreObject::BRel(a), FibreObject::BRel(b)) => {
            carrier_check(
                f1.dom() == a.left()
                    && f2.dom() == a.right()
                    && f1.cod() == b.left()
                    && f2.cod() == b.right(),
                "map endpoints vs relation carriers",
            )?;
            Ok(a.pairs()
                .all(|(i, j)| b.related(f1.apply_index(i), f2.apply_index(j))))
        }
        _ => Err(FibreError::UnsupportedTag(x.tag())),
    }
}

/// All morphisms `x → y`, lazily, by filtering the full function space.
pub fn hom_enumerate<'a>(
    x: &'a FibreObject,
    y: &'a FibreObject,
) -> Result<impl Iterator<Item = FinFun> + 'a, FibreError> {
    y.expect_tag(x.tag())?;
    if x.tag() == Tag::BRel {
        return Err(FibreError::UnsupportedTag(Tag::BRel));
    }
    Ok(enumerate_functions(x.carrier(), y.carrier())
        .filter(move |f| is_morphism(f, x, y).unwrap_or(false)))
}

/// All morphism pairs between binary-relation objects.
pub fn hom_enumerate_pairs(
    x: &FibreObject,
    y: &FibreObject,
) -> Result<Vec<(FinFun, FinFun)>, FibreError> {
    match (x, y) {
        (FibreObject::BRel(a), FibreObject::BRel(b)) => {
            let mut out = Vec::new();
            for f1 in enumerate_functions(a.left(), b.left()) {
                for f2 in enumerate_functions(a.right(), b.right()) {
                    if is_morphism_pair(&f1, &f2, x, y)? {
                        out.push((f1.clone(), f2));
                    }
                }
            }
            Ok(out)
        }
        _ => Err(FibreError::UnsupportedTag(x.tag())),
    }
}

/// The power `A ⋔ s` in the total category, above the function space
/// `A ⋔ carrier(s)`: tuples of members, the pointwise order, or the
/// product topology.
pub fn power_object(a: &FinSet, s: &FibreObject) -> Result<FibreObject, FibreError> {
    use crate::finset::FunctionSpace;
    use crate::util::mask::Mask;
    match s {
        FibreObject::Pred(p) => {
            let space = FunctionSpace::new(a, p.ambient());
            let mask = Mask::from_indices(
                space.len(),
                (0..space.len())
                    .filter(|&g| space.decode(g).into_iter().all(|v| p.mask().contains(v))),
            );
            Ok(FibreObject::Pred(Subset::from_mask(
                space.carrier().clone(),
                mask,
            )))
        }
        FibreObject::Pre(p) => {
            let space = FunctionSpace::new(a, p.carrier());
            let n = space.len();
            let rows = (0..n)
                .map(|g| {
                    let gd = space.decode(g);
                    Mask::from_indices(
                        n,
                        (0..n).filter(|&h| {
                            let hd = space.decode(h);
                            gd.iter().zip(hd.iter()).all(|(&gv, &hv)| p.le(gv, hv))
                        }),
                    )
                })
                .collect();
            Ok(FibreObject::Pre(Preorder::from_rows(
                space.carrier().clone(),
                rows,
            )))
        }
        FibreObject::Top(t) => {
            let space = FunctionSpace::new(a, t.carrier());
            let n = space.len();
            let arity = a.len();
            // decode every tuple once; the pairwise membership loop is the
            // hot path for large powers
            let digits: Vec<Vec<usize>> = (0..n).map(|g| space.decode(g)).collect();
            // product topology: minimal neighbourhood is componentwise
            let mins = (0..n)
                .map(|g| {
                    let gd = &digits[g];
                    Mask::from_indices(
                        n,
                        (0..n).filter(|&h| {
                            let hd = &digits[h];
                            (0..arity).all(|k| t.min_nbhd(gd[k]).contains(hd[k]))
                        }),
                    )
                })
                .collect();
            Ok(FibreObject::Top(Topology::from_mins(
                space.carrier().clone(),
                mins,
            )))
        }
        other => Err(FibreError::UnsupportedTag(other.tag())),
    }
}
