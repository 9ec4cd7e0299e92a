//! The generic lifting engine over posetal fibrations with fibred meets.
//!
//! Given a monad `T` on finite sets and a parameter family of pairs
//! `(R, S)` with `S` above `T R`, the lifted structure above `T X` is the
//! fibred meet, over every entry and every morphism `f : X → S`, of the
//! inverse image of `S` along the Kleisli extension of the underlying map:
//!
//! ```text
//!   lift(X) = ⋀ { (f#)*(S)  |  (R,S) in the family, f in Hom(X, S) }
//! ```
//!
//! An empty family meets to the top of the fibre. The module also carries
//! the closed formulas this engine is checked against (lower/upper/convex
//! orders on powersets, lower/upper hyperspace topologies), the lifting-law
//! battery, liftability of algebraic operations, and the closed-object
//! machinery (`is_closed`, `phi`).

use crate::fibration::{
    fibre_top, fibred_meet, hom_enumerate, is_morphism, power_object, reindex, FibreError,
    FibreObject, Preorder, Tag, Topology,
};
use crate::finset::{FinSet, Subset};
use crate::monad::{AlgebraicOp, FiniteMonad};
use crate::report::{LawCheck, LawReport};
use crate::util::mask::Mask;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Fibre(#[from] FibreError),
    #[error(transparent)]
    Topology(#[from] crate::fibration::TopologyError),
    #[error("parameter entry {index}: S lies above {got:?}, expected T R = {expected:?}")]
    ParamCarrierMismatch {
        index: usize,
        expected: String,
        got: String,
    },
    #[error("parameter entries carry mixed tags")]
    MixedParamTags,
    #[error("lifting parameter has no entries")]
    EmptyParam,
    #[error("operation requires a single-entry lifting parameter")]
    NotSingleParam,
    #[error("parameter object is not closed with respect to the base object")]
    NotClosed,
}

/// A finite family of lifting parameters `(R, S)` with `S` above `T R`.
/// A single entry is the single-parameter case; several entries realise a
/// discrete index family (cotupling).
#[derive(Clone, Debug)]
pub struct LiftingParam {
    pub entries: Vec<(FinSet, FibreObject)>,
}

impl LiftingParam {
    pub fn single(r: FinSet, s: FibreObject) -> LiftingParam {
        LiftingParam {
            entries: vec![(r, s)],
        }
    }

    pub fn tag(&self) -> Option<Tag> {
        self.entries.first().map(|(_, s)| s.tag())
    }

    fn validate(&self, monad: &dyn FiniteMonad) -> Result<Tag, EngineError> {
        let tag = self.tag().ok_or(EngineError::EmptyParam)?;
        for (i, (r, s)) in self.entries.iter().enumerate() {
            if s.tag() != tag {
                return Err(EngineError::MixedParamTags);
            }
            let tr = monad.apply_t(r);
            if s.carrier() != &tr {
                return Err(EngineError::ParamCarrierMismatch {
                    index: i,
                    expected: format!("{tr:?}"),
                    got: format!("{:?}", s.carrier()),
                });
            }
        }
        Ok(tag)
    }
}

/// Result of one engine run.
#[derive(Clone, Debug)]
pub struct LiftedObject {
    pub base: FibreObject,
    pub result: FibreObject,
    /// Number of hom-set elements folded into the meet.
    pub witness_count: usize,
}

/// Computes the lifted object above `T X` by the meet-of-inverse-images
/// formula.
pub fn codensity_lift(
    monad: &dyn FiniteMonad,
    param: &LiftingParam,
    x: &FibreObject,
) -> Result<LiftedObject, EngineError> {
    let tag = param.validate(monad)?;
    if x.tag() != tag {
        return Err(EngineError::Fibre(FibreError::TagMismatch {
            expected: tag,
            got: x.tag(),
        }));
    }
    let tx = monad.apply_t(x.carrier());
    let mut family = Vec::new();
    for (_, s) in &param.entries {
        for f in hom_enumerate(x, s)? {
            let kf = monad.kleisli(&f);
            family.push(reindex(&kf, s)?);
        }
    }
    let witness_count = family.len();
    let result = if family.is_empty() {
        fibre_top(tag, &tx)?
    } else {
        fibred_meet(&family)?
    };
    Ok(LiftedObject {
        base: x.clone(),
        result,
        witness_count,
    })
}

/// The built-in closed formulas the engine is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    LowerPre,
    UpperPre,
    ConvexPre,
    LowerVietoris,
    UpperVietoris,
}

impl ClosedFormKind {
    pub fn name(self) -> &'static str {
        match self {
            ClosedFormKind::LowerPre => "lower-pre",
            ClosedFormKind::UpperPre => "upper-pre",
            ClosedFormKind::ConvexPre => "convex-pre",
            ClosedFormKind::LowerVietoris => "lower-vietoris",
            ClosedFormKind::UpperVietoris => "upper-vietoris",
        }
    }

    pub fn from_name(name: &str) -> Option<ClosedFormKind> {
        Some(match name {
            "lower-pre" => ClosedFormKind::LowerPre,
            "upper-pre" => ClosedFormKind::UpperPre,
            "convex-pre" => ClosedFormKind::ConvexPre,
            "lower-vietoris" => ClosedFormKind::LowerVietoris,
            "upper-vietoris" => ClosedFormKind::UpperVietoris,
            _ => return None,
        })
    }

    pub fn expected_tag(self) -> Tag {
        match self {
            ClosedFormKind::LowerPre | ClosedFormKind::UpperPre | ClosedFormKind::ConvexPre => {
                Tag::Pre
            }
            ClosedFormKind::LowerVietoris | ClosedFormKind::UpperVietoris => Tag::Top,
        }
    }
}

/// The parameter over the one-point carrier that makes the engine compute
/// each closed form: an order or a hyperspace-style topology on the
/// two-element powerset of a point.
pub fn builtin_param(monad: &dyn FiniteMonad, kind: ClosedFormKind) -> LiftingParam {
    let point = FinSet::of(&["*"]);
    let t1 = monad.apply_t(&point); // {"{}", "{*}"}
    let empty_ix = 0;
    let full_ix = 1;
    match kind {
        ClosedFormKind::LowerPre => LiftingParam::single(
            point,
            FibreObject::Pre(
                Preorder::generated_by(&t1, [("{}", "{*}")]).expect("atoms exist"),
            ),
        ),
        ClosedFormKind::UpperPre => LiftingParam::single(
            point,
            FibreObject::Pre(
                Preorder::generated_by(&t1, [("{*}", "{}")]).expect("atoms exist"),
            ),
        ),
        ClosedFormKind::ConvexPre => {
            let lower = builtin_param(monad, ClosedFormKind::LowerPre);
            let upper = builtin_param(monad, ClosedFormKind::UpperPre);
            LiftingParam {
                entries: lower
                    .entries
                    .into_iter()
                    .chain(upper.entries)
                    .collect(),
            }
        }
        ClosedFormKind::LowerVietoris => LiftingParam::single(
            point,
            FibreObject::Top(Topology::generate(
                &t1,
                &[Mask::singleton(t1.len(), full_ix)],
            )),
        ),
        ClosedFormKind::UpperVietoris => LiftingParam::single(
            point,
            FibreObject::Top(Topology::generate(
                &t1,
                &[Mask::singleton(t1.len(), empty_ix)],
            )),
        ),
    }
}

/// Direct implementations of the closed formulas on the powerset carrier.
pub fn closed_form_lift(kind: ClosedFormKind, x: &FibreObject) -> Result<FibreObject, EngineError> {
    match (kind, x) {
        (ClosedFormKind::LowerPre, FibreObject::Pre(p)) => {
            Ok(FibreObject::Pre(powerset_order(p, |v, w, p| {
                lower_le(v, w, p)
            })))
        }
        (ClosedFormKind::UpperPre, FibreObject::Pre(p)) => {
            Ok(FibreObject::Pre(powerset_order(p, |v, w, p| {
                upper_le(v, w, p)
            })))
        }
        (ClosedFormKind::ConvexPre, FibreObject::Pre(p)) => {
            Ok(FibreObject::Pre(powerset_order(p, |v, w, p| {
                lower_le(v, w, p) && upper_le(v, w, p)
            })))
        }
        (ClosedFormKind::LowerVietoris, FibreObject::Top(t)) => {
            let opens = t.opens()?;
            let carrier = crate::monad::powerset_carrier(t.carrier());
            // subbasis: for each open U, the family of subsets meeting U
            let subbasis: Vec<Mask> = opens
                .iter()
                .map(|u| {
                    Mask::from_indices(
                        carrier.len(),
                        (0..carrier.len()).filter(|&v| u.ones().any(|i| v & (1 << i) != 0)),
                    )
                })
                .collect();
            Ok(FibreObject::Top(Topology::generate(&carrier, &subbasis)))
        }
        (ClosedFormKind::UpperVietoris, FibreObject::Top(t)) => {
            let opens = t.opens()?;
            let carrier = crate::monad::powerset_carrier(t.carrier());
            // subbasis: for each open U, the family of subsets contained in U
            let subbasis: Vec<Mask> = opens
                .iter()
                .map(|u| {
                    Mask::from_indices(
                        carrier.len(),
                        (0..carrier.len())
                            .filter(|&v| (0..u.len()).all(|i| v & (1 << i) == 0 || u.contains(i))),
                    )
                })
                .collect();
            Ok(FibreObject::Top(Topology::generate(&carrier, &subbasis)))
        }
        _ => Err(EngineError::Fibre(FibreError::TagMismatch {
            expected: kind.expected_tag(),
            got: x.tag(),
        })),
    }
}

fn lower_le(v: usize, w: usize, p: &Preorder) -> bool {
    // every element of v is below some element of w
    (0..p.carrier().len())
        .filter(|&i| v & (1 << i) != 0)
        .all(|i| (0..p.carrier().len()).any(|j| w & (1 << j) != 0 && p.le(i, j)))
}

fn upper_le(v: usize, w: usize, p: &Preorder) -> bool {
    // every element of w is above some element of v
    (0..p.carrier().len())
        .filter(|&j| w & (1 << j) != 0)
        .all(|j| (0..p.carrier().len()).any(|i| v & (1 << i) != 0 && p.le(i, j)))
}

fn powerset_order(p: &Preorder, le: impl Fn(usize, usize, &Preorder) -> bool) -> Preorder {
    let carrier = crate::monad::powerset_carrier(p.carrier());
    let n = carrier.len();
    let rows = (0..n)
        .map(|v| Mask::from_indices(n, (0..n).filter(|&w| le(v, w, p))))
        .collect();
    Preorder::from_rows(carrier, rows)
}

/// Checks, extensionally over the sample objects, that an object assignment
/// is a lifting of the monad: the unit is a morphism `X → lift(X)`, and for
/// every morphism `f : X → lift(Y)` the Kleisli extension of its underlying
/// map is a morphism `lift(X) → lift(Y)`.
pub fn verify_lifting_laws(
    monad: &dyn FiniteMonad,
    lift: &dyn Fn(&FibreObject) -> Result<FibreObject, EngineError>,
    samples: &[FibreObject],
) -> LawReport {
    let mut report = LawReport::new("lifting laws".to_string());

    let mut unit_check = LawCheck::pass("unit membership: η ∈ Hom(X, lift X)");
    'unit: for x in samples {
        let lifted = match lift(x) {
            Ok(l) => l,
            Err(e) => {
                unit_check = LawCheck::fail(
                    "unit membership: η ∈ Hom(X, lift X)",
                    format!("lift failed on {x:?}: {e}"),
                );
                break 'unit;
            }
        };
        let unit = monad.unit(x.carrier());
        match is_morphism(&unit, x, &lifted) {
            Ok(true) => {}
            Ok(false) => {
                unit_check = LawCheck::fail(
                    "unit membership: η ∈ Hom(X, lift X)",
                    format!("unit not a morphism at {x:?}"),
                );
                break 'unit;
            }
            Err(e) => {
                unit_check = LawCheck::fail(
                    "unit membership: η ∈ Hom(X, lift X)",
                    format!("morphism check failed at {x:?}: {e}"),
                );
                break 'unit;
            }
        }
    }
    report.push(unit_check);

    let mut ext_check = LawCheck::pass("extension membership: f# ∈ Hom(lift X, lift Y)");
    'ext: for x in samples {
        for y in samples {
            let (lx, ly) = match (lift(x), lift(y)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            let homs = match hom_enumerate(x, &ly) {
                Ok(h) => h,
                Err(e) => {
                    ext_check = LawCheck::fail(
                        "extension membership: f# ∈ Hom(lift X, lift Y)",
                        format!("hom enumeration failed: {e}"),
                    );
                    break 'ext;
                }
            };
            for f in homs {
                let kf = monad.kleisli(&f);
                match is_morphism(&kf, &lx, &ly) {
                    Ok(true) => {}
                    Ok(false) => {
                        ext_check = LawCheck::fail(
                            "extension membership: f# ∈ Hom(lift X, lift Y)",
                            format!("f = {f:?} lifts outside Hom(lift {x:?}, lift {y:?})"),
                        );
                        break 'ext;
                    }
                    Err(e) => {
                        ext_check = LawCheck::fail(
                            "extension membership: f# ∈ Hom(lift X, lift Y)",
                            format!("morphism check failed: {e}"),
                        );
                        break 'ext;
                    }
                }
            }
        }
    }
    report.push(ext_check);

    report
}

/// Decides whether the algebraic operation lifts to the engine lifting with
/// a single parameter `(R, S)`: by the bijection between liftings of the
/// operation and morphisms at the parameter, this is exactly one morphism
/// check `α_R : (A ⋔ S) → S`.
pub fn algop_lift_exists(
    monad: &dyn FiniteMonad,
    param: &LiftingParam,
    op: &dyn AlgebraicOp,
) -> Result<bool, EngineError> {
    param.validate(monad)?;
    let [(r, s)] = param.entries.as_slice() else {
        return Err(EngineError::NotSingleParam);
    };
    let alpha = op.component(monad, r);
    let power = power_object(op.arity(), s)?;
    Ok(is_morphism(&alpha, &power, s)?)
}

/// Whether `s` (above `T(pX)`) is closed with respect to `x`: the unit is a
/// morphism `x → s`, and for every `f : x → s` the Kleisli extension is a
/// morphism `s → s`.
pub fn is_closed(
    monad: &dyn FiniteMonad,
    x: &FibreObject,
    s: &FibreObject,
) -> Result<bool, EngineError> {
    let tx = monad.apply_t(x.carrier());
    if s.carrier() != &tx {
        return Err(EngineError::Fibre(FibreError::CarrierMismatch(format!(
            "closed-object candidate lies above {:?}, expected {:?}",
            s.carrier(),
            tx
        ))));
    }
    let unit = monad.unit(x.carrier());
    if !is_morphism(&unit, x, s)? {
        return Ok(false);
    }
    for f in hom_enumerate(x, s)? {
        let kf = monad.kleisli(&f);
        if !is_morphism(&kf, s, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Evaluates the single-parameter lifting seeded by a closed object:
/// `phi(x, s, y) = lift_(pX, s)(y)`. Errors unless `s` is closed for `x`.
pub fn phi(
    monad: &dyn FiniteMonad,
    x: &FibreObject,
    s: &FibreObject,
    y: &FibreObject,
) -> Result<FibreObject, EngineError> {
    if !is_closed(monad, x, s)? {
        return Err(EngineError::NotClosed);
    }
    let param = LiftingParam::single(x.carrier().clone(), s.clone());
    Ok(codensity_lift(monad, &param, y)?.result)
}

/// Convenience: all preorders (as fibre objects) on carriers of size ≤ n,
/// over canonically named atoms.
pub fn all_preorders_up_to(n: usize) -> Vec<FibreObject> {
    let names = ["p0", "p1", "p2", "p3"];
    let mut out = Vec::new();
    for size in 0..=n {
        let carrier = FinSet::of(&names[..size]);
        out.extend(
            Preorder::enumerate_all(&carrier)
                .into_iter()
                .map(FibreObject::Pre),
        );
    }
    out
}

/// All topologies on carriers of size ≤ n.
pub fn all_topologies_up_to(n: usize) -> Vec<FibreObject> {
    let names = ["p0", "p1", "p2", "p3"];
    let mut out = Vec::new();
    for size in 0..=n {
        let carrier = FinSet::of(&names[..size]);
        out.extend(
            Topology::enumerate_all(&carrier)
                .into_iter()
                .map(FibreObject::Top),
        );
    }
    out
}

/// All predicates on carriers of size ≤ n.
pub fn all_predicates_up_to(n: usize) -> Vec<FibreObject> {
    let names = ["p0", "p1", "p2", "p3"];
    let mut out = Vec::new();
    for size in 0..=n {
        let carrier = FinSet::of(&names[..size]);
        for bits in 0..(1u64 << size) {
            out.push(FibreObject::Pred(Subset::from_mask(
                carrier.clone(),
                Mask::from_bits(size, bits),
            )));
        }
    }
    out
}

/// Engine-vs-closed-form comparison battery over all objects with carriers
/// of size ≤ `max_points`.
pub fn engine_matches_closed_forms(
    monad: &dyn FiniteMonad,
    max_points: usize,
) -> LawReport {
    let mut report = LawReport::new("engine vs closed forms".to_string());
    let pre_samples = all_preorders_up_to(max_points);
    let top_samples = all_topologies_up_to(max_points);
    for kind in [
        ClosedFormKind::LowerPre,
        ClosedFormKind::UpperPre,
        ClosedFormKind::ConvexPre,
        ClosedFormKind::LowerVietoris,
        ClosedFormKind::UpperVietoris,
    ] {
        let samples = if kind.expected_tag() == Tag::Pre {
            &pre_samples
        } else {
            &top_samples
        };
        let param = builtin_param(monad, kind);
        let mut check = LawCheck::pass(kind.name());
        for x in samples {
            let engine = match codensity_lift(monad, &param, x) {
                Ok(l) => l.result,
                Err(e) => {
                    check = LawCheck::fail(kind.name(), format!("engine failed on {x:?}: {e}"));
                    break;
                }
            };
            let closed = match closed_form_lift(kind, x) {
                Ok(c) => c,
                Err(e) => {
                    check = LawCheck::fail(kind.name(), format!("closed form failed on {x:?}: {e}"));
                    break;
                }
            };
            if engine != closed {
                check = LawCheck::fail(
                    kind.name(),
                    format!("disagreement at {x:?}: engine {engine:?} vs closed {closed:?}"),
                );
                break;
            }
        }
        report.push(check);
    }
    report
}
