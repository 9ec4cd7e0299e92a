//! Density lifting of comonads along the subobject cofibration: the
//! product comonad (fully finite) and the stream comonad on the decidable
//! fragment of eventually periodic streams.

pub mod lasso;

pub use lasso::{Lasso, LassoError};

use crate::finset::{enumerate_functions, FinSet, Subset};
use crate::report::{LawCheck, LawReport};
use crate::util::mask::Mask;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error(transparent)]
    Lasso(#[from] LassoError),
}

/// Lifted predicate of the product comonad (`D I = I × A`) by the theorem
/// formula: member set `X₀ × S₀[R]`, where `S₀[R]` projects the parameter
/// to its `A`-components.
pub fn product_density_lift(
    a: &FinSet,
    r: &FinSet,
    s: &Subset,
    x: &Subset,
) -> Result<Subset, DensityError> {
    let ra = r.product(a);
    if s.ambient() != &ra {
        return Err(DensityError::AmbientMismatch(format!(
            "parameter predicate over {:?}, expected the product {:?}",
            s.ambient(),
            ra
        )));
    }
    // S₀[R] ⊆ A
    let mut proj = Mask::empty(a.len());
    for k in s.mask().ones() {
        let (_, ai) = r.unpair_index(a, k);
        proj.insert(ai);
    }
    let ambient = x.ambient().product(a);
    let mut members = Mask::empty(ambient.len());
    for i in x.mask().ones() {
        for ai in proj.ones() {
            members.insert(x.ambient().pair_index(a, i, ai));
        }
    }
    Ok(Subset::from_mask(ambient, members))
}

/// The same lifted predicate by direct enumeration of the defining
/// formula: the co-Kleisli images `(f(i,b), b)` of parameter members under
/// every predicate morphism `f : (S₀, R×A) → (X₀, X₁)`.
pub fn product_density_lift_enumerate(
    a: &FinSet,
    r: &FinSet,
    s: &Subset,
    x: &Subset,
) -> Result<Subset, DensityError> {
    let ra = r.product(a);
    if s.ambient() != &ra {
        return Err(DensityError::AmbientMismatch(format!(
            "parameter predicate over {:?}, expected the product {:?}",
            s.ambient(),
            ra
        )));
    }
    let ambient = x.ambient().product(a);
    let mut members = Mask::empty(ambient.len());
    for f in enumerate_functions(&ra, x.ambient()) {
        let preserves = s.mask().ones().all(|k| x.mask().contains(f.apply_index(k)));
        if !preserves {
            continue;
        }
        for k in s.mask().ones() {
            let (_, ai) = r.unpair_index(a, k);
            members.insert(x.ambient().pair_index(a, f.apply_index(k), ai));
        }
    }
    Ok(Subset::from_mask(ambient, members))
}

/// A single lifting parameter for the stream comonad: a base alphabet and
/// a finite set of canonical lassos over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamParam {
    alphabet: FinSet,
    lassos: BTreeSet<Lasso>,
}

impl StreamParam {
    pub fn new(alphabet: FinSet, lassos: Vec<Lasso>) -> Result<StreamParam, DensityError> {
        for l in &lassos {
            if l.alphabet() != &alphabet {
                return Err(DensityError::AmbientMismatch(
                    "parameter lasso over a different alphabet".to_string(),
                ));
            }
        }
        Ok(StreamParam {
            alphabet,
            lassos: lassos.into_iter().collect(),
        })
    }

    pub fn alphabet(&self) -> &FinSet {
        &self.alphabet
    }

    pub fn lassos(&self) -> impl Iterator<Item = &Lasso> {
        self.lassos.iter()
    }

    pub fn contains(&self, l: &Lasso) -> bool {
        self.lassos.contains(l)
    }
}

/// Decides membership of an eventually periodic stream in the lifted
/// predicate of the stream comonad, via the characterisation: some
/// parameter stream `v` must satisfy
///
/// 1. whenever a tail `v/i` is again a parameter stream, `x(i)` is a
///    member, and
/// 2. whenever two tails of `v` agree, the corresponding letters of `x`
///    agree.
///
/// Both universal conditions are decided exactly at the joint bound of the
/// two lassos: beyond the longest prefix, all tails repeat with the least
/// common cycle period.
pub fn stream_density_member(
    param: &StreamParam,
    x_pred: &Subset,
    x: &Lasso,
) -> Result<bool, DensityError> {
    if x.alphabet() != x_pred.ambient() {
        return Err(DensityError::AmbientMismatch(
            "stream alphabet differs from the predicate ambient".to_string(),
        ));
    }
    for v in param.lassos() {
        let bound = v.joint_bound(x);
        let cond1 = (0..bound).all(|i| !param.contains(&v.tail(i)) || x_pred.mask().contains(x.at(i)));
        if !cond1 {
            continue;
        }
        let cond2 = (0..bound).all(|m| {
            (m + 1..bound).all(|n| v.tail(m) != v.tail(n) || x.at(m) == x.at(n))
        });
        if cond2 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Dual law for the counit of the stream comonad on the lifted predicate:
/// members evaluate at position 0 into the base predicate.
pub fn stream_counit_law(
    param: &StreamParam,
    x_pred: &Subset,
    x: &Lasso,
) -> Result<bool, DensityError> {
    if stream_density_member(param, x_pred, x)? {
        Ok(x_pred.mask().contains(x.at(0)))
    } else {
        Ok(true)
    }
}

/// Dual law for the comultiplication: if `x` is a member, the stream of
/// tails `m ↦ x/m` must be a member of the twice-lifted predicate. The
/// outer membership is decided by the same characterisation, with inner
/// membership queries for the tails.
pub fn stream_comultiplication_law(
    param: &StreamParam,
    x_pred: &Subset,
    x: &Lasso,
) -> Result<bool, DensityError> {
    if !stream_density_member(param, x_pred, x)? {
        return Ok(true);
    }
    for v in param.lassos() {
        let bound = v.joint_bound(x);
        let mut cond1 = true;
        for i in 0..bound {
            if param.contains(&v.tail(i)) && !stream_density_member(param, x_pred, &x.tail(i))? {
                cond1 = false;
                break;
            }
        }
        if !cond1 {
            continue;
        }
        let cond2 = (0..bound).all(|m| {
            (m + 1..bound).all(|n| v.tail(m) != v.tail(n) || x.tail(m) == x.tail(n))
        });
        if cond2 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exhaustive product-comonad battery: over all predicates with ambient of
/// size ≤ `max_x`, arities ≤ `max_a`, parameter carriers ≤ `max_r` and all
/// parameter predicates, the theorem formula agrees with the direct
/// enumeration, the counit maps lifted members to members, and the
/// comultiplication maps lifted members to twice-lifted members.
pub fn product_comonad_laws(max_x: usize, max_a: usize, max_r: usize) -> LawReport {
    let mut report = LawReport::new("product comonad laws".to_string());
    let x_names = ["x0", "x1"];
    let a_names = ["a0", "a1"];
    let r_names = ["r0", "r1"];
    assert!(max_x <= 2 && max_a <= 2 && max_r <= 2, "exhaustive battery is sized for ≤ 2");

    let mut formula = LawCheck::pass("theorem formula = direct enumeration");
    let mut counit = LawCheck::pass("counit maps lifted members to members");
    let mut comult = LawCheck::pass("comultiplication maps lifted members to twice-lifted members");

    'outer: for nx in 0..=max_x {
        for na in 0..=max_a {
            for nr in 0..=max_r {
                let xc = FinSet::of(&x_names[..nx]);
                let ac = FinSet::of(&a_names[..na]);
                let rc = FinSet::of(&r_names[..nr]);
                let ra = rc.product(&ac);
                for s_bits in 0..(1u64 << ra.len()) {
                    let s = Subset::from_mask(ra.clone(), Mask::from_bits(ra.len(), s_bits));
                    for x_bits in 0..(1u64 << nx) {
                        let x = Subset::from_mask(xc.clone(), Mask::from_bits(nx, x_bits));
                        let lifted = product_density_lift(&ac, &rc, &s, &x).unwrap();
                        let direct = product_density_lift_enumerate(&ac, &rc, &s, &x).unwrap();
                        if lifted != direct {
                            formula = LawCheck::fail(
                                "theorem formula = direct enumeration",
                                format!("A={ac:?} R={rc:?} S={s:?} X={x:?}: {lifted:?} vs {direct:?}"),
                            );
                            break 'outer;
                        }
                        // counit (i,a) ↦ i
                        for k in lifted.mask().ones() {
                            let (i, _) = xc.unpair_index(&ac, k);
                            if !x.mask().contains(i) {
                                counit = LawCheck::fail(
                                    "counit maps lifted members to members",
                                    format!("member {k} of {lifted:?} leaves {x:?}"),
                                );
                                break 'outer;
                            }
                        }
                        // comultiplication (i,a) ↦ ((i,a),a)
                        let twice = product_density_lift(&ac, &rc, &s, &lifted).unwrap();
                        for k in lifted.mask().ones() {
                            let (_, ai) = xc.unpair_index(&ac, k);
                            let kk = lifted.ambient().pair_index(&ac, k, ai);
                            if !twice.mask().contains(kk) {
                                comult = LawCheck::fail(
                                    "comultiplication maps lifted members to twice-lifted members",
                                    format!("member {k} of {lifted:?} not doubled in {twice:?}"),
                                );
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
    }
    report.push(formula);
    report.push(counit);
    report.push(comult);
    report
}

/// Sampled stream-comonad battery over the given parameter, base
/// predicate, and candidate streams.
pub fn stream_comonad_laws(
    param: &StreamParam,
    x_pred: &Subset,
    candidates: &[Lasso],
) -> LawReport {
    let mut report = LawReport::new("stream comonad laws".to_string());
    let mut counit = LawCheck::pass("counit maps lifted members to members");
    let mut comult = LawCheck::pass("comultiplication maps lifted members to twice-lifted members");
    for x in candidates {
        match stream_counit_law(param, x_pred, x) {
            Ok(true) => {}
            Ok(false) => {
                counit = LawCheck::fail(
                    "counit maps lifted members to members",
                    format!("candidate {}", x.display()),
                );
                break;
            }
            Err(e) => {
                counit = LawCheck::fail("counit maps lifted members to members", e.to_string());
                break;
            }
        }
    }
    for x in candidates {
        match stream_comultiplication_law(param, x_pred, x) {
            Ok(true) => {}
            Ok(false) => {
                comult = LawCheck::fail(
                    "comultiplication maps lifted members to twice-lifted members",
                    format!("candidate {}", x.display()),
                );
                break;
            }
            Err(e) => {
                comult = LawCheck::fail(
                    "comultiplication maps lifted members to twice-lifted members",
                    e.to_string(),
                );
                break;
            }
        }
    }
    report.push(counit);
    report.push(comult);
    report
}
