//! Monads on finite sets with an explicitly enumerable action `T X`,
//! their Kleisli extension, and algebraic operations.
//!
//! The powerset monad represents `T X` by the canonical subset carrier:
//! the element at index `i` is the subset of `X` whose membership bits are
//! the binary digits of `i`. Index arithmetic therefore doubles as subset
//! arithmetic and no atom parsing is ever needed.

use crate::finset::{Atom, FinFun, FinSet, FunctionSpace};
use crate::report::{LawCheck, LawReport};
use std::fmt::Write as _;

/// A monad on finite carriers, presented as a Kleisli triple.
///
/// `kleisli` sends `f : X → T Y` to `f# : T X → T Y`; the multiplication is
/// recovered as `kleisli(identity on T X)`.
pub trait FiniteMonad {
    fn name(&self) -> &str;

    fn apply_t(&self, x: &FinSet) -> FinSet;

    /// The unit `X → T X` at carrier `x`.
    fn unit(&self, x: &FinSet) -> FinFun;

    /// The Kleisli extension of `f : X → T Y`.
    fn kleisli(&self, f: &FinFun) -> FinFun;
}

/// The finite powerset monad.
pub struct PowersetMonad;

/// Canonical carrier for `P(X)`: atom `i` names the subset of `x` with
/// membership mask `i`, so `{}` comes first and the full set last.
pub fn powerset_carrier(x: &FinSet) -> FinSet {
    assert!(x.len() < usize::BITS as usize, "carrier too large for powerset");
    let n = 1usize << x.len();
    let mut elements = Vec::with_capacity(n);
    for bits in 0..n {
        let mut name = String::from("{");
        let mut first = true;
        for (i, a) in x.atoms().iter().enumerate() {
            if bits & (1 << i) != 0 {
                if !first {
                    name.push(',');
                }
                let _ = write!(name, "{a}");
                first = false;
            }
        }
        name.push('}');
        elements.push(name);
    }
    FinSet::new(elements).expect("powerset atoms are distinct")
}

pub fn powerset_monad() -> PowersetMonad {
    PowersetMonad
}

impl FiniteMonad for PowersetMonad {
    fn name(&self) -> &str {
        "powerset"
    }

    fn apply_t(&self, x: &FinSet) -> FinSet {
        powerset_carrier(x)
    }

    fn unit(&self, x: &FinSet) -> FinFun {
        let t = self.apply_t(x);
        let images = (0..x.len()).map(|i| 1usize << i).collect();
        FinFun::new(x.clone(), t, images).expect("unit is total")
    }

    fn kleisli(&self, f: &FinFun) -> FinFun {
        // f : X → P(Y); indices of the codomain are membership masks over Y.
        assert!(
            f.cod().len().is_power_of_two(),
            "kleisli requires a powerset-shaped codomain"
        );
        let tdom = self.apply_t(f.dom());
        let images = (0..tdom.len())
            .map(|v| {
                let mut out = 0usize;
                for i in 0..f.dom().len() {
                    if v & (1 << i) != 0 {
                        out |= f.apply_index(i);
                    }
                }
                out
            })
            .collect();
        FinFun::new(tdom, f.cod().clone(), images).expect("kleisli is total")
    }
}

/// An `A`-ary algebraic operation: a family of maps `(A ⋔ T X) → T X`
/// natural in Kleisli morphisms.
pub trait AlgebraicOp {
    fn name(&self) -> &str;

    fn arity(&self) -> &FinSet;

    /// The component at carrier `x`, as a function on the materialised
    /// function space `A ⋔ T x`.
    fn component(&self, monad: &dyn FiniteMonad, x: &FinSet) -> FinFun;
}

/// `A`-indexed set union for the powerset monad.
pub struct UnionOp {
    arity: FinSet,
}

pub fn union_op(arity: FinSet) -> UnionOp {
    UnionOp { arity }
}

impl AlgebraicOp for UnionOp {
    fn name(&self) -> &str {
        "union"
    }

    fn arity(&self) -> &FinSet {
        &self.arity
    }

    fn component(&self, monad: &dyn FiniteMonad, x: &FinSet) -> FinFun {
        let tx = monad.apply_t(x);
        let space = FunctionSpace::new(&self.arity, &tx);
        let images = (0..space.len())
            .map(|g| space.decode(g).into_iter().fold(0usize, |acc, v| acc | v))
            .collect();
        FinFun::new(space.carrier().clone(), tx, images).expect("union is total")
    }
}

fn describe(f: &FinFun) -> String {
    format!("{f:?}")
}

/// Checks the three Kleisli-triple laws extensionally over the given
/// carriers, enumerating every `f : X → T Y` and `g : Y → T Z`.
pub fn verify_monad_laws(monad: &dyn FiniteMonad, carriers: &[FinSet]) -> LawReport {
    let mut report = LawReport::new(format!("monad laws for {}", monad.name()));

    // kleisli(unit) = identity
    let mut check = LawCheck::pass("kleisli(unit) = id");
    'law1: for x in carriers {
        let unit = monad.unit(x);
        let lifted = monad.kleisli(&unit);
        let id = FinFun::identity(&monad.apply_t(x));
        if lifted != id {
            check = LawCheck::fail(
                "kleisli(unit) = id",
                format!("carrier {x:?}: kleisli(unit) = {}", describe(&lifted)),
            );
            break 'law1;
        }
    }
    report.push(check);

    // kleisli(f) ∘ unit = f
    let mut check = LawCheck::pass("kleisli(f) ∘ unit = f");
    'law2: for x in carriers {
        for y in carriers {
            let unit = monad.unit(x);
            for f in crate::finset::enumerate_functions(x, &monad.apply_t(y)) {
                let composite = unit.then(&monad.kleisli(&f)).expect("types align");
                if composite != f {
                    check = LawCheck::fail(
                        "kleisli(f) ∘ unit = f",
                        format!("f = {}: composite = {}", describe(&f), describe(&composite)),
                    );
                    break 'law2;
                }
            }
        }
    }
    report.push(check);

    // kleisli(g) ∘ kleisli(f) = kleisli(kleisli(g) ∘ f)
    let mut check = LawCheck::pass("kleisli associativity");
    'law3: for x in carriers {
        for y in carriers {
            for z in carriers {
                for f in crate::finset::enumerate_functions(x, &monad.apply_t(y)) {
                    for g in crate::finset::enumerate_functions(y, &monad.apply_t(z)) {
                        let kg = monad.kleisli(&g);
                        let lhs = monad.kleisli(&f).then(&kg).expect("types align");
                        let rhs = monad.kleisli(&f.then(&kg).expect("types align"));
                        if lhs != rhs {
                            check = LawCheck::fail(
                                "kleisli associativity",
                                format!(
                                    "f = {}, g = {}: lhs = {}, rhs = {}",
                                    describe(&f),
                                    describe(&g),
                                    describe(&lhs),
                                    describe(&rhs)
                                ),
                            );
                            break 'law3;
                        }
                    }
                }
            }
        }
    }
    report.push(check);

    report
}

/// Checks naturality of `op` in Kleisli morphisms over the given carriers:
/// `kleisli(f) ∘ α_X = α_Y ∘ (A ⋔ kleisli(f))`.
pub fn verify_algop_naturality(
    monad: &dyn FiniteMonad,
    op: &dyn AlgebraicOp,
    carriers: &[FinSet],
) -> LawReport {
    let mut report = LawReport::new(format!("naturality of {}", op.name()));
    let mut check = LawCheck::pass("Kleisli naturality");
    'outer: for x in carriers {
        for y in carriers {
            let tx = monad.apply_t(x);
            let ty = monad.apply_t(y);
            let space_x = FunctionSpace::new(op.arity(), &tx);
            let space_y = FunctionSpace::new(op.arity(), &ty);
            let alpha_x = op.component(monad, x);
            let alpha_y = op.component(monad, y);
            for f in crate::finset::enumerate_functions(x, &ty) {
                let kf = monad.kleisli(&f);
                for g in 0..space_x.len() {
                    let lhs = kf.apply_index(alpha_x.apply_index(g));
                    let pushed: Vec<usize> = space_x
                        .decode(g)
                        .into_iter()
                        .map(|v| kf.apply_index(v))
                        .collect();
                    let rhs = alpha_y.apply_index(space_y.encode(&pushed));
                    if lhs != rhs {
                        check = LawCheck::fail(
                            "Kleisli naturality",
                            format!(
                                "f = {}, family = {}: lhs = {}, rhs = {}",
                                describe(&f),
                                space_x.carrier().atom(g),
                                ty.atom(lhs),
                                ty.atom(rhs)
                            ),
                        );
                        break 'outer;
                    }
                }
            }
        }
    }
    report.push(check);
    report
}

/// Decodes a powerset-carrier atom index into the member atoms of the base.
pub fn subset_atoms(base: &FinSet, index: usize) -> Vec<Atom> {
    (0..base.len())
        .filter(|i| index & (1 << i) != 0)
        .map(|i| base.atom(i).clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::Subset;

    #[test]
    fn powerset_carrier_size_and_unit() {
        let x = FinSet::of(&["a", "b"]);
        let m = powerset_monad();
        let tx = m.apply_t(&x);
        assert_eq!(tx.len(), 4);
        let unit = m.unit(&x);
        assert_eq!(unit.apply("a").unwrap(), "{a}");
    }

    #[test]
    fn kleisli_on_singletons_and_empty() {
        let x = FinSet::of(&["a"]);
        let y = FinSet::of(&["b", "c"]);
        let m = powerset_monad();
        let ty = m.apply_t(&y);
        // f(a) = {b,c}
        let f = FinFun::new(x.clone(), ty.clone(), vec![0b11]).unwrap();
        let kf = m.kleisli(&f);
        assert_eq!(kf.apply("{a}").unwrap(), "{b,c}");
        assert_eq!(kf.apply("{}").unwrap(), "{}");
    }

    #[test]
    fn union_component_basics() {
        let m = powerset_monad();
        let x = FinSet::of(&["x", "y"]);

        // unary union is the identity under the bijection A⋔TX ≅ TX
        let a1 = union_op(FinSet::of(&["a"]));
        let c1 = a1.component(&m, &x);
        for i in 0..4 {
            assert_eq!(c1.apply_index(i), i);
        }

        // binary: ({x},{y}) ↦ {x,y}
        let a2 = union_op(FinSet::of(&["a", "b"]));
        let c2 = a2.component(&m, &x);
        let space = FunctionSpace::new(a2.arity(), &m.apply_t(&x));
        let g = space.encode(&[0b01, 0b10]);
        assert_eq!(c2.cod().atom(c2.apply_index(g)), "{x,y}");
    }

    #[test]
    fn union_naturality_small() {
        let m = powerset_monad();
        let carriers = [FinSet::empty(), FinSet::of(&["x"]), FinSet::of(&["x", "y"])];
        for arity in [FinSet::of(&["a"]), FinSet::of(&["a", "b"])] {
            let op = union_op(arity);
            let report = verify_algop_naturality(&m, &op, &carriers);
            assert!(report.all_pass(), "{report}");
        }
    }

    #[test]
    fn monad_laws_pass_small() {
        let m = powerset_monad();
        let carriers = [FinSet::empty(), FinSet::of(&["x"]), FinSet::of(&["x", "y"])];
        let report = verify_monad_laws(&m, &carriers);
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn monad_laws_vacuous_on_empty_carrier_list() {
        let report = verify_monad_laws(&powerset_monad(), &[]);
        assert!(report.all_pass());
    }

    /// A deliberately broken monad: its Kleisli extension drops the highest
    /// element from any union of two or more results.
    struct LossyPowerset;

    impl FiniteMonad for LossyPowerset {
        fn name(&self) -> &str {
            "lossy-powerset"
        }
        fn apply_t(&self, x: &FinSet) -> FinSet {
            powerset_carrier(x)
        }
        fn unit(&self, x: &FinSet) -> FinFun {
            PowersetMonad.unit(x)
        }
        fn kleisli(&self, f: &FinFun) -> FinFun {
            let honest = PowersetMonad.kleisli(f);
            let images = (0..honest.dom().len())
                .map(|v| {
                    let u = honest.apply_index(v);
                    if (v.count_ones() as usize) >= 2 && u != 0 {
                        u & !(1 << (usize::BITS - 1 - u.leading_zeros()))
                    } else {
                        u
                    }
                })
                .collect();
            FinFun::new(honest.dom().clone(), honest.cod().clone(), images).unwrap()
        }
    }

    #[test]
    fn broken_kleisli_is_detected_with_witness() {
        let carriers = [FinSet::of(&["x", "y"])];
        let report = verify_monad_laws(&LossyPowerset, &carriers);
        assert!(!report.all_pass());
        let failing: Vec<_> = report.failures().collect();
        assert!(!failing.is_empty());
        assert!(failing.iter().all(|c| c.witness.is_some()));
    }

    #[test]
    fn kleisli_is_monotone_for_powerset() {
        let m = powerset_monad();
        let x = FinSet::of(&["a", "b"]);
        let y = FinSet::of(&["c", "d"]);
        let ty = m.apply_t(&y);
        for f in crate::finset::enumerate_functions(&x, &ty) {
            let kf = m.kleisli(&f);
            let tx = m.apply_t(&x);
            for v in 0..tx.len() {
                for w in 0..tx.len() {
                    if v & w == v {
                        // v ⊆ w as masks
                        let fv = kf.apply_index(v);
                        let fw = kf.apply_index(w);
                        assert_eq!(fv & fw, fv, "kleisli not monotone");
                    }
                }
            }
        }
    }

    #[test]
    fn subset_atom_decoding() {
        let x = FinSet::of(&["a", "b", "c"]);
        assert_eq!(subset_atoms(&x, 0b101), vec!["a".to_string(), "c".to_string()]);
        let s = Subset::from_atoms(&x, ["a", "c"]).unwrap();
        assert_eq!(s.members().cloned().collect::<Vec<_>>(), subset_atoms(&x, 0b101));
    }
}
