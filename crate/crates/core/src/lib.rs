//! Finite-scale liftings of monads along posetal fibrations.
//!
//! The crate turns the meet-of-inverse-images lifting formula into an
//! executable engine over finite carriers: given a monad on finite sets and
//! a lifting parameter `(R, S)` with `S` sitting above `T R`, it computes
//! the lifted structure above `T X` for preorders, topologies, predicates,
//! relations and pseudometrics, and checks the lifting laws extensionally.
//! On top of the engine sit decidable simulation/bisimulation oracles for
//! finite labelled Markov processes, an exact-rational Kantorovich distance
//! solver, and the dual density lifting of comonads (product and stream).

pub mod codensity;
pub mod density;
pub mod fibration;
pub mod finset;
pub mod giry;
pub mod kantorovich;
pub mod measurable;
pub mod monad;
pub mod report;
pub mod util;

pub use util::rational::{ExtQ, Q};
