//! Two-party spatial competition on a finite ordinal policy line, with
//! voters who abstain when neither platform is acceptable to them.
//!
//! The crate enumerates pure-strategy Nash equilibria, flags equilibria in
//! which the parties reverse their order or leapfrog each other, checks the
//! ordinal conditions on party preferences that rule leapfrogging out, and
//! runs seeded falsification campaigns over random instances.
//!
//! ```
//! use leapfrog_core::{equilibrium, io, model::Profile};
//!
//! let game = io::paper_example();
//! let eq = equilibrium::enumerate_equilibria(&game);
//! let rec = eq.iter().find(|r| r.profile == Profile::at(6, 2)).unwrap();
//! assert!(rec.mutual_leapfrog && rec.tied);
//! ```

pub mod election;
pub mod equilibrium;
pub mod io;
pub mod model;
pub mod preferences;
pub mod search;

pub use model::{Instance, Outcome, Party, Policy, Profile};
