//! Crowd selection for diversity of opinion.
//!
//! Two selection models are provided:
//!
//! * [`smodel`]: similarity-driven selection, maximizing the negated average
//!   pairwise similarity of a size-k crowd (exact enumeration and greedy
//!   hill climbing).
//! * [`tmodel`]: task-driven selection, maximizing the probability that a
//!   size-k crowd contains at least `theta1` positive and `theta0` negative
//!   opinions. The positive count follows a Poisson-Binomial law whose exact
//!   and approximate window probabilities live in [`pbd`].
//!
//! [`profile`] builds similarity matrices from worker profiles and
//! bag-of-words experience, [`bench`] runs seeded synthetic experiments and
//! [`io`] parses the on-disk formats used by the command-line front end.

pub mod bench;
pub mod error;
pub mod io;
pub mod pbd;
pub mod profile;
pub mod seed;
pub mod smodel;
pub mod tmodel;

pub use error::{Error, Result};
