//! Optimin analysis: worst-case payoffs of agreements under profitable
//! deviations, Pareto-optimized, for noncooperative, cooperative, matching,
//! decision and zero-sum games. All arithmetic is exact.

pub mod coop;
pub mod decisions;
pub mod error;
pub mod game;
pub mod generators;
pub mod io;
pub mod lp;
pub mod matching;
pub mod noncoop;
pub mod pareto;
pub mod rational;
pub mod selftest;
pub mod zerosum;

pub use error::{Error, Result};
pub use game::{MixedProfile, NormalFormGame, PureProfile, ValueVector};
pub use rational::Rational;
