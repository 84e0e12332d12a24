//! Circle orbits `x_{n+1} = x_n + α_{ω_{n+1}} (mod 1)` and their companion
//! counting sequences.

mod export;
mod generate;
mod reduced;
mod steps;
mod strategy;
mod tau;

pub use export::{read_binary, write_binary, write_csv, OrbitFile, MAGIC};
pub use generate::{generate_orbit, Orbit, MAX_ORBIT_LEN};
pub use reduced::{auto_shift, reduced_orbit, ReducedOrbit};
pub(crate) use steps::check_bits;
pub use steps::StepSystem;
pub use strategy::{greedy_avoid_strategy, CircleInterval, Strategy, GREEDY_CELL_BITS};
pub use tau::{tau_discrepancy, TauReport};
