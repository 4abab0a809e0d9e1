//! Closed-form bounds on the disturbance scaling beyond which a constrained
//! linear system admits no robust control invariant set, an exact planar
//! reachability oracle to check them against, and a greedy attack that
//! realizes the bound.

pub mod attack;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod oracle;
pub mod presets;
pub mod sets;
pub mod spectral;
pub mod system;
