//! Iterative win-win algorithms built on Korten's reduction: the Σ2 stage
//! chain, the S2 selector tower, the majority derandomizer and the solvers.

mod chain;
mod derand;
mod family;
mod schedule;
mod solve;
mod tower;

pub use chain::{sigma2_decide, Enumeration, FactString, Level, Pi2, Sigma2Verifier, StageChain};
pub use derand::derand_majority;
pub use family::{family_by_name, DupFamily, Family, PseudorandomFamily};
pub use schedule::{
    epsilon_schedule, log2_big, schedule, Schedule, ScheduleConfig, Stage, StopRule, Track,
};
pub use solve::{
    solve_arbitrary, solve_uniform, ArbitrarySolution, Certificate, HardTableSource,
    McspHardTables, StageRecord, UniformConfig, UniformSolution,
};
pub use tower::{s2_chain_bit, SelectTower, TowerLevel, TowerView};
