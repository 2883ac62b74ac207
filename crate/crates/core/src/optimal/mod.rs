//! MDT-optimal and sample-optimal schedules via integer programs.

mod lp;
mod model;
mod solver;

pub use lp::{export_lp, write_lp};
pub use model::{
    build_mdtopt, build_sample_mdt, build_sample_wdt, default_mdtopt_horizon, Constraint, Entity, HorizonRule,
    IlpModel, ObjectiveKind, Relation, Var,
};
pub use solver::{lower_bound_after, solve_exact, Solution, SolveStatus, DEFAULT_NODE_LIMIT};
