// Copyright (C) 2026 The mapfr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Continuous-time multi-agent path finding for disc-shaped agents moving
//! along straight graph edges at constant speed.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] – instances, timed actions, plans, objectives and plan validity.
//! * [`constraints`] – exact half-open interval sets and motion / vertex
//!   constraints expressed as permitted-time sets.
//! * [`geometry`] – collision intervals between pairs of timed actions,
//!   intersection intervals and unsafe intervals.
//! * [`conflicts`] – conflict detection and deterministic selection.
//! * [`csipp`] – constrained safe-interval path planning for one agent.
//! * [`branching`] – the three branching rules and the unsoundness witness.
//! * [`search`] – the high-level constraint-tree search.
//! * [`oracle`] – an exact joint-plan validator and a discretized
//!   brute-force optimal solver for tiny instances.
//! * [`io`] and [`svg`] – JSON file formats and static SVG figures.
//! * [`cli`] – the `mapfr` command line.
//! * [`testsuite`] – seeded random instance generation and property suites.

pub mod branching;
pub mod cli;
pub mod conflicts;
pub mod constraints;
pub mod csipp;
pub mod geometry;
pub mod io;
pub mod model;
pub mod oracle;
pub mod search;
pub mod svg;
pub mod testsuite;

pub use branching::{branch, BranchOutcome, BranchingRule};
pub use conflicts::{find_first_conflict, is_solution, Conflict, ConflictKind};
pub use constraints::{Constraint, ConstraintSet, Interval, IntervalSet};
pub use csipp::plan as plan_agent;
pub use model::{
    Action, Agent, AgentId, Instance, JointPlan, MoveAction, MoveId, Objective, Plan, Point2,
    TimedAction, Vertex, VertexId,
};
pub use search::{solve, SolveResult, SolveStatus, SolverConfig};
