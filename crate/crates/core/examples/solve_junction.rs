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


//! Solves the seven-vertex crossing instance with the sound rule and prints
//! each agent's timed actions.
//!
//! `cargo run --example solve_junction`

use mapfr::testsuite::junction;
use mapfr::{solve, SolverConfig};

fn main() {
    let inst = junction();
    let r = solve(&inst, &SolverConfig::default());
    println!("status {} expanded {}", r.status, r.stats.expanded);
    let Some(sol) = r.solution else {
        return;
    };
    for p in &sol.plans {
        let steps: Vec<String> = p.actions.iter().map(|a| a.describe(&inst)).collect();
        println!("agent {}: {}", inst.agent(p.agent).name, steps.join(" "));
    }
    println!("sum of costs {:.3} makespan {:.3}", sol.sum_of_costs(), sol.makespan());
}
