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


//! Brackets the optimum of a small random instance with the grid oracle and
//! checks the sound-rule solver against it.
//!
//! `cargo run --release --example oracle_bracket [seed]`

use mapfr::oracle::brute_force_optimal;
use mapfr::testsuite::{gen_solvable_instance, two_agent_template, RandomInstanceSpec};
use mapfr::{solve, SolverConfig};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let eps = 0.05;
    let (inst, cert) = gen_solvable_instance(&RandomInstanceSpec {
        seed,
        ..two_agent_template()
    })
    .expect("instance");
    let horizon = cert.sum_of_costs() + 2.0 * eps + 1.0;
    let oracle = brute_force_optimal(&inst, eps, horizon).expect("oracle");
    let r = solve(&inst, &SolverConfig::default());
    let cost = r.cost.expect("solved");
    println!(
        "seed {seed}: solver {cost:.6}, oracle [{:.6}, {:.6}] after {} expansions",
        oracle.cost_lower, oracle.cost_upper, oracle.expanded
    );
    let inside = cost >= oracle.cost_lower - 1e-9 && cost <= oracle.cost_upper + 1e-9;
    println!("{}", if inside { "inside bracket" } else { "OUTSIDE bracket" });
}
