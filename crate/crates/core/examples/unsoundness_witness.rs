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


//! Shows that the standard split of a finite-wait conflict forbids a pair of
//! actions that never collide.
//!
//! `cargo run --example unsoundness_witness`

use mapfr::branching::{branch, unsoundness_witness, BranchingRule};
use mapfr::geometry::collides;
use mapfr::testsuite::witness_fixture;
use mapfr::find_first_conflict;

fn main() {
    let (inst, joint) = witness_fixture();
    let c = find_first_conflict(&inst, &joint)
        .expect("geometry")
        .expect("conflict");
    println!("conflict {} I^c={}", c.describe(&inst), c.collision);
    let out = branch(BranchingRule::Standard, &inst, &c).expect("branch");
    for x in out.for_first.iter().chain(&out.for_second) {
        println!("  {}", x.dump(&inst));
    }
    match unsoundness_witness(&inst, &c, &out) {
        Ok(Some((m, w))) => {
            let (ri, rj) = (inst.agent(c.first.agent).radius, inst.agent(c.second.agent).radius);
            println!("witness move {} wait {}", m.describe(&inst), w.describe(&inst));
            println!("collide: {}", collides(&inst, &m, ri, &w, rj));
        }
        Ok(None) => println!("no witness"),
        Err(e) => println!("error: {e}"),
    }
}
