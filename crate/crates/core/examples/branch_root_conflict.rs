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


//! Prints the first conflict of the unconstrained root and the constraints
//! each branching rule derives from it.
//!
//! `cargo run --example branch_root_conflict`

use mapfr::testsuite::{junction, junction_root_plans};
use mapfr::{branch, find_first_conflict, BranchingRule};

fn main() {
    let inst = junction();
    let root = junction_root_plans(&inst);
    let c = find_first_conflict(&inst, &root)
        .expect("geometry")
        .expect("conflict");
    println!("conflict {}", c.describe(&inst));
    println!("collision interval {}", c.collision);
    if let Some(bar) = c.intersection {
        println!("intersection interval {bar}");
    }
    for rule in [
        BranchingRule::Theoretical,
        BranchingRule::Standard,
        BranchingRule::default(),
    ] {
        println!("{rule}:");
        match branch(rule, &inst, &c) {
            Ok(out) => {
                for x in out.for_first.iter().chain(&out.for_second) {
                    println!("  {}", x.dump(&inst));
                }
            }
            Err(e) => println!("  {e}"),
        }
    }
}
