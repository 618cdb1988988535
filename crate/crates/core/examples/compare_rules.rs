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


//! Runs all three branching rules on the same instance and prints a table.
//!
//! `cargo run --example compare_rules [instance.json]`

use std::time::Duration;

use mapfr::io::load_instance;
use mapfr::search::{compare, render_table};
use mapfr::testsuite::junction;
use mapfr::{BranchingRule, Objective};

fn main() {
    let inst = match std::env::args().nth(1) {
        Some(path) => load_instance(&path).unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(1);
        }),
        None => junction(),
    };
    let rules = [
        BranchingRule::Theoretical,
        BranchingRule::Standard,
        BranchingRule::default(),
    ];
    let rows = compare(
        &inst,
        &rules,
        Objective::SumOfCosts,
        100_000,
        Duration::from_secs(30),
    );
    print!("{}", render_table(&rows));
}
