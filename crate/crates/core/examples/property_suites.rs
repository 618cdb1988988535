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


//! Runs the seeded cross-module suites and prints one line per check.
//!
//! `cargo run --release --example property_suites -- [base-seed]`

use mapfr::testsuite::{run_property_suites, SuiteConfig};

fn main() {
    let base_seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let report = run_property_suites(&SuiteConfig {
        base_seed,
        ..SuiteConfig::default()
    });
    print!("{}", report.text());
    let failed = report.failures().count();
    println!("{} checks, {} failed", report.entries.len(), failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
