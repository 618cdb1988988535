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


//! Runs the independent validator on the unconstrained root plans, which
//! collide, and on the optimal solution, which does not.
//!
//! `cargo run --example validate_solution`

use mapfr::oracle::validate_joint;
use mapfr::testsuite::{junction, junction_root_plans, junction_optimal_solution};

fn main() {
    let inst = junction();
    for (label, joint) in [
        ("root plans", junction_root_plans(&inst)),
        ("optimal solution", junction_optimal_solution(&inst)),
    ] {
        let report = validate_joint(&inst, &joint, None);
        println!("{label}: {report}");
        for line in report.lines(&inst) {
            println!("  {line}");
        }
    }
}
