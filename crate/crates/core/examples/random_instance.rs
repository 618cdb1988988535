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


//! Prints a seeded random instance as JSON, ready for the command line tool.
//!
//! `cargo run --example random_instance -- [seed] [agents] > inst.json`

use mapfr::io::instance_to_json;
use mapfr::testsuite::{gen_instance, RandomInstanceSpec};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);
    let agents = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let spec = RandomInstanceSpec {
        seed,
        agents,
        ..RandomInstanceSpec::default()
    };
    match gen_instance(&spec) {
        Ok(inst) => print!("{}", instance_to_json(&inst)),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
