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


//! Plans a single agent under hand-written motion and vertex constraints.
//!
//! `cargo run --example csipp_plan`

use mapfr::testsuite::junction;
use mapfr::{plan_agent, AgentId, Constraint, ConstraintSet, Interval};

fn main() {
    let inst = junction();
    let v = |n: &str| inst.vertex_by_name(n).expect("vertex");
    let ef = inst.find_move(v("E"), v("F"), 1.5).expect("EF");
    let agent = AgentId(0);
    let mut cs = ConstraintSet::new();
    for c in [
        Constraint::Motion {
            agent,
            mv: ef,
            interval: Interval::new(0.0, 0.5).expect("interval"),
        },
        Constraint::Vertex {
            agent,
            vertex: v("F"),
            interval: Interval::new(2.0, 2.5).expect("interval"),
        },
    ] {
        cs.push(c);
        print!("{}", cs.dump(&inst));
        match plan_agent(&inst, agent, &cs) {
            Some(p) => {
                let steps: Vec<String> = p.actions.iter().map(|a| a.describe(&inst)).collect();
                println!("  -> {} (duration {:.3})", steps.join(" "), p.duration());
            }
            None => println!("  -> infeasible"),
        }
    }
}
