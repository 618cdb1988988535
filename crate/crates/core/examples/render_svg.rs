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


//! Writes an SVG of the crossing instance with its optimal solution.
//!
//! `cargo run --example render_svg > fig.svg`

use mapfr::svg::{render, SvgOptions};
use mapfr::testsuite::{junction, junction_optimal_solution};

fn main() {
    let inst = junction();
    let sol = junction_optimal_solution(&inst);
    print!("{}", render(&inst, Some(&sol), &SvgOptions::default()));
}
