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

//! Static SVG figures of an instance and, optionally, a joint plan.

use std::fmt::Write;

use crate::model::{Instance, JointPlan, Point2};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    /// Pixels per metre.
    pub scale: f64,
    pub margin: f64,
    /// Spacing of time-stamped position markers; `None` disables them.
    pub marker_step: Option<f64>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            scale: 120.0,
            margin: 60.0,
            marker_step: Some(0.5),
        }
    }
}

struct Frame {
    min: Point2,
    height: f64,
    scale: f64,
    margin: f64,
}

impl Frame {
    fn px(&self, p: Point2) -> (f64, f64) {
        (
            self.margin + (p.x - self.min.x) * self.scale,
            self.margin + self.height - (p.y - self.min.y) * self.scale,
        )
    }
}

/// Renders the graph, the agents' start discs and, when `joint` is given,
/// one coloured polyline per agent plus position markers.
pub fn render(instance: &Instance, joint: Option<&JointPlan>, opts: &SvgOptions) -> String {
    let pts: Vec<Point2> = instance.vertices().iter().map(|v| v.coord).collect();
    let fold = |f: fn(f64, f64) -> f64, init: f64, get: fn(&Point2) -> f64| {
        pts.iter().map(get).fold(init, f)
    };
    let (min_x, max_x) = (fold(f64::min, f64::INFINITY, |p| p.x), fold(f64::max, f64::NEG_INFINITY, |p| p.x));
    let (min_y, max_y) = (fold(f64::min, f64::INFINITY, |p| p.y), fold(f64::max, f64::NEG_INFINITY, |p| p.y));
    let (min_x, max_x, min_y, max_y) = if pts.is_empty() {
        (0.0, 1.0, 0.0, 1.0)
    } else {
        (min_x, max_x, min_y, max_y)
    };
    let frame = Frame {
        min: Point2::new(min_x, min_y),
        height: (max_y - min_y) * opts.scale,
        scale: opts.scale,
        margin: opts.margin,
    };
    let width = (max_x - min_x) * opts.scale + 2.0 * opts.margin;
    let height = frame.height + 2.0 * opts.margin;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let _ = writeln!(s, r##"<g class="edges" stroke="#999" stroke-width="2">"##);
    for m in instance.moves() {
        // draw each undirected pair once
        if m.from.index() > m.to.index()
            && instance
                .moves()
                .iter()
                .any(|o| o.from == m.to && o.to == m.from)
        {
            continue;
        }
        let (x1, y1) = frame.px(instance.coord(m.from));
        let (x2, y2) = frame.px(instance.coord(m.to));
        let _ = writeln!(s, r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#);
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="vertices">"#);
    for v in instance.vertices() {
        let (x, y) = frame.px(v.coord);
        let _ = writeln!(
            s,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="6" fill="#333"/><text x="{:.2}" y="{:.2}" font-size="14" font-family="sans-serif">{}</text>"##,
            x + 8.0,
            y - 8.0,
            escape(&v.name)
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g class="agents" fill-opacity="0.15">"#);
    for (i, a) in instance.agents().iter().enumerate() {
        let (x, y) = frame.px(instance.coord(a.start));
        let _ = writeln!(
            s,
            r#"<circle class="start" cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="{}"/>"#,
            a.radius * opts.scale,
            PALETTE[i % PALETTE.len()]
        );
    }
    let _ = writeln!(s, "</g>");

    if let Some(joint) = joint {
        let _ = writeln!(s, r#"<g class="paths" fill="none" stroke-width="3">"#);
        for (i, p) in joint.plans.iter().enumerate() {
            let colour = PALETTE[i % PALETTE.len()];
            let mut points = vec![frame.px(instance.coord(instance.agent(p.agent).start))];
            for ta in p.moves() {
                points.push(frame.px(instance.coord(ta.to_vertex(instance))));
            }
            let list: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                s,
                r#"<polyline class="path" stroke="{colour}" points="{}"/>"#,
                list.join(" ")
            );
        }
        let _ = writeln!(s, "</g>");
        if let Some(step) = opts.marker_step.filter(|s| *s > 0.0) {
            let end = joint.makespan();
            let _ = writeln!(s, r#"<g class="markers" font-size="9" font-family="sans-serif">"#);
            for (i, p) in joint.plans.iter().enumerate() {
                let colour = PALETTE[i % PALETTE.len()];
                let mut k = 0usize;
                loop {
                    let t = k as f64 * step;
                    if t > end + 1e-12 {
                        break;
                    }
                    let (x, y) = frame.px(p.position_at(instance, t));
                    let _ = writeln!(
                        s,
                        r#"<circle class="marker" cx="{x:.2}" cy="{y:.2}" r="3" fill="{colour}"><title>t={t:.2}</title></circle>"#
                    );
                    k += 1;
                }
            }
            let _ = writeln!(s, "</g>");
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
