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

//! Constrained safe interval path planning.
//!
//! States are `(vertex, safe interval)` pairs reached at some arrival time,
//! split by whether the agent may end its plan there.
//! For every outgoing move the permitted departure set is
//!
//! ```text
//! [arrival, end of safe interval) ∩ permitted move starts ∩ (permitted target times − duration)
//! ```
//!
//! and one successor is generated per maximal interval of that set, departing
//! at the interval's start.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::constraints::{Constraint, ConstraintSet, Interval, IntervalSet};
use crate::model::{Action, AgentId, Instance, MoveId, Plan, TimedAction, VertexId, EPS};

/// Step by which a departure is delayed when the wait preceding it is
/// forbidden by an exact-duration wait constraint.
pub const WAIT_NUDGE: f64 = 1e-6;
const MAX_NUDGES: usize = 64;

/// Lower bounds on the remaining duration to the goal, per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Heuristic {
    pub to_goal: Vec<f64>,
}

impl Heuristic {
    pub fn get(&self, v: VertexId) -> f64 {
        self.to_goal[v.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    f: f64,
    g: f64,
    vertex: usize,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // max-heap: smallest f first, then larger g, then smaller vertex id
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.total_cmp(&other.g))
            .then(other.vertex.cmp(&self.vertex))
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact unconstrained shortest duration to the agent's goal from every
/// vertex, over minimum move durations. Unreachable vertices map to `+inf`.
pub fn build_heuristic(instance: &Instance, agent: AgentId) -> Heuristic {
    let n = instance.vertices().len();
    let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for m in instance.moves() {
        incoming[m.to.index()].push((m.from.index(), m.duration));
    }
    let mut dist = vec![f64::INFINITY; n];
    let goal = instance.agent(agent).goal.index();
    dist[goal] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Entry {
        f: 0.0,
        g: 0.0,
        vertex: goal,
        node: 0,
    });
    while let Some(Entry { f, vertex, .. }) = heap.pop() {
        if f > dist[vertex] {
            continue;
        }
        for &(u, d) in &incoming[vertex] {
            let nd = f + d;
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(Entry {
                    f: nd,
                    g: 0.0,
                    vertex: u,
                    node: 0,
                });
            }
        }
    }
    Heuristic { to_goal: dist }
}

/// Permitted-time tables of one agent under one constraint set.
struct Tables<'a> {
    vertex: HashMap<VertexId, IntervalSet>,
    motion: HashMap<MoveId, IntervalSet>,
    waits: Vec<(VertexId, f64, Interval)>,
    all: &'a IntervalSet,
}

impl<'a> Tables<'a> {
    fn new(agent: AgentId, cs: &ConstraintSet, all: &'a IntervalSet) -> Self {
        let mut vf: HashMap<VertexId, Vec<Interval>> = HashMap::new();
        let mut mf: HashMap<MoveId, Vec<Interval>> = HashMap::new();
        let mut waits = Vec::new();
        for c in cs.iter().filter(|c| c.agent() == agent) {
            match *c {
                Constraint::Motion { mv, interval, .. } => mf.entry(mv).or_default().push(interval),
                Constraint::Vertex {
                    vertex, interval, ..
                } => vf.entry(vertex).or_default().push(interval),
                Constraint::Wait {
                    vertex,
                    duration,
                    interval,
                    ..
                } => waits.push((vertex, duration, interval)),
            }
        }
        let permit = |v: Vec<Interval>| all.subtract(&IntervalSet::from_intervals(v));
        Self {
            vertex: vf.into_iter().map(|(k, v)| (k, permit(v))).collect(),
            motion: mf.into_iter().map(|(k, v)| (k, permit(v))).collect(),
            waits,
            all,
        }
    }

    fn vertex(&self, v: VertexId) -> &IntervalSet {
        self.vertex.get(&v).unwrap_or(self.all)
    }

    fn motion(&self, m: MoveId) -> &IntervalSet {
        self.motion.get(&m).unwrap_or(self.all)
    }

    fn wait_forbidden(&self, v: VertexId, start: f64, duration: f64) -> bool {
        self.waits.iter().any(|&(wv, wd, i)| {
            wv == v && crate::constraints::same_wait_duration(wd, duration) && i.contains(start)
        })
    }

    /// Permitted departure intervals for `mv` after arriving at its source at
    /// `arrival`, inside the safe interval ending at `safe_end`.
    fn departures(&self, instance: &Instance, mv: MoveId, arrival: f64, safe_end: f64) -> IntervalSet {
        let m = instance.move_action(mv);
        let Some(stay) = Interval::new(arrival, safe_end) else {
            return IntervalSet::empty();
        };
        IntervalSet::single(stay)
            .intersect(self.motion(mv))
            .intersect(&self.vertex(m.to).shift(-m.duration))
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    vertex: VertexId,
    safe: usize,
    /// The agent may end its plan here: goal vertex, unbounded safe interval
    /// and the final infinite wait permitted at `arrival`.
    terminal: bool,
    arrival: f64,
    parent: Option<usize>,
    via: Option<(MoveId, f64)>,
}

/// Minimum-duration plan for `agent` satisfying every constraint in `cs`
/// that applies to it, or `None` when no such plan exists.
pub fn plan(instance: &Instance, agent: AgentId, cs: &ConstraintSet) -> Option<Plan> {
    let h = build_heuristic(instance, agent);
    plan_with_heuristic(instance, agent, cs, &h)
}

pub fn plan_with_heuristic(
    instance: &Instance,
    agent: AgentId,
    cs: &ConstraintSet,
    h: &Heuristic,
) -> Option<Plan> {
    let all = IntervalSet::all_time();
    let tables = Tables::new(agent, cs, &all);
    let a = instance.agent(agent);
    let start_safe = tables.vertex(a.start).find(0.0)?;
    if h.get(a.start).is_infinite() {
        return None;
    }

    let terminal = |v: VertexId, safe: usize, arrival: f64| {
        v == a.goal
            && tables.vertex(v).intervals()[safe].is_unbounded()
            && !tables.wait_forbidden(v, arrival, f64::INFINITY)
    };
    let start_terminal = terminal(a.start, start_safe, 0.0);
    let mut nodes = vec![Node {
        vertex: a.start,
        safe: start_safe,
        terminal: start_terminal,
        arrival: 0.0,
        parent: None,
        via: None,
    }];
    // a blocked arrival at the goal must not hide a later one that may finish
    let mut best: HashMap<(VertexId, usize, bool), f64> = HashMap::new();
    best.insert((a.start, start_safe, start_terminal), 0.0);
    let mut open = BinaryHeap::new();
    open.push(Entry {
        f: h.get(a.start),
        g: 0.0,
        vertex: a.start.index(),
        node: 0,
    });

    while let Some(Entry { node, .. }) = open.pop() {
        let cur = nodes[node];
        if best
            .get(&(cur.vertex, cur.safe, cur.terminal))
            .is_some_and(|&t| t < cur.arrival)
        {
            continue;
        }
        if cur.terminal {
            return Some(reconstruct(instance, agent, &nodes, node));
        }
        let safe = tables.vertex(cur.vertex).intervals()[cur.safe];
        for &mv in instance.outgoing(cur.vertex) {
            let m = instance.move_action(mv);
            let hv = h.get(m.to);
            if hv.is_infinite() {
                continue;
            }
            let dep = tables.departures(instance, mv, cur.arrival, safe.end);
            for window in dep.intervals() {
                let Some(depart) = nudged_departure(&tables, cur.vertex, cur.arrival, *window) else {
                    continue;
                };
                let arrival = depart + m.duration;
                let Some(safe_idx) = tables.vertex(m.to).find(arrival) else {
                    continue;
                };
                let done = terminal(m.to, safe_idx, arrival);
                let key = (m.to, safe_idx, done);
                if best.get(&key).is_some_and(|&t| t <= arrival) {
                    continue;
                }
                best.insert(key, arrival);
                nodes.push(Node {
                    vertex: m.to,
                    safe: safe_idx,
                    terminal: done,
                    arrival,
                    parent: Some(node),
                    via: Some((mv, depart)),
                });
                open.push(Entry {
                    f: arrival + hv,
                    g: arrival,
                    vertex: m.to.index(),
                    node: nodes.len() - 1,
                });
            }
        }
    }
    None
}

/// Earliest departure in `window`, delayed while the wait it implies is
/// forbidden by an exact-duration wait constraint.
fn nudged_departure(tables: &Tables, v: VertexId, arrival: f64, window: Interval) -> Option<f64> {
    let mut depart = window.start;
    for _ in 0..MAX_NUDGES {
        if depart <= arrival || !tables.wait_forbidden(v, arrival, depart - arrival) {
            return Some(depart);
        }
        depart += WAIT_NUDGE;
        if !window.contains(depart) {
            return None;
        }
    }
    None
}

fn reconstruct(instance: &Instance, agent: AgentId, nodes: &[Node], last: usize) -> Plan {
    let mut chain = Vec::new();
    let mut k = Some(last);
    while let Some(i) = k {
        chain.push(nodes[i]);
        k = nodes[i].parent;
    }
    chain.reverse();
    let mut actions = Vec::new();
    for pair in chain.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        let (mv, depart) = next.via.expect("non-root node has a move");
        if depart > prev.arrival {
            actions.push(TimedAction::waiting(prev.vertex, prev.arrival, depart - prev.arrival));
        }
        actions.push(TimedAction::moving(instance, mv, depart));
    }
    let end = chain.last().expect("non-empty chain");
    actions.push(TimedAction::waiting(end.vertex, end.arrival, f64::INFINITY));
    Plan::new(agent, actions)
}

/// Moves of `plan` whose start is not the earliest permitted departure of the
/// maximal interval it lies in, given the realized arrival at its source.
/// Returns the offending action indices.
pub fn earliest_start_violations(instance: &Instance, plan: &Plan, cs: &ConstraintSet) -> Vec<usize> {
    let all = IntervalSet::all_time();
    let tables = Tables::new(plan.agent, cs, &all);
    let mut out = Vec::new();
    let mut arrival = 0.0;
    for (index, ta) in plan.actions.iter().enumerate() {
        match ta.action {
            Action::Wait { .. } => {}
            Action::Move(mv) => {
                let v = ta.from_vertex(instance);
                let safe_end = tables
                    .vertex(v)
                    .find(arrival)
                    .map(|i| tables.vertex(v).intervals()[i].end);
                let ok = safe_end.is_some_and(|end| {
                    let dep = tables.departures(instance, mv, arrival, end);
                    dep.intervals()
                        .iter()
                        .any(|w| w.contains(ta.start) && (ta.start - w.start).abs() <= EPS)
                });
                if !ok {
                    out.push(index);
                }
                arrival = ta.end();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_plan;
    use crate::testsuite::junction;
    use proptest::prelude::*;

    const DELTA: f64 = std::f64::consts::SQRT_2 / 4.0;

    fn v(inst: &Instance, n: &str) -> VertexId {
        inst.vertex_by_name(n).unwrap()
    }

    fn mv(inst: &Instance, a: &str, b: &str) -> MoveId {
        let (a, b) = (v(inst, a), v(inst, b));
        *inst
            .outgoing(a)
            .iter()
            .find(|&&m| inst.move_action(m).to == b)
            .unwrap()
    }

    #[test]
    fn unconstrained_agent_one_takes_the_direct_route() {
        let inst = junction();
        let p = plan(&inst, AgentId(0), &ConstraintSet::new()).unwrap();
        assert_eq!(
            p.actions,
            vec![
                TimedAction::moving(&inst, mv(&inst, "E", "F"), 0.0),
                TimedAction::moving(&inst, mv(&inst, "F", "G"), 1.5),
                TimedAction::waiting(v(&inst, "G"), 2.5, f64::INFINITY),
            ]
        );
        assert_eq!(p.duration(), 2.5);
    }

    #[test]
    fn forbidding_ef_forever_is_infeasible() {
        let inst = junction();
        let cs: ConstraintSet = [Constraint::Motion {
            agent: AgentId(0),
            mv: mv(&inst, "E", "F"),
            interval: Interval::from_start(0.0),
        }]
        .into_iter()
        .collect();
        assert_eq!(plan(&inst, AgentId(0), &cs), None);
    }

    #[test]
    fn short_motion_constraint_delays_departure() {
        let inst = junction();
        let cs: ConstraintSet = [Constraint::Motion {
            agent: AgentId(0),
            mv: mv(&inst, "E", "F"),
            interval: Interval::new(0.0, DELTA).unwrap(),
        }]
        .into_iter()
        .collect();
        let p = plan(&inst, AgentId(0), &cs).unwrap();
        assert_eq!(p.actions[0], TimedAction::waiting(v(&inst, "E"), 0.0, DELTA));
        assert_eq!(p.actions[1].start, DELTA);
        assert!((p.duration() - (2.5 + DELTA)).abs() < 1e-12);
        assert!(earliest_start_violations(&inst, &p, &cs).is_empty());
    }

    #[test]
    fn heuristic_values() {
        let inst = junction();
        let h = build_heuristic(&inst, AgentId(0));
        assert_eq!(h.get(v(&inst, "G")), 0.0);
        assert_eq!(h.get(v(&inst, "E")), 2.5);
    }

    #[test]
    fn disconnected_vertex_is_unreachable() {
        use crate::model::{Agent, MoveAction, Point2, Vertex};
        let vs = ["a", "b", "c"]
            .iter()
            .enumerate()
            .map(|(i, n)| Vertex {
                name: n.to_string(),
                coord: Point2::new(i as f64, 0.0),
            })
            .collect();
        let inst = Instance::new(
            vs,
            vec![MoveAction {
                from: VertexId(0),
                to: VertexId(1),
                duration: 1.0,
            }],
            vec![Agent {
                name: "1".into(),
                radius: 0.2,
                start: VertexId(0),
                goal: VertexId(1),
            }],
        )
        .unwrap();
        let h = build_heuristic(&inst, AgentId(0));
        assert!(h.get(VertexId(2)).is_infinite());
        assert!(h.get(VertexId(0)) == 1.0);
    }

    #[test]
    fn vertex_constraint_on_start_at_zero_is_infeasible() {
        let inst = junction();
        let cs: ConstraintSet = [Constraint::Vertex {
            agent: AgentId(1),
            vertex: v(&inst, "F"),
            interval: Interval::new(0.0, 1.0).unwrap(),
        }]
        .into_iter()
        .collect();
        assert_eq!(plan(&inst, AgentId(1), &cs), None);
    }

    #[test]
    fn bounded_goal_interval_forces_a_detour() {
        let inst = junction();
        // agent 2 sits on its goal F but must vacate it during [1.2, 1.5)
        let cs: ConstraintSet = [Constraint::Vertex {
            agent: AgentId(1),
            vertex: v(&inst, "F"),
            interval: Interval::new(1.2, 1.5).unwrap(),
        }]
        .into_iter()
        .collect();
        let p = plan(&inst, AgentId(1), &cs).unwrap();
        assert!(validate_plan(&inst, &p).is_empty());
        assert!(cs.is_satisfied_by(&p));
        // shortest detour is F->C->F (2.0), departing at 0 or by 0.2
        assert!((p.duration() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn forbidden_exact_wait_is_nudged() {
        let inst = junction();
        let e = v(&inst, "E");
        let cs: ConstraintSet = [
            Constraint::Motion {
                agent: AgentId(0),
                mv: mv(&inst, "E", "F"),
                interval: Interval::new(0.0, 0.5).unwrap(),
            },
            Constraint::Wait {
                agent: AgentId(0),
                vertex: e,
                duration: 0.5,
                interval: Interval::new(0.0, 0.1).unwrap(),
            },
        ]
        .into_iter()
        .collect();
        let p = plan(&inst, AgentId(0), &cs).unwrap();
        assert!(cs.is_satisfied_by(&p));
        assert!((p.actions[0].duration - (0.5 + WAIT_NUDGE)).abs() < 1e-12);
    }

    #[test]
    fn forbidden_final_wait_makes_the_agent_leave_and_return() {
        let inst = junction();
        let agent = AgentId(1);
        let cs: ConstraintSet = [Constraint::Wait {
            agent,
            vertex: v(&inst, "F"),
            duration: f64::INFINITY,
            interval: Interval::new(0.0, 1.5).unwrap(),
        }]
        .into_iter()
        .collect();
        let p = plan(&inst, agent, &cs).unwrap();
        assert!(validate_plan(&inst, &p).is_empty());
        assert!(cs.is_satisfied_by(&p));
        // shortest round trip is F->C->F
        assert!((p.duration() - 2.0).abs() < 1e-9);
    }

    fn arb_constraint(inst: &Instance) -> impl Strategy<Value = Constraint> {
        let nm = inst.moves().len();
        let nv = inst.vertices().len();
        (0usize..4, any::<bool>(), 0usize..12, 0.0f64..4.0, 0.01f64..1.5).prop_map(
            move |(agent, is_motion, k, s, len)| {
                let interval = Interval::new(s, s + len).unwrap();
                if is_motion {
                    Constraint::Motion {
                        agent: AgentId(agent),
                        mv: MoveId(k % nm),
                        interval,
                    }
                } else {
                    Constraint::Vertex {
                        agent: AgentId(agent),
                        vertex: VertexId(k % nv),
                        interval,
                    }
                }
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn adding_constraints_never_shortens_plans(
            base in proptest::collection::vec(arb_constraint(&junction()), 0..6),
            extra in proptest::collection::vec(arb_constraint(&junction()), 1..6),
            agent in 0usize..4,
        ) {
            let inst = junction();
            let cs: ConstraintSet = base.iter().copied().collect();
            let mut bigger = cs.clone();
            bigger.extend(extra);
            let a = AgentId(agent);
            if let (Some(p), Some(q)) = (plan(&inst, a, &cs), plan(&inst, a, &bigger)) {
                prop_assert!(p.duration() <= q.duration() + 1e-9);
                for (pl, set) in [(&p, &cs), (&q, &bigger)] {
                    prop_assert!(validate_plan(&inst, pl).is_empty());
                    prop_assert!(set.is_satisfied_by(pl));
                    prop_assert!(earliest_start_violations(&inst, pl, set).is_empty());
                }
            } else if plan(&inst, a, &cs).is_none() {
                prop_assert!(plan(&inst, a, &bigger).is_none());
            }
        }
    }
}
