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

//! Independent checks: an exhaustive joint-plan validator and a brute-force
//! optimal solver over a discretized time grid.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::constraints::{ConstraintSet, ConstraintViolation, Interval, IntervalSet};
use crate::csipp::{build_heuristic, Heuristic};
use crate::geometry::{track_collisions, Track};
use crate::model::{
    validate_plan, AgentId, Instance, JointPlan, MoveId, Plan, PlanViolation, TimedAction, VertexId,
};

/// Everything wrong with a joint plan. Empty iff the joint plan is a solution
/// that satisfies the supplied constraints.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// Maximal collision intervals per agent pair.
    pub collisions: Vec<((AgentId, AgentId), Interval)>,
    pub constraint_violations: Vec<(AgentId, ConstraintViolation)>,
    pub validity_violations: Vec<(AgentId, PlanViolation)>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.collisions.is_empty()
            && self.constraint_violations.is_empty()
            && self.validity_violations.is_empty()
    }

    /// One line per finding.
    pub fn lines(&self, instance: &Instance) -> Vec<String> {
        let name = |a: AgentId| {
            instance
                .agents()
                .get(a.index())
                .map_or_else(|| format!("#{}", a.index()), |x| x.name.clone())
        };
        let mut out = Vec::new();
        for ((a, b), i) in &self.collisions {
            out.push(format!("collision {} {} {}", name(*a), name(*b), i));
        }
        for (a, v) in &self.constraint_violations {
            let (index, c) = match v {
                ConstraintViolation::Motion {
                    action_index,
                    constraint,
                }
                | ConstraintViolation::Vertex {
                    action_index,
                    constraint,
                }
                | ConstraintViolation::Wait {
                    action_index,
                    constraint,
                } => (action_index, constraint),
            };
            out.push(format!(
                "constraint {} action {} violates {}",
                name(*a),
                index,
                c.dump(instance)
            ));
        }
        for (a, v) in &self.validity_violations {
            out.push(format!("invalid {} {}", name(*a), v));
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} collisions, {} constraint violations, {} validity violations",
            self.collisions.len(),
            self.constraint_violations.len(),
            self.validity_violations.len()
        )
    }
}

/// Union of all collision intervals between two plans, comparing every pair
/// of timed actions.
pub fn plan_collisions(instance: &Instance, p: &Plan, q: &Plan) -> IntervalSet {
    let reach = instance.agent(p.agent).radius + instance.agent(q.agent).radius;
    let mut out = IntervalSet::empty();
    for a in &p.actions {
        let ta = Track::of(instance, a);
        for b in &q.actions {
            out = out.union(&track_collisions(&ta, &Track::of(instance, b), reach));
        }
    }
    out
}

/// Checks validity of every plan, pairwise collisions over all action pairs
/// and, when given, satisfaction of `cs`.
pub fn validate_joint(
    instance: &Instance,
    joint: &JointPlan,
    cs: Option<&ConstraintSet>,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = instance.agents().len();
    if joint.plans.len() != n {
        for i in joint.plans.len()..n {
            report.validity_violations.push((AgentId(i), PlanViolation::Empty));
        }
    }
    let plans: Vec<&Plan> = joint.plans.iter().take(n).collect();
    let mut sound = vec![true; plans.len()];
    for (i, p) in plans.iter().enumerate() {
        if p.agent != AgentId(i) {
            report
                .validity_violations
                .push((
                    AgentId(i),
                    PlanViolation::AgentMismatch {
                        expected: AgentId(i),
                        found: p.agent,
                    },
                ));
            sound[i] = false;
            continue;
        }
        for v in validate_plan(instance, p) {
            if matches!(v, PlanViolation::UnknownMove { .. }) {
                sound[i] = false;
            }
            report.validity_violations.push((AgentId(i), v));
        }
        if let Some(cs) = cs {
            for v in cs.violations(p) {
                report.constraint_violations.push((AgentId(i), v));
            }
        }
    }
    for i in 0..plans.len() {
        for j in i + 1..plans.len() {
            if !(sound[i] && sound[j]) {
                continue;
            }
            for &iv in plan_collisions(instance, plans[i], plans[j]).intervals() {
                report.collisions.push(((AgentId(i), AgentId(j)), iv));
            }
        }
    }
    report
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("time step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("horizon must be finite and non-negative, got {0}")]
    BadHorizon(f64),
    #[error("no solution found within horizon {horizon} after {expanded} expansions")]
    HorizonExhausted { horizon: f64, expanded: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// `cost_upper - agents * eps`.
    pub cost_lower: f64,
    /// Sum of costs of the best grid-aligned solution.
    pub cost_upper: f64,
    pub witness: JointPlan,
    pub expanded: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Status {
    Idle(VertexId),
    Moving(MoveId, f64),
    Finished(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum StatusKey {
    Idle(usize),
    Moving(usize, u64),
    Finished(usize),
}

impl Status {
    fn key(self) -> StatusKey {
        match self {
            Status::Idle(v) => StatusKey::Idle(v.index()),
            Status::Moving(m, s) => StatusKey::Moving(m.index(), s.to_bits()),
            Status::Finished(v) => StatusKey::Finished(v.index()),
        }
    }
}

/// One agent's behaviour over one grid window.
#[derive(Debug, Clone)]
struct Step {
    pieces: Vec<Track>,
    next: Status,
    started: Vec<(MoveId, f64)>,
    finished_at: Option<f64>,
}

struct Grid<'a> {
    instance: &'a Instance,
    eps: f64,
}

impl Grid<'_> {
    fn time(&self, k: usize) -> f64 {
        k as f64 * self.eps
    }

    /// Every way agent `a` in `status` can spend the window starting at
    /// step `k`.
    fn steps(&self, a: AgentId, status: Status, k: usize) -> Vec<Step> {
        let (w0, w1) = (self.time(k), self.time(k + 1));
        let mut out = Vec::new();
        let base = Step {
            pieces: Vec::new(),
            next: status,
            started: Vec::new(),
            finished_at: None,
        };
        match status {
            Status::Finished(v) => {
                let mut s = base;
                s.pieces.push(Track::stationary(self.instance.coord(v), w0, w1));
                out.push(s);
            }
            Status::Idle(v) => {
                let mut wait = base.clone();
                wait.pieces.push(Track::stationary(self.instance.coord(v), w0, w1));
                out.push(wait);
                for &m in self.instance.outgoing(v) {
                    let mut s = base.clone();
                    s.started.push((m, w0));
                    self.advance(a, s, m, w0, w0, w1, &mut out);
                }
            }
            Status::Moving(m, start) => self.advance(a, base, m, start, w0, w1, &mut out),
        }
        out
    }

    /// Continues move `m` started at `start` from time `from` to the end of
    /// the window `w1`, branching on what happens at arrival.
    #[allow(clippy::too_many_arguments)]
    fn advance(
        &self,
        a: AgentId,
        mut s: Step,
        m: MoveId,
        start: f64,
        from: f64,
        w1: f64,
        out: &mut Vec<Step>,
    ) {
        let ta = TimedAction::moving(self.instance, m, start);
        let arrival = ta.end();
        if let Some(piece) = Track::of(self.instance, &ta).clipped(from, w1) {
            s.pieces.push(piece);
        }
        if arrival > w1 {
            s.next = Status::Moving(m, start);
            out.push(s);
            return;
        }
        let u = ta.to_vertex(self.instance);
        let rest = Track::stationary(self.instance.coord(u), arrival, w1);
        let mut idle = s.clone();
        if arrival < w1 {
            idle.pieces.push(rest);
        }
        if u == self.instance.agent(a).goal {
            let mut fin = idle.clone();
            fin.next = Status::Finished(u);
            fin.finished_at = Some(arrival);
            out.push(fin);
        }
        idle.next = Status::Idle(u);
        out.push(idle);
        if arrival < w1 {
            for &m2 in self.instance.outgoing(u) {
                let mut chained = s.clone();
                chained.started.push((m2, arrival));
                self.advance(a, chained, m2, arrival, arrival, w1, out);
            }
        }
    }
}

fn lower_bound(instance: &Instance, h: &[Heuristic], statuses: &[Status], t: f64) -> f64 {
    statuses
        .iter()
        .enumerate()
        .map(|(i, s)| match *s {
            Status::Finished(_) => 0.0,
            Status::Idle(v) if v == instance.agent(AgentId(i)).goal => t,
            Status::Idle(v) => t + h[i].get(v),
            Status::Moving(m, start) => {
                let mv = instance.move_action(m);
                start + mv.duration + h[i].get(mv.to)
            }
        })
        .sum()
}

struct Node {
    parent: Option<usize>,
    k: usize,
    statuses: Vec<Status>,
    finished: f64,
    started: Vec<(AgentId, MoveId, f64)>,
}

#[derive(PartialEq)]
struct Open {
    f: f64,
    k: usize,
    id: usize,
}

impl Eq for Open {}

impl Ord for Open {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.k.cmp(&other.k))
            .then(other.id.cmp(&self.id))
    }
}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn pieces_collide(instance: &Instance, steps: &[&Step], agents: &[usize]) -> bool {
    for x in 0..steps.len() {
        for y in x + 1..steps.len() {
            let reach = instance.agent(AgentId(agents[x])).radius + instance.agent(AgentId(agents[y])).radius;
            for p in &steps[x].pieces {
                for q in &steps[y].pieces {
                    if !track_collisions(p, q, reach).is_empty() {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Optimal sum of costs over joint plans whose moves start on multiples of
/// `eps` or immediately on arrival of the previous move, found by
/// best-first search over synchronous grid windows up to `horizon`.
pub fn brute_force_optimal(
    instance: &Instance,
    eps: f64,
    horizon: f64,
) -> Result<OracleResult, OracleError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(OracleError::BadStep(eps));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(OracleError::BadHorizon(horizon));
    }
    let n = instance.agents().len();
    let h: Vec<Heuristic> = instance
        .agent_ids()
        .map(|a| build_heuristic(instance, a))
        .collect();
    let grid = Grid { instance, eps };

    let mut nodes: Vec<Node> = Vec::new();
    let mut open = BinaryHeap::new();
    let mut seen: HashSet<(usize, Vec<StatusKey>)> = HashSet::new();

    // time zero: agents starting on their goal may finish immediately
    let mut initial: Vec<Vec<Status>> = vec![Vec::new()];
    for a in instance.agent_ids() {
        let ag = instance.agent(a);
        let mut next = Vec::new();
        for st in &initial {
            let mut idle = st.clone();
            idle.push(Status::Idle(ag.start));
            next.push(idle);
            if ag.start == ag.goal {
                let mut done = st.clone();
                done.push(Status::Finished(ag.goal));
                next.push(done);
            }
        }
        initial = next;
    }
    for statuses in initial {
        let f = lower_bound(instance, &h, &statuses, 0.0);
        if f.is_infinite() {
            continue;
        }
        nodes.push(Node {
            parent: None,
            k: 0,
            statuses,
            finished: 0.0,
            started: Vec::new(),
        });
        open.push(Open {
            f,
            k: 0,
            id: nodes.len() - 1,
        });
    }

    let mut expanded = 0;
    while let Some(Open { id, .. }) = open.pop() {
        let (k, statuses) = (nodes[id].k, nodes[id].statuses.clone());
        if !seen.insert((k, statuses.iter().map(|s| s.key()).collect())) {
            continue;
        }
        if statuses.iter().all(|s| matches!(s, Status::Finished(_))) {
            let cost = nodes[id].finished;
            return Ok(OracleResult {
                cost_lower: cost - n as f64 * eps,
                cost_upper: cost,
                witness: reconstruct(instance, &nodes, id),
                expanded,
            });
        }
        if grid.time(k) >= horizon {
            continue;
        }
        expanded += 1;

        let options: Vec<Vec<Step>> = statuses
            .iter()
            .enumerate()
            .map(|(i, &s)| grid.steps(AgentId(i), s, k))
            .collect();
        let agents: Vec<usize> = (0..n).collect();
        let mut choice = vec![0usize; n];
        'product: loop {
            let chosen: Vec<&Step> = (0..n).map(|i| &options[i][choice[i]]).collect();
            if !pieces_collide(instance, &chosen, &agents) {
                let next: Vec<Status> = chosen.iter().map(|s| s.next).collect();
                let mut finished = nodes[id].finished;
                let mut started = Vec::new();
                for (i, s) in chosen.iter().enumerate() {
                    if let Some(t) = s.finished_at {
                        finished += t;
                    }
                    started.extend(s.started.iter().map(|&(m, t)| (AgentId(i), m, t)));
                }
                let f = finished + lower_bound(instance, &h, &next, grid.time(k + 1));
                if f.is_finite() && !seen.contains(&(k + 1, next.iter().map(|s| s.key()).collect())) {
                    nodes.push(Node {
                        parent: Some(id),
                        k: k + 1,
                        statuses: next,
                        finished,
                        started,
                    });
                    open.push(Open {
                        f,
                        k: k + 1,
                        id: nodes.len() - 1,
                    });
                }
            }
            for i in 0..n {
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    continue 'product;
                }
                choice[i] = 0;
            }
            break;
        }
    }
    Err(OracleError::HorizonExhausted { horizon, expanded })
}

fn reconstruct(instance: &Instance, nodes: &[Node], last: usize) -> JointPlan {
    let n = instance.agents().len();
    let mut moves: Vec<Vec<(MoveId, f64)>> = vec![Vec::new(); n];
    let mut k = Some(last);
    let mut chain = Vec::new();
    while let Some(i) = k {
        chain.push(i);
        k = nodes[i].parent;
    }
    for &i in chain.iter().rev() {
        for &(a, m, t) in &nodes[i].started {
            moves[a.index()].push((m, t));
        }
    }
    let plans = instance
        .agent_ids()
        .map(|a| {
            let mut v = instance.agent(a).start;
            let mut t = 0.0;
            let mut actions = Vec::new();
            for &(m, s) in &moves[a.index()] {
                if s > t {
                    actions.push(TimedAction::waiting(v, t, s - t));
                }
                let ta = TimedAction::moving(instance, m, s);
                t = ta.end();
                v = ta.to_vertex(instance);
                actions.push(ta);
            }
            actions.push(TimedAction::waiting(v, t, f64::INFINITY));
            Plan::new(a, actions)
        })
        .collect();
    JointPlan::new(plans)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::Constraint;
    use crate::csipp;
    use crate::model::{Agent, MoveAction, Point2, Vertex};
    use crate::testsuite::{junction, junction_root_plans, junction_optimal_solution, junction_standard_solution};

    #[test]
    fn reference_solutions_validate_and_root_does_not() {
        let inst = junction();
        assert!(validate_joint(&inst, &junction_optimal_solution(&inst), None).is_empty());
        assert!(validate_joint(&inst, &junction_standard_solution(&inst), None).is_empty());
        let r = validate_joint(&inst, &junction_root_plans(&inst), None);
        assert_eq!(r.collisions.len(), 1);
        let ((a, b), i) = r.collisions[0];
        assert_eq!((a, b), (AgentId(0), AgentId(1)));
        assert!((i.start - 0.7929).abs() < 1e-4);
        assert!(r.constraint_violations.is_empty() && r.validity_violations.is_empty());
        assert_eq!(r.lines(&inst).len(), 1);
    }

    #[test]
    fn violated_motion_constraint_is_reported() {
        let inst = junction();
        let root = junction_root_plans(&inst);
        let ef = root.plans[0].actions[0].move_id().unwrap();
        let cs: ConstraintSet = [Constraint::Motion {
            agent: AgentId(0),
            mv: ef,
            interval: Interval::new(0.0, 0.1).unwrap(),
        }]
        .into_iter()
        .collect();
        let r = validate_joint(&inst, &root, Some(&cs));
        assert_eq!(r.constraint_violations.len(), 1);
    }

    fn corridor() -> Instance {
        // a - b - c with a spur s above b; agents swap ends of the corridor
        let pts = [("a", 0.0, 0.0), ("b", 1.0, 0.0), ("c", 2.0, 0.0), ("s", 1.0, 1.0)];
        let vertices = pts
            .iter()
            .map(|&(n, x, y)| Vertex {
                name: n.into(),
                coord: Point2::new(x, y),
            })
            .collect();
        let mut moves = Vec::new();
        for (u, v) in [(0, 1), (1, 2), (1, 3)] {
            for (p, q) in [(u, v), (v, u)] {
                moves.push(MoveAction {
                    from: VertexId(p),
                    to: VertexId(q),
                    duration: 1.0,
                });
            }
        }
        let agents = vec![
            Agent {
                name: "1".into(),
                radius: 0.25,
                start: VertexId(0),
                goal: VertexId(2),
            },
            Agent {
                name: "2".into(),
                radius: 0.25,
                start: VertexId(2),
                goal: VertexId(0),
            },
        ];
        Instance::new(vertices, moves, agents).unwrap()
    }

    #[test]
    fn single_agent_oracle_matches_csipp() {
        let inst = junction();
        let solo = Instance::new(
            inst.vertices().to_vec(),
            inst.moves().to_vec(),
            vec![inst.agent(AgentId(0)).clone()],
        )
        .unwrap();
        let o = brute_force_optimal(&solo, 0.05, 6.0).unwrap();
        let p = csipp::plan(&solo, AgentId(0), &ConstraintSet::new()).unwrap();
        assert_eq!(o.cost_upper, p.duration());
        assert!(validate_joint(&solo, &o.witness, None).is_empty());
    }

    #[test]
    fn head_on_corridor_needs_the_spur() {
        let inst = corridor();
        let o = brute_force_optimal(&inst, 0.05, 8.0).unwrap();
        assert!(validate_joint(&inst, &o.witness, None).is_empty());
        assert!((o.witness.sum_of_costs() - o.cost_upper).abs() < 1e-9);
        assert!(o.cost_lower <= o.cost_upper);
        // one agent ducks into the spur: both need strictly more than 2 s
        assert!(o.cost_upper > 4.0);
    }

    #[test]
    fn exhausted_horizon_is_an_error() {
        let inst = corridor();
        assert!(matches!(
            brute_force_optimal(&inst, 0.5, 1.0),
            Err(OracleError::HorizonExhausted { .. })
        ));
        assert!(brute_force_optimal(&inst, 0.0, 1.0).is_err());
    }

    #[test]
    fn witness_agrees_with_dense_sampling() {
        let inst = corridor();
        let o = brute_force_optimal(&inst, 0.05, 8.0).unwrap();
        let (p, q) = (&o.witness.plans[0], &o.witness.plans[1]);
        let reach = 0.5;
        let end = o.witness.makespan() + 1.0;
        let mut t = 0.0;
        while t <= end {
            let d = p.position_at(&inst, t).distance(q.position_at(&inst, t));
            assert!(d >= reach - 1e-9, "t={t} d={d}");
            t += 0.005;
        }
    }
}
