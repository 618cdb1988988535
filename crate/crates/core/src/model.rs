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

//! Problem representation: the graph embedded in the plane, directed move
//! actions, disc agents, timed actions and plans.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Absolute tolerance, in seconds, used when comparing times that were
/// produced by arithmetic rather than copied.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn scale(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }

    pub fn lerp(self, other: Point2, s: f64) -> Point2 {
        self + (other - self).scale(s)
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

macro_rules! index_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }
    };
}

index_newtype!(
    /// Index of a vertex inside its [`Instance`].
    VertexId
);
index_newtype!(
    /// Index of a directed move action inside its [`Instance`].
    MoveId
);
index_newtype!(
    /// Index of an agent inside its [`Instance`]; also the agent's priority
    /// for every deterministic tie-break in the solver.
    AgentId
);

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub name: String,
    pub coord: Point2,
}

/// A directed traversal of an edge along the straight segment between its
/// endpoints, at constant speed, taking `duration` seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveAction {
    pub from: VertexId,
    pub to: VertexId,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub name: String,
    pub radius: f64,
    pub start: VertexId,
    pub goal: VertexId,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate agent id `{0}`")]
    DuplicateAgent(String),
    #[error("non-finite coordinate on vertex `{0}`")]
    NonFiniteCoordinate(String),
    #[error("move {from}->{to} has non-positive or non-finite duration {duration}")]
    BadDuration { from: String, to: String, duration: f64 },
    #[error("move {0}->{0} is a self loop")]
    SelfLoop(String),
    #[error("agent `{agent}` has non-positive or non-finite radius {radius}")]
    BadRadius { agent: String, radius: f64 },
    #[error("agents `{0}` and `{1}` overlap at their start vertices")]
    StartOverlap(String, String),
    #[error("agents `{0}` and `{1}` overlap at their goal vertices")]
    GoalOverlap(String, String),
    #[error("time {t} is outside the occupation window [{start}, {end}]")]
    OutsideWindow { t: f64, start: f64, end: f64 },
}

/// A validated problem instance. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    vertices: Vec<Vertex>,
    moves: Vec<MoveAction>,
    agents: Vec<Agent>,
    outgoing: Vec<Vec<MoveId>>,
    by_name: HashMap<String, VertexId>,
}

impl Instance {
    /// Builds an instance and checks every structural invariant: unique
    /// vertex ids, positive durations and radii, no self loops, and pairwise
    /// strictly separated start discs and goal discs.
    pub fn new(
        vertices: Vec<Vertex>,
        moves: Vec<MoveAction>,
        agents: Vec<Agent>,
    ) -> Result<Self, ModelError> {
        let mut by_name = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if !v.coord.x.is_finite() || !v.coord.y.is_finite() {
                return Err(ModelError::NonFiniteCoordinate(v.name.clone()));
            }
            if by_name.insert(v.name.clone(), VertexId(i)).is_some() {
                return Err(ModelError::DuplicateVertex(v.name.clone()));
            }
        }
        let name = |id: VertexId| -> String {
            vertices
                .get(id.0)
                .map(|v| v.name.clone())
                .unwrap_or_else(|| format!("#{}", id.0))
        };
        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (i, m) in moves.iter().enumerate() {
            if m.from.0 >= vertices.len() {
                return Err(ModelError::UnknownVertex(name(m.from)));
            }
            if m.to.0 >= vertices.len() {
                return Err(ModelError::UnknownVertex(name(m.to)));
            }
            if m.from == m.to {
                return Err(ModelError::SelfLoop(name(m.from)));
            }
            if !(m.duration.is_finite() && m.duration > 0.0) {
                return Err(ModelError::BadDuration {
                    from: name(m.from),
                    to: name(m.to),
                    duration: m.duration,
                });
            }
            outgoing[m.from.0].push(MoveId(i));
        }
        let mut agent_names = HashMap::new();
        for a in &agents {
            if agent_names.insert(a.name.clone(), ()).is_some() {
                return Err(ModelError::DuplicateAgent(a.name.clone()));
            }
            if !(a.radius.is_finite() && a.radius > 0.0) {
                return Err(ModelError::BadRadius {
                    agent: a.name.clone(),
                    radius: a.radius,
                });
            }
            for v in [a.start, a.goal] {
                if v.0 >= vertices.len() {
                    return Err(ModelError::UnknownVertex(name(v)));
                }
            }
        }
        for (i, a) in agents.iter().enumerate() {
            for b in &agents[i + 1..] {
                let reach = a.radius + b.radius;
                if vertices[a.start.0].coord.distance(vertices[b.start.0].coord) <= reach {
                    return Err(ModelError::StartOverlap(a.name.clone(), b.name.clone()));
                }
                if vertices[a.goal.0].coord.distance(vertices[b.goal.0].coord) <= reach {
                    return Err(ModelError::GoalOverlap(a.name.clone(), b.name.clone()));
                }
            }
        }
        Ok(Self {
            vertices,
            moves,
            agents,
            outgoing,
            by_name,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn moves(&self) -> &[MoveAction] {
        &self.moves
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn vertex(&self, id: VertexId) -> &Vertex {
        &self.vertices[id.0]
    }

    pub fn coord(&self, id: VertexId) -> Point2 {
        self.vertices[id.0].coord
    }

    pub fn move_action(&self, id: MoveId) -> &MoveAction {
        &self.moves[id.0]
    }

    pub fn agent(&self, id: AgentId) -> &Agent {
        &self.agents[id.0]
    }

    pub fn agent_ids(&self) -> impl DoubleEndedIterator<Item = AgentId> + ExactSizeIterator {
        (0..self.agents.len()).map(AgentId)
    }

    /// Moves leaving `v`, in instance order.
    pub fn outgoing(&self, v: VertexId) -> &[MoveId] {
        &self.outgoing[v.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    pub fn agent_by_name(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|a| a.name == name).map(AgentId)
    }

    /// First move from `from` to `to` whose duration matches within [`EPS`].
    pub fn find_move(&self, from: VertexId, to: VertexId, duration: f64) -> Option<MoveId> {
        self.outgoing(from).iter().copied().find(|&m| {
            let mv = self.move_action(m);
            mv.to == to && (mv.duration - duration).abs() <= EPS
        })
    }

    /// Human-readable move label, `E->F`.
    pub fn move_label(&self, id: MoveId) -> String {
        let m = self.move_action(id);
        format!("{}->{}", self.vertex(m.from).name, self.vertex(m.to).name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Action {
    Move(MoveId),
    /// Stationary at `vertex`; `duration` may be `f64::INFINITY`.
    Wait { vertex: VertexId, duration: f64 },
}

/// An action paired with its start time. The duration is copied from the
/// move (or carried by the wait) so that plan arithmetic needs no instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimedAction {
    pub action: Action,
    pub start: f64,
    pub duration: f64,
}

impl TimedAction {
    pub fn moving(instance: &Instance, id: MoveId, start: f64) -> Self {
        Self {
            action: Action::Move(id),
            start,
            duration: instance.move_action(id).duration,
        }
    }

    pub fn waiting(vertex: VertexId, start: f64, duration: f64) -> Self {
        Self {
            action: Action::Wait { vertex, duration },
            start,
            duration,
        }
    }

    pub fn is_move(&self) -> bool {
        matches!(self.action, Action::Move(_))
    }

    pub fn is_wait(&self) -> bool {
        matches!(self.action, Action::Wait { .. })
    }

    pub fn move_id(&self) -> Option<MoveId> {
        match self.action {
            Action::Move(m) => Some(m),
            Action::Wait { .. } => None,
        }
    }

    /// End of the closed occupation window `[start, start + duration]`.
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    pub fn from_vertex(&self, instance: &Instance) -> VertexId {
        match self.action {
            Action::Move(m) => instance.move_action(m).from,
            Action::Wait { vertex, .. } => vertex,
        }
    }

    pub fn to_vertex(&self, instance: &Instance) -> VertexId {
        match self.action {
            Action::Move(m) => instance.move_action(m).to,
            Action::Wait { vertex, .. } => vertex,
        }
    }

    /// Same action, different start time.
    pub fn retimed(&self, start: f64) -> Self {
        Self { start, ..*self }
    }

    /// Location of an agent executing this timed action at time `t`.
    pub fn position_at(&self, instance: &Instance, t: f64) -> Result<Point2, ModelError> {
        if !(t >= self.start - EPS && t <= self.end() + EPS) {
            return Err(ModelError::OutsideWindow {
                t,
                start: self.start,
                end: self.end(),
            });
        }
        Ok(match self.action {
            Action::Wait { vertex, .. } => instance.coord(vertex),
            Action::Move(m) => {
                let mv = instance.move_action(m);
                let s = ((t - self.start) / mv.duration).clamp(0.0, 1.0);
                instance.coord(mv.from).lerp(instance.coord(mv.to), s)
            }
        })
    }

    pub fn describe(&self, instance: &Instance) -> String {
        match self.action {
            Action::Move(m) => format!("<{}, {:.5}>", instance.move_label(m), self.start),
            Action::Wait { vertex, duration } => format!(
                "<{}, {:.5}, {}>",
                instance.vertex(vertex).name,
                self.start,
                if duration.is_infinite() {
                    "inf".to_string()
                } else {
                    format!("{:.5}", self.start + duration)
                }
            ),
        }
    }
}

/// A sequence of timed actions for one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub agent: AgentId,
    pub actions: Vec<TimedAction>,
}

impl Plan {
    /// Builds a plan, merging consecutive waits at the same vertex into one.
    pub fn new(agent: AgentId, actions: Vec<TimedAction>) -> Self {
        let mut merged: Vec<TimedAction> = Vec::with_capacity(actions.len());
        for ta in actions {
            if let (Some(last), Action::Wait { vertex, .. }) = (merged.last_mut(), ta.action) {
                if let Action::Wait { vertex: lv, .. } = last.action {
                    if lv == vertex {
                        let duration = last.duration + ta.duration;
                        *last = TimedAction::waiting(vertex, last.start, duration);
                        continue;
                    }
                }
            }
            merged.push(ta);
        }
        Self {
            agent,
            actions: merged,
        }
    }

    /// Plan of an agent that never leaves `vertex`.
    pub fn stay(agent: AgentId, vertex: VertexId) -> Self {
        Self::new(agent, vec![TimedAction::waiting(vertex, 0.0, f64::INFINITY)])
    }

    /// Sum of all action durations except the final infinite wait.
    pub fn duration(&self) -> f64 {
        self.actions
            .iter()
            .filter(|a| a.duration.is_finite())
            .map(|a| a.duration)
            .sum()
    }

    pub fn moves(&self) -> impl Iterator<Item = &TimedAction> {
        self.actions.iter().filter(|a| a.is_move())
    }

    /// Position at any time `t >= 0`, holding the final location afterwards.
    pub fn position_at(&self, instance: &Instance, t: f64) -> Point2 {
        for ta in &self.actions {
            if t <= ta.end() {
                return ta.position_at(instance, t.max(ta.start)).unwrap_or_default();
            }
        }
        match self.actions.last() {
            Some(last) => instance.coord(last.to_vertex(instance)),
            None => Point2::default(),
        }
    }
}

/// Free function form of [`Plan::duration`].
pub fn plan_duration(plan: &Plan) -> f64 {
    plan.duration()
}

/// One plan per instance agent, indexed by [`AgentId`].
#[derive(Debug, Clone, PartialEq)]
pub struct JointPlan {
    pub plans: Vec<Plan>,
}

impl JointPlan {
    pub fn new(plans: Vec<Plan>) -> Self {
        Self { plans }
    }

    pub fn plan(&self, agent: AgentId) -> &Plan {
        &self.plans[agent.0]
    }

    pub fn sum_of_costs(&self) -> f64 {
        self.plans.iter().map(Plan::duration).sum()
    }

    pub fn makespan(&self) -> f64 {
        self.plans.iter().map(Plan::duration).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    SumOfCosts,
    Makespan,
}

impl Objective {
    pub fn value(self, joint: &JointPlan) -> f64 {
        match self {
            Objective::SumOfCosts => joint.sum_of_costs(),
            Objective::Makespan => joint.makespan(),
        }
    }
}

pub fn objective_value(joint: &JointPlan, objective: Objective) -> f64 {
    objective.value(joint)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanViolation {
    Empty,
    AgentMismatch { expected: AgentId, found: AgentId },
    UnknownMove { index: usize },
    MoveDurationMismatch { index: usize, expected: f64, found: f64 },
    NonPositiveDuration { index: usize },
    FirstStartNotZero { start: f64 },
    WrongStartVertex { expected: VertexId, found: VertexId },
    WrongGoalVertex { expected: VertexId, found: VertexId },
    Contiguity { index: usize, expected: f64, found: f64 },
    Disconnected { index: usize },
    FinalNotInfiniteWait,
    InfiniteWaitNotLast { index: usize },
    ConsecutiveWaits { index: usize },
}

impl fmt::Display for PlanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanViolation::Empty => write!(f, "plan is empty"),
            PlanViolation::AgentMismatch { expected, found } => {
                write!(f, "plan for agent #{} stored at slot #{}", found.0, expected.0)
            }
            PlanViolation::UnknownMove { index } => write!(f, "action {index}: unknown move"),
            PlanViolation::MoveDurationMismatch {
                index,
                expected,
                found,
            } => write!(f, "action {index}: move duration {found} differs from {expected}"),
            PlanViolation::NonPositiveDuration { index } => {
                write!(f, "action {index}: non-positive duration")
            }
            PlanViolation::FirstStartNotZero { start } => {
                write!(f, "first action starts at {start}, not 0")
            }
            PlanViolation::WrongStartVertex { expected, found } => write!(
                f,
                "plan starts at vertex #{} instead of #{}",
                found.0, expected.0
            ),
            PlanViolation::WrongGoalVertex { expected, found } => write!(
                f,
                "plan ends at vertex #{} instead of #{}",
                found.0, expected.0
            ),
            PlanViolation::Contiguity {
                index,
                expected,
                found,
            } => write!(f, "action {index}: starts at {found}, expected {expected}"),
            PlanViolation::Disconnected { index } => {
                write!(f, "action {index}: does not start where the previous ended")
            }
            PlanViolation::FinalNotInfiniteWait => {
                write!(f, "final action is not an infinite wait")
            }
            PlanViolation::InfiniteWaitNotLast { index } => {
                write!(f, "action {index}: infinite wait before the end of the plan")
            }
            PlanViolation::ConsecutiveWaits { index } => {
                write!(f, "action {index}: consecutive wait actions")
            }
        }
    }
}

/// Reports every violated plan invariant; an empty list means valid.
pub fn validate_plan(instance: &Instance, plan: &Plan) -> Vec<PlanViolation> {
    let mut out = Vec::new();
    let acts = &plan.actions;
    let Some(first) = acts.first() else {
        out.push(PlanViolation::Empty);
        return out;
    };
    let agent = instance.agent(plan.agent);
    for (index, ta) in acts.iter().enumerate() {
        match ta.action {
            Action::Move(m) => {
                if m.0 >= instance.moves().len() {
                    out.push(PlanViolation::UnknownMove { index });
                    return out;
                }
                let expected = instance.move_action(m).duration;
                if (expected - ta.duration).abs() > EPS {
                    out.push(PlanViolation::MoveDurationMismatch {
                        index,
                        expected,
                        found: ta.duration,
                    });
                }
            }
            Action::Wait { duration, .. } => {
                if !(duration > 0.0) || duration != ta.duration {
                    out.push(PlanViolation::NonPositiveDuration { index });
                }
                if duration.is_infinite() && index + 1 != acts.len() {
                    out.push(PlanViolation::InfiniteWaitNotLast { index });
                }
            }
        }
    }
    if first.start.abs() > EPS {
        out.push(PlanViolation::FirstStartNotZero { start: first.start });
    }
    let s = first.from_vertex(instance);
    if s != agent.start {
        out.push(PlanViolation::WrongStartVertex {
            expected: agent.start,
            found: s,
        });
    }
    for (index, pair) in acts.windows(2).enumerate() {
        let (prev, cur) = (&pair[0], &pair[1]);
        let expected = prev.end();
        if (cur.start - expected).abs() > EPS {
            out.push(PlanViolation::Contiguity {
                index: index + 1,
                expected,
                found: cur.start,
            });
        }
        if cur.from_vertex(instance) != prev.to_vertex(instance) {
            out.push(PlanViolation::Disconnected { index: index + 1 });
        }
        if prev.is_wait() && cur.is_wait() {
            out.push(PlanViolation::ConsecutiveWaits { index: index + 1 });
        }
    }
    let last = acts.last().expect("non-empty");
    let g = last.to_vertex(instance);
    if g != agent.goal {
        out.push(PlanViolation::WrongGoalVertex {
            expected: agent.goal,
            found: g,
        });
    }
    if !(last.is_wait() && last.duration.is_infinite()) {
        out.push(PlanViolation::FinalNotInfiniteWait);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testsuite::junction;

    fn id(inst: &Instance, name: &str) -> VertexId {
        inst.vertex_by_name(name).unwrap()
    }

    fn mv(inst: &Instance, a: &str, b: &str) -> MoveId {
        let (a, b) = (id(inst, a), id(inst, b));
        inst.outgoing(a)
            .iter()
            .copied()
            .find(|&m| inst.move_action(m).to == b)
            .unwrap()
    }

    fn pi1(inst: &Instance) -> Plan {
        Plan::new(
            AgentId(0),
            vec![
                TimedAction::moving(inst, mv(inst, "E", "F"), 0.0),
                TimedAction::moving(inst, mv(inst, "F", "G"), 1.5),
                TimedAction::waiting(id(inst, "G"), 2.5, f64::INFINITY),
            ],
        )
    }

    #[test]
    fn root_plan_of_agent_one_is_valid_with_duration_two_and_a_half() {
        let inst = junction();
        let p = pi1(&inst);
        assert!(validate_plan(&inst, &p).is_empty());
        assert_eq!(p.duration(), 2.5);
    }

    #[test]
    fn staying_plan_has_zero_duration() {
        let inst = junction();
        let p = Plan::stay(AgentId(1), id(&inst, "F"));
        assert!(validate_plan(&inst, &p).is_empty());
        assert_eq!(plan_duration(&p), 0.0);
        let joint = JointPlan::new(vec![p.clone(), p]);
        assert_eq!(objective_value(&joint, Objective::SumOfCosts), 0.0);
        assert_eq!(objective_value(&joint, Objective::Makespan), 0.0);
    }

    #[test]
    fn agent_four_delayed_plan_duration() {
        let inst = junction();
        let t = 1.5 - 1.0 + 2f64.sqrt() / 2.0;
        let p = Plan::new(
            AgentId(3),
            vec![
                TimedAction::waiting(id(&inst, "A"), 0.0, t),
                TimedAction::moving(&inst, mv(&inst, "A", "B"), t),
                TimedAction::waiting(id(&inst, "B"), t + 1.0, f64::INFINITY),
            ],
        );
        assert!(validate_plan(&inst, &p).is_empty());
        assert!((p.duration() - 2.20711).abs() < 1e-5);
    }

    #[test]
    fn early_second_action_is_a_contiguity_violation() {
        let inst = junction();
        let mut p = pi1(&inst);
        p.actions[1].start -= 0.1;
        let v = validate_plan(&inst, &p);
        assert!(v
            .iter()
            .any(|x| matches!(x, PlanViolation::Contiguity { index: 1, .. })));
    }

    #[test]
    fn ending_away_from_goal_is_an_endpoint_violation() {
        let inst = junction();
        let p = Plan::new(
            AgentId(0),
            vec![
                TimedAction::moving(&inst, mv(&inst, "E", "F"), 0.0),
                TimedAction::waiting(id(&inst, "F"), 1.5, f64::INFINITY),
            ],
        );
        let v = validate_plan(&inst, &p);
        assert!(v
            .iter()
            .any(|x| matches!(x, PlanViolation::WrongGoalVertex { .. })));
    }

    #[test]
    fn consecutive_waits_merge_on_construction() {
        let inst = junction();
        let a = id(&inst, "A");
        let p = Plan::new(
            AgentId(3),
            vec![
                TimedAction::waiting(a, 0.0, 0.5),
                TimedAction::waiting(a, 0.5, 0.25),
                TimedAction::moving(&inst, mv(&inst, "A", "B"), 0.75),
                TimedAction::waiting(id(&inst, "B"), 1.75, f64::INFINITY),
            ],
        );
        assert_eq!(p.actions.len(), 3);
        assert_eq!(p.actions[0].duration, 0.75);
        assert!(validate_plan(&inst, &p).is_empty());
    }

    #[test]
    fn position_interpolates_along_the_move() {
        let inst = junction();
        let ta = TimedAction::moving(&inst, mv(&inst, "E", "F"), 0.0);
        let e = inst.coord(id(&inst, "E"));
        let f = inst.coord(id(&inst, "F"));
        assert_eq!(ta.position_at(&inst, 0.0).unwrap(), e);
        assert_eq!(ta.position_at(&inst, 1.5).unwrap(), f);
        let mid = ta.position_at(&inst, 0.75).unwrap();
        assert!(mid.distance(e.lerp(f, 0.5)) < 1e-12);
        assert!(ta.position_at(&inst, 1.6).is_err());
    }

    #[test]
    fn zero_radius_is_rejected() {
        let v = vec![
            Vertex {
                name: "a".into(),
                coord: Point2::new(0.0, 0.0),
            },
            Vertex {
                name: "b".into(),
                coord: Point2::new(1.0, 0.0),
            },
        ];
        let m = vec![MoveAction {
            from: VertexId(0),
            to: VertexId(1),
            duration: 1.0,
        }];
        let ok = Instance::new(
            v.clone(),
            m.clone(),
            vec![Agent {
                name: "1".into(),
                radius: 0.25,
                start: VertexId(0),
                goal: VertexId(1),
            }],
        );
        assert!(ok.is_ok());
        let err = Instance::new(
            v,
            m,
            vec![Agent {
                name: "1".into(),
                radius: 0.0,
                start: VertexId(0),
                goal: VertexId(1),
            }],
        );
        assert!(matches!(err, Err(ModelError::BadRadius { .. })));
    }
}
