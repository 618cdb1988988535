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

//! Fixtures, seeded random instances and the cross-module property suites.

use std::collections::{BinaryHeap, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::branching::{branch, soundness_probe, unsoundness_witness, BranchingRule};
use crate::conflicts::{find_first_conflict, Conflict, ConflictKind};
use crate::constraints::{Constraint, ConstraintSet, Interval};
use crate::csipp::{self, earliest_start_violations};
use crate::geometry::{track_collisions, Track};
use crate::model::{
    validate_plan, Agent, AgentId, Instance, JointPlan, ModelError, MoveAction, MoveId, Plan,
    Point2, TimedAction, Vertex, VertexId,
};
use crate::oracle::{brute_force_optimal, validate_joint};
use crate::search::{solve, SolveResult, SolveStatus, SolverConfig};

const JUNCTION_RADIUS: f64 = std::f64::consts::SQRT_2 / 4.0;

fn line_instance(
    points: &[(&str, f64, f64)],
    edges: &[(usize, usize)],
    agents: &[(&str, f64, usize, usize)],
) -> Instance {
    let vertices = points
        .iter()
        .map(|&(n, x, y)| Vertex {
            name: n.into(),
            coord: Point2::new(x, y),
        })
        .collect::<Vec<_>>();
    let mut moves = Vec::new();
    for &(u, v) in edges {
        let d = vertices[u].coord.distance(vertices[v].coord);
        for (a, b) in [(u, v), (v, u)] {
            moves.push(MoveAction {
                from: VertexId(a),
                to: VertexId(b),
                duration: d,
            });
        }
    }
    let agents = agents
        .iter()
        .map(|&(n, r, s, g)| Agent {
            name: n.into(),
            radius: r,
            start: VertexId(s),
            goal: VertexId(g),
        })
        .collect();
    Instance::new(vertices, moves, agents).expect("fixture is valid")
}

/// The seven-vertex, four-agent instance on which the standard rule misses
/// the optimum. All agents have radius `sqrt(2)/4` and move at unit speed.
pub fn junction() -> Instance {
    line_instance(
        &[
            ("A", 0.0, 0.0),
            ("B", 1.0, 0.0),
            ("C", 2.0, 0.0),
            ("D", 3.0, 0.0),
            ("E", 0.5, -1.0),
            ("F", 2.0, -1.0),
            ("G", 3.0, -1.0),
        ],
        &[(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (5, 2)],
        &[
            ("1", JUNCTION_RADIUS, 4, 6),
            ("2", JUNCTION_RADIUS, 5, 5),
            ("3", JUNCTION_RADIUS, 1, 3),
            ("4", JUNCTION_RADIUS, 0, 1),
        ],
    )
}

fn build_plans(instance: &Instance, spec: &[&[(&str, f64)]]) -> JointPlan {
    // each step is either "XY" (move X->Y at t) or "X" (wait at X from t)
    let plans = spec
        .iter()
        .enumerate()
        .map(|(i, steps)| {
            let mut actions: Vec<TimedAction> = Vec::new();
            for (k, &(label, t)) in steps.iter().enumerate() {
                let end = steps.get(k + 1).map_or(f64::INFINITY, |s| s.1);
                let v = |c: char| instance.vertex_by_name(&c.to_string()).expect("vertex");
                let mut cs = label.chars();
                let a = v(cs.next().expect("label"));
                actions.push(match cs.next() {
                    Some(b) => {
                        let b = v(b);
                        let m = instance
                            .outgoing(a)
                            .iter()
                            .copied()
                            .find(|&m| instance.move_action(m).to == b)
                            .expect("move");
                        TimedAction::moving(instance, m, t)
                    }
                    None => TimedAction::waiting(a, t, end - t),
                });
            }
            Plan::new(AgentId(i), actions)
        })
        .collect();
    JointPlan::new(plans)
}

/// Unconstrained shortest plans of [`junction`].
pub fn junction_root_plans(instance: &Instance) -> JointPlan {
    build_plans(
        instance,
        &[
            &[("EF", 0.0), ("FG", 1.5), ("G", 2.5)],
            &[("F", 0.0)],
            &[("BC", 0.0), ("CD", 1.0), ("D", 2.0)],
            &[("AB", 0.0), ("B", 1.0)],
        ],
    )
}

/// Optimal solution of [`junction`]: agent 2 waits for agent 3 to clear C and
/// agent 1 waits for agent 2. Sum of costs 9, makespan 3.
pub fn junction_optimal_solution(instance: &Instance) -> JointPlan {
    build_plans(
        instance,
        &[
            &[("E", 0.0), ("EF", 0.5), ("FG", 2.0), ("G", 3.0)],
            &[("F", 0.0), ("FC", 1.0), ("CF", 2.0), ("F", 3.0)],
            &[("BC", 0.0), ("CD", 1.0), ("D", 2.0)],
            &[("AB", 0.0), ("B", 1.0)],
        ],
    )
}

/// Best solution reachable once agent 2 may not wait at F: agent 3 waits for
/// agent 2's detour and agent 4 trails agent 3. Sum of costs
/// `9.5 + sqrt(2)/2 + 0.5`, makespan 3.5.
pub fn junction_standard_solution(instance: &Instance) -> JointPlan {
    let t4 = 0.5 + std::f64::consts::SQRT_2 / 2.0;
    build_plans(
        instance,
        &[
            &[("EF", 0.0), ("FG", 1.5), ("G", 2.5)],
            &[("FC", 0.0), ("C", 1.0), ("CF", 1.5), ("F", 2.5)],
            &[("B", 0.0), ("BC", 1.5), ("CD", 2.5), ("D", 3.5)],
            &[("A", 0.0), ("AB", t4), ("B", t4 + 1.0)],
        ],
    )
}

/// Two agents crossing at right angles on straight two-metre moves.
pub fn crossing_fixture() -> (Instance, JointPlan) {
    let inst = line_instance(
        &[("W", -1.0, 0.0), ("E", 1.0, 0.0), ("S", 0.0, -1.0), ("N", 0.0, 1.0)],
        &[(0, 1), (2, 3)],
        &[("1", 0.25, 0, 1), ("2", 0.25, 2, 3)],
    );
    let joint = build_plans(&inst, &[&[("WE", 0.0), ("E", 2.0)], &[("SN", 0.0), ("N", 2.0)]]);
    (inst, joint)
}

/// A unit-speed move passing 0.3 m from a vertex where the other agent
/// waits for 2 s before leaving: a finite-wait move-wait conflict.
pub fn witness_fixture() -> (Instance, JointPlan) {
    let inst = line_instance(
        &[("P", 0.0, 0.0), ("Q", 4.0, 0.0), ("V", 2.0, 0.3), ("W", 2.0, 3.0)],
        &[(0, 1), (2, 3)],
        &[("1", 0.25, 0, 1), ("2", 0.25, 2, 3)],
    );
    let joint = build_plans(&inst, &[&[("PQ", 0.0), ("Q", 4.0)], &[("V", 0.0), ("VW", 2.0), ("W", 4.7)]]);
    (inst, joint)
}

/// Parameters of a random instance. Moves are unit-speed straight segments.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstanceSpec {
    /// Inclusive range of non-spur vertex counts.
    pub vertices: (usize, usize),
    /// Number of extra degree-one vertices hung off the graph.
    pub spurs: usize,
    /// Probability of each non-tree edge.
    pub edge_density: f64,
    pub agents: usize,
    /// Radii are drawn as this fraction range of the shortest edge or vertex
    /// distance.
    pub radius_fraction: (f64, f64),
    pub min_spacing: f64,
    /// Side of the square the vertices are placed in; `None` sizes it from
    /// the vertex count.
    pub extent: Option<f64>,
    pub seed: u64,
}

impl Default for RandomInstanceSpec {
    fn default() -> Self {
        Self {
            vertices: (4, 5),
            spurs: 1,
            edge_density: 0.3,
            agents: 2,
            radius_fraction: (0.15, 0.45),
            min_spacing: 1.0,
            extent: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("could not place vertex {index} with spacing {spacing} after {attempts} attempts")]
    Spacing {
        index: usize,
        spacing: f64,
        attempts: usize,
    },
    #[error("{agents} agents need distinct starts and goals but only {vertices} vertices exist")]
    TooManyAgents { agents: usize, vertices: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no certified-solvable instance after {0} attempts")]
    Unsolvable(usize),
}

const PLACEMENT_ATTEMPTS: usize = 1000;

fn place(rng: &mut ChaCha8Rng, pts: &[Point2], spacing: f64, side: f64, index: usize) -> Result<Point2, GenError> {
    for _ in 0..PLACEMENT_ATTEMPTS {
        let p = Point2::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side));
        if pts.iter().all(|q| q.distance(p) >= spacing) {
            return Ok(p);
        }
    }
    Err(GenError::Spacing {
        index,
        spacing,
        attempts: PLACEMENT_ATTEMPTS,
    })
}

/// Deterministic random instance: rejection-sampled vertices, a random
/// spanning tree plus extra edges, spur vertices and random agents.
pub fn gen_instance(spec: &RandomInstanceSpec) -> Result<Instance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = rng.gen_range(spec.vertices.0..=spec.vertices.1.max(spec.vertices.0));
    let side = spec
        .extent
        .unwrap_or_else(|| spec.min_spacing * (2.0 * (n + spec.spurs) as f64).sqrt().max(1.5));
    let mut pts: Vec<Point2> = Vec::new();
    for i in 0..n {
        pts.push(place(&mut rng, &pts, spec.min_spacing, side, i)?);
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 1..n {
        edges.push((rng.gen_range(0..i), i));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !edges.contains(&(i, j)) && !edges.contains(&(j, i)) && rng.gen_bool(spec.edge_density) {
                edges.push((i, j));
            }
        }
    }
    for s in 0..spec.spurs {
        if n == 0 {
            break;
        }
        let index = pts.len();
        let mut placed = None;
        for _ in 0..PLACEMENT_ATTEMPTS {
            let anchor = rng.gen_range(0..n);
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let len = spec.min_spacing * rng.gen_range(1.0..1.5);
            let p = pts[anchor] + Point2::new(angle.cos(), angle.sin()).scale(len);
            if pts.iter().all(|q| q.distance(p) >= spec.min_spacing) {
                placed = Some((anchor, p));
                break;
            }
        }
        let (anchor, p) = placed.ok_or(GenError::Spacing {
            index: n + s,
            spacing: spec.min_spacing,
            attempts: PLACEMENT_ATTEMPTS,
        })?;
        pts.push(p);
        edges.push((anchor, index));
    }

    let total = pts.len();
    if spec.agents > total {
        return Err(GenError::TooManyAgents {
            agents: spec.agents,
            vertices: total,
        });
    }
    let min_edge = edges
        .iter()
        .map(|&(u, v)| pts[u].distance(pts[v]))
        .fold(f64::INFINITY, f64::min);
    let mut min_gap = f64::INFINITY;
    for i in 0..total {
        for j in i + 1..total {
            min_gap = min_gap.min(pts[i].distance(pts[j]));
        }
    }
    let base = min_edge.min(min_gap);
    let mut starts: Vec<usize> = (0..total).collect();
    let mut goals: Vec<usize> = (0..total).collect();
    starts.shuffle(&mut rng);
    goals.shuffle(&mut rng);
    let agents: Vec<(String, f64, usize, usize)> = (0..spec.agents)
        .map(|i| {
            let r = base * rng.gen_range(spec.radius_fraction.0..=spec.radius_fraction.1);
            ((i + 1).to_string(), r, starts[i], goals[i])
        })
        .collect();

    let vertices = pts
        .iter()
        .enumerate()
        .map(|(i, &p)| Vertex {
            name: format!("v{i}"),
            coord: p,
        })
        .collect::<Vec<_>>();
    let mut moves = Vec::new();
    for &(u, v) in &edges {
        let d = pts[u].distance(pts[v]);
        for (a, b) in [(u, v), (v, u)] {
            moves.push(MoveAction {
                from: VertexId(a),
                to: VertexId(b),
                duration: d,
            });
        }
    }
    let agents = agents
        .into_iter()
        .map(|(name, radius, s, g)| Agent {
            name,
            radius,
            start: VertexId(s),
            goal: VertexId(g),
        })
        .collect();
    Ok(Instance::new(vertices, moves, agents)?)
}

/// Shortest path for `agent` avoiding discs parked at `obstacles`, as a list
/// of moves. Vertices whose disc overlaps an obstacle and moves whose swept
/// disc touches one are unusable.
fn static_path(instance: &Instance, agent: AgentId, obstacles: &[(Point2, f64)]) -> Option<Vec<MoveId>> {
    let a = instance.agent(agent);
    let blocked_vertex = |v: VertexId| {
        let p = instance.coord(v);
        obstacles.iter().any(|&(q, r)| p.distance(q) < a.radius + r)
    };
    let blocked_move = |m: MoveId| {
        let track = Track::of(instance, &TimedAction::moving(instance, m, 0.0));
        obstacles.iter().any(|&(q, r)| {
            !track_collisions(&track, &Track::stationary(q, f64::NEG_INFINITY, f64::INFINITY), a.radius + r)
                .is_empty()
        })
    };
    if blocked_vertex(a.start) {
        return None;
    }
    let n = instance.vertices().len();
    let mut dist = vec![f64::INFINITY; n];
    let mut via: Vec<Option<MoveId>> = vec![None; n];
    dist[a.start.index()] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push((std::cmp::Reverse(OrdF64(0.0)), a.start.index()));
    let mut done = HashSet::new();
    while let Some((std::cmp::Reverse(OrdF64(d)), u)) = heap.pop() {
        if !done.insert(u) {
            continue;
        }
        if u == a.goal.index() {
            let mut path = Vec::new();
            let mut v = u;
            while let Some(m) = via[v] {
                path.push(m);
                v = instance.move_action(m).from.index();
            }
            path.reverse();
            return Some(path);
        }
        for &m in instance.outgoing(VertexId(u)) {
            let mv = instance.move_action(m);
            let nd = d + mv.duration;
            if nd < dist[mv.to.index()] && !blocked_vertex(mv.to) && !blocked_move(m) {
                dist[mv.to.index()] = nd;
                via[mv.to.index()] = Some(m);
                heap.push((std::cmp::Reverse(OrdF64(nd)), mv.to.index()));
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// A collision-free joint plan in which agents travel one at a time, each
/// while the others are parked (earlier agents at their goals, later ones at
/// their starts). Its existence proves the instance solvable.
pub fn sequential_certificate(instance: &Instance) -> Option<JointPlan> {
    for order in [
        instance.agent_ids().collect::<Vec<_>>(),
        instance.agent_ids().rev().collect::<Vec<_>>(),
    ] {
        if let Some(j) = sequential_in_order(instance, &order) {
            return Some(j);
        }
    }
    None
}

fn sequential_in_order(instance: &Instance, order: &[AgentId]) -> Option<JointPlan> {
    let mut plans: Vec<Option<Plan>> = vec![None; instance.agents().len()];
    let mut clock = 0.0;
    for (k, &a) in order.iter().enumerate() {
        let obstacles: Vec<(Point2, f64)> = order
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(j, &b)| {
                let ag = instance.agent(b);
                let v = if j < k { ag.goal } else { ag.start };
                (instance.coord(v), ag.radius)
            })
            .collect();
        let path = static_path(instance, a, &obstacles)?;
        let mut actions = Vec::new();
        let mut t = clock;
        if !path.is_empty() && clock > 0.0 {
            actions.push(TimedAction::waiting(instance.agent(a).start, 0.0, clock));
        }
        for m in path.iter().copied() {
            let ta = TimedAction::moving(instance, m, t);
            t = ta.end();
            actions.push(ta);
        }
        if path.is_empty() {
            t = 0.0;
        }
        actions.push(TimedAction::waiting(instance.agent(a).goal, t, f64::INFINITY));
        clock = clock.max(t);
        plans[a.index()] = Some(Plan::new(a, actions));
    }
    let joint = JointPlan::new(plans.into_iter().map(|p| p.expect("every agent planned")).collect());
    validate_joint(instance, &joint, None).is_empty().then_some(joint)
}

/// Random instance with a solvability certificate. Tries derived seeds
/// until one certifies.
pub fn gen_solvable_instance(spec: &RandomInstanceSpec) -> Result<(Instance, JointPlan), GenError> {
    const ATTEMPTS: usize = 200;
    for k in 0..ATTEMPTS {
        let s = RandomInstanceSpec {
            seed: spec.seed.wrapping_mul(1_000_003).wrapping_add(k as u64),
            ..spec.clone()
        };
        let inst = match gen_instance(&s) {
            Ok(i) => i,
            Err(GenError::Spacing { .. }) => continue,
            Err(e) => return Err(e),
        };
        if let Some(cert) = sequential_certificate(&inst) {
            return Ok((inst, cert));
        }
    }
    Err(GenError::Unsolvable(ATTEMPTS))
}

/// One line of a suite report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub suite: String,
    pub seed: Option<u64>,
    pub passed: bool,
    pub detail: String,
}

impl SuiteEntry {
    fn new(suite: &str, seed: Option<u64>, passed: bool, detail: String) -> Self {
        Self {
            suite: suite.into(),
            seed,
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &SuiteEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{} {} seed={} {}",
                if e.passed { "PASS" } else { "FAIL" },
                e.suite,
                e.seed.map_or_else(|| "-".into(), |x| x.to_string()),
                e.detail
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Seeded solvable instances, one per seed in `seeds`.
pub fn random_suite(template: &RandomInstanceSpec, seeds: impl IntoIterator<Item = u64>) -> Vec<(u64, Instance)> {
    seeds
        .into_iter()
        .filter_map(|seed| {
            gen_solvable_instance(&RandomInstanceSpec {
                seed,
                ..template.clone()
            })
            .ok()
            .map(|(i, _)| (seed, i))
        })
        .collect()
}

/// Five vertices (four plus one spur) and two agents, seed 1. Its output is
/// pinned in `fixtures/golden_seed1.json`.
pub fn golden_spec() -> RandomInstanceSpec {
    RandomInstanceSpec {
        vertices: (4, 4),
        spurs: 1,
        agents: 2,
        seed: 1,
        ..RandomInstanceSpec::default()
    }
}

pub fn two_agent_template() -> RandomInstanceSpec {
    RandomInstanceSpec {
        vertices: (3, 5),
        spurs: 1,
        agents: 2,
        ..RandomInstanceSpec::default()
    }
}

pub fn desk_template() -> RandomInstanceSpec {
    RandomInstanceSpec {
        vertices: (4, 7),
        spurs: 2,
        agents: 4,
        edge_density: 0.35,
        ..RandomInstanceSpec::default()
    }
}

/// Solves with the sound rule and checks the cost against the oracle
/// bracket at step `eps`.
pub fn oracle_check(seed: u64, instance: &Instance, eps: f64) -> SuiteEntry {
    const NAME: &str = "oracle-equivalence";
    let r = solve(instance, &SolverConfig::default());
    let (Some(cost), Some(sol)) = (r.cost, &r.solution) else {
        return SuiteEntry::new(NAME, Some(seed), false, format!("solver status {}", r.status));
    };
    let audited = run_is_clean(instance, &r, sol);
    let horizon = sequential_certificate(instance).map_or(30.0, |c| c.sum_of_costs())
        + instance.agents().len() as f64 * eps
        + 1.0;
    match brute_force_optimal(instance, eps, horizon) {
        Ok(o) => {
            let ok = audited && cost >= o.cost_lower - 1e-9 && cost <= o.cost_upper + 1e-9;
            SuiteEntry::new(
                NAME,
                Some(seed),
                ok,
                format!(
                    "solver {cost:.6} oracle [{:.6}, {:.6}]{}",
                    o.cost_lower,
                    o.cost_upper,
                    if audited { "" } else { " audit failed" }
                ),
            )
        }
        Err(e) => SuiteEntry::new(NAME, Some(seed), false, e.to_string()),
    }
}

/// The solution validates against the returning node's constraints, every
/// plan passes the earliest-start check and expanded costs never dropped.
pub fn run_is_clean(instance: &Instance, result: &SolveResult, solution: &JointPlan) -> bool {
    validate_joint(instance, solution, Some(&result.constraints)).is_empty()
        && solution
            .plans
            .iter()
            .all(|p| earliest_start_violations(instance, p, &result.constraints).is_empty())
        && result.stats.max_pop_regression <= 1e-9
        && result.stats.max_child_regression <= 1e-9
}

/// Move-wait conflicts met on random descents of the sound-rule constraint
/// tree of each instance.
pub fn collect_move_wait_conflicts(
    instances: &[(u64, Instance)],
    per_instance: usize,
    seed: u64,
) -> Vec<(usize, Conflict)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (idx, (_, inst)) in instances.iter().enumerate() {
        let mut found = 0;
        for _walk in 0..16 {
            let Some(mut joint) = root_plans(inst) else {
                break;
            };
            let mut cs = ConstraintSet::new();
            for _depth in 0..12 {
                let Ok(Some(c)) = find_first_conflict(inst, &joint) else {
                    break;
                };
                if c.kind == ConflictKind::MoveWait && found < per_instance {
                    out.push((idx, c));
                    found += 1;
                }
                let Ok(outcome) = branch(BranchingRule::default(), inst, &c) else {
                    break;
                };
                let (agent, added) = if rng.gen_bool(0.5) {
                    (c.first.agent, outcome.for_first)
                } else {
                    (c.second.agent, outcome.for_second)
                };
                cs.extend(added);
                let Some(p) = csipp::plan(inst, agent, &cs) else {
                    break;
                };
                joint.plans[agent.index()] = p;
            }
            if found >= per_instance {
                break;
            }
        }
    }
    out
}

fn root_plans(instance: &Instance) -> Option<JointPlan> {
    let empty = ConstraintSet::new();
    instance
        .agent_ids()
        .map(|a| csipp::plan(instance, a, &empty))
        .collect::<Option<Vec<_>>>()
        .map(JointPlan::new)
}

/// Number of sampled forbidden pairs and how many were collision-free.
pub fn sampling_check(instance: &Instance, conflict: &Conflict, samples: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match branch(BranchingRule::default(), instance, conflict) {
        Ok(out) => {
            let r = soundness_probe(instance, conflict, &out, samples, &mut rng);
            (r.samples, r.collision_free.len())
        }
        Err(_) => (0, 0),
    }
}

/// Witness search under the standard rule on a finite-wait conflict.
pub fn witness_check(instance: &Instance, conflict: &Conflict) -> Option<(TimedAction, TimedAction)> {
    let out = branch(BranchingRule::Standard, instance, conflict).ok()?;
    unsoundness_witness(instance, conflict, &out).ok().flatten()
}

/// Outcome of solving one instance with the sound and the standard rule.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminationRecord {
    pub seed: u64,
    pub sound_status: SolveStatus,
    pub sound_cost: Option<f64>,
    pub sound_expanded: usize,
    pub standard_status: SolveStatus,
    pub standard_cost: Option<f64>,
    /// Every solved run's solution validated and every plan passed the
    /// earliest-start check.
    pub solutions_valid: bool,
    /// Largest drop in expanded node cost across both runs.
    pub max_regression: f64,
}

impl TerminationRecord {
    pub fn suboptimality_exhibit(&self) -> bool {
        matches!((self.sound_cost, self.standard_cost), (Some(a), Some(b)) if b > a + 1e-6)
    }
}

/// Solves `instance` under both rules with a node budget of `max_nodes`.
pub fn termination_check(seed: u64, instance: &Instance, max_nodes: usize) -> TerminationRecord {
    let run = |rule| {
        solve(
            instance,
            &SolverConfig {
                max_nodes,
                ..SolverConfig::with_rule(rule)
            },
        )
    };
    let (sound, standard) = (run(BranchingRule::default()), run(BranchingRule::Standard));
    let valid = [&sound, &standard]
        .into_iter()
        .all(|r| r.solution.as_ref().is_none_or(|sol| run_is_clean(instance, r, sol)));
    TerminationRecord {
        seed,
        sound_status: sound.status,
        sound_cost: sound.cost,
        sound_expanded: sound.stats.expanded,
        standard_status: standard.status,
        standard_cost: standard.cost,
        solutions_valid: valid,
        max_regression: sound
            .stats
            .max_pop_regression
            .max(sound.stats.max_child_regression)
            .max(standard.stats.max_pop_regression)
            .max(standard.stats.max_child_regression),
    }
}

/// Counts from [`monotonicity_check`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MonotonicityCounts {
    /// Pairs where at least the smaller set was feasible.
    pub pairs: usize,
    /// Pairs where the larger set gave a shorter plan or became feasible.
    pub violations: usize,
    /// Plans failing validity, constraint satisfaction or earliest start.
    pub bad_plans: usize,
}

fn random_constraint(instance: &Instance, agent: AgentId, rng: &mut impl Rng) -> Constraint {
    let start = rng.gen_range(0.0..4.0);
    let interval = Interval::new(start, start + rng.gen_range(0.01..1.5)).expect("positive length");
    if rng.gen_bool(0.5) {
        Constraint::Motion {
            agent,
            mv: MoveId(rng.gen_range(0..instance.moves().len())),
            interval,
        }
    } else {
        Constraint::Vertex {
            agent,
            vertex: VertexId(rng.gen_range(0..instance.vertices().len())),
            interval,
        }
    }
}

/// Plans one agent under a random constraint set and under a random
/// superset, `pairs` times over `instances`, and checks that the superset
/// never yields a shorter plan.
pub fn monotonicity_check(instances: &[Instance], pairs: usize, seed: u64) -> MonotonicityCounts {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = MonotonicityCounts::default();
    let usable: Vec<&Instance> = instances
        .iter()
        .filter(|i| !i.agents().is_empty() && !i.moves().is_empty())
        .collect();
    if usable.is_empty() {
        return counts;
    }
    let mut attempts = 0;
    while counts.pairs < pairs && attempts < 20 * pairs {
        attempts += 1;
        let inst = usable[rng.gen_range(0..usable.len())];
        let agent = AgentId(rng.gen_range(0..inst.agents().len()));
        let mut small = ConstraintSet::new();
        for _ in 0..rng.gen_range(0..6) {
            small.push(random_constraint(inst, agent, &mut rng));
        }
        let mut large = small.clone();
        for _ in 0..rng.gen_range(1..6) {
            large.push(random_constraint(inst, agent, &mut rng));
        }
        let (p, q) = (csipp::plan(inst, agent, &small), csipp::plan(inst, agent, &large));
        let Some(p) = p else {
            continue;
        };
        counts.pairs += 1;
        let mut check = |plan: &Plan, cs: &ConstraintSet| {
            if !(validate_plan(inst, plan).is_empty()
                && cs.is_satisfied_by(plan)
                && earliest_start_violations(inst, plan, cs).is_empty())
            {
                counts.bad_plans += 1;
            }
        };
        check(&p, &small);
        if let Some(q) = &q {
            check(q, &large);
            if q.duration() + 1e-9 < p.duration() {
                counts.violations += 1;
            }
        }
    }
    counts
}

/// Sizes of the suites run by [`run_property_suites`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub oracle_instances: usize,
    pub oracle_eps: f64,
    pub sampling_conflicts: usize,
    pub samples_per_conflict: usize,
    pub termination_instances: usize,
    pub max_nodes: usize,
    pub monotonicity_pairs: usize,
    pub base_seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            oracle_instances: 20,
            oracle_eps: 0.05,
            sampling_conflicts: 50,
            samples_per_conflict: 200,
            termination_instances: 50,
            max_nodes: 100_000,
            monotonicity_pairs: 200,
            base_seed: 1,
        }
    }
}

/// Runs the cross-module suites and reports one entry per check.
pub fn run_property_suites(cfg: &SuiteConfig) -> SuiteReport {
    let mut report = SuiteReport::default();
    let seeds = |n: usize, offset: u64| (0..n as u64).map(move |k| cfg.base_seed + offset + k);

    let pairs = random_suite(&two_agent_template(), seeds(cfg.oracle_instances, 0));
    for (seed, inst) in &pairs {
        report.entries.push(oracle_check(*seed, inst, cfg.oracle_eps));
    }

    let desk = random_suite(&desk_template(), seeds(cfg.termination_instances, 10_000));
    let sources: Vec<(u64, Instance)> = pairs.iter().chain(&desk).cloned().collect();
    let conflicts = collect_move_wait_conflicts(&sources, 4, cfg.base_seed);
    let (mut samples, mut free) = (0, 0);
    for (k, (idx, c)) in conflicts.iter().take(cfg.sampling_conflicts).enumerate() {
        let (s, f) = sampling_check(&sources[*idx].1, c, cfg.samples_per_conflict, cfg.base_seed + k as u64);
        samples += s;
        free += f;
    }
    let used = conflicts.len().min(cfg.sampling_conflicts);
    report.entries.push(SuiteEntry::new(
        "soundness-sampling",
        Some(cfg.base_seed),
        free == 0 && used >= cfg.sampling_conflicts,
        format!("{used} conflicts, {samples} samples, {free} collision-free"),
    ));

    let (inst, joint) = witness_fixture();
    let witness = find_first_conflict(&inst, &joint)
        .ok()
        .flatten()
        .and_then(|c| witness_check(&inst, &c));
    report.entries.push(SuiteEntry::new(
        "unsoundness-witness",
        None,
        witness.is_some(),
        match witness {
            Some((m, w)) => format!("move at {:.6}, wait [{:.6}, {:.6}]", m.start, w.start, w.end()),
            None => "no witness".into(),
        },
    ));

    let mut pool: Vec<Instance> = vec![junction()];
    pool.extend(pairs.iter().map(|(_, i)| i.clone()));
    pool.extend(desk.iter().map(|(_, i)| i.clone()));
    let m = monotonicity_check(&pool, cfg.monotonicity_pairs, cfg.base_seed);
    report.entries.push(SuiteEntry::new(
        "csipp-monotonicity",
        Some(cfg.base_seed),
        m.pairs >= cfg.monotonicity_pairs && m.violations == 0 && m.bad_plans == 0,
        format!("{} pairs, {} violations, {} bad plans", m.pairs, m.violations, m.bad_plans),
    ));

    let mut exhibits = 0;
    for (seed, inst) in &desk {
        let r = termination_check(*seed, inst, cfg.max_nodes);
        exhibits += usize::from(r.suboptimality_exhibit());
        report.entries.push(SuiteEntry::new(
            "termination",
            Some(*seed),
            r.sound_status == SolveStatus::Solved && r.solutions_valid && r.max_regression <= 1e-9,
            format!(
                "sound {} cost {:?} expanded {}; standard {} cost {:?}",
                r.sound_status, r.sound_cost, r.sound_expanded, r.standard_status, r.standard_cost
            ),
        ));
    }
    report.entries.push(SuiteEntry::new(
        "suboptimality-exhibits",
        None,
        true,
        format!("{exhibits} standard-rule runs costlier than the sound rule"),
    ));
    report
}
