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

//! Constraint-tree search.
//!
//! Nodes are expanded in order of (cost, conflict count, id). Each node
//! stores only the constraints added at its creation; the full set of a node
//! is the union along its parent chain. Children share the unchanged plans
//! of their parent.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::branching::{branch, BranchingRule};
use crate::conflicts::{count_conflicts, find_first_conflict, Conflict};
use crate::constraints::{fmt_time, Constraint, ConstraintSet};
use crate::csipp::{build_heuristic, plan_with_heuristic, Heuristic};
use crate::model::{AgentId, Instance, JointPlan, Objective, Plan};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub rule: BranchingRule,
    pub objective: Objective,
    pub max_nodes: usize,
    pub max_wall_time: Duration,
    /// Collect one trace line per expansion in [`SolveResult::trace`].
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rule: BranchingRule::default(),
            objective: Objective::SumOfCosts,
            max_nodes: 100_000,
            max_wall_time: Duration::from_secs(60),
            trace: false,
        }
    }
}

impl SolverConfig {
    pub fn with_rule(rule: BranchingRule) -> Self {
        Self {
            rule,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Solved,
    RootInfeasible,
    NodeLimit,
    TimeLimit,
    /// Every node was expanded or discarded without reaching a solution.
    Exhausted,
    /// Conflict detection or branching failed; see [`SolveResult::error`].
    Failed,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Solved => "solved",
            Self::RootInfeasible => "root-infeasible",
            Self::NodeLimit => "node-limit",
            Self::TimeLimit => "time-limit",
            Self::Exhausted => "exhausted",
            Self::Failed => "failed",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchStats {
    pub expanded: usize,
    pub generated: usize,
    pub replans: usize,
    /// Children dropped because their constrained agent had no plan.
    pub discarded: usize,
    pub wall_time: Duration,
    /// Largest drop between consecutively expanded node costs.
    pub max_pop_regression: f64,
    /// Largest amount by which a child's cost fell below its parent's.
    pub max_child_regression: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub solution: Option<JointPlan>,
    pub cost: Option<f64>,
    /// Constraint set of the node that produced the solution.
    pub constraints: ConstraintSet,
    pub stats: SearchStats,
    pub trace: Vec<String>,
    pub error: Option<String>,
}

impl SolveResult {
    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }
}

struct Node {
    parent: Option<usize>,
    added: Vec<Constraint>,
    plans: Vec<Arc<Plan>>,
    cost: f64,
    conflicts: usize,
}

#[derive(PartialEq)]
struct Key {
    cost: f64,
    conflicts: usize,
    id: usize,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then(other.conflicts.cmp(&self.conflicts))
            .then(other.id.cmp(&self.id))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Tree<'a> {
    instance: &'a Instance,
    objective: Objective,
    nodes: Vec<Node>,
}

impl Tree<'_> {
    fn joint(&self, id: usize) -> JointPlan {
        JointPlan::new(self.nodes[id].plans.iter().map(|p| (**p).clone()).collect())
    }

    fn constraints(&self, id: usize, agent: Option<AgentId>) -> ConstraintSet {
        let mut chain = Vec::new();
        let mut k = Some(id);
        while let Some(i) = k {
            chain.push(i);
            k = self.nodes[i].parent;
        }
        chain
            .iter()
            .rev()
            .flat_map(|&i| self.nodes[i].added.iter().copied())
            .filter(|c| agent.is_none_or(|a| c.agent() == a))
            .collect()
    }

    fn push(&mut self, parent: Option<usize>, added: Vec<Constraint>, plans: Vec<Arc<Plan>>) -> usize {
        let joint = JointPlan::new(plans.iter().map(|p| (**p).clone()).collect());
        let cost = self.objective.value(&joint);
        let conflicts = count_conflicts(self.instance, &joint);
        self.nodes.push(Node {
            parent,
            added,
            plans,
            cost,
            conflicts,
        });
        self.nodes.len() - 1
    }
}

fn trace_line(instance: &Instance, id: usize, cost: f64, c: &Conflict, n: usize) -> String {
    let (a, b) = c.agents();
    format!(
        "node {id} cost {cost:.6} conflict {},{} I^c=[{},{}) rule-output {n} constraints",
        instance.agent(a).name,
        instance.agent(b).name,
        fmt_time(c.collision.start),
        fmt_time(c.collision.end)
    )
}

/// Runs the constraint-tree search on `instance`.
pub fn solve(instance: &Instance, config: &SolverConfig) -> SolveResult {
    let clock = Instant::now();
    let mut stats = SearchStats::default();
    let mut trace = Vec::new();
    let finish = |status, stats: SearchStats, trace, error: Option<String>| SolveResult {
        status,
        solution: None,
        cost: None,
        constraints: ConstraintSet::new(),
        stats: SearchStats {
            wall_time: clock.elapsed(),
            ..stats
        },
        trace,
        error,
    };

    let heuristics: Vec<Heuristic> = instance
        .agent_ids()
        .map(|a| build_heuristic(instance, a))
        .collect();
    let empty = ConstraintSet::new();
    let mut root = Vec::with_capacity(heuristics.len());
    for (a, h) in instance.agent_ids().zip(&heuristics) {
        stats.replans += 1;
        match plan_with_heuristic(instance, a, &empty, h) {
            Some(p) => root.push(Arc::new(p)),
            None => return finish(SolveStatus::RootInfeasible, stats, trace, None),
        }
    }

    let mut tree = Tree {
        instance,
        objective: config.objective,
        nodes: Vec::new(),
    };
    let root_id = tree.push(None, Vec::new(), root);
    stats.generated += 1;
    let mut open = BinaryHeap::new();
    open.push(Key {
        cost: tree.nodes[root_id].cost,
        conflicts: tree.nodes[root_id].conflicts,
        id: root_id,
    });
    let mut last_cost = f64::NEG_INFINITY;

    while let Some(Key { cost, id, .. }) = open.pop() {
        if clock.elapsed() > config.max_wall_time {
            return finish(SolveStatus::TimeLimit, stats, trace, None);
        }
        if stats.expanded >= config.max_nodes {
            return finish(SolveStatus::NodeLimit, stats, trace, None);
        }
        stats.expanded += 1;
        stats.max_pop_regression = stats.max_pop_regression.max(last_cost - cost);
        last_cost = cost;

        let joint = tree.joint(id);
        let conflict = match find_first_conflict(instance, &joint) {
            Ok(None) => {
                return SolveResult {
                    status: SolveStatus::Solved,
                    cost: Some(cost),
                    constraints: tree.constraints(id, None),
                    solution: Some(joint),
                    stats: SearchStats {
                        wall_time: clock.elapsed(),
                        ..stats
                    },
                    trace,
                    error: None,
                };
            }
            Ok(Some(c)) => c,
            Err(e) => return finish(SolveStatus::Failed, stats, trace, Some(e.to_string())),
        };
        let outcome = match branch(config.rule, instance, &conflict) {
            Ok(o) => o,
            Err(e) => return finish(SolveStatus::Failed, stats, trace, Some(e.to_string())),
        };
        if config.trace {
            let n = outcome.for_first.len() + outcome.for_second.len();
            trace.push(trace_line(instance, id, cost, &conflict, n));
        }

        for (agent, added) in [
            (conflict.first.agent, outcome.for_first),
            (conflict.second.agent, outcome.for_second),
        ] {
            let mut cs = tree.constraints(id, Some(agent));
            cs.extend(added.iter().copied());
            stats.replans += 1;
            let Some(p) = plan_with_heuristic(instance, agent, &cs, &heuristics[agent.index()]) else {
                stats.discarded += 1;
                continue;
            };
            let mut plans = tree.nodes[id].plans.clone();
            plans[agent.index()] = Arc::new(p);
            let child = tree.push(Some(id), added, plans);
            stats.generated += 1;
            let node = &tree.nodes[child];
            stats.max_child_regression = stats.max_child_regression.max(cost - node.cost);
            open.push(Key {
                cost: node.cost,
                conflicts: node.conflicts,
                id: child,
            });
        }
    }
    finish(SolveStatus::Exhausted, stats, trace, None)
}

/// One row of a rule comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub rule: BranchingRule,
    pub status: SolveStatus,
    pub sum_of_costs: Option<f64>,
    pub makespan: Option<f64>,
    pub wall_time: Duration,
    pub expanded: usize,
}

/// Solves `instance` once per rule, keeping the order of `rules`.
pub fn compare(
    instance: &Instance,
    rules: &[BranchingRule],
    objective: Objective,
    max_nodes: usize,
    max_wall_time: Duration,
) -> Vec<CompareRow> {
    rules
        .iter()
        .map(|&rule| {
            let r = solve(
                instance,
                &SolverConfig {
                    rule,
                    objective,
                    max_nodes,
                    max_wall_time,
                    trace: false,
                },
            );
            CompareRow {
                rule,
                status: r.status,
                sum_of_costs: r.solution.as_ref().map(JointPlan::sum_of_costs),
                makespan: r.solution.as_ref().map(JointPlan::makespan),
                wall_time: r.stats.wall_time,
                expanded: r.stats.expanded,
            }
        })
        .collect()
}

/// Aligned text table with columns rule / SOC / makespan / time / status.
pub fn render_table(rows: &[CompareRow]) -> String {
    let cost = |c: Option<f64>| c.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
    let mut s = format!(
        "{:<14} {:>10} {:>10} {:>12} {:>16}\n",
        "rule", "SOC", "makespan", "time_ms", "status"
    );
    for r in rows {
        s.push_str(&format!(
            "{:<14} {:>10} {:>10} {:>12.3} {:>16}\n",
            r.rule.to_string(),
            cost(r.sum_of_costs),
            cost(r.makespan),
            r.wall_time.as_secs_f64() * 1e3,
            r.status.to_string()
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::validate_joint;
    use crate::testsuite::junction;

    #[test]
    fn junction_sound_rule_reaches_the_optimum() {
        let inst = junction();
        let r = solve(&inst, &SolverConfig::default());
        assert_eq!(r.status, SolveStatus::Solved);
        let sol = r.solution.as_ref().unwrap();
        assert!((sol.sum_of_costs() - 9.0).abs() < 1e-6);
        assert!((sol.makespan() - 3.0).abs() < 1e-6);
        assert!(validate_joint(&inst, sol, Some(&r.constraints)).is_empty());
        assert!(r.stats.max_pop_regression <= 1e-9);
        assert!(r.stats.max_child_regression <= 1e-9);
    }

    #[test]
    fn junction_standard_rule_is_suboptimal() {
        let inst = junction();
        let r = solve(&inst, &SolverConfig::with_rule(BranchingRule::Standard));
        assert_eq!(r.status, SolveStatus::Solved);
        let sol = r.solution.as_ref().unwrap();
        let expected = 10.0 + std::f64::consts::SQRT_2 / 2.0;
        assert!((sol.sum_of_costs() - expected).abs() < 1e-6, "{}", sol.sum_of_costs());
        assert!((sol.makespan() - 3.5).abs() < 1e-6);
    }

    #[test]
    fn agent_already_at_goal_is_solved_at_the_root() {
        use crate::model::{Agent, Point2, Vertex, VertexId};
        let inst = Instance::new(
            vec![Vertex {
                name: "a".into(),
                coord: Point2::new(0.0, 0.0),
            }],
            vec![],
            vec![Agent {
                name: "1".into(),
                radius: 0.5,
                start: VertexId(0),
                goal: VertexId(0),
            }],
        )
        .unwrap();
        let r = solve(&inst, &SolverConfig::default());
        assert_eq!(r.status, SolveStatus::Solved);
        assert_eq!(r.cost, Some(0.0));
        assert_eq!(r.stats.expanded, 1);
    }

    #[test]
    fn trace_has_one_line_per_non_final_expansion() {
        let inst = junction();
        let r = solve(
            &inst,
            &SolverConfig {
                trace: true,
                ..SolverConfig::default()
            },
        );
        assert_eq!(r.trace.len(), r.stats.expanded - 1);
        assert!(r.trace[0].starts_with("node 0 cost 5.500000 conflict 1,2 I^c=[0.792893,1.500000)"));
        assert!(r.trace[0].ends_with("rule-output 5 constraints"));
    }

    #[test]
    fn node_limit_is_reported() {
        let inst = junction();
        let r = solve(
            &inst,
            &SolverConfig {
                max_nodes: 1,
                ..SolverConfig::default()
            },
        );
        assert_eq!(r.status, SolveStatus::NodeLimit);
        assert!(r.solution.is_none());
    }

    #[test]
    fn solving_is_deterministic() {
        let inst = junction();
        let cfg = SolverConfig {
            trace: true,
            ..SolverConfig::with_rule(BranchingRule::Standard)
        };
        let (a, b) = (solve(&inst, &cfg), solve(&inst, &cfg));
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.solution, b.solution);
    }

    #[test]
    fn compare_keeps_rule_order() {
        let inst = junction();
        let rows = compare(
            &inst,
            &[BranchingRule::Standard, BranchingRule::default()],
            Objective::SumOfCosts,
            100_000,
            Duration::from_secs(10),
        );
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].rule, BranchingRule::Standard);
        assert!((rows[1].sum_of_costs.unwrap() - 9.0).abs() < 1e-6);
        assert!(compare(&inst, &[], Objective::SumOfCosts, 10, Duration::from_secs(1)).is_empty());
        let table = render_table(&rows);
        assert_eq!(table.lines().count(), 3);
        assert!(table.contains("10.707") && table.contains("9.000"));
    }
}
