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

//! Conflict detection, classification and selection within a joint plan.

use std::cmp::Ordering;

use thiserror::Error;

use crate::constraints::Interval;
use crate::geometry::{self, GeometryError, Track};
use crate::model::{AgentId, Instance, JointPlan, Point2, TimedAction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictKind {
    MoveMove,
    MoveWait,
}

/// One side of a conflict: the agent, the index of the timed action in its
/// plan and the timed action itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConflictSide {
    pub agent: AgentId,
    pub index: usize,
    pub action: TimedAction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conflict {
    pub kind: ConflictKind,
    /// The move in a move-wait conflict; the lower agent id in a move-move one.
    pub first: ConflictSide,
    pub second: ConflictSide,
    /// First maximal interval during which the two actions collide.
    pub collision: Interval,
    /// Intersection interval of the move against a permanent presence at the
    /// wait vertex; move-wait conflicts only.
    pub intersection: Option<Interval>,
}

impl Conflict {
    pub fn agents(&self) -> (AgentId, AgentId) {
        (self.first.agent, self.second.agent)
    }

    pub fn describe(&self, instance: &Instance) -> String {
        format!(
            "{}/{} {} vs {}",
            instance.agent(self.first.agent).name,
            instance.agent(self.second.agent).name,
            self.first.action.describe(instance),
            self.second.action.describe(instance)
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConflictError {
    #[error("agents #{} and #{} collide while both waiting, during {interval}", .agents.0.0, .agents.1.0)]
    WaitWait {
        agents: (AgentId, AgentId),
        interval: Interval,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A colliding pair of timed actions, agents ordered by id.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Collision {
    pub agents: (AgentId, AgentId),
    pub indices: (usize, usize),
    pub interval: Interval,
}

struct Bounds {
    centre: Point2,
    radius: f64,
}

fn bounds(instance: &Instance, ta: &TimedAction) -> Bounds {
    let a = instance.coord(ta.from_vertex(instance));
    let b = instance.coord(ta.to_vertex(instance));
    Bounds {
        centre: a.lerp(b, 0.5),
        radius: 0.5 * a.distance(b),
    }
}

/// Visits every pair of timed actions of two different agents whose
/// occupation windows overlap and whose inflated bounding discs intersect.
/// `f` returns `false` to stop the scan.
fn scan_pairs(
    instance: &Instance,
    joint: &JointPlan,
    mut f: impl FnMut(Collision, &TimedAction, &TimedAction) -> bool,
) {
    let n = joint.plans.len();
    for i in 0..n {
        for j in i + 1..n {
            let (pi, pj) = (&joint.plans[i], &joint.plans[j]);
            let (ri, rj) = (
                instance.agent(AgentId(i)).radius,
                instance.agent(AgentId(j)).radius,
            );
            let reach = ri + rj;
            let (mut a, mut b) = (0, 0);
            while a < pi.actions.len() && b < pj.actions.len() {
                let (x, y) = (&pi.actions[a], &pj.actions[b]);
                if x.start.max(y.start) < x.end().min(y.end()) {
                    let (bx, by) = (bounds(instance, x), bounds(instance, y));
                    if bx.centre.distance(by.centre) < bx.radius + by.radius + reach {
                        let hit = geometry::track_collisions(
                            &Track::of(instance, x),
                            &Track::of(instance, y),
                            reach,
                        );
                        if let Some(&interval) = hit.intervals().first() {
                            let c = Collision {
                                agents: (AgentId(i), AgentId(j)),
                                indices: (a, b),
                                interval,
                            };
                            if !f(c, x, y) {
                                return;
                            }
                        }
                    }
                }
                if x.end() < y.end() {
                    a += 1;
                } else {
                    b += 1;
                }
            }
        }
    }
}

/// Every colliding pair of timed actions.
pub fn all_collisions(instance: &Instance, joint: &JointPlan) -> Vec<Collision> {
    let mut out = Vec::new();
    scan_pairs(instance, joint, |c, _, _| {
        out.push(c);
        true
    });
    out
}

pub fn count_conflicts(instance: &Instance, joint: &JointPlan) -> usize {
    let mut n = 0;
    scan_pairs(instance, joint, |_, _, _| {
        n += 1;
        true
    });
    n
}

fn selection_order(a: &(Collision, bool), b: &(Collision, bool)) -> Ordering {
    a.0.interval
        .start
        .total_cmp(&b.0.interval.start)
        .then(a.1.cmp(&b.1))
        .then(a.0.agents.cmp(&b.0.agents))
        .then(a.0.indices.cmp(&b.0.indices))
}

/// Selects the conflict whose collision interval starts earliest (ties:
/// smaller agent pair, then earlier action indices). Returns `Ok(None)` iff
/// the joint plan is a solution.
pub fn find_first_conflict(
    instance: &Instance,
    joint: &JointPlan,
) -> Result<Option<Conflict>, ConflictError> {
    let mut best: Option<(Collision, bool)> = None;
    scan_pairs(instance, joint, |c, x, y| {
        let cand = (c, x.is_wait() && y.is_wait());
        if best
            .as_ref()
            .is_none_or(|b| selection_order(&cand, b) == Ordering::Less)
        {
            best = Some(cand);
        }
        true
    });
    let Some((c, wait_wait)) = best else {
        return Ok(None);
    };
    if wait_wait {
        return Err(ConflictError::WaitWait {
            agents: c.agents,
            interval: c.interval,
        });
    }
    let side = |agent: AgentId, index: usize| ConflictSide {
        agent,
        index,
        action: joint.plan(agent).actions[index],
    };
    let s0 = side(c.agents.0, c.indices.0);
    let s1 = side(c.agents.1, c.indices.1);
    let conflict = match (s0.action.is_move(), s1.action.is_move()) {
        (true, true) => Conflict {
            kind: ConflictKind::MoveMove,
            first: s0,
            second: s1,
            collision: c.interval,
            intersection: None,
        },
        (m0, _) => {
            let (mv, wait) = if m0 { (s0, s1) } else { (s1, s0) };
            let bar = geometry::intersection_interval(
                instance,
                &mv.action,
                instance.agent(mv.agent).radius,
                wait.action.from_vertex(instance),
                instance.agent(wait.agent).radius,
                c.interval,
            )?;
            Conflict {
                kind: ConflictKind::MoveWait,
                first: mv,
                second: wait,
                collision: c.interval,
                intersection: Some(bar),
            }
        }
    };
    Ok(Some(conflict))
}

/// True iff no two plans conflict.
pub fn is_solution(instance: &Instance, joint: &JointPlan) -> bool {
    let mut clean = true;
    scan_pairs(instance, joint, |_, _, _| {
        clean = false;
        false
    });
    clean
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Agent, MoveAction, Plan, Vertex, VertexId};
    use crate::testsuite::{junction, junction_root_plans, junction_optimal_solution};

    #[test]
    fn root_conflict_of_junction() {
        let inst = junction();
        let root = junction_root_plans(&inst);
        let c = find_first_conflict(&inst, &root).unwrap().unwrap();
        assert_eq!(c.kind, ConflictKind::MoveWait);
        assert_eq!(c.agents(), (AgentId(0), AgentId(1)));
        assert_eq!(inst.move_label(c.first.action.move_id().unwrap()), "E->F");
        assert_eq!(c.first.action.start, 0.0);
        assert!(c.second.action.is_wait() && c.second.action.duration.is_infinite());
        assert!((c.collision.start - (1.5 - 2f64.sqrt() / 2.0)).abs() < 1e-9);
        assert_eq!(c.collision.end, 1.5);
        assert_eq!(c.intersection, Some(c.collision));
        assert!(!is_solution(&inst, &root));
    }

    #[test]
    fn sound_solution_is_conflict_free() {
        let inst = junction();
        let sol = junction_optimal_solution(&inst);
        assert_eq!(find_first_conflict(&inst, &sol), Ok(None));
        assert!(is_solution(&inst, &sol));
        assert_eq!(count_conflicts(&inst, &sol), 0);
    }

    fn two_pairs() -> Instance {
        // two identical head-on corridors far apart: agents (0,1) and (2,3)
        let mut vertices = Vec::new();
        let mut moves = Vec::new();
        for (k, y) in [0.0, 10.0].into_iter().enumerate() {
            for x in 0..3 {
                vertices.push(Vertex {
                    name: format!("{k}{x}"),
                    coord: Point2::new(x as f64, y),
                });
            }
            let base = 3 * k;
            for (a, b) in [(0, 1), (1, 2)] {
                for (u, v) in [(a, b), (b, a)] {
                    moves.push(MoveAction {
                        from: VertexId(base + u),
                        to: VertexId(base + v),
                        duration: 1.0,
                    });
                }
            }
        }
        let agents = (0..4)
            .map(|i| {
                let base = 3 * (i / 2);
                let (s, g) = if i % 2 == 0 { (0, 2) } else { (2, 0) };
                Agent {
                    name: format!("{}", i + 1),
                    radius: 0.25,
                    start: VertexId(base + s),
                    goal: VertexId(base + g),
                }
            })
            .collect();
        Instance::new(vertices, moves, agents).unwrap()
    }

    fn straight(inst: &Instance, agent: usize) -> Plan {
        let a = inst.agent(AgentId(agent));
        let mid = VertexId(3 * (agent / 2) + 1);
        let m1 = inst.find_move(a.start, mid, 1.0).unwrap();
        let m2 = inst.find_move(mid, a.goal, 1.0).unwrap();
        Plan::new(
            AgentId(agent),
            vec![
                TimedAction::moving(inst, m1, 0.0),
                TimedAction::moving(inst, m2, 1.0),
                TimedAction::waiting(a.goal, 2.0, f64::INFINITY),
            ],
        )
    }

    #[test]
    fn ties_pick_the_smaller_agent_pair() {
        let inst = two_pairs();
        let joint = JointPlan::new((0..4).map(|i| straight(&inst, i)).collect());
        let c = find_first_conflict(&inst, &joint).unwrap().unwrap();
        assert_eq!(c.agents(), (AgentId(0), AgentId(1)));
        assert_eq!(c.kind, ConflictKind::MoveMove);
        // two colliding action pairs per corridor
        assert_eq!(count_conflicts(&inst, &joint), 4);
    }

    #[test]
    fn earliest_of_two_episodes_is_selected() {
        let inst = two_pairs();
        // agent 1 parks at the middle vertex of its corridor; agent 2 only
        // starts later, so the episodes on 0->1 come first
        let mid = VertexId(1);
        let a0 = inst.agent(AgentId(0));
        let m1 = inst.find_move(a0.start, mid, 1.0).unwrap();
        let m2 = inst.find_move(mid, a0.goal, 1.0).unwrap();
        let p0 = Plan::new(
            AgentId(0),
            vec![
                TimedAction::moving(&inst, m1, 0.0),
                TimedAction::waiting(mid, 1.0, 1.0),
                TimedAction::moving(&inst, m2, 2.0),
                TimedAction::waiting(a0.goal, 3.0, f64::INFINITY),
            ],
        );
        let a1 = inst.agent(AgentId(1));
        let n1 = inst.find_move(a1.start, mid, 1.0).unwrap();
        let n2 = inst.find_move(mid, a1.goal, 1.0).unwrap();
        let p1 = Plan::new(
            AgentId(1),
            vec![
                TimedAction::waiting(a1.start, 0.0, 0.5),
                TimedAction::moving(&inst, n1, 0.5),
                TimedAction::moving(&inst, n2, 1.5),
                TimedAction::waiting(a1.goal, 2.5, f64::INFINITY),
            ],
        );
        let joint = JointPlan::new(vec![p0, p1, Plan::stay(AgentId(2), inst.agent(AgentId(2)).start), Plan::stay(AgentId(3), inst.agent(AgentId(3)).start)]);
        let all = all_collisions(&inst, &joint);
        assert!(all.len() >= 2);
        let c = find_first_conflict(&inst, &joint).unwrap().unwrap();
        let min = all.iter().map(|c| c.interval.start).fold(f64::INFINITY, f64::min);
        assert_eq!(c.collision.start, min);
    }

    #[test]
    fn single_agent_is_always_a_solution() {
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
        let inst = Instance::new(
            v,
            m,
            vec![Agent {
                name: "1".into(),
                radius: 0.3,
                start: VertexId(0),
                goal: VertexId(1),
            }],
        )
        .unwrap();
        let p = Plan::new(
            AgentId(0),
            vec![
                TimedAction::moving(&inst, crate::model::MoveId(0), 0.0),
                TimedAction::waiting(VertexId(1), 1.0, f64::INFINITY),
            ],
        );
        assert!(is_solution(&inst, &JointPlan::new(vec![p])));
    }

    #[test]
    fn wait_wait_overlap_is_reported_as_model_error() {
        let inst = two_pairs();
        // both agents of corridor 0 "teleport"-wait at the middle vertex;
        // invalid plans, but the detector must refuse to classify them
        let mid = VertexId(1);
        let joint = JointPlan::new(vec![
            Plan::new(AgentId(0), vec![TimedAction::waiting(mid, 0.0, f64::INFINITY)]),
            Plan::new(AgentId(1), vec![TimedAction::waiting(mid, 0.0, f64::INFINITY)]),
            Plan::stay(AgentId(2), VertexId(3)),
            Plan::stay(AgentId(3), VertexId(5)),
        ]);
        assert!(matches!(
            find_first_conflict(&inst, &joint),
            Err(ConflictError::WaitWait { .. })
        ));
    }
}
