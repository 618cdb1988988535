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

//! JSON instance and solution files.
//!
//! Instance:
//!
//! ```json
//! { "vertices": [{"id": "A", "x": 0, "y": 0}],
//!   "edges":    [{"u": "A", "v": "B", "duration": 1, "bidirectional": true}],
//!   "agents":   [{"id": "1", "radius": 0.35, "start": "A", "goal": "B"}] }
//! ```
//!
//! Solution:
//!
//! ```json
//! { "plans": [{"agent": "1", "actions": [
//!       {"kind": "move", "from": "A", "to": "B", "start": 0, "duration": 1},
//!       {"kind": "wait", "from": "B", "to": "B", "start": 1, "duration": "inf"}]}],
//!   "sum_of_costs": 1, "makespan": 1 }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Action, Agent, AgentId, Instance, JointPlan, ModelError, MoveAction, Plan, Point2, TimedAction,
    Vertex,
};
use crate::search::CompareRow;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("no move {from}->{to} with duration {duration}")]
    UnknownMove {
        from: String,
        to: String,
        duration: f64,
    },
    #[error("wait action must stay at one vertex, got {from}->{to}")]
    MovingWait { from: String, to: String },
    #[error("bad duration: {0}")]
    BadDuration(String),
    #[error("no plan for agent `{0}`")]
    MissingPlan(String),
    #[error("more than one plan for agent `{0}`")]
    DuplicatePlan(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: String,
    pub x: f64,
    pub y: f64,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub duration: f64,
    #[serde(default = "yes")]
    pub bidirectional: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentRecord {
    pub id: String,
    pub radius: f64,
    pub start: String,
    pub goal: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub agents: Vec<AgentRecord>,
}

/// A finite number of seconds or the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DurationRecord {
    Finite(f64),
    Text(String),
}

impl DurationRecord {
    fn from_seconds(d: f64) -> Self {
        if d.is_infinite() {
            Self::Text("inf".into())
        } else {
            Self::Finite(d)
        }
    }

    fn seconds(&self) -> Result<f64, IoError> {
        match self {
            Self::Finite(d) => Ok(*d),
            Self::Text(s) if s == "inf" => Ok(f64::INFINITY),
            Self::Text(s) => Err(IoError::BadDuration(s.clone())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    Move,
    Wait,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub kind: ActionKind,
    pub from: String,
    pub to: String,
    pub start: f64,
    pub duration: DurationRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub agent: String,
    pub actions: Vec<ActionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub plans: Vec<PlanRecord>,
    pub sum_of_costs: f64,
    pub makespan: f64,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance, IoError> {
        let vertices: Vec<Vertex> = self
            .vertices
            .into_iter()
            .map(|v| Vertex {
                name: v.id,
                coord: Point2::new(v.x, v.y),
            })
            .collect();
        let lookup = |name: &str| {
            vertices
                .iter()
                .position(|v| v.name == name)
                .map(crate::model::VertexId)
                .ok_or_else(|| IoError::UnknownVertex(name.to_string()))
        };
        let mut moves = Vec::new();
        for e in &self.edges {
            let (u, v) = (lookup(&e.u)?, lookup(&e.v)?);
            moves.push(MoveAction {
                from: u,
                to: v,
                duration: e.duration,
            });
            if e.bidirectional {
                moves.push(MoveAction {
                    from: v,
                    to: u,
                    duration: e.duration,
                });
            }
        }
        let agents = self
            .agents
            .iter()
            .map(|a| {
                Ok(Agent {
                    name: a.id.clone(),
                    radius: a.radius,
                    start: lookup(&a.start)?,
                    goal: lookup(&a.goal)?,
                })
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(Instance::new(vertices, moves, agents)?)
    }

    /// Lists every directed move as its own one-way edge, so that reading
    /// the file back reproduces the move order exactly.
    pub fn from_instance(instance: &Instance) -> Self {
        let vname = |v: crate::model::VertexId| instance.vertex(v).name.clone();
        Self {
            vertices: instance
                .vertices()
                .iter()
                .map(|v| VertexRecord {
                    id: v.name.clone(),
                    x: v.coord.x,
                    y: v.coord.y,
                })
                .collect(),
            edges: instance
                .moves()
                .iter()
                .map(|m| EdgeRecord {
                    u: vname(m.from),
                    v: vname(m.to),
                    duration: m.duration,
                    bidirectional: false,
                })
                .collect(),
            agents: instance
                .agents()
                .iter()
                .map(|a| AgentRecord {
                    id: a.name.clone(),
                    radius: a.radius,
                    start: vname(a.start),
                    goal: vname(a.goal),
                })
                .collect(),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    serde_json::from_str::<InstanceFile>(text)?.into_instance()
}

pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(instance))
        .expect("instance records always serialize")
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance, IoError> {
    parse_instance(&read(path.as_ref())?)
}

/// Parses a solution against `instance`. Plans are kept exactly as written
/// so that validation sees any malformed sequence.
pub fn parse_solution(instance: &Instance, text: &str) -> Result<JointPlan, IoError> {
    let file: SolutionFile = serde_json::from_str(text)?;
    let vertex = |name: &str| {
        instance
            .vertex_by_name(name)
            .ok_or_else(|| IoError::UnknownVertex(name.to_string()))
    };
    let mut plans: Vec<Option<Plan>> = vec![None; instance.agents().len()];
    for rec in &file.plans {
        let agent = instance
            .agent_by_name(&rec.agent)
            .ok_or_else(|| IoError::UnknownAgent(rec.agent.clone()))?;
        let mut actions = Vec::with_capacity(rec.actions.len());
        for a in &rec.actions {
            let (from, to) = (vertex(&a.from)?, vertex(&a.to)?);
            let duration = a.duration.seconds()?;
            actions.push(match a.kind {
                ActionKind::Move => {
                    let m = instance
                        .find_move(from, to, duration)
                        .ok_or_else(|| IoError::UnknownMove {
                            from: a.from.clone(),
                            to: a.to.clone(),
                            duration,
                        })?;
                    TimedAction {
                        action: Action::Move(m),
                        start: a.start,
                        duration,
                    }
                }
                ActionKind::Wait => {
                    if from != to {
                        return Err(IoError::MovingWait {
                            from: a.from.clone(),
                            to: a.to.clone(),
                        });
                    }
                    TimedAction::waiting(from, a.start, duration)
                }
            });
        }
        let slot = &mut plans[agent.index()];
        if slot.is_some() {
            return Err(IoError::DuplicatePlan(rec.agent.clone()));
        }
        *slot = Some(Plan { agent, actions });
    }
    let plans = plans
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| IoError::MissingPlan(instance.agent(AgentId(i)).name.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(JointPlan::new(plans))
}

pub fn load_solution(instance: &Instance, path: impl AsRef<Path>) -> Result<JointPlan, IoError> {
    parse_solution(instance, &read(path.as_ref())?)
}

pub fn solution_file(instance: &Instance, joint: &JointPlan) -> SolutionFile {
    let plans = joint
        .plans
        .iter()
        .map(|p| PlanRecord {
            agent: instance.agent(p.agent).name.clone(),
            actions: p
                .actions
                .iter()
                .map(|ta| ActionRecord {
                    kind: if ta.is_move() {
                        ActionKind::Move
                    } else {
                        ActionKind::Wait
                    },
                    from: instance.vertex(ta.from_vertex(instance)).name.clone(),
                    to: instance.vertex(ta.to_vertex(instance)).name.clone(),
                    start: ta.start,
                    duration: DurationRecord::from_seconds(ta.duration),
                })
                .collect(),
        })
        .collect();
    SolutionFile {
        plans,
        sum_of_costs: joint.sum_of_costs(),
        makespan: joint.makespan(),
    }
}

pub fn solution_to_json(instance: &Instance, joint: &JointPlan) -> String {
    serde_json::to_string_pretty(&solution_file(instance, joint))
        .expect("solution records always serialize")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRecord {
    pub rule: String,
    pub status: String,
    pub sum_of_costs: Option<f64>,
    pub makespan: Option<f64>,
    pub time_ms: f64,
    pub expanded: usize,
}

pub fn compare_to_json(rows: &[CompareRow]) -> String {
    let records: Vec<CompareRecord> = rows
        .iter()
        .map(|r| CompareRecord {
            rule: r.rule.to_string(),
            status: r.status.to_string(),
            sum_of_costs: r.sum_of_costs,
            makespan: r.makespan,
            time_ms: r.wall_time.as_secs_f64() * 1e3,
            expanded: r.expanded,
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("comparison rows always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testsuite::{junction, junction_optimal_solution};
    use proptest::prelude::*;

    const FIG9: &str = include_str!("../fixtures/junction.json");

    #[test]
    fn junction_file_matches_the_built_in_instance() {
        let inst = parse_instance(FIG9).unwrap();
        assert_eq!(inst.vertices().len(), 7);
        assert_eq!(inst.moves().len(), 12);
        assert_eq!(inst.agents().len(), 4);
        assert_eq!(inst, junction());
    }

    #[test]
    fn instance_round_trip() {
        let inst = junction();
        assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
    }

    #[test]
    fn solution_round_trip_keeps_infinite_waits() {
        let inst = junction();
        let sol = junction_optimal_solution(&inst);
        let text = solution_to_json(&inst, &sol);
        assert!(text.contains("\"inf\""));
        assert_eq!(parse_solution(&inst, &text).unwrap(), sol);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(matches!(parse_instance("{"), Err(IoError::Json(_))));
        let unknown = r#"{"vertices":[{"id":"a","x":0,"y":0}],"edges":[{"u":"a","v":"b","duration":1}],"agents":[]}"#;
        assert!(matches!(parse_instance(unknown), Err(IoError::UnknownVertex(_))));
        let zero = r#"{"vertices":[{"id":"a","x":0,"y":0}],"edges":[],"agents":[{"id":"1","radius":0,"start":"a","goal":"a"}]}"#;
        assert!(matches!(
            parse_instance(zero),
            Err(IoError::Model(ModelError::BadRadius { .. }))
        ));
        let inst = junction();
        let ghost = r#"{"plans":[{"agent":"1","actions":[{"kind":"wait","from":"Z","to":"Z","start":0,"duration":"inf"}]}],"sum_of_costs":0,"makespan":0}"#;
        assert!(matches!(parse_solution(&inst, ghost), Err(IoError::UnknownVertex(_))));
    }

    proptest! {
        #[test]
        fn generated_instances_round_trip(seed in 0u64..200) {
            let spec = crate::testsuite::RandomInstanceSpec { seed, ..Default::default() };
            if let Ok(inst) = crate::testsuite::gen_instance(&spec) {
                prop_assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
            }
        }
    }
}
