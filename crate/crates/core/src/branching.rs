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

//! Branching rules: how a conflict is split into two constraint lists.
//!
//! * `Theoretical` forbids each action over its unsafe interval against the
//!   other (a wait is forbidden by start time for its exact duration).
//! * `Standard` does the same for moves but forbids the waiting agent from
//!   the wait vertex over the collision interval. This rule can prune valid
//!   solutions; [`unsoundness_witness`] constructs a concrete example.
//! * `Sound` shifts the split point of a move-wait conflict by
//!   `delta = min(gamma * |intersection|, wait end - intersection start)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::conflicts::{Conflict, ConflictKind, ConflictSide};
use crate::constraints::{Constraint, Interval};
use crate::geometry::{self, GeometryError};
use crate::model::{Action, Instance, TimedAction};

pub const DEFAULT_GAMMA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchingRule {
    Theoretical,
    Standard,
    Sound { gamma: f64 },
}

impl BranchingRule {
    pub fn sound(gamma: f64) -> Result<Self, BranchError> {
        if gamma > 0.0 && gamma < 1.0 {
            Ok(Self::Sound { gamma })
        } else {
            Err(BranchError::BadGamma(gamma))
        }
    }

    /// Parses a rule name, attaching `gamma` to the sound rule.
    pub fn parse(name: &str, gamma: f64) -> Result<Self, BranchError> {
        match name.trim() {
            "theoretical" => Ok(Self::Theoretical),
            "standard" => Ok(Self::Standard),
            "sound" => Self::sound(gamma),
            other => Err(BranchError::UnknownRule(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Theoretical => "theoretical",
            Self::Standard => "standard",
            Self::Sound { .. } => "sound",
        }
    }
}

impl Default for BranchingRule {
    fn default() -> Self {
        Self::Sound {
            gamma: DEFAULT_GAMMA,
        }
    }
}

impl fmt::Display for BranchingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sound { gamma } => write!(f, "sound({gamma})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for BranchingRule {
    type Err = BranchError;

    /// Accepts `theoretical`, `standard`, `sound` and `sound(<gamma>)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("sound(").and_then(|r| r.strip_suffix(')')) {
            let gamma = inner
                .trim()
                .parse::<f64>()
                .map_err(|_| BranchError::UnknownRule(s.to_string()))?;
            return Self::sound(gamma);
        }
        Self::parse(s, DEFAULT_GAMMA)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BranchError {
    #[error("gamma must lie strictly between 0 and 1, got {0}")]
    BadGamma(f64),
    #[error("unknown branching rule `{0}`")]
    UnknownRule(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("degenerate constraint interval [{start}, {end})")]
    DegenerateInterval { start: f64, end: f64 },
    #[error("non-positive shift {0}")]
    NonPositiveShift(f64),
    #[error("move-wait conflict carries no intersection interval")]
    MissingIntersection,
    #[error("expected a move-wait conflict")]
    NotMoveWait,
    #[error("the wait action is infinite")]
    InfiniteWait,
    #[error("the move's unsafe interval is unbounded")]
    UnboundedUnsafeInterval,
    #[error("the outcome lacks the expected {0} constraint")]
    MissingConstraint(&'static str),
}

/// Constraints for the agent of the conflict's first action and for the agent
/// of its second action.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchOutcome {
    pub for_first: Vec<Constraint>,
    pub for_second: Vec<Constraint>,
}

fn interval(start: f64, end: f64) -> Result<Interval, BranchError> {
    Interval::new(start, end).ok_or(BranchError::DegenerateInterval { start, end })
}

/// Forbids `side`'s action over its unsafe interval against `other`.
fn unsafe_constraint(
    instance: &Instance,
    side: &ConflictSide,
    other: &ConflictSide,
) -> Result<Constraint, BranchError> {
    let i = geometry::unsafe_interval(
        instance,
        &side.action,
        &other.action,
        instance.agent(side.agent).radius,
        instance.agent(other.agent).radius,
    )?;
    Ok(match side.action.action {
        Action::Move(mv) => Constraint::Motion {
            agent: side.agent,
            mv,
            interval: i,
        },
        Action::Wait { vertex, duration } => Constraint::Wait {
            agent: side.agent,
            vertex,
            duration,
            interval: i,
        },
    })
}

/// Splits `conflict` according to `rule`.
pub fn branch(
    rule: BranchingRule,
    instance: &Instance,
    conflict: &Conflict,
) -> Result<BranchOutcome, BranchError> {
    let (mover, other) = (&conflict.first, &conflict.second);
    match (rule, conflict.kind) {
        (BranchingRule::Theoretical, _) | (_, ConflictKind::MoveMove) => Ok(BranchOutcome {
            for_first: vec![unsafe_constraint(instance, mover, other)?],
            for_second: vec![unsafe_constraint(instance, other, mover)?],
        }),
        (BranchingRule::Standard, ConflictKind::MoveWait) => {
            let vertex = other.action.from_vertex(instance);
            Ok(BranchOutcome {
                for_first: vec![unsafe_constraint(instance, mover, other)?],
                for_second: vec![Constraint::Vertex {
                    agent: other.agent,
                    vertex,
                    interval: conflict.collision,
                }],
            })
        }
        (BranchingRule::Sound { gamma }, ConflictKind::MoveWait) => {
            let bar = conflict.intersection.ok_or(BranchError::MissingIntersection)?;
            let delta = sound_shift(gamma, bar, &other.action);
            if !(delta > 0.0) {
                return Err(BranchError::NonPositiveShift(delta));
            }
            let mv = mover.action.move_id().ok_or(BranchError::NotMoveWait)?;
            let t = mover.action.start;
            let vertex = other.action.from_vertex(instance);
            let keep_out = interval(bar.start + delta, bar.end)?;
            let mut for_second = vec![Constraint::Vertex {
                agent: other.agent,
                vertex,
                interval: keep_out,
            }];
            for_second.extend(instance.outgoing(vertex).iter().map(|&m| Constraint::Motion {
                agent: other.agent,
                mv: m,
                interval: keep_out,
            }));
            Ok(BranchOutcome {
                for_first: vec![Constraint::Motion {
                    agent: mover.agent,
                    mv,
                    interval: interval(t, t + delta)?,
                }],
                for_second,
            })
        }
    }
}

/// `min(gamma * |bar|, wait start + wait duration - bar start)`.
pub fn sound_shift(gamma: f64, bar: Interval, wait: &TimedAction) -> f64 {
    let slack = if wait.duration.is_infinite() {
        f64::INFINITY
    } else {
        wait.end() - bar.start
    };
    (gamma * bar.len()).min(slack)
}

/// For a move-wait conflict split by the standard rule, finds a move that the
/// first side forbids and a wait that the second side forbids which
/// nevertheless do not collide: proof that the split lost a valid pair.
///
/// Tries `eps = |collision| / 2^k` for `k = 1..=40`, re-timing the move to
/// `t_u - eps` and shortening the wait to end `1.5 * eps` early.
pub fn unsoundness_witness(
    instance: &Instance,
    conflict: &Conflict,
    outcome: &BranchOutcome,
) -> Result<Option<(TimedAction, TimedAction)>, BranchError> {
    if conflict.kind != ConflictKind::MoveWait {
        return Err(BranchError::NotMoveWait);
    }
    let (mover, waiter) = (&conflict.first, &conflict.second);
    if waiter.action.duration.is_infinite() {
        return Err(BranchError::InfiniteWait);
    }
    let mv = mover.action.move_id().ok_or(BranchError::NotMoveWait)?;
    let motion = outcome
        .for_first
        .iter()
        .find_map(|c| match *c {
            Constraint::Motion { mv: m, interval, .. } if m == mv => Some(interval),
            _ => None,
        })
        .ok_or(BranchError::MissingConstraint("motion"))?;
    let vertex = waiter.action.from_vertex(instance);
    let keep_out = outcome
        .for_second
        .iter()
        .find_map(|c| match *c {
            Constraint::Vertex {
                vertex: v,
                interval,
                ..
            } if v == vertex => Some(interval),
            _ => None,
        })
        .ok_or(BranchError::MissingConstraint("vertex"))?;
    let t_u = motion.end;
    if t_u.is_infinite() {
        return Err(BranchError::UnboundedUnsafeInterval);
    }
    let (r_i, r_j) = (
        instance.agent(mover.agent).radius,
        instance.agent(waiter.agent).radius,
    );
    let (t_j, w_d) = (waiter.action.start, waiter.action.duration);
    for k in 1..=40 {
        let eps = conflict.collision.len() / f64::powi(2.0, k);
        let start = t_u - eps;
        let w = w_d - 1.5 * eps;
        if start < mover.action.start || w <= eps || t_j + w <= conflict.collision.start {
            continue;
        }
        let m = mover.action.retimed(start);
        let wait = TimedAction::waiting(vertex, t_j, w);
        if motion.contains(start)
            && keep_out.overlaps_window(wait.start, wait.end())
            && !geometry::collides(instance, &m, r_i, &wait, r_j)
        {
            return Ok(Some((m, wait)));
        }
    }
    Ok(None)
}

/// Result of sampling pairs of actions forbidden by the two sides of an
/// outcome.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbeReport {
    pub samples: usize,
    /// Sampled pairs that do not collide, i.e. evidence against soundness.
    pub collision_free: Vec<(TimedAction, TimedAction)>,
}

/// Horizon used for sampling inside unbounded constraint intervals.
const PROBE_SPAN: f64 = 10.0;

fn sample_forbidden(
    instance: &Instance,
    c: &Constraint,
    rng: &mut impl Rng,
) -> Option<TimedAction> {
    let i = c.interval();
    let end = if i.is_unbounded() {
        i.start + PROBE_SPAN
    } else {
        i.end
    };
    let margin = (1e-3 * (end - i.start)).max(1e-9);
    if end - i.start <= 2.0 * margin {
        return None;
    }
    let inner = |rng: &mut dyn rand::RngCore| rng.gen_range(i.start + margin..end - margin);
    match *c {
        Constraint::Motion { mv, .. } => Some(TimedAction::moving(instance, mv, inner(rng))),
        Constraint::Vertex { vertex, .. } => {
            // any wait whose window reaches strictly into the interval
            let p = inner(rng);
            let start = rng.gen_range(0.0..=p);
            let duration = if rng.gen_bool(0.2) {
                f64::INFINITY
            } else {
                (p - start) + rng.gen_range(margin..margin + PROBE_SPAN)
            };
            Some(TimedAction::waiting(vertex, start, duration))
        }
        Constraint::Wait { vertex, duration, .. } => {
            Some(TimedAction::waiting(vertex, inner(rng), duration))
        }
    }
}

/// Samples `samples` pairs (one action forbidden for the first agent, one
/// forbidden for the second) and records every pair that does not collide.
pub fn soundness_probe(
    instance: &Instance,
    conflict: &Conflict,
    outcome: &BranchOutcome,
    samples: usize,
    rng: &mut impl Rng,
) -> ProbeReport {
    let mut report = ProbeReport::default();
    if outcome.for_first.is_empty() || outcome.for_second.is_empty() {
        return report;
    }
    let (r_i, r_j) = (
        instance.agent(conflict.first.agent).radius,
        instance.agent(conflict.second.agent).radius,
    );
    let mut attempts = 0;
    while report.samples < samples && attempts < 4 * samples {
        attempts += 1;
        let a = &outcome.for_first[rng.gen_range(0..outcome.for_first.len())];
        let b = &outcome.for_second[rng.gen_range(0..outcome.for_second.len())];
        let (Some(x), Some(y)) = (
            sample_forbidden(instance, a, rng),
            sample_forbidden(instance, b, rng),
        ) else {
            continue;
        };
        report.samples += 1;
        if !geometry::collides(instance, &x, r_i, &y, r_j) {
            report.collision_free.push((x, y));
        }
    }
    report
}
