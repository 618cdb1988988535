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

//! Half-open interval sets and the constraint model.
//!
//! All set operations are exact: they only compare and copy endpoints, so
//! the results never depend on a tolerance. Constraints are stored in
//! interval form; [`ConstraintSet::permitted_move_times`] and
//! [`ConstraintSet::permitted_vertex_times`] turn them into the permitted
//! time sets consumed by the single-agent planner.

use std::fmt;

use crate::model::{Action, AgentId, Instance, MoveId, Plan, VertexId, EPS};

/// A non-degenerate half-open interval `[start, end)`; `end` may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    /// Returns `None` unless `start < end`.
    pub fn new(start: f64, end: f64) -> Option<Self> {
        (start < end && !start.is_nan() && !end.is_nan()).then_some(Self { start, end })
    }

    pub fn from_start(start: f64) -> Self {
        Self {
            start,
            end: f64::INFINITY,
        }
    }

    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_unbounded(&self) -> bool {
        self.end == f64::INFINITY
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t < self.end
    }

    /// True when the closed window `[a, b]` shares more than one instant with
    /// this interval.
    pub fn overlaps_window(&self, a: f64, b: f64) -> bool {
        a.max(self.start) < b.min(self.end)
    }

    pub fn shifted(&self, delta: f64) -> Self {
        Self {
            start: self.start + delta,
            end: self.end + delta,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", fmt_time(self.start), fmt_time(self.end))
    }
}

pub(crate) fn fmt_time(t: f64) -> String {
    if t == f64::INFINITY {
        "inf".into()
    } else if t == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{t:.6}")
    }
}

/// A canonical union of half-open intervals: sorted, pairwise disjoint and
/// separated by strictly positive gaps.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    items: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `[0, inf)`, the permitted set of an unconstrained action.
    pub fn all_time() -> Self {
        Self::single(Interval::from_start(0.0))
    }

    pub fn single(i: Interval) -> Self {
        Self { items: vec![i] }
    }

    /// Canonicalises an arbitrary collection of intervals.
    pub fn from_intervals(intervals: impl IntoIterator<Item = Interval>) -> Self {
        let mut v: Vec<Interval> = intervals.into_iter().collect();
        v.sort_by(|a, b| a.start.total_cmp(&b.start));
        let mut items: Vec<Interval> = Vec::with_capacity(v.len());
        for i in v {
            match items.last_mut() {
                Some(last) if i.start <= last.end => last.end = last.end.max(i.end),
                _ => items.push(i),
            }
        }
        Self { items }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.find(t).is_some()
    }

    /// Index of the member interval containing `t`.
    pub fn find(&self, t: f64) -> Option<usize> {
        let idx = self.items.partition_point(|i| i.start <= t);
        (idx > 0 && self.items[idx - 1].contains(t)).then(|| idx - 1)
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::from_intervals(self.items.iter().chain(other.items.iter()).copied())
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.items, &other.items);
        let (mut i, mut j) = (0, 0);
        let mut items = Vec::new();
        while i < a.len() && j < b.len() {
            let s = a[i].start.max(b[j].start);
            let e = a[i].end.min(b[j].end);
            if s < e {
                items.push(Interval { start: s, end: e });
            }
            if a[i].end < b[j].end {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { items }
    }

    /// `self` minus `other`.
    pub fn subtract(&self, other: &IntervalSet) -> IntervalSet {
        let mut items = Vec::new();
        let mut j = 0;
        for &a in &self.items {
            let mut cur = a.start;
            while j < other.items.len() && other.items[j].end <= cur {
                j += 1;
            }
            let mut k = j;
            while k < other.items.len() && other.items[k].start < a.end {
                let b = other.items[k];
                if b.start > cur {
                    items.push(Interval {
                        start: cur,
                        end: b.start,
                    });
                }
                cur = cur.max(b.end);
                if cur >= a.end {
                    break;
                }
                k += 1;
            }
            if cur < a.end {
                items.push(Interval {
                    start: cur,
                    end: a.end,
                });
            }
        }
        Self { items }
    }

    pub fn shift(&self, delta: f64) -> IntervalSet {
        Self {
            items: self.items.iter().map(|i| i.shifted(delta)).collect(),
        }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.items.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" u "))
    }
}

pub fn interval_union(a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
    a.union(b)
}

pub fn interval_intersect(a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
    a.intersect(b)
}

pub fn interval_subtract(a: &IntervalSet, b: &IntervalSet) -> IntervalSet {
    a.subtract(b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    /// Forbids `agent` from starting `mv` at any time in `interval`.
    Motion {
        agent: AgentId,
        mv: MoveId,
        interval: Interval,
    },
    /// Forbids `agent` from occupying `vertex` during `interval`.
    Vertex {
        agent: AgentId,
        vertex: VertexId,
        interval: Interval,
    },
    /// Forbids `agent` from starting a wait of exactly `duration` at
    /// `vertex` at any time in `interval`. Only the theoretical rule emits it.
    Wait {
        agent: AgentId,
        vertex: VertexId,
        duration: f64,
        interval: Interval,
    },
}

impl Constraint {
    pub fn agent(&self) -> AgentId {
        match *self {
            Constraint::Motion { agent, .. }
            | Constraint::Vertex { agent, .. }
            | Constraint::Wait { agent, .. } => agent,
        }
    }

    pub fn interval(&self) -> Interval {
        match *self {
            Constraint::Motion { interval, .. }
            | Constraint::Vertex { interval, .. }
            | Constraint::Wait { interval, .. } => interval,
        }
    }

    /// One line of the constraint dump format.
    pub fn dump(&self, instance: &Instance) -> String {
        match *self {
            Constraint::Motion { agent, mv, interval } => format!(
                "motion {} {} {}",
                instance.agent(agent).name,
                instance.move_label(mv),
                dump_interval(interval)
            ),
            Constraint::Vertex {
                agent,
                vertex,
                interval,
            } => format!(
                "vertex {} {} {}",
                instance.agent(agent).name,
                instance.vertex(vertex).name,
                dump_interval(interval)
            ),
            Constraint::Wait {
                agent,
                vertex,
                duration,
                interval,
            } => format!(
                "wait {} {} {} {}",
                instance.agent(agent).name,
                instance.vertex(vertex).name,
                fmt_time(duration),
                dump_interval(interval)
            ),
        }
    }
}

fn dump_interval(i: Interval) -> String {
    format!("[{},{})", fmt_time(i.start), fmt_time(i.end))
}

/// Wait durations closer than this are treated as the same wait action.
pub const WAIT_MATCH_TOL: f64 = EPS;

pub(crate) fn same_wait_duration(a: f64, b: f64) -> bool {
    (a.is_infinite() && b.is_infinite()) || (a - b).abs() <= WAIT_MATCH_TOL
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintViolation {
    Motion {
        action_index: usize,
        constraint: Constraint,
    },
    Vertex {
        action_index: usize,
        constraint: Constraint,
    },
    Wait {
        action_index: usize,
        constraint: Constraint,
    },
}

/// An append-only list of constraints.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstraintSet {
    items: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Constraint) {
        self.items.push(c);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Constraints that apply to `agent` only.
    pub fn for_agent(&self, agent: AgentId) -> ConstraintSet {
        self.items
            .iter()
            .copied()
            .filter(|c| c.agent() == agent)
            .collect()
    }

    pub fn permitted_move_times(&self, agent: AgentId, mv: MoveId) -> IntervalSet {
        let forbidden = IntervalSet::from_intervals(self.items.iter().filter_map(|c| match *c {
            Constraint::Motion {
                agent: a,
                mv: m,
                interval,
            } if a == agent && m == mv => Some(interval),
            _ => None,
        }));
        IntervalSet::all_time().subtract(&forbidden)
    }

    pub fn permitted_vertex_times(&self, agent: AgentId, vertex: VertexId) -> IntervalSet {
        let forbidden = IntervalSet::from_intervals(self.items.iter().filter_map(|c| match *c {
            Constraint::Vertex {
                agent: a,
                vertex: v,
                interval,
            } if a == agent && v == vertex => Some(interval),
            _ => None,
        }));
        IntervalSet::all_time().subtract(&forbidden)
    }

    /// Start-time intervals in which a wait of `duration` at `vertex` is
    /// forbidden for `agent`.
    pub fn forbidden_wait_starts(
        &self,
        agent: AgentId,
        vertex: VertexId,
        duration: f64,
    ) -> impl Iterator<Item = Interval> + '_ {
        self.items.iter().filter_map(move |c| match *c {
            Constraint::Wait {
                agent: a,
                vertex: v,
                duration: d,
                interval,
            } if a == agent && v == vertex && same_wait_duration(d, duration) => Some(interval),
            _ => None,
        })
    }

    pub fn has_wait_constraints(&self, agent: AgentId) -> bool {
        self.items
            .iter()
            .any(|c| matches!(c, Constraint::Wait { agent: a, .. } if *a == agent))
    }

    /// Every constraint of this set that `plan` breaks. Moves violate a
    /// motion constraint when their start lies in its interval; waits violate
    /// a vertex constraint when their closed window overlaps the interval in
    /// more than one instant.
    pub fn violations(&self, plan: &Plan) -> Vec<ConstraintViolation> {
        let mut out = Vec::new();
        for (action_index, ta) in plan.actions.iter().enumerate() {
            for &c in &self.items {
                if c.agent() != plan.agent {
                    continue;
                }
                match (c, ta.action) {
                    (Constraint::Motion { mv, interval, .. }, Action::Move(m))
                        if m == mv && interval.contains(ta.start) =>
                    {
                        out.push(ConstraintViolation::Motion {
                            action_index,
                            constraint: c,
                        })
                    }
                    (Constraint::Vertex { vertex, interval, .. }, Action::Wait { vertex: v, .. })
                        if v == vertex && interval.overlaps_window(ta.start, ta.end()) =>
                    {
                        out.push(ConstraintViolation::Vertex {
                            action_index,
                            constraint: c,
                        })
                    }
                    (
                        Constraint::Wait {
                            vertex,
                            duration,
                            interval,
                            ..
                        },
                        Action::Wait { vertex: v, .. },
                    ) if v == vertex
                        && same_wait_duration(duration, ta.duration)
                        && interval.contains(ta.start) =>
                    {
                        out.push(ConstraintViolation::Wait {
                            action_index,
                            constraint: c,
                        })
                    }
                    _ => {}
                }
            }
        }
        out
    }

    pub fn is_satisfied_by(&self, plan: &Plan) -> bool {
        self.violations(plan).is_empty()
    }

    /// The constraint dump, one constraint per line.
    pub fn dump(&self, instance: &Instance) -> String {
        let mut s = String::new();
        for c in &self.items {
            s.push_str(&c.dump(instance));
            s.push('\n');
        }
        s
    }
}

impl FromIterator<Constraint> for ConstraintSet {
    fn from_iter<T: IntoIterator<Item = Constraint>>(iter: T) -> Self {
        Self {
            items: iter.into_iter().collect(),
        }
    }
}

impl Extend<Constraint> for ConstraintSet {
    fn extend<T: IntoIterator<Item = Constraint>>(&mut self, iter: T) {
        self.items.extend(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(s: f64, e: f64) -> Interval {
        Interval::new(s, e).unwrap()
    }

    fn set(v: &[(f64, f64)]) -> IntervalSet {
        IntervalSet::from_intervals(v.iter().map(|&(s, e)| iv(s, e)))
    }

    const INF: f64 = f64::INFINITY;

    #[test]
    fn subtract_prefix_from_all_time() {
        let r = IntervalSet::all_time().subtract(&set(&[(0.0, 0.354)]));
        assert_eq!(r, set(&[(0.354, INF)]));
    }

    #[test]
    fn intersection_is_idempotent() {
        let a = set(&[(0.0, 1.0), (2.0, 3.0), (5.0, INF)]);
        assert_eq!(a.intersect(&a), a);
    }

    #[test]
    fn intersect_two_pieces_with_window() {
        let a = set(&[(0.0, 1.0), (2.0, 3.0)]);
        let b = set(&[(0.5, 2.5)]);
        assert_eq!(a.intersect(&b), set(&[(0.5, 1.0), (2.0, 2.5)]));
    }

    #[test]
    fn shift_moves_every_endpoint() {
        assert_eq!(set(&[(1.0, 2.0)]).shift(-1.0), set(&[(0.0, 1.0)]));
        assert_eq!(
            IntervalSet::all_time().shift(-0.5),
            set(&[(-0.5, INF)])
        );
    }

    #[test]
    fn adjacent_intervals_merge() {
        let s = set(&[(0.0, 1.0), (1.0, 2.0), (3.0, 4.0)]);
        assert_eq!(s.intervals().len(), 2);
        assert_eq!(s.intervals()[0], iv(0.0, 2.0));
    }

    #[test]
    fn subtract_splits_and_removes() {
        let a = set(&[(0.0, 10.0)]);
        let b = set(&[(1.0, 2.0), (3.0, 4.0), (9.0, 12.0)]);
        assert_eq!(
            a.subtract(&b),
            set(&[(0.0, 1.0), (2.0, 3.0), (4.0, 9.0)])
        );
        assert!(a.subtract(&set(&[(-1.0, INF)])).is_empty());
    }

    #[test]
    fn permitted_times_follow_constraints() {
        let a = AgentId(0);
        let m = MoveId(0);
        let v = VertexId(5);
        let mut cs = ConstraintSet::new();
        assert_eq!(cs.permitted_move_times(a, m), IntervalSet::all_time());
        assert_eq!(cs.permitted_vertex_times(a, v), IntervalSet::all_time());
        cs.push(Constraint::Motion {
            agent: a,
            mv: m,
            interval: iv(0.0, 0.354),
        });
        assert_eq!(cs.permitted_move_times(a, m), set(&[(0.354, INF)]));
        cs.push(Constraint::Motion {
            agent: a,
            mv: m,
            interval: iv(0.0, INF),
        });
        assert!(cs.permitted_move_times(a, m).is_empty());
        // other agents are unaffected
        assert_eq!(
            cs.permitted_move_times(AgentId(1), m),
            IntervalSet::all_time()
        );

        let start = 1.5 - 2f64.sqrt() / 2.0 + 2f64.sqrt() / 4.0;
        let mut cs = ConstraintSet::new();
        cs.push(Constraint::Vertex {
            agent: a,
            vertex: v,
            interval: iv(start, 1.5),
        });
        let p = cs.permitted_vertex_times(a, v);
        assert_eq!(p, set(&[(0.0, start), (1.5, INF)]));
        assert!((start - 1.14645).abs() < 1e-5);
        cs.push(Constraint::Vertex {
            agent: a,
            vertex: v,
            interval: iv(1.4, 2.0),
        });
        assert_eq!(
            cs.permitted_vertex_times(a, v),
            set(&[(0.0, start), (2.0, INF)])
        );
    }

    #[test]
    fn find_locates_member() {
        let s = set(&[(0.0, 1.0), (2.0, 3.0)]);
        assert_eq!(s.find(0.0), Some(0));
        assert_eq!(s.find(1.0), None);
        assert_eq!(s.find(2.5), Some(1));
        assert_eq!(s.find(-1.0), None);
    }

    fn arb_set() -> impl Strategy<Value = IntervalSet> {
        proptest::collection::vec((0u32..40, 1u32..8, proptest::bool::weighted(0.1)), 0..6)
            .prop_map(|v| {
                IntervalSet::from_intervals(v.into_iter().map(|(s, l, inf)| {
                    let s = s as f64 * 0.25;
                    Interval::new(s, if inf { INF } else { s + l as f64 * 0.25 }).unwrap()
                }))
            })
    }

    fn canonical(s: &IntervalSet) -> bool {
        s.intervals().iter().all(|i| i.start < i.end)
            && s.intervals().windows(2).all(|w| w[0].end < w[1].start)
    }

    fn member(s: &IntervalSet, t: f64) -> bool {
        s.intervals().iter().any(|i| i.contains(t))
    }

    proptest! {
        #[test]
        fn set_algebra_is_pointwise_exact(a in arb_set(), b in arb_set(), c in arb_set()) {
            let u = a.union(&b);
            let n = a.intersect(&b);
            let d = a.subtract(&b);
            prop_assert!(canonical(&u) && canonical(&n) && canonical(&d));
            prop_assert_eq!(&u, &b.union(&a));
            prop_assert_eq!(&n, &b.intersect(&a));
            prop_assert_eq!(u.union(&c), a.union(&b.union(&c)));
            prop_assert_eq!(n.intersect(&c), a.intersect(&b.intersect(&c)));
            for k in 0..90 {
                let t = k as f64 * 0.125 + 0.0625 * (k % 2) as f64;
                let (x, y) = (member(&a, t), member(&b, t));
                prop_assert_eq!(member(&u, t), x || y);
                prop_assert_eq!(member(&n, t), x && y);
                prop_assert_eq!(member(&d, t), x && !y);
            }
        }
    }
}
