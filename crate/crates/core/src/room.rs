//! The room assignment subproblem of a single period.
//!
//! With everything outside period `p` fixed, choosing rooms for the lectures
//! of `p` is an assignment problem. Each lecture `e` of `p` and room `r` get
//! the multiset of full curriculum costs `c(u)` over the curricula `u`
//! containing `e`'s course, evaluated with `e` in `r`. Because no curriculum
//! has two courses in the same period, every curriculum touched by `p`
//! contributes exactly one item to a matching's union, and the untouched
//! curricula do not depend on the choice, so a leximax-minimal matching
//! yields a leximax-minimal full allocation.
//!
//! The sum-objective baseline scalarizes each multiset to the sum of its
//! items ([`scalar_cost`]).

use alloc::vec::Vec;

use thiserror::Error;

use crate::assignment::{solve_glbop, solve_lsap, CostMatrix, GlbopInstance, Matching};
use crate::fairness::WeightMultiset;
use crate::model::{Instance, PenaltyState, Timetable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoomError {
    #[error("period {period} is out of range (instance has {periods})")]
    PeriodOutOfRange { period: usize, periods: usize },
    #[error("period {period} holds {lectures} lectures but there are only {rooms} rooms")]
    TooManyLectures { period: usize, lectures: usize, rooms: usize },
}

/// How the room subproblem is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoomSolver {
    /// Leximax-optimal assignment of the per-curriculum cost multisets.
    Glbop,
    /// Minimum sum of the scalarized costs.
    Lsap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodSubproblem {
    pub period: usize,
    /// Lectures placed in the period, one row each.
    pub lectures: Vec<usize>,
    /// Course of each row.
    pub courses: Vec<usize>,
    pub rooms: usize,
    /// `edge_weights[row][room]`
    pub edge_weights: Vec<Vec<WeightMultiset>>,
    /// `scalar_costs[row][room]`
    pub scalar_costs: Vec<Vec<u64>>,
}

/// Scalarization used by the sum-objective baseline.
pub fn scalar_cost(w: &WeightMultiset) -> u64 {
    w.sum()
}

fn check_period(i: &Instance, period: usize, lectures: usize) -> Result<(), RoomError> {
    if period >= i.periods() {
        return Err(RoomError::PeriodOutOfRange { period, periods: i.periods() });
    }
    if lectures > i.rooms().len() {
        return Err(RoomError::TooManyLectures { period, lectures, rooms: i.rooms().len() });
    }
    Ok(())
}

/// Builds the subproblem of `period` from a timetable.
pub fn build_subproblem(i: &Instance, t: &Timetable, period: usize) -> Result<PeriodSubproblem, RoomError> {
    if period >= i.periods() {
        return Err(RoomError::PeriodOutOfRange { period, periods: i.periods() });
    }
    let state = PenaltyState::new(i, t);
    subproblem_from_state(&state, period)
}

/// Subproblem of `period` using the cached penalties of `state`.
pub fn subproblem_from_state(state: &PenaltyState<'_>, period: usize) -> Result<PeriodSubproblem, RoomError> {
    let i = state.instance();
    check_period(i, period, state.lectures_in(period).len())?;
    let mut lectures = state.lectures_in(period).to_vec();
    lectures.sort_unstable();
    let courses: Vec<usize> = lectures.iter().map(|&l| i.course_of(l)).collect();
    let nr = i.rooms().len();

    let mut edge_weights = Vec::with_capacity(lectures.len());
    for &e in &lectures {
        let c = i.course_of(e);
        let current = state.room_dependent(e, state.slot(e).expect("placed").room);
        // Fixed part of each affected curriculum: everything except e's
        // room-dependent terms.
        let fixed: Vec<_> = i.curricula_of(c).iter().map(|&u| state.curriculum_cost(u) - current).collect();
        let row = (0..nr)
            .map(|r| {
                let dependent = state.room_dependent(e, r);
                fixed.iter().map(|&f| f + dependent).collect::<WeightMultiset>()
            })
            .collect::<Vec<_>>();
        edge_weights.push(row);
    }
    let scalar_costs = edge_weights.iter().map(|row| row.iter().map(scalar_cost).collect()).collect();
    Ok(PeriodSubproblem { period, lectures, courses, rooms: nr, edge_weights, scalar_costs })
}

impl PeriodSubproblem {
    /// Optimal room per row under the given objective.
    pub fn solve(&self, solver: RoomSolver) -> Vec<usize> {
        if self.lectures.is_empty() {
            return Vec::new();
        }
        // Fewer rows than rooms: the assignment module pads with dummy rows.
        let matching = match solver {
            RoomSolver::Glbop => {
                let g = GlbopInstance::from_rows(self.edge_weights.clone()).expect("rows are rectangular");
                solve_glbop(&g).expect("no forbidden edges").matching
            }
            RoomSolver::Lsap => {
                let c = CostMatrix::from_rows(self.scalar_costs.clone()).expect("rows are rectangular");
                solve_lsap(&c).0
            }
        };
        self.rooms_of(&matching)
    }

    fn rooms_of(&self, m: &Matching) -> Vec<usize> {
        (0..self.lectures.len()).map(|row| m.column_of(row)).collect()
    }

    /// Union of the edge weights selected by `rooms`.
    pub fn weight_of(&self, rooms: &[usize]) -> WeightMultiset {
        let mut acc = WeightMultiset::new();
        for (row, &r) in rooms.iter().enumerate() {
            acc.extend_from(&self.edge_weights[row][r]);
        }
        acc
    }

    pub fn scalar_of(&self, rooms: &[usize]) -> u64 {
        rooms.iter().enumerate().map(|(row, &r)| self.scalar_costs[row][r]).sum()
    }
}

/// Re-solves the rooms of `period` in place. Returns whether any room
/// changed.
///
/// The new assignment is only applied when it is strictly better than the
/// current one under the solver's objective, so repeated calls reach a
/// fixpoint.
pub fn reassign_rooms(state: &mut PenaltyState<'_>, period: usize, solver: RoomSolver) -> Result<bool, RoomError> {
    let sub = subproblem_from_state(state, period)?;
    let current: Vec<usize> = sub.lectures.iter().map(|&l| state.slot(l).expect("placed").room).collect();
    let rooms = sub.solve(solver);
    let better = match solver {
        RoomSolver::Glbop => sub.weight_of(&rooms) < sub.weight_of(&current),
        RoomSolver::Lsap => sub.scalar_of(&rooms) < sub.scalar_of(&current),
    };
    // Lectures that just changed period may still share a room.
    let clash = {
        let mut seen = current.clone();
        seen.sort_unstable();
        seen.windows(2).any(|w| w[0] == w[1])
    };
    if !better && !clash {
        return Ok(false);
    }
    for (&l, &r) in sub.lectures.iter().zip(&rooms) {
        state.set_room(l, r);
    }
    Ok(true)
}

fn solve_rooms(i: &Instance, t: &Timetable, period: usize, solver: RoomSolver) -> Result<Timetable, RoomError> {
    if period >= i.periods() {
        return Err(RoomError::PeriodOutOfRange { period, periods: i.periods() });
    }
    let mut state = PenaltyState::new(i, t);
    let sub = subproblem_from_state(&state, period)?;
    let rooms = sub.solve(solver);
    for (&l, &r) in sub.lectures.iter().zip(&rooms) {
        state.set_room(l, r);
    }
    Ok(state.into_timetable())
}

/// Replaces the rooms of `period` by a leximax-optimal assignment.
pub fn solve_rooms_glbop(i: &Instance, t: &Timetable, period: usize) -> Result<Timetable, RoomError> {
    solve_rooms(i, t, period, RoomSolver::Glbop)
}

/// Replaces the rooms of `period` by a minimum-sum assignment.
pub fn solve_rooms_lsap(i: &Instance, t: &Timetable, period: usize) -> Result<Timetable, RoomError> {
    solve_rooms(i, t, period, RoomSolver::Lsap)
}
