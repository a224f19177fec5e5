use alloc::vec;
use alloc::vec::Vec;

use super::{AnnealError, Move};
use crate::model::{Instance, PenaltyState, Slot, Timetable};
use crate::room::{reassign_rooms, RoomError, RoomSolver};

/// Lectures of the Kempe chain through `seed_lecture` between the periods
/// `from` and `to`: the connected component of the conflict graph (same
/// course, shared curriculum or shared teacher) restricted to the lectures
/// of the two periods. Sorted by lecture index.
pub fn kempe_chain(state: &PenaltyState<'_>, from: usize, to: usize, seed_lecture: usize) -> Vec<usize> {
    let i = state.instance();
    let period_of = |l: usize| state.slot(l).map(|s| s.period);
    let mut chain = vec![seed_lecture];
    let mut head = 0;
    while head < chain.len() {
        let x = chain[head];
        head += 1;
        let other = if period_of(x) == Some(from) { to } else { from };
        let cx = i.course_of(x);
        for &y in state.lectures_in(other) {
            if i.conflicting(cx, i.course_of(y)) && !chain.contains(&y) {
                chain.push(y);
            }
        }
    }
    chain.sort_unstable();
    chain
}

// Swaps the chain of `mv` and re-solves the rooms of both periods. Returns
// false, leaving the state untouched, if the swap is infeasible.
pub(super) fn apply(state: &mut PenaltyState<'_>, mv: Move, solver: RoomSolver) -> Result<bool, RoomError> {
    let i = state.instance();
    let chain = kempe_chain(state, mv.from, mv.to, mv.seed_lecture);
    let mut leaving_from = 0usize;
    for &l in &chain {
        let s = state.slot(l).expect("chain lectures are placed");
        let target = if s.period == mv.from { mv.to } else { mv.from };
        if !i.is_available(i.course_of(l), target) {
            return Ok(false);
        }
        if s.period == mv.from {
            leaving_from += 1;
        }
    }
    let entering_from = chain.len() - leaving_from;
    let rooms = i.rooms().len();
    let size_from = state.lectures_in(mv.from).len() - leaving_from + entering_from;
    let size_to = state.lectures_in(mv.to).len() - entering_from + leaving_from;
    if size_from > rooms || size_to > rooms {
        return Ok(false);
    }
    if course_twice(state, &chain, mv) {
        return Ok(false);
    }

    for &l in &chain {
        let s = state.slot(l).expect("placed");
        let period = if s.period == mv.from { mv.to } else { mv.from };
        state.relocate(l, Some(Slot { period, room: s.room }));
    }
    settle_rooms(state, mv.from, mv.to, solver)?;
    Ok(true)
}

// Whether the swap would put two lectures of one course into a period. The
// chain contains every lecture of the other period sharing a course with a
// chain lecture, so this only triggers on infeasible input.
fn course_twice(state: &PenaltyState<'_>, chain: &[usize], mv: Move) -> bool {
    let i = state.instance();
    let after = |period: usize| -> Vec<usize> {
        let stay = state.lectures_in(period).iter().filter(|l| !chain.contains(l));
        let other = if period == mv.from { mv.to } else { mv.from };
        let come = state.lectures_in(other).iter().filter(|l| chain.contains(l));
        stay.chain(come).map(|&l| i.course_of(l)).collect()
    };
    [mv.from, mv.to].into_iter().any(|p| {
        let mut courses = after(p);
        courses.sort_unstable();
        courses.windows(2).any(|w| w[0] == w[1])
    })
}

// Solves both periods, then alternates until neither improves: the rooms of
// one period shift the fixed costs seen by the other.
fn settle_rooms(state: &mut PenaltyState<'_>, a: usize, b: usize, solver: RoomSolver) -> Result<(), RoomError> {
    reassign_rooms(state, a, solver)?;
    reassign_rooms(state, b, solver)?;
    while reassign_rooms(state, a, solver)? && reassign_rooms(state, b, solver)? {}
    Ok(())
}

/// Applies the Kempe move through `seed_lecture` between `from` and `to`, then
/// re-solves the rooms of both periods. `Ok(None)` means the move is
/// rejected because the swapped chain would violate availability or room
/// counts.
pub fn kempe_move(
    i: &Instance,
    t: &Timetable,
    from: usize,
    to: usize,
    seed_lecture: usize,
    solver: RoomSolver,
) -> Result<Option<Timetable>, AnnealError> {
    if from == to {
        return Err(AnnealError::InvalidConfig("Kempe move needs two distinct periods"));
    }
    if from >= i.periods() || to >= i.periods() {
        return Err(RoomError::PeriodOutOfRange { period: from.max(to), periods: i.periods() }.into());
    }
    match t.slot(seed_lecture) {
        Some(s) if s.period == from || s.period == to => {}
        _ => return Err(AnnealError::InvalidConfig("seed lecture must sit in one of the two periods")),
    }
    let mut state = PenaltyState::new(i, t);
    let mv = Move { from, to, seed_lecture };
    Ok(apply(&mut state, mv, solver)?.then(|| state.into_timetable()))
}
