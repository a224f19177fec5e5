//! Direct (non-incremental) evaluation of hard and soft constraints.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Instance, ModelError, Timetable};
use crate::fairness::{Penalty, SortedAllocation};

/// Why two courses may not share a period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictReason {
    SameCourse,
    Curriculum(usize),
    Teacher,
}

/// A hard constraint violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A lecture is not placed.
    Unplaced { lecture: usize },
    /// A lecture refers to a period or room the instance does not have.
    OutOfRange { lecture: usize },
    /// Two lectures share a room in the same period.
    RoomOccupancy { period: usize, room: usize, lectures: (usize, usize) },
    /// Two conflicting lectures share a period.
    Conflict { period: usize, lectures: (usize, usize), reason: ConflictReason },
    /// A lecture is placed in a period its course is unavailable in.
    Unavailable { lecture: usize, period: usize },
}

impl Violation {
    /// Name of the violated constraint.
    pub fn constraint(&self) -> &'static str {
        match self {
            Violation::Unplaced { .. } | Violation::OutOfRange { .. } => "Lectures",
            Violation::Conflict { reason: ConflictReason::SameCourse, .. } => "Lectures",
            Violation::RoomOccupancy { .. } => "RoomOccupancy",
            Violation::Conflict { .. } => "Conflicts",
            Violation::Unavailable { .. } => "Availability",
        }
    }

    pub fn describe(&self, i: &Instance) -> String {
        let course = |l: usize| i.courses()[i.course_of(l)].id.as_str();
        let when = |p: usize| format!("day {} period {}", p / i.periods_per_day(), p % i.periods_per_day());
        match *self {
            Violation::Unplaced { lecture } => {
                format!("Lectures: a lecture of {} is not placed", course(lecture))
            }
            Violation::OutOfRange { lecture } => {
                format!("Lectures: a lecture of {} has an invalid period or room", course(lecture))
            }
            Violation::RoomOccupancy { period, room, lectures: (a, b) } => format!(
                "RoomOccupancy: {} and {} share room {} at {}",
                course(a),
                course(b),
                i.rooms()[room].id,
                when(period)
            ),
            Violation::Conflict { period, lectures: (a, b), reason } => {
                let why = match reason {
                    ConflictReason::SameCourse => String::from("same course"),
                    ConflictReason::Curriculum(u) => format!("curriculum {}", i.curricula()[u].id),
                    ConflictReason::Teacher => format!("teacher {}", i.courses()[i.course_of(a)].teacher),
                };
                format!("{}: {} and {} at {} ({why})", self.constraint(), course(a), course(b), when(period))
            }
            Violation::Unavailable { lecture, period } => {
                format!("Availability: {} is unavailable at {}", course(lecture), when(period))
            }
        }
    }
}

/// Lists every hard constraint violation; empty iff the timetable is feasible.
pub fn validate_hard(i: &Instance, t: &Timetable) -> Vec<Violation> {
    let mut out = Vec::new();
    if t.len() != i.lecture_count() {
        // Report the lectures the timetable cannot hold.
        out.extend((t.len()..i.lecture_count()).map(|lecture| Violation::Unplaced { lecture }));
        return out;
    }
    let periods = i.periods();
    let mut by_period: Vec<Vec<usize>> = vec![Vec::new(); periods];
    for lecture in 0..t.len() {
        match t.slot(lecture) {
            None => out.push(Violation::Unplaced { lecture }),
            Some(s) if s.period >= periods || s.room >= i.rooms().len() => out.push(Violation::OutOfRange { lecture }),
            Some(s) => {
                if !i.is_available(i.course_of(lecture), s.period) {
                    out.push(Violation::Unavailable { lecture, period: s.period });
                }
                by_period[s.period].push(lecture);
            }
        }
    }
    for (period, lectures) in by_period.iter().enumerate() {
        for (k, &a) in lectures.iter().enumerate() {
            for &b in &lectures[k + 1..] {
                let (sa, sb) = (t.slot(a).unwrap(), t.slot(b).unwrap());
                if sa.room == sb.room {
                    out.push(Violation::RoomOccupancy { period, room: sa.room, lectures: (a, b) });
                }
                let (ca, cb) = (i.course_of(a), i.course_of(b));
                if ca == cb {
                    out.push(Violation::Conflict { period, lectures: (a, b), reason: ConflictReason::SameCourse });
                    continue;
                }
                if i.teacher_index(ca) == i.teacher_index(cb) {
                    out.push(Violation::Conflict { period, lectures: (a, b), reason: ConflictReason::Teacher });
                }
                for &u in i.curricula_of(ca) {
                    if i.curricula_of(cb).contains(&u) {
                        out.push(Violation::Conflict {
                            period,
                            lectures: (a, b),
                            reason: ConflictReason::Curriculum(u),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Weighted soft constraint penalties and their sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SoftCosts {
    pub room_capacity: u64,
    pub min_working_days: u64,
    pub isolated_lectures: u64,
    pub room_stability: u64,
    pub total: u64,
}

/// Per-curriculum penalties of a timetable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    per_curriculum: Vec<Penalty>,
}

impl Allocation {
    pub fn new(per_curriculum: Vec<Penalty>) -> Self {
        Self { per_curriculum }
    }

    /// Penalties indexed like [`Instance::curricula`].
    pub fn per_curriculum(&self) -> &[Penalty] {
        &self.per_curriculum
    }

    pub fn sorted(&self) -> SortedAllocation {
        SortedAllocation::from_unsorted(self.per_curriculum.clone())
    }

    pub fn total(&self) -> u64 {
        self.per_curriculum.iter().map(|&x| u64::from(x)).sum()
    }
}

struct Breakdown {
    // weighted, per course
    room_capacity: Vec<Penalty>,
    min_working_days: Vec<Penalty>,
    room_stability: Vec<Penalty>,
    // weighted, per curriculum
    isolated: Vec<Penalty>,
}

fn breakdown(i: &Instance, t: &Timetable) -> Breakdown {
    let w = i.weights();
    let nc = i.courses().len();
    let mut room_capacity = vec![0; nc];
    let mut min_working_days = vec![0; nc];
    let mut room_stability = vec![0; nc];
    for c in 0..nc {
        let mut days: Vec<usize> = Vec::new();
        let mut rooms: Vec<usize> = Vec::new();
        for l in i.lectures_of(c) {
            if let Some(s) = t.slot(l) {
                room_capacity[c] += w.room_capacity * i.excess(c, s.room);
                days.push(i.day_of(s.period));
                rooms.push(s.room);
            }
        }
        days.sort_unstable();
        days.dedup();
        rooms.sort_unstable();
        rooms.dedup();
        let missing = i.courses()[c].min_working_days.saturating_sub(days.len() as u32);
        min_working_days[c] = w.min_working_days * missing;
        room_stability[c] = w.room_stability * (rooms.len() as u32).saturating_sub(1);
    }

    let periods = i.periods();
    let ppd = i.periods_per_day();
    let mut isolated = vec![0; i.curricula().len()];
    for (u, cur) in i.curricula().iter().enumerate() {
        let mut count = vec![0u32; periods];
        for &c in &cur.courses {
            for l in i.lectures_of(c) {
                if let Some(s) = t.slot(l) {
                    count[s.period] += 1;
                }
            }
        }
        for p in 0..periods {
            if count[p] == 0 {
                continue;
            }
            let before = p % ppd > 0 && count[p - 1] > 0;
            let after = p % ppd + 1 < ppd && count[p + 1] > 0;
            if !before && !after {
                isolated[u] += w.isolated_lectures * count[p];
            }
        }
    }
    Breakdown { room_capacity, min_working_days, room_stability, isolated }
}

fn ensure_feasible(i: &Instance, t: &Timetable) -> Result<(), ModelError> {
    let violations = validate_hard(i, t);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ModelError::Infeasible(violations.len()))
    }
}

fn sum(v: &[Penalty]) -> u64 {
    v.iter().map(|&x| u64::from(x)).sum()
}

/// Soft costs of a feasible timetable.
pub fn soft_costs(i: &Instance, t: &Timetable) -> Result<SoftCosts, ModelError> {
    ensure_feasible(i, t)?;
    let b = breakdown(i, t);
    let mut costs = SoftCosts {
        room_capacity: sum(&b.room_capacity),
        min_working_days: sum(&b.min_working_days),
        isolated_lectures: sum(&b.isolated),
        room_stability: sum(&b.room_stability),
        total: 0,
    };
    costs.total = costs.room_capacity + costs.min_working_days + costs.isolated_lectures + costs.room_stability;
    Ok(costs)
}

/// Per-curriculum costs of a feasible timetable.
///
/// A curriculum is charged the full course penalties (room capacity, minimum
/// working days, room stability) of each of its courses plus its own
/// isolated lectures.
pub fn allocation(i: &Instance, t: &Timetable) -> Result<Allocation, ModelError> {
    ensure_feasible(i, t)?;
    Ok(allocation_unchecked(i, t))
}

pub(crate) fn allocation_unchecked(i: &Instance, t: &Timetable) -> Allocation {
    let b = breakdown(i, t);
    let per_curriculum = i
        .curricula()
        .iter()
        .enumerate()
        .map(|(u, cur)| {
            cur.courses
                .iter()
                .map(|&c| b.room_capacity[c] + b.min_working_days[c] + b.room_stability[c])
                .sum::<Penalty>()
                + b.isolated[u]
        })
        .collect();
    Allocation { per_curriculum }
}
