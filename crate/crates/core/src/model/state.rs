use alloc::vec;
use alloc::vec::Vec;

use super::{Allocation, Instance, Slot, Timetable};
use crate::fairness::{Penalty, SortedAllocation};

/// A timetable together with counters that keep soft penalties current under
/// single-lecture relocations.
///
/// Costs reported here agree with [`super::allocation`] and
/// [`super::soft_costs`] on feasible timetables; the counters do not assume
/// feasibility.
#[derive(Debug, Clone)]
pub struct PenaltyState<'a> {
    instance: &'a Instance,
    timetable: Timetable,
    // course x day
    course_day: Vec<u16>,
    days_used: Vec<u16>,
    // course x room
    course_room: Vec<u16>,
    rooms_used: Vec<u16>,
    // unweighted students above capacity, summed over a course's lectures
    course_excess: Vec<Penalty>,
    // curriculum x period
    curriculum_period: Vec<u16>,
    // unweighted isolated lecture count per curriculum
    isolated: Vec<Penalty>,
    period_lectures: Vec<Vec<usize>>,
    // position of each placed lecture inside its period list
    period_index: Vec<usize>,
}

impl<'a> PenaltyState<'a> {
    pub fn new(instance: &'a Instance, timetable: &Timetable) -> Self {
        let nc = instance.courses().len();
        let mut state = Self {
            instance,
            timetable: Timetable::empty(instance),
            course_day: vec![0; nc * instance.days()],
            days_used: vec![0; nc],
            course_room: vec![0; nc * instance.rooms().len()],
            rooms_used: vec![0; nc],
            course_excess: vec![0; nc],
            curriculum_period: vec![0; instance.curricula().len() * instance.periods()],
            isolated: vec![0; instance.curricula().len()],
            period_lectures: vec![Vec::new(); instance.periods()],
            period_index: vec![usize::MAX; instance.lecture_count()],
        };
        for (lecture, slot) in timetable.placed() {
            state.relocate(lecture, Some(slot));
        }
        state
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn timetable(&self) -> &Timetable {
        &self.timetable
    }

    pub fn into_timetable(self) -> Timetable {
        self.timetable
    }

    pub fn slot(&self, lecture: usize) -> Option<Slot> {
        self.timetable.slot(lecture)
    }

    /// Lectures currently placed in `period`, in no particular order.
    pub fn lectures_in(&self, period: usize) -> &[usize] {
        &self.period_lectures[period]
    }

    /// Moves a lecture to `slot`, or unplaces it.
    pub fn relocate(&mut self, lecture: usize, slot: Option<Slot>) {
        if let Some(old) = self.timetable.slot(lecture) {
            self.remove(lecture, old);
        }
        if let Some(new) = slot {
            self.add(lecture, new);
        }
    }

    /// Sets only the room of a placed lecture. The order of
    /// [`Self::lectures_in`] is left as is.
    pub fn set_room(&mut self, lecture: usize, room: usize) {
        let old = self.timetable.slot(lecture).expect("lecture is placed");
        if old.room != room {
            let at = self.period_index[lecture];
            self.remove(lecture, old);
            self.add(lecture, Slot { period: old.period, room });
            let list = &mut self.period_lectures[old.period];
            let last = list.len() - 1;
            list.swap(at, last);
            self.period_index[list[at]] = at;
            self.period_index[list[last]] = last;
        }
    }

    fn add(&mut self, lecture: usize, s: Slot) {
        let i = self.instance;
        let c = i.course_of(lecture);
        let d = i.day_of(s.period);
        let cd = &mut self.course_day[c * i.days() + d];
        *cd += 1;
        if *cd == 1 {
            self.days_used[c] += 1;
        }
        let cr = &mut self.course_room[c * i.rooms().len() + s.room];
        *cr += 1;
        if *cr == 1 {
            self.rooms_used[c] += 1;
        }
        self.course_excess[c] += i.excess(c, s.room);
        for &u in i.curricula_of(c) {
            self.shift_curriculum(u, s.period, true);
        }
        self.period_index[lecture] = self.period_lectures[s.period].len();
        self.period_lectures[s.period].push(lecture);
        self.timetable.place(lecture, s);
    }

    fn remove(&mut self, lecture: usize, s: Slot) {
        let i = self.instance;
        let c = i.course_of(lecture);
        let d = i.day_of(s.period);
        let cd = &mut self.course_day[c * i.days() + d];
        *cd -= 1;
        if *cd == 0 {
            self.days_used[c] -= 1;
        }
        let cr = &mut self.course_room[c * i.rooms().len() + s.room];
        *cr -= 1;
        if *cr == 0 {
            self.rooms_used[c] -= 1;
        }
        self.course_excess[c] -= i.excess(c, s.room);
        for &u in i.curricula_of(c) {
            self.shift_curriculum(u, s.period, false);
        }
        let list = &mut self.period_lectures[s.period];
        let at = self.period_index[lecture];
        list.swap_remove(at);
        if let Some(&moved) = list.get(at) {
            self.period_index[moved] = at;
        }
        self.period_index[lecture] = usize::MAX;
        self.timetable.unplace(lecture);
    }

    // Adjusts the curriculum's lecture count in `period` and its isolated
    // lecture count, which can only change in the period and its two
    // same-day neighbours.
    fn shift_curriculum(&mut self, u: usize, period: usize, up: bool) {
        let ppd = self.instance.periods_per_day();
        let base = u * self.instance.periods();
        let day_start = period - period % ppd;
        let lo = period.saturating_sub(1).max(day_start);
        let hi = (period + 1).min(day_start + ppd - 1);
        let isolated_around = |counts: &[u16]| -> Penalty {
            (lo..=hi)
                .filter(|&p| {
                    counts[base + p] > 0
                        && (p == day_start || counts[base + p - 1] == 0)
                        && (p == day_start + ppd - 1 || counts[base + p + 1] == 0)
                })
                .map(|p| Penalty::from(counts[base + p]))
                .sum()
        };
        let before = isolated_around(&self.curriculum_period);
        if up {
            self.curriculum_period[base + period] += 1;
        } else {
            self.curriculum_period[base + period] -= 1;
        }
        let after = isolated_around(&self.curriculum_period);
        self.isolated[u] = self.isolated[u] + after - before;
    }

    /// Weighted room capacity, minimum working days and room stability
    /// penalty of a course.
    pub fn course_penalty(&self, course: usize) -> Penalty {
        let i = self.instance;
        let w = i.weights();
        let min_days = i.courses()[course].min_working_days;
        w.room_capacity * self.course_excess[course]
            + w.min_working_days * min_days.saturating_sub(u32::from(self.days_used[course]))
            + w.room_stability * u32::from(self.rooms_used[course]).saturating_sub(1)
    }

    pub fn curriculum_cost(&self, u: usize) -> Penalty {
        let i = self.instance;
        i.curricula()[u].courses.iter().map(|&c| self.course_penalty(c)).sum::<Penalty>()
            + i.weights().isolated_lectures * self.isolated[u]
    }

    /// Weighted penalty terms of the lecture's course that depend on the
    /// lecture's room, evaluated as if the lecture sat in `room`.
    pub fn room_dependent(&self, lecture: usize, room: usize) -> Penalty {
        let i = self.instance;
        let w = i.weights();
        let c = i.course_of(lecture);
        let current = self.slot(lecture).expect("lecture is placed").room;
        let nr = i.rooms().len();
        let others_in = |r: usize| self.course_room[c * nr + r] - u16::from(r == current);
        let used_without = self.rooms_used[c] - u16::from(others_in(current) == 0);
        let used_with = used_without + u16::from(others_in(room) == 0);
        w.room_capacity * self.course_excess_of(c, room) + w.room_stability * (u32::from(used_with) - 1)
    }

    fn course_excess_of(&self, course: usize, room: usize) -> Penalty {
        self.instance.excess(course, room)
    }

    pub fn allocation(&self) -> Allocation {
        Allocation::new((0..self.instance.curricula().len()).map(|u| self.curriculum_cost(u)).collect())
    }

    pub fn sorted_allocation(&self) -> SortedAllocation {
        self.allocation().sorted()
    }

    /// Total weighted soft penalty.
    pub fn total(&self) -> u64 {
        let i = self.instance;
        let courses: u64 = (0..i.courses().len()).map(|c| u64::from(self.course_penalty(c))).sum();
        let isolated: u64 = self.isolated.iter().map(|&x| u64::from(x)).sum();
        courses + u64::from(i.weights().isolated_lectures) * isolated
    }
}
