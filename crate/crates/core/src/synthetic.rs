//! Random instances with a planted feasible timetable, for tests and
//! benchmarks.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Course, Curriculum, Instance, Room, Slot, Timetable};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticParams {
    pub days: usize,
    pub periods_per_day: usize,
    pub rooms: usize,
    pub courses: usize,
    pub max_lectures: u32,
    pub curricula: usize,
    pub max_curriculum_size: usize,
    /// Probability that a course shares a teacher with an earlier course.
    pub teacher_sharing: f64,
    /// Probability that a free (course, period) pair is made unavailable.
    pub unavailability: f64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        Self {
            days: 3,
            periods_per_day: 4,
            rooms: 3,
            courses: 10,
            max_lectures: 3,
            curricula: 5,
            max_curriculum_size: 4,
            teacher_sharing: 0.2,
            unavailability: 0.1,
        }
    }
}

/// Builds an instance for which the returned timetable is feasible.
pub fn planted_instance(params: &SyntheticParams, seed: u64) -> (Instance, Timetable) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let periods = params.days * params.periods_per_day;
    let mut room_free: Vec<Vec<usize>> = (0..periods).map(|_| (0..params.rooms).collect()).collect();
    for free in &mut room_free {
        free.shuffle(&mut rng);
    }

    // planted placement
    let mut course_slots: Vec<Vec<Slot>> = Vec::new();
    for _ in 0..params.courses {
        let wanted = rng.random_range(1..=params.max_lectures) as usize;
        let mut open: Vec<usize> = (0..periods).filter(|&p| !room_free[p].is_empty()).collect();
        open.shuffle(&mut rng);
        let slots: Vec<Slot> =
            open.into_iter().take(wanted).map(|p| Slot { period: p, room: room_free[p].pop().unwrap() }).collect();
        course_slots.push(slots);
    }
    let periods_of: Vec<Vec<usize>> = course_slots.iter().map(|s| s.iter().map(|x| x.period).collect()).collect();
    let disjoint = |a: usize, b: usize| periods_of[a].iter().all(|p| !periods_of[b].contains(p));

    let mut teachers: Vec<usize> = Vec::new();
    let mut next_teacher = 0;
    for c in 0..params.courses {
        let candidates: Vec<usize> =
            (0..c).filter(|&d| (0..c).filter(|&e| teachers[e] == teachers[d]).all(|e| disjoint(c, e))).collect();
        let shared = (!candidates.is_empty() && rng.random_bool(params.teacher_sharing))
            .then(|| teachers[*candidates.choose(&mut rng).unwrap()]);
        teachers.push(shared.unwrap_or_else(|| {
            next_teacher += 1;
            next_teacher - 1
        }));
    }

    let mut curricula = Vec::new();
    for u in 0..params.curricula {
        let mut order: Vec<usize> = (0..params.courses).collect();
        order.shuffle(&mut rng);
        let size = rng.random_range(1..=params.max_curriculum_size.max(1));
        let mut members: Vec<usize> = Vec::new();
        for c in order {
            if members.len() == size {
                break;
            }
            if members.iter().all(|&m| disjoint(c, m)) {
                members.push(c);
            }
        }
        members.sort_unstable();
        curricula.push(Curriculum { id: format!("q{u:03}"), courses: members });
    }

    let mut unavailable = Vec::new();
    for (c, own) in periods_of.iter().enumerate() {
        for p in 0..periods {
            if !own.contains(&p) && rng.random_bool(params.unavailability) {
                unavailable.push((c, p));
            }
        }
    }

    let courses: Vec<Course> = course_slots
        .iter()
        .enumerate()
        .map(|(c, slots)| Course {
            id: format!("c{c:04}"),
            teacher: format!("t{:03}", teachers[c]),
            lectures: slots.len() as u32,
            min_working_days: match slots.len().min(params.days) {
                0 => 0,
                most => rng.random_range(1..=most) as u32,
            },
            students: rng.random_range(5..=60),
        })
        .collect();
    let rooms: Vec<Room> =
        (0..params.rooms).map(|r| Room { id: format!("r{r}"), capacity: rng.random_range(10..=60) }).collect();

    let instance = Instance::new(
        format!("synthetic-{seed}"),
        courses,
        rooms,
        params.days,
        params.periods_per_day,
        curricula,
        &unavailable,
    )
    .expect("generated references are valid");

    let mut timetable = Timetable::empty(&instance);
    for (c, slots) in course_slots.iter().enumerate() {
        for (l, &s) in instance.lectures_of(c).zip(slots) {
            timetable.place(l, s);
        }
    }
    (instance, timetable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_hard;

    #[test]
    fn planted_timetables_are_feasible() {
        for seed in 0..50 {
            let (i, t) = planted_instance(&SyntheticParams::default(), seed);
            assert!(validate_hard(&i, &t).is_empty(), "seed {seed}");
        }
    }
}
