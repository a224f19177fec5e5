#![allow(dead_code)]

use mmfctt_core::model::{Course, Curriculum, Instance, Room, Slot, Timetable};

/// (id, teacher, lectures, min days, students)
pub type CourseSpec<'a> = (&'a str, &'a str, u32, u32, u32);

pub fn instance(
    courses: &[CourseSpec<'_>],
    rooms: &[u32],
    days: usize,
    periods_per_day: usize,
    curricula: &[&[usize]],
) -> Instance {
    Instance::new(
        "toy".into(),
        courses
            .iter()
            .map(|&(id, teacher, lectures, min_working_days, students)| Course {
                id: id.into(),
                teacher: teacher.into(),
                lectures,
                min_working_days,
                students,
            })
            .collect(),
        rooms.iter().enumerate().map(|(r, &capacity)| Room { id: format!("r{}", r + 1), capacity }).collect(),
        days,
        periods_per_day,
        curricula
            .iter()
            .enumerate()
            .map(|(u, cs)| Curriculum { id: format!("u{}", u + 1), courses: cs.to_vec() })
            .collect(),
        &[],
    )
    .unwrap()
}

/// Places lectures in order from (period, room) pairs.
pub fn timetable(i: &Instance, slots: &[(usize, usize)]) -> Timetable {
    let mut t = Timetable::empty(i);
    for (l, &(period, room)) in slots.iter().enumerate() {
        t.place(l, Slot { period, room });
    }
    t
}

/// Two-room example: A and C share period 1 and rooms r1 (20 seats),
/// r2 (10 seats). Curricula u1 = {A, B}, u2 = {C, D}, u3 = {C, E}.
/// Courses: A, B, C, D, E (one lecture each).
pub fn two_by_two() -> (Instance, Timetable) {
    let i = instance(
        &[
            ("A", "ta", 1, 1, 12),
            ("B", "tb", 1, 2, 5),
            ("C", "tc", 1, 1, 12),
            ("D", "td", 1, 2, 5),
            ("E", "te", 1, 1, 5),
        ],
        &[20, 10],
        1,
        4,
        &[&[0, 1], &[2, 3], &[2, 4]],
    );
    // A in r1, C in r2 is the non-optimal start.
    let t = timetable(&i, &[(1, 0), (0, 0), (1, 1), (0, 1), (3, 0)]);
    (i, t)
}

/// Per-curriculum costs and the total, evaluated from scratch with the
/// standard weights (1, 5, 2, 1). Works on infeasible timetables too.
pub fn direct_costs(i: &Instance, t: &Timetable) -> (Vec<u32>, u64) {
    let course_pen: Vec<u32> = (0..i.courses().len())
        .map(|c| {
            let slots: Vec<Slot> = i.lectures_of(c).filter_map(|l| t.slot(l)).collect();
            let excess: u32 =
                slots.iter().map(|s| i.courses()[c].students.saturating_sub(i.rooms()[s.room].capacity)).sum();
            let mut days: Vec<usize> = slots.iter().map(|s| s.period / i.periods_per_day()).collect();
            days.sort();
            days.dedup();
            let mut rooms: Vec<usize> = slots.iter().map(|s| s.room).collect();
            rooms.sort();
            rooms.dedup();
            excess
                + 5 * i.courses()[c].min_working_days.saturating_sub(days.len() as u32)
                + (rooms.len() as u32).saturating_sub(1)
        })
        .collect();
    let ppd = i.periods_per_day();
    let isolated: Vec<u32> = i
        .curricula()
        .iter()
        .map(|u| {
            let periods: Vec<usize> =
                u.courses.iter().flat_map(|&c| i.lectures_of(c)).filter_map(|l| t.slot(l)).map(|s| s.period).collect();
            periods
                .iter()
                .filter(|&&p| !periods.iter().any(|&q| q / ppd == p / ppd && (q + 1 == p || p + 1 == q)))
                .count() as u32
                * 2
        })
        .collect();
    let per: Vec<u32> = i
        .curricula()
        .iter()
        .zip(&isolated)
        .map(|(u, iso)| u.courses.iter().map(|&c| course_pen[c]).sum::<u32>() + iso)
        .collect();
    let total =
        course_pen.iter().map(|&x| u64::from(x)).sum::<u64>() + isolated.iter().map(|&x| u64::from(x)).sum::<u64>();
    (per, total)
}
