//! Curriculum-based course timetabling model.
//!
//! Courses consist of lectures that are placed on (period, room) pairs. A
//! period is a day together with a timeslot, numbered `day * periods_per_day
//! + slot`. Lectures are numbered globally, course by course.

mod evaluate;
mod state;
mod timetable;

pub use evaluate::{allocation, soft_costs, validate_hard, Allocation, SoftCosts, Violation};
pub use state::PenaltyState;
pub use timetable::{Slot, Timetable};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::fairness::Penalty;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("instance has no periods")]
    NoPeriods,
    #[error("curriculum {curriculum} references unknown course {course}")]
    UnknownCourse { curriculum: usize, course: usize },
    #[error("unavailability references unknown course {0}")]
    UnknownUnavailableCourse(usize),
    #[error("period {0} is out of range")]
    PeriodOutOfRange(usize),
    #[error("timetable violates {0} hard constraint(s)")]
    Infeasible(usize),
    #[error("timetable has {found} lectures, instance has {expected}")]
    LectureCountMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Course {
    pub id: String,
    pub teacher: String,
    pub lectures: u32,
    pub min_working_days: u32,
    pub students: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Room {
    pub id: String,
    pub capacity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curriculum {
    pub id: String,
    /// Indices into [`Instance::courses`].
    pub courses: Vec<usize>,
}

/// Soft constraint weights. The defaults are the ITC2007 track 3 weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SoftWeights {
    /// Per student above room capacity, per lecture.
    pub room_capacity: Penalty,
    /// Per day short of a course's minimum working days.
    pub min_working_days: Penalty,
    /// Per isolated curriculum lecture.
    pub isolated_lectures: Penalty,
    /// Per room used by a course beyond its first.
    pub room_stability: Penalty,
}

impl Default for SoftWeights {
    fn default() -> Self {
        Self { room_capacity: 1, min_working_days: 5, isolated_lectures: 2, room_stability: 1 }
    }
}

/// An immutable timetabling instance with precomputed lookup tables.
#[derive(Debug, Clone)]
pub struct Instance {
    name: String,
    courses: Vec<Course>,
    rooms: Vec<Room>,
    days: usize,
    periods_per_day: usize,
    curricula: Vec<Curriculum>,
    weights: SoftWeights,

    lecture_course: Vec<usize>,
    first_lecture: Vec<usize>,
    course_curricula: Vec<Vec<usize>>,
    teacher_of: Vec<usize>,
    // course x period
    available: Vec<bool>,
    // course x course; includes same course and same teacher
    conflicts: Vec<bool>,
}

impl Instance {
    pub fn new(
        name: String,
        courses: Vec<Course>,
        rooms: Vec<Room>,
        days: usize,
        periods_per_day: usize,
        curricula: Vec<Curriculum>,
        unavailability: &[(usize, usize)],
    ) -> Result<Self, ModelError> {
        let periods = days * periods_per_day;
        if periods == 0 {
            return Err(ModelError::NoPeriods);
        }
        let nc = courses.len();
        let mut course_curricula = vec![Vec::new(); nc];
        for (u, cur) in curricula.iter().enumerate() {
            for &c in &cur.courses {
                if c >= nc {
                    return Err(ModelError::UnknownCourse { curriculum: u, course: c });
                }
                if !course_curricula[c].contains(&u) {
                    course_curricula[c].push(u);
                }
            }
        }
        let mut available = vec![true; nc * periods];
        for &(c, p) in unavailability {
            if c >= nc {
                return Err(ModelError::UnknownUnavailableCourse(c));
            }
            if p >= periods {
                return Err(ModelError::PeriodOutOfRange(p));
            }
            available[c * periods + p] = false;
        }

        let mut teachers: Vec<&str> = Vec::new();
        let teacher_of = courses
            .iter()
            .map(|c| match teachers.iter().position(|&t| t == c.teacher) {
                Some(i) => i,
                None => {
                    teachers.push(&c.teacher);
                    teachers.len() - 1
                }
            })
            .collect::<Vec<_>>();

        let mut conflicts = vec![false; nc * nc];
        for a in 0..nc {
            for b in 0..nc {
                conflicts[a * nc + b] = a == b
                    || teacher_of[a] == teacher_of[b]
                    || course_curricula[a].iter().any(|u| course_curricula[b].contains(u));
            }
        }

        let mut lecture_course = Vec::new();
        let mut first_lecture = Vec::with_capacity(nc);
        for (c, course) in courses.iter().enumerate() {
            first_lecture.push(lecture_course.len());
            lecture_course.extend(core::iter::repeat_n(c, course.lectures as usize));
        }

        Ok(Self {
            name,
            courses,
            rooms,
            days,
            periods_per_day,
            curricula,
            weights: SoftWeights::default(),
            lecture_course,
            first_lecture,
            course_curricula,
            teacher_of,
            available,
            conflicts,
        })
    }

    /// Replaces the soft constraint weights.
    pub fn with_weights(mut self, weights: SoftWeights) -> Self {
        self.weights = weights;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn courses(&self) -> &[Course] {
        &self.courses
    }

    pub fn rooms(&self) -> &[Room] {
        &self.rooms
    }

    pub fn curricula(&self) -> &[Curriculum] {
        &self.curricula
    }

    pub fn weights(&self) -> SoftWeights {
        self.weights
    }

    pub fn days(&self) -> usize {
        self.days
    }

    pub fn periods_per_day(&self) -> usize {
        self.periods_per_day
    }

    pub fn periods(&self) -> usize {
        self.days * self.periods_per_day
    }

    pub fn day_of(&self, period: usize) -> usize {
        period / self.periods_per_day
    }

    pub fn lecture_count(&self) -> usize {
        self.lecture_course.len()
    }

    pub fn course_of(&self, lecture: usize) -> usize {
        self.lecture_course[lecture]
    }

    /// Global lecture indices of a course.
    pub fn lectures_of(&self, course: usize) -> core::ops::Range<usize> {
        let start = self.first_lecture[course];
        start..start + self.courses[course].lectures as usize
    }

    /// Curricula containing `course`.
    pub fn curricula_of(&self, course: usize) -> &[usize] {
        &self.course_curricula[course]
    }

    pub fn teacher_index(&self, course: usize) -> usize {
        self.teacher_of[course]
    }

    pub fn is_available(&self, course: usize, period: usize) -> bool {
        self.available[course * self.periods() + period]
    }

    /// Whether two courses may not share a period: same course, same teacher
    /// or a common curriculum.
    pub fn conflicting(&self, a: usize, b: usize) -> bool {
        self.conflicts[a * self.courses.len() + b]
    }

    /// Students above the capacity of `room`, unweighted.
    pub fn excess(&self, course: usize, room: usize) -> Penalty {
        self.courses[course].students.saturating_sub(self.rooms[room].capacity)
    }

    /// Total number of unavailable (course, period) pairs.
    pub fn unavailability_count(&self) -> usize {
        self.available.iter().filter(|&&a| !a).count()
    }
}
