use alloc::vec;
use alloc::vec::Vec;

use super::Instance;

/// A resource: a period together with a room.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub period: usize,
    pub room: usize,
}

/// Placement of every lecture of an instance, possibly partial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Timetable {
    slots: Vec<Option<Slot>>,
}

impl Timetable {
    /// Timetable with no lecture placed.
    pub fn empty(instance: &Instance) -> Self {
        Self { slots: vec![None; instance.lecture_count()] }
    }

    pub fn from_slots(slots: Vec<Option<Slot>>) -> Self {
        Self { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slot(&self, lecture: usize) -> Option<Slot> {
        self.slots[lecture]
    }

    pub fn slots(&self) -> &[Option<Slot>] {
        &self.slots
    }

    pub fn place(&mut self, lecture: usize, slot: Slot) {
        self.slots[lecture] = Some(slot);
    }

    pub fn unplace(&mut self, lecture: usize) {
        self.slots[lecture] = None;
    }

    pub fn is_complete(&self) -> bool {
        self.slots.iter().all(Option::is_some)
    }

    /// Placed lectures with their slots.
    pub fn placed(&self) -> impl Iterator<Item = (usize, Slot)> + '_ {
        self.slots.iter().enumerate().filter_map(|(l, s)| s.map(|s| (l, s)))
    }

    /// Lectures placed in `period`.
    pub fn lectures_in(&self, period: usize) -> Vec<usize> {
        self.placed().filter(|(_, s)| s.period == period).map(|(l, _)| l).collect()
    }

    /// Lectures of one course are interchangeable; this orders each course's
    /// slots by period (then room), unplaced last, so that equal placements
    /// compare equal.
    pub fn canonicalize(&mut self, instance: &Instance) {
        for c in 0..instance.courses().len() {
            let range = instance.lectures_of(c);
            self.slots[range].sort_by(|a, b| match (a, b) {
                (Some(x), Some(y)) => x.cmp(y),
                (Some(_), None) => core::cmp::Ordering::Less,
                (None, Some(_)) => core::cmp::Ordering::Greater,
                (None, None) => core::cmp::Ordering::Equal,
            });
        }
    }

    pub fn canonical(&self, instance: &Instance) -> Self {
        let mut t = self.clone();
        t.canonicalize(instance);
        t
    }
}
