use alloc::vec;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::Rng;
use thiserror::Error;

use crate::model::{Instance, Slot, Timetable};

/// Attempts made by [`construct_initial`] before giving up.
pub const MAX_RESTARTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no feasible timetable found after {attempts} attempts")]
    Failed { attempts: usize },
}

/// Builds a feasible timetable by placing the most constrained course next,
/// each lecture in a random feasible period, restarting on dead ends. Rooms
/// go largest class to largest room within each period.
pub fn construct_initial<R: Rng + ?Sized>(i: &Instance, rng: &mut R) -> Result<Timetable, ConstructionError> {
    for _ in 0..MAX_RESTARTS {
        if let Some(periods) = attempt(i, rng) {
            return Ok(assign_rooms(i, &periods));
        }
    }
    Err(ConstructionError::Failed { attempts: MAX_RESTARTS })
}

// Period of every lecture, or None on a dead end.
fn attempt<R: Rng + ?Sized>(i: &Instance, rng: &mut R) -> Option<Vec<usize>> {
    let nc = i.courses().len();
    let np = i.periods();
    let rooms = i.rooms().len();
    // blocked[c * np + p]: placed lectures in p of courses conflicting with c
    let mut blocked = vec![0u32; nc * np];
    let mut load = vec![0usize; np];
    let mut remaining: Vec<u32> = i.courses().iter().map(|c| c.lectures).collect();
    let mut period_of = vec![usize::MAX; i.lecture_count()];
    let degree: Vec<usize> = (0..nc).map(|c| (0..nc).filter(|&d| d != c && i.conflicting(c, d)).count()).collect();

    let feasible = |c: usize, p: usize, blocked: &[u32], load: &[usize]| {
        blocked[c * np + p] == 0 && load[p] < rooms && i.is_available(c, p)
    };

    loop {
        let mut best: Vec<usize> = Vec::new();
        let mut best_key = (usize::MAX, 0usize);
        for c in (0..nc).filter(|&c| remaining[c] > 0) {
            let options = (0..np).filter(|&p| feasible(c, p, &blocked, &load)).count();
            if options < remaining[c] as usize {
                return None;
            }
            let key = (options, usize::MAX - degree[c]);
            if key < best_key {
                best_key = key;
                best.clear();
            }
            if key == best_key {
                best.push(c);
            }
        }
        let Some(&c) = best.choose(rng) else {
            return Some(period_of);
        };
        let options: Vec<usize> = (0..np).filter(|&p| feasible(c, p, &blocked, &load)).collect();
        let &p = options.choose(rng)?;
        let lecture = i.lectures_of(c).start + (i.courses()[c].lectures - remaining[c]) as usize;
        period_of[lecture] = p;
        remaining[c] -= 1;
        load[p] += 1;
        for d in (0..nc).filter(|&d| i.conflicting(c, d)) {
            blocked[d * np + p] += 1;
        }
    }
}

fn assign_rooms(i: &Instance, period_of: &[usize]) -> Timetable {
    let mut by_capacity: Vec<usize> = (0..i.rooms().len()).collect();
    by_capacity.sort_by_key(|&r| (core::cmp::Reverse(i.rooms()[r].capacity), r));
    let mut per_period: Vec<Vec<usize>> = vec![Vec::new(); i.periods()];
    for (l, &p) in period_of.iter().enumerate() {
        per_period[p].push(l);
    }
    let mut t = Timetable::empty(i);
    for (period, lectures) in per_period.iter_mut().enumerate() {
        lectures.sort_by_key(|&l| (core::cmp::Reverse(i.courses()[i.course_of(l)].students), l));
        for (&l, &room) in lectures.iter().zip(&by_capacity) {
            t.place(l, Slot { period, room });
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_hard;
    use crate::synthetic::{planted_instance, SyntheticParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constructs_feasible_timetables() {
        for seed in 0..30 {
            let (i, _) = planted_instance(&SyntheticParams::default(), seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = construct_initial(&i, &mut rng).expect("planted instances are loose");
            assert!(validate_hard(&i, &t).is_empty(), "seed {seed}");
        }
    }
}
