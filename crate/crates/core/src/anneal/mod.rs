//! Simulated annealing over feasible timetables with a leximax objective.
//!
//! Each iteration proposes a Kempe move between two periods, re-solves the
//! rooms of both periods with the configured [`RoomSolver`], and accepts the
//! candidate allocation by [`accept`]. The temperature decays geometrically
//! from `t_max` to `t_min` over the configured number of iterations.

mod construct;
mod kempe;

pub use construct::{construct_initial, ConstructionError, MAX_RESTARTS};
pub use kempe::{kempe_chain, kempe_move};

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fairness::SortedAllocation;
use crate::model::Instance;
use crate::model::{PenaltyState, Slot, Timetable};
use crate::room::{reassign_rooms, RoomError, RoomSolver};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnnealError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Room(#[from] RoomError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealConfig {
    pub t_max: f64,
    pub t_min: f64,
    pub iterations: u64,
    pub variant: RoomSolver,
    pub seed: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self { t_max: 5.0, t_min: 0.01, iterations: 1_000_000, variant: RoomSolver::Glbop, seed: 0 }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<(), AnnealError> {
        if self.t_min.is_nan() || self.t_min <= 0.0 {
            return Err(AnnealError::InvalidConfig("t_min must be positive"));
        }
        if !self.t_max.is_finite() || self.t_max <= self.t_min {
            return Err(AnnealError::InvalidConfig("t_max must exceed t_min"));
        }
        if self.iterations == 0 {
            return Err(AnnealError::InvalidConfig("iterations must be at least 1"));
        }
        Ok(())
    }

    /// Temperature at iteration `k` (0-based).
    pub fn temperature(&self, k: u64) -> f64 {
        if self.iterations <= 1 {
            return self.t_max;
        }
        let frac = k as f64 / (self.iterations - 1) as f64;
        self.t_max * libm::pow(self.t_min / self.t_max, frac)
    }
}

/// Sum of the positive component-wise increases from `current` to
/// `candidate`, both sorted non-increasingly and of equal length.
pub fn energy_increase(current: &SortedAllocation, candidate: &SortedAllocation) -> u64 {
    current.values().iter().zip(candidate.values()).map(|(&a, &b)| u64::from(b.saturating_sub(a))).sum()
}

/// Acceptance rule: a candidate that is at least as fair is always taken,
/// otherwise with probability `exp(-delta / temp)` where `delta` is
/// [`energy_increase`].
pub fn accept<R: Rng + ?Sized>(
    current: &SortedAllocation,
    candidate: &SortedAllocation,
    temp: f64,
    rng: &mut R,
) -> bool {
    if candidate <= current {
        return true;
    }
    let delta = energy_increase(current, candidate) as f64;
    rng.random::<f64>() < libm::exp(-delta / temp)
}

/// A proposed Kempe move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: usize,
    pub to: usize,
    pub seed_lecture: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// The chain could not be swapped feasibly.
    Infeasible,
    Accepted,
    Declined,
}

/// One iteration as seen by an observer of [`run_observed`].
#[derive(Debug)]
pub struct Step<'s> {
    pub iteration: u64,
    pub temperature: f64,
    pub proposal: Option<Move>,
    pub outcome: Outcome,
    /// Allocation of the current state after the step.
    pub current: &'s SortedAllocation,
    pub timetable: &'s Timetable,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnnealStats {
    pub infeasible: u64,
    pub accepted: u64,
    pub declined: u64,
    pub improvements: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealResult {
    pub best_timetable: Timetable,
    pub best_allocation: SortedAllocation,
    pub initial_allocation: SortedAllocation,
    pub iterations_run: u64,
    pub stats: AnnealStats,
}

pub fn run(i: &Instance, cfg: &AnnealConfig) -> Result<AnnealResult, AnnealError> {
    run_observed(i, cfg, |_| {})
}

/// [`run`], reporting every iteration to `observe`.
pub fn run_observed<F>(i: &Instance, cfg: &AnnealConfig, mut observe: F) -> Result<AnnealResult, AnnealError>
where
    F: FnMut(&Step<'_>),
{
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let initial = construct_initial(i, &mut rng)?;
    let mut state = PenaltyState::new(i, &initial);
    polish_rooms(&mut state, cfg.variant)?;

    let mut current = state.sorted_allocation();
    let initial_allocation = current.clone();
    let mut best = current.clone();
    let mut best_timetable = state.timetable().clone();
    let mut stats = AnnealStats::default();
    let periods = i.periods();

    for k in 0..cfg.iterations {
        let temp = cfg.temperature(k);
        let proposal = draw_move(&state, periods, &mut rng);
        let outcome = match proposal {
            None => Outcome::Infeasible,
            Some(mv) => {
                let before: Vec<(usize, Slot)> = state
                    .lectures_in(mv.from)
                    .iter()
                    .chain(state.lectures_in(mv.to))
                    .map(|&l| (l, state.slot(l).expect("placed")))
                    .collect();
                match kempe::apply(&mut state, mv, cfg.variant)? {
                    false => Outcome::Infeasible,
                    true => {
                        let candidate = state.sorted_allocation();
                        if accept(&current, &candidate, temp, &mut rng) {
                            current = candidate;
                            if current < best {
                                best = current.clone();
                                best_timetable = state.timetable().clone();
                                stats.improvements += 1;
                            }
                            Outcome::Accepted
                        } else {
                            for &(l, s) in &before {
                                state.relocate(l, Some(s));
                            }
                            Outcome::Declined
                        }
                    }
                }
            }
        };
        match outcome {
            Outcome::Infeasible => stats.infeasible += 1,
            Outcome::Accepted => stats.accepted += 1,
            Outcome::Declined => stats.declined += 1,
        }
        observe(&Step {
            iteration: k,
            temperature: temp,
            proposal,
            outcome,
            current: &current,
            timetable: state.timetable(),
        });
    }

    // Leave every period of the reported timetable room-optimal.
    let mut final_state = PenaltyState::new(i, &best_timetable);
    polish_rooms(&mut final_state, cfg.variant)?;
    let polished = final_state.sorted_allocation();
    debug_assert!(polished <= best);

    Ok(AnnealResult {
        best_allocation: polished,
        best_timetable: final_state.into_timetable(),
        initial_allocation,
        iterations_run: cfg.iterations,
        stats,
    })
}

// Uniform ordered pair of distinct periods with at least one lecture between
// them, then a uniform lecture of the pair.
fn draw_move<R: Rng + ?Sized>(state: &PenaltyState<'_>, periods: usize, rng: &mut R) -> Option<Move> {
    if periods < 2 || state.instance().lecture_count() == 0 {
        return None;
    }
    loop {
        let from = rng.random_range(0..periods);
        let mut to = rng.random_range(0..periods - 1);
        if to >= from {
            to += 1;
        }
        let (a, b) = (state.lectures_in(from), state.lectures_in(to));
        let total = a.len() + b.len();
        if total == 0 {
            continue;
        }
        let k = rng.random_range(0..total);
        let seed_lecture = if k < a.len() { a[k] } else { b[k - a.len()] };
        return Some(Move { from, to, seed_lecture });
    }
}

/// Re-solves the rooms of every period until none improves.
pub fn polish_rooms(state: &mut PenaltyState<'_>, solver: RoomSolver) -> Result<(), RoomError> {
    loop {
        let mut changed = false;
        for p in 0..state.instance().periods() {
            changed |= reassign_rooms(state, p, solver)?;
        }
        if !changed {
            return Ok(());
        }
    }
}

/// Seed for run `run` of `variant` on instance number `instance`, derived
/// from `base` with SplitMix64 so that distinct inputs give unrelated streams.
pub fn derive_seed(base: u64, instance: u64, variant: RoomSolver, run: u64) -> u64 {
    let tag = match variant {
        RoomSolver::Glbop => 1,
        RoomSolver::Lsap => 2,
    };
    [instance, tag, run].into_iter().fold(splitmix(base), |acc, x| splitmix(acc ^ splitmix(x)))
}

fn splitmix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
