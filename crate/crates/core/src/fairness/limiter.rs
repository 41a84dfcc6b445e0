use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

pub const EPM_WINDOW_SECONDS: i64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateDecision {
    Admitted,
    Rejected,
}

/// Admitted actions per window for an EPM limit: round(x * window / 60), halves up.
pub fn epm_cap(epm_limit: u32, window_seconds: i64) -> usize {
    let num = u64::from(epm_limit) * window_seconds as u64;
    ((num + 30) / 60) as usize
}

/// Sliding-window limiter over game steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateLimiter {
    cap: Option<usize>,
    window_steps: i64,
    admitted: VecDeque<i64>,
}

impl RateLimiter {
    pub fn new(epm_limit: Option<u32>, steps_per_second: u32) -> Self {
        Self {
            cap: epm_limit.map(|x| epm_cap(x, EPM_WINDOW_SECONDS)),
            window_steps: EPM_WINDOW_SECONDS * i64::from(steps_per_second),
            admitted: VecDeque::new(),
        }
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    pub fn window_steps(&self) -> i64 {
        self.window_steps
    }

    /// Timestamps currently inside the trailing window.
    pub fn admitted(&self) -> impl Iterator<Item = i64> + '_ {
        self.admitted.iter().copied()
    }

    /// Admits the action at `now` iff fewer than `cap` actions were admitted in (now - window, now].
    pub fn epm_gate(&mut self, now: i64) -> GateDecision {
        let Some(cap) = self.cap else {
            return GateDecision::Admitted;
        };
        debug_assert!(self.admitted.back().is_none_or(|&t| t <= now));
        while self.admitted.front().is_some_and(|&t| t <= now - self.window_steps) {
            self.admitted.pop_front();
        }
        if self.admitted.len() < cap {
            self.admitted.push_back(now);
            GateDecision::Admitted
        } else {
            GateDecision::Rejected
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps() {
        assert_eq!(epm_cap(180, 5), 15);
        assert_eq!(epm_cap(120, 5), 10);
        assert_eq!(epm_cap(160, 5), 13);
        assert_eq!(epm_cap(140, 5), 12);
    }

    #[test]
    fn sixteenth_in_window_rejected() {
        let mut l = RateLimiter::new(Some(180), 16);
        for i in 0..15 {
            assert_eq!(l.epm_gate(i * 5), GateDecision::Admitted);
        }
        assert_eq!(l.epm_gate(79), GateDecision::Rejected);
        // The first admission (step 0) leaves the window at step 80.
        assert_eq!(l.epm_gate(80), GateDecision::Admitted);
    }

    #[test]
    fn unlimited_admits_everything() {
        let mut l = RateLimiter::new(None, 16);
        assert!((0..1000).all(|_| l.epm_gate(0) == GateDecision::Admitted));
    }

    #[test]
    fn brute_force_cap_for_120() {
        // Spam every step for 10 s; the densest 80-step window must hold exactly 10.
        let mut l = RateLimiter::new(Some(120), 16);
        let stamps: Vec<i64> = (0..160).filter(|&t| l.epm_gate(t) == GateDecision::Admitted).collect();
        let densest = (0..160)
            .map(|s| stamps.iter().filter(|&&t| t >= s && t < s + 80).count())
            .max()
            .unwrap();
        assert_eq!(densest, 10);
    }
}
