//! Occupant activities and daily schedules for the simulated humans.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rl::StateId;
use crate::rng::RngStream;

pub const SLOTS_PER_DAY: usize = 240;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Activity {
    Sleeping,
    NotAtHome,
    Domestic,
    Relaxed,
}

impl Activity {
    pub const ALL: [Activity; 4] = [Self::Sleeping, Self::NotAtHome, Self::Domestic, Self::Relaxed];

    /// Respiratory minute volume, l/min.
    pub fn rmv(self) -> f64 {
        match self {
            Self::Sleeping => 6.0,
            Self::NotAtHome => 0.0,
            Self::Domestic => 12.0,
            Self::Relaxed => 8.0,
        }
    }

    /// Metabolic rate in met; `None` for an empty house.
    pub fn met(self) -> Option<f64> {
        match self {
            Self::Sleeping => Some(0.7),
            Self::NotAtHome => None,
            Self::Domestic => Some(2.0),
            Self::Relaxed => Some(1.0),
        }
    }

    pub fn is_home(self) -> bool {
        self != Self::NotAtHome
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sleeping => "sleeping",
            Self::NotAtHome => "not_at_home",
            Self::Domestic => "domestic",
            Self::Relaxed => "relaxed",
        }
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sleeping" | "s" => Ok(Self::Sleeping),
            "not_at_home" | "away" | "a" => Ok(Self::NotAtHome),
            "domestic" | "d" => Ok(Self::Domestic),
            "relaxed" | "r" => Ok(Self::Relaxed),
            other => Err(Error::domain(format!("unknown activity '{other}'"))),
        }
    }
}

pub fn state_of(activity: Activity) -> StateId {
    StateId(match activity {
        Activity::Sleeping => 0,
        Activity::NotAtHome => 1,
        Activity::Domestic => 2,
        Activity::Relaxed => 3,
    })
}

pub fn activity_of(state: StateId) -> Result<Activity> {
    Activity::ALL.get(state.0).copied().ok_or(Error::IndexOutOfRange {
        what: "activity state",
        index: state.0,
        size: Activity::ALL.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HumanId {
    H1,
    H2,
    H3,
}

impl HumanId {
    pub const ALL: [HumanId; 3] = [Self::H1, Self::H2, Self::H3];

    pub fn default_randomness(self) -> f64 {
        match self {
            Self::H1 => 0.05,
            Self::H2 => 0.15,
            Self::H3 => 0.35,
        }
    }

    /// Default base schedule as `(start_slot, activity)` blocks.
    pub fn default_blocks(self) -> &'static [(usize, Activity)] {
        use Activity::*;
        match self {
            Self::H1 => &[
                (0, Sleeping),
                (70, Domestic),
                (85, NotAtHome),
                (175, Domestic),
                (195, Relaxed),
            ],
            Self::H2 => &[
                (0, Sleeping),
                (75, Domestic),
                (90, NotAtHome),
                (165, Relaxed),
                (185, Domestic),
                (205, Relaxed),
            ],
            Self::H3 => &[
                (0, Sleeping),
                (60, Domestic),
                (72, Relaxed),
                (84, NotAtHome),
                (120, Domestic),
                (135, NotAtHome),
                (170, Relaxed),
                (190, Domestic),
                (200, Relaxed),
                (225, Sleeping),
            ],
        }
    }
}

impl fmt::Display for HumanId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::H1 => "H1",
            Self::H2 => "H2",
            Self::H3 => "H3",
        })
    }
}

impl FromStr for HumanId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "H1" => Ok(Self::H1),
            "H2" => Ok(Self::H2),
            "H3" => Ok(Self::H3),
            other => Err(Error::domain(format!(
                "unknown human '{other}' (expected H1, H2 or H3)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActivityProfile {
    pub human_id: HumanId,
    pub base_schedule: Vec<Activity>,
    /// Per-slot probability of replacing the base activity by a uniform draw.
    pub randomness: f64,
}

impl ActivityProfile {
    pub fn new(human_id: HumanId, base_schedule: Vec<Activity>, randomness: f64) -> Result<Self> {
        if base_schedule.len() != SLOTS_PER_DAY {
            return Err(Error::domain(format!(
                "schedule must cover {SLOTS_PER_DAY} slots, got {}",
                base_schedule.len()
            )));
        }
        if !(0.0..=1.0).contains(&randomness) {
            return Err(Error::domain(format!(
                "randomness must lie in [0, 1], got {randomness}"
            )));
        }
        Ok(Self {
            human_id,
            base_schedule,
            randomness,
        })
    }

    pub fn for_human(human_id: HumanId) -> Self {
        let schedule = schedule_from_blocks(human_id.default_blocks()).expect("built-in schedule");
        Self::new(human_id, schedule, human_id.default_randomness()).expect("built-in profile")
    }

    pub fn with_randomness(mut self, randomness: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&randomness) {
            return Err(Error::domain(format!(
                "randomness must lie in [0, 1], got {randomness}"
            )));
        }
        self.randomness = randomness;
        Ok(self)
    }
}

/// Expand `(start_slot, activity)` blocks into a full day. The first block
/// must start at slot 0 and starts must increase.
pub fn schedule_from_blocks(blocks: &[(usize, Activity)]) -> Result<Vec<Activity>> {
    if blocks.first().map(|b| b.0) != Some(0) {
        return Err(Error::domain("schedule must start at slot 0"));
    }
    if blocks.windows(2).any(|w| w[0].0 >= w[1].0) || blocks.iter().any(|b| b.0 >= SLOTS_PER_DAY) {
        return Err(Error::domain("schedule block starts must increase within the day"));
    }
    let mut out = Vec::with_capacity(SLOTS_PER_DAY);
    for (i, &(start, activity)) in blocks.iter().enumerate() {
        let end = blocks.get(i + 1).map_or(SLOTS_PER_DAY, |b| b.0);
        out.extend(std::iter::repeat_n(activity, end - start));
    }
    Ok(out)
}

/// Parse `slot:activity` blocks, comma separated, e.g.
/// `0:sleeping, 70:domestic, 90:not_at_home`.
pub fn parse_blocks(text: &str) -> Result<Vec<(usize, Activity)>> {
    let blocks = text
        .split(',')
        .map(str::trim)
        .filter(|b| !b.is_empty())
        .map(|b| {
            let (slot, name) = b
                .split_once(':')
                .ok_or_else(|| Error::domain(format!("expected slot:activity, got '{b}'")))?;
            let slot = slot
                .trim()
                .parse()
                .map_err(|e| Error::domain(format!("bad slot in '{b}': {e}")))?;
            Ok((slot, name.trim().parse::<Activity>()?))
        })
        .collect::<Result<Vec<_>>>()?;
    schedule_from_blocks(&blocks)?;
    Ok(blocks)
}

pub fn format_blocks(blocks: &[(usize, Activity)]) -> String {
    blocks
        .iter()
        .map(|(slot, a)| format!("{slot}:{}", a.name()))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Activity at `slot`: the base schedule, or with probability `randomness` a
/// uniform draw over all four activities.
///
/// Always consumes one coin; a substitution consumes one more draw.
pub fn sample_activity(profile: &ActivityProfile, slot: usize, rng: &mut RngStream) -> Result<Activity> {
    let base = *profile.base_schedule.get(slot).ok_or(Error::IndexOutOfRange {
        what: "day slot",
        index: slot,
        size: SLOTS_PER_DAY,
    })?;
    if rng.bernoulli(profile.randomness) {
        Ok(Activity::ALL[rng.below(Activity::ALL.len())])
    } else {
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_text_round_trips() {
        let blocks = HumanId::H3.default_blocks();
        assert_eq!(parse_blocks(&format_blocks(blocks)).unwrap(), blocks);
        assert!(parse_blocks("10:sleeping").is_err());
        assert!(parse_blocks("0:sleeping, 5 domestic").is_err());
        assert!(parse_blocks("0:sleeping, 5:napping").is_err());
    }

    #[test]
    fn state_enumeration() {
        let ids: Vec<usize> = Activity::ALL.iter().map(|&a| state_of(a).0).collect();
        assert_eq!(ids, vec![0, 1, 2, 3]);
        for a in Activity::ALL {
            assert_eq!(activity_of(state_of(a)).unwrap(), a);
        }
        assert!(activity_of(StateId(4)).is_err());
    }

    #[test]
    fn default_profiles_cover_the_day() {
        for h in HumanId::ALL {
            let p = ActivityProfile::for_human(h);
            assert_eq!(p.base_schedule.len(), SLOTS_PER_DAY);
            for a in Activity::ALL {
                assert!(p.base_schedule.contains(&a), "{h} lacks {a}");
            }
        }
        let r: Vec<f64> = HumanId::ALL.iter().map(|h| h.default_randomness()).collect();
        assert!(r[0] < r[1] && r[1] < r[2]);
    }

    #[test]
    fn zero_randomness_is_verbatim() {
        let p = ActivityProfile::for_human(HumanId::H2).with_randomness(0.0).unwrap();
        let mut rng = RngStream::new(3);
        for slot in 0..SLOTS_PER_DAY {
            assert_eq!(sample_activity(&p, slot, &mut rng).unwrap(), p.base_schedule[slot]);
        }
    }

    #[test]
    fn full_randomness_is_uniform() {
        let p = ActivityProfile::for_human(HumanId::H1).with_randomness(1.0).unwrap();
        let mut rng = RngStream::new(8);
        let n = 10_000;
        let hits = (0..n)
            .filter(|i| {
                let slot = i % SLOTS_PER_DAY;
                sample_activity(&p, slot, &mut rng).unwrap() == p.base_schedule[slot]
            })
            .count();
        let q = 0.25;
        let sigma = (n as f64 * q * (1.0 - q)).sqrt();
        assert!((hits as f64 - n as f64 * q).abs() <= 3.0 * sigma, "{hits}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = ActivityProfile::for_human(HumanId::H3);
        let draw = |seed| {
            let mut rng = RngStream::new(seed);
            (0..40 * SLOTS_PER_DAY)
                .map(|i| sample_activity(&p, i % SLOTS_PER_DAY, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
        assert_ne!(draw(11), draw(12));
    }

    #[test]
    fn bad_schedules_rejected() {
        assert!(schedule_from_blocks(&[(5, Activity::Relaxed)]).is_err());
        assert!(schedule_from_blocks(&[(0, Activity::Relaxed), (0, Activity::Domestic)]).is_err());
        assert!(ActivityProfile::new(HumanId::H1, vec![Activity::Relaxed; 10], 0.1).is_err());
        assert!("H4".parse::<HumanId>().is_err());
        assert_eq!("away".parse::<Activity>().unwrap(), Activity::NotAtHome);
    }
}
