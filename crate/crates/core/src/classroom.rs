//! Synthetic smart-classroom learner.
//!
//! Eight learner states from three bits (alertness, fatigue, vertigo; 1 is the
//! favourable level), five teaching actions, and a quiz score in percent as
//! reward. A hidden display mode (2D or 3D) makes one of the VR toggles
//! illegal at any time.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::env::{Environment, StepOutcome};
use crate::error::{Error, Result};
use crate::kv::KeyValues;
use crate::rl::{ActionId, StateId};
use crate::rng::RngStream;

pub const STATE_COUNT: usize = 8;
pub const ACTION_COUNT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LearnerState {
    pub al: bool,
    pub fl: bool,
    pub vl: bool,
}

impl LearnerState {
    pub fn index(self) -> usize {
        (self.al as usize) << 2 | (self.fl as usize) << 1 | self.vl as usize
    }

    pub fn from_index(i: usize) -> Result<Self> {
        if i >= STATE_COUNT {
            return Err(Error::IndexOutOfRange {
                what: "learner state",
                index: i,
                size: STATE_COUNT,
            });
        }
        Ok(Self {
            al: i & 4 != 0,
            fl: i & 2 != 0,
            vl: i & 1 != 0,
        })
    }

    pub fn id(self) -> StateId {
        StateId(self.index())
    }

    pub fn favourable_bits(self) -> usize {
        self.al as usize + self.fl as usize + self.vl as usize
    }

    pub fn all() -> impl Iterator<Item = LearnerState> {
        (0..STATE_COUNT).map(|i| Self::from_index(i).unwrap())
    }
}

/// `S1` … `S8`, with `S1 = (0,0,0)` and `S8 = (1,1,1)`.
impl fmt::Display for LearnerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.index() + 1)
    }
}

impl FromStr for LearnerState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n: usize = s
            .trim()
            .strip_prefix(['S', 's'])
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::domain(format!("bad learner state '{s}' (expected S1..S8)")))?;
        if n == 0 {
            return Err(Error::domain("learner states are numbered from S1"));
        }
        Self::from_index(n - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassroomAction {
    Break,
    EnableVr,
    DisableVr,
    ChangeContent,
    NoChange,
}

impl ClassroomAction {
    pub const ALL: [ClassroomAction; ACTION_COUNT] = [
        Self::Break,
        Self::EnableVr,
        Self::DisableVr,
        Self::ChangeContent,
        Self::NoChange,
    ];

    pub fn id(self) -> ActionId {
        ActionId(self as usize)
    }

    pub fn from_id(a: ActionId) -> Result<Self> {
        Self::ALL.get(a.0).copied().ok_or(Error::IndexOutOfRange {
            what: "classroom action",
            index: a.0,
            size: ACTION_COUNT,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Break => "break",
            Self::EnableVr => "enable_vr",
            Self::DisableVr => "disable_vr",
            Self::ChangeContent => "change_content",
            Self::NoChange => "no_change",
        }
    }
}

impl FromStr for ClassroomAction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| Error::domain(format!("unknown classroom action '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisplayMode {
    TwoD,
    ThreeD,
}

pub fn is_legal(mode: DisplayMode, action: ClassroomAction) -> bool {
    !matches!(
        (mode, action),
        (DisplayMode::ThreeD, ClassroomAction::EnableVr) | (DisplayMode::TwoD, ClassroomAction::DisableVr)
    )
}

/// Per-bit effects of one action, used to build the default tables. Each
/// entry is the probability that the bit is forced to the given value;
/// otherwise it keeps its value.
#[derive(Debug, Clone, Copy, PartialEq)]
struct BitEffect {
    al_up: f64,
    al_down: f64,
    fl_up: f64,
    fl_down: f64,
    vl_up: f64,
    vl_down: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerModel {
    /// `transitions[state][action][next]`
    pub transitions: Vec<Vec<Vec<f64>>>,
    /// `(mean, half-width)` of the uniform quiz score per state, percent.
    pub quiz: Vec<(f64, f64)>,
}

impl LearnerModel {
    /// The shipped model.
    ///
    /// Break restores fatigue (0.8) and vertigo (0.6); enabling VR raises
    /// alertness (0.7) at a vertigo risk (0.3); disabling VR restores vertigo
    /// (0.7) but costs alertness (0.4); new content re-draws alertness; no
    /// change lets alertness lapse (0.2). Every action except a break also
    /// tires the learner with probability `fatigue_drift`.
    pub fn default_with_drift(fatigue_drift: f64) -> Self {
        let effect = |a: ClassroomAction| {
            let drift = if a == ClassroomAction::Break {
                0.0
            } else {
                fatigue_drift
            };
            let base = BitEffect {
                al_up: 0.0,
                al_down: 0.0,
                fl_up: 0.0,
                fl_down: drift,
                vl_up: 0.0,
                vl_down: 0.0,
            };
            match a {
                ClassroomAction::Break => BitEffect {
                    fl_up: 0.8,
                    vl_up: 0.6,
                    ..base
                },
                ClassroomAction::EnableVr => BitEffect {
                    al_up: 0.7,
                    vl_down: 0.3,
                    ..base
                },
                ClassroomAction::DisableVr => BitEffect {
                    vl_up: 0.7,
                    al_down: 0.4,
                    ..base
                },
                ClassroomAction::ChangeContent => BitEffect {
                    al_up: 0.5,
                    al_down: 0.5,
                    ..base
                },
                ClassroomAction::NoChange => BitEffect { al_down: 0.2, ..base },
            }
        };
        Self::from_effects(effect)
    }

    /// Learner whose state never changes without a reason: no fatigue drift
    /// and no alertness lapse under `NoChange`, which makes `S8` absorbing for
    /// that action.
    pub fn ideal() -> Self {
        let mut m = Self::default_with_drift(0.0);
        let stay = ClassroomAction::NoChange as usize;
        for s in 0..STATE_COUNT {
            m.transitions[s][stay] = (0..STATE_COUNT).map(|n| if n == s { 1.0 } else { 0.0 }).collect();
        }
        m
    }

    fn from_effects(effect: impl Fn(ClassroomAction) -> BitEffect) -> Self {
        // Probability that a bit currently `v` ends up 1.
        let p_one = |v: bool, up: f64, down: f64| {
            if v {
                1.0 - down
            } else {
                up
            }
        };
        let transitions = LearnerState::all()
            .map(|s| {
                ClassroomAction::ALL
                    .iter()
                    .map(|&a| {
                        let e = effect(a);
                        let pa = p_one(s.al, e.al_up, e.al_down);
                        let pf = p_one(s.fl, e.fl_up, e.fl_down);
                        let pv = p_one(s.vl, e.vl_up, e.vl_down);
                        LearnerState::all()
                            .map(|n| {
                                let f = |bit: bool, p: f64| if bit { p } else { 1.0 - p };
                                f(n.al, pa) * f(n.fl, pf) * f(n.vl, pv)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let quiz = LearnerState::all()
            .map(|s| {
                let mean = 30.0 + 20.0 * s.al as u8 as f64 + 15.0 * s.fl as u8 as f64 + 15.0 * s.vl as u8 as f64;
                (mean, 10.0)
            })
            .collect();
        Self { transitions, quiz }
    }

    pub fn validate(&self) -> Result<()> {
        if self.transitions.len() != STATE_COUNT || self.quiz.len() != STATE_COUNT {
            return Err(Error::domain("learner model needs 8 states"));
        }
        for (s, rows) in self.transitions.iter().enumerate() {
            if rows.len() != ACTION_COUNT {
                return Err(Error::domain(format!("state S{} needs 5 action rows", s + 1)));
            }
            for (a, row) in rows.iter().enumerate() {
                let name = ClassroomAction::ALL[a].name();
                if row.len() != STATE_COUNT || row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                    return Err(Error::config(
                        format!("transition.S{}.{name}", s + 1),
                        "needs 8 probabilities in [0, 1]",
                    ));
                }
                let total: f64 = row.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::config(
                        format!("transition.S{}.{name}", s + 1),
                        format!("probabilities sum to {total}"),
                    ));
                }
            }
        }
        for (s, &(mean, spread)) in self.quiz.iter().enumerate() {
            if !(0.0..=100.0).contains(&mean) || !(spread >= 0.0 && spread.is_finite()) {
                return Err(Error::config(
                    format!("quiz.S{}", s + 1),
                    "mean must lie in [0, 100] and spread be non-negative",
                ));
            }
        }
        // More favourable bits never lower the expected score.
        for s in LearnerState::all() {
            for bit in [4usize, 2, 1] {
                let i = s.index();
                if i & bit == 0 && self.quiz[i | bit].0 < self.quiz[i].0 {
                    return Err(Error::config(
                        format!("quiz.S{}", (i | bit) + 1),
                        format!("mean below that of S{}", i + 1),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Parse the text form: `transition.S<n>.<action> = p1, …, p8` and
    /// `quiz.S<n> = mean, spread`. Rows not given keep the default model's.
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        let mut m = match kv.get::<f64>("fatigue_drift")? {
            Some(d) if (0.0..=1.0).contains(&d) => Self::default_with_drift(d),
            Some(d) => return Err(Error::config("fatigue_drift", format!("{d} outside [0, 1]"))),
            None => Self::default(),
        };
        for key in kv.keys() {
            let parts: Vec<&str> = key.split('.').collect();
            match parts.as_slice() {
                ["fatigue_drift"] => {}
                ["transition", s, a] => {
                    let s: LearnerState = s.parse().map_err(|e: Error| Error::config(key, e.to_string()))?;
                    let a: ClassroomAction = a.parse().map_err(|e: Error| Error::config(key, e.to_string()))?;
                    let row: Vec<f64> = kv.get_list(key)?.unwrap_or_default();
                    m.transitions[s.index()][a as usize] = row;
                }
                ["quiz", s] => {
                    let s: LearnerState = s.parse().map_err(|e: Error| Error::config(key, e.to_string()))?;
                    let v: Vec<f64> = kv.get_list(key)?.unwrap_or_default();
                    let [mean, spread] = v[..] else {
                        return Err(Error::config(key, "expected 'mean, spread'"));
                    };
                    m.quiz[s.index()] = (mean, spread);
                }
                _ => return Err(Error::config(key, "unknown learner model key")),
            }
        }
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_key_values(&KeyValues::load(path)?).map_err(|e| e.context(path.display()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in LearnerState::all() {
            for a in ClassroomAction::ALL {
                let row: Vec<String> = self.transitions[s.index()][a as usize]
                    .iter()
                    .map(|p| format!("{p}"))
                    .collect();
                out.push_str(&format!("transition.{s}.{} = {}\n", a.name(), row.join(", ")));
            }
        }
        for s in LearnerState::all() {
            let (mean, spread) = self.quiz[s.index()];
            out.push_str(&format!("quiz.{s} = {mean}, {spread}\n"));
        }
        out
    }

    pub fn expected_quiz(&self, s: LearnerState) -> f64 {
        self.quiz[s.index()].0
    }
}

impl Default for LearnerModel {
    fn default() -> Self {
        Self::default_with_drift(DEFAULT_FATIGUE_DRIFT)
    }
}

pub const DEFAULT_FATIGUE_DRIFT: f64 = 0.15;

/// Next state and quiz score for `a` in `s`. Draws the next state first, then
/// the score, which belongs to the next state.
pub fn step_learner(
    model: &LearnerModel,
    s: LearnerState,
    a: ClassroomAction,
    mode: DisplayMode,
    rng: &mut RngStream,
) -> Result<(LearnerState, f64)> {
    if !is_legal(mode, a) {
        return Err(Error::Contract(format!("{} is not allowed in {mode:?} mode", a.name())));
    }
    let next = LearnerState::from_index(rng.categorical(&model.transitions[s.index()][a as usize]))?;
    let (mean, spread) = model.quiz[next.index()];
    let score = (mean + spread * (2.0 * rng.uniform() - 1.0)).clamp(0.0, 100.0);
    Ok((next, score))
}

pub fn classroom_reward(quiz_score: f64) -> f64 {
    quiz_score
}

/// Relative quiz loss in percent, floored at zero.
pub fn utility_drop(baseline_mean: f64, mitigated_mean: f64) -> Result<f64> {
    if !(baseline_mean > 0.0 && baseline_mean <= 100.0) || !(0.0..=100.0).contains(&mitigated_mean) {
        return Err(Error::domain(format!(
            "utility drop needs baseline in (0, 100] and mitigated in [0, 100], got {baseline_mean} and {mitigated_mean}"
        )));
    }
    Ok(((baseline_mean - mitigated_mean) / baseline_mean * 100.0).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassroomConfig {
    pub model: LearnerModel,
    /// `None` draws the first state uniformly.
    pub initial_state: Option<LearnerState>,
    pub initial_mode: DisplayMode,
    /// Steps per session; the session index plays the role of a day.
    pub session_length: usize,
}

impl Default for ClassroomConfig {
    fn default() -> Self {
        Self {
            model: LearnerModel::default(),
            initial_state: None,
            initial_mode: DisplayMode::TwoD,
            session_length: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassroomWorld {
    config: ClassroomConfig,
    state: LearnerState,
    mode: DisplayMode,
    t: u64,
    rng: RngStream,
}

impl ClassroomWorld {
    pub fn new(config: ClassroomConfig, mut rng: RngStream) -> Result<Self> {
        config.model.validate()?;
        if config.session_length == 0 {
            return Err(Error::config("classroom.session_length", "must be positive"));
        }
        let state = match config.initial_state {
            Some(s) => s,
            None => LearnerState::from_index(rng.below(STATE_COUNT))?,
        };
        Ok(Self {
            mode: config.initial_mode,
            config,
            state,
            t: 0,
            rng,
        })
    }

    pub fn state(&self) -> LearnerState {
        self.state
    }

    pub fn mode(&self) -> DisplayMode {
        self.mode
    }

    pub fn model(&self) -> &LearnerModel {
        &self.config.model
    }
}

impl Environment for ClassroomWorld {
    fn state_count(&self) -> usize {
        STATE_COUNT
    }

    fn action_count(&self) -> usize {
        ACTION_COUNT
    }

    fn current_state(&self) -> StateId {
        self.state.id()
    }

    fn legal_actions(&self) -> Vec<ActionId> {
        ClassroomAction::ALL
            .iter()
            .filter(|&&a| is_legal(self.mode, a))
            .map(|a| a.id())
            .collect()
    }

    fn step(&mut self, action: ActionId) -> Result<StepOutcome> {
        let a = ClassroomAction::from_id(action)?;
        let (next, score) = step_learner(&self.config.model, self.state, a, self.mode, &mut self.rng)?;
        match a {
            ClassroomAction::EnableVr => self.mode = DisplayMode::ThreeD,
            ClassroomAction::DisableVr => self.mode = DisplayMode::TwoD,
            _ => {}
        }
        self.state = next;
        self.t += 1;
        Ok(StepOutcome {
            raw_reward: classroom_reward(score),
            next_state: next.id(),
            observable: Some(score),
            update_ready: true,
        })
    }

    fn slot(&self) -> usize {
        (self.t % self.config.session_length as u64) as usize
    }

    fn slots_per_day(&self) -> usize {
        self.config.session_length
    }

    fn action_value(&self, action: ActionId) -> f64 {
        action.0 as f64
    }
}
