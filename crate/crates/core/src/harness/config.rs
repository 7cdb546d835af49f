//! Experiment configuration: parsing, validation and the resolved echo.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::adversary::{AttackOptions, KMeansOptions};
use crate::classroom::{ClassroomConfig, LearnerModel, LearnerState};
use crate::error::{Error, Result};
use crate::kv::KeyValues;
use crate::privacy::MitigationPolicy;
use crate::thermal::activity::{format_blocks, parse_blocks};
use crate::thermal::world::{OutdoorProfile, ThermalConfig};
use crate::thermal::{Activity, HumanId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvironmentKind {
    Thermal,
    Classroom,
}

impl EnvironmentKind {
    pub fn default_steps(self) -> u64 {
        match self {
            Self::Thermal => 8000,
            Self::Classroom => 500,
        }
    }
}

impl fmt::Display for EnvironmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Thermal => "thermal",
            Self::Classroom => "classroom",
        })
    }
}

impl FromStr for EnvironmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "thermal" => Ok(Self::Thermal),
            "classroom" => Ok(Self::Classroom),
            other => Err(Error::domain(format!("unknown environment '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentParams {
    pub alpha: f64,
    pub gamma: f64,
    pub eps_max: f64,
    pub eps_min: f64,
    pub decay: f64,
}

impl Default for AgentParams {
    fn default() -> Self {
        Self {
            alpha: 0.01,
            gamma: 0.001,
            eps_max: 0.9,
            eps_min: 0.1,
            decay: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyParams {
    pub refit_cadence: usize,
    /// Sliding history window; `None` keeps the whole run.
    pub window: Option<usize>,
    /// After a behaviour switch, fit λ only on samples from after the switch.
    pub restart_fit_on_switch: bool,
}

impl Default for PrivacyParams {
    fn default() -> Self {
        Self {
            refit_cadence: 50,
            window: None,
            restart_fit_on_switch: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorSwitch {
    pub step: u64,
    pub human: HumanId,
    /// Randomness of the new profile; `None` uses the human's default.
    pub randomness: Option<f64>,
    /// Base schedule of the new profile; `None` uses the human's default.
    pub schedule: Option<Vec<(usize, Activity)>>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepGrid {
    pub p: Vec<f64>,
    pub zeta: Vec<f64>,
    pub lambda_percent: Vec<f64>,
}

impl SweepGrid {
    pub fn is_empty(&self) -> bool {
        self.p.is_empty() && self.zeta.is_empty() && self.lambda_percent.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub environment: EnvironmentKind,
    pub steps: u64,
    pub seed: u64,
    pub human: HumanId,
    /// Overrides the human's default per-slot randomness.
    pub randomness: Option<f64>,
    /// Overrides the human's default base schedule, as `(start slot, activity)`
    /// blocks.
    pub schedule: Option<Vec<(usize, Activity)>>,
    pub mitigation: MitigationPolicy,
    pub agent: AgentParams,
    pub privacy: PrivacyParams,
    pub behavior_switch: Option<BehaviorSwitch>,
    pub thermal: ThermalConfig,
    pub classroom: ClassroomConfig,
    /// Where the learner model came from, for the echo.
    pub learner_model_path: Option<PathBuf>,
    pub adversary: AttackOptions,
    pub sweep: Option<SweepGrid>,
}

impl ExperimentConfig {
    pub fn new(environment: EnvironmentKind) -> Self {
        Self {
            environment,
            steps: environment.default_steps(),
            seed: 42,
            human: HumanId::H2,
            randomness: None,
            schedule: None,
            mitigation: MitigationPolicy::None,
            agent: AgentParams::default(),
            privacy: PrivacyParams::default(),
            behavior_switch: None,
            thermal: ThermalConfig::default(),
            classroom: ClassroomConfig::default(),
            learner_model_path: None,
            adversary: AttackOptions::default(),
            sweep: None,
        }
    }

    pub fn thermal() -> Self {
        Self::new(EnvironmentKind::Thermal)
    }

    pub fn classroom() -> Self {
        Self::new(EnvironmentKind::Classroom)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_steps(mut self, steps: u64) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_human(mut self, human: HumanId) -> Self {
        self.human = human;
        self
    }

    pub fn with_mitigation(mut self, mitigation: MitigationPolicy) -> Self {
        self.mitigation = mitigation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::config("steps", "must be at least 1"));
        }
        self.mitigation
            .validate()
            .map_err(|e| Error::config("mitigation", e.to_string()))?;
        let a = &self.agent;
        for (key, v) in [
            ("agent.alpha", a.alpha),
            ("agent.gamma", a.gamma),
            ("agent.eps_max", a.eps_max),
            ("agent.eps_min", a.eps_min),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(key, format!("{v} outside [0, 1]")));
            }
        }
        if a.eps_min > a.eps_max {
            return Err(Error::config("agent.eps_min", "exceeds agent.eps_max"));
        }
        if !(a.decay >= 0.0 && a.decay.is_finite()) {
            return Err(Error::config("agent.decay", "must be finite and non-negative"));
        }
        if self.privacy.refit_cadence == 0 {
            return Err(Error::config("privacy.refit_cadence", "must be positive"));
        }
        if self.privacy.window == Some(0) {
            return Err(Error::config("privacy.window", "must be positive (omit to disable)"));
        }
        if let Some(r) = self.randomness {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::config("randomness", format!("{r} outside [0, 1]")));
            }
        }
        if self.schedule.is_some() && self.environment != EnvironmentKind::Thermal {
            return Err(Error::config("schedule", "schedules need the thermal environment"));
        }
        if let Some(sw) = &self.behavior_switch {
            if self.environment != EnvironmentKind::Thermal {
                return Err(Error::config(
                    "switch.step",
                    "behaviour switches need the thermal environment",
                ));
            }
            if sw.step >= self.steps {
                return Err(Error::config(
                    "switch.step",
                    format!("{} is not before the end of the run ({} steps)", sw.step, self.steps),
                ));
            }
            if let Some(r) = sw.randomness {
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::config("switch.randomness", format!("{r} outside [0, 1]")));
                }
            }
        }
        if self.adversary.k_max < 3 {
            return Err(Error::config("adversary.k_max", "must be at least 3"));
        }
        let w = self.adversary.action_weight;
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::config(
                "adversary.action_weight",
                format!("{w} must be positive"),
            ));
        }
        if self.adversary.fixed_k == Some(0) {
            return Err(Error::config("adversary.fixed_k", "must be positive"));
        }
        if let Some(grid) = &self.sweep {
            for (key, values) in [
                ("sweep.p", &grid.p),
                ("sweep.zeta", &grid.zeta),
                ("sweep.lambda_percent", &grid.lambda_percent),
            ] {
                if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                    return Err(Error::config(key, format!("{v} outside [0, 1]")));
                }
            }
            if !grid.p.is_empty() && !(grid.zeta.is_empty() && grid.lambda_percent.is_empty()) {
                return Err(Error::config(
                    "sweep.p",
                    "cannot be combined with zeta or lambda_percent grids",
                ));
            }
        }
        self.thermal.validate()?;
        self.classroom.model.validate()?;
        if self.classroom.session_length == 0 {
            return Err(Error::config("classroom.session_length", "must be positive"));
        }
        Ok(())
    }

    /// Parse a config file. Relative paths inside it resolve against its
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let kv = KeyValues::load(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_key_values(&kv, base).map_err(|e| e.context(path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_key_values(&KeyValues::parse(text)?, Path::new("."))
    }

    pub fn from_key_values(kv: &KeyValues, base_dir: &Path) -> Result<Self> {
        kv.reject_unknown(KNOWN_KEYS, &[])?;
        let environment: EnvironmentKind = kv.get_or("environment", EnvironmentKind::Thermal)?;
        let mut cfg = Self::new(environment);
        cfg.steps = kv.get_or("steps", cfg.steps)?;
        cfg.seed = kv.get_or("seed", cfg.seed)?;
        cfg.human = kv.get_or("human", cfg.human)?;
        cfg.randomness = kv.get("randomness")?;
        cfg.schedule = parse_schedule(kv, "schedule")?;

        cfg.mitigation = parse_mitigation(kv)?;

        let a = &mut cfg.agent;
        a.alpha = kv.get_or("agent.alpha", a.alpha)?;
        a.gamma = kv.get_or("agent.gamma", a.gamma)?;
        a.eps_max = kv.get_or("agent.eps_max", a.eps_max)?;
        a.eps_min = kv.get_or("agent.eps_min", a.eps_min)?;
        a.decay = kv.get_or("agent.decay", a.decay)?;

        let p = &mut cfg.privacy;
        p.refit_cadence = kv.get_or("privacy.refit_cadence", p.refit_cadence)?;
        p.window = match kv.raw("privacy.window") {
            None | Some("none") | Some("off") => None,
            Some(_) => kv.get("privacy.window")?,
        };
        p.restart_fit_on_switch = kv.get_or("privacy.restart_fit_on_switch", p.restart_fit_on_switch)?;

        if let Some(step) = kv.get::<u64>("switch.step")? {
            let human = kv
                .get("switch.human")?
                .ok_or_else(|| Error::config("switch.human", "required when switch.step is set"))?;
            cfg.behavior_switch = Some(BehaviorSwitch {
                step,
                human,
                randomness: kv.get("switch.randomness")?,
                schedule: parse_schedule(kv, "switch.schedule")?,
            });
        } else if kv.contains("switch.human") || kv.contains("switch.randomness") || kv.contains("switch.schedule") {
            return Err(Error::config("switch.step", "required when other switch keys are set"));
        }

        let t = &mut cfg.thermal;
        t.house.r_eq = kv.get_or("thermal.r_eq", t.house.r_eq)?;
        t.house.capacitance = kv.get_or("thermal.capacitance", t.house.capacitance)?;
        t.house.hvac_conductance = kv.get_or("thermal.hvac_conductance", t.house.hvac_conductance)?;
        t.house.heat_supply_c = kv.get_or("thermal.heat_supply_c", t.house.heat_supply_c)?;
        t.house.cool_supply_c = kv.get_or("thermal.cool_supply_c", t.house.cool_supply_c)?;
        t.house.band_f = kv.get_or("thermal.band_f", t.house.band_f)?;
        t.house.breath_temp_c = kv.get_or("thermal.breath_temp_c", t.house.breath_temp_c)?;
        t.house.substep_seconds = kv.get_or("thermal.substep_seconds", t.house.substep_seconds)?;
        t.outdoor = parse_outdoor(kv, t.outdoor)?;
        let c = &mut t.comfort;
        c.clo_sleeping = kv.get_or("thermal.clo_sleeping", c.clo_sleeping)?;
        c.clo_domestic = kv.get_or("thermal.clo_domestic", c.clo_domestic)?;
        c.clo_relaxed = kv.get_or("thermal.clo_relaxed", c.clo_relaxed)?;
        c.relative_humidity = kv.get_or("thermal.relative_humidity", c.relative_humidity)?;
        c.air_velocity = kv.get_or("thermal.air_velocity", c.air_velocity)?;
        t.initial_indoor_f = kv.get_or("thermal.initial_indoor_f", t.initial_indoor_f)?;
        t.settle_timeout = kv.get_or("thermal.settle_timeout", t.settle_timeout)?;
        t.settle_tolerance_f = kv.get_or("thermal.settle_tolerance_f", t.settle_tolerance_f)?;

        let cl = &mut cfg.classroom;
        match kv.raw("classroom.learner_model") {
            None | Some("default") => {}
            Some("ideal") => cl.model = LearnerModel::ideal(),
            Some(path) => {
                let path = base_dir.join(path);
                cl.model = LearnerModel::load(&path)?;
                cfg.learner_model_path = Some(path);
            }
        }
        cl.session_length = kv.get_or("classroom.session_length", cl.session_length)?;
        cl.initial_state = match kv.raw("classroom.initial_state") {
            None | Some("random") => None,
            Some(s) => Some(
                s.parse::<LearnerState>()
                    .map_err(|e| Error::config("classroom.initial_state", e.to_string()))?,
            ),
        };

        let adv = &mut cfg.adversary;
        adv.k_max = kv.get_or("adversary.k_max", adv.k_max)?;
        adv.fixed_k = match kv.raw("adversary.fixed_k") {
            None | Some("elbow") => None,
            Some(_) => kv.get("adversary.fixed_k")?,
        };
        adv.kmeans = KMeansOptions {
            restarts: kv.get_or("adversary.restarts", adv.kmeans.restarts)?,
            max_iterations: kv.get_or("adversary.max_iterations", adv.kmeans.max_iterations)?,
        };
        adv.action_weight = kv.get_or("adversary.action_weight", adv.action_weight)?;

        let grid = SweepGrid {
            p: kv.get_list("sweep.p")?.unwrap_or_default(),
            zeta: kv.get_list("sweep.zeta")?.unwrap_or_default(),
            lambda_percent: kv.get_list("sweep.lambda_percent")?.unwrap_or_default(),
        };
        cfg.sweep = (!grid.is_empty()).then_some(grid);

        cfg.validate()?;
        Ok(cfg)
    }

    /// Every setting, defaults included, as `key = value` text that parses
    /// back to the same configuration.
    pub fn echo(&self) -> String {
        let mut kv = KeyValues::default();
        kv.insert("environment", self.environment.to_string());
        kv.insert("steps", self.steps.to_string());
        kv.insert("seed", self.seed.to_string());
        kv.insert("human", self.human.to_string());
        if let Some(r) = self.randomness {
            kv.insert("randomness", r.to_string());
        }
        if let Some(b) = &self.schedule {
            kv.insert("schedule", format_blocks(b));
        }
        kv.insert("mitigation.kind", self.mitigation.tag());
        if let Some(p) = self.mitigation.randomize_p() {
            kv.insert("mitigation.p", p.to_string());
        }
        if let Some(z) = self.mitigation.zeta() {
            kv.insert("mitigation.zeta", z.to_string());
        }
        if let MitigationPolicy::AdaParl { lambda_percent, .. } = self.mitigation {
            kv.insert("mitigation.lambda_percent", lambda_percent.to_string());
        }
        let a = &self.agent;
        kv.insert("agent.alpha", a.alpha.to_string());
        kv.insert("agent.gamma", a.gamma.to_string());
        kv.insert("agent.eps_max", a.eps_max.to_string());
        kv.insert("agent.eps_min", a.eps_min.to_string());
        kv.insert("agent.decay", a.decay.to_string());
        let p = &self.privacy;
        kv.insert("privacy.refit_cadence", p.refit_cadence.to_string());
        kv.insert("privacy.window", p.window.map_or("none".into(), |w| w.to_string()));
        kv.insert("privacy.restart_fit_on_switch", p.restart_fit_on_switch.to_string());
        if let Some(sw) = &self.behavior_switch {
            kv.insert("switch.step", sw.step.to_string());
            kv.insert("switch.human", sw.human.to_string());
            if let Some(r) = sw.randomness {
                kv.insert("switch.randomness", r.to_string());
            }
            if let Some(b) = &sw.schedule {
                kv.insert("switch.schedule", format_blocks(b));
            }
        }
        let t = &self.thermal;
        kv.insert("thermal.r_eq", t.house.r_eq.to_string());
        kv.insert("thermal.capacitance", t.house.capacitance.to_string());
        kv.insert("thermal.hvac_conductance", t.house.hvac_conductance.to_string());
        kv.insert("thermal.heat_supply_c", t.house.heat_supply_c.to_string());
        kv.insert("thermal.cool_supply_c", t.house.cool_supply_c.to_string());
        kv.insert("thermal.band_f", t.house.band_f.to_string());
        kv.insert("thermal.breath_temp_c", t.house.breath_temp_c.to_string());
        kv.insert("thermal.substep_seconds", t.house.substep_seconds.to_string());
        match t.outdoor {
            OutdoorProfile::Constant(v) => {
                kv.insert("thermal.outdoor", "constant");
                kv.insert("thermal.outdoor_mean", v.to_string());
            }
            OutdoorProfile::Sinusoid {
                mean,
                amplitude,
                coldest_slot,
            } => {
                kv.insert("thermal.outdoor", "sinusoid");
                kv.insert("thermal.outdoor_mean", mean.to_string());
                kv.insert("thermal.outdoor_amplitude", amplitude.to_string());
                kv.insert("thermal.outdoor_coldest_slot", coldest_slot.to_string());
            }
        }
        let c = &t.comfort;
        kv.insert("thermal.clo_sleeping", c.clo_sleeping.to_string());
        kv.insert("thermal.clo_domestic", c.clo_domestic.to_string());
        kv.insert("thermal.clo_relaxed", c.clo_relaxed.to_string());
        kv.insert("thermal.relative_humidity", c.relative_humidity.to_string());
        kv.insert("thermal.air_velocity", c.air_velocity.to_string());
        kv.insert("thermal.initial_indoor_f", t.initial_indoor_f.to_string());
        kv.insert("thermal.settle_timeout", t.settle_timeout.to_string());
        kv.insert("thermal.settle_tolerance_f", t.settle_tolerance_f.to_string());
        let cl = &self.classroom;
        let model = match &self.learner_model_path {
            Some(p) => p.display().to_string(),
            None if cl.model == LearnerModel::ideal() => "ideal".into(),
            None => "default".into(),
        };
        kv.insert("classroom.learner_model", model);
        kv.insert("classroom.session_length", cl.session_length.to_string());
        kv.insert(
            "classroom.initial_state",
            cl.initial_state.map_or("random".into(), |s| s.to_string()),
        );
        let adv = &self.adversary;
        kv.insert("adversary.k_max", adv.k_max.to_string());
        kv.insert(
            "adversary.fixed_k",
            adv.fixed_k.map_or("elbow".into(), |k| k.to_string()),
        );
        kv.insert("adversary.restarts", adv.kmeans.restarts.to_string());
        kv.insert("adversary.max_iterations", adv.kmeans.max_iterations.to_string());
        kv.insert("adversary.action_weight", adv.action_weight.to_string());
        if let Some(grid) = &self.sweep {
            let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ");
            for (key, values) in [
                ("sweep.p", &grid.p),
                ("sweep.zeta", &grid.zeta),
                ("sweep.lambda_percent", &grid.lambda_percent),
            ] {
                if !values.is_empty() {
                    kv.insert(key, join(values));
                }
            }
        }
        kv.render()
    }
}

const KNOWN_KEYS: &[&str] = &[
    "environment",
    "steps",
    "seed",
    "human",
    "randomness",
    "schedule",
    "mitigation.kind",
    "mitigation.p",
    "mitigation.zeta",
    "mitigation.lambda_percent",
    "agent.alpha",
    "agent.gamma",
    "agent.eps_max",
    "agent.eps_min",
    "agent.decay",
    "privacy.refit_cadence",
    "privacy.window",
    "privacy.restart_fit_on_switch",
    "switch.step",
    "switch.human",
    "switch.randomness",
    "switch.schedule",
    "thermal.r_eq",
    "thermal.capacitance",
    "thermal.hvac_conductance",
    "thermal.heat_supply_c",
    "thermal.cool_supply_c",
    "thermal.band_f",
    "thermal.breath_temp_c",
    "thermal.substep_seconds",
    "thermal.outdoor",
    "thermal.outdoor_mean",
    "thermal.outdoor_amplitude",
    "thermal.outdoor_coldest_slot",
    "thermal.clo_sleeping",
    "thermal.clo_domestic",
    "thermal.clo_relaxed",
    "thermal.relative_humidity",
    "thermal.air_velocity",
    "thermal.initial_indoor_f",
    "thermal.settle_timeout",
    "thermal.settle_tolerance_f",
    "classroom.learner_model",
    "classroom.session_length",
    "classroom.initial_state",
    "adversary.k_max",
    "adversary.fixed_k",
    "adversary.restarts",
    "adversary.max_iterations",
    "adversary.action_weight",
    "sweep.p",
    "sweep.zeta",
    "sweep.lambda_percent",
];

fn parse_schedule(kv: &KeyValues, key: &str) -> Result<Option<Vec<(usize, Activity)>>> {
    kv.raw(key)
        .map(|text| parse_blocks(text).map_err(|e| Error::config(key, e.to_string())))
        .transpose()
}

fn parse_mitigation(kv: &KeyValues) -> Result<MitigationPolicy> {
    let kind = kv.raw("mitigation.kind").unwrap_or("none");
    let need = |key: &str| -> Result<f64> {
        kv.get::<f64>(key)?
            .ok_or_else(|| Error::config(key, format!("required for mitigation.kind = {kind}")))
    };
    let wrap = |key: &'static str| move |e: Error| Error::config(key, e.to_string());
    let policy = match kind {
        "none" => MitigationPolicy::None,
        "randomize" => MitigationPolicy::new_randomize(need("mitigation.p")?).map_err(wrap("mitigation.p"))?,
        "fixed" => MitigationPolicy::new_fixed(need("mitigation.zeta")?).map_err(wrap("mitigation.zeta"))?,
        "adaparl" => MitigationPolicy::new_adaparl(need("mitigation.zeta")?, need("mitigation.lambda_percent")?)
            .map_err(wrap("mitigation"))?,
        other => {
            return Err(Error::config(
                "mitigation.kind",
                format!("'{other}' is not one of none, randomize, fixed, adaparl"),
            ))
        }
    };
    let allowed: &[&str] = match kind {
        "randomize" => &["mitigation.p"],
        "fixed" => &["mitigation.zeta"],
        "adaparl" => &["mitigation.zeta", "mitigation.lambda_percent"],
        _ => &[],
    };
    for key in ["mitigation.p", "mitigation.zeta", "mitigation.lambda_percent"] {
        if kv.contains(key) && !allowed.contains(&key) {
            return Err(Error::config(key, format!("not used by mitigation.kind = {kind}")));
        }
    }
    Ok(policy)
}

fn parse_outdoor(kv: &KeyValues, default: OutdoorProfile) -> Result<OutdoorProfile> {
    let OutdoorProfile::Sinusoid {
        mean: d_mean,
        amplitude: d_amp,
        coldest_slot: d_slot,
    } = OutdoorProfile::default()
    else {
        unreachable!()
    };
    match kv.raw("thermal.outdoor") {
        None if !kv.contains("thermal.outdoor_mean")
            && !kv.contains("thermal.outdoor_amplitude")
            && !kv.contains("thermal.outdoor_coldest_slot") =>
        {
            Ok(default)
        }
        None | Some("sinusoid") => Ok(OutdoorProfile::Sinusoid {
            mean: kv.get_or("thermal.outdoor_mean", d_mean)?,
            amplitude: kv.get_or("thermal.outdoor_amplitude", d_amp)?,
            coldest_slot: kv.get_or("thermal.outdoor_coldest_slot", d_slot)?,
        }),
        Some("constant") => {
            if kv.contains("thermal.outdoor_amplitude") || kv.contains("thermal.outdoor_coldest_slot") {
                return Err(Error::config(
                    "thermal.outdoor",
                    "a constant profile takes only outdoor_mean",
                ));
            }
            Ok(OutdoorProfile::Constant(kv.get_or("thermal.outdoor_mean", d_mean)?))
        }
        Some(other) => Err(Error::config(
            "thermal.outdoor",
            format!("'{other}' is not one of sinusoid, constant"),
        )),
    }
}
