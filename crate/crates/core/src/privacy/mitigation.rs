//! Mitigation strategies: reward shaping and action masking.

use std::fmt;

use crate::error::{Error, Result};
use crate::rl::ActionId;
use crate::rng::RngStream;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MitigationPolicy {
    None,
    /// Replace the cloud-visible action by a uniform one with probability `p`.
    Randomize {
        p: f64,
    },
    /// Penalise from the first step (λ ≡ 0).
    FixedPrivacy {
        zeta: f64,
    },
    /// Penalise once MI reaches `λ = f_max · lambda_percent`.
    AdaParl {
        zeta: f64,
        lambda_percent: f64,
    },
}

impl MitigationPolicy {
    pub fn new_randomize(p: f64) -> Result<Self> {
        check_unit("p", p)?;
        Ok(Self::Randomize { p })
    }

    pub fn new_fixed(zeta: f64) -> Result<Self> {
        check_unit("zeta", zeta)?;
        Ok(Self::FixedPrivacy { zeta })
    }

    pub fn new_adaparl(zeta: f64, lambda_percent: f64) -> Result<Self> {
        check_unit("zeta", zeta)?;
        check_unit("lambda_percent", lambda_percent)?;
        Ok(Self::AdaParl { zeta, lambda_percent })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Randomize { .. } => "randomize",
            Self::FixedPrivacy { .. } => "fixed",
            Self::AdaParl { .. } => "adaparl",
        }
    }

    /// Whether the strategy consults MI and λ when shaping rewards.
    pub fn shapes_reward(&self) -> bool {
        matches!(self, Self::FixedPrivacy { .. } | Self::AdaParl { .. })
    }

    pub fn zeta(&self) -> Option<f64> {
        match *self {
            Self::FixedPrivacy { zeta } | Self::AdaParl { zeta, .. } => Some(zeta),
            _ => None,
        }
    }

    /// λ% of the reward-shaping strategies; the fixed baseline is λ% = 0.
    pub fn lambda_percent(&self) -> Option<f64> {
        match *self {
            Self::FixedPrivacy { .. } => Some(0.0),
            Self::AdaParl { lambda_percent, .. } => Some(lambda_percent),
            _ => None,
        }
    }

    pub fn randomize_p(&self) -> Option<f64> {
        match *self {
            Self::Randomize { p } => Some(p),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.randomize_p() {
            check_unit("p", p)?;
        }
        if let Some(z) = self.zeta() {
            check_unit("zeta", z)?;
        }
        if let Some(l) = self.lambda_percent() {
            check_unit("lambda_percent", l)?;
        }
        Ok(())
    }
}

impl fmt::Display for MitigationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => write!(f, "none"),
            Self::Randomize { p } => write!(f, "randomize(p={p})"),
            Self::FixedPrivacy { zeta } => write!(f, "fixed(zeta={zeta})"),
            Self::AdaParl { zeta, lambda_percent } => {
                write!(f, "adaparl(zeta={zeta}, lambda_percent={lambda_percent})")
            }
        }
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::domain(format!("{name} must lie in [0, 1], got {v}")));
    }
    Ok(())
}

/// Reward seen by the learner.
///
/// Reward-shaping strategies return `raw` while `mi < λ` and
/// `(1 − ζ)·raw − ζ·mi` otherwise; the other strategies pass `raw` through.
pub fn shape_reward<T: Scalar>(policy: &MitigationPolicy, raw: T, mi: T, lambda: T) -> Result<T> {
    if !raw.is_finite() || !mi.is_finite() || !lambda.is_finite() {
        return Err(Error::domain(format!(
            "non-finite reward shaping input (reward={raw}, mi={mi}, lambda={lambda})"
        )));
    }
    let Some(zeta) = policy.zeta() else {
        return Ok(raw);
    };
    if mi < T::zero() || lambda < T::zero() {
        return Err(Error::domain("mutual information and lambda must be non-negative"));
    }
    if mi < lambda {
        return Ok(raw);
    }
    let zeta = T::lit(zeta);
    Ok((T::one() - zeta) * raw - zeta * mi)
}

/// True when the shaped reward took the penalised branch.
pub fn is_penalized<T: Scalar>(policy: &MitigationPolicy, mi: T, lambda: T) -> bool {
    policy.shapes_reward() && mi >= lambda
}

/// Cloud-visible action for `chosen`.
///
/// `Randomize` always flips its coin (one draw) and on success draws a uniform
/// action (a second draw); other strategies return `chosen` without drawing.
pub fn emit_action(
    policy: &MitigationPolicy,
    chosen: ActionId,
    action_count: usize,
    rng: &mut RngStream,
) -> Result<ActionId> {
    if chosen.0 >= action_count {
        return Err(Error::IndexOutOfRange {
            what: "action",
            index: chosen.0,
            size: action_count,
        });
    }
    match *policy {
        MitigationPolicy::Randomize { p } if rng.bernoulli(p) => Ok(ActionId(rng.below(action_count))),
        _ => Ok(chosen),
    }
}

/// As [`emit_action`], drawing replacements from `legal` only.
pub fn emit_action_among(
    policy: &MitigationPolicy,
    chosen: ActionId,
    legal: &[ActionId],
    rng: &mut RngStream,
) -> Result<ActionId> {
    if !legal.contains(&chosen) {
        return Err(Error::Contract(format!("chosen action {chosen} is not legal")));
    }
    match *policy {
        MitigationPolicy::Randomize { p } if rng.bernoulli(p) => Ok(legal[rng.below(legal.len())]),
        _ => Ok(chosen),
    }
}
