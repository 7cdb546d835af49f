//! Adaptive threshold λ: MI trace, periodic quadratic refits, λ = f_max · λ%.

use crate::error::{Error, Result};
use crate::privacy::fit::{f_max, fit_quadratic, QuadraticFit};
use crate::privacy::mi::{mutual_information, HistoryQueues};
use crate::rl::{ActionId, StateId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSchedule<T> {
    pub lambda_percent: T,
    pub current_lambda: T,
    pub refit_cadence: usize,
}

impl<T: Scalar> LambdaSchedule<T> {
    pub fn new(lambda_percent: T, refit_cadence: usize) -> Result<Self> {
        if !(T::zero()..=T::one()).contains(&lambda_percent) {
            return Err(Error::domain(format!(
                "lambda_percent must lie in [0, 1], got {lambda_percent}"
            )));
        }
        if refit_cadence == 0 {
            return Err(Error::domain("refit cadence must be positive"));
        }
        Ok(Self {
            lambda_percent,
            current_lambda: T::zero(),
            refit_cadence,
        })
    }
}

/// `λ = f_max · λ%`.
pub fn current_lambda<T: Scalar>(schedule: &LambdaSchedule<T>, fmax: T) -> T {
    fmax * schedule.lambda_percent
}

/// One refit event, kept for export and for the behaviour-switch analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Refit<T> {
    pub step: u64,
    pub fit: QuadraticFit<T>,
    pub fmax: T,
    pub lambda: T,
}

/// History queues, MI trace and λ schedule for one run.
///
/// Until the first refit, λ is `λ% · cap` where `cap = min(log2 |S|, log2 |A|)`;
/// with `λ% = 0` that makes λ identically zero, which is the fixed-penalty
/// baseline.
#[derive(Debug, Clone)]
pub struct MiTracker<T> {
    history: HistoryQueues,
    trace: Vec<(u64, T)>,
    fit_from: usize,
    schedule: LambdaSchedule<T>,
    horizon: u64,
    cap: T,
    pushes: usize,
    refits: Vec<Refit<T>>,
}

impl<T: Scalar> MiTracker<T> {
    pub fn new(
        state_count: usize,
        action_count: usize,
        window: Option<usize>,
        schedule: LambdaSchedule<T>,
        horizon: u64,
    ) -> Result<Self> {
        let history = HistoryQueues::new(state_count, action_count, window)?;
        let cap = history.mi_cap::<T>();
        let mut schedule = schedule;
        schedule.current_lambda = (cap * schedule.lambda_percent).min(cap);
        Ok(Self {
            history,
            trace: Vec::new(),
            fit_from: 0,
            schedule,
            horizon,
            cap,
            pushes: 0,
            refits: Vec::new(),
        })
    }

    /// Push `(s_t, a_t)` and return the MI of the (possibly windowed) history.
    pub fn record(&mut self, t: u64, s: StateId, a: ActionId) -> Result<T> {
        self.history.push(s, a)?;
        let mi = mutual_information::<T>(&self.history)?;
        self.trace.push((t, mi));
        self.pushes += 1;
        Ok(mi)
    }

    pub fn refit_due(&self) -> bool {
        self.pushes > 0 && self.pushes.is_multiple_of(self.schedule.refit_cadence)
    }

    /// Refit on the samples since the last restart and update λ. Returns the new
    /// λ, or `None` while fewer than three samples are available.
    pub fn refit(&mut self) -> Result<Option<T>> {
        let samples: Vec<(T, T)> = self.trace[self.fit_from..]
            .iter()
            .map(|&(t, y)| (T::from_u64(t).expect("step index"), y))
            .collect();
        if samples.len() < 3 {
            return Ok(None);
        }
        let fit = fit_quadratic(&samples)?;
        let horizon = T::from_u64(self.horizon).expect("horizon");
        let fmax = f_max(&fit, horizon, Some(self.cap));
        let lambda = current_lambda(&self.schedule, fmax).min(self.cap);
        self.schedule.current_lambda = lambda;
        let step = self.trace.last().map_or(0, |p| p.0);
        self.refits.push(Refit {
            step,
            fit,
            fmax,
            lambda,
        });
        Ok(Some(lambda))
    }

    /// Later fits only use samples recorded after this call.
    pub fn restart_fit(&mut self) {
        self.fit_from = self.trace.len();
    }

    pub fn lambda(&self) -> T {
        self.schedule.current_lambda
    }

    pub fn schedule(&self) -> &LambdaSchedule<T> {
        &self.schedule
    }

    pub fn cap(&self) -> T {
        self.cap
    }

    pub fn trace(&self) -> &[(u64, T)] {
        &self.trace
    }

    pub fn refits(&self) -> &[Refit<T>] {
        &self.refits
    }

    pub fn history(&self) -> &HistoryQueues {
        &self.history
    }
}
