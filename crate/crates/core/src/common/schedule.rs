use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecayKind {
    #[default]
    Linear,
    Exponential,
}

impl fmt::Display for DecayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecayKind::Linear => "linear",
            DecayKind::Exponential => "exponential",
        })
    }
}

impl FromStr for DecayKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(DecayKind::Linear),
            "exponential" => Ok(DecayKind::Exponential),
            other => Err(Error::param("decay kind", format!("unknown kind `{other}`"))),
        }
    }
}

/// A value that falls from `initial` to `final_value` over `total_steps` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySchedule {
    kind: DecayKind,
    initial: f64,
    final_value: f64,
    total_steps: usize,
}

impl DecaySchedule {
    pub fn new(kind: DecayKind, initial: f64, final_value: f64, total_steps: usize) -> Result<Self> {
        if !(initial.is_finite() && initial > 0.0) {
            return Err(Error::param("schedule initial", "must be finite and > 0"));
        }
        if !(final_value.is_finite() && final_value >= 0.0) {
            return Err(Error::param("schedule final", "must be finite and >= 0"));
        }
        if final_value > initial {
            return Err(Error::param("schedule final", "must not exceed the initial value"));
        }
        if kind == DecayKind::Exponential && final_value == 0.0 {
            return Err(Error::param(
                "schedule final",
                "exponential decay needs a final value > 0",
            ));
        }
        Ok(DecaySchedule {
            kind,
            initial,
            final_value,
            total_steps,
        })
    }

    pub fn linear(initial: f64, final_value: f64, total_steps: usize) -> Result<Self> {
        Self::new(DecayKind::Linear, initial, final_value, total_steps)
    }

    pub fn exponential(initial: f64, final_value: f64, total_steps: usize) -> Result<Self> {
        Self::new(DecayKind::Exponential, initial, final_value, total_steps)
    }

    pub fn kind(&self) -> DecayKind {
        self.kind
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn final_value(&self) -> f64 {
        self.final_value
    }

    pub fn total_steps(&self) -> usize {
        self.total_steps
    }

    /// Value at step `t`, for `0 <= t <= T`.
    ///
    /// With `T = 0` the only valid step is 0, which yields `initial`.
    pub fn value(&self, t: usize) -> Result<f64> {
        if t > self.total_steps {
            return Err(Error::StepOutOfRange {
                step: t,
                total: self.total_steps,
            });
        }
        if t == 0 {
            return Ok(self.initial);
        }
        if t == self.total_steps {
            return Ok(self.final_value);
        }
        let frac = t as f64 / self.total_steps as f64;
        Ok(match self.kind {
            DecayKind::Linear => self.initial + (self.final_value - self.initial) * frac,
            DecayKind::Exponential => {
                self.initial * (self.final_value / self.initial).powf(frac)
            }
        })
    }
}
