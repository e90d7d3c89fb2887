//! Sampled driving functions on a uniform time grid.
//!
//! A drive holds `Y` at the grid points `t0 + i * dt` with `Y(0) = 0`;
//! two-sided drives live on `[-T, T]` with index arithmetic centered at 0.
//! Flows consume the value at the left endpoint of each step, so callers
//! must hit grid multiples exactly; drives are never interpolated.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum DriveError {
    #[error("time {t} is not a multiple of the step {dt}")]
    OffGrid { t: f64, dt: f64 },
    #[error("time {t} lies outside the sampled horizon [{lo}, {hi}]")]
    BeyondHorizon { t: f64, lo: f64, hi: f64 },
    #[error("a two-sided drive is required for negative times")]
    TwoSidedRequired,
}

/// Real driving function sampled on a uniform grid, with its diffusivity
/// kept as metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct DrivePath {
    t0: f64,
    dt: f64,
    samples: Vec<f64>,
    kappa: f64,
    origin: usize,
}

impl DrivePath {
    /// Wraps samples on the grid `t0 + i * dt`. The origin `t = 0` must be
    /// a grid point carrying the value 0.
    pub fn new(t0: f64, dt: f64, samples: Vec<f64>, kappa: f64) -> Self {
        assert!(dt > 0.0, "step must be positive");
        assert!(!samples.is_empty());
        let origin_f = -t0 / dt;
        let origin = origin_f.round() as isize;
        assert!(
            (origin_f - origin as f64).abs() < 1e-9,
            "t = 0 must be a grid point"
        );
        assert!(origin >= 0 && (origin as usize) < samples.len());
        let origin = origin as usize;
        assert_eq!(samples[origin], 0.0, "Y(0) must vanish");
        assert!(samples.iter().all(|y| y.is_finite()));
        DrivePath {
            t0,
            dt,
            samples,
            kappa,
            origin,
        }
    }

    /// Identically-zero drive over `[0, horizon]` (or `[-horizon, horizon]`).
    pub fn zero(horizon: f64, dt: f64, two_sided: bool) -> Self {
        let steps = steps_for(horizon, dt);
        let (t0, len) = if two_sided {
            (-(steps as f64) * dt, 2 * steps + 1)
        } else {
            (0.0, steps + 1)
        };
        DrivePath::new(t0, dt, vec![0.0; len], 0.0)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn t_min(&self) -> f64 {
        self.t0
    }

    pub fn t_max(&self) -> f64 {
        self.t0 + (self.samples.len() - 1) as f64 * self.dt
    }

    pub fn is_two_sided(&self) -> bool {
        self.origin > 0
    }

    /// Grid index of `t = 0`.
    pub fn origin_index(&self) -> usize {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn value(&self, index: usize) -> f64 {
        self.samples[index]
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn time_of(&self, index: usize) -> f64 {
        self.t0 + index as f64 * self.dt
    }

    /// Grid index of `t`; errors when `t` is off-grid or out of range.
    pub fn index_of(&self, t: f64) -> Result<usize, DriveError> {
        let steps_f = (t - self.t0) / self.dt;
        let steps = steps_f.round();
        if (steps_f - steps).abs() > 1e-6 {
            return Err(DriveError::OffGrid { t, dt: self.dt });
        }
        let idx = steps as isize;
        if idx < 0 || idx as usize >= self.samples.len() {
            return Err(DriveError::BeyondHorizon {
                t,
                lo: self.t_min(),
                hi: self.t_max(),
            });
        }
        Ok(idx as usize)
    }

    /// Value at a grid time.
    pub fn value_at(&self, t: f64) -> Result<f64, DriveError> {
        Ok(self.samples[self.index_of(t)?])
    }

    /// Drive with the same sample sequence reinterpreted on a grid scaled
    /// by `factor` (times map `t -> t * factor`); used by the conjugation
    /// between grades where `Y(u) -> Y(n u)` with the diffusivity rescaled.
    pub fn with_time_scale(&self, factor: f64, kappa: f64) -> DrivePath {
        DrivePath::new(self.t0 * factor, self.dt * factor, self.samples.clone(), kappa)
    }

    /// Keeps every `stride`-th sample (same underlying path on a coarser
    /// grid). The origin must stay on the grid.
    pub fn subsample(&self, stride: usize) -> DrivePath {
        assert!(stride >= 1);
        assert_eq!(self.origin % stride, 0);
        let samples: Vec<f64> = self.samples.iter().copied().step_by(stride).collect();
        DrivePath::new(self.t0, self.dt * stride as f64, samples, self.kappa)
    }
}

/// Number of whole steps covering `horizon` (which must be a multiple of
/// `dt` to within rounding).
pub fn steps_for(horizon: f64, dt: f64) -> usize {
    assert!(horizon >= 0.0 && dt > 0.0);
    let steps_f = horizon / dt;
    let steps = steps_f.round();
    assert!(
        (steps_f - steps).abs() < 1e-6,
        "horizon {horizon} is not a multiple of dt {dt}"
    );
    steps as usize
}
