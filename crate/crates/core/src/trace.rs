//! Traces and hulls of the grade-`n` evolutions.
//!
//! The trace is the curve generating the hull, recovered by pushing a
//! basepoint `z0 = 1e-6 e^{i pi/(2n)}` (the wedge bisector; the limit
//! `z -> 0` needs an approach direction once `n >= 2`) through the inverse
//! centered map. Accuracy degrades when the basepoint radius drops below
//! the step scale; `|z0| >= sqrt(dt)` is comfortable.

use num_complex::Complex64;

use crate::drive::DrivePath;
use crate::loewner::{
    backward_w, flow_forward, forward_w_unchecked, inverse_w, principal_root, FlowConfig,
    FlowError, FlowResult, Sign,
};

/// Radius of the trace basepoint on the bisector.
pub const TRACE_BASEPOINT_RADIUS: f64 = 1e-6;

/// Sampled trace curve: strictly increasing times with their points.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceCurve {
    points: Vec<(f64, Complex64)>,
}

impl TraceCurve {
    pub fn new(points: Vec<(f64, Complex64)>) -> Self {
        assert!(
            points.windows(2).all(|w| w[0].0 < w[1].0),
            "trace times must be strictly increasing"
        );
        assert!(points.iter().all(|(t, z)| {
            t.is_finite() && z.re.is_finite() && z.im.is_finite()
        }));
        TraceCurve { points }
    }

    pub fn points(&self) -> &[(f64, Complex64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn endpoint(&self) -> Option<(f64, Complex64)> {
        self.points.last().copied()
    }
}

/// Trace point `gamma_n(t)` for one grid time.
pub fn trace_point(drive: &DrivePath, cfg: &FlowConfig, t: f64) -> Result<Complex64, FlowError> {
    trace_point_from(drive, cfg, t, TRACE_BASEPOINT_RADIUS)
}

/// Trace point evaluated from an explicit basepoint radius on the
/// bisector. The conjugation identity between grades holds exactly when
/// the radii are matched through `phi_n` (`rho_n = rho_1^(1/n)`).
pub fn trace_point_from(
    drive: &DrivePath,
    cfg: &FlowConfig,
    t: f64,
    basepoint_radius: f64,
) -> Result<Complex64, FlowError> {
    let n = cfg.grade;
    let z0 = basepoint_radius * cfg.wedge().bisector();
    let w0 = z0.powu(n);
    match cfg.sign {
        Sign::Forward => {
            // gamma(t) = g_t^{-1}((z0^n + Y_t)^{1/n}) in power coordinates.
            let target = drive.index_of(t)?;
            let v = w0 + drive.value(target);
            let v = inverse_w(v, drive, n, drive.origin_index(), target)?;
            principal_root(v, n)
        }
        Sign::Backward => {
            // f_t^n = g_{-t}^n - Y_{-t}; inverting g_{-t} runs the power
            // flow forward across [-t, 0]. The evaluation starts next to
            // the singularity by construction, so the raw branch steps
            // are used without swallow detection.
            let target = drive.index_of(-t)?;
            let v = w0 + drive.value(target);
            let v = forward_w_unchecked(v, drive, n, target, drive.origin_index())?;
            principal_root(v, n)
        }
    }
}

/// Samples the trace at the given grid times.
pub fn trace_sample(
    drive: &DrivePath,
    cfg: &FlowConfig,
    times: &[f64],
) -> Result<TraceCurve, FlowError> {
    let mut points = Vec::with_capacity(times.len());
    for &t in times {
        points.push((t, trace_point(drive, cfg, t)?));
    }
    Ok(TraceCurve::new(points))
}

/// Rectangular sampling window over the closed wedge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(re_min: f64, re_max: f64, im_max: f64, nx: usize, ny: usize) -> Self {
        assert!(re_max > re_min && im_max > 0.0 && nx >= 2 && ny >= 2);
        GridSpec {
            re_min,
            re_max,
            im_min: 0.0,
            im_max,
            nx,
            ny,
        }
    }

    pub fn point(&self, ix: usize, iy: usize) -> Complex64 {
        let fx = ix as f64 / (self.nx - 1) as f64;
        let fy = iy as f64 / (self.ny - 1) as f64;
        Complex64::new(
            self.re_min + fx * (self.re_max - self.re_min),
            self.im_min + fy * (self.im_max - self.im_min),
        )
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Swallow data of every wedge point of a grid at a fixed horizon.
#[derive(Clone, Debug)]
pub struct HullGrid {
    pub spec: GridSpec,
    pub t: f64,
    /// Row-major `iy * nx + ix`; `None` outside the open wedge.
    pub cells: Vec<Option<HullCell>>,
}

/// One grid point with its swallow time, when swallowed by the horizon.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HullCell {
    pub z: Complex64,
    pub tau: Option<f64>,
}

impl HullGrid {
    pub fn swallowed_count(&self) -> usize {
        self.cells
            .iter()
            .flatten()
            .filter(|cell| cell.tau.is_some())
            .count()
    }

    pub fn swallowed_points(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.cells
            .iter()
            .flatten()
            .filter_map(|cell| cell.tau.map(|tau| (cell.z, tau)))
    }
}

/// Marks each in-wedge grid point swallowed iff its swallow time is `<= t`.
pub fn hull_grid(
    drive: &DrivePath,
    cfg: &FlowConfig,
    t: f64,
    spec: &GridSpec,
) -> Result<HullGrid, FlowError> {
    let wedge = cfg.wedge();
    let mut cells = Vec::with_capacity(spec.len());
    for iy in 0..spec.ny {
        for ix in 0..spec.nx {
            let z = spec.point(ix, iy);
            if !wedge.contains(z) {
                cells.push(None);
                continue;
            }
            let tau = match flow_forward(z, drive, cfg, t)? {
                FlowResult::Alive(_) => None,
                FlowResult::Swallowed { tau } => Some(tau),
            };
            cells.push(Some(HullCell { z, tau }));
        }
    }
    Ok(HullGrid {
        spec: *spec,
        t,
        cells,
    })
}

/// Trace of the backward construction: `gamma` for the `s = 2` relation;
/// kept separate so callers choose explicitly.
pub fn backward_reach(
    drive: &DrivePath,
    cfg: &FlowConfig,
    t: f64,
    z: Complex64,
) -> Result<Complex64, FlowError> {
    // g_{-t}(z) in power coordinates; no swallowing on the backward side.
    if !cfg.wedge().contains(z) {
        return Err(FlowError::OutsideWedge(z));
    }
    let steps = drive.origin_index() - drive.index_of(-t)?;
    let w = backward_w(z.powu(cfg.grade), drive, cfg.grade, steps)?;
    principal_root(w, cfg.grade)
}

#[cfg(test)]
mod tests {
    use super::*;


    #[test]
    fn zero_drive_trace_matches_closed_form() {
        for grade in 1..=3u32 {
            let dt = 1e-4;
            let drive = DrivePath::zero(1.0, dt, false);
            let cfg = FlowConfig::new(grade, dt);
            let times = [0.25, 0.5, 1.0];
            let curve = trace_sample(&drive, &cfg, &times).unwrap();
            for (t, gamma) in curve.points() {
                let expect = (4.0 * grade as f64 * t).powf(0.5 / grade as f64)
                    * cfg.wedge().bisector();
                assert!(
                    (gamma - expect).norm() < 1e-9,
                    "grade {grade}, t = {t}: {gamma} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn grade_one_zero_drive_trace_is_two_i_sqrt_t() {
        let dt = 1e-4;
        let drive = DrivePath::zero(0.5, dt, false);
        let cfg = FlowConfig::new(1, dt);
        let gamma = trace_point(&drive, &cfg, 0.25).unwrap();
        assert!((gamma - Complex64::new(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn trace_starts_at_the_basepoint() {
        let dt = 1e-3;
        let drive = DrivePath::zero(0.1, dt, false);
        let cfg = FlowConfig::new(2, dt);
        let curve = trace_sample(&drive, &cfg, &[0.0, 0.05, 0.1]).unwrap();
        let (t0, start) = curve.points()[0];
        assert_eq!(t0, 0.0);
        assert!(start.norm() <= 2.0 * TRACE_BASEPOINT_RADIUS);
    }

    #[test]
    fn trace_conjugation_identity_on_a_seeded_path() {
        // gamma_n(t) = principal_root(gamma_1(n t), n) when the grade-n
        // drive is the time-rescaled grade-1 drive.
        let n = 2u32;
        let dt1: f64 = 1e-4;
        let steps = 4000;
        let mut samples = vec![0.0f64];
        for i in 0..steps {
            samples.push(samples[i] + dt1.sqrt() * 1.2 * ((i as f64) * 0.61).sin());
        }
        let base = DrivePath::new(0.0, dt1, samples, 1.44);
        let lifted = base.with_time_scale(1.0 / n as f64, n as f64 * base.kappa());
        let cfg_n = FlowConfig::new(n, lifted.dt());
        let cfg_1 = FlowConfig::new(1, base.dt());
        // Basepoints matched through phi_n: rho_n^n = rho_1.
        let rho_1: f64 = 1e-6;
        let rho_n = rho_1.powf(1.0 / n as f64);
        for t in [0.05, 0.1, 0.2] {
            let gamma_n = trace_point_from(&lifted, &cfg_n, t, rho_n).unwrap();
            let gamma_1 = trace_point_from(&base, &cfg_1, n as f64 * t, rho_1).unwrap();
            let expect = principal_root(gamma_1, n).unwrap();
            assert!(
                (gamma_n - expect).norm() < 1e-9,
                "t = {t}: {gamma_n} vs {expect}"
            );
        }
    }

    #[test]
    fn hull_of_zero_drive_is_the_bisector_segment() {
        let grade = 2u32;
        let dt = 1e-3;
        let t = 0.125;
        let drive = DrivePath::zero(t, dt, false);
        let cfg = FlowConfig::new(grade, dt);
        // Window around the wedge of opening pi/2; reach (4n t)^(1/(2n)) = 1.
        let spec = GridSpec::new(-0.1, 1.3, 1.3, 36, 36);
        let hull = hull_grid(&drive, &cfg, t, &spec).unwrap();
        assert!(hull.swallowed_count() > 0);
        let bisector = cfg.wedge().bisector();
        let reach = (4.0 * grade as f64 * t).powf(0.5 / grade as f64);
        let cell = 0.05; // grid diagonal scale
        for (z, tau) in hull.swallowed_points() {
            // Every swallowed point hugs the ray segment.
            let along = (z * bisector.conj()).re;
            let across = (z * bisector.conj()).im;
            assert!(
                across.abs() <= cell && along <= reach + cell,
                "swallowed point {z} off the expected segment (tau {tau})"
            );
        }
        // And the on-ray points inside the reach are swallowed at
        // tau = |z|^(2n) / (4n).
        for frac in [0.5f64, 0.9] {
            let z = frac * reach * bisector;
            let expect_tau = (frac * reach).powi(4) / 8.0;
            match flow_forward(z, &drive, &cfg, t).unwrap() {
                FlowResult::Swallowed { tau } => assert!((tau - expect_tau).abs() < 1e-9),
                FlowResult::Alive(_) => panic!("{z} should be swallowed"),
            }
        }
    }

    #[test]
    fn hull_is_monotone_in_time() {
        let dt = 1e-3;
        let drive = DrivePath::zero(0.2, dt, false);
        let cfg = FlowConfig::new(1, dt);
        let spec = GridSpec::new(-1.0, 1.0, 1.5, 24, 24);
        let early = hull_grid(&drive, &cfg, 0.1, &spec).unwrap();
        let late = hull_grid(&drive, &cfg, 0.2, &spec).unwrap();
        for (a, b) in early.cells.iter().zip(late.cells.iter()) {
            if let (Some(a), Some(b)) = (a, b) {
                if a.tau.is_some() {
                    assert!(b.tau.is_some(), "hull must grow with t");
                }
            }
        }
        // t = 0 gives the empty hull.
        let none = hull_grid(&drive, &cfg, 0.0, &spec).unwrap();
        assert_eq!(none.swallowed_count(), 0);
    }
}
