//! Numerical engine for the grade-`n` Loewner hierarchy.
//!
//! The grade-`n` flow `dg/dt = 2 / (g^(n-1) (g^n - Y_t))` started in the
//! wedge `H_n = {0 < arg z < pi/n}` becomes, in the power coordinate
//! `w = g^n`, the chordal-type equation `dw/dt = 2n / (w - Y_t)`. With the
//! drive frozen on each grid step that equation integrates exactly:
//!
//! `w' = Y + sqrt_H((w - Y)^2 + 4 n dt)`
//!
//! where `sqrt_H` is the square root with non-negative imaginary part. All
//! flows here compose that step (or its inverse), so constant drives are
//! handled exactly and the conjugation `g^(n) = phi_n^{-1} g^(1) phi_n`
//! holds to rounding rather than truncation.

use num_complex::Complex64;
use thiserror::Error;

use crate::drive::{DriveError, DrivePath};

/// Tolerance floor for the in-step singularity crossing test; absorbs the
/// rounding of `z^n` for points constructed on the wedge bisector.
const CROSSING_IM_FLOOR: f64 = 1e-12;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum FlowError {
    #[error("point {0} lies outside the open wedge")]
    OutsideWedge(Complex64),
    #[error("point {0} lies in the open lower half-plane")]
    LowerHalfPlane(Complex64),
    #[error(transparent)]
    Drive(#[from] DriveError),
    #[error("config step {cfg_dt} does not match drive step {drive_dt}")]
    StepMismatch { cfg_dt: f64, drive_dt: f64 },
    #[error("flow was swallowed at tau ~ {tau} before the requested time")]
    SwallowedEnRoute { tau: f64 },
    #[error("numerical domain failure: non-finite value during the flow")]
    NonFinite,
}

/// The open wedge `H_n = { z : |z| > 0, 0 < arg z < pi/n }`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Wedge {
    pub n: u32,
}

impl Wedge {
    pub fn new(n: u32) -> Self {
        assert!(n >= 1);
        Wedge { n }
    }

    pub fn opening(&self) -> f64 {
        std::f64::consts::PI / self.n as f64
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if z.norm_sqr() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
            return false;
        }
        let arg = z.arg();
        arg > 0.0 && arg < self.opening()
    }

    /// The bisector direction `e^{i pi / (2n)}`.
    pub fn bisector(&self) -> Complex64 {
        Complex64::from_polar(1.0, 0.5 * self.opening())
    }
}

/// Square-root branch with non-negative imaginary part; ties on the real
/// axis resolve to the non-negative real root.
pub fn sqrt_h(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

/// Principal `n`-th root: `|w|^(1/n) e^{i arg(w)/n}` with `arg(w)` read in
/// `[0, pi]`, so the image lies in the closed wedge. `w = 0` maps to 0;
/// points in the open lower half-plane are rejected.
pub fn principal_root(w: Complex64, n: u32) -> Result<Complex64, FlowError> {
    if n == 1 {
        return Ok(w);
    }
    if w.im < 0.0 {
        return Err(FlowError::LowerHalfPlane(w));
    }
    if w.re == 0.0 && w.im == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (r, theta) = w.to_polar();
    Ok(Complex64::from_polar(r.powf(1.0 / n as f64), theta / n as f64))
}

/// Branch policy of the engine; only the principal branch is implemented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BranchPolicy {
    #[default]
    Principal,
}

/// Map-relation choice for `f_t`: `Forward` uses the one-sided relation
/// `f^n = g_t^n - Y_t`, `Backward` the two-sided `f^n = g_{-t}^n - Y_{-t}`.
pub use crate::bridge::Sign;

/// Grade, sign, step size, swallow tolerance, and branch policy of a flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowConfig {
    pub grade: u32,
    pub sign: Sign,
    pub dt: f64,
    pub swallow_eps: f64,
    pub branch: BranchPolicy,
}

impl FlowConfig {
    pub fn new(grade: u32, dt: f64) -> Self {
        assert!(grade >= 1);
        assert!(dt > 0.0);
        FlowConfig {
            grade,
            sign: Sign::Forward,
            dt,
            swallow_eps: 1e-8,
            branch: BranchPolicy::Principal,
        }
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    pub fn wedge(&self) -> Wedge {
        Wedge::new(self.grade)
    }

    fn check_drive(&self, drive: &DrivePath) -> Result<(), FlowError> {
        let rel = (self.dt - drive.dt()).abs() / self.dt;
        if rel > 1e-12 {
            return Err(FlowError::StepMismatch {
                cfg_dt: self.dt,
                drive_dt: drive.dt(),
            });
        }
        Ok(())
    }
}

/// Outcome of one exact step in the power coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepOutcome {
    Alive(Complex64),
    /// The singularity was (or had already been) reached; `tau_offset` is
    /// the crossing time within the step, 0 when the step started on it.
    Swallowed { tau_offset: f64 },
}

/// In-step singularity crossing: the straight trajectory `(w-y)^2 + 4nt`
/// passes through 0 when its imaginary part (essentially) vanishes and
/// the real part changes sign within the step; the crossing time is exact
/// for points on the bisector ray.
fn crossing_offset(u: Complex64, dt: f64, grade: u32, eps: f64) -> Option<f64> {
    let speed = 4.0 * grade as f64 * dt;
    if dt > 0.0
        && -u.re >= 0.0
        && -u.re <= speed
        && u.im.abs() <= (eps * eps).max(CROSSING_IM_FLOOR)
    {
        Some((-u.re / (4.0 * grade as f64)).clamp(0.0, dt))
    } else {
        None
    }
}

/// One step of `dw/dt = 2n / (w - y)` with `y` frozen over `[0, dt]`:
/// `w' = y + sqrt_H((w - y)^2 + 4 n dt)`. Declares a swallow when the step
/// starts or lands within `eps` of the singularity. An interior crossing
/// (the branch re-emerging on the far side) is NOT flagged here — that is
/// the documented behavior of the raw branch step; the flow driver layers
/// the crossing criterion on top to date swallows accurately.
pub fn step_exact(w: Complex64, y: f64, dt: f64, grade: u32, eps: f64) -> StepOutcome {
    let speed = 4.0 * grade as f64 * dt;
    let centered = w - y;
    let tolerance = eps * y.abs().max(1.0);
    if centered.norm() <= tolerance {
        return StepOutcome::Swallowed { tau_offset: 0.0 };
    }
    if dt == 0.0 {
        return StepOutcome::Alive(w);
    }
    let u = centered * centered;
    let next = y + sqrt_h(u + speed);
    if (next - y).norm() <= tolerance {
        // Landed on the singularity; date it by the crossing when visible.
        let tau_offset = crossing_offset(u, dt, grade, eps).unwrap_or(dt);
        return StepOutcome::Swallowed { tau_offset };
    }
    StepOutcome::Alive(next)
}

/// Where a flow ended: still alive at a point, or swallowed at `tau`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FlowResult {
    Alive(Complex64),
    Swallowed { tau: f64 },
}

impl FlowResult {
    pub fn value(&self) -> Option<Complex64> {
        match self {
            FlowResult::Alive(z) => Some(*z),
            FlowResult::Swallowed { .. } => None,
        }
    }

    pub fn tau(&self) -> Option<f64> {
        match self {
            FlowResult::Alive(_) => None,
            FlowResult::Swallowed { tau } => Some(*tau),
        }
    }
}

/// Forward evolution of the power coordinate across drive indices
/// `[i_start, i_end)`.
pub(crate) fn forward_w(
    mut w: Complex64,
    drive: &DrivePath,
    grade: u32,
    eps: f64,
    i_start: usize,
    i_end: usize,
) -> Result<FlowResult, FlowError> {
    let dt = drive.dt();
    for i in i_start..i_end {
        let y = drive.value(i);
        // Flow-level swallow criterion: proximity (inside step_exact) or
        // branch-argument crossing within the step.
        let crossing = crossing_offset((w - y) * (w - y), dt, grade, eps);
        let outcome = match crossing {
            Some(tau_offset) => StepOutcome::Swallowed { tau_offset },
            None => step_exact(w, y, dt, grade, eps),
        };
        match outcome {
            StepOutcome::Alive(next) => w = next,
            StepOutcome::Swallowed { tau_offset } => {
                let t = drive.time_of(i);
                let tau = if tau_offset > 0.0 {
                    t + tau_offset
                } else if i > i_start {
                    // Bracketed by the previous step; report its midpoint.
                    t - 0.5 * dt
                } else {
                    t
                };
                return Ok(FlowResult::Swallowed { tau });
            }
        }
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(FlowError::NonFinite);
        }
    }
    Ok(FlowResult::Alive(w))
}

/// Forward stepping with swallow detection disabled: the raw branch map
/// composed across `[i_start, i_end)`. Trace evaluation uses this — it
/// deliberately starts next to the singularity and stays close to it, so
/// proximity tests would misfire; the branch itself is total.
pub(crate) fn forward_w_unchecked(
    mut w: Complex64,
    drive: &DrivePath,
    grade: u32,
    i_start: usize,
    i_end: usize,
) -> Result<Complex64, FlowError> {
    let dt = drive.dt();
    let speed = 4.0 * grade as f64 * dt;
    for i in i_start..i_end {
        let y = drive.value(i);
        let centered = w - y;
        w = y + sqrt_h(centered * centered + speed);
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(FlowError::NonFinite);
        }
    }
    Ok(w)
}

/// Inverse of the forward stepping across `[i_start, i_end)`, applied in
/// reverse order: `w = y + sqrt_H((w - y)^2 - 4 n dt)` per step.
pub(crate) fn inverse_w(
    mut w: Complex64,
    drive: &DrivePath,
    grade: u32,
    i_start: usize,
    i_end: usize,
) -> Result<Complex64, FlowError> {
    let dt = drive.dt();
    let speed = 4.0 * grade as f64 * dt;
    for i in (i_start..i_end).rev() {
        let y = drive.value(i);
        let centered = w - y;
        w = y + sqrt_h(centered * centered - speed);
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(FlowError::NonFinite);
        }
    }
    Ok(w)
}

/// Negative-time evolution of the power coordinate: `steps` backward steps
/// from `t = 0` consuming the negative side of a two-sided drive.
pub(crate) fn backward_w(
    mut w: Complex64,
    drive: &DrivePath,
    grade: u32,
    steps: usize,
) -> Result<Complex64, FlowError> {
    if drive.origin_index() < steps {
        return Err(DriveError::TwoSidedRequired.into());
    }
    let dt = drive.dt();
    let speed = 4.0 * grade as f64 * dt;
    for k in 0..steps {
        let idx = drive.origin_index() - 1 - k;
        let y = drive.value(idx);
        let centered = w - y;
        w = y + sqrt_h(centered * centered - speed);
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(FlowError::NonFinite);
        }
    }
    Ok(w)
}

fn wedge_power(z: Complex64, cfg: &FlowConfig) -> Result<Complex64, FlowError> {
    if !cfg.wedge().contains(z) {
        return Err(FlowError::OutsideWedge(z));
    }
    Ok(z.powu(cfg.grade))
}

/// `g_t(z)` for `z` in the open wedge and `t >= 0` on the drive grid, or
/// the swallow record with its `tau` estimate. For `t < 0` (two-sided
/// drives) the backward flow is used; it cannot swallow.
pub fn flow_forward(
    z: Complex64,
    drive: &DrivePath,
    cfg: &FlowConfig,
    t: f64,
) -> Result<FlowResult, FlowError> {
    cfg.check_drive(drive)?;
    let w = wedge_power(z, cfg)?;
    let target = drive.index_of(t)?;
    let origin = drive.origin_index();
    let w = if t >= 0.0 {
        match forward_w(w, drive, cfg.grade, cfg.swallow_eps, origin, target)? {
            FlowResult::Alive(w) => w,
            swallowed => return Ok(swallowed),
        }
    } else {
        backward_w(w, drive, cfg.grade, origin - target)?
    };
    Ok(FlowResult::Alive(principal_root(w, cfg.grade)?))
}

/// `g_t^{-1}(w)` for `w` in the open wedge: the per-step inverses applied
/// in reverse order.
pub fn inverse_map(
    w: Complex64,
    drive: &DrivePath,
    cfg: &FlowConfig,
    t: f64,
) -> Result<Complex64, FlowError> {
    cfg.check_drive(drive)?;
    let v = wedge_power(w, cfg)?;
    let target = drive.index_of(t)?;
    let v = inverse_w(v, drive, cfg.grade, drive.origin_index(), target)?;
    principal_root(v, cfg.grade)
}

/// `f_t(z)`: the centered map. With `cfg.sign = Forward` this is the
/// principal root of `g_t(z)^n - Y_t`; with `Backward` it is the principal
/// root of `g_{-t}(z)^n - Y_{-t}` over a two-sided drive.
pub fn f_map(
    z: Complex64,
    drive: &DrivePath,
    cfg: &FlowConfig,
    t: f64,
) -> Result<FlowResult, FlowError> {
    cfg.check_drive(drive)?;
    assert!(t >= 0.0);
    let w = wedge_power(z, cfg)?;
    match cfg.sign {
        Sign::Forward => {
            let target = drive.index_of(t)?;
            match forward_w(
                w,
                drive,
                cfg.grade,
                cfg.swallow_eps,
                drive.origin_index(),
                target,
            )? {
                FlowResult::Alive(w) => {
                    let y = drive.value(target);
                    Ok(FlowResult::Alive(principal_root(w - y, cfg.grade)?))
                }
                swallowed => Ok(swallowed),
            }
        }
        Sign::Backward => {
            if !drive.is_two_sided() {
                return Err(DriveError::TwoSidedRequired.into());
            }
            let target = drive.index_of(-t)?;
            let steps = drive.origin_index() - target;
            let w = backward_w(w, drive, cfg.grade, steps)?;
            let y = drive.value(target);
            Ok(FlowResult::Alive(principal_root(w - y, cfg.grade)?))
        }
    }
}

/// The restarted flow `g^(t1)_t(z)`: principal root of
/// `(g_{t1+t}(g_{t1}^{-1}((z^n + Y_{t1})^{1/n})))^n - Y_{t1}`. Since the
/// forward steps over `[0, t1]` cancel the inverse ones exactly, this is
/// evaluated as the forward flow of `z^n + Y_{t1}` across `[t1, t1 + t]`.
/// A swallow on the way is an error.
pub fn shifted_flow(
    z: Complex64,
    drive: &DrivePath,
    cfg: &FlowConfig,
    t1: f64,
    t: f64,
) -> Result<Complex64, FlowError> {
    cfg.check_drive(drive)?;
    assert!(t >= 0.0);
    if !cfg.wedge().contains(z) {
        return Err(FlowError::OutsideWedge(z));
    }
    let start = drive.index_of(t1)?;
    let end = drive.index_of(t1 + t)?;
    let y1 = drive.value(start);
    let w = z.powu(cfg.grade) + y1;
    match forward_w(w, drive, cfg.grade, cfg.swallow_eps, start, end)? {
        FlowResult::Alive(w) => principal_root(w - y1, cfg.grade),
        FlowResult::Swallowed { tau } => Err(FlowError::SwallowedEnRoute { tau }),
    }
}

/// Pathwise comparison of the grade-`n` flow against the conjugated
/// grade-1 flow.
#[derive(Clone, Copy, Debug)]
pub enum ConjugationReport {
    Comparable {
        grade_n: Complex64,
        conjugated: Complex64,
        gap: f64,
    },
    /// One side was swallowed; the comparison is vacuous at this `(z, t)`.
    Incomparable,
}

/// Runs the grade-`n` flow at time `t` driven by `Y_u = sqrt(kappa) B(n u)`
/// (diffusivity `n kappa`) against the principal root of the grade-1 flow
/// of `z^n` at time `n t` driven by the base path itself, and reports the
/// pathwise gap. `base` must be a grade-1 drive covering `[0, n t]`.
pub fn conjugation_check(
    z: Complex64,
    base: &DrivePath,
    grade: u32,
    t: f64,
) -> Result<ConjugationReport, FlowError> {
    let n = grade;
    let drive_n = base.with_time_scale(1.0 / n as f64, n as f64 * base.kappa());
    let cfg_n = FlowConfig::new(n, drive_n.dt());
    let lhs = flow_forward(z, &drive_n, &cfg_n, t)?;

    let cfg_1 = FlowConfig::new(1, base.dt());
    if !cfg_n.wedge().contains(z) {
        return Err(FlowError::OutsideWedge(z));
    }
    let rhs = flow_forward(z.powu(n), base, &cfg_1, n as f64 * t)?;

    match (lhs, rhs) {
        (FlowResult::Alive(a), FlowResult::Alive(w)) => {
            let conjugated = principal_root(w, n)?;
            Ok(ConjugationReport::Comparable {
                grade_n: a,
                conjugated,
                gap: (a - conjugated).norm(),
            })
        }
        _ => Ok(ConjugationReport::Incomparable),
    }
}

/// Relative departure of `(g_t(z) - z) z^(2n-1)` from `2t` — the
/// hydrodynamic normalization seen from far away.
pub fn hydrodynamic_gap(
    z: Complex64,
    drive: &DrivePath,
    cfg: &FlowConfig,
    t: f64,
) -> Result<f64, FlowError> {
    let g = match flow_forward(z, drive, cfg, t)? {
        FlowResult::Alive(g) => g,
        FlowResult::Swallowed { tau } => return Err(FlowError::SwallowedEnRoute { tau }),
    };
    let product = (g - z) * z.powu(2 * cfg.grade - 1);
    let target = Complex64::new(2.0 * t, 0.0);
    Ok((product - target).norm() / target.norm())
}

/// Closed-form zero-drive solution `(z^(2n) + 4 n t)^(1/(2n))` with the
/// branch continued from the wedge (argument read in `[0, 2 pi)`).
pub fn zero_drive_closed_form(z: Complex64, grade: u32, t: f64) -> Complex64 {
    let w = z.powu(2 * grade) + 4.0 * grade as f64 * t;
    let (r, mut theta) = w.to_polar();
    if theta < 0.0 {
        theta += 2.0 * std::f64::consts::PI;
    }
    Complex64::from_polar(r.powf(0.5 / grade as f64), theta / (2.0 * grade as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_branch() {
        assert_eq!(sqrt_h(c(4.0, 0.0)), c(2.0, 0.0));
        assert_eq!(sqrt_h(c(-4.0, 0.0)), c(0.0, 2.0));
        let s = sqrt_h(c(0.0, 2.0));
        assert!(s.im > 0.0 && (s - c(1.0, 1.0)).norm() < 1e-15);
        let s = sqrt_h(c(0.0, -2.0));
        assert!(s.im >= 0.0 && (s - c(-1.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn principal_root_examples() {
        // (i, 2) -> e^{i pi/4}
        let r = principal_root(c(0.0, 1.0), 2).unwrap();
        assert!((r - Complex64::from_polar(1.0, FRAC_PI_4)).norm() < 1e-15);
        // (-1, 2) -> i
        let r = principal_root(c(-1.0, 0.0), 2).unwrap();
        assert!((r - c(0.0, 1.0)).norm() < 1e-15);
        // (4, 2) -> 2
        let r = principal_root(c(4.0, 0.0), 2).unwrap();
        assert!((r - c(2.0, 0.0)).norm() < 1e-15);
        // zero convention and lower half-plane rejection
        assert_eq!(principal_root(c(0.0, 0.0), 3).unwrap(), c(0.0, 0.0));
        assert!(principal_root(c(1.0, -0.1), 2).is_err());
        // n = 1 is the identity, even below the axis
        assert_eq!(principal_root(c(1.0, -0.5), 1).unwrap(), c(1.0, -0.5));
    }

    #[test]
    fn wedge_membership() {
        let w = Wedge::new(2);
        assert!(w.contains(Complex64::from_polar(1.0, PI / 5.0)));
        assert!(!w.contains(c(1.0, 0.0)));
        assert!(!w.contains(Complex64::from_polar(1.0, PI / 2.0 + 0.01)));
        assert!(!w.contains(c(0.0, 0.0)));
        assert!(Wedge::new(1).contains(c(-3.0, 0.1)));
    }

    #[test]
    fn step_identity_and_swallow() {
        // dt = 0 is the identity.
        let w = c(0.3, 1.2);
        assert_eq!(step_exact(w, 0.7, 0.0, 1, 1e-8), StepOutcome::Alive(w));
        // Example: w = i, Y = 0, dt = 1, n = 1 -> sqrt(3) on the real axis.
        match step_exact(c(0.0, 1.0), 0.0, 1.0, 1, 1e-8) {
            StepOutcome::Alive(w) => assert!((w - c(3f64.sqrt(), 0.0)).norm() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        // w = 2i swallows exactly at tau_offset = 1.
        match step_exact(c(0.0, 2.0), 0.0, 1.0, 1, 1e-8) {
            StepOutcome::Swallowed { tau_offset } => assert!((tau_offset - 1.0).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        // Starting on the singularity.
        match step_exact(c(0.0, 0.0), 0.0, 0.5, 1, 1e-8) {
            StepOutcome::Swallowed { tau_offset } => assert_eq!(tau_offset, 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn step_matches_fine_integration() {
        // Independent oracle: RK4 on dw/dt = 2n/(w - y) with tiny steps.
        let grade = 2u32;
        let y = 0.4;
        let dt = 0.05;
        let w0 = c(0.6, 1.1);
        let mut w = w0;
        let substeps = 20_000;
        let h = dt / substeps as f64;
        let rhs = |w: Complex64| 2.0 * grade as f64 / (w - y);
        for _ in 0..substeps {
            let k1 = rhs(w);
            let k2 = rhs(w + 0.5 * h * k1);
            let k3 = rhs(w + 0.5 * h * k2);
            let k4 = rhs(w + h * k3);
            w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        match step_exact(w0, y, dt, grade, 1e-8) {
            StepOutcome::Alive(exact) => assert!(
                (exact - w).norm() < 1e-10,
                "exact step {exact} vs integrated {w}"
            ),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_drive_matches_closed_form() {
        for grade in 1..=3u32 {
            let cfg = FlowConfig::new(grade, 0.01);
            let drive = DrivePath::zero(1.0, 0.01, false);
            let opening = PI / grade as f64;
            for k in 1..=6 {
                let z = Complex64::from_polar(
                    0.4 + 0.3 * k as f64,
                    opening * (0.15 + 0.1 * k as f64),
                );
                let got = flow_forward(z, &drive, &cfg, 1.0).unwrap();
                let expect = zero_drive_closed_form(z, grade, 1.0);
                let got = got.value().expect("alive away from the ray");
                assert!(
                    (got - expect).norm() < 1e-12,
                    "grade {grade}, z = {z}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn zero_drive_swallow_times() {
        // On the bisector the swallow time is r^(2n) / (4n).
        for grade in 1..=3u32 {
            let cfg = FlowConfig::new(grade, 0.01);
            let drive = DrivePath::zero(1.0, 0.01, false);
            let r: f64 = 1.1;
            let z = Complex64::from_polar(r, PI / (2.0 * grade as f64));
            let tau_exact = r.powi(2 * grade as i32) / (4.0 * grade as f64);
            match flow_forward(z, &drive, &cfg, 1.0).unwrap() {
                FlowResult::Swallowed { tau } => assert!(
                    (tau - tau_exact).abs() < 1e-12,
                    "grade {grade}: tau {tau} vs {tau_exact}"
                ),
                FlowResult::Alive(_) => panic!("grade {grade}: should swallow"),
            }
        }
    }

    #[test]
    fn grade_two_bisector_swallow_at_eighth() {
        // z = e^{i pi/4}: z^4 = -1, swallowed at tau = 1/8.
        let cfg = FlowConfig::new(2, 1.0 / 64.0);
        let drive = DrivePath::zero(0.25, 1.0 / 64.0, false);
        let z = Complex64::from_polar(1.0, FRAC_PI_4);
        match flow_forward(z, &drive, &cfg, 0.25).unwrap() {
            FlowResult::Swallowed { tau } => assert!((tau - 0.125).abs() < 1e-12),
            FlowResult::Alive(_) => panic!("should swallow"),
        }
    }

    #[test]
    fn forward_inverse_round_trip() {
        // Seeded Brownian-like drive assembled by hand (deterministic).
        let dt = 1e-3;
        let steps = 500;
        let mut samples = vec![0.0f64];
        let mut y = 0.0;
        for i in 0..steps {
            // A wiggly but fixed path; magnitudes comparable to sqrt(t).
            y += 0.04 * ((i as f64 * 0.7).sin() + 0.3 * (i as f64 * 1.3).cos());
            samples.push(y);
        }
        let drive = DrivePath::new(0.0, dt, samples, 2.0);
        for grade in 1..=3u32 {
            let cfg = FlowConfig::new(grade, dt);
            let opening = PI / grade as f64;
            let z = Complex64::from_polar(1.3, 0.55 * opening);
            let t = 0.5;
            let g = flow_forward(z, &drive, &cfg, t).unwrap().value().unwrap();
            let back = inverse_map(g, &drive, &cfg, t).unwrap();
            assert!(
                (back - z).norm() < 1e-10,
                "grade {grade}: round trip {back} vs {z}"
            );
        }
    }

    #[test]
    fn wedge_is_preserved_along_alive_flows() {
        let dt = 1e-3;
        let drive = DrivePath::zero(0.3, dt, false);
        for grade in 1..=3u32 {
            let cfg = FlowConfig::new(grade, dt);
            let z = Complex64::from_polar(1.2, 0.4 * PI / grade as f64);
            let mut w = z.powu(grade);
            let mut im_prev = w.im;
            for i in 0..drive.len() - 1 {
                match step_exact(w, drive.value(i), dt, grade, cfg.swallow_eps) {
                    StepOutcome::Alive(next) => {
                        assert!(next.im >= 0.0, "power coordinate left the half-plane");
                        assert!(next.im <= im_prev + 1e-12, "Im w must not increase");
                        im_prev = next.im;
                        w = next;
                    }
                    StepOutcome::Swallowed { .. } => break,
                }
            }
        }
    }

    #[test]
    fn boundary_inputs_are_rejected() {
        let cfg = FlowConfig::new(2, 0.01);
        let drive = DrivePath::zero(0.1, 0.01, false);
        // Positive real axis is the wedge boundary.
        let err = flow_forward(c(1.0, 0.0), &drive, &cfg, 0.1).unwrap_err();
        assert!(matches!(err, FlowError::OutsideWedge(_)));
        // Off-grid times are refused.
        let err = flow_forward(
            Complex64::from_polar(1.0, PI / 5.0),
            &drive,
            &cfg,
            0.015,
        )
        .unwrap_err();
        assert!(matches!(err, FlowError::Drive(DriveError::OffGrid { .. })));
    }

    #[test]
    fn f_map_relations() {
        let dt = 1e-3;
        let mut samples = vec![0.0f64];
        for i in 0..200 {
            samples.push(samples[i] + 0.03 * ((i as f64) * 0.9).sin());
        }
        let drive = DrivePath::new(0.0, dt, samples, 1.0);
        let cfg = FlowConfig::new(1, dt);
        let z = c(0.4, 1.5);
        // t = 0 is the identity.
        let f0 = f_map(z, &drive, &cfg, 0.0).unwrap().value().unwrap();
        assert!((f0 - z).norm() < 1e-14);
        // Grade 1, s = 1: f = g - Y.
        let t = 0.2;
        let g = flow_forward(z, &drive, &cfg, t).unwrap().value().unwrap();
        let f = f_map(z, &drive, &cfg, t).unwrap().value().unwrap();
        assert!((f - (g - drive.value_at(t).unwrap())).norm() < 1e-14);
    }

    #[test]
    fn backward_f_map_needs_two_sided_drive() {
        let dt = 1e-2;
        let one_sided = DrivePath::zero(0.2, dt, false);
        let cfg = FlowConfig::new(2, dt).with_sign(Sign::Backward);
        let z = Complex64::from_polar(1.0, PI / 5.0);
        let err = f_map(z, &one_sided, &cfg, 0.1).unwrap_err();
        assert!(matches!(
            err,
            FlowError::Drive(DriveError::TwoSidedRequired)
        ));
        let two_sided = DrivePath::zero(0.2, dt, true);
        let f = f_map(z, &two_sided, &cfg, 0.1).unwrap().value().unwrap();
        // Zero drive: f^n = g_{-t}^n = (z^(2n) - 4nt)^(1/2) continued.
        let expect_sq = z.powu(4) - 4.0 * 2.0 * 0.1;
        assert!((f.powu(2) - sqrt_h(expect_sq)).norm() < 1e-12);
    }

    #[test]
    fn shifted_flow_identities() {
        let dt = 1e-3;
        let mut samples = vec![0.0f64];
        for i in 0..400 {
            samples.push(samples[i] + 0.02 * ((i as f64) * 1.1).cos());
        }
        let drive = DrivePath::new(0.0, dt, samples, 1.0);
        let cfg = FlowConfig::new(2, dt);
        let z = Complex64::from_polar(1.4, PI / 5.0);
        // t = 0 is the identity.
        let v = shifted_flow(z, &drive, &cfg, 0.1, 0.0).unwrap();
        assert!((v - z).norm() < 1e-12);
        // t1 = 0 reduces to the plain flow (Y_0 = 0).
        let v = shifted_flow(z, &drive, &cfg, 0.0, 0.2).unwrap();
        let g = flow_forward(z, &drive, &cfg, 0.2).unwrap().value().unwrap();
        assert!((v - g).norm() < 1e-12);
    }

    #[test]
    fn shifted_flow_derivative_matches_equation() {
        // Finite differences of the restarted flow against
        // 2 / (v^(n-1) (v^n - (Y_{t1+t} - Y_{t1}))), with O(dt) error.
        let grade = 2u32;
        let z = Complex64::from_polar(1.3, PI / 5.0);
        let t1 = 0.05;
        let t = 0.1;
        // One underlying path sampled at the fine step, subsampled for the
        // coarse run so that both runs see the same drive.
        let fine_dt: f64 = 1e-4;
        let steps = ((t1 + t) / fine_dt).round() as usize + 20;
        let mut samples = vec![0.0f64];
        for i in 0..steps {
            samples.push(samples[i] + fine_dt.sqrt() * ((i as f64) * 0.37).sin());
        }
        let fine = DrivePath::new(0.0, fine_dt, samples, 1.0);
        let coarse = fine.subsample(10);
        let mut gaps = Vec::new();
        for drive in [&coarse, &fine] {
            let dt = drive.dt();
            let cfg = FlowConfig::new(grade, dt);
            let v = shifted_flow(z, drive, &cfg, t1, t).unwrap();
            let v_next = shifted_flow(z, drive, &cfg, t1, t + dt).unwrap();
            let fd = (v_next - v) / dt;
            let shift_y = drive.value_at(t1 + t).unwrap() - drive.value_at(t1).unwrap();
            let rhs = 2.0 / (v.powu(grade - 1) * (v.powu(grade) - shift_y));
            gaps.push((fd - rhs).norm());
        }
        assert!(
            gaps[1] < 0.3 * gaps[0],
            "finite-difference gap should shrink with dt: {gaps:?}"
        );
    }

    #[test]
    fn conjugation_zero_drive_gap_vanishes() {
        let base = DrivePath::zero(1.0, 1e-3, false);
        let z = Complex64::from_polar(1.2, PI / 5.0);
        match conjugation_check(z, &base, 2, 0.5).unwrap() {
            ConjugationReport::Comparable { gap, .. } => assert!(gap < 1e-13),
            ConjugationReport::Incomparable => panic!("zero drive should stay alive"),
        }
    }

    #[test]
    fn hydrodynamic_normalization_far_away() {
        for grade in 1..=2u32 {
            let dt = 0.1;
            let drive = DrivePath::zero(1.0, dt, false);
            let cfg = FlowConfig::new(grade, dt);
            let z = Complex64::from_polar(1e3, 0.3 * PI / grade as f64);
            let gap = hydrodynamic_gap(z, &drive, &cfg, 1.0).unwrap();
            assert!(gap < 1e-3, "grade {grade}: hydrodynamic gap {gap}");
        }
    }

    #[test]
    fn step_halving_improves_or_keeps_constant_drive_error() {
        let z = Complex64::from_polar(1.2, PI / 3.0);
        let expect = zero_drive_closed_form(z, 1, 0.5);
        let mut errors = Vec::new();
        for dt in [0.05, 0.025] {
            let drive = DrivePath::zero(0.5, dt, false);
            let cfg = FlowConfig::new(1, dt);
            let g = flow_forward(z, &drive, &cfg, 0.5).unwrap().value().unwrap();
            errors.push((g - expect).norm());
        }
        assert!(errors[1] <= errors[0] + 1e-12, "errors {errors:?}");
    }
}
