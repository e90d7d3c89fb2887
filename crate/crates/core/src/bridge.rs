//! From generator drifts of the grade-`n` random walk to singular and
//! null vectors.
//!
//! The Ito drift of the walk driven by `L_{-n}` noise is
//! `(2 (-1)^s - kappa (n-1) / (2 n^2)) L_{-2n} + (kappa / (2 n^2)) L_{-n}^2`,
//! with noise coefficient `sqrt(kappa)/n` (`s = 1` for the forward-map
//! relation, `s = 2` for the backward two-sided one). Applying the drift
//! to a highest-weight vector produces the level-`2n` candidate; the
//! walk's expectation is conserved exactly when the candidate is null in
//! the module at hand. For `n = 1` that forces the classic one-parameter
//! `(c, delta)` family; for `n >= 2` the `L_1` obstruction rules out
//! singular vectors and null vectors must be hunted in reducible modules.
//! The flagship solve: grade 2, `s = 2`, identity module of `M(5,2)`
//! gives exactly `kappa = 40`.

use num_traits::{Signed, Zero};

use crate::minimal::AlgebraError;
use crate::partition::Partition;
use crate::poly::{Param, ParamPoly};
use crate::rational::{rat, Rational};
use crate::singular::QuotientModule;
use crate::verma::{act_raising, PBWVector, VermaParams};

/// Which map relation the walk mirrors: `s = 1` (forward, one-sided) or
/// `s = 2` (backward, two-sided drive).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Forward,
    Backward,
}

impl Sign {
    /// The label `s` as written in the drift formulas.
    pub fn label(self) -> u32 {
        match self {
            Sign::Forward => 1,
            Sign::Backward => 2,
        }
    }

    /// `(-1)^s`.
    pub fn parity(self) -> i64 {
        match self {
            Sign::Forward => -1,
            Sign::Backward => 1,
        }
    }

    pub fn from_label(label: u32) -> Option<Sign> {
        match label {
            1 => Some(Sign::Forward),
            2 => Some(Sign::Backward),
            _ => None,
        }
    }
}

/// Grade, sign choice, and diffusivity (symbolic or rational) of one walk.
#[derive(Clone, Debug)]
pub struct CandidateSpec {
    pub grade: u32,
    pub sign: Sign,
    pub kappa: ParamPoly,
}

impl CandidateSpec {
    pub fn new(grade: u32, sign: Sign, kappa: ParamPoly) -> Self {
        assert!(grade >= 1);
        CandidateSpec { grade, sign, kappa }
    }

    /// Spec with `kappa` left symbolic.
    pub fn symbolic(grade: u32, sign: Sign) -> Self {
        CandidateSpec::new(grade, sign, ParamPoly::var(Param::Kappa))
    }

    pub fn with_kappa(grade: u32, sign: Sign, kappa: Rational) -> Self {
        CandidateSpec::new(grade, sign, ParamPoly::constant(kappa))
    }
}

/// Ito drift data of the walk: coefficients of `L_{-2n}` and `L_{-n}^2`,
/// plus the squared noise coefficient `kappa / n^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDrift {
    pub coeff_l_minus_2n: ParamPoly,
    pub coeff_l_minus_n_squared: ParamPoly,
    pub noise_squared: ParamPoly,
}

impl GeneratorDrift {
    /// The Ito half-factor bookkeeping: `L_{-n}^2` carries half the
    /// squared noise.
    pub fn is_consistent(&self) -> bool {
        self.coeff_l_minus_n_squared == self.noise_squared.scale(&rat(1, 2))
    }
}

/// Drift of the grade-`n` walk for a given sign and diffusivity.
pub fn drift_from_walk(spec: &CandidateSpec) -> GeneratorDrift {
    let n = spec.grade as i64;
    let two_n_sq = 2 * n * n;
    let coeff_l_minus_2n = &ParamPoly::integer(2 * spec.sign.parity())
        - &spec.kappa.scale(&rat(n - 1, two_n_sq));
    let coeff_l_minus_n_squared = spec.kappa.scale(&rat(1, two_n_sq));
    let noise_squared = spec.kappa.scale(&rat(1, n * n));
    GeneratorDrift {
        coeff_l_minus_2n,
        coeff_l_minus_n_squared,
        noise_squared,
    }
}

/// The drift applied to `|delta>`: the level-`2n` vector
/// `coeff_l_minus_2n * L_{-2n} |delta> + coeff_l_minus_n_squared * L_{-n}^2 |delta>`.
pub fn candidate_vector(spec: &CandidateSpec, params: &VermaParams) -> PBWVector {
    let drift = drift_from_walk(spec);
    let n = spec.grade;
    PBWVector::from_terms(
        2 * n,
        [
            (Partition::new(vec![2 * n]), drift.coeff_l_minus_2n),
            (Partition::new(vec![n, n]), drift.coeff_l_minus_n_squared),
        ],
        params.clone(),
    )
}

/// `L_1` applied to the candidate, in closed form (grade >= 2): the
/// coefficient `(2n+1) coeff_l_minus_2n + (n+1) kappa / (2 n^2)` on
/// `L_{-(2n-1)}` and `(n+1) kappa / n^2` on `L_{-n} L_{-(n-1)}`. This is
/// an independent route to `act_raising(candidate, 1)` and the two are
/// asserted equal as a polynomial identity in the tests.
pub fn obstruction_l1(spec: &CandidateSpec, params: &VermaParams) -> PBWVector {
    let n = spec.grade;
    assert!(n >= 2, "grade 1 uses the level-2 singular condition instead");
    let ni = n as i64;
    let drift = drift_from_walk(spec);
    let lead = &drift.coeff_l_minus_2n.scale(&rat(2 * ni + 1, 1))
        + &spec.kappa.scale(&rat(ni + 1, 2 * ni * ni));
    let mixed = spec.kappa.scale(&rat(ni + 1, ni * ni));
    PBWVector::from_terms(
        2 * n - 1,
        [
            (Partition::new(vec![2 * n - 1]), lead),
            (Partition::new(vec![n, n - 1]), mixed),
        ],
        params.clone(),
    )
}

/// One-parameter family `kappa -> (c, delta)` as exact rational functions.
#[derive(Clone, Debug)]
pub struct CdFamily {
    pub c_num: ParamPoly,
    pub c_den: ParamPoly,
    pub delta_num: ParamPoly,
    pub delta_den: ParamPoly,
}

impl CdFamily {
    /// `(c, delta)` at a rational `kappa`; `None` on a denominator zero.
    pub fn eval(&self, kappa: &Rational) -> Option<(Rational, Rational)> {
        let zero = Rational::zero();
        let at = |p: &ParamPoly| p.eval(kappa, &zero, &zero);
        let c_den = at(&self.c_den);
        let d_den = at(&self.delta_den);
        if c_den.is_zero() || d_den.is_zero() {
            return None;
        }
        Some((at(&self.c_num) / c_den, at(&self.delta_num) / d_den))
    }
}

/// Solution set of "the candidate is singular": a `(c, delta)` family for
/// grade 1, empty for higher grades (the `L_1` obstruction never clears).
#[derive(Clone, Debug)]
pub enum SingularSolution {
    Family(CdFamily),
    Empty {
        /// Coefficient polynomials of the `L_1` obstruction whose common
        /// roots were required; kept as the certificate of emptiness.
        obstruction: Vec<(Partition, ParamPoly)>,
    },
}

/// Solves `L_1 v = L_2 v = 0` for the candidate with symbolic `kappa`,
/// `c`, `delta`.
pub fn solve_kappa_singular(grade: u32, sign: Sign) -> SingularSolution {
    let spec = CandidateSpec::symbolic(grade, sign);
    let params = VermaParams::symbolic();
    let candidate = candidate_vector(&spec, &params);
    if grade == 1 {
        // L_1 condition is a single level-1 coefficient, linear in delta.
        let r1 = act_raising(&candidate, 1);
        let p1 = r1.coeff(&Partition::new(vec![1]));
        let (a, b) = p1
            .split_linear(Param::Delta)
            .expect("level-2 raising is linear in delta");
        assert!(!b.is_zero());
        // L_2 condition is level 0, linear in c and delta.
        let r2 = act_raising(&candidate, 2);
        let p2 = r2.coeff(&Partition::empty());
        let (no_c, e) = p2.split_linear(Param::C).expect("linear in c");
        let (d, f) = no_c.split_linear(Param::Delta).expect("linear in delta");
        assert!(!e.is_zero());
        // delta = -a/b; substituting into d + e c + f delta = 0 gives
        // c = (f a - d b) / (e b).
        return SingularSolution::Family(CdFamily {
            c_num: &(&f * &a) - &(&d * &b),
            c_den: &e * &b,
            delta_num: -&a,
            delta_den: b,
        });
    }
    // Grade >= 2: every coefficient of L_1 candidate must vanish; the
    // mixed term only dies at kappa = 0 where the leading one cannot.
    let r1 = act_raising(&candidate, 1);
    let obstruction: Vec<(Partition, ParamPoly)> =
        r1.iter().map(|(p, q)| (p.clone(), q.clone())).collect();
    let equations: Vec<Vec<Rational>> = obstruction
        .iter()
        .map(|(_, poly)| {
            poly.kappa_coefficients()
                .expect("grade >= 2 obstruction is kappa-only")
        })
        .collect();
    let common = common_rational_roots(&equations);
    assert!(
        common.as_deref().is_some_and(|roots| roots.is_empty()),
        "unexpected clearing of the L_1 obstruction"
    );
    SingularSolution::Empty { obstruction }
}

/// Common rational roots of a family of univariate polynomials; `None`
/// when every polynomial is identically zero.
fn common_rational_roots(equations: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let mut candidates: Option<Vec<Rational>> = None;
    for eq in equations {
        match crate::linalg::rational_roots(eq) {
            None => continue, // identically zero: no constraint
            Some(roots) => match &mut candidates {
                None => candidates = Some(roots),
                Some(current) => current.retain(|r| roots.contains(r)),
            },
        }
    }
    candidates
}

/// One rational solution of a null-vector solve, with its certificate.
#[derive(Clone, Debug)]
pub struct NullRoot {
    pub kappa: Rational,
    pub nonnegative: bool,
    /// Residue of the candidate at this `kappa` (the zero vector).
    pub residue: PBWVector,
}

/// Result of solving "the candidate is null in the module" over `kappa`.
#[derive(Clone, Debug)]
pub struct NullSolution {
    pub roots: Vec<NullRoot>,
    /// The candidate reduces to zero for every `kappa`.
    pub identically_null: bool,
    /// Symbolic residue of the candidate before solving.
    pub residue: PBWVector,
    pub note: Option<String>,
}

impl NullSolution {
    pub fn nonnegative_roots(&self) -> Vec<&NullRoot> {
        self.roots.iter().filter(|r| r.nonnegative).collect()
    }
}

/// All rational `kappa` for which the grade-`n` candidate is null in the
/// `(r, s)` module of the minimal model `M(p, p')`, reducing modulo the
/// primitive singular vectors found up to level `2n`. Exact throughout;
/// negative roots are returned but flagged.
pub fn solve_kappa_null(
    grade: u32,
    sign: Sign,
    p: i64,
    p_prime: i64,
    r: i64,
    s: i64,
) -> Result<NullSolution, AlgebraError> {
    let module = QuotientModule::minimal_model(p, p_prime, r, s, 2 * grade)?;
    let spec = CandidateSpec::symbolic(grade, sign);
    let candidate = candidate_vector(&spec, module.params());
    let residue = module.reduce(&candidate);
    if module.generators().is_empty() {
        return Ok(NullSolution {
            roots: Vec::new(),
            identically_null: false,
            residue,
            note: Some(format!(
                "no singular vectors at or below level {} in this module",
                2 * grade
            )),
        });
    }
    let equations: Vec<Vec<Rational>> = residue
        .iter()
        .map(|(_, poly)| {
            poly.kappa_coefficients()
                .expect("residue over a numeric module is kappa-only")
        })
        .collect();
    match common_rational_roots(&equations) {
        None => Ok(NullSolution {
            roots: Vec::new(),
            identically_null: true,
            residue,
            note: Some("candidate is null for every kappa".to_string()),
        }),
        Some(roots) => {
            let roots = roots
                .into_iter()
                .map(|kappa| {
                    let at_root = residue.substitute(Param::Kappa, &kappa);
                    assert!(at_root.is_zero());
                    NullRoot {
                        nonnegative: !kappa.is_negative(),
                        kappa,
                        residue: at_root,
                    }
                })
                .collect();
            Ok(NullSolution {
                roots,
                identically_null: false,
                residue,
                note: None,
            })
        }
    }
}

/// Conservation check: the drift applied to `|delta>` must be null in the
/// module for the walk's expectation to be constant. Returns the verdict
/// and the residue as certificate.
pub fn martingale_generator_check(
    spec: &CandidateSpec,
    module: &QuotientModule,
) -> (bool, PBWVector) {
    let candidate = candidate_vector(spec, module.params());
    let residue = module.reduce(&candidate);
    (residue.is_zero(), residue)
}
