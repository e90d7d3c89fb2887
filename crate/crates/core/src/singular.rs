//! Gram matrices, singular vectors, and quotient-module reduction.
//!
//! A singular vector is a descendant annihilated by every positive mode;
//! imposing `L_1 v = L_2 v = 0` suffices since those two generate the
//! raising side. Null testing works in an explicit quotient: a vector is
//! null when it lies in the span of all descendants of a supplied list of
//! (primitive) singular vectors.

use num_traits::Zero;

use crate::linalg::{nullspace, EchelonSpan};
use crate::minimal::{minimal_model_c, minimal_model_weight, AlgebraError};
use crate::partition::{partitions_of, Partition};
use crate::poly::{Exponents, ParamPoly};
use crate::rational::Rational;
use crate::verma::{act_lowering, act_raising, PBWVector, VermaParams};

/// Gram (Shapovalov) matrix at `level`: entry `(lambda, mu)` is
/// `<delta| L_{lambda_k} ... L_{lambda_1} L_{-mu_1} ... L_{-mu_j} |delta>`,
/// computed by repeated raising. Works with symbolic parameters.
pub fn gram_matrix(level: u32, params: &VermaParams) -> (Vec<Partition>, Vec<Vec<ParamPoly>>) {
    let basis = partitions_of(level);
    let mut matrix = Vec::with_capacity(basis.len());
    for lambda in &basis {
        let mut row = Vec::with_capacity(basis.len());
        for mu in &basis {
            let mut v = PBWVector::basis(mu.clone(), params.clone());
            for &part in lambda.parts() {
                v = act_raising(&v, part);
            }
            row.push(v.coeff(&Partition::empty()));
        }
        matrix.push(row);
    }
    (basis, matrix)
}

/// Basis of `{v at level : L_1 v = L_2 v = 0}` for numeric `(c, delta)`,
/// each vector normalized so its first canonical-order coefficient is 1.
/// Empty when no singular vector exists at that level.
pub fn find_singular_vectors(level: u32, params: &VermaParams) -> Vec<PBWVector> {
    assert!(level >= 1);
    let (c, delta) = params
        .as_rational()
        .expect("singular-vector search needs numeric module parameters");
    let basis = partitions_of(level);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for k in 1u32..=2 {
        if level < k {
            continue;
        }
        let targets = partitions_of(level - k);
        let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(basis.len());
        for lambda in &basis {
            let raised = act_raising(&PBWVector::basis(lambda.clone(), params.clone()), k);
            columns.push(
                targets
                    .iter()
                    .map(|t| {
                        raised
                            .coeff(t)
                            .eval(&Rational::zero(), &c, &delta)
                    })
                    .collect(),
            );
        }
        for (ti, _) in targets.iter().enumerate() {
            rows.push(columns.iter().map(|col| col[ti].clone()).collect());
        }
    }
    let kernel = nullspace(rows, basis.len());
    kernel
        .into_iter()
        .map(|coords| {
            let v = PBWVector::from_terms(
                level,
                basis
                    .iter()
                    .cloned()
                    .zip(coords.into_iter().map(ParamPoly::constant)),
                params.clone(),
            );
            v.normalized_monic().expect("kernel vectors are nonzero")
        })
        .collect()
}

/// All level-`level` descendants of `generator`: the lowering-monomial
/// images `L_{-mu} generator` over partitions `mu` of the level gap.
fn descendants_at(generator: &PBWVector, level: u32) -> Vec<PBWVector> {
    assert!(generator.level() <= level);
    partitions_of(level - generator.level())
        .into_iter()
        .map(|mu| {
            let mut v = generator.clone();
            for &part in mu.parts().iter().rev() {
                v = act_lowering(&v, part);
            }
            v
        })
        .collect()
}

fn coordinates(v: &PBWVector, basis: &[Partition]) -> Vec<ParamPoly> {
    basis.iter().map(|p| v.coeff(p)).collect()
}

fn rational_coordinates(v: &PBWVector, basis: &[Partition]) -> Vec<Rational> {
    basis
        .iter()
        .map(|p| {
            v.coeff(p)
                .as_constant()
                .expect("generators must have numeric coefficients")
        })
        .collect()
}

/// Canonical residue of `v` modulo the span of all descendants of
/// `generators` at the level of `v`; the residue is zero exactly when `v`
/// is null in the quotient. Generators need numeric coefficients; `v` may
/// be symbolic (the reduction is applied monomial-by-monomial). Reduction
/// is idempotent.
pub fn submodule_reduce(v: &PBWVector, generators: &[PBWVector]) -> PBWVector {
    let basis = partitions_of(v.level());
    let mut span_rows = Vec::new();
    for generator in generators {
        assert_eq!(
            generator.params(),
            v.params(),
            "generators and vector must share module parameters"
        );
        if generator.level() > v.level() {
            continue;
        }
        for descendant in descendants_at(generator, v.level()) {
            span_rows.push(rational_coordinates(&descendant, &basis));
        }
    }
    let span = EchelonSpan::new(span_rows, basis.len());

    // Split v by parameter monomial, reduce each rational slice, recombine.
    let coords = coordinates(v, &basis);
    let mut monomials: Vec<Exponents> = Vec::new();
    for poly in &coords {
        for (exps, _) in poly.terms() {
            if !monomials.contains(&exps) {
                monomials.push(exps);
            }
        }
    }
    let mut out = PBWVector::zero(v.level(), v.params().clone());
    for exps in monomials {
        let slice: Vec<Rational> = coords
            .iter()
            .map(|poly| {
                poly.terms()
                    .find(|(e, _)| *e == exps)
                    .map(|(_, q)| q.clone())
                    .unwrap_or_else(Rational::zero)
            })
            .collect();
        let reduced = span.reduce(&slice);
        for (partition, value) in basis.iter().zip(reduced) {
            out.add_term(partition.clone(), ParamPoly::monomial(exps.0, value));
        }
    }
    out
}

/// A Verma module together with the generators of its maximal proper
/// submodule (the primitive singular vectors up to some level).
#[derive(Clone, Debug)]
pub struct QuotientModule {
    params: VermaParams,
    generators: Vec<PBWVector>,
    scanned_level: u32,
}

impl QuotientModule {
    /// Scans levels `1..=max_level` for singular vectors and keeps the
    /// primitive ones (those not already in the span of descendants of
    /// earlier generators).
    pub fn scan(params: VermaParams, max_level: u32) -> Self {
        let mut generators: Vec<PBWVector> = Vec::new();
        for level in 1..=max_level {
            for sv in find_singular_vectors(level, &params) {
                if !submodule_reduce(&sv, &generators).is_zero() {
                    generators.push(sv);
                }
            }
        }
        QuotientModule {
            params,
            generators,
            scanned_level: max_level,
        }
    }

    /// The `(r, s)` highest-weight module of the minimal model `M(p, p')`.
    pub fn minimal_model(
        p: i64,
        p_prime: i64,
        r: i64,
        s: i64,
        max_level: u32,
    ) -> Result<Self, AlgebraError> {
        let c = minimal_model_c(p, p_prime)?;
        let delta = minimal_model_weight(p, p_prime, r, s)?;
        Ok(QuotientModule::scan(VermaParams::rational(c, delta), max_level))
    }

    pub fn params(&self) -> &VermaParams {
        &self.params
    }

    pub fn generators(&self) -> &[PBWVector] {
        &self.generators
    }

    pub fn scanned_level(&self) -> u32 {
        self.scanned_level
    }

    /// Residue of `v` in the quotient.
    pub fn reduce(&self, v: &PBWVector) -> PBWVector {
        submodule_reduce(v, &self.generators)
    }

    pub fn is_null(&self, v: &PBWVector) -> bool {
        self.reduce(v).is_zero()
    }
}
