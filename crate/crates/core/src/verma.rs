//! The Virasoro algebra acting on Verma modules in the ordered product
//! basis.
//!
//! The algebra is `[L_m, L_k] = (m-k) L_{m+k} + (c/12) m (m^2-1) d_{m+k,0}`.
//! A Verma module with highest weight `delta` is spanned at level `l` by
//! `L_{-p1} ... L_{-pk} |delta>` over partitions `(p1 >= ... >= pk)` of
//! `l`. [`act_lowering`] and [`act_raising`] re-normal-order products into
//! that basis; both work with symbolic central charge and weight.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::partition::Partition;
use crate::poly::{Param, ParamPoly};
use crate::rational::{rat, rational_to_string, Rational};

/// One term of a commutator: a generator `L_i` or the central element.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LieTerm {
    Generator(i64),
    Central,
}

/// `[L_m, L_k]` expanded over generators and the central element; the
/// central coefficient is reported as a polynomial in `c`.
pub fn commutator(m: i64, k: i64) -> Vec<(LieTerm, ParamPoly)> {
    let mut out = Vec::new();
    let structure = rat(m - k, 1);
    if !structure.is_zero() {
        out.push((
            LieTerm::Generator(m + k),
            ParamPoly::constant(structure),
        ));
    }
    if m + k == 0 {
        let weight = rat(m, 12) * rat(m * m - 1, 1);
        if !weight.is_zero() {
            out.push((LieTerm::Central, ParamPoly::var(Param::C).scale(&weight)));
        }
    }
    out
}

/// Central charge and highest weight of a Verma module; either may be
/// numeric (degree-0 polynomial) or symbolic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VermaParams {
    pub c: ParamPoly,
    pub delta: ParamPoly,
}

impl VermaParams {
    /// Fully symbolic module: `c` and `delta` stay as free parameters.
    pub fn symbolic() -> Self {
        VermaParams {
            c: ParamPoly::var(Param::C),
            delta: ParamPoly::var(Param::Delta),
        }
    }

    pub fn rational(c: Rational, delta: Rational) -> Self {
        VermaParams {
            c: ParamPoly::constant(c),
            delta: ParamPoly::constant(delta),
        }
    }

    /// Both parameters as rationals, when numeric.
    pub fn as_rational(&self) -> Option<(Rational, Rational)> {
        Some((self.c.as_constant()?, self.delta.as_constant()?))
    }
}

/// Homogeneous vector of a Verma module in the ordered product basis:
/// a finite sum of `coeff(partition) * L_{-partition} |delta>`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PBWVector {
    level: u32,
    terms: BTreeMap<Partition, ParamPoly>,
    params: VermaParams,
}

impl PBWVector {
    pub fn zero(level: u32, params: VermaParams) -> Self {
        PBWVector {
            level,
            terms: BTreeMap::new(),
            params,
        }
    }

    /// The basis vector labeled by `partition`.
    pub fn basis(partition: Partition, params: VermaParams) -> Self {
        let mut v = PBWVector::zero(partition.level(), params);
        v.add_term(partition, ParamPoly::one());
        v
    }

    /// The highest-weight vector `|delta>`.
    pub fn highest_weight(params: VermaParams) -> Self {
        PBWVector::basis(Partition::empty(), params)
    }

    pub fn from_terms(
        level: u32,
        terms: impl IntoIterator<Item = (Partition, ParamPoly)>,
        params: VermaParams,
    ) -> Self {
        let mut v = PBWVector::zero(level, params);
        for (partition, coeff) in terms {
            v.add_term(partition, coeff);
        }
        v
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn params(&self) -> &VermaParams {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, partition: &Partition) -> ParamPoly {
        self.terms.get(partition).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &ParamPoly)> {
        self.terms.iter()
    }

    /// Accumulates `coeff` on `partition`, dropping the entry when the sum
    /// cancels. Panics on a level mismatch: vectors are homogeneous.
    pub fn add_term(&mut self, partition: Partition, coeff: ParamPoly) {
        assert_eq!(
            partition.level(),
            self.level,
            "inhomogeneous term {partition} in a level-{} vector",
            self.level
        );
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(partition) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = &*slot.get() + &coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &PBWVector) {
        if other.is_zero() {
            return;
        }
        assert_eq!(self.params, other.params, "mixing distinct modules");
        for (partition, coeff) in &other.terms {
            self.add_term(partition.clone(), coeff.clone());
        }
    }

    pub fn scaled(&self, factor: &ParamPoly) -> PBWVector {
        let mut out = PBWVector::zero(self.level, self.params.clone());
        for (partition, coeff) in &self.terms {
            out.add_term(partition.clone(), factor * coeff);
        }
        out
    }

    pub fn scaled_rational(&self, factor: &Rational) -> PBWVector {
        self.scaled(&ParamPoly::constant(factor.clone()))
    }

    pub fn sub(&self, other: &PBWVector) -> PBWVector {
        let mut out = self.clone();
        out.add_assign(&other.scaled_rational(&rat(-1, 1)));
        out
    }

    /// Substitutes a rational value for one parameter in every coefficient.
    pub fn substitute(&self, param: Param, value: &Rational) -> PBWVector {
        let mut out = PBWVector::zero(self.level, self.params.clone());
        for (partition, coeff) in &self.terms {
            out.add_term(partition.clone(), coeff.substitute(param, value));
        }
        out
    }

    /// Normalizes so the coefficient of the first (canonical-order)
    /// partition carrying a nonzero coefficient becomes 1. Only defined
    /// for vectors with numeric coefficients; returns `None` otherwise or
    /// for the zero vector.
    pub fn normalized_monic(&self) -> Option<PBWVector> {
        let (_, lead) = self.terms.iter().next()?;
        let lead = lead.as_constant()?;
        if lead.is_zero() {
            return None;
        }
        let inv = Rational::from_integer(1.into()) / lead;
        Some(self.scaled_rational(&inv))
    }
}

impl fmt::Display for PBWVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (partition, coeff)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if let Some(q) = coeff.as_constant() {
                write!(f, "{}*{}", rational_to_string(&q), partition)?;
            } else {
                write!(f, "({})*{}", coeff, partition)?;
            }
        }
        Ok(())
    }
}

/// `L_{-k} v` re-expressed in the ordered basis; the level rises by `k`.
pub fn act_lowering(v: &PBWVector, k: u32) -> PBWVector {
    assert!(k >= 1);
    let mut out = PBWVector::zero(v.level + k, v.params.clone());
    for (partition, coeff) in &v.terms {
        for (target, weight) in lower_word(k, partition.parts()) {
            out.add_term(target, coeff.scale(&weight));
        }
    }
    out
}

/// `L_{-k} L_{-p1} ... L_{-pj}` normal-ordered: commute `L_{-k}` rightward
/// past any larger index, picking up `(p1 - k) L_{-(k+p1)}` terms. The
/// ordered tail can start above `p1` after a merge, so the left factor is
/// re-lowered recursively rather than prepended.
fn lower_word(k: u32, parts: &[u32]) -> Vec<(Partition, Rational)> {
    if parts.first().is_none_or(|&p1| k >= p1) {
        return vec![(
            Partition::new(std::iter::once(k).chain(parts.iter().copied()).collect()),
            rat(1, 1),
        )];
    }
    let p1 = parts[0];
    let rest = &parts[1..];
    let mut out = Vec::new();
    for (partition, weight) in lower_word(k, rest) {
        for (reordered, inner_weight) in lower_word(p1, partition.parts()) {
            out.push((reordered, &weight * inner_weight));
        }
    }
    let merged_weight = rat(p1 as i64 - k as i64, 1);
    for (partition, weight) in lower_word(k + p1, rest) {
        out.push((partition, weight * &merged_weight));
    }
    out
}

/// `L_k v` for `k >= 1`, reduced to level `level(v) - k` by commuting the
/// raising operator down to the highest-weight vector (`L_k |delta> = 0`,
/// `L_0 |delta> = delta |delta>`). Raising past the top level yields the
/// zero vector at level 0.
pub fn act_raising(v: &PBWVector, k: u32) -> PBWVector {
    assert!(k >= 1);
    let target = v.level.saturating_sub(k);
    let mut out = PBWVector::zero(target, v.params.clone());
    for (partition, coeff) in &v.terms {
        let raised = raise_word(k, partition.parts(), &v.params);
        if raised.is_zero() {
            continue;
        }
        out.add_assign(&raised.scaled(coeff));
    }
    out
}

fn raise_word(k: u32, parts: &[u32], params: &VermaParams) -> PBWVector {
    let level: u32 = parts.iter().sum();
    let target = level.saturating_sub(k);
    if parts.is_empty() {
        return PBWVector::zero(0, params.clone());
    }
    let p1 = parts[0];
    let rest = &parts[1..];
    let rest_level: u32 = rest.iter().sum();
    let mut out = PBWVector::zero(target, params.clone());

    // L_{-p1} (L_k rest)
    let inner = raise_word(k, rest, params);
    if !inner.is_zero() {
        out.add_assign(&act_lowering(&inner, p1));
    }

    // [L_k, L_{-p1}] = (k + p1) L_{k - p1} + (c/12) k (k^2 - 1) d_{k,p1}
    let structure = rat(k as i64 + p1 as i64, 1);
    let rest_vec = PBWVector::basis(Partition::new(rest.to_vec()), params.clone());
    match k.cmp(&p1) {
        std::cmp::Ordering::Greater => {
            let deeper = raise_word(k - p1, rest, params);
            if !deeper.is_zero() {
                out.add_assign(&deeper.scaled_rational(&structure));
            }
        }
        std::cmp::Ordering::Equal => {
            // L_0 eigenvalue on the remaining word is delta + its level.
            let l0 = &params.delta + &ParamPoly::integer(rest_level as i64);
            out.add_assign(&rest_vec.scaled(&l0.scale(&structure)));
            let ki = k as i64;
            let central_weight = rat(ki * (ki * ki - 1), 12);
            out.add_assign(&rest_vec.scaled(&params.c.scale(&central_weight)));
        }
        std::cmp::Ordering::Less => {
            out.add_assign(&act_lowering(&rest_vec, p1 - k).scaled_rational(&structure));
        }
    }
    out
}
