//! Polynomials over the parameters `kappa`, `c`, `delta` with exact
//! rational coefficients.
//!
//! This is the coefficient ring shared by the whole algebra engine: module
//! data may be numeric (degree-0 polynomials) or symbolic in any of the
//! three parameters. Monomials are kept in graded-lexicographic order and
//! zero coefficients are never stored, so structural equality is semantic
//! equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{rational_to_string, Rational};

/// The three named parameters of the engine.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Param {
    /// Diffusivity of the driving Brownian motion.
    Kappa,
    /// Virasoro central charge.
    C,
    /// Highest weight (conformal dimension).
    Delta,
}

impl Param {
    fn index(self) -> usize {
        match self {
            Param::Kappa => 0,
            Param::C => 1,
            Param::Delta => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Param::Kappa => "kappa",
            Param::C => "c",
            Param::Delta => "delta",
        }
    }
}

/// Exponent vector of one monomial, ordered graded-lexicographically
/// (`kappa` before `c` before `delta`).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Exponents(pub [u32; 3]);

impl Exponents {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn is_unit(&self) -> bool {
        self.degree() == 0
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Multivariate polynomial in `kappa`, `c`, `delta` over the rationals.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        ParamPoly::constant(Rational::one())
    }

    pub fn constant(value: Rational) -> Self {
        let mut p = ParamPoly::zero();
        if !value.is_zero() {
            p.terms.insert(Exponents([0, 0, 0]), value);
        }
        p
    }

    pub fn integer(value: i64) -> Self {
        ParamPoly::constant(Rational::from_integer(value.into()))
    }

    pub fn var(param: Param) -> Self {
        let mut exps = [0u32; 3];
        exps[param.index()] = 1;
        let mut p = ParamPoly::zero();
        p.terms.insert(Exponents(exps), Rational::one());
        p
    }

    /// Single monomial `coeff * kappa^a c^b delta^d`.
    pub fn monomial(exps: [u32; 3], coeff: Rational) -> Self {
        let mut p = ParamPoly::zero();
        if !coeff.is_zero() {
            p.terms.insert(Exponents(exps), coeff);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(q)` when the polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let (exps, coeff) = self.terms.iter().next().unwrap();
            if exps.is_unit() {
                return Some(coeff.clone());
            }
        }
        None
    }

    pub fn degree_in(&self, param: Param) -> u32 {
        self.terms
            .keys()
            .map(|e| e.0[param.index()])
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    fn insert_term(&mut self, exps: Exponents, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + &coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, factor: &Rational) -> ParamPoly {
        if factor.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, q)| (*e, q * factor))
                .collect(),
        }
    }

    /// Evaluates at rational parameter values.
    pub fn eval(&self, kappa: &Rational, c: &Rational, delta: &Rational) -> Rational {
        let vals = [kappa, c, delta];
        let mut acc = Rational::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, v) in vals.iter().enumerate() {
                for _ in 0..exps.0[i] {
                    term *= *v;
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitutes a rational value for one parameter, keeping the others
    /// symbolic.
    pub fn substitute(&self, param: Param, value: &Rational) -> ParamPoly {
        let idx = param.index();
        let mut out = ParamPoly::zero();
        for (exps, coeff) in &self.terms {
            let mut term = coeff.clone();
            for _ in 0..exps.0[idx] {
                term *= value;
            }
            let mut reduced = exps.0;
            reduced[idx] = 0;
            out.insert_term(Exponents(reduced), term);
        }
        out
    }

    /// Splits a polynomial at most linear in `param` into `(a, b)` with
    /// `self = a + b * param`; `None` when the degree in `param` exceeds 1.
    pub fn split_linear(&self, param: Param) -> Option<(ParamPoly, ParamPoly)> {
        if self.degree_in(param) > 1 {
            return None;
        }
        let idx = param.index();
        let mut constant = ParamPoly::zero();
        let mut linear = ParamPoly::zero();
        for (exps, coeff) in &self.terms {
            if exps.0[idx] == 0 {
                constant.insert_term(*exps, coeff.clone());
            } else {
                let mut reduced = exps.0;
                reduced[idx] = 0;
                linear.insert_term(Exponents(reduced), coeff.clone());
            }
        }
        Some((constant, linear))
    }

    /// Coefficient list `[a_0, a_1, ...]` of a polynomial that only uses
    /// `kappa`; `None` when `c` or `delta` appear.
    pub fn kappa_coefficients(&self) -> Option<Vec<Rational>> {
        if self.degree_in(Param::C) > 0 || self.degree_in(Param::Delta) > 0 {
            return None;
        }
        let deg = self.degree_in(Param::Kappa) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (exps, coeff) in &self.terms {
            coeffs[exps.0[0] as usize] = coeff.clone();
        }
        Some(coeffs)
    }

    /// Terms as `(exponents, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &Rational)> {
        self.terms.iter().map(|(e, q)| (*e, q))
    }

    pub fn pow(&self, exponent: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (exps, coeff) in &rhs.terms {
            out.insert_term(*exps, coeff.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (exps, coeff) in &rhs.terms {
            out.insert_term(*exps, -coeff.clone());
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(e, q)| (*e, -q.clone())).collect(),
        }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps = Exponents([
                    ea.0[0] + eb.0[0],
                    ea.0[1] + eb.0[1],
                    ea.0[2] + eb.0[2],
                ]);
                out.insert_term(exps, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest-degree terms first reads naturally.
        let mut first = true;
        for (exps, coeff) in self.terms.iter().rev() {
            let mag = coeff.abs();
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = [Param::Kappa, Param::C, Param::Delta]
                .iter()
                .filter_map(|p| {
                    let e = exps.0[p.index()];
                    match e {
                        0 => None,
                        1 => Some(p.name().to_string()),
                        _ => Some(format!("{}^{}", p.name(), e)),
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", rational_to_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", rational_to_string(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}
