//! Dense exact linear algebra over the rationals: reduced row echelon
//! form, nullspaces, determinants, and rational root extraction for the
//! low-degree polynomial systems produced by the algebra engine.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{exact_sqrt, Rational};

/// Row-major rational matrix.
pub type Matrix = Vec<Vec<Rational>>;

/// In-place reduced row echelon form; returns the pivot columns in order.
pub fn rref(matrix: &mut Matrix) -> Vec<usize> {
    let rows = matrix.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = matrix[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(src) = (row..rows).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, src);
        let inv = matrix[row][col].clone();
        for entry in &mut matrix[row][col..] {
            *entry /= &inv;
        }
        for r in 0..rows {
            if r != row && !matrix[r][col].is_zero() {
                let factor = matrix[r][col].clone();
                for c in col..cols {
                    let delta = &matrix[row][c] * &factor;
                    matrix[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    pivots
}

/// Basis of the right nullspace of `matrix` acting on `cols` unknowns.
pub fn nullspace(mut matrix: Matrix, cols: usize) -> Vec<Vec<Rational>> {
    for row in &matrix {
        assert_eq!(row.len(), cols);
    }
    let pivots = rref(&mut matrix);
    let mut basis = Vec::new();
    let mut pivot_iter = pivots.iter().copied().peekable();
    let mut pivot_rows: Vec<Option<usize>> = vec![None; cols];
    for (r, col) in pivots.iter().copied().enumerate() {
        pivot_rows[col] = Some(r);
    }
    for free in 0..cols {
        if pivot_iter.peek() == Some(&free) {
            pivot_iter.next();
            continue;
        }
        let mut vec = vec![Rational::zero(); cols];
        vec[free] = Rational::one();
        for col in 0..cols {
            if let Some(r) = pivot_rows[col] {
                vec[col] = -matrix[r][free].clone();
            }
        }
        basis.push(vec);
    }
    basis
}

/// Determinant by fraction-free-ish Gaussian elimination (exact).
pub fn determinant(matrix: &Matrix) -> Rational {
    let n = matrix.len();
    if n == 0 {
        return Rational::one();
    }
    assert!(matrix.iter().all(|row| row.len() == n));
    let mut m = matrix.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(src) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if src != col {
            m.swap(col, src);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &inv;
            for c in col..n {
                let delta = &m[col][c] * &factor;
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Echelonized span with pivot bookkeeping, for repeated reduction of
/// vectors against a fixed subspace.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    cols: usize,
    /// Rows in reduced echelon form, tagged by pivot column.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonSpan {
    pub fn new(vectors: Vec<Vec<Rational>>, cols: usize) -> Self {
        let mut matrix: Matrix = vectors;
        matrix.retain(|v| v.iter().any(|q| !q.is_zero()));
        for row in &matrix {
            assert_eq!(row.len(), cols);
        }
        let pivots = rref(&mut matrix);
        let rows = pivots
            .iter()
            .copied()
            .zip(matrix.into_iter())
            .collect();
        EchelonSpan { cols, rows }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Canonical residue of `vector` modulo the span.
    pub fn reduce(&self, vector: &[Rational]) -> Vec<Rational> {
        assert_eq!(vector.len(), self.cols);
        let mut out = vector.to_vec();
        for (pivot, row) in &self.rows {
            if out[*pivot].is_zero() {
                continue;
            }
            let factor = out[*pivot].clone();
            for (o, r) in out.iter_mut().zip(row.iter()) {
                let delta = r * &factor;
                *o -= delta;
            }
        }
        out
    }

    pub fn contains(&self, vector: &[Rational]) -> bool {
        self.reduce(vector).iter().all(|q| q.is_zero())
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Trial division; the solver only meets small integers.
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// All rational roots (with multiplicity collapsed) of a univariate
/// polynomial with rational coefficients, `coeffs[i]` on `x^i`.
///
/// Exact for degree <= 2; degrees 3 and 4 are handled by rational-root
/// candidates plus deflation, which finds every rational root. Returns
/// `None` for the zero polynomial (every value is a root).
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(|q| q.is_zero()) {
        c.pop();
    }
    if c.is_empty() {
        return None;
    }
    if c.len() == 1 {
        return Some(Vec::new());
    }
    // Clear denominators to an integer polynomial.
    let mut lcm = BigInt::one();
    for q in &c {
        lcm = lcm.lcm(q.denom());
    }
    let ints: Vec<BigInt> = c
        .iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect();
    let mut roots = Vec::new();
    let mut poly = ints;
    // Strip roots at zero.
    while poly.first().is_some_and(|a| a.is_zero()) {
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
        poly.remove(0);
    }
    if poly.len() == 2 {
        push_unique(&mut roots, Rational::new(-poly[0].clone(), poly[1].clone()));
        roots.sort();
        return Some(roots);
    }
    if poly.len() == 3 {
        // Quadratic formula with an exact discriminant square-root test.
        let (a, b, cc) = (&poly[2], &poly[1], &poly[0]);
        let disc = b * b - BigInt::from(4) * a * cc;
        if let Some(sq) = exact_sqrt(&disc) {
            let two_a = BigInt::from(2) * a;
            push_unique(&mut roots, Rational::new(-b + &sq, two_a.clone()));
            push_unique(&mut roots, Rational::new(-b - &sq, two_a));
        }
        roots.sort();
        return Some(roots);
    }
    // Degree >= 3: rational-root theorem with deflation.
    let lead = poly.last().unwrap().clone();
    let tail = poly[0].clone();
    for p in divisors(&tail) {
        for q in divisors(&lead) {
            for sign in [1i32, -1] {
                let cand = Rational::new(p.clone() * BigInt::from(sign), q.clone());
                if eval_int_poly(&poly, &cand).is_zero() {
                    push_unique(&mut roots, cand);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

fn eval_int_poly(poly: &[BigInt], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for coeff in poly.iter().rev() {
        acc = acc * x + Rational::from_integer(coeff.clone());
    }
    acc
}

fn push_unique(roots: &mut Vec<Rational>, candidate: Rational) {
    if !roots.contains(&candidate) {
        roots.push(candidate);
    }
}
