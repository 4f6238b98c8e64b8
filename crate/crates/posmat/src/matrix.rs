//! Square matrices over the supported rings, with the monomial machinery
//! used throughout: recognition, factored inversion, involution
//! classification and membership tests for the stabilized subsemigroup.
//!
//! Conventions, fixed once and used everywhere:
//!
//! * a permutation matrix has row i's one in column p(i), so
//!   `S(a) * S(b) = S(a.then(b))`;
//! * a monomial matrix is diag(d) * S(p), i.e. entry (i, p(i)) = d_i;
//! * conjugation: (S(p) X S(p)^-1)_(i,j) = X_(p(i), p(j)), hence
//!   S(p)^-1 diag(d) S(p) = diag(d_(p^-1(i))).

use crate::perm::Permutation;
use crate::ring::{Poly, RatFun, RingElement, RingError, RingId};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not monomial: {0}")]
    NotMonomial(String),
    #[error("not an involution: {0}")]
    NotInvolution(String),
    #[error("unsupported over {ring}: {what}")]
    Unsupported { ring: RingId, what: &'static str },
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    ring: RingId,
    entries: Vec<RingElement>, // row-major
}

impl Matrix {
    pub fn from_rows(ring: RingId, rows: Vec<Vec<RingElement>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::DimensionMismatch("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrixError::DimensionMismatch(format!(
                    "row of length {} in {}x{} matrix",
                    row.len(),
                    n,
                    n
                )));
            }
            for e in row {
                if e.ring() != ring {
                    return Err(MatrixError::Ring(RingError::RingMismatch {
                        op: "matrix entry",
                        lhs: ring,
                        rhs: e.ring(),
                    }));
                }
                entries.push(e);
            }
        }
        Ok(Matrix { n, ring, entries })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> RingElement>(
        ring: RingId,
        n: usize,
        mut f: F,
    ) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                debug_assert_eq!(e.ring(), ring);
                entries.push(e);
            }
        }
        Matrix { n, ring, entries }
    }

    pub fn identity(ring: RingId, n: usize) -> Self {
        Matrix::from_fn(ring, n, |i, j| {
            if i == j {
                RingElement::one(ring)
            } else {
                RingElement::zero(ring)
            }
        })
    }

    pub fn diagonal(entries: Vec<RingElement>) -> Self {
        assert!(!entries.is_empty());
        let ring = entries[0].ring();
        let n = entries.len();
        Matrix::from_fn(ring, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                RingElement::zero(ring)
            }
        })
    }

    pub fn permutation(ring: RingId, p: &Permutation) -> Self {
        Matrix::from_fn(ring, p.len(), |i, j| {
            if p.apply(i) == j {
                RingElement::one(ring)
            } else {
                RingElement::zero(ring)
            }
        })
    }

    /// Identity plus x at position (i, j), i != j (0-based).
    pub fn transvection(ring: RingId, n: usize, i: usize, j: usize, x: &RingElement) -> Self {
        assert!(i < n && j < n && i != j, "transvection needs i != j in range");
        assert_eq!(x.ring(), ring);
        let mut m = Matrix::identity(ring, n);
        m.set(i, j, x.clone());
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn entry(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElement) {
        assert_eq!(v.ring(), self.ring);
        self.entries[i * self.n + j] = v;
    }

    pub fn map_entries<F: Fn(&RingElement) -> RingElement>(&self, f: F) -> Matrix {
        let entries: Vec<RingElement> = self.entries.iter().map(f).collect();
        let ring = entries[0].ring();
        Matrix {
            n: self.n,
            ring,
            entries,
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.n, |i, j| self.entry(j, i).clone())
    }

    /// c * X entrywise, multiplying from the left.
    pub fn left_scale(&self, c: &RingElement) -> Matrix {
        self.map_entries(|e| c * e)
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.ring != other.ring {
            return Err(MatrixError::Ring(RingError::RingMismatch {
                op: "matmul",
                lhs: self.ring,
                rhs: other.ring,
            }));
        }
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        let n = self.n;
        let zero = RingElement::zero(self.ring);
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for k in 0..n {
                    let a = self.entry(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.entry(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                entries.push(acc);
            }
        }
        Ok(Matrix {
            n,
            ring: self.ring,
            entries,
        })
    }

    pub fn is_identity(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.entry(i, j);
                if i == j {
                    if !e.is_one() {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && !self.entry(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagonal_entries(&self) -> Vec<RingElement> {
        (0..self.n).map(|i| self.entry(i, i).clone()).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| e.sign() >= 0)
    }

    /// Decompose as diag(d) * S(p) with positive unit d; fails otherwise.
    pub fn monomial_recognize(&self) -> Result<MonomialMatrix, MatrixError> {
        let n = self.n;
        let mut images = vec![usize::MAX; n];
        let mut col_used = vec![false; n];
        let mut diag = Vec::with_capacity(n);
        for i in 0..n {
            let mut found: Option<usize> = None;
            for j in 0..n {
                if !self.entry(i, j).is_zero() {
                    if found.is_some() {
                        return Err(MatrixError::NotMonomial(format!(
                            "row {} has more than one nonzero entry",
                            i + 1
                        )));
                    }
                    found = Some(j);
                }
            }
            let j = found.ok_or_else(|| {
                MatrixError::NotMonomial(format!("row {} is zero", i + 1))
            })?;
            if col_used[j] {
                return Err(MatrixError::NotMonomial(format!(
                    "column {} hit twice",
                    j + 1
                )));
            }
            col_used[j] = true;
            images[i] = j;
            let e = self.entry(i, j);
            if e.sign() <= 0 {
                return Err(MatrixError::NotMonomial(format!(
                    "entry ({}, {}) = {} is not positive",
                    i + 1,
                    j + 1,
                    e
                )));
            }
            if !e.is_unit() {
                return Err(MatrixError::NotMonomial(format!(
                    "entry ({}, {}) = {} is not a unit",
                    i + 1,
                    j + 1,
                    e
                )));
            }
            diag.push(e.clone());
        }
        let perm = Permutation::from_images(images)
            .expect("column-injective row map is a permutation");
        Ok(MonomialMatrix { diag, perm })
    }

    /// Classify as a monomial involution: perm part squaring to the
    /// identity with diagonal part satisfying t_i * t_(p(i)) = 1.
    pub fn involution_classify(&self) -> Result<InvolutionData, MatrixError> {
        let m = self
            .monomial_recognize()
            .map_err(|e| MatrixError::NotInvolution(e.to_string()))?;
        if !m.perm.then(&m.perm).is_identity() {
            return Err(MatrixError::NotInvolution(format!(
                "permutation part {} has order > 2",
                m.perm
            )));
        }
        for i in 0..self.n {
            let prod = &m.diag[i] * &m.diag[m.perm.apply(i)];
            if !prod.is_one() {
                return Err(MatrixError::NotInvolution(format!(
                    "t_{} * t_{} = {} differs from 1",
                    i + 1,
                    m.perm.apply(i) + 1,
                    prod
                )));
            }
        }
        Ok(InvolutionData {
            t: m.diag,
            sigma: m.perm,
        })
    }

    /// Membership in the stabilizer copy one size down: last row and column
    /// vanish away from (n, n), and the corner is a positive unit.
    pub fn in_corner_stabilizer(&self) -> bool {
        let n = self.n;
        if n < 2 {
            return false;
        }
        let corner = self.entry(n - 1, n - 1);
        if corner.sign() <= 0 || !corner.is_unit() {
            return false;
        }
        for k in 0..n - 1 {
            if !self.entry(n - 1, k).is_zero() || !self.entry(k, n - 1).is_zero() {
                return false;
            }
        }
        true
    }

    pub fn commutes(&self, other: &Matrix) -> bool {
        let ab = self * other;
        let ba = other * self;
        ab == ba
    }

    /// Whether some power M^k with 1 <= k <= bound is the identity.
    /// Requires a monomial matrix.
    pub fn has_finite_order(&self, bound: u64) -> Result<bool, MatrixError> {
        let m = self.monomial_recognize()?;
        let mut acc = m.clone();
        for _ in 1..=bound {
            if acc.is_identity() {
                return Ok(true);
            }
            acc = acc.mul(&m);
        }
        Ok(false)
    }

    /// Exact inverse over the commutative rings; None when not invertible
    /// over the ring. DYADIC routes through the rationals and converts
    /// back, which fails exactly when no dyadic inverse exists.
    pub fn inverse(&self) -> Result<Option<Matrix>, MatrixError> {
        match self.ring {
            RingId::Skew => Err(MatrixError::Unsupported {
                ring: RingId::Skew,
                what: "general inverse",
            }),
            RingId::Dyadic => {
                let lifted = self.map_entries(|e| {
                    RingElement::Q(e.as_rational().expect("dyadic values are rational"))
                });
                match lifted.field_inverse() {
                    None => Ok(None),
                    Some(inv) => {
                        let mut rows = Vec::with_capacity(self.n);
                        for i in 0..self.n {
                            let mut row = Vec::with_capacity(self.n);
                            for j in 0..self.n {
                                let q = inv.entry(i, j).as_rational().unwrap();
                                match RingElement::from_rational(RingId::Dyadic, &q) {
                                    Ok(e) => row.push(e),
                                    Err(_) => return Ok(None),
                                }
                            }
                            rows.push(row);
                        }
                        Ok(Some(Matrix::from_rows(RingId::Dyadic, rows).unwrap()))
                    }
                }
            }
            RingId::Q | RingId::RatFun => Ok(self.field_inverse()),
        }
    }

    /// Gauss-Jordan over a field: every nonzero pivot is invertible.
    fn field_inverse(&self) -> Option<Matrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.ring, n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a.entry(r, col).is_zero())?;
            if pivot_row != col {
                for j in 0..n {
                    let tmp = a.entry(pivot_row, j).clone();
                    a.set(pivot_row, j, a.entry(col, j).clone());
                    a.set(col, j, tmp);
                    let tmp = inv.entry(pivot_row, j).clone();
                    inv.set(pivot_row, j, inv.entry(col, j).clone());
                    inv.set(col, j, tmp);
                }
            }
            let pinv = a
                .entry(col, col)
                .try_invert()
                .expect("nonzero element of a field");
            for j in 0..n {
                a.set(col, j, &pinv * a.entry(col, j));
                inv.set(col, j, &pinv * inv.entry(col, j));
            }
            for r in 0..n {
                if r == col || a.entry(r, col).is_zero() {
                    continue;
                }
                let factor = a.entry(r, col).clone();
                for j in 0..n {
                    let av = a.entry(r, j) - &(&factor * a.entry(col, j));
                    a.set(r, j, av);
                    let iv = inv.entry(r, j) - &(&factor * inv.entry(col, j));
                    inv.set(r, j, iv);
                }
            }
        }
        Some(inv)
    }

    /// Exact determinant over the commutative rings, by fraction-free
    /// elimination on a denominator-cleared copy.
    pub fn det(&self) -> Result<RingElement, MatrixError> {
        match self.ring {
            RingId::Skew => Err(MatrixError::Unsupported {
                ring: RingId::Skew,
                what: "determinant",
            }),
            RingId::Q | RingId::Dyadic => {
                let mut factor = BigRational::one();
                let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(self.n);
                for i in 0..self.n {
                    let mut lcm = BigInt::one();
                    for j in 0..self.n {
                        let q = self.entry(i, j).as_rational().unwrap();
                        lcm = lcm.lcm(q.denom());
                    }
                    factor *= BigRational::from_integer(lcm.clone());
                    rows.push(
                        (0..self.n)
                            .map(|j| {
                                let q = self.entry(i, j).as_rational().unwrap();
                                q.numer() * (&lcm / q.denom())
                            })
                            .collect(),
                    );
                }
                let d = bareiss_det(rows);
                let q = BigRational::from_integer(d) / factor;
                Ok(RingElement::from_rational(self.ring, &q)
                    .expect("determinant of a dyadic matrix is dyadic"))
            }
            RingId::RatFun => {
                let mut den_prod = Poly::one();
                let mut rows: Vec<Vec<Poly>> = Vec::with_capacity(self.n);
                for i in 0..self.n {
                    let mut lcm = Poly::one();
                    for j in 0..self.n {
                        let f = match self.entry(i, j) {
                            RingElement::RatFun(f) => f,
                            _ => unreachable!(),
                        };
                        let g = lcm.gcd(f.den());
                        lcm = lcm.mul(&f.den().div_exact(&g));
                    }
                    den_prod = den_prod.mul(&lcm);
                    rows.push(
                        (0..self.n)
                            .map(|j| {
                                let f = match self.entry(i, j) {
                                    RingElement::RatFun(f) => f,
                                    _ => unreachable!(),
                                };
                                f.num().mul(&lcm.div_exact(f.den()))
                            })
                            .collect(),
                    );
                }
                let d = bareiss_det(rows);
                Ok(RingElement::RatFun(RatFun::new(d, den_prod)))
            }
        }
    }
}

impl std::ops::Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{}", e))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {} [", self.n, self.n, self.ring)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                write!(f, "{}{}", self.entry(i, j), if j + 1 < self.n { ", " } else { "" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Elimination domains for the fraction-free determinant.
trait Elim: Clone {
    fn e_one() -> Self;
    fn e_is_zero(&self) -> bool;
    fn e_mul(&self, other: &Self) -> Self;
    fn e_sub(&self, other: &Self) -> Self;
    fn e_div_exact(&self, other: &Self) -> Self;
    fn e_neg(&self) -> Self;
}

impl Elim for BigInt {
    fn e_one() -> Self {
        One::one()
    }
    fn e_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn e_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn e_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn e_div_exact(&self, other: &Self) -> Self {
        let (q, r) = self.div_rem(other);
        debug_assert!(Zero::is_zero(&r), "inexact integer division in elimination");
        q
    }
    fn e_neg(&self) -> Self {
        -self
    }
}

impl Elim for Poly {
    fn e_one() -> Self {
        Poly::one()
    }
    fn e_is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn e_mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn e_sub(&self, other: &Self) -> Self {
        Poly::sub(self, other)
    }
    fn e_div_exact(&self, other: &Self) -> Self {
        Poly::div_exact(self, other)
    }
    fn e_neg(&self) -> Self {
        Poly::neg(self)
    }
}

/// Bareiss one-step fraction-free determinant; consumes the matrix.
fn bareiss_det<T: Elim>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::e_one();
    }
    let mut negate = false;
    let mut prev = T::e_one();
    for k in 0..n - 1 {
        if m[k][k].e_is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].e_is_zero()) {
                None => return m[k][k].e_sub(&m[k][k]), // a zero of T
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].e_mul(&m[k][k]).e_sub(&m[i][k].e_mul(&m[k][j]));
                m[i][j] = t.e_div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.e_neg()
    } else {
        d
    }
}

/// Exact integer determinant of a square matrix given as rows.
pub(crate) fn int_det(rows: Vec<Vec<BigInt>>) -> BigInt {
    bareiss_det(rows)
}

/// A matrix diag(d) * S(p) with positive unit diagonal, kept factored.
/// These are exactly the invertible elements of the nonnegative semigroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    diag: Vec<RingElement>,
    perm: Permutation,
}

impl MonomialMatrix {
    pub fn new(diag: Vec<RingElement>, perm: Permutation) -> Result<Self, MatrixError> {
        if diag.len() != perm.len() || diag.is_empty() {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} diagonal entries vs permutation of {}",
                diag.len(),
                perm.len()
            )));
        }
        for (i, d) in diag.iter().enumerate() {
            if d.sign() <= 0 {
                return Err(MatrixError::NotMonomial(format!(
                    "diagonal entry {} = {} is not positive",
                    i + 1,
                    d
                )));
            }
            if !d.is_unit() {
                return Err(MatrixError::NotMonomial(format!(
                    "diagonal entry {} = {} is not a unit",
                    i + 1,
                    d
                )));
            }
        }
        Ok(MonomialMatrix { diag, perm })
    }

    pub fn identity(ring: RingId, n: usize) -> Self {
        MonomialMatrix {
            diag: vec![RingElement::one(ring); n],
            perm: Permutation::identity(n),
        }
    }

    pub fn of_permutation(ring: RingId, p: &Permutation) -> Self {
        MonomialMatrix {
            diag: vec![RingElement::one(ring); p.len()],
            perm: p.clone(),
        }
    }

    pub fn of_diagonal(diag: Vec<RingElement>) -> Result<Self, MatrixError> {
        let n = diag.len();
        MonomialMatrix::new(diag, Permutation::identity(n))
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn ring(&self) -> RingId {
        self.diag[0].ring()
    }

    pub fn diag(&self) -> &[RingElement] {
        &self.diag
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn to_matrix(&self) -> Matrix {
        let ring = self.ring();
        let zero = RingElement::zero(ring);
        Matrix::from_fn(ring, self.n(), |i, j| {
            if self.perm.apply(i) == j {
                self.diag[i].clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity() && self.diag.iter().all(|d| d.is_one())
    }

    /// (d1, p1)(d2, p2) = (d1_i * d2_(p1(i)), p1 then p2); the diagonal
    /// product order matters over SKEW.
    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.n(), other.n());
        let diag = (0..self.n())
            .map(|i| &self.diag[i] * &other.diag[self.perm.apply(i)])
            .collect();
        MonomialMatrix {
            diag,
            perm: self.perm.then(&other.perm),
        }
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let pinv = self.perm.inverse();
        let diag = (0..self.n())
            .map(|i| {
                self.diag[pinv.apply(i)]
                    .try_invert()
                    .expect("monomial diagonal entries are units")
            })
            .collect();
        MonomialMatrix { diag, perm: pinv }
    }

    pub fn pow(&self, k: u64) -> MonomialMatrix {
        let mut acc = MonomialMatrix::identity(self.ring(), self.n());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// M X M^-1 on a dense matrix in O(n^2) entry operations:
    /// result_(i,j) = d_i * X_(p(i), p(j)) * d_j^-1, in that order.
    pub fn conjugate(&self, x: &Matrix) -> Matrix {
        assert_eq!(self.n(), x.n());
        assert_eq!(self.ring(), x.ring());
        let dinv: Vec<RingElement> = self
            .diag
            .iter()
            .map(|d| d.try_invert().expect("monomial diagonal entries are units"))
            .collect();
        Matrix::from_fn(x.ring(), x.n(), |i, j| {
            let inner = x.entry(self.perm.apply(i), self.perm.apply(j));
            if inner.is_zero() {
                return RingElement::zero(x.ring());
            }
            &(&self.diag[i] * inner) * &dinv[j]
        })
    }
}

/// A monomial involution diag(t) * S(sigma) with sigma^2 = id and
/// t_i * t_(sigma(i)) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionData {
    pub t: Vec<RingElement>,
    pub sigma: Permutation,
}

impl InvolutionData {
    pub fn to_matrix(&self) -> Matrix {
        MonomialMatrix {
            diag: self.t.clone(),
            perm: self.sigma.clone(),
        }
        .to_matrix()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(ring: RingId, n: i64, d: i64) -> RingElement {
        RingElement::from_ratio(ring, n, d).unwrap()
    }

    fn q(n: i64, d: i64) -> RingElement {
        el(RingId::Q, n, d)
    }

    #[test]
    fn permutation_matrix_convention() {
        // S(p) has row i's one in column p(i)
        let p = Permutation::cycle(3, &[0, 1, 2]); // 0->1->2->0
        let s = Matrix::permutation(RingId::Q, &p);
        assert!(s.entry(0, 1).is_one());
        assert!(s.entry(1, 2).is_one());
        assert!(s.entry(2, 0).is_one());
        // S(a) S(b) = S(a then b)
        let a = Permutation::transposition(3, 0, 1);
        let prod = &Matrix::permutation(RingId::Q, &a) * &s;
        assert_eq!(prod, Matrix::permutation(RingId::Q, &a.then(&p)));
    }

    #[test]
    fn diagonal_conjugation_indices() {
        // S(p)^-1 diag(d) S(p) = diag(d_(p^-1(i)))
        let p = Permutation::cycle(4, &[0, 2, 3]);
        let d: Vec<RingElement> = (1..=4).map(|k| q(k, 1)).collect();
        let s = Matrix::permutation(RingId::Q, &p);
        let sinv = Matrix::permutation(RingId::Q, &p.inverse());
        let conj = &(&sinv * &Matrix::diagonal(d.clone())) * &s;
        let pinv = p.inverse();
        let expected =
            Matrix::diagonal((0..4).map(|i| d[pinv.apply(i)].clone()).collect());
        assert_eq!(conj, expected);
    }

    #[test]
    fn monomial_recognition_roundtrip() {
        let m = MonomialMatrix::new(
            vec![q(2, 1), q(1, 2), q(3, 1)],
            Permutation::cycle(3, &[0, 1, 2]),
        )
        .unwrap();
        let dense = m.to_matrix();
        assert_eq!(dense.monomial_recognize().unwrap(), m);
    }

    #[test]
    fn monomial_rejections() {
        // nonneg but a row with two entries
        let b12 = Matrix::transvection(RingId::Q, 3, 0, 1, &q(1, 1));
        assert!(matches!(
            b12.monomial_recognize(),
            Err(MatrixError::NotMonomial(_))
        ));
        // negative entry
        let neg = Matrix::diagonal(vec![q(-1, 1), q(1, 1)]);
        assert!(neg.monomial_recognize().is_err());
        // dyadic non-unit on the diagonal
        let d3 = Matrix::diagonal(vec![el(RingId::Dyadic, 3, 1), el(RingId::Dyadic, 1, 1)]);
        assert!(d3.monomial_recognize().is_err());
        // the same matrix over Q is fine
        assert!(Matrix::diagonal(vec![q(3, 1), q(1, 1)])
            .monomial_recognize()
            .is_ok());
    }

    #[test]
    fn monomial_product_and_inverse_match_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..=5);
            let mk = |rng: &mut ChaCha8Rng| {
                let diag: Vec<RingElement> = (0..n)
                    .map(|_| {
                        let choices = [q(1, 1), q(2, 1), q(1, 2), q(3, 2), q(5, 1)];
                        choices[rng.gen_range(0..choices.len())].clone()
                    })
                    .collect();
                MonomialMatrix::new(diag, Permutation::random(n, rng)).unwrap()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let prod = a.mul(&b);
            assert_eq!(prod.to_matrix(), &a.to_matrix() * &b.to_matrix());
            let inv = a.inverse();
            assert!(a.mul(&inv).is_identity());
            assert!(inv.mul(&a).is_identity());
        }
    }

    #[test]
    fn skew_monomial_inverse_keeps_order() {
        // diag(s, 1) * S((1 2)) over SKEW, inverted and multiplied back
        let s = RingElement::var_s(RingId::Skew).unwrap();
        let t = RingElement::var_t(RingId::Skew).unwrap();
        let st = s.checked_mul(&t).unwrap();
        let m = MonomialMatrix::new(
            vec![st, RingElement::one(RingId::Skew)],
            Permutation::transposition(2, 0, 1),
        )
        .unwrap();
        assert!(m.mul(&m.inverse()).is_identity());
        assert!(m.inverse().mul(&m).is_identity());
        let dense = m.to_matrix();
        let dense_inv = m.inverse().to_matrix();
        assert!((&dense * &dense_inv).is_identity());
    }

    #[test]
    fn involution_classification() {
        // diag(2, 1/2, 1) * S((1 2)) squares to the identity
        let m = MonomialMatrix::new(
            vec![q(2, 1), q(1, 2), q(1, 1)],
            Permutation::transposition(3, 0, 1),
        )
        .unwrap();
        let dense = m.to_matrix();
        assert!((&dense * &dense).is_identity());
        let inv = dense.involution_classify().unwrap();
        assert_eq!(inv.t, vec![q(2, 1), q(1, 2), q(1, 1)]);
        assert_eq!(inv.sigma, Permutation::transposition(3, 0, 1));
        assert_eq!(inv.to_matrix(), dense);

        // diag(2, 1, 1) alone is monomial but squares to diag(4, 1, 1)
        let not = Matrix::diagonal(vec![q(2, 1), q(1, 1), q(1, 1)]);
        assert!(matches!(
            not.involution_classify(),
            Err(MatrixError::NotInvolution(_))
        ));
        // 3-cycle permutation matrix: monomial, but sigma^2 != id
        let c3 = Matrix::permutation(RingId::Q, &Permutation::cycle(3, &[0, 1, 2]));
        assert!(c3.involution_classify().is_err());
    }

    #[test]
    fn involution_condition_matches_square_on_randoms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen_both = (false, false);
        for _ in 0..200 {
            let n = rng.gen_range(2..=5);
            let diag: Vec<RingElement> = (0..n)
                .map(|_| {
                    let choices = [q(1, 1), q(2, 1), q(1, 2), q(3, 1), q(1, 3)];
                    choices[rng.gen_range(0..choices.len())].clone()
                })
                .collect();
            let m = MonomialMatrix::new(diag, Permutation::random(n, &mut rng)).unwrap();
            let dense = m.to_matrix();
            let squares = (&dense * &dense).is_identity();
            let classified = dense.involution_classify().is_ok();
            assert_eq!(squares, classified);
            if squares {
                seen_both.0 = true;
            } else {
                seen_both.1 = true;
            }
        }
        assert!(seen_both.1, "random sample should contain non-involutions");
    }

    #[test]
    fn inverse_of_transvection_has_negative_entry() {
        let b = Matrix::transvection(RingId::Q, 3, 0, 1, &q(1, 1));
        let inv = b.inverse().unwrap().unwrap();
        assert_eq!(inv.entry(0, 1), &q(-1, 1));
        assert!(!inv.is_nonnegative());
        assert!((&b * &inv).is_identity());
    }

    #[test]
    fn dyadic_inverse_exists_only_for_unit_determinant() {
        // diag(2, 1): unit determinant, inverse exists over DYADIC
        let good = Matrix::diagonal(vec![el(RingId::Dyadic, 2, 1), el(RingId::Dyadic, 1, 1)]);
        let inv = good.inverse().unwrap().unwrap();
        assert!((&good * &inv).is_identity());
        // [[1, 1], [1, 2]] has determinant 1: invertible over DYADIC
        let rows = vec![
            vec![el(RingId::Dyadic, 1, 1), el(RingId::Dyadic, 1, 1)],
            vec![el(RingId::Dyadic, 1, 1), el(RingId::Dyadic, 2, 1)],
        ];
        let m = Matrix::from_rows(RingId::Dyadic, rows).unwrap();
        assert!(m.inverse().unwrap().is_some());
        // diag(3, 1): invertible over Q but 1/3 is not dyadic
        let bad = Matrix::diagonal(vec![el(RingId::Dyadic, 3, 1), el(RingId::Dyadic, 1, 1)]);
        assert_eq!(bad.inverse().unwrap(), None);
        // singular matrix
        let sing = Matrix::from_rows(
            RingId::Q,
            vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]],
        )
        .unwrap();
        assert_eq!(sing.inverse().unwrap(), None);
    }

    #[test]
    fn ratfun_inverse() {
        let s = RingElement::var_s(RingId::RatFun).unwrap();
        let one = RingElement::one(RingId::RatFun);
        let m = Matrix::from_rows(
            RingId::RatFun,
            vec![
                vec![s.clone(), one.clone()],
                vec![one.clone(), s.clone()],
            ],
        )
        .unwrap();
        let inv = m.inverse().unwrap().unwrap();
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn det_matches_cofactor_expansion_on_randoms() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let n = rng.gen_range(1..=4);
            let m = Matrix::from_fn(RingId::Q, n, |_, _| {
                q(rng.gen_range(-4..=4), rng.gen_range(1..=3))
            });
            assert_eq!(m.det().unwrap(), naive_det(&m));
        }
    }

    fn naive_det(m: &Matrix) -> RingElement {
        let n = m.n();
        if n == 1 {
            return m.entry(0, 0).clone();
        }
        let mut acc = RingElement::zero(m.ring());
        for j in 0..n {
            let minor = Matrix::from_fn(m.ring(), n - 1, |r, c| {
                m.entry(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let term = m.entry(0, j) * &naive_det(&minor);
            acc = if j % 2 == 0 {
                &acc + &term
            } else {
                &acc - &term
            };
        }
        acc
    }

    #[test]
    fn det_over_ratfun_with_denominators() {
        let s = RingElement::var_s(RingId::RatFun).unwrap();
        let sinv = s.try_invert().unwrap();
        let one = RingElement::one(RingId::RatFun);
        // [[1/s, 1], [1, s]] has determinant 1 - s... wait: (1/s)*s - 1 = 0
        let m = Matrix::from_rows(
            RingId::RatFun,
            vec![vec![sinv, one.clone()], vec![one.clone(), s.clone()]],
        )
        .unwrap();
        assert!(m.det().unwrap().is_zero());
        // monomial determinant is the signed diagonal product
        let mono = MonomialMatrix::new(
            vec![s.clone(), one.clone(), s.clone()],
            Permutation::transposition(3, 0, 1),
        )
        .unwrap();
        let d = mono.to_matrix().det().unwrap();
        let s2 = s.checked_mul(&s).unwrap();
        assert_eq!(d, s2.neg());
    }

    #[test]
    fn monomial_conjugation_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let n = rng.gen_range(2..=5);
            let diag: Vec<RingElement> = (0..n)
                .map(|_| {
                    let c = [q(1, 1), q(2, 1), q(1, 2), q(3, 1)];
                    c[rng.gen_range(0..c.len())].clone()
                })
                .collect();
            let m = MonomialMatrix::new(diag, Permutation::random(n, &mut rng)).unwrap();
            let x = Matrix::from_fn(RingId::Q, n, |_, _| q(rng.gen_range(0..=3), 1));
            let fast = m.conjugate(&x);
            let dense = &(&m.to_matrix() * &x) * &m.inverse().to_matrix();
            assert_eq!(fast, dense);
        }
    }

    #[test]
    fn corner_stabilizer_membership() {
        let mut m = Matrix::identity(RingId::Q, 3);
        m.set(0, 1, q(5, 1));
        assert!(m.in_corner_stabilizer());
        m.set(0, 2, q(1, 1));
        assert!(!m.in_corner_stabilizer());
        // corner must be a positive unit
        let d = Matrix::diagonal(vec![
            el(RingId::Dyadic, 1, 1),
            el(RingId::Dyadic, 1, 1),
            el(RingId::Dyadic, 3, 1),
        ]);
        assert!(!d.in_corner_stabilizer());
    }

    #[test]
    fn finite_order_of_monomials() {
        let c = Matrix::permutation(RingId::Q, &Permutation::cycle(4, &[0, 1, 2, 3]));
        assert!(c.has_finite_order(4).unwrap());
        assert!(!c.has_finite_order(3).unwrap());
        let d = Matrix::diagonal(vec![q(2, 1), q(1, 1)]);
        assert!(!d.has_finite_order(50).unwrap());
        let b = Matrix::transvection(RingId::Q, 2, 0, 1, &q(1, 1));
        assert!(matches!(
            b.has_finite_order(5),
            Err(MatrixError::NotMonomial(_))
        ));
    }

    #[test]
    fn commutation() {
        let d = Matrix::diagonal(vec![q(2, 1), q(4, 1), q(8, 1)]);
        let diag2 = Matrix::diagonal(vec![q(3, 1), q(5, 1), q(7, 1)]);
        assert!(d.commutes(&diag2));
        let s = Matrix::permutation(RingId::Q, &Permutation::transposition(3, 0, 1));
        assert!(!d.commutes(&s));
    }
}
