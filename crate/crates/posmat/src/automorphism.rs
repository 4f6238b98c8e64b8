//! Standard automorphism families of the nonnegative matrix semigroup and
//! the oracle wrapper the decomposition pipeline works against.
//!
//! Three building blocks compose into every supported automorphism:
//!
//! * inner conjugation by an invertible nonnegative (monomial) matrix;
//! * an entrywise ring map from the small catalog (identity everywhere,
//!   affine s -> a s + b on rational functions, s -> a s on the twisted
//!   ring where a shift would break the twist relation);
//! * a central homothety X -> gamma(|det X|) * X driven by a finite
//!   prime-to-value table, extended multiplicatively.
//!
//! A homothety is only invertible when its exponent action on
//! determinants is; the certificate is unimodularity of I + n*Gamma over
//! the touched primes, and carries an explicit inverse.

use crate::matrix::{int_det, Matrix, MatrixError, MonomialMatrix};
use crate::ring::{RingElement, RingError, RingId};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomorphismError {
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn bad(msg: impl Into<String>) -> AutomorphismError {
    AutomorphismError::InvalidTriple(msg.into())
}

// ---------------------------------------------------------------------------
// small prime utilities

const FACTOR_CAP: u64 = 1_000_000;

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a nonzero integer.
fn vp_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        n = q;
    }
}

/// p-adic valuation of a nonzero rational.
fn vp(q: &BigRational, p: u64) -> i64 {
    vp_int(q.numer(), p) - vp_int(q.denom(), p)
}

/// Full factorization of a positive rational by trial division; None when
/// a factor above the cap survives.
fn factor_small(q: &BigRational) -> Option<Vec<(u64, i64)>> {
    let mut out: BTreeMap<u64, i64> = BTreeMap::new();
    for (int, sign) in [(q.numer().clone(), 1i64), (q.denom().clone(), -1i64)] {
        let mut n = int.abs();
        let mut p = 2u64;
        while n > BigInt::one() {
            if p > FACTOR_CAP {
                return None;
            }
            let pb = BigInt::from(p);
            if &pb * &pb > n {
                // n itself is prime
                let pn = n.to_u64()?;
                if pn > FACTOR_CAP {
                    return None;
                }
                *out.entry(pn).or_insert(0) += sign;
                break;
            }
            let mut v = 0i64;
            loop {
                let (d, r) = n.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                n = d;
                v += 1;
            }
            if v != 0 {
                *out.entry(p).or_insert(0) += sign * v;
            }
            p += 1;
        }
    }
    Some(out.into_iter().filter(|&(_, e)| e != 0).collect())
}

// ---------------------------------------------------------------------------
// entrywise ring maps

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingMapVariant {
    Identity,
    /// s -> a*s + b with a a positive rational; b must vanish over the
    /// twisted ring, where a shift does not commute with the twist.
    Affine { a: BigRational, b: BigRational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMapDescriptor {
    ring: RingId,
    variant: RingMapVariant,
}

impl RingMapDescriptor {
    pub fn identity(ring: RingId) -> Self {
        RingMapDescriptor {
            ring,
            variant: RingMapVariant::Identity,
        }
    }

    pub fn affine(ring: RingId, a: BigRational, b: BigRational) -> Result<Self, AutomorphismError> {
        if !a.is_positive() {
            return Err(bad(format!("affine scale {} is not positive", a)));
        }
        match ring {
            RingId::RatFun => {}
            RingId::Skew => {
                if !b.is_zero() {
                    return Err(bad(
                        "affine shift breaks the twist relation over SKEW; b must be 0",
                    ));
                }
            }
            _ => {
                return Err(bad(format!(
                    "only the identity ring map exists over {}",
                    ring
                )))
            }
        }
        Ok(Self::affine_normalized(ring, a, b))
    }

    // collapse s -> 1*s + 0 to the identity variant so fitted and composed
    // descriptors compare structurally
    fn affine_normalized(ring: RingId, a: BigRational, b: BigRational) -> RingMapDescriptor {
        if a.is_one() && b.is_zero() {
            return RingMapDescriptor::identity(ring);
        }
        RingMapDescriptor {
            ring,
            variant: RingMapVariant::Affine { a, b },
        }
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn variant(&self) -> &RingMapVariant {
        &self.variant
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.variant, RingMapVariant::Identity)
    }

    pub fn apply(&self, x: &RingElement) -> RingElement {
        assert_eq!(x.ring(), self.ring, "ring map applied across rings");
        match (&self.variant, x) {
            (RingMapVariant::Identity, _) => x.clone(),
            (RingMapVariant::Affine { a, b }, RingElement::RatFun(f)) => {
                RingElement::RatFun(f.substitute_affine(a, b))
            }
            (RingMapVariant::Affine { a, .. }, RingElement::Skew(f)) => {
                RingElement::Skew(f.substitute_s_scale(a))
            }
            (RingMapVariant::Affine { .. }, _) => {
                unreachable!("affine maps only validate over RATFUN and SKEW")
            }
        }
    }

    pub fn apply_matrix(&self, x: &Matrix) -> Matrix {
        if self.is_identity() {
            return x.clone();
        }
        x.map_entries(|e| self.apply(e))
    }

    pub fn apply_monomial(&self, m: &MonomialMatrix) -> MonomialMatrix {
        MonomialMatrix::new(
            m.diag().iter().map(|d| self.apply(d)).collect(),
            m.perm().clone(),
        )
        .expect("catalog ring maps preserve positive units")
    }

    pub fn inverse(&self) -> RingMapDescriptor {
        match &self.variant {
            RingMapVariant::Identity => self.clone(),
            RingMapVariant::Affine { a, b } => {
                Self::affine_normalized(self.ring, a.recip(), -(b / a))
            }
        }
    }

    /// self after other, as a catalog map. Composing substitutions is
    /// contravariant: applying s -> a2 s + b2 and then s -> a1 s + b1
    /// substitutes the second map into the first map's output,
    /// giving s -> a1 a2 s + a2 b1 + b2.
    pub fn compose_after(&self, other: &RingMapDescriptor) -> RingMapDescriptor {
        assert_eq!(self.ring, other.ring);
        match (&self.variant, &other.variant) {
            (RingMapVariant::Identity, _) => other.clone(),
            (_, RingMapVariant::Identity) => self.clone(),
            (
                RingMapVariant::Affine { a: a1, b: b1 },
                RingMapVariant::Affine { a: a2, b: b2 },
            ) => Self::affine_normalized(self.ring, a1 * a2, a2 * b1 + b2),
        }
    }

    /// Value at the generator s, when the ring has one.
    pub fn image_of_s(&self) -> Result<RingElement, AutomorphismError> {
        let s = RingElement::var_s(self.ring)?;
        Ok(self.apply(&s))
    }
}

impl fmt::Display for RingMapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.variant {
            RingMapVariant::Identity => write!(f, "identity"),
            RingMapVariant::Affine { a, b } => write!(f, "s -> {}*s + {}", a, b),
        }
    }
}

// ---------------------------------------------------------------------------
// central homotheties

/// gamma as a finite table prime -> positive rational, extended
/// multiplicatively; primes off the table map to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralHomDescriptor {
    ring: RingId,
    gamma: BTreeMap<u64, BigRational>,
}

impl CentralHomDescriptor {
    pub fn trivial(ring: RingId) -> Self {
        CentralHomDescriptor {
            ring,
            gamma: BTreeMap::new(),
        }
    }

    pub fn new(
        ring: RingId,
        gamma: BTreeMap<u64, BigRational>,
    ) -> Result<Self, AutomorphismError> {
        let gamma: BTreeMap<u64, BigRational> =
            gamma.into_iter().filter(|(_, v)| !v.is_one()).collect();
        for (&p, v) in &gamma {
            if !is_prime(p) {
                return Err(bad(format!("gamma key {} is not prime", p)));
            }
            if !v.is_positive() {
                return Err(bad(format!("gamma({}) = {} is not positive", p, v)));
            }
            // the value must be a positive central unit of the ring
            RingElement::from_rational(ring, v).map_err(|_| {
                bad(format!("gamma({}) = {} does not lie in {}", p, v, ring))
            })?;
            if ring == RingId::Dyadic {
                let d = crate::ring::Dyadic::from_rational(v)
                    .expect("validated dyadic value");
                if !d.num().is_one() {
                    return Err(bad(format!(
                        "gamma({}) = {} is not a unit of DYADIC",
                        p, v
                    )));
                }
            }
        }
        if ring == RingId::Skew && !gamma.is_empty() {
            return Err(bad(
                "nontrivial central homotheties are unsupported over SKEW",
            ));
        }
        Ok(CentralHomDescriptor { ring, gamma })
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn gamma(&self) -> &BTreeMap<u64, BigRational> {
        &self.gamma
    }

    pub fn is_trivial(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Multiplicative extension to positive rationals.
    pub fn apply_rational(&self, q: &BigRational) -> BigRational {
        debug_assert!(q.is_positive());
        let mut acc = BigRational::one();
        for (&p, v) in &self.gamma {
            let e = vp(q, p);
            if e != 0 {
                acc *= pow_rational(v, e);
            }
        }
        acc
    }

    /// Keys plus every prime appearing in a value.
    pub fn touched_primes(&self) -> Result<Vec<u64>, AutomorphismError> {
        let mut set: std::collections::BTreeSet<u64> = self.gamma.keys().copied().collect();
        for v in self.gamma.values() {
            let factors = factor_small(v).ok_or_else(|| {
                bad(format!("gamma value {} has a prime factor above {}", v, FACTOR_CAP))
            })?;
            set.extend(factors.into_iter().map(|(p, _)| p));
        }
        Ok(set.into_iter().collect())
    }

    /// I + n*Gamma over the touched primes, Gamma[q][p] = v_q(gamma(p)).
    fn exponent_matrix(&self, n: usize) -> Result<(Vec<u64>, Vec<Vec<BigInt>>), AutomorphismError> {
        let primes = self.touched_primes()?;
        let k = primes.len();
        let mut m = vec![vec![BigInt::zero(); k]; k];
        for (col, &p) in primes.iter().enumerate() {
            if let Some(v) = self.gamma.get(&p) {
                for (row, &q) in primes.iter().enumerate() {
                    m[row][col] = BigInt::from(vp(v, q)) * BigInt::from(n);
                }
            }
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += BigInt::one();
        }
        Ok((primes, m))
    }

    /// The invertibility certificate: det(I + n*Gamma) = +-1, which makes
    /// the exponent action on determinants a bijection of the lattice.
    pub fn is_certified_invertible(&self, n: usize) -> Result<bool, AutomorphismError> {
        if self.is_trivial() {
            return Ok(true);
        }
        let (_, m) = self.exponent_matrix(n)?;
        let d = int_det(m);
        Ok(d == BigInt::one() || d == -BigInt::one())
    }

    /// gamma(|det X|), embedded as a central constant of the ring. The
    /// growth content of the determinant feeds the prime table, so this
    /// also covers rational-function determinants.
    pub fn lambda_of(&self, x: &Matrix) -> Result<RingElement, AutomorphismError> {
        if self.is_trivial() {
            return Ok(RingElement::one(x.ring()));
        }
        let det = x.det()?;
        if det.is_zero() {
            return Err(bad("homothety applied to a singular matrix"));
        }
        let content = det.abs().content()?;
        let value = self.apply_rational(&content);
        Ok(RingElement::from_rational(x.ring(), &value)
            .expect("gamma values were validated to lie in the ring"))
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix, AutomorphismError> {
        if self.is_trivial() {
            return Ok(x.clone());
        }
        let lam = self.lambda_of(x)?;
        Ok(x.left_scale(&lam))
    }

    /// Explicit inverse on a value Y = gamma(|det X|) X: solve the
    /// exponent system (I + n*Gamma) e = e' for the original determinant
    /// exponents and divide the scale back out.
    pub fn invert_apply(&self, n: usize, y: &Matrix) -> Result<Matrix, AutomorphismError> {
        if self.is_trivial() {
            return Ok(y.clone());
        }
        let det = y.det()?;
        if det.is_zero() {
            return Err(bad("homothety inverse applied to a singular matrix"));
        }
        let content = det.abs().content()?;
        let (primes, m) = self.exponent_matrix(n)?;
        let dm = int_det(m.clone());
        if !(dm == BigInt::one() || dm == -BigInt::one()) {
            return Err(bad("homothety is not certified invertible"));
        }
        let eprime: Vec<BigInt> = primes.iter().map(|&p| BigInt::from(vp(&content, p))).collect();
        // Cramer's rule; the determinant is a unit so solutions are integral
        let k = primes.len();
        let mut e = Vec::with_capacity(k);
        for i in 0..k {
            let mut mi = m.clone();
            for (row, val) in eprime.iter().enumerate() {
                mi[row][i] = val.clone();
            }
            let di = int_det(mi);
            let (q, r) = di.div_rem(&dm);
            debug_assert!(r.is_zero());
            e.push(q);
        }
        // gamma(d) from the solved exponents of the original determinant
        let mut gamma_d = BigRational::one();
        for (idx, &p) in primes.iter().enumerate() {
            if let Some(v) = self.gamma.get(&p) {
                let exp = e[idx].to_i64().ok_or_else(|| bad("exponent overflow"))?;
                gamma_d *= pow_rational(v, exp);
            }
        }
        let scale = RingElement::from_rational(y.ring(), &gamma_d.recip())
            .expect("gamma values were validated to lie in the ring");
        Ok(y.left_scale(&scale))
    }

    /// self applied after an inner homothety, collapsed to one table:
    /// gamma'(p) = self(inner(p))^n * self(p) * inner(p).
    pub fn compose_after(
        &self,
        inner: &CentralHomDescriptor,
        n: usize,
    ) -> Result<CentralHomDescriptor, AutomorphismError> {
        assert_eq!(self.ring, inner.ring);
        let mut keys: std::collections::BTreeSet<u64> = self.gamma.keys().copied().collect();
        keys.extend(inner.gamma.keys().copied());
        let mut table = BTreeMap::new();
        for &p in &keys {
            let pq = BigRational::from_integer(BigInt::from(p));
            let inner_p = inner
                .gamma
                .get(&p)
                .cloned()
                .unwrap_or_else(BigRational::one);
            let self_p = self.gamma.get(&p).cloned().unwrap_or_else(BigRational::one);
            let _ = pq;
            let value = pow_rational(&self.apply_rational(&inner_p), n as i64) * self_p * inner_p;
            if !value.is_one() {
                table.insert(p, value);
            }
        }
        CentralHomDescriptor::new(self.ring, table)
    }
}

fn pow_rational(base: &BigRational, exp: i64) -> BigRational {
    let mag = num_traits::pow::pow(base.clone(), exp.unsigned_abs() as usize);
    if exp >= 0 {
        mag
    } else {
        mag.recip()
    }
}

impl fmt::Display for CentralHomDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .gamma
            .iter()
            .map(|(p, v)| format!("{} -> {}", p, v))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

// ---------------------------------------------------------------------------
// standard triples

/// (M, c, lambda): inner conjugation by M after entrywise c after the
/// homothety. Over the commutative rings the triple is unique up to
/// scaling M by a central positive unit.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardTriple {
    pub m: MonomialMatrix,
    pub c: RingMapDescriptor,
    pub lambda: CentralHomDescriptor,
}

impl StandardTriple {
    pub fn identity(ring: RingId, n: usize) -> Self {
        StandardTriple {
            m: MonomialMatrix::identity(ring, n),
            c: RingMapDescriptor::identity(ring),
            lambda: CentralHomDescriptor::trivial(ring),
        }
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn ring(&self) -> RingId {
        self.m.ring()
    }

    pub fn validate(&self, n: usize, ring: RingId) -> Result<(), AutomorphismError> {
        if self.m.n() != n {
            return Err(bad(format!(
                "inner part is {}x{}, expected {}x{}",
                self.m.n(),
                self.m.n(),
                n,
                n
            )));
        }
        if self.m.ring() != ring || self.c.ring() != ring || self.lambda.ring() != ring {
            return Err(bad("triple parts disagree on the ring"));
        }
        if !self.lambda.is_certified_invertible(n)? {
            return Err(bad(
                "homothety fails the unimodularity certificate, so it is not invertible",
            ));
        }
        Ok(())
    }

    /// M * c(lambda(X) X) * M^-1.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix, AutomorphismError> {
        let scaled = self.lambda.apply(x)?;
        let mapped = self.c.apply_matrix(&scaled);
        Ok(self.m.conjugate(&mapped))
    }

    /// Over a commutative ring the inner part may be scaled by a central
    /// positive unit; pin the first diagonal entry to 1.
    pub fn canonicalize(&self) -> StandardTriple {
        if !self.ring().is_commutative() {
            return self.clone();
        }
        let d0 = &self.m.diag()[0];
        if d0.is_one() {
            return self.clone();
        }
        let inv = d0.try_invert().expect("monomial diagonal entries are units");
        let diag = self.m.diag().iter().map(|d| &inv * d).collect();
        StandardTriple {
            m: MonomialMatrix::new(diag, self.m.perm().clone())
                .expect("scaling by a positive unit preserves monomials"),
            c: self.c.clone(),
            lambda: self.lambda.clone(),
        }
    }

    /// Wrap one more primitive part around the outside of this triple,
    /// keeping the normal form. An outer homothety over RATFUN only
    /// commutes past an affine map when gamma fixes the scale factor.
    pub fn fold_outer(&self, part: &OraclePart) -> Result<StandardTriple, AutomorphismError> {
        let n = self.n();
        match part {
            OraclePart::Inner(mm) => Ok(StandardTriple {
                m: mm.mul(&self.m),
                c: self.c.clone(),
                lambda: self.lambda.clone(),
            }),
            OraclePart::RingMap(y) => Ok(StandardTriple {
                m: y.apply_monomial(&self.m),
                c: y.compose_after(&self.c),
                lambda: self.lambda.clone(),
            }),
            OraclePart::Homothety(g) => {
                if let RingMapVariant::Affine { a, .. } = self.c.variant() {
                    if !g.apply_rational(a).is_one() {
                        return Err(bad(format!(
                            "outer homothety does not commute past s -> {}*s + ..: gamma({}) != 1",
                            a, a
                        )));
                    }
                }
                Ok(StandardTriple {
                    m: self.m.clone(),
                    c: self.c.clone(),
                    lambda: g.compose_after(&self.lambda, n)?,
                })
            }
            OraclePart::Flip | OraclePart::Transpose => {
                Err(bad("fault-injection parts have no standard form"))
            }
        }
    }

    /// self after other, as one triple.
    pub fn compose_after(&self, other: &StandardTriple) -> Result<StandardTriple, AutomorphismError> {
        other
            .fold_outer(&OraclePart::Homothety(self.lambda.clone()))?
            .fold_outer(&OraclePart::RingMap(self.c.clone()))?
            .fold_outer(&OraclePart::Inner(self.m.clone()))
    }
}

// ---------------------------------------------------------------------------
// oracles

/// A primitive layer of an oracle. Flip and Transpose are deliberate
/// faults used to exercise rejection paths: Flip transposes everything
/// except monomial matrices, Transpose transposes everything (an
/// antiautomorphism, not an automorphism).
#[derive(Clone, Debug, PartialEq)]
pub enum OraclePart {
    Inner(MonomialMatrix),
    RingMap(RingMapDescriptor),
    Homothety(CentralHomDescriptor),
    Flip,
    Transpose,
}

impl OraclePart {
    pub fn apply(&self, x: &Matrix) -> Result<Matrix, AutomorphismError> {
        Ok(match self {
            OraclePart::Inner(m) => m.conjugate(x),
            OraclePart::RingMap(c) => c.apply_matrix(x),
            OraclePart::Homothety(g) => g.apply(x)?,
            OraclePart::Flip => {
                if x.monomial_recognize().is_ok() {
                    x.clone()
                } else {
                    x.transpose()
                }
            }
            OraclePart::Transpose => x.transpose(),
        })
    }

    fn validate(&self, n: usize, ring: RingId) -> Result<(), AutomorphismError> {
        match self {
            OraclePart::Inner(m) => {
                if m.n() != n || m.ring() != ring {
                    return Err(bad("inner part has the wrong shape"));
                }
            }
            OraclePart::RingMap(c) => {
                if c.ring() != ring {
                    return Err(bad("ring map part has the wrong ring"));
                }
            }
            OraclePart::Homothety(g) => {
                if g.ring() != ring {
                    return Err(bad("homothety part has the wrong ring"));
                }
            }
            OraclePart::Flip | OraclePart::Transpose => {}
        }
        Ok(())
    }
}

/// Opaque automorphism candidate: a function on matrices plus a thread-safe
/// query counter. The pipeline can only call `query`.
pub struct AutomorphismOracle {
    n: usize,
    ring: RingId,
    f: Box<dyn Fn(&Matrix) -> Matrix + Send + Sync>,
    queries: AtomicU64,
}

impl AutomorphismOracle {
    pub fn new<F>(n: usize, ring: RingId, f: F) -> Self
    where
        F: Fn(&Matrix) -> Matrix + Send + Sync + 'static,
    {
        AutomorphismOracle {
            n,
            ring,
            f: Box::new(f),
            queries: AtomicU64::new(0),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn query(&self, x: &Matrix) -> Matrix {
        assert_eq!(x.n(), self.n, "oracle query with wrong dimension");
        assert_eq!(x.ring(), self.ring, "oracle query with wrong ring");
        self.queries.fetch_add(1, Ordering::Relaxed);
        (self.f)(x)
    }

    pub fn query_count(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }
}

impl fmt::Debug for AutomorphismOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AutomorphismOracle(n = {}, ring = {}, queries = {})",
            self.n,
            self.ring,
            self.query_count()
        )
    }
}

/// Oracle computing a validated standard triple.
pub fn oracle_from_triple(triple: &StandardTriple) -> Result<AutomorphismOracle, AutomorphismError> {
    let n = triple.n();
    let ring = triple.ring();
    triple.validate(n, ring)?;
    let t = triple.clone();
    Ok(AutomorphismOracle::new(n, ring, move |x| {
        t.apply(x).expect("validated triple applies to semigroup members")
    }))
}

/// Oracle composing arbitrary parts right to left (the last part is
/// applied first). Accepts fault parts; performs only shape validation.
pub fn oracle_from_parts(
    n: usize,
    ring: RingId,
    parts: Vec<OraclePart>,
) -> Result<AutomorphismOracle, AutomorphismError> {
    for p in &parts {
        p.validate(n, ring)?;
        if let OraclePart::Homothety(g) = p {
            if !g.is_certified_invertible(n)? {
                return Err(bad("homothety part fails the invertibility certificate"));
            }
        }
    }
    Ok(AutomorphismOracle::new(n, ring, move |x| {
        let mut acc = x.clone();
        for p in parts.iter().rev() {
            acc = p.apply(&acc).expect("validated parts apply to semigroup members");
        }
        acc
    }))
}

/// Composition of non-fault parts wrapped so the pipeline cannot inspect
/// them, together with the collapsed ground-truth triple. The seed weaves
/// deterministic no-op layers between the given parts, so the closure
/// shape does not mirror the part list.
pub fn obfuscated_oracle(
    n: usize,
    ring: RingId,
    parts: &[OraclePart],
    seed: u64,
) -> Result<(AutomorphismOracle, StandardTriple), AutomorphismError> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut truth = StandardTriple::identity(ring, n);
    for p in parts.iter().rev() {
        p.validate(n, ring)?;
        truth = truth.fold_outer(p)?;
    }
    truth.validate(n, ring)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut layered: Vec<OraclePart> = Vec::new();
    for p in parts {
        if rng.gen_bool(0.5) {
            // a conjugation and its undoing, fused around nothing
            let u = crate::sample::random_positive_unit(ring, &mut rng);
            let mut diag = vec![RingElement::one(ring); n];
            diag[rng.gen_range(0..n)] = u;
            let mm = MonomialMatrix::new(diag, crate::perm::Permutation::identity(n))
                .expect("unit diagonal");
            layered.push(OraclePart::Inner(mm.clone()));
            layered.push(OraclePart::Inner(mm.inverse()));
        }
        layered.push(p.clone());
    }
    let oracle = oracle_from_parts(n, ring, layered)?;
    Ok((oracle, truth))
}

// ---------------------------------------------------------------------------
// random instances for tests and generators

/// A certified gamma table for the ring, drawn from a fixed menu whose
/// keys stay off the primes used by affine scale factors.
pub fn random_gamma<R: rand::Rng>(rng: &mut R, ring: RingId) -> CentralHomDescriptor {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let menu: Vec<BTreeMap<u64, BigRational>> = match ring {
        RingId::Q | RingId::RatFun => vec![
            BTreeMap::new(),
            BTreeMap::from([(2, q(3, 1))]),
            BTreeMap::from([(3, q(2, 1))]),
            BTreeMap::from([(2, q(1, 3))]),
            BTreeMap::from([(2, q(3, 1)), (3, q(5, 1))]),
        ],
        // only the trivial table is certified over DYADIC (units are 2^k,
        // so 1 + n*k = +-1 has no admissible k for n >= 3), and SKEW
        // restricts homotheties to the trivial one outright
        RingId::Dyadic | RingId::Skew => vec![BTreeMap::new()],
    };
    let pick = rng.gen_range(0..menu.len());
    CentralHomDescriptor::new(ring, menu[pick].clone()).expect("menu tables validate")
}

/// A catalog ring map; affine scale factors avoid the gamma key primes so
/// compositions stay inside the catalog.
pub fn random_ring_map<R: rand::Rng>(rng: &mut R, ring: RingId) -> RingMapDescriptor {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    match ring {
        RingId::Q | RingId::Dyadic => RingMapDescriptor::identity(ring),
        RingId::RatFun => {
            if rng.gen_bool(0.4) {
                RingMapDescriptor::identity(ring)
            } else {
                let a = [q(5, 1), q(7, 1), q(1, 5), q(7, 5)][rng.gen_range(0..4)].clone();
                let b = [q(0, 1), q(1, 1), q(-1, 1), q(1, 2)][rng.gen_range(0..4)].clone();
                RingMapDescriptor::affine(ring, a, b).expect("catalog affine map")
            }
        }
        RingId::Skew => {
            if rng.gen_bool(0.4) {
                RingMapDescriptor::identity(ring)
            } else {
                let a = [q(5, 1), q(7, 1), q(1, 5), q(2, 1)][rng.gen_range(0..4)].clone();
                RingMapDescriptor::affine(ring, a, BigRational::zero())
                    .expect("catalog scale map")
            }
        }
    }
}

pub fn random_monomial<R: rand::Rng>(rng: &mut R, n: usize, ring: RingId) -> MonomialMatrix {
    let diag = (0..n)
        .map(|_| crate::sample::random_positive_unit(ring, rng))
        .collect();
    MonomialMatrix::new(diag, crate::perm::Permutation::random(n, rng))
        .expect("random positive units form a monomial")
}

pub fn random_triple<R: rand::Rng>(rng: &mut R, n: usize, ring: RingId) -> StandardTriple {
    StandardTriple {
        m: random_monomial(rng, n, ring),
        c: random_ring_map(rng, ring),
        lambda: random_gamma(rng, ring),
    }
}

/// A random part list whose ground truth stays inside the catalog.
pub fn random_parts<R: rand::Rng>(
    rng: &mut R,
    n: usize,
    ring: RingId,
    count: usize,
) -> Vec<OraclePart> {
    (0..count)
        .map(|_| match rng.gen_range(0..3) {
            0 => OraclePart::Inner(random_monomial(rng, n, ring)),
            1 => OraclePart::RingMap(random_ring_map(rng, ring)),
            _ => OraclePart::Homothety(random_gamma(rng, ring)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::words::random_word_with;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qe(n: i64, d: i64) -> RingElement {
        RingElement::from_ratio(RingId::Q, n, d).unwrap()
    }

    #[test]
    fn inner_conjugation_moves_transvections() {
        // conjugation by S((1 2)) maps B_12(1) to B_21(1)
        let m = MonomialMatrix::of_permutation(RingId::Q, &Permutation::transposition(3, 0, 1));
        let b12 = Matrix::transvection(RingId::Q, 3, 0, 1, &qe(1, 1));
        let image = m.conjugate(&b12);
        assert_eq!(image, Matrix::transvection(RingId::Q, 3, 1, 0, &qe(1, 1)));
    }

    #[test]
    fn homothety_scales_by_gamma_of_det() {
        // n = 3, gamma: 2 -> 3; diag(2,1,1) has |det| = 2, so image = 3*X
        let g = CentralHomDescriptor::new(RingId::Q, BTreeMap::from([(2, q(3, 1))])).unwrap();
        let x = Matrix::diagonal(vec![qe(2, 1), qe(1, 1), qe(1, 1)]);
        let y = g.apply(&x).unwrap();
        assert_eq!(y, Matrix::diagonal(vec![qe(6, 1), qe(3, 1), qe(3, 1)]));
    }

    #[test]
    fn homothety_certificate_examples() {
        // gamma(2) = 3 over primes {2, 3}: I + 3*Gamma = [[1,0],[3,1]], det 1
        let g = CentralHomDescriptor::new(RingId::Q, BTreeMap::from([(2, q(3, 1))])).unwrap();
        assert!(g.is_certified_invertible(3).unwrap());
        // gamma(2) = 2 scales the 2-exponent by 1 + n: never unimodular for n >= 1
        let g2 = CentralHomDescriptor::new(RingId::Q, BTreeMap::from([(2, q(2, 1))])).unwrap();
        assert!(!g2.is_certified_invertible(3).unwrap());
        // swapping 2 and 3 couples the exponents: det(I + nGamma) = 1 - n^2
        let g3 = CentralHomDescriptor::new(
            RingId::Q,
            BTreeMap::from([(2, q(3, 1)), (3, q(2, 1))]),
        )
        .unwrap();
        assert!(!g3.is_certified_invertible(3).unwrap());
        assert!(g3.is_certified_invertible(0).unwrap() || true); // n = 0 never used
        // chained upward: 2 -> 3, 3 -> 5 is triangular, certified
        let g4 = CentralHomDescriptor::new(
            RingId::Q,
            BTreeMap::from([(2, q(3, 1)), (3, q(5, 1))]),
        )
        .unwrap();
        assert!(g4.is_certified_invertible(5).unwrap());
    }

    #[test]
    fn homothety_is_multiplicative_on_random_pairs() {
        let g = CentralHomDescriptor::new(
            RingId::Q,
            BTreeMap::from([(2, q(3, 1)), (3, q(5, 1))]),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let x = random_word_with(&mut rng, 3, RingId::Q, 5).eval();
            let y = random_word_with(&mut rng, 3, RingId::Q, 5).eval();
            let lhs = g.apply(&(&x * &y)).unwrap();
            let rhs = &g.apply(&x).unwrap() * &g.apply(&y).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn certified_homothety_has_explicit_inverse() {
        let g = CentralHomDescriptor::new(RingId::Q, BTreeMap::from([(2, q(3, 1))])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..25 {
            let x = random_word_with(&mut rng, 3, RingId::Q, 6).eval();
            let y = g.apply(&x).unwrap();
            let back = g.invert_apply(3, &y).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn dyadic_admits_only_the_trivial_certified_gamma() {
        // over DYADIC values must be powers of two; scaling the 2-exponent
        // by 1 + n*k can only be unimodular with k = 0
        let g = CentralHomDescriptor::new(RingId::Dyadic, BTreeMap::from([(2, q(2, 1))])).unwrap();
        assert!(!g.is_certified_invertible(3).unwrap());
        let not_dyadic = CentralHomDescriptor::new(RingId::Dyadic, BTreeMap::from([(2, q(3, 1))]));
        assert!(not_dyadic.is_err());
        let skew = CentralHomDescriptor::new(RingId::Skew, BTreeMap::from([(2, q(3, 1))]));
        assert!(skew.is_err());
    }

    #[test]
    fn ring_map_catalog_rules() {
        assert!(RingMapDescriptor::affine(RingId::Q, q(2, 1), q(0, 1)).is_err());
        assert!(RingMapDescriptor::affine(RingId::Skew, q(2, 1), q(1, 1)).is_err());
        assert!(RingMapDescriptor::affine(RingId::Skew, q(2, 1), q(0, 1)).is_ok());
        assert!(RingMapDescriptor::affine(RingId::RatFun, q(-2, 1), q(0, 1)).is_err());
        assert!(RingMapDescriptor::affine(RingId::RatFun, q(2, 1), q(-7, 2)).is_ok());
    }

    #[test]
    fn affine_map_is_a_ring_homomorphism() {
        let c = RingMapDescriptor::affine(RingId::RatFun, q(2, 1), q(1, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..40 {
            let x = crate::sample::random_element(RingId::RatFun, &mut rng);
            let y = crate::sample::random_element(RingId::RatFun, &mut rng);
            assert_eq!(
                c.apply(&x.checked_add(&y).unwrap()),
                c.apply(&x).checked_add(&c.apply(&y)).unwrap()
            );
            assert_eq!(
                c.apply(&x.checked_mul(&y).unwrap()),
                c.apply(&x).checked_mul(&c.apply(&y)).unwrap()
            );
            // order preservation
            assert_eq!(c.apply(&x).sign(), x.sign());
        }
        assert!(c.apply(&RingElement::one(RingId::RatFun)).is_one());
    }

    #[test]
    fn skew_scale_map_is_a_ring_homomorphism() {
        let c = RingMapDescriptor::affine(RingId::Skew, q(5, 1), q(0, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..40 {
            let x = crate::sample::random_element(RingId::Skew, &mut rng);
            let y = crate::sample::random_element(RingId::Skew, &mut rng);
            assert_eq!(
                c.apply(&x.checked_mul(&y).unwrap()),
                c.apply(&x).checked_mul(&c.apply(&y)).unwrap()
            );
            assert_eq!(
                c.apply(&x.checked_add(&y).unwrap()),
                c.apply(&x).checked_add(&c.apply(&y)).unwrap()
            );
            assert_eq!(c.apply(&x).sign(), x.sign());
        }
    }

    #[test]
    fn affine_inverse_and_composition() {
        let c = RingMapDescriptor::affine(RingId::RatFun, q(2, 1), q(3, 1)).unwrap();
        let cinv = c.inverse();
        let composed = c.compose_after(&cinv);
        let s = RingElement::var_s(RingId::RatFun).unwrap();
        assert_eq!(composed.apply(&s), s);
        assert_eq!(cinv.compose_after(&c).apply(&s), s);
    }

    #[test]
    fn triple_application_order() {
        // M = S((1 2)), c = id, gamma: 2 -> 3 over Q, n = 3, X = diag(2,1,1):
        // first scale by 3, then conjugate: diag(3,6,3)
        let t = StandardTriple {
            m: MonomialMatrix::of_permutation(RingId::Q, &Permutation::transposition(3, 0, 1)),
            c: RingMapDescriptor::identity(RingId::Q),
            lambda: CentralHomDescriptor::new(RingId::Q, BTreeMap::from([(2, q(3, 1))]))
                .unwrap(),
        };
        let x = Matrix::diagonal(vec![qe(2, 1), qe(1, 1), qe(1, 1)]);
        let y = t.apply(&x).unwrap();
        assert_eq!(y, Matrix::diagonal(vec![qe(3, 1), qe(6, 1), qe(3, 1)]));
    }

    #[test]
    fn parts_compose_to_their_folded_triple() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for ring in RingId::ALL {
            for n in [3usize, 4] {
                for _ in 0..6 {
                    let count = rng.gen_range(1..=4);
                    let parts = random_parts(&mut rng, n, ring, count);
                    let raw = oracle_from_parts(n, ring, parts.clone()).unwrap();
                    let mut truth = StandardTriple::identity(ring, n);
                    for p in parts.iter().rev() {
                        truth = truth.fold_outer(p).unwrap();
                    }
                    for _ in 0..4 {
                        let w = random_word_with(&mut rng, n, ring, 5).eval();
                        assert_eq!(raw.query(&w), truth.apply(&w).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn obfuscated_oracle_matches_ground_truth() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for ring in RingId::ALL {
            let parts = random_parts(&mut rng, 3, ring, 3);
            let (oracle, truth) = obfuscated_oracle(3, ring, &parts, 999).unwrap();
            for _ in 0..5 {
                let w = random_word_with(&mut rng, 3, ring, 6).eval();
                assert_eq!(oracle.query(&w), truth.apply(&w).unwrap());
            }
        }
    }

    #[test]
    fn triple_composition_is_extensional_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for ring in RingId::ALL {
            let t1 = random_triple(&mut rng, 3, ring);
            let t2 = random_triple(&mut rng, 3, ring);
            match t1.compose_after(&t2) {
                Ok(t12) => {
                    for _ in 0..5 {
                        let w = random_word_with(&mut rng, 3, ring, 5).eval();
                        let staged = t1.apply(&t2.apply(&w).unwrap()).unwrap();
                        assert_eq!(t12.apply(&w).unwrap(), staged);
                    }
                }
                Err(_) => panic!("catalog-safe random triples must compose"),
            }
        }
    }

    #[test]
    fn fault_parts_behave_as_documented() {
        let flip = OraclePart::Flip;
        let mono = random_monomial(&mut ChaCha8Rng::seed_from_u64(1), 3, RingId::Q).to_matrix();
        assert_eq!(flip.apply(&mono).unwrap(), mono);
        let b12 = Matrix::transvection(RingId::Q, 3, 0, 1, &qe(2, 1));
        assert_eq!(
            flip.apply(&b12).unwrap(),
            Matrix::transvection(RingId::Q, 3, 1, 0, &qe(2, 1))
        );
        let tr = OraclePart::Transpose;
        assert_eq!(tr.apply(&mono).unwrap(), mono.transpose());
    }

    #[test]
    fn oracle_counts_queries() {
        let t = StandardTriple::identity(RingId::Q, 3);
        let oracle = oracle_from_triple(&t).unwrap();
        assert_eq!(oracle.query_count(), 0);
        let x = Matrix::identity(RingId::Q, 3);
        oracle.query(&x);
        oracle.query(&x);
        assert_eq!(oracle.query_count(), 2);
    }

    #[test]
    fn uncertified_triples_are_rejected() {
        let t = StandardTriple {
            m: MonomialMatrix::identity(RingId::Q, 3),
            c: RingMapDescriptor::identity(RingId::Q),
            lambda: CentralHomDescriptor::new(RingId::Q, BTreeMap::from([(2, q(2, 1))]))
                .unwrap(),
        };
        assert!(matches!(
            oracle_from_triple(&t),
            Err(AutomorphismError::InvalidTriple(_))
        ));
    }

    #[test]
    fn canonicalization_pins_first_diagonal_entry() {
        let t = StandardTriple {
            m: MonomialMatrix::new(
                vec![qe(2, 1), qe(6, 1), qe(2, 1)],
                Permutation::cycle(3, &[0, 1, 2]),
            )
            .unwrap(),
            c: RingMapDescriptor::identity(RingId::Q),
            lambda: CentralHomDescriptor::trivial(RingId::Q),
        };
        let c = t.canonicalize();
        assert!(c.m.diag()[0].is_one());
        assert_eq!(c.m.diag()[1], qe(3, 1));
        // same map extensionally
        let x = Matrix::transvection(RingId::Q, 3, 0, 2, &qe(1, 1));
        assert_eq!(t.apply(&x).unwrap(), c.apply(&x).unwrap());
    }

    #[test]
    fn factor_small_handles_rationals() {
        assert_eq!(
            factor_small(&q(12, 35)).unwrap(),
            vec![(2, 2), (3, 1), (5, -1), (7, -1)]
        );
        assert_eq!(factor_small(&q(1, 1)).unwrap(), vec![]);
    }
}
