//! The ring 𝒵 = ℤ[v^{±1/2}] and its fraction field, plus q-combinatorics.
//!
//! Exponents are stored in u = v^{1/2}, so every element of 𝒵 is an ordinary
//! Laurent polynomial in u and half-integer v-powers need no special casing.
//! All coefficients are arbitrary-precision: automorphism counts overflow
//! machine integers already for moderate modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use thiserror::Error;

/// Errors raised by scalar arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact Laurent division")]
    DivisionInexact,
    #[error("q-factorial of negative argument {0}")]
    NegativeArgument(i64),
    #[error("odd u-exponent {0} at evaluation in v")]
    HalfPowerAtEvaluation(i64),
}

/// A Laurent polynomial in u = v^{1/2} with integer coefficients.
///
/// Canonical form: no stored zero coefficients, so structural equality is
/// ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HalfLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl HalfLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::u_pow(0)
    }

    /// The monomial u^k = v^{k/2}.
    pub fn u_pow(k: i64) -> Self {
        Self::monomial(BigInt::one(), k)
    }

    /// The monomial v^k.
    pub fn v_pow(k: i64) -> Self {
        Self::u_pow(2 * k)
    }

    pub fn monomial(coeff: impl Into<BigInt>, u_exp: i64) -> Self {
        let c = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(u_exp, c);
        }
        Self { terms }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::monomial(n, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    /// Coefficient of u^k (zero if absent).
    pub fn coeff(&self, u_exp: i64) -> BigInt {
        self.terms.get(&u_exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in increasing u-exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn insert_add(&mut self, u_exp: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(u_exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&u_exp);
        }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Applies u ↦ u^m to every term (m = −1 is `bar`, m = 2 is v ↦ v²).
    pub fn scale_exponents(&self, m: i64) -> Self {
        assert!(m != 0, "exponent scaling must be by a nonzero integer");
        let terms = self.terms.iter().map(|(k, c)| (k * m, c.clone())).collect();
        Self { terms }
    }

    /// The bar involution v^{1/2} ↦ v^{-1/2}.
    pub fn bar(&self) -> Self {
        self.scale_exponents(-1)
    }

    /// Exact division; errors unless `rhs` divides `self` in ℤ[u^{±1}].
    pub fn exact_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let sa = self.min_exp().unwrap();
        let sb = rhs.min_exp().unwrap();
        let a = self.to_dense(sa);
        let b = rhs.to_dense(sb);
        let (da, db) = (a.len() - 1, b.len() - 1);
        if da < db {
            return Err(ScalarError::DivisionInexact);
        }
        let mut rem = a;
        let mut quot = vec![BigInt::zero(); da - db + 1];
        for d in (db..=da).rev() {
            if rem[d].is_zero() {
                continue;
            }
            let (q, r) = rem[d].div_rem(&b[db]);
            if !r.is_zero() {
                return Err(ScalarError::DivisionInexact);
            }
            for (i, bc) in b.iter().enumerate() {
                let t = &q * bc;
                rem[d - db + i] -= t;
            }
            quot[d - db] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(ScalarError::DivisionInexact);
        }
        Ok(Self::from_dense(&quot, sa - sb))
    }

    /// The part supported on strictly negative v-exponents (u-exponent < 0).
    pub fn truncate_strictly_negative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| **k < 0)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        Self { terms }
    }

    /// Evaluates f at v = √p, returning (a, b) with f(√p) = a + b√p.
    ///
    /// Requires all u-exponents even (f ∈ ℤ[v^{±1}]); half v-powers error.
    pub fn eval_at_sqrt_prime(&self, p: u32) -> Result<(BigRational, BigRational), ScalarError> {
        let prime = BigInt::from(p);
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        for (k, c) in &self.terms {
            if k.rem_euclid(2) != 0 {
                return Err(ScalarError::HalfPowerAtEvaluation(*k));
            }
            let m = k / 2; // the v-exponent; v^m = p^{m/2}
            let (target, e) = if m.rem_euclid(2) == 0 {
                (&mut a, m / 2)
            } else {
                (&mut b, (m - 1) / 2)
            };
            let pe = prime.pow(e.unsigned_abs() as u32);
            let contrib = if e >= 0 {
                BigRational::from_integer(c * pe)
            } else {
                BigRational::new(c.clone(), pe)
            };
            *target += contrib;
        }
        Ok((a, b))
    }

    fn to_dense(&self, base: i64) -> Vec<BigInt> {
        let top = self.max_exp().unwrap();
        let mut out = vec![BigInt::zero(); (top - base + 1) as usize];
        for (k, c) in &self.terms {
            out[(k - base) as usize] = c.clone();
        }
        out
    }

    fn from_dense(coeffs: &[BigInt], base: i64) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(base + i as i64, c.clone());
            }
        }
        Self { terms }
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    fn leading_coeff(&self) -> BigInt {
        self.max_exp().map(|k| self.coeff(k)).unwrap_or_else(BigInt::zero)
    }

    fn divide_content(&self, c: &BigInt) -> Self {
        let terms = self.terms.iter().map(|(k, v)| (*k, v / c)).collect();
        Self { terms }
    }
}

fn dense_trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn dense_content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
    }
    g
}

fn dense_primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    dense_trim(&mut p);
    if p.is_empty() {
        return p;
    }
    let mut c = dense_content(&p);
    if p.last().unwrap().is_negative() {
        c = -c;
    }
    p.into_iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of a by b (deg a ≥ deg b ≥ 0, b nonzero).
fn dense_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let lc = &b[db];
    let mut rem: Vec<BigInt> = a.to_vec();
    for coeff in rem.iter_mut() {
        *coeff *= lc.pow((da - db + 1) as u32);
    }
    for d in (db..=da).rev() {
        if rem[d].is_zero() {
            continue;
        }
        let q = &rem[d] / lc;
        for (i, bc) in b.iter().enumerate() {
            let t = &q * bc;
            rem[d - db + i] -= t;
        }
    }
    dense_trim(&mut rem);
    rem
}

/// Gcd of primitive integer polynomials, returned primitive with positive
/// leading coefficient.
fn dense_gcd_primitive(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let mut r0 = dense_primitive(a);
    let mut r1 = dense_primitive(b);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !r1.is_empty() {
        let r2 = dense_primitive(dense_pseudo_rem(&r0, &r1));
        r0 = r1;
        r1 = r2;
    }
    r0
}

impl Neg for &HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        let terms = self.terms.iter().map(|(k, c)| (*k, -c)).collect();
        HalfLaurent { terms }
    }
}

impl Add for &HalfLaurent {
    type Output = HalfLaurent;
    fn add(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert_add(*k, c);
        }
        out
    }
}

impl Sub for &HalfLaurent {
    type Output = HalfLaurent;
    fn sub(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            let neg = -c;
            out.insert_add(*k, &neg);
        }
        out
    }
}

impl Mul for &HalfLaurent {
    type Output = HalfLaurent;
    fn mul(self, rhs: &HalfLaurent) -> HalfLaurent {
        let mut out = HalfLaurent::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let prod = ca * cb;
                out.insert_add(ka + kb, &prod);
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for HalfLaurent {
            type Output = HalfLaurent;
            fn $method(self, rhs: HalfLaurent) -> HalfLaurent {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HalfLaurent> for HalfLaurent {
            type Output = HalfLaurent;
            fn $method(self, rhs: &HalfLaurent) -> HalfLaurent {
                (&self).$method(rhs)
            }
        }
        impl $trait<HalfLaurent> for &HalfLaurent {
            type Output = HalfLaurent;
            fn $method(self, rhs: HalfLaurent) -> HalfLaurent {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for HalfLaurent {
    type Output = HalfLaurent;
    fn neg(self) -> HalfLaurent {
        -&self
    }
}

impl AddAssign<&HalfLaurent> for HalfLaurent {
    fn add_assign(&mut self, rhs: &HalfLaurent) {
        for (k, c) in &rhs.terms {
            self.insert_add(*k, c);
        }
    }
}

impl SubAssign<&HalfLaurent> for HalfLaurent {
    fn sub_assign(&mut self, rhs: &HalfLaurent) {
        for (k, c) in &rhs.terms {
            let neg = -c;
            self.insert_add(*k, &neg);
        }
    }
}

impl MulAssign<&HalfLaurent> for HalfLaurent {
    fn mul_assign(&mut self, rhs: &HalfLaurent) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.magnitude();
            if *k == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write!(f, "{}", exp_str(*k))?;
            }
        }
        Ok(())
    }
}

fn exp_str(u_exp: i64) -> String {
    if u_exp % 2 == 0 {
        match u_exp / 2 {
            1 => "v".to_string(),
            e => format!("v^{e}"),
        }
    } else {
        format!("v^({u_exp}/2)")
    }
}

impl fmt::Debug for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for HalfLaurent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            map.serialize_entry(&k.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for HalfLaurent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = HalfLaurent;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a map from u-exponent to integer coefficient")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out = HalfLaurent::zero();
                while let Some((k, c)) = access.next_entry::<String, String>()? {
                    let exp: i64 = k.parse().map_err(serde::de::Error::custom)?;
                    let coeff: BigInt = c.parse().map_err(serde::de::Error::custom)?;
                    out.insert_add(exp, &coeff);
                }
                Ok(out)
            }
        }
        deserializer.deserialize_map(V)
    }
}

/// An element of the fraction field ℚ(v^{1/2}), kept reduced.
///
/// Canonical form: gcd(num, den) a unit, den with lowest u-exponent 0 and
/// positive leading coefficient, integer contents coprime. Structural
/// equality is field equality.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFn {
    num: HalfLaurent,
    den: HalfLaurent,
}

impl RationalFn {
    pub fn new(num: HalfLaurent, den: HalfLaurent) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: HalfLaurent, den: HalfLaurent) -> Self {
        if num.is_zero() {
            return Self { num, den: HalfLaurent::one() };
        }
        let pn = dense_primitive(num.to_dense(num.min_exp().unwrap()));
        let pd = dense_primitive(den.to_dense(den.min_exp().unwrap()));
        let g = HalfLaurent::from_dense(&dense_gcd_primitive(pn, pd), 0);
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");
        let c = num.content().gcd(&den.content());
        num = num.divide_content(&c);
        den = den.divide_content(&c);
        let shift = HalfLaurent::u_pow(-den.min_exp().unwrap());
        num = &num * &shift;
        den = &den * &shift;
        if den.leading_coeff().is_negative() {
            num = -num;
            den = -den;
        }
        Self { num, den }
    }

    pub fn zero() -> Self {
        HalfLaurent::zero().into()
    }

    pub fn one() -> Self {
        HalfLaurent::one().into()
    }

    pub fn num(&self) -> &HalfLaurent {
        &self.num
    }

    pub fn den(&self) -> &HalfLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Some(f) iff the denominator is trivial.
    pub fn to_laurent(&self) -> Option<HalfLaurent> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn bar(&self) -> Self {
        Self::reduced(self.num.bar(), self.den.bar())
    }
}

impl From<HalfLaurent> for RationalFn {
    fn from(num: HalfLaurent) -> Self {
        Self { num, den: HalfLaurent::one() }
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::reduced(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFn {
    type Output = RationalFn;
    fn div(self, rhs: &RationalFn) -> RationalFn {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RationalFn::reduced(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

macro_rules! forward_owned_binop_rat {
    ($trait:ident, $method:ident) => {
        impl $trait for RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: RationalFn) -> RationalFn {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RationalFn> for RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: &RationalFn) -> RationalFn {
                (&self).$method(rhs)
            }
        }
        impl $trait<RationalFn> for &RationalFn {
            type Output = RationalFn;
            fn $method(self, rhs: RationalFn) -> RationalFn {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop_rat!(Add, add);
forward_owned_binop_rat!(Sub, sub);
forward_owned_binop_rat!(Mul, mul);
forward_owned_binop_rat!(Div, div);

impl AddAssign<&RationalFn> for RationalFn {
    fn add_assign(&mut self, rhs: &RationalFn) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The balanced q-integer [r] = (v^r − v^{-r})/(v − v^{-1}); [−r] = −[r].
pub fn qnum(r: i64) -> HalfLaurent {
    if r < 0 {
        return -qnum(-r);
    }
    let mut out = HalfLaurent::zero();
    for k in 0..r {
        out += &HalfLaurent::v_pow(r - 1 - 2 * k);
    }
    out
}

/// The q-factorial [r]! = [r][r−1]⋯[1].
pub fn qfact(r: i64) -> Result<HalfLaurent, ScalarError> {
    if r < 0 {
        return Err(ScalarError::NegativeArgument(r));
    }
    let mut out = HalfLaurent::one();
    for i in 1..=r {
        out *= &qnum(i);
    }
    Ok(out)
}

/// The q-binomial [m choose r] = [m][m−1]⋯[m−r+1]/[r]! for any integer m.
pub fn qbinom(m: i64, r: i64) -> Result<HalfLaurent, ScalarError> {
    if r < 0 {
        return Err(ScalarError::NegativeArgument(r));
    }
    let mut prod = HalfLaurent::one();
    for i in 0..r {
        prod *= &qnum(m - i);
    }
    prod.exact_div(&qfact(r)?)
}

/// The q-double-factorial [k]!! = [k][k−2][k−4]⋯, ending at [2] or [1];
/// [0]!! = [1]!! = [−1]!! = 1.
pub fn qdfact(k: i64) -> Result<HalfLaurent, ScalarError> {
    if k < -1 {
        return Err(ScalarError::NegativeArgument(k));
    }
    let mut out = HalfLaurent::one();
    let mut i = k;
    while i >= 2 {
        out *= &qnum(i);
        i -= 2;
    }
    Ok(out)
}
