//! Sparse Laurent polynomials in `q` with half-integer exponents.
//!
//! Exponents are stored doubled (`q^e` is keyed by `2e`) so that every
//! operation stays in integer arithmetic. Coefficients are arbitrary
//! precision. The zero polynomial is the empty map, so structural equality
//! is polynomial equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    /// doubled exponent -> nonzero coefficient
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coeff * q^exp` for an integer exponent.
    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        Self::half_monomial(2 * exp, coeff)
    }

    /// `coeff * q^(doubled_exp / 2)`.
    pub fn half_monomial(doubled_exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(doubled_exp, coeff.into());
        p
    }

    /// Builds a polynomial from `(doubled exponent, coefficient)` pairs.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Builds a polynomial with integer exponents from coefficients of
    /// `q^0, q^1, ...`.
    pub fn from_coeffs<C: Into<BigInt> + Clone>(coeffs: &[C]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (2 * i as i64, c.clone().into())),
        )
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

    /// Iterates `(doubled exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Coefficient of `q^(doubled_exp / 2)`.
    pub fn coeff_half(&self, doubled_exp: i64) -> BigInt {
        self.terms.get(&doubled_exp).cloned().unwrap_or_default()
    }

    /// Coefficient of `q^exp`.
    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeff_half(2 * exp)
    }

    /// Lowest doubled exponent, `None` for zero.
    pub fn min_half_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest doubled exponent, `None` for zero.
    pub fn max_half_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when every exponent is an integer.
    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.is_even())
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiplies by `q^(doubled_shift / 2)`.
    pub fn shift_half(&self, doubled_shift: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + doubled_shift, c.clone()))
                .collect(),
        }
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        self.shift_half(2 * shift)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Substitutes `q -> q^k` for a positive integer `k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k > 0, "substitution power must be positive");
        Self {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// Value at `q = 1` (sum of coefficients).
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Drops every term with exponent above `max_exp`.
    pub fn truncate(&self, max_exp: i64) -> Self {
        Self {
            terms: self
                .terms
                .range(..=2 * max_exp)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn all_coeffs_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Dense coefficient list of `q^0 ..= q^max_exp` (integer exponents only).
    pub fn dense_coeffs(&self, max_exp: i64) -> Vec<BigInt> {
        (0..=max_exp).map(|e| self.coeff(e)).collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let exp = if e.is_even() {
                format!("{}", e / 2)
            } else {
                format!("{}/2", e)
            };
            match (*e == 0, mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "q^{exp}")?,
                (false, false) => write!(f, "{mag}*q^{exp}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        Self {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        let mut out = LaurentPoly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

/// Exact quotient `num / den` in `Z[q^{1/2}, q^{-1/2}]`.
///
/// Long division from the top degree down; any leftover is reported as
/// [`Error::InexactDivision`].
pub fn exact_div(num: &LaurentPoly, den: &LaurentPoly) -> Result<LaurentPoly> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (den_top, den_lead) = den
        .terms
        .iter()
        .next_back()
        .map(|(e, c)| (*e, c.clone()))
        .expect("nonzero divisor");
    let den_low = den.min_half_exp().expect("nonzero divisor");
    let mut rem = num.clone();
    let mut quot = LaurentPoly::zero();
    while let Some(top) = rem.max_half_exp() {
        // once the remainder's span is narrower than the divisor's the
        // division cannot terminate cleanly
        let low = rem.min_half_exp().expect("nonzero remainder");
        if top - low < den_top - den_low {
            break;
        }
        let lead = rem.terms[&top].clone();
        let (q, r) = lead.div_rem(&den_lead);
        if !r.is_zero() {
            break;
        }
        let shift = top - den_top;
        let step = LaurentPoly::half_monomial(shift, q);
        rem -= &(&step * den);
        quot += &step;
    }
    if rem.is_zero() {
        Ok(quot)
    } else {
        Err(Error::InexactDivision {
            remainder: rem.to_string(),
        })
    }
}

/// `(q^base; q^base)_m = prod_{i=1..m} (1 - q^{base*i})`.
pub fn qfactorial(m: u32, base_exp: u32) -> LaurentPoly {
    let mut out = LaurentPoly::one();
    for i in 1..=m as i64 {
        let factor = LaurentPoly::from_terms([(0, 1), (2 * base_exp as i64 * i, -1)]);
        out = &out * &factor;
    }
    out
}

/// q-multinomial `(q)_j / prod_b (q)_{gamma_b}` in the variable `q^base_exp`.
///
/// Zero unless every component is nonnegative and they sum to `j`.
pub fn qmultinomial(j: i64, gamma: &[i64], base_exp: u32) -> Result<LaurentPoly> {
    if j < 0 || gamma.iter().any(|&g| g < 0) || gamma.iter().sum::<i64>() != j {
        return Ok(LaurentPoly::zero());
    }
    // build it as a product of binomials to keep intermediate sizes small
    let mut out = LaurentPoly::one();
    let mut acc = 0i64;
    for &g in gamma {
        if g == 0 {
            continue;
        }
        acc += g;
        out = &out * &qbinomial(acc as u32, g as u32)?;
    }
    Ok(out.substitute_power(base_exp as i64))
}

/// Gaussian binomial `[n choose k]_q`.
pub fn qbinomial(n: u32, k: u32) -> Result<LaurentPoly> {
    if k > n {
        return Ok(LaurentPoly::zero());
    }
    let k = k.min(n - k);
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    for i in 0..k as i64 {
        num = &num * &LaurentPoly::from_terms([(0, 1), (2 * (n as i64 - i), -1)]);
        den = &den * &LaurentPoly::from_terms([(0, 1), (2 * (i + 1), -1)]);
    }
    exact_div(&num, &den).map_err(|e| Error::Internal(format!("q-binomial division: {e}")))
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    terms: Vec<(i64, String)>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let mut out = LaurentPoly::zero();
        for (e, c) in repr.terms {
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            out.add_term(e, c);
        }
        Ok(out)
    }
}
