//! Truncated Laurent series in `q` with arbitrary-precision integer coefficients.
//!
//! A [`QSeries`] stores its nonzero coefficients sparsely, keyed by exponent, and
//! carries a truncation order `Q`: every term with exponent above `Q` is unknown
//! and never stored. Binary operations truncate at the smaller of the two orders.
//! Exponents may be negative.
//!
//! The q-special functions needed by the character formulas live here too:
//! [`pochhammer`], [`inv_pochhammer`] and [`gaussian_binomial`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Truncated Laurent series `sum c_e q^e + O(q^{trunc+1})`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: BTreeMap<i64, BigInt>,
    trunc: i64,
}

impl QSeries {
    pub fn zero(trunc: i64) -> Self {
        QSeries {
            coeffs: BTreeMap::new(),
            trunc,
        }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(0, BigInt::one(), trunc)
    }

    /// `coeff * q^exponent`, or zero if the exponent is past the truncation order.
    pub fn monomial(exponent: i64, coeff: BigInt, trunc: i64) -> Self {
        let mut s = Self::zero(trunc);
        if exponent <= trunc && !coeff.is_zero() {
            s.coeffs.insert(exponent, coeff);
        }
        s
    }

    pub fn q_power(exponent: i64, trunc: i64) -> Self {
        Self::monomial(exponent, BigInt::one(), trunc)
    }

    /// `1 - q^exponent`.
    pub fn one_minus_q_power(exponent: i64, trunc: i64) -> Self {
        let mut s = Self::one(trunc);
        s.add_term(exponent, -BigInt::one());
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated exponents accumulate.
    pub fn from_terms<I, C>(terms: I, trunc: i64) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(trunc);
        for (e, c) in terms {
            s.add_term(e, c.into());
        }
        s
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> BigInt {
        self.coeffs.get(&exponent).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Adds `coeff * q^exponent` in place, dropping it if past the truncation order.
    pub fn add_term(&mut self, exponent: i64, coeff: BigInt) {
        if exponent > self.trunc || coeff.is_zero() {
            return;
        }
        match self.coeffs.entry(exponent) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Lowers the truncation order to `min(self.trunc, order)`.
    pub fn truncated(mut self, order: i64) -> Self {
        if order < self.trunc {
            self.trunc = order;
            self.coeffs.retain(|e, _| *e <= order);
        }
        self
    }

    /// Multiplies by `q^by`. The truncation order moves with the terms, so no
    /// information is lost.
    pub fn shift(&self, by: i64) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + by, c.clone())).collect(),
            trunc: self.trunc + by,
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero(self.trunc);
        }
        QSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * factor)).collect(),
            trunc: self.trunc,
        }
    }

    /// Substitutes `q -> q^scale`: exponent `e` becomes `scale * e` and the
    /// truncation order is multiplied by `scale`.
    ///
    /// Panics if `scale` is not positive.
    pub fn substitute_q_power(&self, scale: i64) -> Self {
        assert!(scale > 0, "substitution scale must be positive");
        QSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * scale, c.clone())).collect(),
            trunc: self.trunc * scale,
        }
    }

    pub fn substitute_q_squared(&self) -> Self {
        self.substitute_q_power(2)
    }

    /// Smallest exponent `<= order` at which `self` and `other` differ, looking
    /// only at exponents both series know.
    pub fn first_difference(&self, other: &QSeries, order: i64) -> Option<i64> {
        let limit = order.min(self.trunc).min(other.trunc);
        let mut exps: Vec<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .filter(|e| *e <= limit)
            .collect();
        exps.sort_unstable();
        exps.dedup();
        exps.into_iter()
            .find(|e| self.coeffs.get(e) != other.coeffs.get(e))
    }

    /// True if every coefficient is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    /// A negative valuation on one side pulls unknown high terms of the other
    /// side down, so the product is only known to the correspondingly lower order.
    fn mul_ref(&self, other: &QSeries) -> QSeries {
        let mut trunc = self.trunc.min(other.trunc);
        if let Some(v) = self.min_exponent().filter(|v| *v < 0) {
            trunc = trunc.min(other.trunc + v);
        }
        if let Some(v) = other.min_exponent().filter(|v| *v < 0) {
            trunc = trunc.min(self.trunc + v);
        }
        let mut out = QSeries::zero(trunc);
        let (Some(b_min), true) = (other.min_exponent(), !self.is_zero()) else {
            return out;
        };
        for (ea, ca) in &self.coeffs {
            if ea + b_min > trunc {
                break;
            }
            for (eb, cb) in &other.coeffs {
                let e = ea + eb;
                if e > trunc {
                    break;
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    fn add_ref(&self, other: &QSeries, negate: bool) -> QSeries {
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.clone().truncated(trunc);
        for (e, c) in &other.coeffs {
            let c = if negate { -c } else { c.clone() };
            out.add_term(*e, c);
        }
        out
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.add_ref(rhs, false)
    }
}

impl Add for QSeries {
    type Output = QSeries;
    fn add(self, rhs: QSeries) -> QSeries {
        self.add_ref(&rhs, false)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.add_ref(rhs, true)
    }
}

impl Sub for QSeries {
    type Output = QSeries;
    fn sub(self, rhs: QSeries) -> QSeries {
        self.add_ref(&rhs, true)
    }
}

impl AddAssign<&QSeries> for QSeries {
    fn add_assign(&mut self, rhs: &QSeries) {
        if rhs.trunc < self.trunc {
            *self = std::mem::replace(self, QSeries::zero(0)).truncated(rhs.trunc);
        }
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&QSeries> for QSeries {
    fn sub_assign(&mut self, rhs: &QSeries) {
        if rhs.trunc < self.trunc {
            *self = std::mem::replace(self, QSeries::zero(0)).truncated(rhs.trunc);
        }
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c);
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_ref(rhs)
    }
}

impl Mul for QSeries {
    type Output = QSeries;
    fn mul(self, rhs: QSeries) -> QSeries {
        self.mul_ref(&rhs)
    }
}

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.into_iter().map(|(e, c)| (e, -c)).collect(),
            trunc: self.trunc,
        }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -self.clone()
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (e, true) => write!(f, "q^{e}")?,
                (e, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc + 1)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesRepr {
    trunc: i64,
    terms: Vec<(i64, String)>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        QSeriesRepr {
            trunc: self.trunc,
            terms: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, c.to_string()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = QSeriesRepr::deserialize(deserializer)?;
        let mut s = QSeries::zero(repr.trunc);
        for (e, c) in repr.terms {
            if e > repr.trunc {
                return Err(D::Error::custom(format!(
                    "exponent {e} exceeds truncation order {}",
                    repr.trunc
                )));
            }
            let c: BigInt = c
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            s.add_term(e, c);
        }
        Ok(s)
    }
}

/// `(q)_n = (1-q)(1-q^2)...(1-q^n)` truncated at `trunc`.
pub fn pochhammer(n: u32, trunc: i64) -> QSeries {
    let mut out = QSeries::one(trunc);
    for i in 1..=i64::from(n) {
        if i > trunc {
            break;
        }
        out = &out * &QSeries::one_minus_q_power(i, trunc);
    }
    out
}

/// Power series expansion of `1 / (q)_n` to order `trunc`: the number of
/// partitions of each exponent into parts of size at most `n`.
pub fn inv_pochhammer(n: u32, trunc: i64) -> QSeries {
    if trunc < 0 {
        return QSeries::zero(trunc);
    }
    let len = trunc as usize + 1;
    let mut dense = vec![BigInt::zero(); len];
    dense[0] = BigInt::one();
    for part in 1..=(n as usize).min(len - 1) {
        for e in part..len {
            let prev = dense[e - part].clone();
            dense[e] += prev;
        }
    }
    QSeries::from_terms(
        dense.into_iter().enumerate().map(|(e, c)| (e as i64, c)),
        trunc,
    )
}

/// Gaussian binomial `[m over n]_q = prod_{i=1}^n (1 - q^{m-n+i}) / (1 - q^i)`
/// for `0 <= n <= m`, and zero otherwise.
pub fn gaussian_binomial(m: i64, n: i64, trunc: i64) -> QSeries {
    if n < 0 || n > m {
        return QSeries::zero(trunc);
    }
    let mut numerator = QSeries::one(trunc);
    for i in 1..=n {
        let e = m - n + i;
        if e > trunc {
            break;
        }
        numerator = &numerator * &QSeries::one_minus_q_power(e, trunc);
    }
    let n = u32::try_from(n).expect("binomial lower index fits in u32");
    &numerator * &inv_pochhammer(n, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(terms: &[(i64, i64)], trunc: i64) -> QSeries {
        QSeries::from_terms(terms.iter().copied(), trunc)
    }

    #[test]
    fn add_cancels() {
        let a = s(&[(0, 1), (1, 1)], 10);
        let b = s(&[(0, -1), (2, 1)], 10);
        assert_eq!(&a + &b, s(&[(1, 1), (2, 1)], 10));
        assert_eq!(&a + &QSeries::zero(10), a);
        let p1 = pochhammer(1, 10);
        assert_eq!(&p1 + &p1, s(&[(0, 2), (1, -2)], 10));
    }

    #[test]
    fn add_takes_min_order() {
        let a = s(&[(0, 1), (5, 1)], 10);
        let b = s(&[(3, 1)], 4);
        let c = &a + &b;
        assert_eq!(c.trunc(), 4);
        assert_eq!(c, s(&[(0, 1), (3, 1)], 4));
    }

    #[test]
    fn mul_examples() {
        let a = s(&[(0, 1), (1, -1)], 10);
        let b = s(&[(0, 1), (1, 1)], 10);
        assert_eq!(&a * &b, s(&[(0, 1), (2, -1)], 10));
        assert_eq!(
            &QSeries::q_power(-2, 10) * &QSeries::q_power(3, 10),
            QSeries::q_power(1, 8)
        );
        assert_eq!(pochhammer(2, 10), s(&[(0, 1), (1, -1), (2, -1), (3, 1)], 10));
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(0, 10), QSeries::one(10));
        assert_eq!(pochhammer(1, 10), s(&[(0, 1), (1, -1)], 10));
        assert_eq!(
            pochhammer(3, 10),
            s(&[(0, 1), (1, -1), (2, -1), (4, 1), (5, 1), (6, -1)], 10)
        );
    }

    #[test]
    fn inverse_pochhammer_values() {
        assert_eq!(inv_pochhammer(0, 5), QSeries::one(5));
        assert_eq!(inv_pochhammer(1, 3), s(&[(0, 1), (1, 1), (2, 1), (3, 1)], 3));
        for n in 0..=10 {
            let prod = &pochhammer(n, 15) * &inv_pochhammer(n, 15);
            assert_eq!(prod, QSeries::one(15), "n = {n}");
        }
        // p(15) = 176 partitions, all parts <= 15
        assert_eq!(inv_pochhammer(15, 15).coeff(15), BigInt::from(176));
    }

    #[test]
    fn gaussian_binomial_values() {
        assert!(gaussian_binomial(3, -1, 10).is_zero());
        assert!(gaussian_binomial(3, 4, 10).is_zero());
        assert_eq!(gaussian_binomial(2, 1, 10), s(&[(0, 1), (1, 1)], 10));
        assert_eq!(
            gaussian_binomial(4, 2, 10),
            s(&[(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)], 10)
        );
        assert_eq!(gaussian_binomial(0, 0, 10), QSeries::one(10));
    }

    #[test]
    fn substitution() {
        assert_eq!(
            s(&[(0, 1), (1, 1)], 5).substitute_q_squared(),
            s(&[(0, 1), (2, 1)], 10)
        );
        assert_eq!(
            QSeries::q_power(-1, 5).substitute_q_squared(),
            QSeries::q_power(-2, 10)
        );
        assert_eq!(
            pochhammer(2, 5).substitute_q_squared(),
            s(&[(0, 1), (2, -1), (4, -1), (6, 1)], 10)
        );
    }

    #[test]
    fn shift_keeps_known_range() {
        let a = s(&[(0, 1), (2, 3)], 4).shift(-3);
        assert_eq!(a.trunc(), 1);
        assert_eq!(a, s(&[(-3, 1), (-1, 3)], 1));
    }

    #[test]
    fn large_coefficients_do_not_overflow() {
        let p = inv_pochhammer(400, 400);
        // p(400) = 6727090051741041926
        assert_eq!(p.coeff(400), "6727090051741041926".parse::<BigInt>().unwrap());
        let sq = &p * &p;
        assert!(sq.coeff(400) > BigInt::from(u64::MAX));
    }

    #[test]
    fn json_shape() {
        let a = s(&[(-1, 2), (3, -5)], 6);
        let j = serde_json::to_string(&a).unwrap();
        assert_eq!(j, r#"{"trunc":6,"terms":[[-1,"2"],[3,"-5"]]}"#);
        let back: QSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<QSeries>(r#"{"trunc":1,"terms":[[2,"1"]]}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(s(&[(0, 1), (1, -1), (3, 2)], 4).to_string(), "1 - q + 2*q^3 + O(q^5)");
        assert_eq!(QSeries::zero(2).to_string(), "0 + O(q^3)");
    }

    #[test]
    fn first_difference_respects_truncation() {
        let a = s(&[(0, 1), (5, 1)], 10);
        let b = s(&[(0, 1)], 4);
        assert_eq!(a.first_difference(&b, 100), None);
        let c = s(&[(0, 1), (3, 1)], 4);
        assert_eq!(a.first_difference(&c, 100), Some(3));
    }
}
