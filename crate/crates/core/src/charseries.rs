//! Truncated characters in `z_1, ..., z_l` with [`QSeries`] coefficients.
//!
//! A [`CharSeries`] only ever describes a finite window: weight exponents are
//! bounded componentwise by explicit caps and every coefficient is known up to
//! a shared q-order. Nothing is inferred about exponents outside the window.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// Finite window on which a character is known.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    /// `n_i <= z[i]` for every stored weight exponent.
    pub z: Vec<u32>,
    /// Shared q truncation order.
    pub q: i64,
}

impl Window {
    pub fn new(z: Vec<u32>, q: i64) -> Self {
        Window { z, q }
    }

    pub fn uniform(rank: usize, z_cap: u32, q: i64) -> Self {
        Window {
            z: vec![z_cap; rank],
            q,
        }
    }

    pub fn rank(&self) -> usize {
        self.z.len()
    }

    pub fn contains(&self, n: &[u32]) -> bool {
        n.len() == self.z.len() && n.iter().zip(&self.z).all(|(a, b)| a <= b)
    }

    /// All exponent vectors inside the caps, lexicographically ordered.
    pub fn exponents(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::with_capacity(self.z.len())];
        for &cap in &self.z {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=cap).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    fn intersect(&self, other: &Window) -> Window {
        Window {
            z: self.z.iter().zip(&other.z).map(|(a, b)| *a.min(b)).collect(),
            q: self.q.min(other.q),
        }
    }
}

/// `sum_n A^n(q) z^n` restricted to a [`Window`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharSeries {
    window: Window,
    coeffs: BTreeMap<Vec<u32>, QSeries>,
}

impl CharSeries {
    pub fn zero(window: Window) -> Self {
        assert!(window.rank() >= 1, "character needs at least one z variable");
        CharSeries {
            window,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant character `1`.
    pub fn one(window: Window) -> Self {
        let mut c = Self::zero(window);
        let q = c.window.q;
        c.add_at(&vec![0; c.rank()], &QSeries::one(q));
        c
    }

    pub fn rank(&self) -> usize {
        self.window.rank()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Coefficient of `z^n`; absent entries are zero up to the window's q-order.
    pub fn coeff(&self, n: &[u32]) -> QSeries {
        self.coeffs
            .get(n)
            .cloned()
            .unwrap_or_else(|| QSeries::zero(self.window.q))
    }

    /// Truncation order of the coefficient at `n`.
    pub fn coeff_order(&self, n: &[u32]) -> i64 {
        self.coeffs.get(n).map_or(self.window.q, QSeries::trunc)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &QSeries)> + '_ {
        self.coeffs.iter().map(|(n, s)| (n.as_slice(), s))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `series * z^n`. Exponents outside the window are ignored.
    pub fn add_at(&mut self, n: &[u32], series: &QSeries) {
        if !self.window.contains(n) {
            return;
        }
        let q = self.window.q;
        let entry = self
            .coeffs
            .entry(n.to_vec())
            .or_insert_with(|| QSeries::zero(q));
        *entry += series;
        if entry.is_zero() && entry.trunc() >= q {
            self.coeffs.remove(n);
        }
    }

    /// Replaces the coefficient at `n` outright.
    pub fn set(&mut self, n: &[u32], series: QSeries) {
        if !self.window.contains(n) {
            return;
        }
        let series = series.truncated(self.window.q);
        if series.is_zero() && series.trunc() >= self.window.q {
            self.coeffs.remove(n);
        } else {
            self.coeffs.insert(n.to_vec(), series);
        }
    }

    fn combine(&self, other: &CharSeries, negate: bool) -> CharSeries {
        assert_eq!(self.rank(), other.rank(), "characters of different rank");
        let window = self.window.intersect(&other.window);
        let mut out = CharSeries::zero(window);
        for (n, s) in &self.coeffs {
            out.add_at(n, s);
        }
        for (n, s) in &other.coeffs {
            if negate {
                out.add_at(n, &-s);
            } else {
                out.add_at(n, s);
            }
        }
        out
    }

    pub fn add(&self, other: &CharSeries) -> CharSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &CharSeries) -> CharSeries {
        self.combine(other, true)
    }

    /// Multiplies by `q^{q_shift} z^{z_shifts}`. Terms pushed outside the window
    /// (or to negative exponents) are dropped.
    pub fn scale_by_monomial(&self, q_shift: i64, z_shifts: &[i64]) -> CharSeries {
        assert_eq!(z_shifts.len(), self.rank(), "shift vector has wrong length");
        let mut out = CharSeries::zero(self.window.clone());
        for (n, s) in &self.coeffs {
            let moved: Option<Vec<u32>> = n
                .iter()
                .zip(z_shifts)
                .map(|(a, d)| u32::try_from(i64::from(*a) + d).ok())
                .collect();
            if let Some(m) = moved {
                out.add_at(&m, &s.shift(q_shift).truncated(self.window.q));
            }
        }
        out
    }

    /// `z_i -> z_i q`: the coefficient at `n` picks up `q^{n_1 + ... + n_l}`.
    pub fn dilate(&self) -> CharSeries {
        let mut out = CharSeries::zero(self.window.clone());
        for (n, s) in &self.coeffs {
            let total: i64 = n.iter().map(|v| i64::from(*v)).sum();
            out.add_at(n, &s.shift(total).truncated(self.window.q));
        }
        out
    }

    /// First `(n, exponent)` where the two characters disagree on their shared window.
    pub fn first_difference(&self, other: &CharSeries) -> Option<(Vec<u32>, i64)> {
        let window = self.window.intersect(&other.window);
        window.exponents().into_iter().find_map(|n| {
            self.coeff(&n)
                .first_difference(&other.coeff(&n), window.q)
                .map(|e| (n, e))
        })
    }

    /// Applies `q -> q^{q_scale}` and `z_i -> q^{offset_i} * (z or 1)`.
    ///
    /// The truncation order of each output coefficient is the smallest
    /// `q_scale * trunc(n) + sum_i n_i * offset_i` over the window exponents
    /// feeding it. Only the window is seen: when a variable collapses to `1` the
    /// caller must size the caps so that exponents outside them cannot land at
    /// or below the reported order.
    pub fn specialize(&self, spec: &Specialization) -> Result<SpecializedSeries> {
        if spec.q_scale <= 0 {
            return Err(Error::InvalidQScale(spec.q_scale));
        }
        if spec.vars.len() != self.rank() {
            return Err(Error::SpecializationArity {
                expected: self.rank(),
                given: spec.vars.len(),
            });
        }
        let graded = spec.vars.iter().any(|v| v.target == Collapse::Z);
        let offset = |n: &[u32]| -> i64 {
            n.iter()
                .zip(&spec.vars)
                .map(|(a, v)| i64::from(*a) * v.q_offset)
                .sum()
        };
        let z_degree = |n: &[u32]| -> u32 {
            n.iter()
                .zip(&spec.vars)
                .filter(|(_, v)| v.target == Collapse::Z)
                .map(|(a, _)| *a)
                .sum()
        };

        let mut orders: BTreeMap<u32, i64> = BTreeMap::new();
        for n in self.window.exponents() {
            let order = spec.q_scale * self.coeff_order(&n) + offset(&n);
            let slot = orders.entry(z_degree(&n)).or_insert(order);
            *slot = (*slot).min(order);
        }
        if graded {
            // Only z-degrees whose whole fiber fits inside every collapsing cap.
            let max_degree = self
                .window
                .z
                .iter()
                .zip(&spec.vars)
                .filter(|(_, v)| v.target == Collapse::Z)
                .map(|(c, _)| *c)
                .min()
                .unwrap_or(0);
            orders.retain(|d, _| *d <= max_degree);
        }

        let mut outputs: BTreeMap<u32, QSeries> = orders
            .iter()
            .map(|(d, o)| (*d, QSeries::zero(*o)))
            .collect();
        for (n, s) in &self.coeffs {
            let Some(out) = outputs.get_mut(&z_degree(n)) else {
                continue;
            };
            let shifted = s.substitute_q_power(spec.q_scale).shift(offset(n));
            for (e, c) in shifted.terms() {
                out.add_term(e, c.clone());
            }
        }
        if graded {
            Ok(SpecializedSeries::Graded(outputs))
        } else {
            let series = outputs
                .into_values()
                .next()
                .expect("window always contains the zero exponent");
            Ok(SpecializedSeries::Bare(series))
        }
    }

    /// One line per stored coefficient, lexicographic in `n`.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let caps: Vec<String> = self.window.z.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "# l={} z<=({}) q<={}", self.rank(), caps.join(","), self.window.q);
        for (n, s) in &self.coeffs {
            let idx: Vec<String> = n.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "({})\t{}", idx.join(","), s);
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct CharSeriesRepr {
    l: usize,
    caps: Window,
    terms: Vec<(Vec<u32>, QSeries)>,
}

impl Serialize for CharSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CharSeriesRepr {
            l: self.rank(),
            caps: self.window.clone(),
            terms: self
                .coeffs
                .iter()
                .map(|(n, s)| (n.clone(), s.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CharSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CharSeriesRepr::deserialize(deserializer)?;
        if repr.l != repr.caps.rank() || repr.l == 0 {
            return Err(D::Error::custom("rank does not match caps"));
        }
        let mut c = CharSeries::zero(repr.caps);
        for (n, s) in repr.terms {
            if !c.window.contains(&n) {
                return Err(D::Error::custom(format!("exponent {n:?} outside caps")));
            }
            c.set(&n, s);
        }
        Ok(c)
    }
}

/// Where a z variable goes under a specialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Collapse {
    /// `z_i -> q^offset * z`
    Z,
    /// `z_i -> q^offset`
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariableMap {
    pub q_offset: i64,
    pub target: Collapse,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub q_scale: i64,
    pub vars: Vec<VariableMap>,
}

impl Specialization {
    /// `q -> q^2, z_1 -> q^{-2} z, z_2 -> q^{-1} z`.
    pub fn spec1() -> Self {
        Specialization {
            q_scale: 2,
            vars: vec![
                VariableMap { q_offset: -2, target: Collapse::Z },
                VariableMap { q_offset: -1, target: Collapse::Z },
            ],
        }
    }

    /// `q -> q^2, z_1 -> q^{-2}, z_2 -> q^{-1}`.
    pub fn spec2() -> Self {
        Specialization {
            q_scale: 2,
            vars: vec![
                VariableMap { q_offset: -2, target: Collapse::One },
                VariableMap { q_offset: -1, target: Collapse::One },
            ],
        }
    }
}

/// Result of [`CharSeries::specialize`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpecializedSeries {
    /// `sum_n B_n(q) z^n`, keyed by the single z exponent.
    Graded(#[serde(with = "graded_terms")] BTreeMap<u32, QSeries>),
    /// All variables collapsed to powers of q.
    Bare(#[serde(with = "bare_series")] QSeries),
}

impl SpecializedSeries {
    pub fn has_negative_exponents(&self) -> bool {
        match self {
            SpecializedSeries::Graded(m) => m
                .values()
                .any(|s| s.min_exponent().is_some_and(|e| e < 0)),
            SpecializedSeries::Bare(s) => s.min_exponent().is_some_and(|e| e < 0),
        }
    }

    pub fn to_table(&self) -> String {
        match self {
            SpecializedSeries::Graded(m) => m
                .iter()
                .map(|(n, s)| format!("z^{n}\t{s}\n"))
                .collect(),
            SpecializedSeries::Bare(s) => format!("{s}\n"),
        }
    }
}

mod graded_terms {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Terms {
        terms: Vec<(u32, QSeries)>,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, QSeries>, s: S) -> std::result::Result<S::Ok, S::Error> {
        Terms {
            terms: m.iter().map(|(n, q)| (*n, q.clone())).collect(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<u32, QSeries>, D::Error> {
        Ok(Terms::deserialize(d)?.terms.into_iter().collect())
    }
}

mod bare_series {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Bare {
        series: QSeries,
    }

    pub fn serialize<S: Serializer>(q: &QSeries, s: S) -> std::result::Result<S::Ok, S::Error> {
        Bare { series: q.clone() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<QSeries, D::Error> {
        Ok(Bare::deserialize(d)?.series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn w(z: &[u32], q: i64) -> Window {
        Window::new(z.to_vec(), q)
    }

    #[test]
    fn scale_constant_by_monomial() {
        let one = CharSeries::one(w(&[4, 4], 10));
        let s = one.scale_by_monomial(2, &[2, 0]);
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coeff(&[2, 0]), QSeries::q_power(2, 10));
    }

    #[test]
    fn sub_self_is_zero() {
        let mut c = CharSeries::one(w(&[3, 3], 8));
        c.add_at(&[1, 2], &QSeries::from_terms([(3, 2), (5, -1)], 8));
        assert_eq!(c.sub(&c).num_terms(), 0);
    }

    #[test]
    fn scale_drops_terms_outside_caps() {
        let mut c = CharSeries::zero(w(&[2, 2], 8));
        c.add_at(&[2, 1], &QSeries::one(8));
        c.add_at(&[0, 1], &QSeries::one(8));
        let s = c.scale_by_monomial(0, &[1, 0]);
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coeff(&[1, 1]), QSeries::one(8));
    }

    #[test]
    fn dilate_examples() {
        let one = CharSeries::one(w(&[2, 2], 6));
        assert_eq!(one.dilate(), one);
        let mut c = CharSeries::zero(w(&[2, 2], 6));
        c.add_at(&[1, 1], &QSeries::one(6));
        assert_eq!(c.dilate().coeff(&[1, 1]), QSeries::q_power(2, 6));
    }

    #[test]
    fn specialize_single_terms() {
        let mut c = CharSeries::zero(w(&[1, 1], 3));
        c.add_at(&[1, 0], &QSeries::q_power(1, 3));
        let SpecializedSeries::Graded(g) = c.specialize(&Specialization::spec1()).unwrap() else {
            panic!("spec1 is graded");
        };
        assert_eq!(g[&1].coeff(0), BigInt::from(1));
        assert_eq!(g[&1].num_terms(), 1);

        let mut c = CharSeries::zero(w(&[1, 1], 3));
        c.add_at(&[0, 1], &QSeries::q_power(1, 3));
        let SpecializedSeries::Bare(b) = c.specialize(&Specialization::spec2()).unwrap() else {
            panic!("spec2 is bare");
        };
        assert_eq!(b.coeff(1), BigInt::from(1));
        assert_eq!(b.num_terms(), 1);
    }

    #[test]
    fn specialize_reports_window_order() {
        let c = CharSeries::one(w(&[3, 2], 10));
        let SpecializedSeries::Graded(g) = c.specialize(&Specialization::spec1()).unwrap() else {
            panic!();
        };
        // degree n only appears while every split fits under both caps
        assert_eq!(g.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(g[&0].trunc(), 20);
        assert_eq!(g[&2].trunc(), 16);
        let SpecializedSeries::Bare(b) = c.specialize(&Specialization::spec2()).unwrap() else {
            panic!();
        };
        assert_eq!(b.trunc(), 20 - 6 - 2);
    }

    #[test]
    fn specialize_rejects_bad_scale() {
        let c = CharSeries::one(w(&[1, 1], 3));
        let mut spec = Specialization::spec1();
        spec.q_scale = 0;
        assert_eq!(c.specialize(&spec), Err(Error::InvalidQScale(0)));
        let spec = Specialization { q_scale: 1, vars: vec![] };
        assert!(matches!(c.specialize(&spec), Err(Error::SpecializationArity { .. })));
    }

    #[test]
    fn json_shape() {
        let mut c = CharSeries::one(w(&[1, 1], 2));
        c.add_at(&[1, 0], &QSeries::q_power(1, 2));
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(
            j,
            r#"{"l":2,"caps":{"z":[1,1],"q":2},"terms":[[[0,0],{"trunc":2,"terms":[[0,"1"]]}],[[1,0],{"trunc":2,"terms":[[1,"1"]]}]]}"#
        );
        let back: CharSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);

        let b = SpecializedSeries::Bare(QSeries::one(3));
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"{"kind":"bare","series":{"trunc":3,"terms":[[0,"1"]]}}"#
        );
    }
}
