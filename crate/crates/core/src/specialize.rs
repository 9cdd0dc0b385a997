//! Two older one-variable character formulas and their comparison with the
//! two-variable characters.
//!
//! * `spec_1`: `q -> q^2, z_1 -> q^{-2} z, z_2 -> q^{-1} z`, compared with a
//!   fermionic sum over `2k` multiplicities `m_{ia}` ([`chi_fjmmt`]); defined
//!   for weights with `k_2 = 0`.
//! * `spec_2`: `q -> q^2, z_1 -> q^{-2}, z_2 -> q^{-1}`, which turns the degree
//!   of a configuration into `sum_t t a_t`, compared with an alternating sum of
//!   the series `chi_{a,b}[N]` ([`chi_fjmmt2`]).

use rayon::prelude::*;

use crate::admissible::{position_sum_series, HighestWeight, Initial};
use crate::charseries::{CharSeries, Specialization, SpecializedSeries, Window};
use crate::error::{Error, Result};
use crate::fermionic::{a_coefficient, character_fermionic};
use crate::qseries::{gaussian_binomial, inv_pochhammer, QSeries};
use crate::report::{Check, Report, Violation};

/// Quadratic form and linear terms of the `spec_1` comparison formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FjmmtData {
    pub k: usize,
    pub k0: usize,
    /// `2k x 2k`, blocks `(A2 B; B A2)` with `A2_ab = 2 min(a,b)` and
    /// `B_ab = max(0, a+b-k)`. Index `a-1` is `m_{1a}`, index `k+a-1` is `m_{2a}`.
    pub matrix: Vec<Vec<i64>>,
    /// `(0,..,0, 1, 2, .., k-k0 | 0,..,0)`.
    pub c: Vec<i64>,
    /// `-(diag A) + 2c`, as displayed next to the general formula.
    pub display_linear: Vec<i64>,
    /// `display_linear` plus the `q^{l_2}` weights `(0,..,0 | 1, 2, .., k)`:
    /// the full linear exponent of a summand.
    pub linear: Vec<i64>,
}

impl FjmmtData {
    pub fn new(k0: usize, k1: usize) -> Result<Self> {
        let k = k0 + k1;
        if k == 0 {
            return Err(Error::InvalidWeight("level must be at least 1".into()));
        }
        let a2 = |a: usize, b: usize| 2 * a.min(b) as i64;
        let b3 = |a: usize, b: usize| (a + b).saturating_sub(k) as i64;
        let matrix: Vec<Vec<i64>> = (0..2 * k)
            .map(|r| {
                (0..2 * k)
                    .map(|s| {
                        let (a, b) = (r % k + 1, s % k + 1);
                        if (r < k) == (s < k) {
                            a2(a, b)
                        } else {
                            b3(a, b)
                        }
                    })
                    .collect()
            })
            .collect();
        let c: Vec<i64> = (0..2 * k)
            .map(|i| if i >= k0 && i < k { (i - k0 + 1) as i64 } else { 0 })
            .collect();
        let display_linear: Vec<i64> = (0..2 * k).map(|i| -matrix[i][i] + 2 * c[i]).collect();
        let linear = display_linear
            .iter()
            .enumerate()
            .map(|(i, v)| if i >= k { v + (i - k + 1) as i64 } else { *v })
            .collect();
        Ok(FjmmtData {
            k,
            k0,
            matrix,
            c,
            display_linear,
            linear,
        })
    }

    fn quadratic(&self, m: &[u32]) -> i64 {
        let mut s = 0;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                s += a * i64::from(m[i]) * i64::from(m[j]);
            }
        }
        s
    }

    /// Full exponent `m A m + linear . m` of the summand at `m`.
    pub fn exponent(&self, m: &[u32]) -> i64 {
        self.quadratic(m)
            + m.iter()
                .zip(&self.linear)
                .map(|(x, l)| i64::from(*x) * l)
                .sum::<i64>()
    }
}

/// Multiplicity vectors of length `2k` with `sum_a a (m_{1a} + m_{2a}) = n`.
fn graded_multiplicities(k: usize, n: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, slot: usize, left: u32, m: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot == 2 * k {
            if left == 0 {
                out.push(m.clone());
            }
            return;
        }
        let part = (slot % k + 1) as u32;
        for v in 0..=left / part {
            m.push(v);
            rec(k, slot + 1, left - v * part, m, out);
            m.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, 0, n, &mut Vec::new(), &mut out);
    out
}

fn k2_zero(weight: &HighestWeight) -> Result<(usize, usize)> {
    let (k0, k1, k2) = weight.triple()?;
    if k2 != 0 {
        return Err(Error::InvalidWeight(format!(
            "{weight}: the spec_1 comparison formula needs k_2 = 0"
        )));
    }
    Ok((k0 as usize, k1 as usize))
}

/// `sum_n sum_m q^{m A m + linear . m} / prod (q^2)_{m_{ia}} z^n` for
/// `n <= z_cap`, each coefficient to order `q`.
pub fn chi_fjmmt(weight: &HighestWeight, z_cap: u32, q: i64) -> Result<SpecializedSeries> {
    let (k0, k1) = k2_zero(weight)?;
    let data = FjmmtData::new(k0, k1)?;
    let graded = (0..=z_cap)
        .into_par_iter()
        .map(|n| {
            let mut total = QSeries::zero(q);
            for m in graded_multiplicities(data.k, n) {
                let e = data.exponent(&m);
                if e > q {
                    continue;
                }
                // every factor is a series in q^2
                let half = (q - e).div_euclid(2);
                let mut term = QSeries::one(half);
                for v in &m {
                    term = &term * &inv_pochhammer(*v, half);
                }
                total += &term.substitute_q_squared().shift(e).truncated(q);
            }
            (n, total)
        })
        .collect();
    Ok(SpecializedSeries::Graded(graded))
}

/// Quadratic form and shift vector of `chi_{a,b}[N]` at level `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fjmmt2Data {
    pub k: usize,
    pub a: usize,
    pub b: usize,
    /// `A_ij = 2 min(i,j) + max(i+j-k, 0)`, 1-based `i, j` stored at `i-1, j-1`.
    pub matrix: Vec<Vec<i64>>,
    /// `(0 x a, 1, .., b, b+2, b+4, .., 2k-2a-b)`.
    pub r: Vec<i64>,
}

impl Fjmmt2Data {
    pub fn new(a: usize, b: usize, k: usize) -> Result<Self> {
        if k == 0 || a + b > k {
            return Err(Error::OutOfDomain { a: a as u32, b: b as u32, k: k as u32 });
        }
        let matrix = (1..=k)
            .map(|i| {
                (1..=k)
                    .map(|j| (2 * i.min(j) + (i + j).saturating_sub(k)) as i64)
                    .collect()
            })
            .collect();
        let mut r = vec![0i64; a];
        r.extend((1..=b).map(|v| v as i64));
        r.extend((1..=k - a - b).map(|t| (b + 2 * t) as i64));
        Ok(Fjmmt2Data { k, a, b, matrix, r })
    }

    /// `(A m)_j` for 0-based `j`.
    fn row_dot(&self, j: usize, m: &[u32]) -> i64 {
        self.matrix[j]
            .iter()
            .zip(m)
            .map(|(a, x)| a * i64::from(*x))
            .sum()
    }

    /// `Q(m) + r . m` with `Q(m) = (A m, m)/2 - sum_j A_jj m_j / 2`.
    pub fn exponent(&self, m: &[u32]) -> i64 {
        let mut s = 0;
        for i in 0..self.k {
            let mi = i64::from(m[i]);
            s += self.matrix[i][i] * mi * (mi - 1) / 2 + self.r[i] * mi;
            for j in i + 1..self.k {
                s += self.matrix[i][j] * mi * i64::from(m[j]);
            }
        }
        s
    }

    /// Every `m` whose exponent is at most `q`. The exponent never decreases
    /// when an entry grows, which bounds the search.
    pub fn multiplicities(&self, q: i64) -> Vec<Vec<u32>> {
        fn rec(d: &Fjmmt2Data, q: i64, slot: usize, m: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if slot == d.k {
                out.push(m.clone());
                return;
            }
            loop {
                rec(d, q, slot + 1, m, out);
                m[slot] += 1;
                if d.exponent(m) > q {
                    m[slot] = 0;
                    return;
                }
            }
        }
        let mut out = Vec::new();
        if q >= 0 {
            rec(self, q, 0, &mut vec![0; self.k], &mut out);
        }
        out
    }

    /// Smallest `N` for which every bracket feeding order `q` has stabilized.
    pub fn stabilizing_length(&self, q: i64) -> u64 {
        let mut n = 0i64;
        for m in self.multiplicities(q) {
            for j in 0..self.k {
                if m[j] == 0 {
                    continue;
                }
                let need = q + self.row_dot(j, &m) - self.matrix[j][j] + self.r[j];
                let jj = (j + 1) as i64;
                n = n.max((need + jj - 1).div_euclid(jj));
            }
        }
        n as u64
    }
}

/// Length bound `N` of `chi_{a,b}[N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Length {
    Finite(u64),
    Infinite,
}

/// `chi_{a,b}[N] = sum_m q^{Q(m) + r.m} prod_{m_j != 0}
/// [jN - (A m)_j + A_jj - r_j + m_j over m_j]` to order `q`.
///
/// `N = infinity` uses the finite length from [`Fjmmt2Data::stabilizing_length`].
pub fn chi_fjmmt2(a: usize, b: usize, k: usize, length: Length, q: i64) -> Result<QSeries> {
    let data = Fjmmt2Data::new(a, b, k)?;
    let n = match length {
        Length::Finite(n) => n as i64,
        Length::Infinite => data.stabilizing_length(q) as i64,
    };
    let mut total = QSeries::zero(q);
    for m in data.multiplicities(q) {
        let e = data.exponent(&m);
        let rest = q - e;
        let mut term = QSeries::one(rest);
        for j in 0..k {
            if m[j] == 0 {
                continue;
            }
            let mj = i64::from(m[j]);
            let top = (j as i64 + 1) * n - data.row_dot(j, &m) + data.matrix[j][j] - data.r[j] + mj;
            term = &term * &gaussian_binomial(top, mj, rest);
        }
        total += &term.shift(e);
    }
    Ok(total)
}

/// The `N -> infinity` limit written directly: brackets replaced by `1/(q)_{m_j}`.
pub fn chi_fjmmt2_limit(a: usize, b: usize, k: usize, q: i64) -> Result<QSeries> {
    let data = Fjmmt2Data::new(a, b, k)?;
    let mut total = QSeries::zero(q);
    for m in data.multiplicities(q) {
        let e = data.exponent(&m);
        let mut term = QSeries::one(q - e);
        for v in &m {
            term = &term * &inv_pochhammer(*v, q - e);
        }
        total += &term.shift(e);
    }
    Ok(total)
}

/// The `(a, b)` pairs of the alternating sum for a weight, with signs.
///
/// A pair with `a + b = k + 1` (only possible when `k_2 = 0`) lies outside the
/// formula's domain; since `a_0 + a_1 <= k` anyway, its configuration set is
/// the one of `(a, k - a)`, and that pair is used instead.
pub fn alternating_terms(weight: &HighestWeight) -> Result<Vec<(i8, usize, usize)>> {
    let (k0, k1, k2) = weight.triple()?;
    let (k0, k1, k) = (k0 as usize, k1 as usize, (k0 + k1 + k2) as usize);
    let s = k0 + k1;
    let mut out: Vec<(i8, usize, usize)> = (0..=k0).map(|a| (1, a, s - a)).collect();
    out.extend((0..k0).map(|a| (-1, a, (s + 1 - a).min(k - a))));
    Ok(out)
}

/// The alternating sum of `chi_{a,b}[infinity]` for `weight`, to order `q`.
pub fn spec2_fjmmt2(weight: &HighestWeight, q: i64) -> Result<QSeries> {
    let k = weight.level() as usize;
    let mut total = QSeries::zero(q);
    for (sign, a, b) in alternating_terms(weight)? {
        let c = chi_fjmmt2(a, b, k, Length::Infinite, q)?;
        total = if sign > 0 { &total + &c } else { &total - &c };
    }
    Ok(total)
}

/// `spec_2` of the fermionic character to order `q`.
///
/// A configuration with `P` particles has `sum_t t a_t >= 2 (P - k)` since only
/// `k` of them fit at positions 0 and 1, so only `n_1 + n_2 <= k + q/2` is
/// needed, and cell `(n_1, n_2)` only up to order `(q + 2 n_1 + n_2) / 2`.
pub fn spec2_fermionic(weight: &HighestWeight, q: i64) -> Result<QSeries> {
    weight.triple()?;
    let k = i64::from(weight.level());
    let max_particles = (k + q.div_euclid(2)).max(0) as u32;
    let cells: Vec<(u32, u32)> = (0..=max_particles)
        .flat_map(|p| (0..=p).map(move |n1| (n1, p - n1)))
        .collect();
    let parts: Vec<QSeries> = cells
        .into_par_iter()
        .map(|(n1, n2)| {
            let offset = 2 * i64::from(n1) + i64::from(n2);
            let order = (q + offset).div_euclid(2);
            a_coefficient(weight, n1, n2, order).map(|a| a.substitute_q_squared().shift(-offset))
        })
        .collect::<Result<_>>()?;
    let mut total = QSeries::zero(q);
    for p in &parts {
        for (e, c) in p.terms() {
            total.add_term(e, c.clone());
        }
    }
    Ok(total)
}

/// `spec_2` of the brute-force character: `sum q^{sum_t t a_t}` over `W(weight)`.
pub fn spec2_oracle(weight: &HighestWeight, q: i64) -> Result<QSeries> {
    weight.triple()?;
    position_sum_series(2, Initial::Weight(weight.clone()), q.max(0) as u64)
}

/// The same series assembled from the exact-prefix sets `a_0 = a, a_1 = b` with
/// `a <= k_0`, `a + b <= k_0 + k_1`, which partition the configurations of `W(weight)`.
pub fn spec2_prefix_union(weight: &HighestWeight, q: i64) -> Result<QSeries> {
    let (k0, k1, _) = weight.triple()?;
    let level = weight.level();
    let mut total = QSeries::zero(q);
    for a in 0..=k0 {
        for b in 0..=(k0 + k1 - a) {
            let part = position_sum_series(2, Initial::Prefix { level, a, b }, q.max(0) as u64)?;
            total += &part;
        }
    }
    Ok(total)
}

fn record_series(check: &mut Check, case: &str, lhs: &QSeries, rhs: &QSeries) {
    let order = lhs.trunc().min(rhs.trunc());
    let failure = lhs.first_difference(rhs, order).map(|e| {
        format!("q^{e}: {} vs {}", lhs.coeff(e), rhs.coeff(e))
    });
    check.record(|| case.to_string(), failure);
}

/// `spec_1` of the fermionic character on `n_1, n_2 <= z_cap` at order `q`
/// against [`chi_fjmmt`]. Degree `n` is compared to order `2q - 2n`.
pub fn verify_spec1(weight: &HighestWeight, z_cap: u32, q: i64) -> Result<Report> {
    k2_zero(weight)?;
    let window = Window::uniform(2, z_cap, q);
    let ours = character_fermionic(weight, &window)?.specialize(&Specialization::spec1())?;
    let theirs = chi_fjmmt(weight, z_cap, 2 * q)?;
    let (SpecializedSeries::Graded(ours), SpecializedSeries::Graded(theirs)) = (ours, theirs) else {
        unreachable!("spec_1 keeps a z variable");
    };
    let mut check = Check::new(format!("spec_1 {weight}"), String::new());
    let mut lowest = i64::MAX;
    for (n, s) in &ours {
        let t = theirs.get(n).cloned().unwrap_or_else(|| QSeries::zero(2 * q));
        lowest = lowest.min(s.trunc());
        record_series(&mut check, &format!("z^{n}"), s, &t);
        if s.min_exponent().is_some_and(|e| e < 0) {
            check.violations.push(Violation {
                case: format!("z^{n}"),
                detail: "negative q exponent".into(),
            });
        }
    }
    check.scope = format!("z<={z_cap}, q<={lowest} on every degree");
    let mut report = Report::new(format!("spec_1 comparison {weight}"));
    report.push(check);
    Ok(report)
}

/// `spec_2` of the fermionic character against the alternating sum, the
/// single-term form when `k_0 = 0` or `k_2 = 0`, the brute-force series and
/// the prefix-set decomposition, all to order `q`.
pub fn verify_spec2(weight: &HighestWeight, q: i64) -> Result<Report> {
    let (k0, k1, k2) = weight.triple()?;
    let k = weight.level() as usize;
    let ours = spec2_fermionic(weight, q)?;
    let scope = format!("q<={q}");
    let mut report = Report::new(format!("spec_2 comparison {weight}"));

    let terms = alternating_terms(weight)?;
    let clamped = k2 == 0 && k0 > 0 && terms.len() > 1;
    let mut alt = Check::new(
        format!("alternating sum {weight}"),
        if clamped {
            format!("{scope}, (a,k+1-a) read as (a,k-a)")
        } else {
            scope.clone()
        },
    );
    record_series(&mut alt, &weight.to_string(), &ours, &spec2_fjmmt2(weight, q)?);
    report.push(alt);

    if k0 == 0 || k2 == 0 {
        let mut single = Check::new(format!("single term {weight}"), scope.clone());
        let theirs = chi_fjmmt2(k0 as usize, k1 as usize, k, Length::Infinite, q)?;
        record_series(&mut single, &weight.to_string(), &ours, &theirs);
        report.push(single);
    }

    let oracle = spec2_oracle(weight, q)?;
    let mut brute = Check::new(format!("brute force {weight}"), scope.clone());
    record_series(&mut brute, &weight.to_string(), &ours, &oracle);
    let mut nonneg = ours.min_exponent().is_none_or(|e| e >= 0);
    nonneg &= oracle.min_exponent().is_none_or(|e| e >= 0);
    if !nonneg {
        brute.violations.push(Violation {
            case: weight.to_string(),
            detail: "negative q exponent".into(),
        });
    }
    report.push(brute);

    let mut union = Check::new(format!("prefix union {weight}"), scope);
    record_series(&mut union, &weight.to_string(), &oracle, &spec2_prefix_union(weight, q)?);
    report.push(union);
    Ok(report)
}

/// Character produced by the `spec_1` route, for the CLI: `spec_1` of `c`.
pub fn spec1_of(c: &CharSeries) -> Result<SpecializedSeries> {
    c.specialize(&Specialization::spec1())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(p: &[u32]) -> HighestWeight {
        HighestWeight::new(p.to_vec()).unwrap()
    }

    #[test]
    fn level_two_matrix_and_linear_terms() {
        let d = FjmmtData::new(2, 0).unwrap();
        assert_eq!(
            d.matrix,
            vec![vec![2, 2, 0, 1], vec![2, 4, 1, 2], vec![0, 1, 2, 2], vec![1, 2, 2, 4]]
        );
        assert_eq!(d.linear, vec![-2, -4, -1, -2]);
        assert_eq!(FjmmtData::new(1, 1).unwrap().linear, vec![-2, -2, -1, -2]);
        assert_eq!(FjmmtData::new(0, 2).unwrap().linear, vec![0, 0, -1, -2]);
        assert_eq!(FjmmtData::new(0, 2).unwrap().c, vec![1, 2, 0, 0]);
        for m in graded_multiplicities(2, 5) {
            let (a, b, c, e) = (m[0] as i64, m[1] as i64, m[2] as i64, m[3] as i64);
            let quad = 2 * a * a + 4 * a * b + 4 * b * b + 2 * b * c + 2 * c * c
                + 2 * a * e + 4 * b * e + 4 * c * e + 4 * e * e;
            assert_eq!(d.exponent(&m), quad - 2 * a - 4 * b - c - 2 * e);
        }
    }

    #[test]
    fn multiplicity_vectors() {
        assert_eq!(graded_multiplicities(2, 0), vec![vec![0, 0, 0, 0]]);
        // partitions of 3 into parts 1, 2 in two colors
        assert_eq!(graded_multiplicities(2, 3).len(), 8);
        assert_eq!(graded_multiplicities(1, 4).len(), 5);
    }

    #[test]
    fn fjmmt_constant_term() {
        let SpecializedSeries::Graded(g) = chi_fjmmt(&hw(&[1, 1, 0]), 3, 12).unwrap() else {
            panic!()
        };
        assert_eq!(g[&0], QSeries::one(12));
        assert!(chi_fjmmt(&hw(&[1, 0, 1]), 3, 12).is_err());
    }

    #[test]
    fn fjmmt2_data() {
        let d = Fjmmt2Data::new(1, 1, 4).unwrap();
        assert_eq!(d.r, vec![0, 1, 3, 5]);
        assert_eq!(Fjmmt2Data::new(0, 0, 3).unwrap().r, vec![2, 4, 6]);
        assert_eq!(Fjmmt2Data::new(0, 2, 2).unwrap().r, vec![1, 2]);
        assert_eq!(
            Fjmmt2Data::new(0, 0, 2).unwrap().matrix,
            vec![vec![2, 3], vec![3, 6]]
        );
        assert!(matches!(
            Fjmmt2Data::new(2, 1, 2),
            Err(Error::OutOfDomain { a: 2, b: 1, k: 2 })
        ));
        let s = chi_fjmmt2(0, 1, 2, Length::Finite(0), 10).unwrap();
        assert_eq!(s.coeff(0), 1.into());
    }

    #[test]
    fn stabilized_matches_limit() {
        for k in 1..=3 {
            for a in 0..=k {
                for b in 0..=(k - a) {
                    let lim = chi_fjmmt2_limit(a, b, k, 14).unwrap();
                    assert_eq!(chi_fjmmt2(a, b, k, Length::Infinite, 14).unwrap(), lim);
                    let n = Fjmmt2Data::new(a, b, k).unwrap().stabilizing_length(14);
                    assert_eq!(chi_fjmmt2(a, b, k, Length::Finite(2 * n), 14).unwrap(), lim);
                }
            }
        }
    }

    #[test]
    fn alternating_term_lists() {
        assert_eq!(
            alternating_terms(&hw(&[1, 0, 1])).unwrap(),
            vec![(1, 0, 1), (1, 1, 0), (-1, 0, 2)]
        );
        // (0, 3) would be outside the domain at level 2
        assert_eq!(
            alternating_terms(&hw(&[1, 1, 0])).unwrap(),
            vec![(1, 0, 2), (1, 1, 1), (-1, 0, 2)]
        );
        assert_eq!(alternating_terms(&hw(&[0, 1, 1])).unwrap(), vec![(1, 0, 1)]);
    }

    #[test]
    fn spec2_level_one() {
        for w in HighestWeight::all_of_level(2, 1) {
            let r = verify_spec2(&w, 12).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn spec1_level_one() {
        let r = verify_spec1(&hw(&[1, 0, 0]), 4, 8).unwrap();
        assert!(r.passed(), "{r}");
        let r = verify_spec1(&hw(&[0, 1, 0]), 4, 8).unwrap();
        assert!(r.passed(), "{r}");
    }
}
