//! Brute-force enumeration of `(k, l+1)`-admissible configurations.
//!
//! A configuration is a finite sequence `(a_0, a_1, ...)` of multiplicities.
//! Position `t` holds the generator of color `t mod l + 1` at depth
//! `t / l + 1`; the depth is what a factor contributes to the degree. The
//! oracle character counts configurations by degree and color content.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::charseries::{CharSeries, Window};
use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// Dominant integral weight `k_0 L_0 + ... + k_l L_l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HighestWeight(Vec<u32>);

impl HighestWeight {
    /// Needs at least two parts (rank `l >= 1`).
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidWeight(format!(
                "need at least two components, got {}",
                parts.len()
            )));
        }
        Ok(HighestWeight(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len() - 1
    }

    pub fn level(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `(k_0, k_1, k_2)`, for rank-2 code paths.
    pub fn triple(&self) -> Result<(u32, u32, u32)> {
        match self.0.as_slice() {
            [a, b, c] => Ok((*a, *b, *c)),
            _ => Err(Error::UnsupportedRank(self.rank())),
        }
    }

    /// Every weight of the given rank and level, in decreasing lexicographic order.
    pub fn all_of_level(rank: usize, level: u32) -> Vec<HighestWeight> {
        fn rec(slots: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<HighestWeight>) {
            if slots == 1 {
                prefix.push(left);
                out.push(HighestWeight(prefix.clone()));
                prefix.pop();
                return;
            }
            for v in (0..=left).rev() {
                prefix.push(v);
                rec(slots - 1, left - v, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(rank + 1, level, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Multiplicities `(a_0, ..., a_M)`; implicitly zero past the end.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(Vec<u32>);

impl Configuration {
    /// Trailing zeros are stripped.
    pub fn new(mut a: Vec<u32>) -> Self {
        while a.last() == Some(&0) {
            a.pop();
        }
        Configuration(a)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, t: usize) -> u32 {
        self.0.get(t).copied().unwrap_or(0)
    }

    /// `sum_t t * a_t`, the degree used by the one-variable comparison formulas.
    pub fn position_sum(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(t, a)| t as u64 * u64::from(*a))
            .sum()
    }
}

fn depth(t: usize, rank: usize) -> u64 {
    (t / rank) as u64 + 1
}

/// True iff every window of `l+1` consecutive entries sums to at most the level
/// and the partial sums `a_0 + ... + a_r` stay below `k_0 + ... + k_r` for `r < l`.
pub fn is_admissible(config: &Configuration, rank: usize, weight: &HighestWeight) -> Result<bool> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    if weight.rank() != rank {
        return Err(Error::InvalidWeight(format!(
            "weight {weight} does not have rank {rank}"
        )));
    }
    let k = weight.level();
    let a = config.entries();
    let windows_ok = (0..a.len()).all(|i| {
        let end = (i + rank + 1).min(a.len());
        a[i..end].iter().sum::<u32>() <= k
    });
    let mut partial = 0;
    let mut bound = 0;
    let initial_ok = (0..rank).all(|r| {
        partial += config.get(r);
        bound += weight.parts()[r];
        partial <= bound
    });
    Ok(windows_ok && initial_ok)
}

/// `(d, n)`: degree and color content.
pub fn degree_weight(config: &Configuration, rank: usize) -> Result<(u64, Vec<u32>)> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    let mut d = 0;
    let mut n = vec![0; rank];
    for (t, a) in config.entries().iter().enumerate() {
        d += depth(t, rank) * u64::from(*a);
        n[t % rank] += a;
    }
    Ok((d, n))
}

/// Which initial conditions the enumeration imposes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Initial {
    /// `a_0 + ... + a_r <= k_0 + ... + k_r` for `r < l`.
    Weight(HighestWeight),
    /// Rank 2 only: `a_0 = a` and `a_1 = b` exactly, at the given level.
    Prefix { level: u32, a: u32, b: u32 },
}

/// How the (otherwise infinite) search is cut off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Budget {
    /// Degree `d <= q` and color content within `z`.
    Degree(Window),
    /// `sum_t t * a_t <= max`; no cap on color content.
    PositionSum(u64),
}

/// Parameters for [`enumerate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub rank: usize,
    pub initial: Initial,
    pub budget: Budget,
}

/// Visits every admissible configuration inside the budget exactly once.
///
/// Configurations are produced depth-first; `visit` receives the entries (no
/// trailing zeros), the degree and the color content.
pub fn enumerate<F>(params: &Enumeration, mut visit: F) -> Result<()>
where
    F: FnMut(&[u32], u64, &[u32]),
{
    let rank = params.rank;
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    let (level, bounds) = match &params.initial {
        Initial::Weight(w) => {
            if w.rank() != rank {
                return Err(Error::InvalidWeight(format!(
                    "weight {w} does not have rank {rank}"
                )));
            }
            let mut acc = 0;
            let prefix: Vec<PrefixRule> = w.parts()[..rank]
                .iter()
                .map(|k| {
                    acc += k;
                    PrefixRule::AtMost(acc)
                })
                .collect();
            (w.level(), prefix)
        }
        Initial::Prefix { level, a, b } => {
            if rank != 2 {
                return Err(Error::UnsupportedRank(rank));
            }
            if a + b > *level {
                return Err(Error::InvalidInitial { a: *a, b: *b, k: *level });
            }
            (*level, vec![PrefixRule::Exactly(*a), PrefixRule::Exactly(*b)])
        }
    };
    if let Budget::Degree(w) = &params.budget {
        if w.rank() != rank {
            return Err(Error::WindowMismatch(format!(
                "window has {} caps, rank is {rank}",
                w.rank()
            )));
        }
    }

    let mut search = Search {
        rank,
        level,
        prefix: bounds,
        budget: &params.budget,
        entries: Vec::new(),
        colors: vec![0; rank],
        visit: &mut visit,
    };
    search.step(0, 0, 0, 0);
    Ok(())
}

#[derive(Debug, Clone, Copy)]
enum PrefixRule {
    AtMost(u32),
    Exactly(u32),
}

struct Search<'a, F> {
    rank: usize,
    level: u32,
    prefix: Vec<PrefixRule>,
    budget: &'a Budget,
    entries: Vec<u32>,
    colors: Vec<u32>,
    visit: &'a mut F,
}

impl<F: FnMut(&[u32], u64, &[u32])> Search<'_, F> {
    /// Cost of one factor at position `t` under the budget, and the budget left.
    fn cost(&self, t: usize) -> u64 {
        match self.budget {
            Budget::Degree(_) => depth(t, self.rank),
            Budget::PositionSum(_) => t as u64,
        }
    }

    fn limit(&self) -> u64 {
        match self.budget {
            Budget::Degree(w) => u64::try_from(w.q).unwrap_or(0),
            Budget::PositionSum(max) => *max,
        }
    }

    fn emit(&mut self, degree: u64) {
        let mut end = self.entries.len();
        while end > 0 && self.entries[end - 1] == 0 {
            end -= 1;
        }
        (self.visit)(&self.entries[..end], degree, &self.colors);
    }

    /// `spent` is budget used so far, `degree` the true degree, `prefix_sum`
    /// the running `a_0 + ... + a_{t-1}` for the initial conditions.
    fn step(&mut self, t: usize, spent: u64, degree: u64, prefix_sum: u32) {
        if let Budget::Degree(w) = self.budget {
            if w.q < 0 {
                return;
            }
        }
        let in_prefix = t < self.prefix.len();
        // Past the initial block, a position we cannot afford means every later
        // one is unaffordable too.
        if !in_prefix && self.cost(t) > 0 && spent + self.cost(t) > self.limit() {
            self.emit(degree);
            return;
        }
        let window_start = t.saturating_sub(self.rank);
        let window: u32 = self.entries[window_start..t].iter().sum();
        let mut hi = self.level - window;
        if let Some(cost) = Some(self.cost(t)).filter(|c| *c > 0) {
            hi = hi.min(((self.limit() - spent) / cost) as u32);
        }
        let color = t % self.rank;
        if let Budget::Degree(w) = self.budget {
            hi = hi.min(w.z[color] - self.colors[color]);
        }
        let mut lo = 0;
        if in_prefix {
            match self.prefix[t] {
                PrefixRule::AtMost(bound) => hi = hi.min(bound.saturating_sub(prefix_sum)),
                PrefixRule::Exactly(v) => {
                    if v > hi {
                        return;
                    }
                    lo = v;
                    hi = v;
                }
            }
        }
        let dep = depth(t, self.rank);
        for v in lo..=hi {
            self.entries.push(v);
            self.colors[color] += v;
            self.step(
                t + 1,
                spent + self.cost(t) * u64::from(v),
                degree + dep * u64::from(v),
                prefix_sum + v,
            );
            self.colors[color] -= v;
            self.entries.pop();
        }
    }
}

/// Collects the enumeration into a vector, mostly for tests and the CLI.
pub fn collect(params: &Enumeration) -> Result<Vec<Configuration>> {
    let mut out = Vec::new();
    enumerate(params, |a, _, _| out.push(Configuration::new(a.to_vec())))?;
    Ok(out)
}

/// Exact truncated character of `W(weight)` on `window`, by counting
/// admissible configurations.
pub fn character_oracle(weight: &HighestWeight, window: &Window) -> Result<CharSeries> {
    let rank = weight.rank();
    let params = Enumeration {
        rank,
        initial: Initial::Weight(weight.clone()),
        budget: Budget::Degree(window.clone()),
    };
    let q_len = usize::try_from(window.q + 1).unwrap_or(0);
    let mut counts: BTreeMap<Vec<u32>, Vec<u64>> = BTreeMap::new();
    enumerate(&params, |_, d, n| {
        let row = counts
            .entry(n.to_vec())
            .or_insert_with(|| vec![0; q_len]);
        row[d as usize] += 1;
    })?;
    let mut out = CharSeries::zero(window.clone());
    for (n, row) in counts {
        let series = QSeries::from_terms(
            row.into_iter()
                .enumerate()
                .filter(|(_, c)| *c > 0)
                .map(|(d, c)| (d as i64, BigInt::from(c))),
            window.q,
        );
        out.set(&n, series);
    }
    Ok(out)
}

/// `sum q^{sum_t t a_t}` over admissible configurations with the given initial
/// conditions, to order `max`.
pub fn position_sum_series(rank: usize, initial: Initial, max: u64) -> Result<QSeries> {
    let params = Enumeration {
        rank,
        initial,
        budget: Budget::PositionSum(max),
    };
    let mut counts = vec![0u64; max as usize + 1];
    enumerate(&params, |a, _, _| {
        let e: u64 = a.iter().enumerate().map(|(t, v)| t as u64 * u64::from(*v)).sum();
        counts[e as usize] += 1;
    })?;
    Ok(QSeries::from_terms(
        counts
            .into_iter()
            .enumerate()
            .map(|(e, c)| (e as i64, BigInt::from(c))),
        max as i64,
    ))
}
