//! The recurrence system linking the characters of all level-`k` weights.
//!
//! For a weight `(k_0, ..., k_l)` and every subset `I` of the indices
//! `i < l` with `k_i != 0`:
//!
//! ```text
//! sum_I (-1)^{|I|} A_{W_I}^{n} = q^{n_1 + ... + n_l} A_{(k_l, k_0, ..., k_{l-1})}^{n_1 - k_0, ..., n_l - k_{l-1}}
//! ```
//!
//! where `W_I` moves one unit from `k_i` to `k_{i+1}` for each `i` in `I`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::admissible::HighestWeight;
use crate::charseries::{CharSeries, Window};
use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceEquation {
    /// `(sign, weight)`; the first term is the defining weight with sign `+1`.
    pub lhs: Vec<(i8, HighestWeight)>,
    pub rhs_weight: HighestWeight,
    /// `n_i -> n_i - shift[i-1]`.
    pub rhs_shift: Vec<u32>,
}

impl RecurrenceEquation {
    pub fn weight(&self) -> &HighestWeight {
        &self.lhs[0].1
    }

    pub fn rank(&self) -> usize {
        self.rhs_shift.len()
    }
}

fn subscript(w: &HighestWeight) -> String {
    let parts: Vec<String> = w.parts().iter().map(u32::to_string).collect();
    format!("A_{{{}}}", parts.join(","))
}

impl fmt::Display for RecurrenceEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plain: Vec<String> = (1..=self.rank()).map(|i| format!("n{i}")).collect();
        let plain = plain.join(",");
        for (idx, (sign, w)) in self.lhs.iter().enumerate() {
            match (idx, *sign > 0) {
                (0, _) => {}
                (_, true) => write!(f, " + ")?,
                (_, false) => write!(f, " - ")?,
            }
            write!(f, "{}^{{{plain}}}", subscript(w))?;
        }
        let shifted: Vec<String> = self
            .rhs_shift
            .iter()
            .enumerate()
            .map(|(i, s)| match s {
                0 => format!("n{}", i + 1),
                s => format!("n{}-{s}", i + 1),
            })
            .collect();
        write!(
            f,
            " = q^{{{}}} {}^{{{}}}",
            plain.replace(',', "+"),
            subscript(&self.rhs_weight),
            shifted.join(",")
        )
    }
}

/// Subsets of `{i < l : k_i != 0}`, each listed increasingly, ordered by size
/// and then lexicographically. Always starts with the empty set.
pub fn index_sets(w: &HighestWeight) -> Vec<Vec<usize>> {
    let l = w.rank();
    let allowed: Vec<usize> = (0..l).filter(|i| w.parts()[*i] != 0).collect();
    let mut out: Vec<Vec<usize>> = (0u64..(1 << allowed.len()))
        .map(|mask| {
            allowed
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, i)| *i)
                .collect()
        })
        .collect();
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `k'_i = k_i - [i in I] + [i-1 in I]`, applied simultaneously.
pub fn apply_index_set(w: &HighestWeight, set: &[usize]) -> Result<HighestWeight> {
    let mut parts: Vec<i64> = w.parts().iter().map(|k| i64::from(*k)).collect();
    for &i in set {
        if i >= w.rank() || parts.get(i).is_none() {
            return Err(Error::InvalidWeight(format!("index {i} out of range for {w}")));
        }
        if w.parts()[i] == 0 {
            return Err(Error::InvalidWeight(format!("index {i} has k_{i} = 0 in {w}")));
        }
    }
    for &i in set {
        parts[i] -= 1;
        parts[i + 1] += 1;
    }
    HighestWeight::new(parts.into_iter().map(|k| k as u32).collect())
}

pub fn equation_for(w: &HighestWeight) -> Result<RecurrenceEquation> {
    let lhs = index_sets(w)
        .into_iter()
        .map(|set| {
            let sign = if set.len() % 2 == 0 { 1 } else { -1 };
            apply_index_set(w, &set).map(|v| (sign, v))
        })
        .collect::<Result<_>>()?;
    let p = w.parts();
    let l = w.rank();
    let mut rotated = vec![p[l]];
    rotated.extend_from_slice(&p[..l]);
    Ok(RecurrenceEquation {
        lhs,
        rhs_weight: HighestWeight::new(rotated)?,
        rhs_shift: p[..l].to_vec(),
    })
}

/// One equation per weight of level `k` and rank `l`, weights in decreasing
/// lexicographic order.
pub fn build_system(k: u32, l: usize) -> Result<Vec<RecurrenceEquation>> {
    if l == 0 {
        return Err(Error::ZeroRank);
    }
    if k == 0 {
        return Err(Error::InvalidWeight("level must be at least 1".into()));
    }
    HighestWeight::all_of_level(l, k).iter().map(equation_for).collect()
}

/// The system in canonical text form, one equation per line.
pub fn system_text(k: u32, l: usize) -> Result<String> {
    Ok(build_system(k, l)?
        .iter()
        .map(|e| format!("{e}\n"))
        .collect())
}

/// Line-by-line comparison of the generated system with a stored transcription.
pub fn compare_with_golden(expected: &str, k: u32, l: usize) -> Result<Report> {
    let generated = system_text(k, l)?;
    let got: Vec<&str> = generated.lines().collect();
    let want: Vec<&str> = expected.lines().filter(|s| !s.trim().is_empty()).collect();
    let mut check = Check::new("golden system", format!("k={k} l={l}, {} lines", want.len()));
    for i in 0..got.len().max(want.len()) {
        let (g, w) = (got.get(i).copied(), want.get(i).copied());
        check.record(
            || format!("line {}", i + 1),
            (g != w).then(|| {
                format!(
                    "expected `{}`, generated `{}`",
                    w.unwrap_or("<missing>"),
                    g.unwrap_or("<missing>")
                )
            }),
        );
    }
    let mut report = Report::new("recurrence golden");
    report.push(check);
    Ok(report)
}

fn common_window(characters: &BTreeMap<HighestWeight, CharSeries>, l: usize) -> Result<Window> {
    let mut window: Option<&Window> = None;
    for (w, c) in characters {
        if c.rank() != l || w.rank() != l {
            return Err(Error::WindowMismatch(format!(
                "character of {w} has rank {}, expected {l}",
                c.rank()
            )));
        }
        match window {
            None => window = Some(c.window()),
            Some(prev) if prev != c.window() => {
                return Err(Error::WindowMismatch(format!(
                    "character of {w} has caps {:?} q<={}, others {:?} q<={}",
                    c.window().z,
                    c.window().q,
                    prev.z,
                    prev.q
                )))
            }
            Some(_) => {}
        }
    }
    window
        .cloned()
        .ok_or_else(|| Error::MissingCharacter("no characters supplied".into()))
}

fn check_equation(
    eq: &RecurrenceEquation,
    characters: &BTreeMap<HighestWeight, CharSeries>,
    window: &Window,
) -> Result<Check> {
    let get = |w: &HighestWeight| {
        characters
            .get(w)
            .ok_or_else(|| Error::MissingCharacter(w.to_string()))
    };
    let terms: Vec<(i8, &CharSeries)> = eq
        .lhs
        .iter()
        .map(|(s, w)| get(w).map(|c| (*s, c)))
        .collect::<Result<_>>()?;
    let rhs_char = get(&eq.rhs_weight)?;
    let mut check = Check::new(eq.to_string(), String::new());
    let mut min_order = i64::MAX;
    for n in window.exponents() {
        let mut order = i64::MAX;
        let mut lhs = QSeries::zero(window.q);
        for (sign, c) in &terms {
            order = order.min(c.coeff_order(&n));
            let a = c.coeff(&n);
            lhs = if *sign > 0 { &lhs + &a } else { &lhs - &a };
        }
        let total: i64 = n.iter().map(|v| i64::from(*v)).sum();
        let shifted: Option<Vec<u32>> =
            n.iter().zip(&eq.rhs_shift).map(|(a, s)| a.checked_sub(*s)).collect();
        let rhs = match shifted {
            Some(m) => {
                order = order.min(rhs_char.coeff_order(&m) + total);
                rhs_char.coeff(&m).shift(total)
            }
            // a negative lower index makes the term vanish
            None => QSeries::zero(window.q),
        };
        min_order = min_order.min(order);
        let lhs = lhs.truncated(order);
        let rhs = rhs.truncated(order);
        let failure = lhs.first_difference(&rhs, order).map(|e| {
            format!("q^{e}: lhs coefficient {}, rhs coefficient {}", lhs.coeff(e), rhs.coeff(e))
        });
        check.record(|| format!("n={n:?}"), failure);
    }
    check.scope = format!("n<={:?}, q<={}", window.z, min_order);
    Ok(check)
}

/// Checks every equation of the level-`k`, rank-`l` system on the characters'
/// common window. Each coefficient is compared only up to the order all
/// participating coefficients are known to.
pub fn verify_system(
    characters: &BTreeMap<HighestWeight, CharSeries>,
    k: u32,
    l: usize,
) -> Result<Report> {
    let window = common_window(characters, l)?;
    let system = build_system(k, l)?;
    let checks: Vec<Check> = system
        .par_iter()
        .map(|eq| check_equation(eq, characters, &window))
        .collect::<Result<_>>()?;
    let mut report = Report::new(format!("recurrence system k={k} l={l}"));
    for c in checks {
        report.push(c);
    }
    Ok(report)
}
