//! Executable forms of the pattern identities behind the fermionic formula.
//!
//! Every identity is a polynomial equality in `q` whose exponents are linear
//! in the `N` sequences, so it is checked on many numeric instances of `N`:
//! seeded random monotone sequences plus the all-zero and all-equal ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    delta_term, l_exponent, linear_term, linear_term_alt, linear_term_star, m_term, n_term, Axis,
    BinaryPattern, NSequences, EXACT,
};
use crate::admissible::HighestWeight;
use crate::error::Result;
use crate::qseries::QSeries;
use crate::report::{Check, Report};

/// Largest entry drawn for a random sequence.
pub const MAX_ENTRY: u32 = 30;

/// `samples` random sequences of length `k`, then the all-zero and an all-equal one.
pub fn sample_nsequences(k: usize, samples: usize, seed: u64) -> Vec<NSequences> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9));
    let mut out = Vec::with_capacity(samples + 2);
    for _ in 0..samples {
        let mut a: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=MAX_ENTRY)).collect();
        let mut b: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=MAX_ENTRY)).collect();
        a.sort_unstable_by(|x, y| y.cmp(x));
        b.sort_unstable();
        out.push(NSequences::new(a, b).expect("sorted sequences are monotone"));
    }
    out.push(NSequences::zeros(k));
    let c = rng.gen_range(1..=MAX_ENTRY);
    out.push(NSequences::new(vec![c; k], vec![c; k]).expect("constant sequences are monotone"));
    out
}

fn describe(n: &NSequences) -> String {
    format!("N1={:?} N2={:?}", n.first(), n.second())
}

fn compare(lhs: &QSeries, rhs: &QSeries) -> Option<String> {
    (lhs != rhs).then(|| format!("lhs {lhs} != rhs {rhs}"))
}

fn l_delta(axis: Axis, p: &BinaryPattern, n: &NSequences) -> Result<QSeries> {
    Ok(delta_term(axis, p, n, EXACT)?.shift(l_exponent(axis, p, n)?).truncated(EXACT))
}

/// `l^1_p = sum_{p' <= p} l^1_{p'} delta^1_{p'}` and
/// `l^2_p = sum_{p' >= p} l^2_{p'} delta^2_{p'}` over patterns with as many ones as `p`.
pub fn lemma_smaller(axis: Axis, p: &BinaryPattern, n: &NSequences) -> Result<(QSeries, QSeries)> {
    let lhs = QSeries::q_power(l_exponent(axis, p, n)?, EXACT);
    let mut rhs = QSeries::zero(EXACT);
    for other in BinaryPattern::all_with_ones(p.len(), p.ones()) {
        let below = match axis {
            Axis::First => other.le(p)?,
            Axis::Second => p.le(&other)?,
        };
        if below {
            rhs += &l_delta(axis, &other, n)?;
        }
    }
    Ok((lhs, rhs))
}

/// Both sides of the interchange identity
/// `sum_{p in P_{i+j}} l^1_p delta^1_p l^2_{g^1_i(p)} = sum_{p' in P_j} l^1_{g^0_i(p')} l^2_{p'} delta^2_{p'}`.
pub fn interchange(i: usize, j: usize, n: &NSequences) -> Result<(QSeries, QSeries)> {
    let k = n.len();
    let mut lhs = QSeries::zero(EXACT);
    for p in BinaryPattern::all_with_ones(k, i + j) {
        let e = l_exponent(Axis::Second, &p.flip_last(i, 1)?, n)?;
        lhs += &l_delta(Axis::First, &p, n)?.shift(e).truncated(EXACT);
    }
    let mut rhs = QSeries::zero(EXACT);
    for p in BinaryPattern::all_with_ones(k, j) {
        let e = l_exponent(Axis::First, &p.flip_last(i, 0)?, n)?;
        rhs += &l_delta(Axis::Second, &p, n)?.shift(e).truncated(EXACT);
    }
    Ok((lhs, rhs))
}

fn weight(k0: u32, k1: u32, k2: u32) -> HighestWeight {
    HighestWeight::new(vec![k0, k1, k2]).expect("three parts")
}

/// `L_{k0,k1,k2} - L_{k0-1,k1+1,k2} - L_{k0,k1-1,k2+1} + L_{k0-1,k1,k2+1}` against `L^*`.
pub fn four_term(w: &HighestWeight, n: &NSequences) -> Result<(QSeries, QSeries)> {
    let (k0, k1, k2) = w.triple()?;
    let rhs = linear_term_star(w, n, EXACT)?;
    let lhs = linear_term(&weight(k0, k1, k2), n, EXACT)?
        - linear_term(&weight(k0 - 1, k1 + 1, k2), n, EXACT)?
        - linear_term(&weight(k0, k1 - 1, k2 + 1), n, EXACT)?
        + linear_term(&weight(k0 - 1, k1, k2 + 1), n, EXACT)?;
    Ok((lhs, rhs))
}

/// Runs every identity for all levels `1..=max_k`.
pub fn run_lemma_suite(max_k: usize, samples: usize, seed: u64) -> Result<Report> {
    let scope = format!("k<={max_k}, {samples} random N + zero + constant, seed {seed}");
    let mut smaller1 = Check::new("smaller-sum axis 1", scope.clone());
    let mut smaller2 = Check::new("smaller-sum axis 2", scope.clone());
    let mut inter = Check::new("interchange", scope.clone());
    let mut alt = Check::new("linear term two forms", scope.clone());
    let mut four = Check::new("four-term vs starred", scope.clone());
    let mut mn = Check::new("M = N", scope);

    for k in 1..=max_k {
        let seqs = sample_nsequences(k, samples, seed);
        let level = k as u32;
        for n in &seqs {
            for ones in 0..=k {
                for p in BinaryPattern::all_with_ones(k, ones) {
                    for (axis, check) in [(Axis::First, &mut smaller1), (Axis::Second, &mut smaller2)] {
                        let (l, r) = lemma_smaller(axis, &p, n)?;
                        check.record(|| format!("p={p} {}", describe(n)), compare(&l, &r));
                    }
                }
            }
            for i in 0..=k {
                for j in 0..=(k - i) {
                    let (l, r) = interchange(i, j, n)?;
                    inter.record(|| format!("k={k} i={i} j={j} {}", describe(n)), compare(&l, &r));
                }
            }
            for w in HighestWeight::all_of_level(2, level) {
                let case = || format!("{w} {}", describe(n));
                alt.record(
                    case,
                    compare(&linear_term(&w, n, EXACT)?, &linear_term_alt(&w, n, EXACT)?),
                );
                if w.parts().contains(&0) {
                    continue;
                }
                let (l, r) = four_term(&w, n)?;
                four.record(case, compare(&l, &r));
                mn.record(case, compare(&m_term(&w, n, EXACT)?, &n_term(&w, n, EXACT)?));
            }
        }
    }

    let mut report = Report::new("pattern identities");
    for c in [smaller1, smaller2, inter, alt, four, mn] {
        report.push(c);
    }
    Ok(report)
}
