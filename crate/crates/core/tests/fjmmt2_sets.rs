//! The series `chi_{a,b}[infinity]` against brute-force configuration counts.
//!
//! The closed form does not count the exact-prefix set `a_0 = a, a_1 = b`.
//! It counts the larger set `a_0 <= a, a_1 <= b + 2 (a - a_0)`, checked here
//! directly as a union of exact-prefix sets.

use fschar::admissible::{position_sum_series, Initial};
use fschar::qseries::QSeries;
use fschar::specialize::{chi_fjmmt2, Length};

fn prefix(k: u32, a: u32, b: u32, q: i64) -> QSeries {
    position_sum_series(2, Initial::Prefix { level: k, a, b }, q as u64).unwrap()
}

fn region(k: u32, a: u32, b: u32, q: i64) -> QSeries {
    let mut total = QSeries::zero(q);
    for a0 in 0..=a {
        let top = b + 2 * (a - a0);
        for a1 in 0..=top.min(k - a0) {
            total += &prefix(k, a0, a1, q);
        }
    }
    total
}

#[test]
fn closed_form_counts_the_region() {
    let q = 16;
    for k in 1..=3u32 {
        for a in 0..=k {
            for b in 0..=(k - a) {
                let f = chi_fjmmt2(a as usize, b as usize, k as usize, Length::Infinite, q).unwrap();
                assert_eq!(f, region(k, a, b, q), "k={k} a={a} b={b}");
            }
        }
    }
}

#[test]
fn exact_prefix_agrees_only_at_the_origin() {
    let q = 12;
    assert_eq!(chi_fjmmt2(0, 0, 2, Length::Infinite, q).unwrap(), prefix(2, 0, 0, q));
    assert_ne!(chi_fjmmt2(1, 0, 2, Length::Infinite, q).unwrap(), prefix(2, 1, 0, q));
}

#[test]
fn saturated_pairs_collapse() {
    // a + b = k + 1 gives the same set as (a, k - a) because a_0 + a_1 <= k
    for k in 1..=3u32 {
        for a in 0..=k {
            assert_eq!(region(k, a, k + 1 - a, 14), region(k, a, k - a, 14));
        }
    }
}

#[test]
fn finite_length_grows_to_the_limit() {
    let q = 12;
    let limit = chi_fjmmt2(0, 1, 2, Length::Infinite, q).unwrap();
    let mut previous: Option<QSeries> = None;
    for n in 0..8 {
        let s = chi_fjmmt2(0, 1, 2, Length::Finite(n), q).unwrap();
        assert!(s.is_nonnegative());
        if let Some(p) = previous {
            // coefficientwise nondecreasing in N
            assert!((&s - &p).is_nonnegative(), "N={n}");
        }
        previous = Some(s);
    }
    assert_eq!(chi_fjmmt2(0, 1, 2, Length::Finite(40), q).unwrap(), limit);
}
