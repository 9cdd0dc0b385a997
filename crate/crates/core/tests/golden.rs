use fschar::recurrence::{compare_with_golden, system_text};
use fschar::specialize::FjmmtData;

const SYSTEM: &str = include_str!("golden/system_l2_k2.txt");
const FJMMT: &str = include_str!("golden/fjmmt_k2.txt");

#[test]
fn generated_system_is_byte_identical() {
    assert_eq!(system_text(2, 2).unwrap(), SYSTEM);
    assert!(compare_with_golden(SYSTEM, 2, 2).unwrap().passed());
}

#[test]
fn corrupted_golden_is_located() {
    let bad = SYSTEM.replace("A_{1,0,1}^{n1,n2-1}", "A_{1,0,1}^{n1,n2-2}");
    let r = compare_with_golden(&bad, 2, 2).unwrap();
    assert!(!r.passed());
    let (_, v) = r.first_violation().unwrap();
    assert_eq!(v.case, "line 5");
}

#[test]
fn level_two_comparison_data() {
    let mut rows = Vec::new();
    for line in FJMMT.lines().filter(|l| !l.starts_with('#')) {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("matrix") => rows.push(words.map(|w| w.parse::<i64>().unwrap()).collect::<Vec<_>>()),
            Some("linear") => {
                let (k0, k1) = words.next().unwrap().split_once(',').unwrap();
                let want: Vec<i64> = words.map(|w| w.parse().unwrap()).collect();
                let d = FjmmtData::new(k0.parse().unwrap(), k1.parse().unwrap()).unwrap();
                assert_eq!(d.linear, want, "{k0},{k1}");
            }
            _ => panic!("unexpected line {line}"),
        }
    }
    assert_eq!(FjmmtData::new(2, 0).unwrap().matrix, rows);
}
