//! Random partitions well beyond the exhaustive ranges.

use isoforge::barpartitions::{delta_bar_sign, BarPartition};
use isoforge::chars_sym_alt::{an_table, sn_table};
use isoforge::partitions::{delta_sign, psi_map};
use isoforge::Partition;
use proptest::prelude::*;

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=14, 0..=9).prop_map(Partition::from_unsorted)
}

fn bar_partition() -> impl Strategy<Value = BarPartition> {
    prop::collection::btree_set(1usize..=25, 0..=7)
        .prop_map(|s| BarPartition::from_set(s.into_iter().collect()).unwrap())
}

/// `(-1)^(sum of legs)` removing hooks in the order chosen by `picks`.
fn delta_along(lambda: &Partition, q: usize, picks: &[usize]) -> i32 {
    let mut cur = lambda.clone();
    let mut sign = 1;
    for k in 0.. {
        let hooks = cur.hooks(q);
        if hooks.is_empty() {
            break;
        }
        let (h, mu) = hooks[picks[k % picks.len()] % hooks.len()].clone();
        sign *= if h.leg % 2 == 1 { -1 } else { 1 };
        cur = mu;
    }
    sign
}

fn delta_bar_along(lambda: &BarPartition, q: usize, picks: &[usize]) -> i32 {
    let mut cur = lambda.clone();
    let mut sign = 1;
    for k in 0.. {
        let bars = cur.bars(q);
        if bars.is_empty() {
            break;
        }
        let (b, mu) = bars[picks[k % picks.len()] % bars.len()].clone();
        sign *= if b.leg % 2 == 1 { -1 } else { 1 };
        cur = mu;
    }
    sign
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn core_quotient_round_trip(l in partition(), p in 2usize..=5) {
        let (core, quot) = l.core_quotient(p);
        prop_assert!(core.is_core(p));
        prop_assert_eq!(core.size() + p * quot.weight(), l.size());
        prop_assert_eq!(Partition::from_core_quotient(&core, &quot, p).unwrap(), l.clone());
        // the number of hook lengths divisible by p is the weight
        let divisible = l.hook_lengths().iter().filter(|&&h| h % p == 0).count();
        prop_assert_eq!(divisible, quot.weight());
    }

    #[test]
    fn conjugation_commutes_with_cores(l in partition(), p in 2usize..=5) {
        prop_assert_eq!(l.conjugate().core(p), l.core(p).conjugate());
        prop_assert_eq!(l.conjugate().weight(p), l.weight(p));
        prop_assert_eq!(l.conjugate().conjugate(), l);
    }

    #[test]
    fn delta_is_order_independent(l in partition(), p in 2usize..=4, picks in prop::collection::vec(0usize..8, 1..6)) {
        prop_assert_eq!(delta_along(&l, p, &picks), delta_sign(&l, p));
    }

    #[test]
    fn psi_keeps_the_quotient(l in partition(), p in 2usize..=4, k in 0usize..6) {
        let targets = isoforge::partitions::cores_of_size(k, p);
        prop_assume!(!targets.is_empty());
        let g = &targets[0];
        let m = psi_map(&l, p, g).unwrap();
        prop_assert_eq!(m.core(p), g.clone());
        prop_assert_eq!(m.core_quotient(p).1, l.core_quotient(p).1);
        prop_assert_eq!(psi_map(&m, p, &l.core(p)).unwrap(), l);
    }

    #[test]
    fn bar_core_quotient_round_trip(l in bar_partition(), q in prop::sample::select(vec![3usize, 5, 7])) {
        let (core, quot) = l.bar_core_quotient(q);
        prop_assert!(core.is_bar_core(q));
        let w = quot.zero.size() + quot.runners.iter().map(Partition::size).sum::<usize>();
        prop_assert_eq!(core.size() + q * w, l.size());
        prop_assert_eq!(BarPartition::from_bar_core_quotient(&core, &quot, q).unwrap(), l);
    }

    #[test]
    fn delta_bar_is_order_independent(l in bar_partition(), q in prop::sample::select(vec![3usize, 5]), picks in prop::collection::vec(0usize..8, 1..6)) {
        prop_assert_eq!(delta_bar_along(&l, q, &picks), delta_bar_sign(&l, q));
    }

    #[test]
    fn sigma_is_multiplicative_under_union(a in bar_partition(), b in bar_partition()) {
        let mut parts: Vec<usize> = a.parts().to_vec();
        parts.extend_from_slice(b.parts());
        prop_assume!(BarPartition::from_set(parts.clone()).is_ok());
        let u = BarPartition::from_set(parts).unwrap();
        prop_assert_eq!(u.sigma(), a.sigma() * b.sigma());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn larger_tables_are_orthogonal(n in 11usize..=12) {
        prop_assert!(sn_table(n).check_orthogonality().is_ok());
    }

    #[test]
    fn larger_alternating_tables_are_orthogonal(n in 10usize..=11) {
        prop_assert!(an_table(n).unwrap().check_orthogonality().is_ok());
    }
}
