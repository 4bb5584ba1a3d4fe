use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::config::{sample_ordered, Mark};
use Direction::{Down as D, Up as U};

fn cyc(s: &[(u32, Direction)]) -> Cycle {
    Cycle::new(s.to_vec())
}

fn up_three_cycle<B: CycleBackend>() -> B {
    // Find a link order yielding (1+,2+,3+) once canonicalised.
    for order in [
        [(1, 2), (2, 3)],
        [(2, 3), (1, 2)],
        [(1, 3), (1, 2)],
        [(1, 2), (1, 3)],
    ] {
        let mut cs = B::singletons(3).unwrap();
        for (u, v) in order {
            cs.apply_link(u, v, Mark::Cross).unwrap();
        }
        if cs.canonical_cycles() == vec![cyc(&[(1, U), (2, U), (3, U)])] {
            return cs;
        }
    }
    panic!("no order gives (1,2,3)");
}

fn check_examples<B: CycleBackend>() {
    let mut cs: B = up_three_cycle();
    let ev = cs.apply_link(1, 3, Mark::Cross).unwrap();
    assert!(ev.is_split());
    assert_eq!(
        cs.canonical_cycles(),
        vec![cyc(&[(2, U), (3, U)]), cyc(&[(1, U)])]
    );

    let mut cs: B = up_three_cycle();
    let ev = cs.apply_link(1, 3, Mark::Bar).unwrap();
    assert!(ev.is_twist());
    assert_eq!(cs.canonical_cycles(), vec![cyc(&[(1, U), (3, D), (2, D)])]);

    let mut cs = B::singletons(2).unwrap();
    assert!(cs.apply_link(1, 2, Mark::Bar).unwrap().is_merge());
    assert_eq!(cs.canonical_cycles(), vec![cyc(&[(1, U), (2, D)])]);
    let mut cs = B::singletons(2).unwrap();
    cs.apply_link(1, 2, Mark::Cross).unwrap();
    assert_eq!(cs.canonical_cycles(), vec![cyc(&[(1, U), (2, U)])]);

    let mut cs = B::singletons(2).unwrap();
    cs.apply_link(1, 2, Mark::Bar).unwrap();
    // The second bar closes off a loop that never reaches level zero.
    assert!(cs.apply_link(1, 2, Mark::Bar).unwrap().is_twist());
    assert_eq!(cs.canonical_cycles(), vec![cyc(&[(1, U), (2, D)])]);
    assert_eq!(cs.cycle_count(), 1);
    let mut cs = B::singletons(2).unwrap();
    cs.apply_link(1, 2, Mark::Cross).unwrap();
    assert!(cs.apply_link(1, 2, Mark::Cross).unwrap().is_split());
    assert_eq!(cs.canonical_cycles(), vec![cyc(&[(1, U)]), cyc(&[(2, U)])]);
}

#[test]
fn spec_examples_naive() {
    check_examples::<NaiveCycles>();
}

#[test]
fn spec_examples_treap() {
    check_examples::<TreapCycles>();
}

fn check_errors<B: CycleBackend>() {
    assert!(B::singletons(0).is_err());
    let mut cs = B::singletons(3).unwrap();
    assert_eq!(cs.apply_link(2, 2, Mark::Bar), Err(Error::SelfLink(2)));
    assert_eq!(cs.apply_link(1, 4, Mark::Bar), Err(Error::UnknownVertex(4)));
    assert_eq!(cs.apply_link(0, 1, Mark::Bar), Err(Error::UnknownVertex(0)));
    assert_eq!(cs.apply_endpoints(2, 2, Mark::Cross), Ok(LinkEvent::Noop));
    assert!(cs.apply_endpoints(5, 5, Mark::Cross).is_err());
    assert!(cs.balance(9, 1).is_err());
    assert!(balance(&cs, 1, 0).is_err());
}

#[test]
fn errors() {
    check_errors::<NaiveCycles>();
    check_errors::<TreapCycles>();
}

#[test]
fn singletons() {
    let one = singleton_cycles(1).unwrap();
    assert_eq!(one.canonical_cycles(), vec![cyc(&[(1, U)])]);
    let three = singleton_cycles(3).unwrap();
    assert_eq!(three.cycle_count(), 3);
    assert_eq!(
        three.canonical_cycles(),
        vec![cyc(&[(1, U)]), cyc(&[(2, U)]), cyc(&[(3, U)])]
    );
}

#[test]
fn build_examples() {
    let empty = OrderedLinks { n: 4, seq: vec![] };
    assert_eq!(build(&empty).unwrap().cycle_count(), 4);
    let e = Edge::new(1, 2).unwrap();
    let one = OrderedLinks {
        n: 2,
        seq: vec![(e, Mark::Bar)],
    };
    assert_eq!(
        build(&one).unwrap().canonical_cycles(),
        vec![cyc(&[(1, U), (2, D)])]
    );
    let two = OrderedLinks {
        n: 2,
        seq: vec![(e, Mark::Bar), (e, Mark::Bar)],
    };
    assert_eq!(
        build(&two).unwrap().canonical_cycles(),
        vec![cyc(&[(1, U), (2, D)])]
    );
    let crosses = OrderedLinks {
        n: 2,
        seq: vec![(e, Mark::Cross), (e, Mark::Cross)],
    };
    assert_eq!(build(&crosses).unwrap().cycle_count(), 2);
}

#[test]
fn canonical_examples() {
    assert_eq!(
        canonical(&cyc(&[(3, D), (1, U), (2, U)])),
        cyc(&[(1, U), (2, U), (3, D)])
    );
    assert_eq!(canonical(&cyc(&[(2, D), (1, D)])), cyc(&[(1, U), (2, U)]));
    assert_eq!(canonical(&cyc(&[(1, U)])), cyc(&[(1, U)]));
    let c = cyc(&[(4, D), (2, U), (7, D), (1, D), (5, U)]);
    assert_eq!(canonical(&canonical(&c)), canonical(&c));
    assert_eq!(canonical(&c.reversed()), canonical(&c));
    assert_eq!(
        canonical(&c),
        cyc(&[(1, U), (7, U), (2, D), (4, U), (5, D)])
    );
}

#[test]
fn display_format() {
    assert_eq!(
        alloc::format!("{}", cyc(&[(1, U), (3, D), (2, D)])),
        "1^+ 3^- 2^-"
    );
}

#[test]
fn rescaled_sizes_examples() {
    assert_eq!(
        rescaled_sizes(&[4, 1, 3, 1], 8).unwrap(),
        vec![0.5, 0.375, 0.125, 0.125]
    );
    assert_eq!(rescaled_sizes(&[7], 7).unwrap(), vec![1.0]);
    assert!(rescaled_sizes(&[], 3).unwrap().is_empty());
    assert!(rescaled_sizes(&[1], 0).is_err());
}

fn check_balance<B: CycleBackend>() {
    let cs: B = up_three_cycle();
    assert_eq!(cs.balance(1, 3).unwrap(), 3);
    let mut cs: B = up_three_cycle();
    cs.apply_link(1, 3, Mark::Bar).unwrap();
    assert_eq!(cs.balance(1, 3).unwrap(), -1);
    assert_eq!(cs.balance(1, 1).unwrap(), 1);
    assert_eq!(cs.balance(1, 100).unwrap(), -1);
    let mut cs = B::singletons(2).unwrap();
    cs.apply_link(1, 2, Mark::Bar).unwrap();
    assert_eq!(cs.balance(2, 2).unwrap(), 0);
    assert_eq!(cs.step_from(2, 1).unwrap(), (1, D));
    assert_eq!(cs.step_from(2, 2).unwrap(), (2, U));
}

#[test]
fn balance_examples() {
    check_balance::<NaiveCycles>();
    check_balance::<TreapCycles>();
}

#[test]
fn segment_examples() {
    let ring = |k: u32| Cycle::new((1..=k).map(|v| (v, U)).collect());
    let sizes = |k, n| -> Vec<usize> {
        segment_partition(&ring(k), n)
            .iter()
            .map(|s| s.len())
            .collect()
    };
    assert_eq!(sizes(5, 9), vec![5]);
    assert_eq!(sizes(2, 9), vec![2]);
    let mut seven = sizes(7, 9);
    seven.sort_unstable();
    assert_eq!(seven, vec![3, 4]);
    assert_eq!(sizes(3, 9), vec![3]);
    assert_eq!(sizes(12, 9), vec![3, 3, 3, 3]);
    let segs = segment_partition(&ring(11), 10);
    let mut all: Vec<u32> = segs.iter().flatten().copied().collect();
    all.sort_unstable();
    assert_eq!(all, (1..=11).collect::<Vec<_>>());
    assert!(segs.iter().all(|s| (3..=6).contains(&s.len())));
}

#[test]
fn isqrt_exact() {
    for n in 0..2000u64 {
        let r = isqrt(n);
        assert!(r * r <= n && (r + 1) * (r + 1) > n);
    }
    assert_eq!(isqrt(100_000), 316);
}

fn check_nu_one<B: CycleBackend>(seed: u64) {
    let ord = sample_ordered(30, 200, 1.0, seed).unwrap();
    let mut cs = B::singletons(30).unwrap();
    for &(e, m) in ord.seq.iter().rev() {
        let ev = cs.apply_edge(e, m).unwrap();
        assert!(!ev.is_twist());
    }
    for c in cs.canonical_cycles() {
        assert!(c.seq.iter().all(|e| e.1 == U));
    }
}

#[test]
fn all_crosses_never_twist() {
    for seed in 0..20 {
        check_nu_one::<NaiveCycles>(seed);
        check_nu_one::<TreapCycles>(seed);
    }
}

#[test]
fn backends_agree_on_random_sequences() {
    for seed in 0..50 {
        let ord = sample_ordered(25, 80, 0.5, seed).unwrap();
        let mut a = NaiveCycles::singletons(25).unwrap();
        let mut b = TreapCycles::singletons(25).unwrap();
        for &(e, m) in &ord.seq {
            let ea = a.apply_edge(e, m).unwrap();
            let eb = b.apply_edge(e, m).unwrap();
            assert_eq!(ea.kind(), eb.kind());
            assert_eq!(a.cycle_count(), b.cycle_count());
        }
        assert_eq!(a.canonical_cycles(), b.canonical_cycles());
        assert_eq!(a.summaries(), b.summaries());
        for v in 1..=25 {
            for k in [1, 3, 7, 40] {
                assert_eq!(a.balance(v, k).unwrap(), b.balance(v, k).unwrap());
            }
            for off in [0, 1, 5, 33] {
                assert_eq!(a.step_from(v, off).unwrap(), b.step_from(v, off).unwrap());
            }
        }
    }
}
