use loopsoup_core::config::{sample_configuration, sample_ordered, Mark};
use loopsoup_core::cycles::{self, canonical, CycleBackend, NaiveCycles, TreapCycles};
use loopsoup_core::exploration::{
    check_invariants, explore, explore_onfly, simple_explore, ExplorationPoint,
};
use loopsoup_core::pd::{sample_pd, DEFAULT_TRUNC};
use loopsoup_core::rng::seeded;
use loopsoup_core::splitmerge::{coupled_step, CoupledPartitions};
use loopsoup_core::tracer;
use proptest::prelude::*;
use rand::Rng;

fn mark(b: bool) -> Mark {
    if b {
        Mark::Cross
    } else {
        Mark::Bar
    }
}

fn link_ops(max_n: u32) -> impl Strategy<Value = (u32, Vec<(u32, u32, bool)>)> {
    (2..max_n).prop_flat_map(|n| {
        let op = (1..=n, 1..=n, any::<bool>()).prop_filter("distinct", |(u, v, _)| u != v);
        (Just(n), prop::collection::vec(op, 0..200))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn backends_agree_and_partition((n, ops) in link_ops(40)) {
        let mut a = NaiveCycles::singletons(n).unwrap();
        let mut b = TreapCycles::singletons(n).unwrap();
        for (u, v, x) in ops {
            let before = a.cycle_count();
            let same = a.cycle_id(u).unwrap() == a.cycle_id(v).unwrap();
            let size_u = a.cycle_len(u).unwrap();
            let ea = a.apply_link(u, v, mark(x)).unwrap();
            let eb = b.apply_link(u, v, mark(x)).unwrap();
            prop_assert_eq!(ea.kind(), eb.kind());
            prop_assert_eq!(ea.is_merge(), !same);
            if ea.is_split() {
                prop_assert_eq!(a.cycle_count(), before + 1);
            }
            if ea.is_twist() {
                prop_assert_eq!(a.cycle_count(), before);
                prop_assert_eq!(a.cycle_len(u).unwrap(), size_u);
            }
        }
        prop_assert_eq!(a.canonical_cycles(), b.canonical_cycles());
        let mut seen = vec![false; n as usize];
        for c in b.cycles() {
            for v in c.vertices() {
                prop_assert!(!seen[(v - 1) as usize]);
                seen[(v - 1) as usize] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn canonical_is_idempotent_and_reversal_blind((n, ops) in link_ops(30)) {
        let mut cs = TreapCycles::singletons(n).unwrap();
        for (u, v, x) in ops {
            cs.apply_link(u, v, mark(x)).unwrap();
        }
        for c in cs.cycles() {
            let k = canonical(&c);
            prop_assert_eq!(canonical(&k), k.clone());
            prop_assert_eq!(canonical(&c.reversed()), k);
        }
    }

    #[test]
    fn balance_is_bounded_and_reversal_invariant((n, ops) in link_ops(30), k in 1usize..40) {
        let mut cs = NaiveCycles::singletons(n).unwrap();
        for (u, v, x) in ops {
            cs.apply_link(u, v, mark(x)).unwrap();
        }
        for v in 1..=n {
            let b = cycles::balance(&cs, v, k).unwrap();
            prop_assert!(b.unsigned_abs() as usize <= k);
            // Recompute from the reversed cycle read from v.
            let c = cs.cycle_of(v).unwrap().reversed().oriented_at(v).unwrap();
            let direct: i64 = c.seq.iter().take(k).map(|&(_, d)| i64::from(d.sign())).sum();
            prop_assert_eq!(b, direct);
        }
    }

    #[test]
    fn only_crosses_never_twist(n in 2u32..50, t in 0usize..300, seed in any::<u64>()) {
        let ord = sample_ordered(n, t, 1.0, seed).unwrap();
        let mut cs = TreapCycles::singletons(n).unwrap();
        for &(e, m) in &ord.seq {
            prop_assert!(!cs.apply_edge(e, m).unwrap().is_twist());
        }
        for c in cs.cycles() {
            prop_assert!(c.seq.iter().all(|&(_, d)| d == cycles::Direction::Up)
                || c.seq.iter().all(|&(_, d)| d == cycles::Direction::Down));
        }
    }

    #[test]
    fn tracer_matches_build(n in 2u32..25, beta in 0.2f64..3.0, nu in 0.0f64..=1.0, seed in any::<u64>()) {
        let cfg = sample_configuration(n, beta, nu, seed).unwrap();
        let loops = tracer::trace(&cfg).unwrap();
        let total: f64 = loops.iter().map(|l| l.length).sum();
        prop_assert!((total - f64::from(n)).abs() < 1e-9);
        let a = tracer::cycles_at_zero(&cfg).unwrap();
        let b = cycles::build(&cfg.to_ordered().unwrap()).unwrap().canonical_cycles();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn trajectory_invariants(n in 2u32..200, beta in 0.3f64..3.0, nu in 0.0f64..=1.0, seed in any::<u64>()) {
        let (t, _, zp) = simple_explore(n, beta, nu, seed, 30.0).unwrap();
        prop_assert_eq!(check_invariants(&t).violations(), 0);
        let tau = t.events.last().filter(|e| e.kind.name() == "close").map(|e| e.t);
        prop_assert_eq!(tau.map(|x| (x * 1e9).round()), zp.first_hit_minus_one().map(|x| (x * 1e9).round()));
        let start = ExplorationPoint::new(1, 0.0, 1);
        let (t, _) = explore_onfly(n, beta, nu, seed, start, 30.0).unwrap();
        prop_assert_eq!(check_invariants(&t).violations(), 0);
        let cfg = sample_configuration(n.min(40), beta, nu, seed).unwrap();
        let (t, st) = explore(&cfg, start, 1e9).unwrap();
        prop_assert!(st.tau.is_some());
        prop_assert_eq!(check_invariants(&t).violations(), 0);
    }

    #[test]
    fn pd_normalized(theta in 0.05f64..5.0, seed in any::<u64>()) {
        let s = sample_pd(theta, DEFAULT_TRUNC, &mut seeded(seed)).unwrap();
        prop_assert!((s.total() - 1.0).abs() < 1e-12);
        prop_assert!(s.parts.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn coupled_chain_bookkeeping(seed in any::<u64>(), theta in 0.05f64..=1.0, steps in 0usize..400) {
        let mut rng = seeded(seed);
        let tail = |rng: &mut _| {
            let s = sample_pd(theta, 1e-9, rng).unwrap();
            let mut v = s.parts;
            if s.truncation_mass > 0.0 {
                v.push(s.truncation_mass);
            }
            v
        };
        let (y, z) = (tail(&mut rng), tail(&mut rng));
        let mut cp = CoupledPartitions::new(&y, &z).unwrap();
        for _ in 0..steps {
            let (u, u2, w) = (rng.random(), rng.random(), rng.random());
            cp = coupled_step(&cp, u, u2, w, theta).unwrap();
            prop_assert!(cp.matching_consistent());
        }
        prop_assert!((cp.r() - cp.r_z()).abs() < 1e-9);
        prop_assert!((cp.r() + cp.q() - 1.0).abs() < 1e-9);
    }
}
