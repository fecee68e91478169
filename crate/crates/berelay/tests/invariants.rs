//! Randomized structural invariants across module boundaries.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use berelay::matching::{blossom_mwm, enumerate_mwm, greedy_local_mwm, WeightedGraph};
use berelay::netmodel::{dbm_to_mw, direct_rate, place_nodes};
use berelay::numeric::{bisect_upper, golden_section_max};
use berelay::pairsolver::oracle::random_problem;
use berelay::pairsolver::{solve_alpha_fair, solve_minrate_feasible};
use berelay::protocol::{run_be_allocation, NetworkAllocation, SelectionMode};
use berelay::simharness::{trial_instance, Experiment, ExperimentConfig};
use berelay::utility::{alpha_utility, pair_utility_gain};

const ALPHAS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

fn seeded_graph(seed: u64) -> WeightedGraph {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=10);
    let p = rng.random_range(0.2..0.9);
    let mut g = WeightedGraph::with_vertices(1..=n);
    for u in 1..=n {
        for v in (u + 1)..=n {
            if rng.random_bool(p) {
                g.add_edge(u, v, rng.random_range(0.1..10.0)).unwrap();
            }
        }
    }
    g
}

proptest! {
    #[test]
    fn utility_strictly_increasing(
        alpha in 0.0..3.0f64,
        r1 in 0.01..1000.0f64,
        bump in 0.01..10.0f64,
    ) {
        let r2 = r1 + bump;
        prop_assert!(alpha_utility(r2, alpha) > alpha_utility(r1, alpha));
    }

    #[test]
    fn utility_gain_vanishes_when_nothing_moves(
        alpha in 0.0..3.0f64,
        r_s in 0.01..100.0f64,
        r_f in 0.01..100.0f64,
    ) {
        prop_assert_eq!(pair_utility_gain(r_s, r_f, r_s, r_f, alpha), 0.0);
        prop_assert!(pair_utility_gain(r_s + 0.1, r_f + 0.1, r_s, r_f, alpha) > 0.0);
    }

    #[test]
    fn rate_strictly_grows_with_bandwidth(
        w1 in 0.1..50.0f64,
        stretch in 1.1..4.0f64,
        p in 1.0..1000.0f64,
        rho in 1e-4..1.0f64,
    ) {
        let w2 = w1 * stretch;
        prop_assert!(direct_rate(w2, p, rho) > direct_rate(w1, p, rho));
    }

    #[test]
    fn dbm_conversion_round_trips(dbm in -40.0..40.0f64) {
        let back = 10.0 * dbm_to_mw(dbm).log10();
        prop_assert!((back - dbm).abs() <= 1e-12 * (1.0 + dbm.abs()));
    }

    #[test]
    fn placement_respects_geometry(seed in any::<u64>(), n in 2usize..30, radius in 50.0..1000.0f64) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let pts = place_nodes(n, radius, &mut rng);
        prop_assert_eq!(pts.len(), n);
        for (i, a) in pts.iter().enumerate() {
            prop_assert!(a.norm() <= radius + 1e-9);
            prop_assert!(a.norm() >= 1.0 - 1e-9);
            for b in &pts[i + 1..] {
                prop_assert!(a.distance(b) >= 1.0 - 1e-9);
            }
        }
    }

    #[test]
    fn golden_section_locates_parabola_peak(
        m in -5.0..5.0f64,
        a in 0.1..10.0f64,
        b in 0.1..10.0f64,
    ) {
        let best = golden_section_max(m - a, m + b, 1e-9, |x| -(x - m) * (x - m));
        prop_assert!((best.x - m).abs() <= 1e-6);
        prop_assert!(best.value >= -1e-12);
    }

    #[test]
    fn bisection_brackets_threshold(theta in 0.5..9.5f64) {
        let edge = bisect_upper(0.0, 10.0, 1e-9, |x| x <= theta);
        prop_assert!(edge <= theta);
        prop_assert!((edge - theta).abs() <= 1e-7);
    }

    #[test]
    fn graph_dump_parse_round_trips(seed in any::<u64>()) {
        let g = seeded_graph(seed);
        let parsed = WeightedGraph::parse(&g.dump()).unwrap();
        prop_assert_eq!(parsed.edges(), g.edges());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blossom_agrees_with_enumeration(seed in any::<u64>()) {
        let g = seeded_graph(seed);
        let fast = blossom_mwm(&g);
        let slow = enumerate_mwm(&g).unwrap();
        prop_assert_eq!(fast.total_weight(), slow.total_weight());
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in fast.edges() {
            prop_assert!(g.weight(u, v).is_some());
            prop_assert!(seen.insert(u) && seen.insert(v));
        }
    }

    #[test]
    fn greedy_stays_within_half_and_budget(seed in any::<u64>()) {
        let g = seeded_graph(seed);
        let best = blossom_mwm(&g);
        let (greedy, trace) = greedy_local_mwm(&g);
        prop_assert!(greedy.total_weight() >= 0.5 * best.total_weight() - 1e-9);
        prop_assert!(trace.len() <= 2 * g.n_edges() + g.n_vertices());
    }

    #[test]
    fn pair_solution_feasible_and_preserving(seed in any::<u64>(), which in 0usize..4) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let p = random_problem(ALPHAS[which], &mut rng);
        let a = solve_alpha_fair(&p, 1e-6).unwrap();
        prop_assert!(a.satisfies_constraints(&p, 1e-6));
        prop_assert!((a.w_s_be + a.w_f_be - p.w_total()).abs() <= 1e-9 * (1.0 + p.w_total()));
        prop_assert!(a.r_s_be >= p.r_s_in - 1e-9 * (1.0 + p.r_s_in));
        prop_assert!(a.r_f_be >= p.r_f_in - 1e-9 * (1.0 + p.r_f_in));
        prop_assert!(a.gain >= -1e-9);
    }

    #[test]
    fn minrate_feasibility_is_monotone(seed in any::<u64>(), lo in 0.1..2.0f64, hi_mul in 1.0..3.0f64) {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let p = random_problem(0.0, &mut rng);
        let hi = lo * hi_mul;
        let at_hi = solve_minrate_feasible(&p, hi, 1e-6).unwrap();
        let at_lo = solve_minrate_feasible(&p, lo, 1e-6).unwrap();
        if let Some(h) = &at_hi {
            // A stricter floor can only be feasible if the looser one is,
            // and shrinking the feasible set cannot raise the best sum.
            let l = at_lo.as_ref().expect("feasible at hi but not at lo");
            prop_assert!(l.r_s_be + l.r_f_be >= h.r_s_be + h.r_f_be - 1e-6);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn network_run_keeps_its_books(trial in 0usize..1000, n in 2usize..12, which in 0usize..2) {
        let mut config = ExperimentConfig::defaults(Experiment::NNodeSpectral);
        config.n_nodes = n;
        config.alpha = ALPHAS[which];
        let (_, channel, nodes) = trial_instance(&config, trial).unwrap();

        let (alloc, outcome) =
            run_be_allocation(&channel, &nodes, config.alpha, SelectionMode::Centralized, None, 1e-6)
                .unwrap();
        outcome.validate(n).unwrap();

        let w_in: f64 = nodes.iter().map(|s| s.w_in).sum();
        let w_be: f64 = alloc.w_be.iter().sum();
        prop_assert!((w_in - w_be).abs() <= 1e-9 * (1.0 + w_in));
        for (state, r) in nodes.iter().zip(&alloc.r_be) {
            prop_assert!(*r >= state.r_in - 1e-6);
        }

        let direct = NetworkAllocation::direct(&nodes, config.alpha);
        let gap = (alloc.total_utility - direct.total_utility) - outcome.total_gain();
        prop_assert!(gap.abs() <= 1e-5 * n as f64);

        let (_, dist_outcome) = run_be_allocation(
            &channel, &nodes, config.alpha, SelectionMode::Distributed, Some(500.0), 1e-6,
        ).unwrap();
        prop_assert!(dist_outcome.total_gain() <= outcome.total_gain() + 1e-9);
    }

    #[test]
    fn trials_are_reproducible_and_distinct(trial in 0usize..500) {
        let config = ExperimentConfig::defaults(Experiment::NNodeSpectral);
        let (seed_a, chan_a, nodes_a) = trial_instance(&config, trial).unwrap();
        let (seed_b, chan_b, nodes_b) = trial_instance(&config, trial).unwrap();
        prop_assert_eq!(seed_a, seed_b);
        for (a, b) in nodes_a.iter().zip(&nodes_b) {
            prop_assert_eq!(a.position, b.position);
            prop_assert_eq!(a.rho_ap, b.rho_ap);
        }
        prop_assert_eq!(chan_a.gain(1, 2), chan_b.gain(1, 2));

        let (_, _, nodes_c) = trial_instance(&config, trial + 1).unwrap();
        prop_assert!(nodes_a.iter().zip(&nodes_c).any(|(a, c)| a.position != c.position));
    }
}
