mod common;

use common::{brute_partial_trace, l, max_diff, random};
use num_complex::Complex64;
use proptest::prelude::*;
use qdist_core::bell::bell_probabilities;
use qdist_core::protocol::{expected_final, recovery_fidelity};
use qdist_core::rng::{random_state, seeded_rng};
use qdist_core::state::label_range;
use qdist_core::{
    bell_project, decompose, distribute, make_bell, reduced_density, BellKind, DistributionPlan,
    PauliOp, QubitLabel, StateVector, NORM_TOL,
};

fn shuffled(labels: &[QubitLabel], keys: &[u64]) -> Vec<QubitLabel> {
    let mut pairs: Vec<_> = labels.iter().copied().zip(keys.iter().copied()).collect();
    pairs.sort_by_key(|&(_, k)| k);
    pairs.into_iter().map(|(x, _)| x).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_round_trip_is_bit_exact(seed in any::<u64>(), keys in prop::collection::vec(any::<u64>(), 5)) {
        let s = random(5, seed);
        let order = shuffled(s.labels(), &keys);
        let back = s.permute_to(&order).unwrap().permute_to(s.labels()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn permutations_compose(bits in prop::collection::vec(0u8..2, 4), k1 in prop::collection::vec(any::<u64>(), 4), k2 in prop::collection::vec(any::<u64>(), 4)) {
        let s = StateVector::basis(label_range(0, 4), &bits).unwrap();
        let first = shuffled(s.labels(), &k1);
        let second = shuffled(&first, &k2);
        let stepwise = s.permute_to(&first).unwrap().permute_to(&second).unwrap();
        let direct = s.permute_to(&second).unwrap();
        prop_assert_eq!(stepwise, direct);
    }

    #[test]
    fn tensor_is_associative(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = random_state(label_range(0, 2), &mut rng).unwrap();
        let b = random_state(label_range(2, 1), &mut rng).unwrap();
        let c = random_state(label_range(3, 2), &mut rng).unwrap();
        let left = a.tensor(&b).unwrap().tensor(&c).unwrap();
        let right = a.tensor(&b.tensor(&c).unwrap()).unwrap();
        prop_assert!(left.max_amplitude_diff(&right).unwrap() < NORM_TOL);
        prop_assert!((left.norm_sqr() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn pauli_algebra(seed in any::<u64>(), target in 0u32..3) {
        let s = random(3, seed);
        let q = l(target);
        for op in [PauliOp::X, PauliOp::Z] {
            let twice = s.apply_pauli(q, op).unwrap().apply_pauli(q, op).unwrap();
            prop_assert!(twice.max_amplitude_diff(&s).unwrap() < 1e-15);
        }
        // σzσx = −σxσz
        let zx = s.apply_pauli(q, PauliOp::ZX).unwrap();
        let xz = s.apply_pauli(q, PauliOp::Z).unwrap().apply_pauli(q, PauliOp::X).unwrap();
        prop_assert!(zx.max_amplitude_diff(&xz.with_global_phase(std::f64::consts::PI)).unwrap() < 1e-15);
        let zx_explicit = s.apply_pauli(q, PauliOp::X).unwrap().apply_pauli(q, PauliOp::Z).unwrap();
        prop_assert!(zx.max_amplitude_diff(&zx_explicit).unwrap() < 1e-15);
        prop_assert!((zx.norm_sqr() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn global_phase_invariance(seed in any::<u64>(), theta in -10.0f64..10.0) {
        let s = random(3, seed);
        prop_assert!((s.fidelity(&s.with_global_phase(theta)).unwrap() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn partial_trace_matches_brute_force(seed in any::<u64>(), n in 2usize..6, mask in 1u32..31) {
        let s = random(n, seed);
        let keep: Vec<QubitLabel> = (0..n as u32).filter(|k| mask & (1 << k) != 0).map(l).collect();
        prop_assume!(!keep.is_empty());
        let rho = reduced_density(&s, &keep).unwrap();
        prop_assert!(max_diff(rho.entries(), &brute_partial_trace(&s, &keep)) < NORM_TOL);
        prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < NORM_TOL);
        prop_assert!(rho.hermiticity_error() < NORM_TOL);
        let dim = rho.dim() as f64;
        prop_assert!(rho.purity() >= 1.0 / dim - NORM_TOL && rho.purity() <= 1.0 + NORM_TOL);
        // ⟨v|ρ|v⟩ ≥ 0 on a random probe.
        let probe = random(keep.len(), seed ^ 0x5a5a);
        prop_assert!(rho.expectation(probe.amplitudes()).re >= -NORM_TOL);
    }

    #[test]
    fn full_reduction_of_pure_state_is_pure(seed in any::<u64>(), n in 1usize..6) {
        let s = random(n, seed);
        let rho = reduced_density(&s, s.labels()).unwrap();
        prop_assert!((rho.purity() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn decompose_recompose_round_trip(seed in any::<u64>(), n in 2usize..7, pick in any::<prop::sample::Index>()) {
        let s = random(n, seed);
        let i = *pick.get(s.labels());
        let d = decompose(&s, i).unwrap();
        prop_assert!((d.a.norm_sqr() + d.b.norm_sqr() - 1.0).abs() < NORM_TOL);
        prop_assert!(d.a.im == 0.0 && d.a.re >= 0.0 && d.b.im == 0.0 && d.b.re >= 0.0);
        prop_assert!((s.fidelity(&d.recompose()).unwrap() - 1.0).abs() < NORM_TOL);
        prop_assert!(s.max_amplitude_diff(&d.recompose()).unwrap() < NORM_TOL);
    }

    #[test]
    fn bell_probabilities_resolve_identity(seed in any::<u64>(), n in 2usize..7, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let s = random(n, seed);
        let (p, q) = (*a.get(s.labels()), *b.get(s.labels()));
        prop_assume!(p != q);
        let probs = bell_probabilities(&s, (p, q)).unwrap();
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < NORM_TOL);
        for kind in BellKind::ALL {
            let proj = bell_project(&s, (p, q), kind).unwrap();
            prop_assert!((proj.probability - probs[kind.index()]).abs() < NORM_TOL);
        }
    }

    #[test]
    fn collapse_branches_reassemble_input(seed in any::<u64>(), n in 3usize..6) {
        let s = random(n, seed);
        let pair = (l(0), l(n as u32 - 1));
        let mut order = vec![pair.0, pair.1];
        order.extend(s.labels().iter().copied().filter(|&x| x != pair.0 && x != pair.1));
        let mut sum = vec![Complex64::new(0.0, 0.0); 1 << n];
        for kind in BellKind::ALL {
            let proj = bell_project(&s, pair, kind).unwrap();
            let Some(collapsed) = proj.collapsed else { continue };
            let term = make_bell(kind, pair).unwrap().tensor(&collapsed).unwrap();
            for (acc, t) in sum.iter_mut().zip(term.amplitudes()) {
                *acc += proj.probability.sqrt() * t;
            }
        }
        let arranged = s.permute_to(&order).unwrap();
        prop_assert!(max_diff(&sum, arranged.amplitudes()) < NORM_TOL);
    }

    #[test]
    fn step_order_does_not_change_the_result(seed in any::<u64>(), n in 2usize..6, keys in prop::collection::vec(any::<u64>(), 5)) {
        let s = random(n, seed);
        let plan = DistributionPlan::round_robin(s.labels(), n.min(2));
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by_key(|&k| keys[k]);
        let reordered = plan.reordered(&idx);
        let mut rng = seeded_rng(seed);
        let a = distribute(&s, &plan, &mut rng).unwrap();
        let b = distribute(&s, &reordered, &mut rng).unwrap();
        prop_assert!(recovery_fidelity(&s, &plan, &a).unwrap() >= 1.0 - NORM_TOL);
        prop_assert!(recovery_fidelity(&s, &reordered, &b).unwrap() >= 1.0 - NORM_TOL);
        prop_assert!((a.final_state.fidelity(&b.final_state).unwrap() - 1.0).abs() < NORM_TOL);
        prop_assert_eq!(expected_final(&s, &plan).unwrap(), expected_final(&s, &reordered).unwrap());
    }
}
