//! Property tests over seeded random inputs.

use proptest::prelude::*;

use weylcov::bounds::{dpi_check, proof_trace, theorem1_check, theorem2_check, theorem3_check};
use weylcov::channels::{
    apply, channel_distance, check_covariance, KrausChannel, PauliCoeffs, PauliOp, PhaseDamping,
    QuantumChannel, WeylChannel,
};
use weylcov::linalg::random::{random_density, random_distribution, random_unit_vector, random_unitary, stream_rng, uniform};
use weylcov::linalg::{partial_trace, relative_entropy, von_neumann_entropy, CMat, DensityMatrix, PureState};
use weylcov::minent::{additivity_gap, min_output_entropy};
use weylcov::orbits::{sample_admissible_in, unbias_state};
use weylcov::weyl::{
    expand_in_shift_algebra, fourier_basis, group_element, mub_family, shift_expansion_residual, weyl_operator,
    Basis, WeylIndex,
};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn random_weyl(d: usize, seed: u64) -> WeylChannel<f64> {
    let pi = random_distribution::<f64>(d * d, &mut stream_rng(seed, 1));
    WeylChannel::new(d, pi.chunks(d).map(|c| c.to_vec()).collect()).unwrap()
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn entropy_is_unitarily_invariant(d in 2usize..6, seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let rho = random_density::<f64>(d, d, &mut rng);
        let u = random_unitary::<f64>(d, &mut rng);
        let s = von_neumann_entropy(&rho);
        prop_assert!((von_neumann_entropy(&rho.conjugated(&u)) - s).abs() <= 1e-10);
        prop_assert!(s >= -1e-12 && s <= (d as f64).ln() + 1e-12);
    }

    #[test]
    fn entropy_is_concave(d in 2usize..5, seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let p = random_distribution::<f64>(3, &mut rng);
        let states: Vec<_> = (0..3).map(|_| random_density::<f64>(d, 1 + seed as usize % d, &mut rng)).collect();
        let mut mix = CMat::zeros(d, d);
        for (w, s) in p.iter().zip(&states) {
            mix = &mix + &s.mat().scale_real(*w);
        }
        let mixed = DensityMatrix::new(mix, vec![d]).unwrap();
        let avg: f64 = p.iter().zip(&states).map(|(w, s)| w * von_neumann_entropy(s)).sum();
        prop_assert!(von_neumann_entropy(&mixed) >= avg - 1e-10);
    }

    #[test]
    fn relative_entropy_vanishes_only_on_equal_states(d in 2usize..5, seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let rho = random_density::<f64>(d, d, &mut rng);
        let tau = random_density::<f64>(d, d, &mut rng);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() <= 1e-10);
        let r = relative_entropy(&rho, &tau).unwrap();
        prop_assert!(r >= -1e-12);
        if rho.mat().max_abs_diff(tau.mat()) > 1e-8 {
            prop_assert!(r > 0.0);
        }
    }

    #[test]
    fn partial_trace_of_product(da in 1usize..4, db in 1usize..4, seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let a = random_density::<f64>(da, da, &mut rng);
        let b = random_density::<f64>(db, db, &mut rng);
        let ab = a.tensor(&b);
        prop_assert!(partial_trace(&ab, 0).unwrap().mat().max_abs_diff(a.mat()) <= 1e-12);
        prop_assert!(partial_trace(&ab, 1).unwrap().mat().max_abs_diff(b.mat()) <= 1e-12);
    }

    #[test]
    fn weyl_operator_factorizes(d in 2usize..8, m in 0usize..8, n in 0usize..8) {
        let (m, n) = (m % d, n % d);
        let u = weyl_operator::<f64>(WeylIndex::new(d, m, n).unwrap());
        let split = weyl_operator::<f64>(WeylIndex::new(d, m, 0).unwrap())
            .matmul(&weyl_operator(WeylIndex::new(d, 0, n).unwrap()));
        prop_assert!(u.max_abs_diff(&split) <= 1e-14);
        prop_assert!(u.unitarity_defect() <= 1e-14);
    }

    #[test]
    fn group_elements_commute_and_lie_in_shift_algebra(d in prop::sample::select(vec![2usize, 3, 5, 7]), seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let f = fourier_basis::<f64>(d);
        let phases = |rng: &mut _| (0..d).map(|_| std::f64::consts::TAU * uniform::<f64>(rng)).collect::<Vec<_>>();
        let a = group_element(&f, &phases(&mut rng)).unwrap();
        let b = group_element(&f, &phases(&mut rng)).unwrap();
        prop_assert!(a.matmul(&b).max_abs_diff(&b.matmul(&a)) <= 1e-13);
        let c = expand_in_shift_algebra(&a, &f).unwrap();
        prop_assert!(shift_expansion_residual(&a, &c) <= 1e-10);
    }

    #[test]
    fn weyl_channels_are_unital_channels(d in 2usize..6, seed in any::<u64>()) {
        let ch = random_weyl(d, seed);
        let mut rng = stream_rng(seed, 2);
        let rho = random_density::<f64>(d, d, &mut rng);
        let out = ch.map(rho.mat());
        prop_assert!((out.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(DensityMatrix::new(out, vec![d]).is_ok());
        let mixed = DensityMatrix::<f64>::maximally_mixed(d);
        prop_assert!(apply(&ch, &mixed).unwrap().mat().max_abs_diff(mixed.mat()) <= 1e-12);
    }

    #[test]
    fn data_processing(d in 2usize..4, seed in any::<u64>()) {
        let ch = random_weyl(d, seed);
        let mut rng = stream_rng(seed, 3);
        let rho = random_density::<f64>(d, d, &mut rng);
        let tau = random_density::<f64>(d, d, &mut rng);
        let (before, after) = dpi_check(&ch, &rho, &tau).unwrap();
        prop_assert!(after <= before + 1e-9);
    }

    #[test]
    fn pauli_conjugation_matches_channel_conjugation(seed in any::<u64>(), k in 0usize..4) {
        let w = random_distribution::<f64>(4, &mut stream_rng(seed, 0));
        let c = PauliCoeffs::new([w[0], w[1], w[2], w[3]]).unwrap();
        let op = PauliOp::ALL[k];
        let u = op.matrix::<f64>();
        let post = KrausChannel::post_conjugated(&c, &u);
        prop_assert!(channel_distance(&c.conjugated(op), &post).unwrap() <= 1e-14);
        // Pauli channels commute with Pauli frame changes.
        prop_assert!(channel_distance(&c, &KrausChannel::frame_changed(&c, &u)).unwrap() <= 1e-14);
    }

    #[test]
    fn unbias_stays_in_group(d in 2usize..4, s in 0usize..4, t in 0usize..4, seed in any::<u64>()) {
        let fam = mub_family::<f64>(d).unwrap();
        let (s, t) = (s % (d + 1), t % (d + 1));
        prop_assume!(s != t);
        let g = PureState::new(random_unit_vector(d, &mut stream_rng(seed, 0))).unwrap();
        let out = unbias_state(&g, fam.basis(s), fam.basis(t)).unwrap();
        let c = fam.basis(s).matrix();
        let m = c.adjoint().matmul(&out.element.matrix()).matmul(&c);
        prop_assert!(m.off_diagonal_max() <= 1e-13);
        if d == 2 {
            prop_assert!(out.feasible && out.residual <= 1e-10);
        }
    }

    #[test]
    fn qutrit_vectors_with_a_zero_coordinate_are_infeasible(seed in any::<u64>(), zero in 0usize..3) {
        let mut v = random_unit_vector::<f64>(3, &mut stream_rng(seed, 0));
        v[zero] = num_complex::Complex::new(0.0, 0.0);
        let g = PureState::normalized(v).unwrap();
        let out = unbias_state(&g, &Basis::computational(3), &fourier_basis(3)).unwrap();
        prop_assert!(!out.feasible);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn phase_damping_bound_and_trace(
        d in prop::sample::select(vec![2usize, 3, 5]),
        dim_k in 1usize..4,
        mix in 1usize..4,
        s in 0usize..6,
        seed in any::<u64>(),
    ) {
        let fam = mub_family::<f64>(d).unwrap();
        let basis = fam.basis(s % (d + 1));
        let x = sample_admissible_in(basis, dim_k, mix, seed).unwrap().x;
        let lambda = random_distribution::<f64>(d, &mut stream_rng(seed, 7));
        let r = theorem1_check(&lambda, basis, &x).unwrap();
        prop_assert!(r.margin >= -1e-9);
        let t = proof_trace(&lambda, basis, &x, None).unwrap();
        prop_assert!(t.ee1_residual <= 1e-9 && t.ee3_residual <= 1e-9);
        prop_assert!(t.rel_after <= t.rel_before + 1e-9);
        prop_assert!(t.fixed_point_defect <= 1e-10);
    }

    #[test]
    fn maximally_entangled_is_an_equality_case(d in prop::sample::select(vec![2usize, 3, 5]), seed in any::<u64>()) {
        let fam = mub_family::<f64>(d).unwrap();
        let lambda = random_distribution::<f64>(d, &mut stream_rng(seed, 0));
        let basis = fam.basis(seed as usize % (d + 1));
        let r = theorem1_check(&lambda, basis, &DensityMatrix::maximally_entangled(d)).unwrap();
        prop_assert!(r.margin.abs() <= 1e-9);
    }

    #[test]
    fn depolarizing_bound_local_unitary_invariance(d in prop::sample::select(vec![2usize, 3]), p in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let dk = 2;
        let x = random_density::<f64>(d * dk, 2, &mut rng).with_factors(vec![d, dk]).unwrap();
        let v = random_unitary::<f64>(dk, &mut rng);
        let y = x.conjugated(&CMat::identity(d).kron(&v));
        let a = theorem2_check(d, p, &x).unwrap();
        let b = theorem2_check(d, p, &y).unwrap();
        prop_assert!(a.margin >= -1e-9);
        prop_assert!((a.lhs - b.lhs).abs() <= 1e-9);
        prop_assert!((a.rhs - b.rhs).abs() <= 1e-9);
    }

    #[test]
    fn two_pauli_bound_balanced_conditionals(p in 0.001f64..0.3333, seed in any::<u64>()) {
        let rho = random_density::<f64>(4, 1 + seed as usize % 4, &mut stream_rng(seed, 0))
            .with_factors(vec![2, 2])
            .unwrap();
        let r = theorem3_check(p, &rho).unwrap();
        prop_assert!(r.margin >= -1e-9);
        prop_assert!(r.conditional_traces.iter().all(|t| (t - 1.0).abs() <= 1e-9));
    }

    #[test]
    fn spectral_criterion_implies_covariance(seed in any::<u64>(), s in 0usize..4) {
        // Phase damping in basis s is covariant for the group of basis s.
        let fam = mub_family::<f64>(3).unwrap();
        let s = s % 4;
        let lambda = random_distribution::<f64>(3, &mut stream_rng(seed, 0));
        let ch = PhaseDamping::new(3, lambda, s).unwrap();
        let rep = check_covariance(&ch, fam.basis(s), 100, seed).unwrap();
        if rep.spectral_criterion {
            prop_assert!(rep.max_deviation <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn more_restarts_never_hurt(seed in any::<u64>(), r1 in 1usize..5, extra in 1usize..5) {
        let w = random_distribution::<f64>(4, &mut stream_rng(seed, 0));
        let ch = PauliCoeffs::new([w[0], w[1], w[2], w[3]]).unwrap();
        let a = min_output_entropy(&ch, r1, seed, 1e-10).unwrap();
        let b = min_output_entropy(&ch, r1 + extra, seed, 1e-10).unwrap();
        prop_assert!(b.value <= a.value + 1e-12);
        prop_assert!(a.value >= -1e-12);
        let again = min_output_entropy(&ch, r1, seed, 1e-10).unwrap();
        prop_assert_eq!(a.value.to_bits(), again.value.to_bits());
    }

    #[test]
    fn additivity_gap_is_bounded_above(seed in any::<u64>()) {
        let wa = random_distribution::<f64>(4, &mut stream_rng(seed, 0));
        let wb = random_distribution::<f64>(4, &mut stream_rng(seed, 1));
        let a = PauliCoeffs::new([wa[0], wa[1], wa[2], wa[3]]).unwrap();
        let b = PauliCoeffs::new([wb[0], wb[1], wb[2], wb[3]]).unwrap();
        let r = additivity_gap(&a, &b, 3, seed).unwrap();
        prop_assert!(r.gap <= 1e-6);
    }

    #[test]
    fn phase_dampings_reach_zero(d in 2usize..4, s in 0usize..4, seed in any::<u64>()) {
        let lambda = random_distribution::<f64>(d, &mut stream_rng(seed, 0));
        let ch = PhaseDamping::new(d, lambda, s % (d + 1)).unwrap();
        let r = min_output_entropy(&ch, 4, seed, 1e-10).unwrap();
        prop_assert!(r.value <= 1e-8);
    }
}
