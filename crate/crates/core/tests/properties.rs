use isac_region::channel::{names::*, random_channel, ChannelSizes};
use isac_region::estimator::{expected_distortion, optimal_estimator};
use isac_region::mcsim::{empirical_distortion, sample_joint};
use isac_region::region::{compute_info_terms, DOMINANCE_TOL};
use isac_region::scheme::{random_scheme, AuxSizes};
use isac_region::{
    assemble_joint, Alphabet, DistortionTable, JointDistribution, User, UserDistortion, Variable,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

const TOL: f64 = 1e-9;

/// Joint over A, B, C, D with the given sizes from raw positive weights.
fn small_joint() -> impl Strategy<Value = JointDistribution> {
    (2usize..4, 2usize..4, 1usize..3, 2usize..3)
        .prop_flat_map(|(a, b, c, d)| {
            let n = a * b * c * d;
            (Just([a, b, c, d]), prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0..1.0f64], n))
        })
        .prop_filter_map("no mass", |(dims, mut w)| {
            let s: f64 = w.iter().sum();
            if s <= 0.0 {
                return None;
            }
            w.iter_mut().for_each(|x| *x /= s);
            let vars = ["A", "B", "C", "D"]
                .iter()
                .zip(dims)
                .map(|(n, k)| Variable::new(n, Alphabet::range(n, k)))
                .collect();
            JointDistribution::new(vars, w).ok()
        })
}

fn assembled(seed: u64) -> JointDistribution {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let ch = random_channel(&mut rng, ChannelSizes::binary()).unwrap();
    let s = random_scheme(&mut rng, &ch, AuxSizes::default()).unwrap();
    assemble_joint(&ch, &s).unwrap()
}

fn hamming() -> DistortionTable {
    DistortionTable::hamming(&Alphabet::binary(S1), &Alphabet::binary(S2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cmi_is_nonnegative_and_symmetric(j in small_joint()) {
        let ab = j.conditional_mutual_information(&["A"], &["B"], &["C"]).unwrap();
        let ba = j.conditional_mutual_information(&["B"], &["A"], &["C"]).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() < TOL);
        let ad = j.conditional_mutual_information(&["A", "C"], &["D"], &[]).unwrap();
        prop_assert!(ad >= 0.0);
    }

    #[test]
    fn chain_rule(j in small_joint()) {
        // I(A;BC|D) = I(A;B|D) + I(A;C|BD)
        let whole = j.conditional_mutual_information(&["A"], &["B", "C"], &["D"]).unwrap();
        let first = j.conditional_mutual_information(&["A"], &["B"], &["D"]).unwrap();
        let second = j.conditional_mutual_information(&["A"], &["C"], &["B", "D"]).unwrap();
        prop_assert!((whole - first - second).abs() < TOL, "{whole} vs {first} + {second}");
        // H(AB) = H(A) + H(B|A)
        let hab = j.entropy(&["A", "B"], &[]).unwrap();
        let ha = j.entropy(&["A"], &[]).unwrap();
        let hba = j.entropy(&["B"], &["A"]).unwrap();
        prop_assert!((hab - ha - hba).abs() < TOL);
    }

    #[test]
    fn marginalization_commutes(j in small_joint()) {
        let two_step = j.marginalize(&["A", "B", "C"]).unwrap().marginalize(&["A", "C"]).unwrap();
        let one_step = j.marginalize(&["A", "C"]).unwrap();
        prop_assert_eq!(two_step.dims(), one_step.dims());
        for (x, y) in two_step.weights().iter().zip(one_step.weights()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let total = j.marginalize(&[]).unwrap();
        prop_assert!((total.weights()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn assembled_joint_factorizes(seed in any::<u64>()) {
        let j = assembled(seed);
        prop_assert!((j.total() - 1.0).abs() < 1e-12);
        // (V1) - (U0 U2 X1 Z1) - rest, (U1 U2) independent given U0
        let u = [U0, U2, X1, Z1];
        prop_assert!(j.conditional_mutual_information(&[V1], &[U1, X2, Y, Z2, S1, S2, V2], &u).unwrap() < TOL);
        prop_assert!(j.conditional_mutual_information(&[U1], &[U2], &[U0]).unwrap() < TOL);
        prop_assert!(j.conditional_mutual_information(&[S1, S2], &[U0, U1, U2, X1, X2], &[]).unwrap() < TOL);
    }

    #[test]
    fn info_term_dominances(seed in any::<u64>()) {
        let info = compute_info_terms(&assembled(seed)).unwrap();
        prop_assert!(info.0.iter().all(|&v| v >= 0.0));
        prop_assert!(info.dominance_violations(DOMINANCE_TOL).is_empty());
    }

    #[test]
    fn optimal_estimator_beats_every_single_change(seed in any::<u64>(), which in 0usize..64) {
        let j = assembled(seed);
        let d = hamming();
        let cond = [X2, Z2, V1];
        let est = optimal_estimator(&j, User::Tx2, &d, &cond).unwrap();
        let best = expected_distortion(&j, &est, &d).unwrap();
        let sizes: Vec<usize> = est.conditioning().iter().map(Variable::size).collect();
        let mut tuple = Vec::new();
        let mut f = which % sizes.iter().product::<usize>();
        for &s in sizes.iter().rev() {
            tuple.push(f % s);
            f /= s;
        }
        tuple.reverse();
        for s_hat in 0..2 {
            let alt = est.clone().with_entry(&tuple, s_hat).unwrap();
            prop_assert!(expected_distortion(&j, &alt, &d).unwrap() >= best - 1e-12);
        }
    }

    #[test]
    fn more_conditioning_never_hurts(seed in any::<u64>()) {
        let j = assembled(seed);
        let d = hamming();
        let coarse = [vec![], vec![X2], vec![X2, Z2], vec![X2, Z2, V1], vec![X2, Z2, V1, U1]];
        let mut prev = f64::INFINITY;
        for c in &coarse {
            let est = optimal_estimator(&j, User::Tx2, &d, c).unwrap();
            let v = expected_distortion(&j, &est, &d).unwrap();
            prop_assert!(v <= prev + 1e-12, "{c:?}: {v} > {prev}");
            prev = v;
        }
    }

    #[test]
    fn hamming_map_identity(seed in any::<u64>()) {
        // optimal Hamming distortion = 1 - sum_c max_s P(c, s)
        let j = assembled(seed);
        let d = hamming();
        let est = optimal_estimator(&j, User::Tx2, &d, &[X2, Z2]).unwrap();
        let got = expected_distortion(&j, &est, &d).unwrap();
        let m = j.marginalize_ordered(&[X2, Z2, S2]).unwrap();
        let w = m.weights();
        let hit: f64 = w.chunks(2).map(|r| r[0].max(r[1])).sum();
        prop_assert!((got - (1.0 - hit)).abs() < 1e-12);
    }

    #[test]
    fn weighted_distortion_estimator_is_optimal(seed in any::<u64>(), c01 in 0.1..3.0f64, c10 in 0.1..3.0f64) {
        let j = assembled(seed);
        let user2 = UserDistortion::new(Alphabet::binary("S2hat"), vec![vec![0.0, c01], vec![c10, 0.0]]).unwrap();
        let d = DistortionTable::new(UserDistortion::hamming(&Alphabet::binary(S1)), user2);
        let est = optimal_estimator(&j, User::Tx2, &d, &[X2]).unwrap();
        let best = expected_distortion(&j, &est, &d).unwrap();
        for x in 0..2 {
            for s_hat in 0..2 {
                let alt = est.clone().with_entry(&[x], s_hat).unwrap();
                prop_assert!(expected_distortion(&j, &alt, &d).unwrap() >= best - 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn monte_carlo_mean_is_consistent(seed in any::<u64>()) {
        let j = assembled(seed);
        let d = hamming();
        let est = optimal_estimator(&j, User::Tx2, &d, &[X2, Z2, V1]).unwrap();
        let exact = expected_distortion(&j, &est, &d).unwrap();
        let batch = sample_joint(&j, 20_000, seed).unwrap();
        let emp = empirical_distortion(&batch, &est, &d).unwrap();
        // 5 SE keeps the false-alarm rate negligible over all cases
        prop_assert!((emp.mean - exact).abs() <= 5.0 * emp.std_error + 1e-12,
            "{} vs {exact} (se {})", emp.mean, emp.std_error);
    }
}

#[test]
fn standard_error_scales_as_inverse_sqrt_n() {
    let j = assembled(21);
    let d = hamming();
    let est = optimal_estimator(&j, User::Tx2, &d, &[X2]).unwrap();
    let small = empirical_distortion(&sample_joint(&j, 10_000, 1).unwrap(), &est, &d).unwrap();
    let large = empirical_distortion(&sample_joint(&j, 160_000, 1).unwrap(), &est, &d).unwrap();
    assert!(small.std_error > 0.0);
    let ratio = small.std_error / large.std_error;
    assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
}
