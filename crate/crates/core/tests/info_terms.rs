use std::collections::HashMap;

use isac_region::channel::{example1, example2, names::*, random_channel, ChannelSizes};
use isac_region::region::{compute_info_terms, corollary_region, theorem_region, transcription_region};
use isac_region::scheme::{build_example2_scheme, random_scheme, AuxSizes};
use isac_region::{assemble_joint, constant_v_scheme, Example2SchemeParams, JointDistribution};
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

/// Entropy of a marginal by summing over every cell of the full tensor.
fn h(joint: &JointDistribution, vars: &[&str]) -> f64 {
    let axes: Vec<usize> = vars.iter().map(|v| joint.axis(v).unwrap()).collect();
    let mut m: HashMap<Vec<usize>, f64> = HashMap::new();
    for (flat, &w) in joint.weights().iter().enumerate() {
        if w > 0.0 {
            let idx = joint.multi_index(flat);
            *m.entry(axes.iter().map(|&a| idx[a]).collect()).or_default() += w;
        }
    }
    m.values().filter(|&&p| p > 0.0).map(|p| -p * p.log2()).sum()
}

fn cmi(joint: &JointDistribution, a: &[&str], b: &[&str], c: &[&str]) -> f64 {
    h(joint, &[a, c].concat()) + h(joint, &[b, c].concat()) - h(joint, &[a, b, c].concat()) - h(joint, c)
}

fn oracle_terms(j: &JointDistribution) -> [f64; 16] {
    let u = [U0, U1, U2];
    [
        cmi(j, &[V1], &[X1, X2, Y], &u) + cmi(j, &[V2], &[X1, X2, Y, V1], &u),
        cmi(j, &[V1], &[X1, Z1], &u),
        cmi(j, &[V2], &[X2, Z2], &u),
        cmi(j, &[U1], &[X2, Z2], &[U0, U2]),
        cmi(j, &[U2], &[X1, Z1], &[U0, U1]),
        cmi(j, &[V1], &[X2, Z2], &u),
        cmi(j, &[V2], &[X1, Z1], &u),
        cmi(j, &[X1, X2], &[Y, V1, V2], &u),
        cmi(j, &[X1], &[Y, V1, V2], &[U0, U1, U2, X2]),
        cmi(j, &[X2], &[Y, V1, V2], &[U0, U1, U2, X1]),
        cmi(j, &[X1], &[Y], &[U0, X2]),
        cmi(j, &[X2], &[Y], &[U0, X1]),
        cmi(j, &[X1, X2], &[Y], &[U0, U2]),
        cmi(j, &[X1, X2], &[Y], &[U0, U1]),
        cmi(j, &[X1, X2], &[Y], &[U0]),
        cmi(j, &[X1, X2], &[Y], &[]),
    ]
}

#[test]
fn info_terms_match_direct_summation_on_example2() {
    let ch = example2(0.9, 0.2).unwrap();
    for a in [
        [0.3, 0.2, 0.7, 0.6, 0.1, 0.1, 0.25, 0.3],
        [0.0, 0.1, 0.1, 1.0, 1.0, 0.0, 0.0, 0.0],
        [0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0],
    ] {
        let p = Example2SchemeParams::from_array(a);
        let j = assemble_joint(&ch, &build_example2_scheme(&p, &ch).unwrap()).unwrap();
        let got = compute_info_terms(&j).unwrap();
        for (k, want) in oracle_terms(&j).iter().enumerate() {
            assert!((got[k] - want).abs() < 1e-9, "I{k} at {a:?}: {} vs {want}", got[k]);
        }
    }
}

#[test]
fn info_terms_match_direct_summation_on_random_channels() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(17);
    for _ in 0..10 {
        let ch = random_channel(&mut rng, ChannelSizes::binary()).unwrap();
        let s = random_scheme(&mut rng, &ch, AuxSizes::default()).unwrap();
        let j = assemble_joint(&ch, &s).unwrap();
        let got = compute_info_terms(&j).unwrap();
        for (k, want) in oracle_terms(&j).iter().enumerate() {
            assert!((got[k] - want).abs() < 1e-9, "I{k}: {} vs {want}", got[k]);
        }
    }
}

#[test]
fn transcription_agrees_with_theorem_region() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
    for _ in 0..10 {
        let ch = random_channel(&mut rng, ChannelSizes::binary()).unwrap();
        let s = random_scheme(&mut rng, &ch, AuxSizes::default()).unwrap();
        let j = assemble_joint(&ch, &s).unwrap();
        let thm = theorem_region(&compute_info_terms(&j).unwrap());
        let tr = transcription_region(&j).unwrap();
        assert_eq!(thm.inequalities.len(), tr.inequalities.len());
        // same multiset of right-hand sides per direction (a1, a2)
        for dir in [(1, 0), (0, 1), (1, 1)] {
            let sorted = |r: &isac_region::region::RegionDescription| {
                let mut v: Vec<f64> = r
                    .inequalities
                    .iter()
                    .filter(|q| (q.a1, q.a2) == dir)
                    .map(|q| q.rhs)
                    .collect();
                v.sort_by(f64::total_cmp);
                v
            };
            let (a, b) = (sorted(&thm), sorted(&tr));
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-9, "{dir:?}: {x} vs {y}");
            }
        }
        let mut sa: Vec<f64> = thm.feasibility.iter().map(|f| f.slack).collect();
        let mut sb: Vec<f64> = tr.feasibility.iter().map(|f| f.slack).collect();
        sa.sort_by(f64::total_cmp);
        sb.sort_by(f64::total_cmp);
        for (x, y) in sa.iter().zip(&sb) {
            assert!((x - y).abs() < 1e-9, "feasibility {x} vs {y}");
        }
        let m = thm.tightest().2.max(0.0) * 1.2 + 0.01;
        for i in 0..=40 {
            for k in 0..=40 {
                let (r1, r2) = (m * i as f64 / 40.0, m * k as f64 / 40.0);
                // skip points within rounding distance of a facet
                let near = thm
                    .inequalities
                    .iter()
                    .any(|q| (f64::from(q.a1) * r1 + f64::from(q.a2) * r2 - q.rhs).abs() < 1e-7);
                if !near {
                    assert_eq!(thm.contains(r1, r2, true), tr.contains(r1, r2, true), "({r1}, {r2})");
                }
            }
        }
    }
}

#[test]
fn constant_v_theorem_region_is_the_corollary_region() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    for _ in 0..10 {
        let ch = random_channel(&mut rng, ChannelSizes::binary()).unwrap();
        let s = constant_v_scheme(&random_scheme(&mut rng, &ch, AuxSizes::default()).unwrap());
        let j = assemble_joint(&ch, &s).unwrap();
        let info = compute_info_terms(&j).unwrap();
        for k in [0, 1, 2, 5, 6] {
            assert!(info[k].abs() < 1e-12, "I{k} = {}", info[k]);
        }
        let cor = corollary_region(&j).unwrap();
        let thm = theorem_region(&info);
        let m = thm.tightest().2.max(0.0) * 1.2 + 0.01;
        for i in 0..=30 {
            for k in 0..=30 {
                let (r1, r2) = (m * i as f64 / 30.0, m * k as f64 / 30.0);
                let near = cor
                    .inequalities
                    .iter()
                    .any(|q| (f64::from(q.a1) * r1 + f64::from(q.a2) * r2 - q.rhs).abs() < 1e-7);
                if !near {
                    assert_eq!(thm.contains(r1, r2, true), cor.contains(r1, r2, true));
                }
            }
        }
    }
}

#[test]
fn example1_without_compression_admits_origin() {
    for ps in [0.1, 0.5, 0.9] {
        let ch = example1(ps).unwrap();
        let s = isac_region::scheme::product_input_scheme(&ch, &[0.5, 0.5], &[0.5, 0.5]).unwrap();
        let j = assemble_joint(&ch, &s).unwrap();
        let thm = theorem_region(&compute_info_terms(&j).unwrap());
        assert!(thm.contains(0.0, 0.0, true));
    }
}

#[test]
fn example1_state_copy_gives_zero_distortion_at_origin() {
    use isac_region::estimator::{default_conditioning, min_expected_distortion};
    use isac_region::User;
    for ps in [0.1, 0.3, 0.5, 0.9] {
        let ch = example1(ps).unwrap();
        let s = isac_region::scheme::example1_copy_scheme(&ch).unwrap();
        let j = assemble_joint(&ch, &s).unwrap();
        let d2 = min_expected_distortion(&j, User::Tx2, ch.distortion(), &default_conditioning(User::Tx2)).unwrap();
        assert_eq!(d2, 0.0);
        let thm = theorem_region(&compute_info_terms(&j).unwrap());
        assert!(thm.contains(0.0, 0.0, true), "{thm:?}");
    }
}
