use isac_region::channel::{example2, random_channel, ChannelSizes};
use isac_region::fme::*;
use isac_region::region::compute_info_terms;
use isac_region::scheme::{build_example2_scheme, random_scheme, AuxSizes};
use isac_region::{assemble_joint, Example2SchemeParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn terms(values: [i64; 16]) -> [BigRational; 16] {
    values.map(int)
}

#[test]
fn all_zero_terms_project_to_origin() {
    let shadow = projected_region(&terms([0; 16]));
    let z = BigRational::zero();
    assert!(shadow.contains(&[z.clone(), z.clone()], true));
    let eps = BigRational::new(1.into(), 1000.into());
    assert!(!shadow.contains(&[eps.clone(), z.clone()], true));
    assert!(!shadow.contains(&[z, eps], true));
}

/// Hand-derived shadow for I3 = I4 = 1, I7 = I8 = I9 = 2, I10..I14 = 1,
/// I15 = 2 and all other terms 0: with R1v = R2v = 0 the private rates
/// need `Rkp >= Rk - 1` and `R1p + R2p <= 1`, so the shadow is
/// `max(0, R1-1) + max(0, R2-1) <= 1`, `R1 + R2 <= 2`, `R1, R2 >= 0`.
fn half_plane_oracle(r1: &BigRational, r2: &BigRational) -> bool {
    let one = BigRational::one();
    let pos = |x: BigRational| x.max(BigRational::zero());
    !r1.is_negative()
        && !r2.is_negative()
        && pos(r1 - &one) + pos(r2 - &one) <= one
        && r1 + r2 <= int(2)
}

#[test]
fn synthetic_terms_match_half_plane_oracle() {
    let i = terms([0, 0, 0, 1, 1, 0, 0, 2, 2, 2, 1, 1, 1, 1, 1, 2]);
    let shadow = projected_region(&i);
    let closed_form = theorem_system(&i);
    let mut disagreements = 0;
    // 100 x 100 lattice over [0, 5/2]^2 with step 1/40
    for a in 0..100 {
        for b in 0..100 {
            let p = [BigRational::new(a.into(), 40.into()), BigRational::new(b.into(), 40.into())];
            let want = half_plane_oracle(&p[0], &p[1]);
            if shadow.contains(&p, true) != want || closed_form.contains(&p, true) != want {
                disagreements += 1;
            }
        }
    }
    assert_eq!(disagreements, 0);
}

#[test]
fn elimination_order_does_not_change_the_shadow() {
    let i = terms([1, 1, 1, 2, 1, 0, 1, 3, 2, 2, 2, 1, 2, 3, 3, 3]);
    let sys = build_subrates_system(&i);
    let paper = project(&sys, &[R1, R2]).unwrap();
    let mut other = sys.clone();
    for v in [R2P, R1V, R1P, R2V] {
        other = other.eliminate(v).unwrap();
    }
    let other = project(&other, &[R1, R2]).unwrap();
    let eq = systems_equivalent(&paper, &other, &rate_box(&paper), 40, 200, 9).unwrap();
    assert!(eq.is_equivalent(), "{eq:?}");
}

#[test]
fn projection_is_sound_and_complete_on_samples() {
    // points of the shadow extend to full subrate tuples; points outside do not
    let i = terms([1, 1, 1, 2, 2, 1, 1, 3, 2, 2, 2, 2, 3, 3, 4, 4]);
    let sys = build_subrates_system(&i);
    let proj = project_with_history(&sys, &[R1, R2]).unwrap();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(4);
    let (mut inside, mut outside) = (0, 0);
    for _ in 0..400 {
        let p = [
            BigRational::new(rng.random_range(0..=256).into(), 64.into()),
            BigRational::new(rng.random_range(0..=256).into(), 64.into()),
        ];
        if proj.system.contains(&p, true) {
            inside += 1;
            let full = proj.extend_point(&p).expect("shadow point must lift");
            assert!(sys.contains(&full, true), "lift of {p:?} violates the system");
        } else {
            outside += 1;
            assert!(proj.extend_point(&p).is_none_or(|full| !sys.contains(&full, true)));
        }
    }
    assert!(inside > 20 && outside > 20, "{inside} / {outside}");
}

#[test]
fn example2_projection_matches_closed_form() {
    let ch = example2(0.9, 0.2).unwrap();
    for a in [
        [0.3, 0.2, 0.7, 0.6, 0.1, 0.1, 0.25, 0.3],
        [0.0, 0.1, 0.1, 1.0, 1.0, 0.0, 0.0, 0.0],
        [0.5, 0.9, 0.1, 0.4, 0.8, 0.0, 0.2, 0.6],
    ] {
        let p = Example2SchemeParams::from_array(a);
        let j = assemble_joint(&ch, &build_example2_scheme(&p, &ch).unwrap()).unwrap();
        let q = rationalize_terms(&compute_info_terms(&j).unwrap()).unwrap();
        let shadow = projected_region(&q);
        let closed = theorem_system(&q);
        let eq = systems_equivalent(&shadow, &closed, &rate_box(&closed), 50, 300, 1).unwrap();
        assert!(eq.is_equivalent(), "{a:?}: {eq:?}");
    }
}

#[test]
fn random_channel_projection_matches_closed_form() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(12);
    for _ in 0..5 {
        let ch = random_channel(&mut rng, ChannelSizes::binary()).unwrap();
        let s = random_scheme(&mut rng, &ch, AuxSizes::default()).unwrap();
        let j = assemble_joint(&ch, &s).unwrap();
        let q = rationalize_terms(&compute_info_terms(&j).unwrap()).unwrap();
        let shadow = projected_region(&q);
        let closed = theorem_system(&q);
        let eq = systems_equivalent(&shadow, &closed, &rate_box(&closed), 50, 300, 2).unwrap();
        assert!(eq.is_equivalent(), "{eq:?}");
    }
}

#[test]
fn dropped_bound_is_detected() {
    // removing one sum-rate bound from the closed form must be caught
    let i = terms([0, 0, 0, 1, 1, 0, 0, 2, 2, 2, 1, 1, 1, 1, 1, 2]);
    let shadow = projected_region(&i);
    let mut loose = RationalLinearSystem::new([R1, R2]);
    for v in [R1, R2] {
        loose.add_int(&[(v, 1)], Relation::Ge, int(0)).unwrap();
        loose.add_int(&[(v, 1)], Relation::Le, int(2)).unwrap();
    }
    let eq = systems_equivalent(&shadow, &loose, &rate_box(&loose), 20, 0, 0).unwrap();
    assert!(!eq.is_equivalent());
}
