use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use permlab::action::{
    act_hf, annihilator, compose, kuratowski_decode_tuple, kuratowski_encode, orbit,
    pointwise_stabilizer, stabilizer_in, GroupElement, Hf, DEFAULT_ENUM_CAP,
};
use permlab::oracle;
use permlab::random::{random_hf, random_reduction_instance, random_tuple};
use permlab::supports::{find_small_support, is_support, ReductionInput};
use permlab::thin::{density, log_star};
use permlab::{Prime, Subspace, Vector};

fn prime() -> impl Strategy<Value = Prime> {
    prop_oneof![Just(Prime::TWO), Just(Prime::THREE), Just(Prime::FIVE)]
}

fn vector(p: Prime, k: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(0..p.get() as u64, k).prop_map(move |c| Vector::from_dense(p, &c))
}

fn group_element(p: Prime, k: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(0..p.get() as u64, k).prop_map(move |c| GroupElement::from_coords(p, &c))
}

fn object(p: Prime, k: usize) -> impl Strategy<Value = Hf> {
    any::<u64>().prop_map(move |s| random_hf(&mut ChaCha8Rng::seed_from_u64(s), p, k, 3))
}

/// A prime with one object, two group elements and a few vectors, all at horizon 3.
fn setting() -> impl Strategy<Value = (Prime, Hf, GroupElement, GroupElement, Vec<Vector>)> {
    prime().prop_flat_map(|p| {
        (
            Just(p),
            object(p, 3),
            group_element(p, 3),
            group_element(p, 3),
            prop::collection::vec(vector(p, 3), 0..3),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn action_is_a_commuting_group_action((p, x, g, h, _) in setting()) {
        let gh = compose(&g, &h).unwrap();
        let step = act_hf(&act_hf(&x, &g).unwrap(), &h).unwrap();
        prop_assert_eq!(&step, &act_hf(&x, &gh).unwrap());
        prop_assert_eq!(&step, &act_hf(&act_hf(&x, &h).unwrap(), &g).unwrap());
        prop_assert_eq!(act_hf(&act_hf(&x, &g).unwrap(), &g.inverse()).unwrap(), x.clone());
        prop_assert!(g.pow(p.get() as u64).is_identity());
    }

    #[test]
    fn orbit_times_stabilizer_is_group_order((p, x, _, _, a) in setting()) {
        let h = pointwise_stabilizer(p, &a, 3).unwrap();
        let o = orbit(&x, &h, 3, DEFAULT_ENUM_CAP).unwrap();
        let s = stabilizer_in(&x, &h, 3, DEFAULT_ENUM_CAP).unwrap();
        prop_assert!(s.is_subspace_of(&h));
        prop_assert_eq!(o.len() as u128 * s.size(), h.size());
    }

    #[test]
    fn support_test_matches_enumeration((p, x, _, _, a) in setting()) {
        prop_assert_eq!(is_support(p, &a, &x, 3).unwrap(), oracle::is_support(p, &a, &x, 3));
    }

    #[test]
    fn pointwise_stabilizer_is_the_annihilator((p, _, g, _, a) in setting()) {
        let s = pointwise_stabilizer(p, &a, 3).unwrap();
        prop_assert_eq!(s.contains(&g.to_vector()), oracle::fixes_at(&g, &a));
        prop_assert_eq!(s.dim() + Subspace::span(p, &a).unwrap().dim(), 3);
        let twice = annihilator(&s, 3).unwrap();
        prop_assert_eq!(twice, Subspace::span(p, &a).unwrap());
    }

    #[test]
    fn kuratowski_round_trip(seed in any::<u64>(), p in prime()) {
        let t = random_tuple(&mut ChaCha8Rng::seed_from_u64(seed), p, 3);
        let Hf::Tuple(parts) = &t else { unreachable!() };
        let decoded = kuratowski_decode_tuple(&kuratowski_encode(&t), parts.len()).unwrap();
        let expected: Vec<Hf> = parts.iter().map(kuratowski_encode).collect();
        prop_assert_eq!(decoded, expected);
    }

    #[test]
    fn hf_json_round_trip((p, x, _, _, _) in setting()) {
        prop_assert_eq!(Hf::from_json(&x.to_json(), p).unwrap(), x);
    }

    #[test]
    fn log_star_matches_iteration(n in 1u64..5_000_000, p in prime()) {
        prop_assert_eq!(log_star(n as u128, p).unwrap(), oracle::log_star_iterated(n, p));
    }

    #[test]
    fn density_bounds(a in prop::collection::vec(vector(Prime::TWO, 8), 0..12), k in 0usize..10) {
        let d = density(&a, k);
        prop_assert!(d <= a.len());
        prop_assert!(d <= density(&a, k + 1));
        prop_assert!(d as u128 <= Prime::TWO.pow_saturating(k as u64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduction_output_supports_x(seed in any::<u64>(), p in prime()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_reduction_instance(&mut rng, p, 4, DEFAULT_ENUM_CAP).unwrap();
        let input = ReductionInput {
            p,
            x: &inst.x,
            big_x: &inst.big_x,
            a: &inst.a,
            horizon: 4,
            cap: DEFAULT_ENUM_CAP,
        };
        let out = find_small_support(&input, &inst.b).unwrap();
        prop_assert!(out.b_final.len() <= 1);
        let sup: Vec<Vector> = out.support.iter().cloned().collect();
        prop_assert!(oracle::is_support(p, &sup, &inst.x, 4));
        // Rerunning gives the same trace.
        prop_assert_eq!(find_small_support(&input, &inst.b).unwrap(), out);
    }
}
