//! Property tests over randomly glued surfaces.

use gentle_tilt::cutting::{cut_surface, EndpointCase};
use gentle_tilt::io::{algebra_from_json, algebra_to_json, surface_from_json, surface_to_json};
use gentle_tilt::random::{random_disk, random_gluing, random_simple_arc, simple_arcs};
use gentle_tilt::surface::{arcs_compatible, ext_dims_geometric};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn surface_json_round_trips(seed in any::<u64>(), p in 0.0f64..0.6) {
        let s = random_gluing(&mut ChaCha8Rng::seed_from_u64(seed), 5, p);
        let text = surface_to_json(&s);
        let back = surface_from_json(&text).unwrap();
        prop_assert_eq!(json(&surface_to_json(&back)), json(&text));
        prop_assert_eq!(json(&algebra_to_json(back.algebra())), json(&algebra_to_json(s.algebra())));
    }

    #[test]
    fn algebra_json_round_trips(seed in any::<u64>()) {
        let s = random_gluing(&mut ChaCha8Rng::seed_from_u64(seed), 5, 0.3);
        let text = algebra_to_json(s.algebra());
        let back = algebra_from_json(&text).unwrap();
        prop_assert_eq!(json(&algebra_to_json(&back)), json(&text));
    }

    #[test]
    fn disks_have_one_boundary_and_genus_zero(seed in any::<u64>(), rank in 1usize..7) {
        let s = random_disk(&mut ChaCha8Rng::seed_from_u64(seed), rank);
        prop_assert_eq!(s.rank(), rank);
        prop_assert_eq!(s.genus(), 0);
        prop_assert_eq!(s.boundary_components(), 1);
        prop_assert_eq!(s.puncture_count(), 0);
        prop_assert_eq!(s.bullet_count(), rank + 1);
    }

    #[test]
    fn geometric_ext_is_symmetric_in_compatibility(seed in any::<u64>()) {
        let s = random_gluing(&mut ChaCha8Rng::seed_from_u64(seed), 3, 0.0);
        let arcs = simple_arcs(&s, 3);
        for a in arcs.iter().take(6) {
            for b in arcs.iter().take(6) {
                let ab = ext_dims_geometric(&s, a, b).unwrap();
                let ba = ext_dims_geometric(&s, b, a).unwrap();
                let none = ab.iter().skip(1).all(|&d| d == 0) && ba.iter().skip(1).all(|&d| d == 0);
                prop_assert_eq!(arcs_compatible(&s, a, b).unwrap(), none);
            }
        }
    }

    #[test]
    fn cuts_add_two_points_of_each_colour(seed in any::<u64>(), case in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_gluing(&mut rng, 4, 0.4);
        let wanted = EndpointCase::ALL[case];
        if let Some(gamma) = random_simple_arc(&mut rng, &s, 5, Some(wanted)) {
            let cut = cut_surface(&s, &gamma).unwrap();
            prop_assert_eq!(cut.case, wanted);
            prop_assert!(cut.census().holds(), "{:?}", cut.census());
            let again = surface_from_json(&surface_to_json(&cut.surface)).unwrap();
            prop_assert_eq!(json(&algebra_to_json(again.algebra())), json(&algebra_to_json(cut.surface.algebra())));
        }
    }
}
