use fleetmin::rng::SplitMix64;
use fleetmin::{travel_time, validate_instance, Location, TravelTimeModel};
use proptest::prelude::*;

mod common;

fn analytic_models() -> [TravelTimeModel; 3] {
    [
        TravelTimeModel::Line1D,
        TravelTimeModel::Euclidean { speed: 1.7 },
        TravelTimeModel::Manhattan { speed: 0.4 },
    ]
}

#[test]
fn triangle_inequality_on_seeded_triples() {
    let mut rng = SplitMix64::new(20240601);
    let mut draw = || Location::new(rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0));
    for _ in 0..1000 {
        let (a, b, c) = (draw(), draw(), draw());
        for model in analytic_models() {
            let ac = travel_time(&model, &a, &c).unwrap();
            let ab = travel_time(&model, &a, &b).unwrap();
            let bc = travel_time(&model, &b, &c).unwrap();
            assert!(ac <= ab + bc + 1e-9, "{model:?}: {ac} > {ab} + {bc}");
        }
    }
}

#[test]
fn matrix_may_be_asymmetric() {
    let model = TravelTimeModel::matrix(vec![vec![0.0, 1.0], vec![4.0, 0.0]]);
    assert_eq!(
        travel_time(&model, &Location::site(0), &Location::site(1)).unwrap(),
        1.0
    );
    assert_eq!(
        travel_time(&model, &Location::site(1), &Location::site(0)).unwrap(),
        4.0
    );
}

#[test]
fn validation_has_no_side_effects() {
    let instance = common::grid_case(5, 0, 12, false);
    let before = instance.clone();
    let first = validate_instance(&instance, true);
    assert_eq!(first, validate_instance(&instance, true));
    assert_eq!(instance, before);
}

proptest! {
    #[test]
    fn analytic_models_are_symmetric_and_zero_on_diagonal(
        ax in -1e3f64..1e3, ay in -1e3f64..1e3, bx in -1e3f64..1e3, by in -1e3f64..1e3,
    ) {
        let (a, b) = (Location::new(ax, ay), Location::new(bx, by));
        for model in analytic_models() {
            let ab = travel_time(&model, &a, &b).unwrap();
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab, travel_time(&model, &b, &a).unwrap());
            prop_assert_eq!(travel_time(&model, &a, &a).unwrap(), 0.0);
        }
    }
}
