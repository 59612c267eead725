mod common;

use apparent::heun::{
    general_heun, multi_heun, third_order_deformed, third_order_example, FamilyRegistry,
};
use apparent::ode::{fuchs_check, riemann_symbol, Point};
use apparent::polyrat::{int, BigRat};
use apparent::transform::deform;
use proptest::prelude::*;

use common::*;

fn sorted(mut v: Vec<BigRat>) -> Vec<BigRat> {
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn general_heun_riemann_symbol(seed in any::<u64>()) {
        let p = heun_params(&mut rng(seed));
        let rs = riemann_symbol(&general_heun(&p).unwrap()).unwrap();
        let expect = [
            (Point::Finite(int(0)), vec![int(0), p.theta1.clone()]),
            (Point::Finite(int(1)), vec![int(0), p.theta2.clone()]),
            (Point::Finite(p.t.clone()), vec![int(0), p.theta3.clone()]),
            (Point::Infinity, vec![p.alpha.clone(), p.theta_inf.clone()]),
        ];
        prop_assert_eq!(rs.columns.len(), 4);
        for (loc, ex) in expect {
            let col = rs.column(&loc).unwrap();
            prop_assert_eq!(&col.exponents.values, &sorted(ex));
            prop_assert!(!col.apparent);
        }
        prop_assert_eq!(rs.accessory_params, vec![p.q.clone()]);
    }

    #[test]
    fn multi_heun_exponent_sum(seed in any::<u64>(), m in 3usize..=6) {
        let p = multi_params(&mut rng(seed), m, false);
        let f = fuchs_check(&multi_heun(&p).unwrap());
        prop_assert!(f.identity_holds);
        prop_assert_eq!(f.exponent_sum, Some(int(m as i64 - 1)));
    }

    #[test]
    fn third_order_deform_matches_hand_form(seed in any::<u64>()) {
        let p = third_params(&mut rng(seed));
        let d = deform(&third_order_example(&p).unwrap()).unwrap();
        prop_assert_eq!(d.ode, third_order_deformed(&p).unwrap());
        prop_assert_eq!(d.new_apparent.len(), 1);
        prop_assert_eq!(d.new_apparent[0].expected_gap, None);
    }
}

#[test]
fn two_accessory_zeros_give_two_apparent_points() {
    let p = multi_params(&mut rng(11), 4, false);
    let d = deform(&multi_heun(&p).unwrap()).unwrap();
    let mut locs: Vec<BigRat> = d.new_apparent.iter().map(|a| a.location.clone()).collect();
    locs.sort();
    assert_eq!(locs, sorted(p.q.clone()));
    assert!(d.new_apparent.iter().all(|a| a.expected_gap == Some(2)));
}

#[test]
fn registry_builds_the_same_equations_as_the_constructors() {
    let reg = FamilyRegistry::new();
    let p = heun_params(&mut rng(12));
    let json = serde_json::to_value(&p).unwrap();
    assert_eq!(reg.build("general", &json).unwrap(), general_heun(&p).unwrap());
    let family = reg.get("third-order").unwrap();
    let e = family.build(&family.example()).unwrap();
    assert_eq!(e.order(), 3);
}
