use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use witten::lattice::{dset, eset, Options};
use witten::par::Exec;
use witten::roots::RootSystem;
use witten::witten::{even_integral, exact_even_value, numeric_multisum, EvenOptions};

fn rs(name: &str) -> RootSystem {
    RootSystem::parse(name).unwrap()
}

fn as_f64(q: &BigRational, pi_power: u32) -> f64 {
    q.to_f64().unwrap() * std::f64::consts::PI.powi(pi_power as i32)
}

#[test]
fn sets_do_not_depend_on_schedule() {
    let seq = Options { exec: Exec::Sequential, ..Options::default() };
    let par = Options { exec: Exec::Parallel, ..Options::default() };
    for name in ["B4", "C4", "D4", "F4", "A5"] {
        let r = rs(name);
        assert_eq!(dset(&r, &seq).unwrap(), dset(&r, &par).unwrap(), "{name}");
        assert_eq!(eset(&r, &seq).unwrap(), eset(&r, &par).unwrap(), "{name}");
    }
}

#[test]
fn g2_even_value_against_multisum() {
    let g2 = rs("G2");
    let rep = exact_even_value(&g2, 1, &EvenOptions::default()).unwrap();
    let e = rep.exact.unwrap();
    assert!(e.rational.is_positive());
    assert_eq!(e.pi_power, 12);
    let sum = numeric_multisum(&g2, 2.0, 1500).unwrap();
    let exact = as_f64(&e.rational, e.pi_power);
    assert!(((exact - sum.value) / exact).abs() < 1e-6, "{exact} vs {}", sum.value);
}

#[test]
fn b2_higher_even_values() {
    let b2 = rs("B2");
    for m in 2..=3 {
        let e = exact_even_value(&b2, m, &EvenOptions::default()).unwrap().exact.unwrap();
        let sum = numeric_multisum(&b2, f64::from(2 * m), 200).unwrap();
        let exact = as_f64(&e.rational, e.pi_power);
        assert!(sum.contains(exact) || ((exact - sum.value) / exact).abs() < 1e-12, "m={m}");
    }
}

#[test]
fn even_integral_schedule_independent() {
    let r = rs("A3");
    let seq = even_integral(&r, 1, &EvenOptions { exec: Exec::Sequential, ..Default::default() }).unwrap();
    let par = even_integral(&r, 1, &EvenOptions { exec: Exec::Parallel, ..Default::default() }).unwrap();
    assert_eq!(seq, par);
}
