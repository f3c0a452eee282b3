use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use witten::lattice::{dset, eset, verify_de, verify_eh, Options};
use witten::numeric::{apostol_check, integral_rep_check, integrand_quadrature, Precision, DEFAULT_NODES};
use witten::par::Exec;
use witten::roots::{poincare_from_degrees, RootSystem};
use witten::witten::{
    exact_even_value, identity_a2, identity_b2, identity_g2, integrand_spec, numeric_multisum, onodera_consistency,
    EvenOptions,
};
use witten::Error;

type Outcome = Result<(bool, String), Error>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rs(name: &str) -> RootSystem {
    RootSystem::parse(name).unwrap()
}

fn column_multiset(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut cols: Vec<Vec<i64>> = (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect();
    cols.sort();
    cols
}

fn ints(v: &[BigRational]) -> BTreeSet<i64> {
    v.iter().map(|x| x.to_integer().to_i64().unwrap()).collect()
}

fn criterion_1() -> Outcome {
    let opts = Options::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, want, expected) in [
        ("G2", vec![1, 2, 3], vec![vec![1, 0, 1, 1, 2, 1], vec![0, 1, 3, 1, 3, 2]]),
        (
            "B3",
            vec![1, 2],
            vec![vec![1, 0, 0, 1, 0, 0, 1, 2, 1], vec![0, 1, 0, 1, 1, 2, 1, 2, 2], vec![0, 0, 1, 0, 1, 1, 1, 1, 1]],
        ),
    ] {
        let start = Instant::now();
        let r = rs(name);
        let d = dset(&r, &opts)?;
        let matrix_ok = column_multiset(&r.pairing_matrix()) == column_multiset(&expected);
        let elapsed = start.elapsed();
        let this = ints(&d.values) == want.into_iter().collect() && matrix_ok && elapsed < Duration::from_secs(1);
        ok &= this;
        notes.push(format!("D({name})={:?} M ok={matrix_ok} {:.0?}", ints(&d.values), elapsed));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_2() -> Outcome {
    let opts = Options::default();
    let types = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "F4", "G2", "A5", "A6", "B5", "D5", "E6"];
    let mut failures = Vec::new();
    let mut e6_time = Duration::ZERO;
    for name in types {
        let start = Instant::now();
        let r = rs(name);
        let eh = verify_eh(&r, &opts)?;
        let de = verify_de(&r, &opts)?;
        if name == "E6" {
            e6_time = start.elapsed();
        }
        if !eh.holds || !de.holds {
            failures.push(name);
        }
    }
    let mut refused = Vec::new();
    for name in ["E7", "E8"] {
        if matches!(eset(&rs(name), &opts), Err(Error::BudgetExceeded { .. })) {
            refused.push(name);
        }
    }
    let ok = failures.is_empty() && refused.len() == 2 && e6_time < Duration::from_secs(600);
    Ok((ok, format!("{} types, failures {failures:?}, E6 {e6_time:.1?}, budget refusals {refused:?}", types.len())))
}

fn criterion_3() -> Outcome {
    let types = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "F4", "G2"];
    let mut bad = Vec::new();
    for name in types {
        let r = rs(name);
        let elems = r.weyl_enumerate(2_000_000)?;
        let top = elems.iter().map(|e| e.length).max().unwrap_or(0);
        let mut c = vec![BigInt::from(0); top + 1];
        for e in &elems {
            c[e.length] += 1;
        }
        if c != poincare_from_degrees(&r.weyl_degrees()) {
            bad.push(name);
        }
    }
    let f4 = rs("F4").weyl_enumerate(2_000_000)?.len();
    Ok((bad.is_empty() && f4 == 1152, format!("{} types, mismatches {bad:?}, |W(F4)| = {f4}", types.len())))
}

fn rel_gap(exact: &BigRational, pi_power: u32, approx: f64) -> f64 {
    let e = exact.to_f64().unwrap() * std::f64::consts::PI.powi(pi_power as i32);
    ((e - approx) / e).abs()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let opts = EvenOptions::default();
    let a2 = rs("A2");
    let v2 = exact_even_value(&a2, 1, &opts)?;
    let e2 = v2.exact.clone().unwrap();
    let int_ok = v2.details.get("integral").map(String::as_str) == Some("-1/30240");
    let mut ok = e2.rational == q(4, 2835) && e2.pi_power == 6 && int_ok;
    let mut notes = vec![format!("zeta_A2(2) = {} pi^{}", e2.rational, e2.pi_power)];

    for (name, m, cutoff, tol) in [("A2", 2u32, 300u64, 1e-8), ("B2", 1, 2000, 1e-6)] {
        let r = rs(name);
        let e = exact_even_value(&r, m, &opts)?.exact.unwrap();
        let sum = numeric_multisum(&r, f64::from(2 * m), cutoff)?;
        let gap = rel_gap(&e.rational, e.pi_power, sum.value);
        ok &= gap < tol;
        notes.push(format!("{name}({}) rel {gap:.1e}", 2 * m));
    }

    let a3 = rs("A3");
    match exact_even_value(&a3, 1, &opts) {
        Ok(rep) => {
            let e = rep.exact.unwrap();
            let sum = numeric_multisum(&a3, 2.0, 200)?;
            let gap = rel_gap(&e.rational, e.pi_power, sum.value);
            ok &= gap < 1e-6;
            notes.push(format!("A3(2) = {} pi^{} rel {gap:.1e}", e.rational, e.pi_power));
        }
        Err(Error::BudgetExceeded { .. }) => notes.push("A3 skipped: budget exceeded".into()),
        Err(e) => return Err(e),
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(120);
    notes.push(format!("{elapsed:.1?}"));
    Ok((ok, notes.join("; ")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut failed = Vec::new();
    for n in 1..=6 {
        if !identity_a2(n)?.holds {
            failed.push(format!("a2 n={n}"));
        }
    }
    for n in 1..=4 {
        if !identity_b2(n)?.holds {
            failed.push(format!("b2 n={n}"));
        }
    }
    for n in 1..=2 {
        if !identity_g2(n)?.holds {
            failed.push(format!("g2 n={n}"));
        }
    }
    let elapsed = start.elapsed();
    Ok((failed.is_empty() && elapsed < Duration::from_secs(30), format!("failures {failed:?}, {elapsed:.1?}")))
}

fn criterion_6() -> Outcome {
    let prec = Precision::new(30);
    let tol = 1e-25;
    let mut worst = 0.0f64;
    for s in [q(2, 1), q(5, 2), q(3, 1), q(4, 1)] {
        for a in [q(1, 4), q(1, 3), q(1, 2), q(7, 10)] {
            let r = apostol_check(&s, &a, prec)?;
            worst = worst.max(r.residual.to_f64());
        }
    }
    Ok((worst < tol, format!("max residual {worst:.2e} over 16 pairs")))
}

fn criterion_7() -> Outcome {
    let prec = Precision::new(20);
    let a2 = rs("A2");
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, s, tol) in [("A2", 2.0, 1e-6), ("A2", 3.0, 1e-6), ("B2", 2.0, 1e-4)] {
        let r = integral_rep_check(&rs(name), s, DEFAULT_NODES, prec)?;
        ok &= r.residual < tol;
        notes.push(format!("{name} s={s} residual {:.1e}", r.residual));
    }
    let (i, _) = integrand_quadrature(&a2, 2.0, DEFAULT_NODES, prec, Exec::default())?;
    let gap = (i.value.to_f64() + 1.0 / 30240.0).abs();
    ok &= gap < 1e-8;
    notes.push(format!("I_A2(2) gap {gap:.1e}"));
    Ok((ok, notes.join("; ")))
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for m in [2, 4] {
        let r = onodera_consistency(m, Precision::new(30))?;
        ok &= r.terms_match && r.relative_difference < 1e-25;
        notes.push(format!("m={m} terms_match={} rel {:.1e}", r.terms_match, r.relative_difference));
    }
    Ok((ok, notes.join("; ")))
}

fn criterion_9() -> Outcome {
    let b2 = integrand_spec(&rs("B2")).triangulate(Exec::default())?;
    let regions = b2.regions();
    let b2_ok = b2.total_volume() == q(1, 1)
        && regions.len() == 4
        && regions.values().all(|v| *v == q(1, 4))
        && b2.denominators.iter().all(|d| 2 % d == 0);
    let g2 = integrand_spec(&rs("G2")).triangulate(Exec::default())?;
    let g2_ok = g2.total_volume() == q(1, 1) && g2.denominators.iter().all(|d| 6 % d == 0);
    Ok((
        b2_ok && g2_ok,
        format!(
            "B2: {} cells, {} regions, denominators {:?}; G2: {} cells, denominators {:?}",
            b2.cells.len(),
            regions.len(),
            b2.denominators,
            g2.cells.len(),
            g2.denominators
        ),
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        (1, "D-sets and pairing matrices of G2, B3", criterion_1),
        (2, "E = H u {1} and D = E of dual", criterion_2),
        (3, "Poincare polynomial factorization", criterion_3),
        (4, "exact even values vs multiple sums", criterion_4),
        (5, "rank-2 Bernoulli identities", criterion_5),
        (6, "Hurwitz vs exponential sum", criterion_6),
        (7, "integral representation", criterion_7),
        (8, "A2 pole bracket, two routes", criterion_8),
        (9, "band triangulations of B2, G2", criterion_9),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (n, title, run) in criteria {
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed.push(n);
        }
        writeln!(out, "criterion {n}: {} - {title}: {detail}", if pass { "PASS" } else { "FAIL" }).unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
