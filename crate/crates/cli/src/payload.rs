use serde_json::{json, Value};

use witten::lattice::{dset, eset, hset, tset, verify_de, verify_eh, InvariantSet, Kind, Options, DEFAULT_BUDGET};
use witten::numeric::{integral_rep_check, Complex, Precision};
use witten::par::Exec;
use witten::roots::RootSystem;
use witten::witten::{
    a2_pole_coefficient, exact_even_value, format_combination, identity_report, integrand_spec, numeric_multisum,
    onodera_consistency, EvenOptions, Quantity,
};
use witten::{Error, Rational};

use crate::Outcome;

fn r(q: &Rational) -> Value {
    json!(q.to_string())
}

fn float(x: f64) -> Value {
    json!(format!("{x:e}"))
}

fn complex(z: &Complex, digits: usize) -> Value {
    json!({ "re": z.re.to_decimal(digits), "im": z.im.to_decimal(digits) })
}

fn set_json(s: &InvariantSet) -> Value {
    let values = match (s.kind, s.integers()) {
        (Kind::T, _) | (_, None) => s.values.iter().map(r).collect::<Vec<_>>(),
        (_, Some(ints)) => ints.into_iter().map(|v| json!(v)).collect(),
    };
    json!({
        "kind": s.kind.to_string(),
        "phi": s.phi,
        "values": values,
        "budget_spent": s.budget_spent.to_string(),
    })
}

pub fn roots(phi: &str) -> Result<Outcome, Error> {
    let rs = RootSystem::parse(phi)?;
    let h: Vec<u64> = rs.highest_root_coeffs().into_iter().collect();
    Ok(Outcome::value(json!({
        "type": rs.label(),
        "rank": rs.rank(),
        "r": rs.num_positive_roots(),
        "cartan": rs.cartan(),
        "positive_roots": rs.positive_roots(),
        "degrees": rs.weyl_degrees(),
        "weyl_order": rs.weyl_order().to_string(),
        "highest_root": rs.highest_root(),
        "H": h,
        "K": rs.k_phi().to_string(),
        "M": rs.pairing_matrix(),
    })))
}

pub fn set(kind: char, phi: &str, opts: &Options) -> Result<Outcome, Error> {
    let rs = RootSystem::parse(phi)?;
    let s = match kind {
        'D' => dset(&rs, opts)?,
        'E' => eset(&rs, opts)?,
        'H' => hset(&rs),
        _ => tset(&rs),
    };
    Ok(Outcome::value(set_json(&s)))
}

pub fn verify(de: bool, phi: &str, opts: &Options) -> Result<Outcome, Error> {
    let rs = RootSystem::parse(phi)?;
    let c = if de { verify_de(&rs, opts)? } else { verify_eh(&rs, opts)? };
    let statement = if de { "D(phi) = E(dual)" } else { "E(phi) = H(phi) u {1}" };
    Ok(Outcome::check(
        json!({ "statement": statement, "holds": c.holds, "left": set_json(&c.left), "right": set_json(&c.right) }),
        c.holds,
    ))
}

pub fn even_value(phi: &str, s: u32, budget: u128) -> Result<Outcome, Error> {
    if s == 0 || s % 2 == 1 {
        return Err(Error::InvalidArgument(format!("s must be a positive even integer, got {s}")));
    }
    let rs = RootSystem::parse(phi)?;
    let opts = EvenOptions { budget, ..EvenOptions::default() };
    let rep = exact_even_value(&rs, s / 2, &opts)?;
    let exact = rep.exact.expect("exact value present");
    let numeric = rep.numeric.expect("numeric value present");
    Ok(Outcome::value(json!({
        "phi": rep.phi,
        "s": s,
        "rational": r(&exact.rational),
        "pi_power": exact.pi_power,
        "integral": rep.details.get("integral"),
        "cells": rep.cells,
        "approx": { "value": numeric.decimal, "error": float(numeric.error) },
    })))
}

pub fn multisum(phi: &str, s: f64, cutoff: u64) -> Result<Outcome, Error> {
    let rs = RootSystem::parse(phi)?;
    let m = numeric_multisum(&rs, s, cutoff)?;
    Ok(Outcome::value(json!({
        "phi": rs.label(),
        "value": float(m.value),
        "error": float(m.bound),
        "terms": m.terms,
        "cutoff": m.cutoff,
    })))
}

pub fn identity(q: Quantity, n: u32) -> Result<Outcome, Error> {
    let (rep, w) = identity_report(q, n)?;
    Ok(Outcome::check(
        json!({
            "phi": w.phi,
            "n": n,
            "lhs": r(&rep.lhs),
            "rhs": r(&rep.rhs),
            "log_part": r(&rep.log_part),
            "holds": rep.holds,
        }),
        rep.holds,
    ))
}

pub fn pole(m: u32, prec: Precision) -> Result<Outcome, Error> {
    let pc = a2_pole_coefficient(m)?;
    let v = pc.evaluate(prec)?;
    let terms: Vec<Value> =
        pc.terms.iter().map(|t| json!({ "j": t.j, "coeff": r(&t.coeff), "args": t.args })).collect();
    Ok(Outcome::value(json!({
        "m": m,
        "terms": terms,
        "single": { "coeff": r(&pc.single.0), "arg": pc.single.1 },
        "combination": format_combination(&pc.combination()),
        "value": v.value.to_decimal(prec.target_digits as usize),
        "error": float(v.error),
    })))
}

pub fn onodera(m: u32, prec: Precision) -> Result<Outcome, Error> {
    let rep = onodera_consistency(m, prec)?;
    let digits = prec.target_digits as usize;
    let tol = 10f64.powi(-(prec.target_digits as i32 - 5));
    let holds = rep.terms_match && rep.relative_difference < tol;
    Ok(Outcome::check(
        json!({
            "m": m,
            "terms_match": rep.terms_match,
            "bracket": format_combination(&rep.closed_form),
            "closed_form_value": rep.closed_value.to_decimal(digits),
            "residue_value": rep.residue_value.to_decimal(digits),
            "relative_difference": float(rep.relative_difference),
            "holds": holds,
        }),
        holds,
    ))
}

pub fn int_rep(phi: &str, s: f64, nodes: usize, prec: Precision) -> Result<Outcome, Error> {
    let rs = RootSystem::parse(phi)?;
    let rep = integral_rep_check(&rs, s, nodes, prec)?;
    let digits = prec.target_digits as usize;
    Ok(Outcome::value(json!({
        "phi": rep.phi,
        "s": s.to_string(),
        "lhs": complex(&rep.lhs, digits),
        "rhs": complex(&rep.rhs, digits),
        "residual": float(rep.residual),
        "integral": { "value": rep.integral.value.to_decimal(digits), "error": float(rep.integral.error) },
        "multisum": { "value": float(rep.multisum.value), "error": float(rep.multisum.bound), "cutoff": rep.multisum.cutoff },
        "cells": rep.cells,
        "nodes": rep.nodes,
    })))
}

pub fn triangulate(phi: &str, emit_cells: bool) -> Result<Outcome, Error> {
    let rs = RootSystem::parse(phi)?;
    let spec = integrand_spec(&rs);
    let bound = spec.region_bound();
    if bound > DEFAULT_BUDGET {
        return Err(Error::BudgetExceeded { needed: bound, budget: DEFAULT_BUDGET });
    }
    let tri = spec.triangulate(Exec::default())?;
    let regions: Vec<Value> =
        tri.regions().iter().map(|(bands, vol)| json!({ "bands": bands, "volume": r(vol) })).collect();
    let mut out = json!({
        "phi": rs.label(),
        "dim": tri.dim,
        "forms": spec.forms.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "cells": tri.cells.len(),
        "polytopes": tri.polytopes,
        "total_volume": r(&tri.total_volume()),
        "regions": regions,
        "denominators": tri.denominators,
        "denominator_lcm": tri.denominator_lcm(),
        "denominator_bound_holds": tri.denominator_bound_holds,
    });
    if emit_cells {
        let cells: Vec<Value> = tri
            .cells
            .iter()
            .map(|c| {
                let verts: Vec<Vec<Value>> = c.simplex.vertices().iter().map(|v| v.iter().map(r).collect()).collect();
                json!({ "bands": c.bands, "vertices": verts })
            })
            .collect();
        out["cell_list"] = json!(cells);
    }
    Ok(Outcome::value(out))
}
