//! WebAssembly bindings for the static page in `www/`. Every export returns
//! a JSON string so the page needs no generated type glue.

use num_rational::Rational64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use pencil::connection::{hesse_reparam, j_of_z, mirror_map, surface_solution};
use pencil::fukaya::{shifted_trivialization, HolonomyTuple};
use pencil::lattice::SurfaceModel;
use pencil::ring::CyclotomicField;
use pencil::series::QSeries;

// Bigger orders work but take long enough to freeze the tab.
const MAX_ORDER: i64 = 40;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn check_order(order: i64) -> Result<i64, String> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(err(format!("order must be between 1 and {MAX_ORDER}")));
    }
    Ok(order)
}

fn terms(s: &QSeries) -> Value {
    let t: Vec<Value> = s.terms().map(|(e, c)| json!([e.to_string(), c.to_string()])).collect();
    json!({ "terms": t, "precision": s.precision().map(|p| p.to_string()) })
}

fn parse_u(s: &str) -> Result<Rational64, String> {
    let (n, d) = s.trim().split_once('/').unwrap_or((s.trim(), "1"));
    let n: i64 = n.trim().parse().map_err(err)?;
    let d: i64 = d.trim().parse().map_err(err)?;
    if d == 0 {
        return Err(err("zero denominator"));
    }
    Ok(Rational64::new(n, d))
}

/// Θ for a surface ("dp1".."dp9", "p1xp1") modulo O(q^order).
pub fn fundamental_solution_json(surface: &str, order: i64) -> Result<String, String> {
    let surface: SurfaceModel = surface.parse().map_err(err)?;
    let fs = surface_solution(&surface, check_order(order)?).map_err(err)?;
    Ok(json!({
        "surface": surface.to_string(),
        "theta11": terms(fs.entry(1, 1)),
        "theta12": terms(fs.entry(1, 2)),
        "theta21": terms(fs.entry(2, 1)),
        "theta22": terms(fs.entry(2, 2)),
    })
    .to_string())
}

/// z = −Θ₁₁/Θ₁₂ with j(z) and the Hesse parameter when they exist.
pub fn mirror_json(surface: &str, order: i64) -> Result<String, String> {
    let surface: SurfaceModel = surface.parse().map_err(err)?;
    let fs = surface_solution(&surface, check_order(order)?).map_err(err)?;
    let z = mirror_map(&fs).map_err(err)?;
    Ok(json!({
        "z": terms(&z),
        "j": j_of_z(&z).ok().as_ref().map(terms),
        "hesse": hesse_reparam(&z).ok().as_ref().map(terms),
    })
    .to_string())
}

/// Trivializes the Floer products for holonomies "u1,u2,u3,u4" (each in 1/6 + Z/3).
pub fn floer_products_json(holonomy: &str, order: i64) -> Result<String, String> {
    let u: Vec<Rational64> = holonomy.split(',').map(parse_u).collect::<Result<_, _>>()?;
    let u: [Rational64; 4] = u.try_into().map_err(|_| err("expected four comma-separated values"))?;
    let h = HolonomyTuple::new(u).map_err(err)?;
    let field = CyclotomicField::new(12);
    let t = shifted_trivialization(&h, check_order(order)?, &field).map_err(err)?;
    let out = match t {
        None => json!({ "constant": false }),
        Some(t) => {
            let c = |x: &pencil::ring::Cyclotomic| {
                let (re, im) = x.to_complex();
                json!({ "exact": x.to_string(), "re": re, "im": im })
            };
            json!({
                "constant": true,
                "shift": t.shift.to_string(),
                "p123": c(&t.p123),
                "p134": c(&t.p134),
                "p124": [c(&t.p124[0]), c(&t.p124[1])],
                "p234": [c(&t.p234[0]), c(&t.p234[1])],
                "matches_watson": t.matches_expected(),
            })
        }
    };
    Ok(out.to_string())
}

#[wasm_bindgen]
pub fn fundamental_solution(surface: &str, order: i64) -> Result<String, JsError> {
    fundamental_solution_json(surface, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn mirror(surface: &str, order: i64) -> Result<String, JsError> {
    mirror_json(surface, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn floer_products(holonomy: &str, order: i64) -> Result<String, JsError> {
    floer_products_json(holonomy, order).map_err(|e| JsError::new(&e))
}
