use pencil_demo::{floer_products_json, fundamental_solution_json, mirror_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn theta_for_cp2() {
    let v = parse(fundamental_solution_json("dp9", 8).unwrap());
    assert_eq!(v["theta11"]["terms"][1], serde_json::json!(["3", "6"]));
    assert_eq!(v["theta12"]["terms"][0], serde_json::json!(["1", "-1"]));
    assert_eq!(v["theta11"]["precision"], "8");
}

#[test]
fn mirror_for_cp2() {
    let v = parse(mirror_json("cp2", 12).unwrap());
    assert_eq!(v["z"]["terms"][1], serde_json::json!(["2", "5"]));
    assert_eq!(v["hesse"]["terms"][1], serde_json::json!(["2", "-15"]));
    assert_eq!(v["j"]["terms"][0], serde_json::json!(["-9", "1"]));
}

#[test]
fn floer_products_for_singular_tuple() {
    let v = parse(floer_products_json("1/6, 1/2, 1/6, 1/2", 10).unwrap());
    assert_eq!(v["constant"], true);
    assert_eq!(v["shift"], "1/3");
    assert_eq!(v["matches_watson"], true);
}

#[test]
fn bad_input() {
    assert!(fundamental_solution_json("dp11", 5).is_err());
    assert!(fundamental_solution_json("dp9", 0).is_err());
    assert!(mirror_json("dp9", 1000).is_err());
    assert!(floer_products_json("1/6,1/6,1/6", 5).is_err());
    assert!(floer_products_json("1/6,1/6,1/6,1/0", 5).is_err());
    assert!(floer_products_json("0,1/6,1/6,1/6", 5).is_err());
}
