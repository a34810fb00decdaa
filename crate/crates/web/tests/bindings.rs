use ramlab_web::{build_subsystem_json, check_property_json, eval_set_json, MAX_WINDOW};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn eval_lists_members() {
    let v = parse(&eval_set_json("inter(mod(2,0), pow2blocks)", 40).unwrap());
    assert_eq!(v["expr"], "inter(mod(2,0), pow2blocks)");
    assert_eq!(v["members"], serde_json::json!([2, 4, 6, 8, 10, 16, 18, 20, 32, 34, 36]));
    assert_eq!(v["count"], 11);
}

#[test]
fn eval_rejects_bad_input() {
    assert!(eval_set_json("mod(2,", 10).unwrap_err().contains("syntax"));
    assert!(eval_set_json("all", MAX_WINDOW + 1).is_err());
    assert!(eval_set_json("all", 0).is_err());
}

#[test]
fn thick_witness_is_highlighted() {
    let v = parse(&check_property_json("pow2blocks", 10_000, "thick", "0,1,2,3,4,5", "", 0).unwrap());
    assert_eq!(v["status"], "holds-with-witness");
    assert_eq!(v["reverified"], true);
    let x = v["witness"]["x"].as_u64().unwrap();
    assert_eq!(v["highlight"], serde_json::json!((0..=5).map(|o| o + x).collect::<Vec<_>>()));
}

#[test]
fn syndetic_hole_marks_point_and_shifts() {
    let v = parse(&check_property_json("pow2blocks", 200, "syndetic", "", "1,2,3", 0).unwrap());
    assert_eq!(v["status"], "fails-on-window");
    assert_eq!(v["highlight"], serde_json::json!([11, 12, 13, 14]));
}

#[test]
fn ip_and_ap_witnesses() {
    let v = parse(&check_property_json("mod(2,0)", 100, "ip", "", "", 3).unwrap());
    assert_eq!(v["witness"]["terms"], serde_json::json!([2, 4, 6]));
    assert_eq!(v["highlight"], serde_json::json!([2, 4, 6, 8, 10, 12]));
    let v = parse(&check_property_json("mod(3,1)", 100, "ap", "", "", 4).unwrap());
    assert_eq!(v["highlight"].as_array().unwrap().len(), 4);
    assert!(check_property_json("all", 10, "dense", "", "", 1).is_err());
    assert!(check_property_json("all", 10, "thick", "0,x", "", 1).is_err());
}

#[test]
fn builder_runs_over_nat() {
    let v = parse(&build_subsystem_json("pow2", "mod(2,0)", 3, "fs-fp", 100_000).unwrap());
    assert_eq!(v["outcome"], "built");
    assert_eq!(v["certificate"]["y"], serde_json::json!([2, 4, 8]));
    assert_eq!(v["highlight"], serde_json::json!([2, 4, 6, 8, 10, 12, 14]));
    let v = parse(&build_subsystem_json("pow2", "mod(2,1)", 2, "fs-fp", 1000).unwrap());
    assert_eq!(v["outcome"], "failed");
    assert!(build_subsystem_json("pow2", "mod(2,0)", 2, "fs-xx", 10).is_err());
}
