use qcoiso_web::{roots_json, solve_text, verify_text};

#[test]
fn roots_of_b2() {
    let v: serde_json::Value = serde_json::from_str(&roots_json("B", 2).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let adm: Vec<&str> = rows.iter().filter(|r| r["admissible"] == true).map(|r| r["root"].as_str().unwrap()).collect();
    assert_eq!(adm, ["L1-L2", "L1+L2"]);
    assert!(roots_json("Q", 2).is_err());
}

#[test]
fn solve_known_and_unknown() {
    let t = solve_text("eiej-ekej").unwrap();
    assert!(t.contains("printed coefficients in the solution set: true"), "{t}");
    assert!(solve_text("nope").unwrap_err().contains("ijkj"));
}

#[test]
fn verify_small_and_refuse_large() {
    let t = verify_text("A", 2, "L1-L3").unwrap();
    assert!(t.ends_with("verdict: pass\n"), "{t}");
    assert!(!t.contains("timings"));
    assert!(verify_text("C", 2, "L1-L2").unwrap().contains("verdict: FAIL"));
    assert!(verify_text("C", 4, "2L1").unwrap_err().contains("command line"));
}
