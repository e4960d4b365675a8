use leapfrog_web::{analyze, deviation_table, falsify, paper_example, MAX_TRIALS};
use serde_json::{json, Value};

fn parse(text: String) -> Value {
    serde_json::from_str(&text).unwrap()
}

#[test]
fn analyze_the_builtin_example() {
    let v = parse(analyze(&paper_example()));
    assert_eq!(v["policies"], 7);
    assert_eq!(v["ideals"], json!([3, 5]));
    let grid = v["grid"].as_array().unwrap();
    assert_eq!(grid.len(), 7);
    // column t = 2 read down the rows is g(., x2)
    let column: String = grid
        .iter()
        .map(|r| r.as_str().unwrap().chars().nth(1).unwrap())
        .collect();
    assert_eq!(column, "TTBBBTT");
    assert_eq!(grid[5], "TTAAATT");
    assert_eq!(v["equilibria"].as_array().unwrap().len(), 1);
    assert_eq!(v["equilibria"][0]["profile"], json!([6, 2]));
    assert_eq!(v["equilibria"][0]["mutual_leapfrog"], true);
    assert_eq!(v["axioms"]["cross_side_agreement"]["pass"], false);
}

#[test]
fn table_and_deviation() {
    let doc = paper_example();
    let v = parse(deviation_table(&doc, 6, 2));
    assert_eq!(v["against_t"], "TTBBBTT");
    assert_eq!(v["against_s"], "TTAAATT");
    assert!(v["deviation"].is_null());
    assert!(v["text"]
        .as_str()
        .unwrap()
        .contains("g(x6,.) |  T  T  A  A  A  T  T"));
    let v = parse(deviation_table(&doc, 3, 2));
    assert_eq!(v["deviation"], json!({ "party": "A", "to": 1 }));
    assert!(parse(deviation_table(&doc, 0, 2))["error"].is_string());
}

#[test]
fn errors_are_values() {
    assert!(parse(analyze("")).get("error").is_some());
    assert!(parse(analyze("{\"policies\": 3}")).get("error").is_some());
    let bad = paper_example().replacen("\"attraction\": [1, 2]", "\"attraction\": [2, 1]", 1);
    assert!(parse(analyze(&bad))["error"]
        .as_str()
        .unwrap()
        .contains("attraction-reversed"));
    assert!(parse(falsify("nope", 0, 10, 5, 9, 2, 6, "free", "random"))["error"].is_string());
    assert!(parse(falsify("thm1", 0, 10, 5, 9, 2, 6, "free", "sideways"))["error"].is_string());
    assert!(parse(falsify("thm1", 0, 10, 9, 5, 2, 6, "free", "random"))["error"].is_string());
    let too_many = (MAX_TRIALS + 1) as u32;
    assert!(parse(falsify("thm1", 0, too_many, 5, 9, 2, 6, "free", "random"))["error"].is_string());
}

#[test]
fn falsify_matches_the_library() {
    let v = parse(falsify("prop1", 4, 300, 5, 9, 2, 6, "free", "random"));
    assert_eq!(v["trials"], 300);
    assert_eq!(v["violations"], json!([]));
    assert_eq!(v["config"]["seed"], 4);
    assert_eq!(
        falsify("prop1", 4, 300, 5, 9, 2, 6, "free", "random"),
        falsify("prop1", 4, 300, 5, 9, 2, 6, "free", "random")
    );
    let v = parse(falsify(
        "prop4",
        1,
        100,
        5,
        9,
        2,
        6,
        "common-shape",
        "random",
    ));
    assert_eq!(v["qualifying"], 100);
}
