//! Build an input description in code and run a CLI command on it.

use chabauty::cli_frontend::{execute, render_text, CurveDescription, Flags};

const INPUT: &str = r#"{
    "label": "y^2 = x^5 + x^3 + x^2 + 1/4",
    "f": ["1/4", "0", "1", "1", "0", "1"],
    "p": 5,
    "known_points": ["infinity", {"x": "0", "y": "1/2"}, {"x": "0", "y": "-1/2"}],
    "generators": [{"label": "P1 - infinity", "terms": [{"point": {"x": "0", "y": "-1/2"}, "coefficient": 1}]}]
}"#;

fn main() {
    let problem = CurveDescription::parse(INPUT).unwrap().validate().unwrap();
    let report = execute("glc", &problem, &Flags::default()).unwrap();
    println!("{}", render_text(&report));
    let json = serde_json::to_value(&report).unwrap();
    println!("bound from JSON: {}", json["result"]["glc"]["report"]["bound"]);
}
