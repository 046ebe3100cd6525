use kahler_gw_web::{assemble, census_covers, census_spin};

const K3: &str = r#"{"minimal_model": {"type": "k3"}}"#;
const E4: &str = r#"{"minimal_model": {"type": "elliptic", "base_genus": 0, "chi_O": 4, "multiple_fibers": []}}"#;

#[test]
fn k3_text_has_only_the_constant_term() {
    let text = assemble(K3, 3, 4, false, false).unwrap();
    assert!(text.contains("GW0"));
    assert!(text.contains("# 4 stored term(s)"), "{text}");
}

#[test]
fn machine_output_is_json_with_series() {
    let json = assemble(E4, 2, 0, false, true).unwrap();
    assert!(json.trim_start().starts_with('{'));
    assert!(json.contains("\"series\""));
    assert!(json.contains("\"-3\""), "{json}");
}

#[test]
fn invalid_descriptors_report_each_violation() {
    let bad = r#"{"minimal_model": {"type": "general_type", "K2": 0, "chi_O": 1}}"#;
    let err = assemble(bad, 2, 2, false, false).unwrap_err();
    assert!(err.starts_with("error: descriptor is invalid"));
    assert!(err.contains("[general-type-genus]"), "{err}");
    assert!(assemble("{", 2, 2, false, false).unwrap_err().starts_with("error:"));
    assert!(assemble(K3, 2, 3, false, false).is_err());
}

#[test]
fn cover_census_matches_closed_forms() {
    let table = census_covers(1, 1, 0, 1, 6, false).unwrap();
    assert_eq!(table.lines().count(), 2 + 6);
    for line in table.lines().skip(2) {
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols[3], cols[4], "{line}");
    }
    let f2 = census_covers(2, 1, 0, 1, 8, false).unwrap();
    for line in f2.lines().skip(2) {
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols[3], cols[4], "{line}");
    }
}

#[test]
fn spin_census_rows() {
    let table = census_spin(1, 2, false).unwrap();
    let rows: Vec<Vec<&str>> = table.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows[0], ["1", "3", "1", "1/2", "-3/2"]);
    assert_eq!(rows[1], ["2", "10", "6", "3/2", "-5/2"]);
}

#[test]
fn ranges_and_capacity_are_checked() {
    assert!(census_spin(0, 2, false).is_err());
    assert!(census_spin(3, 2, false).is_err());
    assert!(census_spin(1, 40, false).unwrap_err().contains("h ≤"));
    assert!(census_covers(1, 1, 0, 1, 200_000, false).unwrap_err().contains("d ≤"));
    assert!(census_covers(4, 2, 0, 1, 3, false).is_err());
}
