mod common;

use dercat_cli::Report;

#[test]
fn golden_replay_is_byte_identical() {
    let bad = common::mismatches();
    assert!(bad.is_empty(), "golden mismatches: {bad:?}");
}

#[test]
fn golden_reports_round_trip() {
    for case in common::cases() {
        let recorded = std::fs::read_to_string(common::expected_path(&case)).unwrap();
        let body = recorded.split_once('\n').unwrap().1;
        if let Ok(report) = Report::from_json(body) {
            assert_eq!(report.to_json(), body, "{}", case.name);
            assert_eq!(report.status.exit_code(), common::exit_code(&recorded), "{}", case.name);
        }
    }
}

#[test]
fn at_least_twenty_cases() {
    assert!(common::cases().len() >= 20);
}
