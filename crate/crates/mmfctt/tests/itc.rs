use std::path::Path;

use mmfctt::itc::{parse_instance, parse_solution, read_instance, write_instance, write_solution, ParseError};
use mmfctt_core::model::{allocation, validate_hard, Instance};
use mmfctt_core::synthetic::{planted_instance, SyntheticParams};
use proptest::prelude::*;

fn data(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn same_instance(a: &Instance, b: &Instance) -> bool {
    a.name() == b.name()
        && a.courses() == b.courses()
        && a.rooms() == b.rooms()
        && a.curricula() == b.curricula()
        && a.days() == b.days()
        && a.periods_per_day() == b.periods_per_day()
        && (0..a.courses().len()).all(|c| (0..a.periods()).all(|p| a.is_available(c, p) == b.is_available(c, p)))
}

#[test]
fn toy_counts() {
    let p = read_instance(data("toy.ctt")).unwrap();
    assert!(p.warnings.is_empty());
    let i = &p.instance;
    assert_eq!(i.name(), "Toy");
    assert_eq!(i.courses().len(), 4);
    assert_eq!(i.lecture_count(), 16);
    assert_eq!(i.rooms().iter().map(|r| r.capacity).collect::<Vec<_>>(), [32, 50, 40]);
    assert_eq!(i.periods(), 20);
    assert_eq!(i.curricula().len(), 2);
    assert_eq!(i.unavailability_count(), 8);
    assert!(!i.is_available(2, 2 * 4));
}

#[test]
fn extended_format_is_read_with_warnings() {
    let plain = read_instance(data("toy.ctt")).unwrap().instance;
    let p = read_instance(data("toy.ectt")).unwrap();
    assert_eq!(p.warnings.len(), 5);
    assert!(p.warnings.iter().any(|w| w.contains("ROOM_CONSTRAINTS")));
    let e = &p.instance;
    assert_eq!(plain.courses(), e.courses());
    assert_eq!(plain.curricula(), e.curricula());
    let caps = |i: &Instance| i.rooms().iter().map(|r| r.capacity).collect::<Vec<_>>();
    assert_eq!(caps(&plain), caps(e));
    assert_eq!(plain.unavailability_count(), e.unavailability_count());
}

#[test]
fn missing_file_is_an_io_error() {
    assert!(matches!(read_instance(data("absent.ctt")), Err(ParseError::Io { .. })));
}

#[test]
fn malformed_numbers_report_the_line() {
    let text = std::fs::read_to_string(data("toy.ctt")).unwrap().replace("SceCosC Ocra 3 3 30", "SceCosC Ocra x 3 30");
    match parse_instance(&text) {
        Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 10),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn content_after_end_is_rejected() {
    let text = format!("{}\nstray\n", std::fs::read_to_string(data("toy.ctt")).unwrap());
    assert!(parse_instance(&text).is_err());
}

#[test]
fn toy_round_trip() {
    let i = read_instance(data("toy.ctt")).unwrap().instance;
    let again = parse_instance(&write_instance(&i)).unwrap();
    assert!(again.warnings.is_empty());
    assert!(same_instance(&i, &again.instance));
}

#[test]
fn solution_lines_for_unknown_names_are_rejected() {
    let i = read_instance(data("toy.ctt")).unwrap().instance;
    assert!(parse_solution(&i, "SceCosC A 0 0\n").is_ok());
    assert!(parse_solution(&i, "Nope A 0 0\n").is_err());
    assert!(parse_solution(&i, "SceCosC Z 0 0\n").is_err());
    assert!(parse_solution(&i, "SceCosC A 9 0\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planted_instances_round_trip(seed in any::<u64>()) {
        let (i, t) = planted_instance(&SyntheticParams::default(), seed);
        let again = parse_instance(&write_instance(&i)).unwrap().instance;
        prop_assert!(same_instance(&i, &again));
        let t2 = parse_solution(&again, &write_solution(&i, &t)).unwrap();
        prop_assert!(validate_hard(&again, &t2).is_empty());
        prop_assert_eq!(allocation(&i, &t).unwrap(), allocation(&again, &t2).unwrap());
    }
}
