use std::collections::BTreeSet;

use super::*;
use crate::fixtures::InstanceBuilder;

fn task(id: u32, window: u32, begin: f64, items: &[(u32, f64)]) -> DownlinkTask {
    let begin = Millis::from_secs(begin);
    let d_set: Vec<(DatumId, Millis)> = items.iter().map(|&(d, s)| (DatumId(d), Millis::from_secs(s))).collect();
    let duration: Millis = d_set.iter().map(|e| e.1).sum();
    DownlinkTask { id: TaskId(id), begin, end: begin + duration, duration, window: WindowId(window), d_set }
}

/// Plans and the scheduled set derived from the tasks.
fn schedule(tasks: Vec<DownlinkTask>) -> Schedule {
    let mut plans: Vec<SegmentationPlan> = Vec::new();
    for t in &tasks {
        for &(d, dur) in &t.d_set {
            match plans.iter_mut().find(|p| p.datum == d) {
                Some(p) => p.pieces.push((t.window, dur)),
                None => plans.push(SegmentationPlan { datum: d, pieces: vec![(t.window, dur)] }),
            }
        }
    }
    let scheduled: BTreeSet<DatumId> = plans.iter().map(|p| p.datum).collect();
    Schedule { tasks, plans, scheduled }
}

fn two_satellites_one_station() -> Instance {
    InstanceBuilder::new()
        .satellite(1, 30.0)
        .satellite(2, 30.0)
        .station(1)
        .window(1, 1, 1, 0.0, 1000.0)
        .window(2, 1, 2, 0.0, 1000.0)
        .datum(1, 1, 5, 100.0, 0.0)
        .datum(2, 2, 5, 100.0, 0.0)
        .build()
}

#[test]
fn empty_schedule_is_feasible_everywhere() {
    let inst = two_satellites_one_station();
    for mode in SolveMode::ALL {
        assert!(validate_schedule(&inst, &Schedule::default(), mode).unwrap().is_empty());
    }
}

#[test]
fn setup_gap_of_exactly_sigma_is_feasible() {
    let inst = two_satellites_one_station();
    let s = schedule(vec![task(1, 1, 0.0, &[(1, 100.0)]), task(2, 2, 160.0, &[(2, 100.0)])]);
    assert!(validate_schedule(&inst, &s, SolveMode::SEGMENT_REARRANGE).unwrap().is_empty());

    let s = schedule(vec![task(1, 1, 0.0, &[(1, 100.0)]), task(2, 2, 159.999, &[(2, 100.0)])]);
    let v = validate_schedule(&inst, &s, SolveMode::SEGMENT_REARRANGE).unwrap();
    assert_eq!(v, vec![Violation::SetupTime { first: TaskId(1), second: TaskId(2) }]);
}

#[test]
fn short_segment_is_reported_once() {
    let inst = InstanceBuilder::new()
        .satellite(1, 30.0)
        .station(1)
        .station(2)
        .window(1, 1, 1, 0.0, 500.0)
        .window(2, 2, 1, 1000.0, 1500.0)
        .datum(1, 1, 5, 100.0, 0.0)
        .datum(2, 1, 5, 40.0, 0.0)
        .build();
    // the 20 s piece shares its task with datum 2, so only the segment rule fires
    let s = schedule(vec![task(1, 1, 0.0, &[(1, 20.0), (2, 40.0)]), task(2, 2, 1000.0, &[(1, 80.0)])]);
    let v = validate_schedule(&inst, &s, SolveMode::SEGMENT_REARRANGE).unwrap();
    assert_eq!(
        v,
        vec![Violation::SegmentTooShort { datum: DatumId(1), window: WindowId(1), duration: Millis::from_secs(20.0) }]
    );
}

#[test]
fn each_constraint_family_is_detected() {
    let inst = InstanceBuilder::new()
        .satellite(1, 30.0)
        .satellite(2, 30.0)
        .station(1)
        .station(2)
        .window(1, 1, 1, 100.0, 500.0)
        .window(2, 2, 1, 200.0, 600.0)
        .window(3, 1, 2, 100.0, 900.0)
        .datum(1, 1, 10, 100.0, 150.0)
        .datum(2, 1, 1, 100.0, 0.0)
        .datum(3, 2, 1, 100.0, 0.0)
        .build();
    let mode = SolveMode::SEGMENT_REARRANGE;
    let check = |s: &Schedule| validate_schedule(&inst, s, mode).unwrap();

    // visible time: the task runs past the window end
    let v = check(&schedule(vec![task(1, 1, 450.0, &[(2, 100.0)])]));
    assert!(v.contains(&Violation::VisibleTime { task: TaskId(1) }));

    // logical time: begins before the release of datum 1
    let v = check(&schedule(vec![task(1, 1, 100.0, &[(1, 100.0)])]));
    assert_eq!(v, vec![Violation::LogicalTime { task: TaskId(1), datum: DatumId(1) }]);

    // logical time: begins at expiry (priority 10 → 3 h after 150 s)
    let late = InstanceBuilder::new()
        .satellite(1, 30.0)
        .station(1)
        .window(1, 1, 1, 10_000.0, 20_000.0)
        .datum(1, 1, 10, 100.0, 150.0)
        .build();
    let s = schedule(vec![task(1, 1, 150.0 + 3.0 * 3600.0, &[(1, 100.0)])]);
    assert_eq!(
        validate_schedule(&late, &s, mode).unwrap(),
        vec![Violation::LogicalTime { task: TaskId(1), datum: DatumId(1) }]
    );
    let s = schedule(vec![task(1, 1, 150.0 + 3.0 * 3600.0 - 0.001, &[(1, 100.0)])]);
    assert!(validate_schedule(&late, &s, mode).unwrap().is_empty());

    // satellite antenna: two overlapping tasks of satellite 1 at different stations
    let v = check(&schedule(vec![task(1, 1, 150.0, &[(1, 100.0)]), task(2, 2, 200.0, &[(2, 100.0)])]));
    assert_eq!(v, vec![Violation::SatelliteOverlap { first: TaskId(1), second: TaskId(2) }]);

    // station antenna: satellite 2 overlapping at station 1
    let v = check(&schedule(vec![task(1, 1, 150.0, &[(1, 100.0)]), task(2, 3, 200.0, &[(3, 100.0)])]));
    assert!(v.contains(&Violation::StationOverlap { first: TaskId(1), second: TaskId(2) }));
    assert!(v.contains(&Violation::SetupTime { first: TaskId(1), second: TaskId(2) }));

    // satellite mismatch
    let v = check(&schedule(vec![task(1, 3, 150.0, &[(1, 100.0)])]));
    assert!(v.contains(&Violation::SatelliteMismatch { task: TaskId(1), datum: DatumId(1) }));

    // incomplete transmission and work time below d0
    let v = check(&schedule(vec![task(1, 1, 150.0, &[(1, 20.0)])]));
    assert!(v.contains(&Violation::IncompleteTransmission { datum: DatumId(1), transmitted: Millis::from_secs(20.0) }));
    assert!(v.contains(&Violation::WorkTime { task: TaskId(1) }));

    // partial transmission of an unscheduled datum
    let mut s = schedule(vec![task(1, 1, 150.0, &[(1, 100.0)])]);
    s.scheduled.clear();
    s.plans.clear();
    assert_eq!(check(&s), vec![Violation::PartialTransmission { datum: DatumId(1) }]);

    // two tasks in one window
    let v = check(&schedule(vec![task(1, 1, 150.0, &[(1, 100.0)]), task(2, 1, 300.0, &[(2, 100.0)])]));
    assert_eq!(v, vec![Violation::SharedWindow { window: WindowId(1) }]);

    // plan disagreeing with tasks
    let mut s = schedule(vec![task(1, 1, 150.0, &[(1, 100.0)])]);
    s.plans[0].pieces[0].1 = Millis::from_secs(90.0);
    assert_eq!(check(&s), vec![Violation::PlanMismatch { datum: DatumId(1) }]);
}

#[test]
fn mode_specific_rules() {
    let inst = InstanceBuilder::new()
        .satellite(1, 30.0)
        .station(1)
        .station(2)
        .window(1, 1, 1, 0.0, 500.0)
        .window(2, 2, 1, 1000.0, 1500.0)
        .datum(1, 1, 5, 100.0, 0.0)
        .datum(2, 1, 5, 50.0, 10.0)
        .build();
    // datum 2 is released later but transmitted first
    let s = schedule(vec![task(1, 1, 10.0, &[(2, 50.0)]), task(2, 2, 1000.0, &[(1, 100.0)])]);
    assert!(validate_schedule(&inst, &s, SolveMode::SEGMENT_REARRANGE).unwrap().is_empty());
    assert_eq!(
        validate_schedule(&inst, &s, SolveMode::SEGMENT_FOFD).unwrap(),
        vec![Violation::ReleaseOrder { earlier: DatumId(1), later: DatumId(2) }]
    );
    // in-task order follows release order, so this is fine under FOFD
    let s = schedule(vec![task(1, 1, 10.0, &[(1, 100.0), (2, 50.0)])]);
    assert!(validate_schedule(&inst, &s, SolveMode::UNSEGMENT_FOFD).unwrap().is_empty());

    let s = schedule(vec![task(1, 1, 0.0, &[(1, 60.0)]), task(2, 2, 1000.0, &[(1, 40.0)])]);
    assert!(validate_schedule(&inst, &s, SolveMode::SEGMENT_REARRANGE).unwrap().is_empty());
    assert_eq!(
        validate_schedule(&inst, &s, SolveMode::UNSEGMENT_REARRANGE).unwrap(),
        vec![Violation::Segmented { datum: DatumId(1) }]
    );
}

#[test]
fn unknown_ids_are_structural_errors() {
    let inst = two_satellites_one_station();
    let s = schedule(vec![task(1, 99, 0.0, &[(1, 100.0)])]);
    assert!(validate_schedule(&inst, &s, SolveMode::default()).is_err());
    let s = schedule(vec![task(1, 1, 0.0, &[(42, 100.0)])]);
    assert!(validate_schedule(&inst, &s, SolveMode::default()).is_err());
}

#[test]
fn failure_rate_examples() {
    let inst = InstanceBuilder::new()
        .satellite(1, 30.0)
        .station(1)
        .window(1, 1, 1, 0.0, 1000.0)
        .datum(1, 1, 3, 100.0, 0.0)
        .datum(2, 1, 7, 100.0, 0.0)
        .build();
    let none = Schedule::default();
    assert_eq!(failure_rate(&inst, &none), 1.0);
    let only_seven = schedule(vec![task(1, 1, 0.0, &[(2, 100.0)])]);
    assert!((failure_rate(&inst, &only_seven) - 0.3).abs() < 1e-12);
    let both = schedule(vec![task(1, 1, 0.0, &[(1, 100.0), (2, 100.0)])]);
    assert_eq!(failure_rate(&inst, &both), 0.0);

    let empty = InstanceBuilder::new().satellite(1, 30.0).build();
    assert_eq!(failure_rate(&empty, &none), 0.0);
}

#[test]
fn service_balance_examples() {
    let inst = InstanceBuilder::new()
        .satellite(1, 30.0)
        .satellite(2, 30.0)
        .station(1)
        .window(1, 1, 1, 0.0, 100.0)
        .window(2, 1, 1, 200.0, 300.0)
        .datum(1, 1, 3, 100.0, 0.0)
        .datum(2, 1, 7, 100.0, 0.0)
        .build();
    // satellite 2 owns no windows and is left out of the mean
    assert_eq!(service_balance(&inst, &Schedule::default()), 1.0);
    let half = schedule(vec![task(1, 1, 0.0, &[(1, 100.0)])]);
    assert_eq!(service_balance(&inst, &half), 0.5);
    let full = schedule(vec![task(1, 1, 0.0, &[(1, 100.0)]), task(2, 2, 200.0, &[(2, 100.0)])]);
    assert_eq!(service_balance(&inst, &full), 0.0);
}

#[test]
fn instance_rejects_bad_references() {
    let missing_sat = InstanceBuilder::new().satellite(1, 30.0).station(1).window(1, 1, 7, 0.0, 10.0).try_build();
    assert!(matches!(missing_sat, Err(crate::error::InstanceError::Dangling(_))));
    let dup = InstanceBuilder::new().satellite(1, 30.0).satellite(1, 10.0).try_build();
    assert!(matches!(dup, Err(crate::error::InstanceError::DuplicateId(_))));
    let short = InstanceBuilder::new().satellite(1, 30.0).datum(1, 1, 1, 20.0, 0.0).try_build();
    assert!(matches!(short, Err(crate::error::InstanceError::TooShort(_))));
}
