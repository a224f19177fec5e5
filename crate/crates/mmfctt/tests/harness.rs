use std::path::Path;

use mmfctt::harness::{
    aggregate, bench, read_records, render_report, report, ExperimentSpec, RunRecord, Variant, RECORDS_FILE,
};
use mmfctt_core::fairness::{rho_min, SortedAllocation};

fn toy() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/toy.ctt")
}

fn record(run: u64, values: &[u32]) -> RunRecord {
    RunRecord::new("x", Variant::Glbop, run, run, &SortedAllocation::new(values.to_vec()).unwrap(), 10, 1)
}

#[test]
fn aggregate_averages_ranks() {
    let recs = [record(0, &[1, 0]), record(1, &[1, 1])];
    for r in &recs {
        let s = r.sorted_allocation().unwrap();
        assert_eq!(r.parsed_rank().unwrap(), rho_min(&s.into()));
    }
    assert_eq!(recs[0].rank, "1");
    assert_eq!(recs[1].rank, "2");
    let a = aggregate(&recs).unwrap();
    assert_eq!(a.best, SortedAllocation::new(vec![1, 0]).unwrap());
    // mean rank 1.5 rounds up to 2
    assert_eq!(a.average, SortedAllocation::new(vec![1, 1]).unwrap());

    let recs = [record(0, &[2, 0]), record(1, &[2, 2])];
    assert_eq!(recs[0].rank, "3");
    assert_eq!(recs[1].rank, "5");
    assert_eq!(aggregate(&recs).unwrap().average, SortedAllocation::new(vec![2, 1]).unwrap());
}

#[test]
fn aggregate_of_one_record_is_that_record() {
    let a = aggregate(&[record(0, &[4, 2, 2])]).unwrap();
    assert_eq!(a.best, a.average);
    assert!(aggregate(&[]).is_err());
}

#[test]
fn best_never_exceeds_average() {
    let recs: Vec<RunRecord> = (0..6u32)
        .map(|k| {
            let s = SortedAllocation::from_unsorted(vec![k * 3 % 7, k % 2, k % 4]);
            RunRecord::new("x", Variant::Lsap, k.into(), 0, &s, 10, 1)
        })
        .collect();
    let a = aggregate(&recs).unwrap();
    assert!(a.best <= a.average);
}

#[test]
fn record_json_round_trip() {
    let r = record(3, &[5, 5, 1]);
    let text = serde_json::to_string(&r).unwrap();
    assert!(text.contains("\"variant\":\"glbop\""));
    assert_eq!(serde_json::from_str::<RunRecord>(&text).unwrap(), r);
}

#[test]
fn unknown_schema_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = record(0, &[1]);
    r.schema = 99;
    std::fs::write(dir.path().join(RECORDS_FILE), serde_json::to_string(&r).unwrap()).unwrap();
    assert!(read_records(dir.path()).is_err());
}

#[test]
fn spec_rejects_unknown_keys_and_resolves_paths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.toml");
    std::fs::write(&path, "instances = [\"a.ctt\"]\nrunz = 3\n").unwrap();
    assert!(ExperimentSpec::load(&path).is_err());
    std::fs::write(&path, "instances = [\"a.ctt\"]\nruns = 3\n").unwrap();
    let spec = ExperimentSpec::load(&path).unwrap();
    assert_eq!(spec.runs, 3);
    assert_eq!(spec.iterations, 1_000_000);
    assert_eq!(spec.instances[0], dir.path().join("a.ctt"));
    assert_eq!(spec.output, dir.path().join("results"));
    assert_eq!(spec.variants, [Variant::Glbop, Variant::Lsap]);
}

#[test]
fn bench_resumes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec {
        instances: vec![toy()],
        variants: vec![Variant::Glbop, Variant::Lsap],
        runs: 2,
        iterations: 2_000,
        seed: 1,
        tmax: 5.0,
        tmin: 0.01,
        output: dir.path().join("out"),
    };
    let first = bench(&spec).unwrap();
    assert_eq!((first.completed, first.skipped), (4, 0));
    let again = bench(&spec).unwrap();
    assert_eq!((again.completed, again.skipped), (0, 4));
    let more = bench(&ExperimentSpec { runs: 3, ..spec.clone() }).unwrap();
    assert_eq!((more.completed, more.skipped), (2, 4));
    assert_eq!(read_records(&spec.output).unwrap().len(), 6);

    let r = report(&spec.output).unwrap();
    assert_eq!(r.instances.len(), 1);
    assert_eq!(r.instances[0].instance, "toy");
    assert!(r.instances[0].variants.iter().all(|v| v.runs == 3));
    let text = render_report(&r);
    assert_eq!(text, render_report(&report(&spec.output).unwrap()));
    assert!(text.contains("toy"));
}

#[test]
fn reruns_with_same_seed_agree() {
    let run = |dir: &Path| {
        let spec = ExperimentSpec {
            instances: vec![toy()],
            variants: vec![Variant::Lsap],
            runs: 2,
            iterations: 1_000,
            seed: 9,
            tmax: 5.0,
            tmin: 0.01,
            output: dir.to_path_buf(),
        };
        bench(&spec).unwrap();
        let mut recs = read_records(dir).unwrap();
        recs.sort_by_key(|r| r.run);
        recs.into_iter().map(|r| (r.seed, r.allocation)).collect::<Vec<_>>()
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run(a.path()), run(b.path()));
}
