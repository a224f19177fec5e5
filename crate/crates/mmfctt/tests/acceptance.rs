//! Acceptance criteria. Each test prints one PASS/FAIL line.
//!
//! Criteria 4, 6 and 8 read the ITC2007 competition instances
//! (`comp01` ... `comp21`, `.ectt` or `.ctt`) from `$MMFCTT_ITC2007_DIR`,
//! or from `data/itc2007` at the workspace root when the variable is unset.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use mmfctt::harness::{bench, read_records, ExperimentSpec, Variant};
use mmfctt::itc::{parse_solution, read_instance, write_instance};
use mmfctt::stats::{exact_p, normal_p, wilcoxon_one_sided, Method};
use mmfctt_core::anneal::{self, derive_seed, AnnealConfig};
use mmfctt_core::assignment::{brute_force_glbop, solve_glbop, solve_lbap, CostMatrix, GlbopInstance};
use mmfctt_core::fairness::{rank, rank_recursive, unrank, Rank, SortedAllocation, WeightMultiset};
use mmfctt_core::model::{allocation, validate_hard};
use mmfctt_core::room::{solve_rooms_glbop, RoomSolver};
use mmfctt_core::synthetic::{planted_instance, SyntheticParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn verdict(n: u32, title: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("criterion {n} [{title}]: PASS ({detail})"),
        Err(detail) => {
            println!("criterion {n} [{title}]: FAIL ({detail})");
            panic!("criterion {n} failed: {detail}");
        }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn itc_dir() -> PathBuf {
    std::env::var_os("MMFCTT_ITC2007_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).ancestors().nth(2).unwrap().join("data/itc2007"))
}

fn comp(n: u32) -> Result<PathBuf, String> {
    let dir = itc_dir();
    ["ectt", "ctt"]
        .iter()
        .map(|ext| dir.join(format!("comp{n:02}.{ext}")))
        .find(|p| p.is_file())
        .ok_or_else(|| format!("comp{n:02} not found in {}", dir.display()))
}

fn w(v: &[u32]) -> WeightMultiset {
    v.iter().copied().collect()
}

#[test]
fn criterion_1_two_by_two() {
    let outcome = (|| {
        let start = Instant::now();
        let g = GlbopInstance::from_rows(vec![vec![w(&[5]), w(&[7])], vec![w(&[5, 4]), w(&[7, 6])]]).unwrap();
        let sol = solve_glbop(&g).map_err(|e| e.to_string())?;
        let first = solve_lbap(&CostMatrix::from_rows(vec![vec![5, 7], vec![5, 7]]).unwrap()).1;
        let second = solve_lbap(&CostMatrix::from_rows(vec![vec![5, 7], vec![4, 6]]).unwrap()).1;
        let elapsed = start.elapsed();
        check(sol.weight == w(&[7, 5, 4]), || format!("multiset {:?}", sol.weight.items()))?;
        check(sol.matching.as_slice() == [1, 0], || format!("matching {:?}", sol.matching.as_slice()))?;
        check(first.values() == [7, 5], || format!("first projection {first}"))?;
        check(second.values() == [6, 5], || format!("second projection {second}"))?;
        check(elapsed < Duration::from_millis(1), || format!("took {elapsed:?}"))?;
        Ok(format!("{{7,5,4}} via e1->r2, e2->r1; LBAP (7,5) and (6,5); {elapsed:?}"))
    })();
    verdict(1, "two-room example", outcome);
}

#[test]
fn criterion_2_glbop_oracle() {
    let outcome = (|| {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let count = 500;
        for k in 0..count {
            let n = rng.random_range(1..=6);
            let rows: Vec<Vec<WeightMultiset>> = (0..n)
                .map(|_| {
                    (0..n).map(|_| (0..rng.random_range(0..=3)).map(|_| rng.random_range(0..=8)).collect()).collect()
                })
                .collect();
            let g = GlbopInstance::from_rows(rows).unwrap();
            let fast = solve_glbop(&g).map_err(|e| e.to_string())?.weight;
            let oracle = brute_force_glbop(&g).map_err(|e| e.to_string())?.1;
            check(fast == oracle, || format!("instance {k}: {:?} vs {:?}", fast.items(), oracle.items()))?;
        }
        let elapsed = start.elapsed();
        check(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
        Ok(format!("{count} instances agree, {elapsed:?}"))
    })();
    verdict(2, "GLBOP oracle equivalence", outcome);
}

fn sorted_sequences(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for head in 0..=k {
        for tail in sorted_sequences(n - 1, head) {
            let mut v = vec![head];
            v.extend(tail);
            out.push(v);
        }
    }
    out
}

#[test]
fn criterion_3_rank_isomorphism() {
    let outcome = (|| {
        let start = Instant::now();
        let mut checked = 0;
        for n in 1..=5 {
            // lexicographic order of the enumeration is the leximax order
            let all = sorted_sequences(n, 6);
            let mut previous: Option<Rank> = None;
            for (idx, v) in all.iter().enumerate() {
                let s = SortedAllocation::new(v.clone()).unwrap();
                let r = rank(&s);
                check(r == Rank::from(idx as u64), || format!("rank {v:?} = {r}, expected {idx}"))?;
                check(previous.as_ref().is_none_or(|p| *p < r), || format!("order broken at {v:?}"))?;
                check(rank_recursive(&s) == r, || format!("recursion differs at {v:?}"))?;
                check(unrank(&r, n) == s, || format!("unrank differs at {v:?}"))?;
                previous = Some(r);
                checked += 1;
            }
        }
        let elapsed = start.elapsed();
        check(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
        Ok(format!("{checked} sequences, bijective onto initial segments, {elapsed:?}"))
    })();
    verdict(3, "rank isomorphism", outcome);
}

#[test]
fn criterion_4_comp11_optimum() {
    let outcome = (|| {
        let path = comp(11)?;
        let parsed = read_instance(&path).map_err(|e| e.to_string())?;
        let i = &parsed.instance;
        let start = Instant::now();
        let results: Vec<Result<SortedAllocation, String>> = (0..10u64)
            .into_par_iter()
            .map(|run| {
                let cfg = AnnealConfig {
                    iterations: 1_000_000,
                    variant: RoomSolver::Glbop,
                    seed: derive_seed(0, 11, RoomSolver::Glbop, run),
                    ..AnnealConfig::default()
                };
                anneal::run(i, &cfg).map(|r| r.best_allocation).map_err(|e| e.to_string())
            })
            .collect();
        let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
        let optimal = results.iter().filter(|a| a.values().iter().all(|&x| x == 0)).count();
        let shown: Vec<String> = results.iter().map(|a| a.to_string()).collect();
        check(optimal >= 8, || format!("{optimal}/10 runs reached 0^13: {shown:?}"))?;
        Ok(format!("{optimal}/10 runs reached 0^13 in {:?}", start.elapsed()))
    })();
    verdict(4, "comp11 optimum", outcome);
}

// Desk-scale experiment: the toy instance, planted synthetic instances and
// comp01/comp11 when available, both variants.
#[test]
fn criterion_5_feasibility_and_room_fixpoint() {
    let outcome = (|| {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut instances = vec![Path::new(env!("CARGO_MANIFEST_DIR")).join("data/toy.ctt")];
        let params = SyntheticParams { courses: 18, rooms: 5, curricula: 8, ..SyntheticParams::default() };
        for seed in 0..4 {
            let (i, _) = planted_instance(&params, seed);
            let path = dir.path().join(format!("synthetic{seed}.ctt"));
            std::fs::write(&path, write_instance(&i)).map_err(|e| e.to_string())?;
            instances.push(path);
        }
        instances.extend([1, 11].into_iter().filter_map(|n| comp(n).ok()));
        let spec = ExperimentSpec {
            instances: instances.clone(),
            variants: vec![Variant::Glbop, Variant::Lsap],
            runs: 3,
            iterations: 20_000,
            seed: 5,
            tmax: 5.0,
            tmin: 0.01,
            output: dir.path().join("results"),
        };
        bench(&spec).map_err(|e| format!("{e:#}"))?;
        let records = read_records(&spec.output).map_err(|e| e.to_string())?;
        check(records.len() == instances.len() * 6, || format!("{} records", records.len()))?;
        let mut periods_checked = 0;
        for rec in &records {
            let path = instances.iter().find(|p| p.file_stem().unwrap().to_string_lossy() == rec.instance).unwrap();
            let i = read_instance(path).map_err(|e| e.to_string())?.instance;
            let sol = spec.output.join("solutions").join(format!("{}.{}.{}.sol", rec.instance, rec.variant, rec.run));
            let text = std::fs::read_to_string(&sol).map_err(|e| e.to_string())?;
            let t = parse_solution(&i, &text).map_err(|e| e.to_string())?;
            let v = validate_hard(&i, &t);
            check(v.is_empty(), || format!("{}: {}", sol.display(), v[0].describe(&i)))?;
            let reported = rec.sorted_allocation().map_err(|e| e.to_string())?;
            check(allocation(&i, &t).unwrap().sorted() == reported, || {
                format!("{}: allocation mismatch", sol.display())
            })?;
            for p in 0..i.periods() {
                let again = allocation(&i, &solve_rooms_glbop(&i, &t, p).unwrap()).unwrap().sorted();
                check(again >= reported, || format!("{} period {p} improves to {again}", sol.display()))?;
                periods_checked += 1;
            }
        }
        Ok(format!(
            "{} timetables of both variants feasible, no improvement in {periods_checked} period re-solves",
            records.len()
        ))
    })();
    verdict(5, "feasibility and non-worsening", outcome);
}

#[test]
fn criterion_6_directional_variant_claim() {
    let outcome = (|| {
        let path = comp(1)?;
        let i = read_instance(&path).map_err(|e| e.to_string())?.instance;
        let ranks = |variant: RoomSolver| -> Result<Vec<Rank>, String> {
            (0..20u64)
                .into_par_iter()
                .map(|run| {
                    let cfg = AnnealConfig {
                        iterations: 100_000,
                        variant,
                        seed: derive_seed(0, 1, variant, run),
                        ..AnnealConfig::default()
                    };
                    let r = anneal::run(&i, &cfg).map_err(|e| e.to_string())?;
                    Ok(rank(&r.best_allocation))
                })
                .collect()
        };
        let (g, l) = (ranks(RoomSolver::Glbop)?, ranks(RoomSolver::Lsap)?);
        let sum = |v: &[Rank]| v.iter().map(|r| r.value().clone()).sum::<num_bigint::BigUint>();
        let (sg, sl) = (sum(&g), sum(&l));
        let lsap_better = wilcoxon_one_sided(&l, &g, 0.01).unwrap();
        let glbop_better = wilcoxon_one_sided(&g, &l, 0.01).unwrap();
        check(sg <= sl, || format!("mean rank glbop {} > lsap {}", &sg / 20u32, &sl / 20u32))?;
        check(!lsap_better.significant, || format!("lsap significantly better, p = {}", lsap_better.p_value))?;
        Ok(format!(
            "mean rank glbop {} <= lsap {}; p(lsap better) = {:.4}, p(glbop better) = {:.4}",
            &sg / 20u32,
            &sl / 20u32,
            lsap_better.p_value,
            glbop_better.p_value
        ))
    })();
    verdict(6, "directional variant claim on comp01", outcome);
}

#[test]
fn criterion_7_statistics() {
    let outcome = (|| {
        let start = Instant::now();
        let r = |v: &[u64]| v.iter().map(|&x| Rank::from(x)).collect::<Vec<_>>();
        let small = wilcoxon_one_sided(&r(&[1, 2, 3]), &r(&[10, 11, 12]), 0.01).unwrap();
        check(small.method == Method::Exact, || "small sample not exact".into())?;
        check((small.p_value - 0.05).abs() < 1e-12, || format!("p = {}", small.p_value))?;

        // normal approximation against the exact distribution, 8 + 8 without ties
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let mut values: Vec<u64> = (0..1000).collect();
            for k in 0..16 {
                let j = rng.random_range(k..values.len());
                values.swap(k, j);
            }
            let shift = rng.random_range(0..400u64);
            let a: Vec<Rank> = values[..8].iter().map(|&x| Rank::from(2 * x)).collect();
            let b: Vec<Rank> = values[8..16].iter().map(|&x| Rank::from(2 * (x + shift) + 1)).collect();
            let approx = wilcoxon_one_sided(&a, &b, 0.01).unwrap();
            check(approx.method == Method::Exact, || "8+8 should be exact".into())?;
            let exact = exact_p(8, 8, approx.statistic as usize);
            let normal = normal_p(8, 8, approx.statistic, &[]);
            worst = worst.max((normal - exact).abs());
        }
        check(worst <= 0.01, || format!("largest gap {worst:.4}"))?;
        let elapsed = start.elapsed();
        check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
        Ok(format!("exact p = 0.05; normal vs exact gap <= {worst:.4} on 8+8; {elapsed:?}"))
    })();
    verdict(7, "statistics correctness", outcome);
}

#[test]
fn criterion_8_format_fidelity() {
    let outcome = (|| {
        let table = include_str!("data/published_allocations.tsv");
        let mut entries = 0;
        for line in table.lines().filter(|l| !l.starts_with('#')) {
            let cells: Vec<&str> = line.split('\t').collect();
            let mut lengths = Vec::new();
            for cell in &cells[1..] {
                let (body, truncated) = match cell.strip_suffix(",\\ldots") {
                    Some(prefix) => (prefix, true),
                    None => (*cell, false),
                };
                let parsed: SortedAllocation = body.parse().map_err(|e| format!("{}: {cell}: {e}", cells[0]))?;
                check(parsed.to_braced() == body, || format!("{}: {body} prints as {}", cells[0], parsed.to_braced()))?;
                if !truncated {
                    lengths.push(parsed.len());
                }
                entries += 1;
            }
            lengths.dedup();
            check(lengths.len() <= 1, || format!("{}: lengths {lengths:?}", cells[0]))?;
        }
        check(entries == 84, || format!("{entries} table entries"))?;

        let mut curricula = Vec::new();
        for n in 1..=21 {
            let path = comp(n).map_err(|e| format!("{entries} table strings round-trip; {e}"))?;
            let parsed = read_instance(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            curricula.push(parsed.instance.curricula().len());
        }
        check(curricula[0] == 14, || format!("comp01 has {} curricula", curricula[0]))?;
        check(curricula[10] == 13, || format!("comp11 has {} curricula", curricula[10]))?;
        Ok(format!("{entries} table strings round-trip; 21 instances parse; comp01 14, comp11 13 curricula"))
    })();
    verdict(8, "format fidelity", outcome);
}
