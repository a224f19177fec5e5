//! Batch experiments: spec files, run records, aggregation and reports.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use mmfctt_core::anneal::{self, derive_seed, AnnealConfig};
use mmfctt_core::fairness::{average_allocation, rho_min, Rank, SortedAllocation};
use mmfctt_core::model::validate_hard;
use mmfctt_core::room::RoomSolver;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::itc::{read_instance, write_solution};
use crate::stats::{wilcoxon_one_sided, WilcoxonResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const RECORDS_FILE: &str = "records.jsonl";
pub const SIGNIFICANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Glbop,
    Lsap,
}

impl Variant {
    pub fn solver(self) -> RoomSolver {
        match self {
            Variant::Glbop => RoomSolver::Glbop,
            Variant::Lsap => RoomSolver::Lsap,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Glbop => "glbop",
            Variant::Lsap => "lsap",
        })
    }
}

impl FromStr for Variant {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "glbop" => Ok(Variant::Glbop),
            "lsap" => Ok(Variant::Lsap),
            _ => bail!("unknown variant {s:?} (expected glbop or lsap)"),
        }
    }
}

fn default_variants() -> Vec<Variant> {
    vec![Variant::Glbop, Variant::Lsap]
}

fn default_runs() -> u64 {
    50
}

fn default_iterations() -> u64 {
    1_000_000
}

fn default_tmax() -> f64 {
    5.0
}

fn default_tmin() -> f64 {
    0.01
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

/// Key-value experiment description, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub instances: Vec<PathBuf>,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    #[serde(default = "default_runs")]
    pub runs: u64,
    #[serde(default = "default_iterations")]
    pub iterations: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tmax")]
    pub tmax: f64,
    #[serde(default = "default_tmin")]
    pub tmin: f64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

impl ExperimentSpec {
    /// Reads a spec; relative paths are taken relative to the spec file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut spec: ExperimentSpec = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in spec.instances.iter_mut().chain(std::iter::once(&mut spec.output)) {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.instances.is_empty() {
            bail!("spec lists no instances");
        }
        if self.variants.is_empty() {
            bail!("spec lists no variants");
        }
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        self.config(Variant::Glbop, 0).validate()?;
        Ok(())
    }

    /// Divides runs and iterations by `scale`, keeping at least one of each.
    pub fn scaled(&self, scale: u64) -> Self {
        let scale = scale.max(1);
        Self { runs: (self.runs / scale).max(1), iterations: (self.iterations / scale).max(1), ..self.clone() }
    }

    pub fn config(&self, variant: Variant, seed: u64) -> AnnealConfig {
        AnnealConfig {
            t_max: self.tmax,
            t_min: self.tmin,
            iterations: self.iterations,
            variant: variant.solver(),
            seed,
        }
    }
}

/// One finished run, stored as a JSON line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: u32,
    pub instance: String,
    pub variant: Variant,
    pub run: u64,
    pub seed: u64,
    /// Sorted allocation as a comma-separated list.
    pub allocation: String,
    /// Decimal rank of the allocation.
    pub rank: String,
    pub iterations: u64,
    pub wall_ms: u64,
}

impl RunRecord {
    pub fn new(
        instance: &str,
        variant: Variant,
        run: u64,
        seed: u64,
        best: &SortedAllocation,
        iterations: u64,
        wall_ms: u64,
    ) -> Self {
        let allocation = best.values().iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        Self {
            schema: SCHEMA_VERSION,
            instance: instance.to_string(),
            variant,
            run,
            seed,
            allocation,
            rank: rho_min(&best.clone().into()).to_string(),
            iterations,
            wall_ms,
        }
    }

    pub fn sorted_allocation(&self) -> Result<SortedAllocation> {
        let values = if self.allocation.is_empty() {
            Vec::new()
        } else {
            self.allocation
                .split(',')
                .map(|v| v.trim().parse::<u32>().with_context(|| format!("bad allocation entry {v:?}")))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(SortedAllocation::new(values)?)
    }

    pub fn parsed_rank(&self) -> Result<Rank> {
        self.rank.parse().with_context(|| format!("bad rank {:?}", self.rank))
    }
}

/// Reads every record of a results directory, oldest first.
pub fn read_records(dir: &Path) -> Result<Vec<RunRecord>> {
    let path = dir.join(RECORDS_FILE);
    let file = match File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e).with_context(|| format!("opening {}", path.display())),
    };
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RunRecord = serde_json::from_str(&line).with_context(|| format!("{}:{}", path.display(), idx + 1))?;
        if rec.schema != SCHEMA_VERSION {
            bail!("{}:{}: unsupported schema {}", path.display(), idx + 1, rec.schema);
        }
        out.push(rec);
    }
    Ok(out)
}

/// Instance id used in records: the file stem.
pub fn instance_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BenchSummary {
    pub completed: usize,
    pub skipped: usize,
}

/// Runs every (instance, variant, run) of `spec` not yet recorded in its
/// output directory. Solutions go to `solutions/` next to the records.
pub fn bench(spec: &ExperimentSpec) -> Result<BenchSummary> {
    spec.validate()?;
    let solutions = spec.output.join("solutions");
    fs::create_dir_all(&solutions).with_context(|| format!("creating {}", solutions.display()))?;
    let done: HashSet<(String, Variant, u64, u64)> =
        read_records(&spec.output)?.into_iter().map(|r| (r.instance, r.variant, r.run, r.iterations)).collect();

    let mut instances = Vec::new();
    for path in &spec.instances {
        let parsed = read_instance(path).with_context(|| format!("reading {}", path.display()))?;
        for w in &parsed.warnings {
            log::warn!("{}: {w}", path.display());
        }
        instances.push((instance_id(path), parsed.instance));
    }

    let mut jobs = Vec::new();
    let mut skipped = 0;
    for (k, (id, _)) in instances.iter().enumerate() {
        for &variant in &spec.variants {
            for run in 0..spec.runs {
                if done.contains(&(id.clone(), variant, run, spec.iterations)) {
                    skipped += 1;
                } else {
                    jobs.push((k, variant, run));
                }
            }
        }
    }

    let path = spec.output.join(RECORDS_FILE);
    let sink = Mutex::new(
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .with_context(|| format!("opening {}", path.display()))?,
    );
    jobs.par_iter().try_for_each(|&(k, variant, run)| -> Result<()> {
        let (id, instance) = &instances[k];
        let seed = derive_seed(spec.seed, k as u64, variant.solver(), run);
        let start = Instant::now();
        let result =
            anneal::run(instance, &spec.config(variant, seed)).with_context(|| format!("{id} {variant} run {run}"))?;
        let wall_ms = start.elapsed().as_millis() as u64;
        let violations = validate_hard(instance, &result.best_timetable);
        if !violations.is_empty() {
            bail!("{id} {variant} run {run}: reported timetable is infeasible: {}", violations[0].describe(instance));
        }
        let sol = solutions.join(format!("{id}.{variant}.{run}.sol"));
        fs::write(&sol, write_solution(instance, &result.best_timetable))
            .with_context(|| format!("writing {}", sol.display()))?;
        let record = RunRecord::new(id, variant, run, seed, &result.best_allocation, result.iterations_run, wall_ms);
        let line = serde_json::to_string(&record)?;
        let mut f = sink.lock().expect("record sink poisoned");
        writeln!(f, "{line}")?;
        f.flush()?;
        log::info!("{id} {variant} run {run}: {} ({wall_ms} ms)", result.best_allocation);
        Ok(())
    })?;
    Ok(BenchSummary { completed: jobs.len(), skipped })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aggregate {
    pub best: SortedAllocation,
    pub average: SortedAllocation,
    pub ranks: Vec<Rank>,
}

/// Best and rank-averaged allocation of the records of one instance and
/// variant.
pub fn aggregate(records: &[RunRecord]) -> Result<Aggregate> {
    if records.is_empty() {
        bail!("no records to aggregate");
    }
    let allocations = records.iter().map(RunRecord::sorted_allocation).collect::<Result<Vec<_>>>()?;
    let n = allocations[0].len();
    let average = average_allocation(&allocations, n)?;
    let best = allocations.iter().min().expect("non-empty").clone();
    let ranks = allocations.iter().map(|a| rho_min(&a.clone().into())).collect();
    Ok(Aggregate { best, average, ranks })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantSummary {
    pub variant: Variant,
    pub runs: usize,
    pub best: String,
    pub average: String,
    pub mean_rank: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub instance: String,
    pub variants: Vec<VariantSummary>,
    /// H1: glbop ranks are smaller than lsap ranks.
    pub glbop_better: Option<WilcoxonResult>,
    /// H1: lsap ranks are smaller than glbop ranks.
    pub lsap_better: Option<WilcoxonResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub alpha: f64,
    pub instances: Vec<InstanceSummary>,
}

/// Summarizes a results directory. Reads only.
pub fn report(dir: &Path) -> Result<Report> {
    let records = read_records(dir)?;
    if records.is_empty() {
        bail!("no records in {}", dir.display());
    }
    let mut groups: BTreeMap<&str, BTreeMap<Variant, Vec<RunRecord>>> = BTreeMap::new();
    for r in &records {
        groups.entry(r.instance.as_str()).or_default().entry(r.variant).or_default().push(r.clone());
    }
    let mut instances = Vec::new();
    for (instance, by_variant) in groups {
        let mut variants = Vec::new();
        let mut ranks = BTreeMap::new();
        for (variant, mut recs) in by_variant {
            recs.sort_by_key(|r| r.run);
            let agg = aggregate(&recs)?;
            let total: num_bigint::BigUint = agg.ranks.iter().map(|r| r.value().clone()).sum();
            variants.push(VariantSummary {
                variant,
                runs: recs.len(),
                best: agg.best.to_braced(),
                average: agg.average.to_braced(),
                mean_rank: format!("{:.6e}", total_to_f64(&total) / recs.len() as f64),
            });
            ranks.insert(variant, agg.ranks);
        }
        let test = |a: Variant, b: Variant| match (ranks.get(&a), ranks.get(&b)) {
            (Some(x), Some(y)) => wilcoxon_one_sided(x, y, SIGNIFICANCE).ok(),
            _ => None,
        };
        instances.push(InstanceSummary {
            instance: instance.to_string(),
            variants,
            glbop_better: test(Variant::Glbop, Variant::Lsap),
            lsap_better: test(Variant::Lsap, Variant::Glbop),
        });
    }
    Ok(Report { alpha: SIGNIFICANCE, instances })
}

fn total_to_f64(x: &num_bigint::BigUint) -> f64 {
    Rank::from(x.clone()).to_f64()
}

/// Plain-text table, one line per instance and variant.
pub fn render_report(r: &Report) -> String {
    let mut rows = vec![["instance", "variant", "runs", "best", "average"].map(String::from).to_vec()];
    for inst in &r.instances {
        for v in &inst.variants {
            rows.push(vec![
                inst.instance.clone(),
                v.variant.to_string(),
                v.runs.to_string(),
                v.best.clone(),
                v.average.clone(),
            ]);
        }
    }
    let widths: Vec<usize> = (0..5).map(|c| rows.iter().map(|row| row[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, &w)| format!("{cell:<w$}")).collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).expect("writing to a String");
    }
    let tests: Vec<&InstanceSummary> = r.instances.iter().filter(|i| i.glbop_better.is_some()).collect();
    if !tests.is_empty() {
        writeln!(out, "\none-sided Wilcoxon rank-sum, alpha = {}", r.alpha).expect("writing to a String");
        for inst in tests {
            let (g, l) = (inst.glbop_better.expect("filtered"), inst.lsap_better.expect("both or neither"));
            let mark = |w: WilcoxonResult| if w.significant { " *" } else { "" };
            writeln!(
                out,
                "{}: glbop < lsap p = {:.4}{}, lsap < glbop p = {:.4}{}",
                inst.instance,
                g.p_value,
                mark(g),
                l.p_value,
                mark(l)
            )
            .expect("writing to a String");
        }
    }
    out
}
