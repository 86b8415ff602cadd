//! Seeded benchmark battery: generate instances, solve them exactly and with
//! recursive sparsest cut, evaluate the charging bounds, and emit stable CSV
//! rows for downstream analysis.
//!
//! The recursive algorithm's approximation constant is not pinned anywhere;
//! the report of max and mean `Γ_RSC / OPT` is the artifact.

use num_traits::{One, Zero};

use crate::matrix::SimilarityMatrix;
use crate::objective::{gamma, ObjectiveSpec};
use crate::oracle::{
    brute_force_opt_multi, charging_lower_bound, random_generating_instance, random_matrix,
    rsc_charge_sum, OracleError, DEFAULT_ENUM_LIMIT,
};
use crate::scalar::{Rat, Scalar};
use crate::scaling::SumScaling;
use crate::solver::{rsc, CutStrategy, SolverError};

pub const CSV_HEADER: &str =
    "seed,n,objective_kind,lambda,mu,nu,opt,rsc,ratio,lb_charge,charge2,lemma1_ok,lemma2_ok";

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub seed: u64,
    /// Total instances; the first half are generating instances, the second
    /// half fully random matrices.
    pub instances: usize,
    pub n_min: usize,
    pub n_max: usize,
    /// Coefficient battery; every triple must satisfy the strong condition.
    pub coefficients: Vec<SumScaling<Rat>>,
    pub enum_limit: usize,
    pub cut: CutStrategy,
    /// Worker cap for fanning instances out across threads. Results are
    /// assembled in instance order, so the report is identical at any count.
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            instances: 100,
            n_min: 3,
            n_max: 8,
            coefficients: default_battery(),
            enum_limit: DEFAULT_ENUM_LIMIT,
            cut: CutStrategy::default(),
            threads: 1,
        }
    }
}

/// The coefficient battery used throughout the diagnostics:
/// (1,0,0), (0,1,0), (0,0,1), (1,1,−2).
pub fn default_battery() -> Vec<SumScaling<Rat>> {
    [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -2)]
        .into_iter()
        .map(|(l, m, n)| {
            SumScaling::new(Rat::from_ratio(l, 1), Rat::from_ratio(m, 1), Rat::from_ratio(n, 1))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub n: usize,
    pub lambda: Rat,
    pub mu: Rat,
    pub nu: Rat,
    pub opt: Rat,
    pub rsc: Rat,
    pub ratio: Rat,
    pub lb_charge: Rat,
    pub charge2: Rat,
    pub lemma1_ok: bool,
    pub lemma2_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub max_ratio: Rat,
    pub mean_ratio: Rat,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Eval(#[from] crate::objective::EvalError),
    #[error("bench needs at least one instance and one coefficient triple")]
    EmptyConfig,
    #[error("bench requires 2 <= n_min <= n_max, got [{0}, {1}]")]
    BadSizeRange(usize, usize),
}

/// Run the battery. Rows are emitted instance-major then coefficient-major,
/// so identical configurations produce byte-identical reports.
pub fn run(config: &BenchConfig) -> Result<BenchReport, BenchError> {
    if config.instances == 0 || config.coefficients.is_empty() {
        return Err(BenchError::EmptyConfig);
    }
    if config.n_min < 2 || config.n_min > config.n_max {
        return Err(BenchError::BadSizeRange(config.n_min, config.n_max));
    }
    let batches = parallel_map(
        (0..config.instances).collect(),
        config.threads,
        |index| bench_instance(config, index),
    );
    let mut rows = Vec::with_capacity(config.instances * config.coefficients.len());
    for batch in batches {
        rows.extend(batch?);
    }
    let max_ratio = rows
        .iter()
        .map(|r| r.ratio.clone())
        .max()
        .expect("nonempty rows");
    let sum: Rat = rows.iter().map(|r| r.ratio.clone()).fold(Rat::zero(), |a, b| a + b);
    let mean_ratio = sum / Rat::from_count(rows.len());
    Ok(BenchReport {
        rows,
        max_ratio,
        mean_ratio,
    })
}

fn bench_instance(config: &BenchConfig, index: usize) -> Result<Vec<BenchRow>, BenchError> {
    let specs: Vec<ObjectiveSpec<Rat>> = config
        .coefficients
        .iter()
        .cloned()
        .map(ObjectiveSpec::sum)
        .collect();
    let inst_seed = config.seed.wrapping_add(index as u64);
    let n = config.n_min + (mix(inst_seed) as usize) % (config.n_max - config.n_min + 1);
    let m: SimilarityMatrix<Rat> = if index < config.instances / 2 {
        random_generating_instance(n, inst_seed).0
    } else {
        random_matrix(n, inst_seed)
    };
    let reports = brute_force_opt_multi(&m, &specs, config.enum_limit)?;
    let trace = rsc(&m, &config.cut)?;
    let mut rows = Vec::with_capacity(specs.len());
    for (s, report) in config.coefficients.iter().zip(reports) {
        let spec = ObjectiveSpec::sum(s.clone());
        let rsc_value = gamma(&trace.tree, &m, &spec)?;
        let t_star = &report.minimizers[0];
        let lb = charging_lower_bound(t_star, &m, s)?;
        let charge = rsc_charge_sum(&trace, t_star, &m, s)?;
        let ratio = if report.opt_value.is_zero() {
            debug_assert!(rsc_value.is_zero(), "Γ_RSC must vanish whenever OPT does");
            Rat::one()
        } else {
            rsc_value.clone() / report.opt_value.clone()
        };
        let lemma1_ok = lb <= report.opt_value;
        let lemma2_ok = charge <= Rat::from_ratio(2, 1) * lb.clone();
        rows.push(BenchRow {
            seed: inst_seed,
            n,
            lambda: s.lambda.clone(),
            mu: s.mu.clone(),
            nu: s.nu.clone(),
            opt: report.opt_value,
            rsc: rsc_value,
            ratio,
            lb_charge: lb,
            charge2: charge,
            lemma1_ok,
            lemma2_ok,
        });
    }
    Ok(rows)
}

/// Map `f` over `items` on up to `threads` workers, returning outputs in
/// input order regardless of scheduling (workers take strided slots).
fn parallel_map<I, O, F>(items: Vec<I>, threads: usize, f: F) -> Vec<O>
where
    I: Send,
    O: Send,
    F: Fn(I) -> O + Sync,
{
    let workers = threads.max(1).min(items.len().max(1));
    if workers <= 1 {
        return items.into_iter().map(f).collect();
    }
    let total = items.len();
    let mut slots: Vec<Option<O>> = (0..total).map(|_| None).collect();
    let mut work: Vec<Option<I>> = items.into_iter().map(Some).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        let mut work_chunks: Vec<Vec<(usize, I)>> = (0..workers).map(|_| Vec::new()).collect();
        for (i, item) in work.iter_mut().enumerate() {
            work_chunks[i % workers].push((i, item.take().expect("taken once")));
        }
        for chunk in work_chunks {
            let f = &f;
            handles.push(scope.spawn(move || {
                chunk
                    .into_iter()
                    .map(|(i, item)| (i, f(item)))
                    .collect::<Vec<_>>()
            }));
        }
        for handle in handles {
            for (i, out) in handle.join().expect("bench worker panicked") {
                slots[i] = Some(out);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every slot filled")).collect()
}

/// Render the fixed-schema CSV, with the ratio summary appended as trailing
/// comment lines.
pub fn to_csv(report: &BenchReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},sum,{},{},{},{},{},{},{},{},{},{}\n",
            r.seed,
            r.n,
            r.lambda,
            r.mu,
            r.nu,
            r.opt,
            r.rsc,
            r.ratio,
            r.lb_charge,
            r.charge2,
            r.lemma1_ok,
            r.lemma2_ok
        ));
    }
    out.push_str(&format!(
        "# max_ratio={} ({})\n# mean_ratio={} ({})\n",
        report.max_ratio,
        crate::formats::rational_to_decimal(&report.max_ratio, 6),
        report.mean_ratio,
        crate::formats::rational_to_decimal(&report.mean_ratio, 6),
    ));
    out
}

fn mix(seed: u64) -> u64 {
    // splitmix64 finalizer; decouples the size draw from the instance rng
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
