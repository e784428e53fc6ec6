//! Stock risk scoring and ranking: the direct risk formula, a bootstrapped
//! neural surrogate with percentile confidence intervals, and top-k
//! selection.
//!
//! The direct score of a stock with factors `(NEU, NV, H_α)` is
//!
//! ```text
//!     EU-FE:   λ·H_α − (1−λ)·NEU
//!     EU-FEV:  (λ/2)·(H_α + NV) − (1−λ)·NEU
//! ```
//!
//! The surrogate trains a small MLP on feature rows
//! `(NEU, NV, H_α, α, λ) → score` over bootstrap resamples of the training
//! table; every replicate is an independent task whose seed is the run seed
//! XOR the replicate index, and replicate results are reduced in replicate
//! order, so a fixed seed gives bit-identical rankings.

mod mlp;
mod scg;

pub use mlp::{numerical_gradient, MlpRegressor};
pub use scg::{train_scg, train_scg_with_init, TrainConfig, TrainingCurves};

use rayon::prelude::*;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decision::Measure;
use crate::entropy::FractionalOrder;
use crate::error::{Error, Result};
use crate::market::StockRiskFactors;

/// Salt for the one retry a failed replicate is allowed.
const RETRY_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// Direct risk score per stock from its factors.
pub fn direct_risk_scores(factors: &StockRiskFactors, lambda: f64, measure: Measure) -> Vec<f64> {
    (0..factors.n_stocks())
        .map(|i| direct_score(factors.h_alpha[i], factors.nv[i], factors.neu[i], lambda, measure))
        .collect()
}

fn direct_score(h: f64, nv: f64, neu: f64, lambda: f64, measure: Measure) -> f64 {
    match measure {
        Measure::EuFe => lambda * h - (1.0 - lambda) * neu,
        Measure::EuFev => 0.5 * lambda * (h + nv) - (1.0 - lambda) * neu,
    }
}

/// One training row of the surrogate: five features and the target score.
#[derive(Debug, Clone)]
pub struct FeatureRow {
    pub stock: String,
    /// `(NEU, NV, H_α, α, λ)`
    pub features: [f64; 5],
    pub score: f64,
}

/// Feature/score table (the surrogate's training data).
#[derive(Debug, Clone, Default)]
pub struct FeatureTable {
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    /// CSV export with header `stock,neu,nv,h_alpha,alpha,lambda,score`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["stock", "neu", "nv", "h_alpha", "alpha", "lambda", "score"])
            .expect("in-memory write");
        for row in &self.rows {
            let mut record = vec![row.stock.clone()];
            record.extend(row.features.iter().map(|v| format!("{v:.10}")));
            record.push(format!("{:.10}", row.score));
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Build the surrogate's training table: one row per stock per λ grid
/// point, with the direct score as target.
pub fn build_feature_table(
    factors: &StockRiskFactors,
    alpha: FractionalOrder,
    lambdas: &[f64],
    measure: Measure,
) -> Result<FeatureTable> {
    if lambdas.is_empty() {
        return Err(Error::Argument("need at least one λ grid point".into()));
    }
    if lambdas.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(Error::Domain("λ grid points must lie in [0, 1]".into()));
    }
    let mut rows = Vec::with_capacity(factors.n_stocks() * lambdas.len());
    for &lambda in lambdas {
        for i in 0..factors.n_stocks() {
            rows.push(FeatureRow {
                stock: factors.labels[i].clone(),
                features: [
                    factors.neu[i],
                    factors.nv[i],
                    factors.h_alpha[i],
                    alpha.value(),
                    lambda,
                ],
                score: direct_score(
                    factors.h_alpha[i],
                    factors.nv[i],
                    factors.neu[i],
                    lambda,
                    measure,
                ),
            });
        }
    }
    Ok(FeatureTable { rows })
}

/// Feature vectors of every stock at one `(α, λ)` point (the rows the
/// surrogate is asked to predict).
pub fn eval_features(
    factors: &StockRiskFactors,
    alpha: FractionalOrder,
    lambda: f64,
) -> Vec<(String, [f64; 5])> {
    (0..factors.n_stocks())
        .map(|i| {
            (
                factors.labels[i].clone(),
                [
                    factors.neu[i],
                    factors.nv[i],
                    factors.h_alpha[i],
                    alpha.value(),
                    lambda,
                ],
            )
        })
        .collect()
}

/// Per-stock bootstrap summary: replicate mean and 95% percentile CI.
#[derive(Debug, Clone)]
pub struct StockBootstrap {
    pub stock: String,
    pub mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Debug, Clone)]
pub struct BootstrapResult {
    pub stocks: Vec<StockBootstrap>,
    pub replicates: usize,
}

/// Ranking by ascending score; rank 1 is the lowest-risk stock.
#[derive(Debug, Clone)]
pub struct StockRanking {
    pub entries: Vec<RankEntry>,
}

#[derive(Debug, Clone)]
pub struct RankEntry {
    pub rank: usize,
    pub stock: String,
    pub score: f64,
}

impl StockRanking {
    /// Rank labeled scores ascending, breaking ties lexicographically.
    pub fn from_scores(labels: &[String], scores: &[f64]) -> Result<Self> {
        if labels.len() != scores.len() || labels.is_empty() {
            return Err(Error::Argument(
                "ranking needs equally many labels and scores".into(),
            ));
        }
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| {
            scores[a]
                .total_cmp(&scores[b])
                .then_with(|| labels[a].cmp(&labels[b]))
        });
        Ok(StockRanking {
            entries: order
                .into_iter()
                .enumerate()
                .map(|(k, i)| RankEntry {
                    rank: k + 1,
                    stock: labels[i].clone(),
                    score: scores[i],
                })
                .collect(),
        })
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.stock.clone()).collect()
    }
}

/// First `k` labels of a ranking.
pub fn select_top_k(ranking: &StockRanking, k: usize) -> Result<Vec<String>> {
    if k == 0 || k > ranking.entries.len() {
        return Err(Error::Argument(format!(
            "k must lie in [1, {}], got {k}",
            ranking.entries.len()
        )));
    }
    Ok(ranking.entries[..k].iter().map(|e| e.stock.clone()).collect())
}

/// Bootstrapped surrogate ranking.
///
/// For each of `b` replicates: resample the training rows with
/// replacement, train an MLP on `(features → score)`, and predict every
/// evaluation stock. Stocks are ranked by ascending mean prediction, with
/// 2.5%/97.5% percentile bounds. A replicate whose training diverges is
/// retried once with a derived seed and then aborts the run.
pub fn bootstrap_rank(
    train: &FeatureTable,
    eval: &[(String, [f64; 5])],
    b: usize,
    cfg: &TrainConfig,
) -> Result<(BootstrapResult, StockRanking)> {
    if b < 2 {
        return Err(Error::Argument(format!(
            "bootstrap needs at least 2 replicates, got {b}"
        )));
    }
    if eval.is_empty() {
        return Err(Error::Argument("no stocks to predict".into()));
    }
    cfg.validate()?;
    let features: Vec<Vec<f64>> = train.rows.iter().map(|r| r.features.to_vec()).collect();
    let targets: Vec<f64> = train.rows.iter().map(|r| r.score).collect();
    if features.len() < 10 {
        return Err(Error::Data(format!(
            "training table needs at least 10 rows, got {}",
            features.len()
        )));
    }

    let predictions: Vec<Vec<f64>> = (0..b)
        .into_par_iter()
        .map(|replicate| {
            let seed = cfg.seed ^ replicate as u64;
            match run_replicate(&features, &targets, eval, cfg, seed) {
                Ok(p) => Ok(p),
                // one retry with a derived seed
                Err(_) => run_replicate(&features, &targets, eval, cfg, seed ^ RETRY_SALT)
                    .map_err(|e| Error::ReplicateFailure {
                        replicate,
                        message: e.to_string(),
                    }),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut stocks = Vec::with_capacity(eval.len());
    for (s, (label, _)) in eval.iter().enumerate() {
        let mut values: Vec<f64> = predictions.iter().map(|p| p[s]).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        values.sort_unstable_by(f64::total_cmp);
        // percentile bounds widened (if ever necessary) to contain the mean,
        // preserving the lower ≤ mean ≤ upper contract
        let ci_lo = percentile(&values, 0.025).min(mean);
        let ci_hi = percentile(&values, 0.975).max(mean);
        stocks.push(StockBootstrap {
            stock: label.clone(),
            mean,
            ci_lo,
            ci_hi,
        });
    }
    let labels: Vec<String> = stocks.iter().map(|s| s.stock.clone()).collect();
    let means: Vec<f64> = stocks.iter().map(|s| s.mean).collect();
    let ranking = StockRanking::from_scores(&labels, &means)?;
    Ok((
        BootstrapResult {
            stocks,
            replicates: b,
        },
        ranking,
    ))
}

fn run_replicate(
    features: &[Vec<f64>],
    targets: &[f64],
    eval: &[(String, [f64; 5])],
    cfg: &TrainConfig,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = features.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let k = rng.gen_range(0..n);
        xs.push(features[k].clone());
        ys.push(targets[k]);
    }
    let replicate_cfg = TrainConfig {
        seed,
        ..cfg.clone()
    };
    let (model, curves) = train_scg(&xs, &ys, &replicate_cfg)?;
    if !model.params_finite() || !curves.final_train_mse().is_finite() {
        return Err(Error::Solver("replicate training diverged".into()));
    }
    let mut out = Vec::with_capacity(eval.len());
    for (_, f) in eval {
        let p = model.predict(f)?;
        if !p.is_finite() {
            return Err(Error::Solver("replicate produced a non-finite prediction".into()));
        }
        out.push(p);
    }
    Ok(out)
}

// Linear-interpolation percentile on a sorted slice.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// CSV export of a bootstrap ranking
/// (`rank,stock,mean_risk,ci_lo,ci_hi`, one row per stock in rank order).
pub fn ranking_csv(result: &BootstrapResult, ranking: &StockRanking) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "stock", "mean_risk", "ci_lo", "ci_hi"])
        .expect("in-memory write");
    for entry in &ranking.entries {
        let s = result
            .stocks
            .iter()
            .find(|s| s.stock == entry.stock)
            .expect("ranking stocks come from the bootstrap result");
        w.write_record([
            entry.rank.to_string(),
            entry.stock.clone(),
            format!("{:.6}", s.mean),
            format!("{:.6}", s.ci_lo),
            format!("{:.6}", s.ci_hi),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Spearman rank correlation between two score vectors (average ranks for
/// ties).
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::Argument(
            "spearman needs two equally long vectors of length ≥ 2".into(),
        ));
    }
    let ra = average_ranks(a);
    let rb = average_ranks(b);
    let n = a.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - mean) * (y - mean);
        var_a += (x - mean) * (x - mean);
        var_b += (y - mean) * (y - mean);
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(Error::Degenerate("constant vector has no rank ordering".into()));
    }
    Ok(cov / (var_a.sqrt() * var_b.sqrt()))
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut k = 0;
    while k < order.len() {
        let mut j = k;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[k]] {
            j += 1;
        }
        let avg = (k + j + 2) as f64 / 2.0; // 1-based average rank
        for &idx in &order[k..=j] {
            ranks[idx] = avg;
        }
        k = j + 1;
    }
    ranks
}
