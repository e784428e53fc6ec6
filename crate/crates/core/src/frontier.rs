//! Long-only mean-variance efficient frontiers.
//!
//! Portfolios minimize `wᵀΣw` subject to `μᵀw = target`, `Σw = 1`,
//! `w ≥ 0`. The solver is an active-set iteration on the KKT system: solve
//! the equality-constrained problem on the current free set by a dense
//! linear solve, clamp negative weights to zero, and release a clamped
//! asset whenever its reduced gradient is negative; termination requires a
//! non-negative free solution and non-negative reduced gradients on the
//! clamped set. Singular KKT systems get one ridge (1e-10 on the Σ
//! diagonal) before reporting a solver error. The frontier sweeps target
//! returns from the global-minimum-variance return to the highest asset
//! mean, so only the efficient upper branch is emitted.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::market::ReturnPanel;

const RIDGE: f64 = 1e-10;
const CLAMP_TOL: f64 = 1e-10;
const RELEASE_TOL: f64 = 1e-9;

/// Mean vector and covariance matrix of a set of assets.
#[derive(Debug, Clone)]
pub struct AssetMoments {
    labels: Vec<String>,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl AssetMoments {
    /// Validates symmetry (1e-12) and positive semi-definiteness
    /// (eigenvalues ≥ −1e-10).
    pub fn new(labels: Vec<String>, mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || mean.len() != n || cov.nrows() != n || cov.ncols() != n {
            return Err(Error::Validation(
                "moment dimensions must agree with the label count".into(),
            ));
        }
        if mean.iter().any(|m| !m.is_finite()) || cov.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validation("moments must be finite".into()));
        }
        let scale = cov.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in (i + 1)..n {
                if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::Validation(format!(
                        "covariance is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let eigen = cov.clone().symmetric_eigen();
        if eigen.eigenvalues.iter().any(|&e| e < -1e-10 * scale.max(1.0)) {
            return Err(Error::Validation(
                "covariance has a significantly negative eigenvalue".into(),
            ));
        }
        Ok(AssetMoments {
            labels,
            mean: DVector::from_vec(mean),
            cov,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mean(&self) -> &[f64] {
        self.mean.as_slice()
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn n_assets(&self) -> usize {
        self.labels.len()
    }

    pub fn min_mean(&self) -> f64 {
        self.mean.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max_mean(&self) -> f64 {
        self.mean.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }
}

/// Sample means and covariance (divisor N) of a return panel, symmetrized
/// as `(A + Aᵀ)/2`.
pub fn estimate_moments(panel: &ReturnPanel) -> Result<AssetMoments> {
    let n = panel.n_stocks();
    let obs = panel.n_obs();
    if obs < 2 {
        return Err(Error::Data(format!(
            "need at least 2 observations to estimate moments, got {obs}"
        )));
    }
    let means: Vec<f64> = (0..n)
        .map(|s| panel.returns(s).iter().sum::<f64>() / obs as f64)
        .collect();
    let mut cov = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            let (ri, rj) = (panel.returns(i), panel.returns(j));
            for k in 0..obs {
                acc += (ri[k] - means[i]) * (rj[k] - means[j]);
            }
            let v = acc / obs as f64;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    let sym = (&cov + cov.transpose()) * 0.5;
    AssetMoments::new(panel.labels().to_vec(), means, sym)
}

/// A long-only weight vector summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioWeights(Vec<f64>);

impl PortfolioWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Validation("weights must be non-empty".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        if weights.iter().any(|&w| !w.is_finite() || w < -CLAMP_TOL) {
            return Err(Error::Validation(
                "weights must be finite and non-negative".into(),
            ));
        }
        Ok(PortfolioWeights(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

// Equality-constrained subproblem on the free set. Returns free weights
// and the constraint multipliers (return multiplier first when present).
fn solve_free(
    m: &AssetMoments,
    free: &[usize],
    target: Option<f64>,
) -> Result<(Vec<f64>, f64, f64)> {
    let f = free.len();
    // redundant return constraint: all free means equal the target
    if let Some(t) = target {
        let mu0 = m.mean[free[0]];
        if free.iter().all(|&i| (m.mean[i] - mu0).abs() <= 1e-12 * (1.0 + mu0.abs())) {
            if (mu0 - t).abs() > 1e-9 * (1.0 + t.abs()) {
                return Err(Error::Solver(
                    "free set cannot reach the target return".into(),
                ));
            }
            let (w, _, nu_b) = solve_free(m, free, None)?;
            return Ok((w, 0.0, nu_b));
        }
    }
    let n_c = if target.is_some() { 2 } else { 1 };
    let dim = f + n_c;
    let build = |ridge: f64| -> DMatrix<f64> {
        let mut kkt = DMatrix::zeros(dim, dim);
        for (a, &i) in free.iter().enumerate() {
            for (b, &j) in free.iter().enumerate() {
                kkt[(a, b)] = 2.0 * m.cov[(i, j)];
            }
            kkt[(a, a)] += ridge;
            if target.is_some() {
                kkt[(a, f)] = m.mean[i];
                kkt[(f, a)] = m.mean[i];
                kkt[(a, f + 1)] = 1.0;
                kkt[(f + 1, a)] = 1.0;
            } else {
                kkt[(a, f)] = 1.0;
                kkt[(f, a)] = 1.0;
            }
        }
        kkt
    };
    let mut rhs = DVector::zeros(dim);
    if let Some(t) = target {
        rhs[f] = t;
        rhs[f + 1] = 1.0;
    } else {
        rhs[f] = 1.0;
    }
    let solution = build(0.0)
        .lu()
        .solve(&rhs)
        .or_else(|| build(RIDGE).lu().solve(&rhs))
        .ok_or_else(|| Error::Solver("KKT system is singular even after ridge regularization".into()))?;
    let w = solution.as_slice()[..f].to_vec();
    // the assembled system solves 2Σw + Aᵀν = 0; flip ν so that the
    // stationarity convention downstream is 2Σw = Aᵀν
    let (nu_ret, nu_budget) = if target.is_some() {
        (-solution[f], -solution[f + 1])
    } else {
        (0.0, -solution[f])
    };
    Ok((w, nu_ret, nu_budget))
}

fn portfolio_variance(m: &AssetMoments, w: &[f64]) -> f64 {
    let wv = DVector::from_column_slice(w);
    (wv.transpose() * &m.cov * &wv)[(0, 0)]
}

// All weight on the highest-mean assets; splits ties by minimum variance.
fn endpoint_portfolio(m: &AssetMoments) -> Result<(PortfolioWeights, f64)> {
    let rmax = m.max_mean();
    let tied: Vec<usize> = (0..m.n_assets())
        .filter(|&i| (m.mean[i] - rmax).abs() <= 1e-12 * (1.0 + rmax.abs()))
        .collect();
    let mut w = vec![0.0; m.n_assets()];
    if tied.len() == 1 {
        w[tied[0]] = 1.0;
    } else {
        let sub = active_set(m, None, Some(&tied))?;
        for (val, &i) in sub.iter().zip(&tied) {
            w[i] = *val;
        }
    }
    let var = portfolio_variance(m, &w);
    Ok((PortfolioWeights::new(w)?, var))
}

// Active-set loop over an optional starting universe restriction.
fn active_set(m: &AssetMoments, target: Option<f64>, universe: Option<&[usize]>) -> Result<Vec<f64>> {
    let candidates: Vec<usize> = match universe {
        Some(u) => u.to_vec(),
        None => (0..m.n_assets()).collect(),
    };
    let mut clamped: Vec<bool> = vec![false; candidates.len()];
    let max_iters = 50 + 10 * candidates.len();

    for _ in 0..max_iters {
        let free: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|(k, _)| !clamped[*k])
            .map(|(_, &i)| i)
            .collect();
        if free.is_empty() {
            return Err(Error::Solver("all assets were clamped to zero".into()));
        }
        let (w_free, nu_ret, nu_budget) = solve_free(m, &free, target)?;

        // clamp every strictly negative weight
        let mut any_negative = false;
        for (&wf, &i) in w_free.iter().zip(&free) {
            if wf < -CLAMP_TOL {
                let k = candidates.iter().position(|&c| c == i).unwrap();
                clamped[k] = true;
                any_negative = true;
            }
        }
        if any_negative {
            continue;
        }

        // assemble the full vector and check the clamped reduced gradients
        let mut w = vec![0.0; m.n_assets()];
        for (&wf, &i) in w_free.iter().zip(&free) {
            w[i] = wf.max(0.0);
        }
        let grad = {
            let wv = DVector::from_column_slice(&w);
            &m.cov * wv * 2.0
        };
        let mut worst: Option<(usize, f64)> = None;
        for (k, &i) in candidates.iter().enumerate() {
            if !clamped[k] {
                continue;
            }
            let reduced = grad[i] - nu_ret * m.mean[i] - nu_budget;
            if reduced < -RELEASE_TOL && worst.map_or(true, |(_, g)| reduced < g) {
                worst = Some((k, reduced));
            }
        }
        match worst {
            Some((k, _)) => clamped[k] = false,
            None => {
                let out: Vec<f64> = candidates.iter().map(|&i| w[i]).collect();
                return Ok(match universe {
                    Some(_) => out,
                    None => w,
                });
            }
        }
    }
    Err(Error::Solver(
        "active-set iteration did not converge".into(),
    ))
}

/// Minimum-variance long-only portfolio achieving an exact target return.
pub fn min_variance_portfolio(
    m: &AssetMoments,
    target: f64,
) -> Result<(PortfolioWeights, f64)> {
    let (lo, hi) = (m.min_mean(), m.max_mean());
    let slack = 1e-12 * (1.0 + hi.abs().max(lo.abs()));
    if !(target >= lo - slack && target <= hi + slack) {
        return Err(Error::Infeasible {
            target,
            lo,
            hi,
        });
    }
    if (target - hi).abs() <= slack {
        // the two equality constraints pin the portfolio; no KKT solve
        return endpoint_portfolio(m);
    }
    let w = active_set(m, Some(target), None)?;
    let var = portfolio_variance(m, &w);
    Ok((PortfolioWeights::new(w)?, var))
}

/// Long-only portfolio with the smallest variance overall.
pub fn global_min_variance(m: &AssetMoments) -> Result<(PortfolioWeights, f64)> {
    let w = active_set(m, None, None)?;
    let var = portfolio_variance(m, &w);
    Ok((PortfolioWeights::new(w)?, var))
}

/// One efficient-frontier point.
#[derive(Debug, Clone)]
pub struct FrontierPoint {
    pub target_return: f64,
    pub variance: f64,
    pub weights: PortfolioWeights,
}

/// Efficient frontier: strictly increasing target returns with their
/// minimum variances and weight vectors.
#[derive(Debug, Clone)]
pub struct Frontier {
    labels: Vec<String>,
    points: Vec<FrontierPoint>,
}

impl Frontier {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn points(&self) -> &[FrontierPoint] {
        &self.points
    }

    pub fn min_target(&self) -> f64 {
        self.points.first().map(|p| p.target_return).unwrap_or(f64::NAN)
    }

    pub fn max_target(&self) -> f64 {
        self.points.last().map(|p| p.target_return).unwrap_or(f64::NAN)
    }

    /// Linear interpolation of frontier variance at a target return.
    pub fn variance_at(&self, target: f64) -> Result<f64> {
        let pts = &self.points;
        let slack = 1e-9 * (1.0 + target.abs());
        if pts.is_empty() || target < self.min_target() - slack || target > self.max_target() + slack
        {
            return Err(Error::Range(format!(
                "target {target} outside the frontier range [{}, {}]",
                self.min_target(),
                self.max_target()
            )));
        }
        if pts.len() == 1 {
            return Ok(pts[0].variance);
        }
        let clamped = target.clamp(self.min_target(), self.max_target());
        let hi = pts
            .iter()
            .position(|p| p.target_return >= clamped)
            .unwrap_or(pts.len() - 1);
        if hi == 0 {
            return Ok(pts[0].variance);
        }
        let (a, b) = (&pts[hi - 1], &pts[hi]);
        let span = b.target_return - a.target_return;
        if span <= 0.0 {
            return Ok(a.variance);
        }
        let t = (clamped - a.target_return) / span;
        Ok(a.variance + t * (b.variance - a.variance))
    }

    /// CSV export: `target_return,variance,stddev,w_STOCK1,...`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "target_return".to_string(),
            "variance".to_string(),
            "stddev".to_string(),
        ];
        header.extend(self.labels.iter().map(|l| format!("w_{l}")));
        w.write_record(&header).expect("in-memory write");
        for p in &self.points {
            let mut row = vec![
                format!("{:.10}", p.target_return),
                format!("{:.12}", p.variance),
                format!("{:.12}", p.variance.max(0.0).sqrt()),
            ];
            row.extend(p.weights.as_slice().iter().map(|x| format!("{x:.10}")));
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Sweep the efficient upper branch with `n_points` equally spaced targets
/// from the global-minimum-variance return to the highest asset mean.
/// Degenerate universes (all means equal) collapse to a single point.
pub fn efficient_frontier(m: &AssetMoments, n_points: usize) -> Result<Frontier> {
    if n_points < 2 {
        return Err(Error::Argument(format!(
            "frontier needs at least 2 points, got {n_points}"
        )));
    }
    let (w0, var0) = global_min_variance(m)?;
    let r0: f64 = w0
        .as_slice()
        .iter()
        .zip(m.mean())
        .map(|(w, mu)| w * mu)
        .sum();
    let rmax = m.max_mean();
    if rmax - r0 <= 1e-14 * (1.0 + rmax.abs()) {
        return Ok(Frontier {
            labels: m.labels().to_vec(),
            points: vec![FrontierPoint {
                target_return: r0,
                variance: var0,
                weights: w0,
            }],
        });
    }
    let targets: Vec<f64> = (0..n_points)
        .map(|k| r0 + (rmax - r0) * k as f64 / (n_points - 1) as f64)
        .collect();
    let points = targets
        .par_iter()
        .map(|&t| {
            let (weights, variance) = min_variance_portfolio(m, t)?;
            Ok(FrontierPoint {
                target_return: t,
                variance,
                weights,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Frontier {
        labels: m.labels().to_vec(),
        points,
    })
}

/// One row of a frontier comparison at a shared target return.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub target_return: f64,
    pub var_universe: f64,
    pub var_subset: f64,
    pub gap: f64,
    pub rel_gap: f64,
}

/// Comparison of a subset frontier against the full universe.
#[derive(Debug, Clone)]
pub struct FrontierComparison {
    pub rows: Vec<CompareRow>,
    /// Smallest target beyond which the relative gap stays below the
    /// threshold.
    pub crossover: Option<f64>,
    pub threshold: f64,
    pub universe_max_target: f64,
    pub subset_max_target: f64,
}

/// Compare frontiers on the universe grid over the overlapping target
/// range (subset variance linearly interpolated).
pub fn compare_frontiers(
    universe: &Frontier,
    subset: &Frontier,
    threshold: f64,
) -> Result<FrontierComparison> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::Argument("threshold must be positive".into()));
    }
    let lo = universe.min_target().max(subset.min_target());
    let hi = universe.max_target().min(subset.max_target());
    if !(lo <= hi) {
        return Err(Error::Range(format!(
            "frontiers do not overlap: universe [{}, {}], subset [{}, {}]",
            universe.min_target(),
            universe.max_target(),
            subset.min_target(),
            subset.max_target()
        )));
    }
    let slack = 1e-12 * (1.0 + hi.abs());
    let mut rows = Vec::new();
    for p in universe.points() {
        if p.target_return < lo - slack || p.target_return > hi + slack {
            continue;
        }
        let var_subset = subset.variance_at(p.target_return)?;
        let gap = var_subset - p.variance;
        let rel_gap = if p.variance > 0.0 {
            gap / p.variance
        } else if gap.abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        rows.push(CompareRow {
            target_return: p.target_return,
            var_universe: p.variance,
            var_subset,
            gap,
            rel_gap,
        });
    }
    if rows.is_empty() {
        return Err(Error::Range(
            "no universe grid points fall in the overlapping range".into(),
        ));
    }
    // scan from the right for the first violation
    let mut crossover = None;
    for row in rows.iter().rev() {
        if row.rel_gap <= threshold {
            crossover = Some(row.target_return);
        } else {
            break;
        }
    }
    Ok(FrontierComparison {
        rows,
        crossover,
        threshold,
        universe_max_target: universe.max_target(),
        subset_max_target: subset.max_target(),
    })
}

impl FrontierComparison {
    /// CSV export: `target_return,var_universe,var_subset,gap,rel_gap`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["target_return", "var_universe", "var_subset", "gap", "rel_gap"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                format!("{:.10}", r.target_return),
                format!("{:.12}", r.var_universe),
                format!("{:.12}", r.var_subset),
                format!("{:.12}", r.gap),
                format!("{:.8}", r.rel_gap),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// KKT diagnostics for a candidate solution: equality residuals and the
/// smallest reduced gradient over the clamped set (with multipliers chosen
/// as favorably as the free-set stationarity allows).
#[derive(Debug, Clone, Copy)]
pub struct KktReport {
    pub return_residual: f64,
    pub budget_residual: f64,
    pub min_reduced_gradient: f64,
}

pub fn verify_kkt(m: &AssetMoments, target: Option<f64>, weights: &PortfolioWeights) -> KktReport {
    let w = weights.as_slice();
    let n = m.n_assets();
    let wv = DVector::from_column_slice(w);
    let grad = &m.cov * &wv * 2.0;
    let budget_residual = (w.iter().sum::<f64>() - 1.0).abs();
    let achieved: f64 = w.iter().zip(m.mean()).map(|(wi, mu)| wi * mu).sum();
    let return_residual = target.map(|t| (achieved - t).abs()).unwrap_or(0.0);

    let free: Vec<usize> = (0..n).filter(|&i| w[i] > CLAMP_TOL).collect();
    let clamped: Vec<usize> = (0..n).filter(|&i| w[i] <= CLAMP_TOL).collect();
    if clamped.is_empty() {
        return KktReport {
            return_residual,
            budget_residual,
            min_reduced_gradient: 0.0,
        };
    }

    let min_reduced = |nu_ret: f64, nu_budget: f64| -> f64 {
        clamped
            .iter()
            .map(|&i| grad[i] - nu_ret * m.mean[i] - nu_budget)
            .fold(f64::INFINITY, f64::min)
    };

    let candidates: Vec<(f64, f64)> = if target.is_none() {
        // single multiplier from any free stationarity row
        let nu = free.iter().map(|&i| grad[i]).sum::<f64>() / free.len().max(1) as f64;
        vec![(0.0, nu)]
    } else if free.len() >= 2 {
        // least-squares multipliers from the free stationarity rows
        let rows = free.len();
        let mut a = DMatrix::zeros(rows, 2);
        let mut b = DVector::zeros(rows);
        for (r, &i) in free.iter().enumerate() {
            a[(r, 0)] = m.mean[i];
            a[(r, 1)] = 1.0;
            b[r] = grad[i];
        }
        match a.svd(true, true).solve(&b, 1e-12) {
            Ok(nu) => vec![(nu[0], nu[1])],
            Err(_) => vec![(0.0, 0.0)],
        }
    } else if free.len() == 1 {
        // one stationarity row, two multipliers: pick the ν on that line
        // maximizing the smallest clamped reduced gradient
        let fi = free[0];
        let line = |nu_ret: f64| (nu_ret, grad[fi] - nu_ret * m.mean[fi]);
        let mut cands = vec![line(0.0)];
        for &c in &clamped {
            let denom = m.mean[fi] - m.mean[c];
            if denom.abs() > 1e-14 {
                // ν_ret making asset c's reduced gradient exactly zero
                cands.push(line((grad[fi] - grad[c]) / denom));
            }
        }
        cands
    } else {
        vec![(0.0, 0.0)]
    };

    let best = candidates
        .into_iter()
        .map(|(nr, nb)| min_reduced(nr, nb))
        .fold(f64::NEG_INFINITY, f64::max);
    KktReport {
        return_residual,
        budget_residual,
        min_reduced_gradient: best,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn moments(mean: Vec<f64>, cov: Vec<f64>) -> AssetMoments {
        let n = mean.len();
        let labels = (0..n).map(|i| format!("A{i}")).collect();
        AssetMoments::new(labels, mean, DMatrix::from_row_slice(n, n, &cov)).unwrap()
    }

    #[test]
    fn two_asset_fully_determined() {
        let m = moments(vec![0.1, 0.2], vec![0.04, 0.0, 0.0, 0.09]);
        let (w, var) = min_variance_portfolio(&m, 0.15).unwrap();
        assert_abs_diff_eq!(w.as_slice()[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(w.as_slice()[1], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(var, 0.0325, epsilon = 1e-12);
    }

    #[test]
    fn single_asset_portfolio() {
        let m = moments(vec![0.07], vec![0.02]);
        let (w, var) = min_variance_portfolio(&m, 0.07).unwrap();
        assert_eq!(w.as_slice(), &[1.0]);
        assert_abs_diff_eq!(var, 0.02, epsilon = 1e-15);
    }

    #[test]
    fn infeasible_target_is_rejected() {
        let m = moments(vec![0.1, 0.2], vec![0.04, 0.0, 0.0, 0.09]);
        assert!(matches!(
            min_variance_portfolio(&m, 0.3),
            Err(Error::Infeasible { .. })
        ));
        assert!(min_variance_portfolio(&m, 0.05).is_err());
    }

    #[test]
    fn long_only_constraint_binds() {
        // unconstrained optimum would short asset 2 at high targets
        let m = moments(
            vec![0.02, 0.05, 0.12],
            vec![0.05, 0.01, 0.0, 0.01, 0.06, 0.01, 0.0, 0.01, 0.09],
        );
        let (w, _) = min_variance_portfolio(&m, 0.115).unwrap();
        for &wi in w.as_slice() {
            assert!(wi >= -CLAMP_TOL);
        }
        let report = verify_kkt(&m, Some(0.115), &w);
        assert!(report.return_residual < 1e-9);
        assert!(report.budget_residual < 1e-9);
        assert!(report.min_reduced_gradient > -1e-8);
    }

    #[test]
    fn endpoint_target_concentrates_on_best_asset() {
        let m = moments(
            vec![0.02, 0.05, 0.12],
            vec![0.05, 0.01, 0.0, 0.01, 0.06, 0.01, 0.0, 0.01, 0.09],
        );
        let (w, var) = min_variance_portfolio(&m, 0.12).unwrap();
        assert_abs_diff_eq!(w.as_slice()[2], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(var, 0.09, epsilon = 1e-12);
    }

    #[test]
    fn frontier_sweep_shape() {
        let m = moments(
            vec![0.02, 0.05, 0.12],
            vec![0.05, 0.01, 0.0, 0.01, 0.06, 0.01, 0.0, 0.01, 0.09],
        );
        let frontier = efficient_frontier(&m, 7).unwrap();
        assert_eq!(frontier.points().len(), 7);
        for pair in frontier.points().windows(2) {
            assert!(pair[1].target_return > pair[0].target_return);
            assert!(pair[1].variance >= pair[0].variance - 1e-12);
        }
        assert_abs_diff_eq!(frontier.max_target(), 0.12, epsilon = 1e-12);

        let two = efficient_frontier(&m, 2).unwrap();
        assert_eq!(two.points().len(), 2);
    }

    #[test]
    fn identical_assets_collapse_to_one_flat_point() {
        // same series twice: any mix has the same variance
        let m = moments(vec![0.05, 0.05], vec![0.04, 0.04, 0.04, 0.04]);
        let frontier = efficient_frontier(&m, 5).unwrap();
        assert_eq!(frontier.points().len(), 1);
        assert_abs_diff_eq!(frontier.points()[0].variance, 0.04, epsilon = 1e-10);
    }

    #[test]
    fn moments_symmetrized_and_validated() {
        use crate::market::ReturnPanel;
        use chrono::NaiveDate;
        let dates: Vec<NaiveDate> = (0..4)
            .map(|i| {
                NaiveDate::parse_from_str("2020-01-01", "%Y-%m-%d").unwrap()
                    + chrono::Days::new(i)
            })
            .collect();
        let panel = ReturnPanel::from_series(
            vec!["X".into(), "Y".into(), "Z".into()],
            dates,
            vec![
                vec![0.01, -0.01, 0.02, 0.0],
                vec![0.01, -0.01, 0.02, 0.0],
                vec![0.0, 0.0, 0.0, 0.0],
            ],
        )
        .unwrap();
        let m = estimate_moments(&panel).unwrap();
        // hand-computed population moments for the duplicated series
        let mu = 0.005;
        let var = (0.005f64.powi(2) + 0.015f64.powi(2) + 0.015f64.powi(2) + 0.005f64.powi(2)) / 4.0;
        assert_abs_diff_eq!(m.mean()[0], mu, epsilon = 1e-12);
        assert_abs_diff_eq!(m.covariance()[(0, 0)], var, epsilon = 1e-12);
        // perfectly correlated pair: off-diagonal equals the variance
        assert_abs_diff_eq!(m.covariance()[(0, 1)], var, epsilon = 1e-12);
        // constant stock: zero row and column
        assert_abs_diff_eq!(m.covariance()[(2, 0)], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.covariance()[(2, 2)], 0.0, epsilon = 1e-15);

        assert!(min_variance_portfolio(&m, 0.0025).is_ok());
    }

    #[test]
    fn comparison_of_identical_frontiers_has_zero_gap() {
        let m = moments(
            vec![0.02, 0.05, 0.12],
            vec![0.05, 0.01, 0.0, 0.01, 0.06, 0.01, 0.0, 0.01, 0.09],
        );
        let f = efficient_frontier(&m, 9).unwrap();
        let cmp = compare_frontiers(&f, &f, 0.05).unwrap();
        for row in &cmp.rows {
            assert_abs_diff_eq!(row.gap, 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(cmp.crossover.unwrap(), f.min_target(), epsilon = 1e-12);
    }

    #[test]
    fn subset_without_best_asset_has_shorter_range() {
        // the best-return asset is volatile enough that the universe GMV
        // return stays inside the subset's achievable range
        let m = moments(
            vec![0.02, 0.05, 0.12],
            vec![0.05, 0.01, 0.0, 0.01, 0.06, 0.01, 0.0, 0.01, 0.5],
        );
        let msub = moments(vec![0.02, 0.05], vec![0.05, 0.01, 0.01, 0.06]);
        let f = efficient_frontier(&m, 9).unwrap();
        let fsub = efficient_frontier(&msub, 9).unwrap();
        let cmp = compare_frontiers(&f, &fsub, 0.05).unwrap();
        assert!(cmp.subset_max_target < cmp.universe_max_target);
        for row in &cmp.rows {
            assert!(row.gap >= -1e-9, "dominance violated: {}", row.gap);
        }
    }

    #[test]
    fn csv_headers() {
        let m = moments(vec![0.1, 0.2], vec![0.04, 0.0, 0.0, 0.09]);
        let f = efficient_frontier(&m, 3).unwrap();
        assert!(f.to_csv().starts_with("target_return,variance,stddev,w_A0,w_A1"));
        let cmp = compare_frontiers(&f, &f, 0.05).unwrap();
        assert!(cmp
            .to_csv()
            .starts_with("target_return,var_universe,var_subset,gap,rel_gap"));
    }
}
