//! Price ingestion, log returns, return binning and per-stock risk factors.
//!
//! The pipeline front end: closing prices come in as CSV
//! (`date,STOCK1,STOCK2,...`), become log-return series, get binned on a
//! grid shared across all stocks, and produce per-stock factors — normalized
//! expected utility (NEU), normalized variance (NV), and the fractional
//! entropy of the binned return distribution — that feed the risk formulas.
//!
//! Rows with any missing price are dropped panel-wide so the series stay
//! aligned (the global bin grid needs cross-stock alignment).

use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;

use crate::entropy::{ubriaco_entropy, FractionalOrder, LogBase, ProbVector};
use crate::error::{Error, Result};
use crate::utility::UtilityFunction;

/// Aligned closing-price series for a set of stocks.
#[derive(Debug, Clone)]
pub struct PricePanel {
    labels: Vec<String>,
    dates: Vec<NaiveDate>,
    /// One series per stock, all of equal length.
    prices: Vec<Vec<f64>>,
}

impl PricePanel {
    pub fn new(labels: Vec<String>, dates: Vec<NaiveDate>, prices: Vec<Vec<f64>>) -> Result<Self> {
        if labels.is_empty() || labels.len() != prices.len() {
            return Err(Error::Validation(
                "panel needs one price series per stock label".into(),
            ));
        }
        if dates.len() < 2 {
            return Err(Error::Validation(
                "panel needs at least two dated rows".into(),
            ));
        }
        for w in dates.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Validation(format!(
                    "dates must be strictly increasing, got {} after {}",
                    w[1], w[0]
                )));
            }
        }
        for (label, series) in labels.iter().zip(&prices) {
            if series.len() != dates.len() {
                return Err(Error::Validation(format!(
                    "series for {label} has {} prices for {} dates",
                    series.len(),
                    dates.len()
                )));
            }
            if let Some(p) = series.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
                return Err(Error::Validation(format!(
                    "series for {label} contains non-positive price {p}"
                )));
            }
        }
        Ok(PricePanel {
            labels,
            dates,
            prices,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn prices(&self, stock: usize) -> &[f64] {
        &self.prices[stock]
    }

    pub fn n_stocks(&self) -> usize {
        self.labels.len()
    }

    pub fn n_rows(&self) -> usize {
        self.dates.len()
    }
}

/// Parse a price panel from CSV (`date,STOCK1,...`, ISO-8601 dates).
///
/// Rows with an empty price cell are dropped for *all* stocks; malformed
/// numbers, non-positive prices and non-increasing dates are errors naming
/// the offending line.
pub fn load_prices<R: Read>(reader: R) -> Result<PricePanel> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv_reader
        .headers()
        .map_err(|e| Error::Ingestion {
            row: 1,
            message: format!("cannot read header: {e}"),
        })?
        .clone();
    if headers.is_empty() || headers.get(0).map(str::to_ascii_lowercase) != Some("date".into()) {
        return Err(Error::Ingestion {
            row: 1,
            message: "header must start with `date` followed by stock labels".into(),
        });
    }
    let labels: Vec<String> = headers.iter().skip(1).map(String::from).collect();
    if labels.is_empty() {
        return Err(Error::Ingestion {
            row: 1,
            message: "no stock columns in header".into(),
        });
    }

    let mut dates = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, record) in csv_reader.records().enumerate() {
        let line = idx + 2; // header is line 1
        let record = record.map_err(|e| Error::Ingestion {
            row: line,
            message: e.to_string(),
        })?;
        if record.len() != labels.len() + 1 {
            return Err(Error::Ingestion {
                row: line,
                message: format!(
                    "expected {} fields, got {}",
                    labels.len() + 1,
                    record.len()
                ),
            });
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d").map_err(|e| {
            Error::Ingestion {
                row: line,
                message: format!("bad date `{}`: {e}", &record[0]),
            }
        })?;
        // missing-data policy: any empty cell drops the whole row
        if record.iter().skip(1).any(|cell| cell.is_empty()) {
            continue;
        }
        let mut row = Vec::with_capacity(labels.len());
        for (label, cell) in labels.iter().zip(record.iter().skip(1)) {
            let price: f64 = cell.parse().map_err(|_| Error::Ingestion {
                row: line,
                message: format!("bad price `{cell}` for {label}"),
            })?;
            if !(price.is_finite() && price > 0.0) {
                return Err(Error::Ingestion {
                    row: line,
                    message: format!("non-positive price {price} for {label}"),
                });
            }
            row.push(price);
        }
        if let Some(&prev) = dates.last() {
            if date <= prev {
                return Err(Error::Ingestion {
                    row: line,
                    message: format!("date {date} does not increase past {prev}"),
                });
            }
        }
        dates.push(date);
        rows.push(row);
    }
    if dates.len() < 2 {
        return Err(Error::Validation(format!(
            "panel needs at least two complete rows, got {}",
            dates.len()
        )));
    }
    let prices = (0..labels.len())
        .map(|s| rows.iter().map(|r| r[s]).collect())
        .collect();
    PricePanel::new(labels, dates, prices)
}

pub fn load_prices_path(path: impl AsRef<Path>) -> Result<PricePanel> {
    load_prices(std::fs::File::open(path)?)
}

/// Aligned log-return series (one fewer row than the price panel).
#[derive(Debug, Clone)]
pub struct ReturnPanel {
    labels: Vec<String>,
    dates: Vec<NaiveDate>,
    returns: Vec<Vec<f64>>,
}

impl ReturnPanel {
    pub fn from_series(labels: Vec<String>, dates: Vec<NaiveDate>, returns: Vec<Vec<f64>>) -> Result<Self> {
        if labels.is_empty() || labels.len() != returns.len() {
            return Err(Error::Validation(
                "panel needs one return series per stock label".into(),
            ));
        }
        let n = returns[0].len();
        if n == 0 {
            return Err(Error::Validation("return series are empty".into()));
        }
        if returns.iter().any(|r| r.len() != n) || dates.len() != n {
            return Err(Error::Validation("return series are not aligned".into()));
        }
        if returns.iter().flatten().any(|r| !r.is_finite()) {
            return Err(Error::Validation("returns must be finite".into()));
        }
        Ok(ReturnPanel {
            labels,
            dates,
            returns,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn returns(&self, stock: usize) -> &[f64] {
        &self.returns[stock]
    }

    pub fn n_stocks(&self) -> usize {
        self.labels.len()
    }

    pub fn n_obs(&self) -> usize {
        self.returns[0].len()
    }

    /// Restrict the panel to a subset of stock labels (kept in the given
    /// order).
    pub fn select(&self, labels: &[String]) -> Result<ReturnPanel> {
        let mut returns = Vec::with_capacity(labels.len());
        for label in labels {
            let idx = self
                .labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Argument(format!("unknown stock `{label}`")))?;
            returns.push(self.returns[idx].clone());
        }
        ReturnPanel::from_series(labels.to_vec(), self.dates.clone(), returns)
    }

    /// CSV export mirroring the price-panel schema (`date,STOCK1,...`).
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["date".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (i, date) in self.dates.iter().enumerate() {
            let mut row = vec![date.format("%Y-%m-%d").to_string()];
            for s in 0..self.n_stocks() {
                row.push(format!("{:.10}", self.returns[s][i]));
            }
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// `r_l = log(p_l / p_{l-1})`, natural log, per stock.
pub fn log_returns(panel: &PricePanel) -> ReturnPanel {
    let returns = (0..panel.n_stocks())
        .map(|s| {
            panel.prices[s]
                .windows(2)
                .map(|w| (w[1] / w[0]).ln())
                .collect()
        })
        .collect();
    ReturnPanel {
        labels: panel.labels.clone(),
        dates: panel.dates[1..].to_vec(),
        returns,
    }
}

/// Equal-width bin grid over the global return range of a panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
    pub width: f64,
}

impl BinGrid {
    /// Bin edges; inner bins are `[e_k, e_{k+1})`, the final bin is closed.
    pub fn edges(&self) -> Vec<f64> {
        let mut e: Vec<f64> = (0..self.count)
            .map(|k| self.r_min + k as f64 * self.width)
            .collect();
        e.push(self.r_max);
        e
    }

    /// Bin index for a value inside `[r_min, r_max]`.
    pub fn bin_index(&self, r: f64) -> Result<usize> {
        let slack = 1e-12 * (1.0 + self.r_max.abs().max(self.r_min.abs()));
        if r < self.r_min - slack || r > self.r_max + slack {
            return Err(Error::Range(format!(
                "return {r} lies outside the grid [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        let k = ((r - self.r_min) / self.width).floor() as isize;
        Ok(k.clamp(0, self.count as isize - 1) as usize)
    }
}

/// Grid of `count` equal-width bins spanning the min/max return across
/// *all* stocks of the panel.
pub fn global_bin_grid(panel: &ReturnPanel, count: usize) -> Result<BinGrid> {
    if count == 0 {
        return Err(Error::Argument("bin count must be at least 1".into()));
    }
    let mut r_min = f64::INFINITY;
    let mut r_max = f64::NEG_INFINITY;
    for s in 0..panel.n_stocks() {
        for &r in panel.returns(s) {
            r_min = r_min.min(r);
            r_max = r_max.max(r);
        }
    }
    if !(r_max > r_min) {
        return Err(Error::Degenerate(format!(
            "all returns are identical ({r_min}); the bin grid would have zero width"
        )));
    }
    Ok(BinGrid {
        r_min,
        r_max,
        count,
        width: (r_max - r_min) / count as f64,
    })
}

/// Empirical distribution of one return series over a grid: per-bin counts
/// divided by the number of observations.
pub fn empirical_pmf(returns: &[f64], grid: &BinGrid) -> Result<ProbVector> {
    if returns.is_empty() {
        return Err(Error::Data("empty return series".into()));
    }
    let mut counts = vec![0usize; grid.count];
    for &r in returns {
        counts[grid.bin_index(r)?] += 1;
    }
    let n = returns.len() as f64;
    ProbVector::new(counts.into_iter().map(|c| c as f64 / n).collect())
}

/// Divisor convention for return variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceMode {
    /// Divisor N, matching the pmf-based variance of the decision measures.
    #[default]
    Population,
    /// Divisor N − 1.
    Sample,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn variance(xs: &[f64], mode: VarianceMode) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    match mode {
        VarianceMode::Population => ss / xs.len() as f64,
        VarianceMode::Sample => {
            if xs.len() > 1 {
                ss / (xs.len() - 1) as f64
            } else {
                0.0
            }
        }
    }
}

/// Per-stock risk factors: normalized expected utility, normalized
/// variance, and fractional entropy of the binned return distribution.
#[derive(Debug, Clone)]
pub struct StockRiskFactors {
    pub labels: Vec<String>,
    pub neu: Vec<f64>,
    pub nv: Vec<f64>,
    pub h_alpha: Vec<f64>,
}

impl StockRiskFactors {
    pub fn n_stocks(&self) -> usize {
        self.labels.len()
    }

    /// Check the max-normalization invariants within a tolerance
    /// (computed factors satisfy them exactly; published tables are
    /// rounded to four decimals).
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.labels.len();
        if n == 0 || self.neu.len() != n || self.nv.len() != n || self.h_alpha.len() != n {
            return Err(Error::Validation("factor columns are not aligned".into()));
        }
        let all = self
            .neu
            .iter()
            .chain(&self.nv)
            .chain(&self.h_alpha)
            .all(|v| v.is_finite());
        if !all {
            return Err(Error::Validation("factors must be finite".into()));
        }
        let max_abs_neu = self.neu.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if (max_abs_neu - 1.0).abs() > tol {
            return Err(Error::Validation(format!(
                "max |NEU| must be 1, got {max_abs_neu}"
            )));
        }
        let max_nv = self.nv.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
        if (max_nv - 1.0).abs() > tol {
            return Err(Error::Validation(format!("max NV must be 1, got {max_nv}")));
        }
        if self.nv.iter().any(|&v| v < -tol || v > 1.0 + tol) {
            return Err(Error::Validation("NV entries must lie in [0, 1]".into()));
        }
        if self.neu.iter().any(|&v| v.abs() > 1.0 + tol) {
            return Err(Error::Validation("NEU entries must lie in [-1, 1]".into()));
        }
        if self.h_alpha.iter().any(|&v| v < 0.0) {
            return Err(Error::Validation("entropies must be non-negative".into()));
        }
        Ok(())
    }

    /// CSV export with header `stock,neu,nv,h_alpha`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["stock", "neu", "nv", "h_alpha"]).expect("in-memory write");
        for i in 0..self.n_stocks() {
            w.write_record([
                self.labels[i].as_str(),
                &format!("{:.10}", self.neu[i]),
                &format!("{:.10}", self.nv[i]),
                &format!("{:.10}", self.h_alpha[i]),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// Compute factors from a return panel: per stock, `E[u]` is the mean
/// utility of the returns, the variance uses the chosen divisor, and the
/// entropy is taken over the stock's empirical pmf on the shared grid.
/// NEU and NV are normalized by the max magnitude across stocks.
pub fn risk_factors(
    panel: &ReturnPanel,
    utility: &UtilityFunction,
    alpha: FractionalOrder,
    base: LogBase,
    bins: usize,
    variance_mode: VarianceMode,
) -> Result<StockRiskFactors> {
    let grid = global_bin_grid(panel, bins)?;
    let mut eus = Vec::with_capacity(panel.n_stocks());
    let mut vars = Vec::with_capacity(panel.n_stocks());
    let mut entropies = Vec::with_capacity(panel.n_stocks());
    for s in 0..panel.n_stocks() {
        let series = panel.returns(s);
        let mut eu = 0.0;
        for &r in series {
            eu += utility.eval(r)?;
        }
        eus.push(eu / series.len() as f64);
        vars.push(variance(series, variance_mode));
        let pmf = empirical_pmf(series, &grid)?;
        entropies.push(ubriaco_entropy(&pmf, alpha, base));
    }
    let max_abs_eu = eus.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let max_var = vars.iter().fold(0.0f64, |m, v| m.max(*v));
    let neu = eus
        .iter()
        .map(|&e| if max_abs_eu > 0.0 { e / max_abs_eu } else { 0.0 })
        .collect();
    let nv = vars
        .iter()
        .map(|&v| if max_var > 0.0 { v / max_var } else { 0.0 })
        .collect();
    Ok(StockRiskFactors {
        labels: panel.labels().to_vec(),
        neu,
        nv,
        h_alpha: entropies,
    })
}

/// Load published factors from CSV (`stock,neu,nv,h_alpha`), re-checking
/// the normalization invariants within `1e-3` (tables round to 4 decimals).
pub fn load_risk_factors<R: Read>(reader: R) -> Result<StockRiskFactors> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv_reader.headers()?.clone();
    let expected = ["stock", "neu", "nv", "h_alpha"];
    let ok = headers.len() == 4
        && headers
            .iter()
            .zip(expected)
            .all(|(h, e)| h.eq_ignore_ascii_case(e));
    if !ok {
        return Err(Error::Ingestion {
            row: 1,
            message: format!("expected header `stock,neu,nv,h_alpha`, got `{headers:?}`"),
        });
    }
    let mut labels = Vec::new();
    let mut neu = Vec::new();
    let mut nv = Vec::new();
    let mut h_alpha = Vec::new();
    for (idx, record) in csv_reader.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| Error::Ingestion {
            row: line,
            message: e.to_string(),
        })?;
        let field = |k: usize| -> Result<f64> {
            record[k].parse().map_err(|_| Error::Ingestion {
                row: line,
                message: format!("bad number `{}`", &record[k]),
            })
        };
        labels.push(record[0].to_string());
        neu.push(field(1)?);
        nv.push(field(2)?);
        h_alpha.push(field(3)?);
    }
    let factors = StockRiskFactors {
        labels,
        neu,
        nv,
        h_alpha,
    };
    factors.validate(1e-3)?;
    Ok(factors)
}

pub fn load_risk_factors_path(path: impl AsRef<Path>) -> Result<StockRiskFactors> {
    load_risk_factors(std::fs::File::open(path)?)
}
