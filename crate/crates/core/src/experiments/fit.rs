use statrs::distribution::{ContinuousCDF, StudentsT};

use super::ExperimentError;

/// Least-squares line through `(log x, log y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFit {
    pub slope: f64,
    pub intercept: f64,
    /// 95% Student-t interval for the slope.
    pub slope_ci: (f64, f64),
    pub points: usize,
}

impl PowerFit {
    pub fn half_width(&self) -> f64 {
        (self.slope_ci.1 - self.slope_ci.0) / 2.0
    }
}

fn degenerate(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::DegenerateData(msg.into())
}

pub fn fit_log_log(xs: &[f64], ys: &[f64]) -> Result<PowerFit, ExperimentError> {
    if xs.len() != ys.len() {
        return Err(degenerate("x and y lengths differ"));
    }
    let m = xs.len();
    if m < 3 {
        return Err(degenerate(format!("{m} points, need at least 3")));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(degenerate("values must be positive and finite"));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / m as f64;
    let my = ly.iter().sum::<f64>() / m as f64;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-12 * m as f64 {
        return Err(degenerate("all x values are equal"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let dof = (m - 2) as f64;
    let se = (rss / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof).expect("dof >= 1").inverse_cdf(0.975);
    Ok(PowerFit {
        slope,
        intercept,
        slope_ci: (slope - t * se, slope + t * se),
        points: m,
    })
}

fn columns(csv_text: &str, x_col: &str, y_col: &str) -> Result<Vec<(f64, f64)>, ExperimentError> {
    let mut rd = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = rd.headers().map_err(|e| degenerate(e.to_string()))?.clone();
    let find = |c: &str| {
        headers
            .iter()
            .position(|h| h == c)
            .ok_or_else(|| degenerate(format!("no column `{c}`")))
    };
    let (xi, yi) = (find(x_col)?, find(y_col)?);
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| degenerate(e.to_string()))?;
        let num = |i: usize| {
            rec[i]
                .parse::<f64>()
                .map_err(|_| degenerate(format!("not a number: `{}`", &rec[i])))
        };
        out.push((num(xi)?, num(yi)?));
    }
    Ok(out)
}

/// Fits `y ~ x^slope` over every row of a CSV with a header.
pub fn fit_exponent(csv_text: &str, x_col: &str, y_col: &str) -> Result<PowerFit, ExperimentError> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = columns(csv_text, x_col, y_col)?.into_iter().unzip();
    fit_log_log(&xs, &ys)
}

/// Mean and standard error of `y` for one value of `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColumnMean {
    pub x: f64,
    pub mean: f64,
    pub std_err: f64,
    pub count: usize,
}

/// Groups rows by `x` (in order of first appearance) and averages `y`.
pub fn column_means(csv_text: &str, x_col: &str, y_col: &str) -> Result<Vec<ColumnMean>, ExperimentError> {
    let mut groups: Vec<(f64, Vec<f64>)> = Vec::new();
    for (x, y) in columns(csv_text, x_col, y_col)? {
        match groups.iter_mut().find(|(gx, _)| *gx == x) {
            Some((_, ys)) => ys.push(y),
            None => groups.push((x, vec![y])),
        }
    }
    Ok(groups
        .into_iter()
        .map(|(x, ys)| {
            let c = ys.len() as f64;
            let mean = ys.iter().sum::<f64>() / c;
            let var = if ys.len() > 1 {
                ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (c - 1.0)
            } else {
                0.0
            };
            ColumnMean {
                x,
                mean,
                std_err: (var / c).sqrt(),
                count: ys.len(),
            }
        })
        .collect())
}
