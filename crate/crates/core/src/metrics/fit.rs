use crate::{Error, Result};

/// Least-squares line through `(ln size, ln measurement)`.
///
/// `slope` is the empirical complexity exponent: a measurement growing like
/// `a * N^s` fits with slope `s` and intercept `ln a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

impl ComplexityFit {
    /// Fitted measurement at `size`.
    pub fn predict(&self, size: f64) -> f64 {
        (self.intercept + self.slope * size.ln()).exp()
    }
}

pub fn fit_loglog(points: &[(f64, f64)]) -> Result<ComplexityFit> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "log-log fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(s, m)) = points
        .iter()
        .find(|&&(s, m)| !(s >= 1.0 && s.is_finite() && m > 0.0 && m.is_finite()))
    {
        return Err(Error::InvalidInput(format!(
            "log-log fit needs size >= 1 and measurement > 0, got ({s}, {m})"
        )));
    }
    let n = points.len() as f64;
    let xs = points.iter().map(|p| p.0.ln());
    let ys = points.iter().map(|p| p.1.ln());
    let mean_x = xs.clone().sum::<f64>() / n;
    let mean_y = ys.clone().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::InvalidInput(
            "log-log fit needs at least two distinct sizes".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(ComplexityFit {
        slope,
        intercept,
        r_squared,
        points: points.to_vec(),
    })
}
