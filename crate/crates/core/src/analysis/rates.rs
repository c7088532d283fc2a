/// Minus the log-log regression slope over a window of iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub start: usize,
    pub window: usize,
    /// Minus the slope of `log h` against `log t`; `+inf` once a gap hits zero.
    pub slope: f64,
    pub r_squared: f64,
}

/// Running minimum.
pub fn min_prefix(h: &[f64]) -> Vec<f64> {
    let mut best = f64::INFINITY;
    h.iter()
        .map(|&v| {
            best = best.min(v);
            best
        })
        .collect()
}

fn regress(points: &[(usize, f64)]) -> (f64, f64) {
    if points.iter().any(|&(_, h)| h.is_nan() || h <= 0.0) {
        return (f64::INFINITY, f64::NAN);
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(t, _)| (t as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, h)| h.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    (-slope, r2)
}

/// Rate fitted over every `(t, h)` with `t` in `[from, to]` and `t >= 1`.
pub fn fit_rate(series: &[(usize, f64)], from: usize, to: usize) -> Option<RateEstimate> {
    let pts: Vec<(usize, f64)> = series
        .iter()
        .copied()
        .filter(|&(t, _)| t >= from.max(1) && t <= to)
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let (slope, r_squared) = regress(&pts);
    Some(RateEstimate {
        start: pts[0].0,
        window: pts[pts.len() - 1].0 - pts[0].0,
        slope,
        r_squared,
    })
}

/// Rate over `h_t, ..., h_{t+window}`. `None` when the window leaves the
/// series. Iteration 0 is skipped since its logarithm is undefined.
pub fn local_rate(series: &[(usize, f64)], t: usize, window: usize) -> Option<RateEstimate> {
    let first = series.first()?.0;
    let last = series.last()?.0;
    if t < first || t + window > last {
        return None;
    }
    let lo = t - first;
    let pts: Vec<(usize, f64)> = series[lo..=lo + window]
        .iter()
        .copied()
        .filter(|&(s, _)| s >= 1)
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let (slope, r_squared) = regress(&pts);
    Some(RateEstimate {
        start: t,
        window,
        slope,
        r_squared,
    })
}

/// Local rates for every admissible window start.
pub fn local_rates(series: &[(usize, f64)], window: usize) -> Vec<RateEstimate> {
    let (Some(&(first, _)), Some(&(last, _))) = (series.first(), series.last()) else {
        return Vec::new();
    };
    if last < first + window {
        return Vec::new();
    }
    (first..=last - window)
        .filter_map(|t| local_rate(series, t, window))
        .collect()
}

/// First window start whose local rate reaches `threshold`.
pub fn burn_in_end(series: &[(usize, f64)], threshold: f64, window: usize) -> Option<usize> {
    local_rates(series, window)
        .into_iter()
        .find(|r| r.slope >= threshold)
        .map(|r| r.start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(f64) -> f64, n: usize) -> Vec<(usize, f64)> {
        (0..=n).map(|t| (t, f(t as f64))).collect()
    }

    #[test]
    fn min_prefix_examples() {
        assert_eq!(min_prefix(&[3.0, 1.0, 2.0, 0.5]), vec![3.0, 1.0, 1.0, 0.5]);
        assert_eq!(min_prefix(&[2.0; 4]), vec![2.0; 4]);
        assert_eq!(min_prefix(&[4.0, 3.0, 1.0]), vec![4.0, 3.0, 1.0]);
    }

    #[test]
    fn exact_power_laws() {
        let s = series(|t| 3.0 / (t * t), 400);
        let r = local_rate(&s, 100, 100).unwrap();
        assert!((r.slope - 2.0).abs() < 1e-9, "{r:?}");
        assert!((r.r_squared - 1.0).abs() < 1e-12);
        let s = series(|t| 0.5 / t, 400);
        assert!((local_rate(&s, 37, 100).unwrap().slope - 1.0).abs() < 1e-9);
    }

    #[test]
    fn geometric_decay_is_steep() {
        let s = series(|t| 2.0 * 0.9f64.powf(t), 300);
        assert!(local_rate(&s, 100, 100).unwrap().slope >= 10.0);
    }

    #[test]
    fn zero_gap_gives_infinite_rate() {
        let s = series(|t| if t > 50.0 { 0.0 } else { 1.0 / t }, 200);
        assert_eq!(local_rate(&s, 10, 100).unwrap().slope, f64::INFINITY);
    }

    #[test]
    fn window_must_fit() {
        let s = series(|t| 1.0 / t, 150);
        assert!(local_rate(&s, 60, 100).is_none());
        assert_eq!(local_rates(&s, 100).len(), 51);
    }

    #[test]
    fn burn_in_of_a_kinked_sequence() {
        // 1/t until the kink at 10^4, then 10^4/t^2
        let s = series(|t| (1.0 / t).min(1e4 / (t * t)), 30_000);
        let end = burn_in_end(&s, 1.8, 100).unwrap();
        assert!((5_000..=20_000).contains(&end), "{end}");
    }

    #[test]
    fn burn_in_of_pure_laws() {
        let s = series(|t| 1.0 / (t * t), 1000);
        assert_eq!(burn_in_end(&s, 1.8, 100), Some(0));
        let s = series(|t| 1.0 / t, 1000);
        assert_eq!(burn_in_end(&s, 1.8, 100), None);
    }

    #[test]
    fn global_fit() {
        let s = series(|t| 7.0 / t.powf(1.5), 2000);
        let r = fit_rate(&s, 1000, 2000).unwrap();
        assert!((r.slope - 1.5).abs() < 1e-9);
        assert!(fit_rate(&s, 5000, 6000).is_none());
    }
}
