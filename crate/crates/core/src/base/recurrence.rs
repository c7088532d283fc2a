//! The nonnegative gap recurrence behind the accelerated open-loop rates,
//! and its closed-form upper bound.
//!
//! With `eta_t = 4 / (t + 4)` the recurrence is
//! `h_{t+1} = max(0, (1 - eta_t/2) h_t - eta_t A C_t h_t^(1-psi) + eta_t^2 B C_t)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub psi: f64,
}

fn eta(t: i64) -> f64 {
    4.0 / (t as f64 + 4.0)
}

impl RecurrenceParams {
    fn validate(&self) -> Result<()> {
        let ok = self.a > 0.0
            && self.b >= 0.0
            && self.c >= 0.0
            && (0.0..=0.5).contains(&self.psi)
            && [self.a, self.b, self.c].iter().all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("recurrence parameters {self:?}")))
        }
    }
}

/// Runs the recurrence from `h_s` at index `s` up to index `t_end`, returning
/// `h_s, ..., h_{t_end}`. `ct(t)` must stay in `[0, C]`.
pub fn simulate_recurrence(
    params: RecurrenceParams,
    ct: impl Fn(usize) -> f64,
    s: usize,
    h_s: f64,
    t_end: usize,
) -> Result<Vec<f64>> {
    params.validate()?;
    if t_end < s || h_s.is_nan() || h_s < 0.0 {
        return Err(Error::InvalidInput(format!(
            "need t_end >= s and h_s >= 0 (s={s}, t_end={t_end}, h_s={h_s})"
        )));
    }
    let mut out = Vec::with_capacity(t_end - s + 1);
    let mut h = h_s;
    out.push(h);
    for t in s..t_end {
        let c_t = ct(t);
        if !(0.0..=params.c).contains(&c_t) {
            return Err(Error::InvalidInput(format!("C_{t} = {c_t} outside [0, C]")));
        }
        let e = eta(t as i64);
        let next = (1.0 - e / 2.0) * h - e * params.a * c_t * h.powf(1.0 - params.psi)
            + e * e * params.b * c_t;
        h = next.max(0.0);
        out.push(h);
    }
    Ok(out)
}

/// Upper bound on `h_t` for `t >= s`:
/// `max{ (eta_{t-2}/eta_{s-1})^(1/(1-psi)) h_s, (eta_{t-2} B/A)^(1/(1-psi)) + eta_{t-2}^2 B C }`.
pub fn recurrence_bound(params: RecurrenceParams, s: usize, h_s: f64, t: usize) -> f64 {
    let p = 1.0 / (1.0 - params.psi);
    let e = eta(t as i64 - 2);
    let first = (e / eta(s as i64 - 1)).powf(p) * h_s;
    let second = (e * params.b / params.a).powf(p) + e * e * params.b * params.c;
    first.max(second)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contraction_only() -> RecurrenceParams {
        RecurrenceParams {
            a: 1.0,
            b: 0.0,
            c: 1.0,
            psi: 0.0,
        }
    }

    #[test]
    fn hand_iterated_sequence() {
        let h = simulate_recurrence(contraction_only(), |_| 0.0, 0, 1.0, 4).unwrap();
        let want = [1.0, 0.5, 0.3, 0.2, 1.0 / 7.0];
        for (a, b) in h.iter().zip(want) {
            assert!((a - b).abs() < 1e-15, "{h:?}");
        }
    }

    #[test]
    fn brute_force_loop_agrees() {
        let mut h = 1.0f64;
        let mut seq = vec![h];
        for t in 0..4 {
            h *= (t as f64 + 2.0) / (t as f64 + 4.0);
            seq.push(h);
        }
        let sim = simulate_recurrence(contraction_only(), |_| 0.0, 0, 1.0, 4).unwrap();
        for (a, b) in sim.iter().zip(&seq) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let p = RecurrenceParams {
            a: 2.0,
            b: 0.0,
            c: 3.0,
            psi: 0.3,
        };
        let h = simulate_recurrence(p, |_| 1.5, 5, 0.0, 50).unwrap();
        assert!(h.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bound_dominates_a_long_run() {
        let p = RecurrenceParams {
            a: 0.7,
            b: 2.0,
            c: 1.5,
            psi: 0.25,
        };
        let h = simulate_recurrence(p, |t| if t % 3 == 0 { 1.5 } else { 0.2 }, 3, 4.0, 10_000).unwrap();
        for (i, v) in h.iter().enumerate() {
            let bound = recurrence_bound(p, 3, 4.0, 3 + i);
            assert!(*v <= bound * (1.0 + 1e-12), "t={} h={v} bound={bound}", 3 + i);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = contraction_only();
        p.psi = 0.7;
        assert!(simulate_recurrence(p, |_| 0.0, 0, 1.0, 3).is_err());
        assert!(simulate_recurrence(contraction_only(), |_| 2.0, 0, 1.0, 3).is_err());
        assert!(simulate_recurrence(contraction_only(), |_| 0.0, 4, 1.0, 3).is_err());
    }
}
