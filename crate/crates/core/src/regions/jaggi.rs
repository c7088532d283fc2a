use num_rational::Ratio;

use crate::error::{Error, Result};

/// Smallest `||x||^2` over simplex points with at most `t` nonzero entries.
///
/// Enumerates every support of size at most `t` and solves the restricted
/// problem `min ||x||^2, sum x = 1` exactly in rational arithmetic: the
/// stationarity condition `2 x_i = nu` on the support forces equal weights.
pub fn jaggi_lower_bound(d: usize, t: usize) -> Result<f64> {
    if t < 1 || t > d {
        return Err(Error::InvalidInput(format!("need 1 <= t <= d (t={t}, d={d})")));
    }
    if d > 20 {
        return Err(Error::InvalidInput(format!("support enumeration needs d <= 20, got {d}")));
    }
    let mut best: Option<Ratio<i64>> = None;
    for mask in 1u32..(1u32 << d) {
        let k = mask.count_ones() as i64;
        if k as usize > t {
            continue;
        }
        let weight = Ratio::new(1, k);
        let value = (0..k).fold(Ratio::from_integer(0), |acc, _| acc + weight * weight);
        if best.is_none_or(|b| value < b) {
            best = Some(value);
        }
    }
    let best = best.expect("at least one support");
    Ok(*best.numer() as f64 / *best.denom() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(jaggi_lower_bound(4, 2).unwrap(), 0.5);
        assert_eq!(jaggi_lower_bound(8, 8).unwrap(), 0.125);
        assert_eq!(jaggi_lower_bound(3, 1).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_cardinality() {
        assert!(jaggi_lower_bound(3, 0).is_err());
        assert!(jaggi_lower_bound(3, 4).is_err());
    }
}
