use crate::error::{Error, Result};

/// `B_2(u) = u^2 - u + 1/6`.
pub fn bernoulli_b2(u: f64) -> f64 {
    u * u - u + 1.0 / 6.0
}

/// `k(y, z) = 1/2 B_2(y - z - floor(y - z))`.
pub fn kernel(y: f64, z: f64) -> f64 {
    let d = y - z;
    0.5 * bernoulli_b2(d - d.floor())
}

/// [`kernel`] with both arguments checked to lie in `[0, 1]`.
pub fn kernel_checked(y: f64, z: f64) -> Result<f64> {
    for v in [y, z] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidInput(format!("kernel argument {v} outside [0, 1]")));
        }
    }
    Ok(kernel(y, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(kernel(0.0, 0.0), 1.0 / 12.0);
        assert!((kernel(0.0, 0.5) + 1.0 / 24.0).abs() < 1e-17);
        assert_eq!(kernel(0.3, 0.8), kernel(0.5, 0.0));
        assert!((kernel(0.3, 0.8) + 1.0 / 24.0).abs() < 1e-16);
    }

    #[test]
    fn endpoints_agree() {
        for i in 0..=20 {
            let y = i as f64 / 20.0;
            assert_eq!(kernel(0.0, y), kernel(1.0, y));
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(kernel_checked(1.5, 0.0).is_err());
        assert!(kernel_checked(0.2, -0.1).is_err());
    }

    #[test]
    fn matches_truncated_fourier_series() {
        let (y, z) = (0.15, 0.7);
        let series: f64 = (1..200_000)
            .map(|j| {
                let w = 2.0 * std::f64::consts::PI * j as f64;
                2.0 / (w * w) * (w * (y - z)).cos()
            })
            .sum();
        assert!((series - kernel(y, z)).abs() < 1e-10);
    }
}
