use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::base::seeded_rng;
use crate::error::{Error, Result};

const GRID: usize = 10_000;

/// Probability density `p(y) = 1 + sum_j a_j cos(2 pi j y) + b_j sin(2 pi j y)`
/// on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierDensity {
    /// `a_j` for `j >= 1`; index 0 holds `a_1`.
    cos: Vec<f64>,
    sin: Vec<f64>,
}

fn freq(j: usize) -> f64 {
    2.0 * PI * j as f64
}

impl FourierDensity {
    /// Builds the density from its non-constant coefficients; index `i`
    /// holds frequency `i + 1`.
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.len() != sin.len() {
            return Err(Error::InvalidInput("cosine and sine coefficient lists differ in length".into()));
        }
        if cos.iter().chain(&sin).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite Fourier coefficient".into()));
        }
        let p = FourierDensity { cos, sin };
        for i in 0..=GRID {
            let y = i as f64 / GRID as f64;
            let v = p.pdf(y);
            if v < -1e-10 {
                return Err(Error::InvalidInput(format!("density is negative at y={y}: {v}")));
            }
        }
        Ok(p)
    }

    /// Normalized square `q(y)^2 / int q^2` of the trigonometric polynomial
    /// `q(y) = sum_{i>=1} a_i cos(2 pi i y) + b_i sin(2 pi i y)`.
    pub fn squared(a: &[f64], b: &[f64]) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidInput("need matching, nonempty coefficient lists".into()));
        }
        let n = a.len();
        // coefficients by frequency 0..=2n of the product
        let mut c = vec![0.0; 2 * n + 1];
        let mut s = vec![0.0; 2 * n + 1];
        for i in 1..=n {
            for k in 1..=n {
                let (ai, bi, ak, bk) = (a[i - 1], b[i - 1], a[k - 1], b[k - 1]);
                let diff = i.abs_diff(k);
                c[diff] += 0.5 * (ai * ak + bi * bk);
                c[i + k] += 0.5 * (ai * ak - bi * bk);
                // sin_i cos_k = 1/2 (sin_{i+k} + sin_{i-k})
                s[i + k] += 0.5 * bi * ak;
                if i > k {
                    s[diff] += 0.5 * bi * ak;
                } else if k > i {
                    s[diff] -= 0.5 * bi * ak;
                }
                // cos_i sin_k
                s[i + k] += 0.5 * ai * bk;
                if k > i {
                    s[diff] += 0.5 * ai * bk;
                } else if i > k {
                    s[diff] -= 0.5 * ai * bk;
                }
            }
        }
        let c0 = c[0];
        if c0 <= 0.0 {
            return Err(Error::InvalidInput("trigonometric polynomial is identically zero".into()));
        }
        FourierDensity::new(
            c[1..].iter().map(|v| v / c0).collect(),
            s[1..].iter().map(|v| v / c0).collect(),
        )
    }

    /// Square of a random degree-`n` polynomial with standard normal
    /// coefficients.
    pub fn random(seed: u64, n: usize) -> Result<Self> {
        let mut rng = seeded_rng(seed);
        let mut draw = || (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect::<Vec<_>>();
        let a = draw();
        let b = draw();
        FourierDensity::squared(&a, &b)
    }

    /// Parses lines `j,a_j,b_j`; a `j = 0` line must carry `a_0 = 1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cos = Vec::new();
        let mut sin = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::InvalidInput(format!("line {}: expected j,a_j,b_j, got {line:?}", n + 1));
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let j: usize = parts[0].parse().map_err(|_| bad())?;
            let a: f64 = parts[1].parse().map_err(|_| bad())?;
            let b: f64 = parts[2].parse().map_err(|_| bad())?;
            if j == 0 {
                if (a - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!("constant coefficient must be 1, got {a}")));
                }
                continue;
            }
            if cos.len() < j {
                cos.resize(j, 0.0);
                sin.resize(j, 0.0);
            }
            cos[j - 1] = a;
            sin[j - 1] = b;
        }
        FourierDensity::new(cos, sin)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        FourierDensity::parse(&std::fs::read_to_string(path)?)
    }

    pub fn degree(&self) -> usize {
        self.cos.len()
    }

    /// `(j, a_j, b_j)` for `j >= 1`.
    pub fn coefficients(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.cos.iter().zip(&self.sin).enumerate().map(|(i, (&a, &b))| (i + 1, a, b))
    }

    pub fn pdf(&self, y: f64) -> f64 {
        1.0 + self
            .coefficients()
            .map(|(j, a, b)| {
                let w = freq(j) * y;
                a * w.cos() + b * w.sin()
            })
            .sum::<f64>()
    }

    fn series(&self, z: f64, scale: impl Fn(f64) -> f64, deriv: bool) -> f64 {
        self.coefficients()
            .map(|(j, a, b)| {
                let w = freq(j);
                let (s, c) = (w * z).sin_cos();
                let v = if deriv { w * (b * c - a * s) } else { a * c + b * s };
                v * scale(w)
            })
            .sum()
    }

    /// `mu(z) = int k(z, y) p(y) dy`.
    pub fn mean_embedding(&self, z: f64) -> f64 {
        self.series(z, |w| 1.0 / (w * w), false)
    }

    /// `mu'(z)`.
    pub fn mean_embedding_slope(&self, z: f64) -> f64 {
        self.series(z, |w| 1.0 / (w * w), true)
    }

    /// `<mu, mu>`.
    pub fn embedding_norm_sq(&self) -> f64 {
        self.coefficients()
            .map(|(j, a, b)| (a * a + b * b) / (2.0 * freq(j).powi(2)))
            .sum()
    }

    /// Lines `j,a_j,b_j` including the constant term.
    pub fn to_text(&self) -> String {
        let mut s = String::from("0,1,0\n");
        for (j, a, b) in self.coefficients() {
            s.push_str(&format!("{j},{a:e},{b:e}\n"));
        }
        s
    }
}

/// Target distribution of a herding run.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    Uniform,
    Fourier(FourierDensity),
}

impl Density {
    pub fn pdf(&self, y: f64) -> f64 {
        match self {
            Density::Uniform => 1.0,
            Density::Fourier(p) => p.pdf(y),
        }
    }

    pub fn mean_embedding(&self, z: f64) -> f64 {
        match self {
            Density::Uniform => 0.0,
            Density::Fourier(p) => p.mean_embedding(z),
        }
    }

    pub fn mean_embedding_slope(&self, z: f64) -> f64 {
        match self {
            Density::Uniform => 0.0,
            Density::Fourier(p) => p.mean_embedding_slope(z),
        }
    }

    pub fn embedding_norm_sq(&self) -> f64 {
        match self {
            Density::Uniform => 0.0,
            Density::Fourier(p) => p.embedding_norm_sq(),
        }
    }

    /// Parses `uniform`, `fourier:<file>` or `random:<seed>[:<degree>]`.
    pub fn from_arg(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(Density::Uniform);
        }
        if let Some(path) = s.strip_prefix("fourier:") {
            return Ok(Density::Fourier(FourierDensity::from_file(Path::new(path))?));
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let mut it = rest.split(':');
            let bad = || Error::InvalidInput(format!("bad density {s:?}"));
            let seed = it.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
            let degree = match it.next() {
                Some(v) => v.parse().map_err(|_| bad())?,
                None => 3,
            };
            return Ok(Density::Fourier(FourierDensity::random(seed, degree)?));
        }
        Err(Error::InvalidInput(format!(
            "unknown density {s:?}; expected uniform, fourier:<file> or random:<seed>[:<degree>]"
        )))
    }
}

impl FromStr for Density {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Density::from_arg(s)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Uniform => f.write_str("uniform"),
            Density::Fourier(p) => write!(f, "fourier(n={})", p.degree()),
        }
    }
}
