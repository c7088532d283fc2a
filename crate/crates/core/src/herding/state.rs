use super::density::Density;
use super::kernel::kernel;

/// Grid resolution of the non-uniform LMO scan.
const LMO_GRID: usize = 10_000;
const NEWTON_STEPS: usize = 30;
const TIE_TOL: f64 = 1e-12;

/// Atoms `y_i` with unnormalized masses `w_i`; the iterate is
/// `sum_i (w_i / W) Phi(y_i)` with `W = sum_i w_i`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HerdingState {
    /// Sorted ascending; repeated atoms are kept as separate entries.
    atoms: Vec<f64>,
    masses: Vec<f64>,
    total: f64,
    /// `sum_ij w_i w_j k(y_i, y_j)`, updated incrementally.
    gram: f64,
    /// `sum_i w_i mu(y_i)`, updated incrementally.
    mean: f64,
}

/// Prefix sums over the sorted atoms.
struct Prefix {
    mass: Vec<f64>,
    first: Vec<f64>,
}

impl HerdingState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Atoms in ascending order, with repetitions.
    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    /// Convex weights `w_i / W`.
    pub fn weights(&self) -> Vec<f64> {
        self.masses.iter().map(|w| w / self.total).collect()
    }

    /// `sum_i w_i k(y_i, y)`.
    pub(crate) fn kernel_sum(&self, y: f64) -> f64 {
        self.atoms.iter().zip(&self.masses).map(|(&z, &w)| w * kernel(z, y)).sum()
    }

    /// Adds mass `w` at `y`; an empty state or `w = inf` restarts from `y`.
    pub(crate) fn add(&mut self, y: f64, w: f64, density: &Density) {
        if self.is_empty() || w.is_infinite() {
            *self = HerdingState::default();
            self.atoms.push(y);
            self.masses.push(1.0);
            self.total = 1.0;
            self.gram = kernel(y, y);
            self.mean = density.mean_embedding(y);
            return;
        }
        self.gram += 2.0 * w * self.kernel_sum(y) + w * w * kernel(y, y);
        self.mean += w * density.mean_embedding(y);
        let at = self.atoms.partition_point(|&z| z <= y);
        self.atoms.insert(at, y);
        self.masses.insert(at, w);
        self.total += w;
        if self.total > 1e100 {
            let s = 1.0 / self.total;
            self.masses.iter_mut().for_each(|m| *m *= s);
            self.total = self.masses.iter().sum();
            self.gram *= s * s;
            self.mean *= s;
        }
    }

    /// `f(x) = 1/2 ||x - mu||^2` from the incrementally cached sums.
    pub fn objective_cached(&self, density: &Density) -> f64 {
        let w = self.total;
        0.5 * (self.gram / (w * w) - 2.0 * self.mean / w + density.embedding_norm_sq())
    }

    /// `f(x)` recomputed from the atoms. For the kernel part this evaluates
    /// `12 sum_ij w_i w_j k = 6 (2 (W S2 - S1^2) - 2 D) + W^2`, with
    /// `D = sum_{i<j} w_i w_j |y_i - y_j|`, which is exact for dyadic atoms
    /// and integer masses.
    pub fn objective(&self, density: &Density) -> f64 {
        let w = self.total;
        let (mut s1, mut s2) = (0.0, 0.0);
        for (&z, &m) in self.atoms.iter().zip(&self.masses) {
            s1 += m * z;
            s2 += m * z * z;
        }
        let spread = pair_spread(&self.atoms, &self.masses);
        let twelve = 6.0 * (2.0 * (w * s2 - s1 * s1) - 2.0 * spread) + w * w;
        let mean: f64 = self
            .atoms
            .iter()
            .zip(&self.masses)
            .map(|(&z, &m)| m * density.mean_embedding(z))
            .sum();
        twelve / (24.0 * w * w) - mean / w + 0.5 * density.embedding_norm_sq()
    }

    fn prefix(&self) -> Prefix {
        let n = self.atoms.len();
        let mut mass = Vec::with_capacity(n + 1);
        let mut first = Vec::with_capacity(n + 1);
        mass.push(0.0);
        first.push(0.0);
        for (&z, &m) in self.atoms.iter().zip(&self.masses) {
            mass.push(mass.last().unwrap() + m);
            first.push(first.last().unwrap() + m * z);
        }
        Prefix { mass, first }
    }

    /// `2 sum_i w_i k(y_i, y) - W/6 = sum_i w_i ((y - y_i)^2 - |y - y_i|)`
    /// for `y` with exactly `k` atoms to its left, using prefix sums.
    fn doubled_kernel_sum(&self, pre: &Prefix, s2: f64, y: f64, k: usize) -> f64 {
        let w = self.total;
        let s1 = pre.first[pre.first.len() - 1];
        let (wl, sl) = (pre.mass[k], pre.first[k]);
        let (wr, sr) = (w - wl, s1 - sl);
        let square = w * y * y - 2.0 * y * s1 + s2;
        let abs = (wl - wr) * y - sl + sr;
        square - abs
    }

    /// Smallest minimizer of `g(y) = <x, Phi(y)> - mu(y)` over `[0, 1]`.
    ///
    /// For the uniform density `g` is a convex quadratic between
    /// consecutive atoms and is minimized piece by piece in closed form.
    /// Otherwise a grid scan brackets the minimizer and a safeguarded Newton
    /// iteration polishes it inside the bracketing piece. An empty state
    /// returns the minimizer of `-mu`.
    pub fn lmo(&self, density: &Density) -> f64 {
        match density {
            Density::Uniform if self.is_empty() => 0.0,
            Density::Uniform => self.uniform_lmo(),
            Density::Fourier(_) => self.scan_lmo(density),
        }
    }

    fn uniform_lmo(&self) -> f64 {
        let pre = self.prefix();
        let s2: f64 = self.atoms.iter().zip(&self.masses).map(|(&z, &m)| m * z * z).sum();
        let w = self.total;
        let s1 = pre.first[pre.first.len() - 1];
        let n = self.atoms.len();
        let mut candidates = Vec::with_capacity(2 * n + 2);
        for k in 0..=n {
            let lo = if k == 0 { 0.0 } else { self.atoms[k - 1] };
            let hi = if k == n { 1.0 } else { self.atoms[k] };
            if hi < lo {
                continue;
            }
            let (wl, wr) = (pre.mass[k], w - pre.mass[k]);
            let vertex = ((s1 + 0.5 * (wl - wr)) / w).clamp(lo, hi);
            candidates.push((vertex, self.doubled_kernel_sum(&pre, s2, vertex, k)));
        }
        pick_smallest(&candidates)
    }

    fn scan_lmo(&self, density: &Density) -> f64 {
        let w = self.total;
        let g = |y: f64| -> f64 {
            let k = if w > 0.0 { self.kernel_sum(y) / w } else { 0.0 };
            k - density.mean_embedding(y)
        };
        // sweep the grid with prefix sums
        let pre = self.prefix();
        let s2: f64 = self.atoms.iter().zip(&self.masses).map(|(&z, &m)| m * z * z).sum();
        let mut k = 0;
        let mut best = (0.0, f64::INFINITY);
        for i in 0..=LMO_GRID {
            let y = i as f64 / LMO_GRID as f64;
            while k < self.atoms.len() && self.atoms[k] <= y {
                k += 1;
            }
            let kern = if self.is_empty() {
                0.0
            } else {
                (0.5 * self.doubled_kernel_sum(&pre, s2, y, k) + w / 12.0) / w
            };
            let v = kern - density.mean_embedding(y);
            if i == 0 || v < best.1 - TIE_TOL * (1.0 + best.1.abs()) {
                best = (y, v);
            }
        }
        // polish inside [y - h, y + h], split at atoms
        let h = 1.0 / LMO_GRID as f64;
        let lo = (best.0 - h).max(0.0);
        let hi = (best.0 + h).min(1.0);
        let mut cuts = vec![lo];
        cuts.extend(self.atoms.iter().copied().filter(|&z| z > lo && z < hi));
        cuts.push(hi);
        cuts.dedup();
        let mut candidates = vec![(best.0, best.1)];
        for win in cuts.windows(2) {
            let (a, b) = (win[0], win[1]);
            let k = self.atoms.partition_point(|&z| z <= 0.5 * (a + b));
            let slope = |y: f64| -> f64 {
                let kern = if self.is_empty() {
                    0.0
                } else {
                    let s1 = pre.first[pre.first.len() - 1];
                    let (wl, wr) = (pre.mass[k], w - pre.mass[k]);
                    (w * y - s1 - 0.5 * (wl - wr)) / w
                };
                kern - density.mean_embedding_slope(y)
            };
            let y = piece_minimizer(a, b, slope, |y| density.pdf(y));
            for c in [a, y, b] {
                candidates.push((c, g(c)));
            }
        }
        pick_smallest(&candidates)
    }
}

/// Minimizer of a convex function on `[a, b]` given its derivative and
/// second derivative, by Newton steps safeguarded with bisection.
fn piece_minimizer(a: f64, b: f64, slope: impl Fn(f64) -> f64, curvature: impl Fn(f64) -> f64) -> f64 {
    if slope(a) >= 0.0 {
        return a;
    }
    if slope(b) <= 0.0 {
        return b;
    }
    let (mut lo, mut hi) = (a, b);
    let mut y = 0.5 * (a + b);
    for _ in 0..NEWTON_STEPS {
        let s = slope(y);
        if s == 0.0 {
            break;
        }
        if s < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let c = curvature(y);
        let newton = y - s / c;
        y = if c > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 1e-12 {
            break;
        }
    }
    y
}

/// Smallest `y` among candidates whose value is within the tie tolerance of
/// the minimum.
fn pick_smallest(candidates: &[(f64, f64)]) -> f64 {
    let min = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let tol = TIE_TOL * (1.0 + min.abs());
    candidates
        .iter()
        .filter(|c| c.1 <= min + tol)
        .map(|c| c.0)
        .fold(f64::INFINITY, f64::min)
}

/// `sum_{i<j} w_i w_j |y_i - y_j|` for sorted atoms.
fn pair_spread(atoms: &[f64], masses: &[f64]) -> f64 {
    let (mut mass, mut first, mut total) = (0.0, 0.0, 0.0);
    for (&z, &m) in atoms.iter().zip(masses) {
        total += m * (z * mass - first);
        mass += m;
        first += m * z;
    }
    total
}

impl HerdingState {
    /// `<x, x>` from the cached sums.
    pub(crate) fn norm_sq(&self) -> f64 {
        self.gram / (self.total * self.total)
    }

    /// `<x, mu>` from the cached sums.
    pub(crate) fn mean_inner(&self) -> f64 {
        self.mean / self.total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_state(atoms: &[f64]) -> HerdingState {
        let mut s = HerdingState::new();
        for &y in atoms {
            s.add(y, 1.0, &Density::Uniform);
        }
        s
    }

    #[test]
    fn single_atom_gives_midpoint() {
        assert_eq!(uniform_state(&[0.0]).lmo(&Density::Uniform), 0.5);
    }

    #[test]
    fn two_atoms_pick_smaller_midpoint() {
        assert_eq!(uniform_state(&[0.0, 0.5]).lmo(&Density::Uniform), 0.25);
    }

    #[test]
    fn quarter_grid_gives_first_midpoint() {
        assert_eq!(uniform_state(&[0.0, 0.25, 0.5, 0.75]).lmo(&Density::Uniform), 0.125);
    }

    #[test]
    fn empty_uniform_state_starts_at_zero() {
        assert_eq!(HerdingState::new().lmo(&Density::Uniform), 0.0);
    }

    #[test]
    fn scratch_objective_matches_pairwise_sum() {
        let s = uniform_state(&[0.1, 0.7, 0.7, 0.3]);
        let w = s.total_mass();
        let mut direct = 0.0;
        for (&a, &ma) in s.atoms().iter().zip(s.masses()) {
            for (&b, &mb) in s.atoms().iter().zip(s.masses()) {
                direct += ma * mb * kernel(a, b);
            }
        }
        let f = 0.5 * direct / (w * w);
        assert!((s.objective(&Density::Uniform) - f).abs() < 1e-15);
        assert!((s.objective_cached(&Density::Uniform) - f).abs() < 1e-15);
    }

    #[test]
    fn grid_midpoints_tie() {
        let t = 8;
        let s = uniform_state(&(0..t).map(|i| i as f64 / t as f64).collect::<Vec<_>>());
        let g = |y: f64| s.kernel_sum(y) / s.total_mass();
        let base = g(0.5 / t as f64);
        for i in 0..t {
            let y = (i as f64 + 0.5) / t as f64;
            assert!((g(y) - base).abs() < 1e-14);
        }
    }

    #[test]
    fn scan_lmo_agrees_with_brute_force() {
        let p = Density::Fourier(crate::herding::FourierDensity::random(7, 3).unwrap());
        let mut s = HerdingState::new();
        for &y in &[0.12, 0.61, 0.33] {
            s.add(y, 1.0, &p);
        }
        let g = |y: f64| s.kernel_sum(y) / s.total_mass() - p.mean_embedding(y);
        let y = s.lmo(&p);
        let brute = (0..=200_000).map(|i| i as f64 / 200_000.0).map(g).fold(f64::INFINITY, f64::min);
        assert!(g(y) <= brute + 1e-13, "lmo {y} g={} brute={brute}", g(y));
    }
}
