//! Numerical reproduction of the half-plane counterexample.
//!
//! Two product-form measures on `ℝ²` share the component `F(y)·δ₁(x)` built
//! from the Fejér kernel `F`, and differ by modulated copies of `F` placed
//! at `x = −3` (modulation `2cos 2y`) and `x = −2` (modulation `2cos 10y`).
//! Because the kernel's Fourier transform is the triangle `(1−|t|)₊` and the
//! modulated transforms live on `|t∓2| < 1` and `|t∓10| < 1`, every mixed
//! product in a convolution power has spectra with disjoint interiors and
//! vanishes identically. All convolution powers therefore agree on the open
//! half-plane `x > 0` — where only the pure `F^{⊛k}` term at `x = k`
//! survives — while the measures themselves differ.
//!
//! The Fourier convention is fixed so that the atom at `x = +1` contributes
//! `e^{−is}` and densities transform as `f̂(t) = ∫ f(y) e^{−ity} dy`, giving
//! `F̂ = (1−|t|)₊`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{num_complex::Complex, FftPlanner};

use conelab_core::report::{CheckReport, ClaimId, Quantity, Witness};
use conelab_core::scalar::{Rational, Scalar};

/// Largest FFT length the convolver will plan; beyond it the grid has
/// outgrown the memory budget.
pub const MAX_FFT_LEN: usize = 1 << 22;

/// Fixed seed of the transform sample grid (the command has no seed flag;
/// reports stay reproducible).
pub const FT_SAMPLE_SEED: u64 = 20240001;

#[derive(Debug, thiserror::Error)]
pub enum FejerError {
    #[error("grid overflow: convolution would need an FFT of length {needed} > {max}")]
    GridOverflow { needed: usize, max: usize },
    #[error("grid spec invalid: {0}")]
    InvalidGrid(String),
}

/// Sampling grid for the `y` axis: `N` samples on `[−L, L)`, `dy = 2L/N`.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub half_width: f64,
    pub samples: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            half_width: 200.0,
            samples: 1 << 16,
        }
    }
}

impl GridSpec {
    pub fn new(half_width: f64, samples: usize) -> Result<Self, FejerError> {
        if !(half_width > 0.0) {
            return Err(FejerError::InvalidGrid(
                "half-width must be positive".into(),
            ));
        }
        if !samples.is_power_of_two() {
            return Err(FejerError::InvalidGrid(format!(
                "sample count {samples} is not a power of two"
            )));
        }
        Ok(GridSpec {
            half_width,
            samples,
        })
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.half_width / self.samples as f64
    }

    /// Samples `f` on the grid.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> GridDensity {
        let dy = self.dy();
        let y0 = -self.half_width;
        let values = (0..self.samples).map(|j| f(y0 + j as f64 * dy)).collect();
        GridDensity { y0, dy, values }
    }
}

/// Density samples on a uniform grid starting at `y0` with step `dy`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    pub y0: f64,
    pub dy: f64,
    pub values: Vec<f64>,
}

impl GridDensity {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trapezoid mass `∫ f`.
    pub fn trapezoid_mass(&self) -> f64 {
        if self.values.len() < 2 {
            return 0.0;
        }
        let inner: f64 = self.values.iter().sum();
        (inner - 0.5 * (self.values[0] + self.values[self.values.len() - 1])) * self.dy
    }

    /// Trapezoid mass of `|f|`.
    pub fn l1_mass(&self) -> f64 {
        if self.values.len() < 2 {
            return 0.0;
        }
        let inner: f64 = self.values.iter().map(|v| v.abs()).sum();
        (inner - 0.5 * (self.values[0].abs() + self.values[self.values.len() - 1].abs())) * self.dy
    }

    pub fn sup_norm_diff(&self, other: &GridDensity) -> f64 {
        assert_eq!(self.len(), other.len(), "aligned grids required");
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Trapezoid transform `∫ f(y) e^{−ity} dy`, evaluated with an
    /// incremental phasor re-anchored periodically against drift.
    pub fn fourier_at(&self, t: f64) -> Complex64 {
        let step = Complex64::from_polar(1.0, -t * self.dy);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut phasor = Complex64::from_polar(1.0, -t * self.y0);
        for (j, v) in self.values.iter().enumerate() {
            if j % 4096 == 0 {
                phasor = Complex64::from_polar(1.0, -t * (self.y0 + j as f64 * self.dy));
            }
            acc += phasor * *v;
            phasor *= step;
        }
        let n = self.values.len();
        if n >= 2 {
            let first = Complex64::from_polar(1.0, -t * self.y0) * self.values[0];
            let last = Complex64::from_polar(1.0, -t * (self.y0 + (n - 1) as f64 * self.dy))
                * self.values[n - 1];
            acc -= 0.5 * (first + last);
        }
        acc * self.dy
    }
}

/// FFT-backed linear convolution of grid densities.
pub struct DensityConvolver {
    planner: FftPlanner<f64>,
}

impl Default for DensityConvolver {
    fn default() -> Self {
        Self::new()
    }
}

impl DensityConvolver {
    pub fn new() -> Self {
        DensityConvolver {
            planner: FftPlanner::new(),
        }
    }

    /// `(f ⊛ g)(y) ≈ dy · Σ f(u_j) g(y − u_j)` via zero-padded FFT; the
    /// output grid starts at `f.y0 + g.y0` with length `|f| + |g| − 1`.
    pub fn convolve(
        &mut self,
        f: &GridDensity,
        g: &GridDensity,
    ) -> Result<GridDensity, FejerError> {
        assert!((f.dy - g.dy).abs() < 1e-15, "matching steps required");
        let out_len = f.len() + g.len() - 1;
        let fft_len = out_len.next_power_of_two();
        if fft_len > MAX_FFT_LEN {
            return Err(FejerError::GridOverflow {
                needed: fft_len,
                max: MAX_FFT_LEN,
            });
        }
        let fft = self.planner.plan_fft_forward(fft_len);
        let ifft = self.planner.plan_fft_inverse(fft_len);
        let mut fa: Vec<Complex<f64>> = f
            .values
            .iter()
            .map(|v| Complex::new(*v, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(fft_len)
            .collect();
        let mut fb: Vec<Complex<f64>> = g
            .values
            .iter()
            .map(|v| Complex::new(*v, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(fft_len)
            .collect();
        fft.process(&mut fa);
        fft.process(&mut fb);
        for (a, b) in fa.iter_mut().zip(fb.iter()) {
            *a *= b;
        }
        ifft.process(&mut fa);
        let scale = f.dy / fft_len as f64;
        let values = fa[..out_len].iter().map(|c| c.re * scale).collect();
        Ok(GridDensity {
            y0: f.y0 + g.y0,
            dy: f.dy,
            values,
        })
    }
}

/// Measure of the form `Σ_x δ_x(dx) ⊗ f_x(y) dy` with exact rational
/// `x`-locations; all densities share one grid.
#[derive(Debug, Clone)]
pub struct ProductMeasure2D {
    pub atoms: BTreeMap<Rational, GridDensity>,
}

impl ProductMeasure2D {
    pub fn x_locations(&self) -> Vec<Rational> {
        self.atoms.keys().cloned().collect()
    }

    pub fn density_at(&self, x: &Rational) -> Option<&GridDensity> {
        self.atoms.get(x)
    }

    /// Restriction to the open right half-plane `x > 0`.
    pub fn restrict_x_positive(&self) -> ProductMeasure2D {
        ProductMeasure2D {
            atoms: self
                .atoms
                .iter()
                .filter(|(x, _)| x.is_positive())
                .map(|(x, d)| (x.clone(), d.clone()))
                .collect(),
        }
    }
}

/// The Fejér kernel `F(y) = (1/2π)(sin(y/2)/(y/2))²`, with the limit value
/// `1/(2π)` at `y = 0`. Non-negative with unit mass and `F(y) ≤ 2/(πy²)`.
pub fn fejer_kernel(y: f64) -> f64 {
    let u = 0.5 * y;
    let sinc = if u.abs() < 1e-6 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    };
    sinc * sinc / (2.0 * std::f64::consts::PI)
}

fn rat(n: i64) -> Rational {
    Rational::from_i64(n)
}

/// First measure: `F(y)` at `x = 1` plus `2cos(2y)F(y)` at `x = −3`.
pub fn build_mu(g: &GridSpec) -> ProductMeasure2D {
    let mut atoms = BTreeMap::new();
    atoms.insert(rat(1), g.sample(fejer_kernel));
    atoms.insert(
        rat(-3),
        g.sample(|y| 2.0 * (2.0 * y).cos() * fejer_kernel(y)),
    );
    ProductMeasure2D { atoms }
}

/// Second measure: `F(y)` at `x = 1` plus `2cos(10y)F(y)` at `x = −2`.
pub fn build_nu(g: &GridSpec) -> ProductMeasure2D {
    let mut atoms = BTreeMap::new();
    atoms.insert(rat(1), g.sample(fejer_kernel));
    atoms.insert(
        rat(-2),
        g.sample(|y| 2.0 * (10.0 * y).cos() * fejer_kernel(y)),
    );
    ProductMeasure2D { atoms }
}

/// A pruned near-vanishing cross term, logged for the report.
#[derive(Debug, Clone)]
pub struct PruneEvent {
    pub power: usize,
    pub x: Rational,
    pub l1_mass: f64,
}

/// One convolution step `acc * base` with pruning of x-atoms whose density
/// has `L¹` mass at most `prune_l1` (the vanishing cross terms).
fn product_step(
    acc: &ProductMeasure2D,
    base: &ProductMeasure2D,
    power: usize,
    prune_l1: f64,
    convolver: &mut DensityConvolver,
    log: &mut Vec<PruneEvent>,
) -> Result<ProductMeasure2D, FejerError> {
    let mut atoms: BTreeMap<Rational, GridDensity> = BTreeMap::new();
    for (xa, fa) in &acc.atoms {
        for (xb, fb) in &base.atoms {
            let x = xa + xb;
            let d = convolver.convolve(fa, fb)?;
            match atoms.get_mut(&x) {
                Some(existing) => {
                    for (e, v) in existing.values.iter_mut().zip(d.values.iter()) {
                        *e += v;
                    }
                }
                None => {
                    atoms.insert(x, d);
                }
            }
        }
    }
    let mut kept = BTreeMap::new();
    for (x, d) in atoms {
        let mass = d.l1_mass();
        if mass <= prune_l1 {
            log.push(PruneEvent {
                power,
                x,
                l1_mass: mass,
            });
        } else {
            kept.insert(x, d);
        }
    }
    Ok(ProductMeasure2D { atoms: kept })
}

/// `P^{*k}` by the linear recurrence, pruning per step.
pub fn product_power(
    p: &ProductMeasure2D,
    k: usize,
    prune_l1: f64,
) -> Result<(ProductMeasure2D, Vec<PruneEvent>), FejerError> {
    assert!(k >= 1);
    let mut convolver = DensityConvolver::new();
    let mut log = Vec::new();
    let mut acc = p.clone();
    for step in 2..=k {
        acc = product_step(&acc, p, step, prune_l1, &mut convolver, &mut log)?;
    }
    Ok((acc, log))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureId {
    Mu,
    Nu,
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureId::Mu => write!(f, "mu"),
            MeasureId::Nu => write!(f, "nu"),
        }
    }
}

/// The closed-form transform of the `k`-th convolution power, exactly as
/// the piecewise branches state it: triangles of width 1 raised to the
/// `k`-th power around `t = 0` (phase `e^{−iks}`) and around the modulation
/// frequencies (`t = ±2` with phase `e^{3iks}` for the first measure,
/// `t = ±10` with phase `e^{2iks}` for the second), zero otherwise.
pub fn closed_form_ft(id: MeasureId, k: u32, s: f64, t: f64) -> Complex64 {
    let kf = k as f64;
    let tri_pow = |center: f64| -> f64 {
        let arg = 1.0 - (t - center).abs();
        if arg > 0.0 {
            arg.powi(k as i32)
        } else {
            0.0
        }
    };
    match id {
        MeasureId::Mu => {
            if t.abs() < 1.0 {
                Complex64::from_polar(tri_pow(0.0), -kf * s)
            } else if t > 1.0 && t < 3.0 {
                Complex64::from_polar(tri_pow(2.0), 3.0 * kf * s)
            } else if t > -3.0 && t < -1.0 {
                Complex64::from_polar(tri_pow(-2.0), 3.0 * kf * s)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        MeasureId::Nu => {
            if t.abs() < 1.0 {
                Complex64::from_polar(tri_pow(0.0), -kf * s)
            } else if t > 9.0 && t < 11.0 {
                Complex64::from_polar(tri_pow(10.0), 2.0 * kf * s)
            } else if t > -11.0 && t < -9.0 {
                Complex64::from_polar(tri_pow(-10.0), 2.0 * kf * s)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
    }
}

/// Numeric transform `Σ_x e^{−isx} · f̂_x(t)` of a product measure.
pub fn numeric_ft(p: &ProductMeasure2D, s: f64, t: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, d) in &p.atoms {
        let xf = conelab_core::scalar::rational_to_f64(x);
        acc += Complex64::from_polar(1.0, -s * xf) * d.fourier_at(t);
    }
    acc
}

/// Everything a verification run produces: the report plus the power
/// sequences (for CSV dumps).
pub struct CounterexampleRun {
    pub report: CheckReport,
    pub mu_powers: Vec<ProductMeasure2D>,
    pub nu_powers: Vec<ProductMeasure2D>,
}

/// Full verification of the construction at the given grid and tolerance:
/// for each `k ≤ k_max` the `x > 0` restrictions of both powers must be the
/// single atom at `x = k` with matching densities, cross terms must carry
/// `L¹` mass at most `tol`, the measures must differ on `x ≤ 0` by total
/// variation at least 1/2, and the numeric transforms must match the
/// closed forms on a 10³-point `(s, t)` sample.
pub fn run_counterexample(
    g: &GridSpec,
    k_max: usize,
    tol: f64,
) -> Result<CounterexampleRun, FejerError> {
    assert!(k_max >= 1);
    let mut report = CheckReport::new(ClaimId::HalfPlaneCounterexample);
    report.computed("half_width", Quantity::Real(g.half_width));
    report.computed("samples", Quantity::Count(g.samples as u64));
    report.computed("k_max", Quantity::Count(k_max as u64));
    report.computed("tol", Quantity::Real(tol));

    let tail_bound = 4.0 / (std::f64::consts::PI * g.half_width);
    let f = g.sample(fejer_kernel);
    let mass = f.trapezoid_mass();
    report.computed("kernel_mass", Quantity::Real(mass));
    report.hypothesis(
        "kernel_mass_within_tail_bound",
        (mass - 1.0).abs() <= tail_bound,
        format!("|∫F − 1| = {:.3e} ≤ {:.3e}", (mass - 1.0).abs(), tail_bound),
    );
    // Triangle-shape check of the transform convention.
    let mut triangle_err = 0.0f64;
    for t in [-0.5, 0.0, 0.5] {
        let got = f.fourier_at(t);
        let want = 1.0 - t.abs();
        triangle_err = triangle_err.max((got - Complex64::new(want, 0.0)).norm());
    }
    report.computed("triangle_check_error", Quantity::Real(triangle_err));
    report.hypothesis(
        "kernel_transform_is_triangle",
        triangle_err <= tol,
        format!("max |F̂(t) − (1−|t|)| = {triangle_err:.3e} at t ∈ {{−1/2, 0, 1/2}}"),
    );

    let mu = build_mu(g);
    let nu = build_nu(g);

    // Inequality of the measures: TV on x ≤ 0 is the sum of the modulated
    // components' L¹ masses (they sit at distinct x-locations).
    let tv_lower = mu.density_at(&rat(-3)).expect("built").l1_mass()
        + nu.density_at(&rat(-2)).expect("built").l1_mass();
    report.computed("tv_difference_x_nonpositive", Quantity::Real(tv_lower));

    let prune_l1 = tol / 10.0;
    let mut convolver = DensityConvolver::new();
    let mut prune_log = Vec::new();
    let mut mu_powers: Vec<ProductMeasure2D> = vec![mu.clone()];
    let mut nu_powers: Vec<ProductMeasure2D> = vec![nu.clone()];
    for k in 2..=k_max {
        let next_mu = product_step(
            mu_powers.last().expect("non-empty"),
            &mu,
            k,
            prune_l1,
            &mut convolver,
            &mut prune_log,
        )?;
        mu_powers.push(next_mu);
        let next_nu = product_step(
            nu_powers.last().expect("non-empty"),
            &nu,
            k,
            prune_l1,
            &mut convolver,
            &mut prune_log,
        )?;
        nu_powers.push(next_nu);
    }
    report.computed(
        "pruned_cross_terms",
        Quantity::Count(prune_log.len() as u64),
    );
    let max_pruned_mass = prune_log.iter().map(|e| e.l1_mass).fold(0.0, f64::max);
    report.computed("max_pruned_cross_mass", Quantity::Real(max_pruned_mass));

    let mut failures: Vec<String> = Vec::new();

    // Per-k checks.
    let mut max_sup_diff = 0.0f64;
    let mut max_cross_mass = max_pruned_mass;
    for k in 1..=k_max {
        let mu_k = &mu_powers[k - 1];
        let nu_k = &nu_powers[k - 1];
        let pure_mu = [rat(k as i64), rat(-3 * k as i64)];
        let pure_nu = [rat(k as i64), rat(-2 * k as i64)];
        for (id, power, pure) in [
            (MeasureId::Mu, mu_k, &pure_mu),
            (MeasureId::Nu, nu_k, &pure_nu),
        ] {
            for (x, d) in &power.atoms {
                if !pure.contains(x) {
                    let mass = d.l1_mass();
                    max_cross_mass = max_cross_mass.max(mass);
                    if mass > tol {
                        failures.push(format!(
                            "cross term of {id}^{k} at x = {x} has L1 mass {mass:.3e} > {tol}"
                        ));
                    }
                }
            }
        }

        let ru = mu_k.restrict_x_positive();
        let rv = nu_k.restrict_x_positive();
        let expected = vec![rat(k as i64)];
        if ru.x_locations() != expected || rv.x_locations() != expected {
            failures.push(format!(
                "x>0 restriction at k = {k} is not the single atom x = {k} (mu: {:?}, nu: {:?})",
                ru.x_locations(),
                rv.x_locations()
            ));
            continue;
        }
        let diff = ru
            .density_at(&rat(k as i64))
            .expect("checked")
            .sup_norm_diff(rv.density_at(&rat(k as i64)).expect("checked"));
        max_sup_diff = max_sup_diff.max(diff);
        if diff > tol {
            failures.push(format!(
                "x>0 densities at k = {k} differ in sup norm by {diff:.3e} > {tol}"
            ));
        }
    }
    report.computed("max_restriction_sup_diff", Quantity::Real(max_sup_diff));
    report.computed("max_cross_term_mass", Quantity::Real(max_cross_mass));

    if tv_lower < 0.5 {
        failures.push(format!("TV of (mu − nu) on x ≤ 0 is {tv_lower:.3} < 0.5"));
    }

    // Transform comparison on a seeded 10³-point (s, t) sample, split
    // evenly over the powers.
    let mut rng = ChaCha8Rng::seed_from_u64(FT_SAMPLE_SEED);
    let per_k = (1000 / k_max).max(1);
    let mut max_ft_err = 0.0f64;
    for k in 1..=k_max {
        let mu_k = &mu_powers[k - 1];
        let nu_k = &nu_powers[k - 1];
        for _ in 0..per_k {
            let s = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            let t = rng.random_range(-12.0..12.0);
            let em =
                (numeric_ft(mu_k, s, t) - closed_form_ft(MeasureId::Mu, k as u32, s, t)).norm();
            let en =
                (numeric_ft(nu_k, s, t) - closed_form_ft(MeasureId::Nu, k as u32, s, t)).norm();
            max_ft_err = max_ft_err.max(em).max(en);
        }
    }
    report.computed("ft_sample_points_per_k", Quantity::Count(per_k as u64));
    report.computed("max_ft_error", Quantity::Real(max_ft_err));
    if max_ft_err > tol {
        failures.push(format!(
            "numeric vs closed-form transform error {max_ft_err:.3e} > {tol}"
        ));
    }

    if report.is_applicable() {
        report.conclude(failures.is_empty());
        if !failures.is_empty() {
            let mut quantities = BTreeMap::new();
            for (i, f) in failures.iter().enumerate() {
                quantities.insert(format!("failure_{i}"), Quantity::Text(f.clone()));
            }
            report.witnesses.push(Witness {
                label: "counterexample-reproduction-failure".to_string(),
                measures: Vec::new(),
                quantities,
            });
        }
    }
    Ok(CounterexampleRun {
        report,
        mu_powers,
        nu_powers,
    })
}

/// Report-only entry point.
pub fn verify_counterexample(
    g: &GridSpec,
    k_max: usize,
    tol: f64,
) -> Result<CheckReport, FejerError> {
    run_counterexample(g, k_max, tol).map(|r| r.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values() {
        // Limit at zero.
        assert!((fejer_kernel(0.0) - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);
        // Zero of sin(y/2) at 2π.
        assert!(fejer_kernel(2.0 * std::f64::consts::PI).abs() < 1e-30);
        // Tail bound F(y) ≤ 2/(π y²) and non-negativity.
        for y in [0.1, 1.0, 5.0, 37.0, 400.0] {
            let v = fejer_kernel(y);
            assert!(v >= 0.0);
            assert!(v <= 2.0 / (std::f64::consts::PI * y * y) + 1e-15, "y={y}");
        }
    }

    #[test]
    fn kernel_mass_close_to_one() {
        let g = GridSpec::default();
        let mass = g.sample(fejer_kernel).trapezoid_mass();
        let bound = 4.0 / (std::f64::consts::PI * g.half_width);
        assert!((mass - 1.0).abs() <= bound, "mass={mass} bound={bound}");
    }

    #[test]
    fn transform_is_triangle() {
        let g = GridSpec::default();
        let f = g.sample(fejer_kernel);
        for t in [-0.5f64, 0.0, 0.5] {
            let got = f.fourier_at(t);
            assert!(
                (got.re - (1.0 - t.abs())).abs() < 5e-3 && got.im.abs() < 5e-3,
                "t={t} got={got}"
            );
        }
        // Triangle vanishes at |t| = 1.
        for t in [-1.0f64, 1.0] {
            assert!(f.fourier_at(t).norm() < 5e-3);
        }
    }

    #[test]
    fn measure_x_locations() {
        let g = GridSpec::default();
        assert_eq!(build_mu(&g).x_locations(), vec![rat(-3), rat(1)]);
        assert_eq!(build_nu(&g).x_locations(), vec![rat(-2), rat(1)]);
    }

    #[test]
    fn fft_convolution_matches_direct() {
        let a = GridDensity {
            y0: 0.0,
            dy: 1.0,
            values: vec![1.0, 2.0, 3.0],
        };
        let b = GridDensity {
            y0: -1.0,
            dy: 1.0,
            values: vec![0.5, -1.0],
        };
        let mut conv = DensityConvolver::new();
        let c = conv.convolve(&a, &b).unwrap();
        // dy = 1: plain polynomial coefficients (1,2,3)*(0.5,−1).
        let expected = [0.5, 0.0, -0.5, -3.0];
        assert_eq!(c.len(), 4);
        assert!((c.y0 + 1.0).abs() < 1e-12);
        for (got, want) in c.values.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn squared_measure_atoms_and_vanishing_cross_terms() {
        // Coarser grid keeps the test quick; spectra still resolve.
        let g = GridSpec::new(100.0, 1 << 13).unwrap();
        let mu = build_mu(&g);
        let (mu2, log) = product_power(&mu, 2, 0.0).unwrap();
        // Without pruning: {2, −2, −6}.
        assert_eq!(mu2.x_locations(), vec![rat(-6), rat(-2), rat(2)]);
        assert!(log.is_empty());
        // Cross term at −2 nearly vanishes (spectra disjoint).
        let cross = mu2.density_at(&rat(-2)).unwrap().l1_mass();
        assert!(cross < 0.02, "cross mass {cross}");
        let nu = build_nu(&g);
        let (nu2, _) = product_power(&nu, 2, 0.0).unwrap();
        assert_eq!(nu2.x_locations(), vec![rat(-4), rat(-1), rat(2)]);
        let cross = nu2.density_at(&rat(-1)).unwrap().l1_mass();
        assert!(cross < 0.02, "cross mass {cross}");
    }

    #[test]
    fn closed_form_examples() {
        // Branch t ∈ (−1, 1) at s = 0, t = 0.
        let v = closed_form_ft(MeasureId::Mu, 3, 0.0, 0.0);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // Branch t ∈ (1, 3) at k = 2: e^{6is}.
        let s = 0.7;
        let v = closed_form_ft(MeasureId::Mu, 2, s, 2.0);
        assert!((v - Complex64::from_polar(1.0, 6.0 * s)).norm() < 1e-12);
        // Outside every branch.
        assert_eq!(closed_form_ft(MeasureId::Nu, 1, 0.3, 5.0).norm(), 0.0);
        // Second measure's modulation branch at t = 10.
        let v = closed_form_ft(MeasureId::Nu, 1, 0.0, 10.0);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn numeric_ft_matches_closed_form_at_k1() {
        let g = GridSpec::default();
        let mu = build_mu(&g);
        for (s, t) in [(0.0, 0.0), (0.5, 0.3), (-1.0, 2.5), (2.0, 7.0)] {
            let num = numeric_ft(&mu, s, t);
            let exact = closed_form_ft(MeasureId::Mu, 1, s, t);
            assert!((num - exact).norm() < 0.01, "s={s} t={t} {num} vs {exact}");
        }
        let nu = build_nu(&g);
        for (s, t) in [(0.0, 10.0), (1.0, -9.5), (0.2, 0.9)] {
            let num = numeric_ft(&nu, s, t);
            let exact = closed_form_ft(MeasureId::Nu, 1, s, t);
            assert!((num - exact).norm() < 0.01, "s={s} t={t} {num} vs {exact}");
        }
    }

    #[test]
    fn grid_overflow_detected() {
        let a = GridDensity {
            y0: 0.0,
            dy: 1.0,
            values: vec![0.0; MAX_FFT_LEN / 2 + 2],
        };
        let mut conv = DensityConvolver::new();
        match conv.convolve(&a, &a) {
            Err(FejerError::GridOverflow { .. }) => {}
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn invalid_grid_specs_rejected() {
        assert!(GridSpec::new(0.0, 1 << 10).is_err());
        assert!(GridSpec::new(100.0, 1000).is_err());
    }
}
