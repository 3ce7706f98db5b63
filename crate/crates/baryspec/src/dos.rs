//! Empirical spectral measures and their limit-theory toolkit: integrated
//! density of states, logarithmic potential U(z), Hurwitz spectral zeta
//! ζ_z(s), the 1-D arcsine closed forms, gap detection, exponential tail
//! fitting and the Wiener criterion test.

use crate::error::{Error, Result};
use crate::spectra::SpectrumSummary;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Normalized point measure on the eigenvalues (weight 1/n each).
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    /// Sorted ascending, zeros included.
    pub atoms: Vec<f64>,
    zero_tol: f64,
}

impl EmpiricalMeasure {
    pub fn n(&self) -> usize {
        self.atoms.len()
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    /// Integrated density of states μ[0, x] (mass at or below x).
    pub fn ids(&self, x: f64) -> f64 {
        self.atoms.partition_point(|&l| l <= x) as f64 / self.n() as f64
    }

    /// Tail mass μ[x, ∞).
    pub fn tail_mass(&self, x: f64) -> f64 {
        (self.n() - self.atoms.partition_point(|&l| l < x)) as f64 / self.n() as f64
    }

    pub fn nonzero_atoms(&self) -> impl Iterator<Item = f64> + '_ {
        let tol = self.zero_tol;
        self.atoms.iter().copied().filter(move |&l| l > tol)
    }
}

pub fn empirical_measure(spectrum: &SpectrumSummary) -> Result<EmpiricalMeasure> {
    if spectrum.eigenvalues.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok(EmpiricalMeasure {
        atoms: spectrum.eigenvalues.clone(),
        zero_tol: spectrum.zero_tol(),
    })
}

/// Value of the logarithmic potential at one point, with the principal
/// branch of log(x − z) (cut where x − z is a negative real).
#[derive(Debug, Clone, Copy)]
pub struct PotentialSample {
    pub z: Complex64,
    /// Re U(z) = mean of log|λ − z|.
    pub u: f64,
    /// Im U(z); for z just above the real axis this is π × tail mass.
    pub arg_part: f64,
}

/// U(z) = (1/n) Σ log(λ − z). At z = 0 the zero atoms are excluded (the
/// pseudo-determinant convention); elsewhere all atoms enter and a
/// collision with an atom is an error.
pub fn potential(m: &EmpiricalMeasure, z: Complex64) -> Result<PotentialSample> {
    let n = m.n() as f64;
    let at_origin = z.re == 0.0 && z.im == 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut nearest = f64::INFINITY;
    for &l in &m.atoms {
        if at_origin && l <= m.zero_tol {
            continue;
        }
        let w = Complex64::new(l, 0.0) - z;
        nearest = nearest.min(w.norm());
        sum += w.ln();
    }
    if nearest < 1e-12 {
        return Err(Error::AtomCollision {
            z: z.re,
            dist: nearest,
        });
    }
    Ok(PotentialSample {
        z,
        u: sum.re / n,
        arg_part: sum.im / n,
    })
}

/// i(G) as a difference of two potential values: U(−1) − U(0), the latter
/// over the nonzero atoms only.
pub fn index_from_measure(m: &EmpiricalMeasure) -> Result<f64> {
    let u_minus_one = potential(m, Complex64::new(-1.0, 0.0))?.u;
    let u_zero = potential(m, Complex64::new(0.0, 0.0))?.u;
    Ok(u_minus_one - u_zero)
}

/// Hurwitz spectral zeta value ζ_z(s) = (1/n) Σ (λ − z)^{−s}, principal
/// branch. Zero atoms are excluded for real z ≤ 0 (matching the potential
/// convention at the origin).
#[derive(Debug, Clone, Copy)]
pub struct HurwitzValue {
    pub value: Complex64,
    /// Set when z sits on the positive real axis between atoms, where the
    /// principal branch is a choice rather than a limit.
    pub branch_flagged: bool,
}

pub fn hurwitz_zeta(m: &EmpiricalMeasure, z: Complex64, s: f64) -> Result<HurwitzValue> {
    let n = m.n() as f64;
    let real_nonpositive = z.im == 0.0 && z.re <= 0.0;
    let branch_flagged = z.im == 0.0 && z.re > 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for &l in &m.atoms {
        if real_nonpositive && l <= m.zero_tol {
            continue;
        }
        let w = Complex64::new(l, 0.0) - z;
        if w.norm() < 1e-12 {
            return Err(Error::AtomCollision {
                z: z.re,
                dist: w.norm(),
            });
        }
        sum += (-s * w.ln()).exp();
    }
    Ok(HurwitzValue {
        value: sum / n,
        branch_flagged,
    })
}

/// A spectral gap (a, b) with the constant IDS value inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub a: f64,
    pub b: f64,
    pub ids_inside: f64,
}

/// Maximal open intervals of width ≥ min_width containing no atom.
/// Finite-n spectra have spurious micro-gaps, hence the width floor.
pub fn detect_gaps(m: &EmpiricalMeasure, min_width: f64) -> Vec<Gap> {
    let n = m.n() as f64;
    let mut gaps = Vec::new();
    for (i, w) in m.atoms.windows(2).enumerate() {
        if w[1] - w[0] >= min_width {
            gaps.push(Gap {
                a: w[0],
                b: w[1],
                ids_inside: (i + 1) as f64 / n,
            });
        }
    }
    gaps
}

/// Least-squares fit of log μ[x,∞) against x: μ[x,∞) ≈ C e^{slope·x}.
#[derive(Debug, Clone, Copy)]
pub struct TailFit {
    pub log_c: f64,
    /// Fitted slope of the log tail; negative for exponential decay.
    pub slope: f64,
    /// Sup-norm residual of the fit over the used grid.
    pub residual_sup: f64,
    pub points_used: usize,
}

pub fn tail_fit(m: &EmpiricalMeasure, x_grid: &[f64]) -> Result<TailFit> {
    let pts: Vec<(f64, f64)> = x_grid
        .iter()
        .filter_map(|&x| {
            let t = m.tail_mass(x);
            (t > 0.0).then(|| (x, t.ln()))
        })
        .collect();
    if pts.len() < 4 {
        return Err(Error::Numerical(format!(
            "tail fit declined: only {} grid points carry positive tail mass",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let log_c = (sy - slope * sx) / n;
    let residual_sup = pts
        .iter()
        .map(|&(x, y)| (y - (log_c + slope * x)).abs())
        .fold(0.0, f64::max);
    Ok(TailFit {
        log_c,
        slope,
        residual_sup,
        points_used: pts.len(),
    })
}

/// Cesàro averages (1/N) Σ_{k<N} |μ̂(k)|² of the measure restricted to
/// [0,4] and rescaled to the circle (t = πx/2). By Wiener's criterion the
/// averages tend to zero exactly when the measure has no point part; the
/// trend is reported, never asserted.
pub fn wiener_test(m: &EmpiricalMeasure, n_coeffs: usize) -> Result<Vec<f64>> {
    let restricted: Vec<f64> = m
        .atoms
        .iter()
        .copied()
        .filter(|&l| (0.0..=4.0).contains(&l))
        .collect();
    if restricted.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let w = 1.0 / restricted.len() as f64;
    let mut averages = Vec::with_capacity(n_coeffs);
    let mut running = 0.0;
    for k in 0..n_coeffs {
        let coeff: Complex64 = restricted
            .iter()
            .map(|&x| Complex64::new(0.0, k as f64 * (PI * x / 2.0)).exp())
            .sum::<Complex64>()
            * w;
        running += coeff.norm_sqr();
        averages.push(running / (k + 1) as f64);
    }
    Ok(averages)
}

/// The 1-D Barycentric limit: arcsine density 1/(π√(x(4−x))) on [0,4],
/// the equilibrium measure of that interval. The substitution x = 2−2cos θ
/// turns every integral into (1/π)∫₀^π f(2−2cos θ) dθ.
#[derive(Debug, Clone, Copy, Default)]
pub struct ArcsineMeasure;

impl ArcsineMeasure {
    /// U(z) by tanh-sinh quadrature; `z` real, off the open support unless
    /// the integrable endpoint singularity is the only obstruction.
    pub fn potential(&self, z: f64) -> f64 {
        let f = |theta: f64| {
            // 2 − 2cos θ, in the form stable near θ = 0
            let x = 4.0 * (0.5 * theta).sin().powi(2);
            (x - z).abs().ln()
        };
        if (0.0..=4.0).contains(&z) {
            // split at the interior singularity x(θ0) = z
            let theta0 = (1.0 - z / 2.0).clamp(-1.0, 1.0).acos();
            (tanh_sinh(&f, 0.0, theta0, 1e-12) + tanh_sinh(&f, theta0, PI, 1e-12)) / PI
        } else {
            tanh_sinh(&f, 0.0, PI, 1e-12) / PI
        }
    }

    /// IDS of the arcsine measure: arccos(1 − x/2)/π on [0,4].
    pub fn ids(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= 4.0 {
            1.0
        } else {
            (1.0 - x / 2.0).acos() / PI
        }
    }

    /// Fourier coefficient μ̂(k) under the same circle rescaling used by
    /// [`wiener_test`].
    pub fn fourier_coeff(&self, k: usize) -> Complex64 {
        let f_re = |theta: f64| (k as f64 * PI / 2.0 * (2.0 - 2.0 * theta.cos())).cos();
        let f_im = |theta: f64| (k as f64 * PI / 2.0 * (2.0 - 2.0 * theta.cos())).sin();
        Complex64::new(
            tanh_sinh(&f_re, 0.0, PI, 1e-12) / PI,
            tanh_sinh(&f_im, 0.0, PI, 1e-12) / PI,
        )
    }

    /// Cesàro averages of |μ̂(k)|².
    pub fn wiener_averages(&self, n_coeffs: usize) -> Vec<f64> {
        let mut averages = Vec::with_capacity(n_coeffs);
        let mut running = 0.0;
        for k in 0..n_coeffs {
            running += self.fourier_coeff(k).norm_sqr();
            averages.push(running / (k + 1) as f64);
        }
        averages
    }
}

/// Tanh-sinh (double exponential) quadrature on [a, b]; handles integrable
/// endpoint singularities like the log blow-ups of the arcsine potential.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> f64 {
        let u = 0.5 * PI * t.sinh();
        // distance of the node from the endpoint it clusters toward,
        // 1 − |tanh u| computed without cancellation so that endpoint
        // log singularities keep full relative accuracy
        let s = 2.0 / ((2.0 * u.abs()).exp() + 1.0);
        let x = if t >= 0.0 { b - half * s } else { a + half * s };
        let w = 0.5 * PI * t.cosh() / u.cosh().powi(2);
        let v = f(x);
        if v.is_finite() {
            w * v
        } else {
            0.0
        }
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut level_max = 4.0;
    // refine by halving h; nodes at odd multiples of the new h are new
    let mut estimate = f64::NAN;
    for _ in 0..12 {
        let mut k = 1.0;
        while k * h <= level_max {
            sum += eval(k * h) + eval(-k * h);
            k += if estimate.is_nan() { 1.0 } else { 2.0 };
        }
        let new_estimate = sum * h * half;
        if (new_estimate - estimate).abs() <= tol * (1.0 + new_estimate.abs()) {
            return new_estimate;
        }
        estimate = new_estimate;
        h *= 0.5;
        level_max += 1.0;
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{family, Family};
    use crate::indices::index_report;
    use crate::spectra::{eig_sym, DEFAULT_DENSE_LIMIT, DEFAULT_TOL};

    fn measure(g: &crate::SimplicialGraph) -> EmpiricalMeasure {
        let s = eig_sym(&g.kirchhoff(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap();
        empirical_measure(&s).unwrap()
    }

    #[test]
    fn quadrature_smoke() {
        let one = tanh_sinh(&|x: f64| x.cos(), 0.0, PI / 2.0, 1e-12);
        assert!((one - 1.0).abs() < 1e-10);
        // endpoint log singularity: ∫₀¹ ln x dx = −1
        let v = tanh_sinh(&|x: f64| x.ln(), 0.0, 1.0, 1e-12);
        assert!((v + 1.0).abs() < 1e-9);
    }

    #[test]
    fn empirical_measure_of_k4() {
        let m = measure(&family(&Family::Complete, 4).unwrap());
        assert_eq!(m.n(), 4);
        assert!((m.atoms[0]).abs() < 1e-12);
        assert!((m.atoms[3] - 4.0).abs() < 1e-10);
        assert!((m.ids(3.0) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn c4_ids() {
        let m = measure(&family(&Family::Cycle, 4).unwrap());
        assert!((m.ids(3.0) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn k4_potential_difference_closed_form() {
        let m = measure(&family(&Family::Complete, 4).unwrap());
        let i = index_from_measure(&m).unwrap();
        assert!((i - 0.75 * (1.25f64).ln()).abs() < 1e-10);
    }

    #[test]
    fn index_from_measure_matches_index_report() {
        for g in [
            family(&Family::Cycle, 7).unwrap(),
            family(&Family::Star, 6).unwrap(),
            family(&Family::CycleComplement, 9).unwrap(),
        ] {
            let m = measure(&g);
            let i1 = index_from_measure(&m).unwrap();
            let i2 = index_report(&g, DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap().index;
            assert!((i1 - i2).abs() < 1e-9);
        }
    }

    #[test]
    fn potential_rejects_atom_collision() {
        let m = measure(&family(&Family::Complete, 4).unwrap());
        assert!(matches!(
            potential(&m, Complex64::new(4.0, 0.0)),
            Err(Error::AtomCollision { .. })
        ));
    }

    #[test]
    fn arcsine_closed_forms() {
        let a = ArcsineMeasure;
        assert!(a.potential(0.0).abs() < 1e-8, "U(0) = {}", a.potential(0.0));
        let arccosh = |x: f64| (x + (x * x - 1.0).sqrt()).ln();
        assert!((a.potential(-1.0) - arccosh(1.5)).abs() < 1e-8);
        assert!((a.ids(2.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hurwitz_k4_closed_form() {
        let m = measure(&family(&Family::Complete, 4).unwrap());
        let v = hurwitz_zeta(&m, Complex64::new(-1.0, 0.0), 1.0).unwrap();
        assert!((v.value.re - 0.15).abs() < 1e-12);
        assert!(v.value.im.abs() < 1e-12);
        assert!(!v.branch_flagged);
        // s = 0 counts the included atoms (zeros excluded for real z ≤ 0)
        let v0 = hurwitz_zeta(&m, Complex64::new(-1.0, 0.0), 0.0).unwrap();
        assert!((v0.value.re - 0.75).abs() < 1e-12);
    }

    #[test]
    fn hurwitz_is_minus_derivative_of_potential() {
        let m = measure(&family(&Family::CycleComplement, 8).unwrap());
        for z in [
            Complex64::new(-2.0, 0.5),
            Complex64::new(1.5, 1.0),
            Complex64::new(-0.5, -0.7),
        ] {
            let h = 1e-5;
            let up = potential(&m, z + Complex64::new(h, 0.0)).unwrap();
            let dn = potential(&m, z - Complex64::new(h, 0.0)).unwrap();
            let du = (up.u - dn.u) / (2.0 * h);
            let zeta1 = hurwitz_zeta(&m, z, 1.0).unwrap().value;
            assert!((du + zeta1.re).abs() < 1e-6);
        }
    }

    #[test]
    fn gaps_of_a_single_atom() {
        let m = EmpiricalMeasure {
            atoms: vec![2.0],
            zero_tol: 1e-14,
        };
        assert!(detect_gaps(&m, 0.25).is_empty()); // gaps need two atoms to bound them
        let m2 = EmpiricalMeasure {
            atoms: vec![0.0, 2.0, 2.1],
            zero_tol: 1e-14,
        };
        let gaps = detect_gaps(&m2, 0.5);
        assert_eq!(gaps.len(), 1);
        assert_eq!(gaps[0].a, 0.0);
        assert_eq!(gaps[0].b, 2.0);
        assert!((gaps[0].ids_inside - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn large_cycle_has_no_wide_interior_gap() {
        let g = family(&Family::Cycle, 100).unwrap();
        let m = measure(&g);
        let gaps = detect_gaps(&m, 0.5);
        assert!(gaps.iter().all(|g| g.b <= 0.5 || g.a >= 3.5), "{gaps:?}");
    }

    #[test]
    fn tail_fit_recovers_geometric_decay() {
        // atoms packed so that μ[x,∞) = e^{−x} at x = 1..8
        let mut atoms = Vec::new();
        let n = 4096;
        for i in 0..n {
            // inverse CDF of Exp(1)
            let u = (i as f64 + 0.5) / n as f64;
            atoms.push(-(1.0 - u).ln());
        }
        atoms.sort_by(f64::total_cmp);
        let m = EmpiricalMeasure {
            atoms,
            zero_tol: 1e-14,
        };
        let grid: Vec<f64> = (1..=6).map(|x| x as f64).collect();
        let fit = tail_fit(&m, &grid).unwrap();
        assert!(fit.slope < 0.0);
        assert!((fit.slope + 1.0).abs() < 0.05);
        assert!(fit.residual_sup < 0.1);
    }

    #[test]
    fn tail_fit_declines_without_mass() {
        let m = measure(&family(&Family::Cycle, 8).unwrap());
        let grid = [10.0, 12.0, 14.0, 16.0, 18.0];
        assert!(tail_fit(&m, &grid).is_err());
    }

    #[test]
    fn wiener_point_mass_stays_at_one() {
        let m = EmpiricalMeasure {
            atoms: vec![2.0],
            zero_tol: 1e-14,
        };
        let avg = wiener_test(&m, 20).unwrap();
        assert!(avg.iter().all(|&a| (a - 1.0).abs() < 1e-12));
    }

    #[test]
    fn wiener_arcsine_averages_decay() {
        let a = ArcsineMeasure;
        let avg = a.wiener_averages(40);
        assert!(avg[39] < avg[4]);
        assert!(avg[39] < 0.2);
    }
}
