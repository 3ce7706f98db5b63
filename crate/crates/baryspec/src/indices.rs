//! The tree/forest functionals: τ, tree index T, forest index F, tree-forest
//! index i, Kirchhoff zeta values, the log-expansion of τ, spectral-gap and
//! Cheeger bounds, the Dirac variant τ_D, and closed-form family limits.
//!
//! Everything is carried in log space; raw forest counts overflow floating
//! point beyond a few dozen vertices.

use crate::complex::SimplicialGraph;
use crate::error::Result;
use crate::hodge::dirac_operator;
use crate::spectra::{
    eig_sym, fredholm_logdet, kth_eigenvalue_by_bisection, pseudo_det_log_cofactor,
    SpectrumSummary,
};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Tree index T = log Det(K)/|V|, forest index F = log det(1+K)/|V|, and
/// the tree-forest index i = F − T = log τ / |V|.
#[derive(Debug, Clone)]
pub struct IndexReport {
    pub n_vertices: usize,
    pub tree_index: f64,
    pub forest_index: f64,
    /// i = F − T ≥ 0, zero iff the graph has no edges.
    pub index: f64,
    pub tau_log: f64,
    /// Smallest nonzero Kirchhoff eigenvalue; None for edgeless graphs.
    pub lambda_min_positive: Option<f64>,
    /// λ₁ ≥ 1/(τ−1); infinite when τ = 1.
    pub gap_lower: f64,
    /// h ≥ 1/(2(τ−1)).
    pub cheeger_lower: f64,
}

impl IndexReport {
    /// τ as a plain number; +∞ once log τ overflows f64.
    pub fn tau(&self) -> f64 {
        self.tau_log.exp()
    }
}

/// Compute T, F, i from Cholesky log-determinants, with the spectral gap
/// from a dense eigensolve when the graph fits, else by inertia bisection.
pub fn index_report(g: &SimplicialGraph, tol: f64, dense_limit: usize) -> Result<IndexReport> {
    let n = g.n_vertices();
    if n == 0 {
        return Ok(IndexReport {
            n_vertices: 0,
            tree_index: 0.0,
            forest_index: 0.0,
            index: 0.0,
            tau_log: 0.0,
            lambda_min_positive: None,
            gap_lower: f64::INFINITY,
            cheeger_lower: f64::INFINITY,
        });
    }
    let k = g.kirchhoff();
    let log_det = pseudo_det_log_cofactor(g)?;
    let log_fredholm = fredholm_logdet(&k)?;
    let tau_log = log_fredholm - log_det;
    let lambda_min_positive = if g.n_edges() == 0 {
        None
    } else {
        match eig_sym(&k, tol, dense_limit) {
            Ok(s) => s.min_positive(),
            Err(crate::Error::DenseLimitExceeded { .. }) => {
                Some(kth_eigenvalue_by_bisection(&k, g.n_components(), tol)?)
            }
            Err(e) => return Err(e),
        }
    };
    let tau = tau_log.exp();
    let gap_lower = if tau > 1.0 { 1.0 / (tau - 1.0) } else { f64::INFINITY };
    Ok(IndexReport {
        n_vertices: n,
        tree_index: log_det / n as f64,
        forest_index: log_fredholm / n as f64,
        index: tau_log / n as f64,
        tau_log,
        lambda_min_positive,
        gap_lower,
        cheeger_lower: gap_lower / 2.0,
    })
}

/// Same functionals straight from an eigenvalue list (the dual route used
/// by the consistency checks).
pub fn index_from_spectrum(spectrum: &SpectrumSummary, n_vertices: usize) -> IndexReport {
    let positive = spectrum.positive();
    let log_det: f64 = positive.iter().map(|l| l.ln()).sum();
    let log_fredholm: f64 = spectrum.eigenvalues.iter().map(|l| (1.0 + l.max(0.0)).ln()).sum();
    let tau_log = log_fredholm - log_det;
    let tau = tau_log.exp();
    let gap_lower = if tau > 1.0 { 1.0 / (tau - 1.0) } else { f64::INFINITY };
    IndexReport {
        n_vertices,
        tree_index: log_det / n_vertices as f64,
        forest_index: log_fredholm / n_vertices as f64,
        index: tau_log / n_vertices as f64,
        tau_log,
        lambda_min_positive: positive.first().copied(),
        gap_lower,
        cheeger_lower: gap_lower / 2.0,
    }
}

/// Number of rooted spanning forests in the cycle C_n: the alternate Lucas
/// sequence L(n+1) = 3L(n) − L(n−1) + 2, L(0)=0, L(1)=1.
pub fn lucas_forest_count(n: usize) -> BigUint {
    let mut prev = BigUint::zero();
    let mut cur = BigUint::one();
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = BigUint::from(3u32) * &cur + BigUint::from(2u32) - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Natural log of a BigUint, safe far beyond the f64 exponent range.
pub fn big_ln(b: &BigUint) -> f64 {
    if b.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = b.bits();
    if bits <= 900 {
        b.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        let top = (b >> shift).to_f64().unwrap();
        top.ln() + (shift as f64) * std::f64::consts::LN_2
    }
}

/// Kirchhoff zeta values ζ(s) = Σ_{λ≠0} λ^{−s}, raw and normalized by the
/// vertex count.
#[derive(Debug, Clone)]
pub struct ZetaTable {
    /// `(s, raw ζ(s), ζ(s)/f_0)`.
    pub values: Vec<(f64, f64, f64)>,
}

pub fn zeta(spectrum: &SpectrumSummary, n_vertices: usize, s_list: &[f64]) -> ZetaTable {
    let positive = spectrum.positive();
    let values = s_list
        .iter()
        .map(|&s| {
            let raw: f64 = positive.iter().map(|l| l.powf(-s)).sum();
            (s, raw, raw / n_vertices as f64)
        })
        .collect();
    ZetaTable { values }
}

/// Partial sums of log τ = Σ_{k≥1} (−1)^{k+1} ζ(k)/k.
#[derive(Debug, Clone)]
pub struct LogTauSeries {
    pub partial_sums: Vec<f64>,
    /// Set when some nonzero eigenvalue is below 1, where the termwise
    /// expansion loses its guarantee.
    pub divergence_risk: bool,
    /// ζ(n+1)/(n+1), valid as an error bound when λ_min > 1.
    pub tail_bound: f64,
}

pub fn log_tau_series(spectrum: &SpectrumSummary, n_terms: usize) -> LogTauSeries {
    let positive = spectrum.positive();
    let divergence_risk = positive.first().is_some_and(|&l| l < 1.0);
    let mut partial_sums = Vec::with_capacity(n_terms);
    let mut acc = 0.0;
    for k in 1..=n_terms {
        let zk: f64 = positive.iter().map(|l| l.powi(-(k as i32))).sum();
        let term = zk / k as f64;
        acc += if k % 2 == 1 { term } else { -term };
        partial_sums.push(acc);
    }
    let tail: f64 = positive
        .iter()
        .map(|l| l.powi(-(n_terms as i32 + 1)))
        .sum::<f64>()
        / (n_terms + 1) as f64;
    LogTauSeries {
        partial_sums,
        divergence_risk,
        tail_bound: tail,
    }
}

/// The inequality chain around the spectral gap: λ₁ ≥ 1/(τ−1),
/// τ ≥ 1 + 1/λ₁, and (when the exact Cheeger constant is computable)
/// h ≥ λ₁/2 and h ≥ 1/(2(τ−1)).
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub lambda1: f64,
    pub tau: f64,
    pub gap_lower: f64,
    pub cheeger_lower: f64,
    pub cheeger_exact: Option<f64>,
    pub all_hold: bool,
}

pub fn bounds_check(g: &SimplicialGraph, tol: f64, dense_limit: usize) -> Result<BoundsReport> {
    let report = index_report(g, tol, dense_limit)?;
    let lambda1 = report
        .lambda_min_positive
        .ok_or_else(|| crate::Error::InvalidGraph("bounds_check needs at least one edge".into()))?;
    let tau = report.tau();
    let slack = 1e-9 * (1.0 + lambda1.abs());
    let mut all_hold = lambda1 + slack >= report.gap_lower && tau + 1e-9 >= 1.0 + 1.0 / lambda1;
    let cheeger_exact = if g.n_vertices() <= 16 && g.is_connected() {
        let h = crate::oracle::cheeger_exact(g)?;
        all_hold = all_hold && h + 1e-12 >= lambda1 / 2.0 - slack && h + 1e-12 >= report.cheeger_lower;
        Some(h)
    } else {
        None
    };
    Ok(BoundsReport {
        lambda1,
        tau,
        gap_lower: report.gap_lower,
        cheeger_lower: report.cheeger_lower,
        cheeger_exact,
        all_hold,
    })
}

/// The Dirac tree-forest ratio ∏_{λ>0} (1 − 1/λ²) over the positive Dirac
/// spectrum (square roots of the positive Hodge eigenvalues, one per
/// supersymmetric pair); a factor with λ = 1 is skipped and flagged.
#[derive(Debug, Clone)]
pub struct DiracTau {
    pub value: f64,
    pub log_abs: f64,
    pub sign: f64,
    /// Count of excluded unit eigenvalues.
    pub excluded: usize,
    /// Positive Dirac spectrum, ascending.
    pub dirac_spectrum: Vec<f64>,
}

pub fn dirac_tau(g: &SimplicialGraph, tol: f64, dense_limit: usize) -> Result<DiracTau> {
    let d = dirac_operator(g);
    let spectrum = eig_sym(&d, tol, dense_limit)?;
    let zero_tol = spectrum.zero_tol();
    let positive: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .copied()
        .filter(|&l| l > zero_tol)
        .collect();
    let mut log_abs = 0.0;
    let mut sign = 1.0;
    let mut excluded = 0;
    let unit_tol = 1e-9;
    for &l in &positive {
        if (l - 1.0).abs() <= unit_tol {
            excluded += 1;
            continue;
        }
        let factor = 1.0 - 1.0 / (l * l);
        log_abs += factor.abs().ln();
        if factor < 0.0 {
            sign = -sign;
        }
    }
    Ok(DiracTau {
        value: sign * log_abs.exp(),
        log_abs,
        sign,
        excluded,
        dirac_spectrum: positive,
    })
}

/// Partial product ∏_{n=1..N} (1 + 1/n²) → sinh(π)/π, with the tail bound
/// Σ_{n>N} 1/n² < 1/N controlling the error.
pub fn circle_tau(n_terms: usize) -> (f64, f64) {
    let mut log_sum = 0.0;
    for n in 1..=n_terms {
        log_sum += (1.0 / (n as f64 * n as f64)).ln_1p();
    }
    let value = log_sum.exp();
    let err_bound = value * ((1.0 / n_terms as f64).exp() - 1.0);
    (value, err_bound)
}

/// τ(C̄_n) from the closed-form complement spectrum
/// μ_k = n − 2 + 2cos(2πk/n), k = 1..n−1; τ(C̄_n) → e.
pub fn cycle_complement_tau(n: usize) -> Result<f64> {
    if n < 5 {
        return Err(crate::Error::FamilyTooSmall {
            family: "cycle_complement".into(),
            min: 5,
            n,
        });
    }
    let mut tau_log = 0.0;
    for k in 1..n {
        let mu = n as f64 - 2.0 + 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos();
        tau_log += (1.0 + 1.0 / mu).ln();
    }
    Ok(tau_log.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{family, family_with_dim, Family};
    use crate::spectra::{DEFAULT_DENSE_LIMIT, DEFAULT_TOL};

    fn report(g: &SimplicialGraph) -> IndexReport {
        index_report(g, DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn tau_of_k2_is_three_halves() {
        let r = report(&family(&Family::Complete, 2).unwrap());
        assert!(close(r.tau(), 1.5, 1e-12));
        assert!(close(r.index, (1.5f64).ln() / 2.0, 1e-12));
    }

    #[test]
    fn tau_of_c4() {
        let r = report(&family(&Family::Cycle, 4).unwrap());
        assert!(close(r.tau(), 45.0 / 16.0, 1e-12));
    }

    #[test]
    fn tau_of_complete_graphs_closed_form() {
        for n in 2..=50 {
            let g = family_with_dim(&Family::Complete, n, Some(1)).unwrap();
            let r = report(&g);
            let expect = (n as f64 - 1.0) * (1.0 + 1.0 / n as f64).ln();
            assert!(close(r.tau_log, expect, 1e-10), "n={n}");
        }
    }

    #[test]
    fn edgeless_graph_has_tau_one() {
        let g = SimplicialGraph::build_complex(4, &[], None).unwrap();
        let r = report(&g);
        assert_eq!(r.tau_log, 0.0);
        assert_eq!(r.index, 0.0);
        assert!(r.lambda_min_positive.is_none());
    }

    #[test]
    fn index_is_additive_over_disjoint_union() {
        let a = family(&Family::Cycle, 5).unwrap();
        let b = family(&Family::Star, 4).unwrap();
        let u = a.disjoint_union(&b);
        let (ra, rb, ru) = (report(&a), report(&b), report(&u));
        assert!(close(ru.tau_log, ra.tau_log + rb.tau_log, 1e-10));
    }

    #[test]
    fn lucas_recursion_values() {
        assert_eq!(lucas_forest_count(0), BigUint::zero());
        assert_eq!(lucas_forest_count(1), BigUint::one());
        assert_eq!(lucas_forest_count(3), BigUint::from(16u32));
        assert_eq!(lucas_forest_count(4), BigUint::from(45u32));
    }

    #[test]
    fn lucas_matches_fredholm_determinant_of_cycles() {
        for n in 3..=12 {
            let g = family(&Family::Cycle, n).unwrap();
            let log_forests = fredholm_logdet(&g.kirchhoff()).unwrap();
            assert!(close(log_forests, big_ln(&lucas_forest_count(n)), 1e-10), "n={n}");
        }
    }

    #[test]
    fn big_ln_handles_huge_values() {
        let l = lucas_forest_count(2000);
        let expect = 2000.0 * 2.0 * ((1.0 + 5.0f64.sqrt()) / 2.0).ln();
        assert!((big_ln(&l) - expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn zeta_values_of_k4_and_c4() {
        let k4 = family(&Family::Complete, 4).unwrap();
        let s = eig_sym(&k4.kirchhoff(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap();
        let t = zeta(&s, 4, &[0.0, 1.0]);
        assert!(close(t.values[0].1, 3.0, 1e-12));
        assert!(close(t.values[1].1, 0.75, 1e-12));
        let c4 = family(&Family::Cycle, 4).unwrap();
        let s = eig_sym(&c4.kirchhoff(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap();
        let t = zeta(&s, 4, &[2.0]);
        assert!(close(t.values[0].1, 9.0 / 16.0, 1e-12));
    }

    #[test]
    fn series_matches_closed_form_for_k4() {
        let g = family(&Family::Complete, 4).unwrap();
        let s = eig_sym(&g.kirchhoff(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap();
        let series = log_tau_series(&s, 40);
        let expect = 3.0 * (1.25f64).ln();
        assert!(!series.divergence_risk);
        assert!((series.partial_sums.last().unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn series_for_c3() {
        let g = family(&Family::Cycle, 3).unwrap();
        let s = eig_sym(&g.kirchhoff(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap();
        let series = log_tau_series(&s, 60);
        assert!((series.partial_sums.last().unwrap() - (16.0f64 / 9.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn series_with_unit_eigenvalue_converges_slowly() {
        // star K_{1,3}: eigenvalues {0,1,1,4}; each unit eigenvalue
        // contributes the alternating harmonic series toward log 2
        let g = family(&Family::Star, 4).unwrap();
        let s = eig_sym(&g.kirchhoff(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap();
        let series = log_tau_series(&s, 4000);
        assert!(!series.divergence_risk);
        let direct = 2.0 * 2.0f64.ln() + (1.25f64).ln();
        assert!((series.partial_sums.last().unwrap() - direct).abs() < 1e-3);
    }

    #[test]
    fn bounds_tight_for_k2() {
        let r = bounds_check(&family(&Family::Complete, 2).unwrap(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT)
            .unwrap();
        assert!(close(r.lambda1, 2.0, 1e-9));
        assert!(close(r.gap_lower, 2.0, 1e-9));
        assert!(r.all_hold);
    }

    #[test]
    fn bounds_hold_for_c4_and_p6() {
        for g in [
            family(&Family::Cycle, 4).unwrap(),
            family(&Family::Path, 6).unwrap(),
        ] {
            let r = bounds_check(&g, DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap();
            assert!(r.all_hold);
            assert!(r.cheeger_exact.is_some());
        }
    }

    #[test]
    fn dirac_tau_of_c4() {
        let t = dirac_tau(&family(&Family::Cycle, 4).unwrap(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT)
            .unwrap();
        // positive Dirac spectrum {√2, √2, 2}
        assert_eq!(t.dirac_spectrum.len(), 3);
        assert!(close(t.value, 3.0 / 16.0, 1e-10));
        assert_eq!(t.excluded, 0);
    }

    #[test]
    fn dirac_tau_of_k2() {
        // D on 3 simplices has spectrum {−√2, 0, √2}: one positive value
        let t = dirac_tau(&family(&Family::Complete, 2).unwrap(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT)
            .unwrap();
        assert_eq!(t.dirac_spectrum.len(), 1);
        assert!(close(t.dirac_spectrum[0], 2.0f64.sqrt(), 1e-12));
        assert!(close(t.value, 0.5, 1e-10));
    }

    #[test]
    fn dirac_unit_eigenvalue_excluded() {
        // P3: Hodge spectrum contains 1, so the Dirac spectrum does too
        let t = dirac_tau(&family(&Family::Path, 3).unwrap(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT)
            .unwrap();
        assert_eq!(t.excluded, 1);
        assert!(close(t.value, 2.0 / 3.0, 1e-10));
    }

    #[test]
    fn circle_tau_partial_products() {
        assert_eq!(circle_tau(1).0, 2.0);
        let target = std::f64::consts::PI.sinh() / std::f64::consts::PI;
        let (v, err) = circle_tau(1_000_000);
        assert!((v - target).abs() < 1e-5);
        assert!((v - target).abs() <= err * 1.5 + 1e-12);
    }

    #[test]
    fn cycle_complement_routes_agree() {
        // n=5: the complement of C5 is again a 5-cycle
        let direct5 = report(&family(&Family::Cycle, 5).unwrap()).tau();
        assert!(close(cycle_complement_tau(5).unwrap(), direct5, 1e-9));
        // n=10: closed form vs dense eigensolve of the complement graph
        let g = family(&Family::CycleComplement, 10).unwrap();
        assert!(close(cycle_complement_tau(10).unwrap(), report(&g).tau(), 1e-9));
        assert!(cycle_complement_tau(4).is_err());
    }

    #[test]
    fn cycle_complement_tau_approaches_e() {
        let t = cycle_complement_tau(200).unwrap();
        assert!((t - std::f64::consts::E).abs() < 0.02);
    }

    #[test]
    fn spectrum_route_matches_cholesky_route() {
        for g in [
            family(&Family::Cycle, 9).unwrap(),
            family(&Family::CycleComplement, 11).unwrap(),
            family(&Family::Complete, 6).unwrap(),
        ] {
            let s = eig_sym(&g.kirchhoff(), DEFAULT_TOL, DEFAULT_DENSE_LIMIT).unwrap();
            let via_spec = index_from_spectrum(&s, g.n_vertices());
            let via_chol = report(&g);
            assert!(close(via_spec.index, via_chol.index, 1e-9));
        }
    }
}
