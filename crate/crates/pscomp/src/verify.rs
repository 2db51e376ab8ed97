//! Property suites: one per verified statement, each returning a pass/fail
//! report. The CLI `verify` subcommand aggregates them into a JSON document;
//! the suites also back the acceptance tests at their pinned parameters.

use rand::Rng;
use serde::Serialize;

use crate::bspline::{
    bspline_build, concavity_floor, hermitian_form_density, w_functionals,
};
use crate::compressions::hermitian_part;
use crate::matrix::{self, complex, CMatrix};
use crate::numerical_measure as nm;
use crate::numrange;
use crate::pseudospectrum as ps;
use crate::rand_frames::{polarization_net, sample_haar_frame, verify_net_inequality};
use crate::rng::RngStream;
use crate::stats;
use crate::tail_bounds as tb;
use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub label: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str, label: &str) -> Self {
        SuiteReport { name: name.into(), label: label.into(), passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if !ok {
            self.passed = false;
        }
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("     {detail}"));
    }
}

/// All suite names, in the order `run_all` executes them.
pub const SUITE_NAMES: [&str; 21] = [
    "haar", "a17", "a22", "a24", "a25", "a35", "a36", "a41", "a42", "a44", "a45", "a46", "a47",
    "a49", "a52", "a53", "a56", "a57", "a7", "a12", "a2",
];

/// Resolve CLI aliases to canonical suite names.
pub fn canonical_suite_name(name: &str) -> Option<&'static str> {
    let lowered = name.to_lowercase();
    let target = match lowered.as_str() {
        "net" => "a17",
        "reduction" => "a7",
        "area49" => "a49",
        "inradius52" => "a52",
        "corner53" => "a53",
        "smallball" => "a12",
        other => other,
    };
    SUITE_NAMES.iter().find(|n| **n == target).copied()
}

pub fn run_suite(name: &str, stream: &RngStream) -> Result<SuiteReport> {
    match name {
        "haar" => suite_haar(stream),
        "a17" => suite_a17_net(stream),
        "a22" => suite_a22_spline(stream),
        "a24" => suite_a24_ks(stream),
        "a25" => suite_a25_first_order(stream),
        "a35" => suite_a35_concavity(stream),
        "a36" => suite_a36_hilbert(stream),
        "a41" => suite_a41_regularized(stream),
        "a42" => suite_a42_w_ratio(stream),
        "a44" => suite_a44_l1(stream),
        "a45" => suite_a45_appendix(stream),
        "a46" => suite_a46_cone(stream),
        "a47" => suite_a47_witness(stream),
        "a49" => suite_a49_area(stream),
        "a52" => suite_a52_inradius(stream),
        "a53" => suite_a53_corner(stream),
        "a56" => suite_a56_consistency(stream),
        "a57" => suite_a57_shift(stream),
        "a7" => suite_a7_reduction(stream),
        "a12" => suite_a12_smallball(stream),
        "a2" => suite_a2_theorem(stream),
        other => Err(crate::Error::InvalidArgument(format!("unknown suite `{other}`"))),
    }
}

pub fn run_all(seed: u64) -> Result<Vec<SuiteReport>> {
    SUITE_NAMES
        .iter()
        .enumerate()
        .map(|(i, name)| run_suite(name, &RngStream::new(seed, i as u64)))
        .collect()
}

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

// ---------------------------------------------------------------------------

fn suite_haar(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("haar", "Haar frame sampling invariants");
    let mut rng = stream.rng();
    let mut worst: f64 = 0.0;
    for &(m, k) in &[(5usize, 3usize), (8, 2), (12, 6), (6, 6)] {
        for _ in 0..100 {
            let q = sample_haar_frame(m, k, &mut rng)?;
            worst = worst.max(q.orthonormality_defect());
        }
    }
    rep.check(worst <= 1e-12, format!("orthonormality defect max {worst:.2e} <= 1e-12"));

    // |q1|² follows Beta(1, n−1)
    let n = 6;
    let mut xs: Vec<f64> = (0..100_000)
        .map(|_| {
            crate::rand_frames::sample_haar_unit_vector(n, &mut rng).unwrap()[0].norm_sqr()
        })
        .collect();
    let ks = stats::ks_distance(&mut xs, |x| 1.0 - (1.0 - x.clamp(0.0, 1.0)).powi(n as i32 - 1));
    rep.check(ks <= 0.02, format!("|q1|^2 vs Beta(1,{}) KS distance {ks:.4} <= 0.02", n - 1));

    // determinism
    let s = stream.substream(7);
    let a = sample_haar_frame(9, 4, &mut s.rng())?;
    let b = sample_haar_frame(9, 4, &mut s.rng())?;
    rep.check(a.matrix() == b.matrix(), "identical stream reproduces identical frames".into());
    Ok(rep)
}

fn suite_a17_net(stream: &RngStream) -> Result<SuiteReport> {
    suite_a17_net_sized(stream, 200)
}

/// Net inequality ‖B‖ ≤ ℓ·max |v*Bv| over Ginibre draws, ℓ ∈ 2..=8.
pub fn suite_a17_net_sized(stream: &RngStream, per_ell: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a17", "polarization net inequality");
    let mut rng = stream.rng();
    for ell in 2..=8usize {
        let net = polarization_net(ell)?;
        rep.note(format!("ell {ell}: net size {} = 3l^2-2l", net.len()));
        if net.len() != 3 * ell * ell - 2 * ell {
            rep.check(false, format!("net size mismatch at ell {ell}"));
        }
        let mut holds = true;
        let mut min_margin = f64::INFINITY;
        for _ in 0..per_ell {
            let b = matrix::ginibre_with(ell, ell, &mut rng);
            let r = verify_net_inequality(&b)?;
            holds &= r.holds;
            min_margin = min_margin.min(r.rhs - r.lhs);
        }
        rep.check(
            holds,
            format!("ell {ell}: {per_ell} draws hold (min margin {min_margin:.3e})"),
        );
    }
    Ok(rep)
}

fn suite_a22_spline(stream: &RngStream) -> Result<SuiteReport> {
    suite_a22_spline_sized(stream, 100)
}

/// 0 ≤ B ≤ 1 and ∫B = (t_n − t₁)/(n−1) by exact piecewise integration.
pub fn suite_a22_spline_sized(stream: &RngStream, vectors: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a22", "spline bounds and exact integral");
    let mut rng = stream.rng();
    let mut worst_integral: f64 = 0.0;
    let mut worst_range: f64 = 0.0;
    for _ in 0..vectors {
        let n = rng.random_range(2..=12usize);
        let mut knots: Vec<f64> = (0..n).map(|_| uniform(&mut rng, -5.0, 5.0)).collect();
        knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let span = knots[n - 1] - knots[0];
        if span < 1e-6 {
            continue;
        }
        let b = bspline_build(&knots)?;
        let expected = span / (n as f64 - 1.0);
        worst_integral = worst_integral.max((b.integral() - expected).abs());
        for i in 0..10_000 {
            let t = knots[0] - 0.2 + (span + 0.4) * i as f64 / 10_000.0;
            let v = b.eval(t);
            worst_range = worst_range.max((-v).max(v - 1.0));
        }
    }
    rep.check(worst_integral <= 1e-10, format!("integral identity error {worst_integral:.2e} <= 1e-10"));
    rep.check(worst_range <= 1e-12, format!("0 <= B <= 1 violation {worst_range:.2e} <= 1e-12"));
    Ok(rep)
}

fn suite_a24_ks(stream: &RngStream) -> Result<SuiteReport> {
    suite_a24_ks_sized(stream, 5, 100_000)
}

/// KS distance between the exact spline CDF and Monte Carlo samples of q*Hq.
pub fn suite_a24_ks_sized(
    stream: &RngStream,
    instances: usize,
    samples: usize,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a24", "spline law of q*Hq (KS distance)");
    let mut rng = stream.rng();
    for inst in 0..instances {
        let n = 2 + (inst + rng.random_range(0..9usize)) % 9; // n in 2..=10
        let g = matrix::ginibre_with(n, n, &mut rng);
        let h = (&g + g.adjoint()) * complex(0.5, 0.0);
        let eigs = matrix::hermitian_eigenvalues(&h);
        let dens = hermitian_form_density(&eigs)?;
        let mut xs: Vec<f64> = (0..samples)
            .map(|_| {
                let q = crate::rand_frames::sample_haar_unit_vector(n, &mut rng).unwrap();
                (q.adjoint() * &h * &q)[(0, 0)].re
            })
            .collect();
        let ks = stats::ks_distance(&mut xs, |t| dens.cdf(t));
        rep.check(ks <= 0.02, format!("n = {n}: KS distance {ks:.4} <= 0.02"));
    }
    Ok(rep)
}

fn suite_a25_first_order(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a25", "first-order tail bound dominance");
    let grid = [1e-1, 1e-2, 1e-3, 1e-4];
    for (name, a) in [("ginibre12", matrix::ginibre(12, 31)), ("jordan12", matrix::jordan_block(12))]
    {
        for (j, &ell) in [2usize, 4].iter().enumerate() {
            let curve = tb::smin_tail_empirical(
                &a,
                ell,
                complex(0.0, 0.0),
                &grid,
                2000,
                &stream.substream(j as u64 * 31 + 1),
            )?;
            let ok = curve
                .ci_upper
                .iter()
                .zip(&curve.bound_first)
                .all(|(ci, b)| ci <= b);
            rep.check(ok, format!("{name} ell {ell}: CI-upper <= bound on {} eps", grid.len()));
        }
    }
    Ok(rep)
}

fn suite_a35_concavity(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a35", "density concavity floor");
    let mut rng = stream.rng();
    let mut worst_excess: f64 = 0.0;
    let mut worst_outside: f64 = 0.0;
    let mut checked = 0usize;
    for _ in 0..50 {
        let n = rng.random_range(4..=10usize);
        let g = matrix::ginibre_with(n, n, &mut rng);
        let h = (&g + g.adjoint()) * complex(0.5, 0.0);
        let eigs = matrix::hermitian_eigenvalues(&h);
        let floor = concavity_floor(&eigs)?;
        if !floor.is_finite() {
            continue;
        }
        let dens = hermitian_form_density(&eigs)?;
        let Some(s) = dens.as_spline() else { continue };
        let second = s.pieces().derivative().derivative();
        let (inner_lo, inner_hi) = (eigs[1], eigs[n - 2]);
        for i in 0..=2000 {
            let t = inner_lo + (inner_hi - inner_lo) * i as f64 / 2000.0;
            worst_excess = worst_excess.max(floor - second.eval(t));
        }
        // strictly outside (λ_{n−1}, λ₂): the knot itself evaluates on the
        // inner piece by the half-open convention
        for i in 0..500 {
            let t = eigs[0] + (inner_lo - eigs[0]) * i as f64 / 500.0;
            worst_outside = worst_outside.max(-second.eval(t));
            let t = inner_hi + (eigs[n - 1] - inner_hi) * (i as f64 + 1.0) / 500.0;
            worst_outside = worst_outside.max(-second.eval(t));
        }
        checked += 1;
    }
    rep.note(format!("{checked} non-degenerate spectra checked"));
    rep.check(
        worst_excess <= 1e-8,
        format!("rho'' >= floor on the inner interval (excess {worst_excess:.2e})"),
    );
    rep.check(
        worst_outside <= 1e-10,
        format!("rho'' >= 0 outside the inner interval (excess {worst_outside:.2e})"),
    );
    Ok(rep)
}

fn suite_a36_hilbert(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a36", "Hilbert transform of the density derivative");
    let mut rng = stream.rng();
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut checked = 0;
    for _ in 0..50 {
        let n = rng.random_range(4..=10usize);
        let g = matrix::ginibre_with(n, n, &mut rng);
        let h = (&g + g.adjoint()) * complex(0.5, 0.0);
        let eigs = matrix::hermitian_eigenvalues(&h);
        let w = w_functionals(&eigs)?;
        if w.w1 <= 0.0 || w.w2 <= 0.0 || w.w3 <= 0.0 {
            continue;
        }
        let dens = hermitian_form_density(&eigs)?;
        let Some(s) = dens.as_spline() else { continue };
        let nf = n as f64;
        let bound = (nf - 1.0) * (nf - 2.0) * (nf - 3.0) / (w.w1 * w.w2)
            * (4.0 * std::f64::consts::E * w.w1 / w.w3).ln()
            / std::f64::consts::PI;
        for _ in 0..20 {
            let t = uniform(&mut rng, eigs[0], eigs[n - 1]);
            let hv = nm::hilbert_spline_derivative(s, t)?;
            worst = worst.max(hv.value - bound);
        }
        checked += 1;
    }
    rep.note(format!("{checked} spectra checked at 20 points each"));
    rep.check(worst <= 1e-9, format!("H(rho') below the w-bound (max excess {worst:.2e})"));
    Ok(rep)
}

fn suite_a41_regularized(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a41", "small-ball vs regularized density sup");
    let mut rng = stream.rng();
    for (idx, eps) in [0.1f64, 0.05].into_iter().enumerate() {
        let m = matrix::ginibre_with(5, 5, &mut rng);
        let mp = nm::regularize(&m, eps)?;
        let ev = nm::DensityEvaluator::new(&mp, 256)?;
        // grid-max of ρ_{M'} over the ε-disk (the coupling confines q'*M'q')
        let mut sup: f64 = 0.0;
        let mut gap: f64 = 0.0;
        for ir in 0..12 {
            for it in 0..24 {
                let r = eps * (ir as f64 + 0.5) / 12.0;
                let t = 2.0 * std::f64::consts::PI * it as f64 / 24.0;
                let d = ev.density(complex(r * t.cos(), r * t.sin()));
                sup = sup.max(d.value);
                gap = gap.max(d.gap);
            }
        }
        let est = nm::small_ball_empirical(
            &m,
            eps,
            complex(0.0, 0.0),
            20_000,
            &stream.substream(idx as u64 + 10),
        )?;
        let budget = std::f64::consts::PI * eps * eps * (sup + 10.0 * gap);
        rep.check(
            est.p_hat <= budget + 3.0 * (est.ci_upper - est.p_hat),
            format!(
                "eps {eps}: p_hat {:.4} <= pi eps^2 sup rho ({budget:.4}) + CI",
                est.p_hat
            ),
        );
    }
    Ok(rep)
}

fn suite_a42_w_ratio(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a42", "w1/w3 controlled by ||M'||/eps");
    let mut rng = stream.rng();
    let mut worst_ratio_excess: f64 = f64::NEG_INFINITY;
    let mut worst_w3: f64 = f64::INFINITY;
    let mut eps_ref = 0.0;
    for _ in 0..20 {
        let n = rng.random_range(4..=8usize);
        let eps = uniform(&mut rng, 0.02, 0.3);
        let m = matrix::ginibre_with(n, n, &mut rng);
        let mp = nm::regularize(&m, eps)?;
        let cap = matrix::operator_norm(&mp) / eps;
        for j in 0..128 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 128.0;
            let h = hermitian_part(&mp, theta)?;
            let w = w_functionals(&matrix::hermitian_eigenvalues(&h))?;
            worst_ratio_excess = worst_ratio_excess.max(w.w1 / w.w3 - cap);
            worst_w3 = worst_w3.min(w.w3 / (2.0 * eps));
            eps_ref = eps;
        }
    }
    rep.check(
        worst_ratio_excess <= 1e-9,
        format!("w1/w3 <= ||M'||/eps (max excess {worst_ratio_excess:.2e})"),
    );
    rep.check(
        worst_w3 >= 1.0 - 1e-9,
        format!("w3 >= 2 eps uniformly (min ratio {worst_w3:.6}, last eps {eps_ref:.3})"),
    );
    Ok(rep)
}

fn suite_a44_l1(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a44", "L1 factor bound from the phi witness");
    for (i, n) in [5usize, 6].into_iter().enumerate() {
        let sub = stream.substream(i as u64);
        let mut rng = sub.rng();
        let m = matrix::ginibre_with(n, n, &mut rng);
        let eps = 0.1 * matrix::operator_norm(&m);
        let mp = nm::regularize(&m, eps)?;
        let wit = nm::phi_witness(&mp, 6000, &sub)?;
        let quad = nm::l1_factor_quadrature(&mp, 512)?;
        let bound = nm::l1_factor_bound(&mp, eps, wit.phi_value)?;
        rep.check(
            quad <= bound * (1.0 + 1e-6),
            format!("n {n}: quadrature {quad:.4} <= witness bound {bound:.4}"),
        );
    }
    Ok(rep)
}

fn suite_a45_appendix(stream: &RngStream) -> Result<SuiteReport> {
    suite_a45_appendix_sized(stream, 100)
}

pub fn suite_a45_appendix_sized(stream: &RngStream, draws: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a45", "appendix integral bound");
    let mut rng = stream.rng();
    let mut all = true;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..draws {
        let a = uniform(&mut rng, 0.05, 5.0);
        let b = uniform(&mut rng, -6.0, 6.0);
        let eps = uniform(&mut rng, 0.01, 1.5);
        let theta0 = uniform(&mut rng, 0.0, 2.0 * std::f64::consts::PI);
        let r = nm::appendix_integral(a, b, eps, theta0)?;
        all &= r.holds;
        if r.bound.is_finite() {
            worst_margin = worst_margin.min(r.bound - r.value);
        }
    }
    rep.check(all, format!("{draws} random (a, b, eps, theta0): value <= bound (min margin {worst_margin:.3e})"));
    Ok(rep)
}

fn suite_a46_cone(stream: &RngStream) -> Result<SuiteReport> {
    suite_a46_cone_sized(stream, 10_000)
}

pub fn suite_a46_cone_sized(stream: &RngStream, draws: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a46", "cone curvature along segments");
    let mut rng = stream.rng();
    let mut all = true;
    let mut worst = f64::INFINITY;
    for _ in 0..draws {
        let len = uniform(&mut rng, 0.1, 5.0);
        let half_apex = uniform(&mut rng, 0.01, std::f64::consts::FRAC_PI_4 - 0.01);
        let rot = uniform(&mut rng, 0.0, 2.0 * std::f64::consts::PI);
        let z1 = uniform(&mut rng, -5.0 * len, 5.0 * len);
        let z2 = uniform(&mut rng, -5.0 * len, 5.0 * len);
        let p1 = [len * (rot + half_apex).cos(), len * (rot + half_apex).sin(), z1];
        let p2 = [len * (rot - half_apex).cos(), len * (rot - half_apex).sin(), z2];
        let d = 2.0 * len * half_apex.sin();
        let r = nm::cone_segment_check(p1, p2, d)?;
        all &= r.holds;
        worst = worst.min(r.f_abs / r.threshold.max(1e-300));
    }
    rep.check(all, format!("{draws} configurations: |f(u)| >= d^2/8 (min ratio {worst:.4})"));
    Ok(rep)
}

fn suite_a47_witness(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a47", "phi witness attains the inradius bound");
    for (i, n) in [6usize, 8, 8].into_iter().enumerate() {
        let sub = stream.substream(i as u64);
        let mut rng = sub.rng();
        let m = matrix::ginibre_with(n, n, &mut rng);
        let eps = 0.05 * matrix::operator_norm(&m);
        let mp = nm::regularize(&m, eps)?;
        let wit = nm::phi_witness(&mp, 10_000, &sub)?;
        rep.check(
            wit.attained,
            format!(
                "n {n}: |phi| {:.3e} >= bound {:.3e} ({} evaluations)",
                wit.phi_value.abs(),
                wit.bound,
                wit.evaluations
            ),
        );
    }
    Ok(rep)
}

fn suite_a49_area(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a49", "compression area tail");
    let mut b = CMatrix::zeros(3, 3);
    b[(0, 1)] = complex(2.0, 0.0);
    b[(2, 2)] = complex(1.0, 1.0);
    let r = tb::compression_area_check(&b, 1, 0.1, 2000, &stream.substream(0))?;
    rep.check(
        r.holds,
        format!("N+diag block m=3 k=1 theta=0.1: CI {:.4} <= bound {:.4}", r.ci_upper, r.bound),
    );
    let g = matrix::ginibre(6, 17);
    let r = tb::compression_area_check(&g, 1, 0.2, 800, &stream.substream(1))?;
    rep.check(
        r.holds,
        format!("ginibre6 k=1 theta=0.2: CI {:.4} <= bound {:.4}", r.ci_upper, r.bound),
    );
    Ok(rep)
}

fn suite_a52_inradius(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a52", "Schur complement inner radius tail");
    let entries: Vec<_> = (0..12)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 12.0;
            complex(t.cos(), t.sin())
        })
        .collect();
    let a = matrix::diagonal(&entries);
    let r = tb::schur_inner_radius_check(&a, 2, 5, 0.2, 300, &stream.substream(0))?;
    rep.check(
        r.holds,
        format!(
            "12th roots of unity ell=2 ell'=5 theta=0.2: CI {:.4} <= bound {:.4} ({} resampled)",
            r.ci_upper, r.bound, r.singular_pivots_resampled
        ),
    );
    Ok(rep)
}

fn suite_a53_corner(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a53", "corner singular value tail");
    let r = tb::corner_smin_check(10, 3, 0.3, 10_000, &stream.substream(0))?;
    rep.check(
        r.holds,
        format!("n=10 r=3 theta=0.3: p_hat {:.4} <= theta^2 {:.4} + 3se", r.p_hat, r.bound),
    );
    rep.note(format!(
        "as-printed reading Pr(sigma_r >= sqrt(r(n-r))/theta) = {:.4} (vacuous direction, recorded)",
        r.printed_form_rate
    ));
    let r = tb::corner_smin_check(8, 8, 0.5, 500, &stream.substream(1))?;
    rep.check(r.failures == 0, "r = n corner is the full unitary, sigma_r = 1".into());
    Ok(rep)
}

fn suite_a56_consistency(stream: &RngStream) -> Result<SuiteReport> {
    suite_a56_consistency_sized(stream, 60, 300_000)
}

/// Area-route vs probability-route estimators of the expected area.
pub fn suite_a56_consistency_sized(
    stream: &RngStream,
    frames: usize,
    prob_samples: usize,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a56", "expected-area estimator consistency");
    let a = matrix::ginibre(16, 4);
    let ell = 3;
    let eps = 1e-2;
    let opts = ps::AreaOptions::for_eps(eps);
    let mc = ps::expected_area_mc(&a, ell, eps, frames, &opts, &stream.substream(0))?;
    let pr = ps::expected_area_prob(&a, ell, eps, prob_samples, &stream.substream(1))?;
    let area_lo = mc.mean_lo - mc.ci_halfwidth;
    let area_hi = mc.mean_hi + mc.ci_halfwidth;
    let overlap = area_lo <= pr.ci_hi && pr.ci_lo <= area_hi;
    rep.check(
        overlap,
        format!(
            "area route [{:.3e}, {:.3e}] overlaps probability route [{:.3e}, {:.3e}]",
            area_lo, area_hi, pr.ci_lo, pr.ci_hi
        ),
    );
    rep.note(format!("area mean [{:.3e}, {:.3e}] ci {:.2e}", mc.mean_lo, mc.mean_hi, mc.ci_halfwidth));
    rep.note(format!("probability route {:.3e} from {} hits", pr.value, pr.hits));
    Ok(rep)
}

fn suite_a57_shift(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a57", "shifted singular value growth");
    let a = matrix::ginibre(10, 33);
    let region = numrange::numerical_range(&a, 64)?;
    let sm = ps::shifted_min(&a, 3, Some(&region), 1e-3, 400_000)?;
    rep.note(format!(
        "s_3 = {:.4} at z = {:.3}+{:.3}i (gap {:.2e}, {} nodes)",
        sm.s_k, sm.z_k.re, sm.z_k.im, sm.certificate_gap, sm.nodes_expanded
    ));
    let mut rng = stream.rng();
    let (x0, x1, y0, y1) = region.bounding_box();
    let mut all = true;
    for _ in 0..100 {
        let z = complex(uniform(&mut rng, x0, x1), uniform(&mut rng, y0, y1));
        all &= ps::lemma57_check(&a, 3, z, &sm)?.holds;
    }
    rep.check(all, "sigma_k(z-A) >= max(s_k, |z-z_k|/2) on 100 random shifts".into());
    Ok(rep)
}

fn suite_a7_reduction(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a7", "reduction to the numerical measure");
    let id = CMatrix::identity(8, 8);
    let r = tb::reduction_check(&id, 3, 1e-3, 200, &stream.substream(0))?;
    rep.check(r.holds && r.left_p_hat == 0.0, "identity: left side 0".into());
    let a = matrix::ginibre(12, 9);
    let r = tb::reduction_check(&a, 3, 1e-2, 1000, &stream.substream(1))?;
    rep.check(
        r.holds,
        format!("ginibre12 ell=3: left {:.4} <= right {:.4} + slack", r.left_p_hat, r.right_value),
    );
    let r = tb::reduction_check(&a, 1, 5e-2, 500, &stream.substream(2))?;
    rep.check(
        r.holds,
        format!("ell=1 degenerate width: left {:.4} <= right {:.4}", r.left_p_hat, r.right_value),
    );
    Ok(rep)
}

fn suite_a12_smallball(stream: &RngStream) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a12", "small-ball probability bound");
    for (i, n) in [9usize, 10, 12].into_iter().enumerate() {
        let sub = stream.substream(i as u64);
        let mut rng = sub.rng();
        let m = matrix::ginibre_with(n, n, &mut rng);
        for eps in [1e-1, 1e-2] {
            let bound = nm::small_ball_bound(&m, eps)?;
            let est = nm::small_ball_empirical(&m, eps, complex(0.0, 0.0), 20_000, &sub)?;
            rep.check(
                est.ci_upper <= bound,
                format!("n {n} eps {eps}: CI {:.4e} <= bound {:.4e}", est.ci_upper, bound),
            );
        }
    }
    Ok(rep)
}

fn suite_a2_theorem(stream: &RngStream) -> Result<SuiteReport> {
    suite_a2_theorem_sized(stream, 24, 4, &[1e-2], 30)
}

/// Expected-area dominance: mean_hi + CI ≤ min(applicable bounds).
pub fn suite_a2_theorem_sized(
    stream: &RngStream,
    n: usize,
    ell: usize,
    eps_list: &[f64],
    frames: usize,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("a2", "expected pseudospectral area bounds");
    let mut rng = stream.rng();
    let a = matrix::ginibre_with(n, n, &mut rng);
    let consts = tb::BoundConstants::traced(n, ell);
    let region = numrange::numerical_range(&a, 256)?;
    let tol = 0.02 * matrix::operator_norm(&a);
    let sm_l = ps::shifted_min(&a, ell, Some(&region), tol, 150_000)?;
    let sm_l8 = ps::shifted_min(&a, ell + 8, Some(&region), tol, 150_000)?;
    for (i, &eps) in eps_list.iter().enumerate() {
        let omega = region.minkowski_eps(eps)?;
        let (dia_lo, dia_hi) = omega.diameter_interval();
        let rad = omega.inner_radius();
        let geometry = ps::Geometry {
            big_r: ps::GeomInterval::new(dia_lo, dia_hi),
            small_r: ps::GeomInterval::new(rad.lo, rad.hi),
            s_ell: ps::GeomInterval::new(
                (sm_l.s_k - sm_l.certificate_gap).max(0.0),
                sm_l.s_k,
            ),
            s_ell8: ps::GeomInterval::new(
                (sm_l8.s_k - sm_l8.certificate_gap).max(0.0),
                sm_l8.s_k,
            ),
        };
        let bounds = ps::theorem_bounds(n, ell, eps, &consts, &geometry)?;
        let min_bound = bounds.applicable_minimum().unwrap_or(f64::INFINITY);
        let mc = ps::expected_area_mc(
            &a,
            ell,
            eps,
            frames,
            &ps::AreaOptions::for_eps(eps),
            &stream.substream(100 + i as u64),
        )?;
        rep.check(
            mc.mean_hi + mc.ci_halfwidth <= min_bound,
            format!(
                "eps {eps}: mean_hi + CI = {:.4e} <= min bound {:.4e}",
                mc.mean_hi + mc.ci_halfwidth,
                min_bound
            ),
        );
        rep.note(format!(
            "eps {eps}: items {:?} lemma54 {:.3e}",
            bounds.items.map(|b| format!("{b:.3e}")),
            bounds.lemma54
        ));
        // deterministic sandwich per sample
        let lower = std::f64::consts::PI * eps * eps;
        let upper = std::f64::consts::PI * eps.powf(2.0 / (ell as f64));
        let slack = ps::AreaOptions::for_eps(eps).target_width;
        let sandwich = mc
            .per_frame
            .iter()
            .all(|e| e.hi >= lower - slack && e.lo <= upper + slack);
        rep.check(sandwich, format!("eps {eps}: pi eps^2 <= area <= pi eps^(2/l) per sample"));
    }
    Ok(rep)
}

/// Log-log slope of the mean area against ε for a normal matrix with
/// s_{ℓ+8} > 0 (the β = 2 regime up to log factors).
pub fn slope_check(
    a: &CMatrix,
    ell: usize,
    eps_list: &[f64],
    frames: usize,
    stream: &RngStream,
) -> Result<(f64, Vec<f64>)> {
    let mut means = Vec::with_capacity(eps_list.len());
    for (i, &eps) in eps_list.iter().enumerate() {
        let mc = ps::expected_area_mc(
            a,
            ell,
            eps,
            frames,
            &ps::AreaOptions::for_eps(eps),
            &stream.substream(i as u64),
        )?;
        means.push(0.5 * (mc.mean_lo + mc.mean_hi));
    }
    // least-squares slope of log(mean) against log(eps)
    let xs: Vec<f64> = eps_list.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = means.iter().map(|m| m.ln()).collect();
    let xm = stats::mean(&xs);
    let ym = stats::mean(&ys);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    Ok((num / den, means))
}
