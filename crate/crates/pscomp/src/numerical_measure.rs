//! The planar density of q*Mq via Radon inversion, small-ball probabilities,
//! and the regularized bound machinery.
//!
//! The density of the numerical measure is recovered from the densities of
//! the rotated Hermitian parts: ρ_M(z) = (1/4π) p.v.∫ H(ρ'_θ)(Re(e^{−iθ}z)) dθ,
//! where H is the Hilbert transform. Each ρ_θ is an exact piecewise
//! polynomial, so H(ρ'_θ) is evaluated segment-wise in closed form and the θ
//! integral by the trapezoid rule (spectrally accurate for smooth periodic
//! integrands), with a convergence gap reported against the half grid.

use nalgebra::{DMatrix, DVector, RowDVector};
use num_complex::Complex64;
use rand::Rng;

use crate::bspline::{
    hermitian_form_density, w_functionals, HermitianFormDensity, NormalizedSpline, PiecewisePoly,
};
use crate::compressions::hermitian_part;
use crate::exec;
use crate::matrix::{self, CMatrix};
use crate::numrange::{self, ConvexRegion, SupportPoint};
use crate::quad::adaptive_simpson;
use crate::rand_frames::sample_haar_unit_vector;
use crate::rng::RngStream;
use crate::stats;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Regularization
// ---------------------------------------------------------------------------

/// The 2×2 nilpotent block N = [[0, 2], [0, 0]] whose numerical range is the
/// unit disk.
pub fn nilpotent_block() -> CMatrix {
    let mut n = CMatrix::zeros(2, 2);
    n[(0, 1)] = Complex64::new(2.0, 0.0);
    n
}

/// M' = M ⊕ εN ⊕ εN: appends two scaled nilpotent blocks so that W(M')
/// contains the ε-disk and the inner eigenvalue gaps of every rotated
/// Hermitian part stay at least 2ε.
pub fn regularize(m: &CMatrix, eps: f64) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("regularize needs a square matrix".into()));
    }
    if eps <= 0.0 {
        return Err(Error::InvalidArgument("regularization eps must be > 0".into()));
    }
    let n = m.nrows();
    let mut out = CMatrix::zeros(n + 4, n + 4);
    out.view_mut((0, 0), (n, n)).copy_from(m);
    let two_eps = Complex64::new(2.0 * eps, 0.0);
    out[(n, n + 1)] = two_eps;
    out[(n + 2, n + 3)] = two_eps;
    Ok(out)
}

/// Density of q*H(e^{−iθ}M)q, exact from the spectrum.
pub fn rho_theta(m: &CMatrix, theta: f64) -> Result<HermitianFormDensity> {
    let h = hermitian_part(m, theta)?;
    let eigs = matrix::hermitian_eigenvalues(&h);
    hermitian_form_density(&eigs)
}

// ---------------------------------------------------------------------------
// Principal-value Hilbert transform of piecewise polynomials
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct HilbertValue {
    pub value: f64,
    /// Set when `t` sat on a jump of the integrand and the symmetric ±offset
    /// average was used.
    pub offset_averaged: bool,
}

/// Evaluates p.v.∫ f(τ)/(t−τ) dτ for a piecewise polynomial f, closed form
/// per segment: near segments by singularity subtraction (the divided
/// difference is a polynomial, integrated exactly, plus boundary logs that
/// cancel at knots where f is continuous), far segments by a geometric
/// series that avoids the cancellation of the subtracted form.
#[derive(Debug, Clone)]
pub struct PvEvaluator {
    pw: PiecewisePoly,
    span: f64,
}

impl PvEvaluator {
    pub fn new(pw: PiecewisePoly) -> Self {
        let span = pw.support().map(|(a, b)| b - a).unwrap_or(0.0);
        PvEvaluator { pw, span }
    }

    pub fn eval(&self, t: f64) -> HilbertValue {
        self.eval_inner(t, true)
    }

    fn eval_inner(&self, t: f64, allow_fallback: bool) -> HilbertValue {
        if self.pw.is_empty() {
            return HilbertValue { value: 0.0, offset_averaged: false };
        }
        let breaks = self.pw.breaks();
        let pieces = self.pw.pieces();
        let tol_pos = 1e-12 * self.span.max(1e-300);
        let mut total = 0.0;
        // coefficients of ln|x − t| accumulated per breakpoint; singular logs
        // cancel there whenever the integrand is continuous
        let mut log_coeff = vec![0.0; breaks.len()];

        for (i, p) in pieces.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let a = breaks[i];
            let b = breaks[i + 1];
            let len = b - a;
            let c = t - a; // local coordinate of t
            let far = c < -2.0 * len || c > 3.0 * len;
            if far {
                // ∫ p(u)/(c−u) du = Σ_j I_j / c^{j+1},
                // I_j = Σ_k c_k L^{k+j+1}/(k+j+1); ratio |L/c| ≤ 1/2
                let coeffs = p.coeffs();
                let mut acc = 0.0;
                let mut max_term = 0.0f64;
                let mut cpow = c;
                for j in 0..400 {
                    let mut ij = 0.0;
                    for (k, &ck) in coeffs.iter().enumerate() {
                        ij += ck * len.powi((k + j + 1) as i32) / (k + j + 1) as f64;
                    }
                    let term = ij / cpow;
                    acc += term;
                    max_term = max_term.max(term.abs());
                    // early moments of p can vanish, so give the series a few
                    // terms before trusting the stop criterion
                    if j >= 4 && term.abs() <= 1e-17 * acc.abs().max(max_term).max(1e-300) {
                        break;
                    }
                    cpow *= c;
                }
                total += acc;
            } else {
                // p.v.∫ p(u)/(c−u) du
                //   = −∫ (p(u)−p(c))/(u−c) du − p(c)·(ln|b−t| − ln|a−t|)
                let coeffs = p.coeffs();
                let deg = coeffs.len();
                // divided-difference polynomial q(u) = (p(u) − p(c))/(u − c)
                let mut q = vec![0.0; deg.saturating_sub(1)];
                for (k, &ck) in coeffs.iter().enumerate().skip(1) {
                    // c_k (u^k − c^k)/(u − c) = c_k Σ_{i<k} u^i c^{k−1−i}
                    let mut cpow = 1.0;
                    for qi in q.iter_mut().take(k).rev() {
                        *qi += ck * cpow;
                        cpow *= c;
                    }
                }
                let mut integral_q = 0.0;
                let mut lpow = len;
                for (i, &qi) in q.iter().enumerate() {
                    integral_q += qi * lpow / (i as f64 + 1.0);
                    lpow *= len;
                }
                total -= integral_q;
                let pc = p.eval(c);
                log_coeff[i] += pc; // +p(c)·ln|a−t|
                log_coeff[i + 1] -= pc; // −p(c)·ln|b−t|
            }
        }

        for (x, coeff) in breaks.iter().zip(&log_coeff) {
            if *coeff == 0.0 {
                continue;
            }
            let r = (x - t).abs();
            if r <= tol_pos {
                if coeff.abs() <= 1e-9 * self.integrand_scale() {
                    // continuous across the knot: the singular logs cancel
                    continue;
                }
                if allow_fallback {
                    // jump of the integrand at t: symmetric offset average
                    let delta = 1e-12 * self.span.max(1.0);
                    let left = self.eval_inner(t - delta, false);
                    let right = self.eval_inner(t + delta, false);
                    return HilbertValue {
                        value: 0.5 * (left.value + right.value),
                        offset_averaged: true,
                    };
                }
                // nested fallback: accept the huge-but-finite log
            }
            total += coeff * r.max(1e-300).ln();
        }

        HilbertValue { value: total, offset_averaged: false }
    }

    fn integrand_scale(&self) -> f64 {
        let breaks = self.pw.breaks();
        let mut scale = 0.0f64;
        for (i, p) in self.pw.pieces().iter().enumerate() {
            scale = scale.max(p.eval(0.0).abs()).max(p.eval(breaks[i + 1] - breaks[i]).abs());
        }
        scale.max(1e-300)
    }
}

/// H(ρ')(t) = (1/π) p.v.∫ ρ'(τ)/(t−τ) dτ for a normalized spline density with
/// at least 4 knots (so ρ' is integrable).
pub fn hilbert_spline_derivative(density: &NormalizedSpline, t: f64) -> Result<HilbertValue> {
    if density.spline.knots().len() < 4 {
        return Err(Error::InvalidArgument(
            "Hilbert transform of the density derivative needs n >= 4 knots".into(),
        ));
    }
    let deriv = density.pieces().derivative();
    let hv = PvEvaluator::new(deriv).eval(t);
    Ok(HilbertValue { value: hv.value / std::f64::consts::PI, ..hv })
}

// ---------------------------------------------------------------------------
// Planar density by Radon inversion
// ---------------------------------------------------------------------------

enum ThetaData {
    Spline { lo: f64, hi: f64, pv: PvEvaluator },
    Point(f64),
}

/// One evaluated density point.
#[derive(Debug, Clone, Copy)]
pub struct DensityValue {
    /// Clipped value max(raw, 0).
    pub value: f64,
    /// Raw trapezoid value (may be slightly negative from quadrature noise).
    pub raw: f64,
    /// |value at K_θ − value at K_θ/2|.
    pub gap: f64,
    /// z was outside (an outer estimate of) W(M), so the density is exactly 0.
    pub outside: bool,
}

/// Radon-inversion evaluator for ρ_M over a fixed θ-grid.
pub struct DensityEvaluator {
    thetas: Vec<f64>,
    per_theta: Vec<ThetaData>,
    region: ConvexRegion,
    dim: usize,
}

impl DensityEvaluator {
    pub fn new(m: &CMatrix, ktheta: usize) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension("density needs a square matrix".into()));
        }
        let n = m.nrows();
        if n < 4 {
            return Err(Error::InvalidArgument(
                "the Radon-inversion density needs n >= 4 (use Monte Carlo below that)".into(),
            ));
        }
        if ktheta < 64 || ktheta % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "theta count must be even and >= 64, got {ktheta}"
            )));
        }
        let thetas: Vec<f64> = (0..ktheta)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / ktheta as f64)
            .collect();
        let per_theta: Result<Vec<ThetaData>> = exec::par_map(ktheta, |j| {
            let dens = rho_theta(m, thetas[j])?;
            Ok(match dens {
                HermitianFormDensity::PointMass(c) => ThetaData::Point(c),
                HermitianFormDensity::Spline(s) => {
                    let knots = s.spline.knots();
                    let (lo, hi) = (knots[0], knots[knots.len() - 1]);
                    ThetaData::Spline { lo, hi, pv: PvEvaluator::new(s.pieces().derivative()) }
                }
            })
        })
        .into_iter()
        .collect();
        let region = numrange::numerical_range(m, 256)?;
        Ok(DensityEvaluator { thetas, per_theta: per_theta?, region, dim: n })
    }

    pub fn region(&self) -> &ConvexRegion {
        &self.region
    }

    pub fn theta_count(&self) -> usize {
        self.thetas.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// ρ_M(z) with a convergence gap against the half grid.
    pub fn density(&self, z: Complex64) -> DensityValue {
        let k = self.thetas.len();
        let strip_slack = 1e-12;
        if !self.region.contains(z, 1e-9) {
            return DensityValue { value: 0.0, raw: 0.0, gap: 0.0, outside: true };
        }
        let mut vals = Vec::with_capacity(k);
        for (theta, data) in self.thetas.iter().zip(&self.per_theta) {
            let t = z.re * theta.cos() + z.im * theta.sin();
            match data {
                ThetaData::Point(c) => {
                    if (t - c).abs() > strip_slack * c.abs().max(1.0) {
                        return DensityValue { value: 0.0, raw: 0.0, gap: 0.0, outside: true };
                    }
                    // z sits on a degenerate support line: measure zero
                    return DensityValue { value: 0.0, raw: 0.0, gap: 0.0, outside: false };
                }
                ThetaData::Spline { lo, hi, pv } => {
                    if t < *lo - strip_slack || t > *hi + strip_slack {
                        return DensityValue { value: 0.0, raw: 0.0, gap: 0.0, outside: true };
                    }
                    vals.push(pv.eval(t).value / std::f64::consts::PI);
                }
            }
        }
        // (1/4π)·(2π/K)·Σ = Σ/(2K); the half grid reuses the even indices
        let full: f64 = vals.iter().sum::<f64>() / (2.0 * k as f64);
        let half: f64 = vals.iter().step_by(2).sum::<f64>() / (k as f64);
        DensityValue { value: full.max(0.0), raw: full, gap: (full - half).abs(), outside: false }
    }
}

/// Convenience single-point density.
pub fn density(m: &CMatrix, z: Complex64, ktheta: usize) -> Result<DensityValue> {
    Ok(DensityEvaluator::new(m, ktheta)?.density(z))
}

/// Trapezoid evaluation of the sup-density bound
/// ((n−1)(n−2)(n−3)/4π²)·∫ (1/(w₁w₂))·log(4e·w₁/w₃) dθ; +∞ as soon as a
/// w-functional degenerates on the grid.
pub fn density_sup_bound(m: &CMatrix, ktheta: usize) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("density_sup_bound needs a square matrix".into()));
    }
    let n = m.nrows();
    if n < 4 {
        return Err(Error::InvalidArgument("density_sup_bound needs n >= 4".into()));
    }
    if ktheta < 8 {
        return Err(Error::InvalidArgument("theta count must be >= 8".into()));
    }
    let wtol = 1e-13 * matrix::operator_norm(m);
    let vals = exec::par_map(ktheta, |j| -> Result<f64> {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / ktheta as f64;
        let h = hermitian_part(m, theta)?;
        let w = w_functionals(&matrix::hermitian_eigenvalues(&h))?;
        if w.w1 <= wtol || w.w2 <= wtol || w.w3 <= wtol {
            return Ok(f64::INFINITY);
        }
        Ok((4.0 * std::f64::consts::E * w.w1 / w.w3).ln() / (w.w1 * w.w2))
    });
    let mut sum = 0.0;
    for v in vals {
        let v = v?;
        if !v.is_finite() {
            return Ok(f64::INFINITY);
        }
        sum += v;
    }
    let nf = n as f64;
    Ok((nf - 1.0) * (nf - 2.0) * (nf - 3.0) * sum / (2.0 * std::f64::consts::PI * ktheta as f64))
}

// ---------------------------------------------------------------------------
// Small-ball probabilities
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct SmallBallEstimate {
    pub p_hat: f64,
    /// One-sided 99% Clopper–Pearson upper bound.
    pub ci_upper: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Monte Carlo estimate of Pr(|q*Mq − z0| ≤ eps) over Haar unit vectors.
pub fn small_ball_empirical(
    m: &CMatrix,
    eps: f64,
    z0: Complex64,
    samples: usize,
    stream: &RngStream,
) -> Result<SmallBallEstimate> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("small ball needs a square matrix".into()));
    }
    if samples < 100 {
        return Err(Error::InvalidArgument("need at least 100 samples".into()));
    }
    let n = m.nrows();
    let chunks = 256.min(samples);
    let per = samples.div_ceil(chunks);
    let counts = exec::par_map(chunks, |c| {
        let mut rng = stream.substream(c as u64).rng();
        let lo = c * per;
        let hi = ((c + 1) * per).min(samples);
        let mut hits = 0u64;
        for _ in lo..hi {
            let q = sample_haar_unit_vector(n, &mut rng).expect("unit vector");
            let v = (q.adjoint() * m * &q)[(0, 0)];
            if (v - z0).norm() <= eps {
                hits += 1;
            }
        }
        hits
    });
    let hits: u64 = counts.iter().sum();
    Ok(SmallBallEstimate {
        p_hat: hits as f64 / samples as f64,
        ci_upper: stats::clopper_pearson_upper(hits, samples as u64, 0.99),
        hits,
        samples: samples as u64,
    })
}

/// Theoretical small-ball bound ε²·log²(4e‖M‖/ε)·5.1(n+3)³/(σ₉(M)·inR(W(M))),
/// with the conservative (inner) estimate of the inradius; +∞ when σ₉ or the
/// inradius degenerate (σ_k ≡ 0 for k beyond the dimension).
pub fn small_ball_bound(m: &CMatrix, eps: f64) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("small ball bound needs a square matrix".into()));
    }
    let n = m.nrows();
    if n < 5 {
        return Err(Error::InvalidArgument(
            "small_ball_bound needs n >= 5 so the regularized σ₉ exists".into(),
        ));
    }
    let norm = matrix::operator_norm(m);
    if !(eps > 0.0 && eps < norm) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < eps < ||M||, got eps = {eps}, ||M|| = {norm}"
        )));
    }
    let s9 = matrix::singular_value_or_zero(m, 9);
    let inr = numrange::numerical_range(m, 256)?.inner_radius().lo;
    if s9 <= 0.0 || inr <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let nf = n as f64;
    let log = (4.0 * std::f64::consts::E * norm / eps).ln();
    Ok(eps * eps * log * log * 5.1 * (nf + 3.0).powi(3) / (s9 * inr))
}

// ---------------------------------------------------------------------------
// The Φ functional and its witness search
// ---------------------------------------------------------------------------

/// Φ([[a,b],[c,d]]) = |ad−bc|² − |Re(ā·d) − |b|²/2 − |c|²/2|².
pub fn phi_2x2(b: &CMatrix) -> Result<f64> {
    if b.nrows() != 2 || b.ncols() != 2 {
        return Err(Error::Dimension("phi needs a 2x2 matrix".into()));
    }
    Ok(phi_entries(b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]))
}

fn phi_entries(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let det = (a * d - b * c).norm_sqr();
    let mid = (a.conj() * d).re - 0.5 * b.norm_sqr() - 0.5 * c.norm_sqr();
    det - mid * mid
}

/// A frame U ∈ Ũ(n+4, 2) witnessing a lower bound on sup_U |Φ(U*M'U)|.
#[derive(Debug, Clone)]
pub struct PhiWitness {
    pub u: CMatrix,
    /// Φ(U*M'U) at the best U found (signed).
    pub phi_value: f64,
    /// (σ₉(M')·inR(W(M'))/4)², evaluated with the certified inner inradius.
    pub bound: f64,
    pub evaluations: usize,
    /// |phi_value| ≥ bound.
    pub attained: bool,
}

/// Orthonormalize `vs` (dropping near-dependent vectors).
fn gram_schmidt(vs: &[DVector<Complex64>]) -> Vec<DVector<Complex64>> {
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    for v in vs {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let coeff = (b.adjoint() * &r)[(0, 0)];
                r -= b * coeff;
            }
        }
        let norm = r.norm();
        if norm > 1e-10 * v.norm().max(1.0) {
            r /= Complex64::new(norm, 0.0);
            basis.push(r);
        }
    }
    basis
}

/// Orthonormal basis of span(vs)^⊥ in C^dim.
fn orthonormal_complement(vs: &[DVector<Complex64>], dim: usize) -> Vec<DVector<Complex64>> {
    let mut basis = gram_schmidt(vs);
    let mut complement = Vec::new();
    for i in 0..dim {
        let mut e: DVector<Complex64> = DVector::zeros(dim);
        e[i] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let coeff = (b.adjoint() * &e)[(0, 0)];
                e -= b * coeff;
            }
        }
        let norm = e.norm();
        if norm > 1e-8 {
            e /= Complex64::new(norm, 0.0);
            basis.push(e.clone());
            complement.push(e);
        }
        if basis.len() == dim {
            break;
        }
    }
    complement
}

fn columns_to_matrix(cols: &[DVector<Complex64>]) -> CMatrix {
    let dim = cols[0].len();
    DMatrix::from_fn(dim, cols.len(), |i, j| cols[j][i])
}

/// Closed-form solution of ξ*Cξ = 0 over unit ξ ∈ C² (requires 0 ∈ W(C)).
///
/// With H = (C+C*)/2 and eigenpairs λ₁ ≥ λ₂, the family
/// ξ(ψ) = cosφ·u₁ + e^{iψ}·sinφ·u₂ with cos²φ = −λ₂/(λ₁−λ₂) exhausts all
/// unit vectors whose H-form vanishes; along it the K = (C−C*)/2i form is a
/// first harmonic in ψ, so the zero-level is a harmonic equation.
fn zero_form_2x2(c2: &CMatrix, slack: f64) -> Option<(Complex64, Complex64)> {
    let h = (c2 + c2.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let (i1, i2) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let (lam1, lam2) = (eig.eigenvalues[i1], eig.eigenvalues[i2]);
    if lam2 > slack || lam1 < -slack {
        return None;
    }
    let u1 = eig.eigenvectors.column(i1).into_owned();
    let u2 = eig.eigenvectors.column(i2).into_owned();
    let denom = lam1 - lam2;
    let cos2 = if denom <= f64::MIN_POSITIVE { 0.5 } else { (-lam2 / denom).clamp(0.0, 1.0) };
    let (cphi, sphi) = (cos2.sqrt(), (1.0 - cos2).sqrt());
    let minus_i = Complex64::new(0.0, -0.5);
    let k = (c2 - c2.adjoint()) * minus_i; // (C − C*)/2i, Hermitian
    let k11 = (u1.adjoint() * &k * &u1)[(0, 0)].re;
    let k22 = (u2.adjoint() * &k * &u2)[(0, 0)].re;
    let k12 = (u1.adjoint() * &k * &u2)[(0, 0)];
    let a = cos2 * k11 + (1.0 - cos2) * k22;
    let amp_re = 2.0 * cphi * sphi * k12.re;
    let amp_im = -2.0 * cphi * sphi * k12.im;
    let r = (amp_re * amp_re + amp_im * amp_im).sqrt();
    let psi = if r <= f64::MIN_POSITIVE {
        if a.abs() > slack {
            return None;
        }
        0.0
    } else {
        if a.abs() > r * (1.0 + 1e-9) + slack {
            return None;
        }
        let delta = amp_im.atan2(amp_re);
        delta + (-a / r).clamp(-1.0, 1.0).acos()
    };
    let eipsi = Complex64::from_polar(1.0, psi);
    let xi1 = u1[0] * cphi + u2[0] * (eipsi * sphi);
    let xi2 = u1[1] * cphi + u2[1] * (eipsi * sphi);
    Some((xi1, xi2))
}

/// Find a unit vector whose quadratic form attains a target on the chord
/// between the forms of x1 and x2, through the 2×2 compression onto
/// span{x1, x2}: closed form via `zero_form_2x2` on B − target·I.
fn attain_on_chord(
    m: &CMatrix,
    x1: &DVector<Complex64>,
    x2: &DVector<Complex64>,
    target: Complex64,
) -> Result<DVector<Complex64>> {
    let scale = matrix::operator_norm(m).max(1e-300);
    let form = |v: &DVector<Complex64>| (v.adjoint() * m * v)[(0, 0)];
    let e1 = x1 / Complex64::new(x1.norm(), 0.0);
    let mut r = x2.clone();
    let c = (e1.adjoint() * &r)[(0, 0)];
    r -= &e1 * c;
    let rn = r.norm();
    if rn <= 1e-12 {
        if (form(&e1) - target).norm() <= 1e-10 * scale {
            return Ok(e1);
        }
        return Err(Error::DegenerateGeometry("chord endpoints are parallel".into()));
    }
    let e2 = r / Complex64::new(rn, 0.0);
    let basis = columns_to_matrix(&[e1, e2]);
    let b = basis.adjoint() * m * &basis;
    let mut shifted = b.clone();
    shifted[(0, 0)] -= target;
    shifted[(1, 1)] -= target;
    let (xi1, xi2) = zero_form_2x2(&shifted, 1e-9 * scale).ok_or_else(|| {
        Error::DegenerateGeometry(format!(
            "could not realize chord point {target} in a 2x2 compression"
        ))
    })?;
    let v = basis.column(0) * xi1 + basis.column(1) * xi2;
    let vn = v.norm();
    let v = v / Complex64::new(vn, 0.0);
    let resid = (form(&v) - target).norm();
    if resid > 1e-10 * scale {
        return Err(Error::DegenerateGeometry(format!(
            "chord realization misses target by {resid:.3e}"
        )));
    }
    Ok(v)
}

/// Realize an interior point z of W(M) as v*Mv: locate z against the sampled
/// boundary and resolve two nested chords through 2×2 compressions. Points
/// within rounding distance of the boundary are pulled fractionally toward
/// the hull centroid before retrying.
pub fn attain_numerical_range_point(
    m: &CMatrix,
    z: Complex64,
    sweep: &[SupportPoint],
) -> Result<DVector<Complex64>> {
    let k = sweep.len() as f64;
    let centroid = sweep.iter().map(|p| p.touch).sum::<Complex64>() / Complex64::new(k, 0.0);
    let mut last = Err(Error::DegenerateGeometry("empty boundary sweep".into()));
    for pull in [0.0, 1e-9, 1e-7, 1e-5] {
        let target = z + (centroid - z) * Complex64::new(pull, 0.0);
        last = attain_point_core(m, target, sweep);
        if last.is_ok() {
            return last;
        }
    }
    last
}

fn attain_point_core(
    m: &CMatrix,
    z: Complex64,
    sweep: &[SupportPoint],
) -> Result<DVector<Complex64>> {
    let scale = matrix::operator_norm(m).max(1e-300);
    for p in sweep {
        if (p.touch - z).norm() <= 1e-11 * scale {
            return Ok(p.vector.clone());
        }
    }
    // apex: the sampled boundary point farthest from z
    let (ia, _) = sweep
        .iter()
        .enumerate()
        .map(|(i, p)| (i, (p.touch - z).norm()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let pa = sweep[ia].touch;
    let dir = z - pa;
    // intersect the ray pa + t·dir (t ≥ 1) with the sampled boundary chords
    let k = sweep.len();
    let mut best: Option<(usize, f64, f64)> = None; // (segment, ray t, seg λ)
    for j in 0..k {
        let pb = sweep[j].touch;
        let pc = sweep[(j + 1) % k].touch;
        let seg = pc - pb;
        let det = dir.re * (-seg.im) + seg.re * dir.im;
        if det.abs() < 1e-300 {
            continue;
        }
        let rhs = pb - pa;
        let t = (rhs.re * (-seg.im) + seg.re * rhs.im) / det;
        let lam = (dir.re * rhs.im - dir.im * rhs.re) / det;
        if (-1e-9..=1.0 + 1e-9).contains(&lam) && t >= 1.0 - 1e-9 {
            match best {
                Some((_, tb, _)) if tb >= t => {}
                _ => best = Some((j, t, lam.clamp(0.0, 1.0))),
            }
        }
    }
    let Some((j, _, lam)) = best else {
        return Err(Error::DegenerateGeometry(format!(
            "point {z} does not sit inside the sampled boundary hull"
        )));
    };
    let pb = sweep[j].touch;
    let pc = sweep[(j + 1) % k].touch;
    let w = pb + (pc - pb) * lam;
    let y = attain_on_chord(m, &sweep[j].vector, &sweep[(j + 1) % k].vector, w)?;
    let v = attain_on_chord(m, &sweep[ia].vector, &y, z)?;
    let resid = ((v.adjoint() * m * &v)[(0, 0)] - z).norm();
    if resid > 1e-10 * scale {
        return Err(Error::DegenerateGeometry(format!(
            "attained point misses target by {resid:.3e}"
        )));
    }
    Ok(v)
}

/// Unit vector approximately attaining the numerical radius max |y*Cy|
/// (always ≥ ‖C‖/2), by a θ-sweep with golden-section refinement.
fn numerical_radius_vector(c: &CMatrix) -> Result<(DVector<Complex64>, Complex64)> {
    let eval_theta = |theta: f64| -> Result<(f64, DVector<Complex64>)> {
        let sp = numrange::support_function(c, theta)?;
        Ok((sp.h, sp.vector))
    };
    let coarse = 96;
    let mut best_theta = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for j in 0..coarse {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / coarse as f64;
        let (h, _) = eval_theta(theta)?;
        if h > best_val {
            best_val = h;
            best_theta = theta;
        }
    }
    let width = 2.0 * std::f64::consts::PI / coarse as f64;
    let (mut lo, mut hi) = (best_theta - width, best_theta + width);
    let golden = 0.618_033_988_749_894_8;
    for _ in 0..40 {
        let m1 = hi - golden * (hi - lo);
        let m2 = lo + golden * (hi - lo);
        if eval_theta(m1)?.0 >= eval_theta(m2)?.0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let theta = 0.5 * (lo + hi);
    let (_, v) = eval_theta(theta)?;
    let s = (v.adjoint() * c * &v)[(0, 0)];
    Ok((v, s))
}

fn random_unit3<R: Rng>(rng: &mut R) -> DVector<Complex64> {
    use rand_distr::{Distribution, StandardNormal};
    loop {
        let v = DVector::from_fn(3, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        });
        let n = v.norm();
        if n > 1e-6 {
            return v / Complex64::new(n, 0.0);
        }
    }
}

/// Search for a frame certifying |φ(M')|^{1/2} ≥ σ₉(M')·inR(W(M'))/4.
///
/// Follows the constructive path: Chebyshev center z₀, the inscribed-circle
/// points z± = z₀ + (z₀/|z₀|)(1±i)/√2·inR realized as quadratic forms,
/// frames V₁ (span of the realizing vectors and the first regularization
/// coordinate) and V₂ (an orthocomplement), then maximizes |Φ| over
/// U_x = [V₂y, V₁x] with seeded random + local search inside the evaluation
/// budget. Any U yields a certified lower witness; a shortfall is reported,
/// never silently passed.
pub fn phi_witness(mp: &CMatrix, budget: usize, stream: &RngStream) -> Result<PhiWitness> {
    if mp.nrows() != mp.ncols() {
        return Err(Error::Dimension("phi witness needs a square matrix".into()));
    }
    let dim = mp.nrows();
    if dim < 9 {
        return Err(Error::InvalidArgument(
            "phi witness needs dimension >= 9 (so σ₉ exists)".into(),
        ));
    }
    let region = numrange::numerical_range(mp, 256)?;
    let rad = region.inner_radius();
    if rad.lo <= 0.0 {
        return Err(Error::DegenerateGeometry(
            "phi witness needs a numerical range with positive inner radius".into(),
        ));
    }
    let s9 = matrix::singular_value_or_zero(mp, 9);
    let bound = (s9 * rad.lo / 4.0).powi(2);

    let z0 = Complex64::new(rad.center_lo.0, rad.center_lo.1);
    let scale = matrix::operator_norm(mp).max(1e-300);
    // z₀ = 0 leaves the offset direction undefined; fall back to direction 1
    let dir = if z0.norm() > 1e-14 * scale { z0 / z0.norm() } else { Complex64::new(1.0, 0.0) };
    // the inscribed circle can touch ∂W (even at a corner), so step a hair
    // inside before realizing the two points as quadratic forms
    let shrink = 1.0 - 1e-6;
    let sqrt2 = std::f64::consts::SQRT_2;
    let z_plus = z0 + dir * Complex64::new(1.0 / sqrt2, 1.0 / sqrt2) * (rad.lo * shrink);
    let z_minus = z0 + dir * Complex64::new(1.0 / sqrt2, -1.0 / sqrt2) * (rad.lo * shrink);

    let sweep = numrange::support_sweep(mp, 64)?;
    let v = attain_numerical_range_point(mp, z_plus, &sweep)?;
    let vp = attain_numerical_range_point(mp, z_minus, &sweep)?;
    let mut e_reg: DVector<Complex64> = DVector::zeros(dim);
    e_reg[dim - 4] = Complex64::new(1.0, 0.0);

    let v1_basis = gram_schmidt(&[v.clone(), vp.clone(), e_reg.clone()]);
    if v1_basis.len() < 3 {
        return Err(Error::DegenerateGeometry("V1 span collapsed below dimension 3".into()));
    }
    let v1 = columns_to_matrix(&v1_basis);

    // trivial regularization-block witness: U*M'U = εN, Φ = −4ε⁴
    let mut evaluations = 1usize;
    let (mut best_phi, mut best_u) = {
        let mut u = CMatrix::zeros(dim, 2);
        u[(dim - 4, 0)] = Complex64::new(1.0, 0.0);
        u[(dim - 3, 1)] = Complex64::new(1.0, 0.0);
        let phi = phi_2x2(&(u.adjoint() * mp * &u))?;
        (phi, Some(u))
    };

    // V2 variants: orthocomplement of the construction's span, with and
    // without the adjoint images
    let span_a = vec![v.clone(), vp.clone(), e_reg.clone(), mp * &v, mp * &vp];
    let span_b = {
        let mut s = span_a.clone();
        s.push(mp.adjoint() * &v);
        s.push(mp.adjoint() * &vp);
        s
    };

    let mut rng = stream.rng();
    for span in [span_a, span_b] {
        let comp = orthonormal_complement(&span, dim);
        if comp.is_empty() {
            continue;
        }
        let v2 = columns_to_matrix(&comp);
        let c = v2.adjoint() * mp * &v2;
        let (y, s) = numerical_radius_vector(&c)?;
        let v2y = &v2 * &y;
        let urow: RowDVector<Complex64> = v2y.adjoint() * mp * &v1; // (V2y)*M'V1
        let g = v1.adjoint() * mp * &v2y; // V1*M'(V2y)
        let b3 = v1.adjoint() * mp * &v1;

        let phi_of = |x: &DVector<Complex64>| -> f64 {
            let bx = (&urow * x)[(0, 0)];
            let cx = (x.adjoint() * &g)[(0, 0)];
            let dx = (x.adjoint() * &b3 * x)[(0, 0)];
            phi_entries(s, bx, cx, dx)
        };

        let consider = |x: &DVector<Complex64>,
                            evaluations: &mut usize,
                            best_phi: &mut f64,
                            best_u: &mut Option<CMatrix>| {
            let phi = phi_of(x);
            *evaluations += 1;
            if phi.abs() > best_phi.abs() {
                *best_phi = phi;
                let v1x = &v1 * x;
                let mut u = CMatrix::zeros(dim, 2);
                u.set_column(0, &v2y);
                u.set_column(1, &v1x);
                *best_u = Some(u);
            }
        };

        // structured starts: the realizing vectors, the regularization
        // coordinate, eigenvectors of H(B₃), and the phase-twisted arc
        // between ξ_v and ξ_v'
        let xi_v = v1.adjoint() * &v;
        let xi_vp = v1.adjoint() * &vp;
        let mut starts: Vec<DVector<Complex64>> = vec![xi_v.clone(), xi_vp.clone()];
        let mut e3: DVector<Complex64> = DVector::zeros(3);
        e3[2] = Complex64::new(1.0, 0.0);
        starts.push(e3);
        let herm = (&b3 + b3.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        for j in 0..3 {
            starts.push(eig.eigenvectors.column(j).into_owned());
        }
        for it in 0..=16 {
            let tau = it as f64 / 16.0;
            for ip in 0..8 {
                let psi = 2.0 * std::f64::consts::PI * ip as f64 / 8.0;
                let x = &xi_v * Complex64::new(1.0 - tau, 0.0)
                    + &xi_vp * (Complex64::from_polar(1.0, psi) * tau);
                let norm = x.norm();
                if norm > 1e-12 {
                    starts.push(x / Complex64::new(norm, 0.0));
                }
            }
        }
        for x in &starts {
            consider(x, &mut evaluations, &mut best_phi, &mut best_u);
        }

        // seeded random exploration
        for _ in 0..budget / 3 {
            let x = random_unit3(&mut rng);
            consider(&x, &mut evaluations, &mut best_phi, &mut best_u);
        }

        // local refinement around the incumbent when it came from this chart
        if let Some(u) = best_u.clone() {
            let x0 = v1.adjoint() * u.column(1).into_owned();
            if (x0.norm() - 1.0).abs() < 1e-6 {
                let mut x = x0;
                let mut sigma = 0.3;
                for _ in 0..budget / 6 {
                    let mut cand = &x + random_unit3(&mut rng) * Complex64::new(sigma, 0.0);
                    let norm = cand.norm();
                    if norm < 1e-12 {
                        continue;
                    }
                    cand /= Complex64::new(norm, 0.0);
                    let before = best_phi.abs();
                    consider(&cand, &mut evaluations, &mut best_phi, &mut best_u);
                    if best_phi.abs() > before {
                        x = cand;
                    } else {
                        sigma = (sigma * 0.995).max(1e-6);
                    }
                }
            }
        }
    }

    let u = best_u.expect("the trivial witness is always evaluated");
    Ok(PhiWitness {
        u,
        phi_value: best_phi,
        bound,
        evaluations,
        attained: best_phi.abs() >= bound * (1.0 - 1e-9),
    })
}

/// (4π + 16·log(12^{1/4}·‖M'‖/ε)) / |φ|^{1/2}: the bound on ∫ dθ/(w₁w₂)
/// induced by a Φ-witness value φ.
pub fn l1_factor_bound(mp: &CMatrix, eps: f64, phi: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if phi == 0.0 {
        return Ok(f64::INFINITY);
    }
    let norm = matrix::operator_norm(mp);
    let log = (12f64.powf(0.25) * norm / eps).ln();
    Ok((4.0 * std::f64::consts::PI + 16.0 * log) / phi.abs().sqrt())
}

/// Trapezoid estimate of ∫ dθ/(w₁(θ)w₂(θ)) for the rotated Hermitian parts.
pub fn l1_factor_quadrature(mp: &CMatrix, ktheta: usize) -> Result<f64> {
    let wtol = 1e-13 * matrix::operator_norm(mp);
    let vals = exec::par_map(ktheta, |j| -> Result<f64> {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / ktheta as f64;
        let h = hermitian_part(mp, theta)?;
        let w = w_functionals(&matrix::hermitian_eigenvalues(&h))?;
        if w.w1 <= wtol || w.w2 <= wtol {
            return Ok(f64::INFINITY);
        }
        Ok(1.0 / (w.w1 * w.w2))
    });
    let mut sum = 0.0;
    for v in vals {
        let v = v?;
        if !v.is_finite() {
            return Ok(f64::INFINITY);
        }
        sum += v;
    }
    Ok(2.0 * std::f64::consts::PI * sum / ktheta as f64)
}

// ---------------------------------------------------------------------------
// Cone-curvature segment check
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct ConeSegmentReport {
    pub maximizer: [f64; 3],
    pub f_abs: f64,
    /// d²/8.
    pub threshold: f64,
    pub holds: bool,
}

/// Exact maximization of |f| = |x²+y²−z²| along the segment p1→p2, whose
/// (x,y)-shadows must form a non-obtuse isosceles triangle with apex at the
/// origin and base length d.
pub fn cone_segment_check(p1: [f64; 3], p2: [f64; 3], d: f64) -> Result<ConeSegmentReport> {
    let n1 = (p1[0] * p1[0] + p1[1] * p1[1]).sqrt();
    let n2 = (p2[0] * p2[0] + p2[1] * p2[1]).sqrt();
    let scale = n1.max(n2).max(1e-300);
    if (n1 - n2).abs() > 1e-9 * scale {
        return Err(Error::DegenerateGeometry(format!(
            "shadows are not isosceles about the origin: |p1| = {n1}, |p2| = {n2}"
        )));
    }
    let dot = p1[0] * p2[0] + p1[1] * p2[1];
    if dot < -1e-12 * scale * scale {
        return Err(Error::DegenerateGeometry("apex angle is obtuse".into()));
    }
    let base = ((p1[0] - p2[0]).powi(2) + (p1[1] - p2[1]).powi(2)).sqrt();
    if (base - d).abs() > 1e-9 * scale.max(d) {
        return Err(Error::DegenerateGeometry(format!(
            "declared base {d} does not match shadows ({base})"
        )));
    }

    // f along the segment is a quadratic aλ² + bλ + c
    let dx = [p2[0] - p1[0], p2[1] - p1[1], p2[2] - p1[2]];
    let a = dx[0] * dx[0] + dx[1] * dx[1] - dx[2] * dx[2];
    let b = 2.0 * (p1[0] * dx[0] + p1[1] * dx[1] - p1[2] * dx[2]);
    let c = p1[0] * p1[0] + p1[1] * p1[1] - p1[2] * p1[2];
    let q = |lam: f64| a * lam * lam + b * lam + c;
    let mut candidates = vec![0.0, 1.0];
    if a != 0.0 {
        let vertex = -b / (2.0 * a);
        if (0.0..=1.0).contains(&vertex) {
            candidates.push(vertex);
        }
    }
    let (lam, f_abs) = candidates
        .into_iter()
        .map(|lam| (lam, q(lam).abs()))
        .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
        .unwrap();
    let maximizer = [p1[0] + lam * dx[0], p1[1] + lam * dx[1], p1[2] + lam * dx[2]];
    let threshold = d * d / 8.0;
    Ok(ConeSegmentReport {
        maximizer,
        f_abs,
        threshold,
        holds: f_abs >= threshold * (1.0 - 1e-12),
    })
}

// ---------------------------------------------------------------------------
// The appendix integral
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct AppendixIntegral {
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

/// ∫₀^π dθ / max(ε², |b + a·cos(2θ−θ₀)|) against its closed-form bound:
/// (4π + 16·log(√2·max(|a²−b²|^{1/4}/ε, 1)))/√(a²−b²) when a ≥ |b|, and
/// π/√(b²−a²) when a < |b|; +∞ (vacuous) at a = |b|.
pub fn appendix_integral(a: f64, b: f64, eps: f64, theta0: f64) -> Result<AppendixIntegral> {
    if !(a > 0.0) || !(eps > 0.0) {
        return Err(Error::InvalidArgument("need a > 0 and eps > 0".into()));
    }
    let eps2 = eps * eps;
    let g = |theta: f64| 1.0 / eps2.max((b + a * (2.0 * theta - theta0).cos()).abs());

    // split at the kinks: |b + a cos(2θ−θ₀)| ∈ {0, ε²}
    let mut cuts = vec![0.0, std::f64::consts::PI];
    for target in [-b, eps2 - b, -eps2 - b] {
        let u = target / a;
        if u.abs() <= 1.0 {
            let phi = u.acos();
            for base in [phi, -phi] {
                for k in -2i32..=3 {
                    let theta = (base + 2.0 * std::f64::consts::PI * k as f64 + theta0) / 2.0;
                    if theta > 0.0 && theta < std::f64::consts::PI {
                        cuts.push(theta);
                    }
                }
            }
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);

    let coarse: f64 = cuts.windows(2).map(|w| adaptive_simpson(&g, w[0], w[1], 1e-6, 20)).sum();
    let tol = 1e-8 * coarse.max(1.0) / cuts.len() as f64;
    let value: f64 = cuts.windows(2).map(|w| adaptive_simpson(&g, w[0], w[1], tol, 48)).sum();

    let disc = a * a - b * b;
    let bound = if disc == 0.0 {
        f64::INFINITY
    } else if disc > 0.0 {
        let ratio = (disc.powf(0.25) / eps).max(1.0);
        (4.0 * std::f64::consts::PI + 16.0 * (std::f64::consts::SQRT_2 * ratio).ln()) / disc.sqrt()
    } else {
        std::f64::consts::PI / (-disc).sqrt()
    };
    let holds = value <= bound * (1.0 + 1e-9) + 1e-12 || bound.is_infinite();
    Ok(AppendixIntegral { value, bound, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::bspline_build;
    use crate::matrix::{complex, diagonal, ginibre, ginibre_with};
    use approx::assert_relative_eq;

    #[test]
    fn regularize_block_layout() {
        let m = ginibre(6, 3);
        let mp = regularize(&m, 0.1).unwrap();
        assert_eq!(mp.nrows(), 10);
        // 1-indexed entries (7,8) and (9,10) hold 2ε
        assert_relative_eq!(mp[(6, 7)].re, 0.2, epsilon = 1e-15);
        assert_relative_eq!(mp[(8, 9)].re, 0.2, epsilon = 1e-15);
        assert_eq!(mp[(6, 6)], complex(0.0, 0.0));
        // appended blocks contribute singular values {2ε, 0} each
        let svs = matrix::singular_values(&mp);
        let mut expected = matrix::singular_values(&m);
        expected.extend_from_slice(&[0.2, 0.2, 0.0, 0.0]);
        expected.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for (got, want) in svs.iter().zip(&expected) {
            assert_relative_eq!(got, want, epsilon = 1e-10);
        }
    }

    #[test]
    fn regularize_w3_floor_and_monotone_geometry() {
        let m = ginibre(6, 5);
        let eps = 0.1;
        let mp = regularize(&m, eps).unwrap();
        for j in 0..64 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
            let h = hermitian_part(&mp, theta).unwrap();
            let w = w_functionals(&matrix::hermitian_eigenvalues(&h)).unwrap();
            assert!(w.w3 >= 2.0 * eps - 1e-12, "w3 {} below 2eps", w.w3);
            assert!(w.w1 / w.w3 <= matrix::operator_norm(&mp) / eps + 1e-9);
        }
        // inradius and σ₉ never shrink under regularization
        let r_m = numrange::numerical_range(&m, 128).unwrap().inner_radius();
        let r_mp = numrange::numerical_range(&mp, 128).unwrap().inner_radius();
        assert!(r_mp.hi >= r_m.hi - 1e-9);
        assert!(r_mp.lo >= eps - 1e-6);
        assert!(
            matrix::singular_value_or_zero(&mp, 9)
                >= matrix::singular_value_or_zero(&m, 9) - 1e-12
        );
    }

    #[test]
    fn rho_theta_composition() {
        // Hermitian M at θ = 0 gives the spline on its spectrum
        let m = diagonal(&[complex(0.0, 0.0), complex(1.0, 0.0), complex(2.0, 0.0)]);
        let d = rho_theta(&m, 0.0).unwrap();
        assert_relative_eq!(d.pdf(1.0).unwrap(), 1.0, epsilon = 1e-12);
        // nilpotent block: ±1 eigenvalues at every θ → uniform on (−1,1)
        let d = rho_theta(&nilpotent_block(), 1.234).unwrap();
        assert_relative_eq!(d.pdf(0.3).unwrap(), 0.5, epsilon = 1e-12);
        // 2π periodicity
        let m = ginibre(5, 8);
        let a = rho_theta(&m, 0.7).unwrap();
        let b = rho_theta(&m, 0.7 + 2.0 * std::f64::consts::PI).unwrap();
        for t in [-1.0, 0.0, 0.5, 2.0] {
            assert_relative_eq!(a.cdf(t), b.cdf(t), epsilon = 1e-9);
        }
    }

    /// Singularity-subtracted adaptive quadrature oracle for the p.v.
    /// transform of a continuous piecewise polynomial.
    fn pv_quadrature_oracle(pw: &PiecewisePoly, t: f64) -> f64 {
        let (lo, hi) = pw.support().unwrap();
        let ft = pw.eval(t);
        let deriv = pw.derivative();
        let integrand = move |tau: f64| {
            if (tau - t).abs() < 1e-13 {
                return -deriv.eval(t);
            }
            (pw.eval(tau) - ft) / (t - tau)
        };
        let mut cuts: Vec<f64> = pw.breaks().to_vec();
        if t > lo && t < hi {
            cuts.push(t);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        let mut total = 0.0;
        for w in cuts.windows(2) {
            total += adaptive_simpson(&integrand, w[0], w[1], 1e-10, 44);
        }
        total + ft * ((t - lo).abs().max(1e-300).ln() - (t - hi).abs().max(1e-300).ln())
    }

    #[test]
    fn pv_evaluator_matches_quadrature() {
        // ρ' for uniform knots (0,1,2,3): hand value at t = 1.5 is 3·ln 3
        let spline = bspline_build(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        let deriv = spline.piecewise().derivative();
        let pv = PvEvaluator::new(deriv.clone());
        assert_relative_eq!(pv.eval(1.5).value, 3.0 * 3f64.ln(), epsilon = 1e-12);

        for t in [-2.0, -0.3, 0.25, 0.75, 1.1, 1.9, 2.5, 3.7, 9.0] {
            let closed = pv.eval(t).value;
            let oracle = pv_quadrature_oracle(&deriv, t);
            assert_relative_eq!(closed, oracle, epsilon = 1e-6, max_relative = 1e-6);
        }

        // irregular knots, including evaluation exactly at interior knots
        let spline = bspline_build(&[-1.0, -0.2, 0.4, 1.9, 2.0]).unwrap();
        let deriv = spline.piecewise().derivative();
        let pv = PvEvaluator::new(deriv.clone());
        for t in [-0.9, -0.2, 0.1, 0.4, 1.0, 1.9, 1.95] {
            let closed = pv.eval(t).value;
            let oracle = pv_quadrature_oracle(&deriv, t);
            assert_relative_eq!(closed, oracle, epsilon = 1e-6, max_relative = 1e-6);
        }
    }

    #[test]
    fn pv_of_even_function_vanishes_at_center() {
        // the hat B[0,1,2] is even about 1, so p.v.∫ B(τ)/(1−τ) dτ = 0
        let hat = bspline_build(&[0.0, 1.0, 2.0]).unwrap();
        let pv = PvEvaluator::new(hat.piecewise().clone());
        assert!(pv.eval(1.0).value.abs() < 1e-12);
    }

    #[test]
    fn hilbert_respects_density_derivative_bound() {
        // H(ρ')(t) ≤ (1/π)·((n−1)(n−2)(n−3)/(w₁w₂))·log(4e·w₁/w₃) on the
        // spectral interval
        let mut rng = RngStream::new(31, 0).rng();
        for n in [4usize, 6, 9] {
            let g = ginibre_with(n, n, &mut rng);
            let h = (&g + g.adjoint()) * complex(0.5, 0.0);
            let eigs = matrix::hermitian_eigenvalues(&h);
            let w = w_functionals(&eigs).unwrap();
            if w.w1 <= 0.0 || w.w2 <= 0.0 || w.w3 <= 0.0 {
                continue;
            }
            let dens = hermitian_form_density(&eigs).unwrap();
            let s = dens.as_spline().unwrap();
            let nf = n as f64;
            let bound = (nf - 1.0) * (nf - 2.0) * (nf - 3.0) / (w.w1 * w.w2)
                * (4.0 * std::f64::consts::E * w.w1 / w.w3).ln()
                / std::f64::consts::PI;
            for i in 0..40 {
                let t = eigs[0] + (eigs[n - 1] - eigs[0]) * (i as f64 + 0.5) / 40.0;
                let hv = hilbert_spline_derivative(s, t).unwrap();
                assert!(hv.value <= bound + 1e-9, "H(rho')({t}) = {} > {bound}", hv.value);
            }
        }
    }

    #[test]
    fn density_of_hermitian_vanishes_off_axis() {
        let m = diagonal(&[
            complex(0.0, 0.0),
            complex(0.5, 0.0),
            complex(1.5, 0.0),
            complex(2.0, 0.0),
        ]);
        let ev = DensityEvaluator::new(&m, 64).unwrap();
        let d = ev.density(complex(1.0, 0.3));
        assert_eq!(d.value, 0.0);
        assert!(d.outside);
    }

    #[test]
    fn density_mass_of_normal_matrix() {
        // W = unit square for diag(0, 1, i, 1+i); cell-summed mass ≈ 1
        let m = diagonal(&[
            complex(0.0, 0.0),
            complex(1.0, 0.0),
            complex(0.0, 1.0),
            complex(1.0, 1.0),
        ]);
        let ev = DensityEvaluator::new(&m, 256).unwrap();
        let n_cells = 120;
        let cell = 1.0 / n_cells as f64;
        let mut mass = 0.0;
        for i in 0..n_cells {
            for j in 0..n_cells {
                let z = complex((i as f64 + 0.5) * cell, (j as f64 + 0.5) * cell);
                mass += ev.density(z).value * cell * cell;
            }
        }
        assert!((mass - 1.0).abs() <= 1e-2, "density mass {mass}");
    }

    #[test]
    fn density_rotation_equivariance() {
        let m = ginibre(5, 17);
        let k = 128;
        let alpha = 2.0 * std::f64::consts::PI * 8.0 / k as f64; // grid-commensurate
        let rot = Complex64::from_polar(1.0, alpha);
        let m_rot = &m * rot;
        let ev = DensityEvaluator::new(&m, k).unwrap();
        let ev_rot = DensityEvaluator::new(&m_rot, k).unwrap();
        let r = ev.region().inner_radius();
        let c = complex(r.center_lo.0, r.center_lo.1);
        for (dx, dy) in [(0.0, 0.0), (0.3, 0.1), (-0.2, 0.25), (0.1, -0.4)] {
            let z = c + complex(dx, dy) * r.lo;
            let a = ev.density(z);
            let b = ev_rot.density(z * rot);
            assert!(
                (a.value - b.value).abs() <= 1e-8 * a.value.max(1.0),
                "rotation equivariance broke: {} vs {}",
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn sup_bound_dominates_grid_density() {
        let m = regularize(&ginibre(4, 4), 0.15).unwrap();
        let ev = DensityEvaluator::new(&m, 128).unwrap();
        let bound = density_sup_bound(&m, 128).unwrap();
        assert!(bound.is_finite());
        let (x0, x1, y0, y1) = ev.region().bounding_box();
        let mut max_density: f64 = 0.0;
        let mut max_gap: f64 = 0.0;
        for i in 0..24 {
            for j in 0..24 {
                let z = complex(
                    x0 + (x1 - x0) * (i as f64 + 0.5) / 24.0,
                    y0 + (y1 - y0) * (j as f64 + 0.5) / 24.0,
                );
                let d = ev.density(z);
                max_density = max_density.max(d.value);
                max_gap = max_gap.max(d.gap);
            }
        }
        assert!(
            max_density <= bound + 10.0 * max_gap + 1e-9,
            "grid max {max_density} above bound {bound} (gap {max_gap})"
        );
    }

    #[test]
    fn density_sup_bound_degenerate_for_hermitian() {
        let m = diagonal(&[
            complex(0.0, 0.0),
            complex(1.0, 0.0),
            complex(2.0, 0.0),
            complex(3.0, 0.0),
        ]);
        assert_eq!(density_sup_bound(&m, 64).unwrap(), f64::INFINITY);
    }

    #[test]
    fn small_ball_point_mass_and_uniform() {
        let stream = RngStream::new(40, 0);
        let c = complex(0.7, -0.2);
        let m = diagonal(&[c, c, c]);
        let est = small_ball_empirical(&m, 1e-6, c, 500, &stream).unwrap();
        assert_eq!(est.p_hat, 1.0);

        // diag(0,1): q*Mq uniform on [0,1]
        let m = diagonal(&[complex(0.0, 0.0), complex(1.0, 0.0)]);
        let est =
            small_ball_empirical(&m, 0.1, complex(0.5, 0.0), 50_000, &stream.substream(1)).unwrap();
        assert!((est.p_hat - 0.2).abs() < 0.01, "p_hat {}", est.p_hat);
    }

    #[test]
    fn small_ball_bound_cases() {
        // Hermitian: zero inradius → +∞
        let m = diagonal(&[
            complex(0.0, 0.0),
            complex(1.0, 0.0),
            complex(2.0, 0.0),
            complex(3.0, 0.0),
            complex(4.0, 0.0),
        ]);
        assert_eq!(small_ball_bound(&m, 0.5).unwrap(), f64::INFINITY);

        // Ginibre with n ≥ 9: finite and dominating the empirical estimate
        let m = ginibre(12, 5);
        let eps = 1e-2;
        let bound = small_ball_bound(&m, eps).unwrap();
        assert!(bound.is_finite());
        let stream = RngStream::new(41, 0);
        let est = small_ball_empirical(&m, eps, complex(0.0, 0.0), 20_000, &stream).unwrap();
        assert!(est.ci_upper <= bound, "{} > {}", est.ci_upper, bound);

        // ε² log²(4e‖M‖/ε) is increasing on (0, ‖M‖/e²)
        let lim = matrix::operator_norm(&m) / std::f64::consts::E.powi(2);
        let grid: Vec<f64> = (1..40).map(|i| lim * i as f64 / 40.0).collect();
        let mut prev = 0.0;
        for &e in &grid {
            let b = small_ball_bound(&m, e).unwrap();
            assert!(b >= prev * (1.0 - 1e-12), "bound not monotone at eps {e}");
            prev = b;
        }
    }

    #[test]
    fn phi_formula_cases() {
        // εN: Φ = −4ε⁴
        let eps = 0.3;
        let b = nilpotent_block() * complex(eps, 0.0);
        assert_relative_eq!(phi_2x2(&b).unwrap(), -4.0 * eps.powi(4), epsilon = 1e-12);
        // identity and positive diagonal: 0
        assert_relative_eq!(phi_2x2(&CMatrix::identity(2, 2)).unwrap(), 0.0);
        let d = diagonal(&[complex(2.0, 0.0), complex(5.0, 0.0)]);
        assert_relative_eq!(phi_2x2(&d).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn l1_factor_arithmetic_scaling_and_quadrature() {
        // direct formula at ‖M'‖ = 1, ε = 0.1, φ = 0.01
        let id = CMatrix::identity(2, 2);
        let v = l1_factor_bound(&id, 0.1, 0.01).unwrap();
        let expected = (4.0 * std::f64::consts::PI + 16.0 * (12f64.powf(0.25) * 10.0).ln()) / 0.1;
        assert_relative_eq!(v, expected, epsilon = 1e-9);
        assert!((v - 593.4736).abs() < 0.001, "got {v}");

        // scaling: bound(cM', cε, c⁴φ) = bound(M', ε, φ)/c²
        let m = ginibre(5, 2);
        let c = 1.7;
        let b1 = l1_factor_bound(&m, 0.05, 0.3).unwrap();
        let b2 = l1_factor_bound(&(&m * complex(c, 0.0)), c * 0.05, c.powi(4) * 0.3).unwrap();
        assert_relative_eq!(b2, b1 / (c * c), max_relative = 1e-10);

        // quadrature of 1/(w₁w₂) is dominated by the witness-induced bound
        let eps = 0.1;
        let mp = regularize(&ginibre(6, 11), eps).unwrap();
        let stream = RngStream::new(42, 0);
        let wit = phi_witness(&mp, 4000, &stream).unwrap();
        let quad = l1_factor_quadrature(&mp, 512).unwrap();
        let bound = l1_factor_bound(&mp, eps, wit.phi_value).unwrap();
        assert!(quad <= bound * (1.0 + 1e-6), "quadrature {quad} above bound {bound}");
    }

    #[test]
    fn attain_interior_points() {
        let m = ginibre(7, 21);
        let sweep = numrange::support_sweep(&m, 64).unwrap();
        let region = numrange::numerical_range(&m, 128).unwrap();
        let r = region.inner_radius();
        let c = complex(r.center_lo.0, r.center_lo.1);
        for (dx, dy) in [(0.0, 0.0), (0.9, 0.0), (0.0, -0.9), (0.5, 0.5), (-0.7, 0.2)] {
            let z = c + complex(dx, dy) * r.lo;
            let v = attain_numerical_range_point(&m, z, &sweep).unwrap();
            assert_relative_eq!(v.norm(), 1.0, epsilon = 1e-10);
            let got = (v.adjoint() * &m * &v)[(0, 0)];
            assert!((got - z).norm() <= 1e-10 * matrix::operator_norm(&m));
        }
    }

    #[test]
    fn phi_witness_attains_bound_and_reproduces() {
        // normal octagonal base keeps σ₉(M') = 2ε > 0 and puts the Chebyshev
        // center at the origin, exercising the z₀ = 0 fallback direction
        let base = diagonal(&[
            complex(2.0, 0.0),
            complex(0.0, 2.0),
            complex(-2.0, 0.0),
            complex(0.0, -2.0),
            complex(1.0, 1.0),
            complex(-1.0, 1.0),
            complex(-1.0, -1.0),
            complex(1.0, -1.0),
        ]);
        let mp = regularize(&base, 0.05).unwrap();
        assert!(matrix::singular_value_or_zero(&mp, 9) > 0.0);
        let stream = RngStream::new(43, 0);
        let w1 = phi_witness(&mp, 6000, &stream).unwrap();
        assert!(w1.bound > 0.0);
        assert!(w1.attained, "phi {} below bound {}", w1.phi_value, w1.bound);
        // the witness value is reproducible from U and M' by direct evaluation
        let direct = phi_2x2(&(w1.u.adjoint() * &mp * &w1.u)).unwrap();
        assert_relative_eq!(direct, w1.phi_value, max_relative = 1e-10);
        // determinism
        let w2 = phi_witness(&mp, 6000, &stream).unwrap();
        assert_eq!(w1.phi_value, w2.phi_value);
        assert_eq!(w1.u, w2.u);
        // degenerate (zero inradius) inputs are rejected
        let herm =
            diagonal(&(0..9).map(|k| complex(k as f64, 0.0)).collect::<Vec<_>>());
        assert!(phi_witness(&herm, 100, &stream).is_err());
    }

    #[test]
    fn cone_segment_cases() {
        // flat segment: f = x² + y² ≥ 1 ≫ d²/8
        let rep = cone_segment_check([1.0, 0.5, 0.0], [1.0, -0.5, 0.0], 1.0).unwrap();
        assert!(rep.holds);
        assert!(rep.f_abs >= 1.0);
        // symmetric case z₊ = −z₋: the midpoint has f = x² + y² ≥ d²/4
        let rep = cone_segment_check([1.0, 0.5, 2.0], [1.0, -0.5, -2.0], 1.0).unwrap();
        assert!(rep.holds);
        assert!(rep.f_abs >= 0.25);
        // violated preconditions
        assert!(cone_segment_check([1.0, 0.0, 0.0], [0.0, 2.0, 0.0], 1.0).is_err());
        assert!(cone_segment_check([1.0, 1.1, 0.0], [1.0, -1.1, 0.0], 2.2).is_err());
    }

    #[test]
    fn cone_segment_random_configurations() {
        let mut rng = RngStream::new(44, 0).rng();
        for _ in 0..2000 {
            let len: f64 = 0.1 + 5.0 * rng.random::<f64>();
            let half_apex = 0.01 + (std::f64::consts::FRAC_PI_4 - 0.02) * rng.random::<f64>();
            let rot: f64 = 2.0 * std::f64::consts::PI * rng.random::<f64>();
            let a1 = rot + half_apex;
            let a2 = rot - half_apex;
            let z1 = 10.0 * (rng.random::<f64>() - 0.5) * len;
            let z2 = 10.0 * (rng.random::<f64>() - 0.5) * len;
            let p1 = [len * a1.cos(), len * a1.sin(), z1];
            let p2 = [len * a2.cos(), len * a2.sin(), z2];
            let d = 2.0 * len * half_apex.sin();
            let rep = cone_segment_check(p1, p2, d).unwrap();
            assert!(rep.holds, "violated at d = {d}: |f| = {} < {}", rep.f_abs, rep.threshold);
        }
    }

    #[test]
    fn appendix_integral_examples() {
        // a=1, b=0, ε=1: integrand ≡ 1, value = π
        let r = appendix_integral(1.0, 0.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI, epsilon = 1e-8);
        let expected_bound = 4.0 * std::f64::consts::PI + 16.0 * std::f64::consts::SQRT_2.ln();
        assert_relative_eq!(r.bound, expected_bound, epsilon = 1e-12);
        assert!(r.holds);

        // a < |b|: exact antiderivative branch, value = π/√(b²−a²)
        let r = appendix_integral(1.0, 5.0, 0.05, 0.0).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI / 24f64.sqrt(), epsilon = 1e-7);
        assert!(r.holds);

        // θ₀ shift invariance
        let base = appendix_integral(2.0, 0.7, 0.3, 0.0).unwrap();
        for theta0 in [0.4, 1.9, 3.3, 6.0] {
            let r = appendix_integral(2.0, 0.7, 0.3, theta0).unwrap();
            assert_relative_eq!(r.value, base.value, epsilon = 1e-7);
        }

        // vacuous at a = |b|
        let r = appendix_integral(1.0, 1.0, 0.2, 0.0).unwrap();
        assert!(r.bound.is_infinite() && r.holds);
    }
}
