//! Polynomial B-splines with exact piecewise representation, and the density
//! of Hermitian quadratic forms q*Hq.
//!
//! A spline over knots t₁ ≤ … ≤ t_n is held as explicit polynomial pieces
//! over the distinct-knot grid, each in a local coordinate anchored at the
//! piece's left endpoint. Derivatives, antiderivatives, and principal-value
//! integrals downstream are all closed-form on this representation.

use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Polynomials in a local coordinate
// ---------------------------------------------------------------------------

/// Dense polynomial, coefficients in ascending powers of the local variable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly { coeffs: out }
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Multiply by the linear factor c0 + c1·u.
    pub fn mul_linear(&self, c0: f64, c1: f64) -> Poly {
        if self.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c0 * c;
            out[i + 1] += c1 * c;
        }
        Poly { coeffs: out }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect(),
        }
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        if self.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k + 1] = c / (k as f64 + 1.0);
        }
        Poly { coeffs: out }
    }
}

// ---------------------------------------------------------------------------
// Piecewise polynomials
// ---------------------------------------------------------------------------

/// Piecewise polynomial over ascending breakpoints. Piece `i` covers
/// `[breaks[i], breaks[i+1]]` in the local coordinate `u = t − breaks[i]`,
/// and the function is zero outside `[breaks[0], breaks.last()]`.
#[derive(Clone, Debug, Default)]
pub struct PiecewisePoly {
    breaks: Vec<f64>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breaks: Vec<f64>, pieces: Vec<Poly>) -> Result<Self> {
        if breaks.len() != pieces.len() + 1 && !(breaks.is_empty() && pieces.is_empty()) {
            return Err(Error::InvalidArgument(format!(
                "piecewise polynomial needs breaks = pieces + 1, got {} and {}",
                breaks.len(),
                pieces.len()
            )));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("breakpoints must be strictly increasing".into()));
        }
        Ok(PiecewisePoly { breaks, pieces })
    }

    pub fn empty() -> Self {
        PiecewisePoly::default()
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        if self.breaks.is_empty() {
            None
        } else {
            Some((self.breaks[0], *self.breaks.last().unwrap()))
        }
    }

    /// Index of the piece containing `t`: half-open intervals, with the last
    /// interval closed on the right.
    pub fn piece_index(&self, t: f64) -> Option<usize> {
        let (lo, hi) = self.support()?;
        if t < lo || t > hi {
            return None;
        }
        if t == hi {
            return Some(self.pieces.len() - 1);
        }
        match self.breaks.binary_search_by(|b| b.partial_cmp(&t).unwrap()) {
            Ok(i) => Some(i.min(self.pieces.len() - 1)),
            Err(i) => Some(i - 1),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.piece_index(t) {
            Some(i) => self.pieces[i].eval(t - self.breaks[i]),
            None => 0.0,
        }
    }

    pub fn scale(&self, s: f64) -> PiecewisePoly {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(s)).collect(),
        }
    }

    /// Sum of two piecewise polynomials over the same breakpoint grid.
    pub fn add(&self, other: &PiecewisePoly) -> Result<PiecewisePoly> {
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        if self.breaks != other.breaks {
            return Err(Error::InvalidArgument(
                "piecewise sum needs matching breakpoints".into(),
            ));
        }
        Ok(PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self
                .pieces
                .iter()
                .zip(&other.pieces)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    /// Piecewise derivative (the a.e. derivative; jumps at breakpoints carry
    /// no delta terms in this representation).
    pub fn derivative(&self) -> PiecewisePoly {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| p.derivative()).collect(),
        }
    }

    /// Exact integral over the whole support.
    pub fn integral(&self) -> f64 {
        self.breaks
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| p.antiderivative().eval(w[1] - w[0]))
            .sum()
    }

    /// Exact cumulative integral ∫_{−∞}^{t}.
    pub fn cumulative(&self, t: f64) -> f64 {
        let Some((lo, hi)) = self.support() else { return 0.0 };
        if t <= lo {
            return 0.0;
        }
        let mut acc = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            let a = self.breaks[i];
            let b = self.breaks[i + 1];
            if t >= b {
                acc += p.antiderivative().eval(b - a);
            } else {
                acc += p.antiderivative().eval(t - a);
                return acc;
            }
        }
        debug_assert!(t >= hi);
        acc
    }
}

// ---------------------------------------------------------------------------
// B-splines
// ---------------------------------------------------------------------------

/// B[t₁,…,t_n]: degree n−2 piecewise polynomial from the two-term knot
/// recursion, with the zero-denominator convention realizing the repeated
/// knot limit.
#[derive(Clone, Debug)]
pub struct Bspline {
    knots: Vec<f64>,
    pw: PiecewisePoly,
    /// B[t₁,…,t_{n−1}] and B[t₂,…,t_n] on the same grid (n ≥ 3).
    sub: Option<(PiecewisePoly, PiecewisePoly)>,
}

fn distinct_values(knots: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(knots.len());
    for &t in knots {
        if out.last() != Some(&t) {
            out.push(t);
        }
    }
    out
}

pub fn bspline_build(knots: &[f64]) -> Result<Bspline> {
    let n = knots.len();
    if n < 2 {
        return Err(Error::InvalidArgument("a B-spline needs at least 2 knots".into()));
    }
    if knots.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("knots must be finite".into()));
    }
    if knots.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("knots must be weakly increasing".into()));
    }
    let breaks = distinct_values(knots);
    let npieces = breaks.len().saturating_sub(1);

    let wrap = |pieces: Vec<Poly>| -> PiecewisePoly {
        if npieces == 0 {
            PiecewisePoly::empty()
        } else {
            PiecewisePoly { breaks: breaks.clone(), pieces }
        }
    };

    // order 1: indicators of (t_j, t_{j+1})
    let pos = |t: f64| breaks.binary_search_by(|b| b.partial_cmp(&t).unwrap()).unwrap();
    let mut prev: Vec<Vec<Poly>> = (0..n - 1)
        .map(|j| {
            let mut pieces = vec![Poly::zero(); npieces];
            if knots[j] < knots[j + 1] {
                for piece in pieces.iter_mut().take(pos(knots[j + 1])).skip(pos(knots[j])) {
                    *piece = Poly::constant(1.0);
                }
            }
            pieces
        })
        .collect();

    let mut sub = None;
    for w in 2..n {
        if w == n - 1 {
            // the level below the final spline: B[t₁..t_{n−1}], B[t₂..t_n]
            sub = Some((wrap(prev[0].clone()), wrap(prev[1].clone())));
        }
        let mut cur: Vec<Vec<Poly>> = Vec::with_capacity(n - w);
        for j in 0..(n - w) {
            let mut pieces = vec![Poly::zero(); npieces];
            let d1 = knots[j + w - 1] - knots[j];
            if d1 > 0.0 {
                for (i, piece) in prev[j].iter().enumerate() {
                    if !piece.is_zero() {
                        // (t − t_j)/d1 in local coords: t = breaks[i] + u
                        let term = piece.mul_linear((breaks[i] - knots[j]) / d1, 1.0 / d1);
                        pieces[i] = pieces[i].add(&term);
                    }
                }
            }
            let d2 = knots[j + w] - knots[j + 1];
            if d2 > 0.0 {
                for (i, piece) in prev[j + 1].iter().enumerate() {
                    if !piece.is_zero() {
                        let term = piece.mul_linear((knots[j + w] - breaks[i]) / d2, -1.0 / d2);
                        pieces[i] = pieces[i].add(&term);
                    }
                }
            }
            cur.push(pieces);
        }
        prev = cur;
    }

    let pw = wrap(prev.swap_remove(0));
    Ok(Bspline { knots: knots.to_vec(), pw, sub })
}

impl Bspline {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn piecewise(&self) -> &PiecewisePoly {
        &self.pw
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.pw.eval(t)
    }

    pub fn integral(&self) -> f64 {
        self.pw.integral()
    }

    /// Derivative through the lower-order spline combination
    /// (n−2)·(B[t₁..t_{n−1}]/(t_{n−1}−t₁) − B[t₂..t_n]/(t_n−t₂)),
    /// with zero-denominator terms dropped. This is the distributional
    /// derivative minus any delta terms at repeated knots.
    pub fn derivative_recurrence(&self) -> Result<PiecewisePoly> {
        let n = self.knots.len();
        if n < 3 {
            return Err(Error::InvalidArgument("derivative recursion needs n >= 3 knots".into()));
        }
        let (low, high) = self.sub.as_ref().expect("sub-splines cached for n >= 3");
        let factor = (n - 2) as f64;
        let mut acc = PiecewisePoly::empty();
        let dlow = self.knots[n - 2] - self.knots[0];
        if dlow > 0.0 {
            acc = acc.add(&low.scale(factor / dlow))?;
        }
        let dhigh = self.knots[n - 1] - self.knots[1];
        if dhigh > 0.0 {
            acc = acc.add(&high.scale(-factor / dhigh))?;
        }
        if acc.is_empty() && !self.pw.is_empty() {
            // both denominators vanished but the spline itself has support;
            // cannot happen for weakly increasing knots with t_n > t_1
            return Err(Error::DegenerateGeometry("derivative of a point-support spline".into()));
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Eigenvalue-gap functionals
// ---------------------------------------------------------------------------

/// w₁ = λ₁−λ_n, w₂ = ((λ₂−λ_n)⁻¹ + (λ₁−λ_{n−1})⁻¹)⁻¹, w₃ = λ₂−λ_{n−1},
/// from an ascending spectrum. Degenerate gaps give w₂ = 0.
#[derive(Debug, Clone, Copy)]
pub struct WFunctionals {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

pub fn w_functionals(eigs_ascending: &[f64]) -> Result<WFunctionals> {
    let n = eigs_ascending.len();
    if n < 4 {
        return Err(Error::InvalidArgument(format!("w-functionals need n >= 4, got {n}")));
    }
    if eigs_ascending.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("eigenvalues must be sorted ascending".into()));
    }
    let lam_n = eigs_ascending[0];
    let lam_nm1 = eigs_ascending[1];
    let lam_2 = eigs_ascending[n - 2];
    let lam_1 = eigs_ascending[n - 1];
    let w1 = lam_1 - lam_n;
    let g1 = lam_2 - lam_n;
    let g2 = lam_1 - lam_nm1;
    let w2 = if g1 <= 0.0 || g2 <= 0.0 { 0.0 } else { 1.0 / (1.0 / g1 + 1.0 / g2) };
    let w3 = lam_2 - lam_nm1;
    Ok(WFunctionals { w1, w2, w3 })
}

/// Lower bound −(n−1)(n−2)(n−3)/(w₁w₂w₃) for the second derivative of the
/// normalized density on the inner knot interval; −∞ when a gap degenerates.
pub fn concavity_floor(eigs_ascending: &[f64]) -> Result<f64> {
    let n = eigs_ascending.len();
    let w = w_functionals(eigs_ascending)?;
    let denom = w.w1 * w.w2 * w.w3;
    if denom <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let nf = n as f64;
    Ok(-(nf - 1.0) * (nf - 2.0) * (nf - 3.0) / denom)
}

// ---------------------------------------------------------------------------
// Density of q*Hq
// ---------------------------------------------------------------------------

/// Relative threshold for merging near-coincident eigenvalues into a single
/// repeated knot before building the spline.
pub const KNOT_MERGE_TOL: f64 = 1e-12;

/// Density of q*Hq for a Haar unit vector q and Hermitian H with the given
/// spectrum: the normalized spline B̃ = (n−1)/(λ₁−λ_n)·B, or a point mass
/// when the spectrum is a single point.
#[derive(Clone, Debug)]
pub enum HermitianFormDensity {
    PointMass(f64),
    Spline(NormalizedSpline),
}

#[derive(Clone, Debug)]
pub struct NormalizedSpline {
    pub spline: Bspline,
    /// (n−1)/(λ₁−λ_n); also the sup bound on the density.
    pub scale: f64,
}

impl NormalizedSpline {
    pub fn pdf(&self, t: f64) -> f64 {
        self.scale * self.spline.eval(t)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        self.scale * self.spline.piecewise().cumulative(t)
    }

    /// Density pieces scaled to integrate to one.
    pub fn pieces(&self) -> PiecewisePoly {
        self.spline.piecewise().scale(self.scale)
    }
}

impl HermitianFormDensity {
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            HermitianFormDensity::PointMass(c) => {
                if t >= *c {
                    1.0
                } else {
                    0.0
                }
            }
            HermitianFormDensity::Spline(s) => s.cdf(t),
        }
    }

    pub fn pdf(&self, t: f64) -> Option<f64> {
        match self {
            HermitianFormDensity::PointMass(_) => None,
            HermitianFormDensity::Spline(s) => Some(s.pdf(t)),
        }
    }

    /// Sup of the density: (n−1)/(λ₁−λ_n), or ∞ for a point mass.
    pub fn sup_bound(&self) -> f64 {
        match self {
            HermitianFormDensity::PointMass(_) => f64::INFINITY,
            HermitianFormDensity::Spline(s) => s.scale,
        }
    }

    pub fn as_spline(&self) -> Option<&NormalizedSpline> {
        match self {
            HermitianFormDensity::Spline(s) => Some(s),
            HermitianFormDensity::PointMass(_) => None,
        }
    }
}

/// Snap eigenvalues closer than `KNOT_MERGE_TOL`·span to their cluster mean so
/// the spline recursion sees exactly repeated knots.
fn merged_knots(eigs: &[f64]) -> Vec<f64> {
    let span = eigs[eigs.len() - 1] - eigs[0];
    let tol = KNOT_MERGE_TOL * span;
    let mut out = Vec::with_capacity(eigs.len());
    let mut i = 0;
    while i < eigs.len() {
        let mut j = i + 1;
        while j < eigs.len() && eigs[j] - eigs[j - 1] <= tol {
            j += 1;
        }
        let mean = eigs[i..j].iter().sum::<f64>() / (j - i) as f64;
        for _ in i..j {
            out.push(mean);
        }
        i = j;
    }
    out
}

/// Build the density of q*Hq from the ascending spectrum of H.
pub fn hermitian_form_density(eigs_ascending: &[f64]) -> Result<HermitianFormDensity> {
    let n = eigs_ascending.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least 2 eigenvalues".into()));
    }
    if eigs_ascending.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("eigenvalues must be sorted ascending".into()));
    }
    let span = eigs_ascending[n - 1] - eigs_ascending[0];
    if span <= 0.0 {
        return Ok(HermitianFormDensity::PointMass(eigs_ascending[0]));
    }
    let knots = merged_knots(eigs_ascending);
    let span = knots[n - 1] - knots[0];
    if span <= 0.0 {
        return Ok(HermitianFormDensity::PointMass(knots[0]));
    }
    let spline = bspline_build(&knots)?;
    Ok(HermitianFormDensity::Spline(NormalizedSpline { spline, scale: (n as f64 - 1.0) / span }))
}

/// Density value at a point (spec-level convenience).
pub fn hermitian_form_density_at(eigs_ascending: &[f64], t: f64) -> Result<HermitianFormDensity> {
    let _ = t;
    hermitian_form_density(eigs_ascending)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn indicator_spline() {
        let b = bspline_build(&[0.0, 1.0]).unwrap();
        assert_relative_eq!(b.eval(0.5), 1.0);
        assert_relative_eq!(b.eval(1.5), 0.0);
        assert_relative_eq!(b.integral(), 1.0);
    }

    #[test]
    fn hat_spline() {
        let b = bspline_build(&[0.0, 1.0, 2.0]).unwrap();
        assert_relative_eq!(b.eval(0.5), 0.5, epsilon = 1e-14);
        assert_relative_eq!(b.eval(1.0), 1.0, epsilon = 1e-14);
        assert_relative_eq!(b.eval(1.75), 0.25, epsilon = 1e-14);
        assert_relative_eq!(b.integral(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn quadratic_spline_pieces() {
        // uniform knots (0,1,2,3): t²/2, −t²+3t−3/2, (3−t)²/2
        let b = bspline_build(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(b.integral(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(b.eval(0.5), 0.125, epsilon = 1e-14);
        assert_relative_eq!(b.eval(1.5), 0.75, epsilon = 1e-14);
        assert_relative_eq!(b.eval(2.5), 0.125, epsilon = 1e-14);
        // symmetry: derivative vanishes at the midpoint
        let d = b.derivative_recurrence().unwrap();
        assert_relative_eq!(d.eval(1.5), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn derivative_of_hat_is_plus_minus_one() {
        let b = bspline_build(&[0.0, 1.0, 2.0]).unwrap();
        let d = b.derivative_recurrence().unwrap();
        assert_relative_eq!(d.eval(0.5), 1.0, epsilon = 1e-14);
        assert_relative_eq!(d.eval(1.5), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn derivative_recurrence_matches_piecewise_differentiation() {
        let knots = [0.0, 0.3, 1.1, 1.15, 2.7, 4.0];
        let b = bspline_build(&knots).unwrap();
        let rec = b.derivative_recurrence().unwrap();
        let direct = b.piecewise().derivative();
        for i in 0..=100 {
            let t = -0.5 + 5.0 * i as f64 / 100.0;
            assert_relative_eq!(rec.eval(t), direct.eval(t), epsilon = 1e-10, max_relative = 1e-9);
        }
    }

    #[test]
    fn repeated_knots_take_the_limit() {
        // B[0,0,1](t) = 1−t on (0,1)
        let b = bspline_build(&[0.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(b.eval(0.25), 0.75, epsilon = 1e-14);
        assert_relative_eq!(b.integral(), 0.5, epsilon = 1e-14);
        // full collision: zero support
        let b = bspline_build(&[1.0, 1.0, 1.0]).unwrap();
        assert!(b.piecewise().is_empty());
        assert_relative_eq!(b.integral(), 0.0);
    }

    #[test]
    fn w_functionals_arithmetic() {
        let w = w_functionals(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(w.w1, 3.0);
        assert_relative_eq!(w.w2, 1.0);
        assert_relative_eq!(w.w3, 1.0);

        let w = w_functionals(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(w.w2, 0.0);

        // shift invariance
        let a = w_functionals(&[0.1, 0.7, 1.3, 2.9]).unwrap();
        let b = w_functionals(&[5.1, 5.7, 6.3, 7.9]).unwrap();
        assert_relative_eq!(a.w1, b.w1, epsilon = 1e-12);
        assert_relative_eq!(a.w2, b.w2, epsilon = 1e-12);
        assert_relative_eq!(a.w3, b.w3, epsilon = 1e-12);

        assert!(w_functionals(&[0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn concavity_floor_value_and_tightness() {
        // knots (0,1,2,3): floor = −3·2·1/(3·1·1) = −2, attained by the
        // middle piece of the normalized quadratic spline
        let eigs = [0.0, 1.0, 2.0, 3.0];
        let floor = concavity_floor(&eigs).unwrap();
        assert_relative_eq!(floor, -2.0, epsilon = 1e-12);

        let dens = hermitian_form_density(&eigs).unwrap();
        let second = dens.as_spline().unwrap().pieces().derivative().derivative();
        let mut min_inner = f64::INFINITY;
        for i in 0..=1000 {
            let t = 1.0 + i as f64 / 1000.0;
            min_inner = min_inner.min(second.eval(t));
        }
        assert!(min_inner >= floor - 1e-12);
        assert_relative_eq!(min_inner, floor, epsilon = 1e-9);
        // outside the inner interval the density is convex
        for t in [0.1, 0.5, 0.9, 2.1, 2.5, 2.9] {
            assert!(second.eval(t) >= -1e-10);
        }
    }

    #[test]
    fn concavity_floor_scaling_and_degeneracy() {
        let eigs = [0.0, 0.4, 1.7, 2.2];
        let f1 = concavity_floor(&eigs).unwrap();
        let scaled: Vec<f64> = eigs.iter().map(|x| 2.0 * x).collect();
        let f2 = concavity_floor(&scaled).unwrap();
        assert_relative_eq!(f2, f1 / 8.0, max_relative = 1e-12);
        assert_eq!(concavity_floor(&[0.0, 0.0, 0.0, 1.0]).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn hermitian_density_examples() {
        // two eigenvalues: uniform on (0,1)
        let d = hermitian_form_density(&[0.0, 1.0]).unwrap();
        assert_relative_eq!(d.pdf(0.3).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(d.cdf(0.25), 0.25, epsilon = 1e-14);

        // point mass for a scalar spectrum
        let d = hermitian_form_density(&[2.0, 2.0, 2.0]).unwrap();
        match d {
            HermitianFormDensity::PointMass(c) => assert_relative_eq!(c, 2.0),
            _ => panic!("expected point mass"),
        }

        // three eigenvalues (0,1,2): density at t = 1 is (n−1)/span·B(1) = 1
        let d = hermitian_form_density(&[0.0, 1.0, 2.0]).unwrap();
        assert_relative_eq!(d.pdf(1.0).unwrap(), 1.0, epsilon = 1e-14);

        // sup bound
        let d = hermitian_form_density(&[0.0, 0.5, 1.5, 4.0]).unwrap();
        assert_relative_eq!(d.sup_bound(), 3.0 / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn near_coincident_eigenvalues_are_merged() {
        let eps = 1e-15;
        let d = hermitian_form_density(&[0.0, 1.0, 1.0 + eps, 2.0]).unwrap();
        let s = d.as_spline().unwrap();
        // merged to a genuine double knot: still a valid density
        assert_relative_eq!(
            s.spline.piecewise().integral() * s.scale,
            1.0,
            epsilon = 1e-12
        );
        assert!(s.pdf(1.0).is_finite());
    }

    proptest! {
        #[test]
        fn spline_bounds_and_integral(raw in proptest::collection::vec(-10.0f64..10.0, 2..10)) {
            let mut knots = raw;
            knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let n = knots.len();
            let span = knots[n - 1] - knots[0];
            prop_assume!(span > 1e-6);
            let b = bspline_build(&knots).unwrap();
            // Fact: 0 ≤ B ≤ 1, ∫B = span/(n−1)
            prop_assert!((b.integral() - span / (n as f64 - 1.0)).abs() <= 1e-10 * span.max(1.0));
            for i in 0..=200 {
                let t = knots[0] - 0.1 + (span + 0.2) * i as f64 / 200.0;
                let v = b.eval(t);
                prop_assert!(v >= -1e-12 && v <= 1.0 + 1e-12, "B({t}) = {v}");
            }
        }

        #[test]
        fn cumulative_is_monotone_cdf(raw in proptest::collection::vec(-5.0f64..5.0, 4..9)) {
            let mut eigs = raw;
            eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assume!(eigs[eigs.len() - 1] - eigs[0] > 1e-3);
            let d = hermitian_form_density(&eigs).unwrap();
            let lo = eigs[0] - 0.5;
            let hi = eigs[eigs.len() - 1] + 0.5;
            let mut prev = -1e-12;
            for i in 0..=100 {
                let t = lo + (hi - lo) * i as f64 / 100.0;
                let c = d.cdf(t);
                prop_assert!(c >= prev - 1e-12);
                prev = c;
            }
            prop_assert!((d.cdf(hi) - 1.0).abs() < 1e-10);
        }
    }
}
