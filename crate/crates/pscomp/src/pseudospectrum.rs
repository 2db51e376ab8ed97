//! Pseudospectrum membership, certified area, global shifted singular-value
//! minima, and expected-area bound evaluators.
//!
//! Area estimation classifies grid cells with the 1-Lipschitz bound
//! |σ_min(z−M) − σ_min(z'−M)| ≤ |z−z'|: a cell is IN when the center value
//! sits below ε minus the half-diagonal, OUT when above ε plus it, and
//! boundary otherwise. Boundary cells are subdivided until their total area
//! falls under the requested budget, which makes the returned [lo, hi]
//! interval certified — dominance tests then compare from the safe side.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::compressions::compress;
use crate::exec;
use crate::matrix::{self, CMatrix};
use crate::numrange::{self, ConvexRegion};
use crate::rand_frames::sample_haar_frame;
use crate::rng::RngStream;
use crate::stats;
use crate::tail_bounds::BoundConstants;
use crate::{Error, Result};

/// σ_min(zI − M) ≤ ε.
pub fn in_pseudospectrum(m: &CMatrix, z: Complex64, eps: f64) -> bool {
    matrix::smallest_singular_value(&matrix::shifted(m, z)) <= eps
}

// ---------------------------------------------------------------------------
// Fixed grid classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellClass {
    In,
    Out,
    Boundary,
}

/// One-shot classification of a rectangle into IN/OUT/boundary cells.
#[derive(Debug, Clone)]
pub struct PseudospectrumGrid {
    pub bbox: (f64, f64, f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<CellClass>,
    pub area_lo: f64,
    pub area_hi: f64,
}

impl PseudospectrumGrid {
    pub fn cell_at(&self, z: Complex64) -> Option<CellClass> {
        let (x0, x1, y0, y1) = self.bbox;
        if z.re < x0 || z.re > x1 || z.im < y0 || z.im > y1 {
            return None;
        }
        let i = (((z.re - x0) / (x1 - x0) * self.nx as f64) as usize).min(self.nx - 1);
        let j = (((z.im - y0) / (y1 - y0) * self.ny as f64) as usize).min(self.ny - 1);
        Some(self.cells[j * self.nx + i])
    }
}

pub fn classify_grid(
    m: &CMatrix,
    eps: f64,
    bbox: (f64, f64, f64, f64),
    nx: usize,
) -> Result<PseudospectrumGrid> {
    if nx < 2 {
        return Err(Error::InvalidArgument("grid needs nx >= 2".into()));
    }
    let (x0, x1, y0, y1) = bbox;
    if !(x1 > x0 && y1 > y0) {
        return Err(Error::InvalidArgument("empty bounding box".into()));
    }
    let aspect = (y1 - y0) / (x1 - x0);
    let ny = ((nx as f64 * aspect).round() as usize).max(2);
    let wx = (x1 - x0) / nx as f64;
    let wy = (y1 - y0) / ny as f64;
    let half_diag = 0.5 * (wx * wx + wy * wy).sqrt();
    let cells = exec::par_map(nx * ny, |idx| {
        let i = idx % nx;
        let j = idx / nx;
        let c = Complex64::new(x0 + (i as f64 + 0.5) * wx, y0 + (j as f64 + 0.5) * wy);
        let s = matrix::smallest_singular_value(&matrix::shifted(m, c));
        if s <= eps - half_diag {
            CellClass::In
        } else if s > eps + half_diag {
            CellClass::Out
        } else {
            CellClass::Boundary
        }
    });
    let cell_area = wx * wy;
    let n_in = cells.iter().filter(|c| **c == CellClass::In).count();
    let n_bd = cells.iter().filter(|c| **c == CellClass::Boundary).count();
    Ok(PseudospectrumGrid {
        bbox,
        nx,
        ny,
        cells,
        area_lo: n_in as f64 * cell_area,
        area_hi: (n_in + n_bd) as f64 * cell_area,
    })
}

// ---------------------------------------------------------------------------
// Certified adaptive area
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct AreaOptions {
    pub initial_nx: usize,
    /// Refine boundary cells until area_hi − area_lo is below this.
    pub target_width: f64,
    /// Hard cap on σ_min evaluations.
    pub max_cells: usize,
}

impl AreaOptions {
    /// Budget tied to the deterministic lower envelope πε²: the certified
    /// interval resolves 5% of a single ε-disk.
    pub fn for_eps(eps: f64) -> Self {
        AreaOptions {
            initial_nx: 64,
            target_width: 0.05 * std::f64::consts::PI * eps * eps,
            max_cells: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AreaEstimate {
    pub lo: f64,
    pub hi: f64,
    pub evaluations: usize,
    pub target_met: bool,
}

/// Certified [lo, hi] for area(Λ_ε(M)) by adaptive boundary refinement over
/// the bounding box of W(M) + B(0, ε).
pub fn pseudospectrum_area(m: &CMatrix, eps: f64, opts: &AreaOptions) -> Result<AreaEstimate> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("pseudospectrum area needs a square matrix".into()));
    }
    if eps <= 0.0 {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let omega = numrange::numerical_range(m, 128)?.minkowski_eps(eps)?;
    pseudospectrum_area_in_box(m, eps, omega.bounding_box(), opts)
}

/// Same as [`pseudospectrum_area`] with a caller-provided bounding box that
/// must contain Λ_ε(M).
pub fn pseudospectrum_area_in_box(
    m: &CMatrix,
    eps: f64,
    bbox: (f64, f64, f64, f64),
    opts: &AreaOptions,
) -> Result<AreaEstimate> {
    let (x0, x1, y0, y1) = bbox;
    if !(x1 > x0 && y1 > y0) {
        // a degenerate box contains no area
        return Ok(AreaEstimate { lo: 0.0, hi: 0.0, evaluations: 0, target_met: true });
    }
    let nx = opts.initial_nx.max(2);
    let aspect = (y1 - y0) / (x1 - x0);
    let ny = ((nx as f64 * aspect).round() as usize).clamp(2, 8 * nx);
    let wx = (x1 - x0) / nx as f64;
    let wy = (y1 - y0) / ny as f64;

    // square-ish working cells: (center, half-width); rectangles are split
    // into near-squares up front
    let mut area_lo = 0.0;
    let mut boundary: Vec<(Complex64, f64, f64)> = Vec::new(); // center, hx, hy
    let mut evaluations = 0usize;

    let classify = |c: Complex64, hx: f64, hy: f64| -> (CellClass, f64) {
        let s = matrix::smallest_singular_value(&matrix::shifted(m, c));
        let half_diag = (hx * hx + hy * hy).sqrt();
        let class = if s <= eps - half_diag {
            CellClass::In
        } else if s > eps + half_diag {
            CellClass::Out
        } else {
            CellClass::Boundary
        };
        (class, s)
    };

    let initial = exec::par_map(nx * ny, |idx| {
        let i = idx % nx;
        let j = idx / nx;
        let c = Complex64::new(x0 + (i as f64 + 0.5) * wx, y0 + (j as f64 + 0.5) * wy);
        classify(c, 0.5 * wx, 0.5 * wy).0
    });
    evaluations += nx * ny;
    for (idx, class) in initial.iter().enumerate() {
        let i = idx % nx;
        let j = idx / nx;
        let c = Complex64::new(x0 + (i as f64 + 0.5) * wx, y0 + (j as f64 + 0.5) * wy);
        match class {
            CellClass::In => area_lo += wx * wy,
            CellClass::Boundary => boundary.push((c, 0.5 * wx, 0.5 * wy)),
            CellClass::Out => {}
        }
    }

    let boundary_area =
        |cells: &[(Complex64, f64, f64)]| cells.iter().map(|c| 4.0 * c.1 * c.2).sum::<f64>();

    let mut target_met = boundary_area(&boundary) <= opts.target_width;
    while !target_met && !boundary.is_empty() && evaluations < opts.max_cells {
        let children: Vec<(Complex64, f64, f64)> = boundary
            .iter()
            .flat_map(|&(c, hx, hy)| {
                let (qx, qy) = (0.5 * hx, 0.5 * hy);
                [
                    (Complex64::new(c.re - qx, c.im - qy), qx, qy),
                    (Complex64::new(c.re + qx, c.im - qy), qx, qy),
                    (Complex64::new(c.re - qx, c.im + qy), qx, qy),
                    (Complex64::new(c.re + qx, c.im + qy), qx, qy),
                ]
            })
            .collect();
        let classes = exec::par_map(children.len(), |i| {
            let (c, hx, hy) = children[i];
            classify(c, hx, hy).0
        });
        evaluations += children.len();
        let mut next = Vec::with_capacity(children.len() / 2);
        for (cell, class) in children.into_iter().zip(classes) {
            match class {
                CellClass::In => area_lo += 4.0 * cell.1 * cell.2,
                CellClass::Boundary => next.push(cell),
                CellClass::Out => {}
            }
        }
        boundary = next;
        target_met = boundary_area(&boundary) <= opts.target_width;
    }

    Ok(AreaEstimate {
        lo: area_lo,
        hi: area_lo + boundary_area(&boundary),
        evaluations,
        target_met,
    })
}

// ---------------------------------------------------------------------------
// Global shifted singular-value minima
// ---------------------------------------------------------------------------

/// Certified (to within `certificate_gap`) global minimum of z ↦ σ_k(z−A).
#[derive(Debug, Clone, Copy)]
pub struct ShiftMinimum {
    pub k: usize,
    pub z_k: Complex64,
    pub s_k: f64,
    /// incumbent − best remaining lower bound (0 when converged to `tol`).
    pub certificate_gap: f64,
    pub nodes_expanded: usize,
}

struct BnbNode {
    lb: f64,
    center: Complex64,
    half: f64,
}

impl PartialEq for BnbNode {
    fn eq(&self, other: &Self) -> bool {
        self.lb == other.lb
    }
}
impl Eq for BnbNode {}
impl PartialOrd for BnbNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for BnbNode {
    // min-heap on the lower bound
    fn cmp(&self, other: &Self) -> Ordering {
        other.lb.total_cmp(&self.lb)
    }
}

/// Branch-and-bound minimization of σ_k(z−A) using 1-Lipschitz continuity in
/// z. The search box is certified: outside |z| ≤ ‖A‖ + incumbent the value
/// σ_k ≥ σ_min ≥ |z| − ‖A‖ already exceeds the incumbent. A region hint
/// seeds the incumbent.
pub fn shifted_min(
    a: &CMatrix,
    k: usize,
    hint: Option<&ConvexRegion>,
    tol: f64,
    max_nodes: usize,
) -> Result<ShiftMinimum> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension("shifted_min needs a square matrix".into()));
    }
    let n = a.nrows();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} out of range 1..={n}")));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let f = |z: Complex64| matrix::singular_values(&matrix::shifted(a, z))[k - 1];

    let mut incumbent = f(Complex64::new(0.0, 0.0));
    let mut z_best = Complex64::new(0.0, 0.0);
    if let Some(region) = hint {
        let (x0, x1, y0, y1) = region.bounding_box();
        for i in 0..5 {
            for j in 0..5 {
                let z = Complex64::new(
                    x0 + (x1 - x0) * (i as f64 + 0.5) / 5.0,
                    y0 + (y1 - y0) * (j as f64 + 0.5) / 5.0,
                );
                let v = f(z);
                if v < incumbent {
                    incumbent = v;
                    z_best = z;
                }
            }
        }
    }
    let radius = matrix::operator_norm(a) + incumbent + tol;

    let mut heap = BinaryHeap::new();
    let c0 = Complex64::new(0.0, 0.0);
    let f0 = f(c0);
    if f0 < incumbent {
        incumbent = f0;
        z_best = c0;
    }
    heap.push(BnbNode { lb: f0 - radius * std::f64::consts::SQRT_2, center: c0, half: radius });

    let mut nodes = 0usize;
    let mut gap = f64::INFINITY;
    while let Some(node) = heap.pop() {
        gap = (incumbent - node.lb).max(0.0);
        if node.lb >= incumbent - tol {
            break;
        }
        if nodes >= max_nodes {
            break;
        }
        nodes += 1;
        let q = 0.5 * node.half;
        for (dx, dy) in [(-q, -q), (q, -q), (-q, q), (q, q)] {
            let c = Complex64::new(node.center.re + dx, node.center.im + dy);
            let fc = f(c);
            if fc < incumbent {
                incumbent = fc;
                z_best = c;
            }
            let lb = fc - q * std::f64::consts::SQRT_2;
            if lb < incumbent {
                heap.push(BnbNode { lb, center: c, half: q });
            }
        }
    }
    if heap.is_empty() {
        gap = 0.0;
    }

    Ok(ShiftMinimum {
        k,
        z_k: z_best,
        s_k: incumbent,
        certificate_gap: gap.min(incumbent),
        nodes_expanded: nodes,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Lemma57Report {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// σ_k(z−A) ≥ max(s_k, |z−z_k|/2), evaluated with certificate slack: the
/// approximate minimizer ẑ satisfies σ_k(z−A) ≥ (|z−ẑ| − gap)/2 and
/// σ_k(z−A) ≥ s_k − gap.
pub fn lemma57_check(a: &CMatrix, k: usize, z: Complex64, sm: &ShiftMinimum) -> Result<Lemma57Report> {
    let n = a.nrows();
    if 2 * k > n + 1 {
        return Err(Error::InvalidArgument(format!(
            "the shifted bound needs k <= (n+1)/2, got k = {k}, n = {n}"
        )));
    }
    if sm.k != k {
        return Err(Error::InvalidArgument("shift minimum computed for a different k".into()));
    }
    let lhs = matrix::singular_values(&matrix::shifted(a, z))[k - 1];
    let gap = sm.certificate_gap;
    let rhs = (sm.s_k - gap).max(((z - sm.z_k).norm() - gap) / 2.0).max(0.0);
    let slack = 1e-9 * matrix::operator_norm(a).max(1.0);
    Ok(Lemma57Report { lhs, rhs, holds: lhs >= rhs - slack })
}

// ---------------------------------------------------------------------------
// Expected pseudospectral area
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ExpectedAreaReport {
    pub mean_lo: f64,
    pub mean_hi: f64,
    /// 99% normal CI half-width from per-frame midpoints.
    pub ci_halfwidth: f64,
    pub per_frame: Vec<AreaEstimate>,
    pub samples: usize,
}

/// Monte Carlo E[area Λ_ε(Q*AQ)] from per-frame certified area intervals.
pub fn expected_area_mc(
    a: &CMatrix,
    ell: usize,
    eps: f64,
    frames: usize,
    opts: &AreaOptions,
    stream: &RngStream,
) -> Result<ExpectedAreaReport> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension("expected area needs a square matrix".into()));
    }
    let n = a.nrows();
    if ell == 0 || ell > n {
        return Err(Error::InvalidArgument(format!("ell = {ell} out of range")));
    }
    if frames < 20 {
        return Err(Error::InvalidArgument("need at least 20 frames".into()));
    }
    let estimates: Result<Vec<AreaEstimate>> = exec::par_map(frames, |i| {
        let mut rng = stream.substream(i as u64).rng();
        let q = sample_haar_frame(n, ell, &mut rng).expect("haar frame");
        let b = compress(a, &q)?;
        pseudospectrum_area(&b, eps, opts)
    })
    .into_iter()
    .collect();
    let estimates = estimates?;
    let mids: Vec<f64> = estimates.iter().map(|e| 0.5 * (e.lo + e.hi)).collect();
    let (_, std) = stats::mean_and_std(&mids);
    let mean_lo = estimates.iter().map(|e| e.lo).sum::<f64>() / frames as f64;
    let mean_hi = estimates.iter().map(|e| e.hi).sum::<f64>() / frames as f64;
    Ok(ExpectedAreaReport {
        mean_lo,
        mean_hi,
        ci_halfwidth: stats::normal_ci99_halfwidth(std, frames),
        per_frame: estimates,
        samples: frames,
    })
}

#[derive(Debug, Clone)]
pub struct ProbAreaReport {
    /// bbox_area · hit fraction.
    pub value: f64,
    /// 99% Clopper–Pearson band scaled by the bbox area.
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub hits: u64,
    pub samples: usize,
    pub bbox_area: f64,
}

/// The probability-route estimator of the expected area:
/// E area Λ_ε(Q*AQ) = ∫_Ω Pr(σ_min(Q*(z−A)Q) ≤ ε) dz estimated by a double
/// Monte Carlo over (z, Q) with z uniform on the bounding box of
/// Ω = W(A) + B(0, ε) (the pseudospectrum never leaves Ω).
pub fn expected_area_prob(
    a: &CMatrix,
    ell: usize,
    eps: f64,
    samples: usize,
    stream: &RngStream,
) -> Result<ProbAreaReport> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension("expected area needs a square matrix".into()));
    }
    let n = a.nrows();
    if ell == 0 || ell > n {
        return Err(Error::InvalidArgument(format!("ell = {ell} out of range")));
    }
    if samples < 100 {
        return Err(Error::InvalidArgument("need at least 100 samples".into()));
    }
    let omega = numrange::numerical_range(a, 256)?.minkowski_eps(eps)?;
    let (x0, x1, y0, y1) = omega.bounding_box();
    let bbox_area = (x1 - x0) * (y1 - y0);

    let hits: u64 = exec::par_map(samples, |i| {
        use rand::Rng;
        let mut rng = stream.substream(i as u64).rng();
        let z = Complex64::new(
            x0 + (x1 - x0) * rng.random::<f64>(),
            y0 + (y1 - y0) * rng.random::<f64>(),
        );
        // outside Ω the shifted compression cannot be ε-singular
        if !omega.contains(z, 0.0) {
            return 0u64;
        }
        let q = sample_haar_frame(n, ell, &mut rng).expect("haar frame");
        let c = compress(&matrix::shifted(a, z), &q).expect("compression dims");
        u64::from(matrix::smallest_singular_value(&c) <= eps)
    })
    .into_iter()
    .sum();

    Ok(ProbAreaReport {
        value: bbox_area * hits as f64 / samples as f64,
        ci_lo: bbox_area * stats::clopper_pearson_lower(hits, samples as u64, 0.99),
        ci_hi: bbox_area * stats::clopper_pearson_upper(hits, samples as u64, 0.99),
        hits,
        samples,
        bbox_area,
    })
}

// ---------------------------------------------------------------------------
// Expected-area bound evaluators
// ---------------------------------------------------------------------------

/// [lo, hi] interval for one geometric quantity.
#[derive(Debug, Clone, Copy)]
pub struct GeomInterval {
    pub lo: f64,
    pub hi: f64,
}

impl GeomInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        GeomInterval { lo: lo.min(hi), hi: hi.max(lo) }
    }

    pub fn point(v: f64) -> Self {
        GeomInterval { lo: v, hi: v }
    }
}

/// Geometry inputs for the expected-area bounds: R and r are the diameter and
/// inner radius of Ω = W(A) + B(0, ε); s_ℓ and s_{ℓ+8} the global shifted
/// singular-value minima.
#[derive(Debug, Clone, Copy)]
pub struct Geometry {
    pub big_r: GeomInterval,
    pub small_r: GeomInterval,
    pub s_ell: GeomInterval,
    pub s_ell8: GeomInterval,
}

/// The five expected-area bounds plus the first-order (rε) bound, evaluated
/// conservatively over the geometry intervals (each formula is monotone in
/// each argument, so the max over interval endpoints upper-bounds the ideal
/// value). Degenerate geometry yields +∞ where the formula diverges and the
/// literal limit where it vanishes.
#[derive(Debug, Clone)]
pub struct TheoremBounds {
    pub items: [f64; 5],
    pub lemma54: f64,
    pub eps: f64,
    pub n: usize,
    pub ell: usize,
    pub consts: BoundConstants,
    pub geometry: Geometry,
}

impl TheoremBounds {
    /// Minimum over the bounds that are finite and positive (nonpositive or
    /// non-finite evaluations are vacuous/degenerate and claim nothing).
    pub fn applicable_minimum(&self) -> Option<f64> {
        self.items
            .iter()
            .chain(std::iter::once(&self.lemma54))
            .copied()
            .filter(|b| b.is_finite() && *b > 0.0)
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }
}

pub fn theorem_bounds(
    n: usize,
    ell: usize,
    eps: f64,
    consts: &BoundConstants,
    geometry: &Geometry,
) -> Result<TheoremBounds> {
    if eps <= 0.0 {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if 2.0 * ell as f64 > n as f64 - 15.0 {
        return Err(Error::InvalidArgument(format!(
            "the five-bound family needs ell <= n/2 - 7.5, got ell = {ell}, n = {n}"
        )));
    }
    let e = std::f64::consts::E;
    let pi = std::f64::consts::PI;
    let (c1, c2, c3) = (consts.c1, consts.c2, consts.c3);

    let item1 = |r: f64, s: f64| -> f64 {
        if s <= 0.0 {
            return f64::INFINITY;
        }
        let log = (c3 * 2.0 * e * r * r / (eps * s)).ln();
        4.0 * pi * c2 * log * log * r * r * eps * eps / (s * s)
    };
    let item2 = |big: f64, small: f64, s: f64| -> f64 {
        if s <= 0.0 || small <= 0.0 {
            return f64::INFINITY;
        }
        let log = (c3 * 2.0 * e * big * big / (eps * s)).ln();
        4.0 * pi * c2 * log * log * big * big * eps * eps / (s * small)
    };
    let log34 = |big: f64, small: f64| -> f64 {
        (c3 * 2.0 * e * big.powf(4.0 / 3.0) * small.powf(1.0 / 3.0)
            / (c2.powf(1.0 / 3.0) * eps.powf(5.0 / 3.0)))
        .ln()
    };
    let item3 = |big: f64, small: f64| -> f64 {
        if small <= 0.0 {
            // (Rr)^{2/3} log²(c·r^{1/3}) → 0 as r → 0
            return 0.0;
        }
        let log = log34(big, small);
        4.0 * pi * c2.powf(1.0 / 3.0) * log * log * (big * small).powf(2.0 / 3.0)
            * eps.powf(2.0 / 3.0)
    };
    let item4 = |big: f64, small: f64| -> f64 {
        if small <= 0.0 {
            return f64::INFINITY;
        }
        let log = log34(big, small);
        4.0 * pi * c2.powf(2.0 / 3.0) * log * log * big.powf(4.0 / 3.0) * eps.powf(4.0 / 3.0)
            / small.powf(2.0 / 3.0)
    };
    let item5 = |big: f64| -> f64 {
        25.0 * (c2 * c1).powf(0.4) * (n as f64 * big / eps).ln() * big.powf(0.8) * eps.powf(1.2)
    };
    let lemma54 = |big: f64, small: f64, s: f64| -> f64 {
        if small <= 0.0 {
            return 0.0;
        }
        2.0 * pi * c1 * (e * big / (c1 * eps).max(small).max(s)).ln() * small * eps
    };

    let g = geometry;
    let rr = [g.big_r.lo, g.big_r.hi];
    let ss = [g.small_r.lo, g.small_r.hi];
    let tt8 = [g.s_ell8.lo, g.s_ell8.hi];
    let ttl = [g.s_ell.lo, g.s_ell.hi];
    let nan_max = |a: f64, b: f64| if b.is_nan() { a } else { a.max(b) };

    let mut items = [f64::NEG_INFINITY; 5];
    let mut lemma54_val = f64::NEG_INFINITY;
    for &r in &rr {
        items[4] = nan_max(items[4], item5(r));
        for &s in &tt8 {
            items[0] = nan_max(items[0], item1(r, s));
        }
        for &sm in &ss {
            items[2] = nan_max(items[2], item3(r, sm));
            items[3] = nan_max(items[3], item4(r, sm));
            for &s in &tt8 {
                items[1] = nan_max(items[1], item2(r, sm, s));
            }
            for &s in &ttl {
                lemma54_val = nan_max(lemma54_val, lemma54(r, sm, s));
            }
        }
    }

    Ok(TheoremBounds {
        items,
        lemma54: lemma54_val,
        eps,
        n,
        ell,
        consts: *consts,
        geometry: *geometry,
    })
}

// ---------------------------------------------------------------------------
// Regime exponents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Default)]
pub struct RegimeFlags {
    /// W(A) contained in a poly(n)-radius disk (R finite).
    pub a: bool,
    /// W(A) contains a disk (r > 0).
    pub b: bool,
    /// s_{ℓ+8} > 0.
    pub c: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeExponent {
    pub beta: f64,
    /// Which bound (1..=5) realizes the exponent.
    pub item: usize,
}

/// ε-exponent of the expected-area envelope under the assumptions: 6/5 under
/// (a) via bound 5, 4/3 under (a, b) via bound 4, and 2 under (a, c) via
/// bound 1. Requires ℓ ≤ n/2 − 8.
pub fn regime_exponent(
    flags: RegimeFlags,
    geometry: &Geometry,
    n: usize,
    ell: usize,
) -> Result<Option<RegimeExponent>> {
    if (ell as f64) > n as f64 / 2.0 - 8.0 {
        return Err(Error::InvalidArgument(format!(
            "regime exponents need ell <= n/2 - 8, got ell = {ell}, n = {n}"
        )));
    }
    if flags.a && !geometry.big_r.hi.is_finite() {
        return Err(Error::InvalidArgument("flag (a) needs a finite diameter".into()));
    }
    if flags.b && !(geometry.small_r.lo > 0.0) {
        return Err(Error::InvalidArgument("flag (b) needs a positive inner radius".into()));
    }
    if flags.c && !(geometry.s_ell8.lo > 0.0) {
        return Err(Error::InvalidArgument("flag (c) needs s_{l+8} > 0".into()));
    }
    if !flags.a {
        return Ok(None);
    }
    Ok(Some(if flags.c {
        RegimeExponent { beta: 2.0, item: 1 }
    } else if flags.b {
        RegimeExponent { beta: 4.0 / 3.0, item: 4 }
    } else {
        RegimeExponent { beta: 6.0 / 5.0, item: 5 }
    }))
}
