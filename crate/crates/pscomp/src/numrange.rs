//! Numerical range geometry from support-function samples.
//!
//! A region is sampled at K uniform angles: h(θ) = λ_max(H(e^{−iθ}M)) gives
//! the support function, and the top eigenvector's quadratic form v*Mv gives a
//! boundary touch point. The intersection of the sampled half-planes is an
//! outer polygon, the convex hull of the touch points an inner polygon, and
//! every downstream area/inradius/diameter estimate is carried as a certified
//! [lo, hi] pair so bound checks can pick the conservative side.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::compressions::hermitian_part;
use crate::exec;
use crate::matrix::CMatrix;
use crate::{Error, Result};

pub type Pt = (f64, f64);

// ---------------------------------------------------------------------------
// Polygon primitives
// ---------------------------------------------------------------------------

/// Unsigned polygon area by the shoelace formula.
pub fn polygon_area(poly: &[Pt]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..poly.len() {
        let (x0, y0) = poly[i];
        let (x1, y1) = poly[(i + 1) % poly.len()];
        acc += x0 * y1 - x1 * y0;
    }
    acc.abs() * 0.5
}

/// Clip a polygon against the half-plane n·p ≤ h (Sutherland–Hodgman step).
fn clip_halfplane(poly: &[Pt], n: Pt, h: f64) -> Vec<Pt> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 2);
    for i in 0..m {
        let a = poly[i];
        let b = poly[(i + 1) % m];
        let da = n.0 * a.0 + n.1 * a.1 - h;
        let db = n.0 * b.0 + n.1 * b.1 - h;
        if da <= 0.0 {
            out.push(a);
        }
        if (da <= 0.0) != (db <= 0.0) {
            let t = da / (da - db);
            out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        }
    }
    out
}

/// Intersection of half-planes n_j·p ≤ h_j, clipped inside a bounding square
/// of half-side `radius`. Result may be empty.
fn halfplane_intersection(normals: &[Pt], offsets: &[f64], radius: f64) -> Vec<Pt> {
    let r = radius;
    let mut poly: Vec<Pt> = vec![(-r, -r), (r, -r), (r, r), (-r, r)];
    for (n, &h) in normals.iter().zip(offsets) {
        poly = clip_halfplane(&poly, *n, h);
        if poly.is_empty() {
            return poly;
        }
    }
    poly
}

/// Convex hull (monotone chain), counterclockwise, duplicates removed.
pub fn convex_hull(points: &[Pt]) -> Vec<Pt> {
    let mut pts: Vec<Pt> = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross =
        |o: Pt, a: Pt, b: Pt| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<Pt> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Pt> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Membership in a convex ccw polygon with slack.
pub fn point_in_convex(poly: &[Pt], p: Pt, slack: f64) -> bool {
    if poly.len() < 3 {
        return false;
    }
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
        if cross < -slack {
            return false;
        }
    }
    true
}

/// Chebyshev center of the convex region {x : n_j·x ≤ h_j} with unit normals:
/// bisection on the inradius with a half-plane-intersection feasibility test.
/// Returns (rho, center); (0, centroid-ish) when the region is empty or
/// degenerate.
fn chebyshev_center(normals: &[Pt], offsets: &[f64]) -> (f64, Pt) {
    if normals.is_empty() {
        return (0.0, (0.0, 0.0));
    }
    let radius = offsets.iter().fold(1.0f64, |acc, h| acc.max(h.abs())) * 2.0 + 1.0;
    let centroid = |poly: &[Pt]| -> Pt {
        let k = poly.len() as f64;
        let (sx, sy) = poly.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
        (sx / k, sy / k)
    };
    let feasible = |rho: f64| -> Option<Pt> {
        let shrunk: Vec<f64> = offsets.iter().map(|h| h - rho).collect();
        let poly = halfplane_intersection(normals, &shrunk, radius);
        if poly.is_empty() {
            None
        } else {
            Some(centroid(&poly))
        }
    };
    let Some(mut center) = feasible(0.0) else {
        return (0.0, (0.0, 0.0));
    };
    let mut lo = 0.0;
    let mut hi = radius;
    if let Some(c) = feasible(hi) {
        return (hi, c);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match feasible(mid) {
            Some(c) => {
                lo = mid;
                center = c;
            }
            None => hi = mid,
        }
    }
    (lo, center)
}

// ---------------------------------------------------------------------------
// Convex region
// ---------------------------------------------------------------------------

/// Lower/upper estimates of the inner radius with the certifying centers.
#[derive(Debug, Clone, Copy)]
pub struct RadiusEstimate {
    /// Inradius of the inner polygon: a certified lower bound.
    pub lo: f64,
    /// Inradius of the sampled support constraints: an upper-side estimate.
    pub hi: f64,
    /// Center of the certified inscribed disk (pair of `lo`).
    pub center_lo: Pt,
    pub center_hi: Pt,
}

/// Polygonal outer/inner approximation of a planar convex set sampled through
/// its support function.
#[derive(Debug, Clone)]
pub struct ConvexRegion {
    angles: Vec<f64>,
    support: Vec<f64>,
    touch: Vec<Pt>,
    outer: Vec<Pt>,
    inner: Vec<Pt>,
    /// Touch points still correspond 1:1 to the sampled angles.
    aligned: bool,
}

impl ConvexRegion {
    /// Build from support samples h(θ_j) at uniform angles plus boundary
    /// touch points.
    pub fn from_support(angles: Vec<f64>, support: Vec<f64>, touch: Vec<Pt>) -> Result<Self> {
        if angles.len() != support.len() {
            return Err(Error::Dimension("angles/support length mismatch".into()));
        }
        let aligned = touch.len() == angles.len();
        let region = ConvexRegion {
            outer: Self::build_outer(&angles, &support),
            inner: convex_hull(&touch),
            angles,
            support,
            touch,
            aligned,
        };
        Ok(region)
    }

    fn build_outer(angles: &[f64], support: &[f64]) -> Vec<Pt> {
        let normals: Vec<Pt> = angles.iter().map(|t| (t.cos(), t.sin())).collect();
        let radius = support.iter().fold(1.0f64, |acc, h| acc.max(h.abs())) * 2.0 + 1.0;
        halfplane_intersection(&normals, support, radius)
    }

    pub fn angle_count(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn support_values(&self) -> &[f64] {
        &self.support
    }

    pub fn outer_polygon(&self) -> &[Pt] {
        &self.outer
    }

    pub fn inner_polygon(&self) -> &[Pt] {
        &self.inner
    }

    pub fn touch_points(&self) -> &[Pt] {
        &self.touch
    }

    /// Certified [inner, outer] area estimates.
    pub fn area_interval(&self) -> (f64, f64) {
        let hi = polygon_area(&self.outer);
        let lo = polygon_area(&self.inner).min(hi);
        (lo, hi)
    }

    /// Gap between the outer and inner polygon areas.
    pub fn resolution_error(&self) -> f64 {
        let (lo, hi) = self.area_interval();
        hi - lo
    }

    /// Membership against the sampled support constraints.
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        self.angles
            .iter()
            .zip(&self.support)
            .all(|(t, h)| z.re * t.cos() + z.im * t.sin() <= h + slack)
    }

    /// Chebyshev center and inradius: the LP max ρ s.t. Re(e^{−iθ_j}c) + ρ ≤
    /// h(θ_j) gives the upper side; the same LP over the inner polygon's
    /// edges gives a certified lower side.
    pub fn inner_radius(&self) -> RadiusEstimate {
        let normals: Vec<Pt> = self.angles.iter().map(|t| (t.cos(), t.sin())).collect();
        let (hi, center_hi) = chebyshev_center(&normals, &self.support);
        let (lo, center_lo) = if self.inner.len() < 3 {
            let c = if self.inner.is_empty() {
                (0.0, 0.0)
            } else {
                let k = self.inner.len() as f64;
                let (sx, sy) =
                    self.inner.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
                (sx / k, sy / k)
            };
            (0.0, c)
        } else {
            let mut en: Vec<Pt> = Vec::with_capacity(self.inner.len());
            let mut eh: Vec<f64> = Vec::with_capacity(self.inner.len());
            for i in 0..self.inner.len() {
                let a = self.inner[i];
                let b = self.inner[(i + 1) % self.inner.len()];
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let len = (dx * dx + dy * dy).sqrt();
                if len < 1e-300 {
                    continue;
                }
                // outward normal of a ccw polygon edge
                let n = (dy / len, -dx / len);
                en.push(n);
                eh.push(n.0 * a.0 + n.1 * a.1);
            }
            chebyshev_center(&en, &eh)
        };
        RadiusEstimate { lo: lo.min(hi), hi, center_lo, center_hi }
    }

    /// Certified [lo, hi] estimates of the diameter.
    pub fn diameter_interval(&self) -> (f64, f64) {
        let k = self.angles.len();
        let mut lo: f64 = 0.0;
        if k % 2 == 0 {
            for j in 0..k / 2 {
                lo = lo.max(self.support[j] + self.support[j + k / 2]);
            }
        }
        for (i, a) in self.touch.iter().enumerate() {
            for b in self.touch.iter().skip(i + 1) {
                lo = lo.max(((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt());
            }
        }
        let mut hi: f64 = 0.0;
        for (i, a) in self.outer.iter().enumerate() {
            for b in self.outer.iter().skip(i + 1) {
                hi = hi.max(((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt());
            }
        }
        (lo.min(hi), hi.max(lo))
    }

    /// Convex hull with the origin: support becomes max(h, 0); idempotent
    /// when 0 is already inside.
    pub fn bowtie_zero(&self) -> ConvexRegion {
        let support: Vec<f64> = self.support.iter().map(|h| h.max(0.0)).collect();
        let mut touch = self.touch.clone();
        touch.push((0.0, 0.0));
        ConvexRegion {
            outer: Self::build_outer(&self.angles, &support),
            inner: convex_hull(&touch),
            angles: self.angles.clone(),
            support,
            touch,
            aligned: false,
        }
    }

    /// Minkowski sum with the closed disk of radius `eps`: exact on support
    /// functions (h ↦ h + eps).
    pub fn minkowski_eps(&self, eps: f64) -> Result<ConvexRegion> {
        if eps < 0.0 {
            return Err(Error::InvalidArgument("minkowski radius must be >= 0".into()));
        }
        let support: Vec<f64> = self.support.iter().map(|h| h + eps).collect();
        let touch: Vec<Pt> = if self.aligned {
            self.touch
                .iter()
                .zip(&self.angles)
                .map(|(p, t)| (p.0 + eps * t.cos(), p.1 + eps * t.sin()))
                .collect()
        } else {
            // push every witness point in a fan of directions; all stay inside
            let dirs = 16;
            self.touch
                .iter()
                .flat_map(|p| {
                    (0..dirs).map(move |i| {
                        let t = 2.0 * std::f64::consts::PI * i as f64 / dirs as f64;
                        (p.0 + eps * t.cos(), p.1 + eps * t.sin())
                    })
                })
                .collect()
        };
        let aligned = self.aligned;
        Ok(ConvexRegion {
            outer: Self::build_outer(&self.angles, &support),
            inner: convex_hull(&touch),
            angles: self.angles.clone(),
            support,
            touch,
            aligned,
        })
    }

    /// Axis-aligned bounding box (x0, x1, y0, y1) of the outer polygon.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut x0 = f64::INFINITY;
        let mut x1 = f64::NEG_INFINITY;
        let mut y0 = f64::INFINITY;
        let mut y1 = f64::NEG_INFINITY;
        for &(x, y) in &self.outer {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if self.outer.is_empty() {
            (0.0, 0.0, 0.0, 0.0)
        } else {
            (x0, x1, y0, y1)
        }
    }
}

// ---------------------------------------------------------------------------
// Support function sampling
// ---------------------------------------------------------------------------

/// Support value and attaining boundary data in one direction.
#[derive(Debug, Clone)]
pub struct SupportPoint {
    /// λ_max(H(e^{−iθ}M)).
    pub h: f64,
    /// v*Mv for the maximizing unit eigenvector: a boundary point of W(M).
    pub touch: Complex64,
    /// The maximizing eigenvector itself.
    pub vector: DVector<Complex64>,
}

/// Evaluate the support function of W(M) in direction θ.
pub fn support_function(m: &CMatrix, theta: f64) -> Result<SupportPoint> {
    let h = hermitian_part(m, theta)?;
    let eigen = h.symmetric_eigen();
    let mut best = 0;
    for i in 1..eigen.eigenvalues.len() {
        if eigen.eigenvalues[i] > eigen.eigenvalues[best] {
            best = i;
        }
    }
    let v = eigen.eigenvectors.column(best).into_owned();
    let touch = (v.adjoint() * m * &v)[(0, 0)];
    Ok(SupportPoint { h: eigen.eigenvalues[best], touch, vector: v })
}

/// Sample W(M) at `k` uniform angles (k ≥ 8, even).
pub fn numerical_range(m: &CMatrix, k: usize) -> Result<ConvexRegion> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("numerical range needs a square matrix".into()));
    }
    if k < 8 || k % 2 != 0 {
        return Err(Error::InvalidArgument(format!("angle count must be even and >= 8, got {k}")));
    }
    let points = support_sweep(m, k)?;
    let angles: Vec<f64> =
        (0..k).map(|j| 2.0 * std::f64::consts::PI * j as f64 / k as f64).collect();
    let support: Vec<f64> = points.iter().map(|p| p.h).collect();
    let touch: Vec<Pt> = points.iter().map(|p| (p.touch.re, p.touch.im)).collect();
    ConvexRegion::from_support(angles, support, touch)
}

/// Support sweep keeping the attaining eigenvectors (used by witness
/// constructions that must realize interior points).
pub fn support_sweep(m: &CMatrix, k: usize) -> Result<Vec<SupportPoint>> {
    let results = exec::par_map(k, |j| {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
        support_function(m, theta)
    });
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{complex, diagonal, ginibre_with};
    use crate::rng::RngStream;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn nilpotent2() -> CMatrix {
        let mut n = CMatrix::zeros(2, 2);
        n[(0, 1)] = complex(2.0, 0.0);
        n
    }

    #[test]
    fn support_of_disk_and_segment() {
        let n = nilpotent2();
        for theta in [0.0, 0.9, 2.4, 5.0] {
            let sp = support_function(&n, theta).unwrap();
            assert_relative_eq!(sp.h, 1.0, epsilon = 1e-12);
            assert_relative_eq!(sp.touch.norm(), 1.0, epsilon = 1e-10);
        }
        let m = diagonal(&[complex(0.0, 0.0), complex(1.0, 0.0)]);
        assert_relative_eq!(support_function(&m, 0.0).unwrap().h, 1.0, epsilon = 1e-12);
        assert_relative_eq!(
            support_function(&m, std::f64::consts::PI).unwrap().h,
            0.0,
            epsilon = 1e-12
        );
        // singleton range: h(θ) = Re(e^{−iθ} c)
        let c = complex(0.7, -0.3);
        let m = diagonal(&[c, c]);
        for theta in [0.0, 1.0, 4.4] {
            let expected = (Complex64::from_polar(1.0, -theta) * c).re;
            assert_relative_eq!(support_function(&m, theta).unwrap().h, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn disk_area_and_inradius() {
        let region = numerical_range(&nilpotent2(), 256).unwrap();
        let (lo, hi) = region.area_interval();
        assert!(lo <= std::f64::consts::PI && std::f64::consts::PI <= hi + 1e-12);
        assert!((hi - std::f64::consts::PI).abs() < 2e-3);
        assert!((lo - std::f64::consts::PI).abs() < 2e-3);
        let r = region.inner_radius();
        assert!(r.lo >= (std::f64::consts::PI / 256.0).cos() - 1e-9);
        assert!(r.hi <= 1.0 + 1e-9);
        let (dlo, dhi) = region.diameter_interval();
        assert!(dlo <= 2.0 + 1e-9 && dhi >= 2.0 - 1e-3);
        assert!(dhi <= 2.0 + 1e-3);
    }

    #[test]
    fn hermitian_range_degenerates_to_segment() {
        let m = diagonal(&[complex(0.0, 0.0), complex(0.4, 0.0), complex(1.0, 0.0)]);
        let region = numerical_range(&m, 256).unwrap();
        let (lo, hi) = region.area_interval();
        assert!(hi <= 1e-8, "outer area {hi}");
        assert!(lo <= hi + 1e-15);
        let r = region.inner_radius();
        assert!(r.hi <= 1e-8);
    }

    #[test]
    fn normal_matrix_gives_spectral_hull() {
        let m = diagonal(&[complex(0.0, 0.0), complex(1.0, 0.0), complex(0.0, 1.0)]);
        let region = numerical_range(&m, 256).unwrap();
        let (lo, hi) = region.area_interval();
        assert!((lo - 0.5).abs() < 2e-3 && (hi - 0.5).abs() < 2e-3);
        // classical inradius of the right triangle with legs 1, 1
        let r = region.inner_radius();
        let expected = (2.0 - 2f64.sqrt()) / 2.0;
        assert!((r.lo - expected).abs() < 2e-3);
        assert!((r.hi - expected).abs() < 2e-3);
    }

    #[test]
    fn eigenvalues_lie_in_outer_polygon() {
        let stream = RngStream::new(13, 0);
        let mut rng = stream.rng();
        let a = ginibre_with(7, 7, &mut rng);
        let region = numerical_range(&a, 128).unwrap();
        let slack = 1e-8 * crate::matrix::operator_norm(&a);
        for ev in crate::matrix::eigenvalues(&a).unwrap() {
            assert!(region.contains(ev, slack));
        }
    }

    #[test]
    fn bowtie_examples() {
        // disk centered at 0: unchanged
        let region = numerical_range(&nilpotent2(), 64).unwrap();
        let hull = region.bowtie_zero();
        let (a0, a1) = region.area_interval();
        let (b0, b1) = hull.area_interval();
        assert_relative_eq!(a1, b1, epsilon = 1e-12);
        assert!((a0 - b0).abs() < 1e-12);

        // segment [1,2]: hull with 0 is the segment [0,2], area 0
        let m = diagonal(&[complex(1.0, 0.0), complex(2.0, 0.0)]);
        let hull = numerical_range(&m, 256).unwrap().bowtie_zero();
        assert!(hull.area_interval().1 < 1e-8);
        let (dlo, dhi) = hull.diameter_interval();
        assert!(dlo >= 2.0 - 1e-6 && dhi <= 2.0 + 1e-6);

        // square [1,2]×[1,2]: pentagon hull with 0 has area 2 (shoelace), and
        // Monte Carlo rejection sampling agrees
        let square = diagonal(&[
            complex(1.0, 1.0),
            complex(2.0, 1.0),
            complex(2.0, 2.0),
            complex(1.0, 2.0),
        ]);
        let hull = numerical_range(&square, 512).unwrap().bowtie_zero();
        let (lo, hi) = hull.area_interval();
        assert!((lo - 2.0).abs() < 2e-2 && (hi - 2.0).abs() < 2e-2);

        let mut rng = RngStream::new(14, 0).rng();
        let samples = 200_000;
        let mut hits = 0u64;
        let poly = hull.inner_polygon();
        for _ in 0..samples {
            let x: f64 = rng.random::<f64>() * 2.0;
            let y: f64 = rng.random::<f64>() * 2.0;
            if point_in_convex(poly, (x, y), 1e-12) {
                hits += 1;
            }
        }
        let mc_area = 4.0 * hits as f64 / samples as f64;
        assert!((mc_area - 2.0).abs() < 0.02, "MC area {mc_area}");
    }

    #[test]
    fn minkowski_examples() {
        // disk radius 1 + 0.5 → disk radius 1.5
        let region = numerical_range(&nilpotent2(), 64).unwrap();
        let grown = region.minkowski_eps(0.5).unwrap();
        for h in grown.support_values() {
            assert_relative_eq!(*h, 1.5, epsilon = 1e-12);
        }
        // eps = 0 is the identity
        let same = region.minkowski_eps(0.0).unwrap();
        assert_eq!(region.support_values(), same.support_values());
        assert!(region.minkowski_eps(-0.1).is_err());

        // stadium: segment [0,1] ⊕ 0.1·disk has area 0.2 + π/100
        let seg = diagonal(&[complex(0.0, 0.0), complex(1.0, 0.0)]);
        let stadium = numerical_range(&seg, 512).unwrap().minkowski_eps(0.1).unwrap();
        let expected = 0.2 + std::f64::consts::PI * 0.01;
        let (lo, hi) = stadium.area_interval();
        assert!(lo <= expected + 1e-9 && expected <= hi + 1e-9);
        assert!((lo - expected).abs() < 1e-3 && (hi - expected).abs() < 1e-3);
    }

    #[test]
    fn inradius_area_diameter_consistency() {
        // r₋·r₊ ≥ area/(2π) up to resolution error, and basic sanity bounds
        let stream = RngStream::new(15, 0);
        let mut rng = stream.rng();
        for _ in 0..5 {
            let a = ginibre_with(6, 6, &mut rng);
            let region = numerical_range(&a, 128).unwrap();
            let (area_lo, area_hi) = region.area_interval();
            let r = region.inner_radius();
            let (_, dia_hi) = region.diameter_interval();
            assert!(r.lo <= dia_hi / 2.0 + 1e-9);
            assert!(area_hi <= std::f64::consts::PI * (dia_hi / 2.0).powi(2) + 1e-9);
            let slack = region.resolution_error();
            assert!(
                r.hi * (dia_hi / 2.0) >= area_lo / (2.0 * std::f64::consts::PI) - slack - 1e-9
            );
        }
    }

    #[test]
    fn bowtie_grows_area_iff_origin_outside() {
        let shiftedm = diagonal(&[complex(2.0, 1.0), complex(3.0, 1.0), complex(2.5, 2.0)]);
        let region = numerical_range(&shiftedm, 128).unwrap();
        let hull = region.bowtie_zero();
        assert!(hull.area_interval().0 > region.area_interval().1);

        let centered = diagonal(&[complex(-1.0, -1.0), complex(1.0, -0.8), complex(0.0, 1.2)]);
        let region = numerical_range(&centered, 128).unwrap();
        assert!(region.contains(complex(0.0, 0.0), 0.0));
        let hull = region.bowtie_zero();
        assert!((hull.area_interval().1 - region.area_interval().1).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_angle_counts() {
        let m = nilpotent2();
        assert!(numerical_range(&m, 6).is_err());
        assert!(numerical_range(&m, 9).is_err());
    }
}
