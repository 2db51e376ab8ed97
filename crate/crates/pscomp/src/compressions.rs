//! Compressions, generalized Schur complements, and rotated Hermitian parts.

use num_complex::Complex64;

use crate::matrix::{self, CMatrix};
use crate::rand_frames::Frame;
use crate::{Error, Result};

pub use crate::matrix::{singular_value, singular_values, smallest_singular_value};

/// Relative σ_min threshold below which a pivot `Q*AQ` counts as singular.
pub const PIVOT_TOL: f64 = 1e-13;

/// Q*AQ.
pub fn compress(a: &CMatrix, q: &Frame) -> Result<CMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension("compress needs a square matrix".into()));
    }
    if a.nrows() != q.dim() {
        return Err(Error::Dimension(format!(
            "cannot compress {}x{} matrix with a frame in C^{}",
            a.nrows(),
            a.ncols(),
            q.dim()
        )));
    }
    Ok(q.matrix().adjoint() * a * q.matrix())
}

/// Generalized Schur complement (A/Q) = A − AQ (Q*AQ)⁻¹ Q*A.
///
/// The inverse is applied through a linear solve against the pivot rather
/// than formed explicitly. A width-0 frame gives (A/Q) = A. The result
/// annihilates col(Q) on both sides: (A/Q)Q = 0 and Q*(A/Q) = 0.
pub fn schur_complement(a: &CMatrix, q: &Frame) -> Result<CMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension("schur complement needs a square matrix".into()));
    }
    if a.nrows() != q.dim() {
        return Err(Error::Dimension(format!(
            "schur complement dims: matrix {}x{}, frame in C^{}",
            a.nrows(),
            a.ncols(),
            q.dim()
        )));
    }
    if q.width() == 0 {
        return Ok(a.clone());
    }
    let pivot = compress(a, q)?;
    let norm_a = matrix::operator_norm(a);
    let smin = matrix::smallest_singular_value(&pivot);
    if smin <= PIVOT_TOL * norm_a {
        return Err(Error::SingularPivot(format!(
            "sigma_min(Q*AQ) = {smin:.3e} <= {PIVOT_TOL:.0e} * ||A|| = {:.3e}",
            PIVOT_TOL * norm_a
        )));
    }
    let qa = q.matrix().adjoint() * a; // k×n
    let solved = pivot.lu().solve(&qa).ok_or_else(|| {
        Error::SingularPivot("LU solve against Q*AQ failed despite sigma_min check".into())
    })?;
    Ok(a - (a * q.matrix()) * solved)
}

/// Rotated Hermitian part H(e^{−iθ}M) = (e^{−iθ}M + e^{iθ}M*)/2.
pub fn hermitian_part(m: &CMatrix, theta: f64) -> Result<CMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("hermitian part needs a square matrix".into()));
    }
    let phase = Complex64::from_polar(1.0, -theta);
    let half = Complex64::new(0.5, 0.0);
    let rotated = m * phase;
    Ok((&rotated + rotated.adjoint()) * half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{complex, diagonal, ginibre_with};
    use crate::numrange;
    use crate::rand_frames::sample_haar_frame;
    use crate::rng::RngStream;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn coordinate_frame(n: usize, k: usize) -> Frame {
        let mut m = CMatrix::zeros(n, k);
        for j in 0..k {
            m[(j, j)] = complex(1.0, 0.0);
        }
        Frame::from_matrix(m).unwrap()
    }

    #[test]
    fn compress_diagonal_and_identity() {
        let a = diagonal(&[complex(1.0, 0.0), complex(2.0, 0.0), complex(3.0, 0.0)]);
        let q = coordinate_frame(3, 2);
        let c = compress(&a, &q).unwrap();
        assert_relative_eq!(c[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_relative_eq!(c[(1, 1)].re, 2.0, epsilon = 1e-14);
        assert_relative_eq!(c[(0, 1)].norm(), 0.0, epsilon = 1e-14);

        let id = CMatrix::identity(4, 4);
        let stream = RngStream::new(1, 0);
        let q = sample_haar_frame(4, 2, &mut stream.rng()).unwrap();
        let c = compress(&id, &q).unwrap();
        assert!((c - CMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn compression_eigenvalues_stay_in_numerical_range() {
        let stream = RngStream::new(2, 0);
        let mut rng = stream.rng();
        let a = ginibre_with(8, 8, &mut rng);
        let region = numrange::numerical_range(&a, 128).unwrap();
        let slack = 1e-8 * matrix::operator_norm(&a);
        for _ in 0..20 {
            let q = sample_haar_frame(8, 3, &mut rng).unwrap();
            let c = compress(&a, &q).unwrap();
            for ev in matrix::eigenvalues(&c).unwrap() {
                assert!(region.contains(ev, slack), "eigenvalue {ev} escaped W(A)");
            }
        }
    }

    #[test]
    fn schur_of_identity_is_projection() {
        let stream = RngStream::new(3, 0);
        let q = sample_haar_frame(5, 2, &mut stream.rng()).unwrap();
        let id = CMatrix::identity(5, 5);
        let s = schur_complement(&id, &q).unwrap();
        let expected = &id - q.matrix() * q.matrix().adjoint();
        assert!((s - expected).norm() < 1e-12);
    }

    #[test]
    fn schur_recovers_block_formula() {
        // with Q = first k identity columns, the lower-right block is the
        // classical Schur complement A22 − A21 A11⁻¹ A12
        let stream = RngStream::new(4, 0);
        let mut rng = stream.rng();
        let n = 6;
        let k = 2;
        let a = ginibre_with(n, n, &mut rng);
        let q = coordinate_frame(n, k);
        let s = schur_complement(&a, &q).unwrap();

        let a11 = a.view((0, 0), (k, k)).into_owned();
        let a12 = a.view((0, k), (k, n - k)).into_owned();
        let a21 = a.view((k, 0), (n - k, k)).into_owned();
        let a22 = a.view((k, k), (n - k, n - k)).into_owned();
        let classical = &a22 - &a21 * a11.lu().solve(&a12).unwrap();
        let block = s.view((k, k), (n - k, n - k)).into_owned();
        assert!((block - classical).norm() < 1e-10 * a.norm());
        // and the compressed rows/columns vanish
        let norm_s = matrix::operator_norm(&s);
        assert!((&s * q.matrix()).norm() <= 1e-10 * norm_s);
        assert!((q.matrix().adjoint() * &s).norm() <= 1e-10 * norm_s);
    }

    #[test]
    fn schur_annihilates_frame_and_has_low_rank_correction() {
        let stream = RngStream::new(5, 0);
        let mut rng = stream.rng();
        let n = 7;
        let k = 3;
        let a = ginibre_with(n, n, &mut rng);
        let q = sample_haar_frame(n, k, &mut rng).unwrap();
        let s = schur_complement(&a, &q).unwrap();
        let norm_s = matrix::operator_norm(&s);
        assert!((&s * q.matrix()).norm() <= 1e-10 * norm_s);
        assert!((q.matrix().adjoint() * &s).norm() <= 1e-10 * norm_s);
        // the correction term has rank <= k
        let diff = &s - &a;
        let svs = matrix::singular_values(&diff);
        for &sv in svs.iter().skip(k) {
            assert!(sv <= 1e-10 * svs[0], "correction rank exceeded {k}: {svs:?}");
        }
    }

    #[test]
    fn schur_acts_as_a_on_the_right_kernel() {
        // (A/Q')x = Ax whenever x ⊥ col(A*Q')
        let stream = RngStream::new(6, 0);
        let mut rng = stream.rng();
        let n = 8;
        let a = ginibre_with(n, n, &mut rng);
        let q = sample_haar_frame(n, 3, &mut rng).unwrap();
        let s = schur_complement(&a, &q).unwrap();
        let aq = a.adjoint() * q.matrix(); // col(A*Q')
        // project random vectors onto col(A*Q')^⊥
        let gram = aq.adjoint() * &aq;
        for _ in 0..10 {
            let x = crate::rand_frames::sample_haar_unit_vector(n, &mut rng).unwrap();
            let coeffs = gram.clone().lu().solve(&(aq.adjoint() * &x)).unwrap();
            let x_perp = &x - &aq * coeffs;
            let lhs = &s * &x_perp;
            let rhs = &a * &x_perp;
            assert!((lhs - rhs).norm() <= 1e-9 * a.norm() * x_perp.norm());
        }
    }

    #[test]
    fn singular_pivot_is_reported() {
        // A annihilates the frame's column: Q*AQ = 0
        let a = diagonal(&[complex(0.0, 0.0), complex(1.0, 0.0), complex(2.0, 0.0)]);
        let q = coordinate_frame(3, 1);
        match schur_complement(&a, &q) {
            Err(Error::SingularPivot(_)) => {}
            other => panic!("expected singular pivot, got {other:?}"),
        }
    }

    #[test]
    fn hermitian_part_basics() {
        // Hermitian M at θ = 0 is M itself
        let stream = RngStream::new(7, 0);
        let mut rng = stream.rng();
        let g = ginibre_with(4, 4, &mut rng);
        let m = (&g + g.adjoint()) * complex(0.5, 0.0);
        let h = hermitian_part(&m, 0.0).unwrap();
        assert!((&h - &m).norm() < 1e-14 * m.norm().max(1.0));

        // N = [[0,2],[0,0]] has H(e^{−iθ}N) eigenvalues ±1 for every θ
        let mut nmat = CMatrix::zeros(2, 2);
        nmat[(0, 1)] = complex(2.0, 0.0);
        for theta in [0.0, 0.3, 1.2, std::f64::consts::PI] {
            let h = hermitian_part(&nmat, theta).unwrap();
            assert!((&h - h.adjoint()).norm() < 1e-14);
            let eigs = matrix::hermitian_eigenvalues(&h);
            assert_relative_eq!(eigs[0], -1.0, epsilon = 1e-12);
            assert_relative_eq!(eigs[1], 1.0, epsilon = 1e-12);
        }

        // θ = π/2 agrees with the entrywise formula
        let theta = std::f64::consts::FRAC_PI_2;
        let h = hermitian_part(&m, theta).unwrap();
        let phase = Complex64::from_polar(1.0, -theta);
        let direct = (&m * phase + (&m * phase).adjoint()) * complex(0.5, 0.0);
        assert!((h - direct).norm() < 1e-14 * m.norm().max(1.0));
    }

    #[test]
    fn hermitian_part_linear_and_periodic() {
        let stream = RngStream::new(8, 0);
        let mut rng = stream.rng();
        let a = ginibre_with(3, 3, &mut rng);
        let b = ginibre_with(3, 3, &mut rng);
        let theta = 0.77;
        let lhs = hermitian_part(&(&a + &b), theta).unwrap();
        let rhs = hermitian_part(&a, theta).unwrap() + hermitian_part(&b, theta).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
        let p0 = hermitian_part(&a, theta).unwrap();
        let p1 = hermitian_part(&a, theta + 2.0 * std::f64::consts::PI).unwrap();
        assert!((p0 - p1).norm() < 1e-12);
    }

    #[test]
    fn weyl_perturbation_of_singular_values() {
        let stream = RngStream::new(9, 0);
        let mut rng = stream.rng();
        for _ in 0..20 {
            let m = ginibre_with(5, 5, &mut rng);
            let e = ginibre_with(5, 5, &mut rng) * complex(0.05, 0.0);
            let se = matrix::operator_norm(&e);
            let s1 = matrix::singular_values(&m);
            let s2 = matrix::singular_values(&(&m + &e));
            for k in 0..5 {
                assert!((s1[k] - s2[k]).abs() <= se + 1e-12);
            }
        }
    }

    #[test]
    fn singular_values_of_small_cases() {
        let m = diagonal(&[complex(3.0, 0.0), complex(1.0, 0.0), complex(2.0, 0.0)]);
        assert_eq!(
            matrix::singular_values(&m)
                .iter()
                .map(|x| x.round() as i64)
                .collect::<Vec<_>>(),
            vec![3, 2, 1]
        );
        let mut nmat: DMatrix<Complex64> = CMatrix::zeros(2, 2);
        nmat[(0, 1)] = complex(2.0, 0.0);
        let s = matrix::singular_values(&nmat);
        assert_relative_eq!(s[0], 2.0, epsilon = 1e-14);
        assert_relative_eq!(s[1], 0.0, epsilon = 1e-14);
    }
}
