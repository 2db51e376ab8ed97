//! Haar-distributed frames and the cubic polarization net.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::matrix::{self, CMatrix};
use crate::{Error, Result};

/// Maximum allowed operator-norm deviation of `Q*Q` from the identity.
pub const ORTHONORMALITY_TOL: f64 = 1e-12;

/// An m×k matrix with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    cols: CMatrix,
}

impl Frame {
    /// Wrap a matrix after validating orthonormality of its columns.
    pub fn from_matrix(cols: CMatrix) -> Result<Frame> {
        if cols.ncols() > cols.nrows() {
            return Err(Error::Dimension(format!(
                "frame must have k <= m, got {}x{}",
                cols.nrows(),
                cols.ncols()
            )));
        }
        let frame = Frame { cols };
        let defect = frame.orthonormality_defect();
        if defect > ORTHONORMALITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "columns are not orthonormal: defect {defect:.3e}"
            )));
        }
        Ok(frame)
    }

    /// ‖Q*Q − I_k‖ in operator norm.
    pub fn orthonormality_defect(&self) -> f64 {
        let k = self.cols.ncols();
        if k == 0 {
            return 0.0;
        }
        let gram = self.cols.adjoint() * &self.cols - CMatrix::identity(k, k);
        matrix::operator_norm(&gram)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.cols
    }

    pub fn into_matrix(self) -> CMatrix {
        self.cols
    }

    /// Ambient dimension m.
    pub fn dim(&self) -> usize {
        self.cols.nrows()
    }

    /// Number of columns k.
    pub fn width(&self) -> usize {
        self.cols.ncols()
    }

    /// The frame's single column as a vector (k = 1 frames).
    pub fn as_unit_vector(&self) -> Result<DVector<Complex64>> {
        if self.width() != 1 {
            return Err(Error::Dimension(format!("expected width-1 frame, got {}", self.width())));
        }
        Ok(self.cols.column(0).into_owned())
    }
}

/// Sample from the Haar distribution on m×k frames: fill with i.i.d. standard
/// complex Gaussians, take a thin QR factorization, and rotate each column so
/// the R factor has positive real diagonal. The phase correction is required:
/// plain QR of a Gaussian matrix is not Haar distributed.
pub fn sample_haar_frame<R: Rng>(m: usize, k: usize, rng: &mut R) -> Result<Frame> {
    if k > m {
        return Err(Error::Dimension(format!("cannot sample {k} orthonormal columns in C^{m}")));
    }
    if k == 0 {
        return Ok(Frame { cols: CMatrix::zeros(m, 0) });
    }
    let g = matrix::ginibre_with(m, k, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..k {
        let rjj = r[(j, j)];
        let mag = rjj.norm();
        // measure-zero degenerate pivot: leave the column phase alone
        let phase = if mag > 0.0 { rjj / mag } else { Complex64::new(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    Ok(Frame { cols: q })
}

/// Haar-random unit vector in C^n.
pub fn sample_haar_unit_vector<R: Rng>(n: usize, rng: &mut R) -> Result<DVector<Complex64>> {
    sample_haar_frame(n, 1, rng)?.as_unit_vector()
}

/// The polarization net S = {e_j} ∪ {e_j + ω^a e_k : j ≠ k, a ∈ {0,1,2}} in
/// C^ℓ with ω = e^{2πi/3}. Vectors are returned unnormalized; |S| = 3ℓ² − 2ℓ.
pub fn polarization_net(ell: usize) -> Result<Vec<DVector<Complex64>>> {
    if ell == 0 {
        return Err(Error::InvalidArgument("polarization net needs ell >= 1".into()));
    }
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut net = Vec::with_capacity(3 * ell * ell - 2 * ell);
    for j in 0..ell {
        let mut e = DVector::zeros(ell);
        e[j] = Complex64::new(1.0, 0.0);
        net.push(e);
    }
    let mut pow = [Complex64::new(1.0, 0.0); 3];
    pow[1] = omega;
    pow[2] = omega * omega;
    for j in 0..ell {
        for k in 0..ell {
            if j == k {
                continue;
            }
            for w in pow {
                let mut v = DVector::zeros(ell);
                v[j] = Complex64::new(1.0, 0.0);
                v[k] = w;
                net.push(v);
            }
        }
    }
    Ok(net)
}

/// Outcome of checking ‖B‖ ≤ ℓ·max_{v∈S} |v*Bv| on the polarization net.
#[derive(Debug, Clone, Copy)]
pub struct NetReport {
    /// ‖B‖ (largest singular value).
    pub lhs: f64,
    /// ℓ · max over the net of |v*Bv|.
    pub rhs: f64,
    pub holds: bool,
}

pub fn verify_net_inequality(b: &CMatrix) -> Result<NetReport> {
    if b.nrows() != b.ncols() {
        return Err(Error::Dimension("net inequality needs a square matrix".into()));
    }
    let ell = b.nrows();
    let lhs = matrix::operator_norm(b);
    let mut max_form: f64 = 0.0;
    for v in polarization_net(ell)? {
        let form = (v.adjoint() * b * &v)[(0, 0)].norm();
        max_form = max_form.max(form);
    }
    let rhs = ell as f64 * max_form;
    Ok(NetReport { lhs, rhs, holds: lhs <= rhs + 1e-10 * lhs })
}
