//! Dense complex matrices: norms, spectra, generators, and file formats.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::rng::RngStream;
use crate::{Error, Result};

/// Dense complex matrix, row-major semantics at the file boundary.
pub type CMatrix = DMatrix<Complex64>;

pub fn complex(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// k-th largest singular value, 1-indexed.
pub fn singular_value(m: &CMatrix, k: usize) -> Result<f64> {
    let min_dim = m.nrows().min(m.ncols());
    if k == 0 || k > min_dim {
        return Err(Error::InvalidArgument(format!(
            "singular value index {k} out of range 1..={min_dim}"
        )));
    }
    Ok(singular_values(m)[k - 1])
}

/// σ_k with the rank convention σ_k = 0 whenever k exceeds min(nrows, ncols).
pub fn singular_value_or_zero(m: &CMatrix, k: usize) -> f64 {
    singular_value(m, k).unwrap_or(0.0)
}

/// Operator (spectral) norm σ₁.
pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Least singular value σ_min = σ_{min(n,m)}.
pub fn smallest_singular_value(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut e: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e
}

/// Eigenvalues of a general square complex matrix, from the triangular factor
/// of its Schur decomposition.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("eigenvalues need a square matrix".into()));
    }
    let (_, t) = m.clone().schur().unpack();
    Ok((0..m.nrows()).map(|i| t[(i, i)]).collect())
}

/// zI − M.
pub fn shifted(m: &CMatrix, z: Complex64) -> CMatrix {
    let n = m.nrows();
    let mut out = -m.clone();
    for i in 0..n.min(m.ncols()) {
        out[(i, i)] += z;
    }
    out
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// i.i.d. standard complex Gaussian entries (real and imaginary parts each
/// N(0, 1/2), so E|z|² = 1).
pub fn ginibre_with<R: Rng>(n: usize, m: usize, rng: &mut R) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(n, m, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    })
}

pub fn ginibre(n: usize, seed: u64) -> CMatrix {
    ginibre_with(n, n, &mut RngStream::new(seed, 0).rng())
}

/// Nilpotent Jordan block: ones on the superdiagonal, zero eigenvalue.
pub fn jordan_block(n: usize) -> CMatrix {
    DMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn diagonal(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_column_slice(entries))
}

/// Haar-distributed n×n unitary.
pub fn haar_unitary(n: usize, seed: u64) -> CMatrix {
    let stream = RngStream::new(seed, 0);
    crate::rand_frames::sample_haar_frame(n, n, &mut stream.rng())
        .expect("square Haar frame")
        .into_matrix()
}

// ---------------------------------------------------------------------------
// File formats and generator strings
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    nrows: usize,
    ncols: usize,
    /// Row-major [re, im] pairs.
    entries: Vec<[f64; 2]>,
}

/// Parse a complex token like `1.5`, `-2j`, `0.5+0.25j`, `1e-3-2e-4j`.
/// Both `j` and `i` suffixes are accepted.
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let s = token.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Err(Error::Parse("empty complex token".into()));
    }
    let is_imag_suffix = |c: char| c == 'j' || c == 'i' || c == 'J' || c == 'I';
    // find a '+' or '-' that splits real and imaginary parts: not at index 0
    // and not part of an exponent
    let bytes: Vec<char> = s.chars().collect();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let c = bytes[k];
        if (c == '+' || c == '-') && !matches!(bytes[k - 1], 'e' | 'E') {
            split = Some(k);
            break;
        }
    }
    let parse_real = |t: &str| -> Result<f64> {
        t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{t}` in `{token}`")))
    };
    match split {
        Some(k) => {
            let (re_s, im_s) = (&s[..k], &s[k..]);
            let im_s = im_s.trim();
            if let Some(last) = im_s.chars().last() {
                if is_imag_suffix(last) {
                    let body = &im_s[..im_s.len() - 1];
                    let im = match body {
                        "+" => 1.0,
                        "-" => -1.0,
                        _ => parse_real(body)?,
                    };
                    return Ok(Complex64::new(parse_real(re_s)?, im));
                }
            }
            Err(Error::Parse(format!("expected imaginary suffix in `{token}`")))
        }
        None => {
            if let Some(last) = s.chars().last() {
                if is_imag_suffix(last) {
                    let body = &s[..s.len() - 1];
                    let im = match body {
                        "" | "+" => 1.0,
                        "-" => -1.0,
                        _ => parse_real(body)?,
                    };
                    return Ok(Complex64::new(0.0, im));
                }
            }
            Ok(Complex64::new(parse_real(s)?, 0.0))
        }
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}j", z.re, z.im)
    } else {
        format!("{}-{}j", z.re, -z.im)
    }
}

fn validate(m: CMatrix) -> Result<CMatrix> {
    if !is_finite(&m) {
        return Err(Error::Parse("matrix contains non-finite entries".into()));
    }
    Ok(m)
}

pub fn matrix_from_json(text: &str) -> Result<CMatrix> {
    let mj: MatrixJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix json: {e}")))?;
    if mj.entries.len() != mj.nrows * mj.ncols {
        return Err(Error::Parse(format!(
            "matrix json: {} entries for {}x{}",
            mj.entries.len(),
            mj.nrows,
            mj.ncols
        )));
    }
    let m = DMatrix::from_fn(mj.nrows, mj.ncols, |i, j| {
        let [re, im] = mj.entries[i * mj.ncols + j];
        Complex64::new(re, im)
    });
    validate(m)
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    let entries: Vec<[f64; 2]> = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .map(|(i, j)| [m[(i, j)].re, m[(i, j)].im])
        .collect();
    serde_json::to_string(&MatrixJson { nrows: m.nrows(), ncols: m.ncols(), entries })
        .expect("matrix json serialization")
}

pub fn matrix_from_csv(text: &str) -> Result<CMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<Complex64>> = line
            .split(',')
            .map(|tok| {
                parse_complex(tok).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            })
            .collect();
        rows.push(row?);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix csv".into()));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse("ragged matrix csv".into()));
    }
    let m = DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]);
    validate(m)
}

pub fn matrix_to_csv(m: &CMatrix) -> String {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols()).map(|j| format_complex(m[(i, j)])).collect::<Vec<_>>().join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Resolve a matrix source: a generator string (`jordan:n`, `ginibre:n:seed`,
/// `diag:z1,z2,...`, `haar-unitary:n:seed`) or a path to a `.json`/`.csv` file.
pub fn parse_matrix_source(source: &str) -> Result<CMatrix> {
    if let Some(rest) = source.strip_prefix("jordan:") {
        let n: usize =
            rest.parse().map_err(|_| Error::Parse(format!("jordan size `{rest}`")))?;
        return Ok(jordan_block(n));
    }
    if let Some(rest) = source.strip_prefix("ginibre:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("expected ginibre:n:seed, got `{source}`")));
        }
        let n = parts[0].parse().map_err(|_| Error::Parse(format!("ginibre size `{}`", parts[0])))?;
        let seed =
            parts[1].parse().map_err(|_| Error::Parse(format!("ginibre seed `{}`", parts[1])))?;
        return Ok(ginibre(n, seed));
    }
    if let Some(rest) = source.strip_prefix("diag:") {
        let entries: Result<Vec<Complex64>> = rest.split(',').map(parse_complex).collect();
        return Ok(diagonal(&entries?));
    }
    if let Some(rest) = source.strip_prefix("haar-unitary:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("expected haar-unitary:n:seed, got `{source}`")));
        }
        let n = parts[0]
            .parse()
            .map_err(|_| Error::Parse(format!("haar-unitary size `{}`", parts[0])))?;
        let seed = parts[1]
            .parse()
            .map_err(|_| Error::Parse(format!("haar-unitary seed `{}`", parts[1])))?;
        return Ok(haar_unitary(n, seed));
    }
    read_matrix_file(Path::new(source))
}

pub fn read_matrix_file(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => matrix_from_json(&text),
        _ => matrix_from_csv(&text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn singular_values_sorted() {
        let m = diagonal(&[complex(3.0, 0.0), complex(1.0, 0.0), complex(2.0, 0.0)]);
        let s = singular_values(&m);
        assert_relative_eq!(s[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(s[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(s[2], 1.0, epsilon = 1e-12);
        assert_relative_eq!(singular_value(&m, 2).unwrap(), 2.0, epsilon = 1e-12);
        assert!(singular_value(&m, 4).is_err());
        assert_eq!(singular_value_or_zero(&m, 9), 0.0);
    }

    #[test]
    fn eigenvalues_of_triangular() {
        let mut m = jordan_block(3);
        m[(0, 0)] = complex(1.0, 2.0);
        m[(1, 1)] = complex(-1.0, 0.5);
        let mut eigs = eigenvalues(&m).unwrap();
        eigs.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_relative_eq!(eigs[0].re, -1.0, epsilon = 1e-10);
        assert_relative_eq!(eigs[2].im, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn complex_token_roundtrip() {
        for tok in ["1+2j", "-0.5j", "3", "1e-3-2e-4j", "j", "-j", "2.5i"] {
            let z = parse_complex(tok).unwrap();
            let z2 = parse_complex(&format_complex(z)).unwrap();
            assert_relative_eq!(z.re, z2.re);
            assert_relative_eq!(z.im, z2.im);
        }
        assert_eq!(parse_complex("1e-3-2e-4j").unwrap(), complex(1e-3, -2e-4));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn json_and_csv_roundtrip() {
        let m = ginibre(4, 9);
        let m_json = matrix_from_json(&matrix_to_json(&m)).unwrap();
        assert_eq!(m, m_json);
        let m_csv = matrix_from_csv(&matrix_to_csv(&m)).unwrap();
        assert!((&m - &m_csv).norm() < 1e-12 * m.norm());
    }

    #[test]
    fn generator_strings() {
        let j = parse_matrix_source("jordan:4").unwrap();
        assert_eq!(j[(0, 1)], complex(1.0, 0.0));
        assert_eq!(j[(3, 3)], complex(0.0, 0.0));
        let d = parse_matrix_source("diag:1,2j,-1-1j").unwrap();
        assert_eq!(d[(1, 1)], complex(0.0, 2.0));
        let g1 = parse_matrix_source("ginibre:5:3").unwrap();
        let g2 = parse_matrix_source("ginibre:5:3").unwrap();
        assert_eq!(g1, g2);
        let u = parse_matrix_source("haar-unitary:4:1").unwrap();
        let dev = (u.adjoint() * &u - CMatrix::identity(4, 4)).norm();
        assert!(dev < 1e-12);
    }

    #[test]
    fn shifted_matrix() {
        let m = jordan_block(2);
        let s = shifted(&m, complex(2.0, 0.0));
        assert_eq!(s[(0, 0)], complex(2.0, 0.0));
        assert_eq!(s[(0, 1)], complex(-1.0, 0.0));
    }
}
