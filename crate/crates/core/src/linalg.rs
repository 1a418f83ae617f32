//! Dense complex linear algebra for small Hermitian problems.
//!
//! Everything here is sized for the 2x2 and 4x4 matrices of two-qubit
//! states, but works for any small dimension. Matrices are row-major over
//! the computational basis; for two qubits that is `{HH, HV, VH, VV}` with
//! the first tensor factor being subsystem A.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance for the Hermiticity precondition of the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above `-NEG_EIG_TOL` are treated as zero in entropy functionals.
pub const NEG_EIG_TOL: f64 = 1e-9;
/// Off-diagonal Frobenius norm at which Jacobi iteration stops.
pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 50;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

/// On-disk form: `{ "dim": n, "entries": [[re, im], ...] }`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        let data = json.entries.iter().map(|[re, im]| c(*re, *im)).collect();
        ComplexMatrix::from_vec(json.dim, data)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.dim,
            entries: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        ComplexMatrix {
            dim,
            data: vec![C64::default(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = cr(1.0);
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::NotSquare {
                dim,
                entries: data.len(),
            });
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(dim, data.iter().map(|&x| cr(x)).collect())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = cr(d);
        }
        m
    }

    /// Outer product `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Elementwise complex conjugate (not transposed).
    pub fn conj(&self) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|M_ij - conj(M_ji)|` together with its location.
    pub fn hermiticity_error(&self) -> (f64, usize, usize) {
        let n = self.dim;
        let mut worst = (0.0, 0, 0);
        for i in 0..n {
            for j in i..n {
                let dev = (self[(i, j)] - self[(j, i)].conj()).norm();
                if dev > worst.0 {
                    worst = (dev, i, j);
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error().0 <= tol
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let (deviation, row, col) = self.hermiticity_error();
        if deviation > tol || !deviation.is_finite() {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation,
            });
        }
        Ok(())
    }

    /// `(M + M^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        (self + &adj).scale(cr(0.5))
    }

    /// Checks that the matrix is a density operator: Hermitian, unit trace,
    /// and no eigenvalue below `-neg_tol`.
    pub fn ensure_density(&self, trace_tol: f64, neg_tol: f64) -> Result<()> {
        self.ensure_hermitian(HERMITIAN_TOL)?;
        let tr = self.trace().re;
        if (tr - 1.0).abs() > trace_tol {
            return Err(Error::TraceNotUnit { trace: tr });
        }
        let spec = hermitian_eig(self)?;
        let min = spec.values.last().copied().unwrap_or(0.0);
        if min < -neg_tol {
            return Err(Error::NegativeEigenvalue { value: min });
        }
        Ok(())
    }

    /// Parses the matrix JSON form, reporting the row and column of the
    /// first malformed entry.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidSpec("matrix must be a JSON object".into()))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::InvalidSpec("matrix \"dim\" must be a positive integer".into()))?
            as usize;
        let entries = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidSpec("matrix \"entries\" must be an array".into()))?;
        let mut data = Vec::with_capacity(dim * dim);
        for (k, entry) in entries.iter().enumerate() {
            let (row, col) = (k / dim, k % dim);
            let bad = |reason: &str| Error::InvalidEntry {
                row,
                col,
                reason: reason.to_string(),
            };
            if k >= dim * dim {
                return Err(bad("more entries than dim^2"));
            }
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| bad("expected [re, im]"))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| bad("real part is not a number"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| bad("imaginary part is not a number"))?;
            if !re.is_finite() || !im.is_finite() {
                return Err(bad("non-finite value"));
            }
            data.push(c(re, im));
        }
        if data.len() != dim * dim {
            let k = data.len();
            return Err(Error::InvalidEntry {
                row: k / dim,
                col: k % dim,
                reason: format!("missing entry ({} of {} present)", k, dim * dim),
            });
        }
        Self::from_vec(dim, data)
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self).expect("matrix serialization is infallible")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::default() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

/// Kronecker product `a ⊗ b`; entry `(i*db + k, j*db + l)` is `a_ij * b_kl`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Which qubit of a two-qubit state to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state of one qubit of a 4x4 two-qubit operator.
pub fn partial_trace(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if rho.dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim,
        });
    }
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for k in 0..2 {
            out[(i, k)] = match keep {
                Subsystem::A => (0..2).map(|j| rho[(2 * i + j, 2 * k + j)]).sum(),
                Subsystem::B => (0..2).map(|j| rho[(2 * j + i, 2 * j + k)]).sum(),
            };
        }
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues sorted descending.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Spectrum {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim)
            .map(|i| self.vectors[(i, k)])
            .collect()
    }

    /// `V diag(values) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        reassemble(&self.values, &self.vectors)
    }
}

/// `V diag(values) V^dagger` for an arbitrary eigenvalue vector.
pub fn reassemble(values: &[f64], vectors: &ComplexMatrix) -> ComplexMatrix {
    let n = vectors.dim;
    assert_eq!(values.len(), n);
    let mut out = ComplexMatrix::zeros(n);
    for (k, &lam) in values.iter().enumerate() {
        if lam == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = vectors[(i, k)] * lam;
            for j in 0..n {
                out[(i, j)] += vik * vectors[(j, k)].conj();
            }
        }
    }
    out
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then annihilates the now-real pivot with a plane rotation.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    m.ensure_hermitian(HERMITIAN_TOL)?;
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let stop = JACOBI_TOL * a.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= stop {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = a[(p, q)];
                let g_abs = g.norm();
                if g_abs == 0.0 {
                    continue;
                }
                let phase = g / g_abs;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * g_abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // U restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                let u_pp = cr(cs);
                let u_pq = cr(sn);
                let u_qp = -phase.conj() * sn;
                let u_qq = phase.conj() * cs;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = C64::default();
                a[(q, p)] = C64::default();
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, col)] = v[(r, src)];
        }
    }
    Ok(Spectrum { values, vectors })
}

/// `-x log2 x` with `0 log 0 = 0`.
#[inline]
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Shannon entropy in bits of a probability vector; entries are clamped to
/// `[0, 1]` first.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| -xlog2x(p.clamp(0.0, 1.0))).sum()
}

/// Binary entropy `H(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    shannon_bits(&[x, 1.0 - x])
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spec = hermitian_eig(rho)?;
    let trace: f64 = spec.values.iter().sum();
    if (trace - 1.0).abs() > NEG_EIG_TOL {
        return Err(Error::TraceNotUnit { trace });
    }
    entropy_of_spectrum(&spec.values)
}

pub(crate) fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    if let Some(&min) = values.iter().min_by(|a, b| a.total_cmp(b)) {
        if min < -NEG_EIG_TOL {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    Ok(shannon_bits(values))
}

/// Eigenvalues of a 2x2 Hermitian matrix in closed form, descending.
pub(crate) fn eigvals_2x2(m: &ComplexMatrix) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean + half_gap, mean - half_gap]
}

/// `½ Σ |eig(a - b)|`.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: b.dim,
        });
    }
    let spec = hermitian_eig(&(a - b))?;
    Ok(0.5 * spec.values.iter().map(|x| x.abs()).sum::<f64>())
}

/// Principal square root of a positive semidefinite matrix; slightly
/// negative eigenvalues are clamped to zero.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(m)?;
    let roots: Vec<f64> = spec.values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    Ok(reassemble(&roots, &spec.vectors))
}

/// The Pauli matrices `[I, X, Y, Z]`.
pub fn pauli(k: usize) -> ComplexMatrix {
    let z = C64::default();
    let one = cr(1.0);
    let i = c(0.0, 1.0);
    let data = match k {
        0 => vec![one, z, z, one],
        1 => vec![z, one, one, z],
        2 => vec![z, -i, i, z],
        3 => vec![one, z, z, -one],
        _ => panic!("Pauli index {k} out of range"),
    };
    ComplexMatrix::from_vec(2, data).unwrap()
}
