//! Dense complex linear algebra.
//!
//! Everything the physics layers need and nothing more: a row-major
//! [`ComplexMatrix`], products and adjoints, and a Hermitian eigensolver
//! based on cyclic complex Jacobi rotations. Dimensions are expected to stay
//! small (tens, at most a couple of hundred), where an `O(d^3)` sweep is cheap.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{mismatch, Error, Result};

/// Maximum tolerated `|A - A^dagger|` entry for an operator to count as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Reconstruction residual tolerance of the eigensolver, relative to `max(1, |A|_max)`.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Unitarity tolerance used by constructors that require a unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// A dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong counts and non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidSize(format!("{rows}x{cols} matrix")));
        }
        if data.len() != rows * cols {
            return Err(mismatch(rows * cols, data.len()));
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(k / cols, k % cols));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(mismatch(format!("{m} columns"), format!("{} columns", bad.len())));
        }
        Self::from_vec(n, m, rows.concat())
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Rank-one operator `|v><v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, k)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.cols).map(<[_]>::to_vec).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(mismatch(
                format!("{} rows", self.cols),
                format!("{} rows", other.rows),
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        Ok(self.diagonal().into_iter().sum())
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(mismatch(
                format!("{}x{}", self.cols, self.rows),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(mismatch(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other` for equally shaped matrices.
    pub(crate) fn axpy(&mut self, s: f64, other: &Self) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `A - A^dagger`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest entry modulus of `A^dagger A - I`; infinite for non-square input.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = self.adjoint().matmul(self).expect("square");
        gram.sub(&Self::identity(self.rows)).expect("same shape").max_abs()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// `U A U^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    /// Replaces `A` by `(A + A^dagger) / 2`.
    pub(crate) fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.data.chunks(self.cols) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  {}", cells.join("  "))?;
        }
        write!(f, "]")
    }
}

// Matrices travel as row-major nested arrays; each complex entry is `[re, im]`.
// Plain numbers are accepted on input as purely real entries.
#[derive(Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .data
            .chunks(self.cols)
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<EntryRepr>>::deserialize(deserializer)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| match e {
                        EntryRepr::Real(x) => Complex64::new(x, 0.0),
                        EntryRepr::Complex([re, im]) => Complex64::new(re, im),
                    })
                    .collect()
            })
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

/// Spectral decomposition `A = V diag(values) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending eigenvalues; exact ties keep the original column order.
    pub values: Vec<f64>,
    /// Column `k` is the normalized eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(values) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.vectors;
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * self.values[k])
                .sum()
        })
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// the classical real Jacobi rotation, so the transformed matrix stays
/// Hermitian. Sweeps continue until the off-diagonal mass drops below machine
/// precision relative to the Frobenius norm, or the budget of `100 d^2`
/// sweeps runs out.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let defect = a.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let frob2: f64 = m.as_slice().iter().map(Complex64::norm_sqr).sum();
    let threshold = f64::EPSILON * f64::EPSILON * frob2;
    let budget = 100 * n * n;
    let mut sweeps = 0;
    loop {
        let off2 = off_diagonal_norm_sqr(&m);
        if off2 <= threshold || off2 == 0.0 {
            break;
        }
        if sweeps == budget {
            return Err(Error::NoConvergence(budget));
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal_norm_sqr(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = m[(p, q)];
    let b_abs = b.norm();
    if b_abs == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Skip pivots that are negligible next to both diagonal entries.
    if b_abs < f64::EPSILON * 1e-2 * (app.abs() + aqq.abs()) {
        m[(p, q)] = Complex64::new(0.0, 0.0);
        m[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = b / b_abs;
    let tau = (aqq - app) / (2.0 * b_abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) * [[c, s], [-s, c]] restricted to (p, q).
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * gpp + mkq * gqp;
        m[(k, q)] = mkp * gpq + mkq * gqq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = gpp.conj() * mpk + gqp.conj() * mqk;
        m[(q, k)] = gpq.conj() * mpk + gqq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(n: usize, m: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, m, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        random_matrix(n, n, rng).hermitian_part()
    }

    #[test]
    fn diagonal_input_keeps_identity_basis() {
        let e = eig_hermitian(&ComplexMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![0.0, 1.0]);
        assert_eq!(e.vectors, ComplexMatrix::identity(2));
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = eig_hermitian(&x).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let h = 1.0 / 2f64.sqrt();
        let minus = e.vector(0);
        let plus = e.vector(1);
        // |<-|v0>| = 1 and |<+|v1>| = 1, up to phase.
        assert!(((minus[0] * h - minus[1] * h).norm() - 1.0).abs() < 1e-12);
        assert!(((plus[0] * h + plus[1] * h).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_8x8_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(8, &mut rng);
        let e = eig_hermitian(&a).unwrap();
        let resid = e.reconstruct().sub(&a).unwrap().max_abs();
        assert!(resid < 1e-9, "residual {resid}");
        assert!(e.vectors.is_unitary(1e-10));
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        for k in 0..8 {
            let vk = e.vector(k);
            for i in 0..8 {
                let av: Complex64 = (0..8).map(|j| a[(i, j)] * vk[j]).sum();
                assert!((av - vk[i] * e.values[k]).norm() < 1e-10 * a.max_abs().max(1.0));
            }
        }
    }

    #[test]
    fn dimension_64_converges() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let a = random_hermitian(64, &mut rng);
        let e = eig_hermitian(&a).unwrap();
        assert!(e.reconstruct().sub(&a).unwrap().max_abs() < 1e-9);
        assert!(e.vectors.is_unitary(1e-10));
    }

    #[test]
    fn exact_ties_keep_column_order() {
        let e = eig_hermitian(&ComplexMatrix::from_real_diag(&[2.0, 1.0, 2.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 2.0, 2.0]);
        let picked: Vec<usize> = (0..4)
            .map(|k| (0..4).find(|&i| e.vectors[(i, k)].norm() > 0.5).unwrap())
            .collect();
        assert_eq!(picked, vec![1, 3, 0, 2]);
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let a = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(eig_hermitian(&a), Err(Error::NotHermitian(_))));
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eig_hermitian(&b), Err(Error::NotSquare(2, 3))));
    }

    #[test]
    fn matmul_against_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(3, 3, &mut rng);
        let b = random_matrix(3, 3, &mut rng);
        let ab = a.matmul(&b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = c(0.0, 0.0);
                for k in 0..3 {
                    s += a.as_slice()[i * 3 + k] * b.as_slice()[k * 3 + j];
                }
                assert!((ab[(i, j)] - s).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn matmul_identity_and_involution() {
        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(x.matmul(&x).unwrap(), ComplexMatrix::identity(2));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(4, 2, &mut rng);
        assert_eq!(ComplexMatrix::identity(4).matmul(&a).unwrap(), a);
        assert!(matches!(a.matmul(&a), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn adjoint_trace_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_matrix(3, 4, &mut rng);
        assert_eq!(a.adjoint().adjoint(), a);
        assert!(matches!(a.trace(), Err(Error::NotSquare(3, 4))));
        let t = ComplexMatrix::from_real_diag(&[0.25, 0.75]).trace().unwrap();
        assert_eq!(t, c(1.0, 0.0));
        let e = eig_hermitian(&random_hermitian(5, &mut rng)).unwrap();
        assert!(e.vectors.is_unitary(1e-10));
        assert!(!ComplexMatrix::from_real_diag(&[1.0, 2.0]).is_unitary(1e-10));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let r = ComplexMatrix::from_vec(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]);
        assert!(matches!(r, Err(Error::NonFinite(0, 1))));
    }

    #[test]
    fn serde_pairs_and_plain_reals() {
        let m: ComplexMatrix = serde_json::from_str("[[0.5, [0, 1]], [[0, -1], 0.5]]").unwrap();
        assert_eq!(m[(0, 1)], c(0.0, 1.0));
        assert_eq!(m[(1, 1)], c(0.5, 0.0));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[[0.5,0.0],[0.0,1.0]],[[0.0,-1.0],[0.5,0.0]]]");
        assert!(serde_json::from_str::<ComplexMatrix>("[[1, 2], [3]]").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn reconstruction_within_tolerance(seed in any::<u64>(), n in 1usize..9) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_hermitian(n, &mut rng).scale(10.0);
                let e = eig_hermitian(&a).unwrap();
                let resid = e.reconstruct().sub(&a).unwrap().max_abs();
                prop_assert!(resid <= RESIDUAL_TOL * a.max_abs().max(1.0));
            }

            #[test]
            fn spectrum_is_conjugation_invariant(seed in any::<u64>(), n in 1usize..7) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_hermitian(n, &mut rng);
                let u = eig_hermitian(&random_hermitian(n, &mut rng)).unwrap().vectors;
                let before = eig_hermitian(&a).unwrap().values;
                let after = eig_hermitian(&a.conjugate_by(&u).unwrap().hermitian_part()).unwrap().values;
                for (x, y) in before.iter().zip(&after) {
                    prop_assert!((x - y).abs() < 1e-9);
                }
            }

            #[test]
            fn trace_is_cyclic(seed in any::<u64>(), n in 1usize..7) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_matrix(n, n, &mut rng);
                let b = random_matrix(n, n, &mut rng);
                let ab = a.matmul(&b).unwrap().trace().unwrap();
                let ba = b.matmul(&a).unwrap().trace().unwrap();
                prop_assert!((ab - ba).norm() < 1e-10);
                prop_assert!((a.trace_product(&b).unwrap() - ab).norm() < 1e-10);
            }
        }
    }
}
