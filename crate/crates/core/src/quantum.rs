//! States, Hamiltonians, dephasing and seeded random sampling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{mismatch, Error, Result};
use crate::measurement::StochasticMatrix;
use crate::numerics::{eig_hermitian, ComplexMatrix, EigenDecomposition};

/// Smallest admissible eigenvalue of a density matrix.
pub const PSD_TOL: f64 = -1e-10;

/// Allowed deviation of `Tr(rho)` from one.
pub const TRACE_TOL: f64 = 1e-10;

/// A validated density matrix together with its spectral decomposition.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: ComplexMatrix,
    eig: EigenDecomposition,
}

impl DensityMatrix {
    /// Validates Hermiticity, positivity and unit trace.
    pub fn new(op: ComplexMatrix) -> Result<Self> {
        let eig = eig_hermitian(&op)?;
        if let Some(&min) = eig.values.first() {
            if min < PSD_TOL {
                return Err(Error::NotPositive(min));
            }
        }
        let tr = op.trace()?;
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        Ok(Self { op, eig })
    }

    /// Diagonal state with the given populations.
    pub fn from_populations(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(p))
    }

    /// Pure state `|psi><psi|`; `psi` is normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidSize("zero state vector".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::projector(&v))
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSize("dimension 0".into()));
        }
        Self::new(ComplexMatrix::identity(d).scale(1.0 / d as f64))
    }

    pub fn dim(&self) -> usize {
        self.op.rows()
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> &[f64] {
        &self.eig.values
    }

    /// Eigenvalues in non-increasing order.
    pub fn spectrum_desc(&self) -> Vec<f64> {
        self.eig.values.iter().rev().copied().collect()
    }

    /// Columns are eigenvectors ordered by non-increasing eigenvalue.
    ///
    /// Reversing the ascending order keeps ties deterministic.
    pub fn eigenbasis_desc(&self) -> ComplexMatrix {
        let d = self.dim();
        let v = &self.eig.vectors;
        ComplexMatrix::from_fn(d, d, |i, j| v[(i, d - 1 - j)])
    }
}

/// A Hamiltonian with its cached ascending spectral decomposition.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    op: ComplexMatrix,
    eig: EigenDecomposition,
}

impl Hamiltonian {
    pub fn new(op: ComplexMatrix) -> Result<Self> {
        let eig = eig_hermitian(&op)?;
        Ok(Self { op, eig })
    }

    pub fn diagonal(energies: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(energies))
    }

    pub fn dim(&self) -> usize {
        self.op.rows()
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }

    /// Energies `E_1 <= ... <= E_d`.
    pub fn energies(&self) -> &[f64] {
        &self.eig.values
    }

    /// Columns are the energy eigenvectors, paired with [`Hamiltonian::energies`].
    pub fn basis(&self) -> &ComplexMatrix {
        &self.eig.vectors
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    /// Smallest gap between consecutive energies; infinite for `d = 1`.
    pub fn min_gap(&self) -> f64 {
        self.eig
            .values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// `Tr(H rho)`.
    pub fn mean_energy(&self, rho: &DensityMatrix) -> Result<f64> {
        check_dims(self.dim(), rho.dim())?;
        Ok(self.op.trace_product(rho.op())?.re)
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(mismatch(format!("dimension {expected}"), format!("dimension {found}")));
    }
    Ok(())
}

/// Populations `<E_i|rho|E_i>` in the Hamiltonian's tie-broken eigenbasis.
pub fn energy_populations(rho: &DensityMatrix, h: &Hamiltonian) -> Result<Vec<f64>> {
    check_dims(h.dim(), rho.dim())?;
    let d = h.dim();
    let basis = h.basis();
    let r = rho.op();
    Ok((0..d)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d {
                let bi = basis[(i, k)].conj();
                for j in 0..d {
                    acc += bi * r[(i, j)] * basis[(j, k)];
                }
            }
            acc.re
        })
        .collect())
}

/// Removes all coherence between energy eigenvectors:
/// `sum_i <E_i|rho|E_i> |E_i><E_i|`.
pub fn dephase(rho: &DensityMatrix, h: &Hamiltonian) -> Result<DensityMatrix> {
    let pops = energy_populations(rho, h)?;
    let d = h.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for (k, &p) in pops.iter().enumerate() {
        out.axpy(p, &ComplexMatrix::projector(&h.basis().column(k)));
    }
    DensityMatrix::new(out.hermitian_part())
}

/// Seeded random stream.
///
/// Backed by ChaCha8, whose output is specified bit-for-bit, so the same
/// `(seed, stream)` pair yields the same samples on every platform.
/// Independent streams are derived with [`RandomSource::split`].
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A fresh stream that depends only on the seed and `stream`.
    pub fn split(&self, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        Self { seed: self.seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian, `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn exponential(&mut self) -> f64 {
        self.rng.sample(Exp1)
    }

    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal folded back into `Q`.
pub fn haar_unitary(d: usize, rng: &mut RandomSource) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::InvalidSize("unitary of dimension 0".into()));
    }
    let z = rng.ginibre(d, d);
    let (mut q, r_diag) = gram_schmidt_qr(&z);
    for (k, r) in r_diag.iter().enumerate() {
        let n = r.norm();
        let phase = if n > 0.0 { r / n } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    Ok(q)
}

// Classical Gram-Schmidt with one reorthogonalization pass; returns Q and diag(R).
fn gram_schmidt_qr(a: &ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let n = a.rows();
    let m = a.cols();
    let mut q = ComplexMatrix::zeros(n, m);
    let mut diag = Vec::with_capacity(m);
    for k in 0..m {
        let mut v = a.column(k);
        for _ in 0..2 {
            for j in 0..k {
                let proj: Complex64 = (0..n).map(|i| q[(i, j)].conj() * v[i]).sum();
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi -= q[(i, j)] * proj;
                }
            }
        }
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        for (i, vi) in v.iter().enumerate() {
            q[(i, k)] = vi / norm;
        }
        diag.push(Complex64::new(norm, 0.0));
    }
    (q, diag)
}

/// Random state `G G^dagger / Tr(G G^dagger)` with `G` a `d x rank` Ginibre matrix.
///
/// `rank = d` samples the Hilbert-Schmidt measure.
pub fn random_density(d: usize, rank: usize, rng: &mut RandomSource) -> Result<DensityMatrix> {
    if d == 0 || rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    let g = rng.ginibre(d, rank);
    let ggd = g.matmul(&g.adjoint())?;
    let tr = ggd.trace()?.re;
    DensityMatrix::new(ggd.scale(1.0 / tr).hermitian_part())
}

/// Random Hamiltonian: energies drawn uniformly from `[0, 1)`, sorted, then
/// rotated into a Haar-random eigenbasis.
pub fn random_hamiltonian(d: usize, rng: &mut RandomSource) -> Result<Hamiltonian> {
    let mut energies: Vec<f64> = (0..d).map(|_| rng.uniform()).collect();
    energies.sort_by(f64::total_cmp);
    let u = haar_unitary(d, rng)?;
    let op = ComplexMatrix::from_real_diag(&energies).conjugate_by(&u)?;
    Hamiltonian::new(op.hermitian_part())
}

/// Like [`random_hamiltonian`], resampling until every level spacing is at least `min_gap`.
pub fn random_nondegenerate_hamiltonian(
    d: usize,
    min_gap: f64,
    rng: &mut RandomSource,
) -> Result<Hamiltonian> {
    loop {
        let h = random_hamiltonian(d, rng)?;
        if h.min_gap() >= min_gap {
            return Ok(h);
        }
    }
}

/// Uniform sample from the probability simplex with `n` entries.
pub fn random_probability(n: usize, rng: &mut RandomSource) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| rng.exponential()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Column-stochastic `n_out x n_in` matrix; every column is uniform on the simplex.
pub fn random_column_stochastic(
    n_out: usize,
    n_in: usize,
    rng: &mut RandomSource,
) -> Result<StochasticMatrix> {
    if n_out == 0 || n_in == 0 {
        return Err(Error::InvalidSize(format!("{n_out}x{n_in} stochastic matrix")));
    }
    let mut entries = vec![0.0; n_out * n_in];
    for j in 0..n_in {
        let col = random_probability(n_out, rng);
        for (i, x) in col.into_iter().enumerate() {
            entries[i * n_in + j] = x;
        }
    }
    StochasticMatrix::new(n_out, n_in, entries)
}
