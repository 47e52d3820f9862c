//! POVMs, fine-grained measurements, classical post-processing and
//! coarse-grained states.
//!
//! A coarse-grained measurement is any POVM `Q_i = sum_j D_ij P_j` obtained
//! from a rank-one projective measurement `P` through a column-stochastic
//! matrix `D`. The coarse-grained state of `rho` under a POVM `M` is the
//! mixture of normalized elements `sum_i p_i M_i / V_i`, weighted by the
//! outcome probabilities `p_i = Tr(rho M_i)`, where `V_i = Tr(M_i)` is the
//! volume of outcome `i`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Error, Result};
use crate::numerics::{eig_hermitian, ComplexMatrix, HERMITICITY_TOL, UNITARY_TOL};
use crate::quantum::{check_dims, DensityMatrix, Hamiltonian, RandomSource};

/// Maximum entry deviation of `sum_i M_i` from the identity.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Elements whose trace falls below this are treated as the zero operator.
pub const MIN_VOLUME: f64 = 1e-12;

/// Column sums of a stochastic matrix must equal one within this tolerance.
pub const COLUMN_SUM_TOL: f64 = 1e-12;

/// Row sums of a bistochastic matrix must equal one within this tolerance.
pub const ROW_SUM_TOL: f64 = 1e-10;

/// A finite POVM.
///
/// `labels[k]` is the outcome index element `k` carried before any outcomes
/// were dropped by post-processing; for a freshly built POVM it is `k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PovmRepr", into = "PovmRepr")]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    volumes: Vec<f64>,
    labels: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PovmRepr {
    elements: Vec<ComplexMatrix>,
}

impl TryFrom<PovmRepr> for Povm {
    type Error = Error;

    fn try_from(r: PovmRepr) -> Result<Self> {
        Povm::new(r.elements)
    }
}

impl From<Povm> for PovmRepr {
    fn from(p: Povm) -> Self {
        PovmRepr { elements: p.elements }
    }
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let labels = (0..elements.len()).collect();
        Self::with_labels(elements, labels)
    }

    fn with_labels(elements: Vec<ComplexMatrix>, labels: Vec<usize>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidPovm("no elements".into()));
        };
        let d = first.rows();
        let mut sum = ComplexMatrix::zeros(d, d);
        let mut volumes = Vec::with_capacity(elements.len());
        for (k, m) in elements.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(mismatch(
                    format!("{d}x{d} element"),
                    format!("{}x{} element {k}", m.rows(), m.cols()),
                ));
            }
            let defect = m.hermiticity_defect();
            if defect > HERMITICITY_TOL {
                return Err(Error::InvalidPovm(format!(
                    "element {k} is not Hermitian (defect {defect:e})"
                )));
            }
            let min = eig_hermitian(m)?.values[0];
            if min < -1e-10 {
                return Err(Error::InvalidPovm(format!(
                    "element {k} has negative eigenvalue {min:e}"
                )));
            }
            let v = m.trace()?.re;
            if v < MIN_VOLUME {
                return Err(Error::InvalidPovm(format!("element {k} is the zero operator")));
            }
            volumes.push(v);
            sum = sum.add(m)?;
        }
        let defect = sum.sub(&ComplexMatrix::identity(d))?.max_abs();
        if defect > COMPLETENESS_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {defect:e}"
            )));
        }
        Ok(Self {
            elements,
            volumes,
            labels,
        })
    }

    /// The single-outcome POVM `{I}`.
    pub fn trivial(d: usize) -> Result<Self> {
        Self::new(vec![ComplexMatrix::identity(d)])
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `V_i = Tr(M_i)`.
    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// True when every element commutes with `h` within `tol`.
    pub fn commutes_with(&self, h: &Hamiltonian, tol: f64) -> bool {
        self.elements.iter().all(|m| {
            let hm = h.op().matmul(m).expect("dims");
            let mh = m.matmul(h.op()).expect("dims");
            hm.sub(&mh).expect("dims").max_abs() <= tol
        })
    }
}

/// Rank-one projective measurement in an orthonormal basis.
#[derive(Debug, Clone)]
pub struct FineGrainedMeasurement {
    basis: ComplexMatrix,
}

impl FineGrainedMeasurement {
    /// Columns of `basis` are the measurement vectors `|k>`.
    pub fn new(basis: ComplexMatrix) -> Result<Self> {
        let defect = basis.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { basis })
    }

    pub fn computational(d: usize) -> Self {
        Self {
            basis: ComplexMatrix::identity(d),
        }
    }

    /// Projective energy measurement `{|E_i><E_i|}`.
    pub fn energy(h: &Hamiltonian) -> Self {
        Self {
            basis: h.basis().clone(),
        }
    }

    /// The eigenbasis of `rho`, most populated vector first.
    pub fn eigenbasis(rho: &DensityMatrix) -> Self {
        Self {
            basis: rho.eigenbasis_desc(),
        }
    }

    pub fn haar(d: usize, rng: &mut RandomSource) -> Result<Self> {
        Ok(Self {
            basis: crate::quantum::haar_unitary(d, rng)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        (0..self.dim())
            .map(|k| ComplexMatrix::projector(&self.basis.column(k)))
            .collect()
    }

    pub fn povm(&self) -> Povm {
        let d = self.dim();
        Povm {
            elements: self.projectors(),
            volumes: vec![1.0; d],
            labels: (0..d).collect(),
        }
    }

    /// Outcome probabilities `<k|rho|k>`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        check_dims(self.dim(), rho.dim())?;
        let d = self.dim();
        let r = rho.op();
        Ok((0..d)
            .map(|k| {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..d {
                    for j in 0..d {
                        acc += self.basis[(i, k)].conj() * r[(i, j)] * self.basis[(j, k)];
                    }
                }
                acc.re.max(0.0)
            })
            .collect())
    }
}

/// Real `n_out x n_in` matrix with nonnegative entries and unit column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    n_out: usize,
    n_in: usize,
    entries: Vec<f64>,
    bistochastic: bool,
}

impl StochasticMatrix {
    /// Validates a row-major `n_out x n_in` matrix.
    pub fn new(n_out: usize, n_in: usize, entries: Vec<f64>) -> Result<Self> {
        if n_out == 0 || n_in == 0 {
            return Err(Error::InvalidSize(format!("{n_out}x{n_in} stochastic matrix")));
        }
        if entries.len() != n_out * n_in {
            return Err(mismatch(n_out * n_in, entries.len()));
        }
        if let Some(k) = entries.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::NotStochastic(format!(
                "entry ({}, {}) = {} is negative or non-finite",
                k / n_in,
                k % n_in,
                entries[k]
            )));
        }
        let m = Self {
            n_out,
            n_in,
            entries,
            bistochastic: false,
        };
        for (j, s) in m.column_sums().into_iter().enumerate() {
            if (s - 1.0).abs() > COLUMN_SUM_TOL {
                return Err(Error::NotStochastic(format!("column {j} sums to {s}")));
            }
        }
        let bistochastic = n_out == n_in
            && m.row_sums().iter().all(|s| (s - 1.0).abs() <= ROW_SUM_TOL);
        Ok(Self { bistochastic, ..m })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_out = rows.len();
        let n_in = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != n_in) {
            return Err(mismatch(format!("{n_in} columns"), format!("{} columns", r.len())));
        }
        Self::new(n_out, n_in, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self {
            n_out: n,
            n_in: n,
            entries,
            bistochastic: true,
        }
    }

    /// Single row of ones: merges all `n_in` outcomes into one.
    pub fn merge_all(n_in: usize) -> Self {
        Self {
            n_out: 1,
            n_in,
            entries: vec![1.0; n_in],
            bistochastic: n_in == 1,
        }
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n_in + j]
    }

    pub fn is_bistochastic(&self) -> bool {
        self.bistochastic
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n_in).map(<[_]>::to_vec).collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n_in)
            .map(|j| (0..self.n_out).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.chunks(self.n_in).map(|r| r.iter().sum()).collect()
    }

    /// `D x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_in {
            return Err(mismatch(self.n_in, x.len()));
        }
        Ok(self
            .entries
            .chunks(self.n_in)
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `self * other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &StochasticMatrix) -> Result<StochasticMatrix> {
        if self.n_in != other.n_out {
            return Err(mismatch(self.n_in, other.n_out));
        }
        let mut entries = vec![0.0; self.n_out * other.n_in];
        for i in 0..self.n_out {
            for k in 0..self.n_in {
                let a = self.get(i, k);
                for j in 0..other.n_in {
                    entries[i * other.n_in + j] += a * other.get(k, j);
                }
            }
        }
        StochasticMatrix::new(self.n_out, other.n_in, entries)
    }
}

impl Serialize for StochasticMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for StochasticMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        StochasticMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Classical post-processing `Q_i = sum_j D_ij P_j`.
///
/// Outcomes whose element vanishes (trace below [`MIN_VOLUME`]) are dropped;
/// the surviving elements keep their row index of `d` as label.
pub fn post_process(p: &Povm, d: &StochasticMatrix) -> Result<Povm> {
    if d.n_in() != p.len() {
        return Err(mismatch(
            format!("{} input outcomes", p.len()),
            format!("{} input outcomes", d.n_in()),
        ));
    }
    let dim = p.dim();
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for i in 0..d.n_out() {
        let mut q = ComplexMatrix::zeros(dim, dim);
        let mut volume = 0.0;
        for (j, pj) in p.elements().iter().enumerate() {
            let w = d.get(i, j);
            if w != 0.0 {
                q.axpy(w, pj);
                volume += w * p.volumes()[j];
            }
        }
        if volume >= MIN_VOLUME {
            elements.push(q);
            labels.push(i);
        }
    }
    if elements.is_empty() {
        return Err(Error::DegeneratePovm);
    }
    Povm::with_labels(elements, labels)
}

/// Energy-incoherent POVM `N_i = sum_j q(i|j) |E_j><E_j|`.
pub fn energy_incoherent(h: &Hamiltonian, q: &StochasticMatrix) -> Result<Povm> {
    if q.n_in() != h.dim() {
        return Err(mismatch(
            format!("{} input outcomes", h.dim()),
            format!("{} input outcomes", q.n_in()),
        ));
    }
    post_process(&FineGrainedMeasurement::energy(h).povm(), q)
}

/// `p_i = Tr(rho M_i)`, with round-off negatives floored at zero.
pub fn outcome_distribution(rho: &DensityMatrix, m: &Povm) -> Result<Vec<f64>> {
    check_dims(m.dim(), rho.dim())?;
    m.elements()
        .iter()
        .map(|mi| Ok(rho.op().trace_product(mi)?.re.max(0.0)))
        .collect()
}

/// Coarse-grained state `sum_i p_i M_i / V_i`.
pub fn coarse_grained_state(rho: &DensityMatrix, m: &Povm) -> Result<DensityMatrix> {
    let probs = outcome_distribution(rho, m)?;
    let d = m.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for ((mi, &vi), &pi) in m.elements().iter().zip(m.volumes()).zip(&probs) {
        if pi < 1e-15 {
            continue;
        }
        out.axpy(pi / vi, mi);
    }
    DensityMatrix::new(out.hermitian_part())
}

/// Refinement distribution `q(j|i) = D_ij V_j / sum_k D_ik V_k`.
///
/// The result has one row per outcome `j` of `p` and one column per coarse
/// outcome `i`; every column is a probability vector, so
/// `Q_i / Tr(Q_i) = sum_j q(j|i) P_j / Tr(P_j)`.
pub fn refine_distribution(p: &Povm, d: &StochasticMatrix) -> Result<StochasticMatrix> {
    if d.n_in() != p.len() {
        return Err(mismatch(
            format!("{} input outcomes", p.len()),
            format!("{} input outcomes", d.n_in()),
        ));
    }
    let n_fine = p.len();
    let n_coarse = d.n_out();
    let mut entries = vec![0.0; n_fine * n_coarse];
    for i in 0..n_coarse {
        let mass: f64 = (0..n_fine).map(|k| d.get(i, k) * p.volumes()[k]).sum();
        if mass < 1e-15 {
            return Err(Error::ZeroMass(i));
        }
        for j in 0..n_fine {
            entries[j * n_coarse + i] = d.get(i, j) * p.volumes()[j] / mass;
        }
    }
    StochasticMatrix::new(n_fine, n_coarse, entries)
}
