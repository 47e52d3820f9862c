//! Vector majorization and bistochastic matrices.
//!
//! `x` majorizes `y` (`x ≻ y`) when every partial sum of the `k` largest
//! entries of `x` is at least the corresponding partial sum of `y`, with equal
//! totals. Equivalently `y = B x` for some bistochastic `B`.

use crate::error::{Error, Result};
use crate::ergotropy::sorted_energy;
use crate::measurement::{refine_distribution, FineGrainedMeasurement, StochasticMatrix};
use crate::numerics::{ComplexMatrix, UNITARY_TOL};
use crate::quantum::Hamiltonian;

/// Default slack for partial-sum comparisons.
pub const MAJORIZATION_TOL: f64 = 1e-9;

/// Slack of the energy comparison in [`schur_concavity_check`].
pub const SCHUR_TOL: f64 = 1e-10;

/// A probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Entries above `-1e-12` are floored at zero; the sum must be one within `1e-10`.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidProbability("empty vector".into()));
        }
        let mut out = Vec::with_capacity(entries.len());
        for (i, x) in entries.into_iter().enumerate() {
            if !x.is_finite() || x < -1e-12 {
                return Err(Error::InvalidProbability(format!("entry {i} is {x}")));
            }
            out.push(x.max(0.0));
        }
        let s: f64 = out.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProbability(format!("entries sum to {s}")));
        }
        Ok(Self(out))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    /// `(1, 0, ..., 0)`.
    pub fn pure(n: usize) -> Result<Self> {
        let mut v = vec![0.0; n];
        if let Some(first) = v.first_mut() {
            *first = 1.0;
        }
        Self::new(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    pub fn zero_padded(&self, n: usize) -> Self {
        let mut v = self.0.clone();
        v.resize(n.max(v.len()), 0.0);
        Self(v)
    }
}

impl AsRef<[f64]> for ProbVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Largest violation `max_k (S_k(y) - S_k(x))` of the partial-sum
/// conditions for `x ≻ y`, including the total-sum mismatch `|S_n(x) - S_n(y)|`.
/// Non-positive when `x` majorizes `y` exactly.
pub fn majorization_deficit(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let sort = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let (xs, ys) = (sort(x), sort(y));
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut worst = f64::NEG_INFINITY;
    for (a, b) in xs.iter().zip(&ys) {
        sx += a;
        sy += b;
        worst = worst.max(sy - sx);
    }
    Ok(worst.max((sx - sy).abs()))
}

/// Whether `x ≻ y` within `tol`. Vectors must have equal length.
pub fn majorizes(x: &ProbVector, y: &ProbVector, tol: f64) -> Result<bool> {
    Ok(majorization_deficit(x.as_slice(), y.as_slice())? <= tol)
}

/// Like [`majorizes`], zero-padding the shorter vector first.
pub fn majorizes_padded(x: &ProbVector, y: &ProbVector, tol: f64) -> bool {
    let n = x.len().max(y.len());
    majorizes(&x.zero_padded(n), &y.zero_padded(n), tol).expect("equal lengths after padding")
}

/// `D_ki = |V_ki|^2` for a unitary `V`; always bistochastic.
pub fn bistochastic_from_unitary(v: &ComplexMatrix) -> Result<StochasticMatrix> {
    let defect = v.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let n = v.rows();
    let entries = v.as_slice().iter().map(|z| z.norm_sqr()).collect();
    let b = StochasticMatrix::new(n, n, entries)?;
    debug_assert!(b.is_bistochastic());
    Ok(b)
}

/// `B_jm = sum_i D_im q(j|i)`, the matrix carrying the fine outcome
/// distribution `p` to the spectrum `mu = B p` of the coarse-grained state
/// of the post-processed measurement.
///
/// Bistochastic because every fine element has unit trace.
pub fn lemma1_matrix(p_fine: &FineGrainedMeasurement, d: &StochasticMatrix) -> Result<StochasticMatrix> {
    let q = refine_distribution(&p_fine.povm(), d)?;
    q.compose(d)
}

/// Checks that the passive energy of the more ordered spectrum is the
/// smaller one: `E^T x_down <= E^T y_down + 1e-10`, given `x ≻ y`.
pub fn schur_concavity_check(h: &Hamiltonian, x: &ProbVector, y: &ProbVector) -> Result<bool> {
    Ok(schur_margin(h, x, y)? <= SCHUR_TOL)
}

/// `E^T x_down - E^T y_down`; non-positive when Schur concavity holds.
pub fn schur_margin(h: &Hamiltonian, x: &ProbVector, y: &ProbVector) -> Result<f64> {
    let d = h.dim();
    if x.len() != d || y.len() != d {
        return Err(Error::LengthMismatch(x.len().max(y.len()), d));
    }
    if !majorizes(x, y, MAJORIZATION_TOL)? {
        return Err(Error::PreconditionFailed("x does not majorize y".into()));
    }
    Ok(sorted_energy(h.energies(), x.as_slice()) - sorted_energy(h.energies(), y.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{coarse_grained_state, outcome_distribution, post_process};
    use crate::quantum::{
        haar_unitary, random_column_stochastic, random_density, random_hamiltonian,
        random_probability, DensityMatrix, RandomSource,
    };

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn extreme_points() {
        assert!(majorizes(&pv(&[1.0, 0.0]), &pv(&[0.5, 0.5]), MAJORIZATION_TOL).unwrap());
        assert!(!majorizes(&pv(&[0.5, 0.5]), &pv(&[1.0, 0.0]), MAJORIZATION_TOL).unwrap());
        assert!(matches!(
            majorizes(&pv(&[1.0]), &pv(&[0.5, 0.5]), MAJORIZATION_TOL),
            Err(Error::LengthMismatch(1, 2))
        ));
        assert!(majorizes_padded(&pv(&[1.0]), &pv(&[0.5, 0.5]), MAJORIZATION_TOL));
        assert!(!majorizes_padded(&pv(&[0.5, 0.5]), &pv(&[1.0]), MAJORIZATION_TOL));
    }

    #[test]
    fn prob_vector_validation() {
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbVector::new(vec![1.1, -0.1]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
        let v = ProbVector::new(vec![1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(v.as_slice()[1], 0.0);
    }

    #[test]
    fn bistochastic_images_are_majorized() {
        let mut rng = RandomSource::new(3);
        for _ in 0..50 {
            let p = pv(&random_probability(5, &mut rng));
            let b = bistochastic_from_unitary(&haar_unitary(5, &mut rng).unwrap()).unwrap();
            let x = pv(&b.apply(p.as_slice()).unwrap());
            assert!(majorizes(&p, &x, MAJORIZATION_TOL).unwrap());
        }
    }

    #[test]
    fn bistochastic_from_unitary_examples() {
        let id = bistochastic_from_unitary(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(id, StochasticMatrix::identity(3));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = ComplexMatrix::from_real_rows(&[vec![h, h], vec![h, -h]]).unwrap();
        let b = bistochastic_from_unitary(&had).unwrap();
        for row in b.to_rows() {
            for x in row {
                assert!((x - 0.5).abs() < 1e-15);
            }
        }
        let mut rng = RandomSource::new(4);
        let b = bistochastic_from_unitary(&haar_unitary(5, &mut rng).unwrap()).unwrap();
        assert!(b.is_bistochastic());
        for s in b.row_sums().into_iter().chain(b.column_sums()) {
            assert!((s - 1.0).abs() < 1e-10);
        }
        assert!(matches!(
            bistochastic_from_unitary(&ComplexMatrix::from_real_diag(&[1.0, 0.9])),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn unitary_overlap_matrix_maps_spectrum_to_diagonal() {
        let mut rng = RandomSource::new(10);
        let rho = random_density(4, 4, &mut rng).unwrap();
        // Columns of V are rho's eigenvectors in the computational basis.
        let v = rho.eigen().vectors.clone();
        let b = bistochastic_from_unitary(&v).unwrap();
        let mapped = b.apply(rho.spectrum()).unwrap();
        for (k, m) in mapped.iter().enumerate() {
            assert!((m - rho.op()[(k, k)].re).abs() < 1e-10);
        }
    }

    #[test]
    fn lemma1_identity_and_qubit() {
        let p = FineGrainedMeasurement::computational(2);
        let b = lemma1_matrix(&p, &StochasticMatrix::identity(2)).unwrap();
        assert_eq!(b, StochasticMatrix::identity(2));

        let d = StochasticMatrix::from_rows(&[vec![0.5, 1.0], vec![0.5, 0.0]]).unwrap();
        let b = lemma1_matrix(&p, &d).unwrap();
        assert!(b.is_bistochastic());
        // q(0|0) = 1/3, q(1|0) = 2/3, q(0|1) = 1, q(1|1) = 0.
        // B_00 = D_00 q(0|0) + D_10 q(0|1) = 1/6 + 1/2, B_01 = D_01 q(0|0) + D_11 q(0|1) = 1/3.
        let expected = [[2.0 / 3.0, 1.0 / 3.0], [1.0 / 3.0, 2.0 / 3.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert!((b.get(i, j) - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn lemma1_random_is_bistochastic_and_maps_spectra() {
        let mut rng = RandomSource::new(11);
        let p = FineGrainedMeasurement::haar(4, &mut rng).unwrap();
        let d = random_column_stochastic(5, 4, &mut rng).unwrap();
        let b = lemma1_matrix(&p, &d).unwrap();
        assert!(b.is_bistochastic());

        let rho = random_density(4, 4, &mut rng).unwrap();
        let fine = outcome_distribution(&rho, &p.povm()).unwrap();
        let mut mu = b.apply(&fine).unwrap();
        mu.sort_by(f64::total_cmp);
        let q = post_process(&p.povm(), &d).unwrap();
        let cg = coarse_grained_state(&rho, &q).unwrap();
        for (a, e) in mu.iter().zip(cg.spectrum()) {
            assert!((a - e).abs() < 1e-10);
        }
    }

    #[test]
    fn schur_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
        let x = pv(&[1.0, 0.0]);
        let y = pv(&[0.5, 0.5]);
        assert!((schur_margin(&h, &x, &y).unwrap() + 0.5).abs() < 1e-15);
        assert!(schur_concavity_check(&h, &x, &y).unwrap());
        assert!(schur_concavity_check(&h, &y, &y).unwrap());
        assert!(matches!(
            schur_concavity_check(&h, &y, &x),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn schur_random_audit() {
        let mut rng = RandomSource::new(13);
        for _ in 0..1000 {
            let d = 4;
            let h = random_hamiltonian(d, &mut rng).unwrap();
            let x = pv(&random_probability(d, &mut rng));
            let b = bistochastic_from_unitary(&haar_unitary(d, &mut rng).unwrap()).unwrap();
            let y = pv(&b.apply(x.as_slice()).unwrap());
            assert!(schur_concavity_check(&h, &x, &y).unwrap());
        }
    }

    #[test]
    fn state_spectrum_majorizes_any_diagonal() {
        let mut rng = RandomSource::new(14);
        let rho = random_density(3, 3, &mut rng).unwrap();
        let diag: Vec<f64> = (0..3).map(|k| rho.op()[(k, k)].re).collect();
        assert!(majorizes(&pv(rho.spectrum()), &pv(&diag), MAJORIZATION_TOL).unwrap());
        let _ = DensityMatrix::maximally_mixed(3).unwrap();
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn prob(n: usize) -> impl Strategy<Value = ProbVector> {
            proptest::collection::vec(0.0f64..1.0, n).prop_filter_map("zero mass", |v| {
                let s: f64 = v.iter().sum();
                (s > 1e-6).then(|| ProbVector::new(v.iter().map(|x| x / s).collect()).unwrap())
            })
        }

        proptest! {
            #[test]
            fn reflexive(x in prob(5)) {
                prop_assert!(majorizes(&x, &x, MAJORIZATION_TOL).unwrap());
            }

            #[test]
            fn top_and_bottom(x in prob(6)) {
                prop_assert!(majorizes(&ProbVector::pure(6).unwrap(), &x, MAJORIZATION_TOL).unwrap());
                prop_assert!(majorizes(&x, &ProbVector::uniform(6).unwrap(), MAJORIZATION_TOL).unwrap());
            }

            #[test]
            fn transitive_along_bistochastic_chain(x in prob(4), seed in any::<u64>()) {
                let mut rng = RandomSource::new(seed);
                let b1 = bistochastic_from_unitary(&haar_unitary(4, &mut rng).unwrap()).unwrap();
                let b2 = bistochastic_from_unitary(&haar_unitary(4, &mut rng).unwrap()).unwrap();
                let y = ProbVector::new(b1.apply(x.as_slice()).unwrap()).unwrap();
                let z = ProbVector::new(b2.apply(y.as_slice()).unwrap()).unwrap();
                prop_assert!(majorizes(&x, &y, MAJORIZATION_TOL).unwrap());
                prop_assert!(majorizes(&y, &z, MAJORIZATION_TOL).unwrap());
                prop_assert!(majorizes(&x, &z, MAJORIZATION_TOL).unwrap());
            }

            #[test]
            fn permutations_preserve_passive_energy(x in prob(4), seed in any::<u64>()) {
                let mut rng = RandomSource::new(seed);
                let h = random_hamiltonian(4, &mut rng).unwrap();
                let mut y = x.as_slice().to_vec();
                y.rotate_left((seed % 4) as usize);
                let y = ProbVector::new(y).unwrap();
                prop_assert!(schur_margin(&h, &x, &y).unwrap().abs() < 1e-12);
            }
        }
    }
}
