//! Work quantities: passive energy, ergotropy, observational ergotropy and
//! the split of ergotropy into incoherent and coherent parts.
//!
//! The minimum of `Tr(H U rho U^dagger)` over unitaries is attained by
//! placing the populations of `rho` in non-increasing order on the energy
//! levels in non-decreasing order, so the passive energy is the sorted inner
//! product `sum_k E_k^up * lambda_k^down(rho)`. No optimization is performed.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measurement::{coarse_grained_state, Povm};
use crate::numerics::ComplexMatrix;
use crate::quantum::{check_dims, dephase, DensityMatrix, Hamiltonian};

/// `sum_k E_k^up * x_k^down` for an arbitrary population vector `x`.
///
/// Shorter vectors are zero-padded; extra entries of `x` beyond the
/// dimension must be zero for the result to be meaningful.
pub fn sorted_energy(energies_asc: &[f64], populations: &[f64]) -> f64 {
    let mut x = populations.to_vec();
    x.sort_by(|a, b| b.total_cmp(a));
    energies_asc.iter().zip(x.iter().chain(std::iter::repeat(&0.0))).map(|(e, p)| e * p).sum()
}

/// Minimal mean energy over the unitary orbit of `rho`.
pub fn passive_energy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    check_dims(h.dim(), rho.dim())?;
    Ok(sorted_energy(h.energies(), rho.spectrum()))
}

/// The passive state `Pi = sum_k lambda_k^down |E_k><E_k|` together with a
/// unitary `U = sum_k |E_k><alpha_k^down|` satisfying `U rho U^dagger = Pi`.
pub fn passive_state(rho: &DensityMatrix, h: &Hamiltonian) -> Result<(DensityMatrix, ComplexMatrix)> {
    check_dims(h.dim(), rho.dim())?;
    let d = h.dim();
    let pops = rho.spectrum_desc();
    let basis = h.basis();
    let mut pi = ComplexMatrix::zeros(d, d);
    for (k, &p) in pops.iter().enumerate() {
        pi.axpy(p, &ComplexMatrix::projector(&basis.column(k)));
    }
    let u = basis.matmul(&rho.eigenbasis_desc().adjoint())?;
    Ok((DensityMatrix::new(pi.hermitian_part())?, u))
}

/// Maximal work extractable by a unitary: `Tr(H rho) - passive_energy`.
pub fn ergotropy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    Ok(h.mean_energy(rho)? - passive_energy(rho, h)?)
}

/// Work extractable from `rho` when only the coarse-grained estimate built
/// from measurement `m` is known: `Tr(H rho) - passive_energy(rho_cg)`.
///
/// Unlike [`ergotropy`] this can be negative: the extraction unitary is
/// chosen for the estimate, not for the actual state.
pub fn observational_ergotropy(rho: &DensityMatrix, h: &Hamiltonian, m: &Povm) -> Result<f64> {
    check_dims(h.dim(), m.dim())?;
    let cg = coarse_grained_state(rho, m)?;
    Ok(h.mean_energy(rho)? - passive_energy(&cg, h)?)
}

/// Ergotropy of the energy-dephased state.
///
/// Dephasing keeps the mean energy, so this equals `Tr(H rho) - passive_energy(Delta_rho)`,
/// and the optimal unitary for it is a permutation of energy levels.
pub fn incoherent_ergotropy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    let delta = dephase(rho, h)?;
    ergotropy(&delta, h)
}

/// The part of the ergotropy that needs energetic coherence.
pub fn coherent_ergotropy(rho: &DensityMatrix, h: &Hamiltonian) -> Result<f64> {
    Ok(ergotropy(rho, h)? - incoherent_ergotropy(rho, h)?)
}

/// All work quantities for one `(rho, H, M)` instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkReport {
    pub d: usize,
    pub mean_energy: f64,
    pub passive_energy: f64,
    pub ergotropy: f64,
    pub incoherent: f64,
    pub coherent: f64,
    pub observational: Option<f64>,
}

impl WorkReport {
    pub const CSV_HEADER: &'static str = "d,mean,passive,ergotropy,incoherent,coherent,observational";

    /// One CSV data row matching [`WorkReport::CSV_HEADER`]; an absent
    /// observational value leaves the last field empty.
    pub fn csv_row(&self) -> String {
        let obs = self.observational.map(format_float).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.d,
            format_float(self.mean_energy),
            format_float(self.passive_energy),
            format_float(self.ergotropy),
            format_float(self.incoherent),
            format_float(self.coherent),
            obs
        )
    }
}

/// Rounds to 15 significant digits and prints the shortest decimal that
/// round-trips the rounded value. Negative zero prints as `0`.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("valid float");
    if rounded == 0.0 {
        return "0".to_string();
    }
    rounded.to_string()
}

pub fn report(rho: &DensityMatrix, h: &Hamiltonian, m: Option<&Povm>) -> Result<WorkReport> {
    let mean_energy = h.mean_energy(rho)?;
    let passive = passive_energy(rho, h)?;
    let delta = dephase(rho, h)?;
    let incoherent = mean_energy - passive_energy(&delta, h)?;
    let ergotropy = mean_energy - passive;
    let observational = m.map(|m| observational_ergotropy(rho, h, m)).transpose()?;
    Ok(WorkReport {
        d: h.dim(),
        mean_energy,
        passive_energy: passive,
        ergotropy,
        incoherent,
        coherent: ergotropy - incoherent,
        observational,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{post_process, FineGrainedMeasurement, StochasticMatrix};
    use crate::quantum::{random_density, random_hamiltonian, RandomSource};
    use num_complex::Complex64;

    fn plus() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]).unwrap()
    }

    fn qubit_h() -> Hamiltonian {
        Hamiltonian::diagonal(&[0.0, 1.0]).unwrap()
    }

    fn pm_basis() -> FineGrainedMeasurement {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        FineGrainedMeasurement::new(
            ComplexMatrix::from_real_rows(&[vec![h, h], vec![h, -h]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn passive_energy_examples() {
        let rho = DensityMatrix::from_populations(&[0.25, 0.75]).unwrap();
        assert!((passive_energy(&rho, &qubit_h()).unwrap() - 0.25).abs() < 1e-15);
        let h = Hamiltonian::diagonal(&[0.3, 1.0, 2.5]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!((passive_energy(&mixed, &h).unwrap() - 3.8 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn ergotropy_examples() {
        let h = qubit_h();
        let rho = DensityMatrix::from_populations(&[0.25, 0.75]).unwrap();
        assert!((ergotropy(&rho, &h).unwrap() - 0.5).abs() < 1e-15);
        assert!((ergotropy(&plus(), &h).unwrap() - 0.5).abs() < 1e-15);
        let gibbs_like = DensityMatrix::from_populations(&[0.6, 0.3, 0.1]).unwrap();
        let h3 = Hamiltonian::diagonal(&[0.0, 1.0, 2.0]).unwrap();
        assert!(ergotropy(&gibbs_like, &h3).unwrap().abs() < 1e-15);
    }

    #[test]
    fn passive_state_examples() {
        let h = qubit_h();
        let (pi, _) = passive_state(&plus(), &h).unwrap();
        let ground = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(pi.op().sub(&ground).unwrap().max_abs() < 1e-12);

        let rho = DensityMatrix::from_populations(&[0.7, 0.3]).unwrap();
        let (pi, u) = passive_state(&rho, &h).unwrap();
        assert!(pi.op().sub(rho.op()).unwrap().max_abs() < 1e-15);
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((u[(i, j)].norm() - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn passive_state_unitary_maps_state_to_passive() {
        let mut rng = RandomSource::new(5);
        let h = random_hamiltonian(4, &mut rng).unwrap();
        let rho = random_density(4, 3, &mut rng).unwrap();
        let (pi, u) = passive_state(&rho, &h).unwrap();
        assert!(u.is_unitary(1e-10));
        let rotated = rho.op().conjugate_by(&u).unwrap();
        assert!(rotated.sub(pi.op()).unwrap().max_abs() < 1e-9);
        let e_pi = h.mean_energy(&pi).unwrap();
        assert!((e_pi - passive_energy(&rho, &h).unwrap()).abs() < 1e-10);
        assert!(ergotropy(&pi, &h).unwrap().abs() < 1e-10);
    }

    #[test]
    fn observational_qubit_family() {
        let h = qubit_h();
        let rho = DensityMatrix::from_populations(&[0.25, 0.75]).unwrap();
        let p = FineGrainedMeasurement::computational(2).povm();
        let mut last = f64::INFINITY;
        for k in 0..=20 {
            let b = k as f64 / 20.0;
            let d = StochasticMatrix::from_rows(&[vec![b, 1.0], vec![1.0 - b, 0.0]]).unwrap();
            let q = post_process(&p, &d).unwrap();
            let r = observational_ergotropy(&rho, &h, &q).unwrap();
            let closed = (3.0 + b) / 4.0 / (1.0 + b) - 0.25;
            assert!((r - closed).abs() < 1e-14, "b={b}: {r} vs {closed}");
            assert!(r <= last);
            last = r;
        }
    }

    #[test]
    fn observational_can_be_negative() {
        let h = qubit_h();
        let ground = DensityMatrix::from_populations(&[1.0, 0.0]).unwrap();
        let r = observational_ergotropy(&ground, &h, &pm_basis().povm()).unwrap();
        assert!((r + 0.5).abs() < 1e-12);
    }

    #[test]
    fn observational_in_eigenbasis_equals_ergotropy() {
        let mut rng = RandomSource::new(6);
        let h = random_hamiltonian(3, &mut rng).unwrap();
        let rho = random_density(3, 3, &mut rng).unwrap();
        let m = FineGrainedMeasurement::eigenbasis(&rho).povm();
        let r = observational_ergotropy(&rho, &h, &m).unwrap();
        assert!((r - ergotropy(&rho, &h).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn decomposition_examples() {
        let h = qubit_h();
        assert!(incoherent_ergotropy(&plus(), &h).unwrap().abs() < 1e-15);
        assert!((coherent_ergotropy(&plus(), &h).unwrap() - 0.5).abs() < 1e-15);
        let diag = DensityMatrix::from_populations(&[0.1, 0.2, 0.7]).unwrap();
        let h3 = Hamiltonian::diagonal(&[0.0, 0.5, 2.0]).unwrap();
        assert!(
            (incoherent_ergotropy(&diag, &h3).unwrap() - ergotropy(&diag, &h3).unwrap()).abs() < 1e-15
        );
        assert!(coherent_ergotropy(&diag, &h3).unwrap().abs() < 1e-15);
    }

    #[test]
    fn incoherent_equals_energy_basis_observational() {
        let mut rng = RandomSource::new(8);
        for _ in 0..20 {
            let h = random_hamiltonian(4, &mut rng).unwrap();
            let rho = random_density(4, 4, &mut rng).unwrap();
            let e = FineGrainedMeasurement::energy(&h).povm();
            let a = observational_ergotropy(&rho, &h, &e).unwrap();
            let b = incoherent_ergotropy(&rho, &h).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn reports() {
        let h = qubit_h();
        let r = report(&DensityMatrix::from_populations(&[0.25, 0.75]).unwrap(), &h, None).unwrap();
        assert_eq!(r.d, 2);
        assert!((r.mean_energy - 0.75).abs() < 1e-15);
        assert!((r.passive_energy - 0.25).abs() < 1e-15);
        assert!((r.ergotropy - 0.5).abs() < 1e-15);
        assert!((r.incoherent - 0.5).abs() < 1e-15);
        assert!(r.coherent.abs() < 1e-15);
        assert_eq!(r.observational, None);

        let r = report(&plus(), &h, None).unwrap();
        let got = [r.mean_energy, r.passive_energy, r.ergotropy, r.incoherent, r.coherent];
        for (g, e) in got.iter().zip([0.5, 0.0, 0.5, 0.0, 0.5]) {
            assert!((g - e).abs() < 1e-15);
        }

        let rho = DensityMatrix::from_populations(&[0.4, 0.6]).unwrap();
        let eig = FineGrainedMeasurement::eigenbasis(&rho).povm();
        let r = report(&rho, &h, Some(&eig)).unwrap();
        assert!((r.observational.unwrap() - r.ergotropy).abs() < 1e-12);
    }

    #[test]
    fn csv_formatting() {
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333333");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(2.0 / 7.0), "0.285714285714286");
        let r = WorkReport {
            d: 2,
            mean_energy: 0.75,
            passive_energy: 0.25,
            ergotropy: 0.5,
            incoherent: 0.5,
            coherent: 0.0,
            observational: None,
        };
        assert_eq!(r.csv_row(), "2,0.75,0.25,0.5,0.5,0,");
    }

    mod props {
        use super::*;
        use crate::quantum::{haar_unitary, random_column_stochastic};
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn report_invariants(seed in any::<u64>(), d in 1usize..6) {
                let mut rng = RandomSource::new(seed);
                let h = random_hamiltonian(d, &mut rng).unwrap();
                let rank = 1 + (seed as usize) % d;
                let rho = random_density(d, rank, &mut rng).unwrap();
                let r = report(&rho, &h, None).unwrap();
                prop_assert!((r.ergotropy - (r.mean_energy - r.passive_energy)).abs() <= 1e-12);
                prop_assert!((r.ergotropy - r.incoherent - r.coherent).abs() <= 1e-10);
                prop_assert!(r.ergotropy >= -1e-10);
                prop_assert!(r.incoherent >= -1e-10);
                prop_assert!(r.coherent >= -1e-10);
            }

            #[test]
            fn observational_never_exceeds_ergotropy(seed in any::<u64>(), d in 1usize..5, n in 1usize..7) {
                let mut rng = RandomSource::new(seed);
                let h = random_hamiltonian(d, &mut rng).unwrap();
                let rho = random_density(d, d, &mut rng).unwrap();
                let p = FineGrainedMeasurement::haar(d, &mut rng).unwrap().povm();
                let q = post_process(&p, &random_column_stochastic(n, d, &mut rng).unwrap()).unwrap();
                let r = ergotropy(&rho, &h).unwrap();
                let obs = observational_ergotropy(&rho, &h, &q).unwrap();
                prop_assert!(obs <= r + 1e-9);
                // Sanity floor: |Tr(H(rho - sigma))| <= 2 |H|.
                let bound = 2.0 * h.energies().iter().fold(0.0f64, |a, e| a.max(e.abs()));
                prop_assert!(obs >= -bound - 1e-9);
            }

            #[test]
            fn passive_state_is_a_fixed_point(seed in any::<u64>(), d in 1usize..6) {
                let mut rng = RandomSource::new(seed);
                let h = random_hamiltonian(d, &mut rng).unwrap();
                let rho = random_density(d, d, &mut rng).unwrap();
                let (pi, _) = passive_state(&rho, &h).unwrap();
                prop_assert!(ergotropy(&pi, &h).unwrap() <= 1e-10);
            }

            #[test]
            fn passive_energy_bounds_unitary_orbit(seed in any::<u64>(), d in 1usize..5) {
                let mut rng = RandomSource::new(seed);
                let h = random_hamiltonian(d, &mut rng).unwrap();
                let rho = random_density(d, d, &mut rng).unwrap();
                let floor = passive_energy(&rho, &h).unwrap();
                for _ in 0..20 {
                    let u = haar_unitary(d, &mut rng).unwrap();
                    let e = h.op().trace_product(&rho.op().conjugate_by(&u).unwrap()).unwrap().re;
                    prop_assert!(floor <= e + 1e-9);
                }
            }
        }
    }
}
