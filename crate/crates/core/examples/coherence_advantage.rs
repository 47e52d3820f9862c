//! A coherent state holds work that no energy-basis measurement can see.
//!
//! `|+>` has zero incoherent ergotropy. Measuring in the energy basis
//! gives an estimate with nothing to extract, while measuring in the
//! `{|+>, |->}` basis recovers the full ergotropy.

use obsergo::ergotropy::{coherent_ergotropy, ergotropy, incoherent_ergotropy, observational_ergotropy};
use obsergo::numerics::ComplexMatrix;
use obsergo::{Complex64, DensityMatrix, FineGrainedMeasurement, Hamiltonian, Result};

pub fn run_example() -> Result<(f64, f64)> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = Hamiltonian::diagonal(&[0.0, 1.0])?;
    let plus = DensityMatrix::pure(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)])?;

    println!("R     = {:.6}", ergotropy(&plus, &h)?);
    println!("R_inc = {:.6}", incoherent_ergotropy(&plus, &h)?);
    println!("R_coh = {:.6}", coherent_ergotropy(&plus, &h)?);

    let energy = FineGrainedMeasurement::energy(&h).povm();
    let x_basis = ComplexMatrix::from_real_rows(&[vec![s, s], vec![s, -s]])?;
    let x = FineGrainedMeasurement::new(x_basis)?.povm();

    let r_energy = observational_ergotropy(&plus, &h, &energy)?;
    let r_x = observational_ergotropy(&plus, &h, &x)?;
    println!("observed in energy basis: {r_energy:.6}");
    println!("observed in +/- basis:    {r_x:.6}");
    Ok((r_energy, r_x))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
