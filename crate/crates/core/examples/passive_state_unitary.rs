//! The passive state of a random qutrit and the unitary that reaches it,
//! checked against a brute-force search over random unitaries.

use obsergo::ergotropy::{passive_energy, passive_state};
use obsergo::quantum::{haar_unitary, random_density, random_hamiltonian};
use obsergo::numerics::ComplexMatrix;
use obsergo::{DensityMatrix, Hamiltonian, RandomSource, Result};

fn energy_after(h: &Hamiltonian, rho: &DensityMatrix, u: &ComplexMatrix) -> Result<f64> {
    Ok(h.op().trace_product(&rho.op().conjugate_by(u)?)?.re)
}

pub fn run_example() -> Result<(f64, f64)> {
    let mut rng = RandomSource::new(7);
    let h = random_hamiltonian(3, &mut rng)?;
    let rho = random_density(3, 3, &mut rng)?;

    let (pi, u) = passive_state(&rho, &h)?;
    let e_pass = passive_energy(&rho, &h)?;
    let reached = energy_after(&h, &rho, &u)?;
    println!("passive energy        {e_pass:.12}");
    println!("energy of U rho U^dag {reached:.12}");
    println!("energy of passive     {:.12}", h.op().trace_product(pi.op())?.re);

    let mut best = f64::INFINITY;
    for _ in 0..2000 {
        let v = haar_unitary(3, &mut rng)?;
        best = best.min(energy_after(&h, &rho, &v)?);
    }
    println!("best of 2000 random   {best:.12}");
    Ok((e_pass, best))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
