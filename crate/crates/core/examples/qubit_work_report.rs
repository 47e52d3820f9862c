//! Work quantities for a diagonal qubit with its excited level overpopulated.

use obsergo::ergotropy::{passive_state, report, WorkReport};
use obsergo::{DensityMatrix, Hamiltonian, Result};

pub fn run_example() -> Result<WorkReport> {
    let h = Hamiltonian::diagonal(&[0.0, 1.0])?;
    let rho = DensityMatrix::from_populations(&[0.25, 0.75])?;

    let r = report(&rho, &h, None)?;
    println!("{}", WorkReport::CSV_HEADER);
    println!("{}", r.csv_row());

    // The passive state swaps the populations; U is the swap up to phases.
    let (pi, u) = passive_state(&rho, &h)?;
    let pops: Vec<f64> = pi.op().diagonal().iter().map(|z| z.re).collect();
    println!("passive populations: {pops:?}");
    println!("|U_01| = {:.3}", u[(0, 1)].norm());
    Ok(r)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
