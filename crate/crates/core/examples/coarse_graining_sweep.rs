//! Blurring the energy measurement of a qubit step by step.
//!
//! `D(b) = [[b, 1], [1 - b, 0]]` reports the ground outcome faithfully only
//! with probability `b`; at `b = 1` both outcomes collapse into one.

use obsergo::cli::StochasticFamily;
use obsergo::ergotropy::observational_ergotropy;
use obsergo::measurement::post_process;
use obsergo::{DensityMatrix, FineGrainedMeasurement, Hamiltonian, Result};

pub fn run_example() -> Result<Vec<(f64, f64)>> {
    let h = Hamiltonian::diagonal(&[0.0, 1.0])?;
    let rho = DensityMatrix::from_populations(&[0.25, 0.75])?;
    let energy = FineGrainedMeasurement::energy(&h).povm();

    let mut rows = Vec::new();
    println!("b,observational,closed_form");
    for k in 0..=10 {
        let b = k as f64 / 10.0;
        let d = StochasticFamily::GroundMerge.matrix(2, b)?;
        let r = observational_ergotropy(&rho, &h, &post_process(&energy, &d)?)?;
        let exact = (3.0 + b) / 4.0 / (1.0 + b) - 0.25;
        println!("{b:.1},{r:.12},{exact:.12}");
        rows.push((b, r));
    }
    Ok(rows)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
