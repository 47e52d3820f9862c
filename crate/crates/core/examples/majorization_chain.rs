//! Coarse graining mixes the estimate: the spectrum of the fine-grained
//! estimate majorizes that of any post-processed one, and passive energy
//! can only rise along the way.

use obsergo::ergotropy::sorted_energy;
use obsergo::majorization::{lemma1_matrix, majorizes, MAJORIZATION_TOL};
use obsergo::measurement::{coarse_grained_state, post_process};
use obsergo::quantum::{random_column_stochastic, random_density, random_hamiltonian};
use obsergo::{FineGrainedMeasurement, ProbVector, RandomSource, Result};

pub fn run_example() -> Result<bool> {
    let mut rng = RandomSource::new(11);
    let d = 4;
    let h = random_hamiltonian(d, &mut rng)?;
    let rho = random_density(d, d, &mut rng)?;
    let p = FineGrainedMeasurement::haar(d, &mut rng)?;
    let post = random_column_stochastic(3, d, &mut rng)?;

    let fine = coarse_grained_state(&rho, &p.povm())?;
    let coarse = coarse_grained_state(&rho, &post_process(&p.povm(), &post)?)?;
    let lf = ProbVector::new(fine.spectrum_desc())?;
    let lc = ProbVector::new(coarse.spectrum_desc())?;
    println!("fine spectrum   {:?}", lf.as_slice());
    println!("coarse spectrum {:?}", lc.as_slice());

    let b = lemma1_matrix(&p, &post)?;
    println!("B bistochastic: {}", b.is_bistochastic());
    println!("B p = {:?}", b.apply(&p.probabilities(&rho)?)?);

    let chain = majorizes(&lf, &lc, MAJORIZATION_TOL)?;
    println!("fine majorizes coarse: {chain}");
    println!(
        "passive energies: {:.6} <= {:.6}",
        sorted_energy(h.energies(), lf.as_slice()),
        sorted_energy(h.energies(), lc.as_slice())
    );
    Ok(chain)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
