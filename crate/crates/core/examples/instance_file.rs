//! Builds an instance document in memory, loads it back and reports on it.
//! The same document can be saved and passed to `obsergo report`.

use obsergo::cli::{Instance, InstanceFile, NamedMeasurement, NamedStochastic};
use obsergo::ergotropy::report;
use obsergo::measurement::post_process;
use obsergo::numerics::ComplexMatrix;
use obsergo::Result;

pub fn run_example() -> Result<f64> {
    let file = InstanceFile {
        dimension: 2,
        hamiltonian: ComplexMatrix::from_real_diag(&[0.0, 1.0]),
        state: ComplexMatrix::from_real_rows(&[vec![0.25, 0.0], vec![0.0, 0.75]])?,
        measurements: vec![NamedMeasurement {
            name: "energy".into(),
            elements: vec![
                ComplexMatrix::from_real_diag(&[1.0, 0.0]),
                ComplexMatrix::from_real_diag(&[0.0, 1.0]),
            ],
        }],
        post_processing: vec![NamedStochastic {
            name: "ground-merge-half".into(),
            matrix: vec![vec![0.5, 1.0], vec![0.5, 0.0]],
        }],
    };
    let text = serde_json::to_string_pretty(&file).expect("instance serializes");
    println!("{text}");

    let inst = Instance::from_json(&text, "<memory>").expect("valid instance");
    let q = post_process(inst.measurement("energy").unwrap(), inst.post_processing("ground-merge-half").unwrap())?;
    let r = report(&inst.state, &inst.hamiltonian, Some(&q))?;
    println!("{}", serde_json::to_string(&r).unwrap());
    Ok(r.observational.unwrap_or(f64::NAN))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
