// Enumerates the cells of the order complex for a few monoids.

use std::error::Error;

use garside_homology::complex::{euler_characteristic, CellComplex};
use garside_homology::garside::{build_from_data, build_from_presentation, classical_braid_data, dual_braid_data, Presentation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = build_from_presentation(&Presentation::g22())?;
    let cells = CellComplex::new(&g);
    for d in 0..=cells.top_degree() {
        let names: Vec<String> = cells.cells(d).iter().map(|c| c.display(&g).to_string()).collect();
        println!("G22 degree {d}: {}", names.join(" "));
    }

    // the classical and dual monoids of the same braid group give different complexes
    for (label, data) in [("classical A4", classical_braid_data(5)?), ("dual A4", dual_braid_data(5)?)] {
        let g = build_from_data(label, &data.atoms, &data.simples, &data.lengths)?;
        let counts = CellComplex::new(&g).counts();
        println!("{label}: counts {counts:?}, euler characteristic {}", euler_characteristic(&counts));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
