// Builds Garside monoids from presentations and from permutation data, and
// multiplies a few elements in normal form.

use std::error::Error;

use garside_homology::garside::{build_from_data, build_from_presentation, dual_braid_data, Presentation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in [Presentation::g12(), Presentation::g22(), Presentation::dihedral(6)?] {
        let g = build_from_presentation(&p)?;
        println!("{}: {} simples, delta = {}", g.name(), g.num_simples(), g.simple_name(g.delta()));
    }

    let g = build_from_presentation(&Presentation::g12())?;
    let x = g.normal_form(&[0, 1, 2, 0, 1]);
    let y = g.normal_form(&[2, 2]);
    let xy = g.multiply(&x, &y);
    println!("x1x2x3x1x2 * x3x3 = {} (length {})", xy.display(&g), xy.length());
    let (a, b) = (g.atom(0), g.atom(1));
    println!("lcm(x1, x2) = {}", g.simple_name(g.right_lcm(a, b)));

    let d = dual_braid_data(4)?;
    let dual = build_from_data("dual A3", &d.atoms, &d.simples, &d.lengths)?;
    println!("dual A3: {} atoms, {} simples (the Catalan number 14)", dual.num_atoms(), dual.num_simples());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
