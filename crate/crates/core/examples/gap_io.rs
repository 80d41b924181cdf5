// Writes a structure and its differentials as data files, reads them back
// and validates them against a local recomputation.

use std::error::Error;

use garside_homology::complex::{CellComplex, Resolution};
use garside_homology::gapio::{export_dir, import_dir, parse, validate_data, ImportOptions};
use garside_homology::garside::{build_from_data, dual_braid_data};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("garside-gap-io-{}", std::process::id()));
    let d = dual_braid_data(4)?;
    let g = build_from_data("DA3", &d.atoms, &d.simples, &d.lengths)?;
    let mut res = Resolution::new(&g);
    res.compute_through(res.top_degree())?;
    let summary = export_dir(&res, &dir, "DA3", res.top_degree())?;
    for f in &summary.files {
        println!("wrote {}", f.display());
    }

    let text = std::fs::read_to_string(dir.join("atomsDA3.gap"))?;
    println!("{}", text.trim_end());
    println!("parsed variables: {:?}", parse("atomsDA3.gap", &text)?.entries.keys().collect::<Vec<_>>());

    let data = import_dir(&dir, "DA3", &ImportOptions { differentials: true, max_degree: None })?;
    let h = data.build()?;
    for check in validate_data(&data, &CellComplex::new(&h)).checks {
        println!("{check}");
    }
    let back = data.resolution(&h)?;
    for degree in 2..=back.top_degree() {
        assert_eq!(back.differentials(degree)?, res.differentials(degree)?);
    }
    println!("imported differentials agree with the computed ones");
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
