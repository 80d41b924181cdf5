// A journaled parallel run that is interrupted and then resumed.

use std::error::Error;

use garside_homology::complex::Resolution;
use garside_homology::engine::{run_degree, run_through, store_digest, EngineError, RunOptions};
use garside_homology::garside::{build_from_presentation, Presentation};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = std::env::temp_dir().join(format!("garside-engine-{}", std::process::id()));
    let g = build_from_presentation(&Presentation::type_a(4)?)?;

    let mut reference = Resolution::new(&g);
    run_through(&mut reference, 3, &RunOptions { workers: 1, ..RunOptions::default() })?;
    let expected = store_digest(&reference, 3)?;

    let mut res = Resolution::new(&g);
    let opts = RunOptions { journal_dir: Some(dir.clone()), ..RunOptions::default() };
    run_through(&mut res, 2, &opts)?;
    let killed = RunOptions { stop_after: Some(2), journal_dir: Some(dir.clone()), ..RunOptions::default() };
    match run_degree(&mut res, 3, &killed) {
        Err(EngineError::Interrupted { written }) => println!("interrupted after {written} records"),
        other => println!("unexpected: {other:?}"),
    }

    let mut resumed = Resolution::new(&g);
    run_through(&mut resumed, 2, &opts)?;
    let report = run_degree(&mut resumed, 3, &opts)?;
    println!(
        "degree 3: {} cells, {} from the journal, {} computed",
        report.total, report.resumed, report.computed
    );
    println!("digest {} (matches a single-threaded run: {})", report.digest, report.digest == expected);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
