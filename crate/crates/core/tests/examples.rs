//! Every example runs to completion.

macro_rules! example {
    ($test:ident, $module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect($file);
        }
    };
}

example!(monoid_example_runs, monoid, "monoid.rs");
example!(cells_example_runs, cells, "cells.rs");
example!(differential_example_runs, differential, "differential.rs");
example!(salvetti_example_runs, salvetti, "salvetti.rs");
example!(homology_example_runs, homology, "homology.rs");
example!(milnor_example_runs, milnor, "milnor.rs");
example!(gap_io_example_runs, gap_io, "gap_io.rs");
example!(engine_example_runs, engine, "engine.rs");
