macro_rules! example_test {
    ($module:ident, $test:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example_test!(closed_forms, closed_forms_example_runs, "closed_forms.rs");
example_test!(
    degenerate_sweep,
    degenerate_sweep_example_runs,
    "degenerate_sweep.rs"
);
example_test!(
    simple_eigenvalues,
    simple_eigenvalues_example_runs,
    "simple_eigenvalues.rs"
);
example_test!(
    unitary_blocks,
    unitary_blocks_example_runs,
    "unitary_blocks.rs"
);
example_test!(invariances, invariances_example_runs, "invariances.rs");
example_test!(check_report, check_report_example_runs, "check_report.rs");
