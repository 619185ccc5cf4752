//! Every example runs to completion at a reduced size.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(single_step);
example!(complex_convergence);
example!(real_convergence);
example!(normal_matrix);
example!(block_structure);
example!(pivot_strategies);
example!(annihilator_norms);
example!(eigenvalue_oracle);
example!(trace_export);
example!(cli_usage);

#[test]
fn examples_run() {
    single_step::run().unwrap();
    complex_convergence::run(8, 2).unwrap();
    real_convergence::run(10, 200).unwrap();
    normal_matrix::run(20).unwrap();
    block_structure::run().unwrap();
    pivot_strategies::run().unwrap();
    annihilator_norms::run(5).unwrap();
    eigenvalue_oracle::run().unwrap();
    let dir = tempfile::tempdir().unwrap();
    trace_export::run(&dir.path().join("trace")).unwrap();
    cli_usage::run(&dir.path().join("cli")).unwrap();
}
