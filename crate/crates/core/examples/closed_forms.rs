// Both sides of the identity on small matrices whose eigenvectors are known
// by hand.

use eigenid::{DenseMatrix, HermitianMatrix, IndexSet, SpectralAnalysis, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tols = Tolerances::default();
    let swap = DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let cases = [
        ("swap", HermitianMatrix::new(swap, tols.hermitian_tol)?),
        ("diag(1,1,2)", HermitianMatrix::diagonal(&[1.0, 1.0, 2.0])),
        // I - J/3: eigenvalue 1 twice, 0 once.
        (
            "I - J/3",
            HermitianMatrix::new(
                DenseMatrix::from_fn(3, 3, |r, c| {
                    let j = -1.0 / 3.0;
                    (if r == c { 1.0 + j } else { j }).into()
                }),
                tols.hermitian_tol,
            )?,
        ),
    ];

    for (name, a) in &cases {
        let analysis = SpectralAnalysis::new(a, &tols)?;
        println!("{name}");
        for (i, cluster) in analysis.spectrum().clusters().iter().enumerate() {
            let index = i + 1;
            for subset in eigenid::enumerate_minors(a.n(), cluster.multiplicity) {
                let ev = analysis.evaluate(index, &subset)?;
                println!(
                    "  lambda = {:+.3} (x{})  S = {:<7} lhs = {:.6}  rhs = {:.6}",
                    cluster.value,
                    cluster.multiplicity,
                    subset.to_string(),
                    ev.lhs,
                    ev.rhs
                );
                if ev.rel_err > 1e-10 {
                    return Err(format!("{name}: rel_err {:e} at S = {subset}", ev.rel_err).into());
                }
            }
        }
    }

    // A subset that misses the whole eigenspace gives zero on both sides.
    let d = HermitianMatrix::diagonal(&[1.0, 1.0, 2.0]);
    let ev = eigenid::evaluate_identity(&d, 1, &"1,3".parse::<IndexSet>()?, &tols)?;
    println!(
        "diag(1,1,2), S = {{1,3}}: lhs = {}, rhs = {}",
        ev.lhs, ev.rhs
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
