// Shifting the matrix by cI or picking a different orthonormal basis of the
// eigenspace leaves both sides unchanged.

use eigenid::identity::lhs_from_block;
use eigenid::{
    haar_unitary, hermitian_with_spectrum, DenseMatrix, IndexSet, SpectralAnalysis, SpectrumSpec,
    Tolerances,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tols = Tolerances::default();
    let a = hermitian_with_spectrum(&"1:2,3:3".parse::<SpectrumSpec>()?, 5);
    let base = SpectralAnalysis::new(&a, &tols)?;
    let index = 2;
    let subset: IndexSet = "1,3,4".parse()?;
    let ev = base.evaluate(index, &subset)?;
    println!("c = 0:     lhs = {:.12}  rhs = {:.12}", ev.lhs, ev.rhs);

    for c in [-4.0, 2.5, 100.0] {
        let shifted = SpectralAnalysis::new(&a.shifted(c), &tols)?.evaluate(index, &subset)?;
        println!(
            "c = {c:<6} lhs = {:.12}  rhs = {:.12}",
            shifted.lhs, shifted.rhs
        );
        if (shifted.rhs - ev.rhs).abs() > 1e-9 * ev.rhs {
            return Err(format!("shift by {c} moved the right-hand side").into());
        }
    }

    // Rotate the eigenspace basis by a random 3x3 unitary.
    let block = base.eigenvector_block(index)?;
    for seed in 0..3 {
        let w: DenseMatrix = haar_unitary(block.cols(), seed);
        let rotated = &block * &w;
        let lhs = lhs_from_block(&rotated, &subset)?;
        println!("basis {seed}: lhs = {lhs:.12}");
        if (lhs - ev.lhs).abs() > 1e-10 {
            return Err("lhs depends on the basis".into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
