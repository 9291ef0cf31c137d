// For simple eigenvalues the identity reduces to squared eigenvector
// components computed from eigenvalues of the matrix and its minors alone.

use eigenid::{eigh, random_hermitian, SpectralAnalysis, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = random_hermitian(5, 7);
    let tols = Tolerances::default();
    let analysis = SpectralAnalysis::new(&a, &tols)?;
    let direct = eigh(&a, tols.eig_tol, tols.max_sweeps)?;

    println!(
        "{:>3} {:>3} {:>14} {:>14}",
        "i", "k", "|v_ik|^2", "from minors"
    );
    let mut worst: f64 = 0.0;
    for i in 1..=a.n() {
        for k in 1..=a.n() {
            let from_minors = analysis.corollary_component(i, k)?;
            let component = direct.vectors[(k - 1, i - 1)].norm_sqr();
            println!("{i:>3} {k:>3} {component:>14.10} {from_minors:>14.10}");
            worst = worst.max((component - from_minors).abs());
        }
    }
    println!("max |difference| = {worst:.2e}");
    if worst > 1e-9 {
        return Err("components disagree".into());
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
