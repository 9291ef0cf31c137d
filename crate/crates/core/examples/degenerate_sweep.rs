// Sweep every row subset of a repeated eigenvalue on a random matrix with a
// prescribed spectrum, and check that the squared minors sum to one.

use eigenid::{hermitian_with_spectrum, SpectralAnalysis, SpectrumSpec, Tolerances};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec: SpectrumSpec = "-1:1,0.5:3,2:2".parse()?;
    let a = hermitian_with_spectrum(&spec, 42);
    let analysis = SpectralAnalysis::new(&a, &Tolerances::default())?;
    let spectrum = analysis.spectrum();
    println!(
        "n = {}, {} clusters, gap margin {:.3e}",
        a.n(),
        spectrum.len(),
        spectrum.gap_margin()
    );

    let index = 2;
    let cluster = spectrum.cluster(index)?;
    println!(
        "cluster {index}: lambda = {:.12}, multiplicity {}",
        cluster.value, cluster.multiplicity
    );

    let mut worst: f64 = 0.0;
    let mut total = 0.0;
    for subset in eigenid::enumerate_minors(a.n(), cluster.multiplicity) {
        let ev = analysis.evaluate(index, &subset)?;
        println!(
            "  S = {:<9} lhs = {:.10}  rhs = {:.10}  rel = {:.1e}",
            subset.to_string(),
            ev.lhs,
            ev.rhs,
            ev.rel_err
        );
        worst = worst.max(ev.rel_err);
        total += ev.lhs;
    }
    println!("max rel_err = {worst:.2e}, sum of |det|^2 = {total:.15}");
    if worst > 1e-8 || (total - 1.0).abs() > 1e-10 {
        return Err("identity sweep out of tolerance".into());
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
