// Complementary diagonal blocks of a unitary matrix have equal |det|^2.

use eigenid::{haar_unitary, verify_lemma1, BlockPartition};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 6;
    let u = haar_unitary(n, 2024);
    println!(
        "unitarity defect of U: {:.2e}",
        eigenid::unitarity_defect(&u)?
    );
    for r in 0..=n {
        let (p11, p22) = verify_lemma1(&u, r, 1e-10)?;
        println!("r = {r}: |det P11|^2 = {p11:.12}  |det P22|^2 = {p22:.12}");
        if (p11 - p22).abs() > 1e-10 {
            return Err(format!("blocks differ at r = {r}").into());
        }
    }

    let blocks = BlockPartition::new(u, 2)?;
    println!(
        "split 2: P11 {}x{}, P12 {}x{}, P22 {}x{}",
        blocks.p11().rows(),
        blocks.p11().cols(),
        blocks.p12().rows(),
        blocks.p12().cols(),
        blocks.p22().rows(),
        blocks.p22().cols()
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
