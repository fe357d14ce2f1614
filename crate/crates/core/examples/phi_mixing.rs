//! Mixing coefficients of a sticky two-state chain and the summability check.

use randset::mixing::*;

fn main() -> Result<(), MixingError> {
    let p = vec![vec![0.9, 0.1], vec![0.1, 0.9]];
    let pi = vec![0.5, 0.5];

    for n in [1, 2, 5, 10] {
        let exact = phi_exact_markov(&p, &pi, n)?;
        let lower = phi_brute_force(&p, &pi, n, 2, 2)?;
        println!("phi({n:>2}) = {exact:.6}   enumerated lower bound {lower:.6}");
    }

    let profile = PhiProfile::exact_markov(&p, &pi, 100)?;
    let report = condition_i_report(&profile)?;
    println!(
        "sum sqrt(phi) up to 100: {:.4}, verdict {:?}, ratio {:?}",
        report.partial_sum, report.verdict, report.ratio
    );
    println!("every 3rd term: {:.4}", profile.subsequence_sqrt_sum(3));

    // A 2-dependent average decouples after two steps.
    let (wp, wpi, _) = m_dependent_window_chain(2, &[-1.0, 1.0], &[0.5, 0.5])?;
    for n in 1..=4 {
        println!("window chain phi({n}) >= {:.4}", phi_brute_force(&wp, &wpi, n, 1, 1)?);
    }

    let driver = ScalarDriver::new(DriverFamily::FiniteMarkov { p, pi, emissions: vec![-1.0, 1.0] }, 7)?;
    let cps = geometric_checkpoints(10, 1_000_000, 1);
    for (n, err) in scalar_slln_trajectory(&driver, 1_000_000, &cps)? {
        println!("n = {n:>8}  |mean - mu| = {err:.2e}");
    }
    Ok(())
}
