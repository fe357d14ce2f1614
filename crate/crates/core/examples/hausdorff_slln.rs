//! Hausdorff distance between averaged segments and their expectation.

use randset::mixing::{geometric_checkpoints, DriverFamily, ScalarDriver};
use randset::randsets::SetProcessSpec;
use randset::slln_lab::{run_hausdorff_slln, Target};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let driver = ScalarDriver::new(
        DriverFamily::FiniteMarkov {
            p: vec![vec![0.9, 0.1], vec![0.1, 0.9]],
            pi: vec![0.5, 0.5],
            emissions: vec![-1.0, 1.0],
        },
        0,
    )?;
    let n_max = 100_000;
    let cps = geometric_checkpoints(10, n_max, 2);
    let seeds = [1, 2, 3, 4];
    for spec in [SetProcessSpec::Segment(driver.clone()), SetProcessSpec::TwoPoint(driver)] {
        println!("{}", spec.name());
        let trajs = run_hausdorff_slln(&spec, Target::CoA, n_max, &cps, &seeds)?;
        for t in trajs.iter().filter(|t| t.metric == "hausdorff") {
            let row: Vec<String> = t.values.iter().map(|v| format!("{v:.1e}")).collect();
            println!("  seed {}: {}", t.seed, row.join(" "));
        }
    }
    println!("checkpoints: {cps:?}");
    Ok(())
}
