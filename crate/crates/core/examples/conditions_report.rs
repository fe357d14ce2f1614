//! Checks the mixing, selection and support-moment conditions for two families.

use randset::convex_sets::{spread_directions, Vector};
use randset::randsets::SetProcessSpec;
use randset::slln_lab::theorem_conditions_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dirs = spread_directions(2, 8);
    for spec in [SetProcessSpec::NeedleHalo, SetProcessSpec::random_ray_fair()] {
        let report = theorem_conditions_report(&spec, &[Vector::d2(1.0, 0.0)], &dirs, 200)?;
        println!("{}", serde_json::to_string_pretty(&report.verdict)?);
        for d in &report.condition_iii {
            println!("  x* = {:?}: {}", d.x_star.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>(), d.status);
        }
    }
    Ok(())
}
