//! Writes a trajectory CSV and its log-log SVG. Usage: plot_trajectory [OUT_DIR]

use randset::cli::render_svg;
use randset::mixing::{geometric_checkpoints, Law, ScalarDriver};
use randset::randsets::SetProcessSpec;
use randset::slln_lab::{run_hausdorff_slln, trajectories_to_csv, Target};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/plot_example".into());
    std::fs::create_dir_all(&out)?;
    let spec = SetProcessSpec::RandomBall(ScalarDriver::iid(Law::Uniform { low: 0.5, high: 1.5 }, 0)?);
    let cps = geometric_checkpoints(10, 100_000, 4);
    let seeds: Vec<u64> = (1..=10).collect();
    let trajs = run_hausdorff_slln(&spec, Target::A, 100_000, &cps, &seeds)?;
    let csv = trajectories_to_csv(&trajs);
    let svg = render_svg(&csv)?;
    std::fs::write(format!("{out}/trajectory.csv"), &csv)?;
    std::fs::write(format!("{out}/plot.svg"), svg)?;
    println!("wrote {out}/trajectory.csv and {out}/plot.svg");
    Ok(())
}
