//! Random rays: the averaged cones open up and never return to the needle.

use randset::convex_sets::Vector;
use randset::randsets::SetProcessSpec;
use randset::slln_lab::{cone_tracking, run_km_diagnostics, KmOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SetProcessSpec::random_ray_fair();
    for seed in 0..3 {
        let t = cone_tracking(&spec, 100, seed)?;
        let c = t.require_certificate()?;
        println!(
            "seed {seed}: sector [{:.3}, {:.3}], fixed from n0={} with witness ({:.3}, {:.3}) at distance {:.3}",
            t.alpha_minus, t.alpha_plus, c.n0, c.witness_x, c.witness_y, c.witness_distance
        );
    }

    let probes = vec![Vector::d2(0.0, 0.0), Vector::d2(1.0, 0.0), Vector::d2(3.0, 0.0)];
    let opts = KmOptions::new(probes.clone(), 5.0, vec![1, 10, 100, 1000], 1);
    for spec in [SetProcessSpec::NeedleHalo, spec] {
        let r = run_km_diagnostics(&spec, &opts)?;
        println!("{}: excess {:?} -> {:?}", r.family, r.excess, r.verdict);
    }
    Ok(())
}
