//! Samples from each set-valued family, with their expectations and selections.

use randset::convex_sets::{DualDirection, Vector};
use randset::mixing::{Law, ScalarDriver};
use randset::randsets::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let uniform = ScalarDriver::iid(Law::Uniform { low: -1.0, high: 1.0 }, 0)?;
    let radii = ScalarDriver::iid(Law::Uniform { low: 0.5, high: 1.5 }, 0)?;
    let families = [
        SetProcessSpec::Segment(uniform.clone()),
        SetProcessSpec::TwoPoint(uniform),
        SetProcessSpec::RandomBall(radii),
        SetProcessSpec::NeedleHalo,
        SetProcessSpec::random_ray_fair(),
    ];
    for spec in &families {
        println!("== {}", spec.name());
        for (k, set) in spec.sets(42, 3).iter().enumerate() {
            println!("X_{} = {}", k + 1, set.to_string().trim_end().replace('\n', " ∪ "));
        }
        if let Ok(e) = expectation(spec) {
            println!("E X = {}", e.claimed.to_string().trim_end().replace('\n', " ∪ "));
        }
    }

    let ray = SetProcessSpec::random_ray_fair();
    for n in [1, 2, 10] {
        let x = selection(&ray, &Vector::d2(2.0, 0.0), n, 42)?;
        println!("ray selection at n={n}: {:?}", x.coords());
    }
    let up = DualDirection::new(Vector::d2(0.0, 1.0))?;
    println!("support of halo sets upward: {:?}", support_process(&SetProcessSpec::NeedleHalo, &up, 1..=4, 42));
    println!("(iii) for the ray family upward: {:?}", condition_iii_series(&ray, &up, 50));
    Ok(())
}
