//! Exact averages of needle-halo sets and the shrinking halo around the needle.

use randset::randsets::SetProcessSpec;
use randset::slln_lab::{exact_cell_expansion, halo_certificate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SetProcessSpec::NeedleHalo;
    println!(" n  cells  A⊂S_n  S_n⊂halo  max offset   r_n");
    for n in 1..=10 {
        let c = halo_certificate(&spec, n, 3)?;
        println!(
            "{n:>2} {:>6}  {:>5}  {:>8}  {:.6}  {:.6}",
            c.cells_before_dedup, c.a_subset_sn, c.sn_in_halo, c.max_offset, c.r_n
        );
    }
    let small = exact_cell_expansion(&spec, 2, 3)?;
    println!("S_2 =\n{}", small.sets);
    Ok(())
}
