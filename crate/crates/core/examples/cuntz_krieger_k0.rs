//! K0 of Cuntz-Krieger data: cokernels via Smith normal form.

use nclocal::ck_k0::{build_lp, epsilon, k0_group, AbelianGroupInv, EpsilonData};
use nclocal::intmat::{smith_normal_form, IntMatrix};
use num_bigint::BigInt;

fn main() -> nclocal::Result<()> {
    let m: IntMatrix = "[[2,4,4],[-6,6,12],[10,-4,-16]]".parse()?;
    let snf = smith_normal_form(&m);
    println!(
        "SNF of {m}: {:?}",
        snf.diagonal()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
    );
    println!("coker = {}", AbelianGroupInv::cokernel(&m));

    let l3 = build_lp(0, 3)?;
    println!("L_3 = {l3}");
    for n in 1..=4 {
        let d = epsilon(3, n, EpsilonData::Trace(BigInt::from(0)))?;
        let g = k0_group(&d);
        println!("  n={n}: K0 = {g} (order {})", g.order());
    }

    for alpha in [1, -1, 0] {
        let groups: Vec<String> = (1..=3)
            .map(|n| epsilon(5, n, EpsilonData::Alpha(alpha)).map(|d| k0_group(&d).to_string()))
            .collect::<nclocal::Result<_>>()?;
        println!("alpha={alpha:>2}: {}", groups.join(", "));
    }
    Ok(())
}
