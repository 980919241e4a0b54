//! Arithmetic in F_{p^n} and reduction of rational curves.

use std::sync::Arc;

use nclocal::elliptic::{reduce_mod_p, RationalModel};
use nclocal::ffield::{find_irreducible, ExtField};

fn main() -> nclocal::Result<()> {
    let f = Arc::new(ExtField::new(3, 2)?);
    println!("F_9 modulus (low degree first): {:?}", f.modulus());
    let g = f.element(vec![1, 1]);
    for k in 0..9u128 {
        let x = g.pow(k);
        println!(
            "  g^{k} = {} square={}",
            f.format(x.coeffs()),
            x.is_square()
        );
    }
    println!("irreducible cubic over F_5: {:?}", find_irreducible(5, 3)?);

    let e: RationalModel = "[0,0,0,-1/4,3/2]".parse()?;
    for p in [5, 7, 11] {
        let r = reduce_mod_p(&e, p)?;
        println!(
            "{e} mod {p} = {r}, j = {:?}",
            r.j_invariant().ok().and_then(|j| j.as_base())
        );
    }
    Ok(())
}
