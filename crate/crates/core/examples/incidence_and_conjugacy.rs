//! Incidence matrices of periods, GL(2,Z) conjugacy and the trace bridge.

use nclocal::functor::lemma3_bridge;
use nclocal::intmat::conjugacy_test;
use nclocal::quadratic_cf::incidence_matrix;

fn main() -> nclocal::Result<()> {
    let a = incidence_matrix(&[2u64, 1])?;
    let b = incidence_matrix(&[1u64, 2])?;
    println!("A = {a}, det {}, tr {}", a.det()?, a.trace()?);
    println!("A' = {b}");
    println!("A^5 = {}", a.pow(5)?);

    let verdict = conjugacy_test(&a, &b, 10)?;
    match verdict.witness() {
        Some(w) => println!("conjugate via B = {w}"),
        None => println!("{verdict:?}"),
    }

    for (left, right, p) in [
        (vec![2, 1], vec![1, 2], 5),
        (vec![1], vec![2], 3),
        (vec![1, 1, 2], vec![2, 1, 1], 7),
    ] {
        let r = lemma3_bridge(&left, &right, p)?;
        println!(
            "{left:?} vs {right:?} at p={p}: conjugate={} chain={:?} L_p={}",
            r.verdict.is_conjugate(),
            r.chain_holds,
            r.lp.map(|m| m.to_string()).unwrap_or_else(|| "-".into())
        );
    }
    Ok(())
}
