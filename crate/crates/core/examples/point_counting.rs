//! Point counts, Frobenius traces, reduction types and group structure.

use nclocal::elliptic::{
    classify_reduction, count_nonsingular, count_points, group_structure,
    point_counts_via_recurrence, reduce_mod_p, trace_of_frobenius, RationalModel,
};

fn main() -> nclocal::Result<()> {
    let e: RationalModel = "[0,0,0,-1,0]".parse()?;
    println!("E: {e}  disc {}  j {}", e.discriminant(), e.j_invariant()?);
    for p in [2u64, 3, 5, 7, 11, 13] {
        let r = reduce_mod_p(&e, p)?;
        let kind = classify_reduction(&r)?;
        if !kind.is_good() {
            println!(
                "p={p:>2}: {:?}, #E_ns(F_p) = {}",
                kind.kind,
                count_nonsingular(&r, 1)?
            );
            continue;
        }
        let a = trace_of_frobenius(&r)?;
        let via: Vec<String> = point_counts_via_recurrence(a, p, 3)
            .iter()
            .map(|n| n.to_string())
            .collect();
        let brute: Vec<String> = (1..=3)
            .map(|n| count_points(&r, n).map(|c| c.to_string()))
            .collect::<Result<_, _>>()?;
        println!(
            "p={p:>2}: a_p={a:>2}  N_n {} (brute {})  E(F_p) = {}",
            via.join(","),
            brute.join(","),
            group_structure(&r, 1)?
        );
    }
    Ok(())
}
