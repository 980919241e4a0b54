//! Localization at p, invariance under admissible transforms and group comparison.

use nclocal::elliptic::builtin_catalog;
use nclocal::functor::{compare_group_structures, localize, theorem1_check};

fn main() -> nclocal::Result<()> {
    let catalog = builtin_catalog();
    let e = &catalog
        .iter()
        .find(|c| c.label == "cm4")
        .expect("builtin")
        .model;

    for p in [3, 2] {
        let loc = localize(e, p, 3, None)?;
        let k0: Vec<String> = loc.k0.iter().map(|g| g.to_string()).collect();
        println!(
            "{e} at p={p}: {:?} L_p={:?} K0 [{}]",
            loc.reduction.kind,
            loc.lp.map(|m| m.to_string()),
            k0.join(", ")
        );
    }

    let loc = localize(e, 5, 2, Some(&[2, 1]))?;
    println!("period [2,1] at p=5: {:?}", loc.exploration);

    let report = theorem1_check(e, 5, 20, 7)?;
    println!(
        "theorem check at p=5: {}/{} trials pass",
        report.passed,
        report.trials.len()
    );
    for t in report.trials.iter().take(3) {
        println!(
            "  {} -> {} L_p={:?}",
            t.transform,
            t.model,
            t.lp.as_ref().map(|m| m.to_string())
        );
    }

    let cmp = compare_group_structures(e, 3, 3)?;
    for row in cmp.rows {
        println!(
            "n={} order {}: E = {}, K0 = {}, isomorphic {:?}",
            row.n,
            row.order,
            row.curve_group.map(|g| g.to_string()).unwrap_or_default(),
            row.k0_group,
            row.isomorphic
        );
    }
    Ok(())
}
