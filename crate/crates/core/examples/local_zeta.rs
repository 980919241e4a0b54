//! Curve and torus local zeta series, and Dirichlet coefficients.

use nclocal::ck_k0::EpsilonData;
use nclocal::elliptic::RationalModel;
use nclocal::zeta::{
    dirichlet_coefficients, lemma1_check, torus_local_zeta, TraceSource, ZetaMode,
};

fn main() -> nclocal::Result<()> {
    let e: RationalModel = "[0,0,0,0,1]".parse()?;
    let primes = [2, 3, 5, 7, 11, 13];
    for r in lemma1_check(&e, &TraceSource::PointCount, &primes, 5, ZetaMode::Absolute)? {
        println!(
            "p={:>2} good={:<5} {:?}  curve {}  torus {}",
            r.p, r.good, r.verdict, r.curve_coeffs, r.torus_coeffs
        );
    }

    for alpha in [0, 1, -1] {
        let abs = torus_local_zeta(&EpsilonData::Alpha(alpha), 5, 4, ZetaMode::Absolute)?;
        let signed = torus_local_zeta(&EpsilonData::Alpha(alpha), 5, 4, ZetaMode::Signed)?;
        println!("alpha={alpha:>2}: absolute {abs}  signed {signed}");
    }

    let d = dirichlet_coefficients(&e, 40)?;
    let coeffs: Vec<String> = (1..=20)
        .map(|m| d.curve_coefficient(m).to_string())
        .collect();
    println!("c_1..c_20 = {}", coeffs.join(" "));
    println!(
        "bad primes {:?}, agree at good primes: {}",
        d.bad_primes,
        d.agree_on_good()
    );
    Ok(())
}
