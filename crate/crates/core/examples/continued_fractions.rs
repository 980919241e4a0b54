//! Continued fractions of quadratic irrationals and the boundary map to theta.

use nclocal::quadratic_cf::{
    boundary_to_theta, cf_expand, gl2z_equivalent, is_reduced, QuadraticIrrational,
};

fn main() -> nclocal::Result<()> {
    for text in [
        "(1+sqrt(5))/2",
        "sqrt(7)",
        "(3+sqrt(13))/2",
        "(-1+sqrt(3))/4",
    ] {
        let x: QuadraticIrrational = text.parse()?;
        let cf = cf_expand(&x);
        println!(
            "{x:<18} = {cf:<16} reduced={:<5} ~ {:.6}",
            is_reduced(&x),
            x.to_f64()
        );
        let conv: Vec<String> = cf.convergents(6).iter().map(|c| c.to_string()).collect();
        println!("    convergents {}", conv.join(", "));
        let theta = boundary_to_theta(&x);
        println!("    theta = {theta} with expansion {}", cf_expand(&theta));
    }

    let a: QuadraticIrrational = "sqrt(2)".parse()?;
    let b: QuadraticIrrational = "(1+sqrt(2))/1".parse()?;
    let c: QuadraticIrrational = "sqrt(3)".parse()?;
    println!("sqrt(2) ~ 1+sqrt(2): {}", gl2z_equivalent(&a, &b));
    println!("sqrt(2) ~ sqrt(3):   {}", gl2z_equivalent(&a, &c));
    Ok(())
}
