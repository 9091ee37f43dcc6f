//! Bessel functions of arbitrary real order, with error estimates.
use qws::specfun::{bessel_i_k, bessel_jy, gamma};

fn main() -> qws::Result<()> {
    println!("Γ(0.5) = {:.15}", gamma(0.5)?);
    for &(nu, x) in &[(0.0, 1.0), (2.7, 10.0), (25.5, 40.0), (49.0, 60.0)] {
        let p = bessel_jy(nu, x)?;
        println!(
            "ν={nu:5} x={x:5}  J={:+.12e} (±{:.1e}, {:?})  Y={:+.12e}",
            p.j.value, p.j.est_error, p.j.method, p.y.value
        );
    }
    // large arguments come back scaled: value · e^{exponent}
    let m = bessel_i_k(2.0, 900.0)?;
    println!("I_2(900) = {:.12e} · e^{}", m.i.value, m.i.exponent);
    println!("K_2(900) = {:.12e} · e^{}", m.k.value, m.k.exponent);
    Ok(())
}
