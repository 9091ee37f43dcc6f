//! η(0) against the bound-state count, for a local well and a kernel.
use qws::model::*;
use qws::spectral::{levinson_verify, LevinsonOptions};

fn main() -> qws::Result<()> {
    let cases = [
        ("square well, depth (2π)²", ChannelParams::new(3.0, 0.0), PotentialModel::square_well(4.0 * std::f64::consts::PI.powi(2), 1.0)?),
        (
            "window kernel, λ = 3/2",
            ChannelParams::new(3.0, 1.0),
            PotentialModel::with_kernel(
                LocalPotential::Zero,
                1.0,
                SeparableKernel::diagonal(vec![(KernelProfile::Window { lo: 0.2, hi: 0.8 }, -600.0)]),
            )?,
        ),
    ];
    for (name, channel, potential) in &cases {
        let r = levinson_verify(channel, potential, &LevinsonOptions::default())?;
        println!("{name}");
        println!("  η(0)/π = {:.8}", r.eta0 / std::f64::consts::PI);
        println!("  states: {} by scan, {} by continuation, E = {:?}", r.n_direct, r.n_continuation, r.bound_energies);
        for e in &r.continuation.events {
            println!("  A crosses ρ at μ = {:.6} ({})", e.mu, e.direction.as_str());
        }
        println!("  pass = {}", r.pass);
    }
    Ok(())
}
