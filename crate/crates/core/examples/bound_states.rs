//! Bound states of an exponential well in four dimensions.
use qws::model::{ChannelParams, LocalPotential, PotentialModel};
use qws::spectral::{find_bound_states, BoundStateOptions};

fn main() -> qws::Result<()> {
    let channel = ChannelParams::new(4.0, 0.0);
    let potential = PotentialModel::new(LocalPotential::Exponential { depth: 150.0, range: 0.3 }, 2.0)?;
    let search = find_bound_states(&channel, &potential, &BoundStateOptions::default())?;
    println!("scanned [{:.3}, {:.3e}] with {} points", search.e_floor, search.e_ceiling, search.e_count);
    for s in &search.states {
        println!("E = {:+.12}  κ = {:.10}  residual {:.1e}", s.energy, s.kappa, s.residual);
    }
    Ok(())
}
