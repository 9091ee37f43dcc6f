//! Phase shifts of a square well, continued in the coupling from μ = 0.
use qws::model::{ChannelParams, PotentialModel};
use qws::scattering::{phase_shift_curve, PhaseShiftOptions};

fn main() -> qws::Result<()> {
    let potential = PotentialModel::square_well(9.0, 1.0)?;
    let ks: Vec<f64> = (0..12).map(|i| 10f64.powf(-3.0 + 0.35 * i as f64)).collect();
    for (q, l) in [(3.0, 0.0), (3.0, 1.0), (4.0, 0.0)] {
        let channel = ChannelParams::new(q, l);
        let curve = phase_shift_curve(&channel, &potential, &ks, &PhaseShiftOptions::default())?;
        println!("q={q} l={l}  λ={}", curve.lambda);
        for s in &curve.samples {
            println!("  k={:9.5}  η={:+.10}", s.k, s.eta);
        }
    }
    Ok(())
}
