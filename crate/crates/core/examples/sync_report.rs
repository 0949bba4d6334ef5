//! Every synchrony and anti-synchrony subspace of a network with the
//! coupled cell system classes that preserve it.

use syncspace::lattice::{synchrony_antisynchrony_report, EigenOptions, LatticeMethod};
use syncspace::Network;

fn main() -> syncspace::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ex_qutro.json").to_string()
    });
    let net = Network::from_json_file(&path)?;
    let report =
        synchrony_antisynchrony_report(&net, LatticeMethod::Both, 8, &EigenOptions::default())?;
    for e in &report.union {
        let classes: Vec<String> = e.preserving_classes.iter().map(|c| c.to_string()).collect();
        println!(
            "{:<20} dim {}  W:{} L:{}  {}",
            e.partition.to_string(),
            e.dim,
            e.in_w as u8,
            e.in_l as u8,
            classes.join(" ")
        );
    }
    println!("counts: {:?}", report.counts);
    println!(
        "brute force and eigen method agree: {}",
        report.methods_agree()
    );
    Ok(())
}
