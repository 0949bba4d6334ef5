//! Classifies tagged partitions of the four-cell example network and prints
//! the block conditions that decide each verdict.

use syncspace::invariance::{check_block_conditions_w, classification_report};
use syncspace::{laplacian, parse_partition, Network};

fn main() -> syncspace::Result<()> {
    let net = Network::from_json_file(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/ex_qutro.json"
    ))?;
    println!("W =\n{}", net.adjacency());
    println!("L =\n{}", laplacian(&net));

    for labels in ["1,1,2,2", "1,1,1,1", "1,1,-1,1", "0,1,-1,1", "1,2,3,3"] {
        let p = parse_partition(labels, net.n())?;
        let report = classification_report(&net, &p)?;
        let f = &report.flags;
        println!(
            "{p}: W-invariant {}, L-invariant {}, preserved by {:?}",
            f.invariant_under_w, f.invariant_under_l, report.preserving_classes
        );
    }

    // Why [1,1,2,1] is not balanced: the per-block row sums.
    let p = parse_partition("1,1,2,1", 4)?;
    let blocks = check_block_conditions_w(&net, &p)?;
    for c in &blocks.conditions {
        let sums: Vec<String> = c
            .row_sums
            .iter()
            .map(|rs| {
                rs.iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        println!(
            "  {:<50} {} row sums [{}]",
            c.condition,
            if c.pass { "ok  " } else { "FAIL" },
            sums.join(" | ")
        );
    }
    Ok(())
}
