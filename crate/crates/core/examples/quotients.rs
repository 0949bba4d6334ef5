//! Quotient networks of balanced and exo-balanced partitions, and the
//! symbolic quotients of non-standard ones, written as DOT.

use syncspace::quotient::{quotient, QuotientKind};
use syncspace::{parse_partition, Network};

fn fixture(name: &str) -> syncspace::Result<Network> {
    Network::from_json_file(format!(
        "{}/fixtures/{name}.json",
        env!("CARGO_MANIFEST_DIR")
    ))
}

fn main() -> syncspace::Result<()> {
    let qutro = fixture("ex_qutro")?;
    let cases = [
        ("1,1,2,3", QuotientKind::Balanced),
        ("1,1,2,1", QuotientKind::Exo),
        ("1,1,2,-2", QuotientKind::OddSymbolic),
        ("1,-1,0,0", QuotientKind::LinearSymbolic),
        ("0,1,-1,1", QuotientKind::EoSymbolic),
    ];
    for (labels, kind) in cases {
        let p = parse_partition(labels, qutro.n())?;
        let q = quotient(&qutro, &p, kind)?;
        println!("# {} quotient of {p}", kind.name());
        println!("{}", q.to_dot());
    }

    // Quotients are refused outside their class.
    let p = parse_partition("1,1,1,1", 4)?;
    if let Err(e) = quotient(&qutro, &p, QuotientKind::Balanced) {
        println!("# {e}");
    }
    Ok(())
}
