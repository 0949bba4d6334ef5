//! Tagged partitions: canonical labels, counts, intersections and the
//! smallest generalized polydiagonal containing given vectors.

use syncspace::canonicalize;
use syncspace::partition::{
    count_tagged_partitions, enumerate_tagged_partitions, intersect,
    minimal_polydiagonal_containing, PartitionFilter,
};

fn main() -> syncspace::Result<()> {
    let p = canonicalize(&[5, 5, -5, 0, 7])?;
    println!("canonical form of [5,5,-5,0,7]: {p}");
    println!(
        "p={} q={} r={} dim={} standard={}",
        p.p(),
        p.q(),
        p.r(),
        p.dim(),
        p.is_standard()
    );
    println!("basis sign vectors: {:?}", p.basis_signs());

    for n in 1..=6 {
        let standard = enumerate_tagged_partitions(n, PartitionFilter::StandardOnly).count();
        println!(
            "n={n}: {} tagged partitions, {standard} standard",
            count_tagged_partitions(n)
        );
    }

    let a = canonicalize(&[1, 1, 2, -2])?;
    let b = canonicalize(&[1, 2, 1, -1])?;
    println!("{a} meet {b} = {}", intersect(&a, &b));

    let v = vec![vec![0.3, 0.3, -0.3, 0.0, 1.2]];
    println!(
        "smallest polydiagonal containing {:?}: {}",
        v[0],
        minimal_polydiagonal_containing(&v, 1e-12)?
    );
    Ok(())
}
