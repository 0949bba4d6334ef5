//! Lattices of invariant generalized polydiagonals, by brute force and by
//! the spectral method, with a Hasse diagram in DOT.

use syncspace::lattice::{hasse_dot, lattice_bruteforce, lattice_eigen, EigenOptions, MatrixTag};
use syncspace::{laplacian, Matrix, Network};

fn main() -> syncspace::Result<()> {
    let net = Network::from_json_file(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/ex_qutro.json"
    ))?;
    for (tag, m) in [
        (MatrixTag::W, net.adjacency().clone()),
        (MatrixTag::L, laplacian(&net)),
    ] {
        let brute = lattice_bruteforce(&m, tag, 8)?;
        let eigen = lattice_eigen(&m, tag, &EigenOptions::default())?;
        println!(
            "{tag}: {} elements by brute force, {} by eigenvectors, agree: {}",
            brute.len(),
            eigen.lattice.len(),
            brute == eigen.lattice
        );
        for c in &eigen.components {
            println!(
                "  eigenvalues {:.3?}: {} invariant flats",
                c.eigenvalues,
                c.invariant_flats.len()
            );
        }
    }

    // A matrix with a complex pair of eigenvalues.
    let rot = Matrix::from_i64(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 2]]);
    let eigen = lattice_eigen(&rot, MatrixTag::W, &EigenOptions::default())?;
    println!("{}", hasse_dot(&eigen.lattice));
    Ok(())
}
