//! Acceptance suite. Each check writes one `criterion N: PASS|FAIL` line to
//! stderr (bypassing the test harness capture) and asserts what has been
//! verified independently.
//!
//! Four target checks (1b, 1c, 1e, 6c) disagree with exact computation on the four-cell
//! example network; the checks for them report FAIL, pin the verified value,
//! and keep the literal claim in an ignored test.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use syncspace::dynamics::{
    certify_flow_invariance, linear_span_check, restriction_consistency, spans_coincide,
    SimulationOptions,
};
use syncspace::invariance::{
    check_block_conditions_l_via_w, check_block_conditions_w, classification_report,
};
use syncspace::lattice::{
    lattice_bruteforce, lattice_eigen, synchrony_antisynchrony_report, EigenOptions, LatticeMethod,
    MatrixTag, SyncReport,
};
use syncspace::partition::{enumerate_tagged_partitions, PartitionFilter};
use syncspace::quotient::{quotient_exo, quotient_linear_symbolic, quotient_odd_symbolic};
use syncspace::rational::format_rational;
use syncspace::{
    canonicalize, classify, laplacian, leaves_invariant, parse_partition, Matrix, Network,
    Rational, SystemClass, TaggedPartition,
};

/// Exact criteria compare rationals; these bound the numerical ones.
const FLOW_PASS_TOL: f64 = 1e-8;
const FLOW_FAIL_THRESHOLD: f64 = 1e-3;
const RESTRICTION_TOL: f64 = 1e-6;
const SPAN_RESIDUAL_TOL: f64 = 1e-12;
const LATTICE_BUDGET: Duration = Duration::from_secs(1);
const EIGEN_BUDGET: Duration = Duration::from_secs(60);
const FLOW_BUDGET: Duration = Duration::from_secs(120);

fn line(id: &str, pass: bool, what: &str, detail: impl AsRef<str>) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let text = format!("criterion {id}: {verdict}  {what}  [{}]\n", detail.as_ref());
    let _ = std::io::stderr().write_all(text.as_bytes());
}

fn fixture(name: &str) -> Network {
    Network::from_json_file(format!(
        "{}/fixtures/{name}.json",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

fn part(labels: &[i64]) -> TaggedPartition {
    canonicalize(labels).unwrap()
}

/// The thirteen named partitions of the four-cell example, P1..P13.
fn qutro_named() -> Vec<TaggedPartition> {
    [
        [1, -1, 0, 0],
        [1, 1, 2, -2],
        [0, 1, -1, 1],
        [1, 0, -1, 1],
        [1, 1, 0, 0],
        [1, 1, 2, 2],
        [1, 2, 3, -3],
        [1, 1, 2, 3],
        [1, 2, 0, 0],
        [1, 1, 1, 1],
        [1, 1, -1, 1],
        [1, 1, 2, 1],
        [1, 2, 3, 3],
    ]
    .iter()
    .map(|l| part(l))
    .collect()
}

fn named(indices: &[usize]) -> BTreeSet<TaggedPartition> {
    let all = qutro_named();
    indices.iter().map(|&i| all[i - 1].clone()).collect()
}

fn qutro_report() -> SyncReport {
    synchrony_antisynchrony_report(
        &fixture("ex_qutro"),
        LatticeMethod::Brute,
        8,
        &EigenOptions::default(),
    )
    .unwrap()
}

fn set(v: &[TaggedPartition]) -> BTreeSet<TaggedPartition> {
    v.iter().cloned().collect()
}

fn show(s: &BTreeSet<TaggedPartition>) -> String {
    s.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

// Criterion 1: four-cell lattices and classification lists.

#[test]
fn criterion_1_laplacian_lattice_and_union() {
    let net = fixture("ex_qutro");
    let start = Instant::now();
    let l = lattice_bruteforce(&laplacian(&net), MatrixTag::L, 8).unwrap();
    let w = lattice_bruteforce(net.adjacency(), MatrixTag::W, 8).unwrap();
    let elapsed = start.elapsed();
    let union: BTreeSet<TaggedPartition> = w.elements.iter().chain(&l.elements).cloned().collect();
    let mut expected = named(&(1..=13).collect::<Vec<_>>());
    expected.insert(TaggedPartition::singletons(4));
    expected.insert(TaggedPartition::null(4));
    let pass = l.len() == 13 && union == expected && elapsed < LATTICE_BUDGET;
    line(
        "1a",
        pass,
        "|L_L| = 13 and union = {P1..P13, full, null}",
        format!(
            "|L_L| = {}, |union| = {}, {:?}",
            l.len(),
            union.len(),
            elapsed
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_1_adjacency_lattice_count() {
    let net = fixture("ex_qutro");
    let w = lattice_bruteforce(net.adjacency(), MatrixTag::W, 8).unwrap();
    let p13 = part(&[1, 2, 3, 3]);
    line(
        "1b",
        w.len() == 11,
        "|L_W| = 11",
        format!(
            "measured {}; [1,2,3,3] is W-invariant and missing from the target list",
            w.len()
        ),
    );
    // x1, x2 free and x3 = x4: W maps (a, b, c, c) to (b + c, a + c, c, c).
    assert!(leaves_invariant(net.adjacency(), &p13));
    assert_eq!(w.len(), 12);
    assert!(w.contains(&p13));
}

#[test]
fn criterion_1_classification_lists() {
    let r = qutro_report();
    let c = &r.classes;
    let balanced = set(&c.balanced);
    let synchrony_g0: BTreeSet<_> = balanced
        .union(&set(&c.strictly_exo_balanced))
        .cloned()
        .collect();
    let odd = set(&c.odd_balanced);
    let checks = [
        (
            "1c",
            "(i) I_G and I_Geo synchrony = {P6, P8}",
            named(&[6, 8]),
            balanced,
        ),
        (
            "1d",
            "(ii) I_G0, I_Godd, I_Gl synchrony = (i) + P10, P12, P13",
            named(&[6, 8, 10, 12, 13]),
            synchrony_g0,
        ),
        (
            "1e",
            "(iii) odd-balanced = {P1, P2, P5, P7, P9}",
            named(&[1, 2, 5, 7, 9]),
            odd,
        ),
        (
            "1f",
            "(iv) linear-balanced = (iii) + P11",
            named(&[1, 2, 5, 7, 9, 11]),
            set(&c.linear_balanced),
        ),
        (
            "1g",
            "(v) even-odd-balanced = (iii) + P3, P4",
            named(&[1, 2, 3, 4, 5, 7, 9]),
            set(&c.even_odd_balanced),
        ),
    ];
    for (id, what, expected, measured) in &checks {
        line(
            id,
            expected == measured,
            what,
            format!("measured {}", show(measured)),
        );
    }
    // Verified values: P13 is balanced and P11 odd-balanced.
    assert_eq!(checks[0].3, named(&[6, 8, 13]));
    assert_eq!(checks[1].3, checks[1].2);
    assert_eq!(checks[2].3, named(&[1, 2, 5, 7, 9, 11]));
    assert_eq!(checks[3].3, checks[3].2);
    assert_eq!(checks[4].3, checks[4].2);
}

#[test]
#[ignore = "target count and lists disagree with exact computation"]
fn criterion_1_literal_target_values() {
    let net = fixture("ex_qutro");
    assert_eq!(
        lattice_bruteforce(net.adjacency(), MatrixTag::W, 8)
            .unwrap()
            .len(),
        11
    );
    let r = qutro_report();
    assert_eq!(set(&r.classes.balanced), named(&[6, 8]));
    assert_eq!(set(&r.classes.odd_balanced), named(&[1, 2, 5, 7, 9]));
}

// Criterion 2: spectral method against brute force.

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = if rng.gen_bool(0.5) {
                0
            } else {
                rng.gen_range(-2..=2)
            };
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

/// `U T U^-1` with `T` upper triangular and `U` a product of elementary
/// integer shears, so the spectrum is the (real) diagonal of `T`.
fn random_conjugated_triangular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        m[i][i] = rng.gen_range(-2..=2);
        for j in i + 1..n {
            m[i][j] = if rng.gen_bool(0.6) {
                0
            } else {
                rng.gen_range(-1..=1)
            };
        }
    }
    if n > 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            // M <- E M E^-1 with E = I + c e_i e_j^T.
            for k in 0..n {
                let add = c * m[j][k];
                m[i][k] += add;
            }
            for k in 0..n {
                let sub = c * m[k][i];
                m[k][j] -= sub;
            }
        }
    }
    m
}

fn to_matrix(m: &[Vec<i64>]) -> Matrix {
    let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
    Matrix::from_i64(&rows)
}

#[test]
fn criterion_2_eigen_matches_brute_force() {
    let start = Instant::now();
    let net = fixture("ex_qutro");
    let opts = EigenOptions::default();
    let mut cases: Vec<(String, Matrix)> = vec![
        ("ex_qutro W".into(), net.adjacency().clone()),
        ("ex_qutro L".into(), laplacian(&net)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for k in 0..100 {
        let n = rng.gen_range(1..=5);
        let m = if k % 2 == 0 {
            random_symmetric(&mut rng, n)
        } else {
            random_conjugated_triangular(&mut rng, n)
        };
        cases.push((format!("random #{k} {m:?}"), to_matrix(&m)));
    }
    let mut mismatches = Vec::new();
    for (name, m) in &cases {
        let brute = lattice_bruteforce(m, MatrixTag::W, 8).unwrap();
        let eigen = lattice_eigen(m, MatrixTag::W, &opts).unwrap();
        if eigen.lattice.elements != brute.elements {
            mismatches.push(name.clone());
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && elapsed < EIGEN_BUDGET;
    line(
        "2",
        pass,
        "eigen lattice = brute-force lattice on ex_qutro (W, L) and 100 random real-spectrum matrices",
        format!("{} cases, {} mismatches, {:?}", cases.len(), mismatches.len(), elapsed),
    );
    assert!(mismatches.is_empty(), "mismatches: {mismatches:#?}");
    assert!(elapsed < EIGEN_BUDGET);
}

// Criterion 3: invariance fixtures.

#[test]
fn criterion_3_invariance_fixtures() {
    struct Case {
        net: &'static str,
        labels: &'static str,
        what: &'static str,
        holds: fn(&syncspace::ClassificationFlags) -> bool,
    }
    let cases = [
        Case {
            net: "ex_notequal",
            labels: "1,1,-1,-1",
            what: "W yes, L no",
            holds: |f| f.invariant_under_w && !f.invariant_under_l,
        },
        Case {
            net: "five_cell",
            labels: "1,2,2,-1,0",
            what: "W yes",
            holds: |f| f.invariant_under_w,
        },
        Case {
            net: "exs_linear_i",
            labels: "1,1,2,-1,-1,-2",
            what: "L yes, odd no",
            holds: |f| f.invariant_under_l && !f.odd_balanced,
        },
        Case {
            net: "exs_linear_ii",
            labels: "1,1,-1,-1,0,0",
            what: "L yes, odd no",
            holds: |f| f.invariant_under_l && !f.odd_balanced,
        },
        Case {
            net: "ex_odd_eo",
            labels: "1,0,-1,-1,0,1",
            what: "odd yes, eo no",
            holds: |f| f.odd_balanced && !f.even_odd_balanced,
        },
        Case {
            net: "ex_eo_odd",
            labels: "1,1,2,2,-1,-1,-2,-2",
            what: "eo yes, odd no",
            holds: |f| f.even_odd_balanced && !f.odd_balanced,
        },
        Case {
            net: "ex_odd_dif_num",
            labels: "1,-1,-1,0",
            what: "odd yes",
            holds: |f| f.odd_balanced,
        },
    ];
    let mut all = true;
    let mut details = Vec::new();
    for c in &cases {
        let net = fixture(c.net);
        let p = parse_partition(c.labels, net.n()).unwrap();
        let ok = (c.holds)(&classify(&net, &p));
        all &= ok;
        details.push(format!(
            "{} {}: {}",
            c.net,
            c.what,
            if ok { "ok" } else { "WRONG" }
        ));
    }
    // |P1| != |P1bar| in the last fixture.
    let p = parse_partition("1,-1,-1,0", 4).unwrap();
    all &= p.part(1).len() != p.counterpart(1).len();
    line(
        "3",
        all,
        "classification of the seven invariance fixtures",
        details.join("; "),
    );
    assert!(all, "{details:#?}");
}

#[test]
fn criterion_3_displayed_block_values() {
    let net = fixture("five_cell");
    let p = parse_partition("1,2,2,-1,0", 5).unwrap();
    let report = check_block_conditions_w(&net, &p).unwrap();
    let odd_eo = fixture("ex_odd_eo");
    let q = parse_partition("1,0,-1,-1,0,1", 6).unwrap();
    let first_fail = check_block_conditions_w(&odd_eo, &q).unwrap();
    let first = &first_fail.conditions[0];
    let pass = report.pass
        && !first.pass
        && classification_report(&net, &p)
            .unwrap()
            .flags
            .invariant_under_w;
    line(
        "3b",
        pass,
        "five-cell blocks pass; path network fails the first condition",
        &first.condition,
    );
    assert!(pass);
}

// Criterion 4: block conditions against direct basis invariance.

#[test]
fn criterion_4_block_conditions_match_basis_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let samples = 600;
    let mut disagreements = 0;
    let mut invariant_w = 0;
    let mut invariant_l = 0;
    for _ in 0..samples {
        let n = rng.gen_range(1..=6);
        let w: Vec<Vec<i64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.6) {
                            0
                        } else {
                            rng.gen_range(-1..=2)
                        }
                    })
                    .collect()
            })
            .collect();
        let net = Network::new(to_matrix(&w)).unwrap();
        let labels: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=3)).collect();
        let p = canonicalize(&labels).unwrap();
        if p.is_null() {
            continue;
        }
        let direct_w = leaves_invariant(net.adjacency(), &p);
        let direct_l = leaves_invariant(&laplacian(&net), &p);
        invariant_w += direct_w as usize;
        invariant_l += direct_l as usize;
        if check_block_conditions_w(&net, &p).unwrap().pass != direct_w
            || check_block_conditions_l_via_w(&net, &p).unwrap().pass != direct_l
        {
            disagreements += 1;
        }
    }
    let pass = disagreements == 0;
    line(
        "4",
        pass,
        "block conditions = basis invariance for W and L",
        format!("{samples} random pairs (n <= 6), {invariant_w} W-invariant, {invariant_l} L-invariant, {disagreements} disagreements"),
    );
    assert!(pass);
}

// Criterion 5: regular networks have one lattice, non-regular ones two.

fn random_regular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut w = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(0.4) {
                w[i][j] = rng.gen_range(1..=2);
            }
        }
    }
    let sums: Vec<i64> = w.iter().map(|r| r.iter().sum()).collect();
    let v = sums.iter().copied().max().unwrap_or(0) + rng.gen_range(0..=1);
    for i in 0..n {
        // Top up on one edge into cell i (a self-loop when n = 1).
        let j = if n > 1 {
            (i + 1 + rng.gen_range(0..n - 1)) % n
        } else {
            0
        };
        w[i][j] += v - sums[i];
    }
    w
}

fn random_nonregular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    loop {
        let w: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i != j && rng.gen_bool(0.5) {
                            rng.gen_range(-1..=2)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let sums: BTreeSet<i64> = w.iter().map(|r| r.iter().sum()).collect();
        if sums.len() > 1 {
            return w;
        }
    }
}

#[test]
fn criterion_5_regularity_dichotomy() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut regular_ok = 0;
    let mut nonregular_ok = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let net = Network::new(to_matrix(&random_regular(&mut rng, n))).unwrap();
        assert!(net.regular_valency().is_some());
        let l = laplacian(&net);
        let same = enumerate_tagged_partitions(n, PartitionFilter::All)
            .all(|p| leaves_invariant(net.adjacency(), &p) == leaves_invariant(&l, &p));
        regular_ok += same as usize;
    }
    for _ in 0..50 {
        let n = rng.gen_range(2..=5);
        let net = Network::new(to_matrix(&random_nonregular(&mut rng, n))).unwrap();
        assert!(net.regular_valency().is_none());
        let l = laplacian(&net);
        let standard: Vec<TaggedPartition> =
            enumerate_tagged_partitions(n, PartitionFilter::StandardOnly).collect();
        let in_w: BTreeSet<&TaggedPartition> = standard
            .iter()
            .filter(|p| leaves_invariant(net.adjacency(), p))
            .collect();
        let in_l: BTreeSet<&TaggedPartition> = standard
            .iter()
            .filter(|p| leaves_invariant(&l, p))
            .collect();
        nonregular_ok += (in_w.is_subset(&in_l) && in_w.len() < in_l.len()) as usize;
    }
    let pass = regular_ok == 50 && nonregular_ok == 50;
    line(
        "5",
        pass,
        "regular: W- and L-invariant sets equal; non-regular: standard W-set strictly inside L-set",
        format!("{regular_ok}/50 regular, {nonregular_ok}/50 non-regular"),
    );
    assert!(pass);
}

// Criterion 6: flow invariance with sampled systems.

fn flow_options(trials: usize) -> SimulationOptions {
    SimulationOptions {
        seed: 6,
        trials,
        dt: 1e-3,
        horizon: 10.0,
        tol: FLOW_PASS_TOL,
        ..SimulationOptions::default()
    }
}

#[test]
fn criterion_6_positive_flow_certification() {
    let start = Instant::now();
    let net = fixture("ex_qutro");
    let report = qutro_report();
    let opts = flow_options(5);
    let mut pairs = 0;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for e in &report.union {
        for &class in &e.preserving_classes {
            pairs += 1;
            let r = certify_flow_invariance(&net, &e.partition, class, &opts).unwrap();
            worst = worst.max(r.max_residual);
            if !r.pass {
                failures.push(format!("{} {}", e.partition, class));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && worst <= FLOW_PASS_TOL && elapsed < FLOW_BUDGET;
    line(
        "6a",
        pass,
        "every union element stays invariant under each predicted class",
        format!(
            "{pairs} pairs x 5 trials, max residual {worst:.1e}, {:?}",
            elapsed
        ),
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(elapsed < FLOW_BUDGET);
}

#[test]
fn criterion_6_negative_pairs() {
    let qutro = fixture("ex_qutro");
    let fig1 = fixture("fig1");
    let notequal = fixture("ex_notequal");
    let opts = flow_options(20);
    let cases: [(&str, &Network, &[i64], SystemClass); 4] = [
        ("fig1 [1,1,2] I_G", &fig1, &[1, 1, 2], SystemClass::G),
        ("ex_qutro P10 I_G", &qutro, &[1, 1, 1, 1], SystemClass::G),
        (
            "ex_qutro P3 I_Godd",
            &qutro,
            &[0, 1, -1, 1],
            SystemClass::Godd,
        ),
        (
            "ex_notequal [1,1,-1,-1] I_Gl",
            &notequal,
            &[1, 1, -1, -1],
            SystemClass::Gl,
        ),
    ];
    let mut details = Vec::new();
    let mut all = true;
    for (name, net, labels, class) in cases {
        let r = certify_flow_invariance(net, &part(labels), class, &opts).unwrap();
        let escaped = r.max_residual > FLOW_FAIL_THRESHOLD;
        all &= escaped;
        details.push(format!("{name}: {:.1e}", r.max_residual));
    }
    line(
        "6b",
        all,
        "four negative pairs leave the subspace (residual > 1e-3 in 20 samples)",
        details.join("; "),
    );
    assert!(all, "{details:?}");
}

#[test]
fn criterion_6_p11_under_odd_systems() {
    let net = fixture("ex_qutro");
    let p11 = part(&[1, 1, -1, 1]);
    let r = certify_flow_invariance(&net, &p11, SystemClass::Godd, &flow_options(20)).unwrap();
    line(
        "6c",
        r.max_residual > FLOW_FAIL_THRESHOLD,
        "P11 = [1,1,-1,1] leaves under I_Godd",
        format!(
            "max residual {:.1e} over 20 samples; P11 satisfies every odd-balance condition, so the subspace is invariant",
            r.max_residual
        ),
    );
    assert!(classify(&net, &p11).odd_balanced);
    assert!(r.pass && r.max_residual <= FLOW_PASS_TOL);
}

#[test]
#[ignore = "the target expectation contradicts exact classification"]
fn criterion_6_literal_p11_negative() {
    let net = fixture("ex_qutro");
    let r = certify_flow_invariance(
        &net,
        &part(&[1, 1, -1, 1]),
        SystemClass::Godd,
        &flow_options(20),
    )
    .unwrap();
    assert!(r.max_residual > FLOW_FAIL_THRESHOLD);
}

// Criterion 7: full dynamics against quotient dynamics.

#[test]
fn criterion_7_restriction_consistency() {
    let opts = SimulationOptions {
        seed: 7,
        dt: 1e-3,
        horizon: 10.0,
        tol: RESTRICTION_TOL,
        ..SimulationOptions::default()
    };
    let cases: [(&str, &[i64], SystemClass); 3] = [
        ("odd3cell", &[1, -1, -1], SystemClass::Godd),
        ("exs_linear_i", &[1, 1, 2, -1, -1, -2], SystemClass::Gl),
        ("f_um", &[1, 1, 1, 2, 2, 3], SystemClass::G0),
    ];
    let mut all = true;
    let mut details = Vec::new();
    for (name, labels, class) in cases {
        let r = restriction_consistency(&fixture(name), &part(labels), class, &opts).unwrap();
        all &= r.pass;
        details.push(format!("{name} {class}: {:.1e}", r.max_deviation));
    }
    line(
        "7",
        all,
        "full trajectories equal lifted quotient trajectories within 1e-6",
        details.join("; "),
    );
    assert!(all, "{details:?}");
}

// Criterion 8: linear members lie in span{id, L} or span{id, W}.

#[test]
fn criterion_8_linear_span() {
    let net = fixture("ex_notequal");
    let gl = linear_span_check(&net, SystemClass::Gl, 8).unwrap();
    let geo = linear_span_check(&net, SystemClass::Geo, 8).unwrap();
    let odd3 = fixture("odd3cell");
    let coincide = spans_coincide(&odd3) && !spans_coincide(&net);
    let pass = gl.residual < SPAN_RESIDUAL_TOL
        && geo.residual < SPAN_RESIDUAL_TOL
        && gl.basis == ["id", "L"]
        && geo.basis == ["id", "W"]
        && coincide;
    line(
        "8",
        pass,
        "I_Gl in span{id, L}, I_Geo in span{id, W}; spans coincide on the regular network",
        format!(
            "residuals {:.1e}, {:.1e}; odd3cell coincide {}",
            gl.residual,
            geo.residual,
            spans_coincide(&odd3)
        ),
    );
    assert!(pass);
}

// Criterion 9: quotient fixtures.

fn edges_text(edges: &[(String, String, Rational)]) -> String {
    edges
        .iter()
        .map(|(f, t, w)| format!("{f}->{t} {}", format_rational(w)))
        .collect::<Vec<_>>()
        .join(", ")
}

#[test]
fn criterion_9_quotients() {
    let r = |s: &str| s.parse::<Rational>().unwrap();
    let um = quotient_exo(&fixture("f_um"), &part(&[1, 1, 1, 2, 2, 3])).unwrap();
    let um_edges = um.edges();
    let um_ok = um_edges
        == vec![
            ("[1]".into(), "[4]".into(), r("1")),
            ("[4]".into(), "[6]".into(), r("2")),
        ]
        && (0..um.p()).all(|i| num_traits::Zero::is_zero(um.weight(i, i)));

    let odd = quotient_odd_symbolic(&fixture("odd3cell"), &part(&[1, -1, -1])).unwrap();
    let odd_ok = odd.edges() == vec![("-[1]".into(), "[1]".into(), r("2"))];

    let lin =
        quotient_linear_symbolic(&fixture("exs_linear_i"), &part(&[1, 1, 2, -1, -1, -2])).unwrap();
    let lin_ok = lin.r_column() == Some(vec![r("2"), r("2")])
        && num_traits::Zero::is_zero(lin.weight(0, 1))
        && num_traits::Zero::is_zero(lin.weight(1, 0));

    let pass = um_ok && odd_ok && lin_ok;
    line(
        "9",
        pass,
        "exo quotient of f_um, odd symbolic quotient of odd3cell, linear symbolic quotient of exs_linear (i)",
        format!(
            "f_um {}; odd3cell {}; r = {:?}",
            edges_text(&um_edges),
            edges_text(&odd.edges()),
            lin.r_column().unwrap_or_default().iter().map(format_rational).collect::<Vec<_>>()
        ),
    );
    assert!(pass);
}
