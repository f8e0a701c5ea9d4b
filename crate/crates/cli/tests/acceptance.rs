//! Acceptance suite: one test per shipped guarantee, each printing a
//! pass line when its checks hold. The heavier tests enumerate every
//! admissible vector up to weight 30 with the independent brute-force
//! search from `common` and compare against the library's answers.

mod common;

use std::collections::HashSet;
use std::path::Path;
use std::process::Command;

use common::{enumerate_admissible, snapshot, Rng};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use nsurf::census;
use nsurf::construct::{
    bound_for_tets, bound_report, construct_sigma, construct_tilde_sigma, tets_for_bridge,
    verify_maximal,
};
use nsurf::coords::{
    euler_characteristic, matching_system, total_weight, total_weight_with, vertex_link,
    all_vertex_links, NormalMode, NormalVector,
};
use nsurf::hilbert::{fundamental_vectors, norm_bound, HilbertCaps};
use nsurf::realize::realize;
use nsurf::tri::{build_skeleton, Triangulation};

const MODES: [NormalMode; 2] = [NormalMode::OneNormal, NormalMode::TwoNormal];
const BRUTE_WEIGHT: u64 = 30;

fn census_all() -> Vec<(&'static str, Triangulation)> {
    vec![
        ("one-tet sphere", census::one_tet_sphere()),
        ("doubled tetrahedron", census::doubled_tetrahedron()),
        ("projective space", census::projective_space()),
        ("pentachoron", census::pentachoron()),
    ]
}

fn pass(n: usize, what: &str) {
    println!("criterion {:02}: pass ({})", n, what);
}

#[test]
fn criterion_01_skeleton_counts() {
    let tri = census::pentachoron();
    let sk = build_skeleton(&tri);
    assert_eq!(tri.tet_count(), 5);
    assert_eq!(
        (sk.vertex_count, sk.edge_count, sk.face_count),
        (5, 10, 10)
    );
    assert!((0..sk.edge_count).all(|e| sk.edge_degree(e) == 3));

    let tri = census::doubled_tetrahedron();
    let sk = build_skeleton(&tri);
    assert_eq!(tri.tet_count(), 2);
    assert_eq!((sk.vertex_count, sk.edge_count, sk.face_count), (4, 6, 4));
    assert!((0..sk.edge_count).all(|e| sk.edge_degree(e) == 2));
    pass(1, "skeleton counts and edge degrees");
}

#[test]
fn criterion_02_matching_system_shape() {
    for (name, tri) in census_all() {
        let t = tri.tet_count();
        for mode in MODES {
            let sys = matching_system(&tri, mode);
            assert_eq!(sys.rows.len(), 6 * t, "{}", name);
            assert_eq!(sys.matrix.cols(), mode.coords_per_tet() * t, "{}", name);
            for r in 0..sys.rows.len() {
                let row = sys.matrix.row(r);
                assert!(row.iter().all(|&v| (-1..=1).contains(&v)), "{}", name);
                let norm_sq: i64 = row.iter().map(|&v| v * v).sum();
                assert!(norm_sq <= 8, "{} row {} norm^2 {}", name, r, norm_sq);
            }
        }
    }
    pass(2, "matching systems have 6t rows, unit entries, row norm^2 <= 8");
}

#[test]
fn criterion_03_euler_characteristic() {
    for (name, tri) in census_all() {
        let sk = build_skeleton(&tri);
        for vc in 0..sk.vertex_count {
            let link = vertex_link(&sk, tri.tet_count(), vc);
            assert_eq!(
                euler_characteristic(&link, &tri).unwrap(),
                BigInt::from(2),
                "{} vertex {}",
                name,
                vc
            );
            assert_eq!(
                total_weight(&link, &tri).unwrap(),
                BigUint::from(sk.vertex_edge_ends[vc]),
                "{} vertex {}",
                name,
                vc
            );
        }
        let links = all_vertex_links(tri.tet_count());
        assert_eq!(
            total_weight(&links, &tri).unwrap(),
            BigUint::from(2 * sk.edge_count),
            "{}",
            name
        );
        assert_eq!(
            euler_characteristic(&links, &tri).unwrap(),
            BigInt::from(2 * sk.vertex_count as i64),
            "{}",
            name
        );
    }

    // Additivity over normal sums, on random compatible pairs.
    let tri = census::pentachoron();
    let pool = enumerate_admissible(&tri, NormalMode::TwoNormal, BRUTE_WEIGHT);
    let chi: Vec<BigInt> = pool
        .iter()
        .map(|v| euler_characteristic(v, &tri).unwrap())
        .collect();
    let mut rng = Rng::new(0x0e11_1e50);
    let mut found = 0;
    let mut attempts = 0;
    while found < 1000 {
        attempts += 1;
        assert!(attempts < 100_000, "compatible pairs must be plentiful");
        let i = rng.below(pool.len() as u64) as usize;
        let j = rng.below(pool.len() as u64) as usize;
        let sum = match pool[i].haken_sum(&pool[j]) {
            Ok(s) => s,
            Err(_) => continue,
        };
        assert_eq!(
            euler_characteristic(&sum, &tri).unwrap(),
            &chi[i] + &chi[j]
        );
        found += 1;
    }
    pass(3, "vertex links have chi 2 and the right weight; chi is additive");
}

#[test]
fn criterion_04_realization_closure() {
    let mut checked = 0usize;
    for (name, tri) in census_all() {
        let mut counts = [0usize; 2];
        for (mi, mode) in MODES.into_iter().enumerate() {
            let pool = enumerate_admissible(&tri, mode, BRUTE_WEIGHT);
            counts[mi] = match mode {
                NormalMode::OneNormal => pool.len(),
                NormalMode::TwoNormal => pool
                    .iter()
                    .filter(|v| v.octagon_count().is_zero())
                    .count(),
            };
            for v in &pool {
                let surf = realize(v, &tri).unwrap_or_else(|e| {
                    panic!("{} vector {} failed to realize: {}", name, v.serialize(), e)
                });
                let mut sum = vec![BigUint::zero(); v.coords().len()];
                let mut chi = BigInt::zero();
                for comp in surf.components() {
                    for (acc, c) in sum.iter_mut().zip(comp.vector.coords()) {
                        *acc += c;
                    }
                    chi += comp.euler;
                }
                assert_eq!(sum.as_slice(), v.coords(), "{} components must sum back", name);
                assert_eq!(
                    chi,
                    euler_characteristic(v, &tri).unwrap(),
                    "{} chi must be additive over components",
                    name
                );
                if v.is_zero() {
                    assert!(surf.components().is_empty(), "{}", name);
                }
                checked += 1;
            }
        }
        // The octagon-free part of the 2-normal enumeration is exactly the
        // 1-normal enumeration, a consistency check of the search itself.
        assert_eq!(counts[0], counts[1], "{} enumerations disagree", name);
    }
    pass(
        4,
        &format!("all {} admissible vectors of weight <= 30 realize and close up", checked),
    );
}

#[test]
fn criterion_05_hilbert_basis_completeness() {
    for (name, tri) in census_all() {
        for mode in MODES {
            let basis = fundamental_vectors(&tri, mode, &HilbertCaps::default()).unwrap();
            let pool = enumerate_admissible(&tri, mode, BRUTE_WEIGHT);
            let enumerated: HashSet<Vec<u64>> = pool
                .iter()
                .map(|v| v.coords_u64().unwrap())
                .collect();
            assert_eq!(enumerated.len(), pool.len(), "{} enumerator repeats", name);

            // Every nonnegative compatible combination of basis elements up
            // to the weight budget, generated directly.
            let sys = matching_system(&tri, mode);
            let elems: Vec<(Vec<u64>, u64)> = basis
                .iter()
                .map(|b| {
                    let w = total_weight(b, &tri).unwrap();
                    (
                        b.coords_u64().unwrap(),
                        u64::try_from(&w).expect("small basis weight"),
                    )
                })
                .collect();
            let tets = tri.tet_count();
            let cpt = mode.coords_per_tet();
            // Closure of {0} under adding basis elements while the weight
            // stays in budget; partial sums of a compatible vector are
            // compatible, so this reaches every combination.
            let mut generated: HashSet<Vec<u64>> = HashSet::new();
            let zero = vec![0u64; cpt * tets];
            let mut frontier = vec![(zero.clone(), 0u64)];
            generated.insert(zero);
            while let Some((cur, w)) = frontier.pop() {
                for (elem, ew) in &elems {
                    if w + ew > BRUTE_WEIGHT {
                        continue;
                    }
                    let next: Vec<u64> = cur.iter().zip(elem).map(|(a, b)| a + b).collect();
                    if !compatible(&next, cpt) {
                        continue;
                    }
                    if generated.insert(next.clone()) {
                        frontier.push((next, w + ew));
                    }
                }
            }

            assert_eq!(
                generated, enumerated,
                "{} {:?}: combinations of the basis must be exactly the solutions",
                name, mode
            );

            // Irreducibility, exhaustive within the brute-force window.
            let nonzero: Vec<&Vec<u64>> = enumerated
                .iter()
                .filter(|c| c.iter().any(|&v| v > 0))
                .collect();
            for (b, w) in &elems {
                if *w > BRUTE_WEIGHT {
                    continue;
                }
                for s in &nonzero {
                    if s.as_slice() == b.as_slice() {
                        continue;
                    }
                    if s.iter().zip(b).all(|(a, c)| a <= c) {
                        let rest: Vec<u64> = b.iter().zip(s.iter()).map(|(c, a)| c - a).collect();
                        assert!(
                            !enumerated.contains(&rest),
                            "{} basis element is a sum of two solutions",
                            name
                        );
                    }
                }
            }

            // Every basis coordinate respects the minimal-solution bound.
            let bound = norm_bound(sys.matrix.cols(), sys.matrix.max_row_norm_sq());
            for b in &basis {
                assert!(
                    b.coords().iter().all(|c| c <= &bound),
                    "{} basis coordinate above the norm bound",
                    name
                );
            }
        }
    }
    pass(5, "Hilbert bases are complete, irreducible, and within the norm bound");
}

fn compatible(coords: &[u64], cpt: usize) -> bool {
    coords
        .chunks(cpt)
        .all(|tet| tet[4..].iter().filter(|&&v| v > 0).count() <= 1)
}

#[test]
fn criterion_06_kneser_haken_pigeonhole() {
    let tri = census::pentachoron();
    let sk = build_skeleton(&tri);
    let t = tri.tet_count();
    let limit = 10 * t;

    // Parallel copies of one vertex link, one more than the bound.
    let link = vertex_link(&sk, t, 0);
    let mut many = NormalVector::zero(NormalMode::OneNormal, t);
    for _ in 0..=limit {
        many = many.haken_sum(&link).unwrap();
    }
    let surf = realize(&many, &tri).unwrap();
    let two_sided: Vec<_> = surf
        .components()
        .iter()
        .filter(|c| c.two_sided)
        .collect();
    assert!(two_sided.len() > limit);
    let distinct: HashSet<Vec<u64>> = two_sided
        .iter()
        .map(|c| c.vector.coords_u64().unwrap())
        .collect();
    assert!(
        distinct.len() < two_sided.len(),
        "more than 10t two-sided components force vector-equal duplicates"
    );

    // Random admissible sums with enough components behave the same way.
    let basis = fundamental_vectors(&tri, NormalMode::OneNormal, &HilbertCaps::default()).unwrap();
    let mut rng = Rng::new(0x6e73_7572);
    for trial in 0..100 {
        let mut v = NormalVector::zero(NormalMode::OneNormal, t);
        for _ in 0..40 {
            let pick = &basis[rng.below(basis.len() as u64) as usize];
            if let Ok(sum) = v.haken_sum(pick) {
                v = sum;
            }
        }
        let mut rounds = 0;
        loop {
            let surf = realize(&v, &tri).unwrap();
            let two_sided: Vec<_> = surf
                .components()
                .iter()
                .filter(|c| c.two_sided)
                .collect();
            if two_sided.len() > limit {
                let distinct: HashSet<Vec<u64>> = two_sided
                    .iter()
                    .map(|c| c.vector.coords_u64().unwrap())
                    .collect();
                assert!(distinct.len() < two_sided.len(), "trial {}", trial);
                break;
            }
            rounds += 1;
            assert!(rounds <= 20, "component count must eventually exceed 10t");
            for _ in 0..10 {
                v = v.haken_sum(&link).unwrap();
            }
        }
    }
    pass(6, "over 10t two-sided components always repeat a vector");
}

#[test]
fn criterion_07_sphere_system() {
    let caps = HilbertCaps::default();
    for (name, tri) in [
        ("pentachoron", census::pentachoron()),
        ("doubled tetrahedron", census::doubled_tetrahedron()),
    ] {
        let t = tri.tet_count();
        let sk = build_skeleton(&tri);
        let sigma = construct_sigma(&tri, &caps).unwrap();

        assert!(sigma.steps.len() < 10 * t, "{}", name);
        let initial = BigUint::from(2 * sk.edge_count);
        let mut prev = initial.clone();
        let shift = BigUint::one() << (18 * t + 2);
        for step in &sigma.steps {
            assert_eq!(step.weight_before, prev, "{} step chain", name);
            assert!(
                step.weight_after < &step.weight_before * &shift,
                "{} step growth bound",
                name
            );
            prev = step.weight_after.clone();
        }
        assert_eq!(sigma.total_weight, prev, "{} final weight", name);
        assert_eq!(
            total_weight(&sigma.total, &tri).unwrap(),
            sigma.total_weight,
            "{}",
            name
        );
        assert!(
            sigma.total_weight < BigUint::one() << (185 * t * t),
            "{} total bound",
            name
        );
        assert!(sigma.components.len() <= 10 * t, "{}", name);

        let maximal = verify_maximal(&tri, &sigma, &caps).unwrap();
        assert!(maximal.all_pass, "{} must be maximal:\n{}", name, maximal.report());
    }
    pass(7, "sphere systems stay within the iteration and weight bounds and are maximal");
}

#[test]
fn criterion_08_octagon_extension() {
    let caps = HilbertCaps::default();
    for (name, tri) in [
        ("pentachoron", census::pentachoron()),
        ("doubled tetrahedron", census::doubled_tetrahedron()),
    ] {
        let t = tri.tet_count();
        let sk = build_skeleton(&tri);
        let sigma = construct_sigma(&tri, &caps).unwrap();
        let tilde = construct_tilde_sigma(&tri, &sigma, &caps).unwrap();

        for v in &tilde.octagon_spheres {
            assert!(v.octagon_count().is_one(), "{} octagon count", name);
            assert!(
                total_weight_with(v, &sk).unwrap() < BigUint::one() << (189 * t * t),
                "{} octagon sphere weight",
                name
            );
        }
        assert!(tilde.components.len() <= 10 * t, "{}", name);
        assert!(
            tilde.total_weight < BigUint::one() << (190 * t * t),
            "{} extended weight",
            name
        );
        assert!(
            tilde.total_weight < BigUint::one() << (196 * t * t),
            "{} headline bound",
            name
        );

        let bounds = bound_report(&tri, &sigma, &tilde).unwrap();
        assert!(bounds.all_pass, "{} bounds:\n{}", name, bounds.report());
    }
    pass(8, "octagon extensions carry single octagons and meet every bound");
}

#[test]
fn criterion_09_quantitative_bounds() {
    for n in 1..=10u64 {
        assert_eq!(
            bound_for_tets(n).unwrap(),
            BigUint::one() << (196 * n * n),
            "n = {}",
            n
        );
    }
    // For bridge targets 2^k the least admissible tetrahedron count n is
    // pinned between consecutive multiples of fourteen: (14n)^2 > k and
    // k >= (14(n-1))^2.
    for (k, expected) in [(1u64, 1u64), (2, 1), (196, 2), (784, 3)] {
        let b = BigUint::one() << k;
        let n = tets_for_bridge(&b).unwrap();
        assert_eq!(n, expected, "2^{}", k);
        assert!((14 * n).pow(2) > k, "2^{}", k);
        assert!(k >= (14 * (n - 1)).pow(2), "2^{}", k);
    }
    pass(9, "headline bounds and least tetrahedron counts are exact");
}

#[test]
fn criterion_10_deterministic_artifacts() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    for input in ["pentachoron.tri", "doubled_tetrahedron.tri"] {
        let dir = tempfile::tempdir().unwrap();
        let mut outputs = Vec::new();
        let mut trees = Vec::new();
        for run in 0..2 {
            let out_dir = dir.path().join(format!("run{}", run));
            let out = Command::new(env!("CARGO_BIN_EXE_nsurf"))
                .arg("tilde-sigma")
                .arg(data.join(input))
                .arg("--out")
                .arg(&out_dir)
                .output()
                .expect("binary runs");
            assert_eq!(out.status.code(), Some(0), "{}", input);
            outputs.push(out.stdout);
            trees.push(snapshot(&out_dir));
        }
        assert_eq!(outputs[0], outputs[1], "{} stdout must not vary", input);
        assert_eq!(trees[0], trees[1], "{} artifacts must not vary", input);
        assert!(trees[0].contains_key("manifest.txt"), "{}", input);
    }
    pass(10, "repeated construction runs are byte-identical");
}
