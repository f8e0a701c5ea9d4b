//! Shared helpers for the acceptance suite: an exhaustive enumerator of
//! admissible vectors up to a weight budget, independent of the Hilbert
//! basis machinery, and a small deterministic RNG so randomized checks are
//! reproducible.

// Each test target compiles its own copy and uses a different subset.
#![allow(dead_code)]

use num_bigint::BigUint;
use nsurf::coords::{is_admissible, total_weight_with, DiscKind, NormalMode, NormalVector};
use nsurf::perm::Perm4;
use nsurf::tri::{build_skeleton, face_corners, SkeletonIndex, Triangulation};

/// One way a single tetrahedron can carry normal discs: triangle counts at
/// each corner plus at most one quad or octagon kind.
#[derive(Clone)]
struct Pattern {
    coords: Vec<u64>,
    /// Normal arcs induced on each face at each cut corner, `[face][corner]`
    /// (entries with corner == face stay zero).
    arcs: [[u64; 4]; 4],
    /// Crossings of each local edge, indexed like `EDGE_ENDS`.
    edge_cross: [u64; 6],
}

fn pattern_from_coords(mode: NormalMode, coords: Vec<u64>) -> Pattern {
    let mut arcs = [[0u64; 4]; 4];
    let mut edge_cross = [0u64; 6];
    for kind in DiscKind::all(mode) {
        let n = coords[kind.index_in_tet()];
        if n == 0 {
            continue;
        }
        for face in 0..4u8 {
            for cut in face_corners(face) {
                arcs[face as usize][cut as usize] += n * kind.arc_incidence(face, cut) as u64;
            }
        }
        for e in 0..6 {
            edge_cross[e] += n * kind.edge_incidence(e) as u64;
        }
    }
    Pattern { coords, arcs, edge_cross }
}

/// The weight of a surface counts each edge class once, so a pattern's
/// contribution is the crossings of the local edges that are the least slot
/// of their class; all other slots repeat values counted elsewhere.
fn lb_contribution(p: &Pattern, first_mask: &[bool; 6]) -> u64 {
    (0..6).map(|e| if first_mask[e] { p.edge_cross[e] } else { 0 }).sum()
}

/// Patterns whose arcs realize the required triples on the given faces. For
/// a tetrahedron with no required faces the search runs over everything
/// whose crossings on the first-slot edges stay within `budget`; other
/// coordinates are capped by `max_weight`, since each disc copy crosses
/// some edge and no edge of an admissible vector is crossed more often
/// than the total weight. With required faces the triangle counts are
/// determined up to one free corner, capped the same way.
fn candidate_patterns(
    mode: NormalMode,
    required: &[(u8, [u64; 3])],
    first_mask: &[bool; 6],
    budget: u64,
    max_weight: u64,
) -> Vec<Pattern> {
    let cpt = mode.coords_per_tet();
    let mut out = Vec::new();
    if required.is_empty() {
        // Crossings each disc kind contributes to the first-slot edges.
        let masked: Vec<u64> = DiscKind::all(mode)
            .map(|k| {
                (0..6)
                    .filter(|&e| first_mask[e])
                    .map(|e| k.edge_incidence(e) as u64)
                    .sum()
            })
            .collect();
        let cap = |acc: u64, m: u64| if m > 0 { (budget - acc) / m } else { max_weight };
        for t0 in 0..=cap(0, masked[0]) {
            let a0 = t0 * masked[0];
            for t1 in 0..=cap(a0, masked[1]) {
                let a1 = a0 + t1 * masked[1];
                for t2 in 0..=cap(a1, masked[2]) {
                    let a2 = a1 + t2 * masked[2];
                    for t3 in 0..=cap(a2, masked[3]) {
                        let a3 = a2 + t3 * masked[3];
                        let mut coords = vec![0u64; cpt];
                        coords[0] = t0;
                        coords[1] = t1;
                        coords[2] = t2;
                        coords[3] = t3;
                        out.push(pattern_from_coords(mode, coords.clone()));
                        for kind in DiscKind::all(mode) {
                            if !kind.is_quad_or_octagon() {
                                continue;
                            }
                            let qmax = cap(a3, masked[kind.index_in_tet()]).min(max_weight);
                            for q in 1..=qmax {
                                let mut with_quad = coords.clone();
                                with_quad[kind.index_in_tet()] = q;
                                out.push(pattern_from_coords(mode, with_quad));
                            }
                        }
                    }
                }
            }
        }
        return out;
    }

    let kinds: Vec<Option<DiscKind>> = std::iter::once(None)
        .chain(DiscKind::all(mode).filter(|k| k.is_quad_or_octagon()).map(Some))
        .collect();
    for kind in kinds {
        let qmax = match kind {
            None => 0,
            Some(k) => {
                let mut m = max_weight;
                for &(f, r) in required {
                    for (i, &cut) in face_corners(f).iter().enumerate() {
                        if k.arc_incidence(f, cut) > 0 {
                            m = m.min(r[i]);
                        }
                    }
                }
                m
            }
        };
        let qmin = if kind.is_some() { 1 } else { 0 };
        'q: for q in qmin..=qmax {
            // Triangle counts forced by the required arcs.
            let mut t = [None::<u64>; 4];
            for &(f, r) in required {
                for (i, &cut) in face_corners(f).iter().enumerate() {
                    let from_kind = kind.map_or(0, |k| q * k.arc_incidence(f, cut) as u64);
                    if r[i] < from_kind {
                        continue 'q;
                    }
                    let forced = r[i] - from_kind;
                    match t[cut as usize] {
                        None => t[cut as usize] = Some(forced),
                        Some(prev) if prev != forced => continue 'q,
                        Some(_) => {}
                    }
                }
            }
            let free: Vec<usize> = (0..4).filter(|&v| t[v].is_none()).collect();
            assert!(free.len() <= 1, "at most the opposite corner can stay free");
            let free_range = if free.is_empty() { 0..=0 } else { 0..=max_weight };
            for tf in free_range {
                let mut coords = vec![0u64; cpt];
                for v in 0..4 {
                    coords[v] = t[v].unwrap_or(tf);
                }
                if let Some(k) = kind {
                    coords[k.index_in_tet()] = q;
                }
                let p = pattern_from_coords(mode, coords);
                if required.iter().all(|&(f, r)| {
                    face_corners(f)
                        .iter()
                        .enumerate()
                        .all(|(i, &cut)| p.arcs[f as usize][cut as usize] == r[i])
                }) {
                    out.push(p);
                }
            }
        }
    }
    out
}

struct Enumerator<'a> {
    tri: &'a Triangulation,
    sk: SkeletonIndex,
    mode: NormalMode,
    max_weight: u64,
    /// Faces of tet k glued to an earlier tetrahedron: (face, tet, face, perm).
    external: Vec<Vec<(u8, usize, u8, Perm4)>>,
    /// Face pairs glued within tet k: (face, face, perm), listed once.
    internal: Vec<Vec<(u8, u8, Perm4)>>,
    /// Which local edges are the least slot of their edge class.
    first_mask: Vec<[bool; 6]>,
    out: Vec<NormalVector>,
}

/// Every admissible vector of `tri` with total weight at most `max_weight`,
/// including zero, found by exhaustive search over per-tetrahedron disc
/// patterns with arc counts matched across glued faces. This enumerates
/// solutions of the matching equations directly, without any reference to
/// the Hilbert basis computation it is used to check.
pub fn enumerate_admissible(
    tri: &Triangulation,
    mode: NormalMode,
    max_weight: u64,
) -> Vec<NormalVector> {
    let tets = tri.tet_count();
    let sk = build_skeleton(tri);
    let mut external = vec![Vec::new(); tets];
    let mut internal = vec![Vec::new(); tets];
    for k in 0..tets {
        for f in 0..4u8 {
            let g = tri.gluing(k, f);
            let tf = g.target_face(f);
            if g.to < k {
                external[k].push((f, g.to, tf, g.perm));
            } else if g.to == k && f < tf {
                internal[k].push((f, tf, g.perm));
            }
        }
    }
    let mut first_mask = vec![[false; 6]; tets];
    for slots in &sk.edge_slots {
        let (kt, ke) = slots[0];
        first_mask[kt][ke as usize] = true;
    }
    let mut en = Enumerator {
        tri,
        sk,
        mode,
        max_weight,
        external,
        internal,
        first_mask,
        out: Vec::new(),
    };
    let mut chosen = Vec::with_capacity(tets);
    en.search(&mut chosen, 0);
    en.out
}

impl Enumerator<'_> {
    fn search(&mut self, chosen: &mut Vec<Pattern>, weight: u64) {
        let k = chosen.len();
        if k == self.tri.tet_count() {
            let coords: Vec<BigUint> = chosen
                .iter()
                .flat_map(|p| p.coords.iter().map(|&c| BigUint::from(c)))
                .collect();
            let v = NormalVector::from_coords(self.mode, self.tri.tet_count(), coords).unwrap();
            is_admissible(&v, self.tri).expect("enumerated vector must be admissible");
            assert_eq!(
                total_weight_with(&v, &self.sk).unwrap(),
                BigUint::from(weight),
                "first-slot accounting must equal the vector weight"
            );
            self.out.push(v);
            return;
        }
        let required: Vec<(u8, [u64; 3])> = self.external[k]
            .iter()
            .map(|&(f, j, tf, perm)| {
                let mut r = [0u64; 3];
                for (i, &cut) in face_corners(f).iter().enumerate() {
                    r[i] = chosen[j].arcs[tf as usize][perm.apply(cut) as usize];
                }
                (f, r)
            })
            .collect();
        let budget = self.max_weight - weight;
        'candidate: for p in
            candidate_patterns(self.mode, &required, &self.first_mask[k], budget, self.max_weight)
        {
            for &(f, tf, perm) in &self.internal[k] {
                for cut in face_corners(f) {
                    if p.arcs[f as usize][cut as usize]
                        != p.arcs[tf as usize][perm.apply(cut) as usize]
                    {
                        continue 'candidate;
                    }
                }
            }
            let step = lb_contribution(&p, &self.first_mask[k]);
            if weight + step > self.max_weight {
                continue;
            }
            chosen.push(p);
            self.search(chosen, weight + step);
            chosen.pop();
        }
    }
}

/// All regular files under `dir`, keyed by relative path.
pub fn snapshot(dir: &std::path::Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    let mut files = std::collections::BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).expect("readable dir") {
            let path = entry.expect("dir entry").path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                files.insert(rel, std::fs::read(&path).expect("readable file"));
            }
        }
    }
    files
}

/// xorshift64* generator; deterministic across platforms.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}
