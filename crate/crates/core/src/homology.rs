//! First integral homology of a closed triangulation, computed from the
//! boundary maps of the identified skeleton. Used to tell the built-in
//! triangulations apart and to sanity-check hand-entered gluing tables.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::lattice::{smith, Mat};
use crate::tri::{build_skeleton, edge_index, face_corners, SkeletonIndex, Triangulation};

/// Finitely generated abelian group in invariant-factor form: a free part
/// of the given rank and one cyclic factor per torsion entry, each entry
/// greater than one and dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Homology {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn label(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for _ in 0..self.rank {
            parts.push("Z".to_string());
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Orientation of each (tet, edge) slot relative to its class: `false` when
/// the slot's ascending endpoint order agrees with the class representative,
/// `true` when it is reversed. The representative is the least slot of the
/// class, matching `SkeletonIndex::edge_end_classes`.
fn edge_slot_flips(tri: &Triangulation, sk: &SkeletonIndex) -> Vec<bool> {
    let n = tri.tet_count();
    let mut parent: Vec<usize> = (0..n * 6).collect();
    let mut flip = vec![false; n * 6];

    fn find(parent: &mut [usize], flip: &mut [bool], x: usize) -> (usize, bool) {
        if parent[x] == x {
            return (x, false);
        }
        let (root, f) = find(parent, flip, parent[x]);
        parent[x] = root;
        flip[x] ^= f;
        (root, flip[x])
    }

    for tet in 0..n {
        for face in 0..4u8 {
            let g = tri.gluing(tet, face);
            let corners = face_corners(face);
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let (u, v) = (corners[i], corners[j]);
                    let (pu, pv) = (g.perm.apply(u), g.perm.apply(v));
                    let a = tet * 6 + edge_index(u, v);
                    let b = g.to * 6 + edge_index(pu, pv);
                    let reversed = (u < v) != (pu < pv);
                    let (ra, fa) = find(&mut parent, &mut flip, a);
                    let (rb, fb) = find(&mut parent, &mut flip, b);
                    if ra != rb {
                        parent[ra] = rb;
                        flip[ra] = fa ^ fb ^ reversed;
                    }
                }
            }
        }
    }

    // Validation already rejected reversing self-identifications, so the
    // parity of a slot against the least slot of its class is well defined.
    let mut least_slot = vec![usize::MAX; sk.edge_count];
    for slot in 0..n * 6 {
        let c = sk.edge_class[slot];
        if least_slot[c] == usize::MAX {
            least_slot[c] = slot;
        }
    }
    (0..n * 6)
        .map(|slot| {
            let (_, f) = find(&mut parent, &mut flip, slot);
            let (_, fr) = find(&mut parent, &mut flip, least_slot[sk.edge_class[slot]]);
            f ^ fr
        })
        .collect()
}

/// H1 of the underlying space as ker d1 / im d2 over the class skeleton,
/// read off the Smith normal forms of the two boundary matrices.
pub fn first_homology(tri: &Triangulation) -> Homology {
    let sk = build_skeleton(tri);
    let flips = edge_slot_flips(tri, &sk);

    // d1: vertices x edges, column e is (head - tail) of the class
    // representative's ascending orientation.
    let mut d1: Mat = vec![vec![BigInt::zero(); sk.edge_count]; sk.vertex_count];
    for (e, &(a, b)) in sk.edge_end_classes.iter().enumerate() {
        if a != b {
            d1[a][e] -= BigInt::one();
            d1[b][e] += BigInt::one();
        }
    }

    // d2: edges x faces, from the least slot of each face class. With the
    // corners A < B < C of the face, the boundary cycle is AB + BC - AC, and
    // each term flips sign when the slot is reversed against its class.
    let mut d2: Mat = vec![vec![BigInt::zero(); sk.face_count]; sk.edge_count];
    for (fc, slots) in sk.face_slots.iter().enumerate() {
        let (tet, face) = slots[0];
        let c = face_corners(face);
        for (i, j, sign) in [(0usize, 1usize, 1i64), (1, 2, 1), (0, 2, -1)] {
            let slot = tet * 6 + edge_index(c[i], c[j]);
            let s = if flips[slot] { -sign } else { sign };
            d2[sk.edge_class[slot]][fc] += BigInt::from(s);
        }
    }

    let r1 = smith(&d1).rank;
    let s2 = smith(&d2);
    let torsion: Vec<BigInt> = s2
        .diagonal()
        .into_iter()
        .map(|d| if d.sign() == num_bigint::Sign::Minus { -d } else { d })
        .filter(|d| d > &BigInt::one())
        .collect();
    Homology {
        rank: sk.edge_count - r1 - s2.rank,
        torsion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;

    #[test]
    fn spheres_have_trivial_first_homology() {
        let h = first_homology(&census::pentachoron());
        assert!(h.is_trivial(), "pentachoron H1 = {}", h.label());
        let h = first_homology(&census::doubled_tetrahedron());
        assert!(h.is_trivial(), "doubled tetrahedron H1 = {}", h.label());
    }

    #[test]
    fn labels_read_naturally() {
        let h = Homology {
            rank: 1,
            torsion: vec![BigInt::from(2)],
        };
        assert_eq!(h.label(), "Z + Z/2");
        let t = Homology {
            rank: 0,
            torsion: vec![],
        };
        assert_eq!(t.label(), "0");
    }
}
