//! Small built-in triangulations used as test inputs and CLI examples.

use crate::perm::Perm4;
use crate::tri::{Gluing, Triangulation};

/// Boundary of the 4-simplex on global vertices 0..5: five tetrahedra, one
/// per omitted vertex, glued by the order-preserving vertex maps. This is a
/// 3-sphere with five vertices, ten edges (all of degree 3) and ten faces.
pub fn pentachoron() -> Triangulation {
    // Local vertex m of tetrahedron i is the m-th smallest global vertex
    // distinct from i.
    let locals: Vec<[u8; 4]> = (0..5u8)
        .map(|i| {
            let mut v = [0u8; 4];
            let mut n = 0;
            for g in 0..5u8 {
                if g != i {
                    v[n] = g;
                    n += 1;
                }
            }
            v
        })
        .collect();
    let local_index = |tet: usize, global: u8| -> u8 {
        locals[tet].iter().position(|&g| g == global).unwrap() as u8
    };

    let mut gluings = Vec::with_capacity(5);
    for i in 0..5usize {
        let mut faces = Vec::with_capacity(4);
        for k in 0..4u8 {
            let j = locals[i][k as usize] as usize;
            let mut images = [0u8; 4];
            for m in 0..4u8 {
                let global = locals[i][m as usize];
                images[m as usize] = if m == k {
                    local_index(j, i as u8)
                } else {
                    local_index(j, global)
                };
            }
            faces.push(Gluing {
                to: j,
                perm: Perm4::new(images).unwrap(),
            });
        }
        gluings.push([faces[0], faces[1], faces[2], faces[3]]);
    }
    Triangulation::new(gluings).expect("pentachoron table is consistent")
}

/// Two tetrahedra glued to each other along all four faces by the identity:
/// the double of a tetrahedron, a 3-sphere with four vertices and six edges,
/// every edge of degree 2.
pub fn doubled_tetrahedron() -> Triangulation {
    let g = |to: usize| Gluing {
        to,
        perm: Perm4::IDENTITY,
    };
    Triangulation::new(vec![[g(1); 4], [g(0); 4]]).expect("double table is consistent")
}

fn from_table(table: &[[(usize, [u8; 4]); 4]]) -> Triangulation {
    let gluings = table
        .iter()
        .map(|faces| {
            faces.map(|(to, images)| Gluing {
                to,
                perm: Perm4::new(images).expect("census table permutation is valid"),
            })
        })
        .collect();
    Triangulation::new(gluings).expect("census table is consistent")
}

/// One tetrahedron with its faces glued in two pairs: a 3-sphere with two
/// vertices, three edges (degrees 1, 4 and 1) and two faces. This is the
/// least one-tetrahedron table, in canonical text order, whose underlying
/// space is a manifold; the tests below re-derive it by exhaustive search.
pub fn one_tet_sphere() -> Triangulation {
    from_table(&[[
        (0, [1, 0, 2, 3]),
        (0, [1, 0, 2, 3]),
        (0, [0, 1, 3, 2]),
        (0, [0, 1, 3, 2]),
    ]])
}

/// Two tetrahedra forming a closed orientable manifold with first homology
/// Z/2, which identifies it as real projective 3-space: one vertex, three
/// edges (degrees 3, 8 and 1), four faces. Least connected such table in
/// canonical text order, re-derived by exhaustive search in the tests.
pub fn projective_space() -> Triangulation {
    from_table(&[
        [
            (0, [1, 0, 2, 3]),
            (0, [1, 0, 2, 3]),
            (1, [0, 1, 2, 3]),
            (1, [2, 3, 0, 1]),
        ],
        [
            (1, [3, 2, 0, 1]),
            (0, [2, 3, 0, 1]),
            (0, [0, 1, 2, 3]),
            (1, [2, 3, 1, 0]),
        ],
    ])
}
