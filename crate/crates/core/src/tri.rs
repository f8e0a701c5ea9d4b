use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::perm::Perm4;

/// Local edge slots of a tetrahedron, indexed 0..6 in the fixed order
/// 01, 02, 03, 12, 13, 23.
pub const EDGE_ENDS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the local edge with the given endpoints.
pub fn edge_index(u: u8, v: u8) -> usize {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    EDGE_ENDS
        .iter()
        .position(|&(x, y)| (x, y) == (a, b))
        .expect("two distinct vertices in 0..4")
}

/// The three corners of face `k` (the face opposite vertex `k`), ascending.
pub fn face_corners(k: u8) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut i = 0;
    for v in 0..4u8 {
        if v != k {
            out[i] = v;
            i += 1;
        }
    }
    out
}

/// One side of a face gluing: face `face` of tetrahedron `tet` is glued to
/// the partner face `perm.apply(face)` of tetrahedron `to` via the vertex
/// bijection `perm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub to: usize,
    pub perm: Perm4,
}

impl Gluing {
    pub fn target_face(&self, face: u8) -> u8 {
        self.perm.apply(face)
    }
}

/// A closed triangulation given by face gluings.
///
/// Every tetrahedron has its four faces glued (no boundary). Face `k` of a
/// tetrahedron is the one opposite vertex `k`; a gluing's permutation maps
/// the vertices of the source tetrahedron to vertices of the target, sending
/// vertex `k` to the vertex opposite the target face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    gluings: Vec<[Gluing; 4]>,
}

impl Triangulation {
    /// Build from per-face gluings and check the two-sided consistency: the
    /// gluing map must be a fixed-point-free involution on face slots.
    pub fn new(gluings: Vec<[Gluing; 4]>) -> Result<Triangulation> {
        let n = gluings.len();
        if n == 0 {
            return Err(Error::invalid("triangulation has no tetrahedra"));
        }
        for (tet, faces) in gluings.iter().enumerate() {
            for (face, g) in faces.iter().enumerate() {
                if g.to >= n {
                    return Err(Error::invalid(format!(
                        "tetrahedron {} face {} glued to tetrahedron {} which does not exist",
                        tet, face, g.to
                    )));
                }
                let tface = g.target_face(face as u8);
                if (g.to, tface) == (tet, face as u8) {
                    return Err(Error::invalid(format!(
                        "tetrahedron {} face {} is glued to itself",
                        tet, face
                    )));
                }
                let back = &gluings[g.to][tface as usize];
                if back.to != tet
                    || back.perm != g.perm.inverse()
                    || back.target_face(tface) != face as u8
                {
                    return Err(Error::invalid(format!(
                        "gluing of tetrahedron {} face {} is not matched by the reverse gluing \
                         of tetrahedron {} face {} (face glued twice or inconsistently)",
                        tet, face, g.to, tface
                    )));
                }
            }
        }
        let tri = Triangulation { gluings };
        tri.check_edge_identifications()?;
        Ok(tri)
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: u8) -> &Gluing {
        &self.gluings[tet][face as usize]
    }

    /// Reject edges that are identified with themselves in reverse; such a
    /// gluing pattern does not describe a 3-manifold and would break the
    /// ordered identification of points along an edge.
    fn check_edge_identifications(&self) -> Result<()> {
        // Walk every (tet, edge) slot with a direction and follow the face
        // maps; if a directed edge slot ever reaches its own reversal, the
        // edge class is folded onto itself.
        let n = self.tet_count();
        // parity union-find over (tet, edge) slots: rank bit = orientation
        // relative to the class representative.
        let mut parent: Vec<usize> = (0..n * 6).collect();
        let mut flip: Vec<bool> = vec![false; n * 6];

        fn find(parent: &mut Vec<usize>, flip: &mut Vec<bool>, x: usize) -> (usize, bool) {
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
                let g = self.gluing(tet, face);
                let corners = face_corners(face);
                for i in 0..3 {
                    for j in (i + 1)..3 {
                        let (u, v) = (corners[i], corners[j]);
                        let (pu, pv) = (g.perm.apply(u), g.perm.apply(v));
                        let a = tet * 6 + edge_index(u, v);
                        let b = g.to * 6 + edge_index(pu, pv);
                        // The images land reversed when the map swaps the
                        // ascending order of the endpoints.
                        let reversed = (u < v) != (pu < pv);
                        let (ra, fa) = find(&mut parent, &mut flip, a);
                        let (rb, fb) = find(&mut parent, &mut flip, b);
                        if ra == rb {
                            if fa ^ fb != reversed {
                                return Err(Error::invalid(format!(
                                    "edge {}{} of tetrahedron {} is identified with itself \
                                     in reverse",
                                    u, v, tet
                                )));
                            }
                        } else {
                            parent[ra] = rb;
                            flip[ra] = fa ^ fb ^ reversed;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical text form; `parse` composed with this is the identity.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (tet, faces) in self.gluings.iter().enumerate() {
            let _ = write!(out, "tet {}:", tet);
            for g in faces {
                let _ = write!(out, " {}({})", g.to, g.perm.digits());
            }
            out.push('\n');
        }
        out
    }

    /// Parse a gluing table. One line per tetrahedron:
    ///
    /// ```text
    /// tet 0: 1(0123) 1(0123) 1(0123) 1(0123)
    /// ```
    ///
    /// The k-th entry describes face k (the face opposite vertex k): the
    /// target tetrahedron followed by the vertex images of 0,1,2,3. `#`
    /// starts a comment. The token `bdry` marks an unglued face, which is
    /// rejected here: only closed triangulations are supported.
    pub fn parse(input: &str) -> Result<Triangulation> {
        let mut rows: Vec<Option<[Gluing; 4]>> = Vec::new();
        for (idx, raw) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: lineno, msg };
            let rest = line
                .strip_prefix("tet")
                .ok_or_else(|| err(format!("expected 'tet <i>: ...', got '{}'", line)))?;
            let (idx_part, glue_part) = rest
                .split_once(':')
                .ok_or_else(|| err("missing ':' after tetrahedron index".into()))?;
            let tet: usize = idx_part
                .trim()
                .parse()
                .map_err(|_| err(format!("bad tetrahedron index '{}'", idx_part.trim())))?;
            let tokens: Vec<&str> = glue_part.split_whitespace().collect();
            if tokens.len() != 4 {
                return Err(err(format!(
                    "expected 4 face gluings, found {}",
                    tokens.len()
                )));
            }
            let mut faces = Vec::with_capacity(4);
            for (face, tok) in tokens.iter().enumerate() {
                if *tok == "bdry" {
                    return Err(err(format!(
                        "face {} of tetrahedron {} is unglued; only closed triangulations \
                         are supported",
                        face, tet
                    )));
                }
                let open = tok
                    .find('(')
                    .ok_or_else(|| err(format!("gluing '{}' is missing '('", tok)))?;
                if !tok.ends_with(')') {
                    return Err(err(format!("gluing '{}' is missing ')'", tok)));
                }
                let to: usize = tok[..open]
                    .parse()
                    .map_err(|_| err(format!("bad target tetrahedron in '{}'", tok)))?;
                let perm = Perm4::parse(&tok[open + 1..tok.len() - 1])
                    .map_err(|e| err(e.to_string()))?;
                faces.push(Gluing { to, perm });
            }
            if rows.len() <= tet {
                rows.resize(tet + 1, None);
            }
            if rows[tet].is_some() {
                return Err(err(format!("tetrahedron {} defined twice", tet)));
            }
            rows[tet] = Some([faces[0], faces[1], faces[2], faces[3]]);
        }
        let mut gluings = Vec::with_capacity(rows.len());
        for (tet, row) in rows.iter().enumerate() {
            match row {
                Some(g) => gluings.push(*g),
                None => {
                    return Err(Error::invalid(format!(
                        "tetrahedron {} is referenced but never defined",
                        tet
                    )))
                }
            }
        }
        Triangulation::new(gluings)
    }

    /// True if a coherent orientation of all tetrahedra exists.
    ///
    /// Two tetrahedra carrying orientations fit together across a gluing
    /// exactly when the vertex bijection is an odd permutation; propagating
    /// signs over the gluing graph decides global consistency.
    pub fn is_orientable(&self) -> bool {
        let n = self.tet_count();
        let mut sign = vec![0i8; n];
        for start in 0..n {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut stack = vec![start];
            while let Some(tet) = stack.pop() {
                for face in 0..4u8 {
                    let g = self.gluing(tet, face);
                    let want = -g.perm.sign() * sign[tet];
                    if sign[g.to] == 0 {
                        sign[g.to] = want;
                        stack.push(g.to);
                    } else if sign[g.to] != want {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Identified skeleton of a triangulation: classes of vertices, edges and
/// faces together with incidence counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonIndex {
    /// Class of each (tet, vertex) slot, indexed `tet * 4 + v`.
    pub vertex_class: Vec<usize>,
    /// Class of each (tet, edge) slot, indexed `tet * 6 + e`.
    pub edge_class: Vec<usize>,
    /// Class of each (tet, face) slot, indexed `tet * 4 + k`.
    pub face_class: Vec<usize>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    /// Slots of each vertex class, ascending.
    pub vertex_slots: Vec<Vec<(usize, u8)>>,
    /// Slots of each edge class, ascending; the degree of the edge is the
    /// length of its slot list.
    pub edge_slots: Vec<Vec<(usize, u8)>>,
    /// The two slots of each face class, ascending.
    pub face_slots: Vec<[(usize, u8); 2]>,
    /// Vertex classes at the ends of each edge class, taken from its least
    /// slot (ascending endpoint order of that slot).
    pub edge_end_classes: Vec<(usize, usize)>,
    /// Number of edge ends at each vertex class; a loop edge counts twice.
    pub vertex_edge_ends: Vec<usize>,
}

impl SkeletonIndex {
    pub fn edge_degree(&self, edge: usize) -> usize {
        self.edge_slots[edge].len()
    }

    /// Euler characteristic of the underlying space, which is 0 exactly for
    /// closed 3-manifold gluings.
    pub fn euler_characteristic(&self, tet_count: usize) -> i64 {
        self.vertex_count as i64 - self.edge_count as i64 + self.face_count as i64
            - tet_count as i64
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as representative so class numbering is
            // stable under slot order.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Classes numbered by ascending least representative.
    fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut class = vec![usize::MAX; n];
        let mut count = 0;
        for i in 0..n {
            let root = self.find(i);
            if class[root] == usize::MAX {
                class[root] = count;
                count += 1;
            }
            class[i] = class[root];
        }
        (class, count)
    }
}

/// Identify vertices, edges and faces under the face gluings.
pub fn build_skeleton(tri: &Triangulation) -> SkeletonIndex {
    let n = tri.tet_count();
    let mut vertices = UnionFind::new(n * 4);
    let mut edges = UnionFind::new(n * 6);
    let mut faces = UnionFind::new(n * 4);

    for tet in 0..n {
        for face in 0..4u8 {
            let g = tri.gluing(tet, face);
            faces.union(tet * 4 + face as usize, g.to * 4 + g.target_face(face) as usize);
            let corners = face_corners(face);
            for &u in &corners {
                vertices.union(tet * 4 + u as usize, g.to * 4 + g.perm.apply(u) as usize);
            }
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let (u, v) = (corners[i], corners[j]);
                    edges.union(
                        tet * 6 + edge_index(u, v),
                        g.to * 6 + edge_index(g.perm.apply(u), g.perm.apply(v)),
                    );
                }
            }
        }
    }

    let (vertex_class, vertex_count) = vertices.classes();
    let (edge_class, edge_count) = edges.classes();
    let (face_class, face_count) = faces.classes();

    let mut vertex_slots = vec![Vec::new(); vertex_count];
    for tet in 0..n {
        for v in 0..4u8 {
            vertex_slots[vertex_class[tet * 4 + v as usize]].push((tet, v));
        }
    }
    let mut edge_slots = vec![Vec::new(); edge_count];
    for tet in 0..n {
        for e in 0..6u8 {
            edge_slots[edge_class[tet * 6 + e as usize]].push((tet, e));
        }
    }
    let mut face_slot_lists = vec![Vec::new(); face_count];
    for tet in 0..n {
        for k in 0..4u8 {
            face_slot_lists[face_class[tet * 4 + k as usize]].push((tet, k));
        }
    }
    let face_slots: Vec<[(usize, u8); 2]> = face_slot_lists
        .into_iter()
        .map(|slots| {
            debug_assert_eq!(slots.len(), 2);
            [slots[0], slots[1]]
        })
        .collect();

    let edge_end_classes: Vec<(usize, usize)> = edge_slots
        .iter()
        .map(|slots| {
            let (tet, e) = slots[0];
            let (u, v) = EDGE_ENDS[e as usize];
            (
                vertex_class[tet * 4 + u as usize],
                vertex_class[tet * 4 + v as usize],
            )
        })
        .collect();

    let mut vertex_edge_ends = vec![0usize; vertex_count];
    for &(a, b) in &edge_end_classes {
        vertex_edge_ends[a] += 1;
        vertex_edge_ends[b] += 1;
    }

    SkeletonIndex {
        vertex_class,
        edge_class,
        face_class,
        vertex_count,
        edge_count,
        face_count,
        vertex_slots,
        edge_slots,
        face_slots,
        edge_end_classes,
        vertex_edge_ends,
    }
}
