//! Canonical geometric realization of admissible vectors as embedded
//! surfaces.
//!
//! An admissible vector determines an embedded surface up to isotopy keeping
//! the two-skeleton fixed, so a single canonical embedding suffices. Disc
//! copies are stacked along each edge in a fixed nesting order, boundary
//! arcs are matched order-preservingly across face gluings, and the result
//! is split into connected components with their orientation data.
//!
//! The stacking convention: walking an edge from its lower end, first the
//! triangle copies at that end (copy 0 innermost), then the tetrahedron's
//! single quad or octagon family, then the triangle copies at the far end in
//! reverse. Quad and octagon copies are numbered from the side of the pair
//! containing vertex 0; on a doubled octagon edge the copies nest with copy
//! 0 outermost along the first pair's edge and innermost along the other.
//! Every arc's two endpoints then sit at equal distance ranks from its cut
//! vertex, which is checked eagerly during construction.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::coords::{euler_characteristic, is_admissible, total_weight_with, DiscKind, NormalVector};
use crate::error::{Error, Result};
use crate::tri::{build_skeleton, edge_index, face_corners, Triangulation, EDGE_ENDS};

/// Largest number of disc copies a single realization may allocate.
const MAX_COPIES: usize = 1_000_000;

/// One disc copy of the realized surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscCopy {
    pub tet: usize,
    pub kind: DiscKind,
    pub copy: usize,
}

/// One surface point on an edge slot: which disc copy crosses, and which of
/// the copy's crossings of this edge it is (octagons cross a doubled edge
/// twice; `hit` 0 is the crossing nearer the edge's lower end).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub kind: DiscKind,
    pub copy: usize,
    pub hit: u8,
}

/// A surface point on an edge slot, addressed by position from the lower
/// end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgePoint {
    pub tet: usize,
    pub edge: usize,
    pub pos: usize,
}

/// A boundary arc of a disc copy inside one face of one tetrahedron,
/// cutting off the corner `cut`. `rank` counts arcs of the same corner from
/// the cut vertex outward; the endpoints are ordered by the other endpoint
/// vertex of their edge, ascending.
#[derive(Clone, Debug)]
pub struct Arc {
    pub tet: usize,
    pub face: u8,
    pub cut: u8,
    pub rank: usize,
    pub copy_id: usize,
    pub ends: [EdgePoint; 2],
}

/// A matched pair of arcs across a face gluing. `end_map[j]` is the end of
/// `b` identified with end `j` of `a`; `ambient_flip` records whether the
/// gluing reverses the ambient orientation frame.
#[derive(Clone, Copy, Debug)]
pub struct ArcPairing {
    pub a: usize,
    pub b: usize,
    pub end_map: [usize; 2],
    pub ambient_flip: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Sphere,
    ProjectivePlane,
    Torus,
    KleinBottle,
    Other(i64),
}

impl SurfaceKind {
    fn classify(euler: i64, orientable: bool) -> SurfaceKind {
        match (euler, orientable) {
            (2, _) => SurfaceKind::Sphere,
            (1, _) => SurfaceKind::ProjectivePlane,
            (0, true) => SurfaceKind::Torus,
            (0, false) => SurfaceKind::KleinBottle,
            (chi, _) => SurfaceKind::Other(chi),
        }
    }

    pub fn label(self) -> String {
        match self {
            SurfaceKind::Sphere => "sphere".into(),
            SurfaceKind::ProjectivePlane => "projective-plane".into(),
            SurfaceKind::Torus => "torus".into(),
            SurfaceKind::KleinBottle => "klein-bottle".into(),
            SurfaceKind::Other(chi) => format!("other(chi={})", chi),
        }
    }
}

/// One connected component of a realized surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vector: NormalVector,
    pub weight: BigUint,
    pub euler: i64,
    pub octagons: BigUint,
    pub orientable: bool,
    pub two_sided: bool,
    pub kind: SurfaceKind,
}

#[derive(Clone, Debug)]
pub struct RealizedSurface {
    pub vector: NormalVector,
    pub copies: Vec<DiscCopy>,
    /// Ordered crossings of each edge slot, indexed `tet * 6 + edge`.
    pub slots: Vec<Vec<Crossing>>,
    pub arcs: Vec<Arc>,
    pub pairings: Vec<ArcPairing>,
    /// Component index of each disc copy.
    pub component_of: Vec<usize>,
    pub components: Vec<Component>,
}

/// Union-find with a parity bit along each link, used for orientation sign
/// propagation. Inconsistent unions are recorded per class instead of
/// failing, since an inconsistency is an answer (non-orientable), not an
/// error.
struct ParityUf {
    parent: Vec<usize>,
    flip: Vec<bool>,
    conflict: Vec<bool>,
}

impl ParityUf {
    fn new(n: usize) -> ParityUf {
        ParityUf {
            parent: (0..n).collect(),
            flip: vec![false; n],
            conflict: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, f) = self.find(self.parent[x]);
        self.parent[x] = root;
        self.flip[x] ^= f;
        (root, self.flip[x])
    }

    fn union(&mut self, a: usize, b: usize, flip: bool) {
        let (ra, fa) = self.find(a);
        let (rb, fb) = self.find(b);
        if ra == rb {
            if fa ^ fb != flip {
                self.conflict[ra] = true;
            }
        } else {
            self.parent[ra] = rb;
            self.flip[ra] = fa ^ fb ^ flip;
            self.conflict[rb] |= self.conflict[ra];
        }
    }

    fn consistent(&mut self, x: usize) -> bool {
        let (root, _) = self.find(x);
        !self.conflict[root]
    }
}

/// Plain union-find for component grouping.
struct Uf {
    parent: Vec<usize>,
}

impl Uf {
    fn new(n: usize) -> Uf {
        Uf {
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
            // Keep the smaller index as the representative so component
            // numbering is canonical.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Realize an admissible vector as a canonically embedded surface.
pub fn realize(v: &NormalVector, tri: &Triangulation) -> Result<RealizedSurface> {
    is_admissible(v, tri)?;
    let sk = build_skeleton(tri);
    let tets = tri.tet_count();

    // Per-tet disc counts as machine integers.
    let mut tri_w = vec![[0usize; 4]; tets];
    let mut middle: Vec<Option<(DiscKind, usize)>> = vec![None; tets];
    let mut total_copies = 0usize;
    for t in 0..tets {
        for kind in DiscKind::all(v.mode()) {
            let w = v.coord(t, kind);
            if w.is_zero() {
                continue;
            }
            let w = usize::try_from(w).map_err(|_| Error::Resource {
                what: "disc copies in one tetrahedron".into(),
                limit: MAX_COPIES,
            })?;
            total_copies = total_copies.saturating_add(w);
            match kind {
                DiscKind::Triangle(u) => tri_w[t][u as usize] = w,
                other => middle[t] = Some((other, w)),
            }
        }
    }
    if total_copies > MAX_COPIES {
        return Err(Error::Resource {
            what: "disc copies".into(),
            limit: MAX_COPIES,
        });
    }

    // Canonical copy numbering: tetrahedra ascending, disc kinds in their
    // per-tet order, copies ascending.
    let mut copies: Vec<DiscCopy> = Vec::with_capacity(total_copies);
    let mut copy_base: HashMap<(usize, DiscKind), usize> = HashMap::new();
    for t in 0..tets {
        for kind in DiscKind::all(v.mode()) {
            let w = match kind {
                DiscKind::Triangle(u) => tri_w[t][u as usize],
                other => middle[t]
                    .filter(|(m, _)| *m == other)
                    .map_or(0, |(_, q)| q),
            };
            if w > 0 {
                copy_base.insert((t, kind), copies.len());
                for c in 0..w {
                    copies.push(DiscCopy { tet: t, kind, copy: c });
                }
            }
        }
    }
    let copy_id = |t: usize, kind: DiscKind, c: usize| -> usize { copy_base[&(t, kind)] + c };

    // Stack the crossings of every edge slot.
    let mut slots: Vec<Vec<Crossing>> = vec![Vec::new(); tets * 6];
    for t in 0..tets {
        for e in 0..6 {
            let (u, w) = EDGE_ENDS[e];
            let list = &mut slots[t * 6 + e];
            for c in 0..tri_w[t][u as usize] {
                list.push(Crossing { kind: DiscKind::Triangle(u), copy: c, hit: 0 });
            }
            if let Some((mkind, q)) = middle[t] {
                let s = match mkind {
                    DiscKind::Quad(s) | DiscKind::Octagon(s) => s,
                    DiscKind::Triangle(_) => unreachable!("middle family is never a triangle"),
                };
                match mkind.edge_incidence(e) {
                    0 => {}
                    1 => {
                        // Exactly one endpoint lies in the pair containing
                        // vertex 0; copy 0 sits nearest that endpoint.
                        if s.in_first_pair(u) {
                            for c in 0..q {
                                list.push(Crossing { kind: mkind, copy: c, hit: 0 });
                            }
                        } else {
                            for c in (0..q).rev() {
                                list.push(Crossing { kind: mkind, copy: c, hit: 0 });
                            }
                        }
                    }
                    2 => {
                        // A doubled octagon edge carries a nested family of
                        // crossing pairs; along the first pair's edge copy 0
                        // is outermost, along the other innermost.
                        let outermost_first = s.in_first_pair(u) && s.in_first_pair(w);
                        debug_assert!(s.pairs_edge(u, w));
                        if outermost_first {
                            for c in 0..q {
                                list.push(Crossing { kind: mkind, copy: c, hit: 0 });
                            }
                            for c in (0..q).rev() {
                                list.push(Crossing { kind: mkind, copy: c, hit: 1 });
                            }
                        } else {
                            for c in (0..q).rev() {
                                list.push(Crossing { kind: mkind, copy: c, hit: 0 });
                            }
                            for c in 0..q {
                                list.push(Crossing { kind: mkind, copy: c, hit: 1 });
                            }
                        }
                    }
                    _ => unreachable!("a disc crosses an edge at most twice"),
                }
            }
            for c in (0..tri_w[t][w as usize]).rev() {
                list.push(Crossing { kind: DiscKind::Triangle(w), copy: c, hit: 0 });
            }
        }
    }

    // Build the boundary arcs corner by corner, verifying against the edge
    // stacking as we go: the arc of rank r from a cut vertex must meet both
    // of its edges at the r-th crossing from that vertex.
    let mut arcs: Vec<Arc> = Vec::new();
    let mut arcs_at: HashMap<(usize, u8, u8), Vec<usize>> = HashMap::new();
    // Arc ends incident to each flat slot position.
    let slot_base = |t: usize, e: usize| t * 6 + e;
    for t in 0..tets {
        for f in 0..4u8 {
            for &cut in &face_corners(f) {
                let n_tri = tri_w[t][cut as usize];
                let m = middle[t].filter(|(mk, _)| mk.arc_incidence(f, cut) == 1);
                let n = n_tri + m.map_or(0, |(_, q)| q);
                let mut ids = Vec::with_capacity(n);
                for rank in 0..n {
                    let (kind, copy) = if rank < n_tri {
                        (DiscKind::Triangle(cut), rank)
                    } else {
                        let (mkind, q) = m.expect("middle arcs exist at this corner");
                        let s = match mkind {
                            DiscKind::Quad(s) | DiscKind::Octagon(s) => s,
                            DiscKind::Triangle(_) => unreachable!(),
                        };
                        let offset = rank - n_tri;
                        let copy = if s.in_first_pair(cut) { offset } else { q - 1 - offset };
                        (mkind, copy)
                    };
                    let mut others: Vec<u8> =
                        face_corners(f).iter().copied().filter(|&o| o != cut).collect();
                    others.sort_unstable();
                    let mut ends = Vec::with_capacity(2);
                    for &o in &others {
                        let (lo, hi) = (cut.min(o), cut.max(o));
                        let e = edge_index(lo, hi);
                        let len = slots[slot_base(t, e)].len();
                        let pos = if cut == lo { rank } else { len - 1 - rank };
                        let expected_hit = if kind.edge_incidence(e) == 2 {
                            u8::from(cut != lo)
                        } else {
                            0
                        };
                        let entry = slots[slot_base(t, e)][pos];
                        if entry != (Crossing { kind, copy, hit: expected_hit }) {
                            return Err(Error::internal(format!(
                                "edge stacking does not match arc ranks at tetrahedron {} \
                                 edge {} position {}",
                                t, e, pos
                            )));
                        }
                        ends.push(EdgePoint { tet: t, edge: e, pos });
                    }
                    ids.push(arcs.len());
                    arcs.push(Arc {
                        tet: t,
                        face: f,
                        cut,
                        rank,
                        copy_id: copy_id(t, kind, copy),
                        ends: [ends[0], ends[1]],
                    });
                }
                arcs_at.insert((t, f, cut), ids);
            }
        }
    }

    // Match arcs across every face gluing, order-preservingly per corner.
    let mut pairings: Vec<ArcPairing> = Vec::new();
    for slots_of_face in &sk.face_slots {
        let (t0, f0) = slots_of_face[0];
        let g = tri.gluing(t0, f0);
        let (t1, f1) = (g.to, g.target_face(f0));
        debug_assert!(slots_of_face.contains(&(t1, f1)));
        let ambient_flip = g.perm.sign() == 1;
        for &cut in &face_corners(f0) {
            let cut1 = g.perm.apply(cut);
            let l0 = &arcs_at[&(t0, f0, cut)];
            let l1 = &arcs_at[&(t1, f1, cut1)];
            if l0.len() != l1.len() {
                return Err(Error::internal(format!(
                    "unmatched arcs across faces of tetrahedra {} and {}",
                    t0, t1
                )));
            }
            let mut others: Vec<u8> =
                face_corners(f0).iter().copied().filter(|&o| o != cut).collect();
            others.sort_unstable();
            let end_map = if g.perm.apply(others[0]) < g.perm.apply(others[1]) {
                [0, 1]
            } else {
                [1, 0]
            };
            for (&a, &b) in l0.iter().zip(l1) {
                pairings.push(ArcPairing { a, b, end_map, ambient_flip });
            }
        }
    }

    // Identify surface points across face gluings.
    let flat = |p: EdgePoint| -> usize {
        let mut off = 0;
        for e in 0..p.edge {
            off += slots[slot_base(p.tet, e)].len();
        }
        let mut base = 0;
        for t in 0..p.tet {
            for e in 0..6 {
                base += slots[slot_base(t, e)].len();
            }
        }
        base + off + p.pos
    };
    let total_points: usize = slots.iter().map(|s| s.len()).sum();
    let mut point_uf = Uf::new(total_points);
    for p in &pairings {
        for j in 0..2 {
            let pa = flat(arcs[p.a].ends[j]);
            let pb = flat(arcs[p.b].ends[p.end_map[j]]);
            point_uf.union(pa, pb);
        }
    }

    // Each slot crossing carries exactly two arc ends, one per adjacent
    // face, and both belong to the disc crossing there.
    let mut ends_at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); total_points];
    for (ai, arc) in arcs.iter().enumerate() {
        for j in 0..2 {
            ends_at[flat(arc.ends[j])].push((ai, j));
        }
    }
    let mut crossing_copy: Vec<usize> = vec![0; total_points];
    {
        let mut idx = 0;
        for t in 0..tets {
            for e in 0..6 {
                for c in &slots[slot_base(t, e)] {
                    crossing_copy[idx] = copy_id(t, c.kind, c.copy);
                    idx += 1;
                }
            }
        }
    }
    for (pt, ends) in ends_at.iter().enumerate() {
        if ends.len() != 2 {
            return Err(Error::internal(format!(
                "surface point carries {} arc ends instead of two",
                ends.len()
            )));
        }
        for &(ai, _) in ends {
            if arcs[ai].copy_id != crossing_copy[pt] {
                return Err(Error::internal(
                    "arc endpoint does not belong to the disc crossing there",
                ));
            }
        }
    }

    // Closure: around every identified surface point the incident arcs must
    // close into a single cycle, alternating disc corners and face gluings.
    let mut partner_of: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for p in &pairings {
        for j in 0..2 {
            partner_of.insert((p.a, j), (p.b, p.end_map[j]));
            partner_of.insert((p.b, p.end_map[j]), (p.a, j));
        }
    }
    {
        let mut class_members: HashMap<usize, Vec<usize>> = HashMap::new();
        for pt in 0..total_points {
            class_members.entry(point_uf.find(pt)).or_default().push(pt);
        }
        for members in class_members.values() {
            let expected = 2 * members.len();
            // Walk the link starting from an arbitrary incidence.
            let start = {
                let pt = members[0];
                ends_at[pt][0]
            };
            let mut current = start;
            let mut steps = 0;
            loop {
                // Cross the face gluing, then pivot through the disc corner
                // at the landing crossing.
                let glued = partner_of
                    .get(&current)
                    .copied()
                    .ok_or_else(|| Error::internal("arc end is not glued"))?;
                let pt = flat(arcs[glued.0].ends[glued.1]);
                let pair = &ends_at[pt];
                current = if pair[0] == glued { pair[1] } else { pair[0] };
                steps += 2;
                if current == start {
                    break;
                }
                if steps > expected {
                    return Err(Error::internal("surface point link does not close"));
                }
            }
            if steps != expected {
                return Err(Error::internal(
                    "surface point link splits into several cycles",
                ));
            }
        }
    }

    // Split into components along arc gluings.
    let mut comp_uf = Uf::new(copies.len());
    for p in &pairings {
        comp_uf.union(arcs[p.a].copy_id, arcs[p.b].copy_id);
    }

    // Orient each disc boundary deterministically by walking its arc cycle.
    let mut arcs_of_copy: Vec<Vec<usize>> = vec![Vec::new(); copies.len()];
    for (ai, arc) in arcs.iter().enumerate() {
        arcs_of_copy[arc.copy_id].push(ai);
    }
    let mut direction: Vec<i8> = vec![0; arcs.len()];
    for (cid, copy_arcs) in arcs_of_copy.iter().enumerate() {
        if copy_arcs.is_empty() {
            continue;
        }
        let start_arc = *copy_arcs.iter().min().expect("copy has arcs");
        let mut current = (start_arc, 0usize);
        let mut visited = 0;
        loop {
            direction[current.0] = if current.1 == 0 { 1 } else { -1 };
            visited += 1;
            // Leave through the other end, then pivot at that crossing to
            // the disc's next boundary arc.
            let exit = (current.0, 1 - current.1);
            let pt = flat(arcs[exit.0].ends[exit.1]);
            let pair = &ends_at[pt];
            let next = if pair[0] == exit { pair[1] } else { pair[0] };
            debug_assert_eq!(arcs[next.0].copy_id, cid);
            current = next;
            if current.0 == start_arc {
                break;
            }
        }
        if visited != copy_arcs.len() {
            return Err(Error::internal("disc boundary does not form one cycle"));
        }
    }

    // Propagate surface orientation and transverse orientation signs.
    let mut orient = ParityUf::new(copies.len());
    let mut sided = ParityUf::new(copies.len());
    for p in &pairings {
        let (ca, cb) = (arcs[p.a].copy_id, arcs[p.b].copy_id);
        // Direction of a's traversal expressed on b's side of the gluing.
        let transported = if p.end_map == [0, 1] {
            direction[p.a]
        } else {
            -direction[p.a]
        };
        // Opposite traversals of a shared arc mean consistent orientations.
        let need_flip = transported == direction[p.b];
        orient.union(ca, cb, need_flip);
        sided.union(ca, cb, need_flip ^ p.ambient_flip);
    }

    // Canonical component numbering by least contained copy.
    let mut component_of = vec![usize::MAX; copies.len()];
    let mut roots: Vec<usize> = Vec::new();
    for c in 0..copies.len() {
        let r = comp_uf.find(c);
        if r == c {
            roots.push(c);
        }
    }
    for (ci, &r) in roots.iter().enumerate() {
        for c in 0..copies.len() {
            if comp_uf.find(c) == r {
                component_of[c] = ci;
            }
        }
    }

    let mut components = Vec::with_capacity(roots.len());
    for (ci, &root) in roots.iter().enumerate() {
        let mut vec_c = NormalVector::zero(v.mode(), tets);
        for (c, dc) in copies.iter().enumerate() {
            if component_of[c] == ci {
                vec_c.add_coord(dc.tet, dc.kind, &BigUint::from(1u8));
            }
        }
        is_admissible(&vec_c, tri)?;
        let weight = total_weight_with(&vec_c, &sk)?;
        let euler_vec = euler_characteristic(&vec_c, tri)?;
        let euler = i64::try_from(&euler_vec)
            .map_err(|_| Error::internal("component Euler characteristic overflows"))?;
        let orientable = orient.consistent(root);
        let two_sided = sided.consistent(root);
        components.push(Component {
            octagons: vec_c.octagon_count(),
            kind: SurfaceKind::classify(euler, orientable),
            vector: vec_c,
            weight,
            euler,
            orientable,
            two_sided,
        });
    }

    // Cross-check the combinatorial Euler characteristic of the realized
    // cell structure, component by component: points minus glued arc pairs
    // plus discs.
    {
        let mut pts = vec![0i64; roots.len()];
        let mut pair_count = vec![0i64; roots.len()];
        let mut disc_count = vec![0i64; roots.len()];
        let mut seen_classes: HashMap<usize, usize> = HashMap::new();
        for pt in 0..total_points {
            let class = point_uf.find(pt);
            let comp = component_of[crossing_copy[pt]];
            match seen_classes.insert(class, comp) {
                None => pts[comp] += 1,
                Some(prev) => {
                    if prev != comp {
                        return Err(Error::internal(
                            "surface point shared between components",
                        ));
                    }
                }
            }
        }
        for p in &pairings {
            pair_count[component_of[arcs[p.a].copy_id]] += 1;
        }
        for c in 0..copies.len() {
            disc_count[component_of[c]] += 1;
        }
        for ci in 0..roots.len() {
            let cell_chi = pts[ci] - pair_count[ci] + disc_count[ci];
            if cell_chi != components[ci].euler {
                return Err(Error::internal(format!(
                    "cell structure Euler characteristic {} disagrees with {}",
                    cell_chi, components[ci].euler
                )));
            }
        }
    }

    Ok(RealizedSurface {
        vector: v.clone(),
        copies,
        slots,
        arcs,
        pairings,
        component_of,
        components,
    })
}

impl RealizedSurface {
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// One text record per component: vector, weight, Euler characteristic,
    /// octagon count, sidedness, and kind.
    pub fn report(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("components={}\n", self.components.len()));
        for (i, c) in self.components.iter().enumerate() {
            out.push_str(&format!(
                "component {}: weight={} euler={} octagons={} orientable={} two_sided={} kind={}\n",
                i, c.weight, c.euler, c.octagons, c.orientable, c.two_sided,
                c.kind.label()
            ));
            for line in c.vector.serialize().lines() {
                out.push_str("  ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}
