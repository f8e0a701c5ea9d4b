//! Region analysis of the complement of a cutting surface.
//!
//! Cutting a triangulated closed 3-manifold along an embedded normal
//! surface (and truncating vertex neighborhoods) slices each tetrahedron
//! into regions of three shapes: parallelity regions between two parallel
//! copies of one disc, a central piece bounded by four triangles, or a
//! prism bounded by two triangles and a quad. Everything here is pure
//! combinatorics over the canonical stacking of [`crate::realize`]; no
//! re-triangulation of the pieces is performed.
//!
//! Surfaces inside a complement component are described by per-region disc
//! classes. Parallelity regions carry exactly one class, so their
//! coordinates can be eliminated, leaving a reduced matching system over
//! the classes hosted by the other two region shapes. The reduction keeps
//! an explicit elimination trace, so solutions of the reduced system lift
//! back to full class vectors and embed back into the ambient manifold.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::coords::{
    is_admissible, total_weight_with, DiscKind, IntegerMatrix, NormalMode, NormalVector,
    Separation,
};
use crate::error::{Error, Result};
use crate::hilbert::{fundamental_solutions, HilbertCaps};
use crate::realize::RealizedSurface;
use crate::tri::{build_skeleton, face_corners, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Parallelity,
    TypeI,
    TypeII,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Classification::Parallelity => "parallelity",
            Classification::TypeI => "type-I",
            Classification::TypeII => "type-II",
        }
    }
}

/// One element of a region's frontier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frontier {
    /// A side of a cutting-surface disc copy. Side 0 faces the triangle's
    /// cut vertex, or the pair of vertices containing vertex 0 for a quad.
    Disc { copy: usize, side: u8 },
    /// The truncation triangle at a tetrahedron corner.
    Truncation { vertex: u8 },
    /// An untruncated tetrahedron corner, kept when vertex neighborhoods
    /// stay in place; it behaves like a degenerate truncation triangle.
    Corner { vertex: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionShape {
    /// Band between consecutive triangle copies at a corner. Depth 0 is the
    /// innermost band, starting at the truncation triangle or the corner.
    CornerBand { vertex: u8, depth: usize },
    /// The single central piece of a tetrahedron without quad copies.
    Central,
    /// End piece between the outermost quad and the corners of one pair.
    QuadEnd { first_pair_side: bool },
    /// Band between consecutive quad copies.
    QuadBand { depth: usize },
}

/// One region: a connected piece of a single sliced tetrahedron.
#[derive(Clone, Debug)]
pub struct Region {
    pub tet: usize,
    pub shape: RegionShape,
    /// Disc classes a surface inside the complement can use in this region,
    /// named by the ambient disc type they are parallel to.
    pub classes: Vec<DiscKind>,
    pub frontier: Vec<Frontier>,
}

impl Region {
    pub fn classification(&self) -> Classification {
        match self.shape {
            RegionShape::CornerBand { .. } | RegionShape::QuadBand { .. } => {
                Classification::Parallelity
            }
            RegionShape::Central => Classification::TypeI,
            RegionShape::QuadEnd { .. } => Classification::TypeII,
        }
    }
}

pub fn classify_region(r: &Region) -> Classification {
    r.classification()
}

/// A disc class: one kind of parallel disc inside one region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Class {
    pub region: usize,
    pub kind: DiscKind,
}

/// One connected component of the cut manifold.
#[derive(Clone, Debug)]
pub struct ComplementComponent {
    pub regions: Vec<usize>,
    pub parallelity_count: usize,
    pub type_i_count: usize,
    pub type_ii_count: usize,
    /// Number of disc classes hosted by non-parallelity regions.
    pub m: usize,
    /// Number of parallelity regions, one class each.
    pub m_bar: usize,
    /// Boundary surface split into connected components.
    pub boundary: Vec<NormalVector>,
    pub boundary_total: NormalVector,
    pub boundary_weight: BigUint,
}

#[derive(Clone, Debug)]
pub struct Complement {
    pub tri: Triangulation,
    pub vector: NormalVector,
    pub truncated: bool,
    pub regions: Vec<Region>,
    /// All disc classes, grouped by region in region order.
    pub classes: Vec<Class>,
    pub component_of: Vec<usize>,
    pub components: Vec<ComplementComponent>,
    tet_tris: Vec<[usize; 4]>,
    tet_quad: Vec<Option<(Separation, usize)>>,
    layout: Vec<TetLayout>,
    class_base: Vec<usize>,
}

/// Region indices of one sliced tetrahedron.
#[derive(Clone, Debug)]
struct TetLayout {
    corner_base: [usize; 4],
    central: Option<usize>,
    quad_end_a: Option<usize>,
    quad_band_base: usize,
    quad_end_b: Option<usize>,
}

fn pair_vertices(s: Separation, first: bool) -> [u8; 2] {
    let mut out = [0u8; 2];
    let mut i = 0;
    for v in 0..4u8 {
        if s.in_first_pair(v) == first {
            out[i] = v;
            i += 1;
        }
    }
    debug_assert_eq!(i, 2);
    out
}

/// Cut the manifold along a realized surface without octagons, optionally
/// removing open vertex neighborhoods bounded by truncation triangles.
pub fn cut(
    tri: &Triangulation,
    sigma: &RealizedSurface,
    truncate_vertices: bool,
) -> Result<Complement> {
    if sigma.vector.mode() != NormalMode::OneNormal {
        return Err(Error::invalid(
            "cutting along surfaces with octagons is not supported",
        ));
    }
    is_admissible(&sigma.vector, tri)?;
    let tets = tri.tet_count();
    let sk = build_skeleton(tri);

    let mut tet_tris = vec![[0usize; 4]; tets];
    let mut tet_quad: Vec<Option<(Separation, usize)>> = vec![None; tets];
    for t in 0..tets {
        for v in 0..4u8 {
            let w = sigma.vector.coord(t, DiscKind::Triangle(v));
            tet_tris[t][v as usize] = usize::try_from(w).map_err(|_| Error::Resource {
                what: "cutting surface disc copies".into(),
                limit: usize::MAX,
            })?;
        }
        for s in Separation::ALL {
            let w = sigma.vector.coord(t, DiscKind::Quad(s));
            if !w.is_zero() {
                let q = usize::try_from(w).map_err(|_| Error::Resource {
                    what: "cutting surface disc copies".into(),
                    limit: usize::MAX,
                })?;
                tet_quad[t] = Some((s, q));
            }
        }
    }

    // Index of each cutting-surface disc copy, as numbered by realize.
    let mut copy_index: HashMap<(usize, DiscKind, usize), usize> = HashMap::new();
    for (i, dc) in sigma.copies.iter().enumerate() {
        copy_index.insert((dc.tet, dc.kind, dc.copy), i);
    }
    let disc = |t: usize, kind: DiscKind, c: usize, side: u8| -> Frontier {
        Frontier::Disc {
            copy: copy_index[&(t, kind, c)],
            side,
        }
    };
    let corner = |v: u8| -> Frontier {
        if truncate_vertices {
            Frontier::Truncation { vertex: v }
        } else {
            Frontier::Corner { vertex: v }
        }
    };

    // Enumerate regions tetrahedron by tetrahedron in canonical order:
    // corner bands by vertex and depth, then the central structure from the
    // first-pair side.
    let mut regions: Vec<Region> = Vec::new();
    let mut layout: Vec<TetLayout> = Vec::with_capacity(tets);
    for t in 0..tets {
        let mut lay = TetLayout {
            corner_base: [0; 4],
            central: None,
            quad_end_a: None,
            quad_band_base: 0,
            quad_end_b: None,
        };
        for v in 0..4u8 {
            lay.corner_base[v as usize] = regions.len();
            let n = tet_tris[t][v as usize];
            for j in 0..n {
                let inner = if j == 0 {
                    corner(v)
                } else {
                    disc(t, DiscKind::Triangle(v), j - 1, 1)
                };
                regions.push(Region {
                    tet: t,
                    shape: RegionShape::CornerBand { vertex: v, depth: j },
                    classes: vec![DiscKind::Triangle(v)],
                    frontier: vec![inner, disc(t, DiscKind::Triangle(v), j, 0)],
                });
            }
        }
        // Frontier element behind the outermost triangle of a corner, or
        // the truncation when the corner is not cut at all.
        let behind_corner = |v: u8| -> Frontier {
            let n = tet_tris[t][v as usize];
            if n > 0 {
                disc(t, DiscKind::Triangle(v), n - 1, 1)
            } else {
                corner(v)
            }
        };
        match tet_quad[t] {
            None => {
                lay.central = Some(regions.len());
                regions.push(Region {
                    tet: t,
                    shape: RegionShape::Central,
                    classes: DiscKind::all(NormalMode::TwoNormal).collect(),
                    frontier: (0..4u8).map(behind_corner).collect(),
                });
            }
            Some((s, q)) => {
                let first = pair_vertices(s, true);
                let second = pair_vertices(s, false);
                lay.quad_end_a = Some(regions.len());
                regions.push(Region {
                    tet: t,
                    shape: RegionShape::QuadEnd { first_pair_side: true },
                    classes: vec![
                        DiscKind::Triangle(first[0]),
                        DiscKind::Triangle(first[1]),
                        DiscKind::Quad(s),
                    ],
                    frontier: vec![
                        behind_corner(first[0]),
                        behind_corner(first[1]),
                        disc(t, DiscKind::Quad(s), 0, 0),
                    ],
                });
                lay.quad_band_base = regions.len();
                for j in 0..q.saturating_sub(1) {
                    regions.push(Region {
                        tet: t,
                        shape: RegionShape::QuadBand { depth: j },
                        classes: vec![DiscKind::Quad(s)],
                        frontier: vec![
                            disc(t, DiscKind::Quad(s), j, 1),
                            disc(t, DiscKind::Quad(s), j + 1, 0),
                        ],
                    });
                }
                lay.quad_end_b = Some(regions.len());
                regions.push(Region {
                    tet: t,
                    shape: RegionShape::QuadEnd { first_pair_side: false },
                    classes: vec![
                        DiscKind::Triangle(second[0]),
                        DiscKind::Triangle(second[1]),
                        DiscKind::Quad(s),
                    ],
                    frontier: vec![
                        behind_corner(second[0]),
                        behind_corner(second[1]),
                        disc(t, DiscKind::Quad(s), q - 1, 1),
                    ],
                });
            }
        }
        layout.push(lay);
    }

    let mut class_base = Vec::with_capacity(regions.len());
    let mut classes = Vec::new();
    for (r, region) in regions.iter().enumerate() {
        class_base.push(classes.len());
        for &kind in &region.classes {
            classes.push(Class { region: r, kind });
        }
    }

    let mut c = Complement {
        tri: tri.clone(),
        vector: sigma.vector.clone(),
        truncated: truncate_vertices,
        regions,
        classes,
        component_of: Vec::new(),
        components: Vec::new(),
        tet_tris,
        tet_quad,
        layout,
        class_base,
    };

    // Glue regions across faces, one face piece at a time: the bands at
    // each corner depth, then the central piece.
    let mut uf = Uf::new(c.regions.len());
    for slots in &sk.face_slots {
        let (t0, f0) = slots[0];
        let g = tri.gluing(t0, f0);
        let (t1, f1) = (g.to, g.target_face(f0));
        for &v in &face_corners(f0) {
            let v1 = g.perm.apply(v);
            let n0 = c.arcs_at_corner(t0, f0, v);
            let n1 = c.arcs_at_corner(t1, f1, v1);
            if n0 != n1 {
                return Err(Error::internal(format!(
                    "face gluing of tetrahedra {} and {} has mismatched arc counts",
                    t0, t1
                )));
            }
            for j in 0..n0 {
                uf.union(c.region_of_band(t0, f0, v, j), c.region_of_band(t1, f1, v1, j));
            }
        }
        uf.union(c.region_of_center(t0, f0), c.region_of_center(t1, f1));
    }

    // Canonical component numbering by least region index.
    let mut component_of = vec![usize::MAX; c.regions.len()];
    let mut roots = Vec::new();
    for r in 0..c.regions.len() {
        if uf.find(r) == r {
            roots.push(r);
        }
    }
    for (ci, &root) in roots.iter().enumerate() {
        for r in 0..c.regions.len() {
            if uf.find(r) == root {
                component_of[r] = ci;
            }
        }
    }
    c.component_of = component_of;

    // Boundary surface: one node per disc copy side, plus one node per
    // truncation triangle. Nodes are glued along the cutting surface's arc
    // pairings and the face gluings of the truncation triangles.
    let copies = sigma.copies.len();
    let trunc_nodes = if truncate_vertices { 4 * tets } else { 0 };
    let node_count = 2 * copies + trunc_nodes;
    let trunc_node = |t: usize, v: u8| 2 * copies + t * 4 + v as usize;
    // Side of a disc facing its cut vertex at a given corner.
    let side_toward = |kind: DiscKind, v: u8| -> u8 {
        match kind {
            DiscKind::Triangle(u) => {
                debug_assert_eq!(u, v);
                0
            }
            DiscKind::Quad(s) => u8::from(!s.in_first_pair(v)),
            DiscKind::Octagon(_) => unreachable!("cutting surface has no octagons"),
        }
    };
    let mut buf = Uf::new(node_count);
    for p in &sigma.pairings {
        let (aa, ab) = (&sigma.arcs[p.a], &sigma.arcs[p.b]);
        let sa = side_toward(sigma.copies[aa.copy_id].kind, aa.cut);
        let sb = side_toward(sigma.copies[ab.copy_id].kind, ab.cut);
        buf.union(2 * aa.copy_id + sa as usize, 2 * ab.copy_id + sb as usize);
        buf.union(
            2 * aa.copy_id + (1 - sa) as usize,
            2 * ab.copy_id + (1 - sb) as usize,
        );
    }
    if truncate_vertices {
        for slots in &sk.face_slots {
            let (t0, f0) = slots[0];
            let g = tri.gluing(t0, f0);
            let (t1, f1) = (g.to, g.target_face(f0));
            debug_assert_eq!(face_corners(f1).len(), 3);
            for &v in &face_corners(f0) {
                buf.union(trunc_node(t0, v), trunc_node(t1, g.perm.apply(v)));
            }
        }
    }

    // Which region each boundary node faces.
    let mut node_region = vec![usize::MAX; node_count];
    for (r, region) in c.regions.iter().enumerate() {
        for fr in &region.frontier {
            let node = match *fr {
                Frontier::Disc { copy, side } => 2 * copy + side as usize,
                Frontier::Truncation { vertex } => trunc_node(region.tet, vertex),
                Frontier::Corner { .. } => continue,
            };
            if node_region[node] != usize::MAX {
                return Err(Error::internal("boundary piece faces two regions"));
            }
            node_region[node] = r;
        }
    }
    if node_region.iter().any(|&r| r == usize::MAX) {
        return Err(Error::internal("boundary piece faces no region"));
    }

    // Boundary components in canonical order, each attributed to the single
    // complement component it faces.
    let mut bset: HashMap<usize, Vec<usize>> = HashMap::new();
    for node in 0..node_count {
        bset.entry(buf.find(node)).or_default().push(node);
    }
    let mut bkeys: Vec<usize> = bset.keys().copied().collect();
    bkeys.sort_unstable();
    let mut per_component_boundaries: Vec<Vec<NormalVector>> = vec![Vec::new(); roots.len()];
    for key in bkeys {
        let nodes = &bset[&key];
        let mut vec_b = NormalVector::zero(NormalMode::OneNormal, tets);
        let comp = c.component_of[node_region[nodes[0]]];
        for &node in nodes {
            if c.component_of[node_region[node]] != comp {
                return Err(Error::internal(
                    "boundary component faces several complement components",
                ));
            }
            if node < 2 * copies {
                let dc = &sigma.copies[node / 2];
                vec_b.add_coord(dc.tet, dc.kind, &BigUint::one());
            } else {
                let rest = node - 2 * copies;
                vec_b.add_coord(rest / 4, DiscKind::Triangle((rest % 4) as u8), &BigUint::one());
            }
        }
        per_component_boundaries[comp].push(vec_b);
    }

    let degree_ok = (0..sk.edge_count).all(|e| sk.edge_degree(e) >= 3);
    let mut components = Vec::with_capacity(roots.len());
    for ci in 0..roots.len() {
        let mut comp = ComplementComponent {
            regions: Vec::new(),
            parallelity_count: 0,
            type_i_count: 0,
            type_ii_count: 0,
            m: 0,
            m_bar: 0,
            boundary: Vec::new(),
            boundary_total: NormalVector::zero(NormalMode::OneNormal, tets),
            boundary_weight: BigUint::zero(),
        };
        for (r, region) in c.regions.iter().enumerate() {
            if c.component_of[r] != ci {
                continue;
            }
            comp.regions.push(r);
            match region.classification() {
                Classification::Parallelity => {
                    comp.parallelity_count += 1;
                    comp.m_bar += 1;
                }
                Classification::TypeI => {
                    comp.type_i_count += 1;
                    comp.m += region.classes.len();
                }
                Classification::TypeII => {
                    comp.type_ii_count += 1;
                    comp.m += region.classes.len();
                }
            }
        }
        for b in per_component_boundaries[ci].drain(..) {
            comp.boundary_total = comp.boundary_total.haken_sum(&b)?;
            comp.boundary.push(b);
        }
        comp.boundary_weight = total_weight_with(&comp.boundary_total, &sk)?;
        if comp.m > 10 * tets {
            return Err(Error::internal(format!(
                "component hosts {} non-parallelity classes, more than ten per tetrahedron",
                comp.m
            )));
        }
        // Each parallelity region uses two of the boundary discs, and every
        // disc has weight at least three, so six times the parallelity
        // count stays below the boundary weight times the tetrahedron
        // count. This only holds once vertex neighborhoods are removed and
        // every edge has degree at least three; corner balls and low-degree
        // edges genuinely break the estimate.
        if truncate_vertices
            && degree_ok
            && BigUint::from(6 * comp.m_bar) > &comp.boundary_weight * BigUint::from(tets)
        {
            return Err(Error::internal(
                "parallelity region count exceeds its boundary weight bound",
            ));
        }
        components.push(comp);
    }
    c.components = components;
    Ok(c)
}

impl Complement {
    /// Number of cutting-surface arcs at a face corner.
    fn arcs_at_corner(&self, t: usize, f: u8, v: u8) -> usize {
        let mut n = self.tet_tris[t][v as usize];
        if let Some((s, q)) = self.tet_quad[t] {
            if s.partner(f) == v {
                n += q;
            }
        }
        n
    }

    fn corner_band(&self, t: usize, v: u8, j: usize) -> usize {
        debug_assert!(j < self.tet_tris[t][v as usize]);
        self.layout[t].corner_base[v as usize] + j
    }

    /// Region behind the face band at corner `v`, depth `j`: the band
    /// between the (j-1)-th and j-th arcs cutting `v` on face `f`.
    fn region_of_band(&self, t: usize, f: u8, v: u8, j: usize) -> usize {
        let n_tri = self.tet_tris[t][v as usize];
        if j < n_tri {
            return self.corner_band(t, v, j);
        }
        let (s, q) = self.tet_quad[t].expect("band beyond triangles needs quads");
        debug_assert_eq!(s.partner(f), v);
        let i = j - n_tri;
        debug_assert!(i < q);
        if i == 0 {
            if s.in_first_pair(v) {
                self.layout[t].quad_end_a.expect("quad end exists")
            } else {
                self.layout[t].quad_end_b.expect("quad end exists")
            }
        } else {
            let depth = if s.in_first_pair(v) { i - 1 } else { q - 1 - i };
            self.layout[t].quad_band_base + depth
        }
    }

    /// Region behind the central piece of a face, beyond all arcs.
    fn region_of_center(&self, t: usize, f: u8) -> usize {
        match self.tet_quad[t] {
            None => self.layout[t].central.expect("central region exists"),
            Some((s, _)) => {
                // The face center lies on the far side of the quad stack
                // from the partner vertex of the face.
                if s.in_first_pair(s.partner(f)) {
                    self.layout[t].quad_end_b.expect("quad end exists")
                } else {
                    self.layout[t].quad_end_a.expect("quad end exists")
                }
            }
        }
    }

    /// Global class indices of `region`'s classes with an arc cutting `v`
    /// on face `f`.
    fn arc_terms(&self, region: usize, f: u8, v: u8) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &kind) in self.regions[region].classes.iter().enumerate() {
            if kind.arc_incidence(f, v) == 1 {
                out.push(self.class_base[region] + k);
            }
        }
        out
    }

    /// All region matching equations of one component: the central-piece
    /// rows in ambient matching order, then the band rows.
    fn equations_for(&self, component: usize) -> Result<(Vec<Equation>, Vec<Equation>)> {
        let sk = build_skeleton(&self.tri);
        let mut central = Vec::new();
        let mut band = Vec::new();
        for slots in &sk.face_slots {
            let (t0, f0) = slots[0];
            let g = self.tri.gluing(t0, f0);
            let (t1, f1) = (g.to, g.target_face(f0));
            for &v in &face_corners(f0) {
                let v1 = g.perm.apply(v);
                let r0 = self.region_of_center(t0, f0);
                let r1 = self.region_of_center(t1, f1);
                if self.component_of[r0] == component {
                    if self.component_of[r1] != component {
                        return Err(Error::internal("face piece joins two components"));
                    }
                    central.push(Equation {
                        lhs: self.arc_terms(r0, f0, v),
                        rhs: self.arc_terms(r1, f1, v1),
                    });
                }
                for j in 0..self.arcs_at_corner(t0, f0, v) {
                    let b0 = self.region_of_band(t0, f0, v, j);
                    let b1 = self.region_of_band(t1, f1, v1, j);
                    if self.component_of[b0] != component {
                        continue;
                    }
                    if self.component_of[b1] != component {
                        return Err(Error::internal("face piece joins two components"));
                    }
                    band.push(Equation {
                        lhs: self.arc_terms(b0, f0, v),
                        rhs: self.arc_terms(b1, f1, v1),
                    });
                }
            }
        }
        Ok((central, band))
    }

    /// Class indices of one component in canonical order.
    pub fn component_classes(&self, component: usize) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.component_of[self.classes[i].region] == component)
            .collect()
    }

    /// Per-component summary: region census, class counts, boundary data.
    pub fn report(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("components={}\n", self.components.len()));
        for (i, comp) in self.components.iter().enumerate() {
            out.push_str(&format!(
                "component {}: regions={} parallelity={} type_i={} type_ii={} m={} m_bar={} \
                 boundary_components={} boundary_weight={}\n",
                i,
                comp.regions.len(),
                comp.parallelity_count,
                comp.type_i_count,
                comp.type_ii_count,
                comp.m,
                comp.m_bar,
                comp.boundary.len(),
                comp.boundary_weight
            ));
        }
        out
    }
}

/// One matching equation between the classes of two glued face pieces.
#[derive(Clone, Debug)]
struct Equation {
    lhs: Vec<usize>,
    rhs: Vec<usize>,
}

/// The matching system of one component after eliminating all parallelity
/// classes.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub component: usize,
    /// Rows over the retained classes only.
    pub matrix: IntegerMatrix,
    /// Global class indices of the retained classes, ascending; column `j`
    /// of the matrix belongs to `retained[j]`.
    pub retained: Vec<usize>,
    /// Eliminated parallelity classes with their recovery expressions as
    /// sums of retained columns.
    pub eliminated: Vec<(usize, Vec<usize>)>,
    /// All class indices of the component, ascending; the order used by
    /// lifted full vectors.
    pub class_order: Vec<usize>,
    /// Column groups that exclude each other, one per region hosting
    /// several quad or octagon classes.
    pub groups: Vec<Vec<usize>>,
}

pub fn reduced_matching_system(c: &Complement, component: usize) -> Result<ReducedSystem> {
    let comp = c
        .components
        .get(component)
        .ok_or_else(|| Error::invalid("no such complement component"))?;
    if comp.m == 0 {
        return Err(Error::invalid(
            "component consists of parallelity regions only",
        ));
    }
    let class_order = c.component_classes(component);
    let mut retained = Vec::new();
    for &cid in &class_order {
        if c.regions[c.classes[cid].region].classification() != Classification::Parallelity {
            retained.push(cid);
        }
    }
    let col_of: HashMap<usize, usize> =
        retained.iter().enumerate().map(|(j, &cid)| (cid, j)).collect();

    let (central, band) = c.equations_for(component)?;

    // Express every parallelity class as a sum of retained classes. Band
    // equations carry one class on a parallelity side, so each elimination
    // step substitutes a whole side expression; iterate until stable.
    let mut expr: HashMap<usize, Vec<usize>> = HashMap::new();
    for &cid in &retained {
        expr.insert(cid, vec![cid]);
    }
    loop {
        let mut changed = false;
        for eq in &band {
            for (this, other) in [(&eq.lhs, &eq.rhs), (&eq.rhs, &eq.lhs)] {
                if this.len() == 1
                    && !expr.contains_key(&this[0])
                    && other.iter().all(|t| expr.contains_key(t))
                {
                    let mut sum: Vec<usize> =
                        other.iter().flat_map(|t| expr[t].iter().copied()).collect();
                    sum.sort_unstable();
                    if sum.len() > 4 {
                        return Err(Error::internal(
                            "parallelity elimination trace has more than four terms",
                        ));
                    }
                    expr.insert(this[0], sum);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut eliminated = Vec::new();
    for &cid in &class_order {
        if col_of.contains_key(&cid) {
            continue;
        }
        match expr.get(&cid) {
            Some(trace) => eliminated.push((cid, trace.clone())),
            None => {
                return Err(Error::internal(
                    "parallelity class is not connected to a retained class",
                ))
            }
        }
    }

    // Substitute the traces into every equation; keep the nonzero rows.
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for eq in central.iter().chain(&band) {
        let mut coeffs = vec![0i64; retained.len()];
        for &cid in &eq.lhs {
            for &rid in &expr[&cid] {
                coeffs[col_of[&rid]] += 1;
            }
        }
        for &cid in &eq.rhs {
            for &rid in &expr[&cid] {
                coeffs[col_of[&rid]] -= 1;
            }
        }
        if coeffs.iter().any(|&x| x.abs() > 1) {
            return Err(Error::internal(
                "reduced matching row has an entry outside -1..1",
            ));
        }
        if coeffs.iter().any(|&x| x != 0) {
            rows.push(coeffs);
        }
    }
    let mut matrix = IntegerMatrix::zero(rows.len(), retained.len());
    for (r, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            matrix.add(r, j, x);
        }
    }

    // Exclusion groups: within one region, at most one quad or octagon
    // class may be used.
    let mut groups = Vec::new();
    let mut by_region: HashMap<usize, Vec<usize>> = HashMap::new();
    for (j, &cid) in retained.iter().enumerate() {
        let class = c.classes[cid];
        if class.kind.is_quad_or_octagon() {
            by_region.entry(class.region).or_default().push(j);
        }
    }
    let mut region_ids: Vec<usize> = by_region.keys().copied().collect();
    region_ids.sort_unstable();
    for r in region_ids {
        let cols = by_region.remove(&r).expect("region listed");
        if cols.len() > 1 {
            groups.push(cols);
        }
    }

    Ok(ReducedSystem {
        component,
        matrix,
        retained,
        eliminated,
        class_order,
        groups,
    })
}

/// Extend a solution of the reduced system to all classes of the
/// component, parallelity classes included.
pub fn lift_solution(rs: &ReducedSystem, x: &[BigUint]) -> Result<Vec<BigUint>> {
    if x.len() != rs.retained.len() {
        return Err(Error::invalid("solution length does not match the system"));
    }
    for entry in rs.matrix.mul_big(x) {
        if !entry.is_zero() {
            return Err(Error::invalid("vector does not solve the reduced system"));
        }
    }
    for group in &rs.groups {
        if group.iter().filter(|&&j| !x[j].is_zero()).count() > 1 {
            return Err(Error::invalid(
                "vector uses several quad or octagon classes in one region",
            ));
        }
    }
    let col_of: HashMap<usize, usize> =
        rs.retained.iter().enumerate().map(|(j, &cid)| (cid, j)).collect();
    let trace_of: HashMap<usize, &Vec<usize>> =
        rs.eliminated.iter().map(|(cid, tr)| (*cid, tr)).collect();
    let mut out = Vec::with_capacity(rs.class_order.len());
    for &cid in &rs.class_order {
        if let Some(&j) = col_of.get(&cid) {
            out.push(x[j].clone());
        } else {
            let trace = trace_of[&cid];
            let mut sum = BigUint::zero();
            for &rid in trace.iter() {
                sum += &x[col_of[&rid]];
            }
            out.push(sum);
        }
    }
    Ok(out)
}

/// Sum a full class vector back into global disc-type coordinates.
pub fn embed_back(c: &Complement, component: usize, full: &[BigUint]) -> Result<NormalVector> {
    let class_order = c.component_classes(component);
    if full.len() != class_order.len() {
        return Err(Error::invalid("class vector length mismatch"));
    }
    let mut v = NormalVector::zero(NormalMode::TwoNormal, c.tri.tet_count());
    for (&cid, count) in class_order.iter().zip(full) {
        let class = c.classes[cid];
        v.add_coord(c.regions[class.region].tet, class.kind, count);
    }
    is_admissible(&v, &c.tri)?;
    Ok(v)
}

/// The single generating surface of a component made of parallelity
/// regions only; every surface inside it is a multiple of this one.
pub fn surfaces_in_parallel_component(c: &Complement, component: usize) -> Result<NormalVector> {
    let comp = c
        .components
        .get(component)
        .ok_or_else(|| Error::invalid("no such complement component"))?;
    if comp.m != 0 {
        return Err(Error::invalid(
            "component has non-parallelity regions; use the reduced system",
        ));
    }
    let mut core = NormalVector::zero(NormalMode::OneNormal, c.tri.tet_count());
    for &r in &comp.regions {
        let region = &c.regions[r];
        debug_assert_eq!(region.classes.len(), 1);
        core.add_coord(region.tet, region.classes[0], &BigUint::one());
    }
    let sk = build_skeleton(&c.tri);
    let w = total_weight_with(&core, &sk)?;
    if c.truncated && BigUint::from(2u8) * &w != comp.boundary_weight {
        return Err(Error::internal(
            "parallel component core weight is not half its boundary weight",
        ));
    }
    Ok(core)
}

/// Fundamental surfaces of one complement component: the Hilbert basis of
/// its reduced matching system restricted to compatible class vectors,
/// lifted and embedded back into the ambient manifold.
pub fn fundamental_surfaces(
    c: &Complement,
    component: usize,
    caps: &HilbertCaps,
) -> Result<Vec<(Vec<BigUint>, NormalVector)>> {
    let comp = c
        .components
        .get(component)
        .ok_or_else(|| Error::invalid("no such complement component"))?;
    let tets = c.tri.tet_count();
    if comp.m == 0 {
        let core = surfaces_in_parallel_component(c, component)?;
        let class_vec = vec![BigUint::one(); c.component_classes(component).len()];
        return Ok(vec![(class_vec, core.promote())]);
    }
    let rs = reduced_matching_system(c, component)?;
    let (central, band) = c.equations_for(component)?;
    let index_of: HashMap<usize, usize> = rs
        .class_order
        .iter()
        .enumerate()
        .map(|(i, &cid)| (cid, i))
        .collect();
    let weight_cap = &comp.boundary_weight * (BigUint::one() << (18 * tets));
    let sk = build_skeleton(&c.tri);
    // The weight cap is only guaranteed under the same hypotheses as the
    // parallelity-count bound: truncated vertices and edge degrees >= 3.
    let degree_ok = (0..sk.edge_count).all(|e| sk.edge_degree(e) >= 3);
    let mut out = Vec::new();
    for sol in fundamental_solutions(&rs.matrix, &rs.groups, caps)? {
        let x: Vec<BigUint> = sol.into_iter().map(BigUint::from).collect();
        let full = lift_solution(&rs, &x)?;
        for eq in central.iter().chain(&band) {
            let lhs: BigUint = eq.lhs.iter().map(|&cid| full[index_of[&cid]].clone()).sum();
            let rhs: BigUint = eq.rhs.iter().map(|&cid| full[index_of[&cid]].clone()).sum();
            if lhs != rhs {
                return Err(Error::internal(
                    "lifted solution violates a region matching equation",
                ));
            }
        }
        let embedded = embed_back(c, component, &full)?;
        let w = total_weight_with(&embedded, &sk)?;
        if c.truncated && degree_ok && w >= weight_cap {
            return Err(Error::internal(
                "fundamental surface weight exceeds its boundary bound",
            ));
        }
        out.push((full, embedded));
    }
    Ok(out)
}

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
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}
