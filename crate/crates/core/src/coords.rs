//! Disc-type coordinates for normal and 2-normal surfaces.
//!
//! Every tetrahedron carries four triangle types (one per vertex), three
//! quadrilateral types and, in 2-normal mode, three octagon types (one per
//! pair of opposite edges). A surface is recorded as the vector of its disc
//! counts; the fixed coordinate order per tetrahedron is T0, T1, T2, T3,
//! Q(01|23), Q(02|13), Q(03|12) and then O(01|23), O(02|13), O(03|12).

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::tri::{build_skeleton, face_corners, SkeletonIndex, Triangulation, EDGE_ENDS};

/// Whether octagon coordinates are present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormalMode {
    OneNormal,
    TwoNormal,
}

impl NormalMode {
    pub fn coords_per_tet(self) -> usize {
        match self {
            NormalMode::OneNormal => 7,
            NormalMode::TwoNormal => 10,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NormalMode::OneNormal => "1N",
            NormalMode::TwoNormal => "2N",
        }
    }

    pub fn from_label(s: &str) -> Result<NormalMode> {
        match s {
            "1N" | "1n" => Ok(NormalMode::OneNormal),
            "2N" | "2n" => Ok(NormalMode::TwoNormal),
            other => Err(Error::invalid(format!("unknown mode '{}'", other))),
        }
    }
}

/// A splitting of the four tetrahedron vertices into two opposite pairs;
/// quadrilaterals and octagons are indexed by these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Separation {
    /// {0,1} | {2,3}
    S01_23,
    /// {0,2} | {1,3}
    S02_13,
    /// {0,3} | {1,2}
    S03_12,
}

impl Separation {
    pub const ALL: [Separation; 3] = [Separation::S01_23, Separation::S02_13, Separation::S03_12];

    /// The vertex paired with `v`.
    pub fn partner(self, v: u8) -> u8 {
        let table: [u8; 4] = match self {
            Separation::S01_23 => [1, 0, 3, 2],
            Separation::S02_13 => [2, 3, 0, 1],
            Separation::S03_12 => [3, 2, 1, 0],
        };
        table[v as usize]
    }

    /// True if {u,v} is one of the two paired edges.
    pub fn pairs_edge(self, u: u8, v: u8) -> bool {
        self.partner(u) == v
    }

    /// The pair containing vertex 0, ascending.
    pub fn first_pair(self) -> (u8, u8) {
        (0, self.partner(0))
    }

    /// True if `v` lies in the pair containing vertex 0.
    pub fn in_first_pair(self, v: u8) -> bool {
        v == 0 || self.partner(0) == v
    }

    pub fn label(self) -> &'static str {
        match self {
            Separation::S01_23 => "01|23",
            Separation::S02_13 => "02|13",
            Separation::S03_12 => "03|12",
        }
    }
}

/// One disc type within a tetrahedron.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscKind {
    /// Small triangle cutting off the given vertex.
    Triangle(u8),
    /// Quadrilateral separating the two vertex pairs; disjoint from the two
    /// paired edges.
    Quad(Separation),
    /// Octagon separating the two vertex pairs; meets each paired edge twice.
    Octagon(Separation),
}

impl DiscKind {
    /// Position of this disc type within a tetrahedron's coordinate block.
    pub fn index_in_tet(self) -> usize {
        match self {
            DiscKind::Triangle(v) => v as usize,
            DiscKind::Quad(s) => 4 + s as usize,
            DiscKind::Octagon(s) => 7 + s as usize,
        }
    }

    pub fn from_index(idx: usize) -> DiscKind {
        match idx {
            0..=3 => DiscKind::Triangle(idx as u8),
            4..=6 => DiscKind::Quad(Separation::ALL[idx - 4]),
            7..=9 => DiscKind::Octagon(Separation::ALL[idx - 7]),
            _ => panic!("disc index out of range"),
        }
    }

    /// All disc types available in the given mode, in coordinate order.
    pub fn all(mode: NormalMode) -> impl Iterator<Item = DiscKind> {
        (0..mode.coords_per_tet()).map(DiscKind::from_index)
    }

    pub fn is_octagon(self) -> bool {
        matches!(self, DiscKind::Octagon(_))
    }

    pub fn is_quad_or_octagon(self) -> bool {
        !matches!(self, DiscKind::Triangle(_))
    }

    /// Number of times this disc type crosses the local edge `e`.
    pub fn edge_incidence(self, e: usize) -> u8 {
        let (u, v) = EDGE_ENDS[e];
        match self {
            DiscKind::Triangle(t) => u8::from(u == t || v == t),
            DiscKind::Quad(s) => {
                if s.pairs_edge(u, v) {
                    0
                } else {
                    1
                }
            }
            DiscKind::Octagon(s) => {
                if s.pairs_edge(u, v) {
                    2
                } else {
                    1
                }
            }
        }
    }

    /// Number of boundary arcs of this disc type in face `k` that cut off
    /// corner `cut` (always 0 or 1).
    pub fn arc_incidence(self, face: u8, cut: u8) -> u8 {
        debug_assert_ne!(face, cut, "the cut corner must lie in the face");
        match self {
            DiscKind::Triangle(v) => u8::from(face != v && cut == v),
            // The quad's single arc in face k cuts off the vertex paired
            // with k.
            DiscKind::Quad(s) => u8::from(s.partner(face) == cut),
            // The octagon's two arcs in face k cut off the endpoints of the
            // paired edge contained in that face, i.e. the pair not holding k.
            DiscKind::Octagon(s) => u8::from(s.partner(face) != cut),
        }
    }

    pub fn label(self) -> String {
        match self {
            DiscKind::Triangle(v) => format!("T{}", v),
            DiscKind::Quad(s) => format!("Q({})", s.label()),
            DiscKind::Octagon(s) => format!("O({})", s.label()),
        }
    }
}

/// A disc-count vector over a triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalVector {
    mode: NormalMode,
    tets: usize,
    coords: Vec<BigUint>,
}

impl NormalVector {
    pub fn zero(mode: NormalMode, tets: usize) -> NormalVector {
        NormalVector {
            mode,
            tets,
            coords: vec![BigUint::zero(); tets * mode.coords_per_tet()],
        }
    }

    pub fn from_coords(mode: NormalMode, tets: usize, coords: Vec<BigUint>) -> Result<NormalVector> {
        if coords.len() != tets * mode.coords_per_tet() {
            return Err(Error::invalid(format!(
                "expected {} coordinates for {} tetrahedra in mode {}, got {}",
                tets * mode.coords_per_tet(),
                tets,
                mode.label(),
                coords.len()
            )));
        }
        Ok(NormalVector { mode, tets, coords })
    }

    pub fn mode(&self) -> NormalMode {
        self.mode
    }

    pub fn tets(&self) -> usize {
        self.tets
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    pub fn coord(&self, tet: usize, kind: DiscKind) -> &BigUint {
        &self.coords[tet * self.mode.coords_per_tet() + kind.index_in_tet()]
    }

    pub fn set_coord(&mut self, tet: usize, kind: DiscKind, value: BigUint) {
        let cpt = self.mode.coords_per_tet();
        self.coords[tet * cpt + kind.index_in_tet()] = value;
    }

    pub fn add_coord(&mut self, tet: usize, kind: DiscKind, value: &BigUint) {
        let cpt = self.mode.coords_per_tet();
        self.coords[tet * cpt + kind.index_in_tet()] += value;
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Copy into 2-normal mode, inserting zero octagon coordinates.
    pub fn promote(&self) -> NormalVector {
        match self.mode {
            NormalMode::TwoNormal => self.clone(),
            NormalMode::OneNormal => {
                let mut out = NormalVector::zero(NormalMode::TwoNormal, self.tets);
                for tet in 0..self.tets {
                    for kind in DiscKind::all(NormalMode::OneNormal) {
                        out.set_coord(tet, kind, self.coord(tet, kind).clone());
                    }
                }
                out
            }
        }
    }

    /// Drop zero octagon coordinates if possible.
    pub fn demote_if_one_normal(&self) -> NormalVector {
        if self.mode == NormalMode::OneNormal || !self.octagon_count().is_zero() {
            return self.clone();
        }
        let mut out = NormalVector::zero(NormalMode::OneNormal, self.tets);
        for tet in 0..self.tets {
            for kind in DiscKind::all(NormalMode::OneNormal) {
                out.set_coord(tet, kind, self.coord(tet, kind).clone());
            }
        }
        out
    }

    /// Total number of octagon discs.
    pub fn octagon_count(&self) -> BigUint {
        let mut sum = BigUint::zero();
        if self.mode == NormalMode::TwoNormal {
            for tet in 0..self.tets {
                for s in Separation::ALL {
                    sum += self.coord(tet, DiscKind::Octagon(s));
                }
            }
        }
        sum
    }

    /// Sum of all coordinates: the number of discs.
    pub fn disc_count(&self) -> BigUint {
        let mut sum = BigUint::zero();
        for c in &self.coords {
            sum += c;
        }
        sum
    }

    /// Check the local disc-system condition: in every tetrahedron, all but
    /// at most one of the six quad and octagon coordinates vanish.
    pub fn check_compatibility(&self) -> Result<()> {
        for tet in 0..self.tets {
            let mut nonzero = 0;
            for kind in DiscKind::all(self.mode) {
                if kind.is_quad_or_octagon() && !self.coord(tet, kind).is_zero() {
                    nonzero += 1;
                }
            }
            if nonzero > 1 {
                return Err(Error::Incompatible { tet });
            }
        }
        Ok(())
    }

    /// Coordinatewise sum. Fails if the sum violates the per-tetrahedron
    /// disc-system condition; modes are promoted as needed.
    pub fn haken_sum(&self, other: &NormalVector) -> Result<NormalVector> {
        if self.tets != other.tets {
            return Err(Error::invalid(format!(
                "cannot sum vectors over {} and {} tetrahedra",
                self.tets, other.tets
            )));
        }
        let (a, b) = if self.mode == other.mode {
            (self.clone(), other.clone())
        } else {
            (self.promote(), other.promote())
        };
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        let sum = NormalVector {
            mode: a.mode,
            tets: a.tets,
            coords,
        };
        sum.check_compatibility()?;
        Ok(sum)
    }

    /// Convert the coordinates to machine integers, failing with a resource
    /// error on vectors too large to materialize disc by disc.
    pub fn coords_u64(&self) -> Result<Vec<u64>> {
        self.coords
            .iter()
            .map(|c| {
                u64::try_from(c).map_err(|_| Error::Resource {
                    what: "disc count does not fit in 64 bits".into(),
                    limit: usize::MAX,
                })
            })
            .collect()
    }

    /// Canonical text form: a header line followed by one line of
    /// coordinates per tetrahedron.
    pub fn serialize(&self) -> String {
        let mut out = format!("mode={} tets={}\n", self.mode.label(), self.tets);
        let cpt = self.mode.coords_per_tet();
        for tet in 0..self.tets {
            let line: Vec<String> = (0..cpt)
                .map(|i| self.coords[tet * cpt + i].to_string())
                .collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn parse(input: &str) -> Result<NormalVector> {
        let mut lines = input.lines().enumerate().filter_map(|(idx, raw)| {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                None
            } else {
                Some((idx + 1, line.to_string()))
            }
        });
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::invalid("empty vector file"))?;
        let err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut mode = None;
        let mut tets = None;
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| err(hline, format!("bad header field '{}'", field)))?;
            match key {
                "mode" => mode = Some(NormalMode::from_label(value).map_err(|e| err(hline, e.to_string()))?),
                "tets" => {
                    tets = Some(value.parse::<usize>().map_err(|_| {
                        err(hline, format!("bad tetrahedron count '{}'", value))
                    })?)
                }
                _ => return Err(err(hline, format!("unknown header field '{}'", key))),
            }
        }
        let mode = mode.ok_or_else(|| err(hline, "header is missing 'mode='".into()))?;
        let tets = tets.ok_or_else(|| err(hline, "header is missing 'tets='".into()))?;
        let cpt = mode.coords_per_tet();
        let mut coords = Vec::with_capacity(tets * cpt);
        for expected in 0..tets {
            let (lno, line) = lines.next().ok_or_else(|| {
                Error::invalid(format!("expected {} coordinate lines, found {}", tets, expected))
            })?;
            let values: Vec<&str> = line.split_whitespace().collect();
            if values.len() != cpt {
                return Err(err(
                    lno,
                    format!("expected {} coordinates, found {}", cpt, values.len()),
                ));
            }
            for v in values {
                let c: BigUint = v
                    .parse()
                    .map_err(|_| err(lno, format!("bad coordinate '{}'", v)))?;
                coords.push(c);
            }
        }
        if let Some((lno, _)) = lines.next() {
            return Err(err(lno, "trailing content after coordinate lines".into()));
        }
        NormalVector::from_coords(mode, tets, coords)
    }
}

/// Dense integer matrix with small entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[&[i64]]) -> IntegerMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = IntegerMatrix::zero(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Largest squared Euclidean row norm.
    pub fn max_row_norm_sq(&self) -> u64 {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&v| (v * v) as u64).sum())
            .max()
            .unwrap_or(0)
    }

    /// Apply to an exact integer vector.
    pub fn mul_big(&self, v: &[BigUint]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for (c, &a) in self.row(r).iter().enumerate() {
                    if a != 0 {
                        acc += BigInt::from(a) * BigInt::from(v[c].clone());
                    }
                }
                acc
            })
            .collect()
    }
}

/// Label of one matching equation: a face class, its lexicographically least
/// slot, and the corner of that slot cut off by the arc type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchingRow {
    pub face_class: usize,
    pub tet: usize,
    pub face: u8,
    pub cut: u8,
}

/// The full system of matching equations of a triangulation.
#[derive(Clone, Debug)]
pub struct MatchingSystem {
    pub mode: NormalMode,
    pub matrix: IntegerMatrix,
    pub rows: Vec<MatchingRow>,
}

/// Build the matching equations: for every face class and every normal arc
/// type in it, the disc counts inducing that arc agree on the two glued
/// sides. Arc types are labelled on the lexicographically smaller slot and
/// transported to the other side through the gluing permutation.
pub fn matching_system(tri: &Triangulation, mode: NormalMode) -> MatchingSystem {
    let sk = build_skeleton(tri);
    matching_system_with(tri, &sk, mode)
}

pub fn matching_system_with(
    tri: &Triangulation,
    sk: &SkeletonIndex,
    mode: NormalMode,
) -> MatchingSystem {
    let cpt = mode.coords_per_tet();
    let cols = tri.tet_count() * cpt;
    let mut matrix = IntegerMatrix::zero(sk.face_count * 3, cols);
    let mut rows = Vec::with_capacity(sk.face_count * 3);
    for (fc, slots) in sk.face_slots.iter().enumerate() {
        let (tet, face) = slots[0];
        let g = tri.gluing(tet, face);
        let (other_tet, other_face) = (g.to, g.target_face(face));
        debug_assert_eq!((other_tet, other_face), (slots[1].0, slots[1].1));
        for (i, &cut) in face_corners(face).iter().enumerate() {
            let r = fc * 3 + i;
            rows.push(MatchingRow {
                face_class: fc,
                tet,
                face,
                cut,
            });
            let other_cut = g.perm.apply(cut);
            for kind in DiscKind::all(mode) {
                let col_a = tet * cpt + kind.index_in_tet();
                matrix.add(r, col_a, kind.arc_incidence(face, cut) as i64);
                let col_b = other_tet * cpt + kind.index_in_tet();
                matrix.add(r, col_b, -(kind.arc_incidence(other_face, other_cut) as i64));
            }
        }
    }
    MatchingSystem { mode, matrix, rows }
}

/// Check that a vector is admissible: matching equations hold and every
/// tetrahedron carries at most one quad or octagon type.
pub fn is_admissible(v: &NormalVector, tri: &Triangulation) -> Result<()> {
    if v.tets() != tri.tet_count() {
        return Err(Error::invalid(format!(
            "vector is over {} tetrahedra but the triangulation has {}",
            v.tets(),
            tri.tet_count()
        )));
    }
    v.check_compatibility()?;
    let system = matching_system(tri, v.mode());
    let residual = system.matrix.mul_big(v.coords());
    for (r, value) in residual.iter().enumerate() {
        if !value.is_zero() {
            let row = system.rows[r];
            return Err(Error::NotAdmissible(format!(
                "matching equation fails at face class {} (tet {} face {}, arc cutting corner {}): residual {}",
                row.face_class, row.tet, row.face, row.cut, value
            )));
        }
    }
    Ok(())
}

/// Number of crossings of the surface with one edge slot of a tetrahedron.
pub fn slot_weight(v: &NormalVector, tet: usize, edge: usize) -> BigUint {
    let mut sum = BigUint::zero();
    for kind in DiscKind::all(v.mode()) {
        let inc = kind.edge_incidence(edge);
        if inc > 0 {
            sum += v.coord(tet, kind) * BigUint::from(inc);
        }
    }
    sum
}

/// Number of intersection points of the surface with one edge class. All
/// slots of the class must agree on the count; disagreement means the vector
/// is not admissible.
pub fn edge_weight(v: &NormalVector, sk: &SkeletonIndex, edge_class: usize) -> Result<BigUint> {
    let slots = &sk.edge_slots[edge_class];
    let (tet0, e0) = slots[0];
    let w = slot_weight(v, tet0, e0 as usize);
    for &(tet, e) in &slots[1..] {
        let other = slot_weight(v, tet, e as usize);
        if other != w {
            return Err(Error::NotAdmissible(format!(
                "edge class {} has slot-dependent weight: {} at (tet {}, edge {}) vs {} at (tet {}, edge {})",
                edge_class, w, tet0, e0, other, tet, e
            )));
        }
    }
    Ok(w)
}

/// Total weight: the number of intersection points with the 1-skeleton.
pub fn total_weight(v: &NormalVector, tri: &Triangulation) -> Result<BigUint> {
    let sk = build_skeleton(tri);
    total_weight_with(v, &sk)
}

pub fn total_weight_with(v: &NormalVector, sk: &SkeletonIndex) -> Result<BigUint> {
    let mut sum = BigUint::zero();
    for e in 0..sk.edge_count {
        sum += edge_weight(v, sk, e)?;
    }
    Ok(sum)
}

/// Count of normal arcs of one type, computed on the least slot of the face
/// class.
pub fn arc_count(v: &NormalVector, sk: &SkeletonIndex, face_class: usize, cut: u8) -> BigUint {
    let (tet, face) = sk.face_slots[face_class][0];
    let mut sum = BigUint::zero();
    for kind in DiscKind::all(v.mode()) {
        if kind.arc_incidence(face, cut) > 0 {
            sum += v.coord(tet, kind);
        }
    }
    sum
}

/// Euler characteristic of the surface with the given coordinates, from the
/// cell structure induced by the triangulation: points on edges minus normal
/// arcs plus discs. Requires an admissible vector.
pub fn euler_characteristic(v: &NormalVector, tri: &Triangulation) -> Result<BigInt> {
    is_admissible(v, tri)?;
    let sk = build_skeleton(tri);
    let vertices = BigInt::from(total_weight_with(v, &sk)?);
    let mut arcs = BigInt::zero();
    for fc in 0..sk.face_count {
        let (_, face) = sk.face_slots[fc][0];
        for &cut in &face_corners(face) {
            arcs += BigInt::from(arc_count(v, &sk, fc, cut));
        }
    }
    let discs = BigInt::from(v.disc_count());
    Ok(vertices - arcs + discs)
}

/// The link of one vertex class: one triangle per (tet, corner) slot.
pub fn vertex_link(sk: &SkeletonIndex, tets: usize, vertex_class: usize) -> NormalVector {
    let mut v = NormalVector::zero(NormalMode::OneNormal, tets);
    let one = BigUint::from(1u8);
    for &(tet, corner) in &sk.vertex_slots[vertex_class] {
        v.add_coord(tet, DiscKind::Triangle(corner), &one);
    }
    v
}

/// Sum of all vertex links: the boundary of a regular neighbourhood of the
/// 0-skeleton, one triangle of every type in every tetrahedron.
pub fn all_vertex_links(tets: usize) -> NormalVector {
    let mut v = NormalVector::zero(NormalMode::OneNormal, tets);
    let one = BigUint::from(1u8);
    for tet in 0..tets {
        for corner in 0..4u8 {
            v.add_coord(tet, DiscKind::Triangle(corner), &one);
        }
    }
    v
}
