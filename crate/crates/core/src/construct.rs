//! Iterated sphere systems.
//!
//! Starting from the vertex links, the manifold is cut along the current
//! system and the fundamental surfaces of every complement piece are
//! enumerated. A fundamental projective plane gets its doubled vector (the
//! boundary of its twisted interval neighborhood) added to the system; a
//! fundamental sphere with a vector the system does not already contain is
//! added directly. The iteration stops when neither exists. A second pass
//! extends the finished system by one-octagon fundamental spheres, one per
//! complement piece that admits one. All weight comparisons against the
//! advertised bounds are exact big-integer arithmetic.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::complement::{cut, fundamental_surfaces, surfaces_in_parallel_component, Complement};
use crate::coords::{all_vertex_links, total_weight_with, NormalVector};
use crate::error::{Error, Result};
use crate::hilbert::HilbertCaps;
use crate::realize::{realize, SurfaceKind};
use crate::tri::{build_skeleton, SkeletonIndex, Triangulation};

/// Largest tetrahedron count accepted by [`bound_for_tets`]; the bound for
/// n = 1000 already occupies about 24 MB as an integer.
pub const MAX_BOUND_TETS: u64 = 1000;

/// What one iteration of the sphere-system construction added.
#[derive(Clone, Debug)]
pub enum StepOutcome {
    /// A fundamental sphere whose vector was new to the system.
    Sphere(NormalVector),
    /// A one-sided fundamental projective plane; the doubled vector is what
    /// actually joined the system, and the plane's twisted neighborhood is
    /// excluded from later searches.
    ProjectivePair {
        plane: NormalVector,
        double: NormalVector,
    },
}

#[derive(Clone, Debug)]
pub struct IterationStep {
    /// 1-based step number.
    pub iteration: usize,
    pub weight_before: BigUint,
    pub weight_after: BigUint,
    pub outcome: StepOutcome,
}

/// A system of disjoint normal spheres, plus the log of how it was built.
#[derive(Clone, Debug)]
pub struct SphereSystem {
    /// Connected components of the realized system, in realization order.
    pub components: Vec<NormalVector>,
    /// Sum of all components.
    pub total: NormalVector,
    pub total_weight: BigUint,
    /// Projective planes whose doubles were added; their twisted interval
    /// neighborhoods stay out of every later enumeration.
    pub planes: Vec<NormalVector>,
    pub steps: Vec<IterationStep>,
    /// One-octagon spheres appended by [`construct_tilde_sigma`]; empty for
    /// the plain construction.
    pub octagon_spheres: Vec<NormalVector>,
    /// The input has an edge of degree < 3. The construction still runs,
    /// but the advertised weight bounds are only guaranteed for degree >= 3.
    pub low_degree_edges: bool,
}

impl SphereSystem {
    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "sphere system: {} components, total weight {}, {} iterations{}",
            self.components.len(),
            self.total_weight,
            self.steps.len(),
            if self.low_degree_edges {
                " (low-degree edges: norm bounds not guaranteed)"
            } else {
                ""
            }
        );
        for (i, v) in self.components.iter().enumerate() {
            let _ = writeln!(out, "  component {}: {}", i, one_line(v));
        }
        for step in &self.steps {
            match &step.outcome {
                StepOutcome::Sphere(v) => {
                    let _ = writeln!(
                        out,
                        "  step {}: weight {} -> {}, added sphere {}",
                        step.iteration,
                        step.weight_before,
                        step.weight_after,
                        one_line(v)
                    );
                }
                StepOutcome::ProjectivePair { plane, .. } => {
                    let _ = writeln!(
                        out,
                        "  step {}: weight {} -> {}, doubled projective plane {}",
                        step.iteration,
                        step.weight_before,
                        step.weight_after,
                        one_line(plane)
                    );
                }
            }
        }
        for v in &self.octagon_spheres {
            let _ = writeln!(out, "  octagon sphere: {}", one_line(v));
        }
        out
    }
}

fn one_line(v: &NormalVector) -> String {
    v.serialize().replace('\n', "; ")
}

/// A surface found inside one complement component, ready for selection.
struct Candidate {
    weight: BigUint,
    vector: NormalVector,
}

/// Least candidate by weight, then by coordinate order.
fn take_least(mut cands: Vec<Candidate>) -> Option<Candidate> {
    cands.sort_by(|a, b| {
        a.weight
            .cmp(&b.weight)
            .then_with(|| a.vector.coords().cmp(b.vector.coords()))
    });
    cands.into_iter().next()
}

/// True for an all-parallelity component that is the twisted interval
/// neighborhood of an already recorded projective plane: its core is one of
/// the planes and its boundary is a single sphere. Product shells never
/// qualify because they have two boundary components.
fn is_excluded_plane_neighborhood(
    c: &Complement,
    component: usize,
    planes: &[NormalVector],
) -> Result<bool> {
    let comp = &c.components[component];
    if comp.m != 0 || comp.boundary.len() != 1 {
        return Ok(false);
    }
    let core = surfaces_in_parallel_component(c, component)?;
    Ok(planes.iter().any(|p| *p == core))
}

struct Harvest {
    planes: Vec<Candidate>,
    spheres: Vec<Candidate>,
}

/// Fundamental surfaces of every complement component, split into projective
/// planes and spheres not already in the system, skipping the recorded
/// plane neighborhoods.
fn harvest_candidates(
    c: &Complement,
    sk: &SkeletonIndex,
    tri: &Triangulation,
    existing: &[NormalVector],
    planes: &[NormalVector],
    caps: &HilbertCaps,
) -> Result<Harvest> {
    let mut found = Harvest {
        planes: Vec::new(),
        spheres: Vec::new(),
    };
    for component in 0..c.components.len() {
        if is_excluded_plane_neighborhood(c, component, planes)? {
            continue;
        }
        for (_, f) in fundamental_surfaces(c, component, caps)? {
            if !f.octagon_count().is_zero() {
                continue;
            }
            let v = f.demote_if_one_normal();
            let r = realize(&v, tri)?;
            if r.components().len() != 1 {
                return Err(Error::internal(
                    "fundamental surface realized with several components",
                ));
            }
            let kind = r.components()[0].kind;
            let weight = total_weight_with(&v, sk)?;
            match kind {
                SurfaceKind::ProjectivePlane => found.planes.push(Candidate { weight, vector: v }),
                SurfaceKind::Sphere => {
                    if existing.iter().all(|e| *e != v) {
                        found.spheres.push(Candidate { weight, vector: v });
                    }
                }
                _ => {}
            }
        }
    }
    Ok(found)
}

/// Build a maximal system of disjoint normal spheres by iterated cutting.
pub fn construct_sigma(tri: &Triangulation, caps: &HilbertCaps) -> Result<SphereSystem> {
    if !tri.is_orientable() {
        return Err(Error::invalid(
            "sphere-system construction requires an orientable manifold",
        ));
    }
    let tets = tri.tet_count();
    let sk = build_skeleton(tri);
    let low_degree_edges = (0..sk.edge_count).any(|e| sk.edge_degree(e) < 3);

    let mut total = all_vertex_links(tets);
    let mut planes: Vec<NormalVector> = Vec::new();
    let mut steps: Vec<IterationStep> = Vec::new();

    loop {
        if steps.len() >= 10 * tets {
            return Err(Error::internal(
                "sphere-system iteration exceeded ten steps per tetrahedron",
            ));
        }
        let realized = realize(&total, tri)?;
        for comp in realized.components() {
            if comp.kind != SurfaceKind::Sphere {
                return Err(Error::internal(
                    "sphere system acquired a non-sphere component",
                ));
            }
        }
        let component_vectors: Vec<NormalVector> = realized
            .components()
            .iter()
            .map(|c| c.vector.clone())
            .collect();
        let weight_before = total_weight_with(&total, &sk)?;

        let c = cut(tri, &realized, true)?;
        let harvest = harvest_candidates(&c, &sk, tri, &component_vectors, &planes, caps)?;

        if let Some(p) = take_least(harvest.planes) {
            let double = p.vector.haken_sum(&p.vector)?;
            let rd = realize(&double, tri)?;
            if rd.components().len() != 1 || rd.components()[0].kind != SurfaceKind::Sphere {
                return Err(Error::internal(
                    "doubled projective plane did not realize as a single sphere",
                ));
            }
            total = total.haken_sum(&double)?;
            let weight_after = total_weight_with(&total, &sk)?;
            planes.push(p.vector.clone());
            steps.push(IterationStep {
                iteration: steps.len() + 1,
                weight_before,
                weight_after,
                outcome: StepOutcome::ProjectivePair {
                    plane: p.vector,
                    double,
                },
            });
            continue;
        }
        if let Some(s) = take_least(harvest.spheres) {
            total = total.haken_sum(&s.vector)?;
            let weight_after = total_weight_with(&total, &sk)?;
            steps.push(IterationStep {
                iteration: steps.len() + 1,
                weight_before,
                weight_after,
                outcome: StepOutcome::Sphere(s.vector),
            });
            continue;
        }
        break;
    }

    let realized = realize(&total, tri)?;
    let components: Vec<NormalVector> = realized
        .components()
        .iter()
        .map(|c| c.vector.clone())
        .collect();
    if components.len() > 10 * tets {
        return Err(Error::internal(
            "sphere system has more than ten components per tetrahedron",
        ));
    }
    let total_weight = total_weight_with(&total, &sk)?;
    Ok(SphereSystem {
        components,
        total,
        total_weight,
        planes,
        steps,
        octagon_spheres: Vec::new(),
        low_degree_edges,
    })
}

/// One maximality check: a fundamental surface of one complement component,
/// with the verdict of the boundary-parallelism test.
#[derive(Clone, Debug)]
pub struct MaximalityCheck {
    pub component: usize,
    pub fundamental: NormalVector,
    pub is_sphere: bool,
    /// Vector-equal to a boundary component of its complement piece.
    pub boundary_parallel: bool,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct MaximalityReport {
    pub components: usize,
    pub checks: Vec<MaximalityCheck>,
    pub all_pass: bool,
}

impl MaximalityReport {
    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "maximality: {} complement components, {} fundamental surfaces checked",
            self.components,
            self.checks.len()
        );
        for check in &self.checks {
            let _ = writeln!(
                out,
                "  component {}: {} {} [{}]",
                check.component,
                if check.is_sphere {
                    "sphere"
                } else {
                    "non-sphere"
                },
                one_line(&check.fundamental),
                if check.pass { "pass" } else { "FAIL" }
            );
        }
        let _ = writeln!(
            out,
            "maximality verdict: {}",
            if self.all_pass { "pass" } else { "FAIL" }
        );
        out
    }
}

/// Check that the system cannot be enlarged: every fundamental sphere
/// without octagons in every complement piece is a parallel copy of that
/// piece's boundary. A failure signals a bug in the construction, not a
/// property of the input.
pub fn verify_maximal(
    tri: &Triangulation,
    sigma: &SphereSystem,
    caps: &HilbertCaps,
) -> Result<MaximalityReport> {
    let realized = realize(&sigma.total, tri)?;
    let c = cut(tri, &realized, true)?;
    let mut checks = Vec::new();
    for component in 0..c.components.len() {
        let boundary = &c.components[component].boundary;
        for (_, f) in fundamental_surfaces(&c, component, caps)? {
            if !f.octagon_count().is_zero() {
                continue;
            }
            let v = f.demote_if_one_normal();
            let r = realize(&v, tri)?;
            let is_sphere =
                r.components().len() == 1 && r.components()[0].kind == SurfaceKind::Sphere;
            let boundary_parallel = boundary.iter().any(|b| *b == v);
            checks.push(MaximalityCheck {
                component,
                fundamental: v,
                is_sphere,
                boundary_parallel,
                pass: !is_sphere || boundary_parallel,
            });
        }
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(MaximalityReport {
        components: c.components.len(),
        checks,
        all_pass,
    })
}

/// Extend a finished system by one-octagon fundamental spheres: for every
/// complement piece admitting a fundamental sphere with exactly one octagon
/// under the weight bound, the canonically least one joins the system.
pub fn construct_tilde_sigma(
    tri: &Triangulation,
    sigma: &SphereSystem,
    caps: &HilbertCaps,
) -> Result<SphereSystem> {
    let tets = tri.tet_count();
    let sk = build_skeleton(tri);
    let realized = realize(&sigma.total, tri)?;
    let c = cut(tri, &realized, true)?;
    let weight_cap = BigUint::one() << (189 * tets * tets);

    let mut octagon_spheres = Vec::new();
    let mut total = sigma.total.promote();
    for component in 0..c.components.len() {
        let mut cands = Vec::new();
        for (_, f) in fundamental_surfaces(&c, component, caps)? {
            if f.octagon_count() != BigUint::one() {
                continue;
            }
            let r = realize(&f, tri)?;
            if r.components().len() != 1 {
                return Err(Error::internal(
                    "fundamental surface realized with several components",
                ));
            }
            if r.components()[0].kind != SurfaceKind::Sphere {
                continue;
            }
            let weight = total_weight_with(&f, &sk)?;
            if weight < weight_cap {
                cands.push(Candidate { weight, vector: f });
            }
        }
        if let Some(best) = take_least(cands) {
            total = total.haken_sum(&best.vector)?;
            octagon_spheres.push(best.vector);
        }
    }

    let realized = realize(&total, tri)?;
    let components: Vec<NormalVector> = realized
        .components()
        .iter()
        .map(|c| c.vector.clone())
        .collect();
    let total_weight = total_weight_with(&total, &sk)?;
    Ok(SphereSystem {
        components,
        total,
        total_weight,
        planes: sigma.planes.clone(),
        steps: sigma.steps.clone(),
        octagon_spheres,
        low_degree_edges: sigma.low_degree_edges,
    })
}

/// One exact comparison of a measured value against its advertised bound.
#[derive(Clone, Debug)]
pub struct BoundCheck {
    pub label: String,
    pub value: BigUint,
    pub bound: BigUint,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub tets: usize,
    pub checks: Vec<BoundCheck>,
    pub all_pass: bool,
    pub low_degree_edges: bool,
}

impl BoundReport {
    pub fn report(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "bound report for {} tetrahedra", self.tets);
        if self.low_degree_edges {
            let _ = writeln!(
                out,
                "  note: an edge has degree < 3, bounds are not guaranteed"
            );
        }
        for check in &self.checks {
            let _ = writeln!(
                out,
                "  {}: {} against {} [{}]",
                check.label,
                format_big(&check.value),
                format_big(&check.bound),
                if check.pass { "pass" } else { "FAIL" }
            );
        }
        let _ = writeln!(
            out,
            "bound verdict: {}",
            if self.all_pass { "pass" } else { "FAIL" }
        );
        out
    }
}

/// Exact powers of two print symbolically, everything else in decimal.
pub fn format_big(v: &BigUint) -> String {
    if !v.is_zero() && v.count_ones() == 1 {
        format!("2^{}", v.bits() - 1)
    } else {
        v.to_string()
    }
}

/// Evaluate every advertised bound of the two constructions exactly.
pub fn bound_report(
    tri: &Triangulation,
    sigma: &SphereSystem,
    tilde: &SphereSystem,
) -> Result<BoundReport> {
    let tets = tri.tet_count();
    let sk = build_skeleton(tri);
    let mut checks = Vec::new();
    let push_less =
        |checks: &mut Vec<BoundCheck>, label: String, value: BigUint, bound: BigUint| {
            let pass = value < bound;
            checks.push(BoundCheck {
                label,
                value,
                bound,
                pass,
            });
        };

    push_less(
        &mut checks,
        "sphere system weight".into(),
        sigma.total_weight.clone(),
        BigUint::one() << (185 * tets * tets),
    );
    for step in &sigma.steps {
        push_less(
            &mut checks,
            format!("step {} growth", step.iteration),
            step.weight_after.clone(),
            &step.weight_before * (BigUint::one() << (18 * tets + 2)),
        );
    }
    push_less(
        &mut checks,
        "iteration count".into(),
        BigUint::from(sigma.steps.len()),
        BigUint::from(10 * tets),
    );
    for (i, f) in tilde.octagon_spheres.iter().enumerate() {
        push_less(
            &mut checks,
            format!("octagon sphere {} weight", i),
            total_weight_with(f, &sk)?,
            BigUint::one() << (189 * tets * tets),
        );
    }
    push_less(
        &mut checks,
        "extended system weight".into(),
        tilde.total_weight.clone(),
        BigUint::one() << (190 * tets * tets),
    );
    // Component count is a non-strict bound, ten per tetrahedron.
    let count = BigUint::from(tilde.components.len());
    let cap = BigUint::from(10 * tets);
    checks.push(BoundCheck {
        label: "extended component count".into(),
        pass: count <= cap,
        value: count,
        bound: cap,
    });
    push_less(
        &mut checks,
        "extended weight under the headline bound".into(),
        tilde.total_weight.clone(),
        bound_for_tets(tets as u64)?,
    );

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(BoundReport {
        tets,
        checks,
        all_pass,
        low_degree_edges: sigma.low_degree_edges,
    })
}

/// The headline bound for a manifold on n tetrahedra: 2 to the 196 n^2.
pub fn bound_for_tets(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::invalid("tetrahedron count must be positive"));
    }
    if n > MAX_BOUND_TETS {
        return Err(Error::Resource {
            what: "tetrahedron count for the headline bound".into(),
            limit: MAX_BOUND_TETS as usize,
        });
    }
    Ok(BigUint::one() << (196 * (n * n) as usize))
}

/// Least n with 2^(196 n^2) > b: the smallest tetrahedron count whose
/// headline bound exceeds the given value. Exact: 2^k > b holds exactly
/// when k is at least the bit length of b.
pub fn tets_for_bridge(b: &BigUint) -> Result<u64> {
    if b.is_zero() {
        return Err(Error::invalid("bound target must be positive"));
    }
    let need = b.bits();
    let mut n = 1u64;
    while 196 * n * n < need {
        n += 1;
    }
    Ok(n)
}
