//! Complete enumeration of minimal nonnegative integer solutions of
//! homogeneous linear systems, and of fundamental surfaces.
//!
//! Two layers:
//!
//! * `hilbert_basis` grows candidates one unit at a time in the style of
//!   Contejean and Devie, extending x by the j-th unit vector only when
//!   <Ax, Ae_j> < 0. Every minimal solution is reached: if x < s for a
//!   solution s then <Ax, A(s - x)> = -|Ax|^2 < 0, so some coordinate with
//!   x_j < s_j satisfies the descent condition. Candidates strictly
//!   dominating a known solution are pruned. Simple and general, but only
//!   viable for small systems.
//! * `fundamental_solutions` computes the extreme rays of the solution cone
//!   by exact double description, discarding rays that violate an exclusion
//!   group as they appear. The pruning is lossless for the rays we keep: a
//!   nonnegative combination's support is the union of its parents'
//!   supports, so the parents of a group-respecting ray respect the groups
//!   themselves, and the same argument keeps the combinatorial adjacency
//!   test exact. Faces of a pointed cone inherit its extreme rays, so the
//!   subcone of solutions supported on one choice of column per group is
//!   spanned by the surviving rays that fit the choice, and its minimal
//!   solutions come out of `lattice::cone_hilbert_basis`. The union over all
//!   choices is the answer: any group-respecting solution lives in one of
//!   the subcones, and minimality only needs to be checked there because
//!   summands stay in the same subcone.
//!
//! Enumeration never returns a truncated answer: if a configured cap is hit,
//! the call fails with a resource error.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::coords::{matching_system, IntegerMatrix, NormalMode, NormalVector};
use crate::error::{Error, Result};
use crate::lattice;
use crate::tri::Triangulation;

/// Hard limits for cone and basis enumeration.
#[derive(Clone, Copy, Debug)]
pub struct HilbertCaps {
    /// Largest allowed coordinate sum of a candidate.
    pub max_level: usize,
    /// Largest allowed number of simultaneously open candidates.
    pub max_frontier: usize,
    /// Largest allowed number of basis elements.
    pub max_basis: usize,
    /// Largest allowed number of extreme rays at any stage.
    pub max_rays: usize,
    /// Largest allowed number of support faces to search.
    pub max_faces: usize,
}

impl Default for HilbertCaps {
    fn default() -> HilbertCaps {
        HilbertCaps {
            max_level: 1_000_000,
            max_frontier: 1_500_000,
            max_basis: 200_000,
            max_rays: 500_000,
            max_faces: 200_000,
        }
    }
}

impl HilbertCaps {
    /// A single knob for the size caps, used by the command line.
    pub fn with_cap(cap: usize) -> HilbertCaps {
        HilbertCaps {
            max_frontier: cap,
            max_basis: cap,
            max_rays: cap,
            max_faces: cap,
            ..HilbertCaps::default()
        }
    }
}

/// Support bitmask over at most 256 columns.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
struct Mask([u64; 4]);

impl Mask {
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn union(self, other: Mask) -> Mask {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a |= b;
        }
        out
    }

    fn is_subset(self, other: Mask) -> bool {
        self.0.iter().zip(other.0).all(|(&a, b)| a & !b == 0)
    }

    fn count(self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
}

fn support_mask(v: &[i64]) -> Mask {
    let mut m = Mask::default();
    for (i, &x) in v.iter().enumerate() {
        if x != 0 {
            m.set(i);
        }
    }
    m
}

const MAX_COLUMNS: usize = 256;

/// Extreme rays of the pointed cone {x >= 0, Ax = 0}, as primitive integer
/// vectors sorted by coordinate sum then lexicographically.
///
/// Double description: start from the unit rays of the orthant and intersect
/// with one equation at a time. Rays on the new hyperplane survive; each
/// adjacent pair of rays on opposite sides combines into one new ray.
/// Adjacency is the standard combinatorial test: u and v are adjacent unless
/// some third ray's support is contained in the union of theirs.
pub fn extreme_rays(a: &IntegerMatrix, caps: &HilbertCaps) -> Result<Vec<Vec<u64>>> {
    extreme_rays_pruned(a, caps, None)
}

/// Extreme rays whose support is accepted by `keep`, which must accept every
/// vector whose support is contained in the support of an accepted vector.
/// Rays failing the predicate are dropped the moment they appear. Dropping
/// them loses nothing else: a kept ray's parents have smaller support and
/// are kept too, and an adjacency witness against a candidate pair has
/// support inside the candidate's, so it is also kept.
pub fn extreme_rays_pruned(
    a: &IntegerMatrix,
    caps: &HilbertCaps,
    keep: Option<&dyn Fn(&[i64]) -> bool>,
) -> Result<Vec<Vec<u64>>> {
    let n = a.cols();
    if n > MAX_COLUMNS {
        return Err(Error::Resource {
            what: "cone dimension".into(),
            limit: MAX_COLUMNS,
        });
    }
    let mut rays: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut e = vec![0i64; n];
            e[j] = 1;
            e
        })
        .filter(|e| keep.map_or(true, |f| f(e)))
        .collect();
    let mut remaining: Vec<usize> = (0..a.rows()).collect();
    while !remaining.is_empty() {
        // Pick the next equation to minimize the combination work, the
        // standard mitigation against intermediate blowup.
        let mut best: Option<(usize, Vec<i64>, usize)> = None;
        for (pos, &r) in remaining.iter().enumerate() {
            let row = a.row(r);
            let vals: Vec<i64> = rays
                .iter()
                .map(|ray| dot_checked(row, ray))
                .collect::<Result<_>>()?;
            let p = vals.iter().filter(|&&v| v > 0).count();
            let m = vals.iter().filter(|&&v| v < 0).count();
            let work = p * m;
            if best.as_ref().map_or(true, |(_, _, w)| work < *w) {
                best = Some((pos, vals, work));
            }
        }
        let (pos_idx, vals, _) = best.expect("remaining rows is nonempty");
        remaining.swap_remove(pos_idx);
        if vals.iter().all(|&v| v == 0) {
            continue;
        }
        let supports: Vec<Mask> = rays.iter().map(|ray| support_mask(ray)).collect();
        let sizes: Vec<u32> = supports.iter().map(|s| s.count()).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut next: Vec<Vec<i64>> = (0..rays.len())
            .filter(|&i| vals[i] == 0)
            .map(|i| rays[i].clone())
            .collect();
        let mut seen: HashSet<Vec<i64>> = next.iter().cloned().collect();
        for &p in &pos {
            for &m in &neg {
                let pair = supports[p].union(supports[m]);
                if let Some(f) = keep {
                    // The combination's support is exactly the union, so the
                    // predicate can be checked before building the vector.
                    if !f(&union_indicator(&rays[p], &rays[m])) {
                        continue;
                    }
                }
                let pair_size = pair.count();
                let blocked = (0..rays.len()).any(|k| {
                    k != p && k != m && sizes[k] <= pair_size && supports[k].is_subset(pair)
                });
                if blocked {
                    continue;
                }
                let w = combine_rays(vals[p], &rays[m], vals[m], &rays[p])?;
                if seen.insert(w.clone()) {
                    if next.len() == caps.max_rays {
                        return Err(Error::Resource {
                            what: "extreme ray count".into(),
                            limit: caps.max_rays,
                        });
                    }
                    next.push(w);
                }
            }
        }
        rays = next;
    }
    let mut out: Vec<Vec<u64>> = rays
        .into_iter()
        .map(|ray| ray.into_iter().map(|v| v as u64).collect())
        .collect();
    out.sort_by(|p, q| {
        let (sp, sq) = (p.iter().sum::<u64>(), q.iter().sum::<u64>());
        sp.cmp(&sq).then_with(|| p.cmp(q))
    });
    Ok(out)
}

/// 0/1 vector marking the union of the supports of two nonnegative rays.
fn union_indicator(u: &[i64], v: &[i64]) -> Vec<i64> {
    u.iter()
        .zip(v)
        .map(|(&a, &b)| (a != 0 || b != 0) as i64)
        .collect()
}

fn dot_checked(row: &[i64], ray: &[i64]) -> Result<i64> {
    let acc: i128 = row
        .iter()
        .zip(ray)
        .map(|(&a, &b)| a as i128 * b as i128)
        .sum();
    i64::try_from(acc).map_err(|_| Error::internal("ray value exceeds 64 bits"))
}

/// Positive combination a*u - b*v with a > 0 > b, normalized to primitive.
fn combine_rays(a: i64, u: &[i64], b: i64, v: &[i64]) -> Result<Vec<i64>> {
    let mut w: Vec<i64> = Vec::with_capacity(u.len());
    for (&x, &y) in u.iter().zip(v) {
        let c = a as i128 * x as i128 - b as i128 * y as i128;
        w.push(i64::try_from(c).map_err(|_| Error::internal("ray coordinate exceeds 64 bits"))?);
    }
    let g = w.iter().fold(0u64, |g, &c| g.gcd(&c.unsigned_abs()));
    if g > 1 {
        for c in &mut w {
            *c /= g as i64;
        }
    }
    Ok(w)
}

/// The minimal nonzero solutions of `A x = 0` over nonnegative integers.
///
/// `filter`, if given, must be downward closed: whenever it accepts a vector
/// it accepts every pointwise smaller one. Search paths only grow
/// coordinates, so pruning by such a filter still finds every minimal
/// solution the filter accepts. The result is sorted by coordinate sum, then
/// lexicographically.
pub fn hilbert_basis(
    a: &IntegerMatrix,
    caps: &HilbertCaps,
    filter: Option<&dyn Fn(&[u64]) -> bool>,
) -> Result<Vec<Vec<u64>>> {
    let cols: Vec<Vec<i64>> = (0..a.cols())
        .map(|j| (0..a.rows()).map(|r| a.get(r, j)).collect())
        .collect();
    let mut basis = unit_step_basis(&cols, caps, filter)?;
    sort_canonical(&mut basis);
    Ok(basis)
}

/// Contejean-Devie search over the given columns.
fn unit_step_basis(
    cols: &[Vec<i64>],
    caps: &HilbertCaps,
    filter: Option<&dyn Fn(&[u64]) -> bool>,
) -> Result<Vec<Vec<u64>>> {
    let n = cols.len();
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut frontier: Vec<(Vec<u64>, Vec<i64>)> = Vec::new();
    for j in 0..n {
        let mut x = vec![0u64; n];
        x[j] = 1;
        if let Some(f) = filter {
            if !f(&x) {
                continue;
            }
        }
        if cols[j].iter().all(|&v| v == 0) {
            basis.push(x);
        } else {
            frontier.push((x, cols[j].clone()));
        }
    }

    let mut level = 1usize;
    while !frontier.is_empty() {
        level += 1;
        if level > caps.max_level {
            return Err(Error::Resource {
                what: "basis search level".into(),
                limit: caps.max_level,
            });
        }
        let mut next: Vec<(Vec<u64>, Vec<i64>)> = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for (x, ax) in &frontier {
            for j in 0..n {
                let dot: i128 = ax
                    .iter()
                    .zip(&cols[j])
                    .map(|(&p, &q)| p as i128 * q as i128)
                    .sum();
                if dot >= 0 {
                    continue;
                }
                let mut y = x.clone();
                y[j] += 1;
                if seen.contains(&y) {
                    continue;
                }
                if let Some(f) = filter {
                    if !f(&y) {
                        continue;
                    }
                }
                if basis.iter().any(|b| dominates(&y, b)) {
                    continue;
                }
                let ay: Vec<i64> = ax.iter().zip(&cols[j]).map(|(&p, &q)| p + q).collect();
                if ay.iter().all(|&v| v == 0) {
                    if basis.len() == caps.max_basis {
                        return Err(Error::Resource {
                            what: "basis size".into(),
                            limit: caps.max_basis,
                        });
                    }
                    seen.insert(y.clone());
                    basis.push(y);
                } else {
                    if next.len() == caps.max_frontier {
                        return Err(Error::Resource {
                            what: "basis search frontier".into(),
                            limit: caps.max_frontier,
                        });
                    }
                    seen.insert(y.clone());
                    next.push((y, ay));
                }
            }
        }
        frontier = next;
    }
    Ok(basis)
}

fn dominates(x: &[u64], b: &[u64]) -> bool {
    x.iter().zip(b).all(|(&xi, &bi)| xi >= bi)
}

fn sort_canonical(vectors: &mut [Vec<u64>]) {
    vectors.sort_by(|p, q| {
        let (sp, sq) = (p.iter().sum::<u64>(), q.iter().sum::<u64>());
        sp.cmp(&sq).then_with(|| p.cmp(q))
    });
}

/// Minimal nonzero solutions of `A x = 0` whose support contains at most one
/// column from each exclusion group. These are exactly the solutions not
/// expressible as a sum of two nonzero solutions with the same support
/// restriction, because every summand of an admissible vector is admissible.
pub fn fundamental_solutions(
    a: &IntegerMatrix,
    groups: &[Vec<usize>],
    caps: &HilbertCaps,
) -> Result<Vec<Vec<u64>>> {
    // Rays violating a group are dropped during the cone computation; no
    // group-respecting solution can use them as a carrier, and pruning them
    // early keeps the intermediate ray sets small.
    let respects_groups = |ray: &[i64]| {
        groups
            .iter()
            .all(|g| g.iter().filter(|&&c| ray[c] != 0).count() <= 1)
    };
    let rays = extreme_rays_pruned(a, caps, Some(&respects_groups))?;
    if rays.is_empty() {
        return Ok(Vec::new());
    }

    // Enumerate the distinct maximal ray sets over all choices of one column
    // per group. Rays using no column of the current group survive every
    // choice, so only choices actually used by surviving rays branch.
    let all: Vec<usize> = (0..rays.len()).collect();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, all)];
    let mut leaves: HashSet<Vec<usize>> = HashSet::new();
    while let Some((gi, set)) = stack.pop() {
        if set.is_empty() {
            continue;
        }
        if gi == groups.len() {
            if leaves.len() == caps.max_faces {
                return Err(Error::Resource {
                    what: "support face count".into(),
                    limit: caps.max_faces,
                });
            }
            leaves.insert(set);
            continue;
        }
        let group = &groups[gi];
        let mut by_choice: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut free: Vec<usize> = Vec::new();
        for &ri in &set {
            let used: Vec<usize> = group.iter().copied().filter(|&c| rays[ri][c] > 0).collect();
            match used.as_slice() {
                [] => free.push(ri),
                [c] => by_choice.entry(*c).or_default().push(ri),
                _ => unreachable!("rays violating a group were discarded"),
            }
        }
        if by_choice.is_empty() {
            stack.push((gi + 1, free));
        } else {
            for (_, mut chosen) in by_choice {
                chosen.extend_from_slice(&free);
                chosen.sort_unstable();
                stack.push((gi + 1, chosen));
            }
        }
    }

    // Each face subcone is spanned by its rays; its minimal solutions come
    // from the lattice geometry of that span.
    let mut found: HashSet<Vec<u64>> = HashSet::new();
    for leaf in leaves {
        let face_rays: Vec<Vec<u64>> = leaf.iter().map(|&ri| rays[ri].clone()).collect();
        for x in lattice::cone_hilbert_basis(&face_rays, caps.max_basis)? {
            found.insert(x);
        }
    }

    let mut out: Vec<Vec<u64>> = found.into_iter().collect();
    sort_canonical(&mut out);
    Ok(out)
}

/// Upper bound m * K^m on the size of minimal solutions, where m is the
/// number of variables and K the largest Euclidean row norm of the matrix,
/// rounded up to an integer. A zero matrix is treated as having K = 1 so the
/// bound stays meaningful.
pub fn norm_bound(variables: usize, max_row_norm_sq: u64) -> BigUint {
    let m = variables;
    if m == 0 {
        return BigUint::zero();
    }
    let ksq = BigUint::from(max_row_norm_sq.max(1));
    let m_big = BigUint::from(m);
    if m % 2 == 0 {
        m_big * ksq.pow((m / 2) as u32)
    } else {
        ceil_sqrt(&(&m_big * &m_big * ksq.pow(m as u32)))
    }
}

/// Smallest integer s with s*s >= n.
pub fn ceil_sqrt(n: &BigUint) -> BigUint {
    let s = n.sqrt();
    if &(&s * &s) == n {
        s
    } else {
        s + 1u8
    }
}

/// A solution basis together with the data its size bound is computed from.
#[derive(Clone, Debug)]
pub struct BasisReport {
    pub variables: usize,
    pub max_row_norm_sq: u64,
    pub norm_bound: BigUint,
    pub elements: Vec<Vec<u64>>,
}

pub fn basis_with_report(
    a: &IntegerMatrix,
    groups: &[Vec<usize>],
    caps: &HilbertCaps,
) -> Result<BasisReport> {
    let elements = fundamental_solutions(a, groups, caps)?;
    let max_row_norm_sq = a.max_row_norm_sq();
    Ok(BasisReport {
        variables: a.cols(),
        max_row_norm_sq,
        norm_bound: norm_bound(a.cols(), max_row_norm_sq),
        elements,
    })
}

/// Downward closed predicate accepting vectors with at most one nonzero quad
/// or octagon coordinate per tetrahedron.
pub fn compat_filter(mode: NormalMode, tets: usize) -> impl Fn(&[u64]) -> bool {
    let cpt = mode.coords_per_tet();
    move |x: &[u64]| {
        for t in 0..tets {
            let block = &x[t * cpt..(t + 1) * cpt];
            if block[4..].iter().filter(|&&v| v > 0).count() > 1 {
                return false;
            }
        }
        true
    }
}

/// Exclusion groups expressing the disc condition: per tetrahedron, at most
/// one quad or octagon type occurs.
pub fn disc_exclusion_groups(mode: NormalMode, tets: usize) -> Vec<Vec<usize>> {
    let cpt = mode.coords_per_tet();
    (0..tets)
        .map(|t| (4..cpt).map(|i| t * cpt + i).collect())
        .collect()
}

/// The fundamental surfaces of a triangulation: admissible vectors that are
/// not sums of two nonzero admissible vectors. Since every summand of an
/// admissible vector is itself admissible, these are exactly the minimal
/// matching solutions satisfying the per-tetrahedron disc condition.
pub fn fundamental_vectors(
    tri: &Triangulation,
    mode: NormalMode,
    caps: &HilbertCaps,
) -> Result<Vec<NormalVector>> {
    let sys = matching_system(tri, mode);
    let groups = disc_exclusion_groups(mode, tri.tet_count());
    let basis = fundamental_solutions(&sys.matrix, &groups, caps)?;
    basis
        .into_iter()
        .map(|x| {
            NormalVector::from_coords(
                mode,
                tri.tet_count(),
                x.into_iter().map(BigUint::from).collect(),
            )
        })
        .collect()
}

/// Write `target` as a nonnegative integer combination of the basis
/// elements, greedily preferring large multiples of early elements and
/// backtracking exactly. Deterministic; fails if no combination exists or if
/// the search exceeds `max_steps`.
pub fn decompose(
    target: &[BigUint],
    basis: &[Vec<u64>],
    max_steps: usize,
) -> Result<Vec<BigUint>> {
    for b in basis {
        assert_eq!(b.len(), target.len(), "basis element of wrong dimension");
        assert!(b.iter().any(|&v| v > 0), "basis must not contain zero");
    }
    let mut multipliers = vec![BigUint::zero(); basis.len()];
    let mut residual: Vec<BigUint> = target.to_vec();
    let mut steps = 0usize;
    if search(basis, 0, &mut residual, &mut multipliers, &mut steps, max_steps)? {
        Ok(multipliers)
    } else {
        Err(Error::invalid(
            "vector is not a nonnegative combination of the basis",
        ))
    }
}

fn search(
    basis: &[Vec<u64>],
    i: usize,
    residual: &mut [BigUint],
    multipliers: &mut [BigUint],
    steps: &mut usize,
    max_steps: usize,
) -> Result<bool> {
    *steps += 1;
    if *steps > max_steps {
        return Err(Error::Resource {
            what: "decomposition search steps".into(),
            limit: max_steps,
        });
    }
    if residual.iter().all(|c| c.is_zero()) {
        for m in &mut multipliers[i..] {
            *m = BigUint::zero();
        }
        return Ok(true);
    }
    if i == basis.len() {
        return Ok(false);
    }
    let b = &basis[i];
    let mut cap: Option<BigUint> = None;
    for (r, &bj) in residual.iter().zip(b) {
        if bj > 0 {
            let q = r / BigUint::from(bj);
            cap = Some(match cap {
                None => q,
                Some(c) => c.min(q),
            });
        }
    }
    let mut c = cap.expect("zero basis element");
    loop {
        let mut trial: Vec<BigUint> = residual
            .iter()
            .zip(b)
            .map(|(r, &bj)| r - BigUint::from(bj) * &c)
            .collect();
        if search(basis, i + 1, &mut trial, multipliers, steps, max_steps)? {
            multipliers[i] = c;
            return Ok(true);
        }
        if c.is_zero() {
            return Ok(false);
        }
        c -= 1u8;
    }
}
