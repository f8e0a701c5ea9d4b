//! Exact integer linear algebra: ranks, Smith normal form, lattice points
//! of simplicial cones, and simplicial covers of pointed rational cones.
//!
//! Everything here works over arbitrary precision integers; no floating
//! point is used anywhere. The functions are sized for the small, highly
//! structured systems produced by surface coordinates, not for bulk numeric
//! work.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Mat, x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum())
        .collect()
}

/// Divide a vector by the gcd of its entries, keeping zero vectors intact.
pub fn primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for c in v.iter() {
        g = g.gcd(c);
    }
    if g > BigInt::one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
}

/// Incremental exact rank computation over the rationals, kept as scaled
/// integer rows.
pub struct Eliminator {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Eliminator {
    pub fn new() -> Eliminator {
        Eliminator {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the accumulated rows; if a nonzero remainder is
    /// left, absorb it and report growth.
    pub fn try_add(&mut self, v: &[BigInt]) -> bool {
        let mut w: Vec<BigInt> = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let (a, b) = (row[p].clone(), w[p].clone());
                for (wj, rj) in w.iter_mut().zip(row) {
                    *wj = &*wj * &a - rj * &b;
                }
                primitive(&mut w);
            }
        }
        match w.iter().position(|c| !c.is_zero()) {
            Some(p) => {
                self.rows.push(w);
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }
}

pub fn rank_of(vectors: &[Vec<BigInt>]) -> usize {
    let mut e = Eliminator::new();
    for v in vectors {
        e.try_add(v);
    }
    e.rank()
}

/// Indices of a coordinate subset on which the given vectors keep full rank,
/// so that dropping the other coordinates is injective on their span.
pub fn full_rank_coords(vectors: &[Vec<BigInt>], rank: usize) -> Vec<usize> {
    let dim = vectors.first().map_or(0, |v| v.len());
    let mut chosen = Vec::new();
    let mut e = Eliminator::new();
    for c in 0..dim {
        if e.rank() == rank {
            break;
        }
        let col: Vec<BigInt> = vectors.iter().map(|v| v[c].clone()).collect();
        if e.try_add(&col) {
            chosen.push(c);
        }
    }
    assert_eq!(chosen.len(), rank, "vectors have smaller rank than stated");
    chosen
}

/// Smith normal form with all four transformation matrices: u * a * v = d
/// with u, v unimodular and d diagonal with a divisibility chain.
pub struct Smith {
    pub d: Mat,
    pub u: Mat,
    pub uinv: Mat,
    pub v: Mat,
    pub vinv: Mat,
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn smith(a: &Mat) -> Smith {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut d = a.clone();
    let mut u = identity(m);
    let mut uinv = identity(m);
    let mut v = identity(n);
    let mut vinv = identity(n);

    // Row operation row_r -= q * row_t on d and u; uinv absorbs the inverse
    // as the column operation col_t += q * col_r.
    let row_sub = |d: &mut Mat, u: &mut Mat, uinv: &mut Mat, r: usize, t: usize, q: &BigInt| {
        for j in 0..d[r].len() {
            let s = &d[t][j] * q;
            d[r][j] -= s;
        }
        for j in 0..u[r].len() {
            let s = &u[t][j] * q;
            u[r][j] -= s;
        }
        for i in 0..uinv.len() {
            let s = &uinv[i][r] * q;
            uinv[i][t] += s;
        }
    };
    let col_sub = |d: &mut Mat, v: &mut Mat, vinv: &mut Mat, c: usize, t: usize, q: &BigInt| {
        for row in d.iter_mut() {
            let s = &row[t] * q;
            row[c] -= s;
        }
        for row in v.iter_mut() {
            let s = &row[t] * q;
            row[c] -= s;
        }
        for j in 0..vinv[t].len() {
            let s = &vinv[c][j] * q;
            vinv[t][j] += s;
        }
    };
    let swap_rows = |d: &mut Mat, u: &mut Mat, uinv: &mut Mat, r: usize, t: usize| {
        d.swap(r, t);
        u.swap(r, t);
        for row in uinv.iter_mut() {
            row.swap(r, t);
        }
    };
    let swap_cols = |d: &mut Mat, v: &mut Mat, vinv: &mut Mat, c: usize, t: usize| {
        for row in d.iter_mut() {
            row.swap(c, t);
        }
        for row in v.iter_mut() {
            row.swap(c, t);
        }
        vinv.swap(c, t);
    };

    let mut t = 0;
    while t < m.min(n) {
        // Find a nonzero pivot of smallest magnitude in the submatrix.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero()
                    && best
                        .map(|(bi, bj)| d[i][j].magnitude() < d[bi][bj].magnitude())
                        .unwrap_or(true)
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        if pi != t {
            swap_rows(&mut d, &mut u, &mut uinv, pi, t);
        }
        if pj != t {
            swap_cols(&mut d, &mut v, &mut vinv, pj, t);
        }
        loop {
            // Euclidean elimination in column t.
            while let Some(r) = (t + 1..m).find(|&r| !d[r][t].is_zero()) {
                let q = &d[r][t] / &d[t][t];
                if !q.is_zero() {
                    row_sub(&mut d, &mut u, &mut uinv, r, t, &q);
                }
                if !d[r][t].is_zero() {
                    swap_rows(&mut d, &mut u, &mut uinv, r, t);
                }
            }
            // Euclidean elimination in row t.
            while let Some(c) = (t + 1..n).find(|&c| !d[t][c].is_zero()) {
                let q = &d[t][c] / &d[t][t];
                if !q.is_zero() {
                    col_sub(&mut d, &mut v, &mut vinv, c, t, &q);
                }
                if !d[t][c].is_zero() {
                    swap_cols(&mut d, &mut v, &mut vinv, c, t);
                }
            }
            if (t + 1..m).any(|r| !d[r][t].is_zero()) {
                continue;
            }
            // Enforce the divisibility chain: the pivot must divide every
            // remaining entry, else absorb the offending row and restart.
            let offender = (t + 1..m)
                .flat_map(|r| (t + 1..n).map(move |c| (r, c)))
                .find(|&(r, c)| !(&d[r][c] % &d[t][t]).is_zero());
            match offender {
                Some((r, _)) => {
                    let one = BigInt::from(-1);
                    row_sub(&mut d, &mut u, &mut uinv, t, r, &one);
                }
                None => break,
            }
        }
        t += 1;
    }
    for i in 0..m.min(n) {
        if d[i][i].is_negative() {
            for j in 0..n {
                d[i][j] = -d[i][j].clone();
            }
            for j in 0..m {
                u[i][j] = -u[i][j].clone();
            }
            for row in uinv.iter_mut() {
                row[i] = -row[i].clone();
            }
        }
    }
    let rank = (0..m.min(n)).take_while(|&i| !d[i][i].is_zero()).count();
    Smith {
        d,
        u,
        uinv,
        v,
        vinv,
        rank,
    }
}

/// The nonzero lattice points Σ λ_i r_i with all λ_i in [0,1) of the
/// simplicial cone spanned by linearly independent integer vectors.
///
/// Writing R = B M with B a basis of the lattice of integer points in the
/// span and M square, the points correspond to the cosets of M Z^k in Z^k.
/// Smith form U' M V' = E gives coset representatives x = U'^-1 y for y
/// ranging over the box of the diagonal e, and lambda_0 = V' E^-1 y; the
/// point itself is B (x - M floor(lambda_0)), which stays in integers.
pub fn parallelepiped_points(rays: &[Vec<BigInt>], cap: usize) -> Result<Vec<Vec<BigInt>>> {
    let k = rays.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let n = rays[0].len();
    let a: Mat = (0..n)
        .map(|i| (0..k).map(|j| rays[j][i].clone()).collect())
        .collect();
    let s = smith(&a);
    assert_eq!(s.rank, k, "rays must be linearly independent");
    // Basis of the saturated lattice: first k columns of uinv.
    let basis: Mat = (0..n)
        .map(|i| (0..k).map(|j| s.uinv[i][j].clone()).collect())
        .collect();
    // Ray coordinates in that basis: top k rows of d times vinv.
    let mm: Mat = (0..k)
        .map(|i| (0..k).map(|j| &s.d[i][i] * &s.vinv[i][j]).collect())
        .collect();
    let sm = smith(&mm);
    assert_eq!(sm.rank, k, "ray coordinate matrix must be invertible");
    let e = sm.diagonal();
    let mut total = BigInt::one();
    for ei in &e {
        total *= ei;
    }
    if total > BigInt::from(cap) {
        return Err(Error::Resource {
            what: "parallelepiped lattice point count".into(),
            limit: cap,
        });
    }
    let delta = e.iter().fold(BigInt::one(), |l, ei| l.lcm(ei));
    let scale: Vec<BigInt> = e.iter().map(|ei| &delta / ei).collect();

    let mut points = Vec::new();
    let mut y: Vec<BigInt> = vec![BigInt::zero(); k];
    loop {
        // Advance the odometer; the all-zero coset is the origin and skipped.
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(points);
            }
            y[pos] += 1;
            if y[pos] < e[pos] {
                break;
            }
            y[pos] = BigInt::zero();
            pos += 1;
        }
        let x = mat_vec(&sm.uinv, &y);
        let scaled: Vec<BigInt> = y.iter().zip(&scale).map(|(yi, si)| yi * si).collect();
        let z = mat_vec(&sm.v, &scaled);
        let floors: Vec<BigInt> = z.iter().map(|zi| zi.div_floor(&delta)).collect();
        let shift = mat_vec(&mm, &floors);
        let pb: Vec<BigInt> = x.iter().zip(&shift).map(|(xi, si)| xi - si).collect();
        let p = mat_vec(&basis, &pb);
        assert!(!p.iter().all(|c| c.is_zero()), "nonzero coset gave the origin");
        points.push(p);
    }
}

/// Scaled inverse of a square integer matrix: returns (w, delta) with
/// m * w = delta * identity and delta nonzero.
fn inverse_scaled(m: &Mat) -> Option<(Mat, BigInt)> {
    let k = m.len();
    let s = smith(m);
    if s.rank != k {
        return None;
    }
    let e = s.diagonal();
    let delta = e.iter().fold(BigInt::one(), |l, ei| l.lcm(ei));
    // m^-1 = v e^-1 u, so w = v * diag(delta/e) * u.
    let mut mid = identity(k);
    for (i, ei) in e.iter().enumerate() {
        mid[i][i] = &delta / ei;
    }
    Some((mat_mul(&s.v, &mat_mul(&mid, &s.u)), delta))
}

/// Ray index sets of the facets of the full dimensional pointed cone
/// spanned by the given vectors, via double description of the dual cone.
pub fn facets(rays: &[Vec<BigInt>], max_rays: usize) -> Result<Vec<Vec<usize>>> {
    let duals = dual_rays(rays, max_rays)?;
    let dot = |nu: &[BigInt], r: &[BigInt]| -> BigInt {
        nu.iter().zip(r).map(|(a, b)| a * b).sum()
    };
    let mut out: Vec<Vec<usize>> = duals
        .iter()
        .map(|nu| {
            (0..rays.len())
                .filter(|&i| dot(nu, &rays[i]).is_zero())
                .collect::<Vec<usize>>()
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Extreme rays of the dual of the full dimensional pointed cone spanned by
/// the given vectors, i.e. primitive normals nu with nu . r >= 0 for every
/// ray r, one per facet.
pub fn dual_rays(rays: &[Vec<BigInt>], max_rays: usize) -> Result<Vec<Vec<BigInt>>> {
    let k = rays.len();
    let dim = rays[0].len();
    // An independent subset spanning the space seeds the dual with the
    // scaled inverse basis.
    let mut e = Eliminator::new();
    let mut seed = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        if e.try_add(r) {
            seed.push(i);
        }
    }
    assert_eq!(seed.len(), dim, "cone must be full dimensional");
    let sub: Mat = seed.iter().map(|&i| rays[i].clone()).collect();
    let (w, delta) = inverse_scaled(&sub).expect("independent subset is invertible");
    // Dual seed rays: columns of w^T scaled, i.e. nu_j . r_seed_i = delta δij.
    let mut duals: Vec<Vec<BigInt>> = (0..dim)
        .map(|j| {
            let mut nu: Vec<BigInt> = (0..dim).map(|i| w[i][j].clone()).collect();
            if delta.is_negative() {
                for c in &mut nu {
                    *c = -c.clone();
                }
            }
            primitive(&mut nu);
            nu
        })
        .collect();

    let dot = |nu: &[BigInt], r: &[BigInt]| -> BigInt {
        nu.iter().zip(r).map(|(a, b)| a * b).sum()
    };
    let mut processed: Vec<usize> = Vec::new();
    for i in 0..k {
        let vals: Vec<BigInt> = duals.iter().map(|nu| dot(nu, &rays[i])).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            processed.push(i);
            continue;
        }
        // Active constraint sets over processed rays decide adjacency.
        let actives: Vec<Vec<bool>> = duals
            .iter()
            .map(|nu| {
                processed
                    .iter()
                    .map(|&pj| dot(nu, &rays[pj]).is_zero())
                    .collect()
            })
            .collect();
        let mut next: Vec<Vec<BigInt>> = Vec::new();
        for (j, nu) in duals.iter().enumerate() {
            if !vals[j].is_negative() {
                next.push(nu.clone());
            }
        }
        let pos: Vec<usize> = (0..duals.len()).filter(|&j| vals[j].is_positive()).collect();
        let neg: Vec<usize> = (0..duals.len()).filter(|&j| vals[j].is_negative()).collect();
        for &p in &pos {
            for &m in &neg {
                let meet: Vec<bool> = actives[p]
                    .iter()
                    .zip(&actives[m])
                    .map(|(&a, &b)| a && b)
                    .collect();
                let blocked = (0..duals.len()).any(|c| {
                    c != p && c != m && meet.iter().zip(&actives[c]).all(|(&mm, &cc)| !mm || cc)
                });
                if blocked {
                    continue;
                }
                let mut nu: Vec<BigInt> = duals[p]
                    .iter()
                    .zip(&duals[m])
                    .map(|(np, nm)| nm * &vals[p] - np * &vals[m])
                    .collect();
                primitive(&mut nu);
                if next.len() == max_rays {
                    return Err(Error::Resource {
                        what: "dual ray count".into(),
                        limit: max_rays,
                    });
                }
                next.push(nu);
            }
        }
        duals = next;
        duals.sort();
        duals.dedup();
        processed.push(i);
    }
    Ok(duals)
}

/// A cover of the pointed cone spanned by the given integer vectors by
/// simplicial subcones on subsets of the rays. Recursion: the cone is the
/// union of the pyramids from one ray over the facets avoiding it, and each
/// facet is covered in one dimension lower. Overlaps are allowed; only
/// membership matters to the callers.
pub fn simplicial_cover(rays: &[Vec<BigInt>], max_rays: usize) -> Result<Vec<Vec<usize>>> {
    let rank = rank_of(rays);
    let coords = full_rank_coords(rays, rank);
    let projected: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|r| coords.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let indices: Vec<usize> = (0..rays.len()).collect();
    let mut memo: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    cover_rec(&indices, &projected, rank, max_rays, &mut memo)
}

fn cover_rec(
    indices: &[usize],
    vecs: &[Vec<BigInt>],
    rank: usize,
    max_rays: usize,
    memo: &mut HashMap<Vec<usize>, Vec<Vec<usize>>>,
) -> Result<Vec<Vec<usize>>> {
    if indices.len() == rank {
        return Ok(vec![indices.to_vec()]);
    }
    if let Some(hit) = memo.get(indices) {
        return Ok(hit.clone());
    }
    let fs = facets(vecs, max_rays)?;
    let mut out: Vec<Vec<usize>> = Vec::new();
    for f in fs {
        if f.contains(&0) {
            continue;
        }
        let sub_idx: Vec<usize> = f.iter().map(|&i| indices[i]).collect();
        let sub_raw: Vec<Vec<BigInt>> = f.iter().map(|&i| vecs[i].clone()).collect();
        let sub_rank = rank_of(&sub_raw);
        let coords = full_rank_coords(&sub_raw, sub_rank);
        let sub_vecs: Vec<Vec<BigInt>> = sub_raw
            .iter()
            .map(|r| coords.iter().map(|&c| r[c].clone()).collect())
            .collect();
        for mut simplex in cover_rec(&sub_idx, &sub_vecs, sub_rank, max_rays, memo)? {
            simplex.push(indices[0]);
            simplex.sort_unstable();
            out.push(simplex);
        }
    }
    out.sort();
    out.dedup();
    memo.insert(indices.to_vec(), out.clone());
    Ok(out)
}

/// The Hilbert basis of the pointed cone spanned by the given nonnegative
/// integer rays: the integer points not expressible as a sum of two nonzero
/// integer points of the cone. Candidates are the rays together with the
/// parallelepiped points of a simplicial cover; reduction removes the ones
/// that split.
pub fn cone_hilbert_basis(rays: &[Vec<u64>], cap: usize) -> Result<Vec<Vec<u64>>> {
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    let width = rays[0].len();
    // Work on the columns actually used by the cone.
    let used: Vec<usize> = (0..width)
        .filter(|&c| rays.iter().any(|r| r[c] > 0))
        .collect();
    let big: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|r| used.iter().map(|&c| BigInt::from(r[c])).collect())
        .collect();
    let rank = rank_of(&big);
    let simplices: Vec<Vec<usize>> = if big.len() == rank {
        vec![(0..big.len()).collect()]
    } else {
        simplicial_cover(&big, cap)?
    };

    let mut candidates: Vec<Vec<BigInt>> = big.clone();
    for simplex in &simplices {
        let srays: Vec<Vec<BigInt>> = simplex.iter().map(|&i| big[i].clone()).collect();
        let mut pts = parallelepiped_points(&srays, cap)?;
        candidates.append(&mut pts);
        if candidates.len() > cap {
            return Err(Error::Resource {
                what: "basis candidate count".into(),
                limit: cap,
            });
        }
    }
    candidates.sort();
    candidates.dedup();
    for p in &candidates {
        assert!(
            !p.iter().any(|c| c.is_negative()),
            "cone candidate left the nonnegative orthant"
        );
    }
    // A candidate splits exactly when subtracting some other candidate
    // leaves it inside the cone: the difference is then a nonzero integer
    // cone point. Completeness of the test: any splitting has a basis
    // element as a summand, and every basis element is a candidate. Cone
    // membership is checked against the facet normals; differences of cone
    // points stay in the span, where the normals are decisive.
    let proj_coords = full_rank_coords(&big, rank);
    let projected: Vec<Vec<BigInt>> = big
        .iter()
        .map(|r| proj_coords.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let duals = dual_rays(&projected, cap)?;
    let in_cone = |d: &[BigInt]| -> bool {
        if d.iter().any(|c| c.is_negative()) {
            return false;
        }
        duals.iter().all(|nu| {
            let dot: BigInt = nu
                .iter()
                .zip(proj_coords.iter().map(|&c| &d[c]))
                .map(|(a, b)| a * b)
                .sum();
            !dot.is_negative()
        })
    };
    let minimal: Vec<&Vec<BigInt>> = candidates
        .iter()
        .filter(|x| {
            !candidates.iter().any(|y| {
                y != *x && {
                    let diff: Vec<BigInt> =
                        x.iter().zip(y.iter()).map(|(xi, yi)| xi - yi).collect();
                    in_cone(&diff)
                }
            })
        })
        .collect();
    let mut out: Vec<Vec<u64>> = minimal
        .into_iter()
        .map(|x| {
            let mut full = vec![0u64; width];
            for (&c, v) in used.iter().zip(x) {
                full[c] = u64::try_from(v).expect("basis coordinate exceeds 64 bits");
            }
            full
        })
        .collect();
    out.sort_by(|p, q| {
        let (sp, sq) = (p.iter().sum::<u64>(), q.iter().sum::<u64>());
        sp.cmp(&sq).then_with(|| p.cmp(q))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big_mat(rows: &[&[i64]]) -> Mat {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn check_smith(a: &Mat) {
        let s = smith(a);
        assert_eq!(mat_mul(&mat_mul(&s.u, a), &s.v), s.d);
        assert_eq!(mat_mul(&s.u, &s.uinv), identity(a.len()));
        let n = a.first().map_or(0, |r| r.len());
        assert_eq!(mat_mul(&s.v, &s.vinv), identity(n));
        for i in 0..s.rank.saturating_sub(1) {
            assert!(
                (&s.d[i + 1][i + 1] % &s.d[i][i]).is_zero(),
                "divisibility chain broken"
            );
        }
        for i in 0..s.rank {
            assert!(s.d[i][i].is_positive());
        }
    }

    #[test]
    fn smith_small_examples() {
        let a = big_mat(&[&[2, 4], &[6, 8]]);
        let s = smith(&a);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        check_smith(&a);
        check_smith(&big_mat(&[&[1, 0], &[0, 1]]));
        check_smith(&big_mat(&[&[0, 0], &[0, 0]]));
        check_smith(&big_mat(&[&[3, 1, 2], &[4, 4, 4]]));
        check_smith(&big_mat(&[&[6], &[10], &[15]]));
        let s2 = smith(&big_mat(&[&[6], &[10], &[15]]));
        assert_eq!(s2.diagonal(), vec![BigInt::from(1)]);
    }

    #[test]
    fn smith_pseudorandom_matrices() {
        // Small deterministic pseudorandom integers.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 11) as i64 - 5
        };
        for _ in 0..25 {
            let a: Mat = (0..4)
                .map(|_| (0..3).map(|_| BigInt::from(next())).collect())
                .collect();
            check_smith(&a);
        }
    }

    #[test]
    fn rank_and_coords() {
        let v = big_mat(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank_of(&v), 2);
        let coords = full_rank_coords(&v, 2);
        assert_eq!(coords.len(), 2);
    }

    fn brute_parallelepiped(rays: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        // All integer points of the half open parallelepiped, found by
        // scanning the bounding box and solving for the coefficients.
        let k = rays.len();
        let n = rays[0].len();
        let sums: Vec<i64> = (0..n)
            .map(|i| rays.iter().map(|r| i64::try_from(&r[i]).unwrap()).sum())
            .collect();
        let mut out = Vec::new();
        let mut point = vec![0i64; n];
        scan(&mut point, 0, &sums, &mut |p| {
            // Solve rays^T lambda = p exactly by elimination over rationals
            // encoded as scaled integers.
            let a: Mat = (0..n)
                .map(|i| {
                    let mut row: Vec<BigInt> =
                        (0..k).map(|j| rays[j][i].clone()).collect();
                    row.push(BigInt::from(p[i]));
                    row
                })
                .collect();
            // Gaussian elimination with pivot tracking.
            let mut m = a;
            let mut pivots: Vec<(usize, usize)> = Vec::new();
            let mut row = 0;
            for col in 0..k {
                let Some(pr) = (row..n).find(|&r| !m[r][col].is_zero()) else {
                    continue;
                };
                m.swap(row, pr);
                for r in 0..n {
                    if r != row && !m[r][col].is_zero() {
                        let (a0, b0) = (m[row][col].clone(), m[r][col].clone());
                        for j in 0..=k {
                            m[r][j] = &m[r][j] * &a0 - &m[row][j] * &b0;
                        }
                    }
                }
                pivots.push((row, col));
                row += 1;
            }
            for r in row..n {
                if !m[r][k].is_zero() {
                    return false;
                }
            }
            // lambda_col = m[row][k] / m[row][col]; demand 0 <= lambda < 1.
            for &(r, c) in &pivots {
                let num = m[r][k].clone();
                let den = m[r][c].clone();
                let (num, den) = if den.is_negative() {
                    (-num, -den)
                } else {
                    (num, den)
                };
                if num.is_negative() || num >= den {
                    return false;
                }
            }
            // Unpivoted coefficients are zero, which is in range.
            true
        }, &mut out);
        out.retain(|p| !p.iter().all(|c| c.is_zero()));
        out.sort();
        out
    }

    fn scan(
        point: &mut Vec<i64>,
        i: usize,
        sums: &[i64],
        accept: &mut dyn FnMut(&[i64]) -> bool,
        out: &mut Vec<Vec<BigInt>>,
    ) {
        if i == point.len() {
            if accept(point) {
                out.push(point.iter().map(|&v| BigInt::from(v)).collect());
            }
            return;
        }
        for v in 0..=sums[i] {
            point[i] = v;
            scan(point, i + 1, sums, accept, out);
        }
        point[i] = 0;
    }

    #[test]
    fn parallelepiped_matches_brute_force() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 1], vec![1, 2]],
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![3, 1], vec![1, 2]],
            vec![vec![2, 0, 1], vec![0, 2, 1]],
            vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 3]],
            vec![vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 2]],
        ];
        for rays_i in cases {
            let rays: Vec<Vec<BigInt>> = rays_i
                .iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            let mut got = parallelepiped_points(&rays, 10_000).unwrap();
            got.sort();
            let want = brute_parallelepiped(&rays);
            assert_eq!(got, want, "rays {:?}", rays_i);
        }
    }

    #[test]
    fn facets_of_plane_cone() {
        let rays = big_mat(&[&[2, 1], &[1, 2], &[1, 1]]);
        let fs = facets(&rays, 10_000).unwrap();
        // The interior ray (1,1) lies on no facet.
        assert_eq!(fs, vec![vec![0], vec![1]]);
    }

    #[test]
    fn cover_of_simplicial_cone_is_trivial() {
        let rays = big_mat(&[&[1, 0], &[0, 1]]);
        assert_eq!(simplicial_cover(&rays, 10_000).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn cover_of_square_cone() {
        // Four rays of a three dimensional cone over a square.
        let rays = big_mat(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[0, 0, 1]]);
        let cover = simplicial_cover(&rays, 10_000).unwrap();
        assert!(!cover.is_empty());
        for simplex in &cover {
            assert_eq!(simplex.len(), 3);
            let sub: Vec<Vec<BigInt>> = simplex.iter().map(|&i| rays[i].clone()).collect();
            assert_eq!(rank_of(&sub), 3);
        }
    }

    #[test]
    fn hilbert_basis_of_plane_cone() {
        let rays = vec![vec![2u64, 1], vec![1, 2]];
        let hb = cone_hilbert_basis(&rays, 10_000).unwrap();
        assert_eq!(hb, vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn hilbert_basis_drops_redundant_rays() {
        let rays = vec![vec![1u64, 0], vec![0, 1], vec![1, 1]];
        let hb = cone_hilbert_basis(&rays, 10_000).unwrap();
        assert_eq!(hb, vec![vec![0, 1], vec![1, 0]]);
    }
}
