//! Orchestration between the library and the filesystem: each subcommand
//! produces a report string plus a list of artifacts, and nothing is written
//! until the whole computation has succeeded. Artifact bytes depend only on
//! the input file and the caps, so reruns are byte-identical; the manifest
//! lists every artifact with its content digest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_traits::{Num, One, Zero};
use sha2::{Digest, Sha256};

use nsurf::complement::{cut, fundamental_surfaces};
use nsurf::construct::{
    bound_report, construct_sigma, construct_tilde_sigma, format_big, verify_maximal,
    MAX_BOUND_TETS,
};
use nsurf::coords::{total_weight_with, NormalMode, NormalVector};
use nsurf::error::{Error, Result};
use nsurf::hilbert::{decompose, fundamental_vectors, HilbertCaps};
use nsurf::realize::realize;
use nsurf::tri::{build_skeleton, Triangulation};

const DECOMPOSE_MAX_STEPS: usize = 1_000_000;

pub struct RunConfig {
    pub mode: NormalMode,
    pub weight_cap: Option<u64>,
    pub caps: HilbertCaps,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(
        mode: &str,
        weight_cap: Option<u64>,
        hilbert_cap: Option<usize>,
        out: Option<PathBuf>,
    ) -> Result<RunConfig> {
        if weight_cap == Some(0) || hilbert_cap == Some(0) {
            return Err(Error::invalid("caps must be positive"));
        }
        Ok(RunConfig {
            mode: NormalMode::from_label(mode)?,
            weight_cap,
            caps: hilbert_cap.map_or_else(HilbertCaps::default, HilbertCaps::with_cap),
            out,
        })
    }
}

/// One output file, path relative to the run directory.
pub struct Artifact {
    pub path: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn text(path: &str, content: String) -> Artifact {
        Artifact {
            path: path.to_string(),
            bytes: content.into_bytes(),
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{:02x}", b);
    }
    out
}

/// Print the report and, when an output directory is set, write all
/// artifacts plus a manifest of their digests.
pub fn finish(cfg: &RunConfig, report: String, artifacts: Vec<Artifact>) -> Result<()> {
    print!("{}", report);
    let Some(out) = &cfg.out else {
        return Ok(());
    };
    let io = |e: std::io::Error| Error::invalid(format!("cannot write artifacts: {}", e));
    let mut entries: Vec<(String, String)> = Vec::new();
    for artifact in &artifacts {
        let full = out.join(&artifact.path);
        if let Some(dir) = full.parent() {
            fs::create_dir_all(dir).map_err(io)?;
        }
        fs::write(&full, &artifact.bytes).map_err(io)?;
        entries.push((artifact.path.clone(), sha256_hex(&artifact.bytes)));
    }
    entries.sort();
    let mut manifest = String::new();
    for (path, digest) in &entries {
        let _ = writeln!(manifest, "{}  {}", digest, path);
    }
    fs::write(out.join("manifest.txt"), manifest).map_err(io)?;
    Ok(())
}

fn load_triangulation(path: &Path) -> Result<Triangulation> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {}", path.display(), e)))?;
    Triangulation::parse(&text)
}

pub fn cmd_validate(path: &Path) -> Result<String> {
    let tri = load_triangulation(path)?;
    let sk = build_skeleton(&tri);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "t={} V={} E={} F={}",
        tri.tet_count(),
        sk.vertex_count,
        sk.edge_count,
        sk.face_count
    );
    let degrees: Vec<String> = (0..sk.edge_count)
        .map(|e| sk.edge_degree(e).to_string())
        .collect();
    let _ = writeln!(out, "edge degrees: {}", degrees.join(" "));
    let _ = writeln!(
        out,
        "orientable: {}",
        if tri.is_orientable() { "yes" } else { "no" }
    );
    Ok(out)
}

pub fn cmd_fundamental(
    path: &Path,
    component: Option<usize>,
    cfg: &RunConfig,
) -> Result<(String, Vec<Artifact>)> {
    let tri = load_triangulation(path)?;
    let sk = build_skeleton(&tri);
    let tets = tri.tet_count();
    let nothing = realize(&NormalVector::zero(NormalMode::OneNormal, tets), &tri)?;
    let c = cut(&tri, &nothing, true)?;

    let selected: Vec<usize> = match component {
        Some(n) if n >= c.components.len() => {
            return Err(Error::invalid(format!(
                "component {} does not exist; the complement has {}",
                n,
                c.components.len()
            )));
        }
        Some(n) => vec![n],
        None => (0..c.components.len()).collect(),
    };

    let mut report = String::new();
    let mut artifacts = Vec::new();
    let _ = writeln!(
        report,
        "fundamental surfaces of {} ({} coordinates), vertex neighborhoods removed",
        path.display(),
        cfg.mode.label()
    );
    let mut kept = Vec::new();
    for &n in &selected {
        let mut listed = 0usize;
        let mut skipped = 0usize;
        for (_, f) in fundamental_surfaces(&c, n, &cfg.caps)? {
            let v = match cfg.mode {
                NormalMode::TwoNormal => f,
                NormalMode::OneNormal => {
                    if !f.octagon_count().is_zero() {
                        continue;
                    }
                    f.demote_if_one_normal()
                }
            };
            let w = total_weight_with(&v, &sk)?;
            if let Some(cap) = cfg.weight_cap {
                if w > BigUint::from(cap) {
                    skipped += 1;
                    continue;
                }
            }
            let _ = writeln!(
                report,
                "  component {}: weight {} octagons {}",
                n,
                w,
                v.octagon_count()
            );
            kept.push(v);
            listed += 1;
        }
        let _ = writeln!(
            report,
            "component {}: {} surfaces{}",
            n,
            listed,
            if skipped > 0 {
                format!(" ({} above the weight cap not shown)", skipped)
            } else {
                String::new()
            }
        );
    }
    for (i, v) in kept.iter().enumerate() {
        artifacts.push(Artifact::text(
            &format!("fundamental/{:04}.vec", i),
            v.serialize(),
        ));
    }
    artifacts.push(Artifact::text("fundamental/report.txt", report.clone()));
    artifacts.push(Artifact::text("input.tri", tri.serialize()));
    Ok((report, artifacts))
}

pub fn cmd_sigma(path: &Path, cfg: &RunConfig) -> Result<(String, Vec<Artifact>)> {
    let tri = load_triangulation(path)?;
    let sigma = construct_sigma(&tri, &cfg.caps)?;
    let maximal = verify_maximal(&tri, &sigma, &cfg.caps)?;
    let mut report = sigma.report();
    report.push_str(&maximal.report());
    let artifacts = vec![
        Artifact::text("input.tri", tri.serialize()),
        Artifact::text("sigma/report.txt", sigma.report()),
        Artifact::text("sigma/total.vec", sigma.total.serialize()),
        Artifact::text("sigma/maximality.txt", maximal.report()),
    ];
    Ok((report, artifacts))
}

pub fn cmd_tilde_sigma(path: &Path, cfg: &RunConfig) -> Result<(String, Vec<Artifact>)> {
    let tri = load_triangulation(path)?;
    let sigma = construct_sigma(&tri, &cfg.caps)?;
    let maximal = verify_maximal(&tri, &sigma, &cfg.caps)?;
    let tilde = construct_tilde_sigma(&tri, &sigma, &cfg.caps)?;
    let bounds = bound_report(&tri, &sigma, &tilde)?;
    let mut report = sigma.report();
    report.push_str(&maximal.report());
    report.push_str(&tilde.report());
    report.push_str(&bounds.report());
    let artifacts = vec![
        Artifact::text("input.tri", tri.serialize()),
        Artifact::text("sigma/report.txt", sigma.report()),
        Artifact::text("sigma/total.vec", sigma.total.serialize()),
        Artifact::text("sigma/maximality.txt", maximal.report()),
        Artifact::text("tilde/report.txt", tilde.report()),
        Artifact::text("tilde/total.vec", tilde.total.serialize()),
        Artifact::text("tilde/bounds.txt", bounds.report()),
    ];
    Ok((report, artifacts))
}

fn parse_big(s: &str) -> Result<BigUint> {
    if let Some(exp) = s.strip_prefix("2^") {
        let k: usize = exp
            .parse()
            .map_err(|_| Error::invalid(format!("bad exponent '{}'", exp)))?;
        if k > 196 * (MAX_BOUND_TETS * MAX_BOUND_TETS) as usize {
            return Err(Error::Resource {
                what: "bound target exponent".into(),
                limit: 196 * (MAX_BOUND_TETS * MAX_BOUND_TETS) as usize,
            });
        }
        return Ok(BigUint::one() << k);
    }
    BigUint::from_str_radix(s, 10).map_err(|_| Error::invalid(format!("bad number '{}'", s)))
}

pub fn cmd_bounds(tets: Option<u64>, bridge: Option<&str>) -> Result<String> {
    let mut out = String::new();
    match (tets, bridge) {
        (Some(n), None) => {
            let bound = nsurf::construct::bound_for_tets(n)?;
            let _ = writeln!(out, "tets: {}", n);
            let _ = writeln!(out, "bound: {}", format_big(&bound));
            let _ = writeln!(out, "decimal: {}", bound);
        }
        (None, Some(b)) => {
            let target = parse_big(b)?;
            if target.is_zero() {
                return Err(Error::invalid("bound target must be positive"));
            }
            let n = nsurf::construct::tets_for_bridge(&target)?;
            let bound = nsurf::construct::bound_for_tets(n)?;
            let _ = writeln!(out, "target: {}", format_big(&target));
            let _ = writeln!(out, "least tets: {}", n);
            let _ = writeln!(out, "bound: {}", format_big(&bound));
        }
        _ => {
            return Err(Error::invalid(
                "bounds needs exactly one of --tets or --bridge",
            ));
        }
    }
    Ok(out)
}

pub fn cmd_decompose(path: &Path, vector: &Path, cfg: &RunConfig) -> Result<String> {
    let tri = load_triangulation(path)?;
    let text = fs::read_to_string(vector)
        .map_err(|e| Error::invalid(format!("cannot read {}: {}", vector.display(), e)))?;
    let v = NormalVector::parse(&text)?;
    if v.tets() != tri.tet_count() {
        return Err(Error::invalid(format!(
            "vector is over {} tetrahedra but the triangulation has {}",
            v.tets(),
            tri.tet_count()
        )));
    }
    let v = match cfg.mode {
        NormalMode::TwoNormal => v.promote(),
        NormalMode::OneNormal => {
            let d = v.demote_if_one_normal();
            if d.mode() != NormalMode::OneNormal {
                return Err(Error::invalid(
                    "vector has octagons; use the 2n basis to decompose it",
                ));
            }
            d
        }
    };

    let basis = fundamental_vectors(&tri, cfg.mode, &cfg.caps)?;
    let basis_u64: Vec<Vec<u64>> = basis
        .iter()
        .map(|b| b.coords_u64())
        .collect::<Result<_>>()?;
    let multipliers = decompose(v.coords(), &basis_u64, DECOMPOSE_MAX_STEPS)?;

    let sk = build_skeleton(&tri);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "decomposition over the {} fundamental basis ({} elements)",
        cfg.mode.label(),
        basis.len()
    );
    for (i, m) in multipliers.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        let _ = writeln!(
            out,
            "  {} x element {} (weight {})",
            m,
            i,
            total_weight_with(&basis[i], &sk)?
        );
    }
    let _ = writeln!(out, "a valid decomposition; sums to the input exactly");
    Ok(out)
}
