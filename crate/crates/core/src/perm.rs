use std::fmt;

use crate::error::{Error, Result};

/// A bijection of the vertex set {0,1,2,3} of a tetrahedron.
///
/// `p[i]` is the image of vertex `i`. Face gluings carry one of these; the
/// parity decides whether a gluing is orientation-reversing between
/// coherently oriented tetrahedra.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Result<Perm4> {
        let mut seen = [false; 4];
        for &v in &images {
            if v > 3 || seen[v as usize] {
                return Err(Error::invalid(format!(
                    "vertex images {:?} are not a bijection of 0..3",
                    images
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Perm4(images))
    }

    #[inline]
    pub fn apply(&self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn inverse(&self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self.compose(other)` applies `other` first, then `self`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        let mut out = [0u8; 4];
        for i in 0..4 {
            out[i] = self.apply(other.0[i]);
        }
        Perm4(out)
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i8 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Parse the 4-digit form used in gluing tables, e.g. "0132".
    pub fn parse(s: &str) -> Result<Perm4> {
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return Err(Error::invalid(format!(
                "permutation '{}' must have exactly 4 digits",
                s
            )));
        }
        let mut images = [0u8; 4];
        for (i, &b) in bytes.iter().enumerate() {
            if !(b'0'..=b'3').contains(&b) {
                return Err(Error::invalid(format!(
                    "permutation '{}' contains a digit outside 0..3",
                    s
                )));
            }
            images[i] = b - b'0';
        }
        Perm4::new(images)
    }

    pub fn digits(&self) -> String {
        self.0.iter().map(|d| (b'0' + d) as char).collect()
    }

    /// All 24 permutations, in lexicographic order of their digit strings.
    pub fn all() -> Vec<Perm4> {
        let mut out = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        if let Ok(p) = Perm4::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({})", self.digits())
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits())
    }
}
