use std::fmt;

use super::{Face, SurfacePoint};

/// An element of the octahedron's isometry group (order 48): a signed
/// permutation of the coordinate axes.
///
/// Axis `i` is sent to axis `perm[i]`, and its sign is reversed when bit `i`
/// of `flips` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub perm: [u8; 3],
    pub flips: u8,
}

const PERMS: [[u8; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        perm: [0, 1, 2],
        flips: 0,
    };

    pub fn new(perm: [u8; 3], flips: u8) -> Self {
        debug_assert!(PERMS.contains(&perm) && flips < 8);
        Self { perm, flips }
    }

    pub fn all() -> impl Iterator<Item = Symmetry> {
        PERMS
            .iter()
            .flat_map(|&perm| (0..8).map(move |flips| Symmetry { perm, flips }))
    }

    /// The six symmetries that fix the reference face.
    pub fn face_stabilizer() -> impl Iterator<Item = Symmetry> {
        PERMS.iter().map(|&perm| Symmetry { perm, flips: 0 })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Orientation sign of the induced map of 3-space.
    pub fn is_proper(&self) -> bool {
        let even = matches!(self.perm, [0, 1, 2] | [1, 2, 0] | [2, 0, 1]);
        even == self.flips.count_ones().is_multiple_of(2)
    }

    pub fn apply_face(&self, f: Face) -> Face {
        let mut bits = 0u8;
        for i in 0..3 {
            let negative = (f.id() >> i) & 1 != (self.flips >> i) & 1;
            if negative {
                bits |= 1 << self.perm[i];
            }
        }
        Face(bits)
    }

    pub fn apply(&self, q: &SurfacePoint) -> SurfacePoint {
        let l = q.barycentric();
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[self.perm[i] as usize] = l[i];
        }
        SurfacePoint::from_barycentric(self.apply_face(q.face), out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        let mut perm = [0u8; 3];
        let mut flips = 0u8;
        for i in 0..3 {
            let mid = other.perm[i] as usize;
            perm[i] = self.perm[mid];
            let f = ((other.flips >> i) & 1) ^ ((self.flips >> mid) & 1);
            flips |= f << i;
        }
        Symmetry { perm, flips }
    }

    pub fn invert(&self) -> Symmetry {
        let mut perm = [0u8; 3];
        let mut flips = 0u8;
        for i in 0..3 {
            let j = self.perm[i] as usize;
            perm[j] = i as u8;
            flips |= ((self.flips >> i) & 1) << j;
        }
        Symmetry { perm, flips }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let signs: Vec<String> = (0..3)
            .map(|i| {
                let s = if (self.flips >> i) & 1 == 1 { "-" } else { "+" };
                format!("{s}e{}", self.perm[i])
            })
            .collect();
        write!(f, "e0,e1,e2 -> {}", signs.join(","))
    }
}
