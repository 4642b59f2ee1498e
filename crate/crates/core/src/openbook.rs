//! Layered triangulations of genus-one open books. Each flip of the boundary
//! triangulation of the once-punctured torus adds one tetrahedron and right
//! multiplies the monodromy by a fixed Dehn-twist word.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blackgraph::{black_graph_of_braid, GraphError};
use crate::braidlang::{BraidWord, Sigma, St, StWord};
use crate::goeritz::goeritz_form;
use crate::linalg::{smith_normal_form, IntMatrix};
use crate::word::{Generator, Letter, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Twist {
    A,
    B,
}

impl Generator for Twist {
    fn symbol(self) -> &'static str {
        match self {
            Twist::A => "Ta",
            Twist::B => "Tb",
        }
    }
}

pub type MappingClassWord = Word<Twist>;

/// 2x2 integer matrix, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);
    pub const TA: Mat2 = Mat2([[1, 1], [0, 1]]);
    pub const TB: Mat2 = Mat2([[1, 0], [-1, 1]]);

    pub fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    pub fn det(self) -> i64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl2(self) -> Mat2 {
        debug_assert_eq!(self.det(), 1);
        let m = self.0;
        Mat2([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]])
    }

    pub fn pow(self, k: u32) -> Mat2 {
        (0..k).fold(Mat2::IDENTITY, |acc, _| acc.mul(self))
    }

    pub fn minus_identity(self) -> IntMatrix {
        let m = self.0;
        IntMatrix::from_rows(&[[m[0][0] - 1, m[0][1]], [m[1][0], m[1][1] - 1]]).expect("2x2")
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// `σ₁ ↦ τ_b`, `σ₂ ↦ τ_a`.
pub fn braid_to_monodromy(w: &BraidWord) -> MappingClassWord {
    w.substitute(|l| {
        let g = match l.generator {
            Sigma::One => Twist::B,
            Sigma::Two => Twist::A,
        };
        Word::new(vec![Letter { generator: g, inverse: l.inverse }])
    })
}

/// Action on `H₁` of the fibre, multiplied in word order.
pub fn monodromy_matrix(m: &MappingClassWord) -> Mat2 {
    m.letters().iter().fold(Mat2::IDENTITY, |acc, l| {
        let t = match l.generator {
            Twist::A => Mat2::TA,
            Twist::B => Mat2::TB,
        };
        acc.mul(if l.inverse { t.inverse_sl2() } else { t })
    })
}

/// Edges of the one-vertex triangulation of the punctured torus that can be
/// flipped.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flip {
    A1,
    A2,
    B1,
    B2,
}

impl Flip {
    pub const ALL: [Flip; 4] = [Flip::A1, Flip::A2, Flip::B1, Flip::B2];

    /// Word right-multiplied onto the monodromy.
    pub fn factor(self) -> MappingClassWord {
        use Twist::{A, B};
        match self {
            Flip::A1 => Word::new(vec![Letter::neg(B), Letter::neg(A)]),
            Flip::A2 => Word::new(vec![Letter::pos(A), Letter::pos(B)]),
            Flip::B1 => Word::new(vec![Letter::neg(A)]),
            Flip::B2 => Word::new(vec![Letter::pos(A)]),
        }
    }

    /// The flip undoing this one.
    pub fn undo(self) -> Flip {
        match self {
            Flip::A1 => Flip::A2,
            Flip::A2 => Flip::A1,
            Flip::B1 => Flip::B2,
            Flip::B2 => Flip::B1,
        }
    }

    pub fn of_letter(l: Letter<St>) -> Flip {
        match (l.generator, l.inverse) {
            (St::S, false) => Flip::B2,
            (St::S, true) => Flip::B1,
            (St::T, false) => Flip::A2,
            (St::T, true) => Flip::A1,
        }
    }
}

impl fmt::Display for Flip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flip::A1 => "a1",
            Flip::A2 => "a2",
            Flip::B1 => "b1",
            Flip::B2 => "b2",
        })
    }
}

pub fn flip_step(current: &MappingClassWord, edge: Flip) -> MappingClassWord {
    current.concat(&edge.factor()).free_reduce()
}

/// `s ↦ τ_a`, `t ↦ τ_a τ_b`.
pub fn st_to_monodromy(w: &StWord) -> MappingClassWord {
    w.substitute(|l| {
        let base = match l.generator {
            St::S => Word::new(vec![Letter::pos(Twist::A)]),
            St::T => Word::new(vec![Letter::pos(Twist::A), Letter::pos(Twist::B)]),
        };
        if l.inverse {
            base.inverse()
        } else {
            base
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeringPlan {
    pub flips: Vec<Flip>,
    pub tetrahedron_count: usize,
    pub monodromy: MappingClassWord,
    pub matrix: Mat2,
}

/// One flip, hence one tetrahedron, per letter, read left to right.
pub fn compile_layering(stw: &StWord) -> LayeringPlan {
    let flips: Vec<Flip> = stw.letters().iter().map(|&l| Flip::of_letter(l)).collect();
    let monodromy = flips.iter().fold(MappingClassWord::empty(), |m, &f| flip_step(&m, f));
    let matrix = monodromy_matrix(&monodromy);
    LayeringPlan { tetrahedron_count: flips.len(), flips, monodromy, matrix }
}

/// `H₁` of the open book: the cokernel of `M - I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    /// Invariant factors greater than one.
    pub torsion: Vec<i64>,
    pub free_rank: usize,
}

impl AbelianGroup {
    /// `None` when the group is infinite.
    pub fn order(&self) -> Option<u128> {
        (self.free_rank == 0).then(|| self.torsion.iter().map(|&d| d as u128).product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        parts.extend(std::iter::repeat_n("Z".to_string(), self.free_rank));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let s = smith_normal_form(m);
    let torsion = s.diagonal.iter().copied().filter(|&d| d > 1).collect();
    let free_rank = m.nrows() - s.diagonal.iter().filter(|&&d| d != 0).count();
    AbelianGroup { torsion, free_rank }
}

pub fn h1_open_book(m: &MappingClassWord) -> AbelianGroup {
    cokernel(&monodromy_matrix(m).minus_identity())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Crosscheck {
    pub agree: bool,
    pub open_book: AbelianGroup,
    pub goeritz: AbelianGroup,
}

/// Compares `coker(M - I)` with `coker(Q)` for a braid of wheel shape.
pub fn crosscheck_h1(w: &BraidWord) -> Result<H1Crosscheck, GraphError> {
    let q = goeritz_form(&black_graph_of_braid(w)?);
    let goeritz = cokernel(q.matrix());
    let open_book = h1_open_book(&braid_to_monodromy(w));
    Ok(H1Crosscheck { agree: goeritz == open_book, open_book, goeritz })
}
