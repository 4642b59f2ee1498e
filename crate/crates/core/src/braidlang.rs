//! Three-strand braid words: parsing, the two closure families handled by the
//! bound pipeline, and rewriting into the alphabet `{s, t}` with `s = σ₂` and
//! `t = σ₂σ₁`, whose word length counts tetrahedra in a layered triangulation.

use std::fmt;

use thiserror::Error;

use crate::word::{Generator, Letter, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sigma {
    One,
    Two,
}

impl Generator for Sigma {
    fn symbol(self) -> &'static str {
        match self {
            Sigma::One => "1",
            Sigma::Two => "2",
        }
    }
}

/// `s` stands for σ₂ and `t` for σ₂σ₁.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum St {
    S,
    T,
}

impl Generator for St {
    fn symbol(self) -> &'static str {
        match self {
            St::S => "s",
            St::T => "t",
        }
    }
}

/// Printing a `BraidWord` yields the token grammar accepted by [`parse_braid`].
pub type BraidWord = Word<Sigma>;
pub type StWord = Word<St>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed token `{token}` at column {column}")]
    MalformedToken { column: usize, token: String },
    #[error("generator `{token}` at column {column} is not 1 or 2")]
    BadGenerator { column: usize, token: String },
    #[error("empty exponent in token `{token}` at column {column}")]
    EmptyExponent { column: usize, token: String },
}

/// Parses whitespace-separated tokens `sign? (1|2) (^ sign? digits)?`.
///
/// A sign on the base inverts the generator and the exponent repeats it, so
/// `2^-4` and `-2^4` both denote σ₂⁻⁴.
pub fn parse_braid(text: &str) -> Result<BraidWord, ParseError> {
    let mut word = BraidWord::empty();
    let mut offset = 0;
    for token in text.split_whitespace() {
        let column = offset + text[offset..].find(token).expect("token comes from the same text");
        offset = column + token.len();
        let malformed = || ParseError::MalformedToken { column, token: token.to_string() };

        let (base, exponent) = match token.split_once('^') {
            Some((b, e)) => (b, Some(e)),
            None => (token, None),
        };
        let (base_negated, digits) = split_sign(base);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(malformed());
        }
        let generator = match digits {
            "1" => Sigma::One,
            "2" => Sigma::Two,
            _ => return Err(ParseError::BadGenerator { column, token: token.to_string() }),
        };
        let mut power: i64 = match exponent {
            None => 1,
            Some(e) => {
                let (neg, digits) = split_sign(e);
                if digits.is_empty() {
                    return Err(ParseError::EmptyExponent { column, token: token.to_string() });
                }
                if !digits.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(malformed());
                }
                let k: i64 = digits.parse().map_err(|_| malformed())?;
                if neg {
                    -k
                } else {
                    k
                }
            }
        };
        if base_negated {
            power = -power;
        }
        word = word.concat(&BraidWord::power(generator, power));
    }
    Ok(word)
}

fn split_sign(s: &str) -> (bool, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = s.strip_prefix('+') {
        (false, rest)
    } else {
        (false, s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FamilyKind {
    Even,
    Odd,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Even => "even",
            FamilyKind::Odd => "odd",
        })
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("even family needs a positive even number of parameters, got {0}")]
    EvenCount(usize),
    #[error("odd family needs exactly 3 parameters, got {0}")]
    OddCount(usize),
    #[error("even family parameters must be positive, got {0}")]
    NotPositive(i64),
    #[error("odd family parameters must be nonnegative, got {0}")]
    Negative(i64),
}

/// The two closure families with pure-braid closures:
///
/// * even: `∏_{i=1}^{2n} σ₁ σ₂^{-2aᵢ}` with all `aᵢ > 0`;
/// * odd: `σ₁σ₂^{-2a-1} σ₁σ₂^{-2b-1} σ₁σ₂^{-2c-1}` with `a, b, c >= 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    Even(Vec<u32>),
    Odd([u32; 3]),
}

impl Family {
    pub fn new(kind: FamilyKind, params: &[i64]) -> Result<Self, FamilyError> {
        match kind {
            FamilyKind::Even => {
                if params.is_empty() || params.len() % 2 != 0 {
                    return Err(FamilyError::EvenCount(params.len()));
                }
                let mut out = Vec::with_capacity(params.len());
                for &p in params {
                    if p <= 0 || p > u32::MAX as i64 {
                        return Err(FamilyError::NotPositive(p));
                    }
                    out.push(p as u32);
                }
                Ok(Family::Even(out))
            }
            FamilyKind::Odd => {
                if params.len() != 3 {
                    return Err(FamilyError::OddCount(params.len()));
                }
                let mut out = [0u32; 3];
                for (o, &p) in out.iter_mut().zip(params) {
                    if p < 0 || p > u32::MAX as i64 {
                        return Err(FamilyError::Negative(p));
                    }
                    *o = p as u32;
                }
                Ok(Family::Odd(out))
            }
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Even(_) => FamilyKind::Even,
            Family::Odd(_) => FamilyKind::Odd,
        }
    }

    pub fn params(&self) -> Vec<u32> {
        match self {
            Family::Even(a) => a.clone(),
            Family::Odd(abc) => abc.to_vec(),
        }
    }

    /// Exponents `q_i` of the blocks `σ₁ σ₂^{-q_i}`.
    pub fn blocks(&self) -> Vec<u32> {
        match self {
            Family::Even(a) => a.iter().map(|&x| 2 * x).collect(),
            Family::Odd(abc) => abc.iter().map(|&x| 2 * x + 1).collect(),
        }
    }

    /// Recognizes a block sequence as one of the two families.
    pub fn from_blocks(q: &[u32]) -> Option<Self> {
        if q.len() >= 2 && q.len() % 2 == 0 && q.iter().all(|&x| x >= 2 && x % 2 == 0) {
            Some(Family::Even(q.iter().map(|&x| x / 2).collect()))
        } else if q.len() == 3 && q.iter().all(|&x| x % 2 == 1) {
            Some(Family::Odd([q[0] / 2, q[1] / 2, q[2] / 2]))
        } else {
            None
        }
    }

    pub fn braid(&self) -> BraidWord {
        block_braid(&self.blocks())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params().iter().map(|p| p.to_string()).collect();
        write!(f, "{} ({})", self.kind(), ps.join(", "))
    }
}

/// `∏ σ₁ σ₂^{-q_i}`.
pub fn block_braid(q: &[u32]) -> BraidWord {
    q.iter()
        .map(|&qi| BraidWord::power(Sigma::One, 1).concat(&BraidWord::power(Sigma::Two, -(qi as i64))))
        .fold(BraidWord::empty(), |acc, w| acc.concat(&w))
}

pub fn family_braid(kind: FamilyKind, params: &[i64]) -> Result<BraidWord, FamilyError> {
    Ok(Family::new(kind, params)?.braid())
}

pub fn free_reduce(w: &BraidWord) -> BraidWord {
    w.free_reduce()
}

/// Permutation of the three strand positions, stored as the image of each
/// position (0-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Permutation(pub [usize; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2]);

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        let mut seen = [false; 3];
        let mut out = String::new();
        for start in 0..3 {
            if seen[start] || p[start] == start {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut i = p[start];
            while i != start {
                seen[i] = true;
                cycle.push(i + 1);
                i = p[i];
            }
            let c: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("({})", c.join(" ")));
        }
        if out.is_empty() {
            out.push_str("()");
        }
        f.write_str(&out)
    }
}

/// Each σ₁^{±1} swaps positions 1,2 and each σ₂^{±1} swaps 2,3.
pub fn strand_permutation(w: &BraidWord) -> Permutation {
    let mut p = [0usize, 1, 2];
    for l in w.letters() {
        let (i, j) = match l.generator {
            Sigma::One => (0, 1),
            Sigma::Two => (1, 2),
        };
        for x in p.iter_mut() {
            if *x == i {
                *x = j;
            } else if *x == j {
                *x = i;
            }
        }
    }
    Permutation(p)
}

/// `σ₂^k w σ₂^{-k}`, freely reduced.
pub fn conjugate_by_sigma2(w: &BraidWord, k: i64) -> BraidWord {
    BraidWord::power(Sigma::Two, k)
        .concat(w)
        .concat(&BraidWord::power(Sigma::Two, -k))
        .free_reduce()
}

/// Rewrites with σ₂ ↦ s, σ₁ ↦ s⁻¹t, σ₁⁻¹ ↦ t⁻¹s and reduces freely.
pub fn to_st_word(w: &BraidWord) -> StWord {
    w.substitute(|l| match (l.generator, l.inverse) {
        (Sigma::Two, inv) => StWord::new(vec![Letter { generator: St::S, inverse: inv }]),
        (Sigma::One, false) => StWord::new(vec![Letter::neg(St::S), Letter::pos(St::T)]),
        (Sigma::One, true) => StWord::new(vec![Letter::neg(St::T), Letter::pos(St::S)]),
    })
    .free_reduce()
}

/// Substitutes s ↦ σ₂ and t ↦ σ₂σ₁ back into a braid word.
pub fn st_to_braid(w: &StWord) -> BraidWord {
    w.substitute(|l| {
        let image = match l.generator {
            St::S => BraidWord::power(Sigma::Two, 1),
            St::T => BraidWord::power(Sigma::Two, 1).concat(&BraidWord::power(Sigma::One, 1)),
        };
        if l.inverse {
            image.inverse()
        } else {
            image
        }
    })
}

/// A `{s, t}` word realizing a conjugate of the source braid.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StRewrite {
    pub length: usize,
    pub witness: StWord,
    /// Letters rotated from the front of the source word.
    pub rotation: usize,
    /// Exponent `k` of the conjugation `σ₂^k · σ₂^{-k}`.
    pub conjugation: i64,
}

/// Shortest `{s, t}` rewriting over all cyclic rotations of `w` and all
/// conjugations by `σ₂^k` with `|k| <= k_max`.
///
/// This is the length of an explicit witness and therefore only an upper bound
/// for the word length of the braid's conjugacy class.
pub fn st_length_upper_bound(w: &BraidWord, k_max: u32) -> StRewrite {
    let mut ks = vec![0i64];
    for k in 1..=k_max as i64 {
        ks.push(k);
        ks.push(-k);
    }
    let mut best: Option<StRewrite> = None;
    for rotation in 0..w.len().max(1) {
        let rotated = w.rotate(rotation);
        for &k in &ks {
            let witness = to_st_word(&conjugate_by_sigma2(&rotated, k));
            if best.as_ref().map_or(true, |b| witness.len() < b.length) {
                best = Some(StRewrite { length: witness.len(), witness, rotation, conjugation: k });
            }
        }
    }
    best.expect("at least one candidate")
}
