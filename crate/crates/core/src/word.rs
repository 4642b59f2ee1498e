//! Words in free groups on a small alphabet, shared by braid words, the
//! `{s, t}` rewriting alphabet and mapping-class words.

use std::fmt;

pub trait Generator: Copy + Eq + Ord + fmt::Debug {
    /// Symbol used when printing; exponents are appended as `^k`.
    fn symbol(self) -> &'static str;
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter<G> {
    pub generator: G,
    pub inverse: bool,
}

impl<G: Generator> Letter<G> {
    pub fn pos(generator: G) -> Self {
        Self { generator, inverse: false }
    }

    pub fn neg(generator: G) -> Self {
        Self { generator, inverse: true }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn cancels(self, other: Self) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word<G> {
    letters: Vec<Letter<G>>,
}

impl<G> Default for Word<G> {
    fn default() -> Self {
        Self { letters: Vec::new() }
    }
}

impl<G: Generator> Word<G> {
    pub fn new(letters: Vec<Letter<G>>) -> Self {
        Self { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `g^k`, with negative `k` giving inverse letters.
    pub fn power(generator: G, k: i64) -> Self {
        let letter = if k < 0 { Letter::neg(generator) } else { Letter::pos(generator) };
        Self { letters: vec![letter; k.unsigned_abs() as usize] }
    }

    pub fn letters(&self) -> &[Letter<G>] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter<G>) {
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Deletes adjacent inverse pairs until none remain.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<Letter<G>> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Self { letters: out }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        Self { letters }
    }

    /// Signed number of occurrences of each generator, in `gens` order.
    pub fn exponent_sums(&self, gens: &[G]) -> Vec<i64> {
        gens.iter()
            .map(|&g| self.letters.iter().filter(|l| l.generator == g).map(|l| l.exponent()).sum())
            .collect()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.exponent()).sum()
    }

    /// Maximal runs of a single letter, as `(generator, signed length)`.
    pub fn runs(&self) -> Vec<(G, i64)> {
        let mut runs: Vec<(G, i64)> = Vec::new();
        for &l in &self.letters {
            match runs.last_mut() {
                Some((g, k)) if *g == l.generator && (*k < 0) == l.inverse => *k += l.exponent(),
                _ => runs.push((l.generator, l.exponent())),
            }
        }
        runs
    }

    /// Letterwise substitution into another alphabet (no reduction).
    pub fn substitute<H: Generator>(&self, mut image: impl FnMut(Letter<G>) -> Word<H>) -> Word<H> {
        let mut letters = Vec::new();
        for &l in &self.letters {
            letters.extend_from_slice(image(l).letters());
        }
        Word { letters }
    }
}

impl<G: Generator> FromIterator<Letter<G>> for Word<G> {
    fn from_iter<I: IntoIterator<Item = Letter<G>>>(iter: I) -> Self {
        Self { letters: iter.into_iter().collect() }
    }
}

impl<G: Generator> fmt::Display for Word<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .runs()
            .into_iter()
            .map(|(g, k)| if k == 1 { g.symbol().to_string() } else { format!("{}^{}", g.symbol(), k) })
            .collect();
        f.write_str(&parts.join(" "))
    }
}
