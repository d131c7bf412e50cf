//! Words over the alphabet {x, y}, MZV index compositions, and the shuffle
//! product.
//!
//! The dictionary between the two index languages is the binarisation map
//! `s`: a composition `(a1, ..., ak)` of positive integers corresponds to the
//! word `x^(a1-1) y ... x^(ak-1) y`. A word is *convergent* when it starts
//! with `x` and ends with `y`; exactly the convergent words are images of
//! compositions with first part >= 2, and those index convergent multiple
//! zeta values
//!
//! ```text
//!   zeta(a1, ..., ak) = sum over n1 > n2 > ... > nk >= 1 of
//!                       n1^-a1 * ... * nk^-ak.
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formal_sum::FormalSum;

/// A letter of the two-letter alphabet. Ordering is `X < Y`, which fixes the
/// lexicographic order used for canonical term ordering everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::X => "x",
            Letter::Y => "y",
        })
    }
}

/// A finite (possibly empty) word over {x, y}.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Juxtaposition `self . other`. The empty word is a two-sided identity.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// True iff the word is nonempty, starts with `x` and ends with `y`.
    pub fn is_convergent(&self) -> bool {
        self.0.first() == Some(&Letter::X) && self.0.last() == Some(&Letter::Y)
    }

    fn prefixed(&self, letter: Letter) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut letters = Vec::with_capacity(s.len());
        for (i, ch) in s.char_indices() {
            match ch {
                'x' => letters.push(Letter::X),
                'y' => letters.push(Letter::Y),
                _ => {
                    return Err(Error::Parse {
                        position: i,
                        message: format!("expected 'x' or 'y', found {ch:?}"),
                    })
                }
            }
        }
        Ok(Word(letters))
    }
}

/// A formal sum of words with exact rational coefficients.
pub type FormalWordSum = FormalSum<Word>;

/// Nonempty sequence of positive integers; the exponent-tuple form of an MZV
/// index. Convergent iff the first part is >= 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Invalid("composition must be nonempty".into()));
        }
        if let Some(p) = parts.iter().find(|&&p| p == 0) {
            let _ = p;
            return Err(Error::Invalid("composition parts must be >= 1".into()));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of parts.
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_convergent(&self) -> bool {
        self.0[0] >= 2
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// The binarisation map: each part `a` becomes `x^(a-1) y`, concatenated.
pub fn composition_to_word(c: &Composition) -> Word {
    let mut letters = Vec::with_capacity(c.weight() as usize);
    for &part in c.parts() {
        for _ in 1..part {
            letters.push(Letter::X);
        }
        letters.push(Letter::Y);
    }
    Word(letters)
}

/// Inverse of [`composition_to_word`] on convergent words: split the word into
/// blocks `x^(a-1) y` and read off the exponents.
pub fn word_to_composition(w: &Word) -> Result<Composition> {
    if !w.is_convergent() {
        return Err(Error::NotConvergentWord(w.to_string()));
    }
    let mut parts = Vec::new();
    let mut run = 0u32;
    for l in w.letters() {
        match l {
            Letter::X => run += 1,
            Letter::Y => {
                parts.push(run + 1);
                run = 0;
            }
        }
    }
    Composition::new(parts)
}

/// Concatenation as a free-standing operation, mirroring [`Word::concat`].
pub fn concat(w1: &Word, w2: &Word) -> Word {
    w1.concat(w2)
}

/// The recursive shuffle product of two words.
///
/// The result sums all order-preserving interleavings; the coefficient mass is
/// `binomial(|w1| + |w2|, |w1|)`.
pub fn shuffle(w1: &Word, w2: &Word) -> FormalWordSum {
    let mut memo: HashMap<(usize, usize), FormalWordSum> = HashMap::new();
    shuffle_suffixes(w1.letters(), w2.letters(), 0, 0, &mut memo)
}

fn shuffle_suffixes(
    a: &[Letter],
    b: &[Letter],
    i: usize,
    j: usize,
    memo: &mut HashMap<(usize, usize), FormalWordSum>,
) -> FormalWordSum {
    if i == a.len() {
        return FormalSum::term(Word(b[j..].to_vec()));
    }
    if j == b.len() {
        return FormalSum::term(Word(a[i..].to_vec()));
    }
    if let Some(hit) = memo.get(&(i, j)) {
        return hit.clone();
    }
    let left = shuffle_suffixes(a, b, i + 1, j, memo).map_terms(|w| w.prefixed(a[i]));
    let right = shuffle_suffixes(a, b, i, j + 1, memo).map_terms(|w| w.prefixed(b[j]));
    let out = left.add(&right);
    memo.insert((i, j), out.clone());
    out
}

/// Bilinear extension of the shuffle product to formal sums.
pub fn shuffle_sums(s1: &FormalWordSum, s2: &FormalWordSum) -> FormalWordSum {
    let mut out = FormalSum::zero();
    for (w1, c1) in s1.iter() {
        for (w2, c2) in s2.iter() {
            let c = c1 * c2;
            for (w, k) in shuffle(w1, w2).iter() {
                out.add_term(w.clone(), k * &c);
            }
        }
    }
    out
}
