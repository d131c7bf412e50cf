//! Mordell-Tornheim zeta values
//!
//! ```text
//!   MT(s1, ..., sr | s) = sum over n1, ..., nr >= 1 of
//!                         n1^-s1 ... nr^-sr (n1 + ... + nr)^-s
//! ```
//!
//! reduced to MZV combinations. Arguments are stored sorted ascending since
//! the series is symmetric in them.
//!
//! Two routes are implemented and cross-validated:
//!
//! * [`mt_reduce`]: the partial-fraction decomposition
//!   `MT(s1,...,sr|s) = sum_i MT(s1,...,si - 1,...,sr|s + 1)` (valid while
//!   `s, s1 >= 1`), recursed until some argument reaches 0, where the value
//!   is the tree zeta value of a corolla (root `s`, one leaf per remaining
//!   argument) and reduces through the forest pipeline.
//! * [`mt_closed_form`]: the same recursion evaluated in closed form. A leaf
//!   of the recursion is reached by decrementing argument `i` exactly `si`
//!   times (the last step overall) and each other argument `j` some
//!   `pj <= sj - 1` times, in any interleaved order; the number of orders is
//!   the multinomial `(sum p - 1)! / ((pi - 1)! prod_j pj!)`. Each leaf
//!   contributes that multiple of
//!   `zeta(s(s + sum p) . (s(s1-p1) # ... # s(sr-pr)))` with `s(m) = x^(m-1)y`
//!   and `s(0)` the empty word. Summing the multiplicities is what makes the
//!   closed form agree exactly with the recursion; dropping them undercounts
//!   as soon as some `si >= 2` and another argument is decremented at all
//!   (first at `MT(2,2|1)`, where the direct series gives
//!   `2 zeta(3,2) + 4 zeta(4,1)`).

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::forests::{NatForest, NatTree};
use crate::formal_sum::FormalSum;
use crate::reduction::{reduce_forest, MzvCombination};
use crate::words::{composition_to_word, Composition, FormalWordSum, Word};

/// A Mordell-Tornheim index: arguments `(s1, ..., sr)` stored sorted
/// ascending, plus the exponent `s` of the sum form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MtIndex {
    args: Vec<u32>,
    s: u32,
}

impl MtIndex {
    pub fn new(args: Vec<u32>, s: u32) -> Result<Self> {
        if args.is_empty() {
            return Err(Error::Invalid(
                "a Mordell-Tornheim index needs at least one argument".into(),
            ));
        }
        let mut args = args;
        args.sort_unstable();
        Ok(MtIndex { args, s })
    }

    /// Sorted ascending.
    pub fn args(&self) -> &[u32] {
        &self.args
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Number of arguments.
    pub fn depth(&self) -> usize {
        self.args.len()
    }

    pub fn partial_depth(&self) -> u32 {
        self.args.iter().sum()
    }

    pub fn weight(&self) -> u32 {
        self.s + self.partial_depth()
    }
}

impl std::fmt::Display for MtIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MT(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "|{})", self.s)
    }
}

/// Sufficient convergence test on the sorted index: for every
/// `k in 1..=r`, `s + s1 + ... + sk > k`.
pub fn mt_convergent(idx: &MtIndex) -> bool {
    let mut partial = idx.s;
    for (k, &a) in idx.args.iter().enumerate() {
        partial += a;
        if partial <= (k + 1) as u32 {
            return false;
        }
    }
    true
}

/// Checks that the index is convergent and inside the covered domain:
/// `s >= 1` when all arguments are positive, or `s >= 2` when exactly the
/// smallest argument is zero.
fn validate_covered(idx: &MtIndex) -> Result<()> {
    if !mt_convergent(idx) {
        return Err(Error::Divergent(format!(
            "{idx} fails the convergence criterion"
        )));
    }
    if idx.args[0] >= 1 {
        if idx.s >= 1 {
            Ok(())
        } else {
            Err(Error::Divergent(format!(
                "{idx} with positive arguments needs s >= 1"
            )))
        }
    } else if idx.args.len() >= 2 && idx.args[1] == 0 {
        Err(Error::Divergent(format!(
            "{idx} has two zero arguments, which the tree pipeline does not cover"
        )))
    } else if idx.s >= 2 {
        Ok(())
    } else {
        Err(Error::Divergent(format!(
            "{idx} with a zero argument needs s >= 2"
        )))
    }
}

/// The corolla whose tree zeta value is `MT(0, s2, ..., sr | s)`: root
/// decorated `s` with one leaf per remaining argument. Requires `s1 = 0`,
/// `s >= 2` and positive remaining arguments.
pub fn mt_corolla(idx: &MtIndex) -> Result<NatTree> {
    if idx.args[0] != 0 {
        return Err(Error::Invalid(format!(
            "{idx}: the corolla form requires the smallest argument to be 0"
        )));
    }
    validate_covered(idx)?;
    Ok(NatTree::new(
        idx.s,
        idx.args[1..].iter().map(|&a| NatTree::leaf(a)).collect(),
    ))
}

/// Reduces a convergent, covered index to its MZV combination by the
/// decomposition recursion with memoization on sorted indices. The output has
/// depth `r`, weight `s + s1 + ... + sr` and integer coefficients.
pub fn mt_reduce(idx: &MtIndex) -> Result<MzvCombination> {
    validate_covered(idx)?;
    let mut memo = HashMap::new();
    Ok(reduce_memoized(idx, &mut memo))
}

fn reduce_memoized(idx: &MtIndex, memo: &mut HashMap<MtIndex, MzvCombination>) -> MzvCombination {
    if let Some(hit) = memo.get(idx) {
        return hit.clone();
    }
    let result = if idx.args[0] == 0 {
        let tree = mt_corolla(idx).expect("recursion keeps indices covered");
        reduce_forest(&NatForest::single(tree)).expect("corolla roots are >= 2")
    } else {
        let mut acc = MzvCombination::default();
        for i in 0..idx.args.len() {
            let mut args = idx.args.clone();
            args[i] -= 1;
            let child = MtIndex::new(args, idx.s + 1).expect("nonempty");
            acc = acc.add(&reduce_memoized(&child, memo));
        }
        acc
    };
    memo.insert(idx.clone(), result.clone());
    result
}

/// Closed-form evaluation of the iterated decomposition (see the module
/// docs). Must agree exactly with [`mt_reduce`] on the whole covered domain;
/// with a zero smallest argument there is nothing to iterate and the single
/// corolla term is evaluated directly.
pub fn mt_closed_form(idx: &MtIndex) -> Result<MzvCombination> {
    validate_covered(idx)?;
    let r = idx.args.len();
    if idx.args[0] == 0 {
        return MzvCombination::from_word_sum(&corolla_words(idx.s, &idx.args[1..]));
    }
    let mut acc = MzvCombination::default();
    for i in 0..r {
        // p[j] ranges over 0..args[j] for j != i; p[i] is pinned to args[i].
        let mut p: Vec<u32> = (0..r)
            .map(|j| if j == i { idx.args[j] } else { 0 })
            .collect();
        loop {
            let total: u32 = p.iter().sum();
            let multiplicity = path_count(&p, i);
            let remaining: Vec<u32> = (0..r)
                .filter(|&j| j != i)
                .map(|j| idx.args[j] - p[j])
                .collect();
            let words = corolla_words(idx.s + total, &remaining);
            let term = MzvCombination::from_word_sum(&words)
                .expect("leading exponent >= 2 keeps words convergent");
            acc = acc.add(&term.scale(&BigRational::from_integer(multiplicity.into())));

            // Odometer over the free coordinates.
            let mut j = 0;
            loop {
                if j == r {
                    break;
                }
                if j == i {
                    j += 1;
                    continue;
                }
                if p[j] + 1 < idx.args[j] {
                    p[j] += 1;
                    break;
                }
                p[j] = 0;
                j += 1;
            }
            if j == r {
                break;
            }
        }
    }
    Ok(acc)
}

/// `zeta(s(s) . (s(a1) # ... # s(ak)))` as a word sum: the reduction of the
/// corolla with root `s` and leaves `a1..ak`, computed directly on words.
fn corolla_words(s: u32, leaves: &[u32]) -> FormalWordSum {
    let mut sh = FormalSum::term(Word::empty());
    for &a in leaves {
        let leaf_word = composition_to_word(&Composition::new(vec![a]).expect("a >= 1"));
        sh = crate::words::shuffle_sums(&sh, &FormalSum::term(leaf_word));
    }
    let prefix = composition_to_word(&Composition::new(vec![s]).expect("s >= 2"));
    sh.map_terms(|w| prefix.concat(w))
}

/// Number of decrement orders reaching the leaf `(i, p)`: arrangements of all
/// decrements with variable `i`'s last decrement at the final position.
fn path_count(p: &[u32], i: usize) -> BigUint {
    let total: u32 = p.iter().sum();
    let mut numer = factorial(total - 1);
    for (j, &pj) in p.iter().enumerate() {
        let denom = if j == i {
            factorial(pj - 1)
        } else {
            factorial(pj)
        };
        numer /= denom;
    }
    numer
}

fn factorial(n: u32) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}
