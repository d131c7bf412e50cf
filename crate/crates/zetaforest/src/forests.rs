//! Canonical decorated rooted forests.
//!
//! Trees and forests are always held in canonical form: the children of every
//! vertex (and the trees of a forest) are sorted by the recursive encoding
//! `(decoration, sorted child encodings)`. Two raw forests related by a
//! decoration-preserving poset isomorphism therefore construct structurally
//! equal values, so `==` decides isomorphism of decorated forests.
//!
//! Two decoration alphabets are used throughout: positive integers (forests
//! indexing tree zeta values) and the letters {x, y} (forests indexing
//! iterated integrals). The bridge is the branched binarisation map
//! [`branched_binarize`], which expands a vertex decorated `n` into a chain of
//! `n - 1` x-vertices above one y-vertex, and its inverse
//! [`inverse_binarize`]. Flattening ([`flatten`]) turns an {x,y}-forest into a
//! shuffle sum of words: concatenation of forests goes to the shuffle product
//! and grafting goes to letter-prefixing.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::formal_sum::FormalSum;
use crate::words::{shuffle_sums, FormalWordSum, Letter, Word};

/// A rooted tree with a decoration on every vertex, held in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedTree<D> {
    decoration: D,
    children: Vec<DecoratedTree<D>>,
}

/// A multiset of decorated rooted trees, held in canonical order. The empty
/// forest is the unit of concatenation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedForest<D> {
    trees: Vec<DecoratedTree<D>>,
}

impl<D> Default for DecoratedForest<D> {
    fn default() -> Self {
        DecoratedForest { trees: Vec::new() }
    }
}

impl<D: Ord + Clone> DecoratedTree<D> {
    /// Builds a tree, canonicalizing the child order. Children built by this
    /// constructor are canonical by induction, so sorting the direct children
    /// suffices.
    pub fn new(decoration: D, mut children: Vec<DecoratedTree<D>>) -> Self {
        children.sort();
        DecoratedTree {
            decoration,
            children,
        }
    }

    pub fn leaf(decoration: D) -> Self {
        Self::new(decoration, Vec::new())
    }

    pub fn decoration(&self) -> &D {
        &self.decoration
    }

    pub fn children(&self) -> &[DecoratedTree<D>] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// More than one direct descendant.
    pub fn is_branching(&self) -> bool {
        self.children.len() > 1
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.children.iter().map(Self::vertex_count).sum::<usize>()
    }
}

impl<D: Ord + Clone> DecoratedForest<D> {
    pub fn new(mut trees: Vec<DecoratedTree<D>>) -> Self {
        trees.sort();
        DecoratedForest { trees }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(tree: DecoratedTree<D>) -> Self {
        DecoratedForest { trees: vec![tree] }
    }

    pub fn trees(&self) -> &[DecoratedTree<D>] {
        &self.trees
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.trees.iter().map(DecoratedTree::vertex_count).sum()
    }

    /// Concatenation (disjoint union) of forests.
    pub fn concat(&self, other: &Self) -> Self {
        let mut trees = self.trees.clone();
        trees.extend_from_slice(&other.trees);
        Self::new(trees)
    }

    /// Every decoration in canonical pre-order (trees in order, root first).
    pub fn decorations(&self) -> Vec<D> {
        let mut out = Vec::with_capacity(self.vertex_count());
        fn walk<D: Clone>(t: &DecoratedTree<D>, out: &mut Vec<D>) {
            out.push(t.decoration.clone());
            for c in &t.children {
                walk(c, out);
            }
        }
        for t in &self.trees {
            walk(t, &mut out);
        }
        out
    }
}

/// The grafting operator: a new root decorated `decoration` whose children are
/// the trees of `forest`. Grafting the empty forest yields a single vertex.
pub fn graft<D: Ord + Clone>(forest: DecoratedForest<D>, decoration: D) -> DecoratedTree<D> {
    DecoratedTree::new(decoration, forest.trees)
}

/// Forests decorated by nonnegative integers. The tree-zeta pipeline requires
/// every decoration to be >= 1; decoration 0 can appear only transiently on
/// cones extracted from matrices and is rejected before reduction.
pub type NatTree = DecoratedTree<u32>;
pub type NatForest = DecoratedForest<u32>;

/// Forests decorated by {x, y}.
pub type XyTree = DecoratedTree<Letter>;
pub type XyForest = DecoratedForest<Letter>;

// ---------------------------------------------------------------------------
// Convergence predicates
// ---------------------------------------------------------------------------

/// A {x,y}-forest is convergent when every leaf and every branching vertex is
/// decorated `y`, every root is decorated `x`, and no root branches. The empty
/// forest is convergent.
pub fn is_convergent_xy(forest: &XyForest) -> bool {
    fn tree_ok(t: &XyTree, is_root: bool) -> bool {
        if is_root && (*t.decoration() != Letter::X || t.is_branching()) {
            return false;
        }
        if (t.is_leaf() || t.is_branching()) && *t.decoration() != Letter::Y {
            return false;
        }
        t.children().iter().all(|c| tree_ok(c, false))
    }
    forest.trees().iter().all(|t| tree_ok(t, true))
}

/// A positive-integer-decorated forest is convergent when every tree's root
/// decoration is >= 2. Forests carrying a 0 decoration anywhere are outside
/// the positive-integer alphabet and are never convergent here.
pub fn is_convergent_nat(forest: &NatForest) -> bool {
    forest.trees().iter().all(|t| *t.decoration() >= 2)
        && forest.decorations().iter().all(|&d| d >= 1)
}

// ---------------------------------------------------------------------------
// Segments
// ---------------------------------------------------------------------------

/// A maximal run of x-vertices terminated by one y-vertex in a convergent
/// {x,y}-forest. `terminal_vertex` is the 0-based canonical pre-order index of
/// the terminating y-vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub terminal_vertex: usize,
    pub length: usize,
    pub depth: usize,
}

/// One segment per y-vertex of a convergent forest, sorted by terminal vertex.
/// Segment lengths partition the vertex set; a leaf's segment has depth 0 and
/// an inner segment's depth is one more than the largest depth below it.
pub fn segments(forest: &XyForest) -> Result<Vec<Segment>> {
    if !is_convergent_xy(forest) {
        return Err(Error::NotConvergentForest(format!(
            "segments are defined only for convergent forests, got '{}'",
            render_forest(forest)
        )));
    }
    let mut out = Vec::new();
    let mut next_index = 0usize;
    // Returns the maximal segment depth within the subtree.
    fn walk(t: &XyTree, next_index: &mut usize, pending_x: usize, out: &mut Vec<Segment>) -> usize {
        let my_index = *next_index;
        *next_index += 1;
        match t.decoration() {
            Letter::X => {
                // In a convergent forest an x-vertex has exactly one child.
                walk(&t.children()[0], next_index, pending_x + 1, out)
            }
            Letter::Y => {
                let depth = if t.is_leaf() {
                    0
                } else {
                    let below = t
                        .children()
                        .iter()
                        .map(|c| walk(c, next_index, 0, out))
                        .max()
                        .unwrap();
                    below + 1
                };
                out.push(Segment {
                    terminal_vertex: my_index,
                    length: pending_x + 1,
                    depth,
                });
                depth
            }
        }
    }
    for t in forest.trees() {
        walk(t, &mut next_index, 0, &mut out);
    }
    out.sort_by_key(|s| s.terminal_vertex);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Branched binarisation
// ---------------------------------------------------------------------------

/// Expands every vertex decorated `n >= 1` into a chain of `n - 1` x-vertices
/// above one y-vertex; the images of the vertex's subtrees hang below the y.
///
/// The output has one vertex per unit of decoration and one y-vertex per input
/// vertex, and is convergent exactly when the input is.
pub fn branched_binarize(forest: &NatForest) -> XyForest {
    fn tree(t: &NatTree) -> XyTree {
        let n = *t.decoration();
        assert!(n >= 1, "branched binarisation requires decorations >= 1");
        let below = XyForest::new(t.children().iter().map(tree).collect());
        let mut out = graft(below, Letter::Y);
        for _ in 1..n {
            out = graft(XyForest::single(out), Letter::X);
        }
        out
    }
    XyForest::new(forest.trees().iter().map(tree).collect())
}

/// Inverse of [`branched_binarize`]. Fails when the forest is not in its
/// image, i.e. when some x-vertex is a leaf or branches.
pub fn inverse_binarize(forest: &XyForest) -> Result<NatForest> {
    fn tree(t: &XyTree) -> Result<NatTree> {
        let mut spine = 1u32;
        let mut cursor = t;
        while *cursor.decoration() == Letter::X {
            match cursor.children() {
                [only] => {
                    spine += 1;
                    cursor = only;
                }
                [] => {
                    return Err(Error::NotBinarizable(
                        "an x-decorated leaf has no preimage".into(),
                    ))
                }
                _ => {
                    return Err(Error::NotBinarizable(
                        "a branching x-vertex has no preimage".into(),
                    ))
                }
            }
        }
        // cursor is the y-vertex terminating the spine; spine counts it.
        let children = cursor
            .children()
            .iter()
            .map(tree)
            .collect::<Result<Vec<_>>>()?;
        Ok(NatTree::new(spine, children))
    }
    Ok(NatForest::new(
        forest
            .trees()
            .iter()
            .map(tree)
            .collect::<Result<Vec<_>>>()?,
    ))
}

// ---------------------------------------------------------------------------
// Flattening
// ---------------------------------------------------------------------------

/// The flattening morphism: concatenation of forests goes to the shuffle
/// product of word sums and grafting prefixes the root letter.
///
/// Every term has length `|V(F)|` with the letter multiset of the forest's
/// decorations; the coefficient mass equals the number of linear extensions
/// of the vertex poset.
pub fn flatten(forest: &XyForest) -> FormalWordSum {
    let mut memo = HashMap::new();
    flatten_forest(forest.trees(), &mut memo)
}

fn flatten_forest(trees: &[XyTree], memo: &mut HashMap<XyTree, FormalWordSum>) -> FormalWordSum {
    let mut acc = FormalSum::term(Word::empty());
    for t in trees {
        let sum = flatten_tree(t, memo);
        acc = shuffle_sums(&acc, &sum);
    }
    acc
}

fn flatten_tree(t: &XyTree, memo: &mut HashMap<XyTree, FormalWordSum>) -> FormalWordSum {
    if let Some(hit) = memo.get(t) {
        return hit.clone();
    }
    let letter = *t.decoration();
    let below = flatten_forest(t.children(), memo);
    let out = below.map_terms(|w| Word::new([&[letter], w.letters()].concat()));
    memo.insert(t.clone(), out.clone());
    out
}

// ---------------------------------------------------------------------------
// Linear extensions
// ---------------------------------------------------------------------------

/// Number of linear extensions of the vertex poset, by the hook length formula
/// for forests: `|V|!` divided by the product of all subtree sizes.
pub fn linear_extension_count<D: Ord + Clone>(forest: &DecoratedForest<D>) -> BigUint {
    fn hooks<D>(t: &DecoratedTree<D>, product: &mut BigUint) -> usize {
        let size = 1 + t.children.iter().map(|c| hooks(c, product)).sum::<usize>();
        *product *= BigUint::from(size);
        size
    }
    let mut product = BigUint::one();
    let mut n = 0usize;
    for t in forest.trees() {
        n += hooks(t, &mut product);
    }
    let mut factorial = BigUint::one();
    for k in 2..=n {
        factorial *= BigUint::from(k);
    }
    factorial / product
}

// ---------------------------------------------------------------------------
// Text grammar
// ---------------------------------------------------------------------------
//
//   forest := tree (";" tree)*
//   tree   := DECOR [ "(" tree ("," tree)* ")" ]
//   DECOR  := nonnegative integer | "x" | "y"
//
// Output is always the canonical form.

trait Decor: Ord + Clone + fmt::Display {
    fn parse(cursor: &mut Cursor) -> Result<Self>;
}

impl Decor for u32 {
    fn parse(cursor: &mut Cursor) -> Result<u32> {
        let start = cursor.pos;
        let digits = cursor.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(cursor.error_at(start, "expected an integer decoration"));
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(cursor.error_at(start, "leading zeros are not allowed"));
        }
        digits
            .parse::<u32>()
            .map_err(|_| cursor.error_at(start, "decoration out of range"))
    }
}

impl Decor for Letter {
    fn parse(cursor: &mut Cursor) -> Result<Letter> {
        match cursor.peek() {
            Some('x') => {
                cursor.bump();
                Ok(Letter::X)
            }
            Some('y') => {
                cursor.bump();
                Ok(Letter::Y)
            }
            _ => Err(cursor.error_here("expected decoration 'x' or 'y'")),
        }
    }
}

struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if pred(c) {
                self.bump();
            } else {
                break;
            }
        }
        &self.input[start..self.pos]
    }

    fn error_here(&self, message: &str) -> Error {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, position: usize, message: &str) -> Error {
        Error::Parse {
            position,
            message: match self.input[position..].chars().next() {
                Some(c) => format!("{message}, found {c:?}"),
                None => format!("{message}, found end of input"),
            },
        }
    }
}

fn parse_tree<D: Decor>(cursor: &mut Cursor) -> Result<DecoratedTree<D>> {
    let decoration = D::parse(cursor)?;
    let mut children = Vec::new();
    if cursor.peek() == Some('(') {
        cursor.bump();
        loop {
            children.push(parse_tree(cursor)?);
            match cursor.peek() {
                Some(',') => cursor.bump(),
                Some(')') => {
                    cursor.bump();
                    break;
                }
                _ => return Err(cursor.error_here("expected ',' or ')'")),
            }
        }
    }
    Ok(DecoratedTree::new(decoration, children))
}

fn parse_forest<D: Decor>(input: &str) -> Result<DecoratedForest<D>> {
    let mut cursor = Cursor { input, pos: 0 };
    let mut trees = vec![parse_tree(&mut cursor)?];
    while cursor.peek() == Some(';') {
        cursor.bump();
        trees.push(parse_tree(&mut cursor)?);
    }
    if cursor.pos != input.len() {
        return Err(cursor.error_here("unexpected trailing input"));
    }
    Ok(DecoratedForest::new(trees))
}

/// Parses a forest of integer decorations, e.g. `2(1,1)` or `2(1);3`.
pub fn parse_nat_forest(input: &str) -> Result<NatForest> {
    parse_forest(input)
}

/// Parses a forest of {x,y} decorations, e.g. `x(y(y,y))`.
pub fn parse_xy_forest(input: &str) -> Result<XyForest> {
    parse_forest(input)
}

fn render_tree<D: fmt::Display>(t: &DecoratedTree<D>, out: &mut String) {
    use fmt::Write;
    let _ = write!(out, "{}", t.decoration);
    if !t.children.is_empty() {
        out.push('(');
        for (i, c) in t.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            render_tree(c, out);
        }
        out.push(')');
    }
}

/// Canonical text form of a forest; trees joined by ";". The empty forest
/// renders as the empty string (it has no grammar production).
pub fn render_forest<D: fmt::Display>(forest: &DecoratedForest<D>) -> String {
    let mut out = String::new();
    for (i, t) in forest.trees.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        render_tree(t, &mut out);
    }
    out
}

impl<D: fmt::Display> fmt::Display for DecoratedTree<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        render_tree(self, &mut s);
        f.write_str(&s)
    }
}

impl<D: fmt::Display> fmt::Display for DecoratedForest<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_forest(self))
    }
}
