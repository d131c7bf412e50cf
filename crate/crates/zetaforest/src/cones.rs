//! Decorated simplicial cones given by representing matrices, and the
//! characterization of the cones whose lattice-point series is indexed by a
//! rooted forest.
//!
//! A cone is an `n x n` integer matrix whose row `i` holds the coefficients of
//! the linear form `l_i`, plus an exponent for each row. Rows are ordered by
//! `i <= j  iff  l_i - l_j >= 0` componentwise; when the matrix has pairwise
//! distinct rows this relation is a partial order. The *second representing
//! matrix* is the incidence matrix of its Hasse diagram (the transitive
//! reduction). A unimodular cone is *tree-like* when it is poset compatible
//! (`a[i][j] != 0` implies `i <= j`) and the Hasse matrix has at most one
//! nonzero entry per column; tree-like cones are exactly the path matrices of
//! decorated rooted forests, up to simultaneous row/column permutation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, ReasonCode, Result};
use crate::forests::{NatForest, NatTree};

/// A decorated maximal cone: square integer matrix plus one exponent per row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCone", into = "RawCone")]
pub struct Cone {
    matrix: Vec<Vec<i64>>,
    exponents: Vec<u32>,
}

/// Wire format: `{"matrix": [[...], ...], "exponents": [...]}`.
#[derive(Serialize, Deserialize)]
struct RawCone {
    matrix: Vec<Vec<i64>>,
    exponents: Vec<u32>,
}

impl TryFrom<RawCone> for Cone {
    type Error = Error;

    fn try_from(raw: RawCone) -> Result<Cone> {
        Cone::new(raw.matrix, raw.exponents)
    }
}

impl From<Cone> for RawCone {
    fn from(c: Cone) -> RawCone {
        RawCone {
            matrix: c.matrix,
            exponents: c.exponents,
        }
    }
}

impl Cone {
    pub fn new(matrix: Vec<Vec<i64>>, exponents: Vec<u32>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid("representing matrix must be square".into()));
        }
        if exponents.len() != n {
            return Err(Error::Invalid(format!(
                "expected {n} exponents for a {n}x{n} matrix, got {}",
                exponents.len()
            )));
        }
        Ok(Cone { matrix, exponents })
    }

    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Every entry in {0, 1}.
    pub fn is_unimodular(&self) -> bool {
        self.matrix
            .iter()
            .all(|row| row.iter().all(|&a| a == 0 || a == 1))
    }

    /// Every entry >= 0, so every form is nonnegative on the positive orthant.
    /// Unimodular cones are always positive; this standalone check exists for
    /// general matrices but the pipeline never needs it.
    pub fn is_positive(&self) -> bool {
        self.matrix.iter().all(|row| row.iter().all(|&a| a >= 0))
    }

    /// The row relation `i <= j iff row_i - row_j >= 0` componentwise.
    /// Duplicate rows break antisymmetry and are rejected.
    pub fn poset_relation(&self) -> Result<Poset> {
        let n = self.dimension();
        let mut relation = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                relation[i][j] = (0..n).all(|k| self.matrix[i][k] >= self.matrix[j][k]);
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && relation[i][j] && relation[j][i] {
                    return Err(Error::rejected(
                        ReasonCode::DuplicateRows,
                        format!("rows {} and {} coincide; not a maximal cone", i + 1, j + 1),
                    ));
                }
            }
        }
        Poset::new(relation)
    }

    /// `a[i][j] != 0` implies `i <= j` in the row poset. Column index j is
    /// matched to row index j as-is; relabeling is the job of
    /// [`Cone::align_columns`].
    pub fn is_poset_compatible(&self) -> Result<bool> {
        let poset = self.poset_relation()?;
        Ok(self.compatible_with(&poset))
    }

    fn compatible_with(&self, poset: &Poset) -> bool {
        let n = self.dimension();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == 0 || poset.leq(i, j)))
    }

    /// Incidence matrix of the Hasse diagram of the row poset: `b[i][j]` is
    /// true iff `j` covers `i`.
    pub fn second_representing_matrix(&self) -> Result<Vec<Vec<bool>>> {
        Ok(self.poset_relation()?.covers())
    }

    /// Strict tree-likeness: unimodular, poset compatible, and at most one
    /// nonzero per column of the Hasse matrix. False (not an error) when the
    /// rows are not pairwise distinct.
    pub fn is_tree_like(&self) -> bool {
        self.tree_like_verdict().is_ok()
    }

    /// Ok when tree-like, otherwise the first failing clause.
    pub fn tree_like_verdict(&self) -> Result<()> {
        if !self.is_unimodular() {
            return Err(Error::rejected(
                ReasonCode::NotUnimodular,
                "matrix has an entry outside {0,1}".to_string(),
            ));
        }
        let poset = self.poset_relation()?;
        if !self.compatible_with(&poset) {
            let (i, j) = self
                .first_incompatible_entry(&poset)
                .expect("compatibility failed, so a witness exists");
            return Err(Error::rejected(
                ReasonCode::NotPosetCompatible,
                format!(
                    "a[{},{}] != 0 but {} <= {} fails",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                ),
            ));
        }
        if !poset.is_forest() {
            return Err(Error::rejected(
                ReasonCode::NotForestHasse,
                "some column of the Hasse matrix has more than one nonzero entry".to_string(),
            ));
        }
        // For maximal cones the clauses above already force the matrix to be
        // the path matrix of its row poset; a mismatch here means the rows
        // are linearly dependent (e.g. a zero row) and the series would not
        // be the forest's, so reject rather than mis-evaluate.
        let n = self.dimension();
        for i in 0..n {
            for j in 0..n {
                if (self.matrix[i][j] != 0) != poset.leq(i, j) {
                    return Err(Error::rejected(
                        ReasonCode::NotMaximal,
                        format!(
                            "matrix is not the path matrix of its row poset at ({},{}); \
                             rows are linearly dependent",
                            i + 1,
                            j + 1
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    fn first_incompatible_entry(&self, poset: &Poset) -> Option<(usize, usize)> {
        let n = self.dimension();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.matrix[i][j] != 0 && !poset.leq(i, j))
    }

    /// Variable relabeling: looks for the column permutation that turns the
    /// matrix into the path matrix of its own row poset (column placed at
    /// position j must equal the indicator of `{i : i <= j}`; those target
    /// columns are pairwise distinct by antisymmetry). Returns `Ok(None)` when
    /// no such permutation exists. The row poset is invariant under column
    /// permutations, so the relabeled cone has the same poset.
    pub fn align_columns(&self) -> Result<Option<Cone>> {
        if !self.is_unimodular() {
            return Err(Error::rejected(
                ReasonCode::NotUnimodular,
                "alignment is defined for unimodular matrices only".to_string(),
            ));
        }
        let poset = self.poset_relation()?;
        let n = self.dimension();
        let mut assignment = vec![usize::MAX; n]; // column c goes to position assignment[c]
        let mut taken = vec![false; n];
        for c in 0..n {
            let column: Vec<bool> = (0..n).map(|i| self.matrix[i][c] != 0).collect();
            let target = (0..n).find(|&j| (0..n).all(|i| column[i] == poset.leq(i, j)));
            match target {
                Some(j) if !taken[j] => {
                    assignment[c] = j;
                    taken[j] = true;
                }
                _ => return Ok(None),
            }
        }
        let mut matrix = vec![vec![0i64; n]; n];
        for c in 0..n {
            for i in 0..n {
                matrix[i][assignment[c]] = self.matrix[i][c];
            }
        }
        Ok(Some(Cone {
            matrix,
            exponents: self.exponents.clone(),
        }))
    }

    /// Extracts the decorated forest of a tree-like cone: vertex `i` is row
    /// `i` decorated by `exponents[i]`, with the Hasse diagram as edge set.
    pub fn to_forest(&self) -> Result<NatForest> {
        self.tree_like_verdict()?;
        let poset = self.poset_relation()?;
        let covers = poset.covers();
        let n = self.dimension();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if covers[i][j] {
                    children[i].push(j);
                }
            }
        }
        fn build(v: usize, children: &[Vec<usize>], exponents: &[u32]) -> NatTree {
            NatTree::new(
                exponents[v],
                children[v]
                    .iter()
                    .map(|&c| build(c, children, exponents))
                    .collect(),
            )
        }
        Ok(NatForest::new(
            poset
                .minimal_elements()
                .into_iter()
                .map(|r| build(r, &children, &self.exponents))
                .collect(),
        ))
    }

    /// Splits along the connected components of the row poset; rows, columns
    /// and exponents are restricted to each component (in increasing index
    /// order, components ordered by smallest member).
    pub fn connected_blocks(&self) -> Result<Vec<Cone>> {
        let poset = self.poset_relation()?;
        Ok(poset
            .components()
            .into_iter()
            .map(|indices| {
                let matrix = indices
                    .iter()
                    .map(|&i| indices.iter().map(|&j| self.matrix[i][j]).collect())
                    .collect();
                let exponents = indices.iter().map(|&i| self.exponents[i]).collect();
                Cone { matrix, exponents }
            })
            .collect())
    }
}

/// The path matrix of a forest under canonical pre-order numbering:
/// `a[i][j] = 1` iff vertex `i` is an ancestor of (or equal to) vertex `j`,
/// with the decorations as exponents. The result is always tree-like; the
/// empty forest gives the empty cone.
pub fn forest_to_cone(forest: &NatForest) -> Cone {
    let n = forest.vertex_count();
    let mut matrix = vec![vec![0i64; n]; n];
    let mut exponents = vec![0u32; n];
    // Walk in canonical pre-order, keeping the stack of ancestor indices.
    fn walk(
        t: &NatTree,
        next: &mut usize,
        ancestors: &mut Vec<usize>,
        matrix: &mut [Vec<i64>],
        exponents: &mut [u32],
    ) {
        let me = *next;
        *next += 1;
        exponents[me] = *t.decoration();
        matrix[me][me] = 1;
        for &a in ancestors.iter() {
            matrix[a][me] = 1;
        }
        ancestors.push(me);
        for c in t.children() {
            walk(c, next, ancestors, matrix, exponents);
        }
        ancestors.pop();
    }
    let mut next = 0usize;
    let mut ancestors = Vec::new();
    for t in forest.trees() {
        walk(t, &mut next, &mut ancestors, &mut matrix, &mut exponents);
    }
    Cone { matrix, exponents }
}

/// A finite poset on `{0, ..., n-1}` given by its full relation matrix.
/// Construction checks reflexivity, transitivity and antisymmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    relation: Vec<Vec<bool>>,
}

impl Poset {
    pub fn new(relation: Vec<Vec<bool>>) -> Result<Self> {
        let n = relation.len();
        if relation.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid("relation matrix must be square".into()));
        }
        let p = Poset { relation };
        if (0..n).any(|i| !p.leq(i, i)) {
            return Err(Error::Invalid("relation is not reflexive".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && p.leq(i, j) && p.leq(j, i) {
                    return Err(Error::Invalid("relation is not antisymmetric".into()));
                }
                if p.leq(i, j) {
                    for k in 0..n {
                        if p.leq(j, k) && !p.leq(i, k) {
                            return Err(Error::Invalid("relation is not transitive".into()));
                        }
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.relation.len()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.relation[i][j]
    }

    /// All related pairs `i < j` or `j < i` with `i != j`, as `(lower, upper)`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.leq(i, j))
            .collect()
    }

    /// Transitive reduction: `covers[i][j]` iff `j` covers `i` (`i < j` with
    /// nothing strictly between).
    pub fn covers(&self) -> Vec<Vec<bool>> {
        let n = self.size();
        let mut covers = vec![vec![false; n]; n];
        for (i, j) in self.strict_pairs() {
            covers[i][j] = (0..n).all(|k| k == i || k == j || !(self.leq(i, k) && self.leq(k, j)));
        }
        covers
    }

    /// At most one cover-parent per element, i.e. the Hasse diagram is a
    /// rooted forest (roots = minimal elements).
    pub fn is_forest(&self) -> bool {
        let covers = self.covers();
        let n = self.size();
        (0..n).all(|j| (0..n).filter(|&i| covers[i][j]).count() <= 1)
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        let n = self.size();
        (0..n)
            .filter(|&j| (0..n).all(|i| i == j || !self.leq(i, j)))
            .collect()
    }

    /// Connected components of the comparability graph, each sorted, ordered
    /// by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for u in 0..n {
                    if !seen[u] && (self.leq(v, u) || self.leq(u, v)) {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}
