#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

use zetaforest::cones::Cone;
use zetaforest::forests::{DecoratedForest, DecoratedTree, NatForest, XyForest};
use zetaforest::words::Letter;

/// Random forest built by random attachment: each new vertex either starts a
/// tree or hangs under a uniformly chosen existing vertex.
fn random_forest_with<D: Ord + Clone>(
    rng: &mut StdRng,
    vertices: usize,
    mut decor: impl FnMut(&mut StdRng, bool) -> D,
) -> DecoratedForest<D> {
    let mut parents: Vec<Option<usize>> = Vec::with_capacity(vertices);
    let mut decorations: Vec<D> = Vec::with_capacity(vertices);
    for i in 0..vertices {
        let is_root = i == 0 || rng.random_ratio(1, 4);
        let parent = if is_root {
            None
        } else {
            Some(rng.random_range(0..i))
        };
        parents.push(parent);
        decorations.push(decor(rng, parent.is_none()));
    }
    assemble(&parents, &decorations)
}

fn assemble<D: Ord + Clone>(parents: &[Option<usize>], decorations: &[D]) -> DecoratedForest<D> {
    let n = parents.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for (i, p) in parents.iter().enumerate() {
        match p {
            Some(p) => children[*p].push(i),
            None => roots.push(i),
        }
    }
    fn build<D: Ord + Clone>(
        v: usize,
        children: &[Vec<usize>],
        decorations: &[D],
    ) -> DecoratedTree<D> {
        DecoratedTree::new(
            decorations[v].clone(),
            children[v]
                .iter()
                .map(|&c| build(c, children, decorations))
                .collect(),
        )
    }
    DecoratedForest::new(
        roots
            .into_iter()
            .map(|r| build(r, &children, decorations))
            .collect(),
    )
}

/// Random forest with decorations in `1..=max_decor`.
pub fn random_nat_forest(rng: &mut StdRng, max_vertices: usize, max_decor: u32) -> NatForest {
    let n = rng.random_range(1..=max_vertices);
    random_forest_with(rng, n, |rng, _| rng.random_range(1..=max_decor))
}

/// Random forest with decorations in `0..=max_decor` (cones allow 0).
pub fn random_nat0_forest(rng: &mut StdRng, max_vertices: usize, max_decor: u32) -> NatForest {
    let n = rng.random_range(1..=max_vertices);
    random_forest_with(rng, n, |rng, _| rng.random_range(0..=max_decor))
}

/// Random convergent forest: roots decorated `2..=max_decor.max(2)`.
pub fn random_convergent_forest(
    rng: &mut StdRng,
    max_vertices: usize,
    max_decor: u32,
) -> NatForest {
    let n = rng.random_range(1..=max_vertices);
    random_forest_with(rng, n, |rng, is_root| {
        if is_root {
            rng.random_range(2..=max_decor.max(2))
        } else {
            rng.random_range(1..=max_decor)
        }
    })
}

/// Random {x,y}-forest (not necessarily convergent).
pub fn random_xy_forest(rng: &mut StdRng, max_vertices: usize) -> XyForest {
    let n = rng.random_range(1..=max_vertices);
    random_forest_with(rng, n, |rng, _| {
        if rng.random_bool(0.5) {
            Letter::X
        } else {
            Letter::Y
        }
    })
}

/// Random convergent forest whose decorations sum to at most `max_weight`
/// (equivalently, whose binarisation has at most `max_weight` vertices).
pub fn random_convergent_forest_with_weight(rng: &mut StdRng, max_weight: u32) -> NatForest {
    let target = rng.random_range(2..=max_weight.max(2));
    let mut budget = target;
    let mut parents: Vec<Option<usize>> = Vec::new();
    let mut decorations: Vec<u32> = Vec::new();

    let root_decor = rng.random_range(2..=budget.min(4));
    parents.push(None);
    decorations.push(root_decor);
    budget -= root_decor;

    while budget >= 1 {
        if rng.random_ratio(1, 5) {
            break;
        }
        if budget >= 2 && rng.random_ratio(1, 4) {
            let d = rng.random_range(2..=budget.min(4));
            parents.push(None);
            decorations.push(d);
            budget -= d;
        } else {
            let d = rng.random_range(1..=budget.min(3));
            let parent = rng.random_range(0..parents.len());
            parents.push(Some(parent));
            decorations.push(d);
            budget -= d;
        }
    }
    assemble(&parents, &decorations)
}

/// Applies a random simultaneous row/column permutation (exponents permuted
/// with the rows). This preserves tree-likeness and the extracted forest.
pub fn scramble_cone(rng: &mut StdRng, cone: &Cone) -> Cone {
    let n = cone.dimension();
    let mut perm: Vec<usize> = (0..n).collect();
    // Fisher-Yates.
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    let matrix = (0..n)
        .map(|i| (0..n).map(|j| cone.matrix()[perm[i]][perm[j]]).collect())
        .collect();
    let exponents = (0..n).map(|i| cone.exponents()[perm[i]]).collect();
    Cone::new(matrix, exponents).expect("permutation preserves shape")
}
