//! Truncated-series numerical oracle.
//!
//! Truncation semantics: every linear-form value is capped at `N`, not each
//! raw summation variable. For a tree this is the single constraint
//! "root form <= N" (subtree forms are dominated by it), which makes the
//! truncated tree series on a chain coincide summand-for-summand with the MZV
//! partial sum — the two are computed by the same primitive passes and agree
//! bit-for-bit. Direct box sums (non-tree-like cones, Mordell-Tornheim) cap
//! each variable at `N` instead.
//!
//! All accumulation is compensated (TwoSum error recycling) in a fixed
//! ascending order, so results are deterministic.
//!
//! Tail estimates: MZV partial sums use the doubling heuristic
//! `|v(N) - v(N/2)|`. The tree and box sums converge as slowly as
//! `polylog(N)/N`, where plain doubling systematically underestimates the
//! remainder, so they extrapolate the doubling increments geometrically: with
//! `e1 = v(N/2) - v(N/4)`, `e2 = v(N) - v(N/2)` and decay ratio
//! `rho = e1/e2`, the remainder of the geometric model is `e2 / (rho - 1)`,
//! clamped to `[1, 10] * e2`. Neither estimate is a proven bound.

use num_traits::ToPrimitive;

use crate::cones::Cone;
use crate::error::{Error, Result};
use crate::forests::{NatForest, NatTree};
use crate::mordell_tornheim::MtIndex;
use crate::reduction::MzvCombination;
use crate::words::Composition;

/// Default truncation for MZV prefix-sum evaluation.
pub const DEFAULT_MZV_TRUNCATION: usize = 100_000;
/// Default truncation for tree-structured convolutions.
pub const DEFAULT_TREE_TRUNCATION: usize = 4_000;
/// Default comparison tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericResult {
    pub value: f64,
    pub tail_estimate: f64,
    pub truncation: usize,
}

impl NumericResult {
    fn new(value: f64, tail_estimate: f64, truncation: usize) -> Self {
        debug_assert!(value.is_finite());
        debug_assert!(tail_estimate >= 0.0);
        NumericResult {
            value,
            tail_estimate,
            truncation,
        }
    }
}

// ---------------------------------------------------------------------------
// Compensated accumulation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Default)]
struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    #[inline]
    fn add(&mut self, x: f64) {
        // Knuth TwoSum, branch-free.
        let s = self.sum + x;
        let b = s - self.sum;
        let err = (self.sum - (s - b)) + (x - b);
        self.sum = s;
        self.comp += err;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated running sums; `out[i]` is the sum of `xs[0..=i]`.
fn prefix_sums(xs: &[f64]) -> Vec<f64> {
    let mut acc = Accumulator::default();
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        acc.add(x);
        out.push(acc.value());
    }
    out
}

#[inline]
fn recip_pow(t: usize, s: u32) -> f64 {
    let tf = t as f64;
    let mut p = 1.0f64;
    for _ in 0..s {
        p *= tf;
    }
    1.0 / p
}

/// One layer of a nested sum: `f[t] = t^-s * H[t-1]`, with `H` the prefix
/// array of the layer below (`None` means the innermost layer, `H == 1`).
/// Index 0 is unused and stays 0.
fn scaled_level(s: u32, below_prefix: Option<&[f64]>, n: usize) -> Vec<f64> {
    let mut f = vec![0.0; n + 1];
    match below_prefix {
        None => {
            for (t, slot) in f.iter_mut().enumerate().skip(1) {
                *slot = recip_pow(t, s);
            }
        }
        Some(h) => {
            for (t, slot) in f.iter_mut().enumerate().skip(1) {
                *slot = recip_pow(t, s) * h[t - 1];
            }
        }
    }
    f
}

/// `c[u] = sum over i + j = u, i, j >= 1 of a[i] * b[j]` for `u <= n`.
fn convolve(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    for (u, slot) in c.iter_mut().enumerate().skip(2) {
        let mut acc = Accumulator::default();
        for i in 1..u {
            acc.add(a[i] * b[u - i]);
        }
        *slot = acc.value();
    }
    c
}

fn geometric_tail(v_n: f64, v_half: f64, v_quarter: f64) -> f64 {
    let e2 = (v_n - v_half).abs();
    if e2 == 0.0 {
        return 0.0;
    }
    let e1 = (v_half - v_quarter).abs();
    let rho = e1 / e2;
    let factor = if rho > 1.0 {
        (1.0 / (rho - 1.0)).clamp(1.0, 10.0)
    } else {
        10.0
    };
    e2 * factor
}

fn require_truncation(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Invalid(format!("truncation must be >= 2, got {n}")))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// MZV partial sums
// ---------------------------------------------------------------------------

/// Partial sum of `zeta(a1, ..., ak)` over `N >= n1 > ... > nk >= 1`,
/// computed by `k` sequential prefix-sum passes (cost `O(kN)`).
pub fn mzv_numeric(c: &Composition, n: usize) -> Result<NumericResult> {
    require_truncation(n)?;
    if !c.is_convergent() {
        return Err(Error::Invalid(format!(
            "mzv evaluation requires a convergent composition (first part >= 2), got {c}"
        )));
    }
    let parts = c.parts();
    let mut prefix: Option<Vec<f64>> = None;
    for &a in parts.iter().rev() {
        let f = scaled_level(a, prefix.as_deref(), n);
        prefix = Some(prefix_pad(&f));
    }
    let p = prefix.expect("compositions are nonempty");
    Ok(NumericResult::new(p[n], (p[n] - p[n / 2]).abs(), n))
}

/// Prefix sums aligned so that `out[t]` covers indices `1..=t` (`out[0] = 0`).
fn prefix_pad(f: &[f64]) -> Vec<f64> {
    let mut out = prefix_sums(&f[1..]);
    out.insert(0, 0.0);
    out
}

// ---------------------------------------------------------------------------
// Tree zeta values
// ---------------------------------------------------------------------------

fn tree_series(t: &NatTree, n: usize) -> Vec<f64> {
    let mut children = t.children().iter();
    let below = children.next().map(|first| {
        let mut h = tree_series(first, n);
        for c in children {
            h = convolve(&h, &tree_series(c, n), n);
        }
        h
    });
    match below {
        None => scaled_level(*t.decoration(), None, n),
        Some(h) => {
            let hp = prefix_pad(&h);
            scaled_level(*t.decoration(), Some(&hp), n)
        }
    }
}

/// Truncated tree zeta value: the sum of the series over all assignments
/// whose every vertex-form value is at most `n`, by bottom-up convolution
/// (cost `O(|V| n^2)`). The value over a forest is the product over its
/// trees. The empty forest evaluates to 1.
pub fn tzv_numeric(forest: &NatForest, n: usize) -> Result<NumericResult> {
    require_truncation(n)?;
    crate::reduction::check_reducible(forest)?;
    let mut at_n = 1.0f64;
    let mut at_half = 1.0f64;
    let mut at_quarter = 1.0f64;
    for tree in forest.trees() {
        let p = prefix_pad(&tree_series(tree, n));
        at_n *= p[n];
        at_half *= p[n / 2];
        at_quarter *= p[n / 4];
    }
    Ok(NumericResult::new(
        at_n,
        geometric_tail(at_n, at_half, at_quarter),
        n,
    ))
}

// ---------------------------------------------------------------------------
// Conical zeta values
// ---------------------------------------------------------------------------

/// Truncated conical zeta value. Tree-like cones delegate to the tree
/// convolution through their forest; otherwise, for dimension <= 3, the sum
/// is taken directly over the box `(1..=n)^dim` (and refused above dimension
/// 3, where the box is too expensive).
pub fn czv_numeric(cone: &Cone, n: usize) -> Result<NumericResult> {
    require_truncation(n)?;
    if cone.is_tree_like() {
        return tzv_numeric(&cone.to_forest()?, n);
    }
    let dim = cone.dimension();
    if dim > 3 {
        return Err(Error::Numeric(format!(
            "direct summation refused: dimension {dim} > 3 and the cone is not tree-like"
        )));
    }
    if !cone.is_positive() {
        return Err(Error::Numeric(
            "direct summation requires a nonnegative matrix".into(),
        ));
    }
    if cone
        .matrix()
        .iter()
        .zip(cone.exponents())
        .any(|(row, &s)| s > 0 && row.iter().all(|&a| a == 0))
    {
        return Err(Error::Numeric(
            "a linear form with positive exponent is identically zero".into(),
        ));
    }
    let exponents = cone.exponents();
    let matrix = cone.matrix();
    let mut full = Accumulator::default();
    let mut half = Accumulator::default();
    let mut quarter = Accumulator::default();
    let mut coords = vec![0i64; dim];
    sum_box(
        &mut coords,
        0,
        n,
        &mut |coords| {
            let mut term = 1.0f64;
            for (row, &s) in matrix.iter().zip(exponents) {
                if s == 0 {
                    continue;
                }
                let form: i64 = row.iter().zip(coords).map(|(&a, &x)| a * x).sum();
                term *= recip_pow(form as usize, s);
            }
            term
        },
        &mut full,
        &mut half,
        &mut quarter,
    );
    Ok(NumericResult::new(
        full.value(),
        geometric_tail(full.value(), half.value(), quarter.value()),
        n,
    ))
}

#[allow(clippy::too_many_arguments)]
fn sum_box(
    coords: &mut Vec<i64>,
    depth: usize,
    n: usize,
    term: &mut impl FnMut(&[i64]) -> f64,
    full: &mut Accumulator,
    half: &mut Accumulator,
    quarter: &mut Accumulator,
) {
    if depth == coords.len() {
        let t = term(coords);
        full.add(t);
        if coords.iter().all(|&x| x as usize <= n / 2) {
            half.add(t);
            if coords.iter().all(|&x| x as usize <= n / 4) {
                quarter.add(t);
            }
        }
        return;
    }
    for x in 1..=n as i64 {
        coords[depth] = x;
        sum_box(coords, depth + 1, n, term, full, half, quarter);
    }
}

// ---------------------------------------------------------------------------
// Mordell-Tornheim direct sums
// ---------------------------------------------------------------------------

/// Direct truncated Mordell-Tornheim sum over the box `(1..=n)^r`, permitted
/// for depth <= 3 only.
pub fn mt_numeric(idx: &MtIndex, n: usize) -> Result<NumericResult> {
    require_truncation(n)?;
    let r = idx.depth();
    if r > 3 {
        return Err(Error::Numeric(format!(
            "direct summation refused: depth {r} > 3"
        )));
    }
    let args = idx.args();
    let s = idx.s();
    let mut full = Accumulator::default();
    let mut half = Accumulator::default();
    let mut quarter = Accumulator::default();
    let mut coords = vec![0i64; r];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        args: &[u32],
        s: u32,
        coords: &mut Vec<i64>,
        depth: usize,
        n: usize,
        full: &mut Accumulator,
        half: &mut Accumulator,
        quarter: &mut Accumulator,
    ) {
        if depth == coords.len() {
            let mut term = recip_pow(coords.iter().sum::<i64>() as usize, s);
            for (&a, &x) in args.iter().zip(coords.iter()) {
                term *= recip_pow(x as usize, a);
            }
            full.add(term);
            if coords.iter().all(|&x| x as usize <= n / 2) {
                half.add(term);
                if coords.iter().all(|&x| x as usize <= n / 4) {
                    quarter.add(term);
                }
            }
            return;
        }
        for x in 1..=n as i64 {
            coords[depth] = x;
            rec(args, s, coords, depth + 1, n, full, half, quarter);
        }
    }
    rec(
        args,
        s,
        &mut coords,
        0,
        n,
        &mut full,
        &mut half,
        &mut quarter,
    );
    Ok(NumericResult::new(
        full.value(),
        geometric_tail(full.value(), half.value(), quarter.value()),
        n,
    ))
}

// ---------------------------------------------------------------------------
// Cross-checks
// ---------------------------------------------------------------------------

/// Evaluates a combination as `sum coef * mzv(index)` at truncation `n`; the
/// tail is the coefficient-weighted sum of the per-term tails.
pub fn combination_numeric(m: &MzvCombination, n: usize) -> Result<NumericResult> {
    let mut value = Accumulator::default();
    let mut tail = 0.0f64;
    for (c, coef) in m.iter() {
        let coef = coef
            .to_f64()
            .ok_or_else(|| Error::Numeric(format!("coefficient {coef} overflows f64")))?;
        let r = mzv_numeric(c, n)?;
        value.add(coef * r.value);
        tail += coef.abs() * r.tail_estimate;
    }
    Ok(NumericResult::new(value.value(), tail, n))
}

#[derive(Debug, Clone, Copy)]
pub struct CrossCheckReport {
    pub symbolic: NumericResult,
    pub target: NumericResult,
    pub tolerance: f64,
    pub gap: f64,
    pub budget: f64,
    pub pass: bool,
}

impl std::fmt::Display for CrossCheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "symbolic value: {:.10} (tail {:.3e}, N={})",
            self.symbolic.value, self.symbolic.tail_estimate, self.symbolic.truncation
        )?;
        writeln!(
            f,
            "target value:   {:.10} (tail {:.3e}, N={})",
            self.target.value, self.target.tail_estimate, self.target.truncation
        )?;
        writeln!(f, "gap: {:.3e}  budget: {:.3e}", self.gap, self.budget)?;
        write!(
            f,
            "cross-check: {}",
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

/// Compares a symbolic combination against a numeric target: pass iff
/// `|difference| <= tol + both tail estimates`. The combination is evaluated
/// at [`DEFAULT_MZV_TRUNCATION`].
pub fn cross_check(
    m: &MzvCombination,
    target: &NumericResult,
    tol: f64,
) -> Result<CrossCheckReport> {
    cross_check_with(m, target, tol, DEFAULT_MZV_TRUNCATION)
}

/// [`cross_check`] with an explicit truncation for the MZV side.
pub fn cross_check_with(
    m: &MzvCombination,
    target: &NumericResult,
    tol: f64,
    mzv_truncation: usize,
) -> Result<CrossCheckReport> {
    if tol <= 0.0 {
        return Err(Error::Invalid(format!("tolerance must be > 0, got {tol}")));
    }
    let symbolic = combination_numeric(m, mzv_truncation)?;
    let gap = (symbolic.value - target.value).abs();
    let budget = tol + symbolic.tail_estimate + target.tail_estimate;
    Ok(CrossCheckReport {
        symbolic,
        target: *target,
        tolerance: tol,
        gap,
        budget,
        pass: gap <= budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forests::parse_nat_forest;
    use crate::reduction::{reduce_cone, reduce_forest};
    use num_rational::BigRational;

    fn comp(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn nat(s: &str) -> NatForest {
        parse_nat_forest(s).unwrap()
    }

    const ZETA_2: f64 = 1.6449340668482264; // pi^2 / 6
    const ZETA_3: f64 = 1.2020569031595943;
    const ZETA_4: f64 = 1.0823232337111382; // pi^4 / 90

    #[test]
    fn mzv_fixture_values() {
        // zeta(2): the doubling estimate covers the true remainder.
        let r = mzv_numeric(&comp(&[2]), 100_000).unwrap();
        assert!((r.value - ZETA_2).abs() <= 1.05 * r.tail_estimate);

        // zeta(2,1) = zeta(3); zeta(2,1,1) = zeta(4): frozen absolute bounds
        // measured at N = 1e5 (deficits 1.31e-4 and 8.54e-4).
        let r = mzv_numeric(&comp(&[2, 1]), 100_000).unwrap();
        assert!((r.value - ZETA_3).abs() < 2e-4, "{}", r.value);

        let r = mzv_numeric(&comp(&[2, 1, 1]), 100_000).unwrap();
        assert!((r.value - ZETA_4).abs() < 1.2e-3, "{}", r.value);
    }

    #[test]
    fn mzv_rejections() {
        assert!(mzv_numeric(&comp(&[1, 2]), 100).is_err());
        assert!(mzv_numeric(&comp(&[2]), 1).is_err());
    }

    #[test]
    fn chain_truncations_are_bit_exact() {
        for (forest, composition, n) in [
            ("2", &[2u32][..], 1000),
            ("2(1)", &[2, 1], 1000),
            ("3(2(1))", &[3, 2, 1], 500),
            ("2(1(1(1)))", &[2, 1, 1, 1], 400),
        ] {
            let t = tzv_numeric(&nat(forest), n).unwrap();
            let m = mzv_numeric(&comp(composition), n).unwrap();
            assert_eq!(t.value.to_bits(), m.value.to_bits(), "{forest} at {n}");
        }
    }

    #[test]
    fn tzv_matches_its_reduction() {
        let target = tzv_numeric(&nat("2(1,1)"), 4000).unwrap();
        assert!((target.value - 2.0 * ZETA_4).abs() < 0.1);
        let symbolic = reduce_forest(&nat("2(1,1)")).unwrap();
        let report = cross_check(&symbolic, &target, 1e-4).unwrap();
        assert!(report.pass, "{report}");

        // Off by one unit of zeta(2,1,1): must fail.
        let wrong = symbolic.scale(&BigRational::new(3.into(), 2.into()));
        let report = cross_check(&wrong, &target, 1e-4).unwrap();
        assert!(!report.pass, "{report}");
    }

    #[test]
    fn tzv_monotone_in_truncation() {
        let f = nat("2(1,1)");
        let mut last = 0.0;
        for n in [100, 200, 400, 800] {
            let v = tzv_numeric(&f, n).unwrap().value;
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn doubling_increment_within_reported_tail() {
        for s in ["2(1,1)", "3(1,1)", "2(1);2", "2(2(1,1))"] {
            let f = nat(s);
            for n in [500usize, 1000] {
                let at_2n = tzv_numeric(&f, 2 * n).unwrap();
                let at_n = tzv_numeric(&f, n).unwrap();
                assert!(
                    (at_2n.value - at_n.value).abs() <= at_2n.tail_estimate,
                    "{s} at {n}"
                );
            }
        }
    }

    #[test]
    fn tzv_rejections() {
        assert!(tzv_numeric(&nat("1(1)"), 100).is_err());
        assert!(tzv_numeric(&nat("2(0)"), 100).is_err());
        let empty = tzv_numeric(&NatForest::empty(), 100).unwrap();
        assert_eq!(empty.value, 1.0);
    }

    #[test]
    fn czv_delegates_for_tree_like_cones() {
        let c1 = Cone::new(
            vec![vec![1, 1, 1], vec![0, 1, 0], vec![0, 0, 1]],
            vec![2, 1, 1],
        )
        .unwrap();
        let r = czv_numeric(&c1, 4000).unwrap();
        assert!((r.value - 2.0 * ZETA_4).abs() < 0.1);
        let report = cross_check(&reduce_cone(&c1, false).unwrap(), &r, 1e-4).unwrap();
        assert!(report.pass, "{report}");

        let unit = Cone::new(vec![vec![1]], vec![2]).unwrap();
        let a = czv_numeric(&unit, 2000).unwrap();
        let b = mzv_numeric(&comp(&[2]), 2000).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn czv_direct_box_matches_aligned_series() {
        // Classical double zeta written with permuted columns; not tree-like
        // strictly, so the box sum runs. Box and nested truncations differ,
        // hence approximate agreement only (measured 3.5e-4 at N = 2000).
        let skew = Cone::new(vec![vec![1, 1], vec![1, 0]], vec![2, 1]).unwrap();
        let direct = czv_numeric(&skew, 2000).unwrap();
        let nested = mzv_numeric(&comp(&[2, 1]), 2000).unwrap();
        assert!((direct.value - nested.value).abs() < 1e-3);
    }

    #[test]
    fn czv_refusals() {
        // 4-dimensional diamond: not tree-like, dimension > 3.
        let diamond = Cone::new(
            vec![
                vec![1, 1, 1, 1],
                vec![0, 1, 0, 1],
                vec![0, 0, 1, 1],
                vec![0, 0, 0, 1],
            ],
            vec![2, 1, 1, 1],
        )
        .unwrap();
        assert!(matches!(czv_numeric(&diamond, 100), Err(Error::Numeric(_))));

        let negative = Cone::new(vec![vec![1, -1], vec![1, 0]], vec![2, 1]).unwrap();
        assert!(matches!(
            czv_numeric(&negative, 100),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn mt_direct_sum_fixture() {
        // MT(1,1|1) at N = 3000: frozen from the oracle; true value 2*zeta(3).
        let idx = MtIndex::new(vec![1, 1], 1).unwrap();
        let r = mt_numeric(&idx, 3000).unwrap();
        assert!((r.value - 2.3981877).abs() < 1e-5, "{}", r.value);
        assert!((2.0 * ZETA_3 - r.value).abs() <= r.tail_estimate + 1e-3);

        let deep = MtIndex::new(vec![1, 1, 1, 1], 1).unwrap();
        assert!(matches!(mt_numeric(&deep, 50), Err(Error::Numeric(_))));
    }

    #[test]
    fn mt_triple_direct_sum_cross_checks() {
        // Depth-3 instance of the direct-sum agreement: MT(1,1,1|1) =
        // 6 zeta(2,1,1).
        let idx = MtIndex::new(vec![1, 1, 1], 1).unwrap();
        let direct = mt_numeric(&idx, 200).unwrap();
        let symbolic = crate::mordell_tornheim::mt_reduce(&idx).unwrap();
        let report = cross_check(&symbolic, &direct, 1e-4).unwrap();
        assert!(report.pass, "{report}");
    }

    #[test]
    fn cross_check_examples() {
        let c2 = Cone::new(
            vec![
                vec![1, 1, 1, 1, 1],
                vec![0, 1, 0, 0, 1],
                vec![0, 0, 1, 0, 0],
                vec![0, 0, 0, 1, 0],
                vec![0, 0, 0, 0, 1],
            ],
            vec![4, 2, 1, 1, 1],
        )
        .unwrap();
        let symbolic = reduce_cone(&c2, false).unwrap();
        let target = tzv_numeric(&c2.to_forest().unwrap(), 4000).unwrap();
        let report = cross_check(&symbolic, &target, 1e-3).unwrap();
        assert!(report.pass, "{report}");

        assert!(cross_check(&symbolic, &target, 0.0).is_err());
    }
}
