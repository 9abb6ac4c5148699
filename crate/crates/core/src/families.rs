//! Constructive diagram families: elementary symmetric functions, a
//! three-branch function with small free diagrams but no small ordered one,
//! and the binomially-weighted ordered diagram with its amplitude
//! amplification ratio analysis.

use crate::diagram::{Diagram, DiagramBuilder};
use num_complex::Complex64;

/// Parameters of the elementary symmetric function `S_n^i`: exactly `i` of
/// `n` variables equal to one.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SymmetricSpec {
    pub n: usize,
    pub i: usize,
}

/// Parameters of the binomially-weighted state family over `n` qubits with
/// decay `delta`: amplitudes proportional to
/// `delta^{w_H(x)} / C(n, w_H(x))`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct DeltaFamilySpec {
    pub n: usize,
    pub delta: f64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("target count {i} outside 0..={n}")]
    BadSymmetricSpec { n: usize, i: usize },
    #[error("variable count {0} unsupported (need 1..=64 for the diagram)")]
    BadVarCount(usize),
    #[error("delta must be a finite value in [0, 1]")]
    BadDelta,
}

/// Ordered diagram for `S_n^i` under the natural variable order: a counting
/// grid whose cell `(j, c)` means "read `j` variables, `c` of them one".
/// Cells that can no longer reach the target count are skipped, so the
/// result is reduced by construction.
pub fn symmetric_obdd(spec: SymmetricSpec) -> Result<Diagram, FamilyError> {
    let SymmetricSpec { n, i } = spec;
    if !(1..=64).contains(&n) {
        return Err(FamilyError::BadVarCount(n));
    }
    if i > n {
        return Err(FamilyError::BadSymmetricSpec { n, i });
    }
    let lo = |j: usize| i.saturating_sub(n - j);
    let hi = |j: usize| j.min(i);

    let mut b = Diagram::builder(n, false);
    b.terminal0(0).terminal1(1);
    let mut next_id = 2u32;
    // id grid per row; rows are small so a Vec of Vecs is fine.
    let mut ids: Vec<Vec<u32>> = Vec::with_capacity(n);
    for j in 0..n {
        let row: Vec<u32> = (lo(j)..=hi(j))
            .map(|_| {
                let id = next_id;
                next_id += 1;
                id
            })
            .collect();
        ids.push(row);
    }
    let cell = |ids: &Vec<Vec<u32>>, j: usize, c: usize| -> u32 {
        if j == n {
            return if c == i { 1 } else { 0 };
        }
        if c < lo(j) || c > hi(j) {
            return 0;
        }
        ids[j][c - lo(j)]
    };
    for j in 0..n {
        for c in lo(j)..=hi(j) {
            let h0 = cell(&ids, j + 1, c);
            let h1 = cell(&ids, j + 1, c + 1);
            b.node_unweighted(cell(&ids, j, c), j + 1, h0, h1);
        }
    }
    b.root(cell(&ids, 0, 0));
    Ok(b.build().expect("grid construction is well-formed"))
}

/// Direct formula evaluation of the three-branch function `h` on `3n + 2`
/// bits ordered `(v, w, x_1.., y_1.., z_1..)`: branch `f^1` fires on
/// `!v !w`, reads the weight `k` of `(y, z)`, and tests `x_{k+1}` when
/// `k < n` or `x_{k-n}` when `k > n`; the other branches rotate the roles.
pub fn h_formula(n: usize, bits: &[bool]) -> bool {
    assert_eq!(bits.len(), 3 * n + 2);
    let v = bits[0];
    let w = bits[1];
    let x = &bits[2..2 + n];
    let y = &bits[2 + n..2 + 2 * n];
    let z = &bits[2 + 2 * n..];
    let f1 = |a: &[bool], b: &[bool], c: &[bool]| -> bool {
        let k = b.iter().chain(c).filter(|&&bit| bit).count();
        if k < n {
            a[k]
        } else if k > n {
            a[k - n - 1]
        } else {
            false
        }
    };
    (!v && !w && f1(x, y, z)) || (!v && w && f1(y, z, x)) || (v && !w && f1(z, x, y))
}

/// Free diagram for the three-branch function `h` over `3n + 2` variables.
/// Each branch counts the weight of its own 2n-variable block through a
/// grid and then tests one selector variable, so no path reads a variable
/// twice even though the branches read the blocks in rotated orders. The
/// grids are shared within a branch but not across branches. The raw grid
/// has `3(2n^2 + 2n) + 3` internal nodes; a contraction pass merges the
/// grid corners whose selector targets wrap onto each other, so the result
/// stays at or below that bound.
pub fn h_family_fbdd(n: usize) -> Result<Diagram, FamilyError> {
    if n < 1 || 3 * n + 2 > 64 {
        return Err(FamilyError::BadVarCount(n));
    }
    let nvars = 3 * n + 2;
    let x_var = |i: usize| 2 + i; // i in 1..=n
    let y_var = |i: usize| 2 + n + i;
    let z_var = |i: usize| 2 + 2 * n + i;

    let mut b = Diagram::builder(nvars, false);
    b.terminal0(0).terminal1(1);
    let mut next_id = 2u32;

    // One branch: count vars (length 2n) feed the grid, selector vars
    // (length n) are tested at the bottom. Returns the branch root id.
    fn branch(
        b: &mut DiagramBuilder,
        next_id: &mut u32,
        n: usize,
        count: &[usize],
        select: &[usize],
    ) -> u32 {
        debug_assert_eq!(count.len(), 2 * n);
        debug_assert_eq!(select.len(), n);
        let mut alloc = || {
            let id = *next_id;
            *next_id += 1;
            id
        };
        let sel_ids: Vec<u32> = select
            .iter()
            .map(|&var| {
                let id = alloc();
                b.node_unweighted(id, var, 0, 1);
                id
            })
            .collect();
        // Weight k of the count block picks the selector (or rejects at n).
        let final_node = |k: usize| -> u32 {
            use std::cmp::Ordering::*;
            match k.cmp(&n) {
                Less => sel_ids[k],
                Equal => 0,
                Greater => sel_ids[k - n - 1],
            }
        };
        let mut below: Vec<u32> = (0..=2 * n).map(final_node).collect();
        for j in (0..2 * n).rev() {
            let mut row = Vec::with_capacity(j + 1);
            for c in 0..=j {
                let id = alloc();
                b.node_unweighted(id, count[j], below[c], below[c + 1]);
                row.push(id);
            }
            below = row;
        }
        below[0]
    }

    let xs: Vec<usize> = (1..=n).map(x_var).collect();
    let ys: Vec<usize> = (1..=n).map(y_var).collect();
    let zs: Vec<usize> = (1..=n).map(z_var).collect();

    let r1 = branch(&mut b, &mut next_id, n, &[ys.clone(), zs.clone()].concat(), &xs);
    let r2 = branch(&mut b, &mut next_id, n, &[zs.clone(), xs.clone()].concat(), &ys);
    let r3 = branch(&mut b, &mut next_id, n, &[xs, ys].concat(), &zs);

    let wa = next_id;
    b.node_unweighted(wa, 2, r1, r2);
    let wb = next_id + 1;
    b.node_unweighted(wb, 2, r3, 0);
    let root = next_id + 2;
    b.node_unweighted(root, 1, wa, wb);
    b.root(root);
    let raw = b.build().expect("branch construction is well-formed");
    Ok(raw.reduce().expect("construction is acyclic"))
}

/// Binomial coefficient as f64 (exact for the sizes used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// Weighted ordered diagram over `n` variables describing the state with
/// amplitudes proportional to `delta^{w_H(x)} / C(n, w_H(x))`.
///
/// Layer `i` holds `i` nodes labeled `x_i`; node `j` of layer `i` keeps its
/// position on the 1-edge and shifts down on the 0-edge, so every path into
/// a node carries the same count of 1-edges. Bottom-layer edges into the
/// 1-terminal carry the closed-form amplitude for their total 1-count, and
/// every interior edge carries the root of the summed squares of its head's
/// outgoing weights. Internal node count is exactly `n(n+1)/2` and there is
/// no 0-terminal.
///
/// `delta` in `(0, 1]` keeps every node weight usable; `delta = 0` is
/// constructible but degenerates all nodes whose outgoing amplitudes both
/// vanish (every layer-`n` node except the last once `n >= 2`).
pub fn binomial_wobdd(spec: DeltaFamilySpec) -> Result<Diagram, FamilyError> {
    let DeltaFamilySpec { n, delta } = spec;
    if !(1..=64).contains(&n) {
        return Err(FamilyError::BadVarCount(n));
    }
    if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
        return Err(FamilyError::BadDelta);
    }
    let alpha = |w: usize| delta.powi(w as i32) / binomial(n, w);

    // id of node j (1-based) in layer i (1-based): terminals use 0/1 slots,
    // but there is no 0-terminal here.
    let id = |i: usize, j: usize| -> u32 { (1 + (i - 1) * i / 2 + j) as u32 };

    let mut b = Diagram::builder(n, true);
    b.terminal1(1);
    // sum of squared outgoing weights per node, built bottom-up.
    let mut power = vec![vec![0.0f64; n + 2]; n + 1];
    for i in (1..=n).rev() {
        for j in 1..=i {
            let ones_so_far = i - j; // every path into (i, j) took i - j one-edges
            let (h1, w1, h0, w0);
            if i == n {
                h1 = 1u32;
                w1 = alpha(ones_so_far + 1);
                h0 = 1u32;
                w0 = alpha(ones_so_far);
            } else {
                h1 = id(i + 1, j);
                w1 = power[i + 1][j].sqrt();
                h0 = id(i + 1, j + 1);
                w0 = power[i + 1][j + 1].sqrt();
            }
            power[i][j] = w0 * w0 + w1 * w1;
            b.node(
                id(i, j),
                i,
                (h0, Complex64::new(w0, 0.0)),
                (h1, Complex64::new(w1, 0.0)),
            );
        }
    }
    b.root(id(1, 1));
    Ok(b.build().expect("triangle construction is well-formed"))
}

/// Both routes to the nested-amplitude-amplification cost of preparing the
/// binomial family by a black-box method: `direct_ratio` evaluates
/// `sqrt(N) * |alpha|_1 / |Abar|_2` from the literal vectors, `closed_form`
/// evaluates the final closed expression
/// `sqrt((1 - delta^{n+1}) / (1 - delta)) * (2 / (1 + delta))^{n/2}`.
/// The two agree at `delta = 0` and share the exponential base; their exact
/// relation is reported rather than assumed (see `relative_difference`).
#[derive(Clone, Debug)]
pub struct RatioBreakdown {
    /// `Abar_j = sqrt(C(n, j) * delta^j)` for `j` in `0..=n`.
    pub abar: Vec<f64>,
    /// `alpha_i = delta^{w_H(i)} / C(n, w_H(i))` for all `2^n` indices.
    pub alpha: Vec<f64>,
    pub alpha_l1: f64,
    pub abar_l2: f64,
    pub direct_ratio: f64,
    pub closed_form: f64,
    /// `|direct - closed| / max(direct, closed)`.
    pub relative_difference: f64,
}

pub fn amplification_ratio(spec: DeltaFamilySpec) -> Result<RatioBreakdown, FamilyError> {
    let DeltaFamilySpec { n, delta } = spec;
    if !(1..=30).contains(&n) {
        return Err(FamilyError::BadVarCount(n));
    }
    if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
        return Err(FamilyError::BadDelta);
    }
    let abar: Vec<f64> = (0..=n)
        .map(|j| (binomial(n, j) * delta.powi(j as i32)).sqrt())
        .collect();
    let alpha: Vec<f64> = (0..1usize << n)
        .map(|i| {
            let w = i.count_ones() as usize;
            delta.powi(w as i32) / binomial(n, w)
        })
        .collect();
    let alpha_l1: f64 = alpha.iter().sum();
    let abar_l2: f64 = abar.iter().map(|a| a * a).sum::<f64>().sqrt();
    let direct_ratio = ((1u64 << n) as f64).sqrt() * alpha_l1 / abar_l2;
    // Geometric factor as the explicit (n+1)-term sum so delta = 1 needs no
    // special casing.
    let geometric: f64 = (0..=n).map(|j| delta.powi(j as i32)).sum();
    let closed_form = geometric.sqrt() * (2.0 / (1.0 + delta)).powf(n as f64 / 2.0);
    let relative_difference =
        (direct_ratio - closed_form).abs() / direct_ratio.max(closed_form).max(f64::MIN_POSITIVE);
    Ok(RatioBreakdown {
        abar,
        alpha,
        alpha_l1,
        abar_l2,
        direct_ratio,
        closed_form,
        relative_difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::test_support::truth_table;
    use crate::weighting::model_count;

    #[test]
    fn symmetric_zero_target_selects_the_all_zero_input() {
        let d = symmetric_obdd(SymmetricSpec { n: 2, i: 0 }).unwrap();
        let tt = truth_table(&d);
        assert_eq!(tt, vec![true, false, false, false]);
        assert!(d.validate().is_valid());
    }

    #[test]
    fn symmetric_counts_match_binomials() {
        let d = symmetric_obdd(SymmetricSpec { n: 4, i: 2 }).unwrap();
        assert_eq!(model_count(&d).unwrap(), 6);
        for i in 0..=5 {
            let d = symmetric_obdd(SymmetricSpec { n: 5, i }).unwrap();
            assert_eq!(model_count(&d).unwrap() as f64, binomial(5, i));
        }
    }

    #[test]
    fn symmetric_is_ordered_under_the_natural_order() {
        let d = symmetric_obdd(SymmetricSpec { n: 5, i: 2 }).unwrap();
        let natural: Vec<usize> = (0..5).collect();
        assert!(d.is_obdd_under(&natural));
        assert!(d.validate().is_valid());
    }

    #[test]
    fn symmetric_evaluates_the_hamming_weight_predicate() {
        for (n, i) in [(6, 0), (6, 3), (6, 6), (7, 2), (10, 4)] {
            let d = symmetric_obdd(SymmetricSpec { n, i }).unwrap();
            for k in 0..1usize << n {
                let bits: Vec<bool> = (0..n).map(|b| k >> (n - 1 - b) & 1 == 1).collect();
                assert_eq!(d.evaluate(&bits), k.count_ones() as usize == i);
            }
        }
    }

    #[test]
    fn h_family_matches_the_formula_exhaustively() {
        for n in 1..=3 {
            let d = h_family_fbdd(n).unwrap();
            let nv = 3 * n + 2;
            for k in 0..1usize << nv {
                let bits: Vec<bool> = (0..nv).map(|b| k >> (nv - 1 - b) & 1 == 1).collect();
                assert_eq!(d.evaluate(&bits), h_formula(n, &bits), "n={n} k={k:b}");
            }
        }
    }

    #[test]
    fn h_family_is_free_and_meets_its_node_bound() {
        for n in 1..=8 {
            let d = h_family_fbdd(n).unwrap();
            let report = d.validate();
            assert!(report.is_valid(), "n={n}: {report}");
            assert!(d.internal_count() <= 3 * (2 * n * n + 2 * n) + 3);
        }
    }

    #[test]
    fn h_family_model_count_matches_exhaustive_evaluation() {
        let d = h_family_fbdd(2).unwrap();
        let expected = truth_table(&d).iter().filter(|&&v| v).count() as u64;
        assert_eq!(model_count(&d).unwrap(), expected);
        assert!(expected > 0);
    }

    #[test]
    fn h_rejects_both_selector_bits_set() {
        let n = 2;
        let d = h_family_fbdd(n).unwrap();
        let nv = 3 * n + 2;
        for k in 0..1usize << (nv - 2) {
            let mut bits = vec![true, true];
            bits.extend((0..nv - 2).map(|b| k >> (nv - 3 - b) & 1 == 1));
            assert!(!d.evaluate(&bits));
        }
    }

    #[test]
    fn binomial_triangle_shape_and_amplitudes() {
        let d = binomial_wobdd(DeltaFamilySpec { n: 2, delta: 1.0 }).unwrap();
        assert_eq!(d.internal_count(), 3);
        assert!(d.terminal0().is_none());
        let norm = 2.5f64.sqrt();
        let expect = [1.0, 0.5, 0.5, 1.0];
        for (k, &e) in expect.iter().enumerate() {
            let bits = [k >> 1 & 1 == 1, k & 1 == 1];
            let amp = d.amplitude(&bits).unwrap();
            assert!((amp.re - e / norm).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn binomial_interior_weight_follows_the_sum_of_squares_rule() {
        let delta = 0.3f64;
        let d = binomial_wobdd(DeltaFamilySpec { n: 4, delta }).unwrap();
        // Node (4, 2) has outgoing weights delta^2/6 (0-edge) and delta^3/4
        // (1-edge); both of its in-edges carry the root of the summed
        // squares.
        let target = 1 + 3 * 4 / 2 + 2; // id(4, 2)
        let expected = (delta.powi(4) / 36.0 + delta.powi(6) / 16.0).sqrt();
        let from_15_one_edge = d.edge(crate::NodeId(1 + 2 * 3 / 2 + 2), true).unwrap();
        assert_eq!(from_15_one_edge.head, crate::NodeId(target as u32));
        assert!((from_15_one_edge.weight.re - expected).abs() < 1e-15);
    }

    #[test]
    fn binomial_single_variable_normalizes_directly() {
        for delta in [0.0, 0.5, 1.0] {
            let d = binomial_wobdd(DeltaFamilySpec { n: 1, delta }).unwrap();
            let norm = (1.0 + delta * delta).sqrt();
            let a0 = d.amplitude(&[false]).unwrap().re;
            let a1 = d.amplitude(&[true]).unwrap().re;
            assert!((a0 - 1.0 / norm).abs() < 1e-12);
            assert!((a1 - delta / norm).abs() < 1e-12);
        }
    }

    #[test]
    fn binomial_amplitudes_depend_only_on_hamming_weight() {
        for n in [5, 10] {
            let d = binomial_wobdd(DeltaFamilySpec { n, delta: 0.4 }).unwrap();
            assert_eq!(d.internal_count(), n * (n + 1) / 2);
            let mut by_weight: Vec<Option<f64>> = vec![None; n + 1];
            for k in 0..1usize << n {
                let bits: Vec<bool> = (0..n).map(|b| k >> (n - 1 - b) & 1 == 1).collect();
                let amp = d.amplitude(&bits).unwrap().re;
                let w = k.count_ones() as usize;
                match by_weight[w] {
                    None => by_weight[w] = Some(amp),
                    Some(prev) => assert!((prev - amp).abs() < 1e-13),
                }
            }
        }
    }

    #[test]
    fn ratio_routes_agree_at_delta_zero() {
        for n in 1..=12 {
            let r = amplification_ratio(DeltaFamilySpec { n, delta: 0.0 }).unwrap();
            let expect = 2f64.powf(n as f64 / 2.0);
            assert!((r.direct_ratio - expect).abs() < 1e-12 * expect);
            assert!((r.closed_form - expect).abs() < 1e-12 * expect);
        }
    }

    #[test]
    fn direct_ratio_matches_its_analytic_reduction() {
        // |alpha|_1 telescopes to the geometric sum and |Abar|_2^2 to
        // (1 + delta)^n; the direct ratio must equal the reduction exactly.
        for n in [2, 5, 9] {
            for delta in [0.25, 0.5, 0.9, 1.0] {
                let r = amplification_ratio(DeltaFamilySpec { n, delta }).unwrap();
                let geometric: f64 = (0..=n).map(|j| delta.powi(j as i32)).sum();
                assert!((r.alpha_l1 - geometric).abs() < 1e-10 * geometric);
                let expect = (1.0 + delta).powf(n as f64 / 2.0);
                assert!((r.abar_l2 - expect).abs() < 1e-10 * expect);
                let reduced =
                    2f64.powf(n as f64 / 2.0) * geometric / (1.0 + delta).powf(n as f64 / 2.0);
                assert!((r.direct_ratio - reduced).abs() < 1e-12 * reduced);
            }
        }
    }

    #[test]
    fn ratio_growth_is_at_least_the_exponential_base() {
        for delta in [0.25, 0.5, 0.9] {
            let mut prev = 0.0;
            for n in 2..=12 {
                let r = amplification_ratio(DeltaFamilySpec { n, delta }).unwrap();
                let normalized = r.direct_ratio / (2.0 / (1.0 + delta)).powf(n as f64 / 2.0);
                assert!(normalized >= prev - 1e-12, "monotone in n");
                prev = normalized;
            }
        }
    }
}
