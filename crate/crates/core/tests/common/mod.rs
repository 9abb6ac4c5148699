//! Shared fixtures and brute-force oracles for the integration suites.
// Each test binary compiles its own copy; not every binary uses every fixture.
#![allow(dead_code)]

use bddqsp::Diagram;

/// Bits of `k` as `x_1..x_n`, most significant bit first.
pub fn bits_of(k: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect()
}

/// Brute-force truth table over all `2^n` inputs.
pub fn truth_table(d: &Diagram) -> Vec<bool> {
    let n = d.var_count();
    (0..1u64 << n).map(|k| d.evaluate(&bits_of(k, n))).collect()
}

pub fn satisfying_count(d: &Diagram) -> u64 {
    truth_table(d).iter().filter(|&&v| v).count() as u64
}

/// Four-variable free diagram reading variables in path-dependent orders;
/// the function is `x1 x3 x4 + !x1 x2 x4 + !x1 !x2 !x3 + !x1 x2 !x3 !x4`
/// with seven satisfying inputs.
pub fn four_var_fbdd() -> Diagram {
    let mut b = Diagram::builder(4, false);
    b.terminal0(0)
        .terminal1(1)
        .node_unweighted(2, 1, 5, 3)
        .node_unweighted(3, 3, 0, 4)
        .node_unweighted(4, 4, 0, 1)
        .node_unweighted(5, 2, 6, 7)
        .node_unweighted(6, 3, 1, 0)
        .node_unweighted(7, 4, 6, 1)
        .root(2);
    b.build().unwrap()
}

/// Three-variable diagram for `!x1 !x2 x3 + x1 !x2 x3 + x1 x2 !x3` before
/// contraction: node 5 is redundant (both edges into the 0-terminal) and
/// node 6 duplicates node 4.
pub fn three_var_unreduced() -> Diagram {
    let mut b = Diagram::builder(3, false);
    b.terminal0(0)
        .terminal1(1)
        .node_unweighted(2, 1, 3, 7)
        .node_unweighted(3, 2, 4, 5)
        .node_unweighted(4, 3, 0, 1)
        .node_unweighted(5, 3, 0, 0)
        .node_unweighted(6, 3, 0, 1)
        .node_unweighted(7, 2, 6, 8)
        .node_unweighted(8, 3, 1, 0)
        .root(2);
    b.build().unwrap()
}
