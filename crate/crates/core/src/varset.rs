//! Small bitset over variable indices `1..=64`.

/// Set of variable indices. Index `i` lives at bit `i - 1`, so diagrams are
/// capped at 64 variables (enforced at construction).
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
pub(crate) struct VarSet(u64);

pub(crate) const MAX_VARS: usize = 64;

impl VarSet {
    pub fn empty() -> Self {
        VarSet(0)
    }

    /// All indices `1..=n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VARS);
        if n == MAX_VARS {
            VarSet(u64::MAX)
        } else {
            VarSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(var: usize) -> Self {
        debug_assert!((1..=MAX_VARS).contains(&var));
        VarSet(1u64 << (var - 1))
    }

    pub fn contains(self, var: usize) -> bool {
        (1..=MAX_VARS).contains(&var) && self.0 & (1u64 << (var - 1)) != 0
    }

    pub fn union(self, other: Self) -> Self {
        VarSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        VarSet(self.0 & other.0)
    }

    /// Elements of `self` not in `other`.
    pub fn minus(self, other: Self) -> Self {
        VarSet(self.0 & !other.0)
    }

    pub fn remove(self, var: usize) -> Self {
        self.minus(VarSet::singleton(var))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=MAX_VARS).filter(move |&v| self.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let a = VarSet::singleton(1).union(VarSet::singleton(5));
        let b = VarSet::full(3);
        assert!(a.contains(1) && a.contains(5) && !a.contains(2));
        assert_eq!(a.intersect(b), VarSet::singleton(1));
        assert_eq!(a.union(b).len(), 4);
        assert_eq!(b.minus(a).iter().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(VarSet::full(64).len(), 64);
        assert_eq!(VarSet::empty().len(), 0);
    }
}
