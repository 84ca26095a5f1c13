use std::fmt;

/// A variable of the ambient polynomial ring over the integers.
///
/// The total order is fixed: all `xi` variables come first, then the
/// coefficient-extraction dummies `t`, then the commuting variables `x`;
/// within a tag the order is lexicographic on the indices. The derived
/// `Ord` below realizes exactly that (variant order, then field order).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarId {
    /// Entry (i, j) of the k-th generic matrix; all indices 1-based.
    Xi { k: u32, i: u32, j: u32 },
    /// Dummy variable used when reading off determinant coefficients.
    T { s: u32 },
    /// Commuting variable x(i, j); symmetric-function code uses row i = 1.
    X { i: u32, j: u32 },
}

impl VarId {
    pub fn xi(k: u32, i: u32, j: u32) -> Self {
        VarId::Xi { k, i, j }
    }

    pub fn t(s: u32) -> Self {
        VarId::T { s }
    }

    pub fn x(i: u32, j: u32) -> Self {
        VarId::X { i, j }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Xi { k, i, j } => write!(f, "xi({k},{i},{j})"),
            VarId::T { s } => write!(f, "t({s})"),
            VarId::X { i, j } => write!(f, "x({i},{j})"),
        }
    }
}
