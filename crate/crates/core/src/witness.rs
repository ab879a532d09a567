use crate::ring::Ring;

/// Outcome of comparing two exactly computed sides of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Equal,
    Counterexample { lhs: String, rhs: String },
}

impl Witness {
    pub fn compare<R: Ring>(ring: &R, lhs: &R::Elem, rhs: &R::Elem) -> Witness {
        if ring.equal(lhs, rhs) {
            Witness::Equal
        } else {
            Witness::Counterexample { lhs: ring.format(lhs), rhs: ring.format(rhs) }
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Witness::Equal)
    }

    /// First counterexample of the two, or `Equal`.
    pub fn and(self, other: Witness) -> Witness {
        if self.holds() {
            other
        } else {
            self
        }
    }
}
