use std::fmt;
use std::hash::Hash;

use crate::zmodlin::{howell_form, RMatrix};

use super::GroupError;

/// A multiplicatively written group element.
pub trait GroupElement: Clone + Eq + Hash + fmt::Debug + Send + Sync {
    /// `self · other`
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
}

/// Permutation of `{0, …, d−1}`; composition is function composition, so
/// `(a·b)(i) = a(b(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let i = i as usize;
            if i >= images.len() || seen[i] {
                return Err(GroupError::InvalidElement(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Product of cycles, applied right to left.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut acc = Perm::identity(degree);
        for cycle in cycles.iter().rev() {
            let mut seen = std::collections::HashSet::new();
            let mut p: Vec<u32> = (0..degree as u32).collect();
            for (k, &a) in cycle.iter().enumerate() {
                if a >= degree || !seen.insert(a) {
                    return Err(GroupError::InvalidElement(format!(
                        "bad cycle {cycle:?} for degree {degree}"
                    )));
                }
                p[a] = cycle[(k + 1) % cycle.len()] as u32;
            }
            acc = Perm(p).compose(&acc);
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.apply(cur);
            }
            out.push(cycle);
        }
        out
    }
}

impl GroupElement for Perm {
    fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.0.len(), other.0.len(), "permutation degrees differ");
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    fn inverse(&self) -> Self {
        let mut r = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            r[j as usize] = i as u32;
        }
        Perm(r)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A permutation or an invertible square matrix over `Z/n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum GroupElem {
    Perm(Perm),
    Matrix(RMatrix),
}

impl GroupElem {
    /// Wraps a square matrix after checking that it is invertible.
    pub fn matrix(m: RMatrix) -> Result<Self, GroupError> {
        if m.rows() != m.cols() {
            return Err(GroupError::InvalidElement(format!("{}x{} matrix is not square", m.rows(), m.cols())));
        }
        if matrix_inverse(&m).is_none() {
            return Err(GroupError::NotInvertible(m.to_string()));
        }
        Ok(GroupElem::Matrix(m))
    }

    pub fn identity_like(&self) -> Self {
        match self {
            GroupElem::Perm(p) => GroupElem::Perm(Perm::identity(p.degree())),
            GroupElem::Matrix(m) => GroupElem::Matrix(RMatrix::identity(m.ring(), m.rows())),
        }
    }

    /// Two elements can be multiplied together.
    pub fn same_kind(&self, other: &Self) -> bool {
        match (self, other) {
            (GroupElem::Perm(a), GroupElem::Perm(b)) => a.degree() == b.degree(),
            (GroupElem::Matrix(a), GroupElem::Matrix(b)) => a.ring() == b.ring() && a.rows() == b.rows(),
            _ => false,
        }
    }

    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            GroupElem::Perm(p) => Some(p),
            GroupElem::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&RMatrix> {
        match self {
            GroupElem::Matrix(m) => Some(m),
            GroupElem::Perm(_) => None,
        }
    }
}

impl From<Perm> for GroupElem {
    fn from(p: Perm) -> Self {
        GroupElem::Perm(p)
    }
}

/// Inverse of a square matrix over `Z/n`: when the Howell form is the
/// identity, the transform is the inverse.
pub fn matrix_inverse(m: &RMatrix) -> Option<RMatrix> {
    let h = howell_form(m);
    if h.matrix() == &RMatrix::identity(m.ring(), m.rows()) {
        Some(h.transform().clone())
    } else {
        None
    }
}

impl GroupElement for GroupElem {
    fn compose(&self, other: &Self) -> Self {
        match (self, other) {
            (GroupElem::Perm(a), GroupElem::Perm(b)) => GroupElem::Perm(a.compose(b)),
            (GroupElem::Matrix(a), GroupElem::Matrix(b)) => {
                GroupElem::Matrix(a.mul(b).expect("matrix elements of one group share ring and size"))
            }
            _ => panic!("cannot compose a permutation with a matrix"),
        }
    }

    fn inverse(&self) -> Self {
        match self {
            GroupElem::Perm(p) => GroupElem::Perm(p.inverse()),
            GroupElem::Matrix(m) => {
                GroupElem::Matrix(matrix_inverse(m).expect("matrix group elements are invertible"))
            }
        }
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElem::Perm(p) => write!(f, "{p}"),
            GroupElem::Matrix(m) => write!(f, "{m}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zmodlin::ResidueRing;

    #[test]
    fn cycle_notation_maps_forward() {
        let p = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(p.images(), &[1, 2, 0]);
        assert_eq!(p.to_string(), "(0 1 2)");
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        // a·b sends 1 -> 2 -> 2 and 2 -> 1 -> 0
        let ab = a.compose(&b);
        assert_eq!(ab.apply(1), 2);
        assert_eq!(ab.apply(2), 0);
        assert_eq!(ab.compose(&ab.inverse()), Perm::identity(3));
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_cycles(3, &[vec![0, 3]]).is_err());
    }

    #[test]
    fn singular_matrix_rejected() {
        let f3 = ResidueRing::new(3).unwrap();
        let m = RMatrix::from_rows(f3, &[[1, 1], [1, 1]]).unwrap();
        assert!(matches!(GroupElem::matrix(m), Err(GroupError::NotInvertible(_))));
        let r = RMatrix::from_rows(f3, &[[0, -1], [1, 0]]).unwrap();
        let g = GroupElem::matrix(r).unwrap();
        assert_eq!(g.compose(&g.inverse()), g.identity_like());
    }
}
