use rayon::prelude::*;

use crate::expr::{AssumptionError, AssumptionSet, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    Co,
    Contra,
}

/// Index symmetry of the leading slots. Trailing slots are unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    None,
    /// Symmetric in slots 1 and 2.
    Symmetric,
    /// Antisymmetric in slots 1 and 2 only.
    AntiFirstPair,
    /// Antisymmetric in (1,2) and (3,4), symmetric under swapping the pairs.
    RiemannType,
}

impl Symmetry {
    fn span(self) -> usize {
        match self {
            Symmetry::None => 0,
            Symmetry::Symmetric | Symmetry::AntiFirstPair => 2,
            Symmetry::RiemannType => 4,
        }
    }

    /// Orbit of an index tuple with the sign relating each member to `idx`.
    pub fn orbit(self, idx: &[usize]) -> Vec<(Vec<usize>, i8)> {
        let mut out = vec![(idx.to_vec(), 1i8)];
        match self {
            Symmetry::None => {}
            Symmetry::Symmetric => {
                let mut t = idx.to_vec();
                t.swap(0, 1);
                out.push((t, 1));
            }
            Symmetry::AntiFirstPair => {
                let mut t = idx.to_vec();
                t.swap(0, 1);
                out.push((t, -1));
            }
            Symmetry::RiemannType => {
                let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
                let rest = &idx[4..];
                let forms: [([usize; 4], i8); 7] = [
                    ([b, a, c, d], -1),
                    ([a, b, d, c], -1),
                    ([b, a, d, c], 1),
                    ([c, d, a, b], 1),
                    ([d, c, a, b], -1),
                    ([c, d, b, a], -1),
                    ([d, c, b, a], 1),
                ];
                for (f, s) in forms {
                    let mut t = f.to_vec();
                    t.extend_from_slice(rest);
                    out.push((t, s));
                }
            }
        }
        out
    }

    /// Lexicographically smallest orbit member and the sign from it to
    /// `idx`; `None` when the symmetry forces the component to vanish.
    pub fn representative(self, idx: &[usize]) -> Option<(Vec<usize>, i8)> {
        let orbit = self.orbit(idx);
        for (t, s) in &orbit {
            if t == idx && *s == -1 {
                return None;
            }
        }
        orbit.into_iter().min_by(|a, b| a.0.cmp(&b.0))
    }
}

/// Dense array of components indexed by 1-based tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    dim: usize,
    slots: Vec<Slot>,
    symmetry: Symmetry,
    data: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("expected {expected}, found a tensor with slots {found:?}")]
    Mismatch { expected: String, found: Vec<Slot> },
    #[error("slot {slot} is outside a rank {rank} tensor")]
    BadSlot { slot: usize, rank: usize },
    #[error("dimensions {0} and {1} differ")]
    Dimension(usize, usize),
}

impl Tensor {
    pub fn zeros(dim: usize, slots: &[Slot]) -> Tensor {
        Tensor {
            dim,
            slots: slots.to_vec(),
            symmetry: Symmetry::None,
            data: vec![Expr::zero(); dim.pow(slots.len() as u32)],
        }
    }

    pub fn covariant(dim: usize, rank: usize) -> Tensor {
        Tensor::zeros(dim, &vec![Slot::Co; rank])
    }

    /// Builds a tensor from a component function of the 1-based index. Only
    /// one member of each symmetry orbit is evaluated; evaluation is parallel.
    pub fn from_fn<F>(dim: usize, slots: &[Slot], symmetry: Symmetry, f: F) -> Tensor
    where
        F: Fn(&[usize]) -> Expr + Sync,
    {
        let mut t = Tensor::zeros(dim, slots);
        t.symmetry = symmetry;
        let reps: Vec<Vec<usize>> = t
            .indices()
            .filter(|idx| matches!(symmetry.representative(idx), Some((r, _)) if &r == idx))
            .collect();
        let values: Vec<Expr> = reps.par_iter().map(|idx| f(idx)).collect();
        for (idx, v) in reps.iter().zip(values) {
            t.fill_orbit(idx, v);
        }
        t
    }

    fn fill_orbit(&mut self, idx: &[usize], v: Expr) {
        if self.symmetry == Symmetry::None {
            let k = self.offset(idx);
            self.data[k] = v;
            return;
        }
        let neg = v.neg();
        for (t, s) in self.symmetry.orbit(idx) {
            let k = self.offset(&t);
            self.data[k] = if s == 1 { v.clone() } else { neg.clone() };
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_covariant(&self) -> bool {
        self.slots.iter().all(|s| *s == Slot::Co)
    }

    pub fn expect_covariant(&self, rank: usize) -> Result<(), ShapeError> {
        if self.is_covariant() && self.rank() == rank {
            Ok(())
        } else {
            Err(ShapeError::Mismatch { expected: format!("a ({rank},0) covariant tensor"), found: self.slots.clone() })
        }
    }

    /// Declares a symmetry after checking that the components obey it.
    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Tensor {
        debug_assert!(self.rank() >= symmetry.span());
        debug_assert!(self.obeys(symmetry));
        self.symmetry = symmetry;
        self
    }

    /// Whether the stored components satisfy `symmetry` structurally.
    pub fn obeys(&self, symmetry: Symmetry) -> bool {
        if self.rank() < symmetry.span() {
            return false;
        }
        self.indices().all(|idx| {
            let v = self.get(&idx);
            symmetry.orbit(&idx).into_iter().all(|(t, s)| {
                let w = self.get(&t);
                if s == 1 {
                    w == v
                } else {
                    w.add(v).is_zero()
                }
            })
        })
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.slots.len());
        let mut k = 0;
        for &i in idx {
            debug_assert!(i >= 1 && i <= self.dim, "index {i} out of range");
            k = k * self.dim + (i - 1);
        }
        k
    }

    pub fn get(&self, idx: &[usize]) -> &Expr {
        &self.data[self.offset(idx)]
    }

    /// Sets one component; the symmetry tag is dropped.
    pub fn set(&mut self, idx: &[usize], v: Expr) {
        self.symmetry = Symmetry::None;
        let k = self.offset(idx);
        self.data[k] = v;
    }

    /// All 1-based index tuples in lexicographic order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let n = self.dim;
        let r = self.slots.len();
        (0..self.data.len()).map(move |mut k| {
            let mut idx = vec![0; r];
            for s in (0..r).rev() {
                idx[s] = k % n + 1;
                k /= n;
            }
            idx
        })
    }

    pub fn components(&self) -> &[Expr] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Expr::is_zero)
    }

    /// First nonzero component, as a refutation witness.
    pub fn first_nonzero(&self) -> Option<(Vec<usize>, Expr)> {
        self.indices().zip(self.data.iter()).find(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone()))
    }

    pub fn nonzero(&self) -> Vec<(Vec<usize>, Expr)> {
        self.indices().zip(self.data.iter()).filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
    }

    /// Nonzero components, one per symmetry orbit (the lexicographically
    /// smallest index of the orbit).
    pub fn representatives(&self) -> Vec<(Vec<usize>, Expr)> {
        self.nonzero()
            .into_iter()
            .filter(|(idx, _)| matches!(self.symmetry.representative(idx), Some((r, _)) if &r == idx))
            .collect()
    }

    pub fn map<F>(&self, f: F) -> Tensor
    where
        F: Fn(&Expr) -> Expr + Sync + Send,
    {
        Tensor {
            dim: self.dim,
            slots: self.slots.clone(),
            symmetry: self.symmetry,
            data: self.data.par_iter().map(f).collect(),
        }
    }

    pub fn try_map<F, E>(&self, f: F) -> Result<Tensor, E>
    where
        F: Fn(&Expr) -> Result<Expr, E> + Sync + Send,
        E: Send,
    {
        let data: Result<Vec<Expr>, E> = self.data.par_iter().map(f).collect();
        Ok(Tensor { dim: self.dim, slots: self.slots.clone(), symmetry: self.symmetry, data: data? })
    }

    fn zip_with(&self, other: &Tensor, f: impl Fn(&Expr, &Expr) -> Expr + Sync + Send) -> Result<Tensor, ShapeError> {
        if self.dim != other.dim {
            return Err(ShapeError::Dimension(self.dim, other.dim));
        }
        if self.slots != other.slots {
            return Err(ShapeError::Mismatch { expected: format!("slots {:?}", self.slots), found: other.slots.clone() });
        }
        let symmetry = if self.symmetry == other.symmetry { self.symmetry } else { Symmetry::None };
        let data = self.data.par_iter().zip(other.data.par_iter()).map(|(a, b)| f(a, b)).collect();
        Ok(Tensor { dim: self.dim, slots: self.slots.clone(), symmetry, data })
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor, ShapeError> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor, ShapeError> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, k: &Expr) -> Tensor {
        self.map(|a| a.mul(k))
    }

    pub fn neg(&self) -> Tensor {
        self.map(|a| a.neg())
    }

    pub fn substitute(&self, s: &AssumptionSet) -> Result<Tensor, AssumptionError> {
        if s.substitutions().is_empty() {
            return Ok(self.clone());
        }
        self.try_map(|e| s.apply(e))
    }

    /// Tensor with its slots permuted: slot `k` of the result is slot `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        let slots: Vec<Slot> = perm.iter().map(|p| self.slots[*p]).collect();
        let mut t = Tensor::zeros(self.dim, &slots);
        let all: Vec<Vec<usize>> = t.indices().collect();
        for idx in all {
            let mut src = vec![0; idx.len()];
            for (k, p) in perm.iter().enumerate() {
                src[*p] = idx[k];
            }
            let v = self.get(&src).clone();
            let k = t.offset(&idx);
            t.data[k] = v;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_orbits_have_eight_members_and_signs() {
        let orbit = Symmetry::RiemannType.orbit(&[1, 3, 1, 4]);
        assert_eq!(orbit.len(), 8);
        assert!(orbit.contains(&(vec![3, 1, 1, 4], -1)));
        assert!(orbit.contains(&(vec![1, 4, 1, 3], 1)));
        assert_eq!(Symmetry::RiemannType.representative(&[4, 1, 3, 1]), Some((vec![1, 3, 1, 4], 1)));
        assert_eq!(Symmetry::RiemannType.representative(&[2, 2, 1, 3]), None);
        assert_eq!(Symmetry::AntiFirstPair.representative(&[3, 1, 1, 3]), Some((vec![1, 3, 1, 3], -1)));
    }

    #[test]
    fn from_fn_fills_orbits() {
        let t = Tensor::from_fn(4, &[Slot::Co; 4], Symmetry::RiemannType, |i| {
            if i == [1, 3, 1, 4] {
                Expr::int(5)
            } else {
                Expr::zero()
            }
        });
        assert_eq!(t.get(&[3, 1, 1, 4]), &Expr::int(-5));
        assert_eq!(t.get(&[1, 4, 1, 3]), &Expr::int(5));
        assert_eq!(t.representatives().len(), 1);
        assert!(t.obeys(Symmetry::RiemannType));
        assert_eq!(t.nonzero().len(), 8);
    }

    #[test]
    fn permutation_moves_slots() {
        let mut t = Tensor::covariant(3, 3);
        t.set(&[1, 2, 3], Expr::int(7));
        let p = t.permute(&[2, 0, 1]);
        assert_eq!(p.get(&[3, 1, 2]), &Expr::int(7));
    }
}
