//! Nondegenerate filtrations: an increasing chain of subspaces with a metric
//! on each graded piece. Only the jump indices are stored.

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, QuotientFrame, Subspace};
use crate::scalar::Scalar;

/// One jump I_{k−1} ⊊ I_k. `reps` complete I_{k−1} to I_k and `gram` is the
/// matrix of g_k on their classes.
#[derive(Clone, Debug, PartialEq)]
pub struct Level<S> {
    pub index: i64,
    pub subspace: Subspace<S>,
    pub reps: Vec<Vec<S>>,
    pub gram: Matrix<S>,
}

#[derive(Clone, Debug)]
pub struct NondegenerateFiltration<S> {
    ambient: usize,
    levels: Vec<Level<S>>,
    frames: Vec<QuotientFrame<S>>,
}

impl<S: Scalar> NondegenerateFiltration<S> {
    /// Builds the chain from `(k, reps, gram)` triples in increasing `k` and
    /// checks it is a nondegenerate, exhaustive filtration.
    pub fn new(ambient: usize, jumps: Vec<(i64, Vec<Vec<S>>, Matrix<S>)>) -> Result<Self> {
        let f = Self::from_jumps(ambient, jumps)?;
        f.validate()?;
        Ok(f)
    }

    /// Structural checks only (increasing indices, independent reps, gram
    /// sizes). Used for untrusted input that a checker will judge.
    pub fn from_jumps(ambient: usize, jumps: Vec<(i64, Vec<Vec<S>>, Matrix<S>)>) -> Result<Self> {
        let mut levels: Vec<Level<S>> = Vec::with_capacity(jumps.len());
        let mut frames = Vec::with_capacity(jumps.len());
        let mut current = Subspace::zero(ambient);
        for (index, reps, gram) in jumps {
            if levels.last().is_some_and(|l| l.index >= index) {
                return Err(Error::InvalidMetric(format!("jump indices must increase (at {index})")));
            }
            if reps.is_empty() {
                return Err(Error::InvalidMetric(format!("jump {index} adds no vectors")));
            }
            if reps.iter().any(|r| r.len() != ambient) {
                return Err(Error::Dimension(format!("representative at jump {index} has wrong length")));
            }
            if gram.rows() != reps.len() || gram.cols() != reps.len() {
                return Err(Error::Dimension(format!("metric at jump {index} is not {0}×{0}", reps.len())));
            }
            let next = current.sum(&Subspace::span(ambient, reps.iter().cloned()));
            if next.dim() != current.dim() + reps.len() {
                return Err(Error::InvalidMetric(format!(
                    "representatives at jump {index} are dependent modulo the previous filter"
                )));
            }
            frames.push(QuotientFrame::new(reps.clone(), current.clone()));
            levels.push(Level { index, subspace: next.clone(), reps, gram });
            current = next;
        }
        Ok(Self { ambient, levels, frames })
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_exhaustive() {
            return Err(Error::InvalidMetric("filtration does not exhaust the space".into()));
        }
        for l in &self.levels {
            if !l.gram.is_symmetric() {
                return Err(Error::InvalidMetric(format!("g_{} is not symmetric", l.index)));
            }
            if l.gram.det().is_zero() {
                return Err(Error::InvalidMetric(format!("g_{} is degenerate", l.index)));
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn levels(&self) -> &[Level<S>] {
        &self.levels
    }

    pub fn jumps(&self) -> Vec<i64> {
        self.levels.iter().map(|l| l.index).collect()
    }

    pub fn level(&self, k: i64) -> Option<&Level<S>> {
        self.levels.iter().find(|l| l.index == k)
    }

    pub fn is_exhaustive(&self) -> bool {
        self.levels.last().map_or(self.ambient == 0, |l| l.subspace.is_full())
    }

    /// I_k (zero below the first jump).
    pub fn subspace_at(&self, k: i64) -> Subspace<S> {
        self.levels
            .iter()
            .rev()
            .find(|l| l.index <= k)
            .map_or_else(|| Subspace::zero(self.ambient), |l| l.subspace.clone())
    }

    pub fn rank_at(&self, k: i64) -> usize {
        self.subspace_at(k).dim()
    }

    /// (k, dim I_k/I_{k−1}) for every jump.
    pub fn graded_ranks(&self) -> Vec<(i64, usize)> {
        self.levels.iter().map(|l| (l.index, l.reps.len())).collect()
    }

    /// Coordinates of the class of x ∈ I_k in I_k/I_{k−1} relative to the
    /// level's reps; `None` if k is not a jump or x ∉ I_k.
    pub fn quotient_coords(&self, k: i64, x: &[S]) -> Option<Vec<S>> {
        let pos = self.levels.iter().position(|l| l.index == k)?;
        self.frames[pos].coords(x)
    }

    /// g_k(x̄, ȳ); `None` if x or y is not in I_k.
    pub fn metric(&self, k: i64, x: &[S], y: &[S]) -> Option<S> {
        let Some(pos) = self.levels.iter().position(|l| l.index == k) else {
            let sub = self.subspace_at(k);
            return (sub.contains(x) && sub.contains(y)).then(S::zero);
        };
        let cx = self.frames[pos].coords(x)?;
        let cy = self.frames[pos].coords(y)?;
        Some(self.levels[pos].gram.bilinear(&cx, &cy))
    }

    /// Equality of filtrations: same jumps, same subspaces, and the same g_k
    /// on `other`'s representatives. Returns a description of the first
    /// difference.
    pub fn same_as(&self, other: &Self) -> std::result::Result<(), String> {
        if self.jumps() != other.jumps() {
            return Err(format!("jumps differ: {:?} vs {:?}", self.jumps(), other.jumps()));
        }
        for (a, b) in self.levels.iter().zip(&other.levels) {
            if a.subspace != b.subspace {
                return Err(format!("I_{} differs", a.index));
            }
            for (i, x) in b.reps.iter().enumerate() {
                for (j, y) in b.reps.iter().enumerate() {
                    let mine = self.metric(a.index, x, y).expect("reps lie in I_k");
                    if mine != b.gram[(i, j)] {
                        return Err(format!("g_{} differs on representatives ({i}, {j}): {} vs {}", a.index, mine, b.gram[(i, j)]));
                    }
                }
            }
        }
        Ok(())
    }
}
