//! Split semisimple Green biset functors given evaluation by evaluation:
//! a distinguished basis, a closed-form product, idempotents by formula and
//! species (ring homomorphisms to ℚ) that diagonalize the algebra.
//!
//! Idempotent coordinates of `x` are its species values; this is checked,
//! not assumed, by [`AlgebraPresentation::verify`].

mod ideal;
mod instances;
mod transport;

use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::grp::GroupRef;
use crate::ops::BisetOp;
use crate::qburnside::MarkTable;
use crate::rational::Q;

pub use ideal::{
    compose, dominates, dominates_via_ideal, identity_morphism, ideal_support, minimal_groups_of_ideal, principal_ideal_eval,
    PrincipalIdeal,
};
pub use instances::{Burnside, SliceBurnside};
pub use transport::{
    double_underline_e, double_underline_e_full, is_mc_group, reduce_def_inf, reduce_res_ind, reduce_to_mc, transport, underline_e,
    underline_e_full, DefInfReduction, McReport, McReduction, ResIndReduction, Shape, Transport,
};

/// One primitive idempotent `e_H` of `A(H)`.
#[derive(Debug, Clone)]
pub struct IdempotentRef {
    pub group: GroupRef,
    pub index: usize,
}

impl IdempotentRef {
    pub fn new(group: &GroupRef, index: usize) -> IdempotentRef {
        IdempotentRef { group: group.clone(), index }
    }
}

impl PartialEq for IdempotentRef {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && *self.group == *other.group
    }
}

pub trait GreenFunctor: Send + Sync {
    fn name(&self) -> String;

    /// Errors if evaluating at `G` would exceed a size cap.
    fn admit(&self, _g: &GroupRef) -> Result<()> {
        Ok(())
    }

    /// Dimension of `A(G)`.
    fn dim(&self, g: &GroupRef) -> usize;

    /// Species table: row `i` is the ring homomorphism dual to `e_i`.
    fn species(&self, g: &GroupRef) -> Arc<MarkTable>;

    fn basis_labels(&self, g: &GroupRef) -> Vec<String>;

    fn idempotent_labels(&self, g: &GroupRef) -> Vec<String>;

    /// The idempotent `e_i` of `A(G)` in the distinguished basis, by formula.
    fn idempotent(&self, g: &GroupRef, i: usize) -> Vec<Q>;

    fn unit(&self, g: &GroupRef) -> Vec<Q>;

    /// Closed-form product in the distinguished basis.
    fn mult(&self, g: &GroupRef, a: &[Q], b: &[Q]) -> Result<Vec<Q>>;

    /// Elementary operation in the distinguished basis.
    fn apply(&self, op: &BisetOp, x: &[Q]) -> Result<Vec<Q>>;

    /// Human-readable form of `x ∈ A(G)`.
    fn format(&self, g: &GroupRef, x: &[Q]) -> String;

    /// `x ∈ A(G)` as a JSON map from basis labels to `"p/q"`.
    fn to_json(&self, g: &GroupRef, x: &[Q]) -> Value;

    /// Image of `e_i` under `op`, in idempotent coordinates of the target.
    fn op_on_idempotent(&self, op: &BisetOp, i: usize) -> Result<Vec<Q>> {
        let e = self.idempotent(op.source(), i);
        let y = self.apply(op, &e)?;
        Ok(self.species(op.target()).apply(&y))
    }

    /// `op` applied to `Σ c_i e_i`, in idempotent coordinates on both sides.
    fn op_in_idem(&self, op: &BisetOp, c: &[Q]) -> Result<Vec<Q>> {
        let x = self.from_idem(op.source(), c);
        let y = self.apply(op, &x)?;
        Ok(self.to_idem(op.target(), &y))
    }

    fn to_idem(&self, g: &GroupRef, x: &[Q]) -> Vec<Q> {
        self.species(g).apply(x)
    }

    /// `Σ c_i e_i`; sparse inputs are summed from the idempotent formulas.
    fn from_idem(&self, g: &GroupRef, c: &[Q]) -> Vec<Q> {
        let support: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
        if support.len() * 4 > c.len() {
            return self.species(g).solve(c);
        }
        let mut out = vec![Q::zero(); c.len()];
        for i in support {
            for (o, v) in out.iter_mut().zip(self.idempotent(g, i)) {
                if !v.is_zero() {
                    *o += &c[i] * v;
                }
            }
        }
        out
    }
}

pub fn indicator(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// Complete presentation of one evaluation, for display and verification.
#[derive(Debug, Clone)]
pub struct AlgebraPresentation {
    pub group: GroupRef,
    pub basis: Vec<String>,
    pub idempotent_labels: Vec<String>,
    pub idempotents: Vec<Vec<Q>>,
    pub unit: Vec<Q>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdempotentCheck {
    pub idempotent: bool,
    pub orthogonal: bool,
    pub complete: bool,
    pub diagonalizes: bool,
}

impl IdempotentCheck {
    pub fn all(&self) -> bool {
        self.idempotent && self.orthogonal && self.complete && self.diagonalizes
    }
}

impl AlgebraPresentation {
    pub fn build(inst: &dyn GreenFunctor, g: &GroupRef) -> AlgebraPresentation {
        let n = inst.dim(g);
        AlgebraPresentation {
            group: g.clone(),
            basis: inst.basis_labels(g),
            idempotent_labels: inst.idempotent_labels(g),
            idempotents: (0..n).map(|i| inst.idempotent(g, i)).collect(),
            unit: inst.unit(g),
        }
    }

    /// Checks the idempotent axioms with the closed-form product, and that the
    /// species send `e_i` to the `i`-th indicator vector.
    pub fn verify(&self, inst: &dyn GreenFunctor) -> Result<IdempotentCheck> {
        let g = &self.group;
        let n = self.idempotents.len();
        let mut check = IdempotentCheck { idempotent: true, orthogonal: true, complete: true, diagonalizes: true };
        let mut sum = vec![Q::zero(); n];
        for (i, a) in self.idempotents.iter().enumerate() {
            for (s, x) in sum.iter_mut().zip(a) {
                *s += x;
            }
            if inst.to_idem(g, a) != indicator(n, i) {
                check.diagonalizes = false;
            }
            for (j, b) in self.idempotents.iter().enumerate().skip(i) {
                let p = inst.mult(g, a, b)?;
                if i == j {
                    check.idempotent &= p == *a;
                } else {
                    check.orthogonal &= p.iter().all(Zero::is_zero);
                }
            }
        }
        check.complete = sum == self.unit && n == self.basis.len();
        Ok(check)
    }
}

/// Which bundled functor, as named on the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorSpec {
    Burnside,
    Slice,
    Shifted(String),
}

impl std::str::FromStr for FunctorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<FunctorSpec> {
        match s {
            "burnside" => Ok(FunctorSpec::Burnside),
            "slice" => Ok(FunctorSpec::Slice),
            _ => match s.strip_prefix("shifted:") {
                Some(k) if !k.is_empty() => Ok(FunctorSpec::Shifted(k.to_string())),
                _ => Err(Error::Usage(format!("unknown functor {s:?}; expected burnside, slice or shifted:<K>"))),
            },
        }
    }
}

impl std::fmt::Display for FunctorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FunctorSpec::Burnside => f.write_str("burnside"),
            FunctorSpec::Slice => f.write_str("slice"),
            FunctorSpec::Shifted(k) => write!(f, "shifted:{k}"),
        }
    }
}

impl FunctorSpec {
    pub fn instance(&self) -> Result<Arc<dyn GreenFunctor>> {
        Ok(match self {
            FunctorSpec::Burnside => Arc::new(Burnside),
            FunctorSpec::Slice => Arc::new(SliceBurnside),
            FunctorSpec::Shifted(k) => {
                let k = crate::grp::parse_group_spec(k).map_err(|e| match e {
                    Error::Validation(m) => Error::Usage(m),
                    other => other,
                })?;
                Arc::new(crate::shifted::Shifted::new(&k)?)
            }
        })
    }
}

#[cfg(test)]
mod tests;
