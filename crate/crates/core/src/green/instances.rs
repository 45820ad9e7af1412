//! The Burnside and slice Burnside functors.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use num_traits::One;
use serde_json::Value;

use super::GreenFunctor;
use crate::bits::Bits;
use crate::error::Result;
use crate::grp::GroupRef;
use crate::labels::{class_labels, slice_labels};
use crate::ops::{BisetOp, OpKind};
use crate::qburnside::{self, BurnsideElt, MarkTable};
use crate::rational::Q;
use crate::slice::{self, SliceElt};

fn subgroup_class(g: &GroupRef, bits: &Bits) -> usize {
    let lat = g.lattice();
    lat.class_of(lat.index_of(bits).expect("a subgroup"))
}

/// Carries a subgroup of the target group to the source group: the image
/// for Res and Inf, the preimage for Iso.
fn to_source(op: &BisetOp, bits: &Bits) -> Bits {
    match op.kind() {
        OpKind::Iso => op.hom().preimage_set(bits),
        _ => op.hom().image_set(bits),
    }
}

type PullKey = (bool, bool, usize, usize, Vec<u32>);

/// Pulls are reused heavily by composition; keyed by the operation itself.
static PULLS: Lazy<Mutex<HashMap<PullKey, Arc<Vec<usize>>>>> = Lazy::new(Default::default);

fn cached_pull(op: &BisetOp, slices: bool, f: impl FnOnce() -> Vec<usize>) -> Arc<Vec<usize>> {
    let hom = op.hom();
    let key = (
        slices,
        op.kind() == OpKind::Iso,
        Arc::as_ptr(hom.source()) as usize,
        Arc::as_ptr(hom.target()) as usize,
        hom.images().to_vec(),
    );
    if let Some(v) = PULLS.lock().expect("pull cache poisoned").get(&key) {
        return v.clone();
    }
    let v = Arc::new(f());
    PULLS.lock().expect("pull cache poisoned").insert(key, v.clone());
    v
}

/// `[S(target)] → [S(source)]`. For Res, Inf and Iso each species of the
/// target is a species of the source composed with the operation.
fn pull_classes(op: &BisetOp) -> Arc<Vec<usize>> {
    cached_pull(op, false, || {
        let (src, tgt) = (op.source(), op.target());
        let tlat = tgt.lattice();
        tlat.classes()
            .iter()
            .map(|c| subgroup_class(src, &to_source(op, tlat.subgroup(c.rep).bits())))
            .collect()
    })
}

fn pull_slices(op: &BisetOp) -> Arc<Vec<usize>> {
    cached_pull(op, true, || {
        let (src, tgt) = (op.source(), op.target());
        let (slat, tlat) = (src.lattice(), tgt.lattice());
        tgt.slice_classes()
            .classes()
            .iter()
            .map(|c| {
                let t = slat.index_of(&to_source(op, tlat.subgroup(c.t).bits())).expect("subgroup");
                let s = slat.index_of(&to_source(op, tlat.subgroup(c.s).bits())).expect("subgroup");
                src.slice_classes().class_of(t, s).expect("slice")
            })
            .collect()
    })
}

fn indicator_of(pulled: &[usize], i: usize) -> Vec<Q> {
    pulled.iter().map(|&c| if c == i { Q::one() } else { Q::default() }).collect()
}

/// `ℚB`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Burnside;

impl GreenFunctor for Burnside {
    fn name(&self) -> String {
        "burnside".into()
    }

    fn dim(&self, g: &GroupRef) -> usize {
        g.lattice().classes().len()
    }

    fn species(&self, g: &GroupRef) -> Arc<MarkTable> {
        qburnside::mark_table(g)
    }

    fn basis_labels(&self, g: &GroupRef) -> Vec<String> {
        qburnside::basis(g)
    }

    fn idempotent_labels(&self, g: &GroupRef) -> Vec<String> {
        class_labels(g).iter().map(|l| format!("e_{l}")).collect()
    }

    fn idempotent(&self, g: &GroupRef, i: usize) -> Vec<Q> {
        qburnside::idempotent(g, i).into_coeffs()
    }

    fn unit(&self, g: &GroupRef) -> Vec<Q> {
        BurnsideElt::one(g).into_coeffs()
    }

    fn mult(&self, g: &GroupRef, a: &[Q], b: &[Q]) -> Result<Vec<Q>> {
        let a = BurnsideElt::from_coeffs(g, a.to_vec())?;
        let b = BurnsideElt::from_coeffs(g, b.to_vec())?;
        Ok(qburnside::mult(&a, &b)?.into_coeffs())
    }

    fn apply(&self, op: &BisetOp, x: &[Q]) -> Result<Vec<Q>> {
        let x = BurnsideElt::from_coeffs(op.source(), x.to_vec())?;
        Ok(qburnside::elementary_op(op, &x)?.into_coeffs())
    }

    fn format(&self, g: &GroupRef, x: &[Q]) -> String {
        BurnsideElt::from_coeffs(g, x.to_vec()).map(|e| e.to_string()).unwrap_or_default()
    }

    fn to_json(&self, g: &GroupRef, x: &[Q]) -> Value {
        BurnsideElt::from_coeffs(g, x.to_vec()).map(|e| e.to_json()).unwrap_or(Value::Null)
    }

    fn op_on_idempotent(&self, op: &BisetOp, i: usize) -> Result<Vec<Q>> {
        match op.kind() {
            OpKind::Res | OpKind::Inf | OpKind::Iso => Ok(indicator_of(&pull_classes(op), i)),
            OpKind::Ind | OpKind::Def => {
                let e = self.idempotent(op.source(), i);
                let y = self.apply(op, &e)?;
                Ok(self.species(op.target()).apply(&y))
            }
        }
    }

    fn op_in_idem(&self, op: &BisetOp, c: &[Q]) -> Result<Vec<Q>> {
        match op.kind() {
            OpKind::Res | OpKind::Inf | OpKind::Iso => Ok(pull_classes(op).iter().map(|&j| c[j].clone()).collect()),
            OpKind::Ind | OpKind::Def => {
                let x = self.from_idem(op.source(), c);
                let y = self.apply(op, &x)?;
                Ok(self.to_idem(op.target(), &y))
            }
        }
    }
}

/// `ℚΞ`, the slice Burnside functor.
#[derive(Debug, Clone, Copy, Default)]
pub struct SliceBurnside;

impl GreenFunctor for SliceBurnside {
    fn name(&self) -> String {
        "slice".into()
    }

    fn dim(&self, g: &GroupRef) -> usize {
        g.slice_classes().len()
    }

    fn species(&self, g: &GroupRef) -> Arc<MarkTable> {
        slice::mark_table(g)
    }

    fn basis_labels(&self, g: &GroupRef) -> Vec<String> {
        slice::slice_basis(g)
    }

    fn idempotent_labels(&self, g: &GroupRef) -> Vec<String> {
        slice_labels(g).iter().map(|l| format!("xi_{l}")).collect()
    }

    fn idempotent(&self, g: &GroupRef, i: usize) -> Vec<Q> {
        slice::xi_idempotent(g, i).into_coeffs()
    }

    fn unit(&self, g: &GroupRef) -> Vec<Q> {
        SliceElt::one(g).into_coeffs()
    }

    fn mult(&self, g: &GroupRef, a: &[Q], b: &[Q]) -> Result<Vec<Q>> {
        let a = SliceElt::from_coeffs(g, a.to_vec())?;
        let b = SliceElt::from_coeffs(g, b.to_vec())?;
        Ok(slice::mult(&a, &b)?.into_coeffs())
    }

    fn apply(&self, op: &BisetOp, x: &[Q]) -> Result<Vec<Q>> {
        let x = SliceElt::from_coeffs(op.source(), x.to_vec())?;
        Ok(slice::elementary_op(op, &x)?.into_coeffs())
    }

    fn format(&self, g: &GroupRef, x: &[Q]) -> String {
        SliceElt::from_coeffs(g, x.to_vec()).map(|e| e.to_string()).unwrap_or_default()
    }

    fn to_json(&self, g: &GroupRef, x: &[Q]) -> Value {
        SliceElt::from_coeffs(g, x.to_vec()).map(|e| e.to_json()).unwrap_or(Value::Null)
    }

    fn op_on_idempotent(&self, op: &BisetOp, i: usize) -> Result<Vec<Q>> {
        match op.kind() {
            OpKind::Res | OpKind::Inf | OpKind::Iso => Ok(indicator_of(&pull_slices(op), i)),
            OpKind::Ind | OpKind::Def => {
                let e = self.idempotent(op.source(), i);
                let y = self.apply(op, &e)?;
                Ok(self.species(op.target()).apply(&y))
            }
        }
    }

    fn op_in_idem(&self, op: &BisetOp, c: &[Q]) -> Result<Vec<Q>> {
        match op.kind() {
            OpKind::Res | OpKind::Inf | OpKind::Iso => Ok(pull_slices(op).iter().map(|&j| c[j].clone()).collect()),
            OpKind::Ind | OpKind::Def => {
                let x = self.from_idem(op.source(), c);
                let y = self.apply(op, &x)?;
                Ok(self.to_idem(op.target(), &y))
            }
        }
    }
}
