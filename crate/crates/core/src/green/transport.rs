//! Idempotents under elementary operations, the sets E̲ and E̳, MC-groups
//! and the reductions of an idempotent to an MC-pair.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{GreenFunctor, IdempotentRef};
use crate::error::{Error, Result};
use crate::grp::GroupRef;
use crate::ops::{BisetOp, OpKind};
use crate::rational::{format_q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Zero,
    ZeroOneSum,
    ScalarTimesSingle,
    Single,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transport {
    /// Coefficients in the idempotent basis of the target.
    pub coeffs: Vec<Q>,
    pub shape: Shape,
}

fn violation(op: &BisetOp, c: &[Q]) -> Error {
    Error::ShapeViolation {
        group: op.source().name().to_string(),
        kind: op.to_string(),
        coefficients: format!("[{}]", c.iter().map(format_q).collect::<Vec<_>>().join(", ")),
    }
}

/// Classifies `c` against the shape the operation must produce.
pub(crate) fn classify(op: &BisetOp, c: &[Q]) -> Result<Shape> {
    let nonzero = c.iter().filter(|x| !x.is_zero()).count();
    let shape = match op.kind() {
        OpKind::Res | OpKind::Inf if c.iter().all(|x| x.is_zero() || x.is_one()) => {
            if nonzero == 0 {
                Shape::Zero
            } else {
                Shape::ZeroOneSum
            }
        }
        OpKind::Ind | OpKind::Def if nonzero <= 1 => {
            if nonzero == 0 {
                Shape::Zero
            } else {
                Shape::ScalarTimesSingle
            }
        }
        OpKind::Iso if nonzero == 1 && c.iter().any(One::is_one) => Shape::Single,
        _ => return Err(violation(op, c)),
    };
    Ok(shape)
}

/// Image of `e_i ∈ E_{source}` under `op`, with its shape. A shape that
/// contradicts the operation kind is an error.
pub fn transport(inst: &dyn GreenFunctor, op: &BisetOp, i: usize) -> Result<Transport> {
    let coeffs = inst.op_on_idempotent(op, i)?;
    let shape = classify(op, &coeffs)?;
    Ok(Transport { coeffs, shape })
}

fn class_reps(g: &GroupRef, subs: Vec<usize>) -> Vec<usize> {
    let lat = g.lattice();
    subs.into_iter().filter(|&h| lat.class_rep(lat.class_of(h)) == h).collect()
}

/// Indices `i` with `op(e_i) = 0` for every operation in `ops`.
fn killed_by(inst: &dyn GreenFunctor, g: &GroupRef, ops: &[BisetOp]) -> Result<Vec<usize>> {
    let n = inst.dim(g);
    let mut alive = vec![true; n];
    for op in ops {
        for (i, a) in alive.iter_mut().enumerate() {
            if *a && !inst.op_on_idempotent(op, i)?.iter().all(Zero::is_zero) {
                *a = false;
            }
        }
    }
    Ok((0..n).filter(|&i| alive[i]).collect())
}

/// `E̲_G`: idempotents killed by every proper restriction. Restriction is
/// transitive, so maximal subgroups (up to conjugacy) suffice.
pub fn underline_e(inst: &dyn GreenFunctor, g: &GroupRef) -> Result<Vec<usize>> {
    let ops = class_reps(g, g.lattice().maximal_subgroups())
        .into_iter()
        .map(|m| BisetOp::restriction(g, m))
        .collect::<Result<Vec<_>>>()?;
    killed_by(inst, g, &ops)
}

/// `E̲_G` by restricting to every proper subgroup.
pub fn underline_e_full(inst: &dyn GreenFunctor, g: &GroupRef) -> Result<Vec<usize>> {
    let full = g.lattice().full();
    let ops = (0..full).map(|h| BisetOp::restriction(g, h)).collect::<Result<Vec<_>>>()?;
    killed_by(inst, g, &ops)
}

/// `E̳_G`: idempotents killed by every deflation to a proper quotient.
/// Deflation to `G/N` factors through `G/N₀` for `N₀ ≤ N`, so minimal
/// normal subgroups suffice.
pub fn double_underline_e(inst: &dyn GreenFunctor, g: &GroupRef) -> Result<Vec<usize>> {
    let ops = g
        .lattice()
        .minimal_normal_subgroups()
        .into_iter()
        .map(|n| BisetOp::deflation(g, n))
        .collect::<Result<Vec<_>>>()?;
    killed_by(inst, g, &ops)
}

/// `E̳_G` by deflating along every nontrivial normal subgroup.
pub fn double_underline_e_full(inst: &dyn GreenFunctor, g: &GroupRef) -> Result<Vec<usize>> {
    let ops = g
        .lattice()
        .normal_subgroups()
        .into_iter()
        .filter(|&n| n != 0)
        .map(|n| BisetOp::deflation(g, n))
        .collect::<Result<Vec<_>>>()?;
    killed_by(inst, g, &ops)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McReport {
    pub is_mc: bool,
    /// `E̲_G ∩ E̳_G`.
    pub witnesses: Vec<usize>,
}

pub fn is_mc_group(inst: &dyn GreenFunctor, g: &GroupRef) -> Result<McReport> {
    let under = underline_e(inst, g)?;
    if under.is_empty() {
        return Ok(McReport { is_mc: false, witnesses: vec![] });
    }
    let double = double_underline_e(inst, g)?;
    let witnesses: Vec<usize> = under.into_iter().filter(|i| double.contains(i)).collect();
    Ok(McReport { is_mc: !witnesses.is_empty(), witnesses })
}

/// `e_G = α·Ind^G_H(e_H)` with `H` minimal such that `Res^G_H(e_G) ≠ 0`.
#[derive(Debug, Clone)]
pub struct ResIndReduction {
    /// `H` as an index in the subgroup lattice of `G`.
    pub subgroup: usize,
    pub target: IdempotentRef,
    pub alpha: Q,
}

/// `e_{G/N} = α·Def^G_{G/N}(e_G)` with `N` maximal such that the deflation
/// is nonzero; also `e_G = e_G · Inf^G_{G/N}(e_{G/N})`.
#[derive(Debug, Clone)]
pub struct DefInfReduction {
    /// `N` as an index in the subgroup lattice of `G`.
    pub normal: usize,
    pub target: IdempotentRef,
    pub alpha: Q,
}

#[derive(Debug, Clone)]
pub struct McReduction {
    pub res_ind: ResIndReduction,
    pub def_inf: DefInfReduction,
    pub result: IdempotentRef,
}

fn single(c: &[Q]) -> Option<(usize, Q)> {
    let mut it = c.iter().enumerate().filter(|(_, x)| !x.is_zero());
    let (j, x) = it.next()?;
    it.next().is_none().then(|| (j, x.clone()))
}

pub fn reduce_res_ind(inst: &dyn GreenFunctor, e: &IdempotentRef) -> Result<ResIndReduction> {
    let g = &e.group;
    let lat = g.lattice();
    for c in lat.classes() {
        let h = c.rep;
        let res = BisetOp::restriction(g, h)?;
        let r = transport(inst, &res, e.index)?.coeffs;
        let Some(j) = r.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let ind = BisetOp::induction(g, h)?;
        let v = transport(inst, &ind, j)?.coeffs;
        let (k, lambda) = single(&v).ok_or_else(|| Error::Assertion(format!("Ind of a restricted idempotent of {} vanished", g.name())))?;
        if k != e.index {
            return Err(Error::Assertion(format!("Ind does not return to e_{} on {}", e.index, g.name())));
        }
        let sub = res.target().clone();
        if !underline_e(inst, &sub)?.contains(&j) {
            return Err(Error::Assertion(format!("minimal restriction of e_{} on {} is not in E̲", e.index, g.name())));
        }
        return Ok(ResIndReduction { subgroup: h, target: IdempotentRef::new(&sub, j), alpha: Q::one() / lambda });
    }
    Err(Error::Assertion(format!("e_{} of {} restricts to zero everywhere", e.index, g.name())))
}

pub fn reduce_def_inf(inst: &dyn GreenFunctor, e: &IdempotentRef) -> Result<DefInfReduction> {
    let g = &e.group;
    let lat = g.lattice();
    let mut normals = lat.normal_subgroups();
    normals.sort_by_key(|&n| (std::cmp::Reverse(lat.subgroup(n).order()), n));
    for n in normals {
        let def = BisetOp::deflation(g, n)?;
        let d = transport(inst, &def, e.index)?.coeffs;
        let Some((j, lambda)) = single(&d) else {
            continue;
        };
        let inf = BisetOp::inflation(g, n)?;
        let w = transport(inst, &inf, j)?.coeffs;
        if !w[e.index].is_one() {
            return Err(Error::Assertion(format!("e_G · Inf(e_G/N) ≠ e_G on {}", g.name())));
        }
        let quo = def.target().clone();
        if !double_underline_e(inst, &quo)?.contains(&j) {
            return Err(Error::Assertion(format!("maximal deflation of e_{} on {} is not in E̳", e.index, g.name())));
        }
        return Ok(DefInfReduction { normal: n, target: IdempotentRef::new(&quo, j), alpha: Q::one() / lambda });
    }
    Err(Error::Assertion(format!("e_{} of {} deflates to zero everywhere", e.index, g.name())))
}

/// Res/Ind then Def/Inf. The displayed identities of both steps exhibit
/// each idempotent inside the ideal generated by the other, so the input and
/// the resulting MC-pair generate the same ideal.
pub fn reduce_to_mc(inst: &dyn GreenFunctor, e: &IdempotentRef) -> Result<McReduction> {
    let res_ind = reduce_res_ind(inst, e)?;
    let def_inf = reduce_def_inf(inst, &res_ind.target)?;
    let result = def_inf.target.clone();
    if !is_mc_group(inst, &result.group)?.witnesses.contains(&result.index) {
        return Err(Error::Assertion(format!("reduction of e_{} on {} is not an MC-pair", e.index, e.group.name())));
    }
    Ok(McReduction { res_ind, def_inf, result })
}
