//! The rational slice Burnside algebra ℚΞ(G) on the basis `⟨T,S⟩`, one per
//! conjugacy class of slices `S ≤ T ≤ G`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde_json::Value;

use crate::bits::Bits;
use crate::error::{validation, Error, Result};
use crate::grp::GroupRef;
use crate::labels::{display_name, slice_labels};
use crate::memo::GroupMemo;
use crate::ops::{BisetOp, OpKind};
use crate::qburnside::MarkTable;
use crate::rational::{format_combination, format_q, parse_q, q, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct SliceElt {
    group: GroupRef,
    coeffs: Vec<Q>,
}

impl SliceElt {
    pub fn zero(g: &GroupRef) -> SliceElt {
        SliceElt { group: g.clone(), coeffs: vec![Q::zero(); g.slice_classes().len()] }
    }

    pub fn basis_element(g: &GroupRef, class: usize) -> SliceElt {
        let mut e = SliceElt::zero(g);
        e.coeffs[class] = Q::one();
        e
    }

    /// The unit `⟨G,G⟩`.
    pub fn one(g: &GroupRef) -> SliceElt {
        let last = g.slice_classes().len() - 1;
        SliceElt::basis_element(g, last)
    }

    pub fn from_coeffs(g: &GroupRef, coeffs: Vec<Q>) -> Result<SliceElt> {
        let n = g.slice_classes().len();
        if coeffs.len() != n {
            return validation(format!("{} has {n} slice classes, got {} coefficients", g.name(), coeffs.len()));
        }
        Ok(SliceElt { group: g.clone(), coeffs })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_group(&self, other: &SliceElt) -> Result<()> {
        if *self.group != *other.group {
            return validation(format!("elements of Ξ({}) and Ξ({}) cannot be combined", self.group.name(), other.group.name()));
        }
        Ok(())
    }

    pub fn add(&self, other: &SliceElt) -> Result<SliceElt> {
        self.same_group(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(SliceElt { group: self.group.clone(), coeffs })
    }

    pub fn sub(&self, other: &SliceElt) -> Result<SliceElt> {
        self.same_group(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(SliceElt { group: self.group.clone(), coeffs })
    }

    pub fn scale(&self, c: &Q) -> SliceElt {
        SliceElt { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `{"(T,S)": "p/q"}` over the nonzero coefficients.
    pub fn to_json(&self) -> Value {
        let labels = slice_labels(&self.group);
        let map: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (labels[i].clone(), format_q(c)))
            .collect();
        serde_json::to_value(map).expect("string map serializes")
    }

    pub fn from_json(g: &GroupRef, v: &Value) -> Result<SliceElt> {
        let labels = slice_labels(g);
        let obj = v.as_object().ok_or_else(|| Error::Validation("expected a JSON object".into()))?;
        let mut e = SliceElt::zero(g);
        for (k, val) in obj {
            let i = labels
                .iter()
                .position(|l| l == k)
                .ok_or_else(|| Error::Validation(format!("{k:?} is not a slice class of {}", g.name())))?;
            let s = val.as_str().ok_or_else(|| Error::Validation(format!("coefficient of {k:?} is not a string")))?;
            e.coeffs[i] = parse_q(s)?;
        }
        Ok(e)
    }
}

impl std::fmt::Display for SliceElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let g = display_name(&self.group);
        let labels: Vec<String> = slice_labels(&self.group).iter().rev().map(|l| format!("<{}>_{g}", &l[1..l.len() - 1])).collect();
        let coeffs: Vec<Q> = self.coeffs.iter().rev().cloned().collect();
        f.write_str(&format_combination(&coeffs, &labels))
    }
}

static MARKS: Lazy<GroupMemo<MarkTable>> = Lazy::new(GroupMemo::default);

/// Marks of the slice algebra: `get(a, b)` counts the points `x` of the
/// source of the morphism `b` fixed by `S'` whose image is fixed by `T'`,
/// where `a = (T',S')`. Upper triangular in slice-class order.
pub fn mark_table(g: &GroupRef) -> Arc<MarkTable> {
    MARKS.get_or_init(g, || {
        let lat = g.lattice();
        let classes = g.slice_classes().classes();
        let c = classes.len();
        let mut rows = vec![vec![0i64; c]; c];
        for (b, cb) in classes.iter().enumerate() {
            let ss = lat.subgroup(cb.s).order();
            let tt = lat.subgroup(cb.t).order();
            let factor = (cb.stabilizer_order / ss) as i64;
            for (a, ca) in classes.iter().enumerate().take(b + 1) {
                if !ss.is_multiple_of(lat.subgroup(ca.s).order()) || !tt.is_multiple_of(lat.subgroup(ca.t).order()) {
                    continue;
                }
                let hits = cb
                    .members
                    .iter()
                    .filter(|&&(t, s)| lat.is_below(ca.s, s as usize) && lat.is_below(ca.t, t as usize))
                    .count() as i64;
                rows[a][b] = factor * hits;
            }
        }
        MarkTable::from_rows(rows)
    })
}

pub fn slice_basis(g: &GroupRef) -> Vec<String> {
    slice_labels(g).to_vec()
}

/// `⟨T,S⟩·⟨V,U⟩ = Σ_{x ∈ S\G/U} ⟨T ∩ xVx⁻¹, S ∩ xUx⁻¹⟩`, as (class, multiplicity).
pub fn basis_product(g: &GroupRef, i: usize, j: usize) -> Vec<(usize, u64)> {
    let lat = g.lattice();
    let sc = g.slice_classes();
    let a = &sc.classes()[i];
    let b = &sc.classes()[j];
    let mut out: BTreeMap<usize, u64> = BTreeMap::new();
    for x in g.double_cosets(lat.subgroup(a.s).bits(), lat.subgroup(b.s).bits()) {
        let t = lat.intersect(a.t, lat.conjugate(x, b.t));
        let s = lat.intersect(a.s, lat.conjugate(x, b.s));
        *out.entry(sc.class_of(t, s).expect("slice")).or_default() += 1;
    }
    out.into_iter().collect()
}

pub fn mult(a: &SliceElt, b: &SliceElt) -> Result<SliceElt> {
    a.same_group(b)?;
    let g = &a.group;
    let mut out = SliceElt::zero(g);
    for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            let xy = x * y;
            for (c, m) in basis_product(g, i, j) {
                out.coeffs[c] += &xy * q(m as i64);
            }
        }
    }
    Ok(out)
}

pub fn marks(a: &SliceElt) -> Vec<Q> {
    mark_table(&a.group).apply(&a.coeffs)
}

pub fn from_marks(g: &GroupRef, v: &[Q]) -> SliceElt {
    SliceElt { group: g.clone(), coeffs: mark_table(g).solve(v) }
}

/// `ξ^G_{T,S} = (1/|N_G(T,S)|) Σ_{U ≤ S ≤ V ≤ T} |U| μ(U,S) μ(V,T) ⟨V,U⟩`.
pub fn xi_idempotent(g: &GroupRef, class: usize) -> SliceElt {
    let lat = g.lattice();
    let sc = g.slice_classes();
    let c = &sc.classes()[class];
    let mo = lat.moebius();
    let mut e = SliceElt::zero(g);
    for (u, mu_us) in mo.column(c.s) {
        if mu_us == 0 {
            continue;
        }
        for (v, mu_vt) in mo.column(c.t) {
            if mu_vt == 0 || !lat.is_below(c.s, v) {
                continue;
            }
            let k = sc.class_of(v, u).expect("U ≤ V");
            e.coeffs[k] += q(lat.subgroup(u).order() as i64 * mu_us * mu_vt);
        }
    }
    let n = q(c.stabilizer_order as i64);
    for x in e.coeffs.iter_mut() {
        if !x.is_zero() {
            *x /= &n;
        }
    }
    e
}

pub fn xi_idempotents(g: &GroupRef) -> Vec<SliceElt> {
    (0..g.slice_classes().len()).map(|c| xi_idempotent(g, c)).collect()
}

/// Image of the basis element `class` under `op`, as (class, multiplicity).
pub fn op_column(op: &BisetOp, class: usize) -> Vec<(usize, u64)> {
    let hom = op.hom();
    let src = op.source();
    let tgt = op.target();
    let slat = src.lattice();
    let tlat = tgt.lattice();
    let tsc = tgt.slice_classes();
    let c = &src.slice_classes().classes()[class];
    let (tb, sb) = (slat.subgroup(c.t).bits(), slat.subgroup(c.s).bits());
    let idx = |bits: &Bits| tlat.index_of(bits).expect("image is a subgroup");
    let pair = |t: Bits, s: Bits| tsc.class_of(idx(&t), idx(&s)).expect("slice");
    match op.kind() {
        OpKind::Ind | OpKind::Def | OpKind::Iso => vec![(pair(hom.image_set(tb), hom.image_set(sb)), 1)],
        OpKind::Inf => vec![(pair(hom.preimage_set(tb), hom.preimage_set(sb)), 1)],
        OpKind::Res => {
            let image = hom.image_set(&Bits::from_iter(tgt.order(), 0..tgt.order()));
            let mut out: BTreeMap<usize, u64> = BTreeMap::new();
            for x in src.double_cosets(&image, sb) {
                let t = slat.subgroup(slat.conjugate(x, c.t)).bits().intersection(&image);
                let s = slat.subgroup(slat.conjugate(x, c.s)).bits().intersection(&image);
                *out.entry(pair(hom.preimage_set(&t), hom.preimage_set(&s))).or_default() += 1;
            }
            out.into_iter().collect()
        }
    }
}

pub fn elementary_op(op: &BisetOp, a: &SliceElt) -> Result<SliceElt> {
    if *a.group != **op.source() {
        return validation(format!("{op} cannot act on Ξ({})", a.group.name()));
    }
    let mut out = SliceElt::zero(op.target());
    for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (c, m) in op_column(op, i) {
            out.coeffs[c] += x * q(m as i64);
        }
    }
    Ok(out)
}

/// `m_{G,S,N} = ([N_G(SN):SN]/|N_G(S)|) Σ |U| μ(U,S) μ(V,G)` over
/// `U ≤ S ≤ V ≤ G` with `VN = G` and `UN = SN`.
pub fn m_slice(g: &GroupRef, s: usize, n: usize) -> Result<Q> {
    let lat = g.lattice();
    if s >= lat.len() {
        return validation(format!("no subgroup {s} in {}", g.name()));
    }
    if n >= lat.len() || !lat.is_normal(n) {
        return validation(format!("subgroup {n} is not normal in {}", g.name()));
    }
    let order = g.order();
    let nn = lat.subgroup(n).order();
    let sn = lat.join(g, s, n);
    let sn_order = lat.subgroup(sn).order();
    let product_order = |x: usize| lat.subgroup(x).order() * nn / lat.subgroup(lat.intersect(x, n)).order();
    let mo = lat.moebius();
    let mut sum = 0i64;
    for (u, mu_us) in mo.column(s) {
        if mu_us == 0 || product_order(u) != sn_order {
            continue;
        }
        for (v, mu_vg) in mo.column(lat.full()) {
            if mu_vg == 0 || !lat.is_below(s, v) || product_order(v) != order {
                continue;
            }
            sum += lat.subgroup(u).order() as i64 * mu_us * mu_vg;
        }
    }
    let num = (lat.normalizer_order(sn) / sn_order) as i64 * sum;
    Ok(Q::new(num.into(), (lat.normalizer_order(s) as i64).into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TSliceReport {
    pub is_t_slice: bool,
    /// Nontrivial normal subgroups with `m_{G,S,N} ≠ 0`, with the constant.
    pub witnesses: Vec<(usize, Q)>,
}

/// Whether `(G,S)` is a T-slice.
pub fn is_t_slice(g: &GroupRef, s: usize) -> Result<TSliceReport> {
    let lat = g.lattice();
    let mut witnesses = Vec::new();
    for n in lat.normal_subgroups().into_iter().filter(|&n| n != 0) {
        let m = m_slice(g, s, n)?;
        if !m.is_zero() {
            witnesses.push((n, m));
        }
    }
    Ok(TSliceReport { is_t_slice: witnesses.is_empty(), witnesses })
}

/// Subgroup-class representatives `S` with `(G,S)` a T-slice.
pub fn t_slices(g: &GroupRef) -> Vec<usize> {
    let lat = g.lattice();
    lat.classes()
        .iter()
        .map(|c| c.rep)
        .filter(|&s| is_t_slice(g, s).expect("valid subgroup").is_t_slice)
        .collect()
}
